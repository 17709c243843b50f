"""Chain diagrams of finite groups: saecular filtrations, coset and normalized factors.

Groups are Cayley tables on 0..k-1 with 0 the identity.  Subgroups are int
bitmasks over the elements, so meet is bitwise and.  Group orders are capped at
``MAX_ORDER``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .diagram import Interval
from .saecular import principal_downset, strict_downset

MAX_ORDER = 512


class OrderCapExceeded(ValueError):
    pass


class GroupError(ValueError):
    """Invalid table, homomorphism, or subdiagram."""


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


class FiniteGroup:
    __slots__ = ("table", "order", "inverse", "_join_cache", "_closure_cache")

    def __init__(self, table: Sequence[Sequence[int]], check: bool = True, seed: int = 0):
        k = len(table)
        if k > MAX_ORDER:
            raise OrderCapExceeded(f"group order {k} exceeds the cap {MAX_ORDER}")
        if k == 0:
            raise GroupError("empty group table")
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = k
        if check:
            self._validate(seed)
        self.inverse = tuple(row.index(0) for row in self.table)
        self._join_cache: dict = {}
        self._closure_cache: dict = {}

    def _validate(self, seed: int) -> None:
        t, k = self.table, self.order
        full = set(range(k))
        for row in t:
            if len(row) != k or set(row) != full:
                raise GroupError("table rows must be permutations of the elements")
        for c in range(k):
            if {t[r][c] for r in range(k)} != full:
                raise GroupError("table columns must be permutations of the elements")
        if any(t[0][x] != x or t[x][0] != x for x in range(k)):
            raise GroupError("element 0 must be the identity")
        if k <= 64:
            triples = itertools.product(range(k), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(k), rng.randrange(k), rng.randrange(k)) for _ in range(200000))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]]) -> FiniteGroup:
        """The permutation group generated by ``gens`` (tuples of images)."""
        deg = len(gens[0]) if gens else 1
        ident = tuple(range(deg))
        elems = [ident]
        seen = {ident: 0}
        i = 0
        while i < len(elems):
            g = elems[i]
            for s in gens:
                h = tuple(s[g[x]] for x in range(deg))
                if h not in seen:
                    if len(elems) >= MAX_ORDER:
                        raise OrderCapExceeded(f"generated group exceeds the cap {MAX_ORDER}")
                    seen[h] = len(elems)
                    elems.append(h)
            i += 1
        # product a*b means "apply b, then a"
        table = [[seen[tuple(a[b[x]] for x in range(deg))] for b in elems] for a in elems]
        return cls(table, check=False)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def closure_mask(self, mask: int) -> int:
        """Mask of the subgroup generated by the elements in ``mask``."""
        hit = self._closure_cache.get(mask)
        if hit is not None:
            return hit
        gens = [g for g in _bits(mask) if g]
        t = self.table
        members = [0]
        out = 1
        i = 0
        while i < len(members):
            x = members[i]
            row = t[x]
            for s in gens:
                y = row[s]
                if not (out >> y) & 1:
                    out |= 1 << y
                    members.append(y)
            i += 1
        self._closure_cache[mask] = out
        return out


@dataclass(frozen=True)
class GSubgroup:
    parent: FiniteGroup
    mask: int

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def elements(self) -> list[int]:
        return list(_bits(self.mask))

    def contains(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __le__(self, other: GSubgroup) -> bool:
        return self.mask & ~other.mask == 0


def trivial(G: FiniteGroup) -> GSubgroup:
    return GSubgroup(G, 1)


def whole(G: FiniteGroup) -> GSubgroup:
    return GSubgroup(G, G.full_mask)


def closure(G: FiniteGroup, gens: Iterable[int]) -> GSubgroup:
    m = 0
    for g in gens:
        if not 0 <= g < G.order:
            raise GroupError(f"element {g} outside the group")
        m |= 1 << g
    return GSubgroup(G, G.closure_mask(m))


def g_meet(a: GSubgroup, b: GSubgroup) -> GSubgroup:
    return GSubgroup(a.parent, a.mask & b.mask)


def g_join(a: GSubgroup, b: GSubgroup) -> GSubgroup:
    if a.mask & ~b.mask == 0:
        return b
    if b.mask & ~a.mask == 0:
        return a
    return GSubgroup(a.parent, a.parent.closure_mask(a.mask | b.mask))


def normal_closure(h: GSubgroup, within: GSubgroup) -> GSubgroup:
    """Smallest normal subgroup of ``within`` containing h."""
    if not h <= within:
        raise GroupError("subgroup is not contained in the ambient subgroup")
    G = h.parent
    t, inv = G.table, G.inverse
    m = 0
    hs = h.elements()
    for x in within.elements():
        xi = inv[x]
        for y in hs:
            m |= 1 << t[t[x][y]][xi]
    return GSubgroup(G, G.closure_mask(m))


def is_normal(h: GSubgroup, within: GSubgroup) -> bool:
    return h <= within and normal_closure(h, within).mask == h.mask


def left_cosets(num: GSubgroup, den: GSubgroup) -> list[int]:
    """Left cosets x*den inside num, as masks, the coset of the identity first."""
    G = num.parent
    t = G.table
    dens = den.elements()
    left = num.mask
    out = []
    for x in [0] + num.elements():
        if not (left >> x) & 1:
            continue
        c = 0
        for h in dens:
            c |= 1 << t[x][h]
        out.append(c)
        left &= ~c
    return out


# ---------------------------------------------------------------------------
# homomorphisms and diagrams


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.order:
            raise GroupError("homomorphism needs one image per source element")
        if any(not 0 <= y < self.target.order for y in self.images):
            raise GroupError("image outside the target group")

    def check(self) -> None:
        s, t, f = self.source.table, self.target.table, self.images
        if f[0] != 0:
            raise GroupError("homomorphism must send identity to identity")
        for a in range(self.source.order):
            fa = f[a]
            row, trow = s[a], t[fa]
            for b in range(self.source.order):
                if f[row[b]] != trow[f[b]]:
                    raise GroupError(f"map is not a homomorphism at ({a}, {b})")

    def then(self, g: GroupHom) -> GroupHom:
        return GroupHom(self.source, g.target, tuple(g.images[x] for x in self.images))


def g_image(f: GroupHom, h: GSubgroup) -> GSubgroup:
    m = 0
    for x in h.elements():
        m |= 1 << f.images[x]
    return GSubgroup(f.target, m)


def g_preimage(f: GroupHom, h: GSubgroup) -> GSubgroup:
    m = 0
    for x, y in enumerate(f.images):
        if (h.mask >> y) & 1:
            m |= 1 << x
    return GSubgroup(f.source, m)


def g_kernel(f: GroupHom) -> GSubgroup:
    return g_preimage(f, trivial(f.target))


class GroupDiagram:
    __slots__ = ("groups", "maps", "_composites")

    def __init__(self, groups: Sequence[FiniteGroup], maps: Sequence[GroupHom], check: bool = True):
        if not groups:
            raise GroupError("empty diagram")
        if len(maps) != len(groups) - 1:
            raise GroupError(f"{len(groups)} groups need {len(groups) - 1} maps")
        for a, f in enumerate(maps):
            if f.source is not groups[a] and f.source != groups[a]:
                raise GroupError(f"map {a + 1} has the wrong source")
            if f.target is not groups[a + 1] and f.target != groups[a + 1]:
                raise GroupError(f"map {a + 1} has the wrong target")
            if check:
                f.check()
        self.groups = tuple(groups)
        self.maps = tuple(maps)
        self._composites: dict = {}

    @property
    def length(self) -> int:
        return len(self.groups)

    def composite(self, a: int, b: int) -> GroupHom:
        if not 1 <= a <= b <= self.length:
            raise GroupError(f"no map from {a} to {b}")
        key = (a, b)
        f = self._composites.get(key)
        if f is None:
            if a == b:
                G = self.groups[a - 1]
                f = GroupHom(G, G, tuple(range(G.order)))
            else:
                f = self.composite(a, b - 1).then(self.maps[b - 2])
            self._composites[key] = f
        return f

    def full(self) -> GSubDiagram:
        return GSubDiagram(self, tuple(whole(G).mask for G in self.groups))

    def zero(self) -> GSubDiagram:
        return GSubDiagram(self, tuple(1 for _ in self.groups))


@dataclass(frozen=True)
class GSubDiagram:
    parent: GroupDiagram = field(compare=False, hash=False)
    masks: tuple = ()

    def part(self, a: int) -> GSubgroup:
        return GSubgroup(self.parent.groups[a - 1], self.masks[a - 1])

    def __le__(self, other: GSubDiagram) -> bool:
        return all(x & ~y == 0 for x, y in zip(self.masks, other.masks))

    def meet(self, other: GSubDiagram) -> GSubDiagram:
        return GSubDiagram(self.parent, tuple(x & y for x, y in zip(self.masks, other.masks)))

    def join(self, other: GSubDiagram) -> GSubDiagram:
        gs = self.parent.groups
        return GSubDiagram(self.parent, tuple(
            x if y & ~x == 0 else y if x & ~y == 0 else G.closure_mask(x | y)
            for G, x, y in zip(gs, self.masks, other.masks)))

    def is_subdiagram(self) -> bool:
        d = self.parent
        return all(g_image(f, self.part(a + 1)).mask & ~self.masks[a + 1] == 0
                   for a, f in enumerate(d.maps))


# ---------------------------------------------------------------------------
# saecular filtrations and the generated sublattice


@dataclass
class GSaecular:
    diagram: GroupDiagram
    khat: dict
    kernel: dict
    lattice: list  # elements of the generated sublattice
    distributive: bool
    failures: list


def g_filtrations(d: GroupDiagram) -> tuple[dict, dict]:
    n = d.length
    khat, kernel = {}, {}
    for p in range(1, n + 1):
        masks = []
        for a in range(1, n + 1):
            if a <= p:
                masks.append(d.groups[a - 1].full_mask)
            else:
                masks.append(g_image(d.composite(p, a), whole(d.groups[p - 1])).mask)
        khat[p] = GSubDiagram(d, tuple(masks))
    for q in range(1, n + 1):
        masks = []
        for a in range(1, n + 1):
            masks.append(g_kernel(d.composite(a, q)).mask if a < q else 1)
        kernel[q] = GSubDiagram(d, tuple(masks))
    kernel[n + 1] = d.full()
    return khat, kernel


def g_saecular(d: GroupDiagram, max_size: int = 4000) -> GSaecular:
    """Filtrations plus the sublattice they generate, checked for distributivity."""
    khat, kernel = g_filtrations(d)
    elems = {d.zero().masks: d.zero(), d.full().masks: d.full()}
    for s in list(khat.values()) + list(kernel.values()):
        elems[s.masks] = s
    frontier = list(elems.values())
    while frontier:
        new = []
        current = list(elems.values())
        for x in frontier:
            for y in current:
                for z in (x.meet(y), x.join(y)):
                    if z.masks not in elems:
                        elems[z.masks] = z
                        new.append(z)
        if len(elems) > max_size:
            raise GroupError("generated sublattice is too large")
        frontier = new
    lat = sorted(elems.values(), key=lambda s: s.masks)
    failures = []
    for x, y, z in itertools.product(lat, repeat=3):
        if x.meet(y.join(z)).masks != x.meet(y).join(x.meet(z)).masks:
            failures.append((x.masks, y.masks, z.masks))
            if len(failures) >= 10:
                break
    return GSaecular(d, khat, kernel, lat, not failures, failures)


def g_cdf(d: GroupDiagram, khat: dict | None = None, kernel: dict | None = None) -> dict:
    if khat is None or kernel is None:
        khat, kernel = g_filtrations(d)
    n = d.length
    zero = d.zero()
    grid = {}
    for p in range(0, n + 1):
        for q in range(0, n + 2):
            grid[(p, q)] = zero if p == 0 or q == 0 else khat[p].meet(kernel[q])
    return grid


# ---------------------------------------------------------------------------
# factors


def _downset_value(grid: dict, d: GroupDiagram, ivs) -> GSubDiagram:
    out = d.zero()
    for p, q in ivs:
        out = out.join(grid[(p, q)])
    return out


def _natural(d: GroupDiagram, S: GSubDiagram, khat: dict, kernel: dict) -> bool:
    n = d.length
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            f = d.composite(a, b)
            if g_image(f, S.part(a)).mask != S.masks[b - 1] & khat[a].masks[b - 1]:
                return False
            want = d.groups[a - 1].closure_mask(S.masks[a - 1] | kernel[b].masks[a - 1])
            if g_preimage(f, S.part(b)).mask != want:
                return False
    return True


@dataclass
class CosetFactor:
    support: tuple  # (p, q)
    num: GSubDiagram
    den: GSubDiagram
    indices: list  # [num_a : den_a] for a = 1..n
    cosets: list  # per index, list of coset masks (identity coset first)
    maps: list  # per step a -> a+1, coset position -> coset position
    natural: bool
    interval_ok: bool


def _induced(d: GroupDiagram, cosets: list, a: int) -> list:
    """Where f(a, a+1) sends each coset at a, as positions of cosets at a+1."""
    f = d.maps[a - 1]
    pos = {}
    for i, c in enumerate(cosets[a]):
        for x in _bits(c):
            pos[x] = i
    out = []
    for c in cosets[a - 1]:
        x = next(_bits(c))
        out.append(pos.get(f.images[x], -1))
    return out


def _quotient_factor(d: GroupDiagram, num: GSubDiagram, den: GSubDiagram, iv: tuple):
    n = d.length
    cosets = [left_cosets(num.part(a), den.part(a)) for a in range(1, n + 1)]
    indices = [len(c) for c in cosets]
    maps = [_induced(d, cosets, a) for a in range(1, n)]
    p, q = iv
    ok = all((indices[a - 1] > 1) == (p <= a < q) for a in range(1, n + 1)) or all(i == 1 for i in indices)
    if ok:
        for a in range(p, min(q, n + 1) - 1):
            m = maps[a - 1]
            if len(m) != indices[a] or sorted(m) != list(range(indices[a])):
                ok = False
    return cosets, indices, maps, ok


def _pairs(iv: tuple) -> tuple[list, list]:
    I = Interval(*iv)
    return ([(x.p, x.q) for x in principal_downset(I)], [(x.p, x.q) for x in strict_downset(I)])


def coset_barcode(d: GroupDiagram) -> dict:
    """Left-coset factors A[p][q] / (A[p][q-1] | A[p-1][q]) for every interval with nonzero index."""
    khat, kernel = g_filtrations(d)
    grid = g_cdf(d, khat, kernel)
    n = d.length
    out = {}
    for p in range(1, n + 1):
        for q in range(p + 1, n + 2):
            num = grid[(p, q)]
            den = grid[(p, q - 1)].join(grid[(p - 1, q)])
            cosets, indices, maps, ok = _quotient_factor(d, num, den, (p, q))
            if all(i == 1 for i in indices):
                continue
            down, strict = _pairs((p, q))
            natural = (_natural(d, _downset_value(grid, d, down), khat, kernel)
                       and _natural(d, _downset_value(grid, d, strict), khat, kernel))
            out[(p, q)] = CosetFactor((p, q), num, den, indices, cosets, maps, natural, ok)
    return out


@dataclass
class NormalizedFactor:
    support: tuple
    num: GSubDiagram
    den: GSubDiagram  # normal closure of the raw denominator inside num
    orders: list  # |num_a / den_a|
    den_was_normal: list  # whether the raw denominator was already normal, per index
    interval_ok: bool


def normalized_barcode(d: GroupDiagram) -> dict:
    """Factors num / ncl(den), genuine quotient groups at each index."""
    khat, kernel = g_filtrations(d)
    grid = g_cdf(d, khat, kernel)
    n = d.length
    out = {}
    for p in range(1, n + 1):
        for q in range(p + 1, n + 2):
            num = grid[(p, q)]
            raw = grid[(p, q - 1)].join(grid[(p - 1, q)])
            ncl = GSubDiagram(d, tuple(normal_closure(raw.part(a), num.part(a)).mask
                                       for a in range(1, n + 1)))
            cosets, indices, maps, ok = _quotient_factor(d, num, ncl, (p, q))
            if all(i == 1 for i in indices):
                continue
            was_normal = [ncl.masks[a] == raw.masks[a] for a in range(n)]
            out[(p, q)] = NormalizedFactor((p, q), num, ncl, indices, was_normal, ok)
    return out


def product_formula_holds(h: GSubgroup, k: GSubgroup) -> bool | None:
    """For permuting h, k: the map h/(h & k) -> (h | k)/k on left cosets is a bijection.

    Returns None when h and k do not permute.
    """
    G = h.parent
    t = G.table
    hk = 0
    for x in h.elements():
        for y in k.elements():
            hk |= 1 << t[x][y]
    kh = 0
    for y in k.elements():
        for x in h.elements():
            kh |= 1 << t[y][x]
    if hk != kh:
        return None
    j = g_join(h, k)
    src = left_cosets(h, g_meet(h, k))
    tgt = left_cosets(j, k)
    pos = {}
    for i, c in enumerate(tgt):
        for x in _bits(c):
            pos[x] = i
    images = [pos[next(_bits(c))] for c in src]
    return sorted(images) == list(range(len(tgt)))


# ---------------------------------------------------------------------------
# sample groups


def _cyc(n):
    return [tuple((i + 1) % n for i in range(n))]


def _dihedral(n):
    return [tuple((i + 1) % n for i in range(n)), tuple((-i) % n for i in range(n))]


def _product(a, b):
    da, db = len(a[0]), len(b[0])
    out = [tuple(list(g) + list(range(da, da + db))) for g in a]
    out += [tuple(list(range(da)) + [da + x for x in g]) for g in b]
    return out


SAMPLE_GROUPS = {
    "C1": [(0,)],
    "C2": _cyc(2),
    "C3": _cyc(3),
    "C4": _cyc(4),
    "C5": _cyc(5),
    "C6": _cyc(6),
    "C8": _cyc(8),
    "C2xC2": _product(_cyc(2), _cyc(2)),
    "C2xC4": _product(_cyc(2), _cyc(4)),
    "C2xC2xC2": _product(_product(_cyc(2), _cyc(2)), _cyc(2)),
    "C3xC3": _product(_cyc(3), _cyc(3)),
    "S3": _dihedral(3),
    "D4": _dihedral(4),
    "D5": _dihedral(5),
    "D6": _dihedral(6),
    "Q8": [(1, 2, 3, 0, 5, 6, 7, 4), (4, 7, 6, 5, 2, 1, 0, 3)],
    "A4": [(1, 2, 0, 3), (1, 0, 3, 2)],
    "S4": [(1, 2, 3, 0), (1, 0, 2, 3)],
    "C2xS3": _product(_cyc(2), _dihedral(3)),
    "C12": _cyc(12),
}


def sample_group(name: str) -> FiniteGroup:
    return FiniteGroup.from_permutations(SAMPLE_GROUPS[name])


def _generators(G: FiniteGroup) -> list[int]:
    """A small generating set found greedily."""
    gens = []
    cur = 1
    for x in range(1, G.order):
        if not (cur >> x) & 1:
            gens.append(x)
            cur = G.closure_mask(cur | (1 << x))
            if cur == G.full_mask:
                break
    return gens


def extend_hom(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], imgs: Sequence[int]) -> GroupHom | None:
    """The homomorphism with the given generator images, or None if there is none."""
    f = [-1] * G.order
    f[0] = 0
    queue = [0]
    i = 0
    while i < len(queue):
        g = queue[i]
        i += 1
        for s, t in zip(gens, imgs):
            x = G.table[g][s]
            y = H.table[f[g]][t]
            if f[x] < 0:
                f[x] = y
                queue.append(x)
            elif f[x] != y:
                return None
    if min(f) < 0:
        return None
    return GroupHom(G, H, tuple(f))


def random_hom(G: FiniteGroup, H: FiniteGroup, rng: random.Random, tries: int = 40) -> GroupHom:
    gens = _generators(G)
    for _ in range(tries):
        imgs = [rng.randrange(H.order) if rng.random() < 0.85 else 0 for _ in gens]
        f = extend_hom(G, H, gens, imgs)
        if f is not None:
            return f
    return GroupHom(G, H, (0,) * G.order)


def random_group_diagram(rng: random.Random, max_length: int = 4) -> GroupDiagram:
    names = sorted(SAMPLE_GROUPS)
    n = rng.randint(1, max_length)
    groups = [sample_group(rng.choice(names)) for _ in range(n)]
    maps = [random_hom(groups[a], groups[a + 1], rng) for a in range(n - 1)]
    return GroupDiagram(groups, maps)


def s3_chain() -> GroupDiagram:
    """C3 -> S3 -> C2: inclusion of the rotations, then the sign map."""
    S3 = sample_group("S3")
    C3 = sample_group("C3")
    C2 = sample_group("C2")
    r = 1  # the 3-cycle generator sits at index 1 in the generated table
    inc = extend_hom(C3, S3, _generators(C3), [r])
    sign = extend_hom(S3, C2, _generators(S3), [0 if S3.closure_mask(1 << g).bit_count() == 3 else 1
                                                 for g in _generators(S3)])
    return GroupDiagram([C3, S3, C2], [inc, sign])
