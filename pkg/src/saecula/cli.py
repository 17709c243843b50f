"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 schema error, 3 validation
failure, 4 naturality failure, 5 enumeration over infinite-length coefficients,
6 group order cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Any

from . import io
from .abgrp import jh_vector, quotient_shape
from .diagram import DiagramError, Interval
from .fingroup import (
    GroupError,
    OrderCapExceeded,
    coset_barcode,
    g_saecular,
    is_normal,
    normalized_barcode,
    whole,
)
from .homology import ComplexError, homology_barcode
from .saecular import (
    NaturalityFailure,
    all_intervals,
    barcode_from_table,
    cdf,
    random_linearization,
    saecular_filtrations,
    subsaecular_series,
    type_b_pd,
)
from .spectral import InfiniteLengthError, ls_enumeration_check, ls_terms

EXIT_OK, EXIT_CHECK, EXIT_SCHEMA, EXIT_VALIDATION, EXIT_NATURALITY, EXIT_INFINITE, EXIT_ORDER = range(7)


# ---------------------------------------------------------------------------
# payload builders


def _parts(sub) -> list:
    return [io.shape_out(quotient_shape(s, s.parent.zero())) for s in sub.parts]


def _vec(v) -> list:
    return [io.scalar_out(x) for x in v]


def _sparse(ch: dict) -> list:
    return [[k, io.scalar_out(x)] for k, x in ch.items()]


def _jh_out(jh) -> dict:
    return {"free_rank": jh.free_rank, "simple": [[k, v] for k, v in jh.torsion]}


def abelian_barcode_payload(d) -> dict:
    table = cdf(saecular_filtrations(d))
    bars = barcode_from_table(table)
    n = d.length
    return {
        "coeff": str(d.coeff),
        "length": n,
        "barcode": [
            {"interval": io.interval_out(iv, n), **io.shape_out(f.shape),
             "generators": [_vec(g) for g in f.generators]}
            for iv, f in bars.items()
        ],
    }


def _labels(table) -> tuple[dict, list]:
    """Name grid values: L_k for the k-th reduced step of the lexicographic series, M_j otherwise."""
    names: dict = {}
    zero = table.diagram.zero()
    names[zero] = "0"
    legend = []
    for k, step in enumerate(subsaecular_series(table).reduced, 1):
        if step.sub not in names:
            names[step.sub] = f"L{k}"
            legend.append({"label": f"L{k}", "parts": _parts(step.sub)})
    j = 0
    for p in range(table.n + 2):
        for q in range(table.n + 2):
            s = table[(p, q)]
            if s not in names:
                j += 1
                names[s] = f"M{j}"
                legend.append({"label": f"M{j}", "parts": _parts(s)})
    return names, legend


def abelian_cdf_payload(d) -> dict:
    table = cdf(saecular_filtrations(d))
    names, legend = _labels(table)
    grid = []
    for q in range(table.n + 1, -1, -1):
        for p in range(table.n + 2):
            s = table[(p, q)]
            grid.append({"p": p, "q": q, "label": names[s], "parts": _parts(s)})
    return {"coeff": str(d.coeff), "length": d.length, "grid": grid, "legend": legend}


def abelian_series_payload(d, linearization: str, seed: int) -> dict:
    table = cdf(saecular_filtrations(d))
    lin = None
    if linearization == "random":
        lin = random_linearization(d.length, random.Random(seed))
    s = subsaecular_series(table, lin)
    n = d.length
    return {
        "coeff": str(d.coeff),
        "length": n,
        "linearization": [io.interval_out(iv, n) for iv in s.linearization],
        "steps": [
            {"label": f"L{k}", "interval": io.interval_out(st.interval, n), **io.shape_out(st.shape),
             "parts": _parts(st.sub)}
            for k, st in enumerate(s.reduced, 1)
        ],
    }


def abelian_pdb_payload(d) -> dict:
    pd = type_b_pd(d, cross_check=True)
    n = d.length
    return {
        "coeff": str(d.coeff),
        "length": n,
        "pd": [{"interval": io.interval_out(iv, n), **_jh_out(v)} for iv, v in pd.items()],
        "cross_check": "pass",
    }


def homology_barcode_payload(X, m: int, method: str) -> dict:
    bars = homology_barcode(X, m, method)
    out: dict[str, Any] = {"coeff": str(X.coeff), "dim": m, "length": X.n}
    if X.grade_values is not None:
        out["grade_values"] = list(X.grade_values)
    out["barcode"] = [
        {"interval": io.interval_out(iv, X.n), **io.shape_out(f.shape),
         "generators": [_sparse(g) for g in f.generators], "representative": _sparse(f.representative)}
        for iv, f in bars.items()
    ]
    return out


def homology_spectral_payload(X, page: int, dim: int | None) -> dict:
    degrees = [dim] if dim is not None else list(range(0, X.max_dim + 1))
    terms = []
    for m in degrees:
        for p in range(0, X.n + 1):
            t = ls_terms(X, p, m - p, page)
            terms.append({"p": p, "q": m - p, "degree": m, "z": io.shape_out(t.z_shape),
                          "b": io.shape_out(t.b_shape), "e": io.shape_out(t.e_shape)})
    return {"coeff": str(X.coeff), "length": X.n, "page": page, "terms": terms}


def homology_enumcheck_payload(X, max_page: int | None) -> dict:
    rep = ls_enumeration_check(X, max_page)
    return {
        "coeff": str(X.coeff),
        "checked": rep.checked,
        "result": "pass" if rep.ok else "fail",
        "failures": [
            {"term": k, "degree": m, "p": p, "q": m - p, "r": r, "expected": w, "got": g}
            for k, m, p, r, w, g in rep.failures
        ],
    }


def group_barcode_payload(d) -> dict:
    n = d.length
    return {
        "length": n,
        "barcode": [
            {"interval": io.interval_out(Interval(*k), n), "cardinality": f.indices[k[0] - 1],
             "indices": f.indices, "natural": f.natural, "interval_ok": f.interval_ok}
            for k, f in coset_barcode(d).items()
        ],
    }


def group_normalized_payload(d) -> dict:
    n = d.length
    return {
        "length": n,
        "barcode": [
            {"interval": io.interval_out(Interval(*k), n), "order": f.orders[k[0] - 1],
             "orders": f.orders, "den_was_normal": f.den_was_normal, "interval_ok": f.interval_ok}
            for k, f in normalized_barcode(d).items()
        ],
    }


def group_lattice_payload(d) -> dict:
    g = g_saecular(d)
    normal = all(
        is_normal(k.part(a), whole(d.groups[a - 1]))
        for k in g.kernel.values() for a in range(1, d.length + 1)
    )
    return {
        "length": d.length,
        "size": len(g.lattice),
        "elements": [[x.bit_count() for x in s.masks] for s in g.lattice],
        "distributive": "pass" if g.distributive else "fail",
        "kernels_normal": "pass" if normal else "fail",
    }


# ---------------------------------------------------------------------------
# table renderers (built only from payloads)


def _shape_text(s: dict, free: str = "Z") -> str:
    parts = []
    if s["free_rank"]:
        parts.append(free if s["free_rank"] == 1 else f"{free}^{s['free_rank']}")
    parts += [f"Z/{d}" for d in s["torsion"]]
    return " + ".join(parts) or "0"


def _iv_text(iv: list) -> str:
    return f"[{iv[0]},{iv[1]})"


def render_table(kind: str, payload: dict) -> str:
    lines = []
    free = "k" if payload.get("coeff", "z").split(":")[0] in ("q", "fp") else "Z"
    shape = lambda x: _shape_text(x, free)  # noqa: E731
    if kind in ("abelian.barcode", "homology.barcode"):
        for b in payload["barcode"]:
            gens = b["generators"]
            lines.append(f"{_iv_text(b['interval']):<12} {shape(b):<20} {gens}")
    elif kind == "abelian.cdf":
        n = payload["length"]
        cells = {(c["p"], c["q"]): c["label"] for c in payload["grid"]}
        width = max(4, *(len(v) for v in cells.values())) + 1
        lines.append("q\\p " + "".join(f"{p:>{width}}" for p in range(n + 2)))
        for q in range(n + 1, -1, -1):
            lines.append(f"{q:>3} " + "".join(f"{cells[(p, q)]:>{width}}" for p in range(n + 2)))
        lines.append("")
        for e in payload["legend"]:
            lines.append(f"{e['label']} = (" + ", ".join(shape(s) for s in e["parts"]) + ")")
    elif kind == "abelian.series":
        for s in payload["steps"]:
            lines.append(f"{s['label']:<4} {_iv_text(s['interval']):<10} {shape(s):<12} ("
                         + ", ".join(shape(x) for x in s["parts"]) + ")")
    elif kind == "abelian.pdb":
        for e in payload["pd"]:
            simple = " ".join(f"{k}^{v}" for k, v in e["simple"])
            lines.append(f"{_iv_text(e['interval']):<12} {simple}")
        lines.append(f"cross-check: {payload['cross_check']}")
    elif kind == "homology.spectral":
        lines.append(f"page {payload['page']}")
        for t in payload["terms"]:
            lines.append(f"p={t['p']} q={t['q']}  Z: {shape(t['z'])}  B: {shape(t['b'])}"
                         f"  E: {shape(t['e'])}")
    elif kind == "homology.enumcheck":
        lines.append(f"{payload['result']} ({payload['checked']} terms)")
        for f in payload["failures"]:
            lines.append(f"FAIL {f['term']} degree={f['degree']} p={f['p']} r={f['r']}: "
                         f"expected {f['expected']}, got {f['got']}")
    elif kind == "group.barcode":
        for b in payload["barcode"]:
            lines.append(f"{_iv_text(b['interval']):<10} |cosets|={b['cardinality']:<4} "
                         f"indices={b['indices']} natural={b['natural']} interval={b['interval_ok']}")
    elif kind == "group.normalized":
        for b in payload["barcode"]:
            lines.append(f"{_iv_text(b['interval']):<10} order={b['order']:<4} orders={b['orders']} "
                         f"interval={b['interval_ok']}")
    elif kind == "group.lattice":
        lines.append(f"generated sublattice: {payload['size']} elements")
        lines.append(f"distributivity: {payload['distributive']}")
        lines.append(f"kernel filtrations normal: {payload['kernels_normal']}")
    elif kind == "check":
        for r in payload["suites"]:
            lines.append(f"{'PASS' if r['pass'] else 'FAIL'} {r['name']} ({r['cases']} cases)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# property suites


def run_checks(seed: int, count: int) -> dict:
    from .homology import homology_barcode as hb
    from .samples import random_chain_diagram, random_simplicial_complex
    from .fingroup import random_group_diagram

    rng = random.Random(seed)
    suites = []
    ok = True
    for _ in range(count):
        d = random_chain_diagram(rng, max_length=5, max_rank=3, finite=True)
        try:
            type_b_pd(d, cross_check=True)
        except NaturalityFailure:
            ok = False
    suites.append({"name": "moebius-inversion-vs-factors", "cases": count, "pass": ok})
    ok = True
    for _ in range(count):
        d = random_chain_diagram(rng, max_length=5, max_rank=3)
        table = cdf(saecular_filtrations(d))
        base = sorted((st.interval, st.shape) for st in subsaecular_series(table).reduced)
        lin = random_linearization(d.length, rng)
        other = sorted((st.interval, st.shape) for st in subsaecular_series(table, lin).reduced)
        ok &= base == other
    suites.append({"name": "linearization-independence", "cases": count, "pass": ok})
    ok = True
    for _ in range(count):
        X = random_simplicial_complex(rng, rng.choice(["fp:2", "fp:3", "z"]), vertices=6, max_dim=2)
        for m in range(0, 2):
            a = {iv: f.shape for iv, f in hb(X, m, "lattice").items()}
            b = {iv: f.shape for iv, f in hb(X, m, "sweep").items()}
            ok &= a == b
    suites.append({"name": "homology-lattice-vs-sweep", "cases": count, "pass": ok})
    ok = True
    for _ in range(count):
        ok &= g_saecular(random_group_diagram(rng)).distributive
    suites.append({"name": "group-distributivity", "cases": count, "pass": ok})
    return {"seed": seed, "suites": suites}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="saecula", description="Saecular barcodes of chain diagrams, "
                                 "filtered complexes and finite group chains.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "table"], default="json")

    ab = sub.add_parser("abelian", help="chain diagrams of abelian groups or vector spaces")
    ab.add_argument("sub", choices=["barcode", "cdf", "series", "pdb"])
    ab.add_argument("input")
    ab.add_argument("--coeff", help="override the coefficient domain (z, q, fp:<p>)")
    ab.add_argument("--linearization", choices=["lex", "random"], default="lex")
    ab.add_argument("--seed", type=int, default=0)
    common(ab)

    ho = sub.add_parser("homology", help="filtered cell complexes")
    ho.add_argument("sub", choices=["barcode", "spectral", "enumcheck"])
    ho.add_argument("input")
    ho.add_argument("--dim", type=int, default=None)
    ho.add_argument("--page", type=int, default=1)
    ho.add_argument("--coeff", help="override the coefficient domain (z, q, fp:<p>, zmod:<N>)")
    ho.add_argument("--method", choices=["auto", "lattice", "sweep"], default="auto")
    common(ho)

    gr = sub.add_parser("group", help="chains of finite groups")
    gr.add_argument("sub", choices=["barcode", "normalized", "lattice"])
    gr.add_argument("input")
    common(gr)

    ck = sub.add_parser("check", help="randomized property suites")
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--count", type=int, default=20)
    common(ck)
    return ap


def _dispatch(args) -> tuple[str, dict, int]:
    if args.command == "abelian":
        d = io.parse_diagram(io.load_json(args.input), args.coeff)
        if args.sub == "barcode":
            return "abelian.barcode", abelian_barcode_payload(d), EXIT_OK
        if args.sub == "cdf":
            return "abelian.cdf", abelian_cdf_payload(d), EXIT_OK
        if args.sub == "series":
            return "abelian.series", abelian_series_payload(d, args.linearization, args.seed), EXIT_OK
        return "abelian.pdb", abelian_pdb_payload(d), EXIT_OK
    if args.command == "homology":
        X = io.parse_complex(io.load_json(args.input), args.coeff)
        if args.sub == "barcode":
            m = 1 if args.dim is None else args.dim
            return "homology.barcode", homology_barcode_payload(X, m, args.method), EXIT_OK
        if args.sub == "spectral":
            return "homology.spectral", homology_spectral_payload(X, args.page, args.dim), EXIT_OK
        payload = homology_enumcheck_payload(X, None)
        return "homology.enumcheck", payload, EXIT_OK if payload["result"] == "pass" else EXIT_CHECK
    if args.command == "group":
        d = io.parse_group_diagram(io.load_json(args.input))
        if args.sub == "barcode":
            return "group.barcode", group_barcode_payload(d), EXIT_OK
        if args.sub == "normalized":
            return "group.normalized", group_normalized_payload(d), EXIT_OK
        payload = group_lattice_payload(d)
        return "group.lattice", payload, EXIT_OK if payload["distributive"] == "pass" else EXIT_CHECK
    payload = run_checks(args.seed, args.count)
    return "check", payload, EXIT_OK if all(s["pass"] for s in payload["suites"]) else EXIT_CHECK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        kind, payload, code = _dispatch(args)
    except io.SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except OrderCapExceeded as e:
        print(f"order cap exceeded: {e}", file=sys.stderr)
        return EXIT_ORDER
    except InfiniteLengthError as e:
        print(f"infinite length: {e}", file=sys.stderr)
        return EXIT_INFINITE
    except NaturalityFailure as e:
        print(f"naturality failure: {e}", file=sys.stderr)
        return EXIT_NATURALITY
    except (io.ValidationError, ComplexError, GroupError, DiagramError) as e:
        print(f"validation failure: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.format == "json":
        print(io.dumps(payload))
    else:
        print(render_table(kind, payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
