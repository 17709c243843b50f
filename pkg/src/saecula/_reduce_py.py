"""Pure-Python column reduction over F_p (fallback for the compiled kernel).

Input and output use compressed sparse columns: ``indptr``, ``indices``,
``data``.  Columns are reduced left to right; a column's low is its largest
nonzero row.
"""


def reduce_mod_p(nrows, indptr, indices, data, p, track):
    ncols = len(indptr) - 1
    pivot_of = {}
    piv_inv = {}
    reduced = []
    vcols = []
    lows = []
    for j in range(ncols):
        col = {}
        for k in range(indptr[j], indptr[j + 1]):
            v = data[k] % p
            if v:
                r = indices[k]
                col[r] = (col.get(r, 0) + v) % p
                if not col[r]:
                    del col[r]
        vec = {j: 1} if track else None
        while col:
            low = max(col)
            piv = pivot_of.get(low)
            if piv is None:
                break
            f = col[low] * piv_inv[piv] % p
            for r, x in reduced[piv].items():
                y = (col.get(r, 0) - f * x) % p
                if y:
                    col[r] = y
                else:
                    col.pop(r, None)
            if track:
                for r, x in vcols[piv].items():
                    y = (vec.get(r, 0) - f * x) % p
                    if y:
                        vec[r] = y
                    else:
                        vec.pop(r, None)
        if col:
            low = max(col)
            pivot_of[low] = j
            piv_inv[j] = pow(col[low], -1, p)
            lows.append(low)
        else:
            lows.append(-1)
        reduced.append(col)
        vcols.append(vec)
    return lows, _to_csc(reduced), (_to_csc(vcols) if track else None)


def _to_csc(cols):
    indptr = [0]
    indices = []
    data = []
    for c in cols:
        for r in sorted(c):
            indices.append(r)
            data.append(c[r])
        indptr.append(len(indices))
    return indptr, indices, data
