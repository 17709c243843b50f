# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled column reduction over F_p with a dense accumulator."""

from libcpp.vector cimport vector


cdef long long _inv(long long a, long long p):
    cdef long long t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def reduce_mod_p(long long nrows, indptr, indices, data, long long p, bint track):
    cdef long long ncols = len(indptr) - 1
    cdef vector[long long] ip = indptr
    cdef vector[long long] ix = indices
    cdef vector[long long] dv = data
    cdef vector[long long] acc, vacc, pivot_of, low_inv
    cdef vector[long long] r_ptr, r_idx, r_val, v_ptr, v_idx, v_val, lows
    acc.resize(nrows, 0)
    vacc.resize(ncols if track else 0, 0)
    pivot_of.resize(nrows, -1)
    low_inv.resize(ncols, 0)
    cdef long long j, k, r, lo, mn, piv, f, x, vmin, vmax, start, end
    r_ptr.push_back(0)
    v_ptr.push_back(0)
    for j in range(ncols):
        lo = -1
        mn = nrows
        for k in range(ip[j], ip[j + 1]):
            r = ix[k]
            acc[r] = (acc[r] + dv[k] % p + p) % p
            if r > lo:
                lo = r
            if r < mn:
                mn = r
        if track:
            vacc[j] = 1
            vmin = j
            vmax = j
        while lo >= 0:
            while lo >= mn and acc[lo] == 0:
                lo -= 1
            if lo < mn:
                lo = -1
                break
            piv = pivot_of[lo]
            if piv < 0:
                break
            f = acc[lo] * low_inv[piv] % p
            f = p - f
            start = r_ptr[piv]
            end = r_ptr[piv + 1]
            for k in range(start, end):
                r = r_idx[k]
                acc[r] = (acc[r] + f * r_val[k]) % p
                if r < mn:
                    mn = r
            if track:
                start = v_ptr[piv]
                end = v_ptr[piv + 1]
                for k in range(start, end):
                    r = v_idx[k]
                    vacc[r] = (vacc[r] + f * v_val[k]) % p
                    if r < vmin:
                        vmin = r
                    if r > vmax:
                        vmax = r
        if lo >= 0:
            for r in range(mn, lo + 1):
                x = acc[r]
                if x:
                    r_idx.push_back(r)
                    r_val.push_back(x)
                    acc[r] = 0
            pivot_of[lo] = j
            low_inv[j] = _inv(r_val[r_val.size() - 1], p)
        r_ptr.push_back(r_idx.size())
        lows.push_back(lo)
        if track:
            for r in range(vmin, vmax + 1):
                x = vacc[r]
                if x:
                    v_idx.push_back(r)
                    v_val.push_back(x)
                    vacc[r] = 0
            v_ptr.push_back(v_idx.size())
    reduced = (list(r_ptr), list(r_idx), list(r_val))
    vout = (list(v_ptr), list(v_idx), list(v_val)) if track else None
    return list(lows), reduced, vout
