# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; same contract as ``_pykernels``."""

NO_CAP = 1 << 60


cpdef tuple mono_mul(tuple a, tuple b):
    cdef Py_ssize_t i = 0, j = 0, la = len(a), lb = len(b)
    cdef list out
    cdef object ka, kb, s
    if la == 0:
        return b
    if lb == 0:
        return a
    out = []
    while i < la and j < lb:
        ka = a[i]
        kb = b[j]
        if ka < kb:
            out.append(ka)
            out.append(a[i + 1])
            i += 2
        elif kb < ka:
            out.append(kb)
            out.append(b[j + 1])
            j += 2
        else:
            s = a[i + 1] + b[j + 1]
            if s:
                out.append(ka)
                out.append(s)
            i += 2
            j += 2
    while i < la:
        out.append(a[i])
        i += 1
    while j < lb:
        out.append(b[j])
        j += 1
    return tuple(out)


cpdef tuple profile(tuple mono, dict weights, long long ekey):
    cdef long long w = 0, ee = 0, k
    cdef Py_ssize_t idx, n = len(mono)
    cdef object wk
    for idx in range(0, n, 2):
        k = mono[idx]
        if k == ekey:
            ee = mono[idx + 1]
        else:
            wk = weights.get(k)
            if wk:
                w += <long long>wk * <long long>mono[idx + 1]
    return (w, ee)


cpdef dict poly_mul(dict a, dict b, dict weights, long long wcap,
                    long long ekey, long long ecap):
    cdef dict res = {}
    cdef list bm = [], bc = [], bw = [], be = []
    cdef Py_ssize_t n, idx
    cdef long long wa, ea, wroom, eroom
    cdef long long[::1] bwv, bev
    cdef bint capped = wcap < NO_CAP or ecap < NO_CAP
    cdef tuple ma, m, pr
    cdef object ca, c, v
    if len(a) < len(b):
        a, b = b, a
    for mb, cb in b.items():
        bm.append(mb)
        bc.append(cb)
        if capped:
            pr = profile(mb, weights, ekey)
            bw.append(pr[0])
            be.append(pr[1])
        else:
            bw.append(0)
            be.append(0)
    n = len(bm)
    import array
    bwv = array.array('q', bw)
    bev = array.array('q', be)
    wroom = 0
    eroom = 0
    for ma, ca in a.items():
        if capped:
            pr = profile(ma, weights, ekey)
            wa = pr[0]
            ea = pr[1]
            wroom = wcap - wa
            eroom = ecap - ea
        for idx in range(n):
            if capped and (bwv[idx] > wroom or bev[idx] > eroom):
                continue
            m = mono_mul(ma, <tuple>bm[idx])
            c = ca * bc[idx]
            v = res.get(m)
            if v is None:
                res[m] = c
            else:
                v = v + c
                if v:
                    res[m] = v
                else:
                    del res[m]
    return res


cpdef axpy(object q, list src, list dst, Py_ssize_t start):
    cdef Py_ssize_t k, n = len(dst)
    cdef object s
    for k in range(start, n):
        s = src[k]
        if s:
            dst[k] -= q * s


cpdef list lattice_reduce(list vec, list cols, dict pivot_of_col, list rows, list combos,
                          Py_ssize_t ngens):
    cdef list coeffs = [0] * ngens
    cdef list row, combo
    cdef Py_ssize_t k, c
    cdef object q, v
    for c in cols:
        if not vec[c]:
            continue
        r = pivot_of_col[c]
        row = rows[r]
        q = vec[c] // row[c]
        if q:
            axpy(q, row, vec, c)
            combo = combos[r]
            for k in range(ngens):
                v = combo[k]
                if v:
                    coeffs[k] += q * v
    return coeffs
