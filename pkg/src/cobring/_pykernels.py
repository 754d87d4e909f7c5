"""Pure-Python term kernels.

Monomials are flat tuples ``(key0, exp0, key1, exp1, ...)`` sorted by key.
Term maps are plain dicts from monomial to coefficient.  The compiled
module ``_kernels`` exposes the same three functions.
"""

NO_CAP = 1 << 60


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la = len(a)
    lb = len(b)
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
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def profile(mono, weights, ekey):
    """Return (weight, e-exponent) of a monomial."""
    w = 0
    ee = 0
    for idx in range(0, len(mono), 2):
        k = mono[idx]
        if k == ekey:
            ee = mono[idx + 1]
        else:
            wk = weights.get(k)
            if wk:
                w += wk * mono[idx + 1]
    return w, ee


def poly_mul(a, b, weights, wcap, ekey, ecap):
    """Product of two term maps, dropping terms of weight > wcap or e-power > ecap."""
    res = {}
    if len(a) < len(b):
        a, b = b, a
    capped = wcap < NO_CAP or ecap < NO_CAP
    bl = []
    for mb, cb in b.items():
        wb, eb = profile(mb, weights, ekey) if capped else (0, 0)
        bl.append((mb, cb, wb, eb))
    for ma, ca in a.items():
        if capped:
            wa, ea = profile(ma, weights, ekey)
            wroom = wcap - wa
            eroom = ecap - ea
        for mb, cb, wb, eb in bl:
            if capped and (wb > wroom or eb > eroom):
                continue
            m = mono_mul(ma, mb)
            c = ca * cb
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


def axpy(q, src, dst, start):
    """dst[k] -= q * src[k] for k >= start."""
    for k in range(start, len(dst)):
        s = src[k]
        if s:
            dst[k] -= q * s


def lattice_reduce(vec, cols, pivot_of_col, rows, combos, ngens):
    """Reduce ``vec`` (in place) by HNF rows; return the generator coefficients used."""
    coeffs = [0] * ngens
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
