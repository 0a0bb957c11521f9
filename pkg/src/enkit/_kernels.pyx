# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Semantics are identical to enkit._pykernels (the reference).  Every entry
point computes a worst-case magnitude bound in Python integers first and
runs the int64 fast path only when the bound certifies that no intermediate
can overflow; otherwise it delegates to the pure implementation, which is
exact at any size.
"""

from libc.stdlib cimport free, malloc

from enkit import _pykernels as _py

BACKEND = "compiled"

_INT64_CAP = 1 << 62
_INT32_CAP = (1 << 31) - 1


def grid_roots(exps, coeffs, lows, highs):
    """See enkit._pykernels.grid_roots."""
    arity = len(lows)
    if arity == 0:
        return [()] if sum(coeffs) == 0 else []
    for lo, hi in zip(lows, highs):
        if lo > hi:
            return []
        if max(abs(lo), abs(hi)) >= _INT64_CAP or hi - lo + 1 > _INT32_CAP:
            return _py.grid_roots(exps, coeffs, lows, highs)
    # Worst-case |value| over the box, in exact arithmetic.
    bound = 0
    for e, c in zip(exps, coeffs):
        term = abs(c)
        for i in range(arity):
            term *= max(abs(lows[i]), abs(highs[i]), 1) ** e[i]
        bound += term
    if bound >= _INT64_CAP:
        return _py.grid_roots(exps, coeffs, lows, highs)
    return _grid_roots_i64(exps, coeffs, lows, highs)


cdef _grid_roots_i64(exps, coeffs, lows, highs):
    cdef Py_ssize_t p = len(lows)
    cdef Py_ssize_t nterms = len(coeffs)
    cdef Py_ssize_t i, t, w, e, total_pow
    cdef long long total, term, v
    cdef int* E = <int*> malloc(max(nterms * p, 1) * sizeof(int))
    cdef long long* C = <long long*> malloc(max(nterms, 1) * sizeof(long long))
    cdef long long* LO = <long long*> malloc(p * sizeof(long long))
    cdef int* WIDTH = <int*> malloc(p * sizeof(int))
    cdef int* ME = <int*> malloc(p * sizeof(int))
    cdef int* OFFS = <int*> malloc(p * sizeof(int))
    cdef Py_ssize_t* PBASE = <Py_ssize_t*> malloc(p * sizeof(Py_ssize_t))
    cdef long long* POW = NULL
    roots = []
    try:
        for i in range(p):
            LO[i] = lows[i]
            WIDTH[i] = highs[i] - lows[i] + 1
            ME[i] = 0
            OFFS[i] = 0
        for t in range(nterms):
            C[t] = coeffs[t]
            etup = exps[t]
            for i in range(p):
                E[t * p + i] = etup[i]
                if etup[i] > ME[i]:
                    ME[i] = etup[i]
        # Power tables: POW[PBASE[i] + off * (ME[i]+1) + e] = (LO[i]+off)^e
        total_pow = 0
        for i in range(p):
            PBASE[i] = total_pow
            total_pow += WIDTH[i] * (ME[i] + 1)
        POW = <long long*> malloc(total_pow * sizeof(long long))
        for i in range(p):
            for w in range(WIDTH[i]):
                v = LO[i] + w
                POW[PBASE[i] + w * (ME[i] + 1)] = 1
                for e in range(1, ME[i] + 1):
                    POW[PBASE[i] + w * (ME[i] + 1) + e] = (
                        POW[PBASE[i] + w * (ME[i] + 1) + e - 1] * v)
        while True:
            total = 0
            for t in range(nterms):
                term = C[t]
                for i in range(p):
                    e = E[t * p + i]
                    if e:
                        term *= POW[PBASE[i] + OFFS[i] * (ME[i] + 1) + e]
                total += term
            if total == 0:
                roots.append(tuple(LO[i] + OFFS[i] for i in range(p)))
            # odometer, last variable fastest (lexicographic order)
            i = p - 1
            while i >= 0:
                OFFS[i] += 1
                if OFFS[i] < WIDTH[i]:
                    break
                OFFS[i] = 0
                i -= 1
            if i < 0:
                break
        return roots
    finally:
        free(E)
        free(C)
        free(LO)
        free(WIDTH)
        free(ME)
        free(OFFS)
        free(PBASE)
        if POW != NULL:
            free(POW)


def check_equations(ops, ii, jj, kk, values):
    """See enkit._pykernels.check_equations."""
    for v in values:
        if v >= _INT32_CAP or v <= -_INT32_CAP:
            return _py.check_equations(ops, ii, jj, kk, values)
    return _check_equations_i64(ops, ii, jj, kk, values)


cdef _check_equations_i64(ops, ii, jj, kk, values):
    cdef Py_ssize_t m = len(ops)
    cdef Py_ssize_t nvals = len(values)
    cdef Py_ssize_t t
    cdef int op
    cdef long long* V = <long long*> malloc(max(nvals, 1) * sizeof(long long))
    cdef unsigned char* OP = <unsigned char*> malloc(max(m, 1) * sizeof(unsigned char))
    cdef int* I = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int* J = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int* K = <int*> malloc(max(m, 1) * sizeof(int))
    try:
        for t in range(nvals):
            V[t] = values[t]
        for t in range(m):
            OP[t] = ops[t]
            I[t] = ii[t]
            J[t] = jj[t]
            K[t] = kk[t]
        for t in range(m):
            op = OP[t]
            if op == 0:
                if V[I[t]] != 1:
                    return t
            elif op == 1:
                if V[I[t]] + V[J[t]] != V[K[t]]:
                    return t
            else:
                if V[I[t]] * V[J[t]] != V[K[t]]:
                    return t
        return -1
    finally:
        free(V)
        free(OP)
        free(I)
        free(J)
        free(K)


def family_join(vectors, lo, hi, basis, bounds):
    """See enkit._pykernels.family_join."""
    count = len(vectors)
    nb = len(basis)
    width = hi - lo + 1
    cmax = max(abs(lo), abs(hi))
    doubled_size = 1
    for d in bounds:
        doubled_size *= 2 * d + 1
    if (count == 0 or count != width ** nb or count > 10**7
            or doubled_size > 10**6 or nb * cmax * cmax >= _INT64_CAP
            or 2 * cmax >= _INT64_CAP):
        return _py.family_join(vectors, lo, hi, basis, bounds)
    return _family_join_i64(vectors, lo, hi, basis, bounds)


cdef _family_join_i64(vectors, long long lo, long long hi, basis, bounds):
    cdef Py_ssize_t count = len(vectors)
    cdef Py_ssize_t nb = len(basis)
    cdef Py_ssize_t p = len(bounds)
    cdef long long width = hi - lo + 1
    cdef Py_ssize_t a, b, t, t1, t2, nz, doubled, dp, bp, rem, digit
    cdef Py_ssize_t ntouch, u, dpos, bpos
    cdef long long s, c, rank, rank_zero
    cdef bint ok, inside
    cdef long long* VEC = <long long*> malloc(count * nb * sizeof(long long))
    cdef long long* STRIDE = <long long*> malloc(nb * sizeof(long long))
    cdef Py_ssize_t* NZSTART = <Py_ssize_t*> malloc((count + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* NZPOS = <Py_ssize_t*> malloc(count * nb * sizeof(Py_ssize_t))
    cdef long long* NZVAL = <long long*> malloc(count * nb * sizeof(long long))
    cdef Py_ssize_t* PAIRDP = NULL
    cdef long long* SCRATCH = NULL
    cdef Py_ssize_t* TOUCHED = NULL
    cdef Py_ssize_t* DP2BP = NULL
    adds = []
    muls = []
    try:
        # Rank strides: first basis position most significant.
        STRIDE[nb - 1] = 1
        for t in range(nb - 2, -1, -1):
            STRIDE[t] = STRIDE[t + 1] * width
        rank_zero = 0
        for t in range(nb):
            rank_zero += (0 - lo) * STRIDE[t]
        # Flatten vectors; verify the enumeration-order contract (rank == index).
        nz = 0
        for a in range(count):
            vec = vectors[a]
            rank = 0
            NZSTART[a] = nz
            for t in range(nb):
                c = vec[t]
                VEC[a * nb + t] = c
                rank = rank * width + (c - lo)
                if c:
                    NZPOS[nz] = t
                    NZVAL[nz] = c
                    nz += 1
            if rank != a:
                return _py.family_join(vectors, lo, hi, basis, bounds)
        NZSTART[count] = nz
        # Strides of the bounded grid (dims d_i + 1) and the doubled grid
        # (dims 2 d_i + 1), last variable fastest: both match ascending lex.
        bstr = [0] * p
        dstr = [0] * p
        acc_b = 1
        acc_d = 1
        for t in range(p - 1, -1, -1):
            bstr[t] = acc_b
            dstr[t] = acc_d
            acc_b *= bounds[t] + 1
            acc_d *= 2 * bounds[t] + 1
        doubled = 1
        for t in range(p):
            doubled *= 2 * bounds[t] + 1
        # Basis position of each doubled position, or -1 when out of bounds.
        DP2BP = <Py_ssize_t*> malloc(max(doubled, 1) * sizeof(Py_ssize_t))
        for dp in range(doubled):
            rem = dp
            bp = 0
            inside = True
            for t in range(p):
                digit = rem // dstr[t]
                rem -= digit * dstr[t]
                if digit > bounds[t]:
                    inside = False
                    break
                bp += digit * bstr[t]
            DP2BP[dp] = bp if inside else -1
        # The caller's basis must agree with the grid we just indexed.
        for t in range(nb):
            e = basis[t]
            bp = 0
            for t1 in range(p):
                bp += e[t1] * bstr[t1]
            if bp != t:
                return _py.family_join(vectors, lo, hi, basis, bounds)
        # Doubled position of every basis pair.
        PAIRDP = <Py_ssize_t*> malloc(max(nb * nb, 1) * sizeof(Py_ssize_t))
        for t1 in range(nb):
            e1 = basis[t1]
            for t2 in range(nb):
                e2 = basis[t2]
                dp = 0
                for t in range(p):
                    dp += (e1[t] + e2[t]) * dstr[t]
                PAIRDP[t1 * nb + t2] = dp
        SCRATCH = <long long*> malloc(max(doubled, 1) * sizeof(long long))
        TOUCHED = <Py_ssize_t*> malloc(max(nb * nb, 1) * sizeof(Py_ssize_t))
        for t in range(doubled):
            SCRATCH[t] = 0
        for a in range(count):
            for b in range(a, count):
                # sums
                rank = 0
                ok = True
                for t in range(nb):
                    s = VEC[a * nb + t] + VEC[b * nb + t]
                    if s < lo or s > hi:
                        ok = False
                        break
                    rank = rank * width + (s - lo)
                if ok:
                    adds.append((a, b, rank))
                # products
                ntouch = 0
                for t1 in range(NZSTART[a], NZSTART[a + 1]):
                    for t2 in range(NZSTART[b], NZSTART[b + 1]):
                        dpos = PAIRDP[NZPOS[t1] * nb + NZPOS[t2]]
                        if SCRATCH[dpos] == 0:
                            TOUCHED[ntouch] = dpos
                            ntouch += 1
                        SCRATCH[dpos] += NZVAL[t1] * NZVAL[t2]
                ok = True
                rank = rank_zero
                for u in range(ntouch):
                    dpos = TOUCHED[u]
                    c = SCRATCH[dpos]
                    if c == 0:
                        continue
                    bpos = DP2BP[dpos]
                    if bpos < 0 or c < lo or c > hi:
                        ok = False
                        break
                    rank += c * STRIDE[bpos]
                for u in range(ntouch):
                    SCRATCH[TOUCHED[u]] = 0
                if ok:
                    muls.append((a, b, rank))
        return adds, muls
    finally:
        free(VEC)
        free(STRIDE)
        free(NZSTART)
        free(NZPOS)
        free(NZVAL)
        if PAIRDP != NULL:
            free(PAIRDP)
        if SCRATCH != NULL:
            free(SCRATCH)
        if TOUCHED != NULL:
            free(TOUCHED)
        if DP2BP != NULL:
            free(DP2BP)
