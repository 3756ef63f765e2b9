# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""GMP-backed versions of the hot loops in _pykernels (same signatures)."""
from libc.stdlib cimport malloc, free
from libc.math cimport log
from cpython.bytes cimport PyBytes_FromStringAndSize

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr
    ctypedef const __mpz_struct *mpz_srcptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_set_si(mpz_ptr, long)
    void mpz_swap(mpz_ptr, mpz_ptr)
    void mpz_mul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_addmul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_gcd(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_divexact(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_tdiv_qr(mpz_ptr, mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_neg(mpz_ptr, mpz_srcptr)
    int mpz_cmp_ui(mpz_srcptr, unsigned long)
    int mpz_sgn(mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    double mpz_get_d_2exp(long *, mpz_srcptr)
    unsigned long mpz_remove(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void *)
    void *mpz_export(void *, size_t *, int, size_t, int, size_t, mpz_srcptr)

cdef double LN2 = log(2.0)


cdef void to_mpz(mpz_ptr z, object x) except *:
    cdef long small
    cdef bytes raw
    if -(1 << 62) < x < (1 << 62):
        small = x
        mpz_set_si(z, small)
        return
    neg = x < 0
    if neg:
        x = -x
    raw = x.to_bytes((x.bit_length() + 7) // 8, "little")
    mpz_import(z, len(raw), -1, 1, 0, 0, <char *>raw)
    if neg:
        mpz_neg(z, z)


cdef object from_mpz(mpz_srcptr z):
    cdef int s = mpz_sgn(z)
    cdef size_t count = 0
    cdef size_t nbytes
    cdef char *buf
    if s == 0:
        return 0
    nbytes = (mpz_sizeinbase(z, 2) + 7) // 8
    buf = <char *>malloc(nbytes + 1)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_export(buf, &count, -1, 1, 0, 0, z)
        out = int.from_bytes(PyBytes_FromStringAndSize(buf, count), "little")
    finally:
        free(buf)
    return -out if s < 0 else out


cdef double ln_mpz(mpz_srcptr z):
    cdef long e = 0
    cdef double d
    if mpz_sgn(z) == 0:
        return float("-inf")
    d = mpz_get_d_2exp(&e, z)
    if d < 0:
        d = -d
    return log(d) + e * LN2


cdef size_t bits_mpz(mpz_srcptr z):
    if mpz_sgn(z) == 0:
        return 0
    return mpz_sizeinbase(z, 2)


def convergents_raw(avals, bvals):
    cdef Py_ssize_t N = len(avals) - 1
    cdef Py_ssize_t n
    cdef mpz_t pa, pb, qa, qb, bp, a, b, t
    mpz_init(pa); mpz_init(pb); mpz_init(qa); mpz_init(qb)
    mpz_init(bp); mpz_init(a); mpz_init(b); mpz_init(t)
    p = [0] * (N + 2)
    q = [0] * (N + 2)
    bprod = [0] * (N + 1)
    try:
        # pa = u_{n-2}, pb = u_{n-1}
        mpz_set_si(pa, 1)
        to_mpz(pb, avals[0])
        mpz_set_si(qa, 0)
        mpz_set_si(qb, 1)
        mpz_set_si(bp, 1)
        p[0] = 1
        p[1] = avals[0]
        q[0] = 0
        q[1] = 1
        bprod[0] = 1
        for n in range(1, N + 1):
            to_mpz(a, avals[n])
            to_mpz(b, bvals[n])
            mpz_mul(t, a, pb)
            mpz_addmul(t, b, pa)
            mpz_swap(pa, pb)
            mpz_swap(pb, t)
            mpz_mul(t, a, qb)
            mpz_addmul(t, b, qa)
            mpz_swap(qa, qb)
            mpz_swap(qb, t)
            mpz_mul(bp, bp, b)
            p[n + 1] = from_mpz(pb)
            q[n + 1] = from_mpz(qb)
            bprod[n] = from_mpz(bp)
    finally:
        mpz_clear(pa); mpz_clear(pb); mpz_clear(qa); mpz_clear(qb)
        mpz_clear(bp); mpz_clear(a); mpz_clear(b); mpz_clear(t)
    return p, q, bprod


def gcd_sequences(p, q):
    cdef Py_ssize_t N = len(p) - 2
    cdef Py_ssize_t n
    cdef mpz_t x, y, g, gprev, d
    mpz_init(x); mpz_init(y); mpz_init(g); mpz_init(gprev); mpz_init(d)
    out_g = [0] * (N + 1)
    out_g2 = [0] * (N + 1)
    try:
        to_mpz(x, p[0])
        to_mpz(y, q[0])
        mpz_gcd(gprev, x, y)
        mpz_set_si(d, 1)
        for n in range(N + 1):
            to_mpz(x, p[n + 1])
            to_mpz(y, q[n + 1])
            if mpz_cmp_ui(d, 1) > 0:
                mpz_divexact(x, x, d)
                mpz_divexact(y, y, d)
                mpz_gcd(g, x, y)
                mpz_mul(g, g, d)
            else:
                mpz_gcd(g, x, y)
            mpz_gcd(d, g, gprev)
            out_g[n] = from_mpz(g)
            out_g2[n] = from_mpz(d)
            mpz_swap(gprev, g)
    finally:
        mpz_clear(x); mpz_clear(y); mpz_clear(g); mpz_clear(gprev); mpz_clear(d)
    return out_g, out_g2


def log_gcd_profile(avals, bvals):
    cdef Py_ssize_t N = len(avals) - 1
    cdef Py_ssize_t n
    cdef mpz_t pa, pb, qa, qb, a, b, t, x, y, g, gprev, d
    mpz_init(pa); mpz_init(pb); mpz_init(qa); mpz_init(qb)
    mpz_init(a); mpz_init(b); mpz_init(t); mpz_init(x); mpz_init(y)
    mpz_init(g); mpz_init(gprev); mpz_init(d)
    lng = [0.0] * (N + 1)
    lnq = [0.0] * (N + 1)
    try:
        mpz_set_si(pa, 1)
        to_mpz(pb, avals[0])
        mpz_set_si(qa, 0)
        mpz_set_si(qb, 1)
        mpz_gcd(gprev, pb, qb)
        mpz_set_si(d, 1)
        lng[0] = ln_mpz(gprev)
        lnq[0] = 0.0
        for n in range(1, N + 1):
            to_mpz(a, avals[n])
            to_mpz(b, bvals[n])
            mpz_mul(t, a, pb)
            mpz_addmul(t, b, pa)
            mpz_swap(pa, pb)
            mpz_swap(pb, t)
            mpz_mul(t, a, qb)
            mpz_addmul(t, b, qa)
            mpz_swap(qa, qb)
            mpz_swap(qb, t)
            if mpz_cmp_ui(d, 1) > 0:
                mpz_divexact(x, pb, d)
                mpz_divexact(y, qb, d)
                mpz_gcd(g, x, y)
                mpz_mul(g, g, d)
            else:
                mpz_gcd(g, pb, qb)
            mpz_gcd(d, g, gprev)
            mpz_swap(gprev, g)
            lng[n] = ln_mpz(gprev)
            lnq[n] = ln_mpz(qb)
    finally:
        mpz_clear(pa); mpz_clear(pb); mpz_clear(qa); mpz_clear(qb)
        mpz_clear(a); mpz_clear(b); mpz_clear(t); mpz_clear(x); mpz_clear(y)
        mpz_clear(g); mpz_clear(gprev); mpz_clear(d)
    return lng, lnq


def valuation(x, p):
    cdef mpz_t z, f
    cdef unsigned long v
    if x == 0:
        raise ValueError("valuation of zero")
    mpz_init(z); mpz_init(f)
    try:
        to_mpz(z, x)
        to_mpz(f, p)
        v = mpz_remove(z, z, f)
    finally:
        mpz_clear(z); mpz_clear(f)
    return v


def valuation_table(values, primes):
    cdef Py_ssize_t i, j, m = len(values), k = len(primes)
    cdef __mpz_struct *zs = <__mpz_struct *>malloc(m * sizeof(__mpz_struct))
    cdef mpz_t f, tmp
    if zs == NULL:
        raise MemoryError()
    for i in range(m):
        mpz_init(&zs[i])
    mpz_init(f); mpz_init(tmp)
    rows = []
    try:
        for i in range(m):
            if values[i] == 0:
                raise ValueError("valuation of zero")
            to_mpz(&zs[i], values[i])
        for j in range(k):
            to_mpz(f, primes[j])
            row = [0] * m
            for i in range(m):
                row[i] = mpz_remove(tmp, &zs[i], f)
            rows.append(row)
    finally:
        for i in range(m):
            mpz_clear(&zs[i])
        free(zs)
        mpz_clear(f); mpz_clear(tmp)
    return rows


def reduced_run(n1, n2, den, u_a, u_b):
    cdef Py_ssize_t K = len(den)
    cdef Py_ssize_t k
    cdef size_t peak, bl
    cdef mpz_t x0, x1, num, c1, c2, dk, r
    mpz_init(x0); mpz_init(x1); mpz_init(num); mpz_init(c1); mpz_init(c2)
    mpz_init(dk); mpz_init(r)
    fail = -1
    try:
        to_mpz(x0, u_a)
        to_mpz(x1, u_b)
        peak = max(bits_mpz(x0), bits_mpz(x1))
        for k in range(K):
            to_mpz(c1, n1[k])
            to_mpz(c2, n2[k])
            to_mpz(dk, den[k])
            mpz_mul(num, c1, x1)
            mpz_addmul(num, c2, x0)
            if mpz_cmp_ui(dk, 1) != 0:
                mpz_tdiv_qr(num, r, num, dk)
                if mpz_sgn(r) != 0:
                    fail = k
                    break
            mpz_swap(x0, x1)
            mpz_swap(x1, num)
            bl = bits_mpz(x1)
            if bl > peak:
                peak = bl
        out = (fail, peak, from_mpz(x0), from_mpz(x1))
    finally:
        mpz_clear(x0); mpz_clear(x1); mpz_clear(num); mpz_clear(c1); mpz_clear(c2)
        mpz_clear(dk); mpz_clear(r)
    return out


def bit_lengths(values):
    return [abs(x).bit_length() for x in values]
