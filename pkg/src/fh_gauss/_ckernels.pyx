# cython: language_level=3, boundscheck=False, wraparound=False
"""MPFR implementations of the multiprecision hot loops.

Mirrors ``_pykernels`` function for function.  Values cross the boundary
as mpmath ``mpf`` objects; internally every array is a block of ``mpfr_t``
at the requested precision.
"""

from libc.stdlib cimport malloc, free
from gmpy2 cimport *

import gmpy2 as _gmpy2
from mpmath import mp
from mpmath.libmp import from_man_exp

cdef extern from "gmp.h":
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)

cdef extern from "mpfr.h":
    void mpfr_init2(mpfr_ptr, mpfr_prec_t)
    void mpfr_clear(mpfr_ptr)
    int mpfr_set_z_2exp(mpfr_ptr, mpz_srcptr, long, mpfr_rnd_t)
    long mpfr_get_z_2exp(mpz_ptr, mpfr_srcptr)
    int mpfr_set_ui(mpfr_ptr, unsigned long, mpfr_rnd_t)
    int mpfr_set_si(mpfr_ptr, long, mpfr_rnd_t)
    int mpfr_set(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_add(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_sub(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_mul(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_div(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_mul_si(mpfr_ptr, mpfr_srcptr, long, mpfr_rnd_t)
    int mpfr_add_si(mpfr_ptr, mpfr_srcptr, long, mpfr_rnd_t)
    int mpfr_div_2ui(mpfr_ptr, mpfr_srcptr, unsigned long, mpfr_rnd_t)
    int mpfr_neg(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_abs(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_sqr(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_exp(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_log(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_fma(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_fms(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)
    int mpfr_zero_p(mpfr_srcptr)
    int mpfr_cmpabs(mpfr_srcptr, mpfr_srcptr)
    int mpfr_mul_2si(mpfr_ptr, mpfr_srcptr, long, mpfr_rnd_t)

import_gmpy2()

cdef mpfr_rnd_t RND = MPFR_RNDN


cdef class _Vec:
    """Owned, fixed-size block of mpfr_t values."""
    cdef __mpfr_struct *v
    cdef Py_ssize_t n

    def __cinit__(self, Py_ssize_t n, mpfr_prec_t prec):
        cdef Py_ssize_t i
        self.n = n
        self.v = <__mpfr_struct *> malloc(max(n, 1) * sizeof(__mpfr_struct))
        if self.v == NULL:
            raise MemoryError()
        for i in range(n):
            mpfr_init2(&self.v[i], prec)
            mpfr_set_ui(&self.v[i], 0, RND)

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.v != NULL:
            for i in range(self.n):
                mpfr_clear(&self.v[i])
            free(self.v)


cdef void _load(mpfr_ptr r, object x) except *:
    cdef mpz man
    if not hasattr(x, "_mpf_"):
        x = mp.mpf(x)
    sign, m, e, bc = x._mpf_
    if bc < 0:
        raise ValueError("non-finite value passed to kernel")
    if not MPZ_Check(m):
        m = _gmpy2.mpz(m)
    man = <mpz> m
    mpfr_set_z_2exp(r, MPZ(man), e, RND)
    if sign:
        mpfr_neg(r, r, RND)


cdef object _store(mpfr_srcptr r):
    cdef mpz z = GMPy_MPZ_New(NULL)
    cdef long e
    if mpfr_zero_p(r):
        return mp.zero
    e = mpfr_get_z_2exp(MPZ(z), r)
    return mp.make_mpf(from_man_exp(z, e))


cdef _Vec _vec_from(object seq, mpfr_prec_t prec):
    seq = list(seq)
    cdef _Vec out = _Vec(len(seq), prec)
    cdef Py_ssize_t i
    for i in range(out.n):
        _load(&out.v[i], seq[i])
    return out


cdef list _list_from(_Vec vec):
    cdef Py_ssize_t i
    return [_store(&vec.v[i]) for i in range(vec.n)]


cdef void _jacobi_eval(mpfr_ptr p, mpfr_ptr dp, mpfr_srcptr a, mpfr_srcptr b,
                       long m, mpfr_srcptr x, __mpfr_struct *t) noexcept:
    # t: scratch block of 10 values
    cdef long n
    cdef mpfr_ptr p0 = &t[0]
    cdef mpfr_ptr p1 = &t[1]
    cdef mpfr_ptr d0 = &t[2]
    cdef mpfr_ptr d1 = &t[3]
    cdef mpfr_ptr ab = &t[4]
    cdef mpfr_ptr c = &t[5]
    cdef mpfr_ptr lin = &t[6]
    cdef mpfr_ptr off = &t[7]
    cdef mpfr_ptr back = &t[8]
    cdef mpfr_ptr s = &t[9]
    mpfr_set_ui(p0, 1, RND)
    mpfr_set_ui(d0, 0, RND)
    if m == 0:
        mpfr_set(p, p0, RND)
        mpfr_set(dp, d0, RND)
        return
    mpfr_add(ab, a, b, RND)
    # p1 = (a - b)/2 + (ab + 2) x / 2 ; d1 = (ab + 2)/2
    mpfr_add_si(d1, ab, 2, RND)
    mpfr_div_2ui(d1, d1, 1, RND)
    mpfr_sub(p1, a, b, RND)
    mpfr_div_2ui(p1, p1, 1, RND)
    mpfr_fma(p1, d1, x, p1, RND)
    for n in range(2, m + 1):
        mpfr_add_si(c, ab, 2 * n, RND)
        # lin = (c-1) c (c-2)
        mpfr_add_si(s, c, -1, RND)
        mpfr_mul(lin, s, c, RND)
        mpfr_add_si(back, c, -2, RND)
        mpfr_mul(lin, lin, back, RND)
        # off = (c-1)(a^2 - b^2) = (c-1)(a-b)(a+b)
        mpfr_sub(off, a, b, RND)
        mpfr_mul(off, off, ab, RND)
        mpfr_mul(off, off, s, RND)
        # den = 2n (n + ab)(c - 2), kept in s
        mpfr_add_si(s, ab, n, RND)
        mpfr_mul(s, s, back, RND)
        mpfr_mul_si(s, s, 2 * n, RND)
        # back = 2 (n + a - 1)(n + b - 1) c
        mpfr_add_si(back, a, n - 1, RND)
        mpfr_mul(back, back, c, RND)
        mpfr_add_si(c, b, n - 1, RND)
        mpfr_mul(back, back, c, RND)
        mpfr_mul_si(back, back, 2, RND)
        # c <- lin x + off
        mpfr_fma(c, lin, x, off, RND)
        # new derivative: (c d1 + lin p1 - back d0) / den
        mpfr_mul(dp, c, d1, RND)
        mpfr_fma(dp, lin, p1, dp, RND)
        mpfr_mul(lin, back, d0, RND)
        mpfr_sub(dp, dp, lin, RND)
        mpfr_div(dp, dp, s, RND)
        # new value: (c p1 - back p0) / den
        mpfr_mul(p, c, p1, RND)
        mpfr_mul(lin, back, p0, RND)
        mpfr_sub(p, p, lin, RND)
        mpfr_div(p, p, s, RND)
        mpfr_set(p0, p1, RND)
        mpfr_set(p1, p, RND)
        mpfr_set(d0, d1, RND)
        mpfr_set(d1, dp, RND)
    mpfr_set(p, p1, RND)
    mpfr_set(dp, d1, RND)


def jacobi_newton(a, b, long m, x0, long prec, int maxit=12):
    cdef _Vec ab = _vec_from([a, b], prec)
    cdef _Vec xs = _vec_from(x0, prec)
    cdef _Vec ds = _Vec(xs.n, prec)
    cdef _Vec t = _Vec(13, prec)
    cdef Py_ssize_t i
    cdef int it
    cdef mpfr_ptr p = &t.v[10]
    cdef mpfr_ptr dx = &t.v[11]
    cdef mpfr_ptr tol = &t.v[12]
    mpfr_set_ui(tol, 1, RND)
    mpfr_mul_2si(tol, tol, 10 - prec, RND)
    for i in range(xs.n):
        for it in range(maxit):
            _jacobi_eval(p, &ds.v[i], &ab.v[0], &ab.v[1], m, &xs.v[i], t.v)
            mpfr_div(dx, p, &ds.v[i], RND)
            mpfr_sub(&xs.v[i], &xs.v[i], dx, RND)
            if mpfr_cmpabs(dx, tol) <= 0:
                break
        _jacobi_eval(p, &ds.v[i], &ab.v[0], &ab.v[1], m, &xs.v[i], t.v)
    return _list_from(xs), _list_from(ds)


def weight_values(xs, ts, gammas, long skip, long prec):
    cdef _Vec x = _vec_from(xs, prec)
    cdef _Vec tv = _vec_from(ts, prec)
    cdef _Vec gv = _vec_from(gammas, prec)
    cdef _Vec out = _Vec(x.n, prec)
    cdef _Vec t = _Vec(2, prec)
    cdef Py_ssize_t i, k
    for i in range(x.n):
        mpfr_sqr(&out.v[i], &x.v[i], RND)
        mpfr_neg(&out.v[i], &out.v[i], RND)
        for k in range(tv.n):
            if k == skip or mpfr_zero_p(&gv.v[k]):
                continue
            mpfr_sub(&t.v[0], &x.v[i], &tv.v[k], RND)
            mpfr_abs(&t.v[0], &t.v[0], RND)
            mpfr_log(&t.v[0], &t.v[0], RND)
            mpfr_fma(&out.v[i], &gv.v[k], &t.v[0], &out.v[i], RND)
        mpfr_exp(&out.v[i], &out.v[i], RND)
    return _list_from(out)


def power_sums(xs, ws, long kmax, long prec):
    cdef _Vec x = _vec_from(xs, prec)
    cdef _Vec w = _vec_from(ws, prec)
    cdef _Vec sums = _Vec(kmax + 1, prec)
    cdef _Vec t = _Vec(1, prec)
    cdef Py_ssize_t i, k
    for i in range(x.n):
        mpfr_set(&t.v[0], &w.v[i], RND)
        for k in range(kmax + 1):
            mpfr_add(&sums.v[k], &sums.v[k], &t.v[0], RND)
            mpfr_mul(&t.v[0], &t.v[0], &x.v[i], RND)
    return _list_from(sums)


cdef void _advance(_Vec x, _Vec p_prev, _Vec p_cur, mpfr_srcptr ak,
                   mpfr_srcptr bk, mpfr_ptr tmp) noexcept:
    # p_prev <- (x - ak) p_cur - bk p_prev ; caller swaps roles
    cdef Py_ssize_t i
    for i in range(x.n):
        mpfr_sub(tmp, &x.v[i], ak, RND)
        mpfr_mul(tmp, tmp, &p_cur.v[i], RND)
        mpfr_mul(&p_prev.v[i], &p_prev.v[i], bk, RND)
        mpfr_sub(&p_prev.v[i], tmp, &p_prev.v[i], RND)


def stieltjes(xs, ws, long n, long prec):
    cdef _Vec x = _vec_from(xs, prec)
    cdef _Vec w = _vec_from(ws, prec)
    cdef _Vec pa = _Vec(x.n, prec)
    cdef _Vec pb = _Vec(x.n, prec)
    cdef _Vec alpha = _Vec(n + 1, prec)
    cdef _Vec h = _Vec(n + 1, prec)
    cdef _Vec t = _Vec(3, prec)
    cdef _Vec swap
    cdef Py_ssize_t i, k
    cdef mpfr_ptr wp2 = &t.v[0]
    cdef mpfr_ptr bk = &t.v[1]
    cdef mpfr_ptr tmp = &t.v[2]
    for i in range(x.n):
        mpfr_set_ui(&pb.v[i], 1, RND)
    # pa holds P_{k-1}, pb holds P_k
    for k in range(n + 1):
        for i in range(x.n):
            mpfr_mul(wp2, &w.v[i], &pb.v[i], RND)
            mpfr_mul(wp2, wp2, &pb.v[i], RND)
            mpfr_add(&h.v[k], &h.v[k], wp2, RND)
            mpfr_fma(&alpha.v[k], wp2, &x.v[i], &alpha.v[k], RND)
        mpfr_div(&alpha.v[k], &alpha.v[k], &h.v[k], RND)
        if k == n:
            break
        if k:
            mpfr_div(bk, &h.v[k], &h.v[k - 1], RND)
        else:
            mpfr_set_ui(bk, 0, RND)
        _advance(x, pa, pb, &alpha.v[k], bk, tmp)
        swap = pa
        pa = pb
        pb = swap
    return _list_from(alpha), _list_from(h)


def poly_sums(xs, cs, alpha, beta, long n, long prec):
    cdef _Vec x = _vec_from(xs, prec)
    cdef _Vec c = _vec_from(cs, prec)
    cdef _Vec av = _vec_from(list(alpha)[:n + 1], prec)
    cdef _Vec bv = _vec_from(list(beta)[:n + 1], prec)
    cdef _Vec pa = _Vec(x.n, prec)
    cdef _Vec pb = _Vec(x.n, prec)
    cdef _Vec s2 = _Vec(n + 1, prec)
    cdef _Vec s11 = _Vec(n + 1, prec)
    cdef _Vec t = _Vec(3, prec)
    cdef _Vec swap
    cdef Py_ssize_t i, k
    cdef mpfr_ptr cp = &t.v[0]
    cdef mpfr_ptr bk = &t.v[1]
    cdef mpfr_ptr tmp = &t.v[2]
    for i in range(x.n):
        mpfr_set_ui(&pb.v[i], 1, RND)
    for k in range(n + 1):
        for i in range(x.n):
            mpfr_mul(cp, &c.v[i], &pb.v[i], RND)
            mpfr_fma(&s2.v[k], cp, &pb.v[i], &s2.v[k], RND)
            mpfr_fma(&s11.v[k], cp, &pa.v[i], &s11.v[k], RND)
        if k == n:
            break
        if k:
            mpfr_set(bk, &bv.v[k], RND)
        else:
            mpfr_set_ui(bk, 0, RND)
        _advance(x, pa, pb, &av.v[k], bk, tmp)
        swap = pa
        pa = pb
        pb = swap
    return _list_from(s2), _list_from(s11)
