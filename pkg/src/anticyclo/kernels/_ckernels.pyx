# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the reference kernels in ``_pykernels``.

Same signatures and layout.  Values are held as int64 and reduced after each
multiply-add, so the modulus must stay below 2**31.
"""

from libc.stdlib cimport malloc, calloc, free
from math import comb

ctypedef long long i64


cdef i64* _load(object xs, Py_ssize_t n, i64 m) except NULL:
    cdef i64* buf = <i64*> malloc(max(n, 1) * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = (<object> xs[i]) % m
    return buf


cdef list _dump(i64* buf, Py_ssize_t n):
    return [buf[i] for i in range(n)]


cdef void _mul_raw(i64* a, i64* b, i64* out, int e, int f, i64* rel,
                   i64* hred, i64 m, i64* work) nogil:
    # work must hold (2e-1)*(2f-1) entries
    cdef int w = 2 * f - 1
    cdef int i, j, r, s, k, d, base
    cdef i64 t, ar
    cdef Py_ssize_t total = (2 * e - 1) * w
    for k in range(total):
        work[k] = 0
    for i in range(e):
        for r in range(f):
            ar = a[i * f + r]
            if ar == 0:
                continue
            for j in range(e):
                for s in range(f):
                    if b[j * f + s]:
                        k = (i + j) * w + r + s
                        work[k] = (work[k] + ar * b[j * f + s]) % m
    if f > 1:
        for k in range(2 * e - 1):
            for d in range(w - 1, f - 1, -1):
                t = work[k * w + d]
                if t:
                    base = d - f
                    for r in range(f):
                        work[k * w + base + r] = (work[k * w + base + r] + t * hred[r]) % m
    for k in range(2 * e - 2, e - 1, -1):
        base = k - e
        for r in range(f):
            t = work[k * w + r]
            if t:
                for i in range(e):
                    if rel[i]:
                        work[(base + i) * w + r] = (work[(base + i) * w + r] + t * rel[i]) % m
    for i in range(e):
        for r in range(f):
            out[i * f + r] = work[i * w + r]


cdef class _Ring:
    cdef int e, f
    cdef i64 m
    cdef i64* rel
    cdef i64* hred
    cdef i64* work

    def __cinit__(self, int e, int f, object rel, object hred, i64 m):
        self.e = e
        self.f = f
        self.m = m
        self.rel = _load(rel, e, m)
        self.hred = _load(hred, f, m)
        self.work = <i64*> malloc((2 * e - 1) * (2 * f - 1) * sizeof(i64))
        if self.work == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.rel)
        free(self.hred)
        free(self.work)


def cyc_mul(a, b, int e, int f, rel, hred, i64 m):
    cdef _Ring R = _Ring(e, f, rel, hred, m)
    cdef Py_ssize_t n = e * f
    cdef i64* x = _load(a, n, m)
    cdef i64* y = _load(b, n, m)
    cdef i64* z = <i64*> malloc(n * sizeof(i64))
    try:
        _mul_raw(x, y, z, e, f, R.rel, R.hred, m, R.work)
        return _dump(z, n)
    finally:
        free(x)
        free(y)
        free(z)


def cyc_pow(x, k, int e, int f, rel, hred, i64 m):
    cdef _Ring R = _Ring(e, f, rel, hred, m)
    cdef Py_ssize_t n = e * f
    cdef i64* base = _load(x, n, m)
    cdef i64* res = <i64*> calloc(n, sizeof(i64))
    cdef i64* tmp = <i64*> malloc(n * sizeof(i64))
    cdef i64* swap
    res[0] = 1 % m
    try:
        while k:
            if k & 1:
                _mul_raw(res, base, tmp, e, f, R.rel, R.hred, m, R.work)
                swap = res; res = tmp; tmp = swap
            k >>= 1
            if k:
                _mul_raw(base, base, tmp, e, f, R.rel, R.hred, m, R.work)
                swap = base; base = tmp; tmp = swap
        return _dump(res, n)
    finally:
        free(base)
        free(res)
        free(tmp)


def cyc_powers(x, int count, int e, int f, rel, hred, i64 m):
    cdef _Ring R = _Ring(e, f, rel, hred, m)
    cdef Py_ssize_t n = e * f
    cdef i64* base = _load(x, n, m)
    cdef i64* cur = <i64*> calloc(n, sizeof(i64))
    cdef i64* nxt = <i64*> malloc(n * sizeof(i64))
    cdef i64* swap
    cdef int c
    cur[0] = 1 % m
    out = []
    try:
        for c in range(count):
            out.append(_dump(cur, n))
            if c + 1 < count:
                _mul_raw(cur, base, nxt, e, f, R.rel, R.hred, m, R.work)
                swap = cur; cur = nxt; nxt = swap
        return out
    finally:
        free(base)
        free(cur)
        free(nxt)


cdef void _scale_add_raw(i64* acc, i64* c, i64* v, int e, int f, i64* hred,
                         i64 m, i64* row) nogil:
    cdef int i, r, s, d
    cdef i64 t
    if f == 1:
        if c[0]:
            for i in range(e):
                if v[i]:
                    acc[i] = (acc[i] + c[0] * v[i]) % m
        return
    for i in range(e):
        for d in range(2 * f - 1):
            row[d] = 0
        for r in range(f):
            if c[r]:
                for s in range(f):
                    row[r + s] = (row[r + s] + c[r] * v[i * f + s]) % m
        for d in range(2 * f - 2, f - 1, -1):
            t = row[d]
            if t:
                for r in range(f):
                    row[d - f + r] = (row[d - f + r] + t * hred[r]) % m
        for r in range(f):
            acc[i * f + r] = (acc[i * f + r] + row[r]) % m


def cyc_eval_scalar(cs, x, int e, int f, rel, hred, i64 m):
    cdef _Ring R = _Ring(e, f, rel, hred, m)
    cdef Py_ssize_t n = e * f
    cdef i64* xv = _load(x, n, m)
    cdef i64* acc = <i64*> calloc(n, sizeof(i64))
    cdef i64* tmp = <i64*> malloc(n * sizeof(i64))
    cdef i64* swap
    cdef int j, r
    cdef Py_ssize_t L = len(cs)
    try:
        for j in range(L - 1, -1, -1):
            _mul_raw(acc, xv, tmp, e, f, R.rel, R.hred, m, R.work)
            swap = acc; acc = tmp; tmp = swap
            c = cs[j]
            for r in range(f):
                acc[r] = (acc[r] + (<object> c[r]) % m) % m
        return _dump(acc, n)
    finally:
        free(xv)
        free(acc)
        free(tmp)


def cyc_horner(coeffs, x, int e, int f, rel, hred, i64 m):
    cdef _Ring R = _Ring(e, f, rel, hred, m)
    cdef Py_ssize_t n = e * f
    cdef i64* xv = _load(x, n, m)
    cdef i64* acc = <i64*> calloc(n, sizeof(i64))
    cdef i64* tmp = <i64*> malloc(n * sizeof(i64))
    cdef i64* swap
    cdef int j
    cdef Py_ssize_t i
    cdef Py_ssize_t L = len(coeffs)
    try:
        for j in range(L - 1, -1, -1):
            _mul_raw(acc, xv, tmp, e, f, R.rel, R.hred, m, R.work)
            swap = acc; acc = tmp; tmp = swap
            c = coeffs[j]
            for i in range(n):
                acc[i] = (acc[i] + (<object> c[i]) % m) % m
        return _dump(acc, n)
    finally:
        free(xv)
        free(acc)
        free(tmp)


def cyc_taylor(cs, a, z, int e, int f, rel, hred, i64 m):
    cdef _Ring R = _Ring(e, f, rel, hred, m)
    cdef Py_ssize_t n = e * f
    cdef int M = len(cs)
    cdef int j, k, r
    cdef Py_ssize_t i
    cdef i64 bnm
    cdef i64* apow = <i64*> calloc(max(M, 1) * n, sizeof(i64))
    cdef i64* av = _load(a, n, m)
    cdef i64* zv = _load(z, n, m)
    cdef i64* zk = <i64*> calloc(n, sizeof(i64))
    cdef i64* acc = <i64*> malloc(n * sizeof(i64))
    cdef i64* tmp = <i64*> malloc(n * sizeof(i64))
    cdef i64* cv = <i64*> malloc(max(M, 1) * f * sizeof(i64))
    cdef i64* sc = <i64*> malloc(f * sizeof(i64))
    cdef i64* row = <i64*> malloc((2 * f - 1) * sizeof(i64))
    cdef i64* swap
    out = []
    try:
        for j in range(M):
            c = cs[j]
            for r in range(f):
                cv[j * f + r] = (<object> c[r]) % m
        if M:
            apow[0] = 1 % m
        for j in range(1, M):
            _mul_raw(apow + (j - 1) * n, av, apow + j * n, e, f, R.rel, R.hred, m, R.work)
        zk[0] = 1 % m
        for k in range(M):
            for i in range(n):
                acc[i] = 0
            for j in range(k, M):
                bnm = comb(j, k) % m
                if bnm == 0:
                    continue
                for r in range(f):
                    sc[r] = (bnm * cv[j * f + r]) % m
                _scale_add_raw(acc, sc, apow + (j - k) * n, e, f, R.hred, m, row)
            if k:
                _mul_raw(zk, zv, tmp, e, f, R.rel, R.hred, m, R.work)
                swap = zk; zk = tmp; tmp = swap
            _mul_raw(acc, zk, tmp, e, f, R.rel, R.hred, m, R.work)
            out.append(_dump(tmp, n))
        return out
    finally:
        free(apow)
        free(av)
        free(zv)
        free(zk)
        free(acc)
        free(tmp)
        free(cv)
        free(sc)
        free(row)


def series_mul(a, b, Py_ssize_t L, i64 m):
    cdef Py_ssize_t la = min(len(a), L)
    cdef Py_ssize_t lb = min(len(b), L)
    cdef i64* x = _load(a, la, m)
    cdef i64* y = _load(b, lb, m)
    cdef i64* z = <i64*> calloc(max(L, 1), sizeof(i64))
    cdef Py_ssize_t i, j
    try:
        for i in range(la):
            if x[i]:
                for j in range(min(lb, L - i)):
                    z[i + j] = (z[i + j] + x[i] * y[j]) % m
        return _dump(z, L)
    finally:
        free(x)
        free(y)
        free(z)
