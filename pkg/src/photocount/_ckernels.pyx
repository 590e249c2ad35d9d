# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np

cimport numpy as cnp
from libc.math cimport pow, fabs
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline double _uniform(uint64_t key, uint64_t c) nogil:
    cdef uint64_t z = key + (c + 1) * GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    z = z ^ (z >> 31)
    return <double>(z >> 11) * INV53


cdef inline int64_t _geometric(double u, double rate) nogil:
    cdef double v = 1.0 - u
    cdef double s = rate
    cdef int64_t n = 0
    while s >= v:
        s *= rate
        n += 1
    return n


cdef class _Neumaier:
    cdef double s, c

    def __cinit__(self):
        self.s = 0.0
        self.c = 0.0

    cdef inline void add(self, double x):
        cdef double t = self.s + x
        if fabs(self.s) >= fabs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    cdef inline double value(self):
        return self.s + self.c


def geometric_draws(uint64_t key, uint64_t start, Py_ssize_t count, double rate):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(count):
            o[i] = _geometric(_uniform(key, start + i), rate)
    return out


def thermal_tally(uint64_t key, uint64_t start, Py_ssize_t count, double mean_rate, double eta, int kmax):
    tally = np.zeros(kmax + 2, dtype=np.int64)
    cdef int64_t[::1] t = tally
    cdef Py_ssize_t i
    cdef uint64_t c
    cdef int64_t n, k
    with nogil:
        for i in range(count):
            c = 3 * (start + i)
            n = _geometric(_uniform(key, c), mean_rate)
            if n == 0 or not (_uniform(key, c + 1) < eta):
                t[0] += 1
                continue
            k = _geometric(_uniform(key, c + 2), n / (n + 1.0))
            if k > kmax:
                k = kmax + 1
            t[k] += 1
    return tally


def categorical_tally(uint64_t key, uint64_t start, Py_ssize_t count, cumulative):
    cdef double[::1] cum = np.ascontiguousarray(cumulative, dtype=np.float64)
    cdef Py_ssize_t m = cum.shape[0]
    tally = np.zeros(m + 1, dtype=np.int64)
    cdef int64_t[::1] t = tally
    cdef Py_ssize_t i, j
    cdef double u
    with nogil:
        for i in range(count):
            u = _uniform(key, start + i)
            j = 0
            while j < m and not (u < cum[j]):
                j += 1
            t[j] += 1
    return tally


def uk_series(double mean_rate, double weight0, int k, Py_ssize_t nterms):
    cdef _Neumaier acc = _Neumaier()
    cdef Py_ssize_t n
    cdef double x
    for n in range(nterms):
        x = <double>n
        acc.add(weight0 * pow(mean_rate, x) / (x + 1.0) * pow(x / (x + 1.0), k))
    return acc.value()


def uk_vector(double mean_rate, double p0, int kmax, Py_ssize_t nterms):
    s = np.zeros(kmax + 1)
    c = np.zeros(kmax + 1)
    cdef double[::1] sv = s
    cdef double[::1] cv = c
    cdef Py_ssize_t n, j
    cdef double w, r, x, tt
    with nogil:
        for n in range(nterms):
            x = <double>n
            w = p0 * pow(mean_rate, x) / (x + 1.0)
            r = x / (x + 1.0)
            for j in range(kmax + 1):
                tt = sv[j] + w
                if fabs(sv[j]) >= fabs(w):
                    cv[j] += (sv[j] - tt) + w
                else:
                    cv[j] += (w - tt) + sv[j]
                sv[j] = tt
                w *= r
                if w == 0.0:
                    break
    return s + c


def mean_absorbed_sum(double mean_rate, double p0, inner_lengths):
    cdef int64_t[::1] kn = np.ascontiguousarray(inner_lengths, dtype=np.int64)
    cdef Py_ssize_t nterms = kn.shape[0]
    cdef _Neumaier outer = _Neumaier()
    cdef _Neumaier inner = _Neumaier()
    cdef Py_ssize_t n, k
    cdef double r, x
    for n in range(1, nterms):
        if kn[n] <= 0:
            continue
        x = <double>n
        r = x / (x + 1.0)
        inner.s = 0.0
        inner.c = 0.0
        for k in range(1, kn[n] + 1):
            inner.add(k * pow(r, <double>k))
        outer.add(p0 * pow(mean_rate, x) * (inner.value() / (x + 1.0)))
    return outer.value()
