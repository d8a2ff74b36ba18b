# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernel_py``; must stay result-identical to it."""

cdef enum:
    KIND_SHIFT = 32
    INDEX_SHIFT = 16
    MASK = 0xFFFF
    CACHE_LIMIT = 200000


cdef class WordKernel:
    cdef public tuple form_parity
    cdef public tuple orbit_parity
    cdef public tuple orbit_kappa
    cdef dict _cache

    def __init__(self, form_parity, orbit_parity, orbit_kappa):
        self.form_parity = tuple(form_parity)
        self.orbit_parity = tuple(orbit_parity)
        self.orbit_kappa = tuple(orbit_kappa)
        self._cache = {}

    cdef inline int _par(self, long long x):
        cdef Py_ssize_t i = (x >> INDEX_SHIFT) & MASK
        if x >> KIND_SHIFT:
            return <int>self.orbit_parity[i]
        return <int>self.form_parity[i]

    def letter_parity(self, long long x):
        return self._par(x)

    def word_parity(self, tuple w):
        cdef int s = 0
        cdef object x
        for x in w:
            s ^= self._par(x)
        return s

    def product(self, tuple u, tuple v, bint contract=True):
        cdef tuple key = (u, v, contract)
        cdef object hit = self._cache.get(key)
        if hit is not None:
            return hit
        cdef dict terms = {(0, u): 1}
        cdef dict out
        cdef object x, k, c
        for x in v:
            out = {}
            for k, c in terms.items():
                self._insert(k[0], k[1], c, x, out, contract)
            terms = {k: c for k, c in out.items() if c}
            if not terms:
                break
        if len(self._cache) > CACHE_LIMIT:
            self._cache.clear()
        self._cache[key] = terms
        return terms

    cdef _insert(self, long dh, tuple w, object c, long long x, dict out,
                 bint contract):
        cdef int px = self._par(x)
        cdef bint is_q = (x >> KIND_SHIFT) == 1
        cdef int sign = 1
        cdef Py_ssize_t i = len(w) - 1
        cdef long long y
        cdef long long conj = (<long long>1) << KIND_SHIFT
        cdef tuple k
        cdef object kap
        while i >= 0:
            y = w[i]
            if y < x:
                break
            if y == x:
                if px:
                    return
                break
            if contract and is_q and y - x == conj:
                k = (dh + 1, w[:i] + w[i + 1:])
                kap = self.orbit_kappa[(y >> INDEX_SHIFT) & MASK]
                out[k] = out.get(k, 0) + sign * c * kap
            if px and self._par(y):
                sign = -sign
            i -= 1
        k = (dh, w[:i + 1] + (x,) + w[i + 1:])
        out[k] = out.get(k, 0) + sign * c

    def left_derivative(self, tuple w, long long x):
        cdef int px = self._par(x)
        cdef dict out = {}
        cdef int before = 0
        cdef Py_ssize_t i
        cdef long long y
        cdef tuple k
        for i in range(len(w)):
            y = w[i]
            if y == x:
                k = w[:i] + w[i + 1:]
                out[k] = out.get(k, 0) + (-1 if px and before else 1)
            before ^= self._par(y)
        return {k: c for k, c in out.items() if c}

    def right_derivative(self, tuple w, long long x):
        cdef int px = self._par(x)
        cdef dict out = {}
        cdef int after = 0
        cdef Py_ssize_t i
        cdef long long y
        cdef tuple k
        for i in range(len(w) - 1, -1, -1):
            y = w[i]
            if y == x:
                k = w[:i] + w[i + 1:]
                out[k] = out.get(k, 0) + (-1 if px and after else 1)
            after ^= self._par(y)
        return {k: c for k, c in out.items() if c}
