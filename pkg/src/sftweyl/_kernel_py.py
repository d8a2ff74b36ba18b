"""Word-level kernels for the graded Weyl algebra (pure-Python backend).

Letters are integers ``kind << 32 | index << 16 | level`` with kind 0 for t,
1 for q and 2 for p, so integer order is the canonical letter order and
``p_gamma == q_gamma + (1 << 32)``.  Words are sorted tuples of letters.
"""

KIND_SHIFT = 32
INDEX_SHIFT = 16
CONJ = 1 << KIND_SHIFT
_MASK = 0xFFFF
_CACHE_LIMIT = 200_000


class WordKernel:
    """Products and derivatives of canonical words for one signature.

    ``form_parity[i]`` is the parity of every t letter of form ``i``;
    ``orbit_parity[i]`` that of ``p`` and ``q`` of orbit ``i``, and
    ``orbit_kappa[i]`` its multiplicity.
    """

    def __init__(self, form_parity, orbit_parity, orbit_kappa):
        self.form_parity = tuple(form_parity)
        self.orbit_parity = tuple(orbit_parity)
        self.orbit_kappa = tuple(orbit_kappa)
        self._cache = {}

    def letter_parity(self, x):
        i = (x >> INDEX_SHIFT) & _MASK
        if x >> KIND_SHIFT:
            return self.orbit_parity[i]
        return self.form_parity[i]

    def word_parity(self, w):
        s = 0
        for x in w:
            s ^= self.letter_parity(x)
        return s

    def product(self, u, v, contract=True):
        """Normal-ordered ``u * v`` as ``{(hbar_shift, word): int}``.

        With ``contract`` false the p/q commutation terms are dropped, which
        gives the super-commutative product.
        """
        key = (u, v, contract)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        terms = {(0, u): 1}
        for x in v:
            out = {}
            for (dh, w), c in terms.items():
                self._insert(dh, w, c, x, out, contract)
            terms = {k: c for k, c in out.items() if c}
            if not terms:
                break
        if len(self._cache) > _CACHE_LIMIT:
            self._cache.clear()
        self._cache[key] = terms
        return terms

    def _insert(self, dh, w, c, x, out, contract):
        # move x in from the right end of w to its canonical slot
        px = self.letter_parity(x)
        is_q = (x >> KIND_SHIFT) == 1
        sign = 1
        i = len(w) - 1
        while i >= 0:
            y = w[i]
            if y < x:
                break
            if y == x:
                if px:
                    return
                break
            if contract and is_q and y - x == CONJ:
                k = (dh + 1, w[:i] + w[i + 1:])
                kap = self.orbit_kappa[(y >> INDEX_SHIFT) & _MASK]
                out[k] = out.get(k, 0) + sign * c * kap
            if px and self.letter_parity(y):
                sign = -sign
            i -= 1
        k = (dh, w[:i + 1] + (x,) + w[i + 1:])
        out[k] = out.get(k, 0) + sign * c

    def left_derivative(self, w, x):
        """``{word: int}`` for the left derivative of ``w`` by letter ``x``."""
        px = self.letter_parity(x)
        out = {}
        before = 0
        for i, y in enumerate(w):
            if y == x:
                k = w[:i] + w[i + 1:]
                out[k] = out.get(k, 0) + (-1 if px and before else 1)
            before ^= self.letter_parity(y)
        return {k: c for k, c in out.items() if c}

    def right_derivative(self, w, x):
        px = self.letter_parity(x)
        out = {}
        after = 0
        for i in range(len(w) - 1, -1, -1):
            y = w[i]
            if y == x:
                k = w[:i] + w[i + 1:]
                out[k] = out.get(k, 0) + (-1 if px and after else 1)
            after ^= self.letter_parity(y)
        return {k: c for k, c in out.items() if c}
