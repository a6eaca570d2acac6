"""Finite fields F_{p^k} with table arithmetic and batched numpy matrices.

Elements are the integers ``0 .. q-1``; the base-``p`` digits of an element
are its coefficients in the power basis ``1, x, ..., x^{k-1}`` of
``F_p[x]/(m(x))``.  The prime subfield is therefore ``{0, .., p-1}``.

Matrix products over ``F_q`` are done by replacing every entry with its
``k x k`` multiplication matrix over ``F_p`` and multiplying integer arrays
modulo ``p``; this keeps everything inside numpy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence

import numpy as np

from .exactcore import prime_power


class NotAPrimePower(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists (low degree first)


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _ptrim([x % p for x in a])
    m = _ptrim(m)
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, x in enumerate(m):
            a[shift + i] = (a[shift + i] - c * x) % p
        a = _ptrim(a)
    return a


def _is_irreducible(m, p) -> bool:
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            f = list(tail) + [1]
            if not _pmod(m, f, p):
                return False
    return True


def _find_modulus(p: int, k: int) -> List[int]:
    if k == 1:
        return [0, 1]
    for tail in itertools.product(range(p), repeat=k):
        m = list(tail) + [1]
        if m[0] != 0 and _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")


class FqField:
    """The field with ``q = p^k`` elements, ``p`` odd or even, ``k <= 4``."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise NotAPrimePower(f"{q} is not a prime power")
        self.p, self.k = pk
        if self.k > 4:
            raise NotAPrimePower("extension degree above 4 is not supported")
        self.q = q
        self.modulus = _find_modulus(self.p, self.k)
        p, k = self.p, self.k
        digits = np.array([[(a // p ** i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        self._digits = digits
        self._weights = np.array([p ** i for i in range(k)], dtype=np.int64)
        # multiplication by x in the power basis, as a k x k matrix over F_p
        X = np.zeros((k, k), dtype=np.int64)
        for i in range(k - 1):
            X[i + 1, i] = 1
        if k > 1:
            X[:, k - 1] = [(-c) % p for c in self.modulus[:k]]
        powers = [np.eye(k, dtype=np.int64)]
        for _ in range(k - 1):
            powers.append(X @ powers[-1] % p)
        # block[a] is the matrix of multiplication by a
        self.blocks = np.zeros((q, k, k), dtype=np.int64)
        for a in range(q):
            M = np.zeros((k, k), dtype=np.int64)
            for i in range(k):
                M = M + digits[a, i] * powers[i]
            self.blocks[a] = M % p
        self.add_t = np.zeros((q, q), dtype=np.int64)
        self.mul_t = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            self.add_t[a] = ((digits[a] + digits) % p) @ self._weights
            self.mul_t[a] = ((self.blocks[a] @ digits.T) % p).T @ self._weights
        self.neg_t = ((-digits) % p) @ self._weights
        self.inv_t = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_t[a] = int(np.nonzero(self.mul_t[a] == 1)[0][0])
        self.units = list(range(1, q))
        self.generator = self._find_generator()
        self.log = np.full(q, -1, dtype=np.int64)
        x = 1
        for e in range(q - 1):
            self.log[x] = e
            x = int(self.mul_t[x, self.generator])
        self.exp = np.zeros(q - 1, dtype=np.int64)
        for a in range(1, q):
            self.exp[self.log[a]] = a

    def __repr__(self):
        return f"FqField({self.q})"

    def __eq__(self, other):
        return isinstance(other, FqField) and other.q == self.q

    def __hash__(self):
        return hash(("FqField", self.q))

    def _find_generator(self) -> int:
        n = self.q - 1
        primes = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, r))]
        for g in range(1, self.q):
            if all(self.pow(g, n // r) != 1 for r in primes):
                return g
        raise AssertionError("no generator")

    # scalar arithmetic ----------------------------------------------------
    def add(self, a, b):
        return int(self.add_t[a, b])

    def sub(self, a, b):
        return int(self.add_t[a, self.neg_t[b]])

    def mul(self, a, b):
        return int(self.mul_t[a, b])

    def neg(self, a):
        return int(self.neg_t[a])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return int(self.inv_t[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    def from_rational(self, x) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has denominator divisible by {self.p}")
        return self.mul(self.from_int(x.numerator), self.inv(self.from_int(x.denominator)))

    def is_square(self, a) -> bool:
        return a == 0 or self.log[a] % 2 == 0

    def sqrt(self, a):
        if not self.is_square(a):
            raise ValueError(f"{a} is not a square")
        if a == 0:
            return 0
        return int(self.exp[self.log[a] // 2])

    @property
    def nonresidue(self) -> int:
        """Smallest element (in the integer encoding) that is not a square."""
        for a in range(1, self.q):
            if not self.is_square(a):
                return a
        raise ValueError("every element is a square")

    def subfield_basis(self) -> List[int]:
        """An F_p-basis of F_q (the powers of x)."""
        return [self.p ** i for i in range(self.k)]

    def embed(self, other: "FqField", a: int) -> int:
        """Image of ``a`` in the extension ``other`` (prime subfield only unless equal)."""
        if other.q == self.q:
            return a
        if a >= self.p or other.p != self.p:
            raise ValueError("only prime-subfield elements embed across fields")
        return a

    # vectorized arithmetic ------------------------------------------------
    def vadd(self, a, b):
        return self.add_t[a, b]

    def vmul(self, a, b):
        return self.mul_t[a, b]

    def vneg(self, a):
        return self.neg_t[a]

    def _blow(self, A: np.ndarray) -> np.ndarray:
        k = self.k
        B = self.blocks[A]  # (..., n, m, k, k)
        nd = A.ndim
        perm = tuple(range(nd - 2)) + (nd - 2, nd, nd - 1, nd + 1)
        B = B.transpose(perm)
        return B.reshape(A.shape[:-2] + (A.shape[-2] * k, A.shape[-1] * k))

    def _collapse(self, M: np.ndarray) -> np.ndarray:
        k = self.k
        n, m = M.shape[-2] // k, M.shape[-1] // k
        M = M.reshape(M.shape[:-2] + (n, k, m, k))[..., 0]  # first column of every block
        nd = M.ndim
        M = np.moveaxis(M, nd - 2, nd - 1)  # (..., n, m, k)
        return M @ self._weights

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.k == 1:
            return (A @ B) % self.p
        return self._collapse((self._blow(A) @ self._blow(B)) % self.p)

    def matadd(self, A, B):
        return self.add_t[np.asarray(A), np.asarray(B)]

    def matsub(self, A, B):
        return self.add_t[np.asarray(A), self.neg_t[np.asarray(B)]]

    def scal(self, c: int, A):
        return self.mul_t[c, np.asarray(A)]

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matinv(self, A) -> np.ndarray:
        A = [list(map(int, r)) for r in np.asarray(A)]
        n = len(A)
        M = [r + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
        for c in range(n):
            piv = next((r for r in range(c, n) if M[r][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            M[c], M[piv] = M[piv], M[c]
            iv = self.inv(M[c][c])
            M[c] = [self.mul(iv, x) for x in M[c]]
            for r in range(n):
                if r != c and M[r][c] != 0:
                    f = M[r][c]
                    M[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(M[r], M[c])]
        return np.array([r[n:] for r in M], dtype=np.int64)

    def rank(self, rows) -> int:
        M = [list(map(int, r)) for r in np.asarray(rows).reshape(len(rows), -1)] if len(rows) else []
        rk = 0
        ncols = len(M[0]) if M else 0
        for c in range(ncols):
            piv = next((r for r in range(rk, len(M)) if M[r][c] != 0), None)
            if piv is None:
                continue
            M[rk], M[piv] = M[piv], M[rk]
            iv = self.inv(M[rk][c])
            M[rk] = [self.mul(iv, x) for x in M[rk]]
            for r in range(len(M)):
                if r != rk and M[r][c] != 0:
                    f = M[r][c]
                    M[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(M[r], M[rk])]
            rk += 1
        return rk

    def nullity(self, A) -> int:
        A = np.asarray(A)
        return A.shape[1] - self.rank(A)

    def det(self, A) -> int:
        A = [list(map(int, r)) for r in np.asarray(A)]
        n = len(A)
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = self.neg(d)
            d = self.mul(d, A[c][c])
            iv = self.inv(A[c][c])
            for r in range(c + 1, n):
                if A[r][c]:
                    f = self.mul(A[r][c], iv)
                    A[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(A[r], A[c])]
        return d

    def rational_matrix(self, M: Sequence[Sequence]) -> np.ndarray:
        return np.array([[self.from_rational(x) for x in r] for r in M], dtype=np.int64)


@lru_cache(maxsize=None)
def field(q: int) -> FqField:
    return FqField(q)


def mat_key(M: np.ndarray) -> bytes:
    return np.ascontiguousarray(M, dtype=np.int64).tobytes()
