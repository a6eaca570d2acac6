"""Exact arithmetic used everywhere else in the package.

Rationals are :class:`fractions.Fraction`.  On top of that we provide

* :class:`QuadNum` -- elements ``a + b*sqrt(d)`` of a real quadratic field,
* :class:`QPoly` -- Laurent polynomials in the indeterminate ``q``,
* :class:`RatFunc` -- quotients of two ``QPoly`` kept in lowest terms,
* :func:`snf` -- Smith normal form of an integer matrix,
* :class:`CountFn` -- point counts of diagonalizable groups over ``F_q``,

plus a handful of dense linear-algebra helpers over ``Fraction``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Rat = Fraction


class DivisionNotExact(ArithmeticError):
    pass


class BadCharacteristic(ValueError):
    pass


class FieldMismatch(TypeError):
    pass


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


# ---------------------------------------------------------------------------
# real quadratic fields


def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadNum:
    """The number ``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 6):
        if not _squarefree(d):
            raise ValueError(f"d={d} is not a square-free integer > 1")
        self.a = as_rat(a)
        self.b = as_rat(b)
        self.d = d

    def _coerce(self, other) -> "QuadNum":
        if isinstance(other, QuadNum):
            if other.d != self.d:
                raise FieldMismatch(f"sqrt({self.d}) mixed with sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadNum(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadNum(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadNum(self.a * o.a + self.d * self.b * o.b,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conj(self) -> "QuadNum":
        return QuadNum(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        num = self * o.conj()
        return QuadNum(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadNum):
            return (self.a, self.b) == (other.a, other.b) and (self.d == other.d or self.b == 0)
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"QuadNum({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.d})"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt({self.d})"


def field_of(values: Iterable) -> Optional[int]:
    """Return the common radicand of the quadratic entries (None if all rational)."""
    d = None
    for v in values:
        if isinstance(v, QuadNum):
            if d is None:
                d = v.d
            elif v.d != d:
                raise FieldMismatch(f"entries over sqrt({d}) and sqrt({v.d})")
    return d


def is_zero(x) -> bool:
    if isinstance(x, QuadNum):
        return x.is_zero()
    return x == 0


# ---------------------------------------------------------------------------
# Laurent polynomials in q


class QPoly:
    """Laurent polynomial in ``q`` with rational coefficients.

    Stored as an immutable mapping degree -> nonzero Fraction.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c: Dict[int, Fraction] = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, dict):
            for k, v in coeffs.items():
                v = as_rat(v)
                if v:
                    c[int(k)] = v
        else:
            for k, v in enumerate(coeffs):
                v = as_rat(v)
                if v:
                    c[k] = v
        self._c = c

    # constructors
    @classmethod
    def const(cls, c) -> "QPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c=1) -> "QPoly":
        return cls({k: c})

    @classmethod
    def q(cls) -> "QPoly":
        return cls({1: 1})

    @classmethod
    def coerce(cls, x) -> "QPoly":
        if isinstance(x, QPoly):
            return x
        return cls.const(x)

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        if not self._c:
            return -(10 ** 9)
        return max(self._c)

    def low_degree(self) -> int:
        if not self._c:
            return 10 ** 9
        return min(self._c)

    def leading(self) -> Fraction:
        if not self._c:
            return Fraction(0)
        return self._c[self.degree()]

    def is_polynomial(self) -> bool:
        return self.is_zero() or self.low_degree() >= 0

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    # ring structure
    def __add__(self, other):
        other = QPoly.coerce(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return QPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-QPoly.coerce(other))

    def __rsub__(self, other):
        return QPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly({k: v * other for k, v in self._c.items()})
        other = QPoly.coerce(other)
        c: Dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return QPoly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise DivisionNotExact("negative power of a non-monomial")
            (k, v), = self._c.items()
            return QPoly({k * n: Fraction(1) / v ** (-n)})
        out = QPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "QPoly":
        """Multiply by ``q**k``."""
        return QPoly({d + k: v for d, v in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Exact value at a rational (or integer) point."""
        x = as_rat(x) if not isinstance(x, QuadNum) else x
        total = Fraction(0)
        for k, v in self._c.items():
            if k >= 0:
                total = total + v * x ** k
            else:
                total = total + v / x ** (-k)
        return total

    def divmod(self, other: "QPoly") -> Tuple["QPoly", "QPoly"]:
        """Euclidean division of ordinary polynomials (both with nonnegative support)."""
        other = QPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not (self.is_polynomial() and other.is_polynomial()):
            raise ValueError("divmod needs ordinary polynomials")
        rem = dict(self._c)
        quo: Dict[int, Fraction] = {}
        dd, lc = other.degree(), other.leading()
        while rem:
            top = max(rem)
            if top < dd:
                break
            f = rem[top] / lc
            quo[top - dd] = f
            for k, v in other._c.items():
                kk = k + top - dd
                nv = rem.get(kk, 0) - f * v
                if nv:
                    rem[kk] = nv
                else:
                    rem.pop(kk, None)
        return QPoly(quo), QPoly(rem)

    def exact_div(self, other) -> "QPoly":
        """Divide, raising :class:`DivisionNotExact` unless the remainder vanishes.

        Laurent factors are handled by shifting both operands to ordinary
        polynomials first.
        """
        other = QPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("exact_div by zero")
        if self.is_zero():
            return QPoly()
        sa, so = self.low_degree(), other.low_degree()
        a, b = self.shift(-sa), other.shift(-so)
        quo, rem = a.divmod(b)
        if not rem.is_zero():
            raise DivisionNotExact(f"{self} is not divisible by {other}")
        return quo.shift(sa - so)

    def monic(self) -> "QPoly":
        return self * (Fraction(1) / self.leading())

    # text format
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"QPoly({format_poly(self)!r})"

    def to_json(self) -> str:
        return format_poly(self)


def format_poly(p: QPoly) -> str:
    """Render as ``2*q^2+12*q+48`` (descending degree, ``/`` for fractions)."""
    if p.is_zero():
        return "0"
    parts: List[str] = []
    for k in sorted(p.coeffs, reverse=True):
        c = p[k]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(q(?:\s*\^\s*(-?\d+))?)?")


def parse_poly(text: str) -> QPoly:
    """Inverse of :func:`format_poly`; also tolerates spaces and ``**``."""
    s = text.replace("**", "^").replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    coeffs: Dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, num, mono, exp = m.groups()
        if num is None and mono is None:
            raise ValueError(f"dangling sign in {text!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if mono is None else (1 if exp is None else int(exp))
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"unexpected {s[pos]!r} in {text!r}")
    return QPoly(coeffs)


def interpolate(points: Sequence[Tuple[int, Fraction]]) -> QPoly:
    """Lagrange interpolation through ``(x, y)`` pairs with distinct ``x``."""
    xs = [as_rat(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    out = QPoly()
    for i, (xi, yi) in enumerate(points):
        basis = QPoly.const(1)
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * QPoly({1: 1, 0: -xj})
                denom *= as_rat(xi) - xj
        out = out + basis * (as_rat(yi) / denom)
    return out


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd of two ordinary polynomials (zero if both are zero)."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a if a.is_zero() else a.monic()


class RatFunc:
    """A quotient ``num/den`` of Laurent polynomials kept in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = QPoly.coerce(num)
        den = QPoly.const(1) if den is None else QPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = QPoly(), QPoly.const(1)
            return
        # clear Laurent parts, then cancel the polynomial gcd
        n = num.shift(-num.low_degree())
        d = den.shift(-den.low_degree())
        g = poly_gcd(n, d)
        n, d = n.exact_div(g), d.exact_div(g)
        lc = d.leading()
        n, d = n * (1 / lc), d * (1 / lc)
        self.num = n.shift(num.low_degree() - den.low_degree())
        self.den = d

    def __add__(self, other):
        other = other if isinstance(other, RatFunc) else RatFunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = other if isinstance(other, RatFunc) else RatFunc(other)
        return self + (-other)

    def __mul__(self, other):
        other = other if isinstance(other, RatFunc) else RatFunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = other if isinstance(other, RatFunc) else RatFunc(other)
        return RatFunc(self.num * other.den, self.den * other.num)

    def is_laurent(self) -> bool:
        return self.den.degree() == 0

    def to_qpoly(self) -> QPoly:
        if not self.is_laurent():
            raise DivisionNotExact(f"({self.num})/({self.den}) is not a Laurent polynomial")
        return self.num * (1 / self.den.leading())

    def evaluate(self, x) -> Fraction:
        return self.num.evaluate(x) / self.den.evaluate(x)

    def __repr__(self):
        return f"RatFunc(({self.num})/({self.den}))"


# ---------------------------------------------------------------------------
# integer matrices and Smith normal form

IntMat = List[List[int]]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def identity(n: int) -> IntMat:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant via fraction-free Bareiss elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def snf(m: Sequence[Sequence[int]]) -> Tuple[IntMat, IntMat, IntMat]:
    """Smith normal form: returns ``(U, D, V)`` with ``U*m*V == D``.

    ``U`` and ``V`` are unimodular and the diagonal of ``D`` is a
    nonnegative divisibility chain.
    """
    A = [list(map(int, r)) for r in m]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U, V = identity(rows), identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f*row_src
        for M in (A, U):
            M[dst] = [x + f * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, f):
        for M in (A, V):
            for r in M:
                r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        # pick the smallest nonzero entry of the remaining block as pivot
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility of the rest of the block
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if A[i][j] % A[t][t]:
                            add_row(t, i, 1)
                            done = False
                            break
                    if not done:
                        break
        if A[t][t] < 0:
            for M in (A, U):
                M[t] = [-x for x in M[t]]
        t += 1
    return U, A, V


def elementary_divisors(m: Sequence[Sequence[int]]) -> List[int]:
    _, D, _ = snf(m)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


# ---------------------------------------------------------------------------
# dense linear algebra over Fraction (also works for QuadNum entries)


def rref(rows: Sequence[Sequence]) -> Tuple[list, List[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(r) for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if not is_zero(A[i][c])), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c] if not isinstance(A[r][c], int) else Fraction(1, A[r][c])
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and not is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``."""
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, piv = rref(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def in_span(vec: Sequence, basis: Sequence[Sequence]) -> bool:
    if not basis:
        return all(is_zero(x) for x in vec)
    return rank(list(basis) + [list(vec)]) == rank(basis)


def solve_coords(vec: Sequence, basis: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """Coordinates of ``vec`` in the (independent) ``basis``; None if outside the span."""
    k = len(basis)
    n = len(vec)
    aug = [[basis[j][i] for j in range(k)] + [vec[i]] for i in range(n)]
    R, piv = rref(aug)
    if k in piv:
        return None
    sol = [Fraction(0)] * k
    for i, pc in enumerate(piv):
        sol[pc] = R[i][k]
    return sol


# ---------------------------------------------------------------------------
# point counts of diagonalizable groups


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """Return ``(p, k)`` with ``q == p**k`` or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


class CountFn:
    """Number of ``F_q``-points of a split diagonalizable group, and integer
    combinations of such counts.

    A center-type term is ``(q-1)**r * prod(gcd(d_i, q-1))``; the object holds
    an integer combination of these.  ``poly`` is the polynomial valid on the
    congruence class ``q = 1 (mod modulus)`` where every gcd is maximal.
    """

    __slots__ = ("terms", "bad_primes")

    def __init__(self, terms: Dict[Tuple[int, Tuple[int, ...]], int], bad_primes: Tuple[int, ...] = ()):
        self.terms = {k: v for k, v in terms.items() if v}
        self.bad_primes = tuple(sorted(set(bad_primes)))

    @classmethod
    def center(cls, free_rank: int, gcd_factors: Sequence[int] = ()) -> "CountFn":
        fac = tuple(sorted(d for d in gcd_factors if d != 1))
        if any(d <= 0 for d in fac):
            raise ValueError("torsion orders must be positive")
        return cls({(free_rank, fac): 1})

    @classmethod
    def constant(cls, c: int) -> "CountFn":
        return cls({(0, ()): c})

    @property
    def modulus(self) -> int:
        return _lcm(d for (_, fac) in self.terms for d in fac)

    def is_center_type(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) == 1

    @property
    def freeRank(self) -> Optional[int]:
        return next(iter(self.terms))[0] if self.is_center_type() else None

    @property
    def gcdFactors(self) -> Optional[List[int]]:
        return list(next(iter(self.terms))[1]) if self.is_center_type() else None

    @property
    def poly(self) -> QPoly:
        out = QPoly()
        qm1 = QPoly({1: 1, 0: -1})
        for (r, fac), c in self.terms.items():
            out = out + qm1 ** r * (c * math.prod(fac))
        return out

    def evaluate(self, q: int) -> int:
        pk = prime_power(q)
        if pk is None:
            raise BadCharacteristic(f"{q} is not a prime power")
        if pk[0] in self.bad_primes:
            raise BadCharacteristic(f"characteristic {pk[0]} excluded for this count")
        return sum(c * (q - 1) ** r * math.prod(math.gcd(d, q - 1) for d in fac)
                   for (r, fac), c in self.terms.items())

    def __add__(self, other: "CountFn") -> "CountFn":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return CountFn(t, self.bad_primes + other.bad_primes)

    def __neg__(self):
        return CountFn({k: -v for k, v in self.terms.items()}, self.bad_primes)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "CountFn":
        return CountFn({k: c * v for k, v in self.terms.items()}, self.bad_primes)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        t: Dict[Tuple[int, Tuple[int, ...]], int] = {}
        for (r1, f1), c1 in self.terms.items():
            for (r2, f2), c2 in other.terms.items():
                k = (r1 + r2, tuple(sorted(f1 + f2)))
                t[k] = t.get(k, 0) + c1 * c2
        return CountFn(t, self.bad_primes + other.bad_primes)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CountFn) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_json(self) -> dict:
        out = {"modulus": self.modulus, "poly": format_poly(self.poly),
               "freeRank": self.freeRank, "gcdFactors": self.gcdFactors}
        if not self.is_center_type():
            out["terms"] = [{"coeff": c, "freeRank": r, "gcdFactors": list(f)}
                            for (r, f), c in sorted(self.terms.items())]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CountFn":
        if data.get("terms"):
            return cls({(t["freeRank"], tuple(t["gcdFactors"])): t["coeff"] for t in data["terms"]})
        return cls.center(data["freeRank"], data["gcdFactors"])

    def __repr__(self):
        return f"CountFn({self.to_json()})"
