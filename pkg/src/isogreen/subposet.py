"""Closed subsystems of a root system, the posets of Levi and pseudo-Levi
subsystems, isolation, Weyl orbits and Moebius functions.

A subsystem is represented by a ``frozenset`` of root indices.  Two closure
operators are used:

* ``zclosure(S) = <S>_Z  cap Phi``  (pseudo-Levi subsystems are its fixed points)
* ``qclosure(S) = span_Q(S) cap Phi``  (Levi subsystems are its fixed points)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .exactcore import rank, solve_coords
from .rootsys import RootSystem, WeylGroup

Subsystem = FrozenSet[int]


class NotComparable(ValueError):
    pass


def _int_coords(rs: RootSystem, i: int) -> Tuple[int, ...]:
    cache = rs.__dict__.setdefault("_intco", {})
    if i not in cache:
        cache[i] = tuple(int(x) for x in rs.simple_coords(i))
    return cache[i]


def lattice_basis(vectors: Sequence[Sequence[int]]) -> List[List[int]]:
    """A Z-basis (row echelon form) of the lattice spanned by integer vectors."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return []
    basis: List[List[int]] = []
    for col in range(len(rows[0])):
        while True:  # Euclid on the column until one row carries it
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            new = [piv]
            for r in rows:
                if r is piv:
                    continue
                if r[col] != 0:
                    f = r[col] // piv[col]
                    r = [a - f * b for a, b in zip(r, piv)]
                if any(r):
                    new.append(r)
            rows = new
        nz = [r for r in rows if r[col] != 0]
        if nz:
            basis.append(nz[0])
            rows = [r for r in rows if r is not nz[0]]
    return basis


def _in_zspan(v: Sequence[int], basis: List[List[int]], char_p: Optional[int] = None) -> bool:
    if not basis:
        return not any(v)
    c = solve_coords([Fraction(x) for x in v], [[Fraction(x) for x in b] for b in basis])
    if c is None:
        return False
    if char_p is None:
        return all(x.denominator == 1 for x in c)
    # saturation away from nothing but p: denominators may only contain p
    for x in c:
        d = x.denominator
        while d % char_p == 0:
            d //= char_p
        if d != 1:
            return False
    return True


def zclosure(rs: RootSystem, S: Iterable[int], char_p: Optional[int] = None) -> Subsystem:
    """``<S>_Z cap Phi``.

    With ``char_p`` set, the lattice is replaced by its p-saturation, which is
    the set of roots trivial on every torus element that kills ``S`` over a
    field of characteristic p.
    """
    S = list(S)
    if not S:
        return frozenset()
    basis = lattice_basis([_int_coords(rs, i) for i in S])
    return frozenset(i for i in range(rs.n_roots)
                     if _in_zspan(_int_coords(rs, i), basis, char_p))


def qclosure(rs: RootSystem, S: Iterable[int], within: Optional[Iterable[int]] = None) -> Subsystem:
    """``span_Q(S) cap Phi`` (or cap ``within`` when given)."""
    S = list(S)
    if not S:
        return frozenset()
    vecs = [rs.roots[i] for i in S]
    r0 = rank(vecs)
    pool = range(rs.n_roots) if within is None else within
    return frozenset(i for i in pool if rank(vecs + [rs.roots[i]]) == r0)


def minimal_levi(rs: RootSystem, psi: Iterable[int]) -> Subsystem:
    return qclosure(rs, psi)


def is_isolated(rs: RootSystem, psi: Iterable[int]) -> bool:
    return len(qclosure(rs, psi)) == rs.n_roots


def is_subsystem(rs: RootSystem, psi: Iterable[int]) -> bool:
    """Closed under negation and under the reflections it contains."""
    psi = frozenset(psi)
    for a in psi:
        if rs.neg(a) not in psi:
            return False
        for b in psi:
            c = rs.pairing(b, a)
            img = tuple(x - c * y for x, y in zip(rs.roots[b], rs.roots[a]))
            if rs.find(img) not in psi:
                return False
    return True


def positive_part(rs: RootSystem, psi: Iterable[int]) -> List[int]:
    return sorted(i for i in psi if rs.is_positive(i))


def simple_roots_of(rs: RootSystem, psi: Iterable[int]) -> List[int]:
    """Simple roots of the positive system ``psi cap Phi+``."""
    pos = positive_part(rs, psi)
    posset = set(pos)
    out = []
    for a in pos:
        decomposable = False
        for b in pos:
            if b == a:
                continue
            diff = tuple(x - y for x, y in zip(rs.roots[a], rs.roots[b]))
            j = rs.find(diff)
            if j is not None and j in posset:
                decomposable = True
                break
        if not decomposable:
            out.append(a)
    return out


def subsystem_rank(rs: RootSystem, psi: Iterable[int]) -> int:
    psi = list(psi)
    return rank([rs.roots[i] for i in psi]) if psi else 0


def components(rs: RootSystem, psi: Iterable[int]) -> List[List[int]]:
    """Irreducible components of ``psi`` (lists of root indices)."""
    psi = sorted(psi)
    simple = simple_roots_of(rs, psi)
    # group simple roots by non-orthogonality
    groups: List[List[int]] = []
    for s in simple:
        hit = [g for g in groups if any(rs.pairing(s, t) != 0 for t in g)]
        merged = [s] + [t for g in hit for t in g]
        groups = [g for g in groups if g not in hit] + [merged]
    out = []
    for g in groups:
        vecs = [rs.roots[s] for s in g]
        comp = [i for i in psi if solve_coords(rs.roots[i], vecs) is not None]
        out.append(sorted(comp))
    out.sort()
    return out


def cartan_type(rs: RootSystem, psi: Iterable[int]) -> str:
    """Label such as ``"A1xA1"``, ``"C2"`` or ``"T"`` (empty) for a subsystem."""
    parts = []
    for comp in components(rs, psi):
        simple = simple_roots_of(rs, comp)
        r = len(simple)
        n = len(comp)
        if n == r * (r + 1):
            letter = "A"
        elif r == 2 and n == 12:
            letter = "G"
        elif n == 2 * r * r:
            # B_r and C_r have the same size; in epsilon coordinates the
            # roots on coordinate axes are long for C and short for B
            letter = "C" if _long_on_axes(rs, comp) else "B"
        elif n == 2 * r * (r - 1):
            letter = "D"
        else:
            letter = "?"
        parts.append(f"{letter}{r}")
    parts.sort()
    return "x".join(parts) if parts else "T"


def _long_on_axes(rs: RootSystem, comp: List[int]) -> bool:
    norms = [sum(x * x for x in rs.roots[i]) for i in comp]
    long_norm = max(norms)
    for i, nm in zip(comp, norms):
        v = rs.roots[i]
        if sum(1 for x in v if x != 0) == 1:
            return nm == long_norm
    return False


# ---------------------------------------------------------------------------
# posets


@dataclass
class Poset:
    rs: RootSystem
    kind: str
    elements: List[Subsystem]
    _pos: Dict[Subsystem, int] = field(default_factory=dict, repr=False)
    _mu: Dict[Tuple[int, int], int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._pos = {e: i for i, e in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return frozenset(x) in self._pos

    def __iter__(self):
        return iter(self.elements)

    def index(self, x) -> int:
        return self._pos[frozenset(x)]

    def leq(self, x, y) -> bool:
        return frozenset(x) <= frozenset(y)

    @property
    def top(self) -> Subsystem:
        return max(self.elements, key=len)

    @property
    def bottom(self) -> Subsystem:
        return min(self.elements, key=len)

    def interval(self, x, y) -> List[Subsystem]:
        x, y = frozenset(x), frozenset(y)
        return [z for z in self.elements if x <= z <= y]

    def mobius(self, x, y) -> int:
        x, y = frozenset(x), frozenset(y)
        if x not in self._pos or y not in self._pos:
            raise KeyError("element not in poset")
        if not x <= y:
            raise NotComparable("mobius(x, y) needs x <= y")
        key = (self._pos[x], self._pos[y])
        if key in self._mu:
            return self._mu[key]
        if x == y:
            val = 1
        else:
            val = -sum(self.mobius(x, z) for z in self.elements if x <= z < y)
        self._mu[key] = val
        return val

    def mobius_or_zero(self, x, y) -> int:
        x, y = frozenset(x), frozenset(y)
        return self.mobius(x, y) if x <= y else 0

    def mobius_table(self) -> List[List[Optional[int]]]:
        return [[self.mobius(x, y) if x <= y else None for y in self.elements] for x in self.elements]


def _enumerate(rs: RootSystem, closure, kind: str) -> Poset:
    found = set()
    pos = list(rs.positive)
    r = rs.rank
    for k in range(0, r + 1):
        for S in itertools.combinations(pos, k):
            if k > 1 and rank([rs.roots[i] for i in S]) < k:
                continue  # a dependent set is never needed as a generating base
            found.add(closure(S))
    elems = sorted(found, key=lambda e: (len(e), sorted(e)))
    return Poset(rs, kind, elems)


def enumerate_pseudo_levis(rs: RootSystem, char_p: Optional[int] = None) -> Poset:
    """All Z-closed subsystems (the poset of standard pseudo-Levi subsystems)."""
    cache = rs.__dict__.setdefault("_posets", {})
    key = ("pseudo-levi", char_p)
    if key not in cache:
        cache[key] = _enumerate(rs, lambda S: zclosure(rs, S, char_p), "pseudo-levi")
    return cache[key]


def enumerate_levis(rs: RootSystem) -> Poset:
    """All Q-closed subsystems (the poset of standard Levi subsystems)."""
    cache = rs.__dict__.setdefault("_posets", {})
    if "levi" not in cache:
        cache["levi"] = _enumerate(rs, lambda S: qclosure(rs, S), "levi")
    return cache["levi"]


def pseudo_levis_of(rs: RootSystem, phi_e: Subsystem) -> Poset:
    """The poset of subsystems of ``phi_e`` that are Z-closed in the whole of Phi,
    enumerated on its own (generating sets drawn from ``phi_e`` only)."""
    found = set()
    pos = positive_part(rs, phi_e)
    r = subsystem_rank(rs, phi_e)
    for k in range(0, r + 1):
        for S in itertools.combinations(pos, k):
            if k > 1 and rank([rs.roots[i] for i in S]) < k:
                continue
            found.add(zclosure(rs, S))
    elems = sorted(found, key=lambda e: (len(e), sorted(e)))
    return Poset(rs, "pseudo-levi", elems)


def levis_of(rs: RootSystem, phi_e: Subsystem) -> Poset:
    """Levi subsystems of the root system ``phi_e`` (Q-closed inside ``phi_e``)."""
    found = set()
    pos = positive_part(rs, phi_e)
    r = subsystem_rank(rs, phi_e)
    for k in range(0, r + 1):
        for S in itertools.combinations(pos, k):
            if k > 1 and rank([rs.roots[i] for i in S]) < k:
                continue
            found.add(qclosure(rs, S, within=phi_e))
    elems = sorted(found, key=lambda e: (len(e), sorted(e)))
    return Poset(rs, "levi", elems)


def isolated(rs: RootSystem, poset: Poset) -> List[Subsystem]:
    return [e for e in poset if is_isolated(rs, e)]


def phi_of_point(rs: RootSystem, x: Sequence[Fraction]) -> Subsystem:
    """``Phi_t`` for the torus point ``t`` with ``chi_i(t) = exp(2 pi i x_i)``
    on the lattice basis ``chi_i``."""
    coords = getattr(rs, "_lat_coords", None)
    if coords is None:
        coords = [rs.lattice_coords(r) for r in rs.roots]
        object.__setattr__(rs, "_lat_coords", coords)
    return frozenset(i for i, c in enumerate(coords)
                     if sum(a * b for a, b in zip(c, x)).denominator == 1)


def torus_witness(rs: RootSystem, psi: Iterable[int], max_order: int = 24) -> Optional[Tuple[Fraction, ...]]:
    """A torus point of order at most ``max_order`` whose centralizer root
    system is exactly ``psi``, found by exhaustive search; ``None`` if there
    is none of that order."""
    target = frozenset(psi)
    r = len(rs.lattice)
    for m in range(1, max_order + 1):
        for num in itertools.product(range(m), repeat=r):
            if m > 1 and all(k % 2 == 0 for k in num) and m % 2 == 0:
                continue  # already seen at order m / 2
            x = tuple(Fraction(k, m) for k in num)
            if phi_of_point(rs, x) == target:
                return x
    return None


# ---------------------------------------------------------------------------
# Weyl orbits


def act_on(w, psi: Iterable[int]) -> Subsystem:
    return frozenset(w.perm[i] for i in psi)


@dataclass
class OrbitPartition:
    orbits: List[List[Subsystem]]
    orbit_of: Dict[Subsystem, int]

    def size(self, x) -> int:
        return len(self.orbits[self.orbit_of[frozenset(x)]])

    def representatives(self) -> List[Subsystem]:
        return [o[0] for o in self.orbits]


def w_orbits(poset: Poset, W: WeylGroup, group_elements=None) -> OrbitPartition:
    """Partition the poset into orbits of ``W`` (or of the given subgroup)."""
    elems = W.elements if group_elements is None else group_elements
    orbit_of: Dict[Subsystem, int] = {}
    orbits: List[List[Subsystem]] = []
    for x in poset.elements:
        if x in orbit_of:
            continue
        orb = sorted({act_on(w, x) for w in elems}, key=lambda e: (len(e), sorted(e)))
        for y in orb:
            if y not in poset:
                raise ValueError("group does not preserve the poset")
            orbit_of[y] = len(orbits)
        orbits.append(orb)
    return OrbitPartition(orbits, orbit_of)


def stabilizer_size(W: WeylGroup, psi: Subsystem) -> int:
    return sum(1 for w in W.elements if act_on(w, psi) == psi)
