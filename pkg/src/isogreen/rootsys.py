"""Reduced crystallographic root systems of small rank in orthogonal
epsilon-coordinates, with the Weyl group enumerated as root permutations.

Conventions
-----------
* Roots live in an ambient ``Q^m`` with the standard dot product.
* ``A_n`` sits in the sum-zero hyperplane of ``Q^(n+1)``, ``B_n, C_n, D_n``
  in ``Q^n`` and ``G_2`` in the sum-zero plane of ``Q^3``.
* Products are orthogonal direct sums of the ambient spaces.
* The Cartan subalgebra ``t`` is identified with the span of the character
  lattice basis, so ``t`` may be larger than the root span (``GL2``).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactcore import rank, solve_coords

Vec = Tuple[Fraction, ...]


class UnsupportedType(ValueError):
    pass


class RankTooLarge(ValueError):
    pass


def vec(*xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def coroot(alpha: Vec) -> Vec:
    return vscale(Fraction(2) / dot(alpha, alpha), alpha)


# ---------------------------------------------------------------------------
# single irreducible factors


def _unit(n: int, i: int) -> List[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def _factor(letter: str, r: int) -> Tuple[int, List[Vec], List[Vec]]:
    """Return (ambient dim, all roots, simple roots) of one irreducible factor."""
    e = lambda n, i: _unit(n, i)
    roots: List[Vec] = []
    if letter == "A":
        n = r + 1
        for i, j in itertools.permutations(range(n), 2):
            roots.append(tuple(a - b for a, b in zip(e(n, i), e(n, j))))
        simple = [tuple(a - b for a, b in zip(e(n, i), e(n, i + 1))) for i in range(r)]
        return n, roots, simple
    if letter in "BCD":
        n = r
        if letter == "D" and r < 2:
            raise UnsupportedType("D_n needs n >= 2")
        for i, j in itertools.combinations(range(n), 2):
            for si, sj in itertools.product((1, -1), repeat=2):
                roots.append(tuple(si * a + sj * b for a, b in zip(e(n, i), e(n, j))))
        for i in range(n):
            for s in (1, -1):
                if letter == "B":
                    roots.append(tuple(s * a for a in e(n, i)))
                elif letter == "C":
                    roots.append(tuple(2 * s * a for a in e(n, i)))
        simple = [tuple(a - b for a, b in zip(e(n, i), e(n, i + 1))) for i in range(r - 1)]
        if letter == "B":
            simple.append(tuple(e(n, n - 1)))
        elif letter == "C":
            simple.append(tuple(2 * a for a in e(n, n - 1)))
        else:
            simple.append(tuple(a + b for a, b in zip(e(n, n - 2), e(n, n - 1))))
        return n, roots, simple
    if letter == "G":
        if r != 2:
            raise UnsupportedType("only G2")
        n = 3
        for i, j in itertools.permutations(range(3), 2):
            roots.append(tuple(a - b for a, b in zip(e(3, i), e(3, j))))
        for i in range(3):
            v = [Fraction(-1)] * 3
            v[i] = Fraction(2)
            roots.append(tuple(v))
            roots.append(tuple(-x for x in v))
        simple = [vec(1, -1, 0), vec(-2, 1, 1)]
        return n, roots, simple
    raise UnsupportedType(f"type {letter} is not supported")


_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4, "G": 2}
_MAX_RANK = {"A": 4, "B": 4, "C": 4, "D": 4, "G": 2}


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class CartanSpec:
    """Root datum description: irreducible factors plus a basis of the
    character lattice ``X`` written in ambient coordinates.

    ``lattice`` = None means "use the root lattice", i.e. the adjoint datum
    of a semisimple group.
    """

    factors: Tuple[Tuple[str, int], ...]
    lattice: Optional[Tuple[Vec, ...]] = None
    extra_dims: int = 0  # additional ambient coordinates (central torus factors)
    name: str = ""

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)


@dataclass
class WeylElement:
    perm: Tuple[int, ...]  # perm[i] = index of w(root_i)
    matrix: Tuple[Vec, ...]  # rows; w(v) = matrix @ v
    word: Tuple[int, ...] = ()  # reduced word in simple reflections

    def __hash__(self):
        return hash(self.perm)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass
class RootSystem:
    spec: CartanSpec
    ambient: int
    roots: List[Vec]
    positive: List[int]
    simple: List[int]
    space: List[Vec]  # basis of t inside the ambient space
    lattice: List[Vec]  # basis of the character lattice X
    component_of_simple: List[int] = field(default_factory=list)
    _index: Dict[Vec, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {r: i for i, r in enumerate(self.roots)}

    def index(self, v: Vec) -> int:
        return self._index[tuple(Fraction(x) for x in v)]

    def find(self, v) -> Optional[int]:
        return self._index.get(tuple(Fraction(x) for x in v))

    @property
    def rank(self) -> int:
        return len(self.simple)

    @property
    def n_roots(self) -> int:
        return len(self.roots)

    @property
    def n_positive(self) -> int:
        return len(self.positive)

    def is_positive(self, i: int) -> bool:
        return i in self._posset

    @property
    def _posset(self):
        s = getattr(self, "_ps", None)
        if s is None:
            s = frozenset(self.positive)
            object.__setattr__(self, "_ps", s)
        return s

    def neg(self, i: int) -> int:
        return self._index[tuple(-x for x in self.roots[i])]

    def coroot(self, i: int) -> Vec:
        return coroot(self.roots[i])

    def pairing(self, i: int, j: int) -> Fraction:
        """Cartan integer <root_i, root_j^vee>."""
        return dot(self.roots[i], self.coroot(j))

    def simple_coords(self, i: int) -> List[Fraction]:
        return solve_coords(self.roots[i], [self.roots[s] for s in self.simple])

    def height(self, i: int) -> Fraction:
        return sum(self.simple_coords(i))

    def lattice_coords(self, v: Sequence) -> List[int]:
        """Coordinates of ``v`` in the character lattice basis (must be integral)."""
        c = solve_coords(list(v), list(self.lattice))
        if c is None or any(x.denominator != 1 for x in c):
            raise ValueError(f"{v} is not in the character lattice")
        return [int(x) for x in c]

    def components(self) -> List[List[int]]:
        """Irreducible components as lists of root indices."""
        comps: Dict[int, List[int]] = {}
        for i in range(len(self.roots)):
            c = self.simple_coords(i)
            supp = {self.component_of_simple[k] for k, x in enumerate(c) if x != 0}
            (cid,) = supp
            comps.setdefault(cid, []).append(i)
        return [comps[k] for k in sorted(comps)]

    def center_basis(self) -> List[Vec]:
        """Basis of the part of ``t`` orthogonal to every root (Lie algebra of Z_G)."""
        from .exactcore import nullspace
        k = len(self.space)
        # combinations x of space vectors with <sum x_j space_j, alpha> = 0
        rows = [[dot(s, self.roots[a]) for s in self.space] for a in self.simple]
        sols = nullspace(rows, k) if rows else nullspace([], k)
        return [tuple(sum(x[j] * self.space[j][t] for j in range(k)) for t in range(self.ambient))
                for x in sols]


@dataclass
class WeylGroup:
    rs: RootSystem
    elements: List[WeylElement]
    generators: List[WeylElement]

    def __len__(self):
        return len(self.elements)

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    def act(self, w: WeylElement, v: Sequence) -> tuple:
        return weyl_act(w, v)

    def compose(self, a: WeylElement, b: WeylElement) -> WeylElement:
        """``a o b``."""
        perm = tuple(a.perm[b.perm[i]] for i in range(len(a.perm)))
        return self._by_perm[perm]

    @property
    def _by_perm(self):
        d = getattr(self, "_bp", None)
        if d is None:
            d = {w.perm: w for w in self.elements}
            object.__setattr__(self, "_bp", d)
        return d

    def inverse(self, w: WeylElement) -> WeylElement:
        inv = [0] * len(w.perm)
        for i, j in enumerate(w.perm):
            inv[j] = i
        return self._by_perm[tuple(inv)]

    def subgroup_order(self, root_indices) -> int:
        """Order of the reflection subgroup generated by the given roots."""
        return len(reflection_subgroup(self, root_indices))


def weyl_act(w: WeylElement, v: Sequence) -> tuple:
    """Apply the Weyl element (as a matrix on the ambient space) to ``v``."""
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in w.matrix)


def reflection_matrix(alpha: Vec) -> Tuple[Vec, ...]:
    n = len(alpha)
    av = coroot(alpha)
    return tuple(tuple(Fraction(int(i == j)) - alpha[i] * av[j] for j in range(n)) for i in range(n))


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@dataclass
class ExtendedBase:
    nodes: List[List[int]]  # per component: simple root indices followed by -theta
    highest: List[int]
    marks: List[List[int]]  # theta = sum marks * simple roots (per component)

    def all_nodes(self) -> List[int]:
        return [i for comp in self.nodes for i in comp]


# ---------------------------------------------------------------------------
# construction


def parse_factors(text: str) -> Tuple[Tuple[str, int], ...]:
    out = []
    for part in re.split(r"[x*]", text):
        m = re.fullmatch(r"([ABCDG])(\d+)", part.strip())
        if not m:
            raise UnsupportedType(f"cannot parse factor {part!r}")
        out.append((m.group(1), int(m.group(2))))
    return tuple(out)


def build(spec: CartanSpec) -> Tuple[RootSystem, WeylGroup, ExtendedBase]:
    if spec.rank > 4:
        raise RankTooLarge(f"total rank {spec.rank} > 4")
    for letter, r in spec.factors:
        if letter not in _MIN_RANK:
            raise UnsupportedType(f"type {letter} is not supported")
        if not (_MIN_RANK[letter] <= r <= _MAX_RANK[letter]):
            raise UnsupportedType(f"{letter}{r} is not supported")
    ambient = sum(_factor(l, r)[0] for l, r in spec.factors) + spec.extra_dims
    roots: List[Vec] = []
    simple_vecs: List[Vec] = []
    comp_of_simple: List[int] = []
    offset = 0
    for c, (letter, r) in enumerate(spec.factors):
        n, rts, smp = _factor(letter, r)
        pad = lambda v: tuple([Fraction(0)] * offset + list(v) + [Fraction(0)] * (ambient - offset - n))
        roots.extend(pad(v) for v in rts)
        simple_vecs.extend(pad(v) for v in smp)
        comp_of_simple.extend([c] * len(smp))
        offset += n
    roots.sort()
    idx = {r: i for i, r in enumerate(roots)}
    simple = [idx[s] for s in simple_vecs]
    positive = []
    for i, r in enumerate(roots):
        co = solve_coords(r, simple_vecs)
        if co is None:
            raise AssertionError("root outside the span of the simple roots")
        if all(x >= 0 for x in co):
            positive.append(i)
    if spec.lattice is None:
        lattice = list(simple_vecs)
    else:
        lattice = [tuple(Fraction(x) for x in v) for v in spec.lattice]
    space = list(lattice)
    if rank(space) != len(space):
        raise ValueError("lattice basis is not linearly independent")
    rs = RootSystem(spec=spec, ambient=ambient, roots=roots, positive=positive, simple=simple,
                    space=space, lattice=lattice, component_of_simple=comp_of_simple)
    for i in range(len(roots)):
        rs.lattice_coords(roots[i])  # raises unless every root is in X
    W = _enumerate_weyl(rs)
    return rs, W, _extended_base(rs)


def _root_perm(rs: RootSystem, mat) -> Tuple[int, ...]:
    return tuple(rs.index(tuple(sum(row[j] * r[j] for j in range(rs.ambient)) for row in mat))
                 for r in rs.roots)


def _enumerate_weyl(rs: RootSystem) -> WeylGroup:
    n = rs.ambient
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    gens = []
    for k, s in enumerate(rs.simple):
        m = reflection_matrix(rs.roots[s])
        gens.append(WeylElement(_root_perm(rs, m), m, (k,)))
    e = WeylElement(tuple(range(len(rs.roots))), ident, ())
    seen = {e.perm: e}
    frontier = [e]
    while frontier:  # breadth first, so words are reduced
        nxt = []
        for w in frontier:
            for k, g in enumerate(gens):
                perm = tuple(g.perm[w.perm[i]] for i in range(len(w.perm)))
                if perm not in seen:
                    el = WeylElement(perm, _matmul(g.matrix, w.matrix), (k,) + w.word)
                    seen[perm] = el
                    nxt.append(el)
        frontier = nxt
    return WeylGroup(rs, list(seen.values()), gens)


def reflection_subgroup(W: WeylGroup, root_indices) -> List[WeylElement]:
    """Elements of the subgroup generated by the reflections in ``root_indices``."""
    rs = W.rs
    gens = [W._by_perm[_root_perm(rs, reflection_matrix(rs.roots[i]))] for i in root_indices]
    seen = {W.identity.perm: W.identity}
    frontier = [W.identity]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                x = W.compose(g, w)
                if x.perm not in seen:
                    seen[x.perm] = x
                    nxt.append(x)
        frontier = nxt
    return list(seen.values())


def highest_roots(rs: RootSystem) -> List[int]:
    """One highest root per irreducible component (maximal height)."""
    out = []
    for comp in rs.components():
        pos = [i for i in comp if rs.is_positive(i)]
        out.append(max(pos, key=lambda i: (rs.height(i), rs.roots[i])))
    return out


def _extended_base(rs: RootSystem) -> ExtendedBase:
    nodes, highs, marks = [], [], []
    comps = rs.components()
    for c, th in zip(comps, highest_roots(rs)):
        cs = [s for s in rs.simple if s in set(c)]
        co = rs.simple_coords(th)
        marks.append([int(co[rs.simple.index(s)]) for s in cs])
        nodes.append(cs + [rs.neg(th)])
        highs.append(th)
    return ExtendedBase(nodes, highs, marks)


# ---------------------------------------------------------------------------
# presets


def _half(*xs):
    return tuple(Fraction(x) / 2 for x in xs)


PRESETS: Dict[str, CartanSpec] = {
    # SL2: X spanned by the weight (1/2,-1/2) of the natural representation
    "SL2": CartanSpec((("A", 1),), (_half(1, -1),), 0, "SL2"),
    # GL2: X = Z^2 with the epsilon basis
    "GL2": CartanSpec((("A", 1),), (vec(1, 0), vec(0, 1)), 0, "GL2"),
    # Sp4 simply connected: X = Z^2 in epsilon coordinates, roots 2e_i, e_1 +- e_2
    "Sp4": CartanSpec((("C", 2),), (vec(1, 0), vec(0, 1)), 0, "Sp4"),
    # SO5 adjoint: X = root lattice of B2 = Z^2
    "SO5": CartanSpec((("B", 2),), (vec(1, 0), vec(0, 1)), 0, "SO5"),
    "SL2xSL2": CartanSpec((("A", 1), ("A", 1)), (_half(1, -1, 0, 0), _half(0, 0, 1, -1)), 0, "SL2xSL2"),
}


def preset(name: str) -> CartanSpec:
    if name in PRESETS:
        return PRESETS[name]
    # bare Cartan types such as "C2", "A1xA1", "G2" give the adjoint datum
    try:
        return CartanSpec(parse_factors(name), None, 0, name)
    except UnsupportedType:
        raise UnsupportedType(f"unknown group {name!r}") from None


_CACHE: Dict[CartanSpec, Tuple[RootSystem, WeylGroup, ExtendedBase]] = {}


def load(name_or_spec) -> Tuple[RootSystem, WeylGroup, ExtendedBase]:
    """Memoized :func:`build` for a preset name or a :class:`CartanSpec`."""
    spec = preset(name_or_spec) if isinstance(name_or_spec, str) else name_or_spec
    if spec not in _CACHE:
        _CACHE[spec] = build(spec)
    return _CACHE[spec]


def spec_from_json(data: dict) -> CartanSpec:
    factors = tuple((f[0], int(f[1])) for f in data["factors"])
    lat = data.get("latticeBasis")
    lattice = None if lat is None else tuple(tuple(Fraction(x) for x in v) for v in lat)
    return CartanSpec(factors, lattice, int(data.get("extraDims", 0)), data.get("name", "custom"))
