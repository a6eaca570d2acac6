"""Structural data of the finite reductive groups as exact count functions.

Center orders and the counts ``N(E)`` come from Smith normal forms and
Moebius inversion on the pseudo-Levi poset.  Unipotent class data (Green
function values ``Q_T^L(u)`` and centralizer orders) is computed by brute
force in the matrix realization over several finite fields and turned into
polynomials by interpolation, with one held-out field as a check.

Class data at a single ``q`` for the subgroup ``L`` with root system ``psi``:

* ``U_L`` is enumerated as ordered products of root elements.
* Its ``L``-classes are the connected components of the graph whose edges
  are conjugations by generators of ``B_L`` and by Weyl representatives
  that keep an element inside ``U_L``.  If ``x u x^-1 = u'`` with
  ``x = b w b'`` then ``w (b' u b'^-1) w^-1 = b^-1 u' b`` lies in ``U_L``, so
  these edges suffice.
* ``Q(u)`` counts cosets ``x B_L`` with ``x^-1 u x`` upper triangular.
* ``|C_L(u)| = |B_L| Q(u) / |class cap U_L|`` by double counting pairs
  (conjugate of ``u``, Borel containing it).
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exactcore import CountFn, QPoly, RatFunc, elementary_divisors, format_poly, interpolate, parse_poly
from .matgroups import (FqRealization, is_unitriangular, over, flag_canonical, upper_keys,
                        _bracket)
from .rootsys import RootSystem, load
from .subposet import (Poset, Subsystem, components, cartan_type, enumerate_levis,
                       enumerate_pseudo_levis, positive_part, simple_roots_of, w_orbits, zclosure)

CACHE_VERSION = 1
DEFAULT_SAMPLES = (3, 5, 7, 9, 11)
DEFAULT_HOLDOUT = 13


class NotPseudoLevi(ValueError):
    pass


class InterpolationMismatch(AssertionError):
    pass


class UnsupportedLeviType(ValueError):
    pass


# ---------------------------------------------------------------------------
# centers and N(E)


def _bad_primes(rs: RootSystem) -> Tuple[int, ...]:
    out = set()
    for comp in rs.components():
        t = cartan_type(rs, comp)
        if t[0] in "BCD":
            out.add(2)
        if t[0] == "G":
            out.update((2, 3))
    return tuple(sorted(out))


def center_count(psi, rs: RootSystem) -> CountFn:
    """``|Z_L^F|`` for the subgroup with root system ``psi``: the split
    diagonalizable group with character group ``X / <psi>``."""
    psi = frozenset(psi)
    if psi and zclosure(rs, psi) != psi:
        raise NotPseudoLevi("subsystem is not Z-closed")
    r = len(rs.lattice)
    if not psi:
        return CountFn.center(r)
    rows = [rs.lattice_coords(rs.roots[i]) for i in sorted(psi)]
    divs = [d for d in elementary_divisors(rows) if d != 0]
    return CountFn.center(r - len(divs), divs)


def n_count(phi_e, rs: RootSystem, poset: Optional[Poset] = None) -> CountFn:
    """Number of ``s in T^F`` with centralizer root system exactly ``phi_e``,
    by Moebius inversion of ``|Z_E| = sum_{K >= E} N(K)``."""
    poset = poset or enumerate_pseudo_levis(rs)
    phi_e = frozenset(phi_e)
    if phi_e not in poset:
        raise NotPseudoLevi("not an element of the pseudo-Levi poset")
    out = CountFn({})
    for K in poset.elements:
        if poset.leq(phi_e, K):
            mu = poset.mobius(phi_e, K)
            if mu:
                out = out + center_count(K, rs).scale(mu)
    return CountFn(out.terms, _bad_primes(rs))


# ---------------------------------------------------------------------------
# class data at one q

# centralizer dimension in a simple factor -> geometric class name
_DIM_NAMES = {
    "A1": {3: "1", 1: "reg"},
    "B2": {10: "1", 6: "A1-long", 4: "A1-short", 2: "reg"},
    "C2": {10: "1", 6: "A1-long", 4: "A1-short", 2: "reg"},
}


@dataclass
class ClassAtQ:
    label: str
    signature: Tuple[int, ...]
    green: int
    inter: int  # |class cap U_L|
    centOrder: int
    dimCent: int
    rep_params: Tuple[int, ...]


def _ordered_positive(rs: RootSystem, psi) -> Tuple[List[int], List[List[int]]]:
    comps = components(rs, psi)
    groups = [sorted(positive_part(rs, c), key=lambda i: (rs.height(i), i)) for c in comps]
    return [i for g in groups for i in g], groups


def _ad_fixed_dim(G: FqRealization, u: np.ndarray, basis: List[np.ndarray]) -> int:
    F = G.F
    ui = F.matinv(u)
    rows = [F.matsub(F.matmul(F.matmul(u, X), ui), X).reshape(-1) for X in basis]
    return len(basis) - F.rank(np.array(rows))


def _component_basis(G: FqRealization, comp: List[int]) -> List[np.ndarray]:
    rs, R, F = G.rs, G.R, G.F
    out = []
    for s in simple_roots_of(rs, comp):
        H = _bracket(R.root_vectors[s], R.root_vectors[rs.neg(s)])
        out.append(F.rational_matrix(H))
    out.extend(G.E[i] for i in comp)
    return out


def _levi_basis(G: FqRealization, psi) -> List[np.ndarray]:
    F = G.F
    return [F.rational_matrix(M) for M in G.R.torus_lie_basis()] + [G.E[i] for i in sorted(psi)]


def _geometric_label(G: FqRealization, psi, groups, params) -> str:
    rs = G.rs
    names = []
    comps = components(rs, psi)
    offset = 0
    for comp, grp in zip(comps, groups):
        part = params[offset:offset + len(grp)]
        offset += len(grp)
        u = G.element_from_params(grp, part)
        d = _ad_fixed_dim(G, u, _component_basis(G, comp))
        t = cartan_type(rs, comp)
        try:
            names.append(_DIM_NAMES[t][d])
        except KeyError:
            raise UnsupportedLeviType(f"no class names for {t} (centralizer dimension {d})") from None
    return "+".join(names) if names else "1"


def _union_classes(G: FqRealization, pos: List[int], simple: List[int], U: np.ndarray):
    F, q = G.F, G.q
    N = len(U)
    keys = upper_keys(U, q)
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]
    gens = list(G.torus_generators())
    for i in pos:
        for t in F.subfield_basis():
            gens.append(G.x(i, t))
    for _, M, word in G.weyl_reps(simple):
        if word:
            gens.append(M)
    src, dst = [], []
    idx = np.arange(N)
    for g in gens:
        gi = F.matinv(g)
        V = F.matmul(F.matmul(g[None], U), gi[None])
        ok = is_unitriangular(V)
        k = upper_keys(V, q)
        where = np.searchsorted(skeys, k)
        where = np.minimum(where, N - 1)
        ok &= skeys[where] == k
        src.append(idx[ok])
        dst.append(order[where[ok]])
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(N, N))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def classes_at(name: str, psi, q: int) -> List[ClassAtQ]:
    """Unipotent classes of ``L^F`` for the subsystem ``psi`` of the preset."""
    G = over(name, q)
    F, rs = G.F, G.rs
    psi = frozenset(psi)
    pos, groups = _ordered_positive(rs, psi)
    simple = simple_roots_of(rs, psi)
    params, U = G.unipotent_product(pos)
    N = len(pos)
    labels = _union_classes(G, pos, simple, U) if N else np.zeros(1, dtype=np.int64)
    # signature: first {0, 1, nu}-pattern element met in lexicographic order
    nu = F.nonresidue
    vals = (0, 1, nu)
    sig: Dict[int, Tuple[int, ...]] = {}
    for pattern in itertools.product(range(3), repeat=N):
        index = 0
        for c in pattern:
            index = index * q + vals[c]
        lab = int(labels[index])
        if lab not in sig:
            sig[lab] = pattern
    found = set(int(x) for x in np.unique(labels))
    if set(sig) != found:
        raise UnsupportedLeviType("a unipotent class has no representative with parameters in {0, 1, nu}")
    cosets = G.bruhat_coset_reps(pos, simple) if N else np.eye(G.n, dtype=np.int64)[None]
    base = flag_canonical(F, cosets)
    torus_order = (q - 1) ** G.rank
    borel_order = torus_order * q ** N
    basis = _levi_basis(G, psi)
    counts = np.bincount(labels)
    out = []
    for lab, pattern in sig.items():
        rep = tuple(vals[c] for c in pattern)
        u = G.element_from_params(pos, rep)
        moved = flag_canonical(F, F.matmul(u[None], cosets))
        green = int(np.sum(np.all(moved == base, axis=(1, 2))))
        inter = int(counts[lab])
        if (borel_order * green) % inter:
            raise AssertionError("centralizer order is not an integer")
        cent = borel_order * green // inter
        out.append(ClassAtQ(_geometric_label(G, psi, groups, rep), pattern, green, inter, cent,
                            _ad_fixed_dim(G, u, basis), rep))
    out.sort(key=lambda c: (c.label, c.signature))
    return out


# ---------------------------------------------------------------------------
# interpolation across q


@dataclass
class ClassDatum:
    label: str
    green: QPoly
    centOrder: QPoly
    dimCent: int
    validity: str = "q odd"
    inter: QPoly = field(default_factory=QPoly)

    def to_json(self) -> dict:
        return {"label": self.label, "green": format_poly(self.green),
                "centOrder": format_poly(self.centOrder), "dimCent": self.dimCent,
                "validity": self.validity, "inter": format_poly(self.inter)}

    @classmethod
    def from_json(cls, d: dict) -> "ClassDatum":
        return cls(d["label"], parse_poly(d["green"]), parse_poly(d["centOrder"]), int(d["dimCent"]),
                   d.get("validity", "q odd"), parse_poly(d.get("inter", "0")))


def _suffixes(sigs: List[Tuple[int, ...]]) -> List[str]:
    if len(sigs) == 1:
        return [""]
    if len(sigs) == 2:
        a, b = sigs
        diff = [(x, y) for x, y in zip(a, b) if x != y]
        if len(diff) == 1 and diff[0] == (1, 2):
            return ["-sq", "-nonsq"]
    return ["-" + chr(ord("a") + i) for i in range(len(sigs))]


def _keyed(classes: List[ClassAtQ]) -> Dict[str, ClassAtQ]:
    """Uniform labels: geometric label plus a suffix by signature rank."""
    by_label: Dict[str, List[ClassAtQ]] = {}
    for c in classes:
        by_label.setdefault(c.label, []).append(c)
    out = {}
    for lab, group in by_label.items():
        group.sort(key=lambda c: c.signature)
        for c, suf in zip(group, _suffixes([c.signature for c in group])):
            out[lab + suf] = c
    return out


def _borel_poly(rank: int, npos: int) -> QPoly:
    return QPoly({1: 1, 0: -1}) ** rank * QPoly.monomial(npos)


def fit_classes(name: str, psi, samples: Sequence[int] = DEFAULT_SAMPLES,
                holdout: Optional[int] = DEFAULT_HOLDOUT, threads: int = 1) -> List[ClassDatum]:
    """Interpolate Green values and centralizer orders through brute-force
    class data, then re-verify at the held-out ``q``."""
    rs, _, _ = load(name)
    psi = frozenset(psi)
    npos = len(positive_part(rs, psi))
    samples = list(samples)
    if any(q % 2 == 0 for q in samples) or (holdout is not None and holdout % 2 == 0):
        raise ValueError("sample fields must have odd characteristic")
    if len(samples) < npos + 1:
        raise ValueError(f"need at least {npos + 1} sample fields for degree {npos}")
    qs = samples + ([holdout] if holdout is not None else [])
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as ex:
            per_q = list(ex.map(classes_at, [name] * len(qs), [psi] * len(qs), qs))
    else:
        per_q = [classes_at(name, psi, q) for q in qs]
    keyed = [_keyed(c) for c in per_q]
    labels = sorted(keyed[0])
    if any(sorted(k) != labels for k in keyed):
        raise InterpolationMismatch(f"class labels differ across q: {[sorted(k) for k in keyed]}")
    rank = len(rs.lattice)
    borel = _borel_poly(rank, npos)
    out = []
    for lab in labels:
        pts = [(q, keyed[i][lab]) for i, q in enumerate(samples)]
        green = interpolate([(q, c.green) for q, c in pts])
        inter = interpolate([(q, c.inter) for q, c in pts])
        cent = (RatFunc(borel * green) / RatFunc(inter))
        if not cent.is_laurent():
            raise InterpolationMismatch(f"centralizer order of {lab} is not a polynomial")
        cent = cent.to_qpoly()
        dims = {c.dimCent for _, c in pts}
        if len(dims) != 1:
            raise InterpolationMismatch(f"centralizer dimension of {lab} varies with q")
        dim = dims.pop()
        if cent.degree() != dim:
            raise InterpolationMismatch(f"{lab}: degree {cent.degree()} of the centralizer order "
                                        f"differs from the Lie algebra centralizer dimension {dim}")
        for q, c in pts:
            assert cent.evaluate(q) == c.centOrder
        if holdout is not None:
            h = keyed[-1][lab]
            got = (green.evaluate(holdout), cent.evaluate(holdout), inter.evaluate(holdout))
            if got != (h.green, h.centOrder, h.inter):
                raise InterpolationMismatch(f"{name} {cartan_type(rs, psi)} {lab}: held-out q={holdout} "
                                            f"gives {h.green, h.centOrder, h.inter}, fit predicts {got}")
        if not (green.is_integral() and cent.is_integral()):
            raise InterpolationMismatch(f"{lab}: non-integral coefficients")
        out.append(ClassDatum(lab, green, cent, dim, "q odd", inter))
    return out


# ---------------------------------------------------------------------------
# cache


def canonical_rep(rs: RootSystem, W, psi) -> Subsystem:
    """The member of the W-orbit of ``psi`` with the smallest sorted index tuple."""
    orbit = {frozenset(w.perm[i] for i in psi) for w in W.elements}
    return min(orbit, key=lambda e: (len(e), sorted(e)))


def _psi_key(psi) -> str:
    return ",".join(str(i) for i in sorted(psi)) or "-"


def default_cache_path() -> str:
    return os.environ.get("ISOGREEN_CACHE", os.path.join(os.getcwd(), "liedata-cache.json"))


class TableCache:
    """JSON cache of fitted class tables, keyed by preset and orbit representative."""

    def __init__(self, path: Optional[str] = None, refit: bool = False, threads: int = 1,
                 samples: Sequence[int] = DEFAULT_SAMPLES, holdout: Optional[int] = DEFAULT_HOLDOUT):
        self.path = path
        self.refit = refit
        self.threads = threads
        self.samples = tuple(samples)
        self.holdout = holdout
        self.tables: Dict[str, dict] = {}
        if path and os.path.exists(path) and not refit:
            with open(path) as fh:
                data = json.load(fh)
            if data.get("version") == CACHE_VERSION:
                self.tables = data.get("tables", {})

    def save(self) -> None:
        if not self.path:
            return
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump({"version": CACHE_VERSION, "tables": self.tables}, fh, indent=1, sort_keys=True)
        os.replace(tmp, self.path)

    def classes(self, name: str, psi) -> List[ClassDatum]:
        rs, W, _ = load(name)
        rep = canonical_rep(rs, W, psi)
        key = f"{name}|{_psi_key(rep)}"
        entry = self.tables.get(key)
        stale = entry is not None and (entry.get("samples") != list(self.samples)
                                       or entry.get("holdout") != self.holdout)
        if entry is None or stale or self.refit and not entry.get("fresh"):
            data = fit_classes(name, rep, self.samples, self.holdout, self.threads)
            entry = {"samples": list(self.samples), "holdout": self.holdout,
                     "type": cartan_type(rs, rep), "classes": [c.to_json() for c in data]}
            self.tables[key] = entry
            self.save()
            entry = dict(entry, fresh=True)
            self.tables[key] = entry
        return [ClassDatum.from_json(c) for c in entry["classes"]]


_MEMORY = TableCache(None)


def unipotent_classes(psi, name: str, cache: Optional[TableCache] = None) -> List[ClassDatum]:
    return (cache or _MEMORY).classes(name, psi)


# ---------------------------------------------------------------------------
# types


@dataclass
class TypeDatum:
    leviOrbit: Subsystem
    classLabel: str
    orbitSize: int
    datum: ClassDatum


def types(name: str, side: str = "group", cache: Optional[TableCache] = None,
          within: Optional[Subsystem] = None) -> List[TypeDatum]:
    """Pairs (W-orbit of pseudo-Levi or Levi subsystem, class).

    With ``within`` the Levi subsystems of that subsystem are used, up to its
    own Weyl group; this is the algebra side for the subalgebra ``e``.
    """
    from .subposet import levis_of
    from .rootsys import reflection_subgroup
    rs, W, _ = load(name)
    if within is not None:
        if side != "algebra":
            raise ValueError("restriction to a subsystem is only used on the algebra side")
        poset = levis_of(rs, frozenset(within))
        elems = reflection_subgroup(W, within)
    elif side == "group":
        poset, elems = enumerate_pseudo_levis(rs), None
    elif side == "algebra":
        poset, elems = enumerate_levis(rs), None
    else:
        raise ValueError(f"side must be 'group' or 'algebra', not {side!r}")
    orbits = w_orbits(poset, W, elems)
    out = []
    for orb in orbits.orbits:
        rep = orb[0]
        for c in unipotent_classes(rep, name, cache):
            out.append(TypeDatum(rep, c.label, len(orb), c))
    return out


# ---------------------------------------------------------------------------
# Springer identification


def cayley_check(name: str, psi, q: int) -> bool:
    """The Cayley map ``n -> (1 + n/2)(1 - n/2)^-1`` sends the nilradical of
    ``b_L`` bijectively onto ``U_L`` and commutes with conjugation by ``B_L``
    generators, so nilpotent orbits and unipotent classes correspond."""
    G = over(name, q)
    F = G.F
    pos, _ = _ordered_positive(G.rs, frozenset(psi))
    half = F.inv(2)
    I = np.eye(G.n, dtype=np.int64)
    _, U = G.unipotent_product(pos)
    ukeys = set(upper_keys(U, q).tolist())
    seen = set()
    gens = list(G.torus_generators()) + [G.x(i, 1) for i in pos]
    for coeffs in itertools.product(range(q), repeat=len(pos)):
        Nm = np.zeros((G.n, G.n), dtype=np.int64)
        for c, i in zip(coeffs, pos):
            Nm = F.matadd(Nm, F.scal(c, G.E[i]))
        h = F.scal(half, Nm)
        C = F.matmul(F.matadd(I, h), F.matinv(F.matsub(I, h)))
        if not is_unitriangular(C) or int(upper_keys(C, q)) not in ukeys:
            return False
        seen.add(int(upper_keys(C, q)))
        if coeffs == tuple([1] * len(pos)) or len(seen) <= 3:
            for g in gens:
                gi = F.matinv(g)
                Ng = F.scal(half, F.matmul(F.matmul(g, Nm), gi))
                Cg = F.matmul(F.matadd(I, Ng), F.matinv(F.matsub(I, Ng)))
                if not np.array_equal(Cg, F.matmul(F.matmul(g, C), gi)):
                    return False
    return len(seen) == len(U)
