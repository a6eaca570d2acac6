"""Exact multiplicities of generic isotypic components and point counts of
generic additive character varieties, as polynomials in ``q``.

Two independent evaluations are provided for the multiplicity:

* :func:`multiplicity_generic` sums over types (pseudo-Levi orbit, unipotent
  class) with the Moebius function of the pseudo-Levi poset;
* :func:`decompose` sums over isolated pseudo-Levi subsystems ``E`` the
  additive character variety counts of their Lie algebras.

Intermediate sums are rational functions; the results must be polynomials
with integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .exactcore import CountFn, QPoly, RatFunc, format_poly
from .genericity import SearchExhausted, search_generic
from .liedata import TableCache, center_count, n_count, types
from .rootsys import load, preset
from .subposet import (Subsystem, cartan_type, enumerate_pseudo_levis, is_isolated, isolated,
                       positive_part)


class NonPolynomialResult(ArithmeticError):
    pass


class DecompositionMismatch(AssertionError):
    pass


class NotIsolated(ValueError):
    pass


@dataclass(frozen=True)
class CountingParams:
    g: int
    ell: int
    group: str

    def __post_init__(self):
        if self.g < 0 or self.ell < 1:
            raise ValueError("genus must be >= 0 and the number of punctures >= 1")
        if 2 * self.g + self.ell < 3:
            raise ValueError("need 2g + l >= 3")


@dataclass
class IsolatedTerm:
    isolated: Subsystem
    label: str
    contribution: QPoly
    charVarCount: QPoly
    gammaE: int
    nE: CountFn
    zE: CountFn
    genericFound: Optional[bool] = None


@dataclass
class Decomposition:
    perIsolated: List[IsolatedTerm]
    total: QPoly
    validity: str = "q odd"


def _finish(r: RatFunc, what: str) -> QPoly:
    if not r.is_laurent():
        raise NonPolynomialResult(f"{what}: denominator {r.den} does not cancel")
    p = r.to_qpoly()
    if not p.is_polynomial():
        raise NonPolynomialResult(f"{what}: negative powers of q remain in {format_poly(p)}")
    if not p.is_integral():
        raise NonPolynomialResult(f"{what}: non-integral coefficients in {format_poly(p)}")
    return p


def _weyl_order(W, psi) -> int:
    return W.subgroup_order(psi) if psi else 1


def center_dim(rs) -> int:
    return len(rs.center_basis())


def gamma(phi_e: Subsystem, params: CountingParams) -> int:
    """``dim Z_G + (g-1)(rank + |Phi_E|) + l |Phi_E^+|``."""
    rs, _, _ = load(params.group)
    phi_e = frozenset(phi_e)
    if not is_isolated(rs, phi_e):
        raise NotIsolated("gamma is only defined for isolated subsystems")
    rank = len(rs.lattice)
    return center_dim(rs) + (params.g - 1) * (rank + len(phi_e)) + params.ell * len(positive_part(rs, phi_e))


def _type_sum_algebra(phi_e: Subsystem, params: CountingParams, cache) -> RatFunc:
    """Sum over W_E-orbits of Levi subsystems L of E and classes of L."""
    from .subposet import levis_of
    rs, W, _ = load(params.group)
    poset = levis_of(rs, phi_e)
    top = poset.top
    w_e = _weyl_order(W, phi_e)
    ell, g = params.ell, params.g
    total = RatFunc(0)
    for t in types(params.group, "algebra", cache, within=phi_e):
        mu = poset.mobius(t.leviOrbit, top)
        if mu == 0:
            continue
        d = t.datum
        w_l = _weyl_order(W, t.leviOrbit)
        num = QPoly.monomial(g * d.dimCent) * d.green ** ell * (t.orbitSize * w_e ** (ell - 1) * mu)
        den = d.centOrder * (w_l ** (ell - 1))
        total = total + RatFunc(num, den)
    return total


def additive_charvar_count(phi_e: Optional[Subsystem], params: CountingParams,
                           cache: Optional[TableCache] = None) -> QPoly:
    """Points of the generic additive character variety of the Lie algebra
    with root system ``phi_e`` (the whole root system by default)."""
    rs, _, _ = load(params.group)
    phi_e = frozenset(range(rs.n_roots)) if phi_e is None else frozenset(phi_e)
    inner = _type_sum_algebra(phi_e, params, cache)
    z = center_count(phi_e, rs).poly
    gam = gamma(phi_e, params)
    return _finish(inner * RatFunc(z * QPoly.monomial(gam)), "character variety count")


def multiplicity_generic(params: CountingParams, cache: Optional[TableCache] = None) -> QPoly:
    """Type sum over pseudo-Levi orbits and unipotent classes."""
    rs, W, _ = load(params.group)
    poset = enumerate_pseudo_levis(rs)
    iso = isolated(rs, poset)
    w = len(W)
    ell, g = params.ell, params.g
    inner_cache: Dict[Subsystem, QPoly] = {}
    total = RatFunc(0)
    for t in types(params.group, "group", cache):
        L = t.leviOrbit
        if L not in inner_cache:
            s = QPoly()
            for E in iso:
                if poset.leq(L, E):
                    s = s + center_count(E, rs).poly * poset.mobius(L, E)
            inner_cache[L] = s
        inner = inner_cache[L]
        if inner.is_zero():
            continue
        d = t.datum
        w_l = _weyl_order(W, L)
        num = QPoly.monomial(g * d.dimCent) * d.green ** ell * inner * (w ** (ell - 1) * t.orbitSize)
        den = d.centOrder * (w_l ** (ell - 1))
        total = total + RatFunc(num, den)
    return _finish(total, "multiplicity")


def _generic_exists(params: CountingParams, phi_e: Subsystem) -> bool:
    rs, W, _ = load(params.group)
    if len(phi_e) == rs.n_roots:
        sub_rs, sub_w = rs, W
    else:
        sub_rs, sub_w, _ = load(preset(cartan_type(rs, phi_e)))
    try:
        search_generic(sub_rs, sub_w, params.ell, seed=0)
        return True
    except SearchExhausted:
        return False


def decompose(params: CountingParams, cache: Optional[TableCache] = None,
              check_generic: bool = True) -> Decomposition:
    """Sum over isolated pseudo-Levi ``E`` of
    ``N(E) |W|^{l-1} / (q^gamma_E |Z_E| |W_E|^{l-1}) * |X_e|``."""
    rs, W, _ = load(params.group)
    poset = enumerate_pseudo_levis(rs)
    w = len(W)
    ell = params.ell
    terms = []
    total = QPoly()
    for E in isolated(rs, poset):
        xe = additive_charvar_count(E, params, cache)
        nE = n_count(E, rs, poset)
        zE = center_count(E, rs)
        gam = gamma(E, params)
        w_e = _weyl_order(W, E)
        factor = RatFunc(nE.poly * (w ** (ell - 1)), zE.poly * QPoly.monomial(gam) * (w_e ** (ell - 1)))
        contrib = _finish(factor * RatFunc(xe), f"contribution of {cartan_type(rs, E)}")
        found = _generic_exists(params, E) if check_generic else None
        terms.append(IsolatedTerm(E, cartan_type(rs, E), contrib, xe, gam, nE, zE, found))
        total = total + contrib
    return Decomposition(terms, total)


def cross_check(params: CountingParams, cache: Optional[TableCache] = None) -> QPoly:
    """Both routes; raises if they disagree."""
    direct = multiplicity_generic(params, cache)
    dec = decompose(params, cache, check_generic=False)
    if dec.total != direct:
        raise DecompositionMismatch(f"type sum {format_poly(direct)} != isolated sum {format_poly(dec.total)}")
    return direct


def expected_degree(params: CountingParams) -> int:
    rs, _, _ = load(params.group)
    dim_g = len(rs.lattice) + rs.n_roots
    return (params.g - 1) * dim_g + center_dim(rs) + params.ell * rs.n_positive


def leading_law(params: CountingParams, p: QPoly) -> bool:
    """Leading coefficient equals that of ``|Z_G^F|`` and the degree is as expected."""
    rs, _, _ = load(params.group)
    z = center_count(frozenset(range(rs.n_roots)), rs).poly
    return p.leading() == z.leading() and p.degree() == expected_degree(params)


@dataclass
class PositivityReport:
    nonnegative: bool
    negative: Dict[int, Fraction] = field(default_factory=dict)


def positivity_report(p: QPoly) -> PositivityReport:
    neg = {k: v for k, v in p.coeffs.items() if v < 0}
    return PositivityReport(not neg, neg)
