"""Genericity of semisimple tuples in the Cartan subalgebra.

A tuple ``(s_1, ..., s_l)`` is generic when no Weyl-twisted sum
``sum_i w_i s_i`` lies in ``t cap [l, l]`` for a proper Levi ``l``; the latter
is the span of the coroots of the Levi subsystem.  We additionally require
that ``s_1 + ... + s_l`` has no central component.

The coordinates may be ``Fraction``, :class:`~isogreen.exactcore.QuadNum`
or any field element type supporting ``+``, ``*`` and comparison with 0.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactcore import QuadNum, field_of, is_zero, nullspace, rref
from .rootsys import RootSystem, WeylElement, WeylGroup, coroot, dot, weyl_act
from .subposet import Poset, Subsystem, enumerate_levis, qclosure

BUDGET = 10 ** 8


class SearchExhausted(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class GenericityReport:
    verdict: bool
    witness: Optional[Tuple[Subsystem, Tuple[WeylElement, ...]]] = None
    checkedCentral: bool = True
    reason: str = ""

    def __bool__(self):
        return self.verdict


def coroot_span(rs: RootSystem, psi) -> List[Tuple[Fraction, ...]]:
    """Row-reduced basis of ``span{alpha^vee : alpha in psi}``."""
    psi = sorted(psi)
    if not psi:
        return []
    basis, _ = rref([coroot(rs.roots[i]) for i in psi])
    return [tuple(r) for r in basis]


def _annihilator(rs: RootSystem, psi) -> List[Tuple[Fraction, ...]]:
    """Vectors orthogonal to the coroot span; ``v`` lies in the span iff it
    pairs to zero with all of them."""
    span = coroot_span(rs, psi)
    if not span:
        return [tuple(Fraction(int(i == j)) for j in range(rs.ambient)) for i in range(rs.ambient)]
    return [tuple(v) for v in nullspace([list(r) for r in span], rs.ambient)]


def in_coroot_span(rs: RootSystem, psi, v: Sequence) -> bool:
    return all(is_zero(dot(a, v)) for a in _annihilator(rs, psi))


def root_value(rs: RootSystem, i: int, s: Sequence):
    """``alpha_i(s)`` computed through the inner product."""
    return dot(rs.roots[i], s)


def is_regular(rs: RootSystem, s: Sequence) -> bool:
    return all(not is_zero(root_value(rs, i, s)) for i in rs.positive)


def vanishing_roots(rs: RootSystem, s: Sequence) -> Subsystem:
    """``{alpha : alpha(s) = 0}``, the root system of the centralizer of ``s``."""
    return frozenset(i for i in range(rs.n_roots) if is_zero(root_value(rs, i, s)))


def _vsum(vectors):
    out = list(vectors[0])
    for v in vectors[1:]:
        out = [a + b for a, b in zip(out, v)]
    return out


def _check_field(tup):
    return field_of(x for s in tup for x in s)


def central_part_vanishes(rs: RootSystem, tup) -> bool:
    total = _vsum(tup)
    return all(is_zero(dot(z, total)) for z in rs.center_basis())


def _orbit_images(W: WeylGroup, s) -> Dict[tuple, WeylElement]:
    out: Dict[tuple, WeylElement] = {}
    for w in W.elements:
        img = weyl_act(w, s)
        key = tuple(img)
        if key not in out:
            out[key] = w
    return out


def is_generic(tup: Sequence[Sequence], rs: RootSystem, W: WeylGroup,
               levis: Optional[Poset] = None, central_check: bool = True,
               budget: int = BUDGET) -> GenericityReport:
    """Exact genericity test with ``w_1`` fixed to the identity and all Levi
    subsystems (the Weyl saturation of the standard ones) in the inner loop."""
    if not tup:
        raise ValueError("empty tuple")
    _check_field(tup)
    tup = [list(s) for s in tup]
    if any(len(s) != rs.ambient for s in tup):
        raise ValueError("coordinate vectors do not match the ambient dimension")
    if central_check and not central_part_vanishes(rs, tup):
        return GenericityReport(False, None, True, "sum has a nonzero central component")
    levis = levis if levis is not None else enumerate_levis(rs)
    proper = [L for L in levis.elements if L != levis.top]
    annih = {L: _annihilator(rs, L) for L in proper}
    orbits = [_orbit_images(W, s) for s in tup[1:]]
    work = math.prod(len(o) for o in orbits) * max(len(proper), 1)
    if work > budget:
        raise BudgetExceeded(f"{work} Weyl-tuple checks exceed the budget {budget}")
    first = tup[0]
    for combo in itertools.product(*[list(o.items()) for o in orbits]):
        total = list(first)
        for img, _ in combo:
            total = [a + b for a, b in zip(total, img)]
        for L in proper:
            if all(is_zero(dot(a, total)) for a in annih[L]):
                ws = (W.identity,) + tuple(w for _, w in combo)
                return GenericityReport(False, (L, ws), central_check, "Weyl sum in a coroot span")
    return GenericityReport(True, None, central_check)


def standard_levis(rs: RootSystem) -> List[Subsystem]:
    """Levi subsystems spanned by subsets of the simple roots, proper ones only."""
    out = []
    for k in range(rs.rank):
        for J in itertools.combinations(rs.simple, k):
            out.append(qclosure(rs, J))
    return out


def is_generic_literal(tup: Sequence[Sequence], rs: RootSystem, W: WeylGroup,
                       central_check: bool = True) -> bool:
    """Direct transcription of the definition: all ``w in W^l`` and the proper
    standard Levis only.  Used as an independent check of :func:`is_generic`."""
    tup = [list(s) for s in tup]
    if central_check and not central_part_vanishes(rs, tup):
        return False
    annih = [_annihilator(rs, L) for L in standard_levis(rs)]
    images = [list(_orbit_images(W, s)) for s in tup]
    for combo in itertools.product(*images):
        total = _vsum(list(combo))
        for an in annih:
            if all(is_zero(dot(a, total)) for a in an):
                return False
    return True


def is_generic_P_type(tup: Sequence[Sequence], levi_targets: Sequence, rs: RootSystem,
                      W: WeylGroup, **kw) -> bool:
    """Generic and each ``s_i`` has centralizer root system ``levi_targets[i]``."""
    if len(tup) != len(levi_targets):
        raise ValueError("one Levi target per tuple entry")
    for s, L in zip(tup, levi_targets):
        if vanishing_roots(rs, s) != frozenset(L):
            return False
    return bool(is_generic(tup, rs, W, **kw))


def _random_point(rs: RootSystem, rng: random.Random, bound: int, d: Optional[int]):
    coeffs = [rng.randint(-bound, bound) for _ in rs.space]
    v = [Fraction(0)] * rs.ambient
    for c, b in zip(coeffs, rs.space):
        v = [x + c * y for x, y in zip(v, b)]
    if d is None:
        return v
    coeffs2 = [rng.randint(-bound, bound) for _ in rs.space]
    w = [Fraction(0)] * rs.ambient
    for c, b in zip(coeffs2, rs.space):
        w = [x + c * y for x, y in zip(w, b)]
    return [QuadNum(a, b, d) for a, b in zip(v, w)]


def _remove_center(rs: RootSystem, tup):
    """Shift the last entry so the sum has no central component."""
    zs = rs.center_basis()
    if not zs:
        return tup
    total = _vsum(tup)
    last = list(tup[-1])
    for z in zs:
        c = dot(z, total) / dot(z, z)
        last = [x - c * y for x, y in zip(last, z)]
        total = [x - c * y for x, y in zip(total, z)]
    return tup[:-1] + [last]


def search_generic(rs: RootSystem, W: WeylGroup, ell: int, field: str = "Q", seed: int = 0,
                   bound: int = 12, attempts: int = 500) -> List[list]:
    """Random integer search for a verified generic tuple of regular elements."""
    if ell < 1:
        raise ValueError("ell must be positive")
    d = None if field in ("Q", "q") else int(field.lstrip("qQ"))
    rng = random.Random(seed)
    levis = enumerate_levis(rs)
    for _ in range(attempts):
        tup = [_random_point(rs, rng, bound, d) for _ in range(ell)]
        tup = _remove_center(rs, tup)
        if not all(is_regular(rs, s) for s in tup):
            continue
        if is_generic(tup, rs, W, levis):
            return tup
    raise SearchExhausted(f"no generic tuple found in {attempts} attempts")


def a1_closed_form(values: Sequence) -> bool:
    """For type A1 with ``s_i = a_i * (1, -1)/2``: generic iff every signed sum
    of the ``a_i`` is nonzero."""
    return all(sum(e * a for e, a in zip(signs, values)) != 0
               for signs in itertools.product((1, -1), repeat=len(values)))
