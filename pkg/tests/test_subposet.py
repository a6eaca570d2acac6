import random

import pytest
from hypothesis import given, settings, strategies as st

from isogreen.rootsys import load
from isogreen.subposet import (cartan_type, enumerate_levis, enumerate_pseudo_levis, is_isolated,
                               isolated, levis_of, minimal_levi, phi_of_point, pseudo_levis_of, qclosure,
                               torus_witness, w_orbits, zclosure)

SYSTEMS = ["C2", "A2", "G2", "B3"]


@pytest.mark.parametrize("name", ["SL2", "Sp4", "SO5", "G2"])
def test_closure_laws(name):
    rs, _, _ = load(name)
    rng = random.Random(7)
    for _ in range(200):
        S = {i for i in range(rs.n_roots) if rng.random() < 0.3}
        T = S | {i for i in range(rs.n_roots) if rng.random() < 0.2}
        for cl in (lambda X: zclosure(rs, X), lambda X: qclosure(rs, X)):
            c = cl(S)
            assert S <= c
            assert cl(c) == c
            assert c <= cl(T)


def test_c2_pseudo_levis():
    rs, W, _ = load("C2")
    E = enumerate_pseudo_levis(rs)
    assert len(E) == 7
    orbit_types = sorted(cartan_type(rs, w_orbits(E, W).representatives()[k])
                         for k in range(len(w_orbits(E, W).orbits)))
    assert orbit_types == sorted(["T", "A1", "A1", "A1xA1", "C2"])
    assert sorted(cartan_type(rs, e) for e in isolated(rs, E)) == ["A1xA1", "C2"]


def test_g2_isolated():
    rs, W, _ = load("G2")
    iso = isolated(rs, enumerate_pseudo_levis(rs))
    types = sorted({cartan_type(rs, e) for e in iso})
    assert types == ["A1xA1", "A2", "G2"]


@pytest.mark.parametrize("name", SYSTEMS)
def test_galois_connection(name):
    rs, _, _ = load(name)
    E, L = enumerate_pseudo_levis(rs), enumerate_levis(rs)
    low = {om: minimal_levi(rs, om) for om in E.elements}
    for psi in E.elements:
        for lam in L.elements:
            total = sum(E.mobius_or_zero(psi, om) for om in E.elements if low[om] == lam)
            expected = L.mobius_or_zero(psi, lam) if psi in L else 0
            assert total == expected


@pytest.mark.parametrize("name", SYSTEMS)
def test_restriction_to_isolated(name):
    rs, _, _ = load(name)
    E = enumerate_pseudo_levis(rs)
    for e in isolated(rs, E):
        P = pseudo_levis_of(rs, e)
        assert set(P.elements) == {x for x in E.elements if x <= e}
        for x in P.elements:
            for y in P.elements:
                if x <= y:
                    assert P.mobius(x, y) == E.mobius(x, y)


@pytest.mark.parametrize("name", SYSTEMS)
def test_levis_of_isolated_are_pseudo_levis(name):
    rs, _, _ = load(name)
    E = enumerate_pseudo_levis(rs)
    for e in isolated(rs, E):
        for psi in levis_of(rs, e).elements:
            assert zclosure(rs, psi) == psi
            assert psi in E


def test_isolated_means_full_rank():
    rs, _, _ = load("B3")
    for e in enumerate_pseudo_levis(rs).elements:
        assert is_isolated(rs, e) == (minimal_levi(rs, e) == frozenset(range(rs.n_roots)))


@pytest.mark.parametrize("name", SYSTEMS)
def test_levis_of_isolated_are_centralizers_of_torus_points(name):
    rs, _, _ = load(name)
    E = enumerate_pseudo_levis(rs)
    for e in isolated(rs, E):
        for psi in levis_of(rs, e).elements:
            x = torus_witness(rs, psi)
            assert x is not None and phi_of_point(rs, x) == psi


@given(st.sampled_from(SYSTEMS + ["Sp4", "SO5", "GL2"]), st.lists(st.fractions(max_denominator=12), min_size=3, max_size=3))
@settings(max_examples=150, deadline=None)
def test_centralizer_of_torus_point_is_pseudo_levi(name, x):
    rs, _, _ = load(name)
    phi = phi_of_point(rs, x[:len(rs.lattice)])
    assert zclosure(rs, phi) == phi
    assert phi in enumerate_pseudo_levis(rs)


def test_short_a2_in_g2_is_not_a_centralizer():
    rs, _, _ = load("G2")
    short = min(abs(sum(c * c for c in r)) for r in rs.roots)
    psi = frozenset(i for i, r in enumerate(rs.roots) if sum(c * c for c in r) == short)
    assert len(psi) == 6
    assert torus_witness(rs, psi) is None
    assert zclosure(rs, psi) != psi
