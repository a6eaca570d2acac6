from fractions import Fraction

import pytest

from isogreen.exactcore import QPoly, parse_poly
from isogreen.liedata import (TableCache, _keyed, cayley_check, center_count, classes_at, n_count,
                              types, unipotent_classes)
from isogreen.rootsys import load
from isogreen.subposet import enumerate_pseudo_levis, positive_part, w_orbits

PRESETS = ["SL2", "GL2", "Sp4", "SO5", "SL2xSL2"]
SAMPLE_Q = (3, 5, 7, 9, 11)


def _orbit_reps(name):
    rs, W, _ = load(name)
    return rs, [o[0] for o in w_orbits(enumerate_pseudo_levis(rs), W).orbits]


def test_center_counts():
    rs, _, _ = load("Sp4")
    assert center_count(frozenset(range(rs.n_roots)), rs).poly == QPoly.const(2)
    assert center_count(frozenset(), rs).poly == parse_poly("q^2-2*q+1")
    rs, _, _ = load("GL2")
    assert center_count(frozenset(range(rs.n_roots)), rs).poly == parse_poly("q-1")


@pytest.mark.parametrize("name", PRESETS)
def test_torus_points_partitioned_by_centralizer(name):
    rs, _, _ = load(name)
    E = enumerate_pseudo_levis(rs)
    total = QPoly()
    for e in E.elements:
        total = total + n_count(e, rs, E).poly
    assert total == parse_poly("q-1") ** len(rs.lattice)


@pytest.mark.parametrize("name", PRESETS)
def test_steinberg_and_identity_green(name, cache):
    rs, reps = _orbit_reps(name)
    for psi in reps:
        data = unipotent_classes(psi, name, cache)
        ident = [c for c in data if set(c.label.split("+")) == {"1"}]
        assert len(ident) == 1
        order_l = ident[0].centOrder
        npos = len(positive_part(rs, psi))
        for q in SAMPLE_Q:
            total = sum(Fraction(order_l.evaluate(q)) / c.centOrder.evaluate(q) for c in data)
            assert total == q ** (2 * npos)
            # Q(1) |T^F| is the p'-part of |L^F|
            assert ident[0].green.evaluate(q) * (q - 1) ** len(rs.lattice) * q ** npos == order_l.evaluate(q)
        for c in data:
            assert c.dimCent == c.centOrder.degree()


def test_sp4_green_table(cache):
    rs, _, _ = load("Sp4")
    data = {c.label: c for c in unipotent_classes(frozenset(range(rs.n_roots)), "Sp4", cache)}
    assert data["1"].green == parse_poly("q^4+2*q^3+2*q^2+2*q+1")
    assert data["1"].centOrder == parse_poly("q^10-q^8-q^6+q^4")
    assert data["A1-short-a"].green == parse_poly("3*q+1")
    assert data["A1-short-b"].green == parse_poly("q+1")
    assert data["reg-sq"].green == data["reg-nonsq"].green == QPoly.const(1)
    assert data["reg-sq"].centOrder == parse_poly("2*q^2")


@pytest.mark.parametrize("q", [13])
def test_holdout_matches_brute_force(q, cache):
    rs, reps = _orbit_reps("Sp4")
    for psi in reps:
        fitted = {c.label: c for c in unipotent_classes(psi, "Sp4", cache)}
        brute = _keyed(classes_at("Sp4", psi, q))
        assert sorted(fitted) == sorted(brute)
        for lab, c in brute.items():
            assert fitted[lab].green.evaluate(q) == c.green
            assert fitted[lab].centOrder.evaluate(q) == c.centOrder


def test_cache_round_trip(tmp_path):
    path = str(tmp_path / "cache.json")
    first = TableCache(path)
    a = first.classes("SL2", frozenset({0, 1}))
    second = TableCache(path)
    assert second.tables
    b = second.classes("SL2", frozenset({0, 1}))
    assert [c.to_json() for c in a] == [c.to_json() for c in b]


@pytest.mark.parametrize("name,psi", [("SL2", None), ("Sp4", None), ("Sp4", "A1")])
def test_cayley_transform(name, psi):
    rs, reps = _orbit_reps(name)
    if psi is None:
        target = frozenset(range(rs.n_roots))
    else:
        target = next(r for r in reps if len(r) == 2)
    assert cayley_check(name, target, 3)


def test_type_lists(cache):
    group = types("Sp4", "group", cache)
    algebra = types("Sp4", "algebra", cache)
    assert sum(t.orbitSize for t in group if set(t.classLabel.split("+")) == {"1"}) == len(enumerate_pseudo_levis(load("Sp4")[0]))
    # the algebra side has no A1xA1 Levi
    assert len({t.leviOrbit for t in algebra}) == 4
