from fractions import Fraction

import pytest

from isogreen.rootsys import UnsupportedType, dot, load, reflection_matrix, weyl_act

CLASSICAL = {
    "A1": (2, 2), "A2": (6, 6), "A3": (12, 24), "B2": (8, 8), "C2": (8, 8),
    "G2": (12, 12), "B3": (18, 48), "C3": (18, 48),
}


@pytest.mark.parametrize("name", sorted(CLASSICAL))
def test_root_and_weyl_counts(name):
    rs, W, _ = load(name)
    n_roots, order = CLASSICAL[name]
    assert rs.n_roots == n_roots
    assert rs.n_positive == n_roots // 2
    assert len(W) == order


@pytest.mark.parametrize("name", ["SL2", "GL2", "Sp4", "SO5", "SL2xSL2", "G2", "B3"])
def test_weyl_group_is_orthogonal(name):
    rs, W, _ = load(name)
    basis = [[Fraction(int(i == j)) for j in range(rs.ambient)] for i in range(rs.ambient)]
    for w in W.elements:
        for u in basis:
            for v in basis:
                assert dot(weyl_act(w, u), weyl_act(w, v)) == dot(u, v)


@pytest.mark.parametrize("name", ["A2", "C2", "G2", "B3"])
def test_cartan_integers(name):
    rs, _, _ = load(name)
    for i in range(rs.n_roots):
        for j in range(rs.n_roots):
            assert rs.pairing(i, j) in {0, 1, -1, 2, -2, 3, -3}


@pytest.mark.parametrize("name", ["A2", "C2", "G2"])
def test_simple_reflections_close_up(name):
    rs, W, _ = load(name)
    perms = {w.perm for w in W.elements}
    gens = [reflection_matrix(rs.roots[i]) for i in rs.simple]
    for w in W.elements:
        for s in gens:
            image = [tuple(sum(s[a][b] * r[b] for b in range(rs.ambient)) for a in range(rs.ambient))
                     for r in (weyl_act(w, root) for root in rs.roots)]
            perm = tuple(rs.index(tuple(v)) for v in image)
            assert perm in perms


def test_presets_have_expected_shape():
    assert load("Sp4")[0].n_roots == 8
    assert len(load("GL2")[0].center_basis()) == 1
    assert len(load("SL2")[0].center_basis()) == 0
    assert len(load("SL2xSL2")[0].components()) == 2


def test_unknown_group():
    with pytest.raises(UnsupportedType):
        load("Foo")
