import itertools

import numpy as np
import pytest

from isogreen.fq import NotAPrimePower, field
from isogreen.matgroups import flag_keys, is_upper, over, realization
from isogreen.oracle import embedding, lift


@pytest.mark.parametrize("q", [3, 5, 9, 25, 27, 13])
def test_field_axioms(q):
    F = field(q)
    elems = range(q)
    for a, b in itertools.product(elems, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        if b:
            assert F.mul(F.div(a, b), b) == a
    assert len({F.pow(F.generator, k) for k in range(q - 1)}) == q - 1


def test_not_prime_power():
    with pytest.raises(NotAPrimePower):
        field(6)


@pytest.mark.parametrize("small,big", [(3, 9), (3, 27), (9, 81), (5, 25)])
def test_embedding_is_field_homomorphism(small, big):
    Fs, Fb = field(small), field(big)
    e = embedding(small, big)
    assert len(set(e.tolist())) == small
    for a, b in itertools.product(range(small), repeat=2):
        assert e[Fs.add(a, b)] == Fb.add(int(e[a]), int(e[b]))
        assert e[Fs.mul(a, b)] == Fb.mul(int(e[a]), int(e[b]))


def test_batched_matmul_matches_scalar_loop():
    F = field(9)
    rng = np.random.default_rng(0)
    A = rng.integers(0, 9, size=(5, 3, 3))
    B = rng.integers(0, 9, size=(5, 3, 3))
    C = F.matmul(A, B)
    for k in range(5):
        for i, j in itertools.product(range(3), repeat=2):
            acc = 0
            for m in range(3):
                acc = F.add(acc, F.mul(int(A[k, i, m]), int(B[k, m, j])))
            assert C[k, i, j] == acc


@pytest.mark.parametrize("name", ["SL2", "GL2", "Sp4", "SO5", "SL2xSL2"])
@pytest.mark.parametrize("q", [3, 5])
def test_flag_count(name, q):
    G = over(name, q)
    reps = G.bruhat_coset_reps(G.rs.positive, G.rs.simple)
    R = realization(name)
    borel = (q - 1) ** G.rank * q ** G.rs.n_positive
    assert len(reps) * borel == R.order(q)
    assert len(set(flag_keys(G.F, reps))) == len(reps)


@pytest.mark.parametrize("name", ["SL2", "GL2", "Sp4", "SO5"])
def test_root_elements_in_group(name):
    G = over(name, 5)
    R = G.R
    for i in range(G.rs.n_roots):
        X = [[x for x in row] for row in R.root_vectors[i]]
        assert R.in_lie_algebra(X)
    for i in G.rs.positive:
        assert is_upper(G.x(i, 2)[None])[0]


def test_lift_preserves_products():
    F3, F9 = field(3), field(9)
    A = np.array([[1, 2], [0, 1]])
    B = np.array([[2, 0], [1, 1]])
    assert np.array_equal(lift(F3.matmul(A, B), 3, 9), F9.matmul(lift(A, 3, 9), lift(B, 3, 9)))
