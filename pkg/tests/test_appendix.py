import copy

import numpy as np
import pytest

from isogreen.appendix import (AppendixCheckFailed, charpoly, closed_form_generic, load_paperdata,
                               reduce_mod_p, reduced_params, skew_torus, verify_so5_appendix)
from isogreen.exactcore import QuadNum
from isogreen.fq import field
from isogreen.genericity import is_generic
from isogreen.matgroups import flag_keys
from isogreen.oracle import centralizer_roots, is_abs_indecomposable, stabilizer
from isogreen.rootsys import load
from isogreen.subposet import is_isolated


def test_all_seven_checks_pass():
    rep = verify_so5_appendix().require()
    assert [c.step for c in rep.checks] == list(range(1, 8))
    assert rep.passed and not rep.failed()


def test_perturbed_g1_fails_check_three():
    data = copy.deepcopy(load_paperdata())
    g1 = data["so5_example"]["g1"]
    g1[0][0], g1[0][1] = g1[0][1], g1[0][0]
    rep = verify_so5_appendix(data)
    assert [c.step for c in rep.failed()] == [3]
    with pytest.raises(AppendixCheckFailed):
        rep.require()


def test_perturbed_third_image_fails_sum():
    data = copy.deepcopy(load_paperdata())
    data["so5_example"]["ad_g3_s3"][0][1] += 1
    rep = verify_so5_appendix(data)
    assert 4 in [c.step for c in rep.failed()]


def test_charpoly_of_skew_torus():
    # x (x^2 + a^2)(x^2 + b^2) for the rotation generator with angles a, b
    M = skew_torus(QuadNum(2), QuadNum(3))
    assert charpoly(M) == [QuadNum(c) for c in (1, 0, 13, 0, 36, 0)]


def test_mod5_flags_from_eigenvectors_match_g():
    F = field(5)
    flags, from_g, _ = reduce_mod_p()
    for a, b in zip(flags, from_g):
        assert flag_keys(F, a) == flag_keys(F, b)


def test_mod5_reduction_is_decomposable():
    flags, _, t = reduce_mod_p()
    st = stabilizer("SO5", flags, 5)
    assert any(np.array_equal(x, t) for x in st)
    rs = load("SO5")[0]
    phi_t = centralizer_roots("SO5", t, 5)
    assert len(phi_t) == 4 and is_isolated(rs, phi_t)
    rep = is_abs_indecomposable("SO5", flags, 5, 5)
    assert rep.verdict is False and rep.stabilizer_order == 4
    assert not is_isolated(rs, rep.witness_roots)


def test_mod5_tuple_is_not_generic():
    params = reduced_params(5)
    rs, W, _ = load("SO5")
    assert not is_generic(params, rs, W)
    assert not closed_form_generic(params)
