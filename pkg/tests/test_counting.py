import pytest

from isogreen.counting import (CountingParams, cross_check, decompose, expected_degree, gamma,
                               leading_law, multiplicity_generic, positivity_report)
from isogreen.exactcore import QPoly, parse_poly
from isogreen.rootsys import load
from isogreen.subposet import enumerate_pseudo_levis, isolated

PRESETS = ["SL2", "GL2", "Sp4", "SO5", "SL2xSL2"]


def test_params_validation():
    with pytest.raises(ValueError):
        CountingParams(0, 2, "SL2")
    with pytest.raises(ValueError):
        CountingParams(-1, 5, "SL2")
    CountingParams(1, 1, "SL2")


def test_gamma_values():
    rs, _, _ = load("Sp4")
    p = CountingParams(0, 3, "Sp4")
    iso = {len(e): e for e in isolated(rs, enumerate_pseudo_levis(rs))}
    assert gamma(iso[8], p) == 0 - 2 - 8 + 3 * 4
    assert gamma(iso[4], p) == 0 - 2 - 4 + 3 * 2


@pytest.mark.parametrize("name,expected", [
    ("SL2", "2"), ("GL2", "1"), ("SO5", "q^2+6*q+24"), ("SL2xSL2", "4"),
])
def test_small_multiplicities(name, expected, cache):
    assert multiplicity_generic(CountingParams(0, 3, name), cache) == parse_poly(expected)


def test_sl2_other_cases(cache):
    assert multiplicity_generic(CountingParams(0, 4, "SL2"), cache) == parse_poly("2*q+8")
    assert multiplicity_generic(CountingParams(1, 3, "SL2"), cache) == parse_poly("2*q^3+6*q^2+8*q+2")


@pytest.mark.parametrize("g,ell", [(0, 3), (0, 4), (1, 3)])
def test_multiplicative_on_products(g, ell, cache):
    one = multiplicity_generic(CountingParams(g, ell, "SL2"), cache)
    two = multiplicity_generic(CountingParams(g, ell, "SL2xSL2"), cache)
    assert two == one * one


@pytest.mark.parametrize("name", PRESETS)
def test_cross_check_and_leading_law(name, cache):
    for g in (0, 1):
        for ell in (3, 4):
            p = CountingParams(g, ell, name)
            m = cross_check(p, cache)
            assert m.is_integral() and m.is_polynomial()
            assert leading_law(p, m), (name, g, ell)
            assert m.degree() == expected_degree(p)
            positivity_report(m)


def test_so5_decomposition(cache):
    dec = decompose(CountingParams(0, 3, "SO5"), cache)
    by_type = {t.label: t.contribution for t in dec.perIsolated}
    assert by_type["A1xA1"] == QPoly.const(4)
    assert by_type["B2"] == parse_poly("q^2+6*q+20")


def test_positivity_report_flags_negative_coefficients():
    rep = positivity_report(parse_poly("q^2-3*q+1"))
    assert not rep.nonnegative and set(rep.negative) == {1}
