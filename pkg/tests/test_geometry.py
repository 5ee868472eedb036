"""Dimension estimation from extension counts; linear factor search."""

from fractions import Fraction

import pytest

from cwlab.constructions import example_two, norm_form
from cwlab.errors import InsufficientExtensions, NotHomogeneous
from cwlab.fields import build_field
from cwlab.geometry import (
    conjecture_scan,
    estimate_dimension,
    linear_factor_test,
    normalized_forms,
)
from cwlab.polynomials import PolySystem, parse_poly

F2 = build_field(2, 1)
F3 = build_field(3, 1)


def test_estimator_hyperplane():
    est = estimate_dimension(PolySystem([parse_poly("x1", F2, ["x1", "x2"])]), 4)
    assert [c for _, c in est.counts] == [2, 4, 8, 16]
    assert est.d_hat == 1 and est.k_hat == 1


def test_estimator_split_pair():
    est = estimate_dimension(PolySystem([parse_poly("x1*x2", F2, ["x1", "x2"])]), 4)
    assert [c for _, c in est.counts] == [3, 7, 15, 31]
    assert est.d_hat == 1 and est.k_hat == 2


def test_estimator_norm_form_even_split():
    # the binary norm form splits only over even-degree extensions; the
    # adjacent ratio is useless and the estimator widens the gap
    est = estimate_dimension(PolySystem([norm_form(F2, 2)]), 4)
    assert [c for _, c in est.counts] == [1, 7, 1, 31]
    assert est.d_hat == 1 and est.k_hat == 2
    assert est.anchor_pair == (2, 4)


def test_estimator_empty_zero_set():
    nonvanishing = PolySystem([parse_poly("x1^2 + x1 + 1", F2, ["x1", "x2"])])
    est = estimate_dimension(nonvanishing, 2)
    # x^2+x+1 gains roots over F_4, so only s=1 is empty here; check shape
    assert est.counts[0][1] == 0
    truly_empty = PolySystem(
        [parse_poly("x1", F2, ["x1"]), parse_poly("x1 + 1", F2, ["x1"])]
    )
    est2 = estimate_dimension(truly_empty, 3)
    assert est2.d_hat is None and est2.k_hat is None


def test_estimator_needs_two_extensions():
    with pytest.raises(InsufficientExtensions):
        estimate_dimension(PolySystem([parse_poly("x1", F2, ["x1"])]), 1)


def test_normalized_form_count():
    K = build_field(2, 2)
    forms = list(normalized_forms(K, 3))
    assert len(forms) == (K.q**3 - 1) // (K.q - 1) == 21
    assert len(set(forms)) == 21


def test_linear_factor_explicit_split():
    f = parse_poly("x1*(x1 + x2)", F2, ["x1", "x2"])
    verdict = linear_factor_test(f, 1)
    assert verdict.found and verdict.witness == (1, 0)


def test_linear_factor_none_for_norm_form():
    verdict = linear_factor_test(norm_form(F2, 2), 1)
    assert not verdict.found and verdict.forms_checked == 3
    # over F_4 the same form splits into two conjugate lines
    split = linear_factor_test(norm_form(F2, 2), 2)
    assert split.found


def test_linear_factor_confidence_is_exact_rational():
    verdict = linear_factor_test(norm_form(F3, 2), 2, trials=5)
    assert verdict.error_bound == Fraction(2, 9) ** 5


def test_linear_factor_rejects_inhomogeneous():
    with pytest.raises(NotHomogeneous):
        linear_factor_test(parse_poly("x1 + 1", F2, ["x1", "x2"]), 1)


def test_numpy_and_python_paths_agree():
    f = parse_poly("x1^2*x2 + x2^2*x3 + x3^3", F3, ["x1", "x2", "x3"])
    a = linear_factor_test(f, 2, trials=3, seed=5, force_python=True)
    b = linear_factor_test(f, 2, trials=3, seed=5)
    assert a.found == b.found and a.witness == b.witness
    g = parse_poly("x1*(x1 + x2 + x3)*(x2 + 2*x3)", F3, ["x1", "x2", "x3"])
    a2 = linear_factor_test(g, 2, trials=3, seed=1, force_python=True)
    b2 = linear_factor_test(g, 2, trials=3, seed=1)
    assert a2.found and b2.found and a2.witness == b2.witness


def test_example_two_has_no_linear_factor_over_quartic_extension():
    built = example_two(F3)
    verdict = linear_factor_test(built.poly, 4, trials=6, seed=0)
    assert not verdict.found
    assert verdict.error_bound == Fraction(4, 81) ** 6


def test_products_of_linear_forms_estimate():
    f = parse_poly("x1*(x1 + x2)*(x1 + 2*x2)", F3, ["x1", "x2"])
    est = estimate_dimension(PolySystem([f]), 3)
    assert est.d_hat == 1 and est.k_hat == 3


def test_norm_form_equality_case_estimates_exactly():
    # over F_q the zero set is an affine subspace of dimension n - d; the
    # estimate lands there with multiplicity one provided the anchor
    # extension keeps the form anisotropic (a degree-k norm form splits
    # exactly over the extensions whose degree is a multiple of k, and an
    # anchor on a split count honestly reports the closure geometry instead)
    from cwlab.constructions import embed_in_more_variables

    for F, k, n, smax in ((F2, 2, 3, 3), (F3, 2, 3, 3), (F2, 3, 4, 4)):
        f = embed_in_more_variables(norm_form(F, k), n)
        est = estimate_dimension(PolySystem([f]), smax)
        assert est.d_hat == n - k and est.k_hat == 1


def test_conjecture_scan_smoke():
    rows, flagged = conjecture_scan(
        qs=(2,), ns=(2, 3), profiles=((1,), (2,)), per_cell=1, seed=0
    )
    assert rows and not flagged
    for row in rows:
        assert row.d_hat >= row.floor
