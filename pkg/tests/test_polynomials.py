"""Parsing, evaluation, homogenization, and restriction."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.errors import (
    ArityMismatch,
    ExprSyntaxError,
    GeneratorInPrimeField,
    UnknownVariable,
    ZeroPolynomial,
)
from cwlab.fields import build_field
from cwlab.polynomials import (
    MultiPoly,
    NEG_INF,
    PolySystem,
    parse_poly,
    restrict_to_subspace,
)
from cwlab.subspaces import AffineSubspace

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)

X123 = ["x1", "x2", "x3"]


def test_parse_examples():
    f = parse_poly("x1*x2 + x3^2", F3, X123)
    assert len(f.terms) == 2 and f.total_degree == 2
    z = parse_poly("x1 + 2*x1", F3, ["x1"])
    assert z.is_zero and z.total_degree == NEG_INF
    g = parse_poly("g*x1^2 + 1", F4, ["x1"])
    assert g.terms[(2,)] == F4.generator and len(g.terms) == 2


def test_parse_errors():
    with pytest.raises(ExprSyntaxError):
        parse_poly("x1 + ", F3, ["x1"])
    with pytest.raises(ExprSyntaxError):
        parse_poly("x1 @ x1", F3, ["x1"])
    with pytest.raises(UnknownVariable):
        parse_poly("x1 + y", F3, ["x1"])
    with pytest.raises(GeneratorInPrimeField):
        parse_poly("g*x1", F3, ["x1"])
    with pytest.raises(ExprSyntaxError):
        parse_poly("1:1*x1", F3, ["x1"])  # colon literal in a prime field


def test_parse_subtraction_parentheses_unary():
    f = parse_poly("-(x1 - 2)^2 + x1^2", F3, ["x1"])
    # -(x1-2)^2 + x1^2 = -(x1^2 - 4x1 + 4) + x1^2 = 4x1 - 4 = x1 + 2 mod 3
    assert f == parse_poly("x1 + 2", F3, ["x1"])


def test_evaluate_examples():
    f = parse_poly("x1*x2 + x3^2", F3, X123)
    assert f.evaluate((1, 2, 2)) == 0
    h = parse_poly("x1^2*x2 + x2^3", F3, ["x1", "x2"])
    assert h.evaluate((0, 0)) == 0
    m = parse_poly("x1^2 + x1 + 1", F4, ["x1"])
    assert m.evaluate((F4.generator,)) == 0  # g is a root of the modulus
    with pytest.raises(ArityMismatch):
        f.evaluate((1, 2))


def test_leading_form():
    f = parse_poly("x1*x2 + x3 + 1", F3, X123)
    assert f.leading_form() == parse_poly("x1*x2", F3, X123)
    h = parse_poly("x1^2 + x2^2 + x1", F2, ["x1", "x2"])
    assert h.leading_form() == parse_poly("x1^2 + x2^2", F2, ["x1", "x2"])
    hom = parse_poly("x1^3 + x2^3", F3, ["x1", "x2"])
    assert hom.leading_form() == hom
    with pytest.raises(ZeroPolynomial):
        MultiPoly.zero(F3, 2).leading_form()


def test_homogenize_examples():
    f = parse_poly("x1*x2 + 1", F3, ["x1", "x2"])
    assert f.homogenize() == parse_poly("x1*x2 + x0^2", F3, ["x0", "x1", "x2"])
    h = parse_poly("x1^2 + x3", F3, X123)
    assert h.homogenize() == parse_poly("x1^2 + x0*x3", F3, ["x0"] + X123)
    hom = parse_poly("x1^2 + x1*x2", F3, ["x1", "x2"])
    plus = hom.homogenize()
    assert plus.nvars == 3 and all(e[0] == 0 for e in plus.terms)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_homogenization_evaluation_identities(data):
    F = data.draw(st.sampled_from([F2, F3, F4]))
    n = data.draw(st.integers(1, 3))
    terms = data.draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 2) for _ in range(n)]),
            st.integers(1, F.q - 1),
            min_size=1,
            max_size=5,
        )
    )
    f = MultiPoly.from_terms(F, n, list(terms.items()))
    if f.is_zero:
        return
    plus, minus = f.homogenize(), f.leading_form()
    for pt in __import__("itertools").product(range(F.q), repeat=n):
        assert plus.evaluate((F.one,) + pt) == f.evaluate(pt)
        assert plus.evaluate((0,) + pt) == minus.evaluate(pt)


def test_homogeneous_scaling():
    f = parse_poly("x1^2*x2 + x2^3", F3, ["x1", "x2"])
    e = int(f.total_degree)
    for lam in range(1, F3.q):
        for pt in __import__("itertools").product(range(F3.q), repeat=2):
            scaled = tuple(F3.mul(lam, x) for x in pt)
            assert f.evaluate(scaled) == F3.mul(F3.pow(lam, e), f.evaluate(pt))


def test_restriction_examples():
    f = parse_poly("x1 + x2", F3, ["x1", "x2"])
    L = AffineSubspace(F3, (0, 1), [(1, 1)])
    (g,) = restrict_to_subspace(PolySystem([f]), L).polys
    assert g == parse_poly("2*t + 1", F3, ["t"])
    h = parse_poly("x1*x2", F2, ["x1", "x2"])
    L2 = AffineSubspace(F2, (0, 0), [(1, 1)])
    (g2,) = restrict_to_subspace(PolySystem([h]), L2).polys
    assert g2 == parse_poly("t^2", F2, ["t"])


def test_restriction_to_full_space_is_renaming():
    f = parse_poly("x1*x2 + x3", F3, X123)
    L = AffineSubspace.full_space(F3, 3)
    (g,) = restrict_to_subspace(PolySystem([f]), L).polys
    assert g.terms == f.terms


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_restriction_commutes_with_evaluation(data):
    F = data.draw(st.sampled_from([F2, F3]))
    n = 3
    terms = data.draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 2) for _ in range(n)]),
            st.integers(1, F.q - 1),
            min_size=1,
            max_size=4,
        )
    )
    f = MultiPoly.from_terms(F, n, list(terms.items()))
    if f.is_zero:
        return
    offset = tuple(data.draw(st.integers(0, F.q - 1)) for _ in range(n))
    L = AffineSubspace(F, offset, [(F.one, 0, data.draw(st.integers(0, F.q - 1)))])
    from cwlab.polynomials import restrict_polys

    (g,) = restrict_polys([f], L.offset, L.basis, F)
    assert g.total_degree <= f.total_degree
    for t in range(F.q):
        pt = [F.add(o, F.mul(t, b)) for o, b in zip(L.offset, L.basis[0])]
        if g.is_zero:
            assert f.evaluate(pt) == 0
        else:
            assert g.evaluate((t,)) == f.evaluate(pt)


def test_parallel_restrictions_share_top_degree_component():
    f = parse_poly("x1*x2 + x1 + x3^2", F3, X123)
    sys = PolySystem([f])
    L1 = AffineSubspace(F3, (0, 0, 0), [(1, 1, 0), (0, 0, 1)])
    L2 = AffineSubspace(F3, (0, 1, 2), [(1, 1, 0), (0, 0, 1)])
    from cwlab.polynomials import restrict_polys

    (g1,) = restrict_polys(sys.polys, L1.offset, L1.basis, F3)
    (g2,) = restrict_polys(sys.polys, L2.offset, L2.basis, F3)
    d = int(f.total_degree)
    assert g1.homogeneous_component(d) == g2.homogeneous_component(d)


def test_print_parse_round_trip():
    cases = [
        ("x1*x2 + x3^2 + 2", F3, X123),
        ("g*x1^2 + x2 + 1", F4, ["x1", "x2"]),
        ("x1^3 + 2*x1*x2 + 1", F3, ["x1", "x2"]),
    ]
    for text, F, names in cases:
        f = parse_poly(text, F, names)
        assert parse_poly(f.to_text(names), F, names) == f


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_print_parse_fixed_point_random(data):
    F = data.draw(st.sampled_from([F2, F3, F4]))
    n = data.draw(st.integers(1, 3))
    names = [f"x{i+1}" for i in range(n)]
    terms = data.draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 3) for _ in range(n)]),
            st.integers(1, F.q - 1),
            max_size=6,
        )
    )
    f = MultiPoly.from_terms(F, n, list(terms.items()))
    text = f.to_text(names)
    if f.is_zero:
        assert text == "0"
        return
    g = parse_poly(text, F, names)
    assert g == f and g.to_text(names) == text


def test_system_invariants():
    f = parse_poly("x1*x2", F3, ["x1", "x2"])
    g = parse_poly("x1 + 1", F3, ["x1", "x2"])
    sys = PolySystem([f, g])
    assert sys.degrees == (2, 1) and sys.total_degree == 3 and sys.r == 2
    with pytest.raises(ZeroPolynomial):
        PolySystem([MultiPoly.zero(F3, 2)])
