"""Canonical forms, enumeration, superspaces, parallel classes, spans."""

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.errors import DependentBasis, EmptySet, FullSpace
from cwlab.fields import build_field
from cwlab.subspaces import (
    AffineSubspace,
    PointSet,
    affine_span,
    canonicalize,
    direction_spaces,
    gaussian_binomial,
    is_linear_subspace,
    max_general_position,
    rref,
)

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)


def test_canonicalize_examples():
    L = AffineSubspace(F3, (0, 0), [(2, 2)])
    assert L.basis == ((1, 1),) and L.offset == (0, 0)
    full = AffineSubspace(F3, (1, 2), [(1, 2), (2, 2)])
    assert full.basis == ((1, 0), (0, 1)) and full.offset == (0, 0)
    assert AffineSubspace(F3, (1, 1), [(1, 1)]) == AffineSubspace(F3, (0, 0), [(1, 1)])


def test_canonicalize_idempotent_and_membership():
    L = AffineSubspace(F3, (2, 1, 0), [(1, 2, 0), (0, 2, 1)])
    assert canonicalize(L) == L
    pts = set(L.points())
    for pt in product(range(3), repeat=3):
        assert (pt in pts) == L.contains(pt)


def test_dependent_basis_rejected():
    with pytest.raises(DependentBasis):
        AffineSubspace(F3, (0, 0), [(1, 1), (2, 2)])


def test_point_enumeration():
    assert list(AffineSubspace.single_point(F3, (1, 2)).points()) == [(1, 2)]
    line = AffineSubspace(F3, (0, 0), [(1, 1)])
    assert len(list(line.points())) == 3
    assert len(set(AffineSubspace.full_space(F2, 3).points())) == 8


def test_superspace_counts_match_formula():
    # count = (q^(n-k) - 1)/(q - 1)
    assert len(AffineSubspace.single_point(F2, (0, 0)).superspaces()) == 3
    assert len(AffineSubspace.single_point(F3, (1, 1)).superspaces()) == 4
    line = AffineSubspace(F2, (0, 0, 0), [(1, 0, 0)])
    assert len(line.superspaces()) == 3


def test_superspaces_cover_and_intersect_in_base():
    for F in (F2, F3):
        L = AffineSubspace(F, (1, 0, 1), [(1, 1, 0)])
        supers = L.superspaces()
        q, n, k = F.q, 3, 1
        assert len(supers) == (q ** (n - k) - 1) // (q - 1)
        base_pts = set(L.points())
        union = set()
        seen_pairs = set()
        for a in supers:
            apts = set(a.points())
            assert base_pts <= apts
            union |= apts
            for b in supers:
                if a != b:
                    bpts = set(b.points())
                    assert apts & bpts == base_pts
                    seen_pairs.add((a.key(), b.key()))
        assert len(union) == q**n


def test_superspaces_of_full_space_rejected():
    with pytest.raises(FullSpace):
        AffineSubspace.full_space(F2, 2).superspaces()


def test_parallel_class_partitions():
    line = AffineSubspace(F3, (0, 0), [(1, 0)])
    cls = line.parallel_class()
    assert len(cls) == 3 and line in cls
    hyper = AffineSubspace(F2, (0, 0, 0), [(1, 0, 0), (0, 1, 0)])
    assert len(hyper.parallel_class()) == 2
    full = AffineSubspace.full_space(F3, 2)
    assert full.parallel_class() == [full]
    all_pts: list = []
    for member in cls:
        all_pts.extend(member.points())
    assert len(all_pts) == len(set(all_pts)) == 9


def test_affine_span_examples():
    assert affine_span(PointSet(F3, 2, [(1, 2)])).dim == 0
    assert affine_span(PointSet(F2, 2, [(0, 0), (1, 0), (0, 1)])).dim == 2
    sp = affine_span(PointSet(F3, 3, [(0, 0, 0), (1, 1, 0)]))
    assert sp.dim == 1 and sp.basis == ((1, 1, 0),)
    with pytest.raises(EmptySet):
        affine_span(PointSet(F3, 2, []))


def test_max_general_position():
    one = PointSet(F3, 2, [(2, 1)])
    assert max_general_position(one) == [(2, 1)]
    line_pts = PointSet(F3, 2, AffineSubspace(F3, (0, 0), [(1, 1)]).points())
    assert len(max_general_position(line_pts)) == 2
    full = PointSet(F2, 2, AffineSubspace.full_space(F2, 2).points())
    witness = max_general_position(full)
    assert len(witness) == 3 == affine_span(full).dim + 1


def test_is_linear_subspace():
    line_pts = PointSet(F3, 2, AffineSubspace(F3, (0, 0), [(1, 1)]).points())
    assert is_linear_subspace(line_pts) == (True, 1)
    partial = PointSet(F3, 2, list(line_pts.points)[:2])
    assert is_linear_subspace(partial) == (False, None)
    two_lines = PointSet(
        F3,
        2,
        list(AffineSubspace(F3, (0, 0), [(0, 1)]).points())
        + list(AffineSubspace(F3, (1, 0), [(0, 1)]).points()),
    )
    assert is_linear_subspace(two_lines) == (False, None)
    assert is_linear_subspace(PointSet(F3, 2, [])) == (False, None)


def test_linear_subspace_roundtrip_sweep():
    for F in (F2, F3, F4):
        for n in (1, 2, 3):
            for m in range(n + 1):
                for rows in direction_spaces(F, n, m):
                    L = AffineSubspace(F, (0,) * n, rows)
                    ps = PointSet(F, n, L.points())
                    assert is_linear_subspace(ps) == (True, m)


def test_superspace_count_formula_sweep():
    # (q^(n-k) - 1)/(q - 1) superspaces for every direction space
    for F, max_n in ((F2, 4), (F3, 4), (F4, 3)):
        q = F.q
        for n in range(1, max_n + 1):
            for m in range(n):
                for rows in direction_spaces(F, n, m):
                    L = AffineSubspace(F, (0,) * n, rows)
                    expected = (q ** (n - m) - 1) // (q - 1)
                    assert len(L.superspaces()) == expected


def test_direction_space_counts():
    for q, F in ((2, F2), (3, F3), (4, F4)):
        for n in (2, 3, 4):
            for m in range(n + 1):
                count = sum(1 for _ in direction_spaces(F, n, m))
                assert count == gaussian_binomial(q, n, m)


def test_direction_spaces_are_canonical_and_distinct():
    seen = set()
    for rows in direction_spaces(F3, 3, 2):
        canon, _ = rref(F3, rows)
        assert canon == rows
        assert rows not in seen
        seen.add(rows)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_two_descriptions_same_points_same_canonical_form(data):
    F = data.draw(st.sampled_from([F2, F3]))
    n = 3
    rows = [
        tuple(data.draw(st.integers(0, F.q - 1)) for _ in range(n)) for _ in range(2)
    ]
    canon, _ = rref(F, rows)
    if not canon:
        return
    offset = tuple(data.draw(st.integers(0, F.q - 1)) for _ in range(n))
    L1 = AffineSubspace(F, offset, canon)
    # re-describe with scaled/mixed rows and a shifted offset on the subspace
    lam = data.draw(st.integers(1, F.q - 1))
    rows2 = [tuple(F.mul(lam, x) for x in canon[0])] + [
        tuple(F.add(x, y) for x, y in zip(r, canon[0])) for r in canon[1:]
    ]
    shift = list(offset)
    for row in canon:
        c = data.draw(st.integers(0, F.q - 1))
        shift = [F.add(x, F.mul(c, y)) for x, y in zip(shift, row)]
    L2 = AffineSubspace(F, shift, rows2, strict=False)
    assert L1 == L2
    assert L1.is_parallel_to(L2)
