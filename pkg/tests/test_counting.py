"""Counting engines: reference oracle, fast path, regions, extensions."""

import json

import pytest

from cwlab.counting import (
    count_zeros,
    count_zeros_ext,
    counts_over_parallel_class,
    fast_count,
    oracle_count,
    zero_set,
)
from cwlab.constructions import corpus_system, norm_form
from cwlab.errors import BudgetExceeded
from cwlab.fields import build_field
from cwlab.polynomials import PolySystem, parse_poly
from cwlab.subspaces import AffineSubspace

F2 = build_field(2, 1)
F3 = build_field(3, 1)
F4 = build_field(2, 2)

HYP = PolySystem([parse_poly("x1*x2 + x3*x4", F2, ["x1", "x2", "x3", "x4"])])


def test_count_examples():
    assert count_zeros(PolySystem([parse_poly("x1", F3, ["x1", "x2"])])).count == 3
    assert count_zeros(HYP).count == 10


def test_report_fields_and_json_shape():
    rep = count_zeros(HYP)
    assert rep.scanned == 16 and rep.q == 2 and rep.n == 4 and rep.d == 2
    body = json.loads(rep.to_json())
    assert list(body) == ["q", "n", "region", "count", "scanned", "workers"]


def test_subspace_region_equals_direct_filter():
    for i in range(12):
        system = corpus_system(3, i)
        F = system.field
        n = system.nvars
        L = AffineSubspace(F, (0,) * n, [tuple(F.one if j == t else 0 for j in range(n)) for t in (0, 1)])
        via_restriction = count_zeros(system, L).count
        direct = sum(1 for pt in L.points() if system.vanishes_at(pt))
        assert via_restriction == direct


def test_vanishing_restriction_counts_whole_subspace():
    f = parse_poly("x1", F3, ["x1", "x2"])
    L = AffineSubspace(F3, (0, 0), [(0, 1)])  # x1 = 0 on all of L
    assert count_zeros(PolySystem([f]), L).count == 3


def test_extension_counts():
    lin = PolySystem([parse_poly("x1", F2, ["x1", "x2"])])
    assert [count_zeros_ext(lin, s).count for s in (1, 2, 3, 4)] == [2, 4, 8, 16]
    n2 = PolySystem([norm_form(F2, 2)])
    assert count_zeros_ext(n2, 1).count == 1
    assert count_zeros_ext(n2, 2).count == 7
    assert count_zeros_ext(n2, 1).count == count_zeros(n2).count


def test_parallel_class_counts():
    L = AffineSubspace(F2, (0, 0, 0, 0), [(1, 0, 0, 0), (0, 1, 0, 0)])
    pairs = counts_over_parallel_class(HYP, L)
    counts = [c for _, c in pairs]
    assert counts == [3, 3, 3, 1]
    assert sum(counts) == count_zeros(HYP).count
    full = AffineSubspace.full_space(F2, 4)
    assert [c for _, c in counts_over_parallel_class(HYP, full)] == [10]
    line = AffineSubspace(F3, (0, 0), [(0, 1)])
    sysx1 = PolySystem([parse_poly("x1", F3, ["x1", "x2"])])
    assert [c for _, c in counts_over_parallel_class(sysx1, line)] == [3, 0, 0]


def test_fast_engine_equals_oracle_on_corpus_sample():
    for i in range(40):
        system = corpus_system(1, i)
        assert fast_count(system) == oracle_count(system)


def test_parallel_class_sums_to_total_on_corpus():
    from cwlab.subspaces import direction_spaces

    for i in range(8):
        system = corpus_system(6, i)
        F, n = system.field, system.nvars
        total = count_zeros(system).count
        for m in (1, n - 1):
            rows = next(iter(direction_spaces(F, n, m)))
            L = AffineSubspace(F, (0,) * n, rows)
            counts = [c for _, c in counts_over_parallel_class(system, L)]
            assert sum(counts) == total and len(counts) == F.q ** (n - m)


def test_worker_invariance():
    for i in range(10):
        system = corpus_system(2, i)
        assert fast_count(system) == fast_count(system, workers=4)


def test_homogeneous_scalar_orbit_divisibility():
    # for homogeneous systems, nonzero zeros come in scalar orbits of size q-1
    for i in range(60):
        system = corpus_system(4, i)
        if not system.is_homogeneous:
            continue
        cnt = count_zeros(system).count
        assert cnt >= 1 and (cnt - 1) % (system.field.q - 1) == 0


def test_zero_set_matches_count_and_order():
    pts = zero_set(HYP)
    assert len(pts) == 10
    assert pts == sorted(pts)  # odometer order is lexicographic on tuples
    assert all(HYP.vanishes_at(pt) for pt in pts)


def test_budget_errors():
    big = PolySystem([parse_poly("x1", F3, [f"x{i+1}" for i in range(12)])])
    with pytest.raises(BudgetExceeded):
        count_zeros(big, budget=1000)
    with pytest.raises(BudgetExceeded):
        count_zeros_ext(big, 2, budget=1000)


def test_report_json_deterministic():
    a = count_zeros(HYP, workers=1).to_json()
    b = count_zeros(HYP, workers=1).to_json()
    assert a == b
