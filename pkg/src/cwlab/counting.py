"""Exact zero counting over full spaces, subspaces, and extension fields.

Two independent engines are provided and must agree exactly:

* the fast engine walks the point odometer by recursive specialization,
  re-evaluating each polynomial only from the position that changed and
  pruning subtrees where some polynomial has become a nonzero constant;
* the naive oracle evaluates every polynomial at every point from scratch.

Counting is a pure reduction by addition, so partitioning the outermost
variable across workers cannot change the result.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .errors import BudgetExceeded
from .fields import FieldSpec, build_field, embed_subfield
from .polynomials import MultiPoly, PolySystem, restrict_polys
from .subspaces import AffineSubspace

ORACLE_CAP = 10**6
FAST_CAP = 10**9
DEFAULT_BUDGET = 1 << 22


def default_budget() -> int:
    env = os.environ.get("CWLAB_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


@dataclass
class CountReport:
    q: int
    n: int
    r: int
    degrees: tuple[int, ...]
    d: int
    region: str
    count: int
    scanned: int
    workers: int
    elapsed: float = dc_field(default=0.0, repr=False)

    def to_json(self) -> str:
        """Stable body shape; field order is fixed for golden tests."""
        return json.dumps(
            {
                "q": self.q,
                "n": self.n,
                "region": self.region,
                "count": self.count,
                "scanned": self.scanned,
                "workers": self.workers,
            }
        )


# -- nested (recursive dense) representation ----------------------------------

# A node for variables [i..n) is an int when i == n, else a list indexed by
# the exponent of variable i whose entries are nodes for variables [i+1..n).


def _terms_to_nested(terms: dict, i: int, n: int):
    if i == n:
        # exponent tuple is exhausted; at most one entry remains
        for _, c in terms.items():
            return c
        return 0
    if not terms:
        return []
    groups: dict[int, dict] = {}
    for exps, c in terms.items():
        groups.setdefault(exps[i], {})[exps] = c
    top = max(groups)
    # [] stands for the zero node at every level, including above leaves
    return [
        _terms_to_nested(groups[e], i + 1, n) if e in groups else []
        for e in range(top + 1)
    ]


def _n_is_zero(node) -> bool:
    if isinstance(node, int):
        return node == 0
    return all(_n_is_zero(c) for c in node)


def _n_const(node):
    """The constant value of a node, or None when it involves variables."""
    if isinstance(node, int):
        return node
    if not node:
        return 0
    for child in node[1:]:
        if not _n_is_zero(child):
            return None
    return _n_const(node[0])


def _n_scale(node, a: int, F: FieldSpec):
    if isinstance(node, int):
        return F.mul(node, a)
    return [_n_scale(c, a, F) for c in node]


def _n_add(x, y, F: FieldSpec):
    # nodes of equal level; [] is the zero node at any level
    if isinstance(x, int):
        if isinstance(y, int):
            return F.add(x, y)
        return x  # y is the empty (zero) list
    if isinstance(y, int):
        return y  # x is the empty (zero) list
    if len(x) < len(y):
        x, y = y, x
    out = [_n_add(a, b, F) for a, b in zip(x, y)]
    out.extend(x[len(y):])
    return out


def _n_specialize(node, a: int, F: FieldSpec):
    """Evaluate the outermost variable at a (Horner), one level down."""
    if not node:
        return []
    acc = node[-1]
    for child in reversed(node[:-1]):
        acc = _n_add(_n_scale(acc, a, F), child, F)
    return acc


def _count_rec(specs: list, F: FieldSpec, levels: int) -> int:
    """Count common zeros of the active nested specs over q^levels points."""
    q = F.q
    live = []
    for s in specs:
        c = _n_const(s)
        if c is None:
            live.append(s)
        elif c != 0:
            return 0
    if not live:
        return q**levels
    if levels == 0:
        return 1
    if levels == 1:
        univs = [[_n_const(c) if not isinstance(c, int) else c for c in s] for s in live]
        count = 0
        for a in range(q):
            ok = True
            for coeffs in univs:
                acc = 0
                for c in reversed(coeffs):
                    acc = F.add(F.mul(acc, a), c)
                if acc != 0:
                    ok = False
                    break
            if ok:
                count += 1
        return count
    total = 0
    for a in range(q):
        total += _count_rec([_n_specialize(s, a, F) for s in live], F, levels - 1)
    return total


def _prepared_specs(polys: Sequence[MultiPoly]) -> list:
    # cheapest conjunct first: specialize and test small polynomials early
    ordered = sorted(polys, key=lambda f: len(f.terms))
    return [_terms_to_nested(f.terms, 0, f.nvars) for f in ordered]


def fast_count(system: PolySystem, workers: int = 1) -> int:
    F = system.field
    n = system.nvars
    specs = _prepared_specs(system.polys)
    if workers <= 1 or n == 0:
        return _count_rec(specs, F, n)
    chunks = list(range(F.q))

    def run(a: int) -> int:
        return _count_rec([_n_specialize(s, a, F) for s in specs], F, n - 1)

    with ThreadPoolExecutor(max_workers=min(workers, F.q)) as pool:
        return sum(pool.map(run, chunks))


def _odometer(q: int, n: int) -> Iterator[tuple[int, ...]]:
    from itertools import product

    return product(range(q), repeat=n)


def oracle_count(system: PolySystem) -> int:
    """Reference engine: evaluate every polynomial at every point."""
    F = system.field
    n = system.nvars
    if F.q**n > ORACLE_CAP:
        raise BudgetExceeded(f"oracle path is capped at {ORACLE_CAP} points")
    polys = sorted(system.polys, key=lambda f: len(f.terms))
    count = 0
    for pt in _odometer(F.q, n):
        if all(f.evaluate(pt) == 0 for f in polys):
            count += 1
    return count


def zero_set(system: PolySystem, budget: int | None = None) -> list[tuple[int, ...]]:
    """All common zeros over the full space, in odometer point order."""
    F = system.field
    n = system.nvars
    budget = budget if budget is not None else default_budget()
    if F.q**n > budget:
        raise BudgetExceeded(f"q^n = {F.q**n} exceeds budget {budget}")
    specs = _prepared_specs(system.polys)
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(specs_now: list, levels: int) -> None:
        live = []
        for s in specs_now:
            c = _n_const(s)
            if c is None:
                live.append(s)
            elif c != 0:
                return
        if not live:
            base = tuple(prefix)
            for tail in _odometer(F.q, levels):
                out.append(base + tail)
            return
        if levels == 1:
            univs = [[_n_const(c) if not isinstance(c, int) else c for c in s] for s in live]
            base = tuple(prefix)
            for a in range(F.q):
                ok = True
                for coeffs in univs:
                    acc = 0
                    for c in reversed(coeffs):
                        acc = F.add(F.mul(acc, a), c)
                    if acc != 0:
                        ok = False
                        break
                if ok:
                    out.append(base + (a,))
            return
        for a in range(F.q):
            prefix.append(a)
            rec([_n_specialize(s, a, F) for s in live], levels - 1)
            prefix.pop()

    rec(specs, n)
    return out


# -- public counting API --------------------------------------------------------


def _region_size_check(size: int, budget: int | None, engine: str) -> None:
    cap = ORACLE_CAP if engine == "oracle" else FAST_CAP
    limit = min(cap, budget if budget is not None else default_budget())
    if size > limit:
        raise BudgetExceeded(f"region size {size} exceeds budget {limit}")


def subspace_region_label(L: AffineSubspace) -> str:
    off = ",".join(str(x) for x in L.offset)
    rows = "|".join(",".join(str(x) for x in r) for r in L.basis)
    return f"subspace dim={L.dim} offset={off} basis={rows}"


def count_zeros(
    system: PolySystem,
    region: AffineSubspace | None = None,
    *,
    engine: str = "fast",
    workers: int = 1,
    budget: int | None = None,
) -> CountReport:
    """Exact N(f; region) with region = full space (None) or a subspace.

    Subspaces are counted by restricting the system to the subspace and
    counting its zeros over A^dim; this agrees with direct point filtering.
    """
    F = system.field
    t0 = time.perf_counter()
    if region is None:
        size = F.q**system.nvars
        _region_size_check(size, budget, engine)
        if engine == "oracle":
            cnt = oracle_count(system)
        else:
            cnt = fast_count(system, workers=workers)
        label = "full"
    else:
        if region.ambient != system.nvars:
            from .errors import AmbientMismatch

            raise AmbientMismatch(
                f"subspace ambient {region.ambient} != system arity {system.nvars}"
            )
        size = region.size
        _region_size_check(size, budget, engine)
        restricted = restrict_polys(system.polys, region.offset, region.basis, F)
        nonzero = [f for f in restricted if not f.is_zero]
        if not nonzero:
            cnt = size
        else:
            sub_system = PolySystem(nonzero)
            cnt = (
                oracle_count(sub_system)
                if engine == "oracle"
                else fast_count(sub_system, workers=workers)
            )
        label = subspace_region_label(region)
    elapsed = time.perf_counter() - t0
    return CountReport(
        q=F.q,
        n=system.nvars,
        r=system.r,
        degrees=system.degrees,
        d=system.total_degree,
        region=label,
        count=cnt,
        scanned=size,
        workers=max(1, workers),
        elapsed=elapsed,
    )


def lift_system(system: PolySystem, s: int) -> PolySystem:
    """The same equations over the degree-s extension of the coefficient field."""
    F = system.field
    big = build_field(F.p, F.k * s)
    emb = embed_subfield(F, big)
    return PolySystem([f.map_coefficients(emb, big) for f in system.polys])


def count_zeros_ext(
    system: PolySystem,
    s: int,
    *,
    engine: str = "fast",
    workers: int = 1,
    budget: int | None = None,
) -> CountReport:
    """Exact count of zeros with coordinates in F_{q^s}; s=1 is count_zeros."""
    F = system.field
    size = (F.q**s) ** system.nvars
    _region_size_check(size, budget, engine)
    lifted = lift_system(system, s)
    rep = count_zeros(lifted, engine=engine, workers=workers, budget=budget)
    return CountReport(
        q=F.q,
        n=system.nvars,
        r=system.r,
        degrees=system.degrees,
        d=system.total_degree,
        region=f"ext s={s}",
        count=rep.count,
        scanned=size,
        workers=rep.workers,
        elapsed=rep.elapsed,
    )


def counts_over_parallel_class(
    system: PolySystem,
    L: AffineSubspace,
    *,
    engine: str = "fast",
    workers: int = 1,
    budget: int | None = None,
) -> list[tuple[AffineSubspace, int]]:
    """One exact count per member of L's parallel class (counts sum to the
    full-space total)."""
    F = system.field
    size = F.q**system.nvars
    _region_size_check(size, budget, engine)
    out = []
    for member in L.parallel_class():
        rep = count_zeros(system, member, engine=engine, workers=workers, budget=budget)
        out.append((member, rep.count))
    return out
