"""Checkers for the divisibility, congruence, and lower-bound laws.

Every checker returns a LawReport.  A report is "vacuous" when the law's
hypotheses do not apply to the input; vacuous reports pass but carry a
reason string so callers can distinguish "held" from "did not apply".
All comparisons are exact integer or rational arithmetic; no floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .counting import count_zeros, zero_set
from .errors import BudgetExceeded, FullSpace, WrongFieldSize
from .fields import FieldSpec
from .polynomials import PolySystem
from .rng import SplitMix64, derive_seed
from .subspaces import (
    AffineSubspace,
    PointSet,
    affine_span,
    direction_spaces,
    gaussian_binomial,
    is_linear_subspace,
    max_general_position,
)

LAW_ALIASES = {
    "chevalley": "chevalley",
    "chevalley_p": "chevalley",
    "ax": "ax",
    "ax_q": "ax",
    "warning-hyperplanes": "warning-hyperplanes",
    "warning_hyperplanes": "warning-hyperplanes",
    "parallel-subspaces": "parallel-subspaces",
    "theorem1": "parallel-subspaces",
}

DEFAULT_CLASS_BUDGET = 10_000


@dataclass
class LawReport:
    law: str
    applicable: bool
    passed: bool
    evidence: dict = dc_field(default_factory=dict)
    witness: object = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "law": self.law,
                "applicable": self.applicable,
                "pass": self.passed,
                "evidence": self.evidence,
                "witness": self.witness,
            },
            default=str,
        )

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 2


@dataclass
class CheckScope:
    """all_pairs iterates every canonical direction space (budgeted);
    sampled draws seeded random direction spaces instead.  dim restricts
    attention to a single qualifying dimension."""

    all_pairs: bool = True
    budget: int = DEFAULT_CLASS_BUDGET
    sample: int | None = None
    seed: int = 0
    dim: int | None = None


# -- congruences ---------------------------------------------------------------


def _zero_array(system: PolySystem, budget: int | None = None) -> np.ndarray:
    pts = zero_set(system, budget=budget)
    if not pts:
        return np.zeros((0, system.nvars), dtype=np.int64)
    return np.array(pts, dtype=np.int64)


class _FieldTables:
    """numpy gather tables for vectorized field ops on element indexes."""

    def __init__(self, F: FieldSpec):
        q = F.q
        self.sub = np.array([[F.sub(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        self.mul = np.array([[F.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)


_tables_cache: dict[FieldSpec, _FieldTables] = {}


def _tables(F: FieldSpec) -> _FieldTables:
    if F not in _tables_cache:
        _tables_cache[F] = _FieldTables(F)
    return _tables_cache[F]


def _coset_residue_check(
    Z: np.ndarray,
    rows: Sequence[Sequence[int]],
    F: FieldSpec,
    n: int,
    modulus: int,
):
    """Bucket zero points by coset of the direction space; return
    (ok, witness) where witness names two cosets with different residues."""
    q = F.q
    m = len(rows)
    classes = q ** (n - m)
    if Z.shape[0] == 0:
        return True, None
    T = _tables(F)
    red = Z
    pivots = []
    for row in rows:
        piv = next(i for i, x in enumerate(row) if x)
        pivots.append(piv)
        fac = red[:, piv]
        row_arr = np.array(row, dtype=np.int64)
        red = T.sub[red, T.mul[fac[:, None], row_arr[None, :]]]
    free = [j for j in range(n) if j not in set(pivots)]
    if free:
        weights = np.array([q**i for i in range(len(free) - 1, -1, -1)], dtype=np.int64)
        ids = red[:, free] @ weights
    else:
        ids = np.zeros(len(red), dtype=np.int64)
    uniq, counts = np.unique(ids, return_counts=True)
    residues = counts % modulus
    base = residues[0] if len(uniq) == classes else 0
    bad = np.nonzero(residues != base)[0]
    if len(bad) == 0:
        return True, None
    # reconstruct offending offsets for the witness
    def offset_of(coset_id: int) -> list[int]:
        off = [0] * n
        for j in reversed(free):
            off[j] = int(coset_id % q)
            coset_id //= q
        return off

    if len(uniq) == classes:
        a, b = int(uniq[bad[0]]), int(uniq[0 if bad[0] != 0 else int(bad[1])])
        ca, cb = int(counts[bad[0]]), int(counts[0 if bad[0] != 0 else int(bad[1])])
    else:
        # an empty coset (count 0) disagrees with a nonzero residue
        a, ca = int(uniq[bad[0]]), int(counts[bad[0]])
        seen = set(int(u) for u in uniq)
        b = next(i for i in range(classes) if i not in seen)
        cb = 0
    witness = {
        "rows": [list(r) for r in rows],
        "offsets": [offset_of(a), offset_of(b)],
        "counts": [ca, cb],
    }
    return False, witness


def _sampled_direction_spaces(
    F: FieldSpec, n: int, m: int, count: int, seed: int
) -> Iterator[tuple[tuple[int, ...], ...]]:
    from .subspaces import rref

    rng = SplitMix64(derive_seed(seed, n, m))
    seen = set()
    attempts = 0
    while len(seen) < count and attempts < 50 * count:
        attempts += 1
        rows = [[rng.below(F.q) for _ in range(n)] for _ in range(m)]
        canon, _ = rref(F, rows)
        if len(canon) != m or canon in seen:
            continue
        seen.add(canon)
        yield canon


def check_congruence(
    system: PolySystem,
    law: str,
    scope: CheckScope | None = None,
    *,
    budget: int | None = None,
) -> LawReport:
    """Check one of the congruence laws.

    chevalley: p | N(full) when n > d.     ax: q | N(full) when n > d.
    warning-hyperplanes: counts over parallel hyperplanes agree mod p
    (n >= d).  parallel-subspaces (alias theorem1): counts over any two
    parallel subspaces of dimension >= d agree mod q.
    """
    law = LAW_ALIASES.get(law)
    if law is None:
        raise ValueError(f"unknown law")
    scope = scope or CheckScope()
    F = system.field
    n, d, q, p = system.nvars, system.total_degree, F.q, F.p

    if law in ("chevalley", "ax"):
        if not n > d:
            return LawReport(
                law, False, True, {"reason": "requires n > d", "n": n, "d": d}
            )
        N = count_zeros(system, budget=budget).count
        mod = p if law == "chevalley" else q
        res = N % mod
        return LawReport(
            law,
            True,
            res == 0,
            {"count": N, "modulus": mod, "residue": res},
            None if res == 0 else {"count": N, "modulus": mod},
        )

    if law == "warning-hyperplanes":
        if not n >= d:
            return LawReport(
                law, False, True, {"reason": "requires n >= d", "n": n, "d": d}
            )
        dims = [n - 1] if n >= 1 else []
        modulus = p
    else:  # parallel-subspaces
        if d > n:
            return LawReport(
                law,
                False,
                True,
                {"reason": "no subspace dimension reaches d", "n": n, "d": d},
            )
        dims = list(range(max(d, 0), n + 1))
        modulus = q
    if scope.dim is not None:
        if scope.dim not in dims:
            return LawReport(
                law,
                False,
                True,
                {
                    "reason": f"dimension {scope.dim} is outside the qualifying range",
                    "qualifying_dims": dims,
                },
            )
        dims = [scope.dim]

    Z = _zero_array(system, budget=budget)
    checked = 0
    truncated = False
    per_dim: dict[int, int] = {}
    for m in dims:
        if scope.all_pairs:
            spaces: Iterator = direction_spaces(F, n, m)
        else:
            want = scope.sample or scope.budget
            spaces = _sampled_direction_spaces(F, n, m, min(want, gaussian_binomial(q, n, m)), scope.seed)
        for rows in spaces:
            if checked >= scope.budget:
                truncated = True
                break
            ok, witness = _coset_residue_check(Z, rows, F, n, modulus)
            checked += 1
            per_dim[m] = per_dim.get(m, 0) + 1
            if not ok:
                witness["dim"] = m
                return LawReport(
                    law,
                    True,
                    False,
                    {
                        "modulus": modulus,
                        "classes_checked": checked,
                        "per_dim": per_dim,
                        "zero_count": int(Z.shape[0]),
                    },
                    witness,
                )
        if truncated:
            break
    evidence = {
        "modulus": modulus,
        "classes_checked": checked,
        "per_dim": per_dim,
        "zero_count": int(Z.shape[0]),
        "truncated": truncated,
        "mode": "all_pairs" if scope.all_pairs else f"sampled(seed={scope.seed})",
    }
    return LawReport(law, True, True, evidence)


def homogenization_identity(system: PolySystem, *, budget: int | None = None) -> LawReport:
    """Exact identity N(f+) = (q-1) N(f) + N(f-), plus N(f) = N(f-) mod q
    whenever n >= d."""
    F = system.field
    q, n, d = F.q, system.nvars, system.total_degree
    N = count_zeros(system, budget=budget).count
    N_minus = count_zeros(system.leading_system(), budget=budget).count
    N_plus = count_zeros(system.homogenized_system(), budget=budget).count
    identity_ok = N_plus == (q - 1) * N + N_minus
    evidence = {
        "count": N,
        "count_leading": N_minus,
        "count_homogenized": N_plus,
        "identity": f"{N_plus} == ({q}-1)*{N} + {N_minus}",
    }
    passed = identity_ok
    if n >= d:
        cong_ok = (N - N_minus) % q == 0
        evidence["congruence_mod_q"] = cong_ok
        passed = passed and cong_ok
    return LawReport("homogenization-identity", True, passed, evidence)


# -- lower bounds ---------------------------------------------------------------


def lower_bound_audit(system: PolySystem, *, budget: int | None = None) -> LawReport:
    """Audit the floor bound N >= q^(n-d) for nonempty zero sets, and the
    three sharper bounds that hold when the zero set is not an affine
    subspace: N > q^(n-d); N >= 2 q^(n-d) for q >= 4; and, for homogeneous
    systems, N >= q^(n+1-d)/(n+2-d) (compared as cross-multiplied integers).
    """
    F = system.field
    q, n, d = F.q, system.nvars, system.total_degree
    parts: dict[str, dict] = {}
    if d >= n:
        return LawReport(
            "lower-bounds", False, True, {"reason": "requires n > d", "n": n, "d": d}
        )
    pts = zero_set(system, budget=budget)
    N = len(pts)
    floor = q ** (n - d)
    evidence: dict = {"count": N, "floor": floor, "n": n, "d": d, "q": q}
    if N == 0:
        evidence["reason"] = "zero set is empty"
        return LawReport("lower-bounds", False, True, evidence)
    ps = PointSet(F, n, pts)
    linear, lin_dim = is_linear_subspace(ps)
    evidence["linear_subspace"] = {"verdict": linear, "dim": lin_dim}
    parts["floor"] = {"applicable": True, "pass": N >= floor, "lhs": N, "rhs": floor}
    if linear:
        evidence["reason"] = "zero set is an affine subspace; sharper parts vacuous"
        for name in ("strict", "double", "homogeneous_ratio"):
            parts[name] = {"applicable": False, "pass": True}
    else:
        parts["strict"] = {"applicable": True, "pass": N > floor, "lhs": N, "rhs": floor}
        if q >= 4:
            parts["double"] = {
                "applicable": True,
                "pass": N >= 2 * floor,
                "lhs": N,
                "rhs": 2 * floor,
            }
        else:
            parts["double"] = {"applicable": False, "pass": True}
        if system.is_homogeneous:
            # N >= q^(n+1-d) / (n+2-d), exactly: N * (n+2-d) >= q^(n+1-d)
            lhs = N * (n + 2 - d)
            rhs = q ** (n + 1 - d)
            parts["homogeneous_ratio"] = {
                "applicable": True,
                "pass": lhs >= rhs,
                "lhs": f"{N}*{n + 2 - d}",
                "rhs": rhs,
            }
        else:
            parts["homogeneous_ratio"] = {"applicable": False, "pass": True}
    evidence["parts"] = parts
    passed = all(p["pass"] for p in parts.values())
    witness = None if passed else {"failing": [k for k, v in parts.items() if not v["pass"]]}
    return LawReport("lower-bounds", True, passed, evidence, witness)


# -- covering bound (growth witness) ----------------------------------------------


def _intersection_count(Z: PointSet, L: AffineSubspace) -> int:
    return sum(1 for pt in Z.points if L.contains(pt))


def covering_bound_report(Z: PointSet, L0: AffineSubspace) -> LawReport:
    """Grow L0 to a maximal subspace L with the same Z-count, pick the
    (dim+1)-superspace L' with minimal count, and verify

        |Z| >= |Z cap L| + (q^(n-k) - 1)/(q - 1) * (|Z cap L'| - |Z cap L|).

    The inequality is pure counting over the disjoint superspace cover, so
    it holds for arbitrary point sets Z, not only zero sets.
    """
    F = Z.field
    n = Z.ambient
    if L0.dim == n:
        raise FullSpace("the base subspace must be proper")
    base = _intersection_count(Z, L0)
    L = L0
    growth = [L0.dim]
    while L.dim < n:
        nxt = None
        for cand in L.superspaces():
            if _intersection_count(Z, cand) == base:
                nxt = cand
                break
        if nxt is None:
            break
        L = nxt
        growth.append(L.dim)
    k = L.dim
    q = F.q
    total = len(Z)
    evidence = {
        "base_count": base,
        "k": k,
        "growth": growth,
        "total": total,
        "n": n,
        "q": q,
    }
    if k == n:
        # Z met every superspace equally all the way up; bound degenerates
        evidence["note"] = "witness grew to the full space; bound reads |Z| >= |Z|"
        return LawReport("covering-bound", True, total >= base, evidence)
    supers = L.superspaces()
    counts = [_intersection_count(Z, Lp) for Lp in supers]
    cmin = min(counts)
    classes = (q ** (n - k) - 1) // (q - 1)
    bound = base + classes * (cmin - base)
    evidence.update(
        {
            "superspaces": len(supers),
            "expected_superspaces": classes,
            "min_superspace_count": cmin,
            "bound": bound,
        }
    )
    passed = total >= bound and len(supers) == classes and cmin >= base
    witness = None
    if not passed:
        witness = {"bound": bound, "total": total}
    return LawReport("covering-bound", True, passed, evidence, witness)


# -- saturated-set laws (the line/plane combinatorics) ------------------------------


def _all_lines(F: FieldSpec, t: int) -> list[AffineSubspace]:
    out = []
    for rows in direction_spaces(F, t, 1):
        probe = AffineSubspace(F, (0,) * t, rows)
        out.extend(probe.parallel_class())
    return out


def _all_subspaces_of_dim(F: FieldSpec, t: int, m: int) -> list[AffineSubspace]:
    out = []
    for rows in direction_spaces(F, t, m):
        probe = AffineSubspace(F, (0,) * t, rows)
        out.extend(probe.parallel_class())
    return out


SATURATION_PARTS = ("i", "ii", "iii", "iv")


def saturated_set_check(
    S: PointSet, part: str, m: int | None = None
) -> LawReport:
    """Check one of the four line-saturation laws for S in A^t(F_q).

    Common hypothesis: S contains t+1 points in general position.  Then:
      i   (q = 2): no 2-plane meets S in exactly 3 points  =>  S = A^t.
      ii  (q >= 3): every line meeting S twice lies in S   =>  S = A^t.
      iii (q >= 4): every line meeting S twice has >= q-1
                    points of S                            =>  complement
                    of S lies in a hyperplane.
      iv  (m >= 2): every line meeting S twice has >= m+1
                    points of S                            =>  |S| >= (m^(t+1)-1)/(m-1).
    """
    if part not in SATURATION_PARTS:
        raise ValueError(f"unknown part {part!r}")
    F = S.field
    q, t = F.q, S.ambient
    if part == "i" and q != 2:
        raise WrongFieldSize("part i needs q = 2")
    if part == "ii" and q < 3:
        raise WrongFieldSize("part ii needs q >= 3")
    if part == "iii" and q < 4:
        raise WrongFieldSize("part iii needs q >= 4")
    if part == "iv":
        if m is None or m < 2:
            raise ValueError("part iv needs an integer m >= 2")
    law = f"line-saturation-{part}"
    evidence: dict = {"q": q, "t": t, "size": len(S)}
    if m is not None:
        evidence["m"] = m

    if not S.points:
        evidence["reason"] = "empty set has no general-position points"
        return LawReport(law, False, True, evidence)
    span_dim = affine_span(S).dim
    if span_dim < t:
        evidence["reason"] = f"general position fails: span has dim {span_dim} < {t}"
        return LawReport(law, False, True, evidence)
    evidence["general_position_points"] = len(max_general_position(S))

    if part == "i":
        for P in _all_subspaces_of_dim(F, t, 2):
            inter = sum(1 for pt in P.points() if pt in S)
            if inter == 3:
                evidence["reason"] = "a 2-plane meets S in exactly 3 points"
                evidence["witness_plane"] = {
                    "offset": list(P.offset),
                    "rows": [list(r) for r in P.basis],
                }
                return LawReport(law, False, True, evidence)
        conclusion = len(S) == q**t
        return LawReport(law, True, conclusion, evidence, None if conclusion else {"size": len(S)})

    lines = _all_lines(F, t)
    threshold = {"ii": q, "iii": q - 1, "iv": (m or 0) + 1}[part]
    for ln in lines:
        inter = sum(1 for pt in ln.points() if pt in S)
        if 2 <= inter < threshold:
            evidence["reason"] = (
                f"a line meets S in {inter} points, below the threshold {threshold}"
            )
            evidence["witness_line"] = {
                "offset": list(ln.offset),
                "rows": [list(r) for r in ln.basis],
            }
            return LawReport(law, False, True, evidence)

    if part == "ii":
        conclusion = len(S) == q**t
    elif part == "iii":
        complement = [
            pt for pt in AffineSubspace.full_space(F, t).points() if pt not in S
        ]
        if not complement:
            conclusion = True
        else:
            conclusion = False
            for H in _all_subspaces_of_dim(F, t, t - 1):
                if all(H.contains(pt) for pt in complement):
                    conclusion = True
                    evidence["complement_hyperplane"] = {
                        "offset": list(H.offset),
                        "rows": [list(r) for r in H.basis],
                    }
                    break
        evidence["complement_size"] = len(complement)
    else:  # iv
        need = (m**(t + 1) - 1) // (m - 1)  # type: ignore[operator]
        evidence["required_size"] = need
        conclusion = len(S) >= need
    return LawReport(law, True, conclusion, evidence, None if conclusion else {"size": len(S)})


# -- exhaustive saturation sweeps (bitmask engine) -----------------------------------


def _point_rank(pt: Sequence[int], q: int) -> int:
    r = 0
    for x in pt:
        r = r * q + x
    return r


class SaturationSweeper:
    """Bitmask engine for sweeping all (or sampled) subsets of A^t(F_q).

    Point masks follow odometer point order.  Agreement with the object
    level checker is property-tested; this engine exists because 2^(q^t)
    subset loops need cheap per-subset work.
    """

    def __init__(self, F: FieldSpec, t: int):
        self.F = F
        self.t = t
        self.q = F.q
        self.npoints = F.q**t
        pts = list(AffineSubspace.full_space(F, t).points())
        self.points = pts
        self.rank = {pt: i for i, pt in enumerate(pts)}
        self.line_masks = [self._mask(L) for L in _all_lines(F, t)]
        self.plane_masks = (
            [self._mask(P) for P in _all_subspaces_of_dim(F, t, 2)] if t >= 2 else []
        )
        self.hyperplane_masks = (
            [self._mask(H) for H in _all_subspaces_of_dim(F, t, t - 1)] if t >= 1 else []
        )
        # masks of proper affine subspaces, for the general position test
        self.proper_span_masks = self.hyperplane_masks

    def _mask(self, L: AffineSubspace) -> int:
        mask = 0
        for pt in L.points():
            mask |= 1 << self.rank[pt]
        return mask

    def set_of_mask(self, mask: int) -> PointSet:
        pts = [self.points[i] for i in range(self.npoints) if mask >> i & 1]
        return PointSet(self.F, self.t, pts)

    def hypothesis_and_conclusion(self, mask: int, part: str, m: int | None) -> tuple[bool, bool]:
        """Fast verdicts (hypothesis holds?, conclusion holds?) for a subset."""
        size = mask.bit_count()
        if size == 0:
            return False, True
        # general position: span must be all of A^t, i.e. S inside no hyperplane
        if size < self.t + 1 or any(
            mask & ~h == 0 for h in self.hyperplane_masks
        ):
            return False, True
        if part == "i":
            if any((mask & p).bit_count() == 3 for p in self.plane_masks):
                return False, True
            return True, size == self.npoints
        threshold = {"ii": self.q, "iii": self.q - 1, "iv": (m or 0) + 1}[part]
        for ln in self.line_masks:
            c = (mask & ln).bit_count()
            if 2 <= c < threshold:
                return False, True
        if part == "ii":
            return True, size == self.npoints
        if part == "iii":
            comp = ~mask & ((1 << self.npoints) - 1)
            if comp == 0:
                return True, True
            return True, any(comp & ~h == 0 for h in self.hyperplane_masks)
        need = (m**(self.t + 1) - 1) // (m - 1)  # type: ignore[operator]
        return True, size >= need


def saturated_set_exhaustive(
    F: FieldSpec,
    t: int,
    part: str,
    m: int | None = None,
    *,
    sample: int | None = None,
    seed: int = 0,
) -> LawReport:
    """Sweep subsets of A^t(F_q) for counterexamples to a saturation law.

    Exhaustive mode enumerates all 2^(q^t) subsets (requires q^t <= 16);
    sampled mode draws `sample` seeded subsets (requires q^t <= 25).
    """
    if part not in SATURATION_PARTS:
        raise ValueError(f"unknown part {part!r}")
    q = F.q
    npoints = q**t
    law = f"line-saturation-{part}-sweep"
    if sample is None and npoints > 16:
        raise BudgetExceeded(f"exhaustive sweep needs q^t <= 16, got {npoints}")
    if sample is not None and npoints > 25:
        raise BudgetExceeded(f"sampled sweep needs q^t <= 25, got {npoints}")
    sweeper = SaturationSweeper(F, t)
    counterexamples = []
    checked = 0
    hypothesis_met = 0
    if sample is None:
        masks: Iterator[int] = iter(range(1 << npoints))
    else:
        rng = SplitMix64(derive_seed(seed, q, t, npoints))
        masks = (rng.next_u64() & ((1 << npoints) - 1) for _ in range(sample))
    for mask in masks:
        checked += 1
        hyp, concl = sweeper.hypothesis_and_conclusion(mask, part, m)
        if hyp:
            hypothesis_met += 1
            if not concl:
                counterexamples.append(mask)
                if len(counterexamples) >= 5:
                    break
    evidence = {
        "q": q,
        "t": t,
        "part": part,
        "subsets_checked": checked,
        "hypothesis_met": hypothesis_met,
        "mode": "exhaustive" if sample is None else f"sampled({sample}, seed={seed})",
    }
    if m is not None:
        evidence["m"] = m
    passed = not counterexamples
    witness = None
    if counterexamples:
        witness = {
            "masks": counterexamples,
            "first_set": sorted(sweeper.set_of_mask(counterexamples[0]).points),
        }
    return LawReport(law, True, passed, evidence, witness)


# -- scalar-orbit facts for homogeneous systems ------------------------------------


def cone_count_identity(
    system: PolySystem, L: AffineSubspace, *, budget: int | None = None
) -> tuple[int, int, bool]:
    """For homogeneous systems and a subspace L avoiding 0: the union of the
    scalar multiples of L meets the zero set in exactly 1 + (q-1)|Z cap L|
    points.  Returns (cone_count, predicted, ok)."""
    F = system.field
    q = F.q
    pts = zero_set(system, budget=budget)
    Z = set(pts)
    on_L = sum(1 for pt in Z if L.contains(pt))
    cone_pts = set()
    for lam in range(1, q):
        for pt in L.points():
            cone_pts.add(tuple(F.mul(lam, x) for x in pt))
    cone_pts.add((0,) * system.nvars)
    cone_hits = sum(1 for pt in cone_pts if pt in Z)
    predicted = 1 + (q - 1) * on_L
    return cone_hits, predicted, cone_hits == predicted
