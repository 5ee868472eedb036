"""Affine subspaces of A^n(F_q) and explicit point sets.

Canonical form: the basis is the reduced row echelon form of the direction
space (leading ones, pivot columns cleared, rows ordered by pivot), and the
offset is the coset representative with zero entries in all pivot
coordinates.  Two descriptions of the same point set always canonicalize
identically, and parallelism is equality of canonical bases.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .errors import DependentBasis, EmptySet, FullSpace
from .fields import FieldSpec


def rref(field: FieldSpec, rows: Iterable[Sequence[int]]) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form over the field; returns (rows, pivot columns).

    Zero rows are dropped, so the output rank equals the number of rows.
    """
    work = [list(r) for r in rows]
    if not work:
        return (), ()
    n = len(work[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    r = 0
    for col in range(n):
        src = None
        for i in range(r, len(work)):
            if work[i][col] != 0:
                src = i
                break
        if src is None:
            continue
        work[r], work[src] = work[src], work[r]
        inv = field.inv(work[r][col])
        work[r] = [field.mul(inv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    out = work[:r]
    return tuple(tuple(row) for row in out), tuple(pivots)


class AffineSubspace:
    """offset + row space, stored in canonical form."""

    __slots__ = ("field", "ambient", "offset", "basis", "pivots")

    def __init__(
        self,
        field: FieldSpec,
        offset: Sequence[int],
        rows: Iterable[Sequence[int]] = (),
        *,
        strict: bool = True,
    ):
        raw = [tuple(r) for r in rows]
        canon, pivots = rref(field, raw)
        if strict and len(canon) != len(raw):
            raise DependentBasis(f"{len(raw)} rows have rank {len(canon)}")
        off = list(offset)
        if len(off) != (len(raw[0]) if raw else len(off)):
            raise ValueError("offset and basis lengths disagree")
        for row, piv in zip(canon, pivots):
            c = off[piv]
            if c:
                off = [field.sub(x, field.mul(c, y)) for x, y in zip(off, row)]
        self.field = field
        self.ambient = len(off)
        self.offset = tuple(off)
        self.basis = canon
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.q**self.dim

    @classmethod
    def full_space(cls, field: FieldSpec, n: int) -> "AffineSubspace":
        rows = [[field.one if j == i else 0 for j in range(n)] for i in range(n)]
        return cls(field, [0] * n, rows)

    @classmethod
    def single_point(cls, field: FieldSpec, point: Sequence[int]) -> "AffineSubspace":
        return cls(field, point, ())

    # -- geometry -----------------------------------------------------------

    def reduce_vector(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of v modulo the direction space."""
        F = self.field
        out = list(v)
        for row, piv in zip(self.basis, self.pivots):
            c = out[piv]
            if c:
                out = [F.sub(x, F.mul(c, y)) for x, y in zip(out, row)]
        return tuple(out)

    def contains(self, point: Sequence[int]) -> bool:
        F = self.field
        diff = [F.sub(x, o) for x, o in zip(point, self.offset)]
        return not any(self.reduce_vector(diff))

    def points(self, budget: int | None = None) -> Iterator[tuple[int, ...]]:
        """All q^dim points, odometer order over basis coefficients
        (last coefficient fastest, coefficients in canonical element order).

        Streaming; an optional budget guards against accidental walks over
        huge subspaces.
        """
        if budget is not None and self.size > budget:
            from .errors import BudgetExceeded

            raise BudgetExceeded(f"subspace has {self.size} points, budget {budget}")
        F = self.field
        for coeffs in product(range(F.q), repeat=self.dim):
            pt = list(self.offset)
            for c, row in zip(coeffs, self.basis):
                if c:
                    pt = [F.add(x, F.mul(c, y)) for x, y in zip(pt, row)]
            yield tuple(pt)

    def translate(self, offset: Sequence[int]) -> "AffineSubspace":
        return AffineSubspace(self.field, offset, self.basis)

    def is_parallel_to(self, other: "AffineSubspace") -> bool:
        return self.ambient == other.ambient and self.basis == other.basis

    def _free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient) if j not in piv]

    def parallel_class(self) -> list["AffineSubspace"]:
        """All q^(n-dim) translates of the direction space, canonical order.

        Pairwise disjoint, they cover the ambient space, and include self.
        """
        free = self._free_columns()
        out = []
        for vals in product(range(self.field.q), repeat=len(free)):
            off = [0] * self.ambient
            for j, v in zip(free, vals):
                off[j] = v
            out.append(AffineSubspace(self.field, off, self.basis))
        return out

    def superspaces(self) -> list["AffineSubspace"]:
        """All (dim+1)-dimensional subspaces containing self.

        There are (q^(n-k) - 1)/(q - 1) of them; pairwise they intersect in
        exactly self, and together they cover the ambient space.
        """
        if self.dim == self.ambient:
            raise FullSpace("the full space has no proper superspaces")
        free = self._free_columns()
        F = self.field
        out = []
        for vals in product(range(F.q), repeat=len(free)):
            first = next((v for v in vals if v), None)
            if first != F.one:  # projective normalization: first nonzero is 1
                continue
            v = [0] * self.ambient
            for j, c in zip(free, vals):
                v[j] = c
            out.append(
                AffineSubspace(F, self.offset, list(self.basis) + [tuple(v)])
            )
        return out

    # -- identity ---------------------------------------------------------------

    def key(self) -> tuple:
        return (self.ambient, self.offset, self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineSubspace):
            return NotImplemented
        return self.field == other.field and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.field, self.key()))

    def __repr__(self) -> str:
        return (
            f"AffineSubspace(dim={self.dim}, ambient={self.ambient}, "
            f"offset={self.offset}, basis={self.basis})"
        )


def canonicalize(L: AffineSubspace) -> AffineSubspace:
    """Idempotent by construction: subspaces are stored canonically."""
    return AffineSubspace(L.field, L.offset, L.basis)


class PointSet:
    """An explicit subset of A^t(F_q)."""

    __slots__ = ("field", "ambient", "points")

    def __init__(self, field: FieldSpec, ambient: int, points: Iterable[Sequence[int]]):
        pts = frozenset(tuple(p) for p in points)
        for p in pts:
            if len(p) != ambient or any(not 0 <= x < field.q for x in p):
                raise ValueError(f"invalid point {p}")
        self.field = field
        self.ambient = ambient
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def sorted_points(self) -> list[tuple[int, ...]]:
        return sorted(self.points)

    def __repr__(self) -> str:
        return f"PointSet(|S|={len(self.points)}, ambient={self.ambient}, q={self.field.q})"


def affine_span(ps: PointSet) -> AffineSubspace:
    """Least affine subspace containing the points."""
    if not ps.points:
        raise EmptySet("the empty set has no affine span")
    F = ps.field
    pts = ps.sorted_points()
    base = pts[0]
    diffs = [[F.sub(x, b) for x, b in zip(p, base)] for p in pts[1:]]
    rows, _ = rref(F, diffs)
    return AffineSubspace(F, base, rows)


def max_general_position(ps: PointSet) -> list[tuple[int, ...]]:
    """Greedy maximal general-position subset, in canonical point order.

    Each chosen point lies outside the affine span of the previous ones;
    the result has affine_span(ps).dim + 1 points.
    """
    if not ps.points:
        raise EmptySet("no points")
    F = ps.field
    chosen: list[tuple[int, ...]] = []
    span: AffineSubspace | None = None
    for p in ps.sorted_points():
        if span is None:
            chosen.append(p)
            span = AffineSubspace.single_point(F, p)
        elif not span.contains(p):
            chosen.append(p)
            diff = tuple(F.sub(x, o) for x, o in zip(p, chosen[0]))
            span = AffineSubspace(F, chosen[0], list(span.basis) + [diff])
    return chosen


def is_linear_subspace(ps: PointSet) -> tuple[bool, int | None]:
    """Whether the set equals the point set of some affine subspace.

    Decided by |S| == q^dim(span S); returns (verdict, dim or None).
    """
    if not ps.points:
        return (False, None)
    span = affine_span(ps)
    if len(ps.points) == ps.field.q**span.dim:
        return (True, span.dim)
    return (False, None)


def direction_spaces(field: FieldSpec, n: int, m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All canonical RREF bases of m-dimensional direction spaces in F_q^n.

    Deterministic order: pivot columns lexicographic, then free entries
    odometer style.  The count is the Gaussian binomial [n choose m]_q.
    """
    if m == 0:
        yield ()
        return
    F = field
    for pivots in combinations(range(n), m):
        pivset = set(pivots)
        cells = [
            (i, j)
            for i in range(m)
            for j in range(pivots[i] + 1, n)
            if j not in pivset
        ]
        for vals in product(range(F.q), repeat=len(cells)):
            rows = [[0] * n for _ in range(m)]
            for i, p in enumerate(pivots):
                rows[i][p] = F.one
            for (i, j), v in zip(cells, vals):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


def gaussian_binomial(q: int, n: int, m: int) -> int:
    """Number of m-dimensional subspaces of F_q^n."""
    if m < 0 or m > n:
        return 0
    num = den = 1
    for i in range(m):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
