"""Generators for the bundled named systems and for seeded random corpora.

Every construction records a recipe (kind + parameters + provenance) whose
replay reproduces the identical system bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .counting import count_zeros
from .errors import DegreeTooLarge, FieldTooSmall
from .fields import (
    FIELD_SIZE_CAP,
    FieldSpec,
    build_field,
    embed_subfield,
    fixed_by_subfield_frobenius,
)
from .polynomials import MultiPoly, PolySystem
from .rng import SplitMix64, derive_seed

_NORM_VERIFY_CAP = 1 << 12


@dataclass
class ConstructionRecipe:
    kind: str  # norm_form | example1 | example2 | random
    parameters: dict
    provenance: dict = dc_field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"kind": self.kind, "parameters": self.parameters, "provenance": self.provenance},
            sort_keys=False,
        )

    @classmethod
    def from_json(cls, text: str) -> "ConstructionRecipe":
        data = json.loads(text)
        return cls(data["kind"], data["parameters"], data.get("provenance", {}))


def norm_form(F: FieldSpec, k: int) -> MultiPoly:
    """The degree-k form in k variables given by the field norm of a general
    element of the degree-k extension, written in the power basis 1, g, ...,
    g^(k-1).  Over F_q it vanishes only at the origin.
    """
    if k < 1:
        raise ValueError("norm form degree must be >= 1")
    if F.q**k > FIELD_SIZE_CAP:
        raise DegreeTooLarge(f"q^k = {F.q**k} exceeds the field cap")
    if k == 1:
        return MultiPoly.variable(F, 1, 0)
    K = build_field(F.p, F.k * k)
    emb = embed_subfield(F, K)
    # basis of K over F: powers of K's generator
    omega = [K.one]
    for _ in range(k - 1):
        omega.append(K.mul(omega[-1], K.generator))
    generic = MultiPoly.from_terms(
        K,
        k,
        [
            (tuple(1 if j == i else 0 for j in range(k)), omega[i])
            for i in range(k)
        ],
    )
    prod = MultiPoly.constant(K, k, K.one)
    qbase = F.q
    conj = generic
    for _ in range(k):
        prod = prod * conj
        conj = conj.map_coefficients(lambda c: K.pow(c, qbase), K)
    # coefficients land in the embedded base field; pull them back
    out_terms = []
    for exps, c in prod.terms.items():
        if not emb.in_image(c):
            raise AssertionError("norm form coefficient escaped the base field")
        out_terms.append((exps, emb.pull(c)))
    form = MultiPoly.from_terms(F, k, out_terms)
    if F.q**k <= _NORM_VERIFY_CAP:
        cnt = count_zeros(PolySystem([form])).count
        assert cnt == 1, f"norm form must vanish only at 0, counted {cnt}"
    return form


def embed_in_more_variables(f: MultiPoly, n: int, at: int = 0) -> MultiPoly:
    """View f as a polynomial in n >= f.nvars variables, occupying the
    variable block starting at position `at`."""
    if f.nvars + at > n:
        raise ValueError("variable block does not fit")
    pad_l = (0,) * at
    pad_r = (0,) * (n - at - f.nvars)
    return MultiPoly(f.field, n, {pad_l + e + pad_r: c for e, c in f.terms.items()})


def _least_irreducible_quadratic_c(F: FieldSpec) -> int:
    """Least c such that x^2 + x + c has no root in F (always exists)."""
    for c in range(F.q):
        if all(F.add(F.add(F.mul(a, a), a), c) != 0 for a in range(F.q)):
            return c
    raise AssertionError("an irreducible monic quadratic x^2+x+c always exists")


@dataclass
class QuadricTimesNorm:
    """example1: a quadric in four variables times a norm form in the rest."""

    system: PolySystem
    quadric: MultiPoly
    expected_quadric_count: int
    recipe: ConstructionRecipe
    display_count: int  # q^(n+1-d) * (1 - 1/q + 1/q^2), evaluated exactly
    inclusion_exclusion_count: int | None  # exact full count for n > 4
    display_mismatch: bool


def example_one(F: FieldSpec, n: int = 4) -> QuadricTimesNorm:
    """Quadric Q = x1 x2 + x3^2 + x3 x4 + c x4^2 with the binary part
    irreducible, times a norm form in the remaining n-4 variables.

    Q alone has exactly q^3 - q^2 + q zeros over F_q^4.  For n > 4 the
    closed-form display value q^(n+1-d)(1 - 1/q + 1/q^2) no longer matches
    the true count of the product's zero set, and the result flags that.
    """
    if n < 4:
        raise ValueError("example1 needs at least 4 variables")
    q = F.q
    c = _least_irreducible_quadratic_c(F)
    one = F.one
    quadric4 = MultiPoly.from_terms(
        F,
        4,
        [
            ((1, 1, 0, 0), one),
            ((0, 0, 2, 0), one),
            ((0, 0, 1, 1), one),
            ((0, 0, 0, 2), c),
        ],
    )
    quadric = embed_in_more_variables(quadric4, n, at=0)
    provenance: dict = {"c": c, "modulus": list(F.modulus)}
    if n > 4:
        tail = norm_form(F, n - 4)
        poly = quadric * embed_in_more_variables(tail, n, at=4)
        provenance["norm_degree"] = n - 4
    else:
        poly = quadric
    system = PolySystem([poly])
    expected = q**3 - q**2 + q
    display = int(Fraction(q) ** (n + 1 - system.total_degree) * (1 - Fraction(1, q) + Fraction(1, q) ** 2))
    incl_excl = None
    mismatch = False
    if n > 4:
        # zeros of Q*N = (zeros of Q) x F^(n-4)  union  F^4 x {0}
        incl_excl = expected * q ** (n - 4) + q**4 - expected
        mismatch = display != incl_excl
    recipe = ConstructionRecipe(
        "example1", {"p": F.p, "k": F.k, "n": n}, provenance
    )
    return QuadricTimesNorm(
        system=system,
        quadric=quadric4,
        expected_quadric_count=expected,
        recipe=recipe,
        display_count=display,
        inclusion_exclusion_count=incl_excl,
        display_mismatch=mismatch,
    )


@dataclass
class NonSplitQuartic:
    """example2: a quartic in four variables, irreducible over every
    extension in the sense of having no linear factors, whose only zero
    over F_q is the origin."""

    poly: MultiPoly
    system: PolySystem
    recipe: ConstructionRecipe
    alpha: int  # generator of the quadratic extension, as an element there
    beta: int
    q1: MultiPoly
    q2: MultiPoly


def example_two(F: FieldSpec) -> NonSplitQuartic:
    """Build f = (Q1 + beta Q2) * (Q1 + beta^sigma Q2) over F_q, q >= 3.

    N = Q1 + alpha Q2 is the norm form of the quartic extension down to the
    quadratic one, written in an F_q-basis of the quartic extension; beta is
    the least element of the quadratic extension outside F_q and different
    from alpha and its conjugate.  Then f is defined over F_q, homogeneous
    of degree 4, vanishes only at the origin, and has no linear factors.
    """
    if F.q < 3:
        raise FieldTooSmall(
            "q = 2 admits no valid beta: the quadratic extension has only "
            "two elements outside the base field and both are excluded"
        )
    p, k0 = F.p, F.k
    B2 = build_field(p, 2 * k0)
    B4 = build_field(p, 4 * k0)
    e02 = embed_subfield(F, B2)
    e24 = embed_subfield(B2, B4)

    # norm of a generic element of B4 down to B2, in the power basis of B4
    omega = [B4.one]
    for _ in range(3):
        omega.append(B4.mul(omega[-1], B4.generator))
    generic = MultiPoly.from_terms(
        B4, 4, [(tuple(1 if j == i else 0 for j in range(4)), omega[i]) for i in range(4)]
    )
    q2 = F.q**2
    conj = generic.map_coefficients(lambda c: B4.pow(c, q2), B4)
    N_big = generic * conj
    # coefficients are fixed by x -> x^(q^2), i.e. lie in the embedded B2
    N_terms = []
    for exps, c in N_big.terms.items():
        if not e24.in_image(c):
            raise AssertionError("norm coefficient escaped the quadratic subfield")
        N_terms.append((exps, e24.pull(c)))
    N = MultiPoly.from_terms(B2, 4, N_terms)

    # split N = Q1 + alpha*Q2 with Q1, Q2 over the embedded F_q, alpha = B2.g
    alpha = B2.generator
    img_g = [e02(a) for a in range(F.q)]
    pairs = {}
    for u in range(F.q):
        for v in range(F.q):
            pairs[B2.add(img_g[u], B2.mul(alpha, img_g[v]))] = (u, v)
    q1_terms, q2_terms = [], []
    for exps, cfc in N.terms.items():
        u, v = pairs[cfc]
        if u:
            q1_terms.append((exps, e02(u)))
        if v:
            q2_terms.append((exps, e02(v)))
    Q1 = MultiPoly.from_terms(B2, 4, q1_terms)
    Q2 = MultiPoly.from_terms(B2, 4, q2_terms)

    sigma_alpha = B2.pow(alpha, F.q)
    excluded = {alpha, sigma_alpha}
    beta = next(
        b for b in range(B2.q) if not e02.in_image(b) and b not in excluded
    )
    beta_sigma = B2.pow(beta, F.q)
    f_big = (Q1 + Q2.scale(beta)) * (Q1 + Q2.scale(beta_sigma))

    out_terms = []
    for exps, cfc in f_big.terms.items():
        if not fixed_by_subfield_frobenius(B2, k0, cfc) or not e02.in_image(cfc):
            raise AssertionError("product coefficient escaped the base field")
        out_terms.append((exps, e02.pull(cfc)))
    f = MultiPoly.from_terms(F, 4, out_terms)
    assert f.is_homogeneous and f.total_degree == 4

    recipe = ConstructionRecipe(
        "example2",
        {"p": p, "k": k0},
        {
            "modulus": list(F.modulus),
            "modulus_quadratic": list(B2.modulus),
            "modulus_quartic": list(B4.modulus),
            "alpha": alpha,
            "beta": beta,
        },
    )
    return NonSplitQuartic(
        poly=f,
        system=PolySystem([f]),
        recipe=recipe,
        alpha=alpha,
        beta=beta,
        q1=Q1,
        q2=Q2,
    )


def _monomials_up_to(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples with total degree <= d, lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, pos: int) -> None:
        if pos == n:
            out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            prefix.append(e)
            rec(prefix, remaining - e, pos + 1)
            prefix.pop()

    rec([], d, 0)
    out.sort()
    return out


def random_system(
    F: FieldSpec, n: int, degrees: Sequence[int], seed: int
) -> PolySystem:
    """Seeded random system: uniform coefficients over all monomials of
    degree <= d_i, redrawn until each realized total degree equals d_i."""
    if any(d < 1 for d in degrees):
        raise ValueError("all degrees must be >= 1")
    rng = SplitMix64(derive_seed(seed, F.p, F.k, n, *degrees))
    polys = []
    for d in degrees:
        monos = _monomials_up_to(n, d)
        while True:
            items = []
            for e in monos:
                c = rng.below(F.q)
                if c:
                    items.append((e, c))
            f = MultiPoly.from_terms(F, n, items)
            if f.total_degree == d:
                polys.append(f)
                break
    return PolySystem(polys)


def random_system_recipe(F: FieldSpec, n: int, degrees: Sequence[int], seed: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        "random",
        {"p": F.p, "k": F.k, "n": n, "degrees": list(degrees), "seed": seed},
    )


_CORPUS_QS = (2, 3, 4, 5)
_CORPUS_MAX_N = 5
_CORPUS_MAX_DI = 3
_CORPUS_MAX_D = 4


def corpus_system(seed: int, index: int) -> PolySystem:
    """System number `index` of the seeded verification corpus.

    Draws q from {2,3,4,5}, one or two polynomials with degrees <= 3 and
    total degree d <= 4, and an arity n with d < n <= 5 (so the congruence
    hypotheses n > d hold throughout the corpus).
    """
    rng = SplitMix64(derive_seed(seed, index))
    q = _CORPUS_QS[rng.below(len(_CORPUS_QS))]
    while True:
        r = 1 + rng.below(2)
        degrees = tuple(1 + rng.below(_CORPUS_MAX_DI) for _ in range(r))
        if sum(degrees) <= _CORPUS_MAX_D:
            break
    d = sum(degrees)
    n = d + 1 + rng.below(_CORPUS_MAX_N - d)
    p = q if q in (2, 3, 5) else 2
    k = 1 if q in (2, 3, 5) else 2
    F = build_field(p, k)
    return random_system(F, n, degrees, derive_seed(seed, index, 1))


def iter_corpus(count: int, seed: int = 0):
    for i in range(count):
        yield corpus_system(seed, i)


def build_from_recipe(recipe: ConstructionRecipe):
    """Replay a recipe; the rebuilt object is bit-identical to the original."""
    params = recipe.parameters
    F = build_field(params["p"], params["k"])
    if recipe.kind == "norm_form":
        return norm_form(F, params["degree"])
    if recipe.kind == "example1":
        return example_one(F, params["n"])
    if recipe.kind == "example2":
        return example_two(F)
    if recipe.kind == "random":
        return random_system(F, params["n"], params["degrees"], params["seed"])
    raise ValueError(f"unknown recipe kind {recipe.kind!r}")
