"""Finite fields F_{p^k} with exact, table-backed arithmetic.

An element is an integer index in [0, q).  The index encodes the coordinate
vector (c0, ..., c_{k-1}) with respect to the power basis 1, g, ..., g^{k-1}
big-endian (c0 is the most significant digit), so index order coincides with
lexicographic order on coordinate sequences.  Every "canonically least"
tie-break in the package means least index in this encoding.

Multiplication has two independent realizations: reduced polynomial
arithmetic (always available, the reference path) and log/antilog tables over
a multiplicative generator (built when q <= 2^16 and k > 1).  Prime fields
use direct modular arithmetic.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import (
    DegreeTooLarge,
    DivisionByZero,
    NotADivisor,
    NotASubfield,
    NotPrime,
)

FIELD_SIZE_CAP = 1 << 20
_LOG_TABLE_CAP = 1 << 16
_DENSE_ADD_CAP = 1 << 10
_COORD_CACHE_CAP = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_eval_fp(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_mod_fp(num: list[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of num by monic den, coefficients ascending, over F_p."""
    rem = list(num)
    dd = len(den) - 1
    while len(rem) - 1 >= dd and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dd:
            break
        lead = rem[-1]
        shift = len(rem) - 1 - dd
        for i, c in enumerate(den):
            rem[shift + i] = (rem[shift + i] - lead * c) % p
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _is_irreducible_fp(coeffs: Sequence[int], p: int) -> bool:
    """Exhaustive root/factor search for a monic polynomial over F_p."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    for a in range(p):
        if _poly_eval_fp(coeffs, a, p) == 0:
            return False
    if deg <= 3:
        return True
    # No linear factors; trial-divide by monic polynomials of degree 2..deg/2.
    for d in range(2, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            den = list(tail) + [1]
            if not _poly_mod_fp(list(coeffs), den, p):
                return False
    return True


def _factor_int(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n <= 2^20)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """A concrete model of F_{p^k}.  Immutable after construction."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.zero = 0
        self.one = p ** (k - 1)
        # Residue class of the indeterminate: coords (0, 1, 0, ...).
        self.generator = p ** (k - 2) if k > 1 else 0

        self._coords_cache: list[tuple[int, ...]] | None = None
        if self.q <= _COORD_CACHE_CAP:
            self._coords_cache = [self._decode(a) for a in range(self.q)]

        # coords of x^(k+j) reduced mod the modulus, j = 0..k-2
        self._xpow: list[tuple[int, ...]] = []
        if k > 1:
            cur = [(-c) % p for c in modulus[:k]]  # x^k
            self._xpow.append(tuple(cur))
            for _ in range(k - 2):
                nxt = [0] + cur[:-1]
                top = cur[-1]
                if top:
                    for i in range(k):
                        nxt[i] = (nxt[i] - top * modulus[i]) % p
                cur = nxt
                self._xpow.append(tuple(cur))

        self._log: list[int] | None = None
        self._exp: list[int] | None = None
        if k > 1 and self.q <= _LOG_TABLE_CAP:
            self._build_log_tables()

        self._add_flat: list[int] | None = None
        self._sub_flat: list[int] | None = None
        if k > 1 and self.q <= _DENSE_ADD_CAP:
            q = self.q
            add_flat = [0] * (q * q)
            sub_flat = [0] * (q * q)
            for a in range(q):
                ca = self.coords(a)
                base = a * q
                for b in range(q):
                    cb = self._coords_cache[b]  # type: ignore[index]
                    add_flat[base + b] = self._encode(
                        tuple((x + y) % p for x, y in zip(ca, cb))
                    )
                    sub_flat[base + b] = self._encode(
                        tuple((x - y) % p for x, y in zip(ca, cb))
                    )
            self._add_flat = add_flat
            self._sub_flat = sub_flat

    # -- encoding ---------------------------------------------------------

    def _decode(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = [0] * self.k
        for i in range(self.k - 1, -1, -1):
            out[i] = a % p
            a //= p
        return tuple(out)

    def _encode(self, coords: Sequence[int]) -> int:
        a = 0
        for c in coords:
            a = a * self.p + c
        return a

    def coords(self, a: int) -> tuple[int, ...]:
        """Coordinates (c0..c_{k-1}) of element a in the power basis."""
        if self._coords_cache is not None:
            return self._coords_cache[a]
        return self._decode(a)

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.k:
            raise ValueError(f"need {self.k} coordinates, got {len(coords)}")
        return self._encode([c % self.p for c in coords])

    def from_int(self, n: int) -> int:
        """The image of the rational integer n (n times the identity)."""
        return (n % self.p) * self.one

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    # -- arithmetic -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._add_flat is not None:
            return self._add_flat[a * self.q + b]
        p = self.p
        return self._encode([(x + y) % p for x, y in zip(self.coords(a), self.coords(b))])

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        if self._sub_flat is not None:
            return self._sub_flat[a * self.q + b]
        p = self.p
        return self._encode([(x - y) % p for x, y in zip(self.coords(a), self.coords(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        return self._encode([(-x) % p for x in self.coords(a)])

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]  # type: ignore[index]
        return self.mul_poly(a, b)

    def mul_poly(self, a: int, b: int) -> int:
        """Reference multiplication: convolve coordinates, reduce by modulus."""
        if self.k == 1:
            return (a * b) % self.p
        p, k = self.p, self.k
        # coords are ascending in powers of g: coords[i] multiplies g^i
        ca, cb = self.coords(a), self.coords(b)
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:k]]
        for j in range(k - 1):
            c = conv[k + j] % p
            if c:
                red = self._xpow[j]
                for i in range(k):
                    out[i] = (out[i] + c * red[i]) % p
        return self._encode(out)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]  # type: ignore[index]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return self.one
            raise DivisionByZero("negative power of zero")
        e %= self.q - 1
        if self.k == 1:
            return pow(a, e, self.p)
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]  # type: ignore[index]
        acc = self.one
        base = a
        while e:
            if e & 1:
                acc = self.mul_poly(acc, base)
            base = self.mul_poly(base, base)
            e >>= 1
        return acc

    def frobenius(self, a: int, i: int = 1) -> int:
        """The i-th Frobenius iterate a^(p^i), 0 <= i < k."""
        if not 0 <= i < self.k:
            raise ValueError(f"frobenius iterate must be in [0, {self.k}), got {i}")
        if i == 0:
            return a
        return self.pow(a, self.p**i)

    # -- internals --------------------------------------------------------

    def _build_log_tables(self) -> None:
        q = self.q
        factors = _factor_int(q - 1)
        gamma = None
        for cand in range(1, q):
            if all(self._pow_poly(cand, (q - 1) // f) != self.one for f in factors):
                gamma = cand
                break
        assert gamma is not None, "multiplicative group always has a generator"
        exp = [0] * (q - 1)
        log = [0] * q
        acc = self.one
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = self.mul_poly(acc, gamma)
        self._exp = exp
        self._log = log

    def _pow_poly(self, a: int, e: int) -> int:
        acc = self.one
        base = a
        while e:
            if e & 1:
                acc = self.mul_poly(acc, base)
            base = self.mul_poly(base, base)
            e >>= 1
        return acc

    # -- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        mod = ",".join(str(c) for c in self.modulus)
        return f"FieldSpec(q={self.q}, p={self.p}, k={self.k}, modulus=[{mod}])"


@lru_cache(maxsize=None)
def build_field(p: int, k: int, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """Construct F_{p^k} on the canonically least monic irreducible modulus.

    Moduli are compared as coefficient tuples (c0, ..., ck) ascending by
    degree, lexicographically.  An explicit modulus (ascending coefficients,
    monic, irreducible) may be supplied instead.
    """
    if not is_prime(p):
        raise NotPrime(f"p = {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p**k > FIELD_SIZE_CAP:
        raise DegreeTooLarge(f"p^k = {p}^{k} exceeds the cap {FIELD_SIZE_CAP}")
    if modulus is not None:
        modulus = tuple(c % p for c in modulus[:-1]) + (modulus[-1],)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k (ascending coefficients)")
        if not _is_irreducible_fp(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
        return FieldSpec(p, k, modulus)
    for tail in product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if _is_irreducible_fp(cand, p):
            return FieldSpec(p, k, cand)
    raise AssertionError("unreachable: irreducible polynomials of every degree exist")


def relative_norm(K: FieldSpec, base_degree: int, a: int) -> int:
    """Norm of a from K = F_{p^m} down to F_{p^base_degree} (an element of K).

    The product of the Frobenius-coset conjugates a^(qb^j); multiplicative,
    zero only at zero, and fixed by the base-field Frobenius.
    """
    if base_degree < 1 or K.k % base_degree != 0:
        raise NotADivisor(f"{base_degree} does not divide extension degree {K.k}")
    qb = K.p**base_degree
    acc = K.one
    term = a
    for _ in range(K.k // base_degree):
        acc = K.mul(acc, term)
        term = K.pow(term, qb)
    return acc


def fixed_by_subfield_frobenius(K: FieldSpec, base_degree: int, a: int) -> bool:
    """True iff a lies in the subfield of size p^base_degree inside K."""
    return K.pow(a, K.p**base_degree) == a


class Embedding:
    """An injective ring homomorphism table F_small -> F_big."""

    __slots__ = ("small", "big", "table", "_pullback")

    def __init__(self, small: FieldSpec, big: FieldSpec, table: tuple[int, ...]):
        self.small = small
        self.big = big
        self.table = table
        self._pullback = {v: i for i, v in enumerate(table)}

    def __call__(self, a: int) -> int:
        return self.table[a]

    def in_image(self, b: int) -> bool:
        return b in self._pullback

    def pull(self, b: int) -> int:
        """Preimage of b; raises KeyError when b is outside the image."""
        return self._pullback[b]

    def __repr__(self) -> str:
        return f"Embedding(F_{self.small.q} -> F_{self.big.q})"


def _embedding_for_root(small: FieldSpec, big: FieldSpec, img: int) -> tuple[int, ...]:
    img_pows = [big.one]
    for _ in range(small.k - 1):
        img_pows.append(big.mul(img_pows[-1], img))
    table = []
    for a in range(small.q):
        val = big.zero
        for c, gp in zip(small.coords(a), img_pows):
            if c:
                val = big.add(val, big.mul(big.from_int(c), gp))
        table.append(val)
    return tuple(table)


@lru_cache(maxsize=None)
def embed_subfield(small: FieldSpec, big: FieldSpec) -> Embedding:
    """Canonical embedding of the small field into the big one.

    The small generator maps to the least root (by element index) of the
    small modulus inside the big field, among the roots whose induced map
    extends the canonical embedding of every proper subfield of the small
    field.  That side condition is what makes composition along towers
    commute; a compatible root always exists (the constraints are
    congruences on the Frobenius orbit with consistent intersections).
    """
    if small.p != big.p:
        raise NotASubfield(f"characteristics differ: {small.p} vs {big.p}")
    if big.k % small.k != 0:
        raise NotASubfield(f"degree {small.k} does not divide {big.k}")
    if small == big:
        return Embedding(small, big, tuple(range(small.q)))
    roots = []
    for b in range(big.q):
        acc = big.zero
        for c in reversed(small.modulus):
            acc = big.add(big.mul(acc, b), big.from_int(c))
        if acc == big.zero:
            roots.append(b)
    assert roots, "the big field always contains the subfield"
    divisors = [j for j in range(2, small.k) if small.k % j == 0]
    for img in roots:
        table = _embedding_for_root(small, big, img)
        ok = True
        for j in divisors:
            Fj = build_field(small.p, j)
            into_small = embed_subfield(Fj, small)
            into_big = embed_subfield(Fj, big)
            if table[into_small(Fj.generator)] != into_big(Fj.generator):
                ok = False
                break
        if ok:
            return Embedding(small, big, table)
    raise AssertionError("a subfield-compatible root always exists")


def element_literal(F: FieldSpec, a: int) -> str:
    """Canonical text form: plain integer for prime fields, else c0:c1:...:c(k-1)."""
    if F.k == 1:
        return str(a)
    return ":".join(str(c) for c in F.coords(a))


def parse_element_literal(F: FieldSpec, text: str) -> int:
    parts = text.split(":")
    if len(parts) == 1:
        return F.from_int(int(parts[0]))
    if F.k == 1:
        raise ValueError("colon literals are not allowed in a prime field")
    if len(parts) != F.k:
        raise ValueError(f"element literal needs {F.k} coordinates, got {len(parts)}")
    return F.from_coords([int(c) for c in parts])
