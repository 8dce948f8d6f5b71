"""Exact arithmetic in finite fields F_{p^m}.

A field is F_p[y]/(M(y)) for the monic irreducible M of degree m with the
least integer code, where a coefficient vector (c_0, ..., c_{m-1}) has code
c_0 + c_1 p + ... + c_{m-1} p^{m-1}.  Elements are stored by code, and the
same code order is used for enumeration and for every "least" choice (square
roots, nonsquares, embedding images), so all choices are reproducible.

Fields up to ``TABLE_LIMIT`` elements carry exp/log/Zech tables; larger ones
fall back to polynomial arithmetic modulo M.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

TABLE_LIMIT = 1 << 16
SQRT_SCAN_LIMIT = 10_000


class FieldMismatchError(ValueError):
    """Raised when elements of different fields are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, e) with n = p**e, or None if n is not a prime power."""
    if n < 2:
        return None
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        p = n
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return (p, e) if n == 1 else None


def _prime_factors(n: int) -> list[int]:
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


# -- small dense polynomials over F_p (lists, constant term first) ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, mod, p)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree i <= deg/2 over F_p."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        # xp <- xp^p mod f
        acc, base, e = [1], xp, p
        while e:
            if e & 1:
                acc = _pmulmod(acc, base, f, p)
            base = _pmulmod(base, base, f, p)
            e >>= 1
        xp = acc
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _trim(diff), p)) > 1:
            return False
    return True


# -- fields ------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field F_p[y]/(modulus); ``modulus`` lists coefficients constant term first."""

    p: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not (self.p % 2 == 1 and is_prime(self.p)):
            raise ValueError(f"p={self.p} is not an odd prime")
        if self.m < 1:
            raise ValueError(f"extension degree m={self.m} must be >= 1")
        mod = self.modulus
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if any(not 0 <= c < self.p for c in mod):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not is_irreducible_mod_p(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def name(self) -> str:
        return f"{self.p}^{self.m}"

    # -- code <-> vector ---------------------------------------------------

    def vec(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.m):
            code, c = divmod(code, p)
            out.append(c)
        return tuple(out)

    def code_of(self, vec: Iterable[int]) -> int:
        code = 0
        for c in reversed(list(vec)):
            code = code * self.p + c % self.p
        return code

    @cached_property
    def _powers(self) -> np.ndarray:
        return np.array([self.p ** j for j in range(self.m)], dtype=np.int64)

    def codes_of_array(self, arr: np.ndarray) -> np.ndarray:
        """Codes of the rows of an (L, m) coefficient array."""
        if arr.dtype == object:
            return np.array([self.code_of(row) for row in arr], dtype=object)
        return arr @ self._powers

    def array_of_codes(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((len(codes), self.m), dtype=np.int64)
        rest = codes.copy()
        for j in range(self.m):
            rest, out[:, j] = np.divmod(rest, self.p)
        return out

    # -- slow arithmetic (always available; reference for the tables) -----

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        return self.code_of((x + y) % p for x, y in zip(self.vec(a), self.vec(b)))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _pmulmod(list(self.vec(a)), list(self.vec(b)), list(self.modulus), self.p)
        return self.code_of(prod)

    def _pow_slow(self, a: int, n: int) -> int:
        acc = 1
        while n:
            if n & 1:
                acc = self._mul_slow(acc, a)
            a = self._mul_slow(a, a)
            n >>= 1
        return acc

    # -- tables ----------------------------------------------------------------

    @cached_property
    def _tables(self):
        n = self.order
        if n > TABLE_LIMIT:
            return None
        g = self._primitive_code()
        exp = [0] * (n - 1)
        log = [-1] * n
        x = 1
        for k in range(n - 1):
            exp[k] = x
            log[x] = k
            x = self._mul_slow(x, g)
        # zech[k] = log(1 + g^k), -1 when 1 + g^k = 0
        zech = [log[self._add_slow(1, exp[k])] if self._add_slow(1, exp[k]) else -1
                for k in range(n - 1)]
        return exp, log, zech

    def _primitive_code(self) -> int:
        n = self.order
        primes = _prime_factors(n - 1)
        for g in range(1, n):
            if all(self._pow_slow(g, (n - 1) // ell) != 1 for ell in primes):
                return g
        raise AssertionError("no primitive element found")

    @cached_property
    def _np_tables(self):
        exp, log, _ = self._tables
        return np.array(exp, dtype=np.int64), np.array(log, dtype=np.int64)

    # -- fast arithmetic on codes -----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        t = self._tables
        if t is None:
            return self._add_slow(a, b)
        if a == 0:
            return b
        if b == 0:
            return a
        exp, log, zech = t
        la, lb = log[a], log[b]
        z = zech[(lb - la) % (self.order - 1)]
        if z < 0:
            return 0
        return exp[(la + z) % (self.order - 1)]

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        p = self.p
        return self.code_of(-c % p for c in self.vec(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        t = self._tables
        if t is None:
            return self._mul_slow(a, b)
        exp, log, _ = t
        return exp[(log[a] + log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.m == 1:
            return pow(a, -1, self.p)
        t = self._tables
        if t is None:
            return self._pow_slow(a, self.order - 2)
        exp, log, _ = t
        return exp[-log[a] % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self.m == 1:
            return pow(a, n, self.p)
        t = self._tables
        if t is None:
            return self._pow_slow(a, n)
        exp, log, _ = t
        return exp[log[a] * n % (self.order - 1)]

    def frob(self, a: int, i: int = 1) -> int:
        """a^(p^i)."""
        return self.pow(a, pow(self.p, i % self.m))

    def log(self, a: int) -> int:
        """Discrete log to the table's primitive element (table fields only)."""
        if a == 0:
            raise ValueError("log of zero")
        t = self._tables
        if t is None:
            raise ValueError(f"{self!r} is too large for log tables")
        return t[1][a]

    def is_square_code(self, a: int) -> bool:
        if a == 0:
            raise ValueError("squareness of 0 is not defined here")
        if self._tables is not None:
            return self._tables[1][a] % 2 == 0
        return self.pow(a, (self.order - 1) // 2) == 1

    def mul_codes(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of two code arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._tables is None:
            return np.array([self.mul(int(x), int(y)) for x, y in zip(a, b)], dtype=np.int64)
        exp, log = self._np_tables
        out = exp[(log[a] + log[b]) % (self.order - 1)]
        out[(a == 0) | (b == 0)] = 0
        return out

    # -- linear-algebra views ---------------------------------------------------

    @functools.lru_cache(maxsize=4096)
    def mul_matrix(self, c: int) -> np.ndarray:
        """(m, m) matrix M with vec(x) @ M == vec(c * x)."""
        rows = [self.vec(self.mul(c, self.p ** j)) for j in range(self.m)]
        return np.array(rows, dtype=np.int64)

    @functools.lru_cache(maxsize=64)
    def frobenius_matrix(self, i: int) -> np.ndarray:
        """(m, m) matrix of x -> x^(p^i), which is F_p-linear."""
        rows = [self.vec(self.frob(self.p ** j, i)) for j in range(self.m)]
        return np.array(rows, dtype=np.int64)

    @cached_property
    def reduction_matrix(self) -> np.ndarray:
        """(2m-1, m) matrix whose row s is vec(y^s)."""
        rows = []
        ycode = self.gen.code
        x = 1
        for _ in range(2 * self.m - 1):
            rows.append(self.vec(x))
            x = self.mul(x, ycode)
        return np.array(rows, dtype=np.int64)

    # -- elements -------------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        """Coerce an int (prime-field residue), coefficient sequence or element."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value!r} does not belong to {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, int(value) % self.p)
        if isinstance(value, str):
            return parse_element(self, value)
        vec = list(value)
        if len(vec) > self.m:
            raise ValueError(f"too many coefficients for {self!r}")
        return FieldElement(self, self.code_of(vec))

    def from_code(self, code: int) -> "FieldElement":
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The class of y in F_p[y]/(modulus)."""
        if self.m == 1:
            return FieldElement(self, (-self.modulus[0]) % self.p)
        return FieldElement(self, self.p)

    def elements(self) -> Iterator["FieldElement"]:
        for code in range(self.order):
            yield FieldElement(self, code)

    def is_subfield_of(self, other: "FieldSpec") -> bool:
        return self.p == other.p and other.m % self.m == 0


class FieldElement:
    """An element of a FieldSpec; immutable, compared by (field, code)."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.vec(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(f"cannot combine elements of {self.field!r} and {other.field!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(b, self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self, i: int = 1) -> "FieldElement":
        """x -> x^(p^i)."""
        return FieldElement(self.field, self.field.frob(self.code, i))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.code))

    def __lt__(self, other: "FieldElement"):
        self._other(other)
        return self.code < other.code

    def __repr__(self):
        return format_element(self)


# -- construction ----------------------------------------------------------------

@functools.cache
def make_field(p: int, m: int) -> FieldSpec:
    """F_{p^m} modulo the monic irreducible of degree m with the least code."""
    if not (isinstance(p, int) and p > 2 and is_prime(p)):
        raise ValueError(f"p={p} is not an odd prime")
    if not (isinstance(m, int) and m >= 1):
        raise ValueError(f"extension degree m={m} must be a positive integer")
    for low in range(p ** m):
        coeffs = []
        x = low
        for _ in range(m):
            x, c = divmod(x, p)
            coeffs.append(c)
        coeffs.append(1)
        if is_irreducible_mod_p(coeffs, p):
            return FieldSpec(p, m, tuple(coeffs))
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def parse_field(text: str) -> FieldSpec:
    """Parse "p^m" (or just "p")."""
    text = text.strip()
    if "^" in text:
        p, m = text.split("^")
        return make_field(int(p), int(m))
    return make_field(int(text), 1)


def parse_element(field: FieldSpec, text: str) -> FieldElement:
    """Parse comma-separated residues, constant term first, e.g. "2,1"."""
    parts = [s for s in text.strip().strip("[]()").split(",") if s.strip()]
    vec = [int(s) for s in parts]
    if len(vec) > field.m:
        raise ValueError(f"{text!r} has more than {field.m} coefficients")
    return FieldElement(field, field.code_of(vec))


def format_element(x: FieldElement) -> str:
    return ",".join(str(c) for c in x.coeffs)


def enumerate_field(field: FieldSpec) -> list[FieldElement]:
    """All elements in code order."""
    return list(field.elements())


def is_square(x: FieldElement) -> bool:
    """Euler's criterion; zero is rejected."""
    return x.field.is_square_code(x.code)


def least_nonsquare(field: FieldSpec) -> FieldElement:
    for code in range(1, field.order):
        if not field.is_square_code(code):
            return FieldElement(field, code)
    raise AssertionError("odd-order fields always have nonsquares")


def sqrt_in(x: FieldElement, target: FieldSpec | None = None) -> FieldElement:
    """The square root of x in target with the least code.

    ``x`` is first mapped into ``target`` by the canonical embedding.
    """
    if target is None:
        target = x.field
    if x.field != target:
        x = embedding(x.field, target)(x)
    if x.code == 0:
        return x
    if not target.is_square_code(x.code):
        raise ValueError(f"{x!r} is not a square in {target!r}")
    if target.order <= SQRT_SCAN_LIMIT:
        for code in range(1, target.order):
            if target.mul(code, code) == x.code:
                return FieldElement(target, code)
        raise AssertionError("square root not found")
    y = _tonelli_shanks(target, x.code)
    return FieldElement(target, min(y, target.neg(y)))


def _tonelli_shanks(field: FieldSpec, a: int) -> int:
    n = field.order - 1
    s, odd = 0, n
    while odd % 2 == 0:
        odd //= 2
        s += 1
    z = field.pow(least_nonsquare(field).code, odd)
    x = field.pow(a, (odd + 1) // 2)
    b = field.pow(a, odd)
    while b != 1:
        i, t = 0, b
        while t != 1:
            t = field.mul(t, t)
            i += 1
        c = field.pow(z, 1 << (s - i - 1))
        x = field.mul(x, c)
        z = field.mul(c, c)
        b = field.mul(b, z)
        s = i
    return x


# -- embeddings ------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingMap:
    """Field homomorphism source -> target fixed by the image of source.gen."""

    source: FieldSpec
    target: FieldSpec
    image_of_generator: FieldElement

    def __post_init__(self):
        if not self.source.is_subfield_of(self.target):
            raise ValueError(f"{self.source!r} does not embed in {self.target!r}")
        if self.image_of_generator.field != self.target:
            raise FieldMismatchError("image_of_generator must lie in the target field")
        if self.source.m > 1 and _eval_modulus(self.source, self.image_of_generator) != 0:
            raise ValueError("image_of_generator is not a root of the source modulus")

    @cached_property
    def _table(self) -> list[int] | None:
        if self.source.order > TABLE_LIMIT:
            return None
        return [self._apply(code) for code in range(self.source.order)]

    def _apply(self, code: int) -> int:
        T = self.target
        if self.source.m == 1:
            return code % T.p
        g = self.image_of_generator.code
        acc = 0
        for c in reversed(self.source.vec(code)):
            acc = T.add(T.mul(acc, g), c)
        return acc

    def map_code(self, code: int) -> int:
        t = self._table
        return t[code] if t is not None else self._apply(code)

    def map_codes(self, codes: np.ndarray) -> np.ndarray:
        t = self._table
        if t is None:
            return np.array([self._apply(int(c)) for c in codes], dtype=np.int64)
        return np.asarray(t, dtype=np.int64)[np.asarray(codes, dtype=np.int64)]

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field != self.source:
            raise FieldMismatchError(f"{x!r} is not in {self.source!r}")
        return FieldElement(self.target, self.map_code(x.code))

    def then(self, other: "EmbeddingMap") -> "EmbeddingMap":
        """The composite: first self, then other."""
        if other.source != self.target:
            raise FieldMismatchError("embeddings do not compose")
        return EmbeddingMap(self.source, other.target, other(self.image_of_generator))

    def image(self) -> set[int]:
        """Codes of the image subfield inside the target."""
        return {self.map_code(c) for c in range(self.source.order)}

    def spot_check(self, trials: int = 20, seed: int = 0) -> bool:
        rng = random.Random(seed)
        S = self.source
        for _ in range(trials):
            a, b = rng.randrange(S.order), rng.randrange(S.order)
            x, y = FieldElement(S, a), FieldElement(S, b)
            if self(x + y) != self(x) + self(y) or self(x * y) != self(x) * self(y):
                return False
        return True


def _eval_modulus(source: FieldSpec, y: FieldElement) -> int:
    T = y.field
    acc = 0
    for c in reversed(source.modulus):
        acc = T.add(T.mul(acc, y.code), c)
    return acc


@functools.cache
def embedding(source: FieldSpec, target: FieldSpec) -> EmbeddingMap:
    """Canonical embedding: source.gen goes to the least-code root in target."""
    if not source.is_subfield_of(target):
        raise ValueError(f"{source!r} does not embed in {target!r}")
    if source.m == 1:
        return EmbeddingMap(source, target, FieldElement(target, source.gen.code))
    for code in range(target.order):
        y = FieldElement(target, code)
        if _eval_modulus(source, y) == 0:
            return EmbeddingMap(source, target, y)
    raise AssertionError("source modulus has no root in target")


def embed(x: FieldElement, emb: EmbeddingMap | FieldSpec) -> FieldElement:
    """Image of x under an embedding map (or the canonical one into a field)."""
    if isinstance(emb, FieldSpec):
        emb = embedding(x.field, emb)
    return emb(x)


def field_ops(x: FieldElement, y: FieldElement | None, kind: str, n: int = 0) -> FieldElement:
    """Named dispatch onto the arithmetic operators."""
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    if kind == "pow":
        return x ** n
    if kind == "frobenius":
        return x.frobenius(n)
    raise ValueError(f"unknown operation {kind!r}")
