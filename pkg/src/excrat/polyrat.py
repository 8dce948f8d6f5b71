"""Dense univariate polynomials and reduced rational functions over a FieldSpec.

Coefficients are stored as an (L, m) integer array: row i is the F_p
coefficient vector of the X^i coefficient.  Multiplication is componentwise
convolution followed by reduction modulo the field modulus, which keeps the
degree-8000 products that appear for r = 25 cheap.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ffield import (
    EmbeddingMap,
    FieldElement,
    FieldMismatchError,
    FieldSpec,
    embedding,
    format_element,
    parse_element,
)


class DegenerateCompositionWarning(UserWarning):
    """Composition with a constant inner function; the degree rule does not apply."""


def _conv(x: np.ndarray, y: np.ndarray, p: int, terms: int = 1) -> np.ndarray:
    if min(len(x), len(y)) * terms * (p - 1) ** 2 >= (1 << 62):
        return np.convolve(x.astype(object), y.astype(object)) % p
    return np.convolve(x, y)


def _trim_rows(arr: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(arr.any(axis=1))
    if len(nz) == 0:
        return arr[:0]
    return arr[: nz[-1] + 1]


def _mul_arrays(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return np.zeros((0, field.m), dtype=np.int64)
    p, m = field.p, field.m
    if m == 1:
        out = _conv(a[:, 0], b[:, 0], p) % p
        return out.reshape(-1, 1).astype(np.int64)
    L = len(a) + len(b) - 1
    S = np.zeros((L, 2 * m - 1), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            S[:, i + j] += _conv(a[:, i], b[:, j], p, m) % p
    return (S % p) @ field.reduction_matrix % p


def _scale_array(field: FieldSpec, a: np.ndarray, c: int) -> np.ndarray:
    if field.m == 1:
        return a * c % field.p
    return a @ field.mul_matrix(c) % field.p


def _row_code(field: FieldSpec, row: np.ndarray) -> int:
    code = 0
    for c in row[::-1]:
        code = code * field.p + int(c)
    return code


class Polynomial:
    """Dense polynomial over ``field``; the zero polynomial has degree -1."""

    __slots__ = ("field", "_c")

    def __init__(self, field: FieldSpec, coeffs: Iterable = ()):
        rows = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldMismatchError(f"coefficient {c!r} is not in {field!r}")
                rows.append(field.vec(c.code))
            elif isinstance(c, (int, np.integer)):
                rows.append(field.vec(int(c) % field.p))
            else:
                rows.append(field.vec(field.code_of(c)))
        arr = np.array(rows, dtype=np.int64).reshape(-1, field.m)
        self.field = field
        self._c = _trim_rows(arr)

    @classmethod
    def _wrap(cls, field: FieldSpec, arr: np.ndarray) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.field = field
        obj._c = _trim_rows(arr)
        return obj

    @classmethod
    def from_codes(cls, field: FieldSpec, codes: Sequence[int]) -> "Polynomial":
        return cls._wrap(field, field.array_of_codes(np.asarray(codes, dtype=np.int64)))

    @classmethod
    def zero(cls, field: FieldSpec) -> "Polynomial":
        return cls._wrap(field, np.zeros((0, field.m), dtype=np.int64))

    @classmethod
    def constant(cls, c: FieldElement) -> "Polynomial":
        return cls(c.field, [c])

    @classmethod
    def one(cls, field: FieldSpec) -> "Polynomial":
        return cls(field, [1])

    @classmethod
    def x(cls, field: FieldSpec) -> "Polynomial":
        return cls(field, [0, 1])

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, c: FieldElement | int = 1) -> "Polynomial":
        arr = np.zeros((n + 1, field.m), dtype=np.int64)
        code = c.code if isinstance(c, FieldElement) else int(c) % field.p
        arr[n] = field.vec(code)
        return cls._wrap(field, arr)

    # -- inspection ------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return len(self._c) == 0

    @property
    def codes(self) -> list[int]:
        return [int(x) for x in self.field.codes_of_array(self._c)]

    @property
    def coeffs(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self.codes)

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self._c):
            return FieldElement(self.field, _row_code(self.field, self._c[i]))
        return self.field.zero

    @property
    def leading(self) -> FieldElement:
        if self.is_zero():
            return self.field.zero
        return self[self.degree]

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading.code == 1

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash((self.field, self._c.tobytes()))

    def __repr__(self):
        return f"Polynomial({self.field!r}, {format_poly(self)!r})"

    def __str__(self):
        return pretty_poly(self)

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"polynomials over {self.field!r} and {other.field!r}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (FieldElement, int, np.integer)):
            return Polynomial(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return Polynomial._wrap(self.field, out % self.field.p)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap(self.field, -self._c % self.field.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"scalar {other!r} is not in {self.field!r}")
            return self.scale(other)
        if isinstance(other, (int, np.integer)):
            return Polynomial._wrap(self.field, self._c * (int(other) % self.field.p) % self.field.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._wrap(self.field, _mul_arrays(self.field, self._c, other._c))

    __rmul__ = __mul__

    def scale(self, c: FieldElement) -> "Polynomial":
        return Polynomial._wrap(self.field, _scale_array(self.field, self._c, c.code))

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        acc = Polynomial.one(self.field)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def __divmod__(self, other: "Polynomial"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.field
        p = F.p
        db = other.degree
        r = self._c.copy()
        if len(r) <= db:
            return Polynomial.zero(F), Polynomial._wrap(F, r)
        q = np.zeros((len(r) - db, F.m), dtype=np.int64)
        inv_lead = F.inv(_row_code(F, other._c[-1]))
        b = other._c
        for k in range(len(r) - 1 - db, -1, -1):
            row = r[k + db]
            if not row.any():
                continue
            c = F.mul(_row_code(F, row), inv_lead)
            q[k] = F.vec(c)
            r[k : k + db + 1] = (r[k : k + db + 1] - _scale_array(F, b, c)) % p
        return Polynomial._wrap(F, q), Polynomial._wrap(F, r[:db] if db > 0 else r[:0])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Polynomial") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.leading.inverse())

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial.zero(self.field)
        k = (np.arange(1, len(self._c), dtype=np.int64) % self.field.p)[:, None]
        return Polynomial._wrap(self.field, self._c[1:] * k % self.field.p)

    def __call__(self, x: FieldElement) -> FieldElement:
        """Horner evaluation at a point of the same field."""
        if x.field != self.field:
            raise FieldMismatchError(f"cannot evaluate a polynomial over {self.field!r} at {x!r}")
        F = self.field
        acc = 0
        for c in reversed(self.codes):
            acc = F.add(F.mul(acc, x.code), c)
        return FieldElement(F, acc)

    # -- coefficient maps --------------------------------------------------------

    def embed(self, emb: EmbeddingMap | FieldSpec) -> "Polynomial":
        if isinstance(emb, FieldSpec):
            if emb == self.field:
                return self
            emb = embedding(self.field, emb)
        if emb.source != self.field:
            raise FieldMismatchError("embedding source does not match the coefficient field")
        codes = emb.map_codes(np.asarray(self.codes, dtype=np.int64))
        return Polynomial.from_codes(emb.target, codes)

    def frobenius(self, i: int = 1) -> "Polynomial":
        """Apply x -> x^(p^i) to every coefficient."""
        F = self.field
        if F.m == 1:
            return self
        return Polynomial._wrap(F, self._c @ F.frobenius_matrix(i % F.m) % F.p)

    def pth_root(self) -> "Polynomial":
        """b with b(X^p) == self; requires self to be a polynomial in X^p."""
        p = self.field.p
        if self.is_zero():
            return self
        mask = np.arange(len(self._c)) % p != 0
        if self._c[mask].any():
            raise ValueError("polynomial is not a p-th power in X")
        return Polynomial._wrap(self.field, self._c[::p]).frobenius(-1)

    def shift(self, k: int) -> "Polynomial":
        """self * X^k."""
        if self.is_zero() or k == 0:
            return self
        pad = np.zeros((k, self.field.m), dtype=np.int64)
        return Polynomial._wrap(self.field, np.vstack([pad, self._c]))

    def reverse(self, n: int | None = None) -> "Polynomial":
        """X^n * self(1/X), n defaulting to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal length below the degree")
        arr = np.zeros((n + 1, self.field.m), dtype=np.int64)
        arr[: len(self._c)] = self._c
        return Polynomial._wrap(self.field, arr[::-1])

    def scale_variable(self, b: FieldElement) -> "Polynomial":
        """self(b X)."""
        F = self.field
        if self.is_zero():
            return self
        powers = [1]
        for _ in range(self.degree):
            powers.append(F.mul(powers[-1], b.code))
        codes = F.mul_codes(np.asarray(self.codes, dtype=np.int64), np.asarray(powers, dtype=np.int64))
        return Polynomial.from_codes(F, codes)

    def taylor_shift(self, c: FieldElement) -> "Polynomial":
        """self(X + c)."""
        if c.field != self.field:
            raise FieldMismatchError("shift constant is not in the coefficient field")
        if c.code == 0 or self.degree < 1:
            return self
        return Polynomial._wrap(self.field, _taylor(self.field, self._c, c.code))

    def compose(self, inner: "Polynomial") -> "Polynomial":
        self._check(inner)
        acc = Polynomial.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc


def _taylor(F: FieldSpec, arr: np.ndarray, c: int) -> np.ndarray:
    """Coefficients of P(X + c).

    P is cut into blocks of h = p^j coefficients, every block is shifted by one
    F_p-linear map, and the blocks are recombined by Horner in (X + c)^h, which
    is the binomial X^h + c^h in characteristic p.
    """
    p, m = F.p, F.m
    L = len(arr)
    h = 1
    while h * p <= min(L, 128):
        h *= p
    nb = -(-L // h)
    blocks = np.zeros((nb * h, m), dtype=np.int64)
    blocks[:L] = arr
    T = _shift_matrix(F, c, h)
    shifted = (blocks.reshape(nb, h * m) @ T % p).reshape(nb, h, m)
    ch = F.pow(c, h)
    out = shifted[-1]
    for i in range(nb - 2, -1, -1):
        nxt = np.zeros((len(out) + h, m), dtype=np.int64)
        nxt[h:] = out
        nxt[: len(out)] += _scale_array(F, out, ch)
        nxt[:h] += shifted[i]
        out = nxt % p
    return out


@functools.lru_cache(maxsize=256)
def _shift_matrix(F: FieldSpec, c: int, h: int) -> np.ndarray:
    """(h m, h m) matrix over F_p sending block coefficients of P to those of P(X + c)."""
    m = F.m
    T = np.zeros((h * m, h * m), dtype=np.int64)
    cpow = [1]
    for _ in range(h):
        cpow.append(F.mul(cpow[-1], c))
    for i in range(h):
        for k in range(i + 1):
            binom = math.comb(i, k) % F.p
            if not binom:
                continue
            coef = F.mul(binom, cpow[i - k])
            for j in range(m):
                img = F.vec(F.mul(coef, F.p ** j))
                T[i * m + j, k * m : (k + 1) * m] = img
    return T


# -- gcd and friends -------------------------------------------------------------

def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by Euclid's algorithm."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """(g, s, t) with s a + t b = g monic."""
    a._check(b)
    F = a.field
    r0, r1 = a, b
    s0, s1 = Polynomial.one(F), Polynomial.zero(F)
    t0, t1 = Polynomial.zero(F), Polynomial.one(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    inv = r0.leading.inverse()
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def squarefree_decomposition(a: Polynomial) -> list[tuple[Polynomial, int]]:
    """Pairs (factor, e) with a = lead * prod factor^e, factors monic squarefree coprime.

    Handles the characteristic-p case where a' vanishes by extracting p-th roots.
    """
    if a.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    F = a.field
    p = F.p
    one = Polynomial.one(F)
    f = a.monic()
    factors: list[tuple[Polynomial, int]] = []
    n = 1
    while f.degree > 0:
        df = f.derivative()
        if df.is_zero():
            f = f.pth_root()
            n *= p
            continue
        g = poly_gcd(f, df)
        h = f // g
        i = 1
        while h != one:
            G = poly_gcd(g, h)
            H = h // G
            if H.degree > 0:
                factors.append((H, i * n))
            g = g // G
            h = G
            i += 1
        if g == one:
            break
        # what remains is a polynomial in X^p
        f = g.pth_root()
        n *= p
    factors.sort(key=lambda fe: fe[1])
    return factors


def multiplicity_at(a: Polynomial, root: FieldElement) -> int:
    """Largest e with (X - root)^e dividing a."""
    if a.is_zero():
        raise ValueError("multiplicity in the zero polynomial")
    if root.field != a.field:
        raise FieldMismatchError("root is not in the coefficient field")
    F = a.field
    codes = a.codes
    e = 0
    while len(codes) > 1:
        # synthetic division by (X - root)
        out = [0] * (len(codes) - 1)
        acc = 0
        for i in range(len(codes) - 1, 0, -1):
            acc = F.add(F.mul(acc, root.code), codes[i])
            out[i - 1] = acc
        rem = F.add(F.mul(acc, root.code), codes[0])
        if rem != 0:
            break
        codes = out
        e += 1
    return e


# -- projective points -------------------------------------------------------------

@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^1 over ``field``; ``value`` is None at infinity."""

    field: FieldSpec
    value: FieldElement | None = None

    @classmethod
    def finite(cls, x: FieldElement) -> "ProjectivePoint":
        return cls(x.field, x)

    @classmethod
    def infinity(cls, field: FieldSpec) -> "ProjectivePoint":
        return cls(field, None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __repr__(self):
        return "inf" if self.value is None else format_element(self.value)

    def sort_key(self):
        return (1, 0) if self.value is None else (0, self.value.code)


def projective_line(field: FieldSpec) -> list[ProjectivePoint]:
    return [ProjectivePoint.finite(x) for x in field.elements()] + [ProjectivePoint.infinity(field)]


# -- rational functions -------------------------------------------------------------

class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, reduced: bool = False):
        if den is None:
            den = Polynomial.one(num.field)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lead = den.leading
        if lead.code != 1:
            inv = lead.inverse()
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Polynomial):
            return self.den.degree == 0 and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.field!r}, {format_rf(self)!r})"

    def __str__(self):
        if self.den.degree == 0:
            return pretty_poly(self.num)
        return f"({pretty_poly(self.num)}) / ({pretty_poly(self.den)})"

    @staticmethod
    def _lift(x, field: FieldSpec) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return RationalFunction(x, reduced=True)
        return RationalFunction(Polynomial(field, [x]), reduced=True)

    def __add__(self, other):
        o = self._lift(other, self.field)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-self._lift(other, self.field))

    def __rsub__(self, other):
        return self._lift(other, self.field) + (-self)

    def __mul__(self, other):
        o = self._lift(other, self.field)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other, self.field)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other, self.field) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** -n, self.num ** -n, reduced=True)
        return RationalFunction(self.num ** n, self.den ** n, reduced=True)

    def scale(self, c: FieldElement) -> "RationalFunction":
        return RationalFunction(self.num.scale(c), self.den, reduced=True)

    def derivative(self) -> "RationalFunction":
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def derivative_numerator(self) -> Polynomial:
        """num' den - num den', whose roots off the poles are the critical points."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def embed(self, emb: EmbeddingMap | FieldSpec) -> "RationalFunction":
        return RationalFunction(self.num.embed(emb), self.den.embed(emb), reduced=True)

    def frobenius(self, i: int = 1) -> "RationalFunction":
        return RationalFunction(self.num.frobenius(i), self.den.frobenius(i), reduced=True)

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        return rf_compose(self, inner)

    def __call__(self, pt):
        if isinstance(pt, FieldElement):
            pt = ProjectivePoint.finite(pt)
        return rf_evaluate(self, pt)

    # Moebius substitutions; each keeps num and den coprime.

    def translate(self, c: FieldElement) -> "RationalFunction":
        """self(X + c)."""
        return RationalFunction(self.num.taylor_shift(c), self.den.taylor_shift(c), reduced=True)

    def scale_variable(self, b: FieldElement) -> "RationalFunction":
        """self(b X)."""
        if b.code == 0:
            raise ValueError("scaling by zero is not invertible")
        return RationalFunction(self.num.scale_variable(b), self.den.scale_variable(b), reduced=True)

    def invert_variable(self) -> "RationalFunction":
        """self(1/X)."""
        d = self.degree
        return RationalFunction(self.num.reverse(d), self.den.reverse(d), reduced=True)

    def valuation_at_infinity(self) -> int | None:
        """Order of vanishing at X = infinity (None for the zero function)."""
        if self.num.is_zero():
            return None
        return self.den.degree - self.num.degree

    def valuation_at(self, root: FieldElement) -> int | None:
        if self.num.is_zero():
            return None
        return multiplicity_at(self.num, root) - multiplicity_at(self.den, root)


def rf_make(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Reduced normal form of num/den."""
    return RationalFunction(num, den)


def as_rf(x: Polynomial | RationalFunction) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction(x, reduced=True)


def rf_compose(outer: RationalFunction | Polynomial, inner: RationalFunction | Polynomial) -> RationalFunction:
    """outer(inner(X)) in reduced form.

    With both inputs reduced, the homogenised forms N(P, R) and D(P, R) of
    degree deg(outer) are already coprime, so no gcd is needed.
    """
    outer, inner = as_rf(outer), as_rf(inner)
    F = outer.field
    if inner.field != F:
        raise FieldMismatchError(f"cannot compose over {F!r} and {inner.field!r}")
    if inner.is_constant():
        warnings.warn("composition with a constant inner function", DegenerateCompositionWarning, stacklevel=2)
        val = rf_evaluate(outer, ProjectivePoint.finite(inner.num[0]))
        if val.is_infinity:
            raise ZeroDivisionError("outer function has a pole at the constant inner value")
        return RationalFunction(Polynomial(F, [val.value]), reduced=True)
    if inner.degree == 1:
        return _compose_mobius(outer, inner)
    P, R = inner.num, inner.den
    d = outer.degree
    N = [outer.num[i] for i in range(d + 1)]
    D = [outer.den[i] for i in range(d + 1)]
    acc_n = Polynomial(F, [N[d]])
    acc_d = Polynomial(F, [D[d]])
    rpow = R
    for i in range(d - 1, -1, -1):
        acc_n = acc_n * P + rpow.scale(N[i])
        acc_d = acc_d * P + rpow.scale(D[i])
        if i:
            rpow = rpow * R
    return RationalFunction(acc_n, acc_d, reduced=True)


def _compose_mobius(outer: RationalFunction, inner: RationalFunction) -> RationalFunction:
    F = outer.field
    alpha, beta = inner.num[1], inner.num[0]
    if inner.den.degree == 0:
        # alpha X + beta
        out = outer.translate(beta) if beta.code else outer
        return out.scale_variable(alpha) if alpha.code != 1 else out
    # (alpha X + beta) / (X + delta) = alpha + kappa / (X + delta)
    delta = inner.den[0]
    kappa = beta - alpha * delta
    out = outer.translate(alpha) if alpha.code else outer
    out = out.scale_variable(kappa) if kappa.code != 1 else out
    out = out.invert_variable()
    return out.translate(delta) if delta.code else out


def rf_evaluate(f: RationalFunction, pt: ProjectivePoint) -> ProjectivePoint:
    """f at a point of P^1; the point must lie over f's coefficient field."""
    F = f.field
    if pt.field != F:
        raise FieldMismatchError(f"point over {pt.field!r}, function over {F!r}")
    if pt.is_infinity:
        dn, dd = f.num.degree, f.den.degree
        if dn > dd:
            return ProjectivePoint.infinity(F)
        if dn < dd:
            return ProjectivePoint.finite(F.zero)
        return ProjectivePoint.finite(f.num.leading / f.den.leading)
    c = pt.value
    d = f.den(c)
    n = f.num(c)
    if d.code == 0:
        if n.code == 0:
            raise ArithmeticError("num and den vanish together; function not reduced")
        return ProjectivePoint.infinity(F)
    return ProjectivePoint.finite(n / d)


# -- text encodings --------------------------------------------------------------------

def _fmt_coeff(F: FieldSpec, code: int) -> str:
    s = ",".join(str(c) for c in F.vec(code))
    return s if F.m == 1 else f"[{s}]"


def format_poly(a: Polynomial) -> str:
    """Comma-separated coefficients, constant term first; bracketed when m > 1."""
    if a.is_zero():
        return "0"
    return ",".join(_fmt_coeff(a.field, c) for c in a.codes)


def parse_poly(field: FieldSpec, text: str) -> Polynomial:
    text = text.strip()
    if field.m == 1 or "[" not in text:
        # without brackets every entry is a prime-field residue
        items = [s for s in text.split(",") if s.strip()]
        return Polynomial(field, [int(s) for s in items])
    items = []
    depth, cur = 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
            cur = ""
        elif ch == "]":
            depth -= 1
            items.append(parse_element(field, cur))
        elif depth:
            cur += ch
    return Polynomial(field, items)


def format_rf(f: RationalFunction) -> str:
    return f"{format_poly(f.num)} / {format_poly(f.den)}"


def parse_rf(field: FieldSpec, text: str) -> RationalFunction:
    if "/" in text:
        n, d = text.split("/")
        return rf_make(parse_poly(field, n), parse_poly(field, d))
    return RationalFunction(parse_poly(field, text), reduced=True)


def pretty_poly(a: Polynomial, var: str = "X") -> str:
    if a.is_zero():
        return "0"
    terms = []
    for i, code in reversed(list(enumerate(a.codes))):
        if code == 0:
            continue
        c = _fmt_coeff(a.field, code) if a.field.m == 1 else f"({','.join(map(str, a.field.vec(code)))})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(c)
        elif code == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms)
