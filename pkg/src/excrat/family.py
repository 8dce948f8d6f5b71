"""The exceptional family f = E_r(X,a)^((r+1)/2) / (X^2-4a)^((r^2-r)/4) and its Galois scene."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ffield import (
    EmbeddingMap,
    FieldElement,
    FieldSpec,
    embedding,
    is_square,
    least_nonsquare,
    make_field,
    parse_element,
    sqrt_in,
)
from .polyrat import Polynomial, RationalFunction, poly_gcd, rf_compose


class ParameterError(ValueError):
    """Family parameters violate a hypothesis of the construction."""


def ord2(n: int) -> int:
    if n <= 0:
        raise ValueError("ord2 needs a positive integer")
    return (n & -n).bit_length() - 1


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        out = out * math.comb(ni, ki) % p
    return out


@dataclass(frozen=True)
class FamilyParams:
    p: int
    k: int
    l: int
    q: int
    r: int
    Q: int
    a: FieldElement          # in F_q, nonsquare
    sqrt_a: FieldElement     # in F_{q^2}
    zeta0: FieldElement      # in F_r, nonsquare
    Fq: FieldSpec = field(repr=False)
    Fq2: FieldSpec = field(repr=False)
    Fr: FieldSpec = field(repr=False)
    FQ: FieldSpec = field(repr=False)

    @property
    def d(self) -> int:
        """[F_Q : F_q], the order of A/G."""
        return math.lcm(2 * self.k, self.l) // self.l

    @property
    def q_to_q2(self) -> EmbeddingMap:
        return embedding(self.Fq, self.Fq2)

    @property
    def q2_to_Q(self) -> EmbeddingMap:
        return embedding(self.Fq2, self.FQ)

    @property
    def q_to_Q(self) -> EmbeddingMap:
        # routed through F_{q^2} so that sqrt_a^2 == a holds after embedding
        return self.q_to_q2.then(self.q2_to_Q)

    @property
    def r_to_Q(self) -> EmbeddingMap:
        return embedding(self.Fr, self.FQ)

    @property
    def a_Q(self) -> FieldElement:
        return self.q_to_Q(self.a)

    @property
    def sqrt_a_Q(self) -> FieldElement:
        return self.q2_to_Q(self.sqrt_a)

    @property
    def zeta0_Q(self) -> FieldElement:
        return self.r_to_Q(self.zeta0)

    def summary(self) -> dict:
        return {
            "p": self.p, "k": self.k, "l": self.l, "q": self.q, "r": self.r, "Q": self.Q,
            "a": ",".join(map(str, self.a.coeffs)),
            "deg_f": (self.r * self.r + self.r) // 2,
        }


def validate_params(p: int, k: int, l: int, a=None, *, sqrt_a=None, zeta0=None) -> FamilyParams:
    """Check the hypotheses and fix every derived quantity.

    ``a`` defaults to the least nonsquare of F_q, ``sqrt_a`` to the least-code
    root in F_{q^2}, ``zeta0`` to the least nonsquare of F_r.  Explicit values
    may be given as FieldElements or in the comma-separated text encoding.
    """
    if not (isinstance(p, int) and p > 2 and all(p % i for i in range(2, math.isqrt(p) + 1))):
        raise ParameterError(f"p={p} must be an odd prime")
    if k < 1 or l < 1:
        raise ParameterError("k and l must be positive integers")
    if ord2(l) > ord2(k):
        raise ParameterError(f"hypothesis ord2(l) <= ord2(k) violated: ord2({l})={ord2(l)} > ord2({k})={ord2(k)}")
    Fq, Fq2 = make_field(p, l), make_field(p, 2 * l)
    Fr = make_field(p, 2 * k)
    eQ = math.lcm(2 * k, l)
    FQ = make_field(p, eQ)
    if a is None:
        a = least_nonsquare(Fq)
    elif isinstance(a, str):
        a = parse_element(Fq, a)
    elif isinstance(a, int):
        a = Fq(a)
    if a.field != Fq:
        raise ParameterError(f"a={a!r} is not an element of F_{p}^{l}")
    if a.code == 0:
        raise ParameterError("a must be nonzero")
    if is_square(a):
        raise ParameterError(f"hypothesis violated: a={a!r} is a square in F_q")
    a2 = embedding(Fq, Fq2)(a)
    if sqrt_a is None:
        sqrt_a = sqrt_in(a2, Fq2)
    elif isinstance(sqrt_a, str):
        sqrt_a = parse_element(Fq2, sqrt_a)
    if sqrt_a * sqrt_a != a2:
        raise ParameterError(f"sqrt_a={sqrt_a!r} is not a square root of a")
    if zeta0 is None:
        zeta0 = least_nonsquare(Fr)
    elif isinstance(zeta0, str):
        zeta0 = parse_element(Fr, zeta0)
    if zeta0.code == 0 or is_square(zeta0):
        raise ParameterError(f"zeta0={zeta0!r} must be a nonsquare of F_r")
    return FamilyParams(p, k, l, p ** l, p ** (2 * k), p ** eQ, a, sqrt_a, zeta0, Fq, Fq2, Fr, FQ)


# -- Dickson polynomials of the second kind -----------------------------------------

def dickson_E(r: int, a: FieldElement, *, check: bool = False) -> Polynomial:
    """E_r(X, a) = sum_i C(r-i, i) (-a)^i X^(r-2i), binomials reduced by Lucas."""
    if r < 0:
        raise ValueError("degree must be nonnegative")
    F = a.field
    coeffs = [F.zero] * (r + 1)
    neg_a = -a
    power = F.one
    for i in range(r // 2 + 1):
        c = binomial_mod_p(r - i, i, F.p)
        if c:
            coeffs[r - 2 * i] = power * c
        power = power * neg_a
    E = Polynomial(F, coeffs)
    if check and E != dickson_E_recurrence(r, a):
        raise AssertionError(f"closed form of E_{r} disagrees with the recurrence")
    return E


def dickson_E_sequence(n: int, a: FieldElement) -> list[Polynomial]:
    """[E_0, ..., E_n] from E_{j+1} = X E_j - a E_{j-1}."""
    F = a.field
    seq = [Polynomial.one(F), Polynomial.x(F)]
    while len(seq) <= n:
        seq.append(seq[-1].shift(1) - seq[-2].scale(a))
    return seq[: n + 1]


def dickson_E_recurrence(r: int, a: FieldElement) -> Polynomial:
    return dickson_E_sequence(r, a)[r]


def check_functional_equation(r: int, a: FieldElement) -> bool:
    """E_r(X + a/X, a) == (X^(r+1) - (a/X)^(r+1)) / (X - a/X) as rational functions."""
    F = a.field
    X = Polynomial.x(F)
    inner = RationalFunction(X * X + a, X)
    lhs = rf_compose(dickson_E(r, a), inner)
    num = Polynomial.monomial(F, 2 * r + 2) - Polynomial(F, [a ** (r + 1)])
    den = Polynomial.monomial(F, r) * (X * X - a)
    rhs = RationalFunction(num, den)
    return lhs == rhs


# -- f and the scene --------------------------------------------------------------------

def family_function(r: int, a: FieldElement) -> RationalFunction:
    E = dickson_E(r, a)
    X = Polynomial.x(a.field)
    quad = X * X - a * 4
    if poly_gcd(E, quad).degree > 0:
        raise AssertionError("E_r(X,a) and X^2-4a share a root; parameters are corrupt")
    return RationalFunction(E ** ((r + 1) // 2), quad ** ((r * r - r) // 4), reduced=True)


def build_f(params: FamilyParams) -> RationalFunction:
    """The family member over F_q, of degree (r^2+r)/2."""
    f = family_function(params.r, params.a)
    if f.degree != (params.r ** 2 + params.r) // 2:
        raise AssertionError(f"deg f = {f.degree}, expected {(params.r ** 2 + params.r) // 2}")
    return f


@dataclass
class GaloisScene:
    """All rational functions of u living in Omega = F_Q(u)."""

    params: FamilyParams
    f: RationalFunction          # over F_q
    f0: RationalFunction         # a = 1 normalization, over F_p
    f_Q: RationalFunction        # f over F_Q
    v: RationalFunction          # u^((r-1)/2) + u^((1-r)/2)
    t: RationalFunction          # invariant of G
    v_prime: RationalFunction
    t_prime: RationalFunction
    w_power: int

    @property
    def g(self) -> RationalFunction:
        """The map u -> t'."""
        return self.t_prime


def invariant_t(F: FieldSpec, r: int) -> RationalFunction:
    """(u^(r^2) - u)^((r+1)/2) / (u^r - u)^((r^2+1)/2), reduced."""
    u = Polynomial.x(F)
    big = Polynomial.monomial(F, r * r) - u
    small = Polynomial.monomial(F, r) - u
    return RationalFunction(big ** ((r + 1) // 2), small ** ((r * r + 1) // 2))


def invariant_v(F: FieldSpec, r: int) -> RationalFunction:
    h = (r - 1) // 2
    return RationalFunction(Polynomial.monomial(F, r - 1) + 1, Polynomial.monomial(F, h), reduced=True)


def build_scene(params: FamilyParams) -> GaloisScene:
    r, FQ = params.r, params.FQ
    Fp = make_field(params.p, 1)
    f = build_f(params)
    f0 = family_function(r, Fp.one)
    t = invariant_t(Fp, r).embed(FQ)
    v = invariant_v(FQ, r)
    s = params.sqrt_a_Q
    v_prime = v.scale(s)
    t_prime = t.scale(s ** r)
    f_Q = f.embed(params.q_to_Q)
    scene = GaloisScene(params, f, f0, f_Q, v, t, v_prime, t_prime, (r - 1) // 2)
    if v_prime.degree != r - 1:
        raise AssertionError("deg v' must be r - 1")
    return scene


def check_semiconjugacy(scene: GaloisScene, f: RationalFunction | None = None) -> bool:
    """f(v') == t' over F_Q.  ``f`` overrides the scene's function (for mutation tests)."""
    fQ = scene.f_Q if f is None else f.embed(scene.params.FQ)
    return rf_compose(fQ, scene.v_prime) == scene.t_prime


def sigma_twist(h: RationalFunction, params: FamilyParams) -> RationalFunction:
    """Image of h(u) under sigma: q-th power on coefficients, u -> zeta0 u."""
    return h.frobenius(params.l).scale_variable(params.zeta0_Q)


def check_t_invariance(scene: GaloisScene, exhaustive: bool = True) -> dict[str, bool]:
    """t under u+c, b u (b a square), 1/u; and sigma fixing v', t'.

    With ``exhaustive`` False only an F_p-basis of translations and one
    generating square are tried, which still generates the same group.
    """
    P = scene.params
    Fr, emb = P.Fr, P.r_to_Q
    t = scene.t
    if exhaustive:
        shifts = [emb(c) for c in Fr.elements() if c.code]
        squares = [emb(b) for b in Fr.elements() if b.code and is_square(b)]
    else:
        shifts = [emb(Fr.from_code(P.p ** j)) for j in range(Fr.m)]
        squares = [emb(least_square_generator(Fr))]
    return {
        "translations": all(t.translate(c) == t for c in shifts),
        "square_scalings": all(t.scale_variable(b) == t for b in squares),
        "inversion": t.invert_variable() == t,
        "sigma_fixes_v_prime": sigma_twist(scene.v_prime, P) == scene.v_prime,
        "sigma_fixes_t_prime": sigma_twist(scene.t_prime, P) == scene.t_prime,
    }


def least_square_generator(F: FieldSpec) -> FieldElement:
    """g^2 for the table's primitive element g: generates the squares of F*."""
    g = F.from_code(F._primitive_code())
    return g * g


def check_proof_chain(scene: GaloisScene) -> dict[str, bool]:
    """The intermediate identities behind f(v') = t', each checked separately."""
    P = scene.params
    r, FQ = P.r, P.FQ
    w = RationalFunction(Polynomial.monomial(FQ, scene.w_power), reduced=True)
    winv = 1 / w
    one = FQ.one
    E1 = dickson_E(r, one)
    out = {}
    out["v_is_w_plus_inverse"] = scene.v == w + winv
    lhs = rf_compose(E1, scene.v)
    rhs = (w ** (2 * r + 2) - 1) / (w ** r * (w * w - 1))
    out["E_r(v,1)"] = lhs == rhs
    out["v^2-4"] = scene.v * scene.v - 4 == (w - winv) ** 2
    out["f0(v)=t"] = rf_compose(scene.f0.embed(FQ), scene.v) == scene.t
    s = P.sqrt_a_Q
    a = P.a_Q
    X = Polynomial.x(FQ)
    Er_a = dickson_E(r, a)
    # E_r(X/sqrt a, 1) == E_r(X, a) / sqrt(a)^r
    out["scaling_E"] = rf_compose(E1, RationalFunction(X.scale(s.inverse()), reduced=True)) == \
        RationalFunction(Er_a.scale((s ** r).inverse()), reduced=True)
    # (X/sqrt a)^2 - 4 == (X^2 - 4a)/a
    out["scaling_quadratic"] = (X.scale(s.inverse())) ** 2 - 4 == (X * X - a * 4).scale(a.inverse())
    # f0(X/sqrt a) == f(X) / sqrt(a)^r
    f0Q = scene.f0.embed(FQ)
    out["f0_scaled"] = f0Q.scale_variable(s.inverse()) == scene.f_Q.scale((s ** r).inverse())
    return out


def decompose_r9(params: FamilyParams) -> tuple[RationalFunction, RationalFunction]:
    """The degree 15 and 3 factors of f over F_{q^2} when r = 9.

    Raises AssertionError if their composition is not f.
    """
    if params.r != 9:
        raise ValueError("the explicit decomposition exists only for r = 9")
    F = params.Fq2
    b = params.sqrt_a
    a = params.q_to_q2(params.a)
    X = Polynomial.x(F)
    ab = a * b
    outer = RationalFunction((X ** 3 + X.scale(a) + ab) ** 5, Polynomial.monomial(F, 6))
    inner = RationalFunction(X ** 3 + ab, X * X + X.scale(b) + a)
    f = build_f(params).embed(params.q_to_q2)
    if rf_compose(outer, inner) != f:
        raise AssertionError("outer(inner(X)) differs from f")
    return outer, inner


def separability_check(f: RationalFunction) -> bool:
    """True iff f' != 0."""
    if f.is_constant():
        raise ValueError("separability of a constant function")
    return not f.derivative_numerator().is_zero()
