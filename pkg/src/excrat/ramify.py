"""Fibers, branch points and ramification filtrations.

Geometric points in a fiber are counted through squarefree decomposition over
the coefficient field: a squarefree factor of degree n contributes n points of
the same multiplicity, so no splitting field is ever built.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .ffield import FieldElement, FieldSpec, embedding, make_field
from .family import FamilyParams, invariant_t
from .monodromy import GroupSet, SemilinearContext, SemilinearElement, build_G, closure
from .polyrat import (
    Polynomial,
    ProjectivePoint,
    RationalFunction,
    poly_gcd,
    rf_evaluate,
    squarefree_decomposition,
)


@dataclass(frozen=True)
class FiberPart:
    """``degree`` geometric points, each of multiplicity ``multiplicity``.

    ``factor`` is the squarefree polynomial cutting them out; it is None for the
    point at infinity.
    """

    degree: int
    multiplicity: int
    factor: Polynomial | None = None

    @property
    def is_infinity(self) -> bool:
        return self.factor is None

    @property
    def weight(self) -> int:
        return self.degree * self.multiplicity


@dataclass(frozen=True)
class Fiber:
    over: ProjectivePoint
    parts: tuple

    @property
    def weight(self) -> int:
        return sum(p.weight for p in self.parts)

    @property
    def num_points(self) -> int:
        return sum(p.degree for p in self.parts)

    def multiplicities(self) -> dict[int, int]:
        """multiplicity -> number of geometric points carrying it."""
        out: Counter = Counter()
        for p in self.parts:
            out[p.multiplicity] += p.degree
        return dict(sorted(out.items()))

    @property
    def is_unramified(self) -> bool:
        return all(p.multiplicity == 1 for p in self.parts)

    def infinity_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.parts if p.is_infinity)

    def points_in(self, target: FieldSpec) -> dict[int, int]:
        """Explicit finite points of the fiber lying in ``target``: code -> multiplicity."""
        emb = embedding(self.over.field, target)
        out = {}
        for part in self.parts:
            if part.factor is None:
                continue
            g = part.factor.embed(emb)
            for x in target.elements():
                if g(x).code == 0:
                    out[x.code] = part.multiplicity
        return out

    def as_dict(self) -> dict:
        return {
            "over": repr(self.over),
            "points": self.num_points,
            "multiplicities": {str(e): n for e, n in self.multiplicities().items()},
            "infinity_multiplicity": self.infinity_multiplicity(),
        }


def _fiber_polynomial(f: RationalFunction, d: ProjectivePoint) -> Polynomial:
    if d.is_infinity:
        return f.den
    if d.field != f.field:
        raise ValueError(f"target point over {d.field!r}, function over {f.field!r}")
    return f.num - f.den * d.value


def fiber_profile(f: RationalFunction, d: ProjectivePoint | FieldElement) -> Fiber:
    """The fiber f^{-1}(d) with multiplicities; total weight is deg f."""
    if isinstance(d, FieldElement):
        d = ProjectivePoint.finite(d)
    if f.is_constant():
        raise ValueError("constant function has no fibers")
    poly = _fiber_polynomial(f, d)
    parts = [FiberPart(g.degree, e, g) for g, e in squarefree_decomposition(poly) if g.degree > 0]
    gap = f.degree - poly.degree
    if gap > 0:
        parts.append(FiberPart(1, gap, None))
    fib = Fiber(d, tuple(parts))
    if fib.weight != f.degree:
        raise AssertionError(f"fiber weight {fib.weight} != deg f = {f.degree}")
    return fib


def _strip(a: Polynomial, b: Polynomial) -> Polynomial:
    """a with every factor shared with b removed."""
    while True:
        g = poly_gcd(a, b)
        if g.degree <= 0:
            return a
        a = a // g


def infinity_multiplicity(f: RationalFunction) -> int:
    """Multiplicity of X = infinity in its own fiber."""
    gap = f.num.degree - f.den.degree
    if gap != 0:
        return abs(gap)
    c = f.num.leading / f.den.leading
    return f.degree - (f.num - f.den * c).degree


def branch_locus(f: RationalFunction, probe_fields: Iterable[FieldSpec] = ()) -> list[ProjectivePoint]:
    """All critical values of f.

    Critical points that are zeros or poles of f certify 0 or infinity; the rest
    are the roots of the stripped derivative numerator and must be located in
    one of ``probe_fields``.  Their values are returned over the probe field.
    """
    F = f.field
    W = f.derivative_numerator()
    if W.is_zero():
        raise ValueError("f is inseparable; its derivative vanishes identically")
    out = []
    zero, inf = ProjectivePoint.finite(F.zero), ProjectivePoint.infinity(F)
    if poly_gcd(W, f.num).degree > 0:
        out.append(zero)
    if poly_gcd(W, f.den).degree > 0:
        out.append(inf)
    if infinity_multiplicity(f) > 1:
        val = rf_evaluate(f, inf)
        if val not in out:
            out.append(val)
    rest = _strip(_strip(W, f.num), f.den)
    for K in sorted(probe_fields, key=lambda K: K.order):
        if rest.degree <= 0:
            break
        if K.p != F.p or K.m % F.m:
            raise ValueError(f"probe field {K.name} does not contain {F.name}")
        split = poly_gcd(rest, _x_power_mod(rest, K.order) - Polynomial.x(F))
        if split.degree <= 0:
            continue
        emb = embedding(F, K)
        S, fK = split.embed(emb), f.embed(emb)
        for x in K.elements():
            if S(x).code == 0:
                y = rf_evaluate(fK, ProjectivePoint.finite(x))
                if y.is_infinity or y.value.code == 0:
                    y = inf if y.is_infinity else zero
                if all(y != o for o in out):
                    out.append(y)
        rest = _strip(rest, split)
    if rest.degree > 0:
        raise ValueError(f"{rest.degree} critical points lie outside every probe field")
    return sorted(out, key=lambda p: (p.field.order, p.sort_key()))


def _x_power_mod(m: Polynomial, n: int) -> Polynomial:
    """X^n mod m by repeated squaring."""
    F = m.field
    out, base = Polynomial.one(F) % m, Polynomial.x(F) % m
    while n:
        if n & 1:
            out = (out * base) % m
        base = (base * base) % m
        n >>= 1
    return out


def generic_fibers_squarefree(f: RationalFunction, target: FieldSpec, trials: int = 10, seed: int = 0) -> bool:
    """Random d outside {0, infinity} in ``target`` have unramified fibers."""
    rng = random.Random(seed)
    fK = f.embed(embedding(f.field, target))
    for _ in range(trials):
        d = target.from_code(rng.randrange(1, target.order))
        if not fiber_profile(fK, d).is_unramified:
            return False
    return True


@dataclass
class RamificationProfile:
    function: RationalFunction
    branch_points: list                      # (ProjectivePoint, Fiber)
    identities: dict = field(default_factory=dict)

    def fiber_over(self, pt: ProjectivePoint) -> Fiber:
        for p, fib in self.branch_points:
            if p == pt:
                return fib
        raise KeyError(pt)


def g_ram_profile(params: FamilyParams) -> RamificationProfile:
    """Fibers of u -> t' over 0 and infinity, plus the identities behind them.

    t' is a constant multiple of t, which is defined over F_p, so the fibers are
    computed from t over F_p.
    """
    r, p = params.r, params.p
    Fp = make_field(p, 1)
    u = Polynomial.x(Fp)
    big = Polynomial.monomial(Fp, r * r) - u
    small = Polynomial.monomial(Fp, r) - u
    h = big // small
    t = invariant_t(Fp, r)
    W = t.derivative_numerator()
    ids = {
        "gcd": poly_gcd(big, small) == small,
        "h_identity": big - small == small ** r,
        "reduced_form": t.num == h ** ((r + 1) // 2) and t.den == small ** ((r * r - r) // 2),
        # num' den - num den' = ((r+1)/2) h^((r-1)/2) (u^r-u)^(r-2+(r^2-r)/2)
        "derivative_closed_form": W == (h ** ((r - 1) // 2) * small ** (r - 2 + (r * r - r) // 2)) * ((r + 1) // 2),
        # with the closed form, every critical point is a root of h or of u^r - u,
        # and both divide u^(r^2) - u
        "critical_points_in_Fr2": (big % h).is_zero() and (big % small).is_zero(),
    }
    zero, inf = ProjectivePoint.finite(Fp.zero), ProjectivePoint.infinity(Fp)
    prof = RationalFunction(t.num, t.den, reduced=True)
    return RamificationProfile(prof, [(zero, fiber_profile(prof, zero)), (inf, fiber_profile(prof, inf))], ids)


# -- ramification filtrations ---------------------------------------------------------

@dataclass
class FiltrationReport:
    place: str
    group_orders: list
    inertia: GroupSet
    wild_part: GroupSet
    cyclic: bool | None = None
    valuations: dict = field(default_factory=dict)   # valuation -> count (None = identity)

    def is_monotone(self) -> bool:
        o = self.group_orders
        return all(a >= b for a, b in zip(o, o[1:])) and o[-1] == 1

    def wild_is_p_part(self, p: int) -> bool:
        n = self.group_orders[0]
        while n % p == 0:
            n //= p
        return self.group_orders[1] * n == self.group_orders[0]


def as_rational_function(ctx: SemilinearContext, x: SemilinearElement, F: FieldSpec | None = None) -> RationalFunction:
    """The Moebius map u -> (b u + c)/(d u + e) over F (default F_r); frob must be 0."""
    if x.frob:
        raise ValueError("only linear elements are rational functions")
    Fr = ctx.Fr
    F = F or Fr
    emb = embedding(Fr, F)
    b, c, d, e = (emb(Fr.from_code(v)) for v in x.mat)
    return RationalFunction(Polynomial(F, [c, b]), Polynomial(F, [e, d]))


def generating_set(ctx: SemilinearContext, elements: Iterable[SemilinearElement]) -> tuple:
    gens: list = []
    span = frozenset([ctx.identity])
    for x in sorted(elements):
        if x not in span:
            gens.append(x)
            span = closure(ctx, gens)
    return tuple(gens)


def _subgroup(ctx, elements, name) -> GroupSet:
    els = frozenset(elements)
    return GroupSet(ctx, els, generating_set(ctx, els), name)


def least_quadratic_point(Fr: FieldSpec, Fr2: FieldSpec) -> FieldElement:
    image = set(embedding(Fr, Fr2).image())
    for x in Fr2.elements():
        if x.code not in image:
            return x
    raise AssertionError("F_r2 has no elements outside F_r")


def inertia_filtration(params: FamilyParams | int, place: str = "inf", G: GroupSet | None = None) -> FiltrationReport:
    """Lower-numbering ramification groups at u = infinity or at a quadratic point.

    rho is in G_i iff v(rho(pi) - pi) >= i + 1 with pi = 1/u at infinity and
    pi = u - alpha at alpha.  Only the orders are needed, and the identity
    lies in every G_i.
    """
    r = params if isinstance(params, int) else params.r
    if G is None:
        G = build_G(r)
    ctx = G.ctx
    Fr = ctx.Fr
    if place == "inf":
        inertia = [x for x in G.elements if x.d == 0]
        K = Fr
        pi = RationalFunction(Polynomial.one(K), Polynomial.x(K))

        def val(x):
            rho = as_rational_function(ctx, x, K)
            return (pi.compose(rho) - pi).valuation_at_infinity()
        label = "u=inf over t'=inf, pi=1/u"
    elif place == "quadratic":
        K = make_field(Fr.p, 2 * Fr.m)
        emb = embedding(Fr, K)
        alpha = least_quadratic_point(Fr, K)
        inertia = [x for x in G.elements if ctx.act_point(x, alpha.code, K, emb) == alpha.code]
        X = Polynomial.x(K)

        def val(x):
            rho = as_rational_function(ctx, x, K)
            return (rho - RationalFunction(X)).valuation_at(alpha)
        label = f"u={alpha!r} over t'=0, pi=u-alpha"
    else:
        raise ValueError(f"unknown place {place!r}; use 'inf' or 'quadratic'")
    vals = {x: (None if x == ctx.identity else val(x)) for x in inertia}
    orders = []
    i = 0
    while True:
        Gi = [x for x, v in vals.items() if v is None or v >= i + 1]
        orders.append(len(Gi))
        if len(Gi) == 1:
            break
        i += 1
    G1 = [x for x, v in vals.items() if v is None or v >= 2]
    I = _subgroup(ctx, inertia, "inertia")
    cyclic = any(ctx.order_of(x) == len(inertia) for x in inertia)
    hist = Counter("identity" if v is None else v for v in vals.values())
    return FiltrationReport(label, orders, I, _subgroup(ctx, G1, "wild"), cyclic,
                            {str(k): hist[k] for k in sorted(hist, key=str)})


def riemann_hurwitz_terms(group_order: int, reports: Iterable[list[int]]) -> tuple[int, int]:
    """(2|G| - 2, sum over branch places of sum_i (|G_i| - 1)) for a genus-0 Galois cover of P^1.

    Each entry of ``reports`` is one filtration [|G_0|, |G_1|, ...]; the number of
    places sharing it is |G| / |G_0|.
    """
    rhs = 0
    for orders in reports:
        rhs += (group_order // orders[0]) * sum(n - 1 for n in orders)
    return 2 * group_order - 2, rhs


def riemann_hurwitz_check(params: FamilyParams | int, orders: Iterable[list[int]] | None = None) -> bool:
    """2|G| - 2 equals the different degree summed over the places above 0 and infinity."""
    r = params if isinstance(params, int) else params.r
    if orders is None:
        G = build_G(r)
        orders = [inertia_filtration(r, "inf", G).group_orders,
                  inertia_filtration(r, "quadratic", G).group_orders]
    lhs, rhs = riemann_hurwitz_terms(r * (r * r - 1) // 2, orders)
    return lhs == rhs


def wild_multiplicity_divisible(params: FamilyParams) -> bool:
    """p divides (r^2 - r)/4, the multiplicity at the square roots of 4a."""
    r = params.r
    return (r * r - r) % 4 == 0 and ((r * r - r) // 4) % params.p == 0


# -- permutation check -------------------------------------------------------------------

@dataclass(frozen=True)
class PermutationResult:
    field: str
    points: int
    bijection: bool
    hit_counts: dict       # hits -> number of target points hit that often

    @property
    def max_hit(self) -> int:
        return max(self.hit_counts)

    def as_dict(self) -> dict:
        return {"field": self.field, "points": self.points, "bijection": self.bijection,
                "max_hit": self.max_hit, "hit_counts": {str(k): v for k, v in self.hit_counts.items()}}


def _image_codes(f: RationalFunction, lo: int, hi: int) -> list[int]:
    """Codes of f at field elements lo..hi-1; -1 stands for infinity."""
    F = f.field
    out = []
    for c in range(lo, hi):
        y = rf_evaluate(f, ProjectivePoint.finite(F.from_code(c)))
        out.append(-1 if y.is_infinity else y.value.code)
    return out


def permutation_check(f: RationalFunction, target: FieldSpec, jobs: int = 1) -> PermutationResult:
    """Evaluate f on all of P^1(target) and histogram how often each point is hit."""
    fK = f if f.field == target else f.embed(embedding(f.field, target))
    n = target.order
    if jobs > 1:
        step = -(-n // jobs)
        bounds = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_image_codes, [fK] * len(bounds), *zip(*bounds)))
        images = [c for chunk in chunks for c in chunk]
    else:
        images = _image_codes(fK, 0, n)
    y = rf_evaluate(fK, ProjectivePoint.infinity(target))
    images.append(-1 if y.is_infinity else y.value.code)
    hits = Counter(images)
    hist = Counter(hits.values())
    missed = n + 1 - len(hits)
    if missed:
        hist[0] = missed
    return PermutationResult(target.name, n + 1, set(hist) == {1}, dict(sorted(hist.items())))
