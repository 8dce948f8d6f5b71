"""Acceptance criteria, each with its runtime budget.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import time

import pytest

from excrat.family import (
    build_f,
    build_scene,
    check_functional_equation,
    check_semiconjugacy,
    decompose_r9,
    dickson_E,
    validate_params,
)
from excrat.ffield import is_square, make_field
from excrat.monodromy import (
    build_monodromy,
    common_orbit_count,
    core_of_subgroup,
    coset_space,
    group_audit,
    is_transitive,
    primitivity_blocks,
)
from excrat.polyrat import Polynomial, ProjectivePoint, RationalFunction
from excrat.ramify import (
    as_rational_function,
    branch_locus,
    fiber_profile,
    generic_fibers_squarefree,
    inertia_filtration,
    permutation_check,
    riemann_hurwitz_terms,
)

PARAMS = {9: (3, 1, 1), 25: (5, 1, 1)}


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def int_recurrence(n, a, p):
    seq = [[1], [0, 1]]
    while len(seq) <= n:
        prev, cur = seq[-2], seq[-1]
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] = (nxt[i] - a * c) % p
        seq.append(nxt)
    return seq


@pytest.mark.criterion("AC1", "degree of f is 45 and 325, under 1 s")
def test_ac1_degree():
    with Timer() as t:
        d9 = build_f(validate_params(3, 1, 1, a=2)).degree
        d25 = build_f(validate_params(5, 1, 1, a=2)).degree
    assert (d9, d25) == (45, 325)
    assert t.elapsed < 1.0, t.elapsed


@pytest.mark.criterion("AC2", "f permutes P^1(F_3), P^1(F_27), P^1(F_243), P^1(F_5), P^1(F_125), under 10 s")
def test_ac2_permutation():
    cases = [((3, 1, 1), 1, 4), ((3, 1, 1), 3, 28), ((3, 1, 1), 5, 244), ((5, 1, 1), 1, 6), ((5, 1, 1), 3, 126)]
    with Timer() as t:
        results = []
        for args, n, pts in cases:
            f = build_f(validate_params(*args))
            res = permutation_check(f, make_field(args[0], n))
            results.append((res.points, res.hit_counts, pts))
    for points, hist, pts in results:
        assert points == pts
        assert hist == {1: pts}
    assert t.elapsed < 10.0, t.elapsed


@pytest.mark.criterion("AC3", "functional equation for r=9 over F_3, r=25 over F_5, all nonsquare a, under 5 s")
def test_ac3_functional_equation():
    with Timer() as t:
        ok = []
        for p, r in ((3, 9), (5, 25)):
            F = make_field(p, 1)
            ok.append(check_functional_equation(r, F(2)))
            for a in F.elements():
                if a and not is_square(a):
                    ok.append(check_functional_equation(r, a))
    assert all(ok) and len(ok) == 5
    assert t.elapsed < 5.0, t.elapsed


@pytest.mark.criterion("AC4", "f(v') = t' at r=9 and r=25; mutated numerator fails, under 30 s")
def test_ac4_semiconjugacy():
    with Timer() as t:
        verdicts = []
        for r, args in PARAMS.items():
            scene = build_scene(validate_params(*args))
            f = scene.f
            verdicts.append((check_semiconjugacy(scene),
                             check_semiconjugacy(scene, RationalFunction(f.num + 1, f.den)),
                             scene.t_prime.degree == r * (r * r - 1) // 2))
    # t' is the quotient by G, so its degree is |G|
    assert verdicts == [(True, False, True), (True, False, True)]
    assert t.elapsed < 30.0, t.elapsed


@pytest.mark.criterion("AC5", "r=9 decomposition outer(inner) equals f, degrees 15 and 3")
def test_ac5_decomposition():
    P = validate_params(3, 1, 1)
    outer, inner = decompose_r9(P)
    assert (outer.degree, inner.degree) == (15, 3)
    f = build_f(P).embed(P.q_to_q2)
    assert outer.compose(inner) == f and f.degree == 45


@pytest.mark.criterion("AC6", "monodromy orders, transitivity, A/G, core, common orbit at r=9 and r=25, under 60 s")
def test_ac6_monodromy():
    expected = {9: (360, 8, 720, 16, 45), 25: (7800, 24, 15600, 48, 325)}
    for r, args in PARAMS.items():
        with Timer() as t:
            M = build_monodromy(validate_params(*args))
            AJ = coset_space(M.A, M.J)
            orders = (M.G.order, M.H.order, M.A.order, M.J.order, AJ.size)
            audit = group_audit(M)
            facts = (is_transitive(M.A, AJ), is_transitive(M.G, AJ), audit["AmodG_cyclic_order"],
                     audit["G_normal_in_A"], core_of_subgroup(M.A, M.J, AJ).order, common_orbit_count(M.H, M.J, AJ))
        assert orders == expected[r]
        assert facts == (True, True, 2, True, 1, 1)
        assert t.elapsed < 60.0, t.elapsed


@pytest.mark.criterion("AC7", "G on G/H primitive at r=25, 15x3 blocks at r=9; A on A/J primitive at r=9")
def test_ac7_primitivity():
    M9 = build_monodromy(validate_params(3, 1, 1))
    r9 = primitivity_blocks(M9.G, coset_space(M9.G, M9.H))
    assert not r9.primitive and r9.block_shape == (15, 3)
    assert primitivity_blocks(M9.A, coset_space(M9.A, M9.J)).primitive
    M25 = build_monodromy(validate_params(5, 1, 1))
    assert primitivity_blocks(M25.G, coset_space(M25.G, M25.H)).primitive


@pytest.mark.criterion("AC8", "fibers over infinity and 0, branch locus {0, inf}, generic fibers squarefree")
def test_ac8_ramification():
    for r, args in PARAMS.items():
        P = validate_params(*args)
        f = build_f(P)
        finf = fiber_profile(f, ProjectivePoint.infinity(P.Fq))
        assert finf.infinity_multiplicity() == r
        assert finf.multiplicities() == {r: 1, (r * r - r) // 4: 2}
        two_root_a = P.sqrt_a * 2
        assert finf.points_in(P.Fq2) == {two_root_a.code: (r * r - r) // 4, (-two_root_a).code: (r * r - r) // 4}
        f0 = fiber_profile(f, P.Fq.zero)
        assert f0.multiplicities() == {(r + 1) // 2: r}
        probes = [P.Fq2, make_field(P.p, 4 * P.l)]
        assert [repr(x) for x in branch_locus(f, probes)] == ["0", "inf"]
        for K in probes:
            assert generic_fibers_squarefree(f, K, trials=10, seed=0)


@pytest.mark.criterion("AC9", "filtrations [(r^2-r)/2, r, 1] and [(r+1)/2, 1]; translation valuation 2; Riemann-Hurwitz")
def test_ac9_filtration():
    rh = {}
    for r, args in PARAMS.items():
        P = validate_params(*args)
        G = build_monodromy(P).G
        inf = inertia_filtration(P, "inf", G)
        quad = inertia_filtration(P, "quadratic", G)
        assert inf.group_orders == [(r * r - r) // 2, r, 1]
        assert quad.group_orders == [(r + 1) // 2, 1]
        F = G.ctx.Fr
        rho = G.ctx.element(1, 1, 0, 1)
        pi = RationalFunction(Polynomial.one(F), Polynomial.x(F))
        assert (pi.compose(as_rational_function(G.ctx, rho)) - pi).valuation_at_infinity() == 2
        rh[r] = riemann_hurwitz_terms(G.order, [inf.group_orders, quad.group_orders])
    assert rh == {9: (718, 718), 25: (15598, 15598)}


@pytest.mark.criterion("AC10", "closed-form E_r equals the recurrence for all r <= 200 over F_3 and F_5")
def test_ac10_dickson_oracle():
    for p in (3, 5):
        F = make_field(p, 1)
        seq = int_recurrence(200, 2, p)
        for r in range(201):
            assert dickson_E(r, F(2)) == Polynomial(F, seq[r]), (p, r)
