import random

import pytest

from excrat.family import validate_params
from excrat.ffield import is_square
from excrat.monodromy import (
    GroupSet,
    action_is_homomorphism,
    build_G,
    build_H,
    build_monodromy,
    closure,
    common_orbit_count,
    core_of_subgroup,
    coset_space,
    group_audit,
    is_dihedral,
    is_transitive,
    orbits,
    primitivity_blocks,
)


@pytest.fixture(scope="module")
def M9():
    return build_monodromy(validate_params(3, 1, 1))


@pytest.fixture(scope="module")
def AJ9(M9):
    return coset_space(M9.A, M9.J)


def brute_pgl2_square_class(F):
    """Orbits of invertible 2x2 matrices with square determinant under scalars."""
    classes = set()
    els = list(range(F.order))
    for b in els:
        for c in els:
            for d in els:
                for e in els:
                    det = F.sub(F.mul(b, e), F.mul(c, d))
                    if det and F.is_square_code(det):
                        classes.add(frozenset(
                            (F.mul(s, b), F.mul(s, c), F.mul(s, d), F.mul(s, e)) for s in range(1, F.order)))
    return classes


def test_G_matches_brute_force_at_r9():
    G = build_G(9)
    F = G.ctx.Fr
    brute = brute_pgl2_square_class(F)
    assert len(brute) == G.order == 360
    # each scalar class holds exactly one matrix whose first nonzero entry is 1
    normalized = set()
    for cls in brute:
        reps = [m for m in cls if next(v for v in m if v) == 1]
        assert len(reps) == 1
        normalized.add(reps[0])
    assert normalized == {tuple(x.mat) for x in G.elements}


@pytest.mark.parametrize("r", [3, 5, 7, 9, 25])
def test_G_order_and_square_class(r):
    G = build_G(r)
    assert G.order == r * (r * r - 1) // 2
    assert all(G.ctx.has_square_det(x) for x in G.elements)


def test_G_is_closed_and_random_products_stay_inside():
    G = build_G(9)
    assert G.is_closed()
    rng = random.Random(0)
    pool = sorted(G.elements)
    for _ in range(100):
        assert G.ctx.mul(rng.choice(pool), rng.choice(pool)) in G


def test_build_G_rejects_bad_r():
    for r in (8, 6, 2):
        with pytest.raises(ValueError):
            build_G(r)


def test_group_law_is_associative(M9):
    ctx = M9.ctx
    rng = random.Random(1)
    pool = sorted(M9.A.elements)
    for _ in range(300):
        x, y, z = (rng.choice(pool) for _ in range(3))
        assert ctx.mul(ctx.mul(x, y), z) == ctx.mul(x, ctx.mul(y, z))
        assert ctx.mul(x, ctx.inv(x)) == ctx.identity


def test_group_law_matches_action_on_points(M9):
    # (x y)(pt) == x(y(pt)) for the semilinear action on P^1(F_r)
    ctx = M9.ctx
    rng = random.Random(2)
    pool = sorted(M9.A.elements)
    pts = [None] + list(range(ctx.r))
    for _ in range(200):
        x, y = rng.choice(pool), rng.choice(pool)
        xy = ctx.mul(x, y)
        for pt in pts:
            assert ctx.act_point(xy, pt) == ctx.act_point(x, ctx.act_point(y, pt))


@pytest.mark.parametrize("r,order", [(9, 8), (25, 24)])
def test_H_is_dihedral_subgroup(r, order):
    H = build_H(r)
    assert H.order == order
    assert is_dihedral(H)
    assert H.issubset(build_G(r))
    assert H.is_closed()


def test_H_fixes_v():
    # u -> zeta u^(+-1) fixes u^4 + u^-4 when zeta is a square of F_9
    H = build_H(9)
    ctx = H.ctx
    F = ctx.Fr
    for x in H.elements:
        for u in range(1, F.order):
            w = ctx.act_point(x, u)
            v1 = F.add(F.pow(u, 4), F.pow(F.inv(u), 4))
            v2 = F.add(F.pow(w, 4), F.pow(F.inv(w), 4))
            assert v1 == v2


def test_H_requires_r_1_mod_4():
    with pytest.raises(ValueError):
        build_H(7)


def test_orders_r9(M9):
    assert (M9.G.order, M9.H.order, M9.A.order, M9.J.order) == (360, 8, 720, 16)
    assert M9.ctx.mul(M9.sigma, M9.sigma) in M9.G
    assert M9.sigma not in M9.G


def test_coset_space_r9(M9, AJ9):
    assert AJ9.size == 45
    assert coset_space(M9.G, M9.H).size == 45
    seen = {}
    for x in M9.A.elements:
        i = AJ9.index_of[x]
        seen.setdefault(i, []).append(x)
    assert all(len(v) == 16 for v in seen.values())
    with pytest.raises(ValueError):
        coset_space(M9.H, M9.G)


def test_action_is_homomorphism_exhaustively(M9, AJ9):
    assert action_is_homomorphism(M9.A, AJ9)
    assert action_is_homomorphism(M9.A, AJ9, right=[M9.sigma])


def test_orbits(M9, AJ9):
    assert len(orbits(M9.A.generators, AJ9)) == 1
    assert is_transitive(M9.G, AJ9)
    assert len(orbits([M9.ctx.identity], AJ9)) == 45
    h = orbits(M9.H.generators, AJ9)
    j_index = AJ9.index_of[M9.ctx.identity]
    assert h.block_of(j_index) == (j_index,)
    for part, order in ((h, 8), (orbits(M9.J.generators, AJ9), 16)):
        assert sum(len(b) for b in part.blocks) == 45
        assert all(order % len(b) == 0 for b in part.blocks)


def test_orbits_reject_outside_generator(M9):
    GH = coset_space(M9.G, M9.H)
    with pytest.raises(ValueError):
        orbits([M9.sigma], GH)


def test_common_orbit(M9, AJ9):
    assert common_orbit_count(M9.H, M9.J, AJ9) == 1
    # the common orbit is the fixed coset J itself
    h = set(orbits(M9.H.generators, AJ9).blocks)
    j = set(orbits(M9.J.generators, AJ9).blocks)
    assert h & j == {(AJ9.index_of[M9.ctx.identity],)}
    # H against itself: every H-orbit is common
    assert common_orbit_count(M9.H, M9.H, AJ9) == len(h) > 1


def test_primitivity_r9(M9, AJ9):
    res = primitivity_blocks(M9.G, coset_space(M9.G, M9.H))
    assert not res.primitive
    assert res.block_shape == (15, 3)
    assert primitivity_blocks(M9.A, AJ9).primitive


def test_primitivity_requires_transitivity(M9, AJ9):
    with pytest.raises(ValueError):
        primitivity_blocks(M9.H, AJ9)


def test_blocks_are_a_block_system(M9):
    GH = coset_space(M9.G, M9.H)
    res = primitivity_blocks(M9.G, GH)
    where = {i: b for b in res.blocks for i in b}
    for g in M9.G.generators:
        for b in res.blocks:
            images = {GH.act(g, i) for i in b}
            assert images == set(where[next(iter(images))])


def test_core(M9, AJ9):
    assert core_of_subgroup(M9.A, M9.J, AJ9).order == 1
    full = coset_space(M9.A, M9.A)
    assert core_of_subgroup(M9.A, M9.A, full).order == M9.A.order


def test_audit_r9(M9):
    rep = group_audit(M9)
    assert rep["G_normal_in_A"]
    assert rep["AmodG_cyclic_order"] == 2
    assert rep["index"] == 45 and rep["stabilizer_bookkeeping"]


def test_other_zeta0_gives_same_verdicts():
    P = validate_params(3, 1, 1)
    z = [x for x in P.Fr.elements() if x and not is_square(x) and x != P.zeta0][-1]
    M = build_monodromy(validate_params(3, 1, 1, zeta0=z))
    AJ = coset_space(M.A, M.J)
    assert (M.A.order, M.J.order, AJ.size) == (720, 16, 45)
    assert common_orbit_count(M.H, M.J, AJ) == 1
    assert core_of_subgroup(M.A, M.J, AJ).order == 1
    assert primitivity_blocks(M.A, AJ).primitive


def test_closure_of_generators():
    G = build_G(5)
    assert closure(G.ctx, G.generators) == G.elements
    sub = GroupSet(G.ctx, closure(G.ctx, G.generators[:1]), G.generators[:1])
    assert sub.order == 5 and sub.is_closed()
