"""Monodromy groups as explicit sets of semilinear maps of P^1(F_r).

An element (M, i) acts on points by x -> M(x^(q^i)), so that
(M1, i1)(M2, i2) = (M1 phi^i1(M2), i1 + i2) with phi the entrywise q-th power.
Matrices are stored projectively: the first nonzero entry of (b, c, d, e) is 1.
Groups are enumerated outright; at r = 25 the largest, A, has 15600 elements.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .ffield import FieldElement, FieldSpec, make_field, prime_power


class ProjMatrix(NamedTuple):
    """[[b, c], [d, e]] up to scalars, entries as field codes."""

    b: int
    c: int
    d: int
    e: int


class SemilinearElement(NamedTuple):
    """(matrix, Frobenius exponent); tuple order is the canonical total order."""

    frob: int
    b: int
    c: int
    d: int
    e: int

    @property
    def mat(self) -> ProjMatrix:
        return ProjMatrix(self.b, self.c, self.d, self.e)


class SemilinearContext:
    """Arithmetic for semilinear maps over F_r twisted by q-th powering.

    ``l`` is the exponent with q = p^l and ``d`` the order of q-th powering on F_Q.
    """

    def __init__(self, Fr: FieldSpec, l: int, d: int):
        self.Fr = Fr
        self.l = l
        self.d = d
        F = Fr
        # table of phi^i on F_r codes, i < d
        self._phi = [[F.frob(x, l * i) for x in range(F.order)] for i in range(d)]
        self.identity = SemilinearElement(0, 1, 0, 0, 1)

    @property
    def r(self) -> int:
        return self.Fr.order

    def canon(self, frob: int, b: int, c: int, d: int, e: int) -> SemilinearElement:
        F = self.Fr
        lead = b or c or d or e
        if lead == 0:
            raise ValueError("zero matrix")
        if lead != 1:
            inv = F.inv(lead)
            b, c, d, e = F.mul(b, inv), F.mul(c, inv), F.mul(d, inv), F.mul(e, inv)
        return SemilinearElement(frob % self.d, b, c, d, e)

    def element(self, b, c, d, e, frob: int = 0) -> SemilinearElement:
        """Build from FieldElements or codes, checking invertibility."""
        codes = [x.code if isinstance(x, FieldElement) else int(x) for x in (b, c, d, e)]
        if self.det(codes) == 0:
            raise ValueError("singular matrix")
        return self.canon(frob, *codes)

    def det(self, m) -> int:
        F = self.Fr
        b, c, d, e = m[-4:]
        return F.sub(F.mul(b, e), F.mul(c, d))

    def mul(self, x: SemilinearElement, y: SemilinearElement) -> SemilinearElement:
        F = self.Fr
        mul, add = F.mul, F.add
        phi = self._phi[x.frob]
        yb, yc, yd, ye = phi[y.b], phi[y.c], phi[y.d], phi[y.e]
        return self.canon(
            x.frob + y.frob,
            add(mul(x.b, yb), mul(x.c, yd)),
            add(mul(x.b, yc), mul(x.c, ye)),
            add(mul(x.d, yb), mul(x.e, yd)),
            add(mul(x.d, yc), mul(x.e, ye)),
        )

    def inv(self, x: SemilinearElement) -> SemilinearElement:
        F = self.Fr
        back = self._phi[(-x.frob) % self.d]
        # adjugate of [[b, c], [d, e]] is [[e, -c], [-d, b]]
        return self.canon(-x.frob, back[x.e], back[F.neg(x.c)], back[F.neg(x.d)], back[x.b])

    def power(self, x: SemilinearElement, n: int) -> SemilinearElement:
        out = self.identity
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def order_of(self, x: SemilinearElement) -> int:
        y, n = x, 1
        while y != self.identity:
            y = self.mul(y, x)
            n += 1
        return n

    def has_square_det(self, x: SemilinearElement) -> bool:
        return self.Fr.is_square_code(self.det(x))

    def act_point(self, x: SemilinearElement, pt: int | None, F: FieldSpec | None = None, emb=None) -> int | None:
        """x applied to a point of P^1(F) (None is infinity); F defaults to F_r.

        ``emb`` maps F_r codes into F.  Only frob = 0 is supported off F_r.
        """
        if F is None:
            F, to = self.Fr, (lambda c: c)
            if pt is not None:
                pt = self._phi[x.frob][pt]
        else:
            if x.frob:
                raise ValueError("semilinear action off F_r is not needed and not supported")
            to = emb.map_code
        b, c, d, e = to(x.b), to(x.c), to(x.d), to(x.e)
        if pt is None:
            return None if d == 0 else F.div(b, d)
        num = F.add(F.mul(b, pt), c)
        den = F.add(F.mul(d, pt), e)
        return None if den == 0 else F.div(num, den)

    def to_fields(self, x: SemilinearElement) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
        F = self.Fr
        return tuple(F.from_code(v) for v in x.mat)


@dataclass
class GroupSet:
    """A finite group given by its full element set plus generators."""

    ctx: SemilinearContext
    elements: frozenset
    generators: tuple
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def is_closed(self) -> bool:
        """The set equals the group generated by ``generators`` and is inverse-closed."""
        if self.ctx.identity not in self.elements:
            return False
        if any(g not in self.elements for g in self.generators):
            return False
        if closure(self.ctx, self.generators) != self.elements:
            return False
        return all(self.ctx.inv(x) in self.elements for x in self.elements)

    def issubset(self, other: "GroupSet") -> bool:
        return self.elements <= other.elements


def closure(ctx: SemilinearContext, gens: Iterable[SemilinearElement]) -> frozenset:
    """Breadth-first closure of the generators under left multiplication."""
    gens = list(gens)
    seen = {ctx.identity}
    queue = deque([ctx.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = ctx.mul(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def _context_for_r(r: int) -> SemilinearContext:
    pe = prime_power(r)
    if pe is None or pe[0] == 2:
        raise ValueError(f"r={r} must be an odd prime power")
    p, e = pe
    return SemilinearContext(make_field(p, e), e, 1)


def _square_generator(F: FieldSpec) -> int:
    g = F._primitive_code()
    return F.mul(g, g)


def build_G(r_or_ctx: int | SemilinearContext) -> GroupSet:
    """PSL_2(r): projective matrices of square determinant class."""
    ctx = r_or_ctx if isinstance(r_or_ctx, SemilinearContext) else _context_for_r(r_or_ctx)
    F = ctx.Fr
    n = F.order
    sq = F.is_square_code
    els = set()
    for c in range(n):
        for d in range(n):
            cd = F.mul(c, d)
            for e in range(n):
                det = F.sub(e, cd)
                if det and sq(det):
                    els.add(SemilinearElement(0, 1, c, d, e))
    for d in range(1, n):
        for e in range(n):
            if sq(F.neg(d)):
                els.add(SemilinearElement(0, 0, 1, d, e))
    gens = [ctx.element(1, F.p ** j, 0, 1) for j in range(F.m)]
    gens.append(ctx.element(_square_generator(F), 0, 0, 1))
    gens.append(ctx.element(0, 1, 1, 0))
    G = GroupSet(ctx, frozenset(els), tuple(gens), "G")
    expected = n * (n * n - 1) // 2
    if G.order != expected:
        raise AssertionError(f"|G| = {G.order}, expected {expected}")
    return G


def build_H(r_or_ctx: int | SemilinearContext) -> GroupSet:
    """u -> zeta u and u -> zeta / u for zeta a nonzero square: dihedral of order r - 1."""
    ctx = r_or_ctx if isinstance(r_or_ctx, SemilinearContext) else _context_for_r(r_or_ctx)
    F = ctx.Fr
    if F.order % 4 != 1:
        raise ValueError("u -> zeta/u lies in PSL_2(r) only when r = 1 mod 4")
    squares = [z for z in range(1, F.order) if F.is_square_code(z)]
    els = set()
    for z in squares:
        els.add(ctx.element(z, 0, 0, 1))
        els.add(ctx.element(0, z, 1, 0))
    for x in els:
        if not ctx.has_square_det(x):
            raise ValueError(f"{x} falls outside PSL_2(r)")
    gens = (ctx.element(_square_generator(F), 0, 0, 1), ctx.element(0, 1, 1, 0))
    return GroupSet(ctx, frozenset(els), gens, "H")


def is_dihedral(H: GroupSet) -> bool:
    """A cyclic index-2 subgroup whose generator is inverted by an outside element."""
    ctx = H.ctx
    rot, refl = H.generators
    n = ctx.order_of(rot)
    if 2 * n != H.order:
        return False
    if refl in closure(ctx, [rot]):
        return False
    conj = ctx.mul(ctx.mul(refl, rot), ctx.inv(refl))
    return conj == ctx.inv(rot)


def set_product(ctx: SemilinearContext, left: Iterable, right: Iterable) -> frozenset:
    right = list(right)
    return frozenset(ctx.mul(x, y) for x in left for y in right)


@dataclass
class MonodromyGroups:
    ctx: SemilinearContext
    G: GroupSet
    H: GroupSet
    sigma: SemilinearElement
    A: GroupSet
    J: GroupSet


def sigma_powers(ctx: SemilinearContext, sigma: SemilinearElement) -> list[SemilinearElement]:
    out = [ctx.identity]
    for _ in range(ctx.d - 1):
        out.append(ctx.mul(sigma, out[-1]))
    return out


def build_monodromy(params) -> MonodromyGroups:
    """G, H, sigma, A = <sigma>G and J = <sigma>H for family parameters."""
    ctx = SemilinearContext(params.Fr, params.l, params.d)
    G = build_G(ctx)
    H = build_H(ctx)
    sigma = ctx.element(params.zeta0.code, 0, 0, 1, frob=1)
    powers = sigma_powers(ctx, sigma)
    A = GroupSet(ctx, set_product(ctx, powers, G.elements), G.generators + (sigma,), "A")
    J = GroupSet(ctx, set_product(ctx, powers, H.elements), H.generators + (sigma,), "J")
    for X in (A, J):
        if not X.is_closed():
            raise AssertionError(f"{X.name} is not closed; arithmetic is broken")
    return MonodromyGroups(ctx, G, H, sigma, A, J)


def build_sigma_A_J(params) -> tuple[SemilinearElement, GroupSet, GroupSet]:
    M = build_monodromy(params)
    return M.sigma, M.A, M.J


# -- coset actions ---------------------------------------------------------------------

@dataclass
class CosetSpace:
    """Left cosets x J of ``subgroup`` in ``ambient``, each represented by its least element."""

    ambient: GroupSet
    subgroup: GroupSet
    representatives: list
    index_of: dict = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.representatives)

    def act(self, g: SemilinearElement, i: int) -> int:
        return self.index_of[self.ambient.ctx.mul(g, self.representatives[i])]

    def permutation(self, g: SemilinearElement) -> list[int]:
        if g not in self.ambient:
            raise ValueError(f"{g} is not in {self.ambient.name or 'the ambient group'}")
        return [self.act(g, i) for i in range(self.size)]


def coset_space(A: GroupSet, J: GroupSet) -> CosetSpace:
    if not J.issubset(A):
        raise ValueError("subgroup is not contained in the ambient group")
    ctx = A.ctx
    index_of: dict = {}
    reps = []
    for x in sorted(A.elements):
        if x in index_of:
            continue
        i = len(reps)
        reps.append(x)
        for j in J.elements:
            y = ctx.mul(x, j)
            if index_of.setdefault(y, i) != i:
                raise AssertionError("cosets overlap")
    if len(reps) * J.order != A.order:
        raise AssertionError("coset bookkeeping failed")
    return CosetSpace(A, J, reps, index_of)


@dataclass(frozen=True)
class OrbitPartition:
    blocks: tuple
    acting_generators: tuple

    def __len__(self):
        return len(self.blocks)

    def block_of(self, i: int) -> tuple:
        for b in self.blocks:
            if i in b:
                return b
        raise KeyError(i)


def orbits(gens: Iterable[SemilinearElement], space: CosetSpace) -> OrbitPartition:
    gens = tuple(gens)
    perms = [space.permutation(g) for g in gens]
    n = space.size
    seen = [False] * n
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        block, queue = [start], deque([start])
        while queue:
            x = queue.popleft()
            for perm in perms:
                y = perm[x]
                if not seen[y]:
                    seen[y] = True
                    block.append(y)
                    queue.append(y)
        blocks.append(tuple(sorted(block)))
    return OrbitPartition(tuple(blocks), gens)


def is_transitive(group: GroupSet, space: CosetSpace) -> bool:
    return len(orbits(group.generators, space)) == 1


def common_orbit_count(H: GroupSet, J: GroupSet, space: CosetSpace) -> int:
    """Number of point sets that are at once an H-orbit and a J-orbit."""
    h = set(orbits(H.generators, space).blocks)
    j = set(orbits(J.generators, space).blocks)
    return len(h & j)


@dataclass(frozen=True)
class PrimitivityResult:
    primitive: bool
    blocks: tuple | None = None

    @property
    def block_shape(self) -> tuple[int, int] | None:
        """(number of blocks, block size) of the reported block system."""
        if self.blocks is None:
            return None
        return len(self.blocks), len(self.blocks[0])


def _minimal_blocks(perms: list[list[int]], n: int, x: int) -> list[int]:
    """Union-find labels of the finest block system joining points 0 and x."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pending = [(0, x)]
    parent[find(x)] = find(0)
    while pending:
        a, b = pending.pop()
        for perm in perms:
            ra, rb = find(perm[a]), find(perm[b])
            if ra != rb:
                parent[rb] = ra
                pending.append((perm[a], perm[b]))
    return [find(i) for i in range(n)]


def primitivity_blocks(group: GroupSet, space: CosetSpace) -> PrimitivityResult:
    """Primitive iff the minimal block through {0, x} is everything for every x."""
    n = space.size
    perms = [space.permutation(g) for g in group.generators]
    if len(orbits(group.generators, space)) != 1:
        raise ValueError("primitivity is only defined for transitive actions")
    for x in range(1, n):
        labels = _minimal_blocks(perms, n, x)
        root = labels[0]
        if labels.count(root) < n:
            classes: dict[int, list[int]] = {}
            for i, lab in enumerate(labels):
                classes.setdefault(lab, []).append(i)
            blocks = tuple(sorted(tuple(c) for c in classes.values()))
            return PrimitivityResult(False, blocks)
    return PrimitivityResult(True)


def core_of_subgroup(A: GroupSet, J: GroupSet, space: CosetSpace) -> GroupSet:
    """Kernel of the action of A on A/J: the elements fixing every coset."""
    ctx = A.ctx
    # the kernel fixes the coset J itself, hence lies in J
    kernel = [j for j in J.elements
              if all(space.act(j, i) == i for i in range(space.size))]
    return GroupSet(ctx, frozenset(kernel), tuple(sorted(kernel)), "core")


def group_audit(M: MonodromyGroups, samples: int = 50, seed: int = 0) -> dict:
    """Normality of G in A, the cyclic quotient A/G, and |A| = [A:J] |J|."""
    ctx, G, A = M.ctx, M.G, M.A
    rng = random.Random(seed)
    pool = sorted(A.elements)
    conjugators = list(A.generators) + [rng.choice(pool) for _ in range(samples)]

    def normalizes(x):
        xi = ctx.inv(x)
        return all(ctx.mul(ctx.mul(x, g), xi) in G for g in G.generators)

    normal = all(normalizes(x) for x in conjugators)
    # order of sigma G in A/G
    y, n = M.sigma, 1
    while y not in G:
        y = ctx.mul(M.sigma, y)
        n += 1
    cyclic = n * G.order == A.order
    space = coset_space(A, M.J)
    return {
        "G_normal_in_A": normal,
        "AmodG_cyclic_order": n if cyclic else None,
        "AmodG_expected": ctx.d,
        "index": space.size,
        "stabilizer_bookkeeping": A.order == space.size * M.J.order,
    }


def action_is_homomorphism(A: GroupSet, space: CosetSpace, right: Iterable | None = None) -> bool:
    """act(g1 g2, x) == act(g1, act(g2, x)) for all g1 in A, g2 in ``right`` (default: generators)."""
    ctx = A.ctx
    right = list(A.generators if right is None else right)
    for g1 in A.elements:
        for g2 in right:
            g12 = ctx.mul(g1, g2)
            for i in range(space.size):
                if space.act(g12, i) != space.act(g1, space.act(g2, i)):
                    return False
    return True
