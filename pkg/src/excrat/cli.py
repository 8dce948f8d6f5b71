"""Command-line verification suites.

    excrat build --p 3 --k 1 --l 1
    excrat perm --p 3 --k 1 --l 1 --n 1,3,5 --json
    excrat all --p 5 --k 1 --l 1

Exit status: 0 when every check passes, 1 when one fails, 2 on bad parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .family import (
    ParameterError,
    build_f,
    build_scene,
    check_functional_equation,
    check_proof_chain,
    check_semiconjugacy,
    check_t_invariance,
    decompose_r9,
    separability_check,
    validate_params,
)
from .ffield import make_field
from .monodromy import (
    build_monodromy,
    common_orbit_count,
    core_of_subgroup,
    coset_space,
    group_audit,
    is_dihedral,
    is_transitive,
    primitivity_blocks,
)
from .polyrat import ProjectivePoint, format_rf
from .ramify import (
    branch_locus,
    fiber_profile,
    g_ram_profile,
    generic_fibers_squarefree,
    inertia_filtration,
    permutation_check,
    riemann_hurwitz_terms,
)

SCHEMA = 1
MAX_R = 100
TEXT_WIDTH = 160
EXIT_OK, EXIT_FAIL, EXIT_PARAM = 0, 1, 2
COMMANDS = ("build", "identity", "perm", "ramify", "monodromy", "all")


@dataclass
class Section:
    name: str
    status: str          # pass, fail or info
    payload: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "payload": self.payload}


@dataclass
class Report:
    command: str
    params: dict
    sections: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.status != "fail" for s in self.sections)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "ok": self.ok,
            "sections": [s.as_dict() for s in self.sections],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"excrat {self.command}  " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        for s in self.sections:
            lines.append(f"[{s.status.upper():4}] {s.name}")
            for k, v in s.payload.items():
                text = v if isinstance(v, str) else json.dumps(v)
                if len(text) > TEXT_WIDTH:
                    text = text[:TEXT_WIDTH] + f" ... ({len(text)} chars; see --json)"
                lines.append(f"         {k}: {text}")
        lines.append("result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- suites; each takes the raw parameter tuple so it can run in a worker ---------------

def _params(p, k, l, a):
    return validate_params(p, k, l, a)


def suite_build(p, k, l, a, **_) -> list[Section]:
    P = _params(p, k, l, a)
    scene = build_scene(P)
    summary = P.summary()
    return [
        Section("summary", _status(scene.f.degree == summary["deg_f"]), summary),
        Section("scene", "info", {
            "modulus_Fq": P.Fq.modulus, "modulus_FQ": P.FQ.modulus,
            "zeta0": ",".join(map(str, P.zeta0.coeffs)),
            "sqrt_a": ",".join(map(str, P.sqrt_a.coeffs)),
            "f": format_rf(scene.f),
            "v_prime": format_rf(scene.v_prime),
            "t_prime": format_rf(scene.t_prime),
        }),
    ]


def suite_identity(p, k, l, a, **_) -> list[Section]:
    P = _params(p, k, l, a)
    scene = build_scene(P)
    out = [
        Section("functional_equation", _status(check_functional_equation(P.r, P.a)), {"r": P.r}),
        Section("semiconjugacy", _status(check_semiconjugacy(scene)), {"deg_t_prime": scene.t_prime.degree}),
    ]
    inv = check_t_invariance(scene)
    out.append(Section("t_invariance", _status(all(inv.values())), inv))
    chain = check_proof_chain(scene)
    out.append(Section("proof_chain", _status(all(chain.values())), chain))
    if P.r == 9:
        try:
            outer, inner = decompose_r9(P)
            out.append(Section("decompose_r9", "pass", {"outer_degree": outer.degree, "inner_degree": inner.degree}))
        except AssertionError as exc:
            out.append(Section("decompose_r9", "fail", {"error": str(exc)}))
    else:
        out.append(Section("decompose_r9", "info", {"skipped": f"r={P.r}"}))
    out.append(Section("separability", _status(separability_check(scene.f)), {}))
    return out


def _perm_one(p, k, l, a, n, jobs):
    P = _params(p, k, l, a)
    f = build_f(P)
    res = permutation_check(f, make_field(p, l * n), jobs=jobs)
    row = {"n": n, "points": res.points, "bijection": res.bijection, "max_hit": res.max_hit,
           "hit_counts": {str(h): c for h, c in res.hit_counts.items()}}
    if n % 2 == 0:
        # no claim is made for even n; report the verdict only
        return Section(f"perm_n{n}", "info", row)
    return Section(f"perm_n{n}", _status(res.bijection), row)


def suite_perm(p, k, l, a, n=(1, 3), jobs=1, **_) -> list[Section]:
    _params(p, k, l, a)
    return [_perm_one(p, k, l, a, m, jobs) for m in n]


def suite_ramify(p, k, l, a, **_) -> list[Section]:
    P = _params(p, k, l, a)
    r = P.r
    f = build_f(P)
    Fq = P.Fq
    out = []
    probes = [P.Fq2, make_field(p, 4 * l)]
    pts = [repr(x) for x in branch_locus(f, probes)]
    out.append(Section("branch_locus", _status(pts == ["0", "inf"]), {"branch_points": pts}))
    f0 = fiber_profile(f, Fq.zero)
    out.append(Section("fiber_over_0", _status(f0.multiplicities() == {(r + 1) // 2: r}), f0.as_dict()))
    finf = fiber_profile(f, ProjectivePoint.infinity(Fq))
    roots = finf.points_in(P.Fq2)
    expected_roots = {(P.sqrt_a * 2).code, (-(P.sqrt_a * 2)).code}
    ok = (finf.infinity_multiplicity() == r and finf.multiplicities() == {r: 1, (r * r - r) // 4: 2}
          and set(roots) == expected_roots and set(roots.values()) == {(r * r - r) // 4})
    out.append(Section("fiber_over_inf", _status(ok), finf.as_dict()))
    gen = {K.name: generic_fibers_squarefree(f, K, 10, seed=0) for K in probes}
    out.append(Section("generic_fibers", _status(all(gen.values())), gen))
    prof = g_ram_profile(P)
    g0, ginf = prof.branch_points[0][1], prof.branch_points[1][1]
    ok = (all(prof.identities.values()) and g0.multiplicities() == {(r + 1) // 2: r * r - r}
          and ginf.multiplicities() == {(r * r - r) // 2: r + 1})
    out.append(Section("g_profile", _status(ok), {
        "identities": prof.identities, "fiber_over_0": g0.as_dict(), "fiber_over_inf": ginf.as_dict()}))
    M = build_monodromy(P)
    finf_rep = inertia_filtration(P, "inf", M.G)
    fq_rep = inertia_filtration(P, "quadratic", M.G)
    ok = finf_rep.group_orders == [(r * r - r) // 2, r, 1] and finf_rep.valuations.get("2") == r - 1
    out.append(Section("filtration_inf", _status(ok), {"orders": finf_rep.group_orders,
                                                        "valuations": finf_rep.valuations}))
    ok = fq_rep.group_orders == [(r + 1) // 2, 1] and bool(fq_rep.cyclic)
    out.append(Section("filtration_quadratic", _status(ok), {"orders": fq_rep.group_orders, "cyclic": fq_rep.cyclic,
                                                             "place": fq_rep.place}))
    lhs, rhs = riemann_hurwitz_terms(M.G.order, [finf_rep.group_orders, fq_rep.group_orders])
    out.append(Section("riemann_hurwitz", _status(lhs == rhs), {"rh_ok": lhs == rhs, "lhs": lhs, "rhs": rhs}))
    return out


def suite_monodromy(p, k, l, a, **_) -> list[Section]:
    P = _params(p, k, l, a)
    r, d = P.r, P.d
    M = build_monodromy(P)
    GH = coset_space(M.G, M.H)
    AJ = coset_space(M.A, M.J)
    audit = group_audit(M)
    pg = primitivity_blocks(M.G, GH)
    pa = primitivity_blocks(M.A, AJ)
    core = core_of_subgroup(M.A, M.J, AJ)
    orders = {"order_G": M.G.order, "order_H": M.H.order, "order_A": M.A.order,
              "order_J": M.J.order, "index": AJ.size}
    expected = {"order_G": r * (r * r - 1) // 2, "order_H": r - 1,
                "order_A": d * r * (r * r - 1) // 2, "order_J": d * (r - 1), "index": (r * r + r) // 2}
    out = [Section("orders", _status(orders == expected), orders)]
    out.append(Section("H_dihedral", _status(is_dihedral(M.H) and M.H.issubset(M.G)), {}))
    trans = {"transitive_A": is_transitive(M.A, AJ), "transitive_G": is_transitive(M.G, AJ)}
    out.append(Section("transitivity", _status(all(trans.values())), trans))
    out.append(Section("group_audit", _status(
        audit["G_normal_in_A"] and audit["AmodG_cyclic_order"] == d and audit["stabilizer_bookkeeping"]),
        {"AmodG_cyclic_order": audit["AmodG_cyclic_order"], "G_normal_in_A": audit["G_normal_in_A"]}))
    n_common = common_orbit_count(M.H, M.J, AJ)
    out.append(Section("common_orbits", _status(n_common == 1), {"common_orbits": n_common}))
    out.append(Section("core", _status(core.order == 1), {"core_order": core.order}))
    out.append(Section("primitive_A_on_AJ", _status(pa.primitive), {"primitive_A_on_AJ": pa.primitive}))
    # G on G/H is imprimitive exactly at r = 9
    payload: dict[str, Any] = {"primitive_G_on_GH": pg.primitive}
    if pg.blocks is not None:
        payload["block_shape"] = list(pg.block_shape)
    out.append(Section("primitive_G_on_GH", _status(pg.primitive == (r != 9)), payload))
    return out


SUITES = {
    "build": suite_build,
    "identity": suite_identity,
    "perm": suite_perm,
    "ramify": suite_ramify,
    "monodromy": suite_monodromy,
}


def _run_suite(name, kwargs):
    return SUITES[name](**kwargs)


def run(command: str, p: int, k: int, l: int, a=None, n=(1, 3), jobs: int = 1) -> Report:
    """Validate parameters, run the requested suites, return the report."""
    P = validate_params(p, k, l, a)
    kwargs = {"p": p, "k": k, "l": l, "a": a, "n": tuple(n), "jobs": 1}
    names = list(SUITES) if command == "all" else [command]
    report = Report(command, P.summary())
    if len(names) > 1 and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_suite, names, [kwargs] * len(names)))
    else:
        kwargs["jobs"] = jobs
        results = [_run_suite(name, kwargs) for name in names]
    for name, sections in zip(names, results):
        for s in sections:
            if len(names) > 1:
                s.name = f"{name}.{s.name}"
            report.sections.append(s)
    return report


def _parse_n(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n expects a comma list of integers, got {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("--n values must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="excrat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int, required=True, help="odd prime")
        sp.add_argument("--k", type=int, required=True, help="r = p^(2k)")
        sp.add_argument("--l", type=int, required=True, help="q = p^l")
        sp.add_argument("--a", default=None, help="nonsquare of F_q, comma-separated residues")
        sp.add_argument("--n", type=_parse_n, default=(1, 3), help="extension degrees for perm, e.g. 1,3,5")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--force", action="store_true", help=f"allow r > {MAX_R}")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    r = args.p ** (2 * args.k) if args.p > 1 and args.k > 0 else 0
    if r > MAX_R and not args.force:
        print(f"error: r={r} exceeds {MAX_R}; pass --force to run anyway", file=sys.stderr)
        return EXIT_PARAM
    try:
        report = run(args.command, args.p, args.k, args.l, args.a, args.n, args.jobs)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
