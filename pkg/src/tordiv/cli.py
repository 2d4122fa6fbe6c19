"""Command line front end.

Exit codes: 0 success, 1 computation refused, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__
from .divisors import (
    PathMismatchError,
    UncertifiedError,
    borcherds_divisor,
    inner_ray_N,
    mult_I_omega_affine,
    mult_J,
    serre_relation,
)
from .fan import (
    FanByOrbits,
    FanError,
    admissibility_report,
    cone_dim,
    is_smooth,
    ray_classify,
    stabilizer,
)
from .io import (
    InputError,
    file_hash,
    lattice_from_json,
    load_json,
    load_workspace,
    parse_rational,
    principal_part_from_json,
    rational_json,
    write_json_atomic,
)
from .lattice import LatticeError, theta_coefficients
from .qseries import PrecisionError
from .selftest import format_matrix, run_selftest

EXIT_OK, EXIT_REFUSED, EXIT_INPUT = 0, 1, 2


def _meta(args, inputs: List[str]) -> dict:
    return {
        "tool": "tordiv",
        "version": __version__,
        "seed": args.seed,
        "inputs": {p: file_hash(p) for p in inputs},
    }


def _emit(args, name: str, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        write_json_atomic(Path(args.out) / f"{name}.json", report)


def cmd_lattice_info(args) -> int:
    L = lattice_from_json(load_json(args.path))
    disc = L.discriminant
    report = {
        "meta": _meta(args, [args.path]),
        "label": L.label,
        "rank": L.rank,
        "signature": list(L.signature),
        "even": True,
        "determinant": int(L.determinant),
        "discriminant": {
            "order": disc.order,
            "cyclic_orders": list(disc.cyclic_orders),
            "elements": [{"element": list(g), "q": rational_json(disc.q(g))} for g in disc.elements()],
        },
    }
    if args.precision is not None and L.is_positive_definite():
        th = theta_coefficients(L, args.precision)
        report["theta"] = [
            {"element": list(mu), "terms": [[rational_json(e), c] for e, c in sorted(t.items())]}
            for mu, t in sorted(th.items())
        ]
    _emit(args, "lattice-info", report)
    return EXIT_OK


def cmd_fan_check(args) -> int:
    try:
        data = load_json(args.path)
        if args.word_bound is not None:
            data["word_bound"] = args.word_bound
        fan = FanByOrbits.from_json(data)
    except (FanError, LatticeError, KeyError, TypeError) as exc:
        raise InputError(f"invalid fan file: {exc}") from None
    adm = admissibility_report(fan, samples=args.samples, seed=args.seed)
    rays = ray_classify(fan)
    cones = []
    for c in fan.cone_orbit_reps:
        st = stabilizer(c, fan)
        cones.append(
            {
                "label": c.label,
                "dim": cone_dim(c),
                "smooth": is_smooth(c),
                "stabilizer_order": st.order,
                "stabilizer_complete": st.complete,
            }
        )
    face_stabs = []
    for c in fan.all_cones():
        if 0 < cone_dim(c) < max(cone_dim(r) for r in fan.cone_orbit_reps):
            st = stabilizer(c, fan)
            face_stabs.append({"generators": [list(v) for v in c.generators], "stabilizer_order": st.order})
    report = {
        "meta": _meta(args, [args.path]),
        "word_bound": fan.word_bound,
        "admissibility": adm.to_json(),
        "rays": [r.to_json() for r in rays.rays],
        "cones": cones,
        "faces": face_stabs,
        "ok": adm.ok,
    }
    _emit(args, "fan-check", report)
    return EXIT_OK if adm.ok else EXIT_REFUSED


def _mu(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise InputError(f"--mu must be comma separated integers, got {text!r}") from None


def cmd_multiplicity(args) -> int:
    ws = load_workspace(args.workspace)
    datum = ws.datum
    m = parse_rational(args.m)
    disc = ws.lattice.discriminant
    mu = _mu(args.mu)
    if len(mu) != len(disc.cyclic_orders):
        raise InputError(f"--mu needs {len(disc.cyclic_orders)} coordinates")
    mu = disc.normalize(mu)
    if m <= 0 or (m - disc.q(mu)) % 1:
        raise InputError(f"m = {m} must be positive and congruent to q(mu) = {disc.q(mu)} mod 1")
    out = {"meta": _meta(args, [args.workspace]), "m": rational_json(m), "mu": list(mu), "B_J": [], "B_I_omega": []}
    for r2 in datum.rank2:
        if args.cusp and args.cusp != r2.label:
            continue
        out["B_J"].append({"cusp": r2.label, "mult": rational_json(mult_J(r2, m, mu))})
    for r1 in datum.rank1:
        if args.cusp and args.cusp != r1.label:
            continue
        for omega, lab in datum.inner_rays.get(r1.label, []):
            if args.ray and args.ray != lab:
                continue
            if not datum.cusp_space_trivial:
                raise UncertifiedError("inner-ray multiplicities need cusp_space_trivial in the workspace")
            N = inner_ray_N(r1, omega)
            if not r1.in_L_star_I(mu):
                a, b = Fraction(0), Fraction(0)
            else:
                G = datum.g_plus(N, m + 1)
                a, b = mult_I_omega_affine(r1, omega, m, mu, G, certified=True)
            entry = {"cusp": r1.label, "ray": lab, "omega": list(omega), "N": N, "a": rational_json(a), "b": rational_json(b)}
            if args.c0 is not None:
                entry["mult"] = rational_json(a + b * parse_rational(args.c0))
            out["B_I_omega"].append(entry)
    notes = datum.g_plus_notes() if out["B_I_omega"] else []
    out["note"] = "mult_I_omega = a + b*c0 with c0 the constant term of F_{m,mu}"
    out["assumptions"] = notes
    _emit(args, "multiplicity", out)
    return EXIT_OK


def cmd_borcherds(args) -> int:
    ws = load_workspace(args.workspace)
    disc = ws.lattice.discriminant
    from .divisors import _level

    F = principal_part_from_json(load_json(args.principal_part), step=_level(disc))
    try:
        F.validate(disc, integral=True)
    except ValueError as exc:
        raise InputError(f"invalid principal part: {exc}") from None
    res = borcherds_divisor(ws.datum, F)
    report = {
        "meta": _meta(args, [args.workspace, args.principal_part]),
        "weight": rational_json(res.weight),
        "terms": res.divisor.to_json(),
        "assumptions": res.assumptions,
        "b_j_paths": {k: {p: rational_json(v) for p, v in d.items()} for k, d in res.b_j_paths.items()},
    }
    rel = serre_relation(ws.datum, F)
    report["serre_relation"] = {
        "terms": rel.to_json(),
        "equals_twice_borcherds": rel == res.divisor.scale(2),
    }
    _emit(args, "borcherds", report)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(quick=args.quick, seed=args.seed, perturb_theta=args.perturb_theta)
    print(format_matrix(results))
    if args.out:
        write_json_atomic(
            Path(args.out) / "selftest.json",
            {"meta": _meta(args, []), "results": [r.to_json() for r in results]},
        )
    return EXIT_OK if all(r.passed for r in results) else EXIT_REFUSED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for JSON reports")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--word-bound", type=int, default=None)
    common.add_argument("--precision", type=parse_rational, default=None)
    p = argparse.ArgumentParser(prog="tordiv", description="Toroidal special divisors and Borcherds products.")
    p.add_argument("--version", action="version", version=f"tordiv {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("lattice-info", parents=[common], help="signature and discriminant form")
    s.add_argument("path")
    s.set_defaults(func=cmd_lattice_info)
    s = sub.add_parser("fan-check", parents=[common], help="fan validity, admissibility, rays, stabilizers")
    s.add_argument("path")
    s.set_defaults(func=cmd_fan_check)
    s = sub.add_parser("multiplicity", parents=[common], help="mult_J and mult_I_omega")
    s.add_argument("workspace")
    s.add_argument("--m", required=True)
    s.add_argument("--mu", required=True, help="comma separated coordinates, e.g. 0 or 1,0")
    s.add_argument("--cusp")
    s.add_argument("--ray")
    s.add_argument("--c0", help="constant term of F_{m,mu}")
    s.set_defaults(func=cmd_multiplicity)
    s = sub.add_parser("borcherds", parents=[common], help="divisor of a Borcherds product")
    s.add_argument("workspace")
    s.add_argument("principal_part")
    s.set_defaults(func=cmd_borcherds)
    s = sub.add_parser("selftest", parents=[common], help="oracle suites")
    s.add_argument("--quick", action="store_true", help="skip numeric checks")
    s.add_argument("--perturb-theta", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UncertifiedError, PrecisionError, PathMismatchError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (InputError, LatticeError, FanError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
