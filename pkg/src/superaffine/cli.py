"""Command-line front end.

Exit codes: 0 when every suite passes, 1 on a verification failure, 2 on usage
or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional

from . import algebra, cohomology, filtration, modules, operators
from .exact import format_scalar, scalar
from .gspec import JacobiViolation, ParseError, resolve_gspec
from .reports import Report, jsonable

NOTICES = {
    "qg-central": "central term of the odd-odd bracket placed on [Q_i, G_j]; [G_i, G_j] = 0",
    "d-xtxi": "bracket of (t-1)^k d_i with x ⊗ (t-1)^l t^j xi includes the j x ⊗ (t-1)^{k+l} t^{i+j} xi term",
    "x-xi-exponent": "second term of the x ⊗ t^i xi action uses t^i (it vanishes because x ⊗ t^i xi lies in a_1)",
    "g-lambda": "G_i action uses xi (lambda t^i a + d_i(a))",
    "xi-terms": "h_i and G_i actions carry t^i xi a ⊗ (Q_i - Q_0) v and t^i xi a ⊗ (d_i - d_0) v",
    "dbar-f": "dbar_i = d_i + i h_i / 2",
}


class UsageError(ValueError):
    pass


def _variant(args) -> algebra.AlgebraVariant:
    g = resolve_gspec(args.g)
    tag = algebra.VariantTag(args.variant)
    if tag in (algebra.VariantTag.L, algebra.VariantTag.L_HAT, algebra.VariantTag.FRAK_L) and g is None:
        raise UsageError(f"variant {tag.value} needs --g")
    return algebra.make_variant(tag, g)


def _window(args, minimum: int = 1) -> int:
    if args.window < minimum:
        raise UsageError(f"window must be >= {minimum}, got {args.window}")
    return args.window


def cmd_verify(args) -> List[Report]:
    window = _window(args)
    v = _variant(args)
    suites = [
        algebra.verify_jacobi(v, window),
        algebra.verify_super_antisymmetry(v, window),
        algebra.verify_grading(v, window),
    ]
    centerless = v.centerless()
    suites.append(filtration.relation_sweep(centerless))
    if algebra.Family.H in centerless.families and algebra.Family.Q in centerless.families:
        suites.append(filtration.verify_filtration_laws(centerless, args.max_k, window))
        suites.append(filtration.verify_quotients(centerless))
    return suites


def cmd_cohomology(args) -> List[Report]:
    window = _window(args, cohomology.MIN_WINDOW)
    v = _variant(args)
    report = Report("h2", "dim H^2 = dim Z^2 / B^2 for degree-zero cocycles", certified_window=window)
    try:
        sol = cohomology.solve_h2(v, window)
    except cohomology.WindowUnstable as exc:
        report.fail(reason="window unstable", window_dimensions={str(k): d for k, d in exc.dims.items()})
        return [report]
    report.details.update(sol.to_dict())
    return [report]


def cmd_module(args) -> List[Report]:
    window = _window(args)
    g = resolve_gspec(args.g)
    lam = scalar(args.lam)
    vspec = modules.resolve_vspec(args.v, g)
    m = modules.TensorModule(lam, vspec)
    sample = "all" if args.sample is None else (args.seed, args.sample)
    suites = [
        modules.verify_module_axioms(m, window, guard=args.guard, sample=sample),
        modules.weight_report(m, window),
    ]
    if args.check_omega:
        k_range = s_range = range(-2, 3)
        limit = 6
        guard = 4 + limit
        omega_window = guard + window
        found = operators.minimal_annihilating_m(m, k_range, s_range, omega_window, limit)
        rep = Report(
            "differentiator-search",
            "smallest m with Omega^{(m)}_{k,s} = sum_i (-1)^i C(m,i) d_{k-i} d_{s+i} annihilating M",
            certified_window=omega_window,
        )
        suites.append(rep)
        if isinstance(found, operators.NotFoundUpTo):
            rep.fail(reason=f"not found up to {found.limit}", witness=found.witness)
        else:
            rep.details["minimal_m"] = found[0]
            rep.details["witness_below"] = found[1]
            suites.append(operators.verify_lemma52(m, found[0] + 2, omega_window))
    return suites


def cmd_filtration(args) -> List[Report]:
    window = _window(args)
    g = resolve_gspec(args.g)
    v = algebra.make_variant("l" if g is not None else "w-super", g)
    if args.max_k < 1:
        raise UsageError("max-k must be >= 1")
    return [
        filtration.verify_filtration_laws(v, args.max_k, window),
        filtration.verify_quotients(v),
    ]


def cmd_lemma22(args) -> List[Report]:
    g = resolve_gspec(args.g)
    v = algebra.make_variant("l" if g is not None else "w-super", g)
    relations = filtration.LITERAL_RELATIONS if args.literal else filtration.RELATIONS
    return [
        filtration.relation_sweep(
            v,
            kl_range=range(0, args.kl_max + 1),
            ij_range=range(-args.ij_max, args.ij_max + 1),
            relations=relations,
        )
    ]


def cmd_dbar(args) -> List[Report]:
    if args.radius < 3:
        raise UsageError("radius must be >= 3 to fit the central cubic")
    suites = []
    closure = Report(
        "dbar-closure",
        "non-central part of [dbar_i, dbar_j] equals (j-i) dbar_{i+j}",
        certified_window=args.radius,
    )
    for i in range(-args.radius, args.radius + 1):
        for j in range(-args.radius, args.radius + 1):
            r = operators.dbar_bracket_check(i, j)
            if not r.ok:
                closure.fail(**r.witnesses[0])
    suites.append(closure)
    suites.append(operators.dbar_central_cubic(args.radius))
    return suites


COMMANDS: Dict[str, Callable] = {
    "verify": cmd_verify,
    "cohomology": cmd_cohomology,
    "module": cmd_module,
    "filtration": cmd_filtration,
    "lemma22": cmd_lemma22,
    "dbar": cmd_dbar,
}

COMMAND_NOTICES = {
    "verify": ["qg-central", "d-xtxi"],
    "cohomology": ["qg-central"],
    "module": ["x-xi-exponent", "g-lambda", "xi-terms"],
    "filtration": ["d-xtxi"],
    "lemma22": ["d-xtxi"],
    "dbar": ["qg-central", "dbar-f"],
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superaffine", description="Exact checks for the super affine-Virasoro algebra.")
    sub = p.add_subparsers(dest="command", required=True)
    variants = [t.value for t in algebra.VariantTag]

    def common(sp, window_default=None):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if window_default is not None:
            sp.add_argument("--window", type=int, default=window_default)

    sp = sub.add_parser("verify", help="Jacobi, antisymmetry, relation and filtration suites")
    sp.add_argument("--variant", choices=variants, default="l-hat")
    sp.add_argument("--g", default="sl2")
    sp.add_argument("--max-k", type=int, default=3)
    common(sp, 4)

    sp = sub.add_parser("cohomology", help="degree-zero second cohomology")
    sp.add_argument("--variant", choices=variants, default="l")
    sp.add_argument("--g", default="sl2")
    common(sp, 4)

    sp = sub.add_parser("module", help="build and check Gamma(lambda, V)")
    sp.add_argument("--lambda", dest="lam", default="1/2")
    sp.add_argument("--v", default="trivial")
    sp.add_argument("--g", default="sl2")
    sp.add_argument("--guard", type=int, default=2)
    sp.add_argument("--check-omega", action="store_true")
    sp.add_argument("--sample", type=int, default=None, help="check this many random algebra pairs")
    sp.add_argument("--seed", type=int, default=0)
    common(sp, 3)

    sp = sub.add_parser("filtration", help="filtration laws and quotient tables")
    sp.add_argument("--g", default="sl2")
    sp.add_argument("--max-k", type=int, default=3)
    common(sp, 6)

    sp = sub.add_parser("lemma22", help="closed-form (t-1)-power bracket relations")
    sp.add_argument("--g", default="sl2")
    sp.add_argument("--kl-max", type=int, default=3)
    sp.add_argument("--ij-max", type=int, default=3)
    sp.add_argument("--literal", action="store_true", help="use the relation list without the missing d-xtxi term")
    common(sp)

    sp = sub.add_parser("dbar", help="shifted Virasoro generators")
    sp.add_argument("--radius", type=int, default=6)
    common(sp)
    return p


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("format", "command")}
    if "lam" in cfg:
        cfg["lambda"] = format_scalar(scalar(cfg.pop("lam")))
    return cfg


def render_text(command: str, suites: List[Report], notices: List[str]) -> str:
    lines = []
    for r in suites:
        lines.append(r.summary())
        for key, value in r.details.items():
            if key in ("representatives", "mDelta_table"):
                continue
            lines.append(f"    {key}: {json.dumps(jsonable(value), sort_keys=True)}")
        if r.details.get("representatives"):
            for n, rep in enumerate(r.details["representatives"]):
                lines.append(f"    representative {n}:")
                for a, b, c in rep:
                    lines.append(f"      alpha({a}, {b}) = {format_scalar(c)}")
        for w in r.witnesses:
            lines.append(f"    witness: {json.dumps(jsonable(w), sort_keys=True)}")
    for n in notices:
        lines.append(f"note: {n}")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        suites = COMMANDS[args.command](args)
    except (UsageError, ParseError, JacobiViolation, modules.InvalidVSpec, cohomology.IllegalVariant,
            filtration.WindowTooSmall, algebra.IllegalFamily, ValueError, TypeError) as exc:
        detail = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, modules.InvalidVSpec) and exc.pair:
            detail["pair"] = list(exc.pair)
        if getattr(args, "format", "text") == "json":
            print(json.dumps({"command": args.command, "error": detail}, sort_keys=True, indent=2))
        else:
            print(f"error: {detail['error']}: {detail['message']}", file=sys.stderr)
        return 2
    notices = [NOTICES[k] for k in COMMAND_NOTICES[args.command]]
    if args.format == "json":
        doc = {
            "command": args.command,
            "config": _config(args),
            "suites": [r.to_dict() for r in suites],
            "seed": getattr(args, "seed", None),
            "notices": notices,
        }
        print(json.dumps(jsonable(doc), sort_keys=True, indent=2))
    else:
        print(render_text(args.command, suites, notices))
    return 0 if all(r.ok for r in suites) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
