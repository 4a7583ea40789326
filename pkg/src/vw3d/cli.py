"""Command-line front end with reproducible JSON reports.

Subcommands expose the four engines: `verlinde` (Bethe pipeline, closed-form
series, equivariant limits, asymptotics), `elliptic` (E(n) q-series and the
gluing comparison), `floer` (graded-series catalog), and `brst` (closure
residuals and sign calibration).  JSON is the stable contract; text output is
cosmetic.  Exit codes: 0 success, 2 precondition violation, 3 numerical
failure, 4 nonzero closure residual under --strict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import bethe, brst, elliptic, floer
from .ratexpr import BranchError, PoleError
from .roots import RootConvergenceError
from .series import SeriesError

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_NUMERICAL = 3
EXIT_RESIDUAL = 4


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output: str = "text"
    order: int = 20
    tolerance: float = 1e-9
    seed: int = 0


def _default_order():
    try:
        return int(os.environ.get("VW3D_ORDER", "20"))
    except ValueError:
        return 20


def _emit(config, report, text_lines):
    if config.output == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _series_text(series):
    return series.to_text()


# ----------------------------------------------------------------------
# verlinde

def _cmd_verlinde(args, config):
    if args.sweep:
        rep = bethe.sweep_report(args.sweep, seed=config.seed)
        report = {"config": _config_dict(config), "mode": "sweep", **rep}
        lines = [f"# stability sweep over {args.sweep} seeded points",
                 f"ok={rep['ok']} max_weyl_residual={rep['max_weyl_residual']:.3e} "
                 f"max_multiset_rel_error={rep['max_multiset_rel_error']:.3e} "
                 f"elapsed={rep['elapsed_s']:.2f}s"]
        return report, lines, EXIT_OK if rep["ok"] else EXIT_NUMERICAL
    if args.limit:
        series = bethe.limit_specialize(args.limit, args.g, order=config.order)
        report = {"config": _config_dict(config), "mode": f"limit-{args.limit}",
                  "g": args.g, "series": series.to_json_dict()}
        return report, ["# limit {} (g={})".format(args.limit, args.g),
                        _series_text(series)], EXIT_OK
    if args.series:
        if args.g == 0:
            series = bethe.grdim_closed_form("S2xS1", order=config.order)
        else:
            series = bethe.grdim_closed_form("SigmaGxS1", order=config.order, g=args.g)
        report = {"config": _config_dict(config), "mode": "series", "g": args.g,
                  "series": series.to_json_dict()}
        return report, ["# graded dimension series (g={})".format(args.g),
                        _series_text(series)], EXIT_OK
    if args.asymptotics:
        rep = bethe.asymptotics_check(args.g, args.a, args.b)
        report = {"config": _config_dict(config), "mode": "asymptotics", **rep}
        lines = [f"# asymptotics g={args.g} path a={args.a} b={args.b}"]
        for e in rep["entries"]:
            lines.append(f"eps={e['eps']:g} value={e['value']:.10g} "
                         f"target={e['target']:.10g} ratio={e['ratio']:.10g}")
        return report, lines, EXIT_OK
    if args.x is None or args.y is None or args.t is None:
        raise ValueError("value mode needs --x --y --t")
    params = {"x": args.x, "y": args.y, "t": args.t}
    rep = bethe.point_report(params, genera=(0, 1, args.g))
    report = {"config": _config_dict(config), "mode": "point", **rep}
    value = rep["verlinde"][str(args.g)]
    lines = ["# Bethe pipeline at x={x} y={y} t={t}".format(**params),
             "roots: " + " ".join(f"{z[0]:+.6f}{z[1]:+.6f}i" for z in rep["roots"]),
             f"admissible: {len(rep['admissible'])}",
             "S^2 values: " + " ".join(f"{v[0]:+.8f}" for v in rep["s_squared"]),
             f"verlinde(g={args.g}) = {value[0]:.12g}" +
             (f" + {value[1]:.3g}i" if abs(value[1]) > 1e-9 else "")]
    return report, lines, EXIT_OK


# ----------------------------------------------------------------------
# elliptic

def _cmd_elliptic(args, config):
    if args.n < 2 or args.n % 2:
        raise ValueError("surface index n must be even and >= 2")
    series = elliptic.z_vw_kahler(elliptic.sw_data_en(args.n), order=config.order)
    report = {"config": _config_dict(config), "surface": f"E({args.n})",
              "n": args.n, "order": config.order, "series": series.to_json_dict()}
    lines = [f"# Z_VW(E({args.n})) through q^{config.order}", _series_text(series)]
    if args.gluing:
        gl = elliptic.gluing_check(args.n, order=config.order)
        report["gluing"] = gl
        lines.append(f"gluing: equal={gl['equal']} "
                     f"first_differing_exponent={gl['first_differing_exponent']}")
    return report, lines, EXIT_OK


# ----------------------------------------------------------------------
# floer

def _parse_hf(text):
    if text in ("S2xS1", "s2xs1"):
        return ("S2xS1", {})
    if text.lower().startswith("lens:"):
        return ("lens", {"p": int(text.split(":", 1)[1])})
    if text.lower().startswith("sigma:"):
        g, h = text.split(":", 1)[1].split(",")
        return ("SigmaGxS1", {"g": int(g), "h": int(h)})
    raise ValueError(f"unknown manifold {text!r} "
                     "(use S2xS1, lens:p, or sigma:g,h)")


def _cmd_floer(args, config):
    if args.molien:
        series = floer.molien_su2_adjoint(order=config.order)
        report = {"config": _config_dict(config), "manifold": "S3 local observables",
                  "series": series.to_json_dict()}
        dims = [int(str(series.coefficient({"t": n}).re)) for n in range(config.order + 1)]
        return report, ["# invariant dimensions of Sym^n(adjoint)",
                        ",".join(str(d) for d in dims)], EXIT_OK
    if args.hn is not None:
        coeffs = floer.hn_poincare(args.hn)
        report = {"config": _config_dict(config), "manifold": f"Bun_SL2(Sigma_{args.hn})",
                  "coefficients": [str(c) for c in coeffs]}
        return report, ["# rank-2 moduli Poincare polynomial",
                        " + ".join(f"{c}t^{k}" for k, c in enumerate(coeffs) if c)], EXIT_OK
    if args.brieskorn:
        datum = floer.brieskorn(args.brieskorn)
        report = {"config": _config_dict(config), "manifold": datum.name,
                  "instanton_ranks": {str(k): v for k, v in datum.instanton_ranks.items()},
                  "hp_rank": datum.hp_rank,
                  "flat_connections": list(datum.flat_connection_counts)}
        lines = [f"# {datum.name}", f"instanton ranks: {datum.instanton_ranks}",
                 f"sheaf-model rank: {datum.hp_rank}"]
        if args.conjecture:
            conj = floer.conjecture_series(args.brieskorn, order=config.order)
            report["conjecture"] = {"series": conj["series"].to_json_dict(),
                                    "conjectural": True}
            lines += ["conjectural graded dimension:", _series_text(conj["series"])]
        return report, lines, EXIT_OK
    if args.hf:
        kind, kwargs = _parse_hf(args.hf)
        result = floer.hf_plus(kind, order=config.order, **kwargs)
        report = {"config": _config_dict(config), "manifold": result.manifold,
                  "series": result.series.to_json_dict(),
                  "rank": result.rank,
                  "relative_grading": result.relative_grading,
                  "spin_c_count": result.spin_c_count}
        lines = [f"# HF+ of {result.manifold}"
                 + (" (relative grading)" if result.relative_grading else ""),
                 _series_text(result.series)]
        if result.spin_c_count is not None and result.spin_c_count > 1:
            lines.append(f"spin-c structures: {result.spin_c_count} "
                         "(series shown per structure)")
        if result.rank is not None:
            lines.append(f"total rank: {result.rank}")
        return report, lines, EXIT_OK
    raise ValueError("choose one of --hf/--molien/--hn/--brieskorn")


# ----------------------------------------------------------------------
# brst

def _cmd_brst(args, config):
    table = brst.get_table(args.table)
    exit_code = EXIT_OK
    report = {"config": _config_dict(config), "table": args.table, "checks": []}
    lines = [f"# closure checks on table {args.table}"]
    if args.calibrate:
        conv, cal = brst.calibrate_signs(args.table)
        report["calibration"] = cal
        lines.append(f"calibration: calibrated={cal['calibrated']} stage={cal['stage']}")
        if cal["failing_rules"]:
            lines.append("failing rules: " + ", ".join(cal["failing_rules"]))
    else:
        conv = brst.default_convention(table)
    any_nonzero = False
    for state_index in range(args.states):
        state = brst.random_state(table, seed=config.seed + state_index)
        if args.check in ("Q2", "all"):
            param = None if table.algebra == "u1" else "phi"
            if ("Q", "phi") in table.rules and table.fields["phi"].indices == 0:
                rep = brst.q_squared_residual(state, "Q", conv, param_field=param)
                entry = _residual_entry("Q2", state_index, rep)
                report["checks"].append(entry)
                any_nonzero |= not entry["exact_zero"]
        if args.check in ("closure", "all"):
            for pair in brst.closure_pairs(table):
                if isinstance(pair[0], str) and pair == ("Q", "Q"):
                    continue  # covered by Q2
                rep = brst.check_closure(state, pair, conv)
                rep["state"] = state_index
                report["checks"].append(rep)
                any_nonzero |= not rep["exact_zero"]
        if args.check in ("twistor", "all") and "Qbar" in table.families:
            rep = brst.check_twistor(state, (1, 2), (3, 1), conv)
            rep["state"] = state_index
            report["checks"].append(rep)
            any_nonzero |= not rep["exact_zero"]
    for entry in report["checks"]:
        tag = entry.get("pair") or entry.get("kind") or "twistor"
        lines.append(f"state {entry.get('state', 0)} {tag}: "
                     f"exact_zero={entry['exact_zero']}")
    if any_nonzero and args.strict:
        exit_code = EXIT_RESIDUAL
    return report, lines, exit_code


def _residual_entry(kind, state_index, residuals):
    per_field = {}
    for (fname, slot, comp), res in residuals.items():
        label = fname + ("" if not slot else str(list(slot)))
        per_field[label] = max(per_field.get(label, 0.0), res.max_abs())
    return {"kind": kind, "state": state_index,
            "residual_max": per_field,
            "exact_zero": all(v == 0.0 for v in per_field.values()),
            "failing_fields": sorted(k for k, v in per_field.items() if v > 0)}


# ----------------------------------------------------------------------
# top level

def _config_dict(config):
    return {"command": config.command, "order": config.order,
            "tolerance": config.tolerance, "seed": config.seed,
            "parameters": config.parameters}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--order", type=int, default=None,
                        help="series truncation order (default 20 or $VW3D_ORDER)")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    parser = argparse.ArgumentParser(
        prog="vw3d",
        description="graded dimensions of three-manifold gauge-theory state "
                    "spaces, elliptic-surface q-series, and BRST checks")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verlinde", parents=[common],
                        help="Bethe pipeline and closed forms")
    pv.add_argument("--g", type=int, default=0)
    pv.add_argument("--x", type=float)
    pv.add_argument("--y", type=float)
    pv.add_argument("--t", type=float)
    pv.add_argument("--series", action="store_true")
    pv.add_argument("--sweep", type=int, metavar="N",
                    help="stability sweep over N seeded parameter points")
    pv.add_argument("--limit", choices=("R2", "R0"))
    pv.add_argument("--asymptotics", action="store_true")
    pv.add_argument("--a", type=float, default=-2.0)
    pv.add_argument("--b", type=float, default=-1.0)

    pe = sub.add_parser("elliptic", parents=[common], help="E(n) partition q-series")
    pe.add_argument("--n", type=int, required=True)
    pe.add_argument("--gluing", action="store_true")

    pf = sub.add_parser("floer", parents=[common], help="graded series catalog")
    pf.add_argument("--hf")
    pf.add_argument("--molien", action="store_true")
    pf.add_argument("--hn", type=int)
    pf.add_argument("--brieskorn", choices=("P", "Sigma237"))
    pf.add_argument("--conjecture", action="store_true")

    pb = sub.add_parser("brst", parents=[common], help="closure residual reports")
    pb.add_argument("--table", required=True,
                    choices=("abelian", "nonabelian", "covariant", "threed"))
    pb.add_argument("--check", default="all",
                    choices=("Q2", "closure", "twistor", "all"))
    pb.add_argument("--states", type=int, default=3)
    pb.add_argument("--strict", action="store_true")
    pb.add_argument("--calibrate", action="store_true")
    return parser


_HANDLERS = {
    "verlinde": _cmd_verlinde,
    "elliptic": _cmd_elliptic,
    "floer": _cmd_floer,
    "brst": _cmd_brst,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        command=args.command,
        parameters={k: v for k, v in sorted(vars(args).items())
                    if k not in ("command", "json") and v is not None},
        output="json" if args.json else "text",
        order=args.order if args.order is not None else _default_order(),
        tolerance=args.tol,
        seed=args.seed,
    )
    try:
        report, lines, code = _HANDLERS[args.command](args, config)
    except (ValueError, KeyError, brst.RuleMissingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (PoleError, BranchError, RootConvergenceError, SeriesError,
            bethe.DegenerateParameterError, bethe.ClassAssignmentError,
            ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(config, report, lines)
    return code


if __name__ == "__main__":
    sys.exit(main())
