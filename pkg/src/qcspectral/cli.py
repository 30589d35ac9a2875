"""Command-line front end.

Subcommands: ``catalog``, ``bound``, ``quasidisc``, ``norm``, ``eigen``,
``verify``.  Every run writes a JSON document holding the effective
configuration and the result; ``--from-json`` re-runs a saved document and
``--config`` reads ``key = value`` defaults.

Exit codes: 0 success or pass, 1 verification failure, 2 usage error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import bounds, discquad, eigsolver, quasidisc
from . import maps as _maps
from . import mesh as _mesh
from . import plot, verify

OUTPUT_DIR_ENV = "QCSPECTRAL_OUTPUT_DIR"
OUTPUT_KEYS = ("json", "csv", "svg", "out_dir", "config", "from_json", "mesh_out",
               "field_out", "verbose")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3

logger = logging.getLogger("qcspectral")


class UsageError(Exception):
    pass


def _add_output(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--json", help="JSON output path (default: <out-dir>/qcspectral-<command>.json)")
    g.add_argument("--out-dir", help=f"output directory (default: ${OUTPUT_DIR_ENV} or .)")
    g.add_argument("--csv", help="also write a CSV table")
    g.add_argument("--svg", help="also write an SVG plot")
    g.add_argument("--config", help="key = value file with default options")
    g.add_argument("--from-json", help="re-run the configuration stored in a JSON output")
    g.add_argument("--verbose", default="0", help="1 for debug logging")


def _add_quad(p):
    p.add_argument("--quad-radial", type=int, default=discquad.DEFAULT_SPEC.radial_nodes)
    p.add_argument("--quad-angular", type=int, default=discquad.DEFAULT_SPEC.angular_nodes)


def _add_solver(p, default_p=None):
    p.add_argument("--domain", default="identity", help="map record, e.g. ellipse-shear:a=0.5")
    p.add_argument("--p", type=float, required=default_p is None, default=default_p)
    p.add_argument("--rings", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--grading", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcspectral", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the map kinds")
    _add_output(p)

    p = sub.add_parser("bound", help="upper bound on 1/mu_p for a catalog domain")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--beta", default="inf")
    p.add_argument("--domain", default="identity")
    p.add_argument("--variant", default="auto",
                   choices=["auto", "intro-form", "beta-regular", "inf-regular",
                            "measure-preserving"])
    p.add_argument("--K", type=float, default=None, help="override the map's K")
    _add_quad(p)
    _add_output(p)

    p = sub.add_parser("quasidisc", help="M_p(K) and the quasidisc lower bound")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--area", type=float, default=None)
    _add_output(p)

    p = sub.add_parser("norm", help="Jacobian norms and image area by quadrature")
    p.add_argument("--domain", default="identity")
    p.add_argument("--beta", default="1")
    _add_quad(p)
    _add_output(p)

    p = sub.add_parser("eigen", help="numerical first non-trivial Neumann eigenvalue")
    _add_solver(p, default_p=2.0)
    p.add_argument("--study", default=None, help="comma separated ring counts")
    p.add_argument("--mesh-out", default=None)
    p.add_argument("--field-out", default=None)
    _add_output(p)

    p = sub.add_parser("verify", help="check a theoretical bound against the solver")
    _add_solver(p)
    p.add_argument("--variant", default="auto", choices=list(verify.VERIFY_VARIANTS))
    p.add_argument("--beta", default="inf")
    _add_output(p)
    return parser


# ---------------------------------------------------------------------------
# configuration plumbing


def _read_config(path: str) -> List[str]:
    cp = configparser.ConfigParser()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    cp.read_string("[run]\n" + text)
    items = dict(cp["run"])
    argv = []
    command = items.pop("command", None)
    if command:
        argv.append(command)
    for key, value in items.items():
        argv += ["--" + key.replace("_", "-"), value]
    return argv


def _config_argv(config: Dict) -> List[str]:
    argv = [config["command"]]
    for key, value in sorted(config.items()):
        if key == "command" or value is None:
            continue
        argv += ["--" + key.replace("_", "-"), str(value)]
    return argv


def _resolve_argv(argv: List[str]) -> List[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("--from-json")
    known, rest = pre.parse_known_args(argv)
    if known.from_json:
        try:
            saved = json.loads(Path(known.from_json).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {known.from_json}: {exc}") from None
        base = _config_argv(saved["config"])
        # only output options may be given alongside --from-json
        outputs = [a for a in rest if a not in ("catalog", "bound", "quasidisc", "norm",
                                                 "eigen", "verify")]
        return base[:1] + outputs + base[1:]
    if known.config:
        base = _read_config(known.config)
        if rest and not rest[0].startswith("-"):
            command, overrides = rest[0], rest[1:]
            base = [b for b in base if b != command]
            if base and not base[0].startswith("-"):
                base = base[1:]
        elif base and not base[0].startswith("-"):
            command, overrides, base = base[0], rest, base[1:]
        else:
            raise UsageError("no subcommand given")
        return [command] + base + overrides
    return argv


def run_config(args: argparse.Namespace) -> Dict:
    cfg = {k: v for k, v in vars(args).items() if k not in OUTPUT_KEYS}
    return dict(sorted(cfg.items()))


def _domain(record: str):
    return _maps.parse_map(record)


def _quad_spec(args) -> discquad.QuadratureSpec:
    return discquad.QuadratureSpec(args.quad_radial, args.quad_angular)


# ---------------------------------------------------------------------------
# subcommands; each returns (document, exit code, artifacts)


def cmd_catalog(args):
    return {"maps": _maps.catalog()}, EXIT_OK, {}


def cmd_bound(args):
    m = _domain(args.domain)
    info = _maps.map_info(m)
    K = args.K if args.K is not None else info.K
    beta = bounds.parse_beta(args.beta)
    spec = _quad_spec(args)
    area_q = discquad.integrate_disc_checked(lambda z: np.abs(_maps.jacobian(m, z)), spec)
    quad = {"image_area": area_q.to_dict()}
    variant = args.variant
    if variant == "auto":
        variant = "measure-preserving" if m.measure_preserving else (
            "inf-regular" if math.isinf(beta) else "beta-regular")
    if variant == "intro-form":
        if not m.measure_preserving:
            raise bounds.ParameterError(f"{m.kind} is not measure preserving")
        rep = bounds.bound_intro_form(args.p, beta, K)
    elif variant == "measure-preserving":
        if not m.measure_preserving:
            raise bounds.ParameterError(f"{m.kind} is not measure preserving")
        rep = bounds.bound_measure_preserving(args.p, beta, K)
    elif variant == "inf-regular":
        sup = discquad.jacobian_sup(m, spec)
        quad["jacobian_sup"] = {"value": sup.value, "analytic": sup.analytic}
        rep = bounds.bound_inf_regular(args.p, K, area_q.value, sup.value)
    else:
        if math.isinf(beta):
            raise bounds.ParameterError("beta-regular variant needs a finite --beta")
        jn = discquad.integrate_disc_checked(lambda z: np.abs(_maps.jacobian(m, z)) ** beta, spec)
        quad["jacobian_power_integral"] = jn.to_dict()
        rep = bounds.bound_beta_regular(args.p, beta, K, area_q.value, jn.value ** (1 / beta))
    doc = {"map": m.to_dict(), "K_source": info.K_source if args.K is None else "override",
           "result": rep.to_dict(), "quadrature": quad}
    return doc, EXIT_OK, {"map": m}


def cmd_quasidisc(args):
    c = quasidisc.mp_constant(args.K, args.p)
    doc = {"result": c.to_dict()}
    if args.area is not None:
        mu, via = quasidisc.quasidisc_lower_bound(args.K, args.p, args.area, c)
        doc["lower_bound"] = {"area": args.area, "mu_lower": mu.to_dict(),
                              "mu_lower_via_radius": via.to_dict(),
                              "mu_lower_decimal": mu.decimal()}
    return doc, EXIT_OK, {}


def cmd_norm(args):
    m = _domain(args.domain)
    spec = _quad_spec(args)
    beta = bounds.parse_beta(args.beta)
    info = _maps.map_info(m)
    area = discquad.integrate_disc_checked(lambda z: np.abs(_maps.jacobian(m, z)), spec)
    doc = {"map": m.to_dict(), "analytic_area": info.area, "image_area": area.value,
           "quadrature": {"image_area": area.to_dict()}}
    if math.isinf(beta):
        sup = discquad.jacobian_sup(m, spec)
        doc["jacobian_sup"] = {"value": sup.value, "analytic": sup.analytic,
                               "lower_estimate": sup.lower_estimate}
    else:
        jn = discquad.integrate_disc_checked(lambda z: np.abs(_maps.jacobian(m, z)) ** beta, spec)
        doc["beta"] = beta
        doc["jacobian_norm"] = jn.value ** (1.0 / beta)
        doc["quadrature"]["jacobian_power_integral"] = jn.to_dict()
    return doc, EXIT_OK, {"map": m}


def _solver_opts(args) -> eigsolver.SolverOptions:
    return eigsolver.SolverOptions(tolerance=args.tol, max_iter=args.max_iter, seed=args.seed)


def cmd_eigen(args):
    m = _domain(args.domain)
    if args.p < 2:
        raise bounds.ParameterError("eigen needs p >= 2")
    opts = _solver_opts(args)
    mesh, res = eigsolver.solve_domain(m, args.p, args.rings, opts, args.grading)
    doc = {"map": m.to_dict(), "p": args.p,
           "mesh": {"rings": args.rings, "vertices": mesh.n_vertices,
                    "triangles": len(mesh.triangles), "area": mesh.area()},
           "result": res.summary()}
    arts = {"map": m, "mesh": mesh, "field": res.field}
    if args.study:
        rings = [int(s) for s in args.study.split(",")]
        study = eigsolver.convergence_study(m, args.p, rings, opts, args.grading)
        doc["convergence_study"] = study.to_dict()
        arts["study"] = study
    code = EXIT_OK if res.converged else EXIT_NONCONVERGED
    return doc, code, arts


def cmd_verify(args):
    m = _domain(args.domain)
    opts = _solver_opts(args)
    variant = verify.resolve_variant(m, args.variant, args.beta)
    if variant != "convex" and not args.p > 2:
        raise bounds.ParameterError("bound variants need p > 2")
    # bound first so parameter errors surface before the solve
    verify.theoretical_lower(m, args.p, variant, args.beta)
    mesh, res = eigsolver.solve_domain(m, args.p, args.rings, opts, args.grading)
    rep = verify.verify_bound(m, args.p, variant, args.beta, eigen=res)
    code = {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(rep.status, EXIT_NONCONVERGED)
    return {"result": rep.to_dict()}, code, {"map": m, "mesh": mesh, "field": res.field,
                                             "report": rep}


COMMANDS = {"catalog": cmd_catalog, "bound": cmd_bound, "quasidisc": cmd_quasidisc,
            "norm": cmd_norm, "eigen": cmd_eigen, "verify": cmd_verify}


def _write_csv(path, command, doc, arts):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if "study" in arts:
            s = arts["study"]
            w.writerow(["rings", "h", "mu"])
            w.writerows(zip(s.rings, s.h, s.mu))
        elif "field" in arts:
            w.writerow(["x", "y", "u"])
            for (x, y), u in zip(arts["mesh"].vertices, arts["field"]):
                w.writerow([repr(float(x)), repr(float(y)), repr(float(u))])
        elif command == "catalog":
            w.writerow(["kind", "K", "area", "measure_preserving"])
            for e in doc["maps"]:
                w.writerow([e["kind"], e["K"], e["area"], e["measure_preserving"]])
        else:
            flat = _flatten(doc)
            w.writerow(list(flat))
            w.writerow(list(flat.values()))


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif not isinstance(v, list):
            out[key] = v
    return out


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def run(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _resolve_argv(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose == "1" else logging.WARNING)
    try:
        doc, code, arts = COMMANDS[args.command](args)
    except (ValueError, _maps.MapError, _mesh.MeshError, UsageError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE

    document = {"command": args.command, "config": run_config(args)}
    document.update(doc)
    text = json.dumps(document, indent=2, sort_keys=True, default=_json_default)
    out_dir = Path(args.out_dir or os.environ.get(OUTPUT_DIR_ENV, "."))
    json_path = Path(args.json) if args.json else out_dir / f"qcspectral-{args.command}.json"
    try:
        json_path.parent.mkdir(parents=True, exist_ok=True)
        json_path.write_text(text + "\n")
        if args.csv:
            _write_csv(args.csv, args.command, doc, arts)
        if args.svg:
            if arts.get("map") is None and arts.get("mesh") is None:
                raise UsageError(f"--svg has nothing to draw for {args.command}")
            plot.emit_plot(args.svg, m=arts.get("map"), mesh=arts.get("mesh"),
                           field=arts.get("field"))
        if getattr(args, "mesh_out", None) and "mesh" in arts:
            Path(args.mesh_out).write_text(arts["mesh"].to_text())
        if getattr(args, "field_out", None) and "field" in arts:
            Path(args.field_out).write_text(
                "".join(f"{i} {float(u)!r}\n" for i, u in enumerate(arts["field"])))
    except (OSError, UsageError) as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
