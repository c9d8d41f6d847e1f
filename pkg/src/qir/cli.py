"""Command-line front end.

Subcommands:

    qir saturate --d 2                  reproduce the two saturating cases
    qir verify   --config c.cfg --out results/    run a campaign
    qir verify   --replay argmin.json   re-evaluate a stored extremal point
    qir sweep    --state bell:2 --x comp:2 --y fourier:2 --grid 0:1:0.05 --out t.csv
    qir minimize --relation eq11 --dA 2 --dB 2 --restarts 50 --seed 7

Exit codes: 0 success, 1 tolerance violation, 2 usage/config error,
3 theorem-violation flag. QIR_TOL overrides the default tolerance.
Printed numbers are nats with 9 decimals; --bits converts the display
(never stored files) to bits.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from . import __version__, serialize
from .entropies import profile, uncertainty, irreality
from .errors import ConfigError, QirError, TheoremViolation
from .explore import (
    CampaignConfig,
    minimize_slack,
    monitoring_sweep,
    evaluate_point,
    run_campaign_records,
)
from .relations import DEFAULT_TOL, RELATIONS, evaluate_relations, mu_bound, report_slack
from .serialize import fmt_nats
from .states import (
    basis_from_token,
    computational_basis,
    fourier_basis,
    max_entangled,
    max_mixed,
    state_from_token,
)

SATURATE_EPS = 0.5  # monitoring strength used for the eq16 row of `saturate`


def resolve_tol(explicit: float | None) -> float:
    """Tolerance precedence: command line, then QIR_TOL, then the default."""
    if explicit is not None:
        if not explicit > 0:
            raise ConfigError(f"tolerance must be positive, got {explicit}")
        return explicit
    env = os.environ.get("QIR_TOL")
    if env is not None:
        try:
            value = float(env)
        except ValueError as exc:
            raise ConfigError(f"QIR_TOL={env!r} is not a decimal number") from exc
        if not value > 0:
            raise ConfigError(f"QIR_TOL must be positive, got {env!r}")
        return value
    return DEFAULT_TOL


@dataclass
class RunManifest:
    """Record of one command invocation; every output file points back here."""

    command: str
    config: dict
    seed: int | None
    version: str
    started: str
    finished: str = ""
    outputs: list | None = None

    def finish(self) -> None:
        self.finished = _now()

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
            "outputs": self.outputs or [],
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _manifest(command: str, config: dict, seed: int | None) -> RunManifest:
    return RunManifest(
        command=command, config=config, seed=seed, version=__version__, started=_now()
    )


# ---------------------------------------------------------------- saturate


def _print_case(label, state, x, y, tol, eps, bits):
    unit = math.log(2.0) if bits else 1.0

    def fmt(v):
        return fmt_nats(v / unit)

    q = mu_bound(x, y)
    prof_x = profile(x, state)
    h_y_given_b = uncertainty(y, state)
    irr_y = irreality(y, state)
    print(f"case {label}: q = {fmt(q)}")
    print(
        f"  H(AB) = {fmt(prof_x.h_ab)}  H(B) = {fmt(prof_x.h_b)}"
        f"  H(A|B) = {fmt(prof_x.h_a_given_b)}"
    )
    print(f"  H(X|B) = {fmt(prof_x.h_x_given_b)}  H(Y|B) = {fmt(h_y_given_b)}")
    print(f"  irr(X) = {fmt(prof_x.irreality_x)}  irr(Y) = {fmt(irr_y)}")
    reports = evaluate_relations(tuple(RELATIONS), x, y, state, eps=eps, tol=tol)
    ok = True
    for name, report in reports.items():
        if RELATIONS[name].kind == "identity":
            verdict = "ok" if report.holds else "FAIL"
            print(f"  {name:<5} residual {fmt_nats(report.residual)}  {verdict}")
            ok = ok and report.holds
        else:
            verdict = "ok" if report.satisfied else "FAIL"
            print(
                f"  {name:<5} lhs {fmt(report.lhs)}  rhs {fmt(report.rhs)}"
                f"  slack {fmt(report.slack)}  {verdict}"
            )
            ok = ok and report.satisfied
    saturated = abs(reports["eq11"].slack) <= tol
    print(f"  eq11 saturated: {'yes' if saturated else 'NO'}")
    return ok, saturated


def cmd_saturate(args) -> int:
    tol = resolve_tol(args.tol)
    d = args.d
    if d < 2:
        raise ConfigError(f"--d must be >= 2, got {d}")
    x = computational_basis(d)
    y = fourier_basis(d)
    ok_a, sat_a = _print_case(
        f"A (maximally entangled, d={d})", max_entangled(d), x, y, tol, SATURATE_EPS, args.bits
    )
    ok_b, sat_b = _print_case(
        f"B (maximally mixed, d={d})", max_mixed(d, d), x, y, tol, SATURATE_EPS, args.bits
    )
    return 0 if (ok_a and ok_b and sat_a and sat_b) else 1


# ------------------------------------------------------------------ verify


def parse_campaign_config(path: str, tol_override: float | None) -> CampaignConfig:
    """Read the flat key-value campaign format (one [campaign] section)."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh, source=path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if not parser.has_section("campaign"):
        raise ConfigError(f"{path}: missing [campaign] section")
    section = parser["campaign"]
    known = {"dims", "trials", "seed", "relations", "ensemble", "tol"}
    for key in section:
        if key not in known:
            raise ConfigError(f"{path}: unknown key {key!r} in [campaign]")

    def need(key: str) -> str:
        if key not in section:
            raise ConfigError(f"{path}: [campaign] is missing required key {key!r}")
        return section[key]

    ensemble = section.get("ensemble", "haar-pure").strip()

    dims = []
    dims_raw = section.get("dims", "").strip()
    if dims_raw:
        for item in dims_raw.replace(",", " ").split():
            try:
                d_a, d_b = item.lower().split("x")
                dims.append((int(d_a), int(d_b)))
            except ValueError as exc:
                raise ConfigError(f"{path}: dims entry {item!r} is not of the form AxB") from exc
    elif ensemble.startswith("named:"):
        named = state_from_token(ensemble.partition(":")[2])
        dims.append((named.d_a, named.d_b))
    else:
        raise ConfigError(f"{path}: [campaign] is missing required key 'dims'")

    try:
        trials = int(need("trials"))
        seed = int(need("seed"))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    relations_raw = section.get("relations", "").replace(",", " ").split()
    relations = tuple(relations_raw) if relations_raw else tuple(RELATIONS)

    if "tol" in section:
        try:
            tol = float(section["tol"])
        except ValueError as exc:
            raise ConfigError(f"{path}: tol is not a decimal number") from exc
    else:
        tol = resolve_tol(tol_override)

    return CampaignConfig(
        dims=tuple(dims),
        trials=trials,
        seed=seed,
        relations=relations,
        ensemble=ensemble,
        tol=tol,
    )


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc


def _replay(path: str, tol_override: float | None) -> int:
    tol = resolve_tol(tol_override)
    point = serialize.argmin_from_dict(_load_json(path))
    report = evaluate_point(
        point["relation"], point["x"], point["y"], point["state"], eps=point["eps"], tol=tol
    )
    slack = report_slack(report)
    drift = abs(slack - point["best_slack"])
    print(f"relation {point['relation']}: stored slack {fmt_nats(point['best_slack'])}")
    print(f"replayed slack {fmt_nats(slack)} (drift {drift:.3e})")
    ok = drift <= tol and slack >= -tol
    print("replay ok" if ok else "replay MISMATCH")
    return 0 if ok else 1


def cmd_verify(args) -> int:
    if args.replay:
        if args.config:
            raise ConfigError("--config and --replay are mutually exclusive")
        return _replay(args.replay, args.tol)
    if not args.config:
        raise ConfigError("verify needs --config <file> or --replay <argmin.json>")
    cfg = parse_campaign_config(args.config, args.tol)
    manifest = _manifest("verify", serialize.campaign_config_to_dict(cfg), cfg.seed)
    result, records = run_campaign_records(cfg, workers=args.workers)

    out_dir = args.out
    result_path = os.path.join(out_dir, "campaign_result.json")
    csv_path = os.path.join(out_dir, "slacks.csv")
    manifest_path = os.path.join(out_dir, "manifest.json")
    payload = {"manifest": "manifest.json", **serialize.campaign_result_to_dict(result)}
    serialize.write_json(result_path, payload)
    serialize.write_csv(
        csv_path,
        ["trial", "dA", "dB", "relation", "slack"],
        serialize.trial_csv_rows(records, cfg.relations),
    )
    manifest.outputs = ["campaign_result.json", "slacks.csv"]
    manifest.finish()
    serialize.write_json(manifest_path, manifest.to_dict())

    for name in cfg.relations:
        s = result.relations[name]
        print(
            f"{name:<5} {s.kind:<10} min slack {fmt_nats(s.min_slack)}"
            f"  violations {s.violations}"
        )
    print(f"total trials {result.total_trials}, violations {result.total_violations}")
    print(f"wrote {result_path}, {csv_path}")
    return 0 if result.total_violations == 0 else 1


# ------------------------------------------------------------------- sweep


def parse_grid(spec: str):
    """Parse start:stop:step into an ascending grid.

    The stop value is included when it lies on the step lattice (within
    float tolerance); points never exceed it.
    """
    try:
        start_s, stop_s, step_s = spec.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError as exc:
        raise ConfigError(f"grid {spec!r} is not of the form start:stop:step") from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"grid {spec!r} must ascend with positive step")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = [min(start + k * step, stop) for k in range(count)]
    return values


def _state_arg(token: str):
    if token.endswith(".json") or os.path.sep in token:
        return serialize.state_from_dict(_load_json(token))
    return state_from_token(token)


def _basis_arg(token: str):
    if token.endswith(".json") or os.path.sep in token:
        return serialize.basis_from_dict(_load_json(token))
    return basis_from_token(token)


def cmd_sweep(args) -> int:
    state = _state_arg(args.state)
    x = _basis_arg(args.x)
    y = _basis_arg(args.y)
    grid = parse_grid(args.grid)
    trace = monitoring_sweep(x, y, state, grid)

    manifest = _manifest(
        "sweep",
        {"state": args.state, "x": args.x, "y": args.y, "grid": args.grid, "out": args.out},
        None,
    )
    serialize.write_csv(
        args.out,
        ["eps", "irreality_x", "uncertainty_y", "q", "bound_slack"],
        serialize.sweep_csv_rows(trace),
    )
    manifest.outputs = [os.path.basename(args.out)]
    manifest.finish()
    serialize.write_json(args.out + ".manifest.json", manifest.to_dict())
    print(
        f"swept {len(grid)} strengths: irr(X) {fmt_nats(trace.irreality_x[0])} ->"
        f" {fmt_nats(trace.irreality_x[-1])}, H(Y|B) {fmt_nats(trace.uncertainty_y[0])},"
        f" q {fmt_nats(trace.bound_q)}"
    )
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------- minimize


def cmd_minimize(args) -> int:
    tol = resolve_tol(args.tol)
    result = minimize_slack(
        args.relation,
        args.dA,
        args.dB,
        restarts=args.restarts,
        seed=args.seed,
        tol=tol,
        target=args.target,
    )
    manifest = _manifest(
        "minimize",
        {
            "relation": args.relation,
            "dA": args.dA,
            "dB": args.dB,
            "restarts": args.restarts,
            "seed": args.seed,
            "tol": tol,
            "target": args.target,
        },
        args.seed,
    )
    payload = {
        "manifest": os.path.basename(args.out) + ".manifest.json",
        **serialize.argmin_to_dict(result),
    }
    serialize.write_json(args.out, payload)
    manifest.outputs = [os.path.basename(args.out)]
    manifest.finish()
    serialize.write_json(args.out + ".manifest.json", manifest.to_dict())
    print(
        f"{result.relation}: best slack {fmt_nats(result.best_slack)} after"
        f" {result.evaluations} evaluations in {result.restarts_used} restarts"
    )
    print(f"wrote {args.out}")
    return 0


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qir",
        description="Entropic uncertainty and irreality toolkit for bipartite states",
    )
    parser.add_argument("--version", action="version", version=f"qir {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("saturate", help="reproduce the two saturating cases at dimension d")
    p.add_argument("--d", type=int, required=True, help="local dimension (d_A = d_B = d)")
    p.add_argument("--bits", action="store_true", help="display in bits instead of nats")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance in nats")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("verify", help="run a campaign from a config, or replay an argmin file")
    p.add_argument("--config", help="campaign config file")
    p.add_argument("--out", default=".", help="output directory for campaign results")
    p.add_argument("--replay", help="argmin JSON file to re-evaluate (single-point mode)")
    p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance in nats")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="monitoring sweep over a strength grid")
    p.add_argument("--state", required=True, help="state token (bell:2, ...) or JSON file")
    p.add_argument("--x", required=True, help="tracked-observable basis token or JSON file")
    p.add_argument("--y", required=True, help="monitored-observable basis token or JSON file")
    p.add_argument("--grid", required=True, help="strength grid start:stop:step")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("minimize", help="search for the configuration minimizing a relation's slack")
    p.add_argument("--relation", required=True, help=f"one of {', '.join(RELATIONS)}")
    p.add_argument("--dA", type=int, required=True)
    p.add_argument("--dB", type=int, required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", type=float, default=None, help="stop once slack <= target")
    p.add_argument("--out", default="argmin.json", help="argmin output path")
    p.add_argument("--tol", type=float, default=None, help="verdict tolerance in nats")
    p.set_defaults(func=cmd_minimize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return 3
    except QirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
