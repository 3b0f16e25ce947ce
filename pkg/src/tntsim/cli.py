"""Command-line experiment runner.

Subcommands: `fig` runs a named preset, `run` evaluates a single protocol
from a config file, `certify` checks the parity conditions and reports
residuals.  Exit codes: 0 success, 1 computation failure, 2 config error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import __version__
from .output import write_artifacts
from .presets import PRESETS, CertifyConfig, RunConfig, run_certify, run_single


class ConfigError(Exception):
    pass


def _parse_set(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"expected key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def _coerce(cls, data: dict):
    """Build a config dataclass, rejecting unknown keys by name."""
    fields = {f.name: f for f in dataclasses.fields(cls)}
    clean = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown config key {key!r} for {cls.__name__}")
        if isinstance(fields[key].default, tuple) and isinstance(value, list):
            value = tuple(value)
        clean[key] = value
    try:
        return cls(**clean)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def _resolved_dict(cfg) -> dict:
    data = dataclasses.asdict(cfg)
    if hasattr(cfg, "resolved_phi"):
        data["phi"] = cfg.resolved_phi()
    return data


def cmd_fig(args) -> int:
    cls, runner = PRESETS[args.preset]
    data = _parse_set(args.set)
    if args.N is not None:
        data["n_atoms"] = args.N
    if args.lam is not None:
        data["lam"] = args.lam
    if args.basis is not None:
        data["basis"] = args.basis
    cfg = _coerce(cls, data)
    artifacts = runner(cfg, threads=args.threads)
    paths = write_artifacts(args.out, args.preset, artifacts, args.preset,
                            _resolved_dict(cfg), __version__, args.format)
    for p in paths:
        print(f"wrote {p}")
    return 0


def cmd_run(args) -> int:
    data = _load_config_file(args.config) if args.config else {}
    data.update(_parse_set(args.set))
    cfg = _coerce(RunConfig, data)
    artifacts = run_single(cfg, threads=args.threads)
    summary = artifacts["summary"]
    print(f"qfi={summary['qfi']:.6g} fc_analytic={summary['fc_analytic']:.6g} "
          f"fc_finite_difference={summary['fc_finite_difference']:.6g}")
    paths = write_artifacts(args.out, "run", artifacts, "run",
                            _resolved_dict(cfg), __version__, args.format)
    for p in paths:
        print(f"wrote {p}")
    return 0


def cmd_certify(args) -> int:
    data = _load_config_file(args.config) if args.config else {}
    data.update(_parse_set(args.set))
    cfg = _coerce(CertifyConfig, data)
    report = run_certify(cfg)["report"]
    labels = (("state_parity", "state is a parity eigenstate"),
              ("generator_flip", "generator flips parity"),
              ("readout_conserves", "readout conserves parity"))
    for key, text in labels:
        entry = report[key]
        status = "PASS" if entry["ok"] else "FAIL"
        print(f"{status} {text} (residual {entry['residual']:.3e})")
    if args.out is not None:
        paths = write_artifacts(args.out, "certify", {"report": report}, "certify",
                                _resolved_dict(cfg), __version__, args.format)
        for p in paths:
            print(f"wrote {p}")
    return 0 if report["all_ok"] else 1


def _add_common(parser: argparse.ArgumentParser, out_default: str | None) -> None:
    parser.add_argument("--out", default=out_default, help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config field (JSON-parsed value)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tntsim",
        description="Collective-spin readout simulator: presets, single runs, "
                    "and parity certification.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("fig", help="run a figure preset")
    p_fig.add_argument("preset", choices=sorted(PRESETS))
    p_fig.add_argument("--basis", choices=("fixed", "optimized"), default=None)
    p_fig.add_argument("--N", type=int, default=None, help="override atom number")
    p_fig.add_argument("--lam", type=float, default=None, help="override Lambda")
    _add_common(p_fig, "out")

    p_run = sub.add_parser("run", help="evaluate one protocol configuration")
    p_run.add_argument("--config", default=None, help="JSON config file")
    _add_common(p_run, "out")

    p_cert = sub.add_parser("certify", help="check the parity conditions")
    p_cert.add_argument("--config", default=None, help="JSON config file")
    _add_common(p_cert, None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"fig": cmd_fig, "run": cmd_run, "certify": cmd_certify}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation or I/O failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
