"""Command-line runner: ``hmtriple --config run.yaml --out report.json``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import SUITES, ConfigError, RunConfig, load_config
from .scalars import ExpansionWindow
from .suites import RunState, run_suite

__all__ = ["main", "run", "canonical_bytes", "summary_text"]


def run(config: RunConfig) -> dict:
    """Run the selected suites; the returned report is deterministic apart from ``timing``."""
    state = RunState(config)
    results = [run_suite(name, state) for name in config.suites]
    return {
        "library": {"name": "hmtriple", "version": __version__},
        "config": config.echo(),
        "passed": all(r.passed for r in results),
        "suites": [r.as_dict() for r in results],
        "timing": {r.name: round(r.seconds, 3) for r in results},
    }


def canonical_bytes(report: dict) -> bytes:
    """Serialized report without timing fields."""
    body = {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(body, indent=2, sort_keys=True, default=str).encode()


def summary_text(report: dict) -> str:
    lines = []
    for s in report["suites"]:
        n_ok = sum(c["passed"] for c in s["checks"])
        t = report.get("timing", {}).get(s["name"])
        lines.append(f"{s['status'].upper():4}  {s['name']:<18} {n_ok}/{len(s['checks'])} checks" + (f"  {t:.1f}s" if t is not None else ""))
        for c in s["checks"]:
            if not c["passed"]:
                cx = c.get("counterexample", {})
                lines.append(f"      {c['name']}: {cx.get('detail', '')[:200]}")
                lines.append(f"      reproduce with case seed {cx.get('case_seed')}")
    lines.append("all suites passed" if report["passed"] else "some suites FAILED")
    return "\n".join(lines)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hmtriple", description=__doc__)
    p.add_argument("--config", metavar="PATH", help="YAML run configuration")
    p.add_argument("--suite", action="append", metavar="NAME", help="suite to run (repeatable)")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--window", metavar="WMIN:WMAX,ZMIN:ZMAX", help="override the expansion window")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here")
    p.add_argument("--list-suites", action="store_true", help="list suite names and exit")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.list_suites:
        print("\n".join(SUITES))
        return 0
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.suite:
            unknown = [s for s in args.suite if s not in SUITES]
            if unknown:
                raise ConfigError(f"unknown suite(s) {unknown}; see --list-suites")
            cfg.suites = tuple(args.suite)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed must be a 64-bit non-negative integer")
            cfg.seed = args.seed
        if args.window:
            cfg.window = ExpansionWindow.parse(args.window)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(cfg)
    out = args.out or cfg.output_path
    if out:
        Path(out).write_text(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")
    print(summary_text(report))
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
