"""Command-line front end: ``hklab`` / ``python -m hklab``.

Exit codes: 0 all ASSERT items passed, 1 an ASSERT item failed, 2 invalid
configuration, 3 the two derivative backends disagree on a MEASURE item.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .audits import AUDITS, run_audits

EXIT_OK, EXIT_ASSERT, EXIT_CONFIG, EXIT_BACKEND = 0, 1, 2, 3
DEFAULT_A = (0.5, 1.0, 2.0)
SCHEMA = "hklab-audit/1"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 1
    a: list = field(default_factory=lambda: list(DEFAULT_A))
    seed: int = 0
    samples: int = 1000
    tolerances: dict = field(default_factory=dict)
    backend: str = "dual"
    audits: list = field(default_factory=lambda: list(AUDITS))
    out: str | None = None
    csv_dir: str | None = None

    def validate(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError("n must be an integer >= 1")
        if not self.a:
            raise ConfigError("at least one value of a is required")
        for a in self.a:
            if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0):
                raise ConfigError(f"a must be a positive number, got {a!r}")
        if len(set(self.a)) != len(self.a):
            raise ConfigError("repeated value of a")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError("samples must be an integer >= 1")
        if self.backend not in ("fd", "dual", "both"):
            raise ConfigError("backend must be fd, dual or both")
        unknown = [x for x in self.audits if x not in AUDITS]
        if unknown:
            raise ConfigError(f"unknown audit(s): {', '.join(unknown)}; choose from {', '.join(AUDITS)}")
        for k, v in self.tolerances.items():
            if not (math.isfinite(v) and v >= 0):
                raise ConfigError(f"tolerance for {k} must be a non-negative number")
        return self

    def to_json(self):
        d = asdict(self)
        d.pop("out")
        d.pop("csv_dir")
        d["tolerances"] = dict(sorted(self.tolerances.items()))
        return d


def _parse_tolerance(text):
    claim, sep, value = text.partition("=")
    if not sep or not claim:
        raise argparse.ArgumentTypeError("expected CLAIM=VALUE")
    try:
        return claim, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def build_parser():
    p = argparse.ArgumentParser(
        prog="hklab",
        description="Audit the contact-form construction of the metric family g_a on H^n.",
    )
    p.add_argument("--n", type=int, default=1, help="quaternionic dimension (default 1)")
    p.add_argument("--a", type=float, action="append", help="deformation parameter, repeatable (default 0.5 1 2)")
    p.add_argument("--samples", type=int, default=1000, help="samples per algebraic claim (default 1000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=_parse_tolerance, action="append", default=[],
                   metavar="CLAIM=VALUE", help="override the tolerance of one claim, repeatable")
    p.add_argument("--audit", action="append", metavar="NAME",
                   help=f"audit to run, repeatable (default all: {', '.join(AUDITS)})")
    p.add_argument("--backend", choices=("fd", "dual", "both"), default="dual",
                   help="derivative backend for ASSERT items (MEASURE items always use both)")
    p.add_argument("--out", metavar="FILE", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", metavar="DIR", help="also write CSV tables into DIR")
    p.add_argument("--quiet", action="store_true", help="suppress the per-claim summary on stderr")
    return p


def config_from_args(args):
    return RunConfig(
        n=args.n,
        a=list(args.a) if args.a else list(DEFAULT_A),
        seed=args.seed,
        samples=args.samples,
        tolerances=dict(args.tolerance),
        backend=args.backend,
        audits=list(dict.fromkeys(args.audit)) if args.audit else list(AUDITS),
        out=args.out,
        csv_dir=args.csv,
    ).validate()


def report_dict(config, result, timestamp=None):
    items = [r.to_json() for r in result.items]
    summary = {
        "items": len(items),
        "assert_failed": sorted({r.claim_id for r in result.assert_failures}),
        "backend_disagreement": sorted({r.claim_id for r in result.disagreements}),
        "exit_code": result.exit_code(),
    }
    out = {"schema": SCHEMA, "config": config.to_json(), "items": items, "summary": summary}
    if timestamp is not None:
        out["timestamp"] = timestamp
    return out


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_csv(directory, result):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    fields = ["claim_id", "class", "n", "a", "seed", "samples", "max_residual", "mean_residual",
              "min_residual", "tolerance", "comparison", "backend_agreement", "status", "paper_locus"]
    with open(d / "items.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        for r in result.items:
            w.writerow(r.to_json())
    with open(d / "residuals.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["claim_id", "n", "a", "index", "residual"])
        for r in result.items:
            if r.residuals is None:
                continue
            for i, v in enumerate(r.residuals):
                w.writerow([r.claim_id, r.n, "" if r.a is None else r.a, i, repr(float(v))])
    for t in result.tables:
        with open(d / f"{t.name}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(t.header)
            w.writerows(t.rows)


def _summary_line(r):
    a = "-" if r.a is None else f"{r.a:g}"
    if r.klass == "assert":
        cmp_ = {"<=": "<=", ">": "min >", "sup>": "max >"}[r.comparison]
        shown = r.min_residual if r.comparison == ">" else r.max_residual
        detail = f"{shown:.3e} {cmp_} {r.tolerance:.1e}"
    else:
        detail = f"max {r.max_residual:.4e} mean {r.mean_residual:.4e} agreement {r.backend_agreement:.1e}"
    return f"{r.status.upper():12s} {r.claim_id:32s} n={r.n} a={a:4s} {detail}"


def run(config: RunConfig, stream=None, quiet=False):
    """Execute ``config``; returns the exit code."""
    result = run_audits(config.audits, config.n, config.a, config.seed, config.samples,
                        config.backend, config.tolerances)
    stamp = {
        "generated_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_times_s": {k: round(v, 4) for k, v in result.wall_times.items()},
    }
    text = dumps(report_dict(config, result, stamp))
    if config.out:
        Path(config.out).parent.mkdir(parents=True, exist_ok=True)
        Path(config.out).write_text(text)
    else:
        (stream or sys.stdout).write(text)
    if config.csv_dir:
        write_csv(config.csv_dir, result)
    if not quiet:
        seen = {r.claim_id for r in result.items}
        for claim in sorted(set(config.tolerances) - seen):
            print(f"warning: tolerance override for unknown claim {claim}", file=sys.stderr)
        for r in result.items:
            print(_summary_line(r), file=sys.stderr)
    return result.exit_code()


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"hklab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(config, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
