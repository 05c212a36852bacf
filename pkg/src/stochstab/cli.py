"""Command-line front end.

Exit status for ``check``: 0 stable, 1 unstable, 2 inconclusive or
boundary. Errors use distinct codes above 2 (see ``EXIT_CODES``).
Data goes to standard output or files; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .bifurcation import (
    CASE_PATTERN,
    OscillatorSpec,
    oscillator_case,
    oscillator_certificate,
    oscillator_report,
    oscillator_sweep,
    oscillator_to_system,
    parse_grid,
    sweep,
)
from .criteria import HYPOTHESES, StabilityReport, Verdict, analyze
from .errors import (
    CaseNotCovered,
    DegenerateAllZero,
    DegenerateDenominator,
    HypothesisViolated,
    NoSignChange,
    SpecFormatError,
    UnsupportedPattern,
    WrongPattern,
)
from .lyapunov import build_certificate, verify_certificate
from .model import (
    DIFFUSION_KEYS,
    DRIFT_KEYS,
    NoisePattern,
    StabilityNotion,
    SystemSpec,
    as_ito,
    classify_noise_pattern,
)
from .simulate import SimConfig, json_safe, probe_probability_stability, simulate_ensemble

OUT_ENV = "STOCHSTAB_OUT"

EXIT_STABLE, EXIT_UNSTABLE, EXIT_UNDECIDED = 0, 1, 2
EXIT_USAGE = 64
EXIT_PATTERN = 65
EXIT_NOINPUT = 66
EXIT_NO_SIGN_CHANGE = 67
EXIT_CASE = 68
EXIT_OUTPUT = 73

EXIT_CODES = {
    "stable": EXIT_STABLE,
    "unstable": EXIT_UNSTABLE,
    "inconclusive_or_boundary": EXIT_UNDECIDED,
    "usage_or_malformed_input": EXIT_USAGE,
    "pattern_or_hypothesis": EXIT_PATTERN,
    "input_not_found": EXIT_NOINPUT,
    "no_sign_change": EXIT_NO_SIGN_CHANGE,
    "case_not_covered": EXIT_CASE,
    "output_error": EXIT_OUTPUT,
}

NOTIONS = {"prob": [StabilityNotion.PROBABILITY], "ms": [StabilityNotion.MEAN_SQUARE],
           "both": [StabilityNotion.PROBABILITY, StabilityNotion.MEAN_SQUARE]}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt(x: float | None) -> str:
    if x is None:
        return "-"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return repr(x)


# --- spec input ----------------------------------------------------------------

def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="JSON file with the coefficients")
    for k in DRIFT_KEYS:
        p.add_argument(f"--{k}", type=float)
    for k in DIFFUSION_KEYS:
        p.add_argument(f"--{k}", type=float, help=f"noise amplitude {k}")
        p.add_argument(f"--{k}2", type=float, help=f"squared noise amplitude {k}^2")
    p.add_argument("--calculus", choices=["ito", "stratonovich"])


def spec_from_args(args) -> SystemSpec:
    """Exactly one input source: a JSON file or inline flags."""
    inline = [k for k in DRIFT_KEYS + DIFFUSION_KEYS + tuple(k + "2" for k in DIFFUSION_KEYS)
              if getattr(args, k) is not None]
    if args.spec is not None:
        if inline or args.calculus is not None:
            raise UsageError("give either --spec or coefficient flags, not both")
        text = Path(args.spec).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecFormatError("<json>", f"not valid JSON: {exc}") from None
        return SystemSpec.from_dict(data)
    # inline drift flags default to 0 (a JSON spec must list all four)
    data = {k: (getattr(args, k) if getattr(args, k) is not None else 0.0) for k in DRIFT_KEYS}
    for k in DIFFUSION_KEYS:
        amp, sq = getattr(args, k), getattr(args, k + "2")
        if amp is not None and sq is not None:
            raise UsageError(f"give --{k} or --{k}2, not both")
        if sq is not None:
            if sq < 0:
                raise SpecFormatError(k + "2", "squared amplitude must be >= 0")
            data[k] = math.sqrt(sq)
        elif amp is not None:
            data[k] = amp
    data["calculus"] = args.calculus or "ito"
    for k, v in data.items():
        if isinstance(v, float) and not math.isfinite(v):
            raise SpecFormatError(k, "must be finite")
    return SystemSpec.from_dict(data)


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _OutputError(str(exc)) from None
    return out


# --- subcommands -------------------------------------------------------------------

def _human_report(report: StabilityReport) -> str:
    lines = [f"[{report.notion.value}] {report.verdict.value.upper()} via {report.theorem_applied}"]
    for h in HYPOTHESES.get(report.theorem_applied, ()):
        lines.append(f"  hypothesis: {h}")
    if report.bound is not None:
        lines.append(f"  bound on squared intensity: {_fmt(report.bound.bound)} ({report.bound.kind.value})")
        for name, value in report.bound.trace:
            lines.append(f"    {name} = {_fmt(value)}")
    if report.attractor_note:
        lines.append(f"  attractor: {report.attractor_note}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    for key in sorted(report.advisory):
        lines.append(f"  advisory {key}: {report.advisory[key]}")
    return "\n".join(lines) + "\n"


def _check_exit(reports: list[StabilityReport]) -> int:
    verdicts = [r.verdict for r in reports]
    if any(v is Verdict.UNSTABLE for v in verdicts):
        return EXIT_UNSTABLE
    if all(v is Verdict.STABLE for v in verdicts):
        return EXIT_STABLE
    return EXIT_UNDECIDED


def run_check(args) -> int:
    spec = spec_from_args(args)
    reports = [analyze(spec, n, tol=args.tol) for n in NOTIONS[args.notion]]
    if args.format == "human":
        text = "".join(_human_report(r) for r in reports)
    elif args.format == "csv":
        rows = ["notion,verdict,theorem,bound,kind"]
        for r in reports:
            rows.append(",".join([r.notion.value, r.verdict.value, r.theorem_applied,
                                  _fmt(r.bound.bound) if r.bound else "",
                                  r.bound.kind.value if r.bound else ""]))
        text = "\n".join(rows) + "\n"
    else:
        text = _dump({"spec": spec.to_dict(), "reports": [r.to_dict() for r in reports]})
    _emit(args, text, "check." + {"human": "txt"}.get(args.format, args.format))
    return _check_exit(reports)


def run_convert(args) -> int:
    spec = spec_from_args(args)
    _emit(args, _dump(as_ito(spec).to_dict()), "convert.json")
    return 0


def run_certify(args) -> int:
    spec = spec_from_args(args)
    notion = NOTIONS[args.notion][0] if args.notion != "both" else None
    if notion is None:
        raise UsageError("certify takes --notion prob or ms")
    pattern = classify_noise_pattern(spec)
    v = build_certificate(spec, pattern, notion, printed=args.printed)
    report = verify_certificate(as_ito(spec), v)
    _emit(args, _dump({"pattern": pattern.value, "notion": notion.value, "printed": args.printed,
                       "V": v.to_dict(), "check": report.to_dict()}), "certify.json")
    return 0 if report.holds else 1


def run_simulate(args) -> int:
    spec = spec_from_args(args)
    config = SimConfig(dt=args.dt, horizon=args.horizon, n_paths=args.paths, seed=args.seed,
                       x0=args.x0, y0=args.y0)
    eps = math.inf if args.epsilon is None else args.epsilon
    if args.delta is not None:
        stats = probe_probability_stability(spec, config, eps if math.isfinite(eps) else 1.0, args.delta)
    else:
        stats = simulate_ensemble(spec, config, epsilon=eps)
    out = _out_dir(args)
    try:
        stats.write_csv(out / "ensemble.csv")
        stats.write_summary(out / "summary.json")
    except OSError as exc:
        raise _OutputError(str(exc)) from None
    sys.stdout.write(_dump(json_safe(stats.summary())))
    return 0


def _pattern_for(spec: SystemSpec, name: str | None) -> NoisePattern:
    if name:
        return NoisePattern(name)
    pattern = classify_noise_pattern(spec)
    if not pattern.active:
        raise UsageError("cannot infer the noise pattern; pass --pattern")
    return pattern


def _write_sweep(args, result) -> None:
    out = _out_dir(args)
    try:
        result.write_csv(out / "sweep.csv")
        result.write_summary(out / "sweep_summary.json")
    except OSError as exc:
        raise _OutputError(str(exc)) from None
    sys.stdout.write(_dump(result.summary()))


def run_sweep(args) -> int:
    spec = spec_from_args(args)
    if args.notion == "both":
        raise UsageError("sweep takes --notion prob or ms")
    pattern = _pattern_for(spec, args.pattern)
    result = sweep(spec, pattern, parse_grid(args.grid), NOTIONS[args.notion][0], workers=args.workers)
    _write_sweep(args, result)
    return 0


def run_oscillator(args) -> int:
    s1 = _amp(args.sigma1, args.sigma1sq, "sigma1")
    s2 = _amp(args.sigma2, args.sigma2sq, "sigma2")
    if args.sigmasq is not None or args.sigma is not None:
        if s1 or s2:
            raise UsageError("--sigma/--sigmasq set both amplitudes; drop --sigma1/--sigma2")
        s1 = s2 = _amp(args.sigma, args.sigmasq, "sigma")
    osc = OscillatorSpec(args.k, args.omega, s1, s2, args.calculus)
    case = oscillator_case(osc, args.case)
    report = oscillator_report(osc, case)
    payload = {"case": case, "bound": report.bound.bound, "calculus": osc.calculus.value,
               "system": oscillator_to_system(osc).to_dict(), "report": report.to_dict()}
    if s1 or s2:
        try:
            v = oscillator_certificate(osc, case)
            payload["certificate"] = {"V": v.to_dict(),
                                      "check": verify_certificate(as_ito(oscillator_to_system(osc)), v).to_dict()}
        except DegenerateDenominator as exc:
            payload["certificate"] = {"error": str(exc)}
    if args.format == "human":
        text = f"case {case}) bound {_fmt(report.bound.bound)} on the squared intensity\n" + _human_report(report)
    else:
        text = _dump(payload)
    _emit(args, text, "oscillator." + ("txt" if args.format == "human" else "json"))
    if args.grid:
        result = oscillator_sweep(osc, case, parse_grid(args.grid))
        _write_sweep(args, result)
    return 0


def _amp(amp, sq, name):
    if amp is not None and sq is not None:
        raise UsageError(f"give --{name} or --{name}sq, not both")
    if sq is not None:
        if sq < 0:
            raise UsageError(f"--{name}sq must be >= 0")
        return math.sqrt(sq)
    return 0.0 if amp is None else abs(amp)


class _OutputError(Exception):
    pass


def _emit(args, text: str, filename: str) -> None:
    sys.stdout.write(text)
    if getattr(args, "out", None):
        try:
            (_out_dir(args) / filename).write_text(text)
        except OSError as exc:
            raise _OutputError(str(exc)) from None


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stochstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, notion_default="both"):
        _add_spec_args(p)
        p.add_argument("--notion", choices=list(NOTIONS), default=notion_default)
        p.add_argument("--format", choices=["json", "csv", "human"], default="json")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")

    p = sub.add_parser("check", help="criteria verdicts")
    common(p)
    p.add_argument("--tol", type=float, default=0.0, help="pattern classification tolerance")
    p.set_defaults(func=run_check)

    p = sub.add_parser("convert", help="print the Ito-equivalent spec")
    common(p)
    p.set_defaults(func=run_convert)

    p = sub.add_parser("certify", help="build and verify the quadratic certificate")
    common(p, "prob")
    p.add_argument("--printed", action="store_true", help="use the literal published coefficients")
    p.set_defaults(func=run_certify)

    p = sub.add_parser("simulate", help="Monte Carlo ensemble")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--y0", type=float, default=1.0)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float, help="probe from the circle of this radius")
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("sweep", help="verdicts over a grid of squared intensities")
    common(p, "ms")
    p.add_argument("--grid", required=True, help="lo:hi:n")
    p.add_argument("--pattern", choices=[x.value for x in NoisePattern if x.active])
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("oscillator", help="damped oscillator thresholds")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    for name in ("sigma1", "sigma2", "sigma"):
        p.add_argument(f"--{name}", type=float)
        p.add_argument(f"--{name}sq", type=float)
    p.add_argument("--case", choices=sorted(CASE_PATTERN))
    p.add_argument("--calculus", choices=["ito", "stratonovich"], default="ito")
    p.add_argument("--grid", help="lo:hi:n sweep of the squared intensity")
    p.add_argument("--format", choices=["json", "human"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=run_oscillator)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as exc:
        return _fail(EXIT_USAGE, f"malformed spec: {exc}")
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except FileNotFoundError as exc:
        return _fail(EXIT_NOINPUT, f"input not found: {exc.filename}")
    except (WrongPattern, HypothesisViolated, UnsupportedPattern, DegenerateAllZero) as exc:
        return _fail(EXIT_PATTERN, str(exc))
    except NoSignChange as exc:
        return _fail(EXIT_NO_SIGN_CHANGE, str(exc))
    except (CaseNotCovered, DegenerateDenominator) as exc:
        return _fail(EXIT_CASE, str(exc))
    except _OutputError as exc:
        return _fail(EXIT_OUTPUT, f"cannot write output: {exc}")
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))


def _fail(code: int, message: str) -> int:
    print(f"stochstab: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
