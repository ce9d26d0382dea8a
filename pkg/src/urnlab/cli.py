"""Command-line front end.

    urnlab moments  --model M --m 2 --c 1 --counts 2,1 --n 8 --s-max 4
    urnlab limits   --model R --m 2 --c 1 --counts 1,1 --s-max 2 --tol 1e-8
    urnlab dist     --model MC --m 2 --counts 1,1,1 --n 3
    urnlab simulate --model NB --m 2 --counts 2,1 --nb 1,2 --n 10 --runs 100000
    urnlab compare  --model M --m 2 --counts 2,1 --n 8 --s-max 4

Exact rationals are emitted as "p/q" strings, floats with 17 significant
digits.  Exit status: 0 success, 1 computational error, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import asymptotics, moments, oracle, simulate
from .errors import SpecError, UrnError
from .model import Model, UrnSpec

CSV_VERSION = 1
COMMANDS = ("moments", "limits", "dist", "simulate", "compare")


class UsageError(Exception):
    exit_code = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: UrnSpec
    n: int = 8
    s_max: int = 4
    runs: int = 100_000
    seed: int = 0
    tol: float = 1e-10
    max_terms: int = 1 << 14
    format: str = "json"
    output: str | None = None
    color: int = 0
    workers: int = 1


# --- serialization ----------------------------------------------------------

def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0"  # "-0" would reload as the integer 0
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats.

    ``dumps(json.loads(dumps(doc)))`` reproduces the text byte for byte.
    """
    import json

    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return _fmt_float(v) if math.isfinite(v) else ""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


def to_csv(command: str, columns: list[str], rows: list[dict]) -> str:
    lines = [f"# urnlab-csv v{CSV_VERSION} {command}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


# --- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="urnlab", description="Exact and simulated moments of multi-draw Polya urns.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        g = p.add_argument_group("urn")
        g.add_argument("--spec", type=Path, help="JSON urn spec file (instead of the flags below)")
        g.add_argument("--model", choices=[m.value for m in Model])
        g.add_argument("--m", type=int)
        g.add_argument("--c", type=int, default=1)
        g.add_argument("--counts", type=_int_list)
        g.add_argument("--nb", type=_int_list, help="a,b for model NB")
        g.add_argument("--nb-with-replacement", action="store_true")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o")
        if name in ("moments", "dist", "simulate", "compare"):
            p.add_argument("--n", type=int, default=8, help="time horizon (n_max for tables)")
        if name in ("moments", "limits", "simulate", "compare"):
            p.add_argument("--s-max", type=int, default=4 if name != "limits" else 2)
        if name in ("simulate", "compare"):
            p.add_argument("--runs", type=int, default=100_000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--workers", type=int, default=1)
        if name == "limits":
            p.add_argument("--tol", type=float, default=1e-10)
            p.add_argument("--max-terms", type=int, default=1 << 14)
        if name in ("moments", "compare"):
            p.add_argument("--color", type=int, default=0, help="tracked color for model MC")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    try:
        if args.spec is not None:
            spec = UrnSpec.from_json(args.spec.read_text())
        else:
            missing = [f for f in ("model", "m", "counts") if getattr(args, f) is None]
            if missing:
                raise UsageError("missing " + ", ".join("--" + f for f in missing))
            spec = UrnSpec(
                Model(args.model), args.m, args.c, args.counts,
                nb=args.nb, nb_with_replacement=args.nb_with_replacement,
            )
    except (SpecError, KeyError, ValueError, OSError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"invalid urn: {exc}") from None
    kw = {"command": args.command, "spec": spec, "format": args.format, "output": args.output}
    for name in ("n", "s_max", "runs", "seed", "tol", "max_terms", "color", "workers"):
        if hasattr(args, name):
            kw[name] = getattr(args, name)
    cfg = RunConfig(**kw)
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    if cfg.s_max < 1:
        raise UsageError("--s-max must be >= 1")
    if cfg.n < 0 or cfg.runs < 1 or cfg.max_terms < 16:
        raise UsageError("--n must be >= 0, --runs >= 1, --max-terms >= 16")
    if spec.model is Model.MC and not 0 <= cfg.color < spec.r:
        raise UsageError(f"--color must be in [0, {spec.r})")
    return cfg


# --- commands ---------------------------------------------------------------

def exact_table(spec: UrnSpec, n_max: int, s_max: int, color: int = 0):
    """{(n, s): Fraction} and a label for where the numbers came from."""
    if spec.model in (Model.M, Model.R, Model.MC):
        tab = moments.moment_table(spec, n_max, s_max, color=color if spec.model is Model.MC else None)
        return {(n, s): tab[n, s] for n in range(n_max + 1) for s in range(s_max + 1)}, "recurrence"
    out = {}
    for n in range(n_max + 1):
        dist = oracle.exact_distribution(spec, n)
        for s in range(s_max + 1):
            out[n, s] = oracle.oracle_moment(dist, s)
        if spec.model in (Model.FM, Model.FR):
            out[n, 1] = moments.closed_form_expectation(spec, n)
    source = "closed_form+oracle" if spec.model in (Model.FM, Model.FR) else "oracle"
    return out, source


def _oracle_moment(spec: UrnSpec, dist, s: int, color: int):
    if spec.model is Model.MC:
        idx = tuple(s if i == color else 0 for i in range(spec.r))
        return oracle.oracle_moment(dist, idx)
    return oracle.oracle_moment(dist, s)


def _cmd_moments(cfg: RunConfig):
    table, source = exact_table(cfg.spec, cfg.n, cfg.s_max, cfg.color)
    rows = [{"n": n, "s": s, "value": rat(v)} for (n, s), v in table.items() if s >= 1]
    doc = {"command": "moments", "spec": cfg.spec.to_dict(), "source": source,
           "n_max": cfg.n, "s_max": cfg.s_max, "entries": rows}
    return doc, ["n", "s", "value"], rows


def _cmd_limits(cfg: RunConfig):
    spec = cfg.spec
    rows = []
    for s in range(1, cfg.s_max + 1):
        res = asymptotics.normalized_moment_limit(spec, s, tol=cfg.tol, max_terms=cfg.max_terms)
        mc = spec.mc if spec.model is not Model.MC else spec.m * spec.c
        rows.append({
            "s": s,
            "value": res.value,
            "exact": rat(res.exact) if res.exact is not None else None,
            "limit_law_moment": res.value / mc**s,
            "prefactor": res.prefactor,
            "series": res.series,
            "terms_used": res.terms_used,
            "tail_bound": res.tail_bound,
            "truncation_bound": res.truncation_bound,
            "roots": [[r.real, r.imag] for r in res.roots],
        })
    doc = {"command": "limits", "spec": spec.to_dict(), "tol": cfg.tol, "limits": rows}
    cols = ["s", "value", "exact", "limit_law_moment", "prefactor", "series",
            "terms_used", "tail_bound", "truncation_bound"]
    return doc, cols, rows


def _cmd_dist(cfg: RunConfig):
    dist = oracle.exact_distribution(cfg.spec, cfg.n)
    recs = dist.to_records()
    doc = {"command": "dist", "spec": cfg.spec.to_dict(), "n": cfg.n, "distribution": recs}
    return doc, ["state", "p"], recs


def _summary_rows(summary):
    return [
        {"s": s, "mean": summary.empirical_moments[s], "se": summary.standard_errors[s]}
        for s in sorted(summary.empirical_moments)
    ]


def _cmd_simulate(cfg: RunConfig):
    summ = simulate.estimate_moments(cfg.spec, cfg.n, cfg.s_max, cfg.runs, cfg.seed, workers=cfg.workers)
    rows = _summary_rows(summ)
    doc = {"command": "simulate", "spec": cfg.spec.to_dict(), "n": cfg.n, "runs": cfg.runs,
           "seed": cfg.seed, "moments": rows, "martingale_mean": summ.martingale_mean,
           "martingale_se": summ.martingale_se}
    return doc, ["s", "mean", "se"], rows


def _cmd_compare(cfg: RunConfig):
    spec = cfg.spec
    rec = None
    if spec.model in (Model.M, Model.R, Model.MC):
        rec, _ = exact_table(spec, cfg.n, cfg.s_max, cfg.color)
    elif spec.model in (Model.FM, Model.FR):
        rec = {(n, 1): moments.closed_form_expectation(spec, n) for n in range(cfg.n + 1)}
    rows = []
    dist = None
    for n in range(cfg.n + 1):
        dist = oracle.exact_distribution(spec, n)
        for s in range(1, cfg.s_max + 1):
            orc = _oracle_moment(spec, dist, s, cfg.color)
            r = rec.get((n, s)) if rec is not None else None
            rows.append({
                "n": n, "s": s,
                "recurrence": rat(r) if r is not None else None,
                "oracle": rat(orc),
                "exact_match": (r == orc) if r is not None else None,
            })
    summ = simulate.estimate_moments(spec, cfg.n, cfg.s_max, cfg.runs, cfg.seed, workers=cfg.workers)
    sim_rows = []
    if spec.model is Model.MC and cfg.color != 0:
        # the simulator tracks color 0; compare against that color's exact law
        color_dist = {(cfg.n, s): _oracle_moment(spec, dist, s, 0) for s in range(1, cfg.s_max + 1)}
    else:
        color_dist = {(cfg.n, s): _oracle_moment(spec, dist, s, cfg.color) for s in range(1, cfg.s_max + 1)}
    for s in range(1, cfg.s_max + 1):
        exact = color_dist[cfg.n, s]
        mean, se = summ.empirical_moments[s], summ.standard_errors[s]
        if se > 0:
            z = (mean - float(exact)) / se
        else:
            z = 0.0 if mean == float(exact) else math.inf
        sim_rows.append({"n": cfg.n, "s": s, "exact": rat(exact), "simulation": mean, "se": se,
                         "z": z, "within_4se": abs(z) <= 4})
    matches = [r["exact_match"] for r in rows if r["exact_match"] is not None]
    doc = {
        "command": "compare", "spec": spec.to_dict(), "n_max": cfg.n, "s_max": cfg.s_max,
        "runs": cfg.runs, "seed": cfg.seed,
        "all_exact_match": all(matches) if matches else None,
        "all_within_4se": all(r["within_4se"] for r in sim_rows),
        "exact": rows, "simulation": sim_rows,
    }
    csv_rows = [dict(r) for r in rows]
    for r in sim_rows:
        for row in csv_rows:
            if row["n"] == r["n"] and row["s"] == r["s"]:
                row.update(simulation=r["simulation"], se=r["se"], z=r["z"], within_4se=r["within_4se"])
    cols = ["n", "s", "recurrence", "oracle", "exact_match", "simulation", "se", "z", "within_4se"]
    return doc, cols, csv_rows


_HANDLERS = {
    "moments": _cmd_moments,
    "limits": _cmd_limits,
    "dist": _cmd_dist,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
}


def _error_doc(kind: str, message: str) -> str:
    return dumps({"error": {"type": kind, "message": message}}) + "\n"


def execute(config: RunConfig) -> tuple[int, str]:
    """Run one command; returns (exit status, emitted document)."""
    try:
        doc, cols, rows = _HANDLERS[config.command](config)
    except UrnError as exc:
        return 1, _error_doc(type(exc).__name__, str(exc))
    if config.format == "csv":
        if config.command == "dist":
            rows = [dict(r, state=r["state"]) for r in rows]
        return 0, to_csv(config.command, cols, rows)
    return 0, dumps(doc) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as exc:
        sys.stderr.write(f"urnlab: usage error: {exc}\n")
        sys.stderr.write(_error_doc("UsageError", str(exc)))
        return 2
    code, text = execute(config)
    if config.output and code == 0:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
