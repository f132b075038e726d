"""Command-line entry point: load or generate a configuration and report on it."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .complexity import ComplexityTable, entropy_bound_check, rect_complexity_table
from .config import GeneratorSpec, Rect, WindowConfiguration, load_grid, materialize
from .deduction import PartialColoring, deduce_fixpoint, fine_wilf_reconstruct, morse_hedlund_check
from .errors import HypothesisFails, NivatError
from .expansiveness import TrichotomyVerdict, classify_trichotomy, determining_set
from .generating import find_balanced_set, find_generating_set

SCHEMA = 1
DEFAULT_WINDOW = 64


@dataclass
class AnalysisRequest:
    cfg: WindowConfiguration
    source: str
    max_n: int = 8
    max_k: int = 8
    budget: tuple = (8, 8)
    balanced: tuple | None = None
    entropy_size: int = 0

    def __post_init__(self):
        w = self.cfg.window
        if self.max_n < 1 or self.max_k < 1:
            raise ValueError("--max-n and --max-k must be positive")
        if self.max_n > w.width or self.max_k > w.height:
            raise ValueError(f"{self.max_n}x{self.max_k} blocks do not fit in a "
                             f"{w.width}x{w.height} window")
        if min(self.budget) < 1:
            raise ValueError("budget must be at least (1, 1)")


@dataclass
class AnalysisReport:
    source: str
    table: ComplexityTable
    verdict: TrichotomyVerdict
    balanced: dict | None = None
    entropy: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def hits(self):
        return self.table.hits()

    @property
    def strong_hits(self):
        return self.table.strong_hits()

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "source": self.source,
            "window": self.table.window.as_dict(),
            "window_relative": True,
            "table": self.table.to_dict()["entries"],
            "hits": [list(h) for h in self.hits],
            "strong_hits": [list(h) for h in self.strong_hits],
            "trichotomy": self.verdict.to_dict(),
            "balanced": self.balanced,
            "entropy_bound": self.entropy,
            "notes": list(self.notes),
        }


def smallest_hit(table: ComplexityTable):
    hits = table.hits()
    if not hits:
        return None
    strong = set(table.strong_hits())
    return min(hits, key=lambda h: (h not in strong, h[0] * h[1], h[0], h[1]))


def run_analysis(req: AnalysisRequest) -> AnalysisReport:
    table = rect_complexity_table(req.cfg, req.max_n, req.max_k)
    hit = smallest_hit(table)
    if hit is None:
        verdict = classify_trichotomy(req.cfg, req.max_n, req.max_k, req.budget, table=table)
        return AnalysisReport(req.source, table, verdict)
    verdict = classify_trichotomy(req.cfg, hit[0], hit[1], req.budget, table=table)
    report = AnalysisReport(req.source, table, verdict)
    if req.balanced is not None:
        strong = table.strong_hits()
        if not strong:
            report.notes.append("balanced set skipped: no (n,k) with P <= nk/2")
        else:
            n, k = min(strong, key=lambda h: (h[0] * h[1], h[0], h[1]))
            try:
                report.balanced = find_balanced_set(req.cfg, n, k, req.balanced).to_dict()
            except NivatError as e:
                report.notes.append(f"balanced set for {tuple(req.balanced)} failed: {e}")
    if req.entropy_size:
        report.entropy = entropy_bound_check(req.cfg, hit[0], hit[1], req.entropy_size).to_dict()
    return report


def _table_text(table: ComplexityTable) -> list[str]:
    w = max(len(str(int(table.counts.max()))), 3)
    head = "n\\k " + " ".join(f"{k:>{w}}" for k in range(1, table.max_k + 1))
    lines = [head]
    for n in range(1, table.max_n + 1):
        lines.append(f"{n:>3} " + " ".join(f"{table.P(n, k):>{w}}"
                                           for k in range(1, table.max_k + 1)))
    return lines


def emit(report: AnalysisReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return report.table.to_csv()
    v = report.verdict
    win = report.table.window
    lines = [f"source: {report.source}",
             f"window: {win.width}x{win.height} at ({win.x0},{win.y0})  [window-relative]",
             "", "P(n,k):"]
    lines += _table_text(report.table)
    lines += ["", f"hits (P <= nk): {len(report.hits)}",
              f"strong hits (P <= nk/2): {len(report.strong_hits)}",
              f"verdict: {v.case}"]
    if v.hit:
        lines.append(f"analyzed at (n,k) = {v.hit}{' (strong)' if v.strong else ''}")
    if v.line:
        lines.append(f"nonexpansive line: {v.line}")
    if v.generating_set is not None:
        pts = " ".join(f"({p.x},{p.y})" for p in v.generating_set.points)
        lines.append(f"generating set (D={v.generating_set.discrepancy}): {pts}")
    for d in v.directions:
        lines.append(f"  direction ({d.direction.dx},{d.direction.dy}): {d.verdict} at a={d.a} b={d.b}")
    if v.periods is not None and v.periods.vectors:
        lines.append("periods: " + " ".join(f"({x},{y})" for x, y in v.periods.vectors))
    if report.balanced:
        lines.append(f"balanced set: {report.balanced['points']}")
    if report.entropy:
        lines.append(f"entropy bound holds: {report.entropy['all_applicable_hold']}")
    lines += [f"note: {s}" for s in v.notes + report.notes]
    return "\n".join(lines) + "\n"


def _load(args) -> tuple[WindowConfiguration, str]:
    if args.input:
        return load_grid(args.input), str(args.input)
    spec, win = GeneratorSpec.from_pairs(args.gen)
    w = int(win.get("width", DEFAULT_WINDOW))
    h = int(win.get("height", w))
    if "x0" in win or "y0" in win:
        rect = Rect(int(win.get("x0", 0)), int(win.get("y0", 0)), w, h)
    elif spec.kind == "delta":
        rect = Rect(-(w // 2), -(h // 2), w, h)
    else:
        rect = Rect(0, 0, w, h)
    return materialize(spec, rect), " ".join(args.gen)


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _source_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", help="grid file")
    g.add_argument("--gen", nargs="+", metavar="KEY=VAL", help="generator spec")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nivat", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="complexity table, generating set, certificates, verdict")
    _source_args(p)
    p.add_argument("--budget", type=int, nargs=2, default=(8, 8), metavar=("A", "B"))
    p.add_argument("--balanced", type=int, nargs=2, metavar=("DX", "DY"))
    p.add_argument("--entropy", type=int, default=0, metavar="M",
                   help="check the entropy bound for square sizes up to M")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("complexity", help="P(n,k) table only")
    _source_args(p)
    p.add_argument("--format", choices=("text", "json", "csv"), default="csv")

    p = sub.add_parser("deduce", help="mask a configuration and reconstruct it by forcing")
    _source_args(p)
    p.add_argument("--budget", type=int, nargs=2, default=(8, 8), metavar=("A", "B"))
    p.add_argument("--frame", type=int, default=32, help="side of the reconstructed square")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("finewilf", help="periodic extensions of a segment")
    p.add_argument("segment")
    p.add_argument("--period", "-p", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("morsehedlund", help="factor complexity periodicity check")
    p.add_argument("word")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--domain", choices=("interval", "N", "Z"), default="interval")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    return ap


def _dump(d: dict) -> str:
    return json.dumps({"schema": SCHEMA, **d}, sort_keys=True, indent=2) + "\n"


def cmd_analyze(args) -> int:
    cfg, source = _load(args)
    req = AnalysisRequest(cfg, source, args.max_n, args.max_k, tuple(args.budget),
                          tuple(args.balanced) if args.balanced else None, args.entropy)
    report = run_analysis(req)
    _write(emit(report, args.format), args.out)
    return 2 if report.verdict.case == "no_hypothesis" else 0


def cmd_complexity(args) -> int:
    cfg, source = _load(args)
    AnalysisRequest(cfg, source, args.max_n, args.max_k)
    table = rect_complexity_table(cfg, args.max_n, args.max_k)
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "json":
        text = _dump({"source": source, "window_relative": True, **table.to_dict()})
    else:
        text = "\n".join(_table_text(table)) + "\n"
    _write(text, args.out)
    return 0


def cmd_deduce(args) -> int:
    cfg, source = _load(args)
    AnalysisRequest(cfg, source, args.max_n, args.max_k)
    table = rect_complexity_table(cfg, args.max_n, args.max_k)
    hit = smallest_hit(table)
    if hit is None:
        _write(_dump({"source": source, "status": "no_hypothesis"}) if args.format == "json"
               else "no (n,k) with P <= nk: nothing to deduce\n", args.out)
        return 2
    w = cfg.window
    side = min(args.frame, w.width, w.height)
    frame = Rect(w.x0 + (w.width - side) // 2, w.y0 + (w.height - side) // 2, side, side)
    try:
        report = find_generating_set(cfg, *hit)
        ds = determining_set(cfg, report, tuple(args.budget))
    except (HypothesisFails, ValueError) as e:
        _write(f"no determining set: {e}\n", args.out)
        return 2
    u = ds.centered_in(frame)
    seed = [(p.x + u.x, p.y + u.y) for p in ds.seed.points]
    if not all(frame.contains(p) for p in seed):
        _write(f"seed of {len(seed)} cells does not fit a {side}x{side} frame\n", args.out)
        return 2
    out = deduce_fixpoint(ds.languages, PartialColoring.from_config(cfg, seed, frame))
    wrong = sum(1 for p in out.final.domain if out.final.get(p) != cfg[p])
    result = {"source": source, "hit": list(hit), "frame": frame.as_dict(),
              "seed": [list(p) for p in sorted(seed)], "status": out.status,
              "forced": out.steps, "mismatches": wrong,
              "exact": out.status == "completed" and wrong == 0}
    if args.format == "json":
        text = _dump(result)
    else:
        text = (f"generating set in R_{{{hit[0]},{hit[1]}}}: {len(report.set.points)} points\n"
                f"seed: {len(seed)} cells, frame {side}x{side}\n"
                f"status: {out.status}, forced {out.steps} cells, {wrong} mismatches\n"
                + "\n".join(out.final.rows()) + "\n")
    _write(text, args.out)
    return 0


def cmd_finewilf(args) -> int:
    res = fine_wilf_reconstruct(args.segment, args.period)
    if args.format == "json":
        text = _dump({"segment": args.segment, "p": args.period, **res.to_dict()})
    else:
        lines = [f"status: {res.status}", f"periods: {' '.join(map(str, res.periods))}"]
        lines += [f"  period {c.period}: {c.prefix}" for c in res.completions]
        text = "\n".join(lines) + "\n"
    _write(text, args.out)
    return 0


def cmd_morsehedlund(args) -> int:
    v = morse_hedlund_check(args.word, args.n0, args.domain)
    if args.format == "json":
        text = _dump({"word": args.word, **v.to_dict()})
    else:
        text = (f"P({args.n0}) = {v.complexity}, applicable: {v.applicable}\n"
                f"interval: {v.interval}, period: {v.period}\n")
    _write(text, args.out)
    return 0 if v.applicable else 2


COMMANDS = {"analyze": cmd_analyze, "complexity": cmd_complexity, "deduce": cmd_deduce,
            "finewilf": cmd_finewilf, "morsehedlund": cmd_morsehedlund}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (NivatError, ValueError, OSError) as e:
        print(f"nivat: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
