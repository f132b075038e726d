"""Forcing colorings from pattern languages, plus the one-dimensional periodicity tools.

The core rule is the one-hole step: if a translate S+u of the language shape
has exactly one uncolored cell and every allowed pattern that matches the
colored cells agrees there, that cell is filled. Nothing else is inferred.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complexity import PatternLanguage, Shape, is_generated
from .config import Rect, WindowConfiguration
from .errors import DomainTooShort, FrameTooLarge, HypothesisViolation
from .geometry import Point, convex_lattice_set

EXHAUSTIVE_CAP = 24


@dataclass(frozen=True)
class PartialColoring:
    frame: Rect
    values: Mapping  # Point -> symbol

    def __post_init__(self):
        vals = {Point(*p): s for p, s in dict(self.values).items()}
        for p in vals:
            if not self.frame.contains(p):
                raise ValueError(f"{tuple(p)} lies outside the frame")
        object.__setattr__(self, "values", vals)

    @property
    def domain(self) -> frozenset:
        return frozenset(self.values)

    def get(self, p, default=None):
        return self.values.get(Point(*p), default)

    @classmethod
    def from_config(cls, cfg: WindowConfiguration, domain: Iterable | None = None,
                    frame: Rect | None = None) -> "PartialColoring":
        frame = frame or cfg.window
        pts = frame.points() if domain is None else domain
        return cls(frame, {Point(*p): cfg[p] for p in pts})

    def is_complete(self) -> bool:
        return len(self.values) == self.frame.area

    def rows(self, unknown: str = ".") -> list[str]:
        f = self.frame
        return ["".join(self.values.get(Point(x, y), unknown) for x in range(f.x0, f.x1 + 1))
                for y in range(f.y1, f.y0 - 1, -1)]


@dataclass(frozen=True)
class AmbiguityWitness:
    translate: Point
    hole: Point
    pattern_a: str
    pattern_b: str
    language: int = 0


@dataclass(frozen=True)
class DeductionOutcome:
    final: PartialColoring
    status: str  # completed, ambiguous, contradiction
    steps: int
    frontier: tuple = ()
    witness: AmbiguityWitness | None = None
    contradiction_cell: Point | None = None
    trace: tuple = ()


class _Engine:
    """Shared bookkeeping for one-hole forcing over several languages."""

    def __init__(self, langs: Sequence[PatternLanguage], start: PartialColoring):
        self.langs = list(langs)
        alpha = self.langs[0].alphabet
        for lang in self.langs[1:]:
            if lang.alphabet != alpha:
                raise ValueError("languages use different alphabets")
        self.alpha = alpha
        self.frame = start.frame
        self.code = {s: i for i, s in enumerate(alpha.symbols)}
        self.val: dict = {}
        for p, s in start.values.items():
            if s not in self.code:
                raise ValueError(f"symbol {s!r} not in the alphabet")
            self.val[p] = self.code[s]
        self.shapes = [lang.shape.points for lang in self.langs]
        self.ranges = []
        for pts in self.shapes:
            tr = Shape(pts).translates_in(self.frame)
            if tr.empty:
                raise ValueError("language shape does not fit in the frame")
            self.ranges.append(tr)

    def translates(self, li):
        tr = self.ranges[li]
        for uy in range(tr.y0, tr.y1 + 1):
            for ux in range(tr.x0, tr.x1 + 1):
                yield Point(ux, uy)

    def cells(self, li, u):
        return [Point(p.x + u.x, p.y + u.y) for p in self.shapes[li]]

    def covering(self, c):
        """(li, u, j) for every translate containing cell c."""
        for li, pts in enumerate(self.shapes):
            tr = self.ranges[li]
            for j, p in enumerate(pts):
                u = Point(c.x - p.x, c.y - p.y)
                if tr.x0 <= u.x <= tr.x1 and tr.y0 <= u.y <= tr.y1:
                    yield li, u, j

    def word(self, codes):
        return "".join(self.alpha.symbols[c] for c in codes)


def _as_list(langs):
    if isinstance(langs, PatternLanguage):
        return [langs]
    return list(langs)


def deduce_fixpoint(langs, start: PartialColoring, order: str = "row",
                    trace: bool = False) -> DeductionOutcome:
    """Apply the one-hole rule until nothing changes.

    Translates are processed in scan order (row-major over u by default,
    ``order="column"`` for column-major), always taking the first forcible
    translate, which is the same as rescanning from the start after each fill.
    """
    eng = _Engine(_as_list(langs), start)
    if order == "row":
        keyf = lambda li, u: (u.y, u.x, li)
    elif order == "column":
        keyf = lambda li, u: (u.x, u.y, li)
    else:
        raise ValueError("order must be 'row' or 'column'")
    val = eng.val
    missing: dict = {}
    heap: list = []
    lines: list[str] = []
    for li in range(len(eng.langs)):
        allowed = eng.langs[li].pattern_set()
        for u in eng.translates(li):
            cs = eng.cells(li, u)
            m = sum(1 for c in cs if c not in val)
            missing[(li, u)] = m
            if m == 0 and tuple(val[c] for c in cs) not in allowed:
                return _outcome(eng, start, "contradiction", 0, lines, cell=cs[0])
            if m == 1:
                heapq.heappush(heap, (keyf(li, u), li, u))
    steps = 0
    while heap:
        _, li, u = heapq.heappop(heap)
        if missing[(li, u)] != 1:
            continue
        cs = eng.cells(li, u)
        j = next(i for i, c in enumerate(cs) if c not in val)
        rest = tuple(val[c] for i, c in enumerate(cs) if i != j)
        vals = eng.langs[li].extensions(j).get(rest, ())
        if not vals:
            return _outcome(eng, start, "contradiction", steps, lines, cell=cs[j])
        if len(vals) > 1:
            continue  # stays a one-hole translate; reported at the fixpoint if still open
        hole = cs[j]
        val[hole] = vals[0]
        steps += 1
        if trace:
            lines.append(f"{hole.x} {hole.y} {eng.alpha.symbols[vals[0]]} {li}:{u.x},{u.y}")
        for lj, v, _ in eng.covering(hole):
            missing[(lj, v)] -= 1
            m = missing[(lj, v)]
            if m == 1:
                heapq.heappush(heap, (keyf(lj, v), lj, v))
            elif m == 0:
                cv = eng.cells(lj, v)
                if tuple(val[c] for c in cv) not in eng.langs[lj].pattern_set():
                    return _outcome(eng, start, "contradiction", steps, lines, cell=hole)
    if len(val) == eng.frame.area:
        return _outcome(eng, start, "completed", steps, lines)
    witness = None
    best = None
    for (li, u), m in missing.items():
        if m == 1 and (best is None or keyf(li, u) < best):
            best = keyf(li, u)
            cs = eng.cells(li, u)
            j = next(i for i, c in enumerate(cs) if c not in val)
            rest = [val.get(c) for c in cs]
            vals = eng.langs[li].extensions(j)[tuple(r for i, r in enumerate(rest) if i != j)]
            a, b = list(rest), list(rest)
            a[j], b[j] = vals[0], vals[1]
            witness = AmbiguityWitness(u, cs[j], eng.word(a), eng.word(b), li)
    return _outcome(eng, start, "ambiguous", steps, lines, witness=witness)


def _outcome(eng, start, status, steps, lines, cell=None, witness=None) -> DeductionOutcome:
    syms = eng.alpha.symbols
    final = PartialColoring(start.frame, {p: syms[c] for p, c in eng.val.items()})
    frontier = ()
    if status != "completed":
        frontier = tuple(p for p in eng.frame.points() if p not in eng.val)
    return DeductionOutcome(final, status, steps, frontier, witness, cell, tuple(lines))


# --- exhaustive extension check ------------------------------------------------

@dataclass(frozen=True)
class ExtensionVerdict:
    status: str  # unique, ambiguous, none, undetermined
    bases_checked: int
    witness: tuple | None = None  # (base coloring, completion a, completion b) or (base,)


def _completions(lang: PatternLanguage, base: dict, target: frozenset, limit: int = 2) -> list[dict]:
    """Up to ``limit`` colorings of ``target`` extending ``base`` whose S-translates inside target are allowed."""
    shape = lang.shape.points
    allowed = lang.pattern_set()
    free = sorted(p for p in target if p not in base)
    if len(free) > EXHAUSTIVE_CAP:
        raise FrameTooLarge(f"{len(free)} free cells exceed the cap of {EXHAUSTIVE_CAP}")
    xs = [p.x for p in target]
    ys = [p.y for p in target]
    trans = []
    for ux in range(min(xs) - max(p.x for p in shape), max(xs) - min(p.x for p in shape) + 1):
        for uy in range(min(ys) - max(p.y for p in shape), max(ys) - min(p.y for p in shape) + 1):
            cs = tuple(Point(p.x + ux, p.y + uy) for p in shape)
            if all(c in target for c in cs):
                trans.append(cs)
    order = {p: i for i, p in enumerate(free)}
    # check each translate as soon as its last free cell is assigned
    by_last: dict = {i: [] for i in range(-1, len(free))}
    for cs in trans:
        last = max((order[c] for c in cs if c in order), default=-1)
        by_last[last].append(cs)
    val = dict(base)
    if any(tuple(val[c] for c in cs) not in allowed for cs in by_last[-1]):
        return []
    n_sym = len(lang.alphabet)
    out: list[dict] = []

    def rec(i):
        if len(out) >= limit:
            return
        if i == len(free):
            out.append({p: val[p] for p in target})
            return
        p = free[i]
        for s in range(n_sym):
            val[p] = s
            if all(tuple(val[c] for c in cs) in allowed for cs in by_last[i]):
                rec(i + 1)
        del val[p]

    rec(0)
    return out


def unique_extension_check(lang: PatternLanguage, bases, base_region: Iterable,
                           target_region: Iterable, mode: str = "exhaustive") -> ExtensionVerdict:
    """Do colorings of the base region extend uniquely to the target region?

    ``bases`` is either a configuration (every placement of the target inside
    its window supplies one base coloring) or a single mapping point -> symbol.
    """
    base_region = frozenset(Point(*p) for p in base_region)
    target = frozenset(Point(*p) for p in target_region)
    if not base_region <= target:
        raise ValueError("base region must lie inside the target region")
    code = {s: i for i, s in enumerate(lang.alphabet.symbols)}
    syms = lang.alphabet.symbols
    if isinstance(bases, WindowConfiguration):
        shape = Shape.of(target)
        tr = shape.translates_in(bases.window)
        seen = set()
        colorings = []
        for u in tr.points():
            key = tuple(bases.code((p.x + u.x, p.y + u.y)) for p in sorted(base_region))
            if key not in seen:
                seen.add(key)
                colorings.append(dict(zip(sorted(base_region), key)))
    else:
        colorings = [{Point(*p): code[s] for p, s in dict(bases).items()}]
    if mode == "exhaustive" and len(target - base_region) > EXHAUSTIVE_CAP:
        raise FrameTooLarge(f"{len(target - base_region)} free cells exceed the cap of {EXHAUSTIVE_CAP}")

    def show(d):
        return {tuple(p): syms[c] for p, c in sorted(d.items())}

    verdicts = []
    for base in colorings:
        if mode == "exhaustive":
            comps = _completions(lang, base, target)
            if len(comps) >= 2:
                verdicts.append(("ambiguous", (show(base), show(comps[0]), show(comps[1]))))
            elif not comps:
                verdicts.append(("none", (show(base),)))
            else:
                verdicts.append(("unique", None))
        elif mode == "deduce":
            xs = [p.x for p in target]
            ys = [p.y for p in target]
            frame = Rect.from_bounds(min(xs), min(ys), max(xs), max(ys))
            start = PartialColoring(frame, {p: syms[c] for p, c in base.items()})
            out = deduce_fixpoint(lang, start)
            if out.status == "contradiction":
                verdicts.append(("none", (show(base),)))
            elif target <= out.final.domain:
                verdicts.append(("unique", None))
            else:
                verdicts.append(("undetermined", (show(base),)))
        else:
            raise ValueError("mode must be 'exhaustive' or 'deduce'")
    for status in ("ambiguous", "none", "undetermined"):
        for s, w in verdicts:
            if s == status:
                return ExtensionVerdict(status, len(colorings), w)
    return ExtensionVerdict("unique", len(colorings))


# --- column induction ------------------------------------------------------------

def row_fill(lang: PatternLanguage, start: PartialColoring, column: int,
             report=None, cross_check: bool = True) -> DeductionOutcome:
    """Fill one column by induction along the downward left edge w1 of the language shape.

    Going up, the top endpoint of w1 is the hole; going down, the bottom
    endpoint. The seed is a run of |w1 ∩ S| − 1 known cells in the column and
    everything a translate needs to the right of the column must be known.
    """
    S = convex_lattice_set(lang.shape.points)
    w1 = S.edge_parallel_to((0, -1)) if len(S) > 1 else None
    if w1 is None:
        raise HypothesisViolation("the shape has no boundary edge pointing straight down",
                                  clause="edge")
    top, bottom = w1.start, w1.end
    h = len(w1.lattice_points())
    if report is not None:
        gen = set(report.generated_vertices)
        ok = top in gen and bottom in gen
    else:
        ok = all(is_generated(lang, lang.shape, x).generated for x in (top, bottom))
    if not ok:
        raise HypothesisViolation("an endpoint of the downward edge is not generated",
                                  clause="endpoints_generated")
    frame = start.frame
    if not frame.x0 <= column <= frame.x1:
        raise HypothesisViolation("column lies outside the frame", clause="column")
    eng = _Engine([lang], start)
    val = eng.val
    ys = sorted(y for y in range(frame.y0, frame.y1 + 1) if Point(column, y) in val)
    runs = []
    for y in ys:
        if runs and runs[-1][1] == y - 1:
            runs[-1][1] = y
        else:
            runs.append([y, y])
    runs = [r for r in runs if r[1] - r[0] + 1 >= h - 1]
    if not runs:
        raise HypothesisViolation(f"no run of {h - 1} consecutive known cells in column {column}",
                                  clause="seed")
    lo, hi = max(runs, key=lambda r: (r[1] - r[0], -r[0]))
    shape = lang.shape.points
    tr = eng.ranges[0]
    allowed_ext = {x: lang.extensions(shape.index(x)) for x in (top, bottom)}
    steps = 0
    lines = []

    def step(anchor, y):
        u = Point(column - anchor.x, y - anchor.y)
        if not (tr.x0 <= u.x <= tr.x1 and tr.y0 <= u.y <= tr.y1):
            return "stop"
        cs = eng.cells(0, u)
        j = shape.index(anchor)
        if any(c not in val for i, c in enumerate(cs) if i != j):
            return "stop"
        rest = tuple(val[c] for i, c in enumerate(cs) if i != j)
        vals = allowed_ext[anchor].get(rest, ())
        if not vals:
            return "contradiction"
        assert len(vals) == 1, "generated endpoint admitted two values"
        hole = cs[j]
        if hole in val:
            if val[hole] != vals[0]:
                return "contradiction"
        else:
            val[hole] = vals[0]
            lines.append(f"{hole.x} {hole.y} {eng.alpha.symbols[vals[0]]} 0:{u.x},{u.y}")
        return "ok"

    status = None
    y = hi + 1
    while y <= frame.y1:
        r = step(top, y)
        if r != "ok":
            status = r if r == "contradiction" else None
            break
        steps += 1
        y += 1
    if status is None:
        y = lo - 1
        while y >= frame.y0:
            r = step(bottom, y)
            if r != "ok":
                status = r if r == "contradiction" else None
                break
            steps += 1
            y -= 1
    if status == "contradiction":
        out = _outcome(eng, start, "contradiction", steps, lines, cell=Point(column, y))
    elif len(val) == frame.area:
        out = _outcome(eng, start, "completed", steps, lines)
    else:
        out = _outcome(eng, start, "ambiguous", steps, lines)
    if cross_check and out.status != "contradiction":
        ref = deduce_fixpoint(lang, start)
        for p, s in out.final.values.items():
            if p in ref.final.values and ref.final.values[p] != s:
                raise AssertionError(f"column induction disagrees with fixpoint deduction at {p}")
    return out


# --- one dimension ----------------------------------------------------------------

def factor_count(word: Sequence, n: int) -> int:
    if n == 0:
        return 1
    return len({tuple(word[i:i + n]) for i in range(len(word) - n + 1)})


def smallest_period(word: Sequence, lo: int, hi: int, max_p: int) -> int | None:
    """Smallest p <= max_p with word[x] == word[x+p] whenever lo <= x < x+p <= hi."""
    for p in range(1, max_p + 1):
        if all(word[x] == word[x + p] for x in range(lo, hi - p + 1)):
            return p
    return None


@dataclass(frozen=True)
class MorseHedlundVerdict:
    applicable: bool
    complexity: int
    n0: int
    domain: str
    interval: tuple | None = None  # inclusive index range where periodicity is claimed
    period: int | None = None

    @property
    def holds(self) -> bool:
        return (not self.applicable) or self.period is not None

    def to_dict(self):
        return {"applicable": self.applicable, "complexity": self.complexity, "n0": self.n0,
                "domain": self.domain,
                "interval": list(self.interval) if self.interval else None,
                "period": self.period}


def morse_hedlund_check(word: Sequence, n0: int, domain: str = "interval") -> MorseHedlundVerdict:
    """If P(n0) <= n0, report a period p <= n0 on the interval where it is guaranteed.

    ``domain`` says which case the finite word stands for: a finite interval
    (positions n0 .. len-n0), a prefix of a one-sided sequence (positions
    > n0) or a window of a two-sided sequence (all positions).
    """
    if n0 < 1:
        raise ValueError("n0 must be positive")
    i = len(word)
    if domain == "interval" and i <= 3 * n0:
        raise DomainTooShort(f"length {i} is not larger than 3*n0 = {3 * n0}")
    if n0 > i:
        raise DomainTooShort("n0 exceeds the word length")
    P = factor_count(word, n0)
    if P > n0:
        return MorseHedlundVerdict(False, P, n0, domain)
    if domain == "interval":
        lo, hi = n0, i - n0
    elif domain == "N":
        lo, hi = n0 + 1, i - 1
    elif domain == "Z":
        lo, hi = 0, i - 1
    else:
        raise ValueError("domain must be 'interval', 'N' or 'Z'")
    return MorseHedlundVerdict(True, P, n0, domain, (lo, hi), smallest_period(word, lo, hi, n0))


@dataclass(frozen=True)
class Completion:
    period: int
    prefix: str  # one full period; '?' marks positions the segment leaves free

    def determined(self) -> bool:
        return "?" not in self.prefix

    def extend(self, length: int, start: int = 0) -> str:
        return "".join(self.prefix[(start + t) % self.period] for t in range(length))


@dataclass(frozen=True)
class FineWilfResult:
    status: str  # unique, ambiguous, inconsistent
    periods: tuple  # possible periods <= p
    completions: tuple  # distinct completions, one per class
    minimal_period: int | None = None

    def to_dict(self):
        return {"status": self.status, "periods": list(self.periods),
                "completions": [{"period": c.period, "prefix": c.prefix} for c in self.completions],
                "minimal_period": self.minimal_period}


def word_periods(segment: Sequence, p: int) -> list[int]:
    """q <= p that are periods of the segment; q >= len(segment) always counts."""
    m = len(segment)
    return [q for q in range(1, p + 1)
            if q >= m or all(segment[x] == segment[x + q] for x in range(m - q))]


def fine_wilf_reconstruct(segment: Sequence, p: int) -> FineWilfResult:
    """Periodic extensions (period <= p) of a finite segment, and whether they agree."""
    if p < 1:
        raise ValueError("p must be positive")
    seg = "".join(map(str, segment))
    m = len(seg)
    phi = word_periods(seg, p)
    if not phi:
        return FineWilfResult("inconsistent", (), ())
    comps = []
    for q in phi:
        pre = "".join(seg[t] if t < m else "?" for t in range(q))
        comps.append(Completion(q, pre))
    classes: list[Completion] = []
    for c in comps:
        if not c.determined():
            classes.append(c)
            continue
        same = False
        for d in classes:
            if d.determined():
                L = c.period * d.period // math.gcd(c.period, d.period)
                if c.extend(L) == d.extend(L):
                    same = True
                    break
        if not same:
            classes.append(c)
    ambiguous = len(classes) > 1 or any(not c.determined() for c in classes)
    if m >= 2 * p - 2 and m >= 1:
        assert not ambiguous, "segment of length >= 2p-2 with two distinct extensions"
    status = "ambiguous" if ambiguous else "unique"
    return FineWilfResult(status, tuple(phi), tuple(classes),
                          min(phi) if status == "unique" else None)


@dataclass(frozen=True)
class SharpnessResult:
    p: int
    q: int
    bound: int
    forced: bool
    witness: tuple | None  # (p-periodic word, q-periodic word) agreeing on bound-1 entries


def fine_wilf_sharpness(p: int, q: int, alphabet_size: int = 2) -> SharpnessResult:
    """Exhaustive check that p+q−gcd(p,q) agreeing entries are needed and suffice."""
    L = p + q - math.gcd(p, q)
    span = p * q // math.gcd(p, q) + L
    seqs_q: dict = {}
    for base in itertools.product(range(alphabet_size), repeat=q):
        full = tuple(base[t % q] for t in range(span))
        seqs_q.setdefault(full[:L - 1], []).append(full)
    forced = True
    witness = None
    for base in itertools.product(range(alphabet_size), repeat=p):
        full = tuple(base[t % p] for t in range(span))
        for other in seqs_q.get(full[:L - 1], ()):
            if other == full:
                continue
            if other[:L] == full[:L]:
                forced = False
            elif witness is None:
                witness = ("".join(map(str, full[:L])), "".join(map(str, other[:L])))
    return SharpnessResult(p, q, L, forced, witness)


# --- two-dimensional periods -----------------------------------------------------

@dataclass(frozen=True)
class PeriodReport:
    vectors: tuple
    classification: str  # doubly_periodic, singly_periodic, none
    basis: tuple

    def to_dict(self):
        return {"classification": self.classification,
                "vectors": [list(v) for v in self.vectors],
                "basis": [list(v) for v in self.basis]}


def detect_periods_2d(cfg: WindowConfiguration, max_shift: int | None = None) -> PeriodReport:
    """Vectors m with cfg(x) = cfg(x+m) on the overlap, which must cover half the window.

    Only one of ±m is listed (positive y, or y = 0 and positive x).
    """
    W, H = cfg.width, cfg.height
    c = cfg.cells
    mx_lim, my_lim = W // 2, H // 2
    if max_shift is not None:
        mx_lim, my_lim = min(mx_lim, max_shift), min(my_lim, max_shift)
    found = []
    for my in range(0, my_lim + 1):
        for mx in range(-mx_lim, mx_lim + 1):
            if my == 0 and mx <= 0:
                continue
            if 2 * (W - abs(mx)) * (H - my) < W * H:
                continue
            x0, x1 = max(0, -mx), W - max(0, mx)
            if np.array_equal(c[x0:x1, 0:H - my], c[x0 + mx:x1 + mx, my:H]):
                found.append((mx, my))
    found.sort(key=lambda v: (v[0] * v[0] + v[1] * v[1], v))
    basis = []
    if found:
        basis.append(found[0])
        for v in found[1:]:
            if v[0] * found[0][1] - v[1] * found[0][0] != 0:
                basis.append(v)
                break
    cls = "none" if not found else ("doubly_periodic" if len(basis) == 2 else "singly_periodic")
    return PeriodReport(tuple(found), cls, tuple(basis))
