"""Exact pattern collection and counting inside a window.

Patterns are stored as rows of symbol codes. Distinct rows are found with
exact integer keys (no hashing), so every count is exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .config import Alphabet, Rect, WindowConfiguration
from .errors import ShapeTooLarge
from .geometry import Point, rectangle


@dataclass(frozen=True)
class Shape:
    points: tuple  # sorted Points

    def __post_init__(self):
        pts = tuple(sorted(set(Point(*p) for p in self.points)))
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Iterable) -> "Shape":
        return cls(tuple(points))

    @classmethod
    def rect(cls, n: int, k: int, origin=(0, 0)) -> "Shape":
        return cls(tuple(rectangle(n, k, origin).points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return Point(*p) in self.points

    @property
    def normalized(self) -> "Shape":
        if not self.points:
            return self
        x0 = min(p.x for p in self.points)
        y0 = min(p.y for p in self.points)
        return Shape(tuple(Point(p.x - x0, p.y - y0) for p in self.points))

    def bbox(self):
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)

    def index(self, p) -> int:
        return self.points.index(Point(*p))

    def translates_in(self, window: Rect) -> Rect:
        """Rectangle of all u with shape + u inside ``window`` (possibly empty)."""
        if not self.points:
            return window
        xmin, ymin, xmax, ymax = self.bbox()
        return Rect(window.x0 - xmin, window.y0 - ymin,
                    window.width - (xmax - xmin), window.height - (ymax - ymin))


def _as_shape(s) -> Shape:
    return s if isinstance(s, Shape) else Shape.of(getattr(s, "points", s))


def unique_rows(mat: np.ndarray, base: int) -> np.ndarray:
    """Distinct rows of a code matrix, sorted lexicographically."""
    rows, cols = mat.shape
    if rows == 0:
        return mat[:0]
    if cols == 0:
        return mat[:1]
    if cols * math.log2(max(base, 2)) < 62:
        key = np.zeros(rows, dtype=np.int64)
        for j in range(cols):
            key = key * base + mat[:, j]
        _, idx = np.unique(key, return_index=True)
        return mat[idx]  # keys are order-preserving, so idx is already lexicographic
    # long shapes: dense renaming one column at a time, exact
    ids = mat[:, 0].astype(np.int64)
    for j in range(1, cols):
        ids = np.unique(ids * base + mat[:, j], return_inverse=True)[1].reshape(-1)
    _, idx = np.unique(ids, return_index=True)
    return mat[idx]


@dataclass(frozen=True, eq=False)
class PatternLanguage:
    """Distinct colorings of ``shape`` seen at the admissible translates of a window."""

    shape: Shape
    codes: np.ndarray  # (P, |shape|), distinct rows in lexicographic order
    alphabet: Alphabet
    window: Rect
    translates: Rect
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def count(self) -> int:
        return int(self.codes.shape[0])

    def __len__(self):
        return self.count

    @property
    def patterns(self) -> list[str]:
        syms = self.alphabet.symbols
        return ["".join(syms[c] for c in row) for row in self.codes]

    def pattern_set(self) -> frozenset:
        if "set" not in self._cache:
            self._cache["set"] = frozenset(tuple(int(c) for c in row) for row in self.codes)
        return self._cache["set"]

    def contains(self, pattern) -> bool:
        if isinstance(pattern, str):
            pattern = tuple(self.alphabet.index(s) for s in pattern)
        return tuple(pattern) in self.pattern_set()

    def _columns(self, points) -> list[int]:
        pos = {p: i for i, p in enumerate(self.shape.points)}
        try:
            return [pos[Point(*p)] for p in points]
        except KeyError as exc:
            raise ValueError(f"point {exc.args[0]} not in the language shape") from None

    def restrict(self, points) -> "PatternLanguage":
        """Project onto a subshape; the translate set stays that of the full shape."""
        sub = _as_shape(points)
        key = ("restrict", sub.points)
        if key not in self._cache:
            cols = self._columns(sub.points)
            codes = unique_rows(self.codes[:, cols], len(self.alphabet))
            self._cache[key] = PatternLanguage(sub, codes, self.alphabet, self.window, self.translates)
        return self._cache[key]

    def complexity(self, points=None) -> int:
        if points is None:
            return self.count
        sub = _as_shape(points)
        if not sub.points:
            return 1
        return self.restrict(sub).count

    def discrepancy(self, points=None) -> int:
        sub = self.shape if points is None else _as_shape(points)
        return self.complexity(sub) - len(sub)

    def extensions(self, j: int) -> dict:
        """Map from the pattern with column j removed to the set of codes seen at j."""
        key = ("ext", j)
        if key not in self._cache:
            table: dict = {}
            for row in self.codes:
                t = tuple(int(c) for c in row)
                table.setdefault(t[:j] + t[j + 1:], set()).add(t[j])
            self._cache[key] = {k: tuple(sorted(v)) for k, v in table.items()}
        return self._cache[key]

    def to_text(self) -> str:
        head = " ".join(f"{p.x},{p.y}" for p in self.shape.points)
        return head + "\n" + "".join(p + "\n" for p in self.patterns)


Source = Union[WindowConfiguration, PatternLanguage]


def collect_patterns(cfg: WindowConfiguration, shape) -> PatternLanguage:
    """W(S, cfg): distinct colorings of S over every translate inside the window."""
    shape = _as_shape(shape)
    if not shape.points:
        raise ValueError("empty shape")
    win = cfg.window
    tr = shape.translates_in(win)
    if tr.empty:
        raise ShapeTooLarge(f"no translate of the shape fits in {win}")
    nx, ny = tr.width, tr.height
    cols = []
    for p in shape.points:
        ox = p.x + tr.x0 - win.x0
        oy = p.y + tr.y0 - win.y0
        cols.append(cfg.cells[ox:ox + nx, oy:oy + ny].reshape(-1))
    mat = np.stack(cols, axis=1)
    codes = unique_rows(mat, len(cfg.alphabet))
    return PatternLanguage(shape, codes, cfg.alphabet, win, tr)


def _language(source: Source, shape) -> tuple[PatternLanguage, Shape]:
    shape = _as_shape(shape)
    if isinstance(source, PatternLanguage):
        return source, shape
    return collect_patterns(source, shape), shape


def complexity(source: Source, shape) -> int:
    lang, shape = _language(source, shape)
    return lang.complexity(shape)


def discrepancy(source: Source, shape) -> int:
    """D(S) = P(S) − |S|."""
    lang, shape = _language(source, shape)
    return lang.discrepancy(shape)


@dataclass(frozen=True)
class GeneratedResult:
    generated: bool
    point: Point
    witness: tuple | None = None  # (rest, pattern_a, pattern_b) as symbol strings

    def __bool__(self):
        return self.generated


def is_generated(source: Source, shape, x) -> GeneratedResult:
    """Whether every coloring of S∖{x} extends uniquely to a coloring of S."""
    lang, shape = _language(source, shape)
    x = Point(*x)
    if x not in shape.points:
        raise ValueError("x must belong to the shape")
    if len(shape) < 2:
        raise ValueError("shape needs at least two points")
    sub = lang.restrict(shape) if lang.shape != shape else lang
    j = sub.shape.index(x)
    syms = lang.alphabet.symbols
    for rest, vals in sorted(sub.extensions(j).items()):
        if len(vals) > 1:
            a = rest[:j] + (vals[0],) + rest[j:]
            b = rest[:j] + (vals[1],) + rest[j:]

            def word(t):
                return "".join(syms[c] for c in t)
            return GeneratedResult(False, x, (word(rest), word(a), word(b)))
    return GeneratedResult(True, x)


def nonunique_extension_count(source: Source, shape, subshape) -> int:
    """Number of subshape colorings with at least two extensions to the shape."""
    lang, shape = _language(source, shape)
    sub = _as_shape(subshape)
    if not set(sub.points) <= set(shape.points):
        raise ValueError("subshape must be contained in shape")
    full = lang.restrict(shape) if lang.shape != shape else lang
    cols = full._columns(sub.points)
    proj = full.codes[:, cols]
    if proj.shape[1] == 0:
        return 1 if full.count > 1 else 0
    base = len(lang.alphabet)
    ids = np.zeros(proj.shape[0], dtype=np.int64)
    for j in range(proj.shape[1]):
        ids = np.unique(ids * base + proj[:, j], return_inverse=True)[1].reshape(-1)
    _, counts = np.unique(ids, return_counts=True)
    return int(np.count_nonzero(counts > 1))


@dataclass
class ComplexityTable:
    counts: np.ndarray  # counts[n-1, k-1] = P(n, k)
    window: Rect
    alphabet_size: int

    @property
    def max_n(self):
        return self.counts.shape[0]

    @property
    def max_k(self):
        return self.counts.shape[1]

    def P(self, n: int, k: int) -> int:
        return int(self.counts[n - 1, k - 1])

    def D(self, n: int, k: int) -> int:
        return self.P(n, k) - n * k

    def entries(self):
        for n in range(1, self.max_n + 1):
            for k in range(1, self.max_k + 1):
                yield n, k, self.P(n, k)

    def hits(self) -> list[tuple[int, int]]:
        """(n, k) with P(n, k) <= nk."""
        return [(n, k) for n, k, p in self.entries() if p <= n * k]

    def strong_hits(self) -> list[tuple[int, int]]:
        """(n, k) with P(n, k) <= nk/2."""
        return [(n, k) for n, k, p in self.entries() if 2 * p <= n * k]

    def to_csv(self) -> str:
        lines = ["n,k,P,D"]
        lines += [f"{n},{k},{p},{p - n * k}" for n, k, p in self.entries()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "window": self.window.as_dict(),
            "alphabet_size": self.alphabet_size,
            "entries": [{"n": n, "k": k, "P": p, "D": p - n * k} for n, k, p in self.entries()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _dense(keys: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inv = np.unique(keys.reshape(-1), return_inverse=True)
    return inv.reshape(keys.shape).astype(np.int64), int(uniq.shape[0])


def rect_complexity_table(cfg: WindowConfiguration, max_n: int, max_k: int) -> ComplexityTable:
    """P(n, k) for all 1 <= n <= max_n, 1 <= k <= max_k.

    Each n×k block gets an exact dense id: horizontal words of length n are
    renamed from (word of length n-1, next symbol) pairs, then blocks of
    height k from (block of height k-1, next row word) pairs. Once every
    translate carries a distinct block, all larger blocks are distinct too
    and the count is just the number of translates.
    """
    if max_n < 1 or max_k < 1:
        raise ValueError("max_n and max_k must be positive")
    W, H = cfg.width, cfg.height
    if max_n > W or max_k > H:
        raise ShapeTooLarge(f"R_{{{max_n},{max_k}}} does not fit in a {W}x{H} window")
    base = len(cfg.alphabet)
    codes = cfg.cells.astype(np.int64)
    counts = np.zeros((max_n, max_k), dtype=np.int64)
    row, row_count = _dense(codes)
    all_distinct_from = None  # smallest k at which every translate was distinct, for the previous n
    for n in range(1, max_n + 1):
        if n > 1:
            row, row_count = _dense(row[:W - n + 1, :] * base + codes[n - 1:, :])
        block, count = row, row_count
        for k in range(1, max_k + 1):
            ntrans = (W - n + 1) * (H - k + 1)
            if all_distinct_from is not None and k >= all_distinct_from:
                counts[n - 1, k - 1] = ntrans
                continue
            if k > 1:
                block, count = _dense(block[:, :H - k + 1] * row_count + row[:, k - 1:])
            counts[n - 1, k - 1] = count
            if count == ntrans:
                all_distinct_from = k if all_distinct_from is None else min(all_distinct_from, k)
                counts[n - 1, k:] = [(W - n + 1) * (H - kk + 1) for kk in range(k + 1, max_k + 1)]
                break
    return ComplexityTable(counts, cfg.window, base)


@dataclass(frozen=True)
class EntropyRow:
    size: int
    P: int
    exponent: int
    applicable: bool
    holds: bool


@dataclass(frozen=True)
class EntropyReport:
    n: int
    k: int
    alphabet_size: int
    rows: tuple
    max_ratio: float
    all_applicable_hold: bool

    def to_dict(self):
        return {
            "n": self.n, "k": self.k, "alphabet_size": self.alphabet_size,
            "max_ratio": self.max_ratio, "all_applicable_hold": self.all_applicable_hold,
            "rows": [r.__dict__ for r in self.rows],
        }


def entropy_bound_check(cfg: WindowConfiguration, n: int, k: int, max_size: int) -> EntropyReport:
    """Check P(R_{m,m}) <= |A|^(2nm + 2km − 4nk) for m = 1..max_size.

    The bound is derived for m > 2n and m > 2k; smaller m are evaluated and
    marked as not applicable.
    """
    table = rect_complexity_table(cfg, max_size, max_size)
    A = len(cfg.alphabet)
    rows = []
    ratio = 0.0
    for m in range(1, max_size + 1):
        P = table.P(m, m)
        e = 2 * n * m + 2 * k * m - 4 * n * k
        holds = e >= 0 and P <= A ** e
        rows.append(EntropyRow(m, P, e, m > 2 * n and m > 2 * k, holds))
        ratio = max(ratio, math.log(P) / (m * m))
    ok = all(r.holds for r in rows if r.applicable)
    return EntropyReport(n, k, A, tuple(rows), ratio, ok)
