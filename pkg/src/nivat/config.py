"""Finite-window colorings of Z², pattern generators and grid files."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import BadSpec, EmptyInput, OutOfWindow, RaggedRows
from .geometry import Point, UnimodularMap


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        syms = tuple(self.symbols)
        object.__setattr__(self, "symbols", syms)
        if len(syms) < 2:
            raise ValueError("alphabet needs at least two symbols")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        for s in syms:
            if not (isinstance(s, str) and len(s) == 1 and s.isprintable() and not s.isspace()):
                raise ValueError(f"bad symbol {s!r}")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, s: str) -> int:
        return self.symbols.index(s)

    def __str__(self):
        return "".join(self.symbols)


def infer_alphabet(symbols) -> Alphabet:
    """First-occurrence order; a lone symbol is padded with the first unused of '0', '1'."""
    seen = list(dict.fromkeys(symbols))
    if len(seen) == 1:
        seen.append("0" if seen[0] != "0" else "1")
    return Alphabet(tuple(seen))


@dataclass(frozen=True)
class Rect:
    """Lattice rectangle origin + [0, width) × [0, height)."""

    x0: int
    y0: int
    width: int
    height: int

    @classmethod
    def from_bounds(cls, xmin, ymin, xmax, ymax) -> "Rect":
        return cls(xmin, ymin, xmax - xmin + 1, ymax - ymin + 1)

    @classmethod
    def centered(cls, width, height=None) -> "Rect":
        height = width if height is None else height
        return cls(-(width // 2), -(height // 2), width, height)

    @property
    def x1(self):
        return self.x0 + self.width - 1

    @property
    def y1(self):
        return self.y0 + self.height - 1

    @property
    def empty(self):
        return self.width <= 0 or self.height <= 0

    @property
    def area(self):
        return max(self.width, 0) * max(self.height, 0)

    def contains(self, p) -> bool:
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1

    def points(self) -> Iterator[Point]:
        for y in range(self.y0, self.y1 + 1):
            for x in range(self.x0, self.x1 + 1):
                yield Point(x, y)

    def as_dict(self):
        return {"x0": self.x0, "y0": self.y0, "width": self.width, "height": self.height}


@dataclass(frozen=True, eq=False)
class WindowConfiguration:
    """A coloring of a rectangular window; ``cells[x - x0, y - y0]`` holds symbol codes."""

    alphabet: Alphabet
    origin: Point
    cells: np.ndarray

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.uint8, copy=True)
        if cells.ndim != 2 or cells.size == 0:
            raise ValueError("cells must be a nonempty 2D array")
        if cells.max() >= len(self.alphabet):
            raise ValueError("cell code outside the alphabet")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "origin", Point(*self.origin))

    @property
    def width(self):
        return self.cells.shape[0]

    @property
    def height(self):
        return self.cells.shape[1]

    @property
    def window(self) -> Rect:
        return Rect(self.origin.x, self.origin.y, self.width, self.height)

    def code(self, p) -> int:
        if not self.window.contains(p):
            raise OutOfWindow(f"{tuple(p)} outside {self.window}")
        return int(self.cells[p[0] - self.origin.x, p[1] - self.origin.y])

    def __getitem__(self, p) -> str:
        return self.alphabet.symbols[self.code(p)]

    def restrict(self, rect: Rect) -> "WindowConfiguration":
        w = self.window
        if rect.empty or not (w.contains((rect.x0, rect.y0)) and w.contains((rect.x1, rect.y1))):
            raise OutOfWindow(f"{rect} not inside {w}")
        ox, oy = rect.x0 - w.x0, rect.y0 - w.y0
        return WindowConfiguration(self.alphabet, (rect.x0, rect.y0),
                                   self.cells[ox:ox + rect.width, oy:oy + rect.height])

    def __eq__(self, other):
        if not isinstance(other, WindowConfiguration):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.origin == other.origin
                and np.array_equal(self.cells, other.cells))

    def rows(self) -> list[str]:
        """Rows as strings, top row first."""
        syms = np.array(self.alphabet.symbols)
        return ["".join(syms[self.cells[:, j]]) for j in range(self.height - 1, -1, -1)]


def translate(cfg: WindowConfiguration, u) -> WindowConfiguration:
    """T^u: the new value at x is the old value at x + u."""
    return WindowConfiguration(cfg.alphabet, (cfg.origin.x - u[0], cfg.origin.y - u[1]), cfg.cells)


def recoordinatize(cfg: WindowConfiguration, A: UnimodularMap, target: Rect) -> WindowConfiguration:
    """The coloring x ↦ cfg(A x) on ``target``."""
    xs, ys = np.meshgrid(np.arange(target.x0, target.x1 + 1), np.arange(target.y0, target.y1 + 1),
                         indexing="ij")
    mx = A.a * xs + A.b * ys + A.tx - cfg.origin.x
    my = A.c * xs + A.d * ys + A.ty - cfg.origin.y
    if mx.min() < 0 or my.min() < 0 or mx.max() >= cfg.width or my.max() >= cfg.height:
        raise OutOfWindow("image of the target window leaves the stored window")
    return WindowConfiguration(cfg.alphabet, (target.x0, target.y0), cfg.cells[mx, my])


# --- generators -------------------------------------------------------------

GENERATOR_KINDS = ("constant", "delta", "periodic_motif", "product_1d", "mechanical")

_PARTIAL_QUOTIENTS = {"golden": 1, "silver": 2}


def convergent(name: str, depth: int) -> tuple[int, int]:
    """depth-th convergent of [0; a, a, a, ...] (golden: a=1, silver: a=2)."""
    if name not in _PARTIAL_QUOTIENTS:
        raise BadSpec(f"unknown irrational {name!r}")
    if depth < 1:
        raise BadSpec("convergent depth must be positive")
    a = _PARTIAL_QUOTIENTS[name]
    h, hp, k, kp = 0, 1, 1, 0
    for _ in range(depth):
        h, hp = a * h + hp, h
        k, kp = a * k + kp, k
    return h, k


def hermite_basis(p, q) -> tuple[int, int, int]:
    """(a, b, c) with lattice basis (a, 0), (b, c), a, c > 0, 0 <= b < a."""
    det = p[0] * q[1] - p[1] * q[0]
    if det == 0:
        raise BadSpec("period vectors are linearly dependent")
    c = math.gcd(p[1], q[1])
    if c == 0:
        raise BadSpec("period vectors are linearly dependent")
    # s*p_y + t*q_y = c
    s, t = _bezout(p[1], q[1])
    b0 = s * p[0] + t * q[0]
    a = abs(det) // c
    return a, b0 % a, c


def _bezout(m: int, n: int) -> tuple[int, int]:
    """(s, t) with s*m + t*n = gcd(|m|, |n|)."""
    r0, r1, s0, s1, t0, t1 = abs(m), abs(n), 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return s0 * (1 if m >= 0 else -1), t0 * (1 if n >= 0 else -1)


def mechanical_bits(n: np.ndarray, num: int, den: int, rnum: int = 0, rden: int = 1) -> np.ndarray:
    """s(n) = ⌊(n+1)α+ρ⌋ − ⌊nα+ρ⌋ for α = num/den, ρ = rnum/rden, exactly."""
    D = den * rden
    base = rnum * den

    def fl(m):
        return (m * num * rden + base) // D

    return (fl(n + 1) - fl(n)).astype(np.uint8)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    alphabet: str = "01"
    symbol: str | None = None
    position: tuple = (0, 0)
    motif: tuple = ()
    periods: tuple = ()
    axis: str = "x"
    word: str = ""
    slope_num: int | None = None
    slope_den: int | None = None
    intercept_num: int = 0
    intercept_den: int = 1
    irrational: str | None = None
    depth: int | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        d = dict(d)
        kw = {}
        for key in ("kind", "alphabet", "symbol", "axis", "word", "irrational"):
            if key in d:
                kw[key] = str(d.pop(key))
        for key in ("slope_num", "slope_den", "intercept_num", "intercept_den", "depth"):
            if key in d:
                try:
                    kw[key] = int(d.pop(key))
                except (TypeError, ValueError):
                    raise BadSpec(f"{key} must be an integer") from None
        if "position" in d:
            kw["position"] = tuple(int(v) for v in _as_list(d.pop("position")))
        if "motif" in d:
            m = d.pop("motif")
            kw["motif"] = tuple(m.split("/")) if isinstance(m, str) else tuple(m)
        if "periods" in d:
            p = d.pop("periods")
            if isinstance(p, str):
                p = [[int(c) for c in v.split(",")] for v in p.split(";")]
            kw["periods"] = tuple(tuple(int(c) for c in v) for v in p)
        if "kind" not in kw:
            raise BadSpec("generator spec needs a kind")
        return cls(**kw)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSpec":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_pairs(cls, pairs) -> tuple["GeneratorSpec", dict]:
        """Parse KEY=VAL strings; window keys (width, height, x0, y0) are returned separately."""
        d, window = {}, {}
        for item in pairs:
            if "=" not in item:
                raise BadSpec(f"expected KEY=VAL, got {item!r}")
            k, v = item.split("=", 1)
            if k in ("width", "height", "x0", "y0"):
                window[k] = int(v)
            else:
                d[k] = v
        return cls.from_dict(d), window

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "alphabet": self.alphabet}
        if self.kind == "constant":
            out["symbol"] = self.symbol or self.alphabet[0]
        elif self.kind == "delta":
            out["position"] = list(self.position)
        elif self.kind == "periodic_motif":
            out["motif"] = list(self.motif)
            out["periods"] = [list(p) for p in self.periods]
        elif self.kind == "product_1d":
            out["axis"], out["word"] = self.axis, self.word
        elif self.kind == "mechanical":
            num, den = self.slope()
            out.update(axis=self.axis, slope_num=num, slope_den=den,
                       intercept_num=self.intercept_num, intercept_den=self.intercept_den)
        return out

    def slope(self) -> tuple[int, int]:
        if self.irrational is not None:
            return convergent(self.irrational, self.depth or 1)
        if self.slope_num is None or self.slope_den is None:
            raise BadSpec("mechanical spec needs slope_num and slope_den (or irrational + depth)")
        return self.slope_num, self.slope_den


def _as_list(v):
    if isinstance(v, str):
        return v.split(",")
    return list(v)


def _grid(window: Rect):
    xs = np.arange(window.x0, window.x1 + 1, dtype=np.int64)
    ys = np.arange(window.y0, window.y1 + 1, dtype=np.int64)
    return np.meshgrid(xs, ys, indexing="ij")


def materialize(spec: GeneratorSpec, window: Rect) -> WindowConfiguration:
    """Color ``window`` deterministically according to ``spec``."""
    if window.empty:
        raise ValueError("empty window")
    try:
        alpha = Alphabet(tuple(spec.alphabet))
    except ValueError as exc:
        raise BadSpec(str(exc)) from None
    X, Y = _grid(window)
    kind = spec.kind
    if kind == "constant":
        sym = spec.symbol if spec.symbol is not None else alpha.symbols[0]
        if sym not in alpha.symbols:
            raise BadSpec(f"symbol {sym!r} not in alphabet")
        cells = np.full(X.shape, alpha.index(sym), dtype=np.uint8)
    elif kind == "delta":
        px, py = spec.position
        cells = ((X == px) & (Y == py)).astype(np.uint8)
    elif kind == "periodic_motif":
        cells = _motif_cells(spec, alpha, X, Y)
    elif kind == "product_1d":
        if not spec.word:
            raise BadSpec("product_1d needs a nonempty word")
        if any(s not in alpha.symbols for s in spec.word):
            raise BadSpec("word uses symbols outside the alphabet")
        codes = np.array([alpha.index(s) for s in spec.word], dtype=np.uint8)
        coord = _axis_coord(spec.axis, X, Y)
        cells = codes[coord % len(codes)]
    elif kind == "mechanical":
        num, den = spec.slope()
        if den <= 0 or not (0 < num < den):
            raise BadSpec("mechanical slope must lie strictly between 0 and 1")
        if spec.intercept_den <= 0:
            raise BadSpec("intercept denominator must be positive")
        coord = _axis_coord(spec.axis, X, Y)
        cells = mechanical_bits(coord, num, den, spec.intercept_num, spec.intercept_den)
    else:
        raise BadSpec(f"unknown generator kind {kind!r}")
    return WindowConfiguration(alpha, (window.x0, window.y0), cells)


def _axis_coord(axis, X, Y):
    if axis == "x":
        return X
    if axis == "y":
        return Y
    raise BadSpec(f"axis must be 'x' or 'y', got {axis!r}")


def _motif_cells(spec: GeneratorSpec, alpha: Alphabet, X, Y):
    if len(spec.periods) != 2:
        raise BadSpec("periodic_motif needs two period vectors")
    a, b, c = hermite_basis(*spec.periods)
    motif = spec.motif
    if len(motif) != c or any(len(row) != a for row in motif):
        raise BadSpec(f"motif must have {c} rows of length {a} for these periods")
    if any(s not in alpha.symbols for row in motif for s in row):
        raise BadSpec("motif uses symbols outside the alphabet")
    # motif rows are listed top first, like grid files
    table = np.array([[alpha.index(row[i]) for row in reversed(motif)] for i in range(a)],
                     dtype=np.uint8)
    k = np.floor_divide(Y, c)
    yr = Y - k * c
    xr = np.mod(X - k * b, a)
    return table[xr, yr]


def motif_for(periods, rng: np.random.Generator, alphabet: str = "01") -> GeneratorSpec:
    """A random periodic_motif spec with the given period vectors."""
    a, _, c = hermite_basis(*periods)
    rows = tuple("".join(rng.choice(list(alphabet), size=a)) for _ in range(c))
    return GeneratorSpec("periodic_motif", alphabet=alphabet, motif=rows, periods=tuple(periods))


# --- grid text --------------------------------------------------------------

def parse_grid(text: str, alphabet: Alphabet | None = None) -> WindowConfiguration:
    origin = (0, 0)
    rows: list[tuple[int, str]] = []
    declared = alphabet
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "origin" and len(parts) == 3:
                origin = (int(parts[1]), int(parts[2]))
            elif parts and parts[0] == "alphabet" and len(parts) == 2 and declared is None:
                declared = Alphabet(tuple(parts[1]))
            continue
        if not line.strip():
            continue
        rows.append((lineno, line))
    if not rows:
        raise EmptyInput("grid has no cells")
    width = len(rows[0][1])
    for lineno, line in rows:
        if len(line) != width:
            raise RaggedRows(f"line {lineno}: expected {width} symbols, got {len(line)}", line=lineno)
    alpha = declared or infer_alphabet(ch for _, line in rows for ch in line)
    lookup = {s: i for i, s in enumerate(alpha.symbols)}
    height = len(rows)
    cells = np.empty((width, height), dtype=np.uint8)
    for r, (lineno, line) in enumerate(rows):
        y = height - 1 - r
        for x, ch in enumerate(line):
            if ch not in lookup:
                raise ValueError(f"line {lineno}: symbol {ch!r} not in alphabet")
            cells[x, y] = lookup[ch]
    return WindowConfiguration(alpha, origin, cells)


def load_grid(source) -> WindowConfiguration:
    """Read a grid from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    return parse_grid(text)


def save_grid(cfg: WindowConfiguration, dest=None) -> str:
    """Grid text with origin and alphabet headers; written to ``dest`` if given."""
    out = io.StringIO()
    out.write(f"#origin {cfg.origin.x} {cfg.origin.y}\n")
    out.write(f"#alphabet {cfg.alphabet}\n")
    for row in cfg.rows():
        out.write(row + "\n")
    text = out.getvalue()
    if dest is not None:
        if isinstance(dest, (str, Path)):
            Path(dest).write_text(text)
        else:
            dest.write(text)
    return text


def from_rows(rows, origin=(0, 0), alphabet: str | None = None) -> WindowConfiguration:
    """Build a configuration from row strings, top row first."""
    alpha = Alphabet(tuple(alphabet)) if alphabet else None
    cfg = parse_grid("\n".join(rows), alpha)
    return WindowConfiguration(cfg.alphabet, origin, cfg.cells)


def from_array(codes, alphabet: str = "01", origin=(0, 0)) -> WindowConfiguration:
    """Wrap a code array indexed [x, y]."""
    return WindowConfiguration(Alphabet(tuple(alphabet)), origin, np.asarray(codes))
