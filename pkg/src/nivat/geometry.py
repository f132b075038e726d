"""Exact geometry of finite convex subsets of the integer lattice.

Everything here is integer or rational arithmetic. A convex lattice set is
stored with its points, its hull vertices in counterclockwise order and its
oriented boundary edges. Collinear sets get two antiparallel edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateSet, EmptyBorder


class Point(NamedTuple):
    x: int
    y: int


def add(p, v) -> Point:
    return Point(p[0] + v[0], p[1] + v[1])


def sub(p, q) -> Point:
    return Point(p[0] - q[0], p[1] - q[1])


def cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def primitive(v) -> tuple[int, int]:
    g = math.gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no direction")
    return v[0] // g, v[1] // g


@dataclass(frozen=True)
class DirectedRationalLine:
    """Oriented rational line: a primitive direction and a point on the line."""

    dx: int
    dy: int
    anchor: Point = Point(0, 0)

    def __post_init__(self):
        if math.gcd(self.dx, self.dy) != 1:
            raise ValueError(f"direction ({self.dx},{self.dy}) is not primitive")
        object.__setattr__(self, "anchor", Point(*self.anchor))

    @classmethod
    def through(cls, v, anchor=(0, 0)) -> "DirectedRationalLine":
        """Line in the direction of any nonzero vector ``v``."""
        dx, dy = primitive(v)
        return cls(dx, dy, Point(*anchor))

    @property
    def direction(self) -> tuple[int, int]:
        return (self.dx, self.dy)

    def reversed(self) -> "DirectedRationalLine":
        return DirectedRationalLine(-self.dx, -self.dy, self.anchor)

    def at_origin(self) -> "DirectedRationalLine":
        return DirectedRationalLine(self.dx, self.dy)

    def offset(self, p) -> int:
        """Signed lattice offset of ``p``; positive means left of the line."""
        return cross(self.direction, sub(p, self.anchor))

    def sort_key(self):
        return (abs(self.dx), abs(self.dy), self.dx < 0, self.dy < 0)

    def __str__(self):
        return f"({self.dx},{self.dy})"


@dataclass(frozen=True)
class DirectedEdge:
    start: Point
    end: Point

    def __post_init__(self):
        object.__setattr__(self, "start", Point(*self.start))
        object.__setattr__(self, "end", Point(*self.end))
        if self.start == self.end:
            raise ValueError("edge endpoints coincide")

    @property
    def direction(self) -> DirectedRationalLine:
        return DirectedRationalLine.through(sub(self.end, self.start), self.start)

    @property
    def vector(self) -> Point:
        return sub(self.end, self.start)

    def lattice_points(self) -> tuple[Point, ...]:
        """Lattice points on the edge, from start to end."""
        d = self.direction
        g = edge_lattice_count(self) - 1
        return tuple(Point(self.start.x + t * d.dx, self.start.y + t * d.dy)
                     for t in range(g + 1))

    def translate(self, v) -> "DirectedEdge":
        return DirectedEdge(add(self.start, v), add(self.end, v))


def edge_lattice_count(e: DirectedEdge) -> int:
    """Number of lattice points on the closed segment, endpoints included."""
    return math.gcd(e.end.x - e.start.x, e.end.y - e.start.y) + 1


def _hull(points: Sequence[Point]) -> list[Point]:
    # Andrew's monotone chain, collinear points dropped, CCW from the lexicographic minimum
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(sub(out[-1], out[-2]), sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class ConvexLatticeSet:
    """A finite set S with S = conv(S) ∩ Z², plus its oriented boundary."""

    points: frozenset
    hull_vertices: tuple
    edges: tuple

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.sorted_points())

    def __contains__(self, p):
        return Point(*p) in self.points

    def sorted_points(self) -> list[Point]:
        return sorted(self.points)

    @property
    def is_degenerate(self) -> bool:
        return len(self.hull_vertices) <= 2

    @property
    def extreme_points(self) -> tuple[Point, ...]:
        return self.hull_vertices

    def edge_index(self, e: DirectedEdge) -> int:
        return self.edges.index(e)

    def succ(self, e: DirectedEdge) -> DirectedEdge:
        i = self.edge_index(e)
        return self.edges[(i + 1) % len(self.edges)]

    def pred(self, e: DirectedEdge) -> DirectedEdge:
        i = self.edge_index(e)
        return self.edges[i - 1]

    def edge_parallel_to(self, v) -> DirectedEdge | None:
        """The boundary edge whose direction is the primitive vector of ``v``."""
        d = primitive(v)
        for e in self.edges:
            if e.direction.direction == d:
                return e
        return None

    def area2(self) -> int:
        """Twice the area of conv(S)."""
        h = self.hull_vertices
        if len(h) < 3:
            return 0
        return sum(cross(h[i], h[(i + 1) % len(h)]) for i in range(len(h)))

    def boundary_count(self) -> int:
        if len(self.hull_vertices) < 3:
            return len(self.points)
        return sum(edge_lattice_count(e) - 1 for e in self.edges)

    def interior_count(self) -> int:
        return len(self.points) - self.boundary_count()

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)

    def translate(self, v) -> "ConvexLatticeSet":
        return convex_lattice_set(add(p, v) for p in self.points)

    def to_text(self) -> str:
        return "".join(f"{p.x} {p.y}\n" for p in self.sorted_points())


def _fill(hull: list[Point]) -> frozenset:
    if len(hull) == 1:
        return frozenset(hull)
    if len(hull) == 2:
        return frozenset(DirectedEdge(hull[0], hull[1]).lattice_points())
    xs = [p.x for p in hull]
    ys = [p.y for p in hull]
    m = len(hull)
    out = set()
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            q = (x, y)
            if all(cross(sub(hull[(i + 1) % m], hull[i]), sub(q, hull[i])) >= 0 for i in range(m)):
                out.add(Point(x, y))
    return frozenset(out)


def _edges(hull: list[Point]) -> tuple:
    if len(hull) == 1:
        return ()
    if len(hull) == 2:
        return (DirectedEdge(hull[0], hull[1]), DirectedEdge(hull[1], hull[0]))
    return tuple(DirectedEdge(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull)))


def convex_lattice_set(points: Iterable) -> ConvexLatticeSet:
    """Smallest convex lattice set containing ``points``."""
    pts = [Point(*p) for p in points]
    if not pts:
        raise ValueError("empty point set")
    hull = _hull(pts)
    return ConvexLatticeSet(_fill(hull), tuple(hull), _edges(hull))


def is_convex(points: Iterable) -> bool:
    pts = frozenset(Point(*p) for p in points)
    if not pts:
        return False
    return convex_lattice_set(pts).points == pts


def rectangle(n: int, k: int, origin=(0, 0)) -> ConvexLatticeSet:
    """R_{n,k}: n columns and k rows with lower-left corner at ``origin``."""
    if n < 1 or k < 1:
        raise ValueError("rectangle sides must be positive")
    x0, y0 = origin
    return convex_lattice_set([(x0, y0), (x0 + n - 1, y0), (x0, y0 + k - 1), (x0 + n - 1, y0 + k - 1)])


def from_text(text: str) -> ConvexLatticeSet:
    pts = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            x, y = line.split()
            pts.append((int(x), int(y)))
    return convex_lattice_set(pts)


def directional_diameter(S: ConvexLatticeSet, v) -> int:
    """Number of distinct lines parallel to ``v`` that meet S."""
    d = v.direction if isinstance(v, DirectedRationalLine) else primitive(v)
    return len({cross(d, p) for p in S.points})


@dataclass(frozen=True)
class SupportLine:
    line: DirectedRationalLine
    intersection: object  # DirectedEdge or Point
    points: tuple


def support_line(S: ConvexLatticeSet, v) -> SupportLine:
    """Boundary of the smallest half plane to the left of ``v`` that contains S."""
    d = v.direction if isinstance(v, DirectedRationalLine) else primitive(v)
    m = min(cross(d, p) for p in S.points)
    on = sorted((p for p in S.points if cross(d, p) == m), key=lambda p: p.x * d[0] + p.y * d[1])
    line = DirectedRationalLine(d[0], d[1], on[0])
    if len(on) == 1:
        return SupportLine(line, on[0], tuple(on))
    return SupportLine(line, DirectedEdge(on[0], on[-1]), tuple(on))


@dataclass(frozen=True)
class UnimodularMap:
    """x ↦ M x + t with M = [[a, b], [c, d]] of determinant +1."""

    a: int
    b: int
    c: int
    d: int
    tx: int = 0
    ty: int = 0

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("matrix determinant must be +1")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def shift(cls, v):
        return cls(1, 0, 0, 1, v[0], v[1])

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def linear(self, v) -> Point:
        return Point(self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def apply(self, p) -> Point:
        q = self.linear(p)
        return Point(q.x + self.tx, q.y + self.ty)

    def inverse(self) -> "UnimodularMap":
        a, b, c, d = self.d, -self.b, -self.c, self.a
        return UnimodularMap(a, b, c, d, -(a * self.tx + b * self.ty), -(c * self.tx + d * self.ty))

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """self ∘ other."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        t = self.apply((other.tx, other.ty))
        return UnimodularMap(a, b, c, d, t.x, t.y)

    def map_line(self, line: DirectedRationalLine) -> DirectedRationalLine:
        v = self.linear(line.direction)
        return DirectedRationalLine(v.x, v.y, self.apply(line.anchor))

    def map_edge(self, e: DirectedEdge) -> DirectedEdge:
        return DirectedEdge(self.apply(e.start), self.apply(e.end))


def unimodular_to_vertical(line) -> UnimodularMap:
    """Canonical A in SL2(Z) with A(0,-1) = direction of ``line``.

    The second column is forced to (-dx, -dy). The first column (p, r) must
    satisfy dx*r - dy*p = 1; among the solutions we take the one with the
    smallest |p|, preferring p >= 0.
    """
    dx, dy = line.direction if isinstance(line, DirectedRationalLine) else primitive(line)
    if dx == 0:
        # dy = ±1 forces p = -dy; r is free and set to 0
        return UnimodularMap(-dy, 0, 0, -dy)
    # p is determined modulo |dx|: p ≡ -dy^{-1} (mod dx)
    m = abs(dx)
    p0 = (-pow(dy, -1, m)) % m if m > 1 else 0
    p = min((p0, p0 - m), key=lambda t: (abs(t), t < 0))
    r = (1 + dy * p) // dx
    return UnimodularMap(p, -dx, r, -dy)


def apply_unimodular(A: UnimodularMap, S: ConvexLatticeSet) -> ConvexLatticeSet:
    return convex_lattice_set(A.apply(p) for p in S.points)


@dataclass(frozen=True)
class Extension:
    extended: ConvexLatticeSet
    depth: int
    layers: tuple  # tuple of tuples of Point, nearest layer first


def ext_w(T: ConvexLatticeSet, w: DirectedEdge) -> Extension:
    """The w-extension of T across its boundary edge w."""
    if T.is_degenerate:
        raise DegenerateSet("extension needs a hull of positive area")
    if w not in T.edges:
        raise ValueError("w is not a boundary edge of T")
    B = unimodular_to_vertical(w.direction).inverse()
    top = B.apply(w.start)
    C = UnimodularMap.shift((-top.x, 0)).compose(B)
    Cinv = C.inverse()
    pred = C.map_edge(T.pred(w))
    succ = C.map_edge(T.succ(w))
    wc = C.map_edge(w)
    b = wc.start.y
    d = wc.end.y
    # pred ends at the top of w, succ starts at its bottom; both are non-vertical
    pv, sv = pred.vector, succ.vector
    a = Fraction(pv.y, pv.x)
    c = Fraction(sv.y, sv.x)
    limit = a.denominator * c.denominator // math.gcd(a.denominator, c.denominator)
    if a > c:
        # the two lines cross at x = (d - b) / (a - c) < 0
        limit = min(limit, math.floor(Fraction(b - d) / (a - c)))
    delta = None
    for D in range(-1, -limit - 1, -1):
        lo, hi = c * D + d, a * D + b
        if lo <= hi and lo.denominator == 1 and hi.denominator == 1:
            delta = D
            break
    if delta is None:
        return Extension(T, 0, ())
    layers = []
    new = []
    for x in range(-1, delta - 1, -1):
        lo = math.ceil(c * x + d)
        hi = math.floor(a * x + b)
        col = tuple(Cinv.apply((x, y)) for y in range(lo, hi + 1))
        if col:
            layers.append(col)
            new.extend(col)
    extended = convex_lattice_set(list(T.points) + new)
    assert extended.points == T.points | frozenset(new)
    return Extension(extended, len(layers), tuple(layers))


@dataclass(frozen=True)
class Border:
    translations: tuple  # ordered along w
    a: Point
    b: tuple
    border_set: frozenset
    interior: frozenset


def border(S: ConvexLatticeSet, w: DirectedEdge, T: ConvexLatticeSet, g: int | None = None) -> Border:
    """Translates of S that slide along the edge of T parallel to w.

    The g-interior keeps the translates with index g..len-1-g (empty when
    g is out of range).
    """
    if w not in S.edges:
        raise ValueError("w is not a boundary edge of S")
    wstar = T.edge_parallel_to(w.vector)
    if wstar is None:
        raise EmptyBorder("T has no edge parallel to w")
    on_wstar = set(wstar.lattice_points())
    V = []
    for q in wstar.lattice_points():
        v = sub(q, w.start)
        if add(w.end, v) in on_wstar and all(add(p, v) in T.points for p in S.points):
            V.append(v)
    if not V:
        raise EmptyBorder("no translate of S fits along w")
    d = w.direction.direction
    V.sort(key=lambda v: v.x * d[0] + v.y * d[1])
    union = frozenset(add(p, v) for v in V for p in S.points)
    if g is None or g < 0 or len(V) - 2 * g <= 0:
        interior = frozenset()
    else:
        interior = frozenset(add(p, v) for v in V[g:len(V) - g] for p in S.points)
    return Border(tuple(V), V[0], d, union, interior)
