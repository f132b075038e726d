"""Searches for low-discrepancy convex sets: weak, strict, strong, balanced and thin
generating sets.

All discrepancies are computed over the translate set of a fixed container
shape (usually R_{n,k}), by projecting the container's pattern language.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .complexity import PatternLanguage, Shape, collect_patterns, is_generated
from .config import Rect, WindowConfiguration
from .errors import CollapsedToSegment, HypothesisFails, NoSuchSubset, UnverifiedConstruction
from .geometry import (ConvexLatticeSet, DirectedRationalLine, Point, convex_lattice_set,
                       cross, directional_diameter, edge_lattice_count, primitive, rectangle,
                       support_line)

EXHAUSTIVE_LIMIT = 18


@dataclass(frozen=True)
class EdgeStat:
    start: Point
    end: Point
    count: int  # |w ∩ S|
    d_without: int  # D(S ∖ w)

    def to_dict(self):
        return {"start": list(self.start), "end": list(self.end),
                "count": self.count, "d_without": self.d_without}


@dataclass
class GeneratingSetReport:
    set: ConvexLatticeSet
    kind: str  # weak, generating, strong, balanced, thin
    discrepancy: int
    generated_vertices: tuple
    edge_stats: tuple
    container: tuple | None = None  # (n, k) of the container rectangle
    window: Rect | None = None
    verification: str = ""
    nested_family: tuple = ()
    line: DirectedRationalLine | None = None
    conditions: dict = field(default_factory=dict)

    @property
    def points(self):
        return self.set.sorted_points()

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "points": [list(p) for p in self.points],
            "discrepancy": self.discrepancy,
            "generated_vertices": [list(p) for p in self.generated_vertices],
            "edges": [e.to_dict() for e in self.edge_stats],
            "verification": self.verification,
            "conditions": dict(sorted(self.conditions.items())),
        }
        if self.container is not None:
            out["container"] = list(self.container)
        if self.window is not None:
            out["window"] = self.window.as_dict()
        if self.line is not None:
            out["line"] = [self.line.dx, self.line.dy]
        if self.nested_family:
            out["nested_family"] = [{"size": len(s), "discrepancy": d} for s, d in self.nested_family]
        return out


def _disc(lang: PatternLanguage, pts) -> int:
    pts = tuple(pts)
    if not pts:
        return 1
    return lang.discrepancy(Shape.of(pts))


def _minus(S: ConvexLatticeSet, drop) -> ConvexLatticeSet | None:
    rest = S.points - frozenset(drop)
    if not rest:
        return None
    T = convex_lattice_set(rest)
    assert T.points == rest, "removal broke convexity"
    return T


def _container_language(source, container: ConvexLatticeSet) -> PatternLanguage:
    if isinstance(source, PatternLanguage):
        if not container.points <= set(source.shape.points):
            raise ValueError("container is not inside the language shape")
        return source
    return collect_patterns(source, Shape.of(container.points))


def _shrink(lang, S: ConvexLatticeSet, target: int, keep=frozenset(), allowed=None) -> ConvexLatticeSet:
    """Drop extreme points (smallest first) while the discrepancy stays <= target."""
    while len(S) > 1:
        for x in sorted(S.extreme_points):
            if x in keep or (allowed is not None and x not in allowed):
                continue
            T = _minus(S, [x])
            if T is not None and _disc(lang, T.points) <= target:
                S = T
                break
        else:
            break
    return S


def find_minimal_low_discrepancy(source, container: ConvexLatticeSet, target_d: int) -> ConvexLatticeSet:
    """Convex subset of ``container`` with D <= target_d, minimal under extreme-point removal."""
    lang = _container_language(source, container)
    if _disc(lang, container.points) > target_d:
        raise NoSuchSubset(f"D(container) = {_disc(lang, container.points)} exceeds {target_d}")
    return _shrink(lang, container, target_d)


def convex_subsets(S: ConvexLatticeSet):
    """All nonempty proper convex subsets of S, by repeated extreme-point removal."""
    seen = {S.points}
    queue = deque([S])
    while queue:
        T = queue.popleft()
        for x in T.extreme_points:
            U = _minus(T, [x])
            if U is not None and U.points not in seen:
                seen.add(U.points)
                queue.append(U)
                yield U


def _violation(lang, S: ConvexLatticeSet, exhaustive: bool) -> ConvexLatticeSet | None:
    """A proper convex subset with discrepancy <= D(S), or None."""
    d = _disc(lang, S.points)
    if exhaustive:
        best = None
        for T in convex_subsets(S):
            dt = _disc(lang, T.points)
            if dt <= d:
                key = (dt, len(T), T.sorted_points())
                if best is None or key < best[0]:
                    best = (key, T)
        return None if best is None else best[1]
    for x in sorted(S.extreme_points):
        T = _minus(S, [x])
        if T is not None and _disc(lang, T.points) <= d:
            return T
    for w in sorted(S.edges, key=lambda e: (e.start, e.end)):
        T = _minus(S, w.lattice_points())
        if T is not None and _disc(lang, T.points) <= d:
            return T
    return None


def _refine(lang, S: ConvexLatticeSet) -> tuple[ConvexLatticeSet, str]:
    """Descend from a weak generating set to one whose proper convex subsets all have larger D."""
    while True:
        exhaustive = len(S) <= EXHAUSTIVE_LIMIT
        T = _violation(lang, S, exhaustive)
        if T is None:
            return S, ("exhaustive" if exhaustive else "inequalities")
        S = _shrink(lang, T, _disc(lang, T.points))


def _edge_stats(lang, S: ConvexLatticeSet) -> tuple:
    stats = []
    for w in S.edges:
        pts = w.lattice_points()
        rest = S.points - frozenset(pts)
        stats.append(EdgeStat(w.start, w.end, len(pts), _disc(lang, rest)))
    return tuple(stats)


def _generated_vertices(lang, S: ConvexLatticeSet) -> tuple:
    if len(S) < 2:
        return ()
    shape = Shape.of(S.points)
    return tuple(x for x in S.extreme_points if is_generated(lang, shape, x).generated)


def _report(lang, S, kind, container, window, verification="", **extra) -> GeneratingSetReport:
    return GeneratingSetReport(
        set=S, kind=kind, discrepancy=_disc(lang, S.points),
        generated_vertices=_generated_vertices(lang, S), edge_stats=_edge_stats(lang, S),
        container=container, window=window, verification=verification, **extra)


def _rect_language(cfg, n, k) -> tuple[PatternLanguage, ConvexLatticeSet]:
    R = rectangle(n, k)
    if isinstance(cfg, PatternLanguage):
        return _container_language(cfg, R), R
    return collect_patterns(cfg, Shape.rect(n, k)), R


def nested_family(lang, S: ConvexLatticeSet) -> tuple:
    """Weak generating sets S = S_1 ⊃ S_2 ⊃ ... with D rising by one each step, up to D = 0."""
    fam = [S]
    d = _disc(lang, S.points)
    while d < 0 and len(fam[-1]) > 1:
        cur = fam[-1]
        y = min(cur.extreme_points)
        T = _minus(cur, [y])
        d += 1
        fam.append(_shrink(lang, T, d))
    return tuple(fam)


def find_generating_set(cfg, n: int, k: int) -> GeneratingSetReport:
    """A generating set inside R_{n,k}, assuming D(R_{n,k}) <= 0 in the window."""
    lang, R = _rect_language(cfg, n, k)
    d = _disc(lang, R.points)
    if d > 0:
        raise HypothesisFails(f"D(R_{{{n},{k}}}) = {d} > 0")
    weak = _shrink(lang, R, d)
    family = nested_family(lang, weak)
    S, how = _refine(lang, weak)
    rep = _report(lang, S, "generating", (n, k), lang.window, how,
                  nested_family=tuple((T, _disc(lang, T.points)) for T in family))
    return rep


def weak_generating_set(cfg, n: int, k: int) -> GeneratingSetReport:
    lang, R = _rect_language(cfg, n, k)
    d = _disc(lang, R.points)
    if d > 0:
        raise HypothesisFails(f"D(R_{{{n},{k}}}) = {d} > 0")
    S = _shrink(lang, R, d)
    return _report(lang, S, "weak", (n, k), lang.window, "extreme-points")


def verify_generating(lang, S: ConvexLatticeSet) -> bool:
    """Definition check: every extreme point generated and no proper convex subset with D <= D(S)."""
    if len(S) >= 2:
        shape = Shape.of(S.points)
        if not all(is_generated(lang, shape, x) for x in S.extreme_points):
            return False
    return _violation(lang, S, len(S) <= EXHAUSTIVE_LIMIT) is None


def _ceil_half(m: int) -> int:
    return (m + 1) // 2


def strong_conditions(lang, S: ConvexLatticeSet) -> dict:
    d = _disc(lang, S.points)
    edge_ok = all(st.d_without >= d + _ceil_half(st.count)
                  for st in _edge_stats(lang, S) if st.d_without is not None)
    return {
        "low_discrepancy": 2 * d <= -len(S),
        "edge_growth": edge_ok,
        "generating": verify_generating(lang, S),
    }


def line_period(cfg: WindowConfiguration, direction, limit: int | None = None) -> int | None:
    """Smallest p >= 1 with cfg(x) = cfg(x + p*direction) throughout the window."""
    dx, dy = primitive(direction)
    W, H = cfg.width, cfg.height
    limit = limit or max(W, H)
    c = cfg.cells
    for p in range(1, limit + 1):
        sx, sy = p * dx, p * dy
        if abs(sx) >= W or abs(sy) >= H:
            break
        x0, x1 = max(0, -sx), W - max(0, sx)
        y0, y1 = max(0, -sy), H - max(0, sy)
        if np.array_equal(c[x0:x1, y0:y1], c[x0 + sx:x1 + sx, y0 + sy:y1 + sy]):
            return p
    return None


def find_strong_generating_set(cfg, n: int, k: int) -> GeneratingSetReport:
    """Iterate edge stripping until every edge w satisfies D(S∖w) >= D(S) + ⌈|w∩S|/2⌉."""
    lang, R = _rect_language(cfg, n, k)
    P = lang.count
    if 2 * P > n * k:
        raise HypothesisFails(f"P(R_{{{n},{k}}}) = {P} > nk/2")
    S, _ = _refine(lang, _shrink(lang, R, _disc(lang, R.points)))
    while True:
        if S.is_degenerate:
            _collapse(cfg, S)
        d = _disc(lang, S.points)
        bad = None
        for w in sorted(S.edges, key=lambda e: (e.start, e.end)):
            pts = w.lattice_points()
            dw = _disc(lang, S.points - frozenset(pts))
            if dw < d + _ceil_half(len(pts)):
                bad = pts
                break
        if bad is None:
            break
        T = _minus(S, bad)
        S, _ = _refine(lang, _shrink(lang, T, _disc(lang, T.points)))
    conds = strong_conditions(lang, S)
    how = "exhaustive" if len(S) <= EXHAUSTIVE_LIMIT else "inequalities"
    return _report(lang, S, "strong", (n, k), lang.window, how, conditions=conds)


def _collapse(cfg, S: ConvexLatticeSet):
    if len(S) == 1:
        raise CollapsedToSegment("strong-set iteration reached a single point", segment=S)
    e = S.edges[0]
    d = e.direction.direction
    period = line_period(cfg, d) if isinstance(cfg, WindowConfiguration) else None
    raise CollapsedToSegment(
        f"strong-set iteration collapsed to a segment in direction {d}; period along it: {period}",
        segment=S, direction=d, period=period)


def balanced_conditions(lang, S: ConvexLatticeSet, line) -> dict:
    """Clauses (i)-(iii) of the balanced-set definition, by direct enumeration."""
    v = line.direction if isinstance(line, DirectedRationalLine) else primitive(line)
    sup = support_line(S, v)
    on = sup.points
    h = len(on)
    counts: dict = {}
    for p in S.points:
        c = cross(v, p)
        counts[c] = counts.get(c, 0) + 1
    thick = all(m >= h - 1 for m in counts.values())
    ends = {on[0], on[-1]}
    if len(S) < 2:
        gen = False
    else:
        shape = Shape.of(S.points)
        gen = all(is_generated(lang, shape, x) for x in ends)
    grows = _disc(lang, S.points - frozenset(on)) > _disc(lang, S.points)
    return {"lines_thick": thick, "ends_generated": gen, "support_removal_grows": grows}


def find_balanced_set(cfg, n: int, k: int, line) -> GeneratingSetReport:
    """A set balanced with respect to ``line`` inside R_{n,k} (needs P(R_{n,k}) <= nk/2)."""
    v = line.direction if isinstance(line, DirectedRationalLine) else primitive(line)
    ell = DirectedRationalLine(*v)
    lang, R = _rect_language(cfg, n, k)
    if 2 * lang.count > n * k:
        raise HypothesisFails(f"P(R_{{{n},{k}}}) = {lang.count} > nk/2")
    dx, dy = v
    if dx == 0 or dy == 0:
        S, lang2, box = _balanced_axis(cfg, lang, n, k, v)
    elif abs(dx) > n - 1 or abs(dy) > k - 1:
        # no translate of the line meets R_{n,k} twice: any generating set qualifies
        lang2, box = lang, (n, k)
        S, _ = _refine(lang, _shrink(lang, R, _disc(lang, R.points)))
    else:
        S, lang2, box = _balanced_oblique(lang, R, n, k, v)
    conds = balanced_conditions(lang2, S, ell)
    if not all(conds.values()):
        failing = sorted(c for c, ok in conds.items() if not ok)
        raise UnverifiedConstruction(f"constructed set fails {', '.join(failing)}",
                                     condition=failing[0], candidate=S)
    return _report(lang2, S, "balanced", box, lang2.window, "direct", line=ell, conditions=conds)


def _balanced_axis(cfg, lang, n, k, v):
    horizontal = v[1] == 0
    rng = range(1, k + 1) if horizontal else range(1, n + 1)
    for m in rng:
        nn, kk = (n, m) if horizontal else (m, k)
        sub = lang.restrict(Shape.rect(nn, kk)) if isinstance(cfg, PatternLanguage) else None
        lang2 = sub if sub is not None else collect_patterns(cfg, Shape.rect(nn, kk))
        if 2 * lang2.count <= nn * kk:
            break
    R2 = rectangle(nn, kk)
    edge_pts = frozenset(support_line(R2, v).points)
    S = _shrink(lang2, R2, _disc(lang2, R2.points), allowed=edge_pts)
    return S, lang2, (nn, kk)


def _balanced_oblique(lang, R, n, k, v):
    corners = [Point(0, 0), Point(n - 1, 0), Point(0, k - 1), Point(n - 1, k - 1)]
    best = None
    for c in corners:
        chord = [p for p in R.points if cross(v, (p.x - c.x, p.y - c.y)) == 0]
        S1 = frozenset(p for p in R.points if cross(v, (p.x - c.x, p.y - c.y)) <= 0)
        outside = len(R) - len(S1)
        if 2 * outside > len(R):
            continue
        key = (-len(chord), outside, c)
        if best is None or key < best[0]:
            best = (key, c, S1, chord)
    if best is None:
        raise UnverifiedConstruction("no corner cut leaves at least half the rectangle",
                                     condition="corner")
    _, c, S1pts, chord = best
    S1 = convex_lattice_set(S1pts)
    dir_key = lambda p: p.x * v[0] + p.y * v[1]
    chord.sort(key=dir_key)
    a, b = chord[0], chord[-1]
    S2 = _shrink(lang, S1, _disc(lang, S1.points), keep=frozenset({a, b}))
    if S2.is_degenerate:
        S3, _ = _refine(lang, _shrink(lang, S2, _disc(lang, S2.points)))
        return S3, lang, (n, k)
    return S2, lang, (n, k)


def thin_generating_set(source, S: ConvexLatticeSet, direction=(0, -1)) -> GeneratingSetReport:
    """Halve S across lines parallel to ``direction`` and extract a generating subset of a half.

    The first half holds the lines at offsets cmin .. cmin+d-1 with
    d = ⌊width/2⌋, so both halves have width at most ⌈width/2⌉.
    """
    v = primitive(direction)
    lang = _container_language(source, S)
    offs = {p: cross(v, p) for p in S.points}
    cmin, cmax = min(offs.values()), max(offs.values())
    width = cmax - cmin + 1
    d = width // 2
    left = frozenset(p for p, c in offs.items() if c < cmin + d)
    right = S.points - left
    dl, dr = _disc(lang, left), _disc(lang, right)
    if left and 2 * len(left) >= len(S) and dl <= 0:
        half = left
    elif dr <= 0:
        half = right
    elif left and dl <= 0:
        half = left
    else:
        raise HypothesisFails(f"neither half has D <= 0 (D_left={dl}, D_right={dr})")
    H = convex_lattice_set(half)
    assert H.points == half
    T, how = _refine(lang, _shrink(lang, H, _disc(lang, H.points)))
    bound = math.ceil(directional_diameter(S, v) / 2)
    assert directional_diameter(T, v) <= bound, "thin set diameter bound violated"
    return _report(lang, T, "thin", None, lang.window, how, line=DirectedRationalLine(*v),
                   conditions={"diameter_bound": True})
