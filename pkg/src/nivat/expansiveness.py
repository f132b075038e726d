"""Finite one-sided expansiveness certificates and the periodicity trichotomy."""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexity import ComplexityTable, Shape, collect_patterns, rect_complexity_table
from .config import WindowConfiguration
from .deduction import PeriodReport, detect_periods_2d
from .errors import ShapeTooLarge
from .generating import GeneratingSetReport, find_generating_set
from .geometry import DirectedRationalLine, Point, UnimodularMap, primitive, unimodular_to_vertical


@dataclass(frozen=True)
class ExpansivenessCertificate:
    direction: DirectedRationalLine
    map: UnimodularMap
    a: int
    b: int
    verdict: str  # expansive, nonexpansive, inconclusive
    witness: tuple | None = None  # (context, value_1, value_2) in recoordinatized reading order
    groups: int = 0

    def to_dict(self):
        return {"dx": self.direction.dx, "dy": self.direction.dy, "a": self.a, "b": self.b,
                "verdict": self.verdict,
                "witness": list(self.witness) if self.witness else None}


def certificate_shape(A: UnimodularMap, a: int, b: int) -> tuple[list[Point], Point]:
    """A([0,a]×[-b,b]) in reading order and the image of the hole (-1, 0)."""
    block = [A.linear((x, y)) for x in range(0, a + 1) for y in range(-b, b + 1)]
    return block, A.linear((-1, 0))


def expansive_certificate(cfg: WindowConfiguration, line, a: int, b: int) -> ExpansivenessCertificate:
    """Does every observed coloring of [0,a]×[-b,b] (after the change of
    coordinates sending the downward y-axis to ``line``) fix the cell (-1, 0)?

    Reading cfg∘A on a translate of the block is the same as reading cfg on a
    translate of its image under A, so patterns are collected on the image
    directly, over every translate that fits in the window.
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    d = line.direction if isinstance(line, DirectedRationalLine) else primitive(line)
    ell = DirectedRationalLine(*d)
    A = unimodular_to_vertical(ell)
    block, hole = certificate_shape(A, a, b)
    shape = Shape.of(block + [hole])
    try:
        lang = collect_patterns(cfg, shape)
    except ShapeTooLarge:
        return ExpansivenessCertificate(ell, A, a, b, "inconclusive")
    j = shape.index(hole)
    order = [shape.index(p) for p in block]
    ext = lang.extensions(j)
    syms = cfg.alphabet.symbols
    for rest, vals in sorted(ext.items()):
        if len(vals) > 1:
            full = rest[:j] + (None,) + rest[j:]
            context = "".join(syms[full[i]] for i in order)
            return ExpansivenessCertificate(ell, A, a, b, "nonexpansive",
                                            (context, syms[vals[0]], syms[vals[1]]), len(ext))
    return ExpansivenessCertificate(ell, A, a, b, "expansive", None, len(ext))


def candidate_directions(report: GeneratingSetReport, n: int, k: int) -> list[DirectedRationalLine]:
    """Edge directions of the generating set (both orientations) that join two points of R_{n,k}."""
    out = set()
    for e in report.set.edges:
        dx, dy = primitive(e.vector)
        for v in ((dx, dy), (-dx, -dy)):
            if abs(v[0]) <= n - 1 and abs(v[1]) <= k - 1:
                out.add(v)
    return sorted((DirectedRationalLine(*v) for v in out), key=lambda l: l.sort_key())


AXES = ((0, -1), (0, 1), (1, 0), (-1, 0))


def schedule(budget) -> list[tuple[int, int]]:
    A, B = budget
    if A < 1 or B < 1:
        raise ValueError("budget must be at least (1, 1)")
    out = []
    s = 1
    while True:
        step = (min(s, A), min(s, B))
        if step not in out:
            out.append(step)
        if s >= max(A, B):
            break
        s *= 2
    if out[-1] != (A, B):
        out.append((A, B))
    return out


@dataclass(frozen=True)
class DirectionResult:
    direction: DirectedRationalLine
    verdict: str  # expansive, nonexpansive (up to budget), inconclusive
    certificate: ExpansivenessCertificate

    @property
    def a(self):
        return self.certificate.a

    @property
    def b(self):
        return self.certificate.b

    def to_dict(self):
        return {"dx": self.direction.dx, "dy": self.direction.dy, "verdict": self.verdict,
                "a": self.a, "b": self.b}


def scan_direction(cfg, line, budget) -> DirectionResult:
    last = None
    for a, b in schedule(budget):
        cert = expansive_certificate(cfg, line, a, b)
        if cert.verdict == "expansive":
            return DirectionResult(cert.direction, "expansive", cert)
        if cert.verdict == "inconclusive":
            return DirectionResult(cert.direction, "inconclusive" if last is None else "nonexpansive",
                                   last or cert)
        last = cert
    return DirectionResult(last.direction, "nonexpansive", last)


@dataclass
class ScanReport:
    results: list
    antiparallel_flags: list = field(default_factory=list)

    def nonexpansive(self):
        return [r for r in self.results if r.verdict == "nonexpansive"]


def scan_nonexpansive(cfg, n: int, k: int, budget=(8, 8),
                      report: GeneratingSetReport | None = None) -> ScanReport:
    """Certificates for every candidate direction plus the four axis directions.

    A direction is nonexpansive only up to the budget. A nonexpansive direction
    whose reverse is certified expansive is flagged, since the two should come
    in pairs.
    """
    if report is None:
        report = find_generating_set(cfg, n, k)
    dirs = {l.direction for l in candidate_directions(report, n, k)} | set(AXES)
    results = {}
    for v in sorted(dirs, key=lambda v: DirectedRationalLine(*v).sort_key()):
        results[v] = scan_direction(cfg, v, budget)
    flags = []
    for v, r in list(results.items()):
        if r.verdict != "nonexpansive":
            continue
        w = (-v[0], -v[1])
        if w not in results:
            results[w] = scan_direction(cfg, w, budget)
        if results[w].verdict == "expansive":
            flags.append((v, w))
    ordered = sorted(results.values(), key=lambda r: r.direction.sort_key())
    return ScanReport(ordered, flags)


@dataclass
class TrichotomyVerdict:
    case: str  # doubly_periodic, singly_periodic, multiple_nonexpansive, no_hypothesis, inconclusive
    line: tuple | None = None
    hit: tuple | None = None
    strong: bool = False
    directions: list = field(default_factory=list)
    periods: PeriodReport | None = None
    generating_set: GeneratingSetReport | None = None
    table: ComplexityTable | None = None
    window: object = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "line": list(self.line) if self.line else None,
            "hit": list(self.hit) if self.hit else None,
            "strong": self.strong,
            "directions": [d.to_dict() for d in self.directions],
            "periods": [list(v) for v in self.periods.vectors] if self.periods else [],
            "generating_set": self.generating_set.to_dict() if self.generating_set else None,
            "window": self.window.as_dict() if self.window is not None else None,
            "window_relative": True,
            "notes": list(self.notes),
        }


def _unoriented(v):
    dx, dy = primitive(v)
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    return dx, dy


def choose_hit(table: ComplexityTable, n: int, k: int) -> tuple[tuple[int, int], bool] | None:
    hits = table.hits()
    if not hits:
        return None
    strong = set(table.strong_hits())
    if (n, k) in hits:
        return (n, k), (n, k) in strong
    best = min(hits, key=lambda h: (h not in strong, h[0] * h[1], h[0]))
    return best, best in strong


def classify_trichotomy(cfg: WindowConfiguration, n: int, k: int, budget=(8, 8),
                        table: ComplexityTable | None = None) -> TrichotomyVerdict:
    """Combine complexity hits, expansiveness certificates and window periods.

    Periods are searched up to the larger budget entry, so periods longer
    than that are invisible to the classifier.
    """
    table = table or rect_complexity_table(cfg, n, k)
    pick = choose_hit(table, n, k)
    if pick is None:
        return TrichotomyVerdict("no_hypothesis", table=table, window=cfg.window,
                                 notes=["P(n,k) > nk for every scanned (n,k)"])
    (hn, hk), strong = pick
    report = find_generating_set(cfg, hn, hk)
    scan = scan_nonexpansive(cfg, hn, hk, budget, report)
    periods = detect_periods_2d(cfg, max_shift=max(budget))
    lines = sorted({_unoriented(r.direction.direction) for r in scan.nonexpansive()})
    notes = []
    for v, w in scan.antiparallel_flags:
        notes.append(f"direction {v} nonexpansive but {w} expansive (window artifact?)")
    if any(r.verdict == "inconclusive" for r in scan.results):
        notes.append("some directions were inconclusive: window too small for the certificate")
    base = dict(hit=(hn, hk), strong=strong, directions=scan.results, periods=periods,
                generating_set=report, table=table, window=cfg.window)
    if not lines:
        if periods.classification == "doubly_periodic":
            return TrichotomyVerdict("doubly_periodic", notes=notes, **base)
        notes.append("no nonexpansive direction found but no two independent periods in range")
        return TrichotomyVerdict("inconclusive", notes=notes, **base)
    if len(lines) == 1:
        L = lines[0]
        on_line = all(v[0] * L[1] - v[1] * L[0] == 0 for v in periods.vectors)
        if periods.vectors and on_line:
            return TrichotomyVerdict("singly_periodic", line=L, notes=notes, **base)
        if not periods.vectors:
            notes.append("one nonexpansive line but no period vector in range")
        else:
            notes.append("period vectors off the nonexpansive line")
        return TrichotomyVerdict("inconclusive", line=L, notes=notes, **base)
    if strong:
        notes.append("two or more nonexpansive lines under P <= nk/2: window artifact")
    return TrichotomyVerdict("multiple_nonexpansive", notes=notes, **base)


@dataclass
class DeterminingSet:
    """A seed shape plus the languages whose one-hole forcing grows it.

    The seed is the convex hull of the sums S + p for p in a certificate
    block, where the blocks certify both orientations of the first edge of S
    (and any further directions that certify).
    Every line parallel to that edge through a block point then meets a whole
    translate of S, so S extends each such line, and the certificates push
    the coloring across it.
    """
    seed: object  # ConvexLatticeSet
    languages: list
    certificates: list

    def centered_in(self, frame) -> Point:
        """Translation putting the seed's bounding box in the middle of ``frame``."""
        x0, y0, x1, y1 = self.seed.bbox()
        return Point(frame.x0 + (frame.width - (x1 - x0 + 1)) // 2 - x0,
                     frame.y0 + (frame.height - (y1 - y0 + 1)) // 2 - y0)


def determining_set(cfg: WindowConfiguration, report: GeneratingSetReport,
                    budget=(8, 8), extra: bool = True) -> DeterminingSet:
    """Seed and languages for reconstruction by one-hole forcing.

    Both orientations of the first edge of S must be certified expansive.
    With ``extra`` the other edge directions of S and the axis directions
    are added whenever they certify too, so growth is not confined to a
    band along the first edge.
    """
    from .geometry import convex_lattice_set

    S = report.set
    if not S.edges:
        raise ValueError("generating set is a single point")
    w = primitive(S.edges[0].vector)
    required = [w, (-w[0], -w[1])]
    optional = []
    if extra:
        for e in S.edges:
            dx, dy = primitive(e.vector)
            optional += [(dx, dy), (-dx, -dy)]
        optional += list(AXES)
    langs = [collect_patterns(cfg, Shape.of(S.sorted_points()))]
    certs = []
    pts = set()
    done = set()
    for v in required + optional:
        if v in done:
            continue
        done.add(v)
        r = scan_direction(cfg, v, budget)
        if r.verdict != "expansive":
            if v in required:
                raise ValueError(f"direction {v} not certified expansive within budget {tuple(budget)}")
            continue
        block, hole = certificate_shape(r.certificate.map, r.a, r.b)
        langs.append(collect_patterns(cfg, Shape.of(block + [hole])))
        certs.append(r.certificate)
        pts.update(Point(s.x + q.x, s.y + q.y) for s in S.points for q in block)
    return DeterminingSet(convex_lattice_set(pts), langs, certs)
