import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nivat.complexity import Shape, collect_patterns
from nivat.config import GeneratorSpec, Rect, from_array, materialize, motif_for
from nivat.deduction import (PartialColoring, deduce_fixpoint, detect_periods_2d, factor_count,
                             fine_wilf_reconstruct, fine_wilf_sharpness, morse_hedlund_check,
                             row_fill, unique_extension_check, word_periods)
from nivat.errors import DomainTooShort, FrameTooLarge, HypothesisViolation
from nivat.generating import find_generating_set
from nivat.geometry import Point, rectangle

H_DOMINO = [(0, 0), (1, 0)]
V_DOMINO = [(0, 0), (0, 1)]


def const(size=12):
    return materialize(GeneratorSpec("constant"), Rect(0, 0, size, size))


def checkerboard(size=16):
    return materialize(GeneratorSpec("periodic_motif", motif=("01",), periods=((2, 0), (1, 1))),
                       Rect(0, 0, size, size))


def delta(r=6):
    return materialize(GeneratorSpec("delta"), Rect.from_bounds(-r, -r, r, r))


def periodic(seed, size=24, top=3):
    rng = np.random.default_rng(seed)
    a, c = (int(v) for v in rng.integers(1, top + 1, 2))
    b = int(rng.integers(0, top + 1))
    return materialize(motif_for(((a, 0), (b, c)), rng), Rect(0, 0, size, size)), a * c


# --- fixpoint deduction -----------------------------------------------------------

def test_constant_dominoes_fill_frame():
    # one seed: horizontal dominoes alone only reach the seed's row, so both
    # orientations are supplied; every other cell is then forced
    cfg = const()
    langs = [collect_patterns(cfg, Shape.of(H_DOMINO)), collect_patterns(cfg, Shape.of(V_DOMINO))]
    out = deduce_fixpoint(langs, PartialColoring(Rect(0, 0, 5, 5), {(2, 2): "0"}))
    assert out.status == "completed" and out.steps == 24
    assert set("".join(out.final.rows())) == {"0"}


def test_single_language_single_seed_stays_in_row():
    cfg = const()
    lang = collect_patterns(cfg, Shape.of(H_DOMINO))
    out = deduce_fixpoint(lang, PartialColoring(Rect(0, 0, 5, 5), {(2, 2): "0"}))
    assert out.status == "ambiguous" and out.steps == 4
    assert out.final.domain == {Point(x, 2) for x in range(5)}


def test_checkerboard_from_one_cell():
    # the two domino restrictions of the 2x2 language; the 2x2 shape itself
    # never has a single hole when only one cell is known
    cfg = checkerboard()
    square = collect_patterns(cfg, Shape.rect(2, 2))
    langs = [square.restrict(H_DOMINO), square.restrict(V_DOMINO)]
    frame = Rect(0, 0, 8, 8)
    out = deduce_fixpoint(langs, PartialColoring(frame, {(0, 0): cfg[(0, 0)]}))
    assert out.status == "completed"
    assert all(out.final.get(p) == cfg[p] for p in frame.points())
    stuck = deduce_fixpoint(square, PartialColoring(frame, {(0, 0): cfg[(0, 0)]}))
    assert stuck.status == "ambiguous" and stuck.steps == 0


def test_delta_domino_ambiguous():
    lang = collect_patterns(delta(), Shape.of(H_DOMINO))
    out = deduce_fixpoint(lang, PartialColoring(Rect(0, 0, 2, 1), {(0, 0): "0"}))
    assert out.status == "ambiguous"
    assert (out.witness.pattern_a, out.witness.pattern_b) == ("00", "01")
    assert out.witness.hole == (1, 0)
    assert out.frontier == ((1, 0),)


def test_contradiction():
    lang = collect_patterns(checkerboard(), Shape.of(H_DOMINO))
    out = deduce_fixpoint(lang, PartialColoring(Rect(0, 0, 3, 1), {(0, 0): "0", (1, 0): "0"}))
    assert out.status == "contradiction"
    # 0?0 is consistent (the hole is forced to 1) but 0??0 is not
    ok = deduce_fixpoint(lang, PartialColoring(Rect(0, 0, 3, 1), {(0, 0): "0", (2, 0): "0"}))
    assert ok.status == "completed" and ok.final.get((1, 0)) == "1"
    out = deduce_fixpoint(lang, PartialColoring(Rect(0, 0, 4, 1), {(0, 0): "0", (3, 0): "0"}))
    assert out.status == "contradiction" and out.contradiction_cell in {(1, 0), (2, 0)}


def test_trace_lines():
    lang = collect_patterns(checkerboard(), Shape.of(H_DOMINO))
    out = deduce_fixpoint(lang, PartialColoring(Rect(0, 0, 3, 1), {(0, 0): "0"}), trace=True)
    assert out.trace == ("1 0 1 0:0,0", "2 0 0 0:1,0")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.6),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=2, max_size=5, unique=True))
def test_soundness_under_masking(seed, keep, shape):
    rng = np.random.default_rng(seed)
    if rng.random() < 0.5:
        cfg, _ = periodic(seed)
    else:
        cfg = from_array(rng.integers(0, 2, (14, 14)))
    lang = collect_patterns(cfg, Shape.of(shape))
    frame = Rect(2, 2, 10, 10)
    known = [p for p in frame.points() if rng.random() < keep]
    out = deduce_fixpoint(lang, PartialColoring.from_config(cfg, known, frame))
    assert out.status != "contradiction"
    for p, s in out.final.values.items():
        assert cfg[p] == s


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.02, 0.4))
def test_confluence_row_vs_column(seed, keep):
    rng = np.random.default_rng(seed)
    cfg, _ = periodic(seed, 20)
    shapes = [H_DOMINO, V_DOMINO, [(0, 0), (1, 0), (0, 1)], [(0, 0), (1, 1), (2, 0)]]
    langs = [collect_patterns(cfg, Shape.of(shapes[i])) for i in sorted(set(rng.integers(0, 4, 2)))]
    frame = Rect(3, 3, 9, 9)
    known = [p for p in frame.points() if rng.random() < keep]
    start = PartialColoring.from_config(cfg, known, frame)
    a = deduce_fixpoint(langs, start, order="row")
    b = deduce_fixpoint(langs, start, order="column")
    assert a.status == b.status
    assert a.final == b.final


# --- exhaustive extension ---------------------------------------------------------

def test_unique_extension_examples():
    cfg = const()
    lang = collect_patterns(cfg, Shape.of(H_DOMINO))
    assert unique_extension_check(lang, cfg, [(0, 0)], [(0, 0), (1, 0)]).status == "unique"
    d = collect_patterns(delta(), Shape.of(H_DOMINO))
    v = unique_extension_check(d, {(0, 0): "0"}, [(0, 0)], [(0, 0), (1, 0)])
    assert v.status == "ambiguous"
    assert {v.witness[1][(1, 0)], v.witness[2][(1, 0)]} == {"0", "1"}
    cb = checkerboard()
    sq = collect_patterns(cb, Shape.rect(2, 2))
    target = [(x, y) for x in range(3) for y in range(3)]
    assert unique_extension_check(sq, cb, [(0, 0)], target).status == "unique"
    # the fixpoint engine cannot start from one cell with the 2x2 shape
    assert unique_extension_check(sq, cb, [(0, 0)], target, mode="deduce").status == "undetermined"


def test_unique_extension_none_and_cap():
    cb = checkerboard()
    lang = collect_patterns(cb, Shape.of(H_DOMINO))
    v = unique_extension_check(lang, {(0, 0): "0", (3, 0): "0"}, [(0, 0), (3, 0)],
                               [(0, 0), (1, 0), (2, 0), (3, 0)])
    assert v.status == "none"
    with pytest.raises(FrameTooLarge):
        unique_extension_check(lang, cb, [(0, 0)], [(x, y) for x in range(6) for y in range(6)])


def brute_extensions(lang, base, target):
    """Every coloring of target that extends base, checked translate by translate."""
    target = sorted(target)
    free = [p for p in target if p not in base]
    shape = lang.shape.points
    allowed = set(lang.patterns)
    out = []
    for vals in itertools.product(lang.alphabet.symbols, repeat=len(free)):
        col = dict(base)
        col.update(zip(free, vals))
        ok = True
        for u in itertools.product(range(-3, 4), repeat=2):
            cs = [(p.x + u[0], p.y + u[1]) for p in shape]
            if all(c in col for c in cs) and "".join(col[c] for c in cs) not in allowed:
                ok = False
                break
        if ok:
            out.append(col)
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_exhaustive_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    cfg = from_array(rng.integers(0, 2, (8, 8)))
    lang = collect_patterns(cfg, Shape.of([(0, 0), (1, 0), (0, 1)]))
    target = [(x, y) for x in range(3) for y in range(3)]
    base = {p: cfg[p] for p in target if rng.random() < 0.5}
    n = len(brute_extensions(lang, base, target))
    v = unique_extension_check(lang, base, list(base), target)
    assert v.status == {0: "none", 1: "unique"}.get(n, "ambiguous")


# --- column induction --------------------------------------------------------------

def test_row_fill_constant():
    cfg = const()
    lang = collect_patterns(cfg, Shape.rect(2, 2))
    frame = Rect(0, 0, 4, 6)
    known = [p for p in frame.points() if p.x > 0] + [(0, 3)]
    out = row_fill(lang, PartialColoring.from_config(cfg, known, frame), 0)
    assert out.status == "completed" and out.steps == 5


def test_row_fill_checkerboard_one_seed():
    cfg = checkerboard()
    lang = collect_patterns(cfg, Shape.rect(2, 2))
    frame = Rect(0, 0, 4, 8)
    known = [p for p in frame.points() if p.x > 0] + [(0, 5)]
    out = row_fill(lang, PartialColoring.from_config(cfg, known, frame), 0)
    assert out.status == "completed"
    assert all(out.final.get(p) == cfg[p] for p in frame.points())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_row_fill_matches_ground_truth(seed):
    cfg, d = periodic(seed)
    rep = find_generating_set(cfg, 1, max(d, 2))
    lang = collect_patterns(cfg, Shape.of(rep.set.points))
    frame = Rect(4, 0, 3, 24)
    h = len(rep.set)
    known = [p for p in frame.points() if p.x > 4] + [(4, 8 + t) for t in range(h - 1)]
    out = row_fill(lang, PartialColoring.from_config(cfg, known, frame), 4, report=rep)
    assert out.status == "completed"
    assert all(out.final.get(p) == cfg[p] for p in frame.points())


def test_row_fill_hypotheses():
    d = delta()
    lang = collect_patterns(d, Shape.rect(2, 2))
    start = PartialColoring.from_config(d, [(1, 0)], Rect(0, 0, 2, 3))
    with pytest.raises(HypothesisViolation) as err:
        row_fill(lang, start, 0)
    assert err.value.clause == "endpoints_generated"
    lang = collect_patterns(const(), Shape.rect(2, 2))
    with pytest.raises(HypothesisViolation):
        row_fill(lang, PartialColoring(Rect(0, 0, 2, 3), {}), 0)


# --- one-dimensional procedures ---------------------------------------------------

def test_morse_hedlund_examples():
    v = morse_hedlund_check("01" * 10, 2)
    assert v.applicable and v.period == 2 and v.interval == (2, 18)
    v = morse_hedlund_check("0010010010", 3)
    assert v.applicable and v.complexity == 3 and v.period == 3
    assert factor_count("0010010", 3) == 3
    v = morse_hedlund_check("0110100110010110", 2)
    assert not v.applicable and v.complexity > 2
    with pytest.raises(DomainTooShort):
        morse_hedlund_check("0010010", 3)


def test_morse_hedlund_other_domains():
    v = morse_hedlund_check("1000000000", 2, domain="N")
    assert v.applicable and v.interval == (3, 9) and v.period == 1
    v = morse_hedlund_check("011011011", 3, domain="Z")
    assert v.applicable and v.interval == (0, 8) and v.period == 3


@settings(max_examples=200, deadline=None)
@given(st.text("01", min_size=8, max_size=24), st.integers(1, 4))
def test_morse_hedlund_consistency(word, n0):
    if len(word) <= 3 * n0:
        return
    v = morse_hedlund_check(word, n0)
    assert v.holds
    if v.applicable:
        lo, hi = v.interval
        assert all(word[x] == word[x + v.period] for x in range(lo, hi - v.period + 1))


def test_fine_wilf_examples():
    r = fine_wilf_reconstruct("00100", 4)
    assert r.status == "ambiguous"
    assert {c.period for c in r.completions} == {3, 4}
    assert {c.prefix for c in r.completions} == {"001", "0010"}
    r = fine_wilf_reconstruct("0000", 3)
    assert r.status == "unique" and r.minimal_period == 1
    r = fine_wilf_reconstruct("010101", 3)
    assert r.status == "unique" and r.minimal_period == 2
    assert fine_wilf_reconstruct("0110", 2).status == "inconsistent"


def test_word_periods_convention():
    # a word of length m counts as periodic with period m (and anything longer)
    assert word_periods("01", 3) == [2, 3]


@pytest.mark.parametrize("p,q", [(3, 2), (5, 3), (4, 2), (6, 4)])
def test_fine_wilf_sharpness(p, q):
    r = fine_wilf_sharpness(p, q)
    assert r.forced and r.witness is not None
    assert r.bound == p + q - math.gcd(p, q)
    a, b = r.witness
    assert a[:-1] == b[:-1] and a != b


# --- periods -----------------------------------------------------------------------

def test_detect_periods_examples():
    r = detect_periods_2d(const(16))
    assert r.classification == "doubly_periodic" and {(1, 0), (0, 1)} <= set(r.vectors)
    mech = materialize(GeneratorSpec("mechanical", slope_num=13, slope_den=21), Rect(0, 0, 64, 64))
    r = detect_periods_2d(mech)
    assert (0, 1) in r.vectors
    assert not any(y == 0 and abs(x) < 21 for x, y in r.vectors)
    assert (21, 0) in r.vectors
    assert detect_periods_2d(delta(16)).classification == "none"
