import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nivat.config import (Alphabet, GeneratorSpec, Rect, convergent, from_array, from_rows,
                          hermite_basis, infer_alphabet, load_grid, materialize, motif_for,
                          parse_grid, recoordinatize, save_grid, translate)
from nivat.errors import BadSpec, EmptyInput, OutOfWindow, RaggedRows
from nivat.geometry import UnimodularMap


def test_alphabet_rules():
    with pytest.raises(ValueError):
        Alphabet(("0",))
    with pytest.raises(ValueError):
        Alphabet(("0", "0"))
    assert infer_alphabet("1101").symbols == ("1", "0")
    # a lone symbol is padded so the alphabet has two letters
    assert len(infer_alphabet("aaa").symbols) == 2


def test_delta_window():
    cfg = materialize(GeneratorSpec("delta"), Rect.from_bounds(-2, -2, 2, 2))
    for p in cfg.window.points():
        assert cfg[p] == ("1" if p == (0, 0) else "0")


def test_constant():
    cfg = materialize(GeneratorSpec("constant", alphabet="ab", symbol="a"), Rect(3, -1, 4, 5))
    assert set("".join(cfg.rows())) == {"a"}


def test_mechanical_half():
    cfg = materialize(GeneratorSpec("mechanical", slope_num=1, slope_den=2),
                      Rect.from_bounds(0, 0, 5, 1))
    assert cfg.rows() == ["010101", "010101"]


def test_mechanical_matches_floor_formula():
    num, den = 13, 21
    cfg = materialize(GeneratorSpec("mechanical", slope_num=num, slope_den=den), Rect(0, 0, 60, 1))
    expect = "".join(str(((x + 1) * num) // den - (x * num) // den) for x in range(60))
    assert cfg.rows() == [expect]


def test_mechanical_slope_range():
    with pytest.raises(BadSpec):
        materialize(GeneratorSpec("mechanical", slope_num=3, slope_den=2), Rect(0, 0, 4, 4))


def test_convergents():
    assert convergent("golden", 7) == (13, 21)
    p, q = convergent("silver", 4)
    assert 0 < p < q


def test_translate_delta():
    cfg = materialize(GeneratorSpec("delta"), Rect.from_bounds(-2, -2, 2, 2))
    assert translate(cfg, (0, 0)) == cfg
    t = translate(cfg, (1, 0))
    assert t[(-1, 0)] == "1"
    assert translate(t, (-1, 0)) == cfg


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.integers(0, 2**32 - 1))
def test_translate_is_group_action(u, v, seed):
    rng = np.random.default_rng(seed)
    cfg = from_array(rng.integers(0, 2, (6, 5)), origin=(1, -2))
    lhs = translate(translate(cfg, u), v)
    rhs = translate(cfg, (u[0] + v[0], u[1] + v[1]))
    assert lhs == rhs
    for p in lhs.window.points():
        assert lhs[p] == cfg[(p[0] + u[0] + v[0], p[1] + u[1] + v[1])]


def test_recoordinatize():
    stripes = from_rows(["000", "111", "000", "111"])  # horizontal stripes, 3 wide, 4 tall
    same = recoordinatize(stripes, UnimodularMap.identity(), Rect(0, 0, 2, 2))
    assert same == stripes.restrict(Rect(0, 0, 2, 2))
    rot = UnimodularMap(0, -1, 1, 0)  # (x, y) -> (-y, x)
    turned = recoordinatize(stripes, rot, Rect(0, -2, 4, 3))
    for p in turned.window.points():
        assert turned[p] == stripes[(-p[1], p[0])]
    # stripes depend on y only, so the rotated picture depends on x only
    assert all(len(set(col)) == 1 for col in zip(*turned.rows()))
    with pytest.raises(OutOfWindow):
        recoordinatize(stripes, rot, Rect(0, 0, 3, 3))


def test_recoordinatize_delta():
    cfg = materialize(GeneratorSpec("delta"), Rect.from_bounds(-6, -6, 6, 6))
    A = UnimodularMap(2, 1, 1, 1)
    out = recoordinatize(cfg, A, Rect.from_bounds(-2, -2, 2, 2))
    ones = [p for p in out.window.points() if out[p] == "1"]
    assert ones == [(0, 0)]


def test_grid_parsing():
    cfg = parse_grid("01\n10")
    assert cfg.alphabet.symbols == ("0", "1")
    assert cfg[(0, 1)] == "0" and cfg[(1, 1)] == "1" and cfg[(0, 0)] == "1"
    cfg = parse_grid("#origin -2 -2\n010\n101\n")
    assert cfg.origin == (-2, -2)
    with pytest.raises(RaggedRows) as err:
        parse_grid("01\n0")
    assert err.value.line == 2
    with pytest.raises(EmptyInput):
        parse_grid("#origin 0 0\n\n")


def test_load_and_save(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("#origin 3 4\nab\nba\nbb\n")
    cfg = load_grid(path)
    assert cfg.origin == (3, 4) and cfg.width == 2 and cfg.height == 3
    save_grid(cfg, tmp_path / "h.txt")
    assert load_grid(tmp_path / "h.txt") == cfg
    assert load_grid(io.StringIO(save_grid(cfg))) == cfg


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(-9, 9), st.integers(-9, 9),
       st.sampled_from(["01", "abc", "xyz0"]), st.integers(0, 2**32 - 1))
def test_grid_round_trip(w, h, x0, y0, alphabet, seed):
    rng = np.random.default_rng(seed)
    cfg = from_array(rng.integers(0, len(alphabet), (w, h)), alphabet=alphabet, origin=(x0, y0))
    text = save_grid(cfg)
    assert parse_grid(text) == cfg
    assert save_grid(parse_grid(text)) == text


def test_spec_parsing():
    spec, win = GeneratorSpec.from_pairs(["kind=periodic_motif", "motif=01", "periods=2,0;1,1",
                                          "width=10"])
    assert spec.periods == ((2, 0), (1, 1)) and win == {"width": 10}
    assert GeneratorSpec.from_json('{"kind": "mechanical", "slope_num": 1, "slope_den": 3}').slope() == (1, 3)
    assert GeneratorSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(BadSpec):
        GeneratorSpec.from_pairs(["width=3"])
    with pytest.raises(BadSpec):
        GeneratorSpec.from_pairs(["kind"])


def test_dependent_periods_rejected():
    with pytest.raises(BadSpec):
        materialize(GeneratorSpec("periodic_motif", motif=("01",), periods=((2, 0), (4, 0))),
                    Rect(0, 0, 4, 4))


def test_checkerboard():
    cfg = materialize(GeneratorSpec("periodic_motif", motif=("01",), periods=((2, 0), (1, 1))),
                      Rect(0, 0, 4, 4))
    assert cfg.rows() == ["1010", "0101", "1010", "0101"]


periods = st.tuples(st.integers(1, 4), st.integers(0, 4), st.integers(-4, 4), st.integers(1, 4))


@settings(max_examples=100, deadline=None)
@given(periods, st.integers(0, 2**32 - 1))
def test_periodic_motif_is_periodic(pq, seed):
    a, b, c, d = pq
    p, q = (a, b), (c, d)
    if a * d - b * c == 0:
        return
    spec = motif_for((p, q), np.random.default_rng(seed))
    cfg = materialize(spec, Rect(-3, -3, 14, 14))
    for v in (p, q):
        for x in cfg.window.points():
            y = (x[0] + v[0], x[1] + v[1])
            if cfg.window.contains(y):
                assert cfg[x] == cfg[y]


def test_hermite_basis():
    assert hermite_basis((2, 0), (1, 1)) == (2, 1, 1)
    a, b, c = hermite_basis((3, 1), (1, 2))
    assert a * c == 5 and 0 <= b < a


def test_product_1d():
    cfg = materialize(GeneratorSpec("product_1d", axis="y", word="011"), Rect(0, 0, 2, 6))
    col = [cfg[(0, y)] for y in range(6)]
    assert col == list("011011")
    assert all(cfg[(1, y)] == cfg[(0, y)] for y in range(6))
