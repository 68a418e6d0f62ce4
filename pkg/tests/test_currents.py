"""Current-graph validation, log tracing, row derivation, and seeds."""

import pytest

from rotsys import fixtures
from rotsys.core import check_rule_r_star, euler_surface, is_triangular, trace_faces
from rotsys.currents import (
    CurrentGraph,
    CurrentGraphError,
    Log,
    derive_index1,
    derive_index3,
    derive_rows,
    manufacture_vortex_rows,
    parse_cur,
    serialize_cur,
    trace_log,
    validate_current_graph,
)


def theta_z7(middle_current=3):
    """Two vertices joined by three arcs carrying 1, middle, 2 over Z_7."""
    return CurrentGraph(
        7,
        {"A": ("e1+", "e2-", "e3+"), "B": ("e1-", "e2+", "e3-")},
        {"A": "solid", "B": "solid"},
        {"e1": ("A", "B", 1), "e2": ("B", "A", middle_current),
         "e3": ("A", "B", 2)},
        {},
    )


def test_theta_z7_is_valid_and_derives_a_torus_triangulation():
    cg = theta_z7()
    report = validate_current_graph(cg)
    assert report.valid and report.index == 1
    assert list(trace_log(cg)) == [1, 3, 2, 6, 4, 5]
    rs = derive_index1(cg)
    assert len(rs.rotation) == 7
    assert check_rule_r_star(rs)
    assert euler_surface(rs).genus == 1
    assert rs.rotation[0] == (1, 3, 2, 6, 4, 5)


def test_kirchhoff_violation_caught():
    # middle current 2 duplicates a class and breaks current conservation
    report = validate_current_graph(theta_z7(middle_current=2))
    assert not report.valid
    assert not report.principles["C4"][0]


def test_bundled_current_graph_passes_all_principles():
    cg = fixtures.load_cur("case2_z18.cur")
    report = validate_current_graph(cg)
    assert report.valid, report.principles
    assert report.index == 1


def test_log_starts_before_the_foremost_letter():
    cg = fixtures.load_cur("case2_z18.cur")
    log = trace_log(cg)
    assert log[1] == "x"           # T1 letter directly after the start
    assert isinstance(log[0], int)
    assert len(log) == 25


def test_log_matches_bundled_log_file():
    cg = fixtures.load_cur("case2_z18.cur")
    log, m, meta = fixtures.load_log("case2_z18.log")
    assert m == cg.modulus == 18
    assert Log(trace_log(cg)).cyclically_equal(log)


def test_derived_27_vertex_system():
    rs = derive_index1(fixtures.load_cur("case2_z18.cur"))
    assert len(rs.rotation) == 27
    faces = trace_faces(rs)
    assert is_triangular(faces)
    assert euler_surface(rs, faces).genus == 37
    # T2 halves see the numbers of one parity each
    assert set(rs.rotation["y_0"]) == set(range(0, 18, 2))
    assert set(rs.rotation["y_1"]) == set(range(1, 18, 2))


def test_row_shift_rule():
    log, m, meta = fixtures.load_log("case2_z18.log")
    rows = derive_rows(log, m, meta)
    numbers0 = [t for t in rows[0] if isinstance(t, int)]
    numbers5 = [t for t in rows[5] if isinstance(t, int)]
    assert numbers5 == [(t + 5) % m for t in numbers0]


def test_manufactured_rows_satisfy_row_rule():
    log, m, meta = fixtures.load_log("case2_z18.log")
    rs = manufacture_vortex_rows(derive_rows(log, m, meta))
    assert check_rule_r_star(rs)


def test_index3_seed_k30():
    seed, m, letters = fixtures.load_seed("k30_z27.seed")
    rs = derive_index3(seed, m, letters)
    assert len(rs.rotation) == 30
    faces = trace_faces(rs)
    assert is_triangular(faces)
    assert euler_surface(rs, faces).genus == 58
    # letters pairwise nonadjacent: the missing triangle
    for a, b in (("x", "y"), ("y", "z"), ("x", "z")):
        assert not rs.has_edge(a, b)


def test_index3_seed_k20():
    seed, m, letters = fixtures.load_seed("k20_z18.seed")
    rs = derive_index3(seed, m, letters)
    assert len(rs.rotation) == 21
    assert is_triangular(trace_faces(rs))
    assert euler_surface(rs).genus == 22
    assert set(rs.rotation["x"]) == set(range(18))
    assert set(rs.rotation["y_0"]) == set(range(0, 18, 2))


def test_index3_row_shift_by_three():
    seed, m, letters = fixtures.load_seed("k20_z18.seed")
    rs = derive_index3(seed, m, letters)
    row1 = [t for t in rs.rotation[1] if isinstance(t, int)]
    row4 = [t for t in rs.rotation[4] if isinstance(t, int)]
    assert row4 == [(t + 3) % m for t in row1]


def test_cur_round_trip():
    text = fixtures.load_text("case2_z18.cur")
    cg = parse_cur(text)
    again = parse_cur(serialize_cur(cg))
    assert again == cg


def test_invalid_current_graph_rejected():
    with pytest.raises(CurrentGraphError):
        CurrentGraph(7, {"A": ("e1+",)}, {"A": "solid"},
                     {"e1": ("A", "A", 0)}, {})
    with pytest.raises(CurrentGraphError):
        derive_index1(theta_z7(middle_current=2))
