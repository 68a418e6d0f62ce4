"""Exhaustive classification, backtracking search, and the tracing oracle."""

import pytest

from rotsys.core import (
    RotationSystem,
    check_rule_r_star,
    complete_graph_rs,
    euler_surface,
    is_triangular,
    trace_faces,
)
from rotsys.search import BudgetExceeded, classify_complete, find_triangular, oracle_trace


def test_classify_k4():
    result = classify_complete(4)
    # one fixed first neighbor per vertex: ((4-2)!)^4 = 16 labeled systems
    assert result.systems_examined == 16
    assert result.min_genus == 0
    assert set(result.min_genus_types) == {()}


def test_classify_k5_counts():
    result = classify_complete(5)
    assert result.systems_examined == 6 ** 5 == 7776
    assert result.min_genus == 1
    histogram = dict(result.genus_histogram)
    assert sum(histogram.values()) == 7776
    assert set(histogram) == {1, 2, 3}


def test_classify_is_deterministic():
    a = classify_complete(5)
    b = classify_complete(5)
    assert a == b


def test_find_triangular_k7():
    rs = find_triangular(7)
    assert rs is not None
    assert check_rule_r_star(rs)
    assert euler_surface(rs).genus == 1


def test_find_triangular_respects_missing_edges():
    rs = find_triangular(5, missing_edges=[(3, 4)])
    assert rs is not None
    assert not rs.has_edge(3, 4)
    assert is_triangular(trace_faces(rs))
    assert euler_surface(rs).genus == 0


def test_find_triangular_nonexistent():
    # no triangular embedding of the complete graph on 5 vertices exists:
    # 10 edges never make 20/3 faces
    assert find_triangular(5) is None


def test_find_triangular_budget():
    with pytest.raises(BudgetExceeded):
        find_triangular(19, node_budget=10)


def test_oracle_matches_heffter_edmonds():
    def canon(seq):
        seq = tuple(map(str, seq))
        best = None
        for cand in (seq, tuple(reversed(seq))):
            for k in range(len(cand)):
                rot = cand[k:] + cand[:k]
                if best is None or rot < best:
                    best = rot
        return best

    samples = [
        complete_graph_rs(5),
        complete_graph_rs(6),
        RotationSystem({0: (1, 2), 1: (2, 0), 2: (0, 1)}, frozenset({(0, 1)})),
        RotationSystem({i: tuple((i + k) % 7 for k in (1, 3, 2, 6, 4, 5))
                        for i in range(7)}),
    ]
    for rs in samples:
        assert sorted(map(canon, oracle_trace(rs))) == \
            sorted(canon(f.boundary) for f in trace_faces(rs))
