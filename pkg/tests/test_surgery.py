"""Contracts of the surgery primitives and script replay."""

import pytest

from rotsys.core import (
    RotationSystem,
    embedding_type,
    euler_surface,
    is_orientable,
    trace_faces,
)
from rotsys.surgery import (
    Recorder,
    SurgeryError,
    SurgeryScript,
    add_chord,
    add_crosscap_on_edge,
    add_edge_via_handle,
    chord_exchange,
    construction_k3,
    contract_face_edge,
    delete_edge,
    delete_vertex,
    edge_flip,
    edge_on_single_face,
    faces_at_edge,
    replay,
    subdivide_face,
    twist_segment,
)

CUBE = RotationSystem({
    0: (1, 3, 4), 1: (2, 0, 5), 2: (3, 1, 6), 3: (0, 2, 7),
    4: (0, 7, 5), 5: (1, 4, 6), 6: (2, 5, 7), 7: (3, 6, 4),
})

OCTAHEDRON = RotationSystem({
    0: (1, 2, 3, 4), 1: (0, 4, 5, 2), 2: (0, 1, 5, 3),
    3: (0, 2, 5, 4), 4: (0, 3, 5, 1), 5: (1, 4, 3, 2),
})


def chi(rs):
    return euler_surface(rs).euler_characteristic


def test_cube_and_octahedron_are_spheres():
    assert chi(CUBE) == 2
    assert chi(OCTAHEDRON) == 2
    assert all(len(f) == 4 for f in trace_faces(CUBE))
    assert all(len(f) == 3 for f in trace_faces(OCTAHEDRON))


def test_chord_splits_a_face_and_delete_undoes_it():
    faces = trace_faces(CUBE)
    f = faces[0]
    u, v = f.boundary[0], f.boundary[2]
    out = add_chord(CUBE, f, 0, 2)
    assert out.has_edge(u, v)
    assert len(trace_faces(out)) == len(faces) + 1
    assert chi(out) == chi(CUBE)
    assert delete_edge(out, u, v) == CUBE


def test_chord_rejects_existing_edge_and_same_vertex():
    f = trace_faces(CUBE)[0]
    with pytest.raises(SurgeryError):
        add_chord(CUBE, f, 0, 1)      # adjacent corners: edge already there
    with pytest.raises(SurgeryError):
        add_chord(CUBE, f, 0, 0)


def test_delete_edge_merges_two_faces():
    faces = trace_faces(CUBE)
    u, v = 0, 1
    assert not edge_on_single_face(faces, u, v)
    out = delete_edge(CUBE, u, v)
    assert len(trace_faces(out)) == len(faces) - 1
    assert chi(out) == chi(CUBE)


def test_chord_exchange_preserves_surface():
    # open a 4-gon in the complete-graph torus by deleting an edge, then
    # move its diagonal (an existing remote edge) into it
    k7 = RotationSystem({i: tuple((i + k) % 7 for k in (1, 3, 2, 6, 4, 5))
                         for i in range(7)})
    base = delete_edge(k7, 0, 1)
    faces = trace_faces(base)
    big = max(faces, key=len)
    assert len(big) == 4
    bd = big.boundary
    out = None
    for i in range(4):
        for j in range(4):
            u, v = bd[i], bd[j]
            if u == v or not base.has_edge(u, v) or big.uses_edge(u, v):
                continue
            try:
                out = chord_exchange(base, u, v, big, i, j, faces)
                break
            except SurgeryError:
                continue
        if out is not None:
            break
    assert out is not None
    assert chi(out) == chi(base)
    assert out.num_edges() == base.num_edges()


def test_chord_exchange_requires_remote_edge():
    base = delete_edge(OCTAHEDRON, 0, 1)
    faces = trace_faces(base)
    big = max(faces, key=len)
    bd = big.boundary
    u, v = bd[0], bd[1]           # this edge lies on the target face
    with pytest.raises(SurgeryError):
        chord_exchange(base, u, v, big, 0, 1, faces)


def test_edge_flip_on_octahedron():
    # 0 and 5 are the antipodal, nonadjacent pair; flipping any edge whose
    # two triangle apexes are 0 and 5 inserts (0, 5)
    for (u, v) in ((1, 2), (2, 3), (3, 4), (4, 1)):
        out = edge_flip(OCTAHEDRON, (u, v), (0, 5))
        assert out.has_edge(0, 5) and not out.has_edge(u, v)
        assert chi(out) == 2
        assert all(len(f) == 3 for f in trace_faces(out))


def test_edge_flip_rejects_wrong_apexes():
    with pytest.raises(SurgeryError):
        edge_flip(OCTAHEDRON, (1, 2), (3, 5))


def test_handle_joins_two_faces():
    faces = trace_faces(CUBE)
    f1 = next(f for f in faces if 0 in f.boundary)
    f2 = next(f for f in faces if 6 in f.boundary and 0 not in f.boundary)
    out = add_edge_via_handle(CUBE, f1, f1.occurrences(0)[0],
                              f2, f2.occurrences(6)[0])
    assert out.has_edge(0, 6)
    assert chi(out) == chi(CUBE) - 2
    assert is_orientable(out)


def test_construction_k3_opens_a_12_gon():
    rs = RotationSystem({i: tuple((i + k) % 7 for k in (1, 3, 2, 6, 4, 5))
                         for i in range(7)})
    row = rs.rotation[0]
    x, y, z = row[0], row[2], row[4]
    out = construction_k3(rs, 0, x, y, z)
    assert not out.has_edge(0, x) and not out.has_edge(0, y)
    faces = trace_faces(out)
    assert embedding_type(faces) == (12,)
    assert chi(out) == chi(rs) - 2
    twelve = max(faces, key=len)
    assert twelve.boundary.count(0) == 3


def test_construction_k3_checks_rotation_order():
    rs = RotationSystem({i: tuple((i + k) % 7 for k in (1, 3, 2, 6, 4, 5))
                         for i in range(7)})
    row = rs.rotation[0]
    with pytest.raises(SurgeryError):
        construction_k3(rs, 0, row[4], row[2], row[0])


def test_contract_face_edge():
    # contract a cube edge: endpoints share no neighbors
    out = contract_face_edge(CUBE, 0, 1, "m")
    assert "m" in out.rotation and 0 not in out.rotation
    assert chi(out) == chi(CUBE)
    with pytest.raises(SurgeryError):
        contract_face_edge(OCTAHEDRON, 0, 1)  # common neighbors exist


def test_subdivide_face_preserves_surface():
    f = trace_faces(CUBE)[0]
    out = subdivide_face(CUBE, f, "c")
    assert chi(out) == chi(CUBE)
    assert out.degree("c") == 4


def test_delete_vertex():
    out = delete_vertex(OCTAHEDRON, 5)
    assert 5 not in out.rotation
    assert chi(out) == 2
    assert embedding_type(trace_faces(out)) == (4,)


def test_crosscap_makes_nonorientable():
    out = add_crosscap_on_edge(CUBE, 0, 1)
    assert not is_orientable(out)
    assert chi(out) == chi(CUBE) - 1


def test_crosscap_requires_two_distinct_sides():
    base = RotationSystem({0: (1,), 1: (0,)})
    faces = trace_faces(base)
    assert faces_at_edge(faces, 0, 1)[0] is faces_at_edge(faces, 0, 1)[1]
    with pytest.raises(SurgeryError):
        add_crosscap_on_edge(base, 0, 1)


def test_twist_segment_flips_signatures():
    out = twist_segment(CUBE, 0, 0, 2)
    assert not is_orientable(out)
    back = twist_segment(out, 0, 0, 2)
    assert euler_surface(back) == euler_surface(CUBE)


def test_recorder_script_replays_identically():
    rec = Recorder(CUBE)
    f = rec.faces()[0]
    rec.add_chord(f, 0, 2)
    f1, f2 = rec.faces()[0], rec.faces()[-1]
    if f1.canonical[0][0] != f2.canonical[0][0] \
            and not rec.rs.has_edge(f1.canonical[0][0], f2.canonical[0][0]):
        rec.handle(f1, 0, f2, 0)
    edge = sorted(rec.rs.edges)[0]
    rec.crosscap(*edge)
    script_text = str(rec.script)
    parsed = SurgeryScript.parse(script_text)
    assert str(parsed) == script_text
    assert replay(CUBE, parsed) == rec.rs
    assert replay(CUBE, parsed) == replay(CUBE, parsed)


def test_replay_rejects_stale_face_ids():
    from rotsys.core import EmbeddingError
    rec = Recorder(CUBE)
    rec.add_chord(rec.faces()[0], 0, 2)
    with pytest.raises(EmbeddingError):
        replay(OCTAHEDRON, rec.script)
