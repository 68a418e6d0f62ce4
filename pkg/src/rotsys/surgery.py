"""Primitive embedding modifications: chords, deletions, exchanges, flips,
handles, contraction, subdivision, crosscaps, and replayable scripts.

Every operation is a pure function RotationSystem -> RotationSystem.  Faces
are always recomputed from scratch after a modification; corners are
addressed through a face identifier plus corner indices so that faces with
repeated vertices stay unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    EmbeddingError,
    Face,
    RotationSystem,
    edge_key,
    euler_surface,
    find_face,
    format_label,
    parse_label,
    trace_faces,
)


class SurgeryError(EmbeddingError):
    """Precondition of a surgery primitive violated."""


# -- corner addressing ---------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    """A face identifier with two corner positions into its canonical cycle."""
    face_id: str
    i: int
    j: int


def corner_info(face: Face, idx: int):
    """(vertex, in-neighbor, local sense) of corner idx on the face."""
    states = face.canonical
    idx %= len(states)
    b, _, s = states[idx]
    w = states[idx - 1][0]
    return b, w, s


def _insert_at_corner(rs: RotationSystem, face: Face, idx: int, z) -> dict:
    """New rotation tuple at the corner's vertex with z spliced into the gap."""
    b, w, s = corner_info(face, idx)
    nbrs = list(rs.rotation[b])
    pos = nbrs.index(w)
    if s > 0:
        nbrs.insert(pos + 1, z)
    else:
        nbrs.insert(pos, z)
    return {b: tuple(nbrs)}


def _with(rs: RotationSystem, updates: dict, negative=None) -> RotationSystem:
    rot = dict(rs.rotation)
    rot.update(updates)
    return RotationSystem(rot, rs.negative_edges if negative is None else negative)


# -- chord addition / edge deletion ---------------------------------------------

def add_chord(rs: RotationSystem, face: Face, i: int, j: int) -> RotationSystem:
    """Split one face in two by a new edge between the corners i and j.

    The corners must sit at distinct, nonadjacent vertices of the same
    face.  The new edge gets signature -1 exactly when the two corners
    have opposite local senses, so both pieces stay coherently traced.
    """
    u, _, su = corner_info(face, i)
    v, _, sv = corner_info(face, j)
    if u == v:
        raise SurgeryError(f"chord endpoints coincide at {u!r}")
    if rs.has_edge(u, v):
        raise SurgeryError(f"chord ({u!r}, {v!r}) already an edge")
    updates = _insert_at_corner(rs, face, i, v)
    updates.update(_insert_at_corner(rs, face, j, u))
    negative = set(rs.negative_edges)
    if su * sv < 0:
        negative.add(edge_key(u, v))
    return _with(rs, updates, frozenset(negative))


def delete_edge(rs: RotationSystem, u, v) -> RotationSystem:
    """Remove edge (u, v).  The two incident face sides merge if distinct;
    if both sides lie on one face, the face splits and (orientably) the
    genus drops — query edge_on_single_face beforehand if that matters."""
    if not rs.has_edge(u, v):
        raise SurgeryError(f"edge ({u!r}, {v!r}) absent")
    rot = dict(rs.rotation)
    rot[u] = tuple(w for w in rot[u] if w != v)
    rot[v] = tuple(w for w in rot[v] if w != u)
    return RotationSystem(rot, rs.negative_edges - {edge_key(u, v)})


def faces_at_edge(faces, u, v):
    """Faces whose boundary uses edge {u, v}, with multiplicity."""
    out = []
    for f in faces:
        for _ in range(f.uses_edge(u, v)):
            out.append(f)
    return out


def edge_on_single_face(faces, u, v) -> bool:
    hit = faces_at_edge(faces, u, v)
    return len(hit) == 2 and hit[0] is hit[1]


def chord_exchange(rs: RotationSystem, u, v, face: Face, i: int, j: int,
                   faces=None) -> RotationSystem:
    """Move edge (u, v) so it becomes a chord of the given face.

    The edge's two sides must lie on distinct faces, neither of them the
    target face; its removal merges them, and the re-insertion splits the
    target.  Genus and edge count are unchanged.
    """
    if faces is None:
        faces = trace_faces(rs)
    hit = faces_at_edge(faces, u, v)
    if len(hit) != 2 or hit[0] is hit[1]:
        raise SurgeryError(f"edge ({u!r}, {v!r}) has both sides on one face")
    if any(f.face_id == face.face_id for f in hit):
        raise SurgeryError(f"edge ({u!r}, {v!r}) is incident with the target face")
    pruned = delete_edge(rs, u, v)
    # the target face is untouched by the deletion, so its corners remain valid
    return add_chord(pruned, face, i, j)


def edge_flip(rs: RotationSystem, remove, insert) -> RotationSystem:
    """Replace edge (a, b) by the opposite diagonal (c, d) of the
    quadrilateral formed when (a, b) is deleted from two triangles."""
    a, b = remove
    c, d = insert
    if rs.has_edge(c, d):
        raise SurgeryError(f"diagonal ({c!r}, {d!r}) already present")
    faces = trace_faces(rs)
    hit = faces_at_edge(faces, a, b)
    if len(hit) != 2 or hit[0] is hit[1]:
        raise SurgeryError(f"edge ({a!r}, {b!r}) has both sides on one face")
    if not all(len(f) == 3 for f in hit):
        raise SurgeryError(f"edge ({a!r}, {b!r}) not between two triangles")
    apexes = {w for f in hit for w in f.boundary} - {a, b}
    if apexes != {c, d}:
        raise SurgeryError(
            f"triangles at ({a!r}, {b!r}) have apexes {sorted(map(str, apexes))}, "
            f"not ({c!r}, {d!r})")
    pruned = delete_edge(rs, a, b)
    quad = None
    for f in trace_faces(pruned):
        if len(f) == 4 and c in f.boundary and d in f.boundary:
            bd = f.boundary
            if bd[(bd.index(c) + 2) % 4] == d:
                quad = f
                break
    if quad is None:
        raise SurgeryError("deletion did not open the expected quadrilateral")
    return add_chord(pruned, quad, quad.boundary.index(c), quad.boundary.index(d))


def flip_sequence(rs: RotationSystem, pairs) -> RotationSystem:
    """Chained flips: -(e1) ± e2 ± ... ± ek + (new) passes the hole down.

    ``pairs`` lists the edges e1..ek and the finally-inserted pair last;
    the elementary flips run from the back: -(e_{k}) + new, then
    -(e_{k-1}) + e_k, and so on.
    """
    if len(pairs) < 2:
        raise SurgeryError("flip sequence needs at least two pairs")
    for idx in range(len(pairs) - 1, 0, -1):
        rs = edge_flip(rs, pairs[idx - 1], pairs[idx])
    return rs


# -- handles -----------------------------------------------------------------------

def add_edge_via_handle(rs: RotationSystem, face1: Face, i: int,
                        face2: Face, j: int) -> RotationSystem:
    """Add an edge between corners on two distinct faces, merging them.

    The genus rises by one; the merged face has length |f1| + |f2| + 2 and
    passes through the new edge twice.
    """
    if face1.face_id == face2.face_id:
        raise SurgeryError("handle requires two distinct faces")
    x, _, sx = corner_info(face1, i)
    y, _, sy = corner_info(face2, j)
    if x == y or rs.has_edge(x, y):
        raise SurgeryError(f"handle endpoints ({x!r}, {y!r}) invalid")
    updates = _insert_at_corner(rs, face1, i, y)
    updates.update(_insert_at_corner(rs, face2, j, x))
    negative = set(rs.negative_edges)
    if sx * sy < 0:
        negative.add(edge_key(x, y))
    return _with(rs, updates, frozenset(negative))


def construction_k3(rs: RotationSystem, v, x, y, z,
                    verify: bool = True) -> RotationSystem:
    """Open a 12-sided face through v by deleting (v,x), (v,y), (v,z) and
    interleaving the three remaining arcs of the rotation at v.

    Requires the rotation at v to read x a1..ai y b1..bj z c1..ck with all
    three gaps nonempty.  The genus rises by one and the 12-sided face
    [a1, x, ck, v, b1, y, ai, v, c1, z, bj, v] appears.
    """
    row = rs.rotation[v]
    for w in (x, y, z):
        if w not in row:
            raise SurgeryError(f"{w!r} is not a neighbor of {v!r}")
    k0 = row.index(x)
    row = row[k0:] + row[:k0]
    iy, iz = row.index(y), row.index(z)
    if not (0 < iy < iz):
        raise SurgeryError(f"rotation at {v!r} does not read {x}..{y}..{z}")
    aseg, bseg, cseg = row[1:iy], row[iy + 1:iz], row[iz + 1:]
    if not (aseg and bseg and cseg):
        raise SurgeryError("each of the three arcs between x, y, z must be nonempty")
    rs2 = delete_edge(delete_edge(delete_edge(rs, v, x), v, y), v, z)
    rs2 = _with(rs2, {v: aseg + cseg + bseg})
    if verify:
        expected = (aseg[0], x, cseg[-1], v, bseg[0], y, aseg[-1], v,
                    cseg[0], z, bseg[-1], v)
        if not _face_with_boundary(trace_faces(rs2), expected):
            raise SurgeryError("expected 12-sided face did not appear")
    return rs2


def _face_with_boundary(faces, boundary):
    n = len(boundary)
    rotations = {tuple(boundary[i:] + boundary[:i]) for i in range(n)}
    for f in faces:
        if len(f) == n and tuple(f.boundary) in rotations:
            return f
    return None


# -- contraction / subdivision / vertex deletion --------------------------------------

def switch_vertex(rs: RotationSystem, v) -> RotationSystem:
    """Reverse the rotation at v and toggle all its edge signatures; this
    leaves the embedding unchanged."""
    negative = set(rs.negative_edges)
    for u in rs.rotation[v]:
        negative.symmetric_difference_update({edge_key(u, v)})
    return _with(rs, {v: tuple(reversed(rs.rotation[v]))}, frozenset(negative))


def contract_face_edge(rs: RotationSystem, u, v, new_label=None) -> RotationSystem:
    """Contract edge (u, v) into one vertex, splicing the rotations.

    The endpoints must have no common neighbor (otherwise contraction
    would create parallel edges).  Each face incidence of the edge
    shortens that face by one; genus and orientability are unchanged.
    """
    if not rs.has_edge(u, v):
        raise SurgeryError(f"edge ({u!r}, {v!r}) absent")
    common = (set(rs.rotation[u]) & set(rs.rotation[v])) - {u, v}
    if common:
        raise SurgeryError(
            f"contracting ({u!r}, {v!r}) would double edges to {sorted(map(str, common))}")
    if rs.signature(u, v) < 0:
        rs = switch_vertex(rs, v)
    if new_label is None:
        new_label = u
    if new_label in rs.rotation and new_label not in (u, v):
        raise SurgeryError(f"label {new_label!r} already in use")
    ru, rv = rs.rotation[u], rs.rotation[v]
    iu, iv = ru.index(v), rv.index(u)
    splice = tuple(rv[(iv + 1 + t) % len(rv)] for t in range(len(rv) - 1))
    merged = ru[:iu] + splice + ru[iu + 1:]
    rot = dict(rs.rotation)
    del rot[u], rot[v]
    rot[new_label] = merged
    negative = set()
    for (a, b) in rs.negative_edges:
        if {a, b} == {u, v}:
            continue
        a2 = new_label if a in (u, v) else a
        b2 = new_label if b in (u, v) else b
        negative.add(edge_key(a2, b2))
    for w in list(rot):
        if w == new_label:
            continue
        rot[w] = tuple(new_label if t in (u, v) else t for t in rot[w])
    return RotationSystem(rot, frozenset(negative))


def subdivide_face(rs: RotationSystem, face: Face, w) -> RotationSystem:
    """Put a new vertex w inside a simple face and join it to every corner,
    triangulating the face's region.  Genus unchanged."""
    if w in rs.rotation:
        raise SurgeryError(f"vertex {w!r} already exists")
    boundary = face.boundary
    if len(set(boundary)) != len(boundary):
        raise SurgeryError("can only subdivide a simple face")
    updates = {}
    negative = set(rs.negative_edges)
    for idx in range(len(face)):
        b, _, s = corner_info(face, idx)
        updates.update(_insert_at_corner(rs, face, idx, w))
        if s < 0:
            negative.add(edge_key(b, w))
    order = tuple(face.canonical[idx][0] for idx in range(len(face)))
    updates[w] = tuple(reversed(order))
    out = _with(rs, updates, frozenset(negative))
    new_faces = trace_faces(out)
    if euler_surface(out, new_faces) != euler_surface(rs):
        raise SurgeryError("subdivision altered the surface")
    return out


def delete_vertex(rs: RotationSystem, v) -> RotationSystem:
    """Remove v and its edges; the faces around v merge into one."""
    if v not in rs.rotation:
        raise SurgeryError(f"vertex {v!r} absent")
    rot = {w: tuple(t for t in nbrs if t != v)
           for w, nbrs in rs.rotation.items() if w != v}
    negative = frozenset(e for e in rs.negative_edges if v not in e)
    return RotationSystem(rot, negative)


# -- crosscaps -----------------------------------------------------------------------

def add_crosscap_on_edge(rs: RotationSystem, u, v, faces=None) -> RotationSystem:
    """Toggle the signature of (u, v), merging its two incident faces
    through a crosscap.  Requires the sides on distinct faces; the Euler
    characteristic drops by one and the result is nonorientable."""
    if faces is None:
        faces = trace_faces(rs)
    hit = faces_at_edge(faces, u, v)
    if len(hit) != 2 or hit[0] is hit[1]:
        raise SurgeryError(f"edge ({u!r}, {v!r}) has both sides on one face")
    e = edge_key(u, v)
    negative = set(rs.negative_edges)
    negative.symmetric_difference_update({e})
    return _with(rs, {}, frozenset(negative))


def twist_segment(rs: RotationSystem, v, start: int, length: int) -> RotationSystem:
    """Pass a bundle of consecutive edges at v through a new crosscap:
    reverse a cyclic segment of the rotation at v and toggle the
    signatures of the segment's edges."""
    nbrs = rs.rotation[v]
    d = len(nbrs)
    if not (1 <= length < d):
        raise SurgeryError("segment length must be between 1 and degree-1")
    idxs = [(start + t) % d for t in range(length)]
    seg = [nbrs[i] for i in idxs]
    new = list(nbrs)
    for i, w in zip(idxs, reversed(seg)):
        new[i] = w
    negative = set(rs.negative_edges)
    for w in seg:
        negative.symmetric_difference_update({edge_key(v, w)})
    return _with(rs, {v: tuple(new)}, frozenset(negative))


# -- replayable scripts -----------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    text: str

    def __str__(self):
        return self.text


@dataclass
class SurgeryScript:
    steps: list

    def __str__(self):
        return "\n".join(str(s) for s in self.steps) + ("\n" if self.steps else "")

    @classmethod
    def parse(cls, text: str) -> "SurgeryScript":
        steps = [Step(line.strip()) for line in text.splitlines()
                 if line.strip() and not line.strip().startswith("#")]
        return cls(steps)


def _resolve(faces, token: str):
    """FACEHASH@i,j -> (face, i, j)."""
    fid, _, ij = token.partition("@")
    i, _, j = ij.partition(",")
    return find_face(faces, fid), int(i), int(j)


def replay(rs: RotationSystem, script: SurgeryScript) -> RotationSystem:
    """Apply a script step by step, re-resolving face identifiers as it goes.

    A stale face hash (drift between recording and replay) fails fast.
    """
    for step in script.steps:
        parts = str(step).split()
        op = parts[0]
        if op == "chord":
            u, v = parse_label(parts[1]), parse_label(parts[2])
            face, i, j = _resolve(trace_faces(rs), parts[4])
            rs = add_chord(rs, face, i, j)
        elif op == "exchange":
            u, v = parse_label(parts[1]), parse_label(parts[2])
            faces = trace_faces(rs)
            face, i, j = _resolve(faces, parts[4])
            rs = chord_exchange(rs, u, v, face, i, j, faces)
        elif op == "flip":
            # flip - a b + c d
            a, b = parse_label(parts[2]), parse_label(parts[3])
            c, d = parse_label(parts[5]), parse_label(parts[6])
            rs = edge_flip(rs, (a, b), (c, d))
        elif op == "handle":
            faces = trace_faces(rs)
            tok1, tok2 = parts[1], parts[2]
            _, f1tok = tok1.split("@", 1)
            _, f2tok = tok2.split("@", 1)
            fid1, _, i = f1tok.partition(",")
            fid2, _, j = f2tok.partition(",")
            rs = add_edge_via_handle(rs, find_face(faces, fid1), int(i),
                                     find_face(faces, fid2), int(j))
        elif op == "k3":
            v, x, y, z = (parse_label(p) for p in parts[1:5])
            rs = construction_k3(rs, v, x, y, z)
        elif op == "contract":
            u, v = parse_label(parts[1]), parse_label(parts[2])
            new = parse_label(parts[4]) if len(parts) > 3 and parts[3] == "as" else None
            rs = contract_face_edge(rs, u, v, new)
        elif op == "crosscap":
            rs = add_crosscap_on_edge(rs, parse_label(parts[1]), parse_label(parts[2]))
        elif op == "twist":
            rs = twist_segment(rs, parse_label(parts[1]), int(parts[2]), int(parts[3]))
        elif op == "subdivide":
            face = find_face(trace_faces(rs), parts[1])
            rs = subdivide_face(rs, face, parse_label(parts[2]))
        elif op == "delvtx":
            rs = delete_vertex(rs, parse_label(parts[1]))
        elif op == "delete":
            rs = delete_edge(rs, parse_label(parts[1]), parse_label(parts[2]))
        else:
            raise SurgeryError(f"unknown script step {op!r}")
    return rs


class Recorder:
    """Applies surgery primitives while logging a replayable script."""

    def __init__(self, rs: RotationSystem):
        self.rs = rs
        self.script = SurgeryScript([])

    def _log(self, text: str):
        self.script.steps.append(Step(text))

    def faces(self):
        return trace_faces(self.rs)

    def add_chord(self, face, i, j):
        u, v = face.canonical[i % len(face)][0], face.canonical[j % len(face)][0]
        self.rs = add_chord(self.rs, face, i, j)
        self._log(f"chord {format_label(u)} {format_label(v)} into {face.face_id}@{i},{j}")
        return self.rs

    def chord_exchange(self, u, v, face, i, j, faces=None):
        self.rs = chord_exchange(self.rs, u, v, face, i, j, faces)
        self._log(f"exchange {format_label(u)} {format_label(v)} into {face.face_id}@{i},{j}")
        return self.rs

    def edge_flip(self, remove, insert):
        self.rs = edge_flip(self.rs, remove, insert)
        a, b = remove
        c, d = insert
        self._log(f"flip - {format_label(a)} {format_label(b)}"
                  f" + {format_label(c)} {format_label(d)}")
        return self.rs

    def handle(self, face1, i, face2, j):
        x = face1.canonical[i % len(face1)][0]
        y = face2.canonical[j % len(face2)][0]
        self.rs = add_edge_via_handle(self.rs, face1, i, face2, j)
        self._log(f"handle {format_label(x)}@{face1.face_id},{i}"
                  f" {format_label(y)}@{face2.face_id},{j}")
        return self.rs

    def construction_k3(self, v, x, y, z):
        self.rs = construction_k3(self.rs, v, x, y, z)
        self._log("k3 " + " ".join(format_label(t) for t in (v, x, y, z)))
        return self.rs

    def contract(self, u, v, new_label=None):
        self.rs = contract_face_edge(self.rs, u, v, new_label)
        line = f"contract {format_label(u)} {format_label(v)}"
        if new_label is not None:
            line += f" as {format_label(new_label)}"
        self._log(line)
        return self.rs

    def crosscap(self, u, v):
        self.rs = add_crosscap_on_edge(self.rs, u, v)
        self._log(f"crosscap {format_label(u)} {format_label(v)}")
        return self.rs

    def twist(self, v, start, length):
        self.rs = twist_segment(self.rs, v, start, length)
        self._log(f"twist {format_label(v)} {start} {length}")
        return self.rs

    def subdivide(self, face, w):
        self.rs = subdivide_face(self.rs, face, w)
        self._log(f"subdivide {face.face_id} {format_label(w)}")
        return self.rs

    def delete_vertex(self, v):
        self.rs = delete_vertex(self.rs, v)
        self._log(f"delvtx {format_label(v)}")
        return self.rs

    def delete_edge(self, u, v):
        self.rs = delete_edge(self.rs, u, v)
        self._log(f"delete {format_label(u)} {format_label(v)}")
        return self.rs
