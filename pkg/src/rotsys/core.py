"""Signed rotation systems, face tracing, and surface invariants.

A rotation system assigns to every vertex a cyclic order of its neighbors;
an edge signature of -1 marks an orientation-reversing edge.  Together they
determine a cellular embedding of the graph in a (possibly nonorientable)
surface.  Faces are recovered by walking the next-corner permutation, and
the surface is identified through the Euler polyhedral equation.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property

Label = int | str
Edge = tuple  # canonically ordered vertex pair


class EmbeddingError(ValueError):
    """Structurally invalid rotation system or operation input."""


class DisconnectedGraphError(EmbeddingError):
    """Face tracing requires a connected graph (cellularity)."""


class InternalConsistencyError(RuntimeError):
    """An invariant that should be unbreakable was broken."""


class FixtureMissingError(RuntimeError):
    """A construction needs an input embedding that is not bundled."""


class RefusalError(RuntimeError):
    """The requested object provably does not exist."""


def label_key(v: Label):
    """Total order on vertex labels: integers first, then letter tags."""
    if isinstance(v, bool):
        raise EmbeddingError(f"bad vertex label {v!r}")
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, v)


def edge_key(u: Label, v: Label) -> Edge:
    if u == v:
        raise EmbeddingError(f"self-loop at {u!r}")
    a, b = sorted((u, v), key=label_key)
    return (a, b)


def parse_label(token: str) -> Label:
    tok = token.strip()
    if not tok:
        raise EmbeddingError("empty vertex label")
    if tok.lstrip("-").isdigit():
        return int(tok)
    return tok


def format_label(v: Label) -> str:
    return str(v)


@dataclass(frozen=True)
class RotationSystem:
    """A graph embedding given by per-vertex rotations and edge signatures.

    ``rotation`` maps each vertex to the cyclic sequence of its neighbors
    (stored as a tuple whose starting point is remembered but irrelevant).
    ``negative_edges`` lists the edges with signature -1; every other edge
    has signature +1.
    """

    rotation: dict
    negative_edges: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "rotation",
                           {v: tuple(nbrs) for v, nbrs in self.rotation.items()})
        object.__setattr__(self, "negative_edges", frozenset(self.negative_edges))
        self._validate()

    def _validate(self):
        for v, nbrs in self.rotation.items():
            label_key(v)
            if len(set(nbrs)) != len(nbrs):
                raise EmbeddingError(f"repeated neighbor in rotation at {v!r}")
            if v in nbrs:
                raise EmbeddingError(f"self-loop at {v!r}")
            for u in nbrs:
                if u not in self.rotation:
                    raise EmbeddingError(f"neighbor {u!r} of {v!r} has no rotation")
                if v not in self.rotation[u]:
                    raise EmbeddingError(f"asymmetric edge ({v!r}, {u!r})")
        for e in self.negative_edges:
            (u, v) = e
            if edge_key(u, v) != e:
                raise EmbeddingError(f"non-canonical edge key {e!r}")
            if v not in self.rotation.get(u, ()):
                raise EmbeddingError(f"signature on absent edge {e!r}")

    # -- basic queries ----------------------------------------------------

    @property
    def vertices(self):
        return frozenset(self.rotation)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(edge_key(u, v)
                         for v, nbrs in self.rotation.items() for u in nbrs)

    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: Label) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: Label, v: Label) -> bool:
        return u != v and v in self.rotation.get(u, ())

    def signature(self, u: Label, v: Label) -> int:
        return -1 if edge_key(u, v) in self.negative_edges else +1

    def all_positive(self) -> bool:
        return not self.negative_edges

    def succ(self, v: Label, u: Label) -> Label:
        """Neighbor following u in the rotation at v."""
        nbrs = self.rotation[v]
        return nbrs[(nbrs.index(u) + 1) % len(nbrs)]

    def pred(self, v: Label, u: Label) -> Label:
        nbrs = self.rotation[v]
        return nbrs[(nbrs.index(u) - 1) % len(nbrs)]

    def is_connected(self) -> bool:
        if not self.rotation:
            return True
        start = min(self.rotation, key=label_key)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in self.rotation[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == len(self.rotation)

    # -- convenience constructors -----------------------------------------

    def with_rotation(self, v: Label, nbrs) -> "RotationSystem":
        rot = dict(self.rotation)
        rot[v] = tuple(nbrs)
        return RotationSystem(rot, self.negative_edges)

    def relabel(self, mapping: dict) -> "RotationSystem":
        """Rename vertices; labels absent from mapping are kept."""
        ren = lambda v: mapping.get(v, v)
        rot = {ren(v): tuple(ren(u) for u in nbrs)
               for v, nbrs in self.rotation.items()}
        neg = frozenset(edge_key(ren(u), ren(v)) for (u, v) in self.negative_edges)
        return RotationSystem(rot, neg)

    def reflected(self) -> "RotationSystem":
        """Reverse every rotation (global mirror image)."""
        return RotationSystem({v: tuple(reversed(nbrs))
                               for v, nbrs in self.rotation.items()},
                              self.negative_edges)


def complete_graph_rs(n: int) -> RotationSystem:
    """K_n with every rotation in increasing label order."""
    verts = range(n)
    return RotationSystem({v: tuple(u for u in verts if u != v) for v in verts})


# -- face tracing ----------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """One face boundary: the closed walk of directed edges with local senses.

    ``states`` is the orbit of the next-corner map; entry t is
    ``(u, v, s)`` for the traversal of edge (u, v) with local sense s.
    Corner t of the face sits at vertex ``states[t][0]`` between the
    incoming edge ``states[t-1]`` and the outgoing edge ``states[t]``.
    """

    states: tuple

    def __len__(self):
        return len(self.states)

    @cached_property
    def boundary(self) -> tuple:
        """Vertex cycle [v1, ..., vk]."""
        return tuple(u for (u, _, _) in self.states)

    @cached_property
    def canonical(self) -> tuple:
        """States rotated so the least corner comes first."""
        states = self.states
        n = len(states)
        best = min(range(n), key=lambda i: _state_key(states[i]))
        return states[best:] + states[:best]

    @cached_property
    def face_id(self) -> str:
        text = ";".join(f"{u}>{v}@{s}" for (u, v, s) in self.canonical)
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def __eq__(self, other):
        return isinstance(other, Face) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def directed_edges(self):
        return [(u, v) for (u, v, _) in self.states]

    def occurrences(self, v: Label):
        """Corner positions of vertex v on this face."""
        return [i for i, u in enumerate(self.boundary) if u == v]

    def uses_edge(self, u: Label, v: Label) -> int:
        """Number of traversals of edge {u, v} on this boundary (0, 1 or 2)."""
        walk = self.directed_edges()
        return sum(1 for (a, b) in walk if {a, b} == {u, v})

    def __repr__(self):
        return "Face[" + ", ".join(map(str, self.boundary)) + "]"


def _state_key(state):
    u, v, s = state
    return (0 if s > 0 else 1, label_key(u), label_key(v))


def _next_state(rs: RotationSystem, state):
    u, v, s = state
    s2 = s * rs.signature(u, v)
    w = rs.succ(v, u) if s2 > 0 else rs.pred(v, u)
    return (v, w, s2)


def trace_faces(rs: RotationSystem):
    """All face boundaries of the embedding, deterministically ordered.

    The next-corner map acts on 4|E| states (directed edge, local sense);
    its orbits come in mirror pairs, one per side of each face, and one
    representative per pair is returned.  On an all-positive system the
    representatives are exactly the sense +1 orbits, i.e. plain
    Heffter-Edmonds tracing.
    """
    if not rs.is_connected():
        raise DisconnectedGraphError("cannot trace faces of a disconnected graph")
    states = [(u, v, s)
              for (u, v) in sorted(((a, b) for a, b in _directed_edges(rs)),
                                   key=lambda e: (label_key(e[0]), label_key(e[1])))
              for s in (+1, -1)]
    seen = set()
    orbits = {}
    for start in sorted(states, key=_state_key):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        cur = _next_state(rs, start)
        while cur != start:
            orbit.append(cur)
            seen.add(cur)
            cur = _next_state(rs, cur)
        orbits[start] = tuple(orbit)

    def mirror(state):
        u, v, s = state
        return (v, u, -s * rs.signature(u, v))

    state_to_start = {}
    for start, orbit in orbits.items():
        for st in orbit:
            state_to_start[st] = start
    faces = []
    consumed = set()
    for start in sorted(orbits, key=_state_key):
        if start in consumed:
            continue
        twin = state_to_start[mirror(start)]
        if twin == start:
            raise InternalConsistencyError("face orbit equal to its own mirror")
        consumed.add(start)
        consumed.add(twin)
        faces.append(Face(orbits[start]))
    total = sum(len(f) for f in faces)
    if total != 2 * rs.num_edges():
        raise InternalConsistencyError(
            f"face lengths sum to {total}, expected {2 * rs.num_edges()}")
    return tuple(sorted(faces, key=lambda f: _state_key(f.canonical[0])))


def _directed_edges(rs: RotationSystem):
    for v, nbrs in rs.rotation.items():
        for u in nbrs:
            yield (v, u)


def find_face(faces, face_id: str) -> Face:
    for f in faces:
        if f.face_id == face_id:
            return f
    raise EmbeddingError(f"no face with id {face_id}")


# -- surface identification -------------------------------------------------

@dataclass(frozen=True)
class SurfaceClass:
    orientable: bool
    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise EmbeddingError("negative genus")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    def __str__(self):
        return (f"S_{self.genus}" if self.orientable else f"N_{self.genus}")


def is_orientable(rs: RotationSystem) -> bool:
    """Whether the signature is switching-equivalent to all +1.

    Signs are normalized over a BFS spanning tree rooted at the least
    vertex; the embedding is nonorientable iff some non-tree edge keeps
    signature -1 afterwards.
    """
    if not rs.rotation:
        return True
    start = min(rs.rotation, key=label_key)
    sign = {start: +1}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in rs.rotation[v]:
            if u not in sign:
                sign[u] = sign[v] * rs.signature(v, u)
                queue.append(u)
    if len(sign) != len(rs.rotation):
        raise DisconnectedGraphError("orientability undefined for disconnected graph")
    return all(sign[u] * sign[v] * rs.signature(u, v) == +1
               for (u, v) in rs.edges)


def euler_surface(rs: RotationSystem, faces=None) -> SurfaceClass:
    """Identify the closed surface of the embedding via V - E + F."""
    if faces is None:
        faces = trace_faces(rs)
    chi = len(rs.rotation) - rs.num_edges() + len(faces)
    if is_orientable(rs):
        if (2 - chi) % 2 != 0:
            raise InternalConsistencyError(
                f"orientable embedding with odd Euler characteristic {chi}")
        return SurfaceClass(True, (2 - chi) // 2)
    return SurfaceClass(False, 2 - chi)


# -- face statistics ---------------------------------------------------------

@dataclass(frozen=True)
class FaceDistribution:
    counts: tuple  # sorted (length, count) pairs

    @classmethod
    def of(cls, faces):
        c = Counter(len(f) for f in faces)
        return cls(tuple(sorted(c.items())))

    def count(self, length: int) -> int:
        return dict(self.counts).get(length, 0)

    def total_length(self) -> int:
        return sum(l * c for l, c in self.counts)

    def __str__(self):
        return ", ".join(f"f{l}={c}" for l, c in self.counts)


def face_distribution(faces) -> FaceDistribution:
    return FaceDistribution.of(faces)


def embedding_type(faces) -> tuple:
    """Sorted nonincreasing lengths of the nontriangular faces."""
    return tuple(sorted((len(f) for f in faces if len(f) > 3), reverse=True))


def is_triangular(faces) -> bool:
    return embedding_type(faces) == ()


def is_nearly_triangular(faces) -> bool:
    return len(embedding_type(faces)) <= 1


def is_minimum_by_type(rs: RotationSystem, faces=None) -> bool:
    """Sufficient minimality test: at most 5 chords short of triangular.

    True when sum(a_i - 3) <= 5 over the embedding type; False means
    inconclusive, not non-minimal.
    """
    if faces is None:
        faces = trace_faces(rs)
    return sum(a - 3 for a in embedding_type(faces)) <= 5


# -- face shape classification ----------------------------------------------

def is_simple_face(face: Face) -> bool:
    b = face.boundary
    return len(set(b)) == len(b)


def repeated_vertex_structure(face: Face) -> str:
    """Classify a face as 'simple', 'opposite-repeat', or 'other'.

    'opposite-repeat' is the 6-gon shape [a, b, x, c, d, x'] with one
    vertex appearing at the two opposite positions.
    """
    b = face.boundary
    if len(set(b)) == len(b):
        return "simple"
    counts = Counter(b)
    repeats = [v for v, c in counts.items() if c > 1]
    if len(b) == 6 and len(repeats) == 1 and counts[repeats[0]] == 2:
        i, j = [k for k, v in enumerate(b) if v == repeats[0]]
        if j - i == 3:
            return "opposite-repeat"
    return "other"


# -- triangularity rules ------------------------------------------------------

def check_rule_r_star(rs: RotationSystem) -> bool:
    """Row test for an orientable triangular embedding.

    For every edge (i, k) with row i reading "... j k l ...", row k must
    read "... l i j ...".  Any -1 signature disqualifies the system.
    """
    if not rs.all_positive():
        return False
    for i, nbrs in rs.rotation.items():
        if len(nbrs) < 3:
            return False
        for k in nbrs:
            j, l = rs.pred(i, k), rs.succ(i, k)
            if rs.pred(k, i) != l or rs.succ(k, i) != j:
                return False
    return True


def check_rule_r(rs: RotationSystem) -> bool:
    """Row test for a triangular embedding in some (possibly
    nonorientable) surface; signatures are ignored."""
    for i, nbrs in rs.rotation.items():
        if len(nbrs) < 3:
            return False
        for k in nbrs:
            j, l = rs.pred(i, k), rs.succ(i, k)
            forward = rs.pred(k, i) == l and rs.succ(k, i) == j
            backward = rs.pred(k, i) == j and rs.succ(k, i) == l
            if not (forward or backward):
                return False
    return True


# -- complete-graph genus arithmetic ------------------------------------------

@dataclass(frozen=True)
class GenusBounds:
    handles: int            # minimum orientable genus of K_n
    crosscaps: int          # minimum nonorientable genus of K_n
    extra_edges: int        # chords t short of a triangulation, 0/2/3/5
    max_genus_faces: int    # 1 or 2 faces in a maximum genus embedding


def genus_bounds(n: int) -> GenusBounds:
    if n < 3:
        raise EmbeddingError(f"need n >= 3, got {n}")
    prod = (n - 3) * (n - 4)
    handles = math.ceil(prod / 12)
    crosscaps = 3 if n == 7 else math.ceil(prod / 6)
    t = ((-prod % 12) // 2) % 6
    max_faces = 1 if n % 4 in (1, 2) else 2
    return GenusBounds(handles, crosscaps, t, max_faces)


# -- ".rot" text format --------------------------------------------------------

def parse_rot(text: str) -> RotationSystem:
    """Parse the rotation-system text format.

    Header ``orientable: true|false``, rows ``LABEL. n1 n2 ...`` giving
    the clockwise rotation, optional ``sig U V -1`` lines, ``#`` comments.
    """
    rotation = {}
    negative = set()
    header = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("orientable:"):
            value = line.split(":", 1)[1].strip().lower()
            if value not in ("true", "false"):
                raise EmbeddingError(f"bad header {line!r}")
            header = value == "true"
            continue
        if line.startswith("sig "):
            parts = line.split()
            if len(parts) != 4 or parts[3] != "-1":
                raise EmbeddingError(f"bad signature line {line!r}")
            negative.add(edge_key(parse_label(parts[1]), parse_label(parts[2])))
            continue
        if "." not in line:
            raise EmbeddingError(f"bad rotation line {line!r}")
        head, rest = line.split(".", 1)
        v = parse_label(head)
        if v in rotation:
            raise EmbeddingError(f"duplicate row {v!r}")
        rotation[v] = tuple(parse_label(t) for t in rest.split())
    if header is None:
        raise EmbeddingError("missing 'orientable:' header")
    rs = RotationSystem(rotation, frozenset(negative))
    if header != rs.all_positive():
        raise EmbeddingError("header contradicts signature lines")
    return rs


def serialize_rot(rs: RotationSystem) -> str:
    lines = [f"orientable: {'true' if rs.all_positive() else 'false'}"]
    for v in sorted(rs.rotation, key=label_key):
        lines.append(f"{format_label(v)}. "
                     + " ".join(format_label(u) for u in rs.rotation[v]))
    for (u, v) in sorted(rs.negative_edges,
                         key=lambda e: (label_key(e[0]), label_key(e[1]))):
        lines.append(f"sig {format_label(u)} {format_label(v)} -1")
    return "\n".join(lines) + "\n"
