"""Exhaustive and backtracking searches over rotation systems.

Also hosts an independent reference implementation of face tracing
(permutation composition instead of state walking) used to cross-check
the main tracer in the test suite.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .core import (
    EmbeddingError,
    RotationSystem,
    check_rule_r,
    check_rule_r_star,
    complete_graph_rs,
    edge_key,
    embedding_type,
    euler_surface,
    label_key,
    trace_faces,
)


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of its time or node budget."""


# -- independent face-tracing oracle ------------------------------------------

def oracle_trace(rs: RotationSystem):
    """Face boundaries via explicit permutation composition.

    Builds the involution that swaps edge sides, composes it with the
    rotation permutation on edge sides, and reads off cycles.  Each edge
    {u, v} contributes four sides (u, v, +1), (u, v, -1), (v, u, +1),
    (v, u, -1); a face is a cycle of the composite, and cycles pair up
    under the side-swap mirror.  Returns the faces as vertex tuples,
    sorted, one per mirror pair.
    """
    sides = []
    for v in rs.rotation:
        for u in rs.rotation[v]:
            sides.append((v, u, +1))
            sides.append((v, u, -1))

    # rho: within a vertex star, step to the next (sense +1) or previous
    # (sense -1) dart, keeping the sense.
    rho = {}
    for v, nbrs in rs.rotation.items():
        d = len(nbrs)
        for i, u in enumerate(nbrs):
            rho[(v, u, +1)] = (v, nbrs[(i + 1) % d], +1)
            rho[(v, u, -1)] = (v, nbrs[(i - 1) % d], -1)

    # alpha: jump to the other end of the edge, flipping the sense on
    # negative edges.
    def alpha(side):
        v, u, s = side
        return (u, v, s * rs.signature(v, u))

    # A face corner at v between edges (w, v) and (v, u): the next corner
    # is found by crossing edge (v, u) then turning.  phi = rho . alpha.
    phi = {side: rho[alpha(side)] for side in sides}

    seen = set()
    cycles = []
    for start in sorted(sides, key=lambda s: (0 if s[2] > 0 else 1,
                                              label_key(s[0]), label_key(s[1]))):
        if start in seen:
            continue
        cyc = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = phi[cur]
        cycles.append(tuple(cyc))

    def mirror_cycle(cyc):
        rev = [(u, v, -s * rs.signature(u, v)) for (v, u, s) in cyc]
        rev.reverse()
        i = rev.index(min(rev, key=lambda s: (0 if s[2] > 0 else 1,
                                              label_key(s[0]), label_key(s[1]))))
        return tuple(rev[i:] + rev[:i])

    canon = set()
    faces = []
    for cyc in cycles:
        i = cyc.index(min(cyc, key=lambda s: (0 if s[2] > 0 else 1,
                                              label_key(s[0]), label_key(s[1]))))
        c = tuple(cyc[i:] + cyc[:i])
        if mirror_cycle(c) in canon or c in canon:
            continue
        canon.add(c)
        faces.append(tuple(v for (v, _, _) in c))
    if len(seen) != len(sides):
        raise EmbeddingError("oracle did not cover all edge sides")
    return sorted(faces)


# -- exhaustive classification of small complete graphs -----------------------

@dataclass(frozen=True)
class ClassificationResult:
    n: int
    systems_examined: int
    min_genus: int
    min_genus_types: frozenset
    genus_histogram: tuple  # sorted (genus, count)


def classify_complete(n: int) -> ClassificationResult:
    """Enumerate every orientable rotation system of K_n (n <= 5).

    All ((n-2)!)^n systems are traced, with no symmetry reduction, and
    the minimum genus together with the set of embedding types attaining
    it is reported.
    """
    if n > 5:
        raise EmbeddingError("full enumeration is limited to n <= 5")
    if n < 3:
        raise EmbeddingError("need n >= 3")
    verts = list(range(n))
    per_vertex = []
    for v in verts:
        others = [u for u in verts if u != v]
        first, rest = others[0], others[1:]
        per_vertex.append([(first,) + p for p in itertools.permutations(rest)])
    histogram = {}
    min_genus = None
    min_types = set()
    count = 0
    for choice in itertools.product(*per_vertex):
        count += 1
        rs = RotationSystem(dict(zip(verts, choice)))
        faces = trace_faces(rs)
        g = euler_surface(rs, faces).genus
        histogram[g] = histogram.get(g, 0) + 1
        if min_genus is None or g < min_genus:
            min_genus = g
            min_types = set()
        if g == min_genus:
            min_types.add(embedding_type(faces))
    return ClassificationResult(n, count, min_genus, frozenset(min_types),
                                tuple(sorted(histogram.items())))


# -- backtracking search for triangular embeddings -----------------------------

def find_triangular(n: int, *, missing_edges=(), orientable: bool = True,
                    time_budget: float = 60.0, node_budget: int = 50_000_000):
    """Search for a triangular embedding of K_n minus the given edges.

    Orientable mode builds rotations satisfying the orientable row rule
    directly: fixing succ_v(u) = w forces succ_w(v) = u and succ_u(w) = v,
    so triangles are placed one corner at a time with single-cycle
    pruning.  Nonorientable mode (orientable=False) searches unordered
    triangle corners instead, reconstructing signatures afterwards, and
    accepts only systems that are actually nonorientable.
    Returns a RotationSystem or None; raises BudgetExceeded on timeout.
    """
    missing = frozenset(edge_key(u, v) for (u, v) in missing_edges)
    verts = list(range(n))
    adj = {v: [u for u in verts if u != v and edge_key(u, v) not in missing]
           for v in verts}
    for v in verts:
        if len(adj[v]) % 2 != 0 and orientable is None:
            return None
    deadline = time.monotonic() + time_budget
    if orientable:
        return _find_triangular_oriented(verts, adj, deadline, node_budget)
    return _find_triangular_unoriented(verts, adj, deadline, node_budget)


def _find_triangular_oriented(verts, adj, deadline, node_budget):
    succ = {v: {} for v in verts}   # succ[v][u] = w
    pred = {v: {} for v in verts}
    degree = {v: len(adj[v]) for v in verts}
    nodes = 0

    def assign(v, u, w, trail):
        """Record succ_v(u) = w; return False on conflict."""
        if w == u or w not in adj[v] or u not in adj[v]:
            return False
        if u in succ[v]:
            return succ[v][u] == w
        if w in pred[v]:
            return pred[v][w] == u
        # premature cycle closure check: following succ from w must not
        # return to u in fewer than degree steps
        length, x = 1, w
        while x in succ[v]:
            x = succ[v][x]
            length += 1
        if x == u and length < degree[v]:
            return False
        succ[v][u] = w
        pred[v][w] = u
        trail.append((v, u, w))
        return True

    def force(v, u, w, trail):
        """A corner u-v-w at v forces two more corners."""
        return (assign(v, u, w, trail)
                and assign(w, v, u, trail)
                and assign(u, w, v, trail))

    def next_slot():
        for v in verts:
            for u in adj[v]:
                if u not in succ[v]:
                    return (v, u)
        return None

    def undo(trail, mark):
        while len(trail) > mark:
            v, u, w = trail.pop()
            del succ[v][u]
            del pred[v][w]

    trail = []

    def solve():
        nonlocal nodes
        nodes += 1
        if nodes % 4096 == 0 and time.monotonic() > deadline:
            raise BudgetExceeded("triangular search timed out")
        if nodes > node_budget:
            raise BudgetExceeded("triangular search exceeded node budget")
        slot = next_slot()
        if slot is None:
            return True
        v, u = slot
        for w in adj[v]:
            if w == u or w in pred[v]:
                continue
            mark = len(trail)
            if force(v, u, w, trail) and solve():
                return True
            undo(trail, mark)
        return False

    if not solve():
        return None
    rotation = {}
    for v in verts:
        u0 = adj[v][0]
        cyc = [u0]
        x = succ[v][u0]
        while x != u0:
            cyc.append(x)
            x = succ[v][x]
        rotation[v] = tuple(cyc)
    rs = RotationSystem(rotation)
    if not check_rule_r_star(rs):
        raise EmbeddingError("oriented triangular search produced a bad system")
    return rs


def _find_triangular_unoriented(verts, adj, deadline, node_budget):
    # Build, for each vertex v, a perfect matching structure on its link:
    # each neighbor u of v lies in exactly two triangles through edge (v,u),
    # so the triangles at v form a 2-regular graph on adj[v]; we need it to
    # be a single cycle.  Search triangles directly.
    link = {v: {u: [] for u in adj[v]} for v in verts}
    edges = sorted({edge_key(u, v) for v in verts for u in adj[v]})
    nodes = 0

    def edge_full(u, v):
        return len(link[u][v]) == 2

    def add_triangle(a, b, c, trail):
        for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
            link[x][y].append(z)
            link[x][z].append(y)
        trail.append((a, b, c))

    def undo(trail, mark):
        while len(trail) > mark:
            a, b, c = trail.pop()
            for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                link[x][y].remove(z)
                link[x][z].remove(y)

    def link_ok(v):
        """Partial 2-regular graph on adj[v] must stay acyclic-or-full."""
        pairs = {u: list(link[v][u]) for u in adj[v]}
        seen = set()
        n_cycles = 0
        for u in adj[v]:
            if u in seen or not pairs[u]:
                continue
            # walk the path/cycle through u
            comp = {u}
            frontier = [u]
            while frontier:
                x = frontier.pop()
                for y in pairs[x]:
                    if y not in comp:
                        comp.add(y)
                        frontier.append(y)
            seen |= comp
            if all(len(pairs[x]) == 2 for x in comp):
                n_cycles += 1
                if len(comp) != len(adj[v]):
                    return False
        return n_cycles <= 1

    def next_edge():
        for (u, v) in edges:
            if not edge_full(u, v):
                return (u, v)
        return None

    trail = []

    def solve():
        nonlocal nodes
        nodes += 1
        if nodes % 2048 == 0 and time.monotonic() > deadline:
            raise BudgetExceeded("triangular search timed out")
        if nodes > node_budget:
            raise BudgetExceeded("triangular search exceeded node budget")
        slot = next_edge()
        if slot is None:
            return _realize_unoriented(verts, adj, link)
        u, v = slot
        have = set(link[u][v])
        for w in adj[u]:
            if w in (u, v) or w in have or w not in adj[v]:
                continue
            if edge_full(u, w) or edge_full(v, w):
                continue
            mark = len(trail)
            add_triangle(u, v, w, trail)
            if link_ok(u) and link_ok(v) and link_ok(w):
                result = solve()
                if result is not None:
                    return result
            undo(trail, mark)
        return None

    return solve()


def _realize_unoriented(verts, adj, link):
    """Turn a triangle set whose links are single cycles into a signed
    rotation system, or return None if it is orientable when a
    nonorientable one was requested."""
    rotation = {}
    for v in verts:
        u0 = adj[v][0]
        cyc = [u0]
        prev, cur = None, u0
        while True:
            nxts = [w for w in link[v][cur] if w != prev]
            nxt = nxts[0] if nxts else link[v][cur][0]
            if nxt == u0:
                break
            cyc.append(nxt)
            prev, cur = cur, nxt
        if len(cyc) != len(adj[v]):
            return None
        rotation[v] = tuple(cyc)
    # Assign signatures so each triangle closes: edge (u, v) is positive
    # iff the rotations at u and v traverse their common triangles with
    # opposite local senses (as in an oriented triangulation).
    negative = set()
    for v in verts:
        for u in adj[v]:
            if label_key(u) < label_key(v):
                continue
            rs0 = rotation
            # triangle on the succ side of u in row v
            w = rs0[v][(rs0[v].index(u) + 1) % len(rs0[v])]
            at_u = rs0[u]
            i = at_u.index(v)
            if at_u[(i - 1) % len(at_u)] == w:
                pass  # consistent with orientable convention: sigma = +1
            elif at_u[(i + 1) % len(at_u)] == w:
                negative.add(edge_key(u, v))
            else:
                return None
    rs = RotationSystem(rotation, frozenset(negative))
    if not check_rule_r(rs):
        return None
    from .core import is_orientable
    if is_orientable(rs):
        return None
    faces = trace_faces(rs)
    if embedding_type(faces) != ():
        return None
    return rs
