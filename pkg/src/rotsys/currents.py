"""Current graphs over cyclic groups and the derivation of rotation systems.

A current graph is a small embedded directed graph whose arcs carry nonzero
elements of Z_m.  Tracing its single face and reading off the currents gives
a "log", which becomes row 0 of a rotation system on m numbered vertices;
the remaining rows follow by shifting (the additive rule), and rows for the
special lettered vertices are forced afterwards by the triangularity rule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import (
    EmbeddingError,
    RotationSystem,
    check_rule_r_star,
    format_label,
)

VORTEX_TYPES = ("T1", "T2", "T3")


class CurrentGraphError(EmbeddingError):
    """Malformed or invalid current graph data."""


def _order(g: int, m: int) -> int:
    """Order of g in Z_m."""
    import math
    return m // math.gcd(g % m, m)


@dataclass(frozen=True)
class VortexInfo:
    letter: str
    vertex: str
    vtype: str              # T1, T2 or T3
    after: str | None = None  # arrival edge end naming the corner (T3 only)


@dataclass(frozen=True)
class CurrentGraph:
    """An arc-labeled embedded graph over Z_m.

    ``rotation`` maps vertex name -> cyclic tuple of edge ends, where an
    edge end is "<arc>+" (tail) or "<arc>-" (head).  ``orient`` maps vertex
    name -> "solid" (clockwise) or "hollow" (counterclockwise).  ``arcs``
    maps arc name -> (tail vertex, head vertex, current).  ``vortices``
    maps letter -> VortexInfo.
    """

    modulus: int
    rotation: dict
    orient: dict
    arcs: dict
    vortices: dict

    def __post_init__(self):
        object.__setattr__(self, "rotation",
                           {v: tuple(ends) for v, ends in self.rotation.items()})
        if self.modulus < 2:
            raise CurrentGraphError("group modulus must be at least 2")
        for v, ends in self.rotation.items():
            if self.orient.get(v) not in ("solid", "hollow"):
                raise CurrentGraphError(f"vertex {v!r} lacks an orientation flag")
            for end in ends:
                arc, side = end[:-1], end[-1]
                if side not in "+-" or arc not in self.arcs:
                    raise CurrentGraphError(f"unknown edge end {end!r} at {v!r}")
                t, h, _ = self.arcs[arc]
                if (side == "+" and t != v) or (side == "-" and h != v):
                    raise CurrentGraphError(f"edge end {end!r} not incident with {v!r}")
        for arc, (t, h, c) in self.arcs.items():
            if t not in self.rotation or h not in self.rotation:
                raise CurrentGraphError(f"arc {arc!r} has an endpoint without rotation")
            if c % self.modulus == 0:
                raise CurrentGraphError(f"arc {arc!r} carries the zero current")
            if self.rotation[t].count(arc + "+") != 1 or self.rotation[h].count(arc + "-") != 1:
                raise CurrentGraphError(f"ends of arc {arc!r} must appear exactly once")
        for letter, vx in self.vortices.items():
            if vx.vtype not in VORTEX_TYPES:
                raise CurrentGraphError(f"bad vortex type {vx.vtype!r}")
            if vx.vertex not in self.rotation:
                raise CurrentGraphError(f"vortex {letter!r} at unknown vertex")

    def degree(self, v: str) -> int:
        return len(self.rotation[v])

    def excess(self, v: str) -> int:
        """Sum of currents oriented toward v."""
        total = 0
        for end in self.rotation[v]:
            arc, side = end[:-1], end[-1]
            c = self.arcs[arc][2]
            total += c if side == "-" else -c
        return total % self.modulus

    def vortex_vertices(self):
        return {vx.vertex for vx in self.vortices.values()}

    # -- face walking -------------------------------------------------------

    def _end_vertex(self, end: str) -> str:
        arc, side = end[:-1], end[-1]
        t, h, _ = self.arcs[arc]
        return t if side == "+" else h

    def _next_dart(self, dart):
        """Cross the arc, then turn at the far vertex."""
        arc, forward = dart
        arrival = arc + ("-" if forward else "+")
        v = self._end_vertex(arrival)
        ends = self.rotation[v]
        i = ends.index(arrival)
        step = 1 if self.orient[v] == "solid" else -1
        depart = ends[(i + step) % len(ends)]
        return (depart[:-1], depart[-1] == "+"), arrival, depart

    def face_orbits(self):
        darts = [(arc, fwd) for arc in sorted(self.arcs) for fwd in (True, False)]
        seen = set()
        orbits = []
        for start in darts:
            if start in seen:
                continue
            orbit = []
            cur = start
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                cur = self._next_dart(cur)[0]
            orbits.append(tuple(orbit))
        return orbits

    @property
    def index(self) -> int:
        return len(self.face_orbits())


# -- validity report ----------------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    principles: dict   # "C1".."C6" -> (bool, detail)
    index: int

    @property
    def valid(self) -> bool:
        return all(ok for ok, _ in self.principles.values())


def validate_current_graph(cg: CurrentGraph) -> ValidityReport:
    """Check the six construction principles of a current graph."""
    m = cg.modulus
    report = {}

    bad_deg = [v for v in cg.rotation if cg.degree(v) not in (1, 3)]
    report["C1"] = (not bad_deg, f"vertices of bad degree: {bad_deg}")

    index = cg.index
    report["C2"] = (index == 1, f"embedding has {index} face(s)")

    classes = {}
    for arc, (_, _, c) in cg.arcs.items():
        key = min(c % m, -c % m)
        classes.setdefault(key, []).append(arc)
    expected = {min(g, m - g) for g in range(1, m)}
    dup = [k for k, v in classes.items() if len(v) > 1]
    missing = sorted(expected - set(classes))
    report["C3"] = (not dup and not missing,
                    f"duplicated classes {dup}, missing classes {missing}")

    vortex_at = cg.vortex_vertices()
    bad_kcl = [v for v in cg.rotation
               if cg.degree(v) == 3 and v not in vortex_at and cg.excess(v) != 0]
    report["C4"] = (not bad_kcl, f"KCL fails at: {bad_kcl}")

    if m % 2 == 0:
        carriers = [arc for arc, (t, h, c) in cg.arcs.items()
                    if c % m == m // 2 and (cg.degree(t) == 1 or cg.degree(h) == 1)]
        present = any(c % m == m // 2 for (_, _, c) in cg.arcs.values())
        report["C5"] = (bool(carriers) or not present,
                        "order-2 element must sit on a pendant edge")
    else:
        report["C5"] = (True, "odd modulus, nothing to check")

    c6_ok, c6_msg = True, "all vortices well-typed"
    by_vertex = {}
    for vx in cg.vortices.values():
        by_vertex.setdefault(vx.vertex, []).append(vx)
    for v in vortex_at:
        group = by_vertex[v]
        deg, exc = cg.degree(v), cg.excess(v)
        types = {vx.vtype for vx in group}
        if len(types) != 1:
            c6_ok, c6_msg = False, f"mixed vortex types at {v!r}"
            break
        vtype = types.pop()
        if vtype == "T1":
            ok = deg == 1 and len(group) == 1 and _order(exc, m) == m
        elif vtype == "T2":
            ok = (deg == 1 and len(group) == 1 and m % 2 == 0
                  and _order(exc, m) == m // 2)
        else:
            inward = []
            for end in cg.rotation[v]:
                arc, side = end[:-1], end[-1]
                c = cg.arcs[arc][2]
                inward.append((c if side == "-" else -c) % m)
            ok = (deg == 3 and len(group) == 3 and m % 3 == 0
                  and _order(exc, m) == m // 3
                  and (all(c % 3 == 1 for c in inward)
                       or all(c % 3 == 2 for c in inward)))
        if not ok:
            c6_ok, c6_msg = False, f"vortex at {v!r} fails the {vtype} conditions"
            break
    # non-vortex vertices that break KCL must be pendant order-2 carriers
    for v in cg.rotation:
        if v in vortex_at or cg.excess(v) == 0:
            continue
        if not (cg.degree(v) == 1 and m % 2 == 0 and cg.excess(v) == m // 2):
            c6_ok, c6_msg = False, f"untyped vortex at {v!r}"
            break
    report["C6"] = (c6_ok, c6_msg)
    return ValidityReport(report, index)


# -- log tracing ---------------------------------------------------------------

class Log(tuple):
    """Cyclic sequence of group elements and vortex letters."""

    def rotations(self):
        n = len(self)
        return [Log(self[i:] + self[:i]) for i in range(n)]

    def cyclically_equal(self, other) -> bool:
        other = tuple(other)
        return len(self) == len(other) and any(tuple(r) == other
                                               for r in self.rotations())

    def __str__(self):
        return " ".join(str(t) for t in self)


def trace_log(cg: CurrentGraph) -> Log:
    """Read the currents and vortex letters along the single face.

    Traversing an arc with its orientation records its current, against
    records the negated current; the order-2 element, traversed twice in a
    row around its pendant vertex, is recorded once.
    """
    orbits = cg.face_orbits()
    if len(orbits) != 1:
        raise CurrentGraphError(
            f"log tracing needs a one-face embedding, found {len(orbits)} faces")
    m = cg.modulus
    corner_letter = {}
    for vx in cg.vortices.values():
        if cg.degree(vx.vertex) == 1:
            corner_letter[cg.rotation[vx.vertex][0]] = vx.letter
        else:
            if vx.after is None:
                raise CurrentGraphError(
                    f"degree-3 vortex letter {vx.letter!r} needs a corner ('after')")
            corner_letter[vx.after] = vx.letter
    tokens = []
    for dart in orbits[0]:
        arc, forward = dart
        c = cg.arcs[arc][2] % m
        tokens.append(c if forward else (-c) % m)
        _, arrival, _ = cg._next_dart(dart)
        if arrival in corner_letter:
            tokens.append(corner_letter[arrival])
    if m % 2 == 0:
        half = m // 2
        n = len(tokens)
        for i in range(n):
            if tokens[i] == half and tokens[(i + 1) % n] == half:
                del tokens[i]
                break
    return Log(_canonical_rotation(tokens, cg))


def _canonical_rotation(tokens, cg: CurrentGraph):
    """Start the log just before its foremost vortex letter (type T1 first,
    then T2, then T3, alphabetically), or at the least current if there are
    no letters.  Rows derived from the log then start deterministically."""
    order = {"T1": 0, "T2": 1, "T3": 2}
    ranked = sorted(cg.vortices.values(), key=lambda vx: (order[vx.vtype], vx.letter))
    for vx in ranked:
        if vx.letter in tokens:
            i = tokens.index(vx.letter)
            start = (i - 1) % len(tokens)
            return tokens[start:] + tokens[:start]
    i = tokens.index(min(t for t in tokens if isinstance(t, int)))
    return tokens[i:] + tokens[:i]


# -- the additive rule ----------------------------------------------------------

_SUBSCRIPT = re.compile(r"^([A-Za-z]+)_([0-9])$")


def t2_label(base: str, k: int) -> str:
    return f"{base}_{k % 2}"


def derive_rows(log, m: int, vortex_meta: dict) -> dict:
    """Rows 0..m-1 from a log by shifting numbered entries.

    ``vortex_meta`` maps each letter to ("T1"|"T2"|"T3", group-tag); the
    group tag (any hashable, None for T1/T2) says which letters share a
    degree-3 vortex.  Numbered entries of row k are the log's entries plus
    k; a T1 letter is kept, a T2 letter y becomes y_0 or y_1 by the parity
    of k, and the letters of a shared degree-3 vortex cycle among their
    log positions by the residue of k mod 3.
    """
    tokens = list(log)
    letters = [t for t in tokens if isinstance(t, str)]
    for letter in letters:
        if letter not in vortex_meta:
            raise CurrentGraphError(f"letter {letter!r} lacks vortex metadata")

    # Degree-3 vortex triples in log order, with the congruence class of
    # the currents flowing in (the entry just before each letter).
    triples = {}
    for letter in letters:
        vtype, group = vortex_meta[letter]
        if vtype != "T3":
            continue
        triples.setdefault(group, []).append(letter)
    classes = {}
    for group, trio in triples.items():
        if len(trio) != 3:
            raise CurrentGraphError(f"vortex group {group!r} does not have 3 letters")
        residues = set()
        for letter in trio:
            i = tokens.index(letter)
            prev = tokens[i - 1]
            if not isinstance(prev, int):
                raise CurrentGraphError(f"letter {letter!r} not preceded by a current")
            residues.add(prev % 3)
        if len(residues) != 1 or residues & {0}:
            raise CurrentGraphError(
                f"vortex group {group!r} has mixed congruence classes")
        classes[group] = residues.pop()

    rows = {}
    for k in range(m):
        row = []
        for t in tokens:
            if isinstance(t, int):
                row.append((t + k) % m)
                continue
            vtype, group = vortex_meta[t]
            if vtype == "T1":
                row.append(t)
            elif vtype == "T2":
                row.append(t2_label(t, k))
            else:
                trio = triples[group]         # letters in log order p, q, r
                j = trio.index(t)
                shift = k % 3
                if classes[group] == 2:
                    shift = (-shift) % 3
                row.append(trio[(j + shift) % 3])
        rows[k] = tuple(row)
    return rows


def row_string(label, row) -> str:
    return f"{format_label(label)}. " + " ".join(format_label(t) for t in row)


def manufacture_vortex_rows(rows: dict) -> RotationSystem:
    """Complete a numbered-row table to a full triangular rotation system.

    The row of each lettered vertex L is forced: the entry after k must be
    the entry preceding L in row k.  Raises if the forced successor map is
    not a single cycle, or if the completed system fails the orientable
    triangularity row rule.
    """
    letter_succ = {}
    for k, row in rows.items():
        for i, t in enumerate(row):
            if isinstance(t, str):
                letter_succ.setdefault(t, {})[k] = row[i - 1]
    rotation = {k: tuple(row) for k, row in rows.items()}
    for letter, succ in sorted(letter_succ.items()):
        start = min(succ)
        cyc = [start]
        cur = succ[start]
        while cur != start:
            if cur in cyc or cur not in succ:
                raise CurrentGraphError(
                    f"row {letter!r} is not forced to a single cycle")
            cyc.append(cur)
            cur = succ[cur]
        if len(cyc) != len(succ):
            raise CurrentGraphError(f"row {letter!r} is not forced to a single cycle")
        rotation[letter] = tuple(cyc)
    rs = RotationSystem(rotation)
    if not check_rule_r_star(rs):
        raise CurrentGraphError("completed system is not an orientable triangulation")
    return rs


def derive_index1(cg: CurrentGraph) -> RotationSystem:
    """Full pipeline: trace the log, shift rows, manufacture letter rows."""
    report = validate_current_graph(cg)
    if not report.valid:
        failed = [p for p, (ok, _) in report.principles.items() if not ok]
        raise CurrentGraphError(f"invalid current graph, failed {failed}")
    log = trace_log(cg)
    meta = {}
    for vx in cg.vortices.values():
        meta[vx.letter] = (vx.vtype, vx.vertex)
    rows = derive_rows(log, cg.modulus, meta)
    return manufacture_vortex_rows(rows)


# -- index 3 seeds ----------------------------------------------------------------

def derive_index3(seed: dict, m: int, letter_types: dict) -> RotationSystem:
    """Rows from a three-row seed: row k is seed row (k mod 3) with k - (k mod 3)
    added to the numbered entries.  T1 letters stay fixed; a T2 letter y means
    y_0 or y_1 by the parity of k.  Letter rows are manufactured afterwards.
    """
    if m % 3 != 0:
        raise CurrentGraphError("index-3 derivation needs 3 | m")
    if set(seed) != {0, 1, 2}:
        raise CurrentGraphError("seed must give rows 0, 1 and 2")
    rows = {}
    for k in range(m):
        base = seed[k % 3]
        shift = k - (k % 3)
        row = []
        for t in base:
            if isinstance(t, int):
                row.append((t + shift) % m)
                continue
            vtype = letter_types.get(t)
            if vtype is None:
                raise CurrentGraphError(f"letter {t!r} lacks vortex metadata")
            row.append(t if vtype == "T1" else t2_label(t, k))
        rows[k] = tuple(row)
    return manufacture_vortex_rows(rows)


# -- text formats -------------------------------------------------------------------

def parse_cur(text: str) -> CurrentGraph:
    """Parse the current-graph text format (.cur)."""
    modulus = None
    rotation, orient, arcs, vortices = {}, {}, {}, {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "group":
            modulus = int(parts[1])
        elif parts[0] == "vtx":
            # vtx NAME deg D solid|hollow rotation: e1+ e2- ...
            name, deg = parts[1], int(parts[3])
            flag = parts[4]
            if parts[5] != "rotation:":
                raise CurrentGraphError(f"bad vertex line {line!r}")
            ends = parts[6:]
            if len(ends) != deg:
                raise CurrentGraphError(f"degree mismatch on {line!r}")
            rotation[name] = tuple(ends)
            orient[name] = flag
        elif parts[0] == "arc":
            # arc NAME FROM TO current C
            if parts[4] != "current":
                raise CurrentGraphError(f"bad arc line {line!r}")
            arcs[parts[1]] = (parts[2], parts[3], int(parts[5]))
        elif parts[0] == "vortex":
            # vortex LETTER at V type T  [after END]
            if parts[2] != "at" or parts[4] != "type":
                raise CurrentGraphError(f"bad vortex line {line!r}")
            after = parts[7] if len(parts) > 6 and parts[6] == "after" else None
            vortices[parts[1]] = VortexInfo(parts[1], parts[3], parts[5], after)
        else:
            raise CurrentGraphError(f"unrecognized line {line!r}")
    if modulus is None:
        raise CurrentGraphError("missing 'group' line")
    return CurrentGraph(modulus, rotation, orient, arcs, vortices)


def serialize_cur(cg: CurrentGraph) -> str:
    lines = [f"group {cg.modulus}"]
    for v in cg.rotation:
        lines.append(f"vtx {v} deg {cg.degree(v)} {cg.orient[v]} rotation: "
                     + " ".join(cg.rotation[v]))
    for arc, (t, h, c) in cg.arcs.items():
        lines.append(f"arc {arc} {t} {h} current {c}")
    for vx in cg.vortices.values():
        line = f"vortex {vx.letter} at {vx.vertex} type {vx.vtype}"
        if vx.after:
            line += f" after {vx.after}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_token(tok: str):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def parse_log_file(text: str):
    """Parse a .log file: first data line is the log, then metadata lines
    'vortex LETTER TYPE [GROUP]' and a 'group M' line."""
    log = None
    meta = {}
    modulus = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "group":
            modulus = int(parts[1])
        elif parts[0] == "vortex":
            letter, vtype = parts[1], parts[2]
            group = parts[3] if len(parts) > 3 else None
            meta[letter] = (vtype, group)
        elif log is None:
            log = Log(_parse_token(t) for t in parts)
        else:
            raise CurrentGraphError(f"unexpected line {line!r}")
    if log is None or modulus is None:
        raise CurrentGraphError("log file needs a 'group' line and a token line")
    return log, modulus, meta


def parse_seed_file(text: str):
    """Parse a .seed file: 'group M', 'letters x:T1 y:T2 ...', rows 0..2."""
    modulus = None
    letters = {}
    seed = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "group":
            modulus = int(parts[1])
        elif parts[0] == "letters":
            for item in parts[1:]:
                name, vtype = item.split(":")
                letters[name] = vtype
        elif parts[0].endswith("."):
            k = int(parts[0][:-1])
            seed[k] = tuple(_parse_token(t) for t in parts[1:])
        else:
            raise CurrentGraphError(f"unrecognized line {line!r}")
    if modulus is None or set(seed) != {0, 1, 2}:
        raise CurrentGraphError("seed file needs 'group' and rows 0., 1., 2.")
    return seed, modulus, letters
