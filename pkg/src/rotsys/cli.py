"""Command-line front door.

Subcommands: verify, derive, construct, surgery, classify-k5, search,
maxgenus.  Exit codes: 0 success, 1 verification failure, 2 malformed
input, 3 fixture missing, 4 refusal (proved nonexistence).
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import (
    EmbeddingError,
    FixtureMissingError,
    RefusalError,
    check_rule_r,
    check_rule_r_star,
    embedding_type,
    euler_surface,
    face_distribution,
    parse_rot,
    serialize_rot,
    trace_faces,
)
from .currents import derive_index1, derive_index3, parse_cur, parse_seed_file
from .recipes import Certificate, certify, construct, xuong_max_genus
from .search import BudgetExceeded, classify_complete, find_triangular
from .surgery import SurgeryScript, replay

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_MALFORMED = 2
EXIT_FIXTURE = 3
EXIT_REFUSAL = 4


def _read_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FixtureMissingError(f"cannot read {path}: {exc}") from None


def _emit(payload: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, indent=2, default=str))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _report(rs):
    faces = trace_faces(rs)
    surface = euler_surface(rs, faces)
    return {
        "vertices": len(rs.rotation),
        "edges": rs.num_edges(),
        "faces": len(faces),
        "surface": str(surface),
        "orientable": surface.orientable,
        "genus": surface.genus,
        "distribution": dict(face_distribution(faces).counts),
        "type": list(embedding_type(faces)),
        "rule_r": check_rule_r(rs),
        "rule_r_star": check_rule_r_star(rs),
    }


def cmd_verify(args) -> int:
    text = _read_file(args.file)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        cert = Certificate.from_json(text)
        ok = cert.verify()
        payload = {"certificate": True, "n": cert.n,
                   "type": list(cert.etype), "orientable": cert.orientable,
                   "genus": cert.genus, "sha256": cert.digest, "valid": ok}
        _emit(payload, args.format)
        return EXIT_OK if ok else EXIT_VERIFY
    rs = parse_rot(text)
    _emit(_report(rs), args.format)
    return EXIT_OK


def cmd_derive(args) -> int:
    text = _read_file(args.file)
    head = [ln.strip() for ln in text.splitlines() if ln.strip()
            and not ln.strip().startswith("#")]
    if any(ln.startswith("letters") for ln in head):
        seed, m, letters = parse_seed_file(text)
        rs = derive_index3(seed, m, letters)
    else:
        rs = derive_index1(parse_cur(text))
    sys.stdout.write(serialize_rot(rs))
    return EXIT_OK


def _parse_type(spec):
    if spec in (None, "", "triangular"):
        return ()
    return tuple(int(part) for part in spec.replace(",", " ").split())


def cmd_construct(args) -> int:
    cert = construct(args.n, _parse_type(args.type),
                     nonorientable=args.nonorientable)
    if not cert.verify():
        print("internal error: certificate failed self-verification",
              file=sys.stderr)
        return EXIT_VERIFY
    if args.format == "json":
        sys.stdout.write(cert.to_json())
    else:
        print(f"n: {cert.n}")
        print(f"type: {list(cert.etype)}")
        print(f"orientable: {cert.orientable}")
        print(f"genus: {cert.genus}")
        print(f"sha256: {cert.digest}")
        sys.stdout.write(cert.rot_text)
    return EXIT_OK


def cmd_surgery(args) -> int:
    rs = parse_rot(_read_file(args.file))
    script = SurgeryScript.parse(_read_file(args.script))
    out = replay(rs, script)
    sys.stdout.write(serialize_rot(out))
    return EXIT_OK


def cmd_classify_k5(args) -> int:
    result = classify_complete(5)
    realized = sorted(result.min_genus_types, reverse=True)
    all_types = [(8,), (7, 4), (6, 5), (6, 4, 4), (5, 5, 4),
                 (5, 4, 4, 4), (4, 4, 4, 4, 4)]
    absent = [t for t in all_types if t not in result.min_genus_types]
    payload = {
        "systems_examined": result.systems_examined,
        "min_genus": result.min_genus,
        "realized_types": [list(t) for t in realized],
        "absent_types": [list(t) for t in absent],
        "genus_histogram": dict(result.genus_histogram),
    }
    _emit(payload, args.format)
    return EXIT_OK


def _parse_graph_spec(spec: str):
    """'K14' (complete), 'K14-K2' (minus an edge), 'K30-K3' (minus a
    triangle): the deleted clique sits on the highest-numbered vertices."""
    spec = spec.upper().replace(" ", "")
    parts = spec.split("-")
    if not parts[0].startswith("K"):
        raise EmbeddingError(f"unrecognized graph spec {spec!r}")
    try:
        n = int(parts[0][1:])
        k = int(parts[1][1:]) if len(parts) > 1 else 0
    except (ValueError, IndexError):
        raise EmbeddingError(f"unrecognized graph spec {spec!r}") from None
    hole = list(range(n - k, n))
    missing = [(u, v) for i, u in enumerate(hole) for v in hole[i + 1:]]
    return n, missing


def cmd_search(args) -> int:
    n, missing = _parse_graph_spec(args.graph)
    try:
        rs = find_triangular(n, missing_edges=missing,
                             orientable=not args.nonorientable,
                             time_budget=args.time_budget)
    except BudgetExceeded:
        _emit({"status": "budget-exhausted"}, args.format)
        return EXIT_VERIFY
    if rs is None:
        _emit({"status": "exhausted", "result": "no triangular embedding"},
              args.format)
        return EXIT_VERIFY
    sys.stdout.write(serialize_rot(rs))
    return EXIT_OK


def cmd_maxgenus(args) -> int:
    rs = xuong_max_genus(args.n)
    faces = trace_faces(rs)
    surface = euler_surface(rs, faces)
    if args.format == "json":
        _emit({"n": args.n, "faces": len(faces), "genus": surface.genus,
               "surface": str(surface), "rot": serialize_rot(rs)}, "json")
    else:
        print(f"faces: {len(faces)}")
        print(f"surface: {surface}")
        sys.stdout.write(serialize_rot(rs))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotsys",
        description="Graph embeddings on surfaces via rotation systems.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="report invariants of a .rot file "
                                      "or check a certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derive", help="derive a rotation system from a "
                                      "current graph or index-3 seed")
    p.add_argument("file")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("construct", help="build a minimum genus embedding "
                                         "of a complete graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--type", default=None,
                   help="face distribution, e.g. '5' or '4,4' (default: "
                        "triangular)")
    p.add_argument("--nonorientable", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("surgery", help="replay a surgery script on a .rot file")
    p.add_argument("file")
    p.add_argument("--script", required=True)
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("classify-k5", help="exhaustively classify the "
                                           "5-vertex complete graph")
    p.set_defaults(func=cmd_classify_k5)

    p = sub.add_parser("search", help="backtracking search for a triangular "
                                      "embedding")
    p.add_argument("--graph", required=True,
                   help="e.g. K14, K14-K2, K30-K3")
    p.add_argument("--nonorientable", action="store_true")
    p.add_argument("--time-budget", type=float, default=60.0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("maxgenus", help="maximum genus embedding of a "
                                        "complete graph")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_maxgenus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSAL
    except FixtureMissingError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_FIXTURE
    except EmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
