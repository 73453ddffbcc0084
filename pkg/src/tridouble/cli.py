"""Command-line entry point.

    tridouble validate FILE
    tridouble info FILE [--format json]
    tridouble census N [--manifold] [--min-valence K] [--count-only] [--out FILE] [--jobs J]
    tridouble homology FILE [--seed S]
    tridouble certify FILE
    tridouble aut FILE
    tridouble group-build SPEC [--out FILE] [--report FILE]

Exit status: 0 success, 1 domain error (bad input), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .census import automorphisms, enumerate_census
from .errors import DomainError, VerificationError
from .geometry import certify, cusp_shapes, volume_report
from .group_builder import DEFAULT_MAX_CURLED, realize_group
from .groups import group_from_spec
from .homology import h1_double, h1_meridinal_filling
from .triangulation import (
    Triangulation, edge_classes, is_manifold, one_line, parse, serialize, vertex_links,
)

SCHEMA = 1


def _real(x: float) -> float:
    return float(f"{x:.12g}")


def _dump(doc: dict) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, indent=2, ensure_ascii=False) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        err = DomainError(f"cannot read {path!r}: {exc.strerror}")
        err.category = "io"
        raise err from None


def _load(path: str) -> Triangulation:
    return parse(_read(path))


# ---------------------------------------------------------------------------
# documents (plain dicts; the verbs only format them)


def _aut_doc(T: Triangulation) -> dict:
    rep = automorphisms(T)
    return {
        "aut_order": rep.aut_order,
        "isom_plus_order": rep.isom_plus_order,
        "isom_order": rep.isom_order,
        "exceptional_flag": rep.exceptional_flag,
        "valid": rep.valid,
        "generators": [{"tet_perm": list(g.tet_perm), "vertex_perms": [list(p) for p in g.vertex_perms]}
                       for g in rep.aut_generators],
    }


def _cert_doc(T: Triangulation) -> dict:
    c = certify(T)
    return {
        "kind": c.kind,
        "min_valence": c.min_valence,
        "claims": list(c.claims),
        "cusp_bounds": [{"valence": q, "nonmeridinal_length_bound": b} for q, b in c.cusps],
        "max_vertex_sum": _real(max(c.vertex_sums.values())) if c.vertex_sums else None,
    }


def _info_doc(T: Triangulation, seed=None) -> dict:
    vr = volume_report(T)
    ok, bad = is_manifold(T)
    return {
        "n": T.n,
        "genus": vr.genus,
        "vol_N": _real(vr.vol_N),
        "vol_D": _real(vr.vol_D),
        "pm_complexity": vr.pm_complexity,
        "boundary_euler": vr.boundary_euler,
        "manifold": ok,
        "non_orientable_edge_classes": bad,
        "edge_classes": [{"valence": e.valence, "orientable": e.orientable,
                          "boundary_word": [list(x) for x in e.boundary_word]} for e in edge_classes(T)],
        "cusps": [{"valence": c.valence, "orientable": c.orientable, "area": _real(c.area),
                   "shape": c.shape_kind, "meridian_length": _real(c.meridian_length),
                   "longitude_length": None if c.longitude_length is None else _real(c.longitude_length)}
                  for c in cusp_shapes(T)],
        "total_horoball_volume": vr.total_horoball_volume,
        "vertex_links": [{"triangles": l.num_triangles, "euler_characteristic": l.euler_characteristic,
                          "orientable": l.orientable, "genus": l.genus} for l in vertex_links(T)],
        "h1_double": h1_double(T, seed).to_json(),
        "h1_meridinal_filling": h1_meridinal_filling(T).to_json(),
        "certificate": _cert_doc(T),
        "aut": _aut_doc(T),
    }


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args, out) -> int:
    T = _load(args.file)
    ok, bad = is_manifold(T)
    if args.format == "json":
        out.write(_dump({"valid": True, "n": T.n, "manifold": ok}))
    else:
        out.write(f"valid, n={T.n}, manifold={'true' if ok else 'false'}\n")
    return 0


def cmd_info(args, out) -> int:
    T = _load(args.file)
    doc = _info_doc(T, args.seed)
    if args.format == "json":
        out.write(_dump(doc))
        return 0
    out.write(f"n = {doc['n']}\ngenus = {doc['genus']}\n")
    out.write(f"vol_N = {doc['vol_N']}\nvol_D = {doc['vol_D']}\n")
    out.write(f"pm_complexity = {doc['pm_complexity']}\nmanifold = {str(doc['manifold']).lower()}\n")
    for i, c in enumerate(doc["cusps"]):
        out.write(f"cusp {i}: valence {c['valence']}, {c['shape']}, area {c['area']}\n")
    for i, l in enumerate(doc["vertex_links"]):
        kind = "orientable" if l["orientable"] else "non-orientable"
        out.write(f"vertex link {i}: chi {l['euler_characteristic']}, {kind}, genus {l['genus']}\n")
    out.write(f"H1(D(T)) = {h1_double(T, args.seed)}\n")
    out.write(f"certificate = {doc['certificate']['kind']}\n")
    out.write(f"aut_order = {doc['aut']['aut_order']}\n")
    return 0


def cmd_census(args, out) -> int:
    if args.n < 1:
        raise DomainError("n must be positive")

    def keep(T):
        if args.manifold and not is_manifold(T)[0]:
            return False
        if args.min_valence is not None and min(e.valence for e in edge_classes(T)) < args.min_valence:
            return False
        return True

    res = enumerate_census(args.n, keep, jobs=args.jobs, max_nodes=args.max_nodes)
    if res.truncated:
        print(f"warning: census truncated after {res.nodes} search nodes", file=sys.stderr)
    if args.format == "json":
        doc = {"n": args.n, "count": len(res), "truncated": res.truncated}
        if not args.count_only:
            recs = []
            for cf in res:
                T = cf.representative
                vals = sorted(e.valence for e in edge_classes(T))
                recs.append({"signature": one_line(cf.signature), "valences": vals,
                             "manifold": is_manifold(T)[0], "h1_double": h1_double(T).to_json()})
            doc["members"] = recs
        text = _dump(doc)
    elif args.count_only:
        text = f"{len(res)}\n"
    else:
        text = "".join(one_line(cf.signature) + "\n" for cf in res)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_homology(args, out) -> int:
    T = _load(args.file)
    h, f = h1_double(T, args.seed), h1_meridinal_filling(T)
    if args.format == "json":
        out.write(_dump({"h1_double": h.to_json(), "h1_meridinal_filling": f.to_json()}))
    else:
        out.write(f"H1(D(T)) = {h}\nH1(meridinal filling) = {f}\n")
    return 0


def cmd_certify(args, out) -> int:
    T = _load(args.file)
    doc = _cert_doc(T)
    if args.format == "json":
        out.write(_dump({"certificate": doc}))
    else:
        out.write(f"{doc['kind']} (min valence {doc['min_valence']})\n")
        for c in doc["claims"]:
            out.write(f"claim: {c}\n")
    return 0


def cmd_aut(args, out) -> int:
    T = _load(args.file)
    doc = _aut_doc(T)
    if args.format == "json":
        out.write(_dump(doc))
    else:
        out.write(f"aut_order = {doc['aut_order']}\nisom_order = {doc['isom_order']}\n")
        out.write(f"exceptional_flag = {str(doc['exceptional_flag']).lower()}\n")
    return 0


def cmd_group_build(args, out) -> int:
    G = group_from_spec(args.spec)
    T, rep = realize_group(G, max_vertices=args.max_vertices)
    doc = rep.to_json()
    doc = {**doc, "k_Q": _real(doc["k_Q"]), "k_P": _real(doc["k_P"]), "vol_D_bound": _real(doc["vol_D_bound"])}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize(T))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(_dump(doc))
    if args.format == "json":
        out.write(_dump(doc))
    else:
        sc = doc["stage_counts"]
        out.write(f"order = {doc['order']}\n")
        out.write("vertices: " + ", ".join(f"{k} {v}" for k, v in sc.items()) + "\n")
        out.write(f"aut_order(T_G) = {doc['aut_order']}\n")
        out.write(f"vol_D bound = {doc['vol_D_bound']}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=None, help="tie-break randomisation seed")
    p = argparse.ArgumentParser(prog="tridouble", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)
    for name, fn in (("validate", cmd_validate), ("info", cmd_info), ("homology", cmd_homology),
                     ("certify", cmd_certify), ("aut", cmd_aut)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file", help="TRI file, or - for stdin")
        s.set_defaults(func=fn)
    s = sub.add_parser("census", parents=[common])
    s.add_argument("n", type=int)
    s.add_argument("--manifold", action="store_true")
    s.add_argument("--min-valence", type=int, default=None)
    s.add_argument("--count-only", action="store_true")
    s.add_argument("--out", default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--max-nodes", type=int, default=None, help="search budget per branch")
    s.set_defaults(func=cmd_census)
    s = sub.add_parser("group-build", parents=[common])
    s.add_argument("spec", help="trivial, cyclic:<m>, sym:<k> or a group file")
    s.add_argument("--out", default=None)
    s.add_argument("--report", default=None)
    s.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_CURLED)
    s.set_defaults(func=cmd_group_build)
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (DomainError, VerificationError) as exc:
        cat = getattr(exc, "category", "verification")
        if args.format == "json":
            err = {"category": cat, "message": str(exc)}
            for attr in ("line", "column", "vertex", "stage"):
                if getattr(exc, attr, None) is not None:
                    err[attr] = getattr(exc, attr)
            sys.stderr.write(_dump({"error": err}))
        else:
            print(f"error ({cat}): {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
