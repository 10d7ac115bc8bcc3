"""Command-line interface.  Every command prints one JSON document tagged
``"schema": "ncp2/1"``; output is deterministic for fixed arguments and seed.

Exit codes: 0 success, 2 invalid input, 3 workspace cap exceeded,
4 internal inconsistency, 5 inconclusive finite-field scan.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from ncp2.errors import (Inconclusive, InternalInconsistency, InvalidInput, Ncp2Error, PencilDegenerate,
                         WorkspaceCapExceeded, DegenerateInput)
from ncp2.exact.fields import QQ, QW, Field, parse_field, parse_scalar

SCHEMA = "ncp2/1"
EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_INTERNAL, EXIT_INCONCLUSIVE = 0, 2, 3, 4, 5
DEFAULT_SEED = 0


# --- argument helpers -------------------------------------------------------------

def parse_triple(text: str, field: Field | None = None, length: int = 3) -> list:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != length:
        raise InvalidInput("expected %d comma-separated scalars, got %r" % (length, text))
    vals = [parse_scalar(p) for p in parts]
    if field is not None:
        vals = [field(v) for v in vals]
    return vals


def _field(args) -> Field:
    return parse_field(args.field) if getattr(args, "field", None) else QQ


def _fmt_pt(pt, field: Field) -> list:
    return [field.format(c) for c in pt]


# --- commands -----------------------------------------------------------------------

def cmd_hilbert(args) -> dict:
    from ncp2.quadratic import (as_regular_euler_check, first_euler_failure, hilbert_dims, in_delta,
                                pencil_degenerate, sklyanin)
    f = _field(args)
    abc = parse_triple(args.abc, f)
    A = sklyanin(*abc, field=f)
    dims = hilbert_dims(A, args.degree)
    return {"command": "hilbert", "abc": _fmt_pt(abc, f), "field": f.name, "degree": args.degree,
            "relation_dim": A.relations.dim, "dims": dims, "euler": as_regular_euler_check(dims),
            "first_euler_failure": first_euler_failure(dims), "in_delta": in_delta(*abc),
            "pencil_degenerate": pencil_degenerate(*abc)}


def pipeline_report(uvw_text: str, field_name: str | None) -> dict:
    from ncp2.exact.linalg import plucker
    from ncp2.hessian import invariant_coordinates
    from ncp2.hesse import member_through, projective_point
    from ncp2.quadratic import pencil_degenerate
    from ncp2.tensor import (DET_DEGENERATE, classify_stability, det_cubic, normal_form, relation_subspace,
                             triple_of_tensor)
    f = parse_field(field_name) if field_name else QQ
    uvw = parse_triple(uvw_text, f)
    p = projective_point(uvw, f)
    T = normal_form(*uvw, field=f)
    F = det_cubic(T)
    stab = classify_stability(T)
    flags = []
    report = {"uvw": _fmt_pt(uvw, f), "field": f.name, "tensor": T.to_json(), "det_cubic": F.to_json(),
              "stability": stab.to_json()}
    if pencil_degenerate(*uvw):
        flags.append("pencil-degenerate parameter")
    try:
        C = member_through(p, f)
        report["member"] = C.to_json()
        report["member_smooth"] = C.is_smooth()
    except PencilDegenerate:
        report["member"] = None
        report["member_smooth"] = None
    if stab.label == DET_DEGENERATE:
        flags.append("det identically zero")
        if stab.geometric:
            flags.append("veronese orbit")
    try:
        R = relation_subspace(T)
        report["relation"] = R.to_json()
        report["plucker"] = [f.format(c) for c in plucker(R)]
    except DegenerateInput as exc:
        report["relation"] = None
        report["plucker"] = None
        flags.append(str(exc))
    try:
        tri = triple_of_tensor(T, check_geometric=False)
        rec = tri.parameter
        report["recovered_parameter"] = None if rec is None else _fmt_pt(rec, f)
        report["roundtrip"] = rec is not None and tuple(rec) == tuple(p)
        report["translation"] = None if tri.translation is None else _fmt_pt(tri.translation, f)
    except DegenerateInput as exc:
        report["recovered_parameter"] = None
        report["roundtrip"] = None
        report["translation"] = None
        flags.append(str(exc))
    if f.characteristic == 0:
        try:
            report["invariants"] = invariant_coordinates(uvw).to_json()
        except DegenerateInput as exc:
            report["invariants"] = None
            flags.append(str(exc))
    else:
        report["invariants"] = None
        flags.append("invariant coordinates are computed over Q(w) only")
    report["flags"] = flags
    return report


def _run_batch(fn, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, *zip(*items)))
    return [fn(*it) for it in items]


def cmd_pipeline(args) -> dict:
    items = [(u, args.field) for u in args.uvw]
    reports = _run_batch(pipeline_report, items, args.jobs)
    out = {"command": "pipeline"}
    if len(reports) == 1:
        out.update(reports[0])
    else:
        out["items"] = reports
    return out


def cmd_quiver(args) -> dict:
    from ncp2.quiver import (Quiver, beilinson, beilinson_ideal, composition_image_rank, fd_ideal, fd_quiver,
                             free_dims, ideal_from_moduli, make_ideal, phi_monomial, quotient_dims, total_dim,
                             RelationIdeal)
    from ncp2.quadratic import sklyanin_relations
    f = _field(args)
    out = {"command": "quiver", "field": f.name}
    extra = {}
    if args.builtin:
        name = args.builtin
        if name == "beilinson":
            q = beilinson()
            if args.sklyanin:
                abc = parse_triple(args.sklyanin, f)
                I = beilinson_ideal(sklyanin_relations(*abc), f)
                extra["sklyanin"] = _fmt_pt(abc, f)
            else:
                I = RelationIdeal(q, f, ())
        elif name.startswith("fd:"):
            try:
                d = int(name[3:])
            except ValueError:
                raise InvalidInput("builtin fd:d needs an integer d")
            q = fd_quiver(d)
            I = fd_ideal(d, f)
            extra = {"d": d, "dim_I31": I.dim(3, 1), "dim_I42": I.dim(4, 2), "dim_I41": I.dim(4, 1),
                     "composition_rank_41": composition_image_rank(I, 4, 1), "path_dim_41": q.path_dim(4, 1)}
        else:
            raise InvalidInput("unknown builtin %r (use beilinson or fd:d)" % name)
    elif args.spec:
        with open(args.spec) as fh:
            q = Quiver.from_json(json.load(fh))
        rels = []
        if args.relations:
            with open(args.relations) as fh:
                data = json.load(fh)
            for rel in data:
                rels.append({q.parse_path(p): parse_scalar(c) for p, c in rel})
        I = make_ideal(q, f, rels)
    else:
        raise InvalidInput("give --builtin or --spec")
    J = phi_monomial(I)
    back = ideal_from_moduli(J, q, f)
    qd = quotient_dims(I)
    out.update(extra)
    out.update({"quiver": q.to_json(), "free_dims": free_dims(q), "ideal_dims": I.dimension_matrix(),
                "quotient_dims": qd, "total_dim": total_dim(qd), "ideal": I.to_json(),
                "J": [g.to_json() for g in J], "J_text": [repr(g) for g in J], "roundtrip": back == I})
    return out


def _curve_from_args(args):
    from ncp2.hesse import member_through
    f = _field(args)
    return member_through(parse_triple(args.uvw, f), f), f


def cmd_curve(args) -> dict:
    from ncp2.hesse import base_points, graph_forms, graph_image
    C, f = _curve_from_args(args)
    out = {"command": "curve " + args.curve_cmd, "uvw": args.uvw, "field": f.name, "curve": C.to_json(),
           "smooth": C.is_smooth()}
    if args.curve_cmd == "member":
        p = C.point(parse_triple(args.uvw, f))
        out["contains_parameter"] = C.contains(p)
        return out
    if args.curve_cmd == "add":
        P = C.point(parse_triple(args.p, f))
        Q = C.point(parse_triple(args.q, f))
        out.update({"P": P.to_json(), "Q": Q.to_json(), "sum": (P + Q).to_json(), "neg_P": (-P).to_json()})
        return out
    if args.curve_cmd == "torsion":
        pts = base_points(C)
        out["base_points"] = [{"point": b.to_json(), "order": C.order(b),
                               "triple_is_origin": C.mul(3, b) == C.origin()} for b in pts]
        return out
    if args.curve_cmd == "graph-check":
        abc = parse_triple(args.abc, f) if args.abc else parse_triple(args.uvw, f)
        forms = graph_forms(abc, f)
        rng = random.Random(args.seed)
        pts = C.points()
        sample = [pts[rng.randrange(len(pts))] for _ in range(args.samples)]
        diffs = []
        for q in sample:
            img = C.point(graph_image(forms, q.coords))
            diffs.append((img - q).to_json())
        out.update({"abc": _fmt_pt(abc, f), "seed": args.seed, "samples": [q.to_json() for q in sample],
                    "translates": diffs, "constant_translate": len({tuple(d) for d in diffs}) == 1})
        return out
    raise InvalidInput("unknown curve command")


def _tensor_from_args(args):
    from ncp2.tensor import Tensor333, normal_form
    f = _field(args)
    if args.uvw:
        return normal_form(*parse_triple(args.uvw, f), field=f), f
    if args.tensor:
        text = args.tensor
        if text.startswith("@"):
            with open(text[1:]) as fh:
                vals = json.load(fh)
        else:
            vals = [v.strip() for v in text.split(",")]
        vals = [parse_scalar(v) if isinstance(v, str) else v for v in vals]
        return Tensor333.from_flat([f(v) for v in vals], f), f
    raise InvalidInput("give --uvw or --tensor")


def cmd_tensor(args) -> dict:
    from ncp2.exact.linalg import plucker
    from ncp2.tensor import classify_stability, geometricity_report, relation_subspace, triple_of_tensor
    T, f = _tensor_from_args(args)
    out = {"command": "tensor " + args.tensor_cmd, "field": f.name, "tensor": T.to_json()}
    primes = tuple(int(p) for p in args.primes.split(",")) if args.primes else None
    kw = {"primes": primes} if primes else {}
    if args.tensor_cmd == "classify":
        out["stability"] = classify_stability(T, **kw).to_json()
        out["geometricity"] = geometricity_report(T, **kw).to_json()
    elif args.tensor_cmd == "from-param":
        pass
    elif args.tensor_cmd == "triple":
        out["triple"] = triple_of_tensor(T, **kw).to_json()
    elif args.tensor_cmd == "relation":
        R = relation_subspace(T)
        out["relation"] = R.to_json()
        if args.plucker:
            out["plucker"] = [f.format(c) for c in plucker(R)]
    return out


def cmd_invariants(args) -> dict:
    from ncp2.hessian import invariant_coordinates, invariants, orbit
    uvw = parse_triple(args.uvw, QW)
    out = {"command": "invariants " + args.inv_cmd, "uvw": _fmt_pt(uvw, QW)}
    if args.inv_cmd == "eval":
        out["invariants"] = {str(d): c.to_json() for d, c in zip((6, 9, 12), invariants())}
        out["coordinates"] = invariant_coordinates(uvw).to_json()
    else:
        pts = orbit(uvw)
        base = invariant_coordinates(uvw)
        out["orbit_size"] = len(pts)
        out["orbit"] = [_fmt_pt(p, QW) for p in pts]
        out["coordinates"] = base.to_json()
        out["constant_on_orbit"] = all(invariant_coordinates(p) == base for p in pts)
    return out


def cmd_group(args) -> dict:
    from ncp2.hessian import build_group, translation_generators, verify
    out = {"command": "group verify"}
    out.update(verify())
    T = build_group(translation_generators())
    out["translations"] = {"order": T.order, "projective_order": T.projective_order()}
    return out


def cmd_gk(args) -> dict:
    from ncp2.poly import LaurentData, gk_profile, reconstruct
    coeffs = [int(c) for c in args.q.split(",")]
    q = LaurentData.from_coeffs(coeffs, args.low)
    prof = gk_profile(q)
    return {"command": "gk-profile", "q": q.to_json(), "profile": prof.to_json(),
            "reconstruction_ok": reconstruct(prof) == q}


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncp2", description=__doc__.split("\n")[0])
    ap.add_argument("--output", "-o", help="write JSON here instead of stdout")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled checks (default 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    def field_opt(p):
        p.add_argument("--field", default=None, help="rational | cyclotomic | prime:P (default rational)")

    p = sub.add_parser("hilbert", help="graded dimensions of a Sklyanin algebra")
    p.add_argument("--abc", required=True)
    p.add_argument("--degree", type=int, default=6)
    field_opt(p)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("pipeline", help="tensor, curve, relations, stability and invariants of (u:v:w)")
    p.add_argument("--uvw", action="append", required=True, help="repeat for a batch")
    p.add_argument("--jobs", type=int, default=1)
    field_opt(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("quiver", help="relation ideals, dimension matrices and the monomial ideal J")
    p.add_argument("--builtin", help="beilinson | fd:d")
    p.add_argument("--sklyanin", help="a,b,c relations for the Beilinson quiver")
    p.add_argument("--spec", help="quiver JSON file")
    p.add_argument("--relations", help="relations JSON file: list of [[path, scalar], ...]")
    field_opt(p)
    p.set_defaults(func=cmd_quiver)

    p = sub.add_parser("curve", help="Hesse pencil members and the group law")
    csub = p.add_subparsers(dest="curve_cmd", required=True)
    for name in ("member", "add", "torsion", "graph-check"):
        c = csub.add_parser(name)
        c.add_argument("--uvw", required=True)
        field_opt(c)
        if name == "add":
            c.add_argument("--p", required=True)
            c.add_argument("--q", required=True)
        if name == "graph-check":
            c.add_argument("--abc", help="graph-form parameter (default: --uvw)")
            c.add_argument("--samples", type=int, default=20)
        c.set_defaults(func=cmd_curve)

    p = sub.add_parser("tensor", help="3x3x3 tensors")
    tsub = p.add_subparsers(dest="tensor_cmd", required=True)
    for name in ("classify", "from-param", "triple", "relation"):
        c = tsub.add_parser(name)
        c.add_argument("--uvw")
        c.add_argument("--tensor", help="27 comma-separated scalars, or @file.json")
        c.add_argument("--primes", help="scan primes, e.g. 7,13,19")
        field_opt(c)
        if name == "relation":
            c.add_argument("--plucker", action="store_true")
        c.set_defaults(func=cmd_tensor)

    p = sub.add_parser("invariants", help="Hessian-group invariants")
    isub = p.add_subparsers(dest="inv_cmd", required=True)
    for name in ("eval", "orbit"):
        c = isub.add_parser(name)
        c.add_argument("--uvw", required=True)
        c.set_defaults(func=cmd_invariants)

    p = sub.add_parser("orbit", help="alias of 'invariants orbit'")
    p.add_argument("--uvw", required=True)
    p.set_defaults(func=cmd_invariants, inv_cmd="orbit")

    p = sub.add_parser("group", help="Hessian group checks")
    gsub = p.add_subparsers(dest="group_cmd", required=True)
    c = gsub.add_parser("verify")
    c.set_defaults(func=cmd_group)

    p = sub.add_parser("gk-profile", help="expand a characteristic polynomial at t = 1")
    p.add_argument("--q", required=True, help="integer coefficients, lowest exponent first")
    p.add_argument("--low", type=int, default=0, help="exponent of the first coefficient")
    p.set_defaults(func=cmd_gk)
    return ap


def render(doc: dict) -> str:
    doc = dict(doc)
    doc["schema"] = SCHEMA
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _error(kind: str, exc: Exception, code: int) -> int:
    sys.stdout.write(render({"error": kind, "message": str(exc), "exit_code": code}))
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except WorkspaceCapExceeded as exc:
        return _error("workspace-cap", exc, EXIT_CAP)
    except InternalInconsistency as exc:
        return _error("internal-inconsistency", exc, EXIT_INTERNAL)
    except Inconclusive as exc:
        return _error("inconclusive", exc, EXIT_INCONCLUSIVE)
    except (InvalidInput, ZeroDivisionError) as exc:
        return _error("invalid-input", exc, EXIT_INVALID)
    except OSError as exc:
        return _error("invalid-input", exc, EXIT_INVALID)
    except Ncp2Error as exc:
        return _error("error", exc, EXIT_INTERNAL)
    text = render(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
