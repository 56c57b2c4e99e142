"""Command line driver.

Exit codes: 0 success, 2 incompatible exponents/control points,
3 all orientation products vanish, 64 unparsable input, 65 domain error.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import io
from .blending import as_weights, blend, patch_eval
from .degeneration import degenerate_weights, patch_complex_distance, sample_domain
from .errors import DomainError, MaxIterationsExceeded, ParseError, SizeMismatch
from .geometry import convex_hull
from .injectivity import Status, compatibility, projected_injectivity
from .ipf import homogenize, ipf_solve
from .triangulation import (
    LiftingFunction,
    control_polytope,
    is_regular,
    perturb_lifting,
    pulling_triangulation,
    regular_triangulation,
)

EXIT_OK = 0
EXIT_INCOMPATIBLE = 2
EXIT_ALL_DEGENERATE = 3
EXIT_PARSE = 64
EXIT_DOMAIN = 65

_VERDICT_EXIT = {
    Status.COMPATIBLE: EXIT_OK,
    Status.INCOMPATIBLE: EXIT_INCOMPATIBLE,
    Status.ALL_DEGENERATE: EXIT_ALL_DEGENERATE,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which collides with "Incompatible"
    def error(self, message):
        raise ParseError(message)


def _default_grid(config):
    return 201 if config.dim == 1 else 101


def _weights(args, config):
    return as_weights(io.read_weights(args.weights) if args.weights else None, len(config))


def _controls(args, config, required=True):
    if not args.controls:
        if required:
            raise ParseError("--controls is required for this command")
        return None
    b = io.read_controls(args.controls)
    if len(b) != len(config):
        raise SizeMismatch(f"{len(config)} exponents but {len(b)} control points")
    return b


def _lifting(args, config):
    if args.lifting:
        lam = io.read_lifting(args.lifting)
    elif getattr(args, "schedule", None) and config.dim == 1:
        m = len(config) - 1
        div = 2 if args.schedule == "half" else 1
        lam = LiftingFunction(tuple(i * (m - i) / div for i in range(m + 1)))
    else:
        raise ParseError("--lifting is required for this command")
    if len(lam) != len(config):
        raise SizeMismatch(f"{len(config)} exponents but {len(lam)} lifting values")
    return lam


def _coords(prefix, n):
    return [f"{prefix}_{i + 1}" for i in range(n)]


def cmd_sample(args, out):
    config = io.read_config(args.config)
    poly = convex_hull(config)
    b = _controls(args, config)
    xs = sample_domain(config, args.grid or _default_grid(config))
    f = patch_eval(config, poly, _weights(args, config), b, xs)
    path = io.out_path(args.out, "sample.csv")
    io.write_csv(path, _coords("x", config.dim) + _coords("F", b.shape[1]), np.hstack([xs, f]))
    print(f"sample: {len(xs)} points -> {path}", file=out)
    return EXIT_OK


def cmd_blend(args, out):
    config = io.read_config(args.config)
    poly = convex_hull(config)
    xs = sample_domain(config, args.grid or _default_grid(config))
    z = blend(config, poly, _weights(args, config), xs)
    header = _coords("x", config.dim) + [f"z_{a}" for a in range(len(config))]
    rows = [xs, z]
    b = _controls(args, config, required=False)
    if b is not None:
        header += _coords("F", b.shape[1])
        rows.append(z @ b)
    path = io.out_path(args.out, "blend.csv")
    io.write_csv(path, header, np.hstack(rows))
    print(f"blend: {len(xs)} points -> {path}", file=out)
    return EXIT_OK


def cmd_ipf(args, out):
    config = io.read_config(args.config)
    w = _weights(args, config)
    hc = homogenize(config)
    if args.queries:
        ys = io.read_points(args.queries)
        if ys.shape[1] != config.dim:
            raise SizeMismatch(f"query points must have {config.dim} coordinates")
    else:
        rng = np.random.default_rng(args.seed)
        ys = rng.dirichlet(np.ones(len(config)), size=args.samples) @ config.array
    kw = {"tol": args.tol} if args.tol is not None else {}
    rows, failed = [], 0
    for y in ys:
        res = ipf_solve(hc, w, y, **kw)
        failed += not res.converged
        rows.append(list(y) + list(res.p) + [res.iterations, res.final_error, res.converged])
    header = (_coords("y", config.dim) + [f"z_{a}" for a in range(len(config))]
              + ["iterations", "error", "converged"])
    path = io.out_path(args.out, "ipf.csv")
    io.write_csv(path, header, rows)
    print(f"ipf: {len(ys)} queries, {len(ys) - failed} converged -> {path}", file=out)
    if failed:
        raise MaxIterationsExceeded(f"{failed} IPF run(s) did not reach tolerance")
    return EXIT_OK


def cmd_check_injective(args, out):
    config = io.read_config(args.config)
    b = _controls(args, config)
    projected = b.shape[1] != config.dim
    if args.projection:
        proj = io.read_projection(args.projection)
        verdict = projected_injectivity(config, b, proj["matrix"], proj["offset"], proj["centers"])
        projected = True
    elif projected:
        raise SizeMismatch("control points live in a higher dimension; pass --projection")
    else:
        verdict = compatibility(config, b)
    doc = {
        "verdict": verdict.status.value,
        "global_sign": verdict.global_sign,
        "witness": [list(s) for s in verdict.witness] if verdict.witness else None,
    }
    io.write_json(io.out_path(args.out, "injectivity.json"), doc)
    print(f"verdict: {verdict.status.value}", file=out)
    if verdict.global_sign is not None:
        print(f"global sign: {verdict.global_sign:+d}", file=out)
    if verdict.witness:
        i, j = verdict.witness
        print(f"witness: {list(i)} {list(j)}", file=out)
    if projected:
        msg = "certified injective" if verdict.compatible else "certificate inconclusive"
        print(msg, file=out)
        return EXIT_OK if verdict.compatible else _VERDICT_EXIT[verdict.status]
    msg = ("injective for every choice of positive weights" if verdict.compatible
           else "not injective for some choice of positive weights"
           if verdict.status is Status.INCOMPATIBLE else "no affinely independent subset survives")
    print(msg, file=out)
    return _VERDICT_EXIT[verdict.status]


def cmd_triangulate(args, out):
    config = io.read_config(args.config)
    if args.triangulation:
        T = io.read_triangulation(args.triangulation)
        ok, witness = is_regular(config, T)
        heights = [_exact_text(v) for v in witness.values] if ok else None
        doc = {"regular": ok, "simplices": T.to_list(), "witness": heights}
        io.write_json(io.out_path(args.out, "regularity.json"), doc)
        print("regular" if ok else "irregular", file=out)
        if ok:
            print("witness: " + ",".join(heights), file=out)
        return EXIT_OK
    lam = _lifting(args, config)
    if args.perturb:
        lam = perturb_lifting(lam, config)
    T = regular_triangulation(config, lam)
    io.write_json(io.out_path(args.out, "triangulation.json"), {"simplices": T.to_list()})
    print(_compact(T.to_list()), file=out)
    b = _controls(args, config, required=False)
    if b is not None and config.dim == 2 and b.shape[1] == 3:
        path = io.out_path(args.out, "control_polytope.obj")
        io.write_obj(path, b, T.simplices)
        print(f"control polytope -> {path}", file=out)
    return EXIT_OK


def _exact_text(v) -> str:
    return str(v) if isinstance(v, Fraction) else io.fmt(v)


def _compact(obj) -> str:
    return str(obj).replace(" ", "")


def _patch_mesh(config, poly, w, b, n):
    weights, faces = io.triangle_lattice_mesh(n)
    verts, all_faces, offset = [], [], 0
    for s in pulling_triangulation(config):
        xs = weights @ config.array[list(s)]
        all_faces += [tuple(i + offset for i in f) for f in faces]
        verts.append(patch_eval(config, poly, w, b, xs))
        offset += len(xs)
    return np.vstack(verts), all_faces


def cmd_degenerate(args, out):
    config = io.read_config(args.config)
    poly = convex_hull(config)
    b = _controls(args, config)
    lam = _lifting(args, config)
    base = _weights(args, config)
    t_values = io.parse_t_values(args.t)
    if any(t <= 0 for t in t_values):
        raise DomainError("t values must be positive")
    grid = args.grid or _default_grid(config)
    try:
        T = regular_triangulation(config, lam)
    except DomainError:
        T = regular_triangulation(config, perturb_lifting(lam, config))
    complex_ = control_polytope(T, b)
    rows = []
    for k, t in enumerate(t_values):
        w = degenerate_weights(base, lam, t)
        rep = patch_complex_distance(config, poly, w, b, complex_, grid, t=t)
        rows.append([t, rep.sup_patch_to_complex, rep.sup_complex_to_patch, rep.samples])
        print(f"t={io.fmt(t)}: patch->polytope {rep.sup_patch_to_complex:.6g}, "
              f"polytope->patch {rep.sup_complex_to_patch:.6g}", file=out)
        if config.dim == 1 and b.shape[1] == 2:
            xs = np.linspace(config.array.min(), config.array.max(), 401)[:, None]
            curve = patch_eval(config, poly, w, b, xs)
            ctrl = b[np.argsort(config.array[:, 0])]
            io.write_svg(io.out_path(args.out, f"degenerate_{k:02d}.svg"), curve, ctrl,
                         tube=rep.sup_patch_to_complex)
        elif config.dim == 2 and b.shape[1] == 3:
            verts, faces = _patch_mesh(config, poly, w, b, min(grid - 1, 40))
            io.write_obj(io.out_path(args.out, f"patch_{k:02d}.obj"), verts, faces)
    if config.dim == 2 and b.shape[1] == 3:
        io.write_obj(io.out_path(args.out, "control_polytope.obj"), b, T.simplices)
    path = io.out_path(args.out, "degenerate.csv")
    io.write_csv(path, ["t", "sup_patch_to_complex", "sup_complex_to_patch", "samples"], rows)
    print(f"degenerate: {len(rows)} t values, triangulation {_compact(T.to_list())} -> {path}",
          file=out)
    return EXIT_OK


COMMANDS = {
    "blend": cmd_blend,
    "ipf": cmd_ipf,
    "check-injective": cmd_check_injective,
    "triangulate": cmd_triangulate,
    "degenerate": cmd_degenerate,
    "sample": cmd_sample,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toricpatch", description="Toric Bezier patch toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--controls")
        p.add_argument("--weights")
        p.add_argument("--lifting")
        p.add_argument("--grid", type=int)
        p.add_argument("--t", default="1,10,100")
        p.add_argument("--tol", type=float)
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--projection")
        if name == "ipf":
            p.add_argument("--queries", help="JSON list of target points")
            p.add_argument("--samples", type=int, default=10,
                           help="random interior targets when --queries is absent")
        if name == "triangulate":
            p.add_argument("--triangulation", help="check regularity of this triangulation")
            p.add_argument("--perturb", action="store_true", help="perturb the lift first")
        if name == "degenerate":
            p.add_argument("--schedule", choices=("full", "half"),
                           help="curve lift i(m-i) (or half of it) instead of --lifting")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.grid is not None and args.grid < 2:
            raise ParseError("--grid must be at least 2")
        return COMMANDS[args.command](args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
