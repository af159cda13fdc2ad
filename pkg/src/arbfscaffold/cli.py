"""Command line interface.

Subcommands: fit, sample, iso, tpms, perturb, pipeline.  Exit codes:
0 on success, 2 on input errors (bad flags, missing or malformed files,
degenerate meshes), 3 on numerical failure (singular interpolation
system).  Identical inputs and flags produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ScaffoldError, SingularMatrixError
from .grid import make_grid, read_volume, sample_field, solid_fraction, write_volume
from .isosurface import export_obj, marching_cubes
from .mesh import load_mesh, save_mesh
from .perturb import PerturbSpec, perturb_mesh
from .rbf import Basis, fit_mesh, load_model, save_model
from .tpms import DEFAULT_DOMAIN, TpmsField, sample_tpms

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3

_MODE_NAMES = {"iso": "isotropic", "aniso": "anisotropic",
               "isotropic": "isotropic", "anisotropic": "anisotropic"}


def _parse_float_list(text: str) -> list[float]:
    items = [t for t in text.split(",") if t.strip()]
    return [float(t) for t in items]


def _stem(path: str) -> str:
    return os.path.splitext(path)[0]


def _iso_tag(value: float) -> str:
    return f"{value:g}"


def _write_surfaces(grid, iso_values, out_stem) -> int:
    """Extract and write one OBJ per iso value; returns 0 (warnings only)."""
    vmax = float(grid.values.max())
    vmin = float(grid.values.min())
    for iso in iso_values:
        soup = marching_cubes(grid, iso)
        frac = solid_fraction(grid, iso)
        if len(soup.triangles) == 0:
            # no file for an empty surface; say why on stderr and move on
            detail = (f"outside the sampled value range [{vmin:.4g}, {vmax:.4g}]"
                      if iso > vmax or iso < vmin else "no crossings on this grid")
            print(f"warning: iso {_iso_tag(iso)} yields an empty surface "
                  f"({detail}); skipping", file=sys.stderr)
            continue
        path = f"{out_stem}_iso{_iso_tag(iso)}.obj"
        export_obj(soup, path)
        print(f"iso {_iso_tag(iso)}: {len(soup.triangles)} triangles, "
              f"solid fraction {frac:.4f} -> {path}")
    return EXIT_OK


def cmd_fit(args) -> int:
    mesh = load_mesh(args.mesh, args.format)
    basis = Basis(kind=args.basis, c=args.c)
    model, report = fit_mesh(mesh, basis, _MODE_NAMES[args.mode], args.lam)
    out = args.out or _stem(args.mesh) + ".arbf"
    save_model(model, out)
    print(f"N={report.n_centers} cond={report.condition_estimate:.6g} "
          f"residual={report.residual_inf:.6g}")
    print(f"model -> {out}")
    return EXIT_OK


def cmd_sample(args) -> int:
    model = load_model(args.model)
    lo, hi = model.bbox()
    grid = make_grid(lo, hi, args.resolution, args.pad)
    volume = sample_field(model, grid, workers=args.workers)
    out = args.out or _stem(args.model)
    write_volume(volume, out)
    nx, ny, nz = volume.dims
    print(f"volume {nx}x{ny}x{nz} range [{volume.values.min():.6g}, "
          f"{volume.values.max():.6g}] -> {out}.vhdr/.raw")
    return EXIT_OK


def cmd_iso(args) -> int:
    iso_values = _parse_float_list(args.iso)
    if not iso_values:
        print("error: --iso needs at least one value", file=sys.stderr)
        return EXIT_INPUT
    grid = read_volume(args.volume)
    out = args.out or _stem(args.volume)
    return _write_surfaces(grid, iso_values, out)


def cmd_tpms(args) -> int:
    iso_values = _parse_float_list(args.iso)
    if not iso_values:
        print("error: --iso needs at least one value", file=sys.stderr)
        return EXIT_INPUT
    periods = _parse_float_list(args.periods)
    if len(periods) != 3:
        print("error: --periods needs three comma-separated values", file=sys.stderr)
        return EXIT_INPUT
    field = TpmsField(kind=args.kind, periods=tuple(periods))
    lo, hi = DEFAULT_DOMAIN
    grid = make_grid((lo, lo, lo), (hi, hi, hi), args.resolution, 0.0)
    volume = sample_tpms(field, grid, workers=args.workers)
    out = args.out or f"tpms_{args.kind}"
    write_volume(volume, out)
    return _write_surfaces(volume, iso_values, out)


def cmd_perturb(args) -> int:
    mesh = load_mesh(args.mesh, args.format)
    spec = PerturbSpec(magnitude=args.magnitude, seed=args.seed,
                       vertex_fraction=args.fraction)
    out = args.out
    if not out:
        stem, ext = os.path.splitext(args.mesh)
        out = f"{stem}_perturbed{ext}"
    save_mesh(perturb_mesh(mesh, spec), out)
    print(f"perturbed mesh -> {out}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    iso_values = _parse_float_list(args.iso)
    if not iso_values:
        print("error: --iso needs at least one value", file=sys.stderr)
        return EXIT_INPUT
    mesh = load_mesh(args.mesh, args.format)
    basis = Basis(kind=args.basis, c=args.c)
    model, report = fit_mesh(mesh, basis, _MODE_NAMES[args.mode], args.lam)
    out = args.out or _stem(args.mesh)
    save_model(model, out + ".arbf")
    print(f"N={report.n_centers} cond={report.condition_estimate:.6g} "
          f"residual={report.residual_inf:.6g}")
    lo, hi = model.bbox()
    grid = make_grid(lo, hi, args.resolution, args.pad)
    volume = sample_field(model, grid, workers=args.workers)
    write_volume(volume, out)
    return _write_surfaces(volume, iso_values, out)


def _add_mesh_flags(p):
    p.add_argument("--mesh", required=True, help="input mesh path")
    p.add_argument("--format", choices=["off", "nodeele", "hexascii"],
                   help="mesh format (default: inferred from extension)")


def _add_fit_flags(p):
    p.add_argument("--mode", choices=sorted(_MODE_NAMES), default="aniso",
                   help="center construction mode (default: aniso)")
    p.add_argument("--basis", choices=["gaussian", "mq", "imq", "tps"],
                   default="imq", help="radial basis (default: imq)")
    p.add_argument("--c", type=float, default=0.1,
                   help="shape parameter (default: 0.1)")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="Tikhonov diagonal weight (default: 0)")


def _add_grid_flags(p):
    p.add_argument("--resolution", type=int, default=64,
                   help="samples along the longest axis (default: 64)")
    p.add_argument("--pad", type=float, default=0.05,
                   help="bbox padding as a fraction of its diagonal (default: 0.05)")
    p.add_argument("--workers", type=int, default=None,
                   help="sampling worker count; 0 = all cores "
                        "(default: ARBF_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arbf",
        description="Porous scaffold construction via radial basis function "
                    "interpolation over volumetric meshes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit an interpolation model to a mesh")
    _add_mesh_flags(p)
    _add_fit_flags(p)
    p.add_argument("--out", help="output model path (default: <mesh stem>.arbf)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", help="sample a fitted model onto a voxel grid")
    p.add_argument("--model", required=True, help="model file from 'fit'")
    _add_grid_flags(p)
    p.add_argument("--out", help="output volume stem (default: <model stem>)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("iso", help="extract iso-surfaces from a sampled volume")
    p.add_argument("--volume", required=True, help="volume stem or .vhdr path")
    p.add_argument("--iso", required=True,
                   help="comma-separated iso values (use --iso=-0.5,0,0.5)")
    p.add_argument("--out", help="output OBJ stem (default: volume stem)")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("tpms", help="sample a TPMS baseline field")
    p.add_argument("--kind", choices=["p", "d", "g", "iwp"], required=True)
    p.add_argument("--iso", default="0", help="comma-separated iso values (default: 0)")
    p.add_argument("--periods", default="1,1,1",
                   help="per-axis frequency multipliers (default: 1,1,1)")
    _add_grid_flags(p)
    p.add_argument("--out", help="output stem (default: tpms_<kind>)")
    p.set_defaults(func=cmd_tpms)

    p = sub.add_parser("perturb", help="randomly displace mesh vertices")
    _add_mesh_flags(p)
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: 0)")
    p.add_argument("--magnitude", type=float, default=0.15,
                   help="displacement as a fraction of the shortest incident "
                        "edge, at most 0.3 (default: 0.15)")
    p.add_argument("--fraction", type=float, default=0.5,
                   help="fraction of vertices to displace (default: 0.5)")
    p.add_argument("--out", help="output mesh path (default: <stem>_perturbed<ext>)")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("pipeline", help="fit, sample, and extract in one run")
    _add_mesh_flags(p)
    _add_fit_flags(p)
    _add_grid_flags(p)
    p.add_argument("--iso", required=True,
                   help="comma-separated iso values (use --iso=-0.5,0,0.5)")
    p.add_argument("--out", help="output stem (default: mesh stem)")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SingularMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ScaffoldError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
