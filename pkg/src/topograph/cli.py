"""``topograph`` command-line interface."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import fusion
from .config import ConfigError, PipelineConfig
from .cubical import compute_diagram
from .filtration import apply_filtration
from .image_io import ImageFormatError, export_png_preview, export_tensor, load_image, read_tensor
from .selfcheck import run_check
from .topoimage import PatchGrid, PatchSizeError, build_multiview, normalize_patch, suggest_patch_size

log = logging.getLogger("topograph")

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class InputError(Exception):
    pass


def _pi_res(text: str) -> tuple[int, int]:
    parts = text.lower().replace(",", "x").split("x")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad resolution {text!r}; use e.g. 7x7") from None
    if len(vals) == 1:
        vals *= 2
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"bad resolution {text!r}; use e.g. 7x7")
    return tuple(vals)


def _csv(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--patch-size", type=int)
    p.add_argument("--pi-res", type=_pi_res, help="persistence image resolution, e.g. 7x7")
    p.add_argument("--sigma", type=float)
    p.add_argument("--pi-mode", choices=["combined", "per_dimension"])
    p.add_argument("--filtrations", type=_csv, help="comma-separated, e.g. intensity,gradient")
    p.add_argument("--fusion", choices=["none", "cmvfm", "concat", "meanpool"])
    p.add_argument("--weights", help="CMVFM weight directory (manifest.json + NPY arrays)")
    p.add_argument("--seed", type=int, help="seed for deterministic CMVFM weights")
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, help="worker threads per image")


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    return cfg.override(
        patch_size=args.patch_size,
        pi_resolution=args.pi_res,
        sigma=args.sigma,
        pi_mode=args.pi_mode,
        filtrations=args.filtrations,
        fusion=args.fusion,
        weights=args.weights,
        seed=args.seed,
        out=args.out,
        jobs=args.jobs,
    )


def cmd_diagram(args) -> int:
    img = load_image(args.image)
    grid = apply_filtration(img, args.filtration)
    if args.patch is not None:
        pg = PatchGrid.for_shape(*grid.shape, args.patch_size)
        r, c = args.patch
        if not (0 <= r < pg.rows and 0 <= c < pg.cols):
            raise InputError(
                f"patch ({r}, {c}) out of range: rows 0..{pg.rows - 1}, cols 0..{pg.cols - 1}"
            )
        grid = normalize_patch(grid[pg.footprint(r, c)])
    text = compute_diagram(grid).dump()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _inputs(path: Path) -> list[Path]:
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix.lower() == ".png")
        if not files:
            raise InputError(f"no PNG files in {path}")
        return files
    return [path]


def cmd_topoimage(args) -> int:
    cfg = _config(args)
    topo = cfg.topo()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    failures = []
    for path in _inputs(Path(args.path)):
        try:
            views = build_multiview(load_image(path), topo, jobs=cfg.jobs)
            for kind, view in zip(topo.filtrations, views):
                target = out / f"{path.stem}.{kind.value}.npy"
                export_tensor(view, target)
                if args.preview is not None:
                    export_png_preview(view, args.preview, out / f"{path.stem}.{kind.value}.png")
                log.info("wrote %s %s", target, view.shape)
        except (OSError, ValueError, IndexError) as exc:
            failures.append((path, exc))
            print(f"error: {path}: {exc}", file=sys.stderr)
    return EXIT_INPUT if failures else EXIT_OK


def cmd_fuse(args) -> int:
    cfg = _config(args)
    if cfg.fusion == "none":
        raise InputError("no fusion requested (use --fusion cmvfm|concat|meanpool)")
    cfg.check_fusion()
    image = Path(args.image)
    img = load_image(image).data
    views = []
    for kind in cfg.filtrations:
        vpath = Path(args.views) / f"{image.stem}.{kind}.npy"
        if not vpath.is_file():
            raise InputError(f"missing view {vpath}")
        views.append(read_tensor(vpath))

    if cfg.fusion == "concat":
        fused = fusion.fuse_concat(img, views)
    elif cfg.fusion == "meanpool":
        fused = fusion.fuse_meanpool(img, views)
    else:
        if cfg.weights is not None:
            weights = fusion.load_weights(cfg.weights)
        else:
            weights = fusion.init_weights(cfg.seed, [v.shape[0] for v in views], img.shape[0])
        fused = fusion.cmvfm_fuse(img, views, weights)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    target = out / f"{image.stem}.{cfg.fusion}.npy"
    export_tensor(fused, target)
    log.info("wrote %s %s", target, fused.shape)
    return EXIT_OK


def cmd_check(args) -> int:
    report = run_check(count=args.count, seed=args.seed, corrupt=args.corrupt)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_suggest_patch(args) -> int:
    print(suggest_patch_size(args.avg_pixels, args.image_side))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topograph", description="Patch-wise persistent homology TopoImages.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="dump the persistence diagram of an image or one patch")
    p.add_argument("image")
    p.add_argument("--filtration", default="intensity")
    p.add_argument("--patch", type=int, nargs=2, metavar=("ROW", "COL"))
    p.add_argument("--patch-size", type=int, default=28)
    p.add_argument("--out", help="write the dump here instead of stdout")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("topoimage", help="compute TopoImages for an image or a directory of PNGs")
    p.add_argument("path")
    _add_pipeline_flags(p)
    p.add_argument("--preview", type=int, metavar="CHANNEL", help="also write a PNG of this channel")
    p.set_defaults(func=cmd_topoimage)

    p = sub.add_parser("fuse", help="fuse an image with its TopoImages")
    p.add_argument("image")
    p.add_argument("views", help="directory holding <stem>.<filtration>.npy")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("check", help="randomized oracle self-test")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suggest-patch", help="patch size closest to an average object area")
    p.add_argument("avg_pixels", type=float)
    p.add_argument("--image-side", type=int, default=224)
    p.set_defaults(func=cmd_suggest_patch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InputError, ConfigError, PatchSizeError, ImageFormatError, FileNotFoundError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
