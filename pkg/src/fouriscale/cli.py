"""Command-line front end: verification suites, the pipeline, spectra, schedules.

Exit codes: 0 success, 1 a numeric invariant exceeded its tolerance,
2 usage or configuration problem, 3 I/O failure.  All randomized suites
draw from numpy's seeded PCG64 generator so identical seeds and flags give
byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .errors import ShapeError, ToolkitError
from .filters import FilterSpec, build_mask_2d
from .kernels import Kernel, spectrum_tiling_residual, structural_consistency_residual
from .pipeline import fouriscale_conv, load_config, schedule_params
from .sampling import (
    DownsampleSpec,
    downsample,
    predict_folded_frequency,
    verify_downsample_superposition,
)
from .spectral import Layout, Spectrum, centralize, dft2, log_amplitude_profile
from .tensor import Tensor, image_export, image_import, read_tensor, write_tensor

GENERATOR_NAME = "numpy-PCG64"

_IMAGE_SUFFIXES = {".png", ".bmp", ".tif", ".tiff"}
_STRIDES = (2, 3, 4)


def _read_input(path: str) -> Tensor:
    if Path(path).suffix.lower() in _IMAGE_SUFFIXES:
        return image_import(path)
    return read_tensor(path)


def _write_output(t: Tensor, path: str) -> None:
    if Path(path).suffix.lower() in _IMAGE_SUFFIXES:
        image_export(t, path)
    else:
        write_tensor(t, path)


# --- verify -----------------------------------------------------------------

def _suite_lemma(rng: np.random.Generator, trials: int) -> float:
    combos = [(n, s) for n in (4, 6, 8, 12, 16) for s in _STRIDES if n % s == 0]
    worst = 0.0
    for _ in range(trials):
        n, s = combos[rng.integers(len(combos))]
        worst = max(worst, verify_downsample_superposition(rng.standard_normal((n, n)), s, s))
    return worst


def _suite_theorem(rng: np.random.Generator, trials: int) -> float:
    """Counts sinusoid trials whose folded spectral peak lands off-prediction."""
    mismatches = 0
    for _ in range(trials):
        s = int(rng.choice(_STRIDES))
        bin_index = int(rng.integers(0, 32))
        length = 64 if 64 % s == 0 else 64 * s
        u = bin_index / 64.0
        signal = np.cos(2.0 * np.pi * u * np.arange(length))[np.newaxis, :]
        down = downsample(signal, DownsampleSpec(1, s))
        magnitudes = np.abs(dft2(down).data[0])
        half = magnitudes[: down.shape[1] // 2 + 1]
        predicted = round(predict_folded_frequency(u, s) * down.shape[1])
        if int(np.argmax(half)) != predicted:
            mismatches += 1
    return float(mismatches)


def _suite_tiling(rng: np.random.Generator, trials: int) -> float:
    worst = 0.0
    for _ in range(trials):
        m = int(rng.choice((1, 3, 5)))
        d = int(rng.choice(_STRIDES))
        worst = max(worst, spectrum_tiling_residual(Kernel(rng.standard_normal((m, m))), d, d))
    return worst


def _suite_consistency(rng: np.random.Generator, trials: int) -> float:
    combos = [(n, s) for n in (8, 12, 16) for s in _STRIDES if n % s == 0]
    worst = 0.0
    for _ in range(trials):
        n, s = combos[rng.integers(len(combos))]
        m = int(rng.choice((1, 3, 5)))
        residual = structural_consistency_residual(
            rng.standard_normal((n, n)), Kernel(rng.standard_normal((m, m))), s
        )
        worst = max(worst, residual)
    return worst


_SUITES = {
    "lemma": _suite_lemma,
    "theorem": _suite_theorem,
    "tiling": _suite_tiling,
    "consistency": _suite_consistency,
}


def _cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        rng = np.random.default_rng(args.seed)
        residual = _SUITES[name](rng, args.trials)
        results.append({"name": name, "residual": residual, "pass": residual <= args.tolerance})

    all_pass = all(r["pass"] for r in results)
    if args.json:
        print(json.dumps({
            "generator": GENERATOR_NAME,
            "seed": args.seed,
            "trials": args.trials,
            "tolerance": args.tolerance,
            "suites": results,
            "pass": all_pass,
        }, sort_keys=True))
    else:
        print(f"verify generator={GENERATOR_NAME} seed={args.seed} "
              f"trials={args.trials} tolerance={args.tolerance:g}")
        for r in results:
            print(f"{r['name']:<12} residual={r['residual']:.3e}  "
                  f"{'PASS' if r['pass'] else 'FAIL'}")
        print(f"RESULT {'PASS' if all_pass else 'FAIL'}")
    return 0 if all_pass else 1


# --- apply ------------------------------------------------------------------

def _log_amplitude_image(spec: Spectrum) -> Tensor:
    amps = np.log1p(np.abs(spec.data))
    peak = amps.max()
    return Tensor(amps / peak if peak > 0 else amps)


def _cmd_apply(args) -> int:
    feature = _read_input(args.input)
    kernel_tensor = read_tensor(args.kernel)
    if kernel_tensor.rank != 2:
        raise ShapeError(f"kernel: must be rank 2, got dims {kernel_tensor.dims}")
    cfg = load_config(Path(args.config))
    step = schedule_params(args.step, cfg)
    result = fouriscale_conv(feature, Kernel(kernel_tensor.data), cfg, step)
    _write_output(result, args.output)

    if args.emit_spectra:
        h_f, w_f = cfg.original
        pad_h, pad_w = step.r * h_f, step.r * w_f
        padded = np.zeros((pad_h, pad_w))
        padded[: feature.dims[-2], : feature.dims[-1]] = feature.channel(0)
        pre = centralize(dft2(padded))
        mask = build_mask_2d((pad_h, pad_w),
                             replace(step.effective_filter, s_h=float(step.r), s_w=float(step.r)))
        post = Spectrum(pre.data * mask.values, Layout.CENTRALIZED)

        prefix = args.emit_spectra
        files = {"pre": f"{prefix}_pre.png", "post": f"{prefix}_post.png"}
        image_export(_log_amplitude_image(pre), files["pre"])
        image_export(_log_amplitude_image(post), files["post"])
        manifest = {"layout": "centralized", "channel": 0, **files}
        Path(f"{prefix}_spectra.json").write_text(json.dumps(manifest, sort_keys=True) + "\n")
    return 0


# --- schedule ---------------------------------------------------------------

def _cmd_schedule(args) -> int:
    cfg = load_config(Path(args.config))
    steps = [schedule_params(t, cfg) for t in range(cfg.total_steps)]
    if args.json:
        print(json.dumps([s.as_record() for s in steps], sort_keys=True))
        return 0
    for s in steps:
        if s.filter_active:
            f, g = s.effective_filter, s.guidance_filter
            print(f"t={s.t:3d} dilation={s.dilation} r={s.r} "
                  f"filter[sigma={f.sigma:g} scale={f.s_h:g} ramp={f.r_h:g}/{f.r_w:g}] "
                  f"guidance[sigma={g.sigma:g}]")
        else:
            print(f"t={s.t:3d} dilation=1 r=1 identity")
    return 0


# --- spectrum ---------------------------------------------------------------

def _cmd_spectrum(args) -> int:
    t = _read_input(args.input)
    plane = t.data if t.rank == 2 else t.data.mean(axis=0)
    spec = dft2(plane)
    shown = centralize(spec) if args.centralize else spec
    image_export(_log_amplitude_image(shown), args.output)

    if args.profile:
        profile = log_amplitude_profile(shown if args.centralize else centralize(spec))
        lines = "".join(f"{d},{value:.12g}\n" for d, value in enumerate(profile))
        Path(args.profile).write_text(lines)
    return 0


# --- mask -------------------------------------------------------------------

def _cmd_mask(args) -> int:
    spec = FilterSpec(s_h=args.scale[0], s_w=args.scale[1],
                      r_h=args.ramp[0], r_w=args.ramp[1], sigma=args.sigma)
    mask = build_mask_2d((args.extent[0], args.extent[1]), spec)
    write_tensor(Tensor(mask.values), args.output)
    if args.image:
        image_export(Tensor(mask.values), args.image)
    return 0


# --- wiring -----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="random seed for trials")
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="residual tolerance for verification")

    parser = argparse.ArgumentParser(
        prog="fouriscale",
        description="Frequency-domain convolution toolkit and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="run randomized numerical verification suites")
    p.add_argument("suite", choices=[*_SUITES, "all"])
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("apply", parents=[common],
                       help="run the pad/filter/crop/dilated-conv pipeline")
    p.add_argument("--in", dest="input", required=True, help="input tensor or image")
    p.add_argument("--kernel", required=True, help="rank-2 kernel tensor file")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--step", type=int, default=0, help="timestep index into the schedule")
    p.add_argument("--out", dest="output", required=True, help="output tensor or image")
    p.add_argument("--emit-spectra", metavar="PREFIX",
                   help="also write pre/post-filter log-amplitude images and a manifest")
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("schedule", parents=[common],
                       help="print the resolved per-timestep parameters")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("spectrum", parents=[common],
                       help="write a log-amplitude spectrum image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--centralize", action="store_true", help="shift DC to the center")
    p.add_argument("--profile", metavar="CSV",
                   help="also write the ring log-amplitude profile as CSV")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("mask", parents=[common],
                       help="write a low-pass mask as a rank-2 tensor")
    p.add_argument("--extent", type=int, nargs=2, required=True, metavar=("H", "W"))
    p.add_argument("--scale", type=float, nargs=2, default=[1.0, 1.0], metavar=("S_H", "S_W"))
    p.add_argument("--ramp", type=float, nargs=2, default=[0.0, 0.0], metavar=("R_H", "R_W"))
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--image", help="optional rendering of the mask as an image")
    p.set_defaults(func=_cmd_mask)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ToolkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
