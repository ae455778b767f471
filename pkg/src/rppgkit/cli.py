"""Command-line entry point.

Subcommands: ``synth`` (generate a ground-truth clip), ``estimate`` (clip ->
per-method heart-rate JSON), ``compare`` (results -> table + distribution
plot), ``plot`` (distribution plot only). Numeric output uses fixed rounding
(3 decimals for bpm/statistics, 6 for Hz) so identical runs write identical
bytes. Errors are emitted as JSON on stderr with a stable ``code`` field.

``RPPG_CONFIG`` may point to a JSON file with defaults for ``band``,
``n_fft``, ``forehead_spec``, and ``min_coverage``; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import RppgError
from .ingest import load_manifest
from .roi import default_forehead_spec, load_forehead_spec, load_geometry_sidecar
from .spectral import DEFAULT_N_FFT, BandLimits, HrEstimate, estimate_hr
from .stats import RunSet, render_comparison, render_distribution, summarize
from .synth import SynthConfig, generate_clip
from .trace import extract_trace, trace_csv


def _parse_band(text: str) -> BandLimits:
    try:
        low, high = (float(v) for v in text.split(":"))
    except ValueError:
        raise RppgError(f"band must look like '1.0:4.0', got {text!r}") from None
    return BandLimits(low_hz=low, high_hz=high)


def _env_defaults() -> dict:
    path = os.environ.get("RPPG_CONFIG")
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise RppgError(f"cannot read RPPG_CONFIG file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise RppgError("RPPG_CONFIG file must hold a JSON object")
    return doc


def _resolve_analysis_options(args) -> tuple[BandLimits, int, object, float]:
    """Merge CLI flags over RPPG_CONFIG defaults over built-ins."""
    env = _env_defaults()
    if args.band is not None:
        band = _parse_band(args.band)
    elif "band" in env:
        low, high = env["band"]
        band = BandLimits(low_hz=float(low), high_hz=float(high))
    else:
        band = BandLimits()
    n_fft = args.n_fft if args.n_fft is not None else int(env.get("n_fft", DEFAULT_N_FFT))
    if args.spec is not None:
        spec = load_forehead_spec(args.spec)
    elif "forehead_spec" in env:
        spec = load_forehead_spec(env["forehead_spec"])
    else:
        spec = default_forehead_spec()
    if args.min_coverage is not None:
        min_coverage = args.min_coverage
    else:
        min_coverage = float(env.get("min_coverage", 0.8))
    return band, n_fft, spec, min_coverage


def _result_doc(est: HrEstimate, trace, n_fft: int, label: str) -> dict:
    snr = round(est.snr_db, 3) if est.snr_db not in (float("inf"), float("-inf")) else None
    return {
        "method": est.method,
        "bpm": round(est.bpm, 3),
        "peak_hz": round(est.peak_hz, 6),
        "snr_db": snr,
        "band": [est.band.low_hz, est.band.high_hz],
        "fps": trace.fps,
        "n_samples": est.n_samples,
        "n_fft": n_fft,
        "skipped_frames": sorted(trace.skipped_frames),
        "clip": label,
    }


def _write_json(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def cmd_estimate(args) -> int:
    band, n_fft, spec, min_coverage = _resolve_analysis_options(args)
    manifest = load_manifest(args.clip)
    geometry = load_geometry_sidecar(args.coords, frame_count=manifest.frame_count)
    label = args.label or os.path.basename(os.path.dirname(os.path.abspath(args.clip)))
    methods = ["bbox", "landmark"] if args.method == "both" else [args.method]
    os.makedirs(args.out, exist_ok=True)
    for method in methods:
        trace = extract_trace(
            manifest,
            geometry,
            method,
            spec,
            min_coverage=min_coverage,
            workers=args.workers,
        )
        est = estimate_hr(trace, band=band, n_fft=n_fft, method=method)
        _write_json(
            _result_doc(est, trace, n_fft, label),
            os.path.join(args.out, f"{label}_{method}.json"),
        )
        if args.trace_csv:
            with open(
                os.path.join(args.out, f"{label}_{method}_trace.csv"), "w", encoding="utf-8"
            ) as fh:
                fh.write(trace_csv(trace))
        print(f"{label} {method}: {est.bpm:.3f} bpm (peak {est.peak_hz:.6f} Hz)")
    return 0


def _load_results(results_dir: str) -> list[dict]:
    if not os.path.isdir(results_dir):
        raise RppgError(f"results directory not found: {results_dir}")
    docs = []
    for name in sorted(os.listdir(results_dir)):
        if not name.endswith(".json"):
            continue
        with open(os.path.join(results_dir, name), "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise RppgError(f"result file {name} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "bpm" not in doc or "method" not in doc:
            continue
        doc.setdefault("clip", os.path.splitext(name)[0])
        docs.append(doc)
    if not docs:
        raise RppgError(f"no result documents found in {results_dir}")
    return docs


def _group_results(docs: list[dict]) -> list[RunSet]:
    bands = {tuple(doc.get("band", [])) for doc in docs}
    if len(bands) > 1:
        listing = ", ".join(str(list(b)) for b in sorted(bands))
        raise RppgError(f"results mix different bands ({listing}); re-run with one band")
    band_vals = next(iter(bands))
    if len(band_vals) != 2:
        raise RppgError("result documents carry no usable band field")
    band = BandLimits(low_hz=float(band_vals[0]), high_hz=float(band_vals[1]))
    sets = []
    for method in ("bbox", "landmark"):
        group = [d for d in docs if d["method"] == method]
        if not group:
            continue
        estimates = tuple(
            HrEstimate(
                bpm=float(d["bpm"]),
                peak_hz=float(d.get("peak_hz", d["bpm"] / 60.0)),
                band=band,
                snr_db=float("inf") if d.get("snr_db") is None else float(d["snr_db"]),
                n_samples=int(d.get("n_samples", 0)),
                method=method,
            )
            for d in group
        )
        sets.append(RunSet(method=method, estimates=estimates, labels=tuple(d["clip"] for d in group)))
    return sets


def cmd_compare(args) -> int:
    docs = _load_results(args.results)
    sets = _group_results(docs)
    stats = [summarize(s) for s in sets]
    if len(sets) == 2:
        text, csv = render_comparison(stats[0], stats[1], sets[0].method, sets[1].method)
    else:
        text, csv = render_comparison(stats[0], None, sets[0].method)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(text)
    with open(os.path.join(args.out, "summary.csv"), "w", encoding="utf-8") as fh:
        fh.write(csv)
    render_distribution(
        sets,
        os.path.join(args.out, "distribution.svg"),
        os.path.join(args.out, "distribution_points.csv"),
    )
    print(text, end="")
    return 0


def cmd_plot(args) -> int:
    docs = _load_results(args.results)
    sets = _group_results(docs)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    render_distribution(sets, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_synth(args) -> int:
    base_rgb = tuple(int(v) for v in args.base_rgb.split(","))
    config = SynthConfig(
        bpm=args.bpm,
        fps=args.fps,
        duration_s=args.duration,
        width=args.width,
        height=args.height,
        base_rgb=base_rgb,
        amplitude=args.amplitude,
        noise_sigma=args.noise_sigma,
        drift_per_s=args.drift_per_s,
        sway_hz=args.sway_hz,
        sway_amplitude=args.sway_amplitude,
        texture_slope=args.texture_slope,
        bbox_jitter_sigma=args.bbox_jitter,
        landmark_jitter_sigma=args.landmark_jitter,
        seed=args.seed,
    )
    if not 60.0 <= config.bpm <= 240.0:
        print(
            f"warning: target {config.bpm:g} bpm is outside the default "
            "60-240 bpm band; the default estimator band will not find it",
            file=sys.stderr,
        )
    manifest = generate_clip(config, args.out, pixel_format=args.format)
    print(
        f"wrote {manifest.frame_count} frames at {manifest.width}x{manifest.height} "
        f"to {args.out}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rppgkit",
        description="Green-channel rPPG heart-rate estimation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate heart rate for one clip")
    est.add_argument("--clip", required=True, help="path to manifest.json")
    est.add_argument("--coords", required=True, help="path to geometry sidecar (ndjson)")
    est.add_argument("--method", choices=["bbox", "landmark", "both"], default="both")
    est.add_argument("--out", required=True, help="directory for result JSON files")
    est.add_argument("--band", default=None, help="peak search band, e.g. 1.0:4.0")
    est.add_argument("--n-fft", type=int, default=None, dest="n_fft")
    est.add_argument("--spec", default=None, help="forehead spec JSON path")
    est.add_argument("--min-coverage", type=float, default=None, dest="min_coverage")
    est.add_argument("--workers", type=int, default=1)
    est.add_argument("--label", default=None, help="clip label (default: clip directory name)")
    est.add_argument("--trace-csv", action="store_true", dest="trace_csv")
    est.set_defaults(func=cmd_estimate)

    cmp_ = sub.add_parser("compare", help="summarize a results directory")
    cmp_.add_argument("--results", required=True)
    cmp_.add_argument("--out", required=True, help="directory for table + plot outputs")
    cmp_.set_defaults(func=cmd_compare)

    plot = sub.add_parser("plot", help="distribution plot from a results directory")
    plot.add_argument("--results", required=True)
    plot.add_argument("--out", required=True, help="output SVG path")
    plot.set_defaults(func=cmd_plot)

    syn = sub.add_parser("synth", help="generate a synthetic ground-truth clip")
    syn.add_argument("--bpm", type=float, default=72.0)
    syn.add_argument("--fps", type=float, default=30.0)
    syn.add_argument("--duration", type=float, default=10.0)
    syn.add_argument("--width", type=int, default=320)
    syn.add_argument("--height", type=int, default=240)
    syn.add_argument("--base-rgb", default="168,120,106", dest="base_rgb")
    syn.add_argument("--amplitude", type=float, default=1.5)
    syn.add_argument("--noise-sigma", type=float, default=2.0, dest="noise_sigma")
    syn.add_argument("--drift-per-s", type=float, default=0.0, dest="drift_per_s")
    syn.add_argument("--sway-hz", type=float, default=0.0, dest="sway_hz")
    syn.add_argument("--sway-amplitude", type=float, default=0.0, dest="sway_amplitude")
    syn.add_argument("--texture-slope", type=float, default=0.25, dest="texture_slope")
    syn.add_argument("--bbox-jitter", type=float, default=0.0, dest="bbox_jitter")
    syn.add_argument("--landmark-jitter", type=float, default=0.0, dest="landmark_jitter")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--format", choices=["ppm_sequence", "raw_rgb24"], default="ppm_sequence")
    syn.add_argument("--out", required=True, help="output clip directory")
    syn.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RppgError as exc:
        json.dump({"code": exc.code, "error": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
