"""Command-line front end: localize, eval, sweep, synth."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io_formats
from .core import LocalizerConfig, validate_config
from .evaluation import Detection, DetectionSet, GroundTruthSet, mean_ap
from .stream import run_stream, score_stream, spans_from_scores


def _default_jobs() -> int:
    env = os.environ.get("OZTAL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _instances_to_detections(instances, entry, class_names):
    dets = []
    for inst in instances:
        start, end = inst.start_sec, inst.end_sec
        if end <= start:
            # single-timestep span: give it one timestep's worth of extent
            end = start + entry.stride / entry.fps
        dets.append(
            Detection(
                video_id=entry.video_id,
                label=class_names[inst.class_index],
                start=start,
                end=end,
                score=inst.confidence,
                emit=inst.emit_t * entry.stride / entry.fps,
            )
        )
    return dets


def _localize_manifest(manifest, bank, args, jobs):
    def one(entry):
        cfg = validate_config(
            LocalizerConfig(
                window_len=entry.window_len,
                memory_capacity=args.lq if args.lq > 0 else 1,
                fusion_threshold=args.theta,
                action_threshold=args.tau,
                logit_scale=args.scale,
                fps=entry.fps,
                stride=entry.stride,
            )
        )
        array = io_formats.read_feature_array(manifest, entry)
        instances, trace = run_stream(
            array,
            bank,
            cfg,
            video_id=entry.video_id,
            trace=args.trace is not None,
            use_memory=args.lq > 0 and not args.no_memory,
            use_refinement=not args.no_refine,
        )
        return _instances_to_detections(instances, entry, bank.class_names), trace

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, manifest.entries))
    else:
        results = [one(e) for e in manifest.entries]
    return results


def cmd_localize(args) -> int:
    manifest = io_formats.load_manifest(args.features)
    bank = io_formats.load_textbank(args.textbank + ".json", args.textbank + ".bin")
    jobs = args.jobs or _default_jobs()
    results = _localize_manifest(manifest, bank, args, jobs)

    detections = [d for dets, _ in results for d in dets]
    io_formats.write_predictions(detections, args.out)
    if args.trace:
        with open(args.trace, "w") as fh:
            for entry, (_, trace) in zip(manifest.entries, results):
                for step in trace or []:
                    fh.write(
                        json.dumps(
                            {
                                "video_id": entry.video_id,
                                "t": step.t,
                                "fusion_weight": step.fusion_weight,
                                "background": step.background,
                                "max_score": step.max_score,
                            }
                        )
                        + "\n"
                    )
    print(f"wrote {len(detections)} predictions to {args.out}")
    return 0


def _parse_float_list(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_grid(text: str):
    """Either a comma list ('5,10,20') or an inclusive range 'start:stop:step'."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        values = []
        v = start
        while v <= stop + 1e-9:
            values.append(round(v, 9))
            v += step
        return values
    return _parse_float_list(text)


def _check_labels(dets: DetectionSet, gt: GroundTruthSet) -> None:
    unknown = sorted(dets.labels() - set(gt.classes))
    if unknown:
        raise ValueError(f"predictions contain unknown class names: {', '.join(unknown)}")


def _restrict_to_classes(dets: DetectionSet, gt: GroundTruthSet, classes):
    keep = set(classes)
    sub_gt = GroundTruthSet(
        videos={
            vid: type(v)(v.duration, [s for s in v.segments if s.label in keep])
            for vid, v in gt.videos.items()
        },
        classes=[c for c in gt.classes if c in keep],
    )
    sub_dets = DetectionSet([d for d in dets.detections if d.label in keep])
    return sub_dets, sub_gt


def _print_map_table(thresholds, per_threshold, average) -> None:
    header = "".join(f"{t:>8.2f}" for t in thresholds) + f"{'Avg':>8}"
    row = "".join(f"{100 * per_threshold[t]:>8.2f}" for t in thresholds)
    row += f"{100 * average:>8.2f}"
    print(header)
    print(row)


def cmd_eval(args) -> int:
    dets = io_formats.read_predictions(args.preds)
    gt = io_formats.load_annotations(args.gt)
    _check_labels(dets, gt)
    thresholds = _parse_float_list(args.tiou)

    if args.splits:
        splits = json.loads(Path(args.splits).read_text())
        per_threshold = {t: 0.0 for t in thresholds}
        for split in splits:
            sub_dets, sub_gt = _restrict_to_classes(dets, gt, split)
            split_map, _ = mean_ap(sub_dets, sub_gt, thresholds)
            for t in thresholds:
                per_threshold[t] += split_map[t] / len(splits)
        average = float(np.mean([per_threshold[t] for t in thresholds]))
    else:
        per_threshold, average = mean_ap(dets, gt, thresholds)

    _print_map_table(thresholds, per_threshold, average)
    if args.json:
        payload = {
            "map": {f"{t:g}": per_threshold[t] for t in thresholds},
            "average": average,
        }
        Path(args.json).write_text(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_sweep(args) -> int:
    taus = _parse_grid(args.tau_grid)
    lqs = [int(v) for v in _parse_grid(args.lq_grid)]
    if not taus or not lqs:
        raise ValueError("empty grid")
    manifest = io_formats.load_manifest(args.features)
    bank = io_formats.load_textbank(args.textbank + ".json", args.textbank + ".bin")
    gt = io_formats.load_annotations(args.gt)
    thresholds = _parse_float_list(args.tiou)

    rows = []
    for lq in lqs:
        # score streams depend on (L_q, theta, scale) only; reuse across taus
        cached = []
        for entry in manifest.entries:
            cfg = LocalizerConfig(
                window_len=entry.window_len,
                memory_capacity=max(lq, 1),
                fusion_threshold=args.theta,
                logit_scale=args.scale,
                fps=entry.fps,
                stride=entry.stride,
            )
            array = io_formats.read_feature_array(manifest, entry)
            cached.append(
                (entry, score_stream(array, bank, cfg, use_memory=lq > 0))
            )
        for tau in taus:
            detections = []
            for entry, scores in cached:
                instances = spans_from_scores(scores, tau, entry.fps, entry.stride)
                detections.extend(
                    _instances_to_detections(instances, entry, bank.class_names)
                )
            per_threshold, average = mean_ap(
                DetectionSet(detections), gt, thresholds
            )
            rows.append(
                [tau, lq]
                + [100 * per_threshold[t] for t in thresholds]
                + [100 * average]
            )

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["tau", "lq"] + [f"map@{t:g}" for t in thresholds] + ["avg"]
        )
        for row in rows:
            writer.writerow([f"{v:.4f}" if isinstance(v, float) else v for v in row])
    print(f"wrote {len(rows)} grid points to {args.out}")
    return 0


def cmd_synth(args) -> int:
    from .synth import synth_dataset

    paths = synth_dataset(
        args.out,
        num_classes=args.classes,
        dim=args.dim,
        num_videos=args.videos,
        seed=args.seed,
        noise=args.noise,
        timesteps=args.timesteps,
        fps=args.fps,
        stride=args.stride,
    )
    print(f"wrote synthetic benchmark to {Path(args.out).resolve()}")
    for role, path in paths.items():
        print(f"  {role}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oztal",
        description="Streaming zero-shot action localization over precomputed embeddings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("localize", help="run the streaming localizer over a manifest")
    p.add_argument("--features", required=True, help="directory holding manifest.json")
    p.add_argument("--textbank", required=True, help="path prefix of textbank .json/.bin")
    p.add_argument("--out", required=True, help="prediction log to write (JSONL)")
    p.add_argument("--tau", type=float, default=10.0, help="action threshold")
    p.add_argument("--lq", type=int, default=20, help="memory capacity; 0 disables memory")
    p.add_argument("--theta", type=float, default=0.8, help="fusion threshold")
    p.add_argument("--scale", type=float, default=100.0, help="logit scale")
    p.add_argument("--trace", default=None, help="optional per-step diagnostics file")
    p.add_argument("--jobs", type=int, default=None, help="parallel videos (env OZTAL_JOBS)")
    p.add_argument("--no-memory", action="store_true", help="disable memory enhancement")
    p.add_argument("--no-refine", action="store_true", help="threshold raw class scores")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("eval", help="score a prediction log against ground truth")
    p.add_argument("--preds", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--tiou", default="0.3,0.4,0.5,0.6,0.7")
    p.add_argument("--splits", default=None, help="JSON list of class-name lists to average")
    p.add_argument("--json", default=None, help="write machine-readable results here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="grid sweep over tau and memory capacity")
    p.add_argument("--features", required=True)
    p.add_argument("--textbank", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--tau-grid", required=True, help="comma list or start:stop:step")
    p.add_argument("--lq-grid", required=True, help="comma list or start:stop:step; 0 = no memory")
    p.add_argument("--theta", type=float, default=0.8)
    p.add_argument("--scale", type=float, default=100.0)
    p.add_argument("--tiou", default="0.3,0.4,0.5,0.6,0.7")
    p.add_argument("--out", required=True, help="CSV to write")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="generate a seeded synthetic benchmark")
    p.add_argument("--out", required=True)
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--videos", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--timesteps", type=int, default=240)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
