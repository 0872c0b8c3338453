"""Command-line entry points: ``ozx extract`` and ``ozx textbank``."""

from __future__ import annotations

import argparse
import sys

from .encoders import get_encoder, list_encoders
from .extract import extract_video_features, write_dataset_manifest
from .textbank import build_textbank, load_descriptions


def cmd_extract(args) -> int:
    encoder = get_encoder(args.encoder)
    entries = []
    for video in args.videos:
        entry = extract_video_features(
            video,
            args.out,
            encoder,
            window_len=args.window,
            stride=args.stride,
            expect_dim=args.dim,
        )
        entries.append(entry)
        print(f"extracted {entry['video_id']}: T={entry['T']} D={entry['D']}")
    manifest = write_dataset_manifest(args.out, entries)
    print(f"wrote {manifest}")
    return 0


def cmd_textbank(args) -> int:
    encoder = get_encoder(args.encoder)
    descriptions = load_descriptions(args.descriptions)
    class_names = args.classes.split(",") if args.classes else None
    json_path = args.out.with_suffix(".json") if args.out.suffix else args.out.parent / (args.out.name + ".json")
    bin_path = json_path.with_suffix(".bin")
    names = build_textbank(
        descriptions,
        encoder,
        json_path,
        bin_path,
        class_names=class_names,
        fixed_template=args.fixed_template,
    )
    print(f"wrote {len(names)}+2 text embeddings to {bin_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ozx",
        description="Extract video features and text banks for the oztal localizer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="encode videos into a feature manifest")
    p.add_argument("--videos", nargs="+", required=True, help="video files to encode")
    p.add_argument("--out", type=_path, required=True, help="output dataset directory")
    p.add_argument(
        "--encoder", default="hash-image-64",
        help=f"encoder id <name>-<D>; names: {', '.join(list_encoders())}",
    )
    p.add_argument("--window", type=int, default=8, help="frames per sliding window")
    p.add_argument("--stride", type=int, default=1, help="frames between timesteps")
    p.add_argument("--dim", type=int, default=None, help="fail unless the encoder produces this D")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("textbank", help="encode class descriptions and prompts")
    p.add_argument("--descriptions", type=_path, required=True, help="descriptions JSON")
    p.add_argument("--out", type=_path, required=True, help="output path prefix (.json/.bin)")
    p.add_argument(
        "--encoder", default="hash-image-64",
        help=f"encoder id <name>-<D>; names: {', '.join(list_encoders())}",
    )
    p.add_argument("--classes", default=None, help="comma-separated class order")
    p.add_argument(
        "--fixed-template", action="store_true",
        help="ignore per-class descriptions and use the fixed sentence per class",
    )
    p.set_defaults(func=cmd_textbank)
    return parser


def _path(value):
    from pathlib import Path

    return Path(value)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
