"""Text-bank construction from class descriptions."""

from __future__ import annotations

import json
from pathlib import Path

from .formats import write_textbank

FIXED_TEMPLATE = "this is a video of action {cls}"


def load_descriptions(path) -> dict:
    """Description JSON: {"foreground": str, "background": str,
    "classes": {name: description}}."""
    data = json.loads(Path(path).read_text())
    for key in ("foreground", "background"):
        if not data.get(key):
            raise ValueError(f"descriptions file missing {key!r} entry")
    if not isinstance(data.get("classes"), dict) or not data["classes"]:
        raise ValueError("descriptions file missing non-empty 'classes' mapping")
    return data


def build_textbank(
    descriptions: dict,
    encoder,
    json_path,
    bin_path,
    class_names=None,
    fixed_template: bool = False,
) -> list:
    """Encode K class descriptions plus the foreground/background prompts.

    ``class_names`` pins the class order (and is validated against the
    descriptions); by default classes appear in file order. With
    ``fixed_template`` every class description is replaced by the fixed
    sentence built from its name. Returns the class names written.
    """
    available = descriptions["classes"]
    names = list(class_names) if class_names is not None else list(available)
    if not fixed_template:
        missing = [n for n in names if n not in available]
        if missing:
            raise ValueError(f"no description for class {missing[0]!r}")
        descs = [available[n] for n in names]
    else:
        descs = [FIXED_TEMPLATE.format(cls=n) for n in names]
    texts = descs + [descriptions["foreground"], descriptions["background"]]
    matrix = encoder.encode_texts(texts)
    write_textbank(
        json_path,
        bin_path,
        names,
        descs,
        descriptions["foreground"],
        descriptions["background"],
        matrix,
    )
    return names
