import json
import pytest

from sample_clip import SAMPLE_VIDEO


@pytest.fixture
def sample_video():
    assert SAMPLE_VIDEO.is_file()
    return SAMPLE_VIDEO


@pytest.fixture
def descriptions_file(tmp_path):
    path = tmp_path / "descriptions.json"
    path.write_text(json.dumps({
        "foreground": "a scene depicting a person engaging in some activity",
        "background": "a scene with no particular activity happening",
        "classes": {
            "HighJump": "an athlete runs up and leaps over a horizontal bar",
            "Diving": "a person jumps from a platform and enters the water",
            "Archery": "a person draws a bow and shoots an arrow at a target",
        },
    }))
    return path
