import numpy as np
import pytest

from oracles import brute_force_ap
from oztal.evaluation import (
    Detection,
    DetectionSet,
    GroundTruthSet,
    GtSegment,
    VideoGroundTruth,
    average_precision,
    mean_ap,
    tiou,
)


class TestTiou:
    def test_identical(self):
        assert tiou((3, 7), (3, 7)) == 1.0

    def test_disjoint(self):
        assert tiou((0, 1), (2, 3)) == 0.0

    def test_partial(self):
        assert tiou((0, 10), (5, 15)) == pytest.approx(1 / 3)

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            tiou((5, 5), (0, 1))


def det(vid, start, end, score, label="a"):
    return Detection(video_id=vid, label=label, start=start, end=end, score=score)


class TestAveragePrecision:
    def test_single_match(self):
        ap = average_precision([det("v", 0, 9, 0.8)], {"v": [(0, 10)]}, 0.5)
        assert ap == 1.0

    def test_no_predictions(self):
        assert average_precision([], {"v": [(0, 10)]}, 0.5) == 0.0

    def test_mixed_ranking(self):
        # scores 0.9 TP, 0.8 FP, 0.7 TP over 2 GT -> (1 + 2/3) / 2
        preds = [
            det("v", 0, 10, 0.9),
            det("v", 50, 60, 0.8),
            det("v", 20, 30, 0.7),
        ]
        gt = {"v": [(0, 10), (20, 30)]}
        assert average_precision(preds, gt, 0.5) == pytest.approx(5 / 6)

    def test_empty_gt_with_preds_is_zero(self):
        assert average_precision([det("v", 0, 1, 0.5)], {}, 0.5) == 0.0

    def test_one_to_one_matching(self):
        # two predictions over the same single GT: second becomes FP
        preds = [det("v", 0, 10, 0.9), det("v", 0, 10, 0.8)]
        assert average_precision(preds, {"v": [(0, 10)]}, 0.5) == 1.0

    def test_invalid_threshold(self):
        with pytest.raises(ValueError):
            average_precision([], {"v": [(0, 1)]}, 0.0)


def make_gt(videos):
    classes = sorted({s.label for v in videos.values() for s in v.segments})
    return GroundTruthSet(videos=videos, classes=classes)


class TestMeanAp:
    def test_perfect_predictions(self):
        gt = make_gt(
            {
                "v1": VideoGroundTruth(100, [GtSegment(0, 10, "a"), GtSegment(20, 30, "b")]),
                "v2": VideoGroundTruth(50, [GtSegment(5, 15, "a")]),
            }
        )
        dets = DetectionSet(
            [
                det("v1", 0, 10, 0.3, "a"),
                det("v1", 20, 30, 0.9, "b"),
                det("v2", 5, 15, 0.1, "a"),
            ]
        )
        per_thr, avg = mean_ap(dets, gt, [0.3, 0.5, 0.7])
        assert all(v == 1.0 for v in per_thr.values())
        assert avg == 1.0

    def test_empty_detections(self):
        gt = make_gt({"v": VideoGroundTruth(10, [GtSegment(0, 5, "a")])})
        per_thr, avg = mean_ap(DetectionSet([]), gt, [0.5])
        assert per_thr[0.5] == 0.0 and avg == 0.0

    def test_empty_gt_rejected(self):
        gt = GroundTruthSet(videos={"v": VideoGroundTruth(10, [])}, classes=[])
        with pytest.raises(ValueError, match="empty ground truth"):
            mean_ap(DetectionSet([]), gt, [0.5])

    def test_cross_video_matches_impossible(self):
        # detection in v2 overlaps only v1's GT; must stay a false positive
        gt = make_gt({
            "v1": VideoGroundTruth(100, [GtSegment(0, 10, "a")]),
            "v2": VideoGroundTruth(100, []),
        })
        dets = DetectionSet([det("v2", 0, 10, 0.9, "a")])
        per_thr, _ = mean_ap(dets, gt, [0.5])
        assert per_thr[0.5] == 0.0


def random_instance(rng):
    n_videos = int(rng.integers(1, 6))
    n_classes = int(rng.integers(1, 4))
    labels = [f"cls{j}" for j in range(n_classes)]
    videos = {}
    preds = []
    for v in range(n_videos):
        vid = f"v{v}"
        segs = []
        for _ in range(int(rng.integers(0, 5))):
            start = float(rng.uniform(0, 80))
            segs.append(GtSegment(start, start + float(rng.uniform(1, 15)),
                                  labels[int(rng.integers(0, n_classes))]))
        videos[vid] = VideoGroundTruth(100, segs)
        for _ in range(int(rng.integers(0, 5))):
            start = float(rng.uniform(0, 80))
            preds.append(det(vid, start, start + float(rng.uniform(1, 15)),
                             float(rng.uniform(0, 1)),
                             labels[int(rng.integers(0, n_classes))]))
    if not any(v.segments for v in videos.values()):
        videos["v0"].segments.append(GtSegment(0, 5, labels[0]))
    return GroundTruthSet(videos=videos, classes=labels), DetectionSet(preds)


class TestOracleEquivalence:
    def test_random_instances_match_brute_force(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            gt, dets = random_instance(rng)
            thr = float(rng.choice([0.3, 0.5, 0.7]))
            per_thr, _ = mean_ap(dets, gt, [thr])
            aps = []
            for label in gt.classes:
                gts = [
                    (vid, s.start, s.end)
                    for vid, v in gt.videos.items()
                    for s in v.segments
                    if s.label == label
                ]
                if not gts:
                    continue
                preds = [
                    (d.video_id, d.start, d.end, d.score)
                    for d in dets.detections
                    if d.label == label
                ]
                aps.append(brute_force_ap(preds, gts, thr))
            assert per_thr[thr] == pytest.approx(float(np.mean(aps)), abs=1e-9)

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(12)
        thresholds = [0.3, 0.4, 0.5, 0.6, 0.7]
        for _ in range(30):
            gt, dets = random_instance(rng)
            per_thr, _ = mean_ap(dets, gt, thresholds)
            values = [per_thr[t] for t in thresholds]
            assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_score_scale_invariance(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            gt, dets = random_instance(rng)
            scaled = DetectionSet(
                [
                    Detection(d.video_id, d.label, d.start, d.end, d.score * 37.5)
                    for d in dets.detections
                ]
            )
            assert mean_ap(dets, gt, [0.5]) == mean_ap(scaled, gt, [0.5])

    def test_permutation_invariance(self):
        rng = np.random.default_rng(14)
        for _ in range(30):
            gt, dets = random_instance(rng)
            shuffled = list(dets.detections)
            rng.shuffle(shuffled)
            assert mean_ap(dets, gt, [0.4]) == mean_ap(DetectionSet(shuffled), gt, [0.4])
