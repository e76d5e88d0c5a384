import numpy as np
import pytest

from dcttrack.metrics import load_sequence, load_truth
from dcttrack.synthetic import SyntheticSpec, make_sequence, write_sequence


def target_box(spec, i):
    x0 = spec.start[0] + spec.velocity[0] * i
    y0 = spec.start[1] + spec.velocity[1] * i
    return slice(y0, y0 + spec.size), slice(x0, x0 + spec.size)


class TestMakeSequence:
    def test_bitwise_reproducible(self):
        a, ta = make_sequence(SyntheticSpec(frames=8), seed=3)
        b, tb = make_sequence(SyntheticSpec(frames=8), seed=3)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        np.testing.assert_array_equal(ta, tb)

    def test_seed_changes_content(self):
        a, _ = make_sequence(SyntheticSpec(frames=2), seed=0)
        b, _ = make_sequence(SyntheticSpec(frames=2), seed=1)
        assert not np.array_equal(a[0], b[0])

    def test_truth_follows_trajectory(self):
        spec = SyntheticSpec()
        frames, truth = make_sequence(spec)
        assert len(frames) == spec.frames and truth.shape == (spec.frames, 5)
        assert frames[0].dtype == np.uint8 and frames[0].shape == (spec.height, spec.width)
        i = np.arange(spec.frames)
        np.testing.assert_array_equal(truth[:, 0], i)
        np.testing.assert_array_equal(truth[:, 1], 40 + 4 * i + 15.5)
        np.testing.assert_array_equal(truth[:, 2], 40 + 3 * i + 15.5)
        assert np.all(truth[:, 3:] == 32)

    def test_target_pixels_move_with_truth(self):
        spec = SyntheticSpec(sensor_noise=0.0)
        frames, _ = make_sequence(spec)
        first = frames[0][target_box(spec, 0)]
        for i in (1, 17, 49):
            np.testing.assert_array_equal(frames[i][target_box(spec, i)], first)

    @pytest.mark.parametrize("occluder", ["stripes", "flat", "noise"])
    def test_occlusion_hides_target(self, occluder):
        spec = SyntheticSpec(occlusion=True, occluder=occluder, sensor_noise=0.0)
        frames, _ = make_sequence(spec)
        plain, _ = make_sequence(SyntheticSpec(sensor_noise=0.0))
        texture = plain[0][target_box(spec, 0)]
        for i in range(spec.frames):
            shown = frames[i][target_box(spec, i)]
            if 20 <= i <= 25:
                # no target pixel survives: the whole box is covered
                assert np.mean(shown == texture) < 0.05
            else:
                np.testing.assert_array_equal(shown, texture)

    def test_illumination_ramp(self):
        spec = SyntheticSpec(frames=10, illumination_drop=0.5, sensor_noise=0.0)
        frames, _ = make_sequence(spec)
        base, _ = make_sequence(SyntheticSpec(frames=10, sensor_noise=0.0))
        ratio = frames[9].astype(float).sum() / base[9].astype(float).sum()
        assert ratio == pytest.approx(0.5, abs=0.01)
        np.testing.assert_array_equal(frames[0], base[0])

    def test_trajectory_must_fit(self):
        with pytest.raises(ValueError):
            make_sequence(SyntheticSpec(frames=200))

    @pytest.mark.parametrize("kwargs", [{"occluder": "wall"}, {"frames": 0},
                                        {"illumination_drop": 1.5}])
    def test_spec_validated(self, kwargs):
        with pytest.raises(ValueError):
            SyntheticSpec(**kwargs)


class TestWriteSequence:
    def test_round_trip(self, tmp_path):
        frames, truth = make_sequence(SyntheticSpec(frames=5), seed=4)
        write_sequence(frames, truth, tmp_path / "seq")
        loaded = list(load_sequence(tmp_path / "seq"))
        assert all(np.array_equal(a, b) for a, b in zip(frames, loaded))
        records = load_truth(tmp_path / "seq" / "groundtruth.txt")
        assert [(r.frame, r.cx, r.cy, r.w, r.h) for r in records] == [tuple(row) for row in truth]

    def test_truth_file_is_plain_text(self, tmp_path):
        frames, truth = make_sequence(SyntheticSpec(frames=2))
        write_sequence(frames, truth, tmp_path)
        assert (tmp_path / "groundtruth.txt").read_text().splitlines()[1] == "0 55.5 55.5 32.0 32.0"
