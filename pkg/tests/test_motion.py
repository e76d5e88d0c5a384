import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcttrack.motion import (
    SCALE_MAX,
    SCALE_MIN,
    MotionParams,
    ObjectState,
    ParticleSet,
    clamp_states,
    map_estimate,
    propagate,
)


class TestPropagate:
    def test_tiny_sigmas_collapse_onto_prev(self):
        prev = ObjectState(50.0, 40.0, 1.1)
        p = propagate(prev, MotionParams(1e-9, 1e-9, 1e-9, 50), np.random.default_rng(0))
        assert np.max(np.abs(p.states - prev.as_array())) < 1e-6

    def test_sample_std(self):
        params = MotionParams(6.0, 3.0, 0.02, 100_000)
        p = propagate(ObjectState(0.0, 0.0, 1.0), params, np.random.default_rng(1))
        std = p.states.std(axis=0)
        np.testing.assert_allclose(std, [6.0, 3.0, 0.02], rtol=0.02)

    def test_seeded(self):
        prev = ObjectState(10.0, 10.0)
        a = propagate(prev, MotionParams(), np.random.default_rng(2))
        b = propagate(prev, MotionParams(), np.random.default_rng(2))
        np.testing.assert_array_equal(a.states, b.states)
        assert len(a) == 200

    @given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3), st.floats(0.01, 30),
           st.integers(0, 2**32 - 1))
    def test_states_stay_valid_at_edges(self, x, y, s, seed):
        params = MotionParams(20.0, 20.0, 2.0, 64)
        p = propagate(ObjectState(x, y, s), params, np.random.default_rng(seed),
                      frame_size=(120, 160), box_size=(32, 24))
        xs, ys, ss = p.states.T
        assert np.all(ss > 0) and np.all(ss >= SCALE_MIN) and np.all(ss <= SCALE_MAX)
        assert np.all(xs - ss * 16 >= -0.5 - 1e-9) and np.all(xs + ss * 16 <= 159.5 + 1e-9)
        assert np.all(ys - ss * 12 >= -0.5 - 1e-9) and np.all(ys + ss * 12 <= 119.5 + 1e-9)


class TestClamp:
    def test_inside_is_untouched(self):
        states = np.array([[50.0, 40.0, 1.0]])
        np.testing.assert_array_equal(clamp_states(states, (100, 100), (20, 20)), states)

    def test_pushes_box_back_inside(self):
        out = clamp_states(np.array([[-10.0, 500.0, 1.0]]), (100, 200), (20, 10))
        assert out[0].tolist() == [9.5, 94.5, 1.0]

    def test_scale_limited_by_frame(self):
        out = clamp_states(np.array([[0.0, 0.0, 10.0]]), (100, 200), (20, 20))
        assert out[0, 2] == 5.0


class TestMapEstimate:
    def test_single(self):
        p = ParticleSet(np.array([[1.0, 2.0, 1.5]]), np.array([0.3]))
        assert map_estimate(p) == ObjectState(1.0, 2.0, 1.5)

    def test_first_max_wins(self):
        states = np.array([[0.0, 0, 1], [1.0, 0, 1], [2.0, 0, 1]])
        p = ParticleSet(states, np.array([0.1, 0.9, 0.9]))
        assert map_estimate(p).x == 1.0

    @given(st.lists(st.floats(0.001, 0.999), min_size=1, max_size=50), st.floats(0.1, 10),
           st.floats(-5, 5))
    def test_invariant_under_increasing_maps(self, scores, a, b):
        scores = np.array(scores)
        states = np.column_stack([np.arange(len(scores)), np.zeros(len(scores)),
                                  np.ones(len(scores))])
        base = map_estimate(ParticleSet(states, scores))
        for transformed in (np.exp(scores), a * scores + b, np.log(scores), scores**3):
            # skip maps that merge distinct scores in floating point
            if len(np.unique(transformed)) == len(np.unique(scores)):
                assert map_estimate(ParticleSet(states, transformed)) == base

    def test_needs_scores(self):
        with pytest.raises(ValueError):
            map_estimate(ParticleSet(np.zeros((2, 3))))

    def test_scores_validated(self):
        with pytest.raises(ValueError):
            ParticleSet(np.zeros((2, 3)), np.array([0.1]))
        with pytest.raises(ValueError):
            ParticleSet(np.zeros((1, 3)), np.array([np.nan]))


class TestTypes:
    def test_state_round_trip(self):
        s = ObjectState(1.5, -2.0, 0.7)
        assert ObjectState.from_array(s.as_array()) == s

    @pytest.mark.parametrize("s", [0.0, -1.0])
    def test_scale_positive(self, s):
        with pytest.raises(ValueError):
            ObjectState(0, 0, s)

    def test_params_validated(self):
        with pytest.raises(ValueError):
            MotionParams(sigma_x=0.0)
        with pytest.raises(ValueError):
            MotionParams(v=0)
