import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.fft import dctn, idctn

from dcttrack.dctcore import dct3, idct3
from dcttrack.representation import (
    CompactCoeffs,
    TruncationSpec,
    discarded_energy,
    last_slice_error,
    reconstruct,
    reconstruct_slice,
    truncate,
)


def zero_pad_oracle(c, spec):
    padded = np.zeros_like(c)
    du, dv, dw = spec.deltas
    padded[: du + 1, : dv + 1, : dw + 1] = c[: du + 1, : dv + 1, : dw + 1]
    return idctn(padded, norm="ortho")


@st.composite
def cases(draw, max_side=8):
    shape = tuple(draw(st.integers(1, max_side)) for _ in range(3))
    spec = TruncationSpec(*(draw(st.integers(0, n - 1)) for n in shape))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).normal(size=shape), spec


class TestTruncationSpec:
    def test_block_shape(self):
        assert TruncationSpec(2, 3, 4).block_shape == (3, 4, 5)

    @pytest.mark.parametrize("bad", [(-1, 0, 0), (0, 1.5, 0)])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            TruncationSpec(*bad)

    def test_out_of_range_for_tensor(self):
        with pytest.raises(ValueError):
            truncate(np.zeros((3, 3, 3)), TruncationSpec(3, 0, 0))

    def test_clamp(self):
        assert TruncationSpec(9, 9, 15).clamp((30, 30, 4)) == TruncationSpec(9, 9, 3)


class TestTruncate:
    def test_lossless(self):
        c = dct3(np.random.default_rng(0).normal(size=(4, 5, 6)))
        cc = truncate(c, TruncationSpec.lossless(c.shape))
        assert np.max(np.abs(reconstruct(cc) - idct3(c))) < 1e-9

    def test_constant_tensor_needs_only_dc(self):
        f = np.full((5, 4, 3), 0.7)
        cc = truncate(dct3(f), TruncationSpec(0, 0, 0))
        assert np.max(np.abs(reconstruct(cc) - f)) < 1e-9

    def test_residual_equals_discarded_8x8x8(self):
        f = np.random.default_rng(1).normal(size=(8, 8, 8))
        c = dct3(f)
        spec = TruncationSpec(3, 3, 3)
        err = np.linalg.norm(f - reconstruct(truncate(c, spec)))
        assert err == pytest.approx(np.sqrt(discarded_energy(c, spec)), abs=1e-8)

    def test_kept_block_is_a_copy(self):
        c = np.ones((3, 3, 3))
        cc = truncate(c, TruncationSpec(1, 1, 1))
        c[0, 0, 0] = 9.0
        assert cc.kept[0, 0, 0] == 1.0


class TestReconstruct:
    def test_all_kept(self):
        f = np.random.default_rng(2).normal(size=(3, 4, 5))
        cc = truncate(dct3(f), TruncationSpec(2, 3, 4))
        assert np.max(np.abs(reconstruct(cc) - f)) < 1e-9

    def test_zero_block(self):
        cc = truncate(dct3(np.zeros((4, 4, 4))), TruncationSpec(1, 2, 1))
        assert not np.any(reconstruct(cc))

    def test_zero_pad_oracle_4x4x4(self):
        c = dctn(np.random.default_rng(3).normal(size=(4, 4, 4)), norm="ortho")
        spec = TruncationSpec(1, 2, 0)
        assert np.max(np.abs(reconstruct(truncate(c, spec)) - zero_pad_oracle(c, spec))) < 1e-10

    @given(cases())
    def test_matches_zero_pad_oracle(self, case):
        c, spec = case
        assert np.max(np.abs(reconstruct(truncate(c, spec)) - zero_pad_oracle(c, spec))) < 1e-10

    @given(cases())
    def test_slice_matches_full_reconstruction(self, case):
        c, spec = case
        cc = truncate(c, spec)
        full = reconstruct(cc)
        for z in range(c.shape[2]):
            np.testing.assert_allclose(reconstruct_slice(cc, z), full[:, :, z], atol=1e-12)

    @given(cases(), st.floats(-3, 3), st.floats(-3, 3))
    def test_linear(self, case, a, b):
        c1, spec = case
        c2 = np.random.default_rng(7).normal(size=c1.shape)
        cc1, cc2 = truncate(c1, spec), truncate(c2, spec)
        combined = reconstruct(a * cc1 + b * cc2)
        expected = a * reconstruct(cc1) + b * reconstruct(cc2)
        assert np.max(np.abs(combined - expected)) < 1e-9

    def test_mismatched_specs_do_not_add(self):
        c = np.zeros((3, 3, 3))
        with pytest.raises(ValueError):
            truncate(c, TruncationSpec(1, 1, 1)) + truncate(c, TruncationSpec(0, 1, 1))

    def test_block_shape_checked(self):
        with pytest.raises(ValueError):
            CompactCoeffs(TruncationSpec(1, 1, 1), (3, 3, 3), np.zeros((2, 2, 1)))


class TestLastSliceError:
    def test_lossless_true_slice(self):
        f = np.random.default_rng(4).random((5, 5, 4))
        cc = truncate(dct3(f), TruncationSpec.lossless(f.shape))
        assert last_slice_error(cc, f[:, :, -1]) < 1e-8

    def test_tau_equals_reconstruction(self):
        f = np.random.default_rng(5).random((5, 5, 4))
        cc = truncate(dct3(f), TruncationSpec(1, 2, 1))
        assert last_slice_error(cc, reconstruct(cc)[:, :, -1]) == pytest.approx(0.0, abs=1e-14)

    def test_direct_norm_oracle(self):
        rng = np.random.default_rng(6)
        f = rng.normal(size=(4, 4, 3))
        tau = rng.normal(size=(4, 4))
        spec = TruncationSpec(1, 1, 1)
        recon = zero_pad_oracle(dctn(f, norm="ortho"), spec)[:, :, -1]
        expected = np.sqrt(np.sum((tau - recon) ** 2))
        assert last_slice_error(truncate(dct3(f), spec), tau) == pytest.approx(expected, abs=1e-10)

    def test_shape_mismatch(self):
        cc = truncate(np.zeros((3, 3, 2)), TruncationSpec(0, 0, 0))
        with pytest.raises(ValueError):
            last_slice_error(cc, np.zeros((3, 4)))


class TestFidelity:
    @given(cases())
    def test_residual_energy_identity(self, case):
        f, spec = case
        c = dct3(f)
        residual = np.sum((f - reconstruct(truncate(c, spec))) ** 2)
        dropped = discarded_energy(c, spec)
        assert residual == pytest.approx(dropped, rel=1e-8, abs=1e-20)

    @given(cases(), st.integers(0, 2))
    def test_monotone_in_each_delta(self, case, axis):
        f, spec = case
        c = dct3(f)
        deltas = list(spec.deltas)
        errors = []
        for d in range(f.shape[axis]):
            deltas[axis] = d
            errors.append(np.linalg.norm(f - reconstruct(truncate(c, TruncationSpec(*deltas)))))
        assert all(b <= a + 1e-10 for a, b in zip(errors, errors[1:]))

    @given(cases(), st.integers(0, 1))
    def test_last_slice_monotone_when_time_is_kept(self, case, axis):
        f, spec = case
        c = dct3(f)
        deltas = [spec.delta_u, spec.delta_v, f.shape[2] - 1]
        errors = []
        for d in range(f.shape[axis]):
            deltas[axis] = d
            errors.append(last_slice_error(truncate(c, TruncationSpec(*deltas)), f[:, :, -1]))
        assert all(b <= a + 1e-10 for a, b in zip(errors, errors[1:]))

    def test_last_slice_error_alone_is_not_monotone(self):
        # one frame's error mixes kept and dropped temporal terms, so a
        # larger spatial block can fit that frame worse
        f = np.array([[[0.12573022, -0.13210486]],
                      [[0.64042265, 0.10490012]],
                      [[-0.53566937, 0.36159505]]])
        c = dct3(f)
        errs = [last_slice_error(truncate(c, TruncationSpec(d, 0, 0)), f[:, :, -1])
                for d in range(3)]
        assert max(b - a for a, b in zip(errs, errs[1:])) > 1e-3
