import numpy as np
import pytest

from nhchain.topology import (
    BlochSampler,
    gap_classify,
    tridiag_bloch_det,
    tridiag_det_winding,
    winding_number,
)

from conftest import cnormal


def hn_sampler(t_l, t_r, t_d=0.0):
    return BlochSampler(lambda k: t_d + t_l * np.exp(1j * k) + t_r * np.exp(-1j * k))


class TestWindingNumber:
    def test_hermitian_zero(self):
        res = winding_number(BlochSampler(lambda k: 2 * np.cos(k)), 3.0j)
        assert res.w == 0

    def test_hn_inside_ellipse(self):
        res = winding_number(hn_sampler(1.0, 2.0), 0.0)
        assert res.w == -1
        # against a brute phase summation on a fine fixed grid
        ks = np.linspace(-np.pi, np.pi, 4097)
        dets = np.exp(1j * ks) + 2 * np.exp(-1j * ks)
        brute = np.angle(dets[1:] / dets[:-1]).sum() / (2 * np.pi)
        assert round(brute) == -1

    def test_orientation_flips_with_dominant_hop(self):
        assert winding_number(hn_sampler(2.0, 1.0), 0.0).w == 1

    def test_balanced_no_point_gap(self, rng):
        t_r = np.exp(1j * np.pi / 4)
        samp = hn_sampler(1.0, t_r)
        seg_dir = np.sqrt(t_r)
        for _ in range(25):
            z = cnormal(rng, scale=2.0)
            # keep the probe away from the spectral segment
            if min(abs(z - seg_dir * x) for x in np.linspace(-2, 2, 81)) < 0.1:
                continue
            assert winding_number(samp, z).w == 0

    def test_on_spectrum_rejected(self):
        with pytest.raises(ValueError, match="spectrum"):
            winding_number(hn_sampler(1.0, 1.0), 0.0)

    def test_sample_floor(self):
        with pytest.raises(ValueError, match="64"):
            winding_number(hn_sampler(1.0, 2.0), 0.0, n_samples=8)

    def test_converged_under_doubling(self):
        res = winding_number(hn_sampler(1.0, 2.0), 0.5 + 0.2j, n_samples=256)
        res2 = winding_number(hn_sampler(1.0, 2.0), 0.5 + 0.2j, n_samples=512)
        assert res.w == res2.w

    def test_constant_inside_component(self):
        samp = hn_sampler(1.0, 2.0)
        for probe in (0.0, 0.3 + 0.4j, -0.5 - 0.2j):
            assert winding_number(samp, probe).w == -1
        for probe in (4.0, -4.0, 3.5j):
            assert winding_number(samp, probe).w == 0

    def test_periodicity_check(self):
        assert hn_sampler(1.0, 2.0).periodicity_defect() < 1e-12


class TestGapClassify:
    def test_unbalanced_point_gap(self):
        verdict, witness = gap_classify(hn_sampler(1.0, 2.0))
        assert verdict == "point-gap"
        assert abs(witness.w) >= 1

    def test_balanced_line_gap(self):
        verdict, witness = gap_classify(hn_sampler(1.0, np.exp(1j * np.pi / 4)))
        assert verdict == "line-gap-consistent"

    def test_nonwinding_family_line_gap(self):
        from nhchain.models1d import bloch_1d, nonwinding_family

        p = nonwinding_family(1, 1.0, 0.6, 0.3, 0.7, -0.4)
        verdict, _ = gap_classify(BlochSampler(lambda k: bloch_1d(p, k)))
        assert verdict == "line-gap-consistent"

    def test_ssh_block_sampler(self):
        tl1, tr1, tl2, tr2 = 1.0, 2.0, 3.0, 4.0

        def block(k):
            return np.array([[0.0, tl1 + tr2 * np.exp(-1j * k)],
                             [tr1 + tl2 * np.exp(1j * k), 0.0]])

        verdict, witness = gap_classify(BlochSampler(block, dim=2))
        assert verdict == "point-gap"

    def test_balanced_ssh_block_line_gap(self):
        # |tr1 tr2| = |tl1 tl2| keeps the determinant loop from winding
        tl1, tr1, tl2, tr2 = -1j, 0.5, 4.0, 8.0

        def block(k):
            return np.array([[0.0, tl1 + tr2 * np.exp(-1j * k)],
                             [tr1 + tl2 * np.exp(1j * k), 0.0]])

        verdict, _ = gap_classify(BlochSampler(block, dim=2))
        assert verdict == "line-gap-consistent"

    def test_long_range_chains_always_point_gapped(self):
        # one-way hopping and the mixed +2/-1 chain wind even at equal
        # hopping magnitudes
        uni = BlochSampler(lambda k: np.exp(1j * k) + 2.0 * np.exp(2j * k))
        verdict, witness = gap_classify(uni)
        assert verdict == "point-gap" and abs(witness.w) >= 1
        mixed = BlochSampler(lambda k: np.exp(2j * k) + np.exp(-1j * k))
        verdict, witness = gap_classify(mixed)
        assert verdict == "point-gap" and abs(witness.w) >= 1


class TestTridiagDet:
    def test_single_row(self):
        k = 0.7
        a = 1.0 * np.exp(-1j * k) + 5.0 * np.exp(1j * k)
        assert tridiag_bloch_det(1.0, 5.0, k, 1) == pytest.approx(a)

    def test_two_rows_hermitian_zero(self):
        assert tridiag_bloch_det(1.0, 1.0, 0.0, 2) == pytest.approx(0.0)

    def test_matches_dense_determinant(self, rng):
        for _ in range(4):
            t_l, t_r = cnormal(rng), cnormal(rng)
            k = float(rng.uniform(-np.pi, np.pi))
            n = 5
            a = t_l * np.exp(-1j * k) + t_r * np.exp(1j * k)
            b = t_r + t_l * np.exp(1j * k)
            c = t_l + t_r * np.exp(-1j * k)
            M = np.diag(np.full(n, a)) + np.diag(np.full(n - 1, b), 1) + np.diag(np.full(n - 1, c), -1)
            assert abs(tridiag_bloch_det(t_l, t_r, k, n) - np.linalg.det(M)) < 1e-10 * abs(np.linalg.det(M)) + 1e-10


class TestTridiagWinding:
    def test_generic_winds(self):
        res, flag = tridiag_det_winding(1.0, 5.0, 3)
        assert abs(res.w) >= 1
        assert flag is False

    def test_phase_ratio_never_winds(self):
        for n_rows in (2, 3, 5, 8):
            res, flag = tridiag_det_winding(1.0, np.exp(1j * 0.6), n_rows)
            assert flag is True
            assert res.w == 0

    def test_hermitian_curve_degenerate(self):
        res, flag = tridiag_det_winding(1.0, 1.0, 4)
        assert res.w == 0
        assert flag is True
