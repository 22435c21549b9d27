"""Tests for constellations, mapping and soft (de)mapping."""

import numpy as np
import pytest

from epturbo.modem import (build_constellation, demap_extrinsic, hard_demap,
                           llr_from_logpmf, map_bits, prior_from_llr,
                           priors_from_pmf, uniform_priors)

KINDS = ["bpsk", "8psk", "16qam", "64qam"]


class TestConstellations:
    @pytest.mark.parametrize("kind", KINDS)
    def test_unit_energy_by_enumeration(self, kind):
        cst = build_constellation(kind)
        es = sum(abs(a) ** 2 for a in cst.points) / cst.M
        assert es == pytest.approx(1.0, abs=1e-12)
        assert cst.Es == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("kind,m,q", [("bpsk", 2, 1), ("8psk", 8, 3),
                                          ("16qam", 16, 4), ("64qam", 64, 6)])
    def test_sizes(self, kind, m, q):
        cst = build_constellation(kind)
        assert (cst.M, cst.Q) == (m, q)
        assert cst.labels.shape == (m, q)

    @pytest.mark.parametrize("kind", KINDS)
    def test_labels_unique(self, kind):
        cst = build_constellation(kind)
        weights = 1 << np.arange(cst.Q - 1, -1, -1)
        ints = cst.labels @ weights
        assert len(set(ints.tolist())) == cst.M

    def test_psk_ring_gray(self):
        """Adjacent 8-PSK phases differ in exactly one label bit."""
        cst = build_constellation("8psk")
        order = np.argsort(np.angle(cst.points) % (2 * np.pi))
        ring = cst.labels[order]
        for i in range(8):
            assert np.sum(ring[i] ^ ring[(i + 1) % 8]) == 1

    def test_16qam_points_on_grid(self):
        cst = build_constellation("16qam")
        grid = np.array([a + 1j * b for a in (-3, -1, 1, 3)
                         for b in (-3, -1, 1, 3)]) / np.sqrt(10)
        assert np.allclose(np.sort_complex(cst.points), np.sort_complex(grid))

    def test_qam_axis_gray(self):
        """Nearest horizontal/vertical 64-QAM neighbours differ in one bit."""
        cst = build_constellation("64qam")
        d = np.min(np.abs(cst.points[0] - np.delete(cst.points, 0)))
        for i in range(cst.M):
            for j in range(cst.M):
                if abs(abs(cst.points[i] - cst.points[j]) - d) < 1e-9:
                    assert np.sum(cst.labels[i] ^ cst.labels[j]) == 1

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            build_constellation("qpsk64")


class TestMapping:
    def test_bpsk_example(self):
        cst = build_constellation("bpsk")
        u = map_bits(np.array([0, 1, 1]), cst)
        assert np.allclose(u, [1, -1, -1])

    def test_16qam_all_zero_block(self):
        cst = build_constellation("16qam")
        u = map_bits(np.zeros(4, dtype=np.uint8), cst)
        idx = np.nonzero((cst.labels == 0).all(axis=1))[0][0]
        assert u[0] == cst.points[idx]

    @pytest.mark.parametrize("kind", KINDS)
    def test_round_trip_through_hard_demap(self, kind):
        cst = build_constellation(kind)
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, size=cst.Q * 50).astype(np.uint8)
        assert np.array_equal(hard_demap(map_bits(bits, cst), cst), bits)

    def test_rejects_misaligned_bits(self):
        with pytest.raises(ValueError):
            map_bits(np.zeros(5, dtype=np.uint8), build_constellation("16qam"))


class TestPriors:
    def test_uniform_moments(self):
        cst = build_constellation("16qam")
        pr = uniform_priors(3, cst)
        assert np.allclose(pr.pmf.sum(axis=1), 1.0, atol=1e-12)
        assert np.allclose(pr.mean, 0.0, atol=1e-12)
        assert np.allclose(pr.var, 1.0, atol=1e-12)

    def test_bpsk_llr5_example(self):
        """L = 5 (clip value): pmf = (sigma(5), 1-sigma(5)), exact moments."""
        cst = build_constellation("bpsk")
        pr = prior_from_llr(np.array([[5.0]]), cst)
        p0 = 1.0 / (1.0 + np.exp(-5.0))
        assert pr.pmf[0, 0] == pytest.approx(p0, abs=1e-12)       # ~0.9933
        m = p0 - (1 - p0)                                          # ~0.9866
        assert pr.mean[0] == pytest.approx(m, abs=1e-12)
        assert pr.var[0] == pytest.approx(1 - m ** 2, abs=1e-12)   # ~0.0266
        assert abs(pr.mean[0] - 0.9866) < 1e-4
        assert abs(pr.var[0] - 0.0266) < 1e-4

    def test_16qam_confident_llrs_concentrate(self):
        cst = build_constellation("16qam")
        pr = prior_from_llr(np.full((1, 4), 5.0), cst)
        idx = np.nonzero((cst.labels == 0).all(axis=1))[0][0]
        assert pr.pmf[0].argmax() == idx
        assert pr.pmf[0, idx] > 0.97
        assert abs(pr.mean[0] - cst.points[idx]) < 0.05

    def test_moments_match_direct_sums(self):
        cst = build_constellation("8psk")
        rng = np.random.default_rng(1)
        pmf = rng.dirichlet(np.ones(8), size=4)
        pr = priors_from_pmf(pmf, cst)
        for v in range(4):
            mean = np.sum(pmf[v] * cst.points)
            var = np.sum(pmf[v] * np.abs(cst.points - mean) ** 2)
            assert pr.mean[v] == pytest.approx(mean, abs=1e-12)
            assert pr.var[v] == pytest.approx(max(var, 1e-8), abs=1e-12)

    def test_variance_floor(self):
        cst = build_constellation("bpsk")
        pr = prior_from_llr(np.array([[40.0]]), cst)
        assert pr.var[0] >= 1e-8

    def test_rejects_wrong_width(self):
        with pytest.raises(ValueError):
            prior_from_llr(np.zeros((2, 3)), build_constellation("16qam"))


class TestDemapping:
    def test_bpsk_closed_form(self):
        """z=1, v2=1: L = (|z+1|^2 - |z-1|^2)/v2 = 4."""
        cst = build_constellation("bpsk")
        llr = demap_extrinsic(np.array([1.0 + 0j]), np.array([1.0]), cst)
        assert llr[0, 0] == pytest.approx(4.0, abs=1e-12)

    def test_bpsk_matches_exponent_difference(self):
        cst = build_constellation("bpsk")
        rng = np.random.default_rng(2)
        z = rng.normal(size=6) + 1j * rng.normal(size=6)
        v2 = rng.uniform(0.5, 2.0, size=6)
        llr = demap_extrinsic(z, v2, cst, clip=None)
        ref = (np.abs(z + 1) ** 2 - np.abs(z - 1) ** 2) / v2
        assert np.allclose(llr[:, 0], ref, atol=1e-10)

    def test_8psk_on_point_saturates(self):
        cst = build_constellation("8psk")
        for i in range(8):
            llr = demap_extrinsic(cst.points[i:i + 1], np.array([1e-3]), cst)
            signs = np.where(cst.labels[i] == 0, 5.0, -5.0)
            assert np.allclose(llr[0], signs)

    def test_clip_bounds(self):
        cst = build_constellation("16qam")
        llr = demap_extrinsic(cst.points[:4], np.full(4, 1e-4), cst, clip=5.0)
        assert np.all(np.abs(llr) <= 5.0)

    def test_logpmf_offset_invariance(self):
        cst = build_constellation("8psk")
        rng = np.random.default_rng(3)
        lp = rng.normal(size=(5, 8))
        a = llr_from_logpmf(lp, cst, clip=None)
        b = llr_from_logpmf(lp + 123.4, cst, clip=None)
        assert np.allclose(a, b, atol=1e-9)

    def test_rejects_nonpositive_variance(self):
        cst = build_constellation("bpsk")
        with pytest.raises(ValueError):
            demap_extrinsic(np.array([1.0]), np.array([0.0]), cst)
