"""Tests for the (3,6)-regular LDPC code, BP decoder and interleaver."""

import numpy as np
import pytest

from epturbo.coding import (Interleaver, LdpcCode, bp_decode, build_ldpc,
                            encode, read_alist, write_alist)


@pytest.fixture(scope="module")
def code256():
    return build_ldpc(256, seed=0)


@pytest.fixture(scope="module")
def code1024():
    return build_ldpc(1024, seed=0)


class TestConstruction:
    def test_degree_profile(self, code256):
        H = code256.parity_matrix()
        assert H.shape == (128, 256)
        assert np.all(H.sum(axis=0) == 3)
        assert np.all(H.sum(axis=1) == 6)

    def test_rate_half(self, code256):
        assert code256.k == 128
        assert code256.rate == 0.5

    def test_deterministic_in_seed(self):
        a = build_ldpc(256, seed=5)
        b = build_ldpc(256, seed=5)
        c = build_ldpc(256, seed=6)
        assert np.array_equal(a.edge_col, b.edge_col)
        assert not np.array_equal(a.edge_col, c.edge_col)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            build_ldpc(255, seed=0)
        with pytest.raises(ValueError):
            build_ldpc(64, seed=0)


class TestEncoding:
    def test_syndrome_zero_gf2_oracle(self, code1024):
        rng = np.random.default_rng(0)
        H = code1024.parity_matrix()
        for _ in range(5):
            info = rng.integers(0, 2, size=code1024.k).astype(np.uint8)
            c = encode(code1024, info)
            assert not np.any(H @ c % 2)           # dense GF(2) oracle
            assert not code1024.syndrome(c).any()  # production path

    def test_systematic(self, code256):
        rng = np.random.default_rng(1)
        info = rng.integers(0, 2, size=code256.k).astype(np.uint8)
        c = encode(code256, info)
        assert np.array_equal(c[code256.systematic_cols], info)

    def test_all_zero_codeword(self, code256):
        c = encode(code256, np.zeros(code256.k, dtype=np.uint8))
        assert not c.any()

    def test_rejects_wrong_length(self, code256):
        with pytest.raises(ValueError):
            encode(code256, np.zeros(code256.k + 1, dtype=np.uint8))


class TestBpDecode:
    def test_clean_llrs_decode_immediately(self, code1024):
        rng = np.random.default_rng(2)
        info = rng.integers(0, 2, size=code1024.k).astype(np.uint8)
        c = encode(code1024, info)
        llr = 8.0 * (1.0 - 2.0 * c.astype(float))
        info_hat, ext, iters = bp_decode(code1024, llr)
        assert np.array_equal(info_hat, info)
        assert iters == 1

    def test_bsc_monte_carlo(self, code1024):
        """BSC(p=0.02)-style LLRs: >= 99/100 seeded trials decode."""
        p = 0.02
        mag = np.log((1 - p) / p)
        ok = 0
        for trial in range(100):
            rng = np.random.default_rng(1000 + trial)
            info = rng.integers(0, 2, size=code1024.k).astype(np.uint8)
            c = encode(code1024, info)
            flips = rng.random(code1024.n) < p
            r = c ^ flips
            llr = mag * (1.0 - 2.0 * r.astype(float))
            info_hat, _, _ = bp_decode(code1024, llr)
            ok += int(np.array_equal(info_hat, info))
        assert ok >= 99

    def test_extrinsic_excludes_input(self, code1024):
        rng = np.random.default_rng(3)
        info = rng.integers(0, 2, size=code1024.k).astype(np.uint8)
        c = encode(code1024, info)
        llr = 3.0 * (1.0 - 2.0 * c.astype(float)) + rng.normal(size=code1024.n)
        _, ext, _ = bp_decode(code1024, llr)
        # extrinsic is posterior minus input, so adding the input back must
        # give the converged posterior with a zero syndrome
        hard = ((llr + ext) < 0).astype(np.uint8)
        assert not code1024.syndrome(hard).any()

    def test_rejects_wrong_length(self, code1024):
        with pytest.raises(ValueError):
            bp_decode(code1024, np.zeros(5))


class TestInterleaver:
    def test_round_trip_seed7_n16(self):
        il = Interleaver(16, seed=7)
        x = np.arange(16)
        assert np.array_equal(il.deinterleave(il.interleave(x)), x)
        assert np.array_equal(il.interleave(il.deinterleave(x)), x)

    def test_is_a_permutation(self):
        il = Interleaver(100, seed=0)
        assert np.array_equal(np.sort(il.perm), np.arange(100))

    def test_deterministic(self):
        assert np.array_equal(Interleaver(64, 3).perm, Interleaver(64, 3).perm)

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            Interleaver(8, 0).interleave(np.zeros(9))


class TestAlist:
    def test_round_trip(self, code256, tmp_path):
        path = tmp_path / "code.alist"
        write_alist(code256, path)
        H = read_alist(path)
        assert np.array_equal(H, code256.parity_matrix())
