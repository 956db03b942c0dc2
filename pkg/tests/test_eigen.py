import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ma_array_opt import normalize_phase, principal_eigenpair
from oracles import jacobi_eigh, random_unit_complex


def random_psd(n, rng):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return m @ m.conj().T


class TestPrincipalEigenpair:
    def test_one_by_one(self):
        for m in (1.0, 2.0, 5.0):
            res = principal_eigenpair([[m]])
            assert res.value == pytest.approx(m, abs=1e-12)
            assert res.vector[0] == pytest.approx(1.0 + 0j, abs=1e-12)

    def test_rank_one(self):
        rng = np.random.default_rng(0)
        for n in (2, 4, 7):
            a = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
            res = principal_eigenpair(np.outer(a, a.conj()))
            assert res.value == pytest.approx(n, rel=1e-12)
            # eigenvector matches a up to a global phase
            overlap = abs(np.vdot(res.vector, a / np.sqrt(n)))
            assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_matches_jacobi_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            b = random_psd(4, rng)
            vals, vecs = jacobi_eigh(b)
            res = principal_eigenpair(b)
            assert res.value == pytest.approx(vals[-1], rel=1e-8)
            overlap = abs(np.vdot(res.vector, vecs[:, -1]))
            assert overlap == pytest.approx(1.0, abs=1e-7)

    def test_result_invariants(self):
        rng = np.random.default_rng(9)
        for n in (2, 3, 6):
            res = principal_eigenpair(random_psd(n, rng))
            assert np.linalg.norm(res.vector) == pytest.approx(1.0, abs=1e-12)
            assert res.residual <= 1e-8
            lead = next(c for c in res.vector if abs(c) > 1e-12)
            assert abs(lead.imag) <= 1e-12 and lead.real >= 0.0
            assert not res.vector.flags.writeable

    def test_scale_equivariance(self):
        rng = np.random.default_rng(1)
        b = random_psd(5, rng)
        base = principal_eigenpair(b)
        for c in (0.5, 3.0, 100.0):
            scaled = principal_eigenpair(c * b)
            assert scaled.value == pytest.approx(c * base.value, rel=1e-10)
            assert abs(np.vdot(scaled.vector, base.vector)) == pytest.approx(1.0, abs=1e-9)

    def test_deterministic(self):
        rng = np.random.default_rng(4)
        b = random_psd(4, rng)
        r1 = principal_eigenpair(b)
        r2 = principal_eigenpair(b)
        assert r1.value == r2.value
        assert np.array_equal(r1.vector, r2.vector)

    def test_rejects_non_hermitian(self):
        b = np.array([[1.0, 2.0], [0.5, 1.0]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            principal_eigenpair(b)

    def test_absorbs_tiny_asymmetry(self):
        b = np.array([[2.0, 1.0 + 1e-12j], [1.0 - 3e-12j, 2.0]])
        res = principal_eigenpair(b)
        assert res.value == pytest.approx(3.0, abs=1e-9)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            principal_eigenpair(np.ones((2, 3)))

    def test_degenerate_spectrum_still_valid(self):
        # identity has a fully degenerate spectrum; any unit vector qualifies
        res = principal_eigenpair(np.eye(3, dtype=complex))
        assert res.value == pytest.approx(1.0, abs=1e-12)
        assert res.residual <= 1e-12


class TestPhaseGauge:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_idempotent(self, n, seed):
        v = random_unit_complex(n, np.random.default_rng(seed))
        once = normalize_phase(v)
        twice = normalize_phase(once)
        assert np.array_equal(once, twice)

    def test_skips_tiny_leading_components(self):
        v = np.array([1e-15 + 1e-15j, 0.0, 3.0j])
        out = normalize_phase(v)
        assert out[2] == pytest.approx(3.0 + 0j, abs=1e-12)

    def test_all_tiny_returns_copy(self):
        v = np.array([1e-15j, 1e-16j])
        out = normalize_phase(v)
        assert np.array_equal(out, v)

    def test_preserves_norm_and_direction(self):
        rng = np.random.default_rng(8)
        v = random_unit_complex(5, rng)
        out = normalize_phase(v)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)
        assert abs(np.vdot(out, v)) == pytest.approx(1.0, abs=1e-12)
