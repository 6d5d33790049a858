import numpy as np
import pytest

from blockprod import (
    BUILTIN_NORMS,
    FROBENIUS,
    INF_NORM,
    NoContractingNormError,
    ONE_NORM,
    ShapeError,
    SingularMatrixError,
    as_matrix,
    lyapunov_norm,
    lyapunov_scaling,
    norm_value,
    solve_right,
    spectral_certificate,
)
from conftest import random_complex

NILPOTENT = np.array([[0.0, 2.0], [0.0, 0.0]])


def triple_loop_matmul(a, b):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


class TestMatmul:
    def test_identity(self, rng):
        m = random_complex(rng, 2, 2)
        assert np.array_equal(np.eye(2) @ m, m)

    def test_nilpotent_square(self):
        assert np.array_equal(NILPOTENT @ NILPOTENT, np.zeros((2, 2)))

    def test_against_triple_loop(self, rng):
        a = random_complex(rng, 3, 3)
        b = random_complex(rng, 3, 3)
        assert np.abs(a @ b - triple_loop_matmul(a, b)).max() < 1e-13

    def test_shape_mismatch(self, rng):
        with pytest.raises(ValueError):
            random_complex(rng, 2, 3) @ random_complex(rng, 2, 3)


class TestAsMatrix:
    def test_rejects_nonfinite(self):
        with pytest.raises(ShapeError):
            as_matrix([[np.nan]])
        with pytest.raises(ShapeError):
            as_matrix([[np.inf, 1.0]])

    def test_promotes_scalars_and_vectors(self):
        assert as_matrix(3.0).shape == (1, 1)
        assert as_matrix([1.0, 2.0]).shape == (1, 2)


class TestSolveRight:
    def test_scalar_division(self):
        assert solve_right([[1.0]], [[0.5]])[0, 0] == pytest.approx(2.0)

    def test_identity(self, rng):
        b = random_complex(rng, 2, 3)
        out = solve_right(b, np.eye(3))
        assert np.abs(out - b).max() < 1e-14

    def test_explicit_2x2(self):
        # inverse of [[0.5, -0.25], [0, 0.5]] is [[2, 1], [0, 2]]
        out = solve_right([[1.0, 0.0]], [[0.5, -0.25], [0.0, 0.5]])
        assert np.abs(out - [[2.0, 1.0]]).max() < 1e-14

    def test_residual_contract(self, rng):
        for _ in range(50):
            n = rng.integers(1, 7)
            m = random_complex(rng, n, n) + 3 * np.eye(n)
            b = random_complex(rng, rng.integers(1, 5), n)
            x = solve_right(b, m)
            assert np.linalg.norm(x @ m - b) <= 1e-10 * (1 + np.linalg.norm(b))

    def test_singular_raises_with_pivot(self):
        with pytest.raises(SingularMatrixError) as exc:
            solve_right([[1.0, 1.0]], [[1.0, 1.0], [1.0, 1.0]])
        assert exc.value.pivot >= 0.0

    def test_shape_errors(self, rng):
        with pytest.raises(ShapeError):
            solve_right([[1.0]], random_complex(rng, 2, 3))
        with pytest.raises(ShapeError):
            solve_right([[1.0, 2.0, 3.0]], np.eye(2))


class TestNormValue:
    def test_inf_single_row(self):
        assert norm_value(NILPOTENT, INF_NORM) == 2.0

    def test_one_is_max_column_sum(self):
        assert norm_value([[1, -3], [2, 1]], ONE_NORM) == 4.0

    def test_frobenius_identity(self):
        assert norm_value(np.eye(3), FROBENIUS) == pytest.approx(np.sqrt(3))

    def test_lyapunov_matches_grid_oracle(self, rng):
        p = np.diag([1.0, 5.0])
        kind = lyapunov_norm(p)
        got = norm_value(NILPOTENT, kind)
        # maximize |Mx|_P / |x|_P over many random directions
        best = 0.0
        for _ in range(4000):
            x = random_complex(rng, 2, 1)
            num = np.sqrt((NILPOTENT @ x).conj().T @ p @ (NILPOTENT @ x)).real.item()
            den = np.sqrt(x.conj().T @ p @ x).real.item()
            best = max(best, num / den)
        assert got == pytest.approx(2 / np.sqrt(5), abs=1e-12)
        assert best <= got + 1e-9
        assert best == pytest.approx(got, abs=1e-3)

    def test_lyapunov_shape_mismatch(self):
        kind = lyapunov_norm(np.eye(3))
        with pytest.raises(ShapeError):
            norm_value(NILPOTENT, kind)

    def test_lyapunov_rejects_bad_scaling(self):
        with pytest.raises(ShapeError):
            lyapunov_norm([[0.0, 1.0], [0.0, 0.0]])  # not Hermitian
        with pytest.raises(ShapeError):
            lyapunov_norm([[-1.0]])  # not positive definite

    @pytest.mark.parametrize("kind", BUILTIN_NORMS, ids=lambda k: k.kind)
    def test_submultiplicative_builtin(self, rng, kind):
        for _ in range(100):
            n = rng.integers(1, 6)
            a = random_complex(rng, n, n)
            b = random_complex(rng, n, n)
            assert norm_value(a @ b, kind) <= (
                norm_value(a, kind) * norm_value(b, kind) + 1e-10
            )

    def test_submultiplicative_lyapunov(self, rng):
        p = random_complex(rng, 3, 3)
        kind = lyapunov_norm(p @ p.conj().T + np.eye(3))
        for _ in range(100):
            a = random_complex(rng, 3, 3)
            b = random_complex(rng, 3, 3)
            assert norm_value(a @ b, kind) <= (
                norm_value(a, kind) * norm_value(b, kind) + 1e-10
            )


class TestLyapunovScaling:
    def test_zero_matrix(self):
        kind = lyapunov_scaling(np.zeros((2, 2)))
        assert np.abs(kind.scaling - np.eye(2)).max() < 1e-12
        assert norm_value(np.zeros((2, 2)), kind) == pytest.approx(0.0, abs=1e-12)

    def test_scalar_stein(self):
        kind = lyapunov_scaling([[0.9]])
        assert kind.scaling[0, 0].real == pytest.approx(1 / 0.19)
        assert norm_value([[0.9]], kind) == pytest.approx(0.9, abs=1e-12)

    def test_nilpotent_matches_series(self):
        kind = lyapunov_scaling(NILPOTENT)
        # C^2 = 0, so the series sum_k C*^k C^k is I + C* C
        series = np.eye(2) + NILPOTENT.conj().T @ NILPOTENT
        assert np.abs(kind.scaling - series).max() < 1e-10
        assert norm_value(NILPOTENT, kind) < 1.0

    def test_contracts_random_spectral_radius(self, rng):
        for _ in range(30):
            n = rng.integers(1, 6)
            c = random_complex(rng, n, n)
            rho = max(np.abs(np.linalg.eigvals(c)))
            c *= rng.uniform(0.1, 0.95) / rho
            kind = lyapunov_scaling(c)
            assert norm_value(c, kind) < 1.0

    def test_rejects_expanding(self):
        with pytest.raises(NoContractingNormError):
            lyapunov_scaling([[1.5]])
        with pytest.raises(NoContractingNormError):
            lyapunov_scaling([[0.0, 1.0], [-1.0, 0.0]])  # spectral radius 1


class TestSpectralCertificate:
    def test_zero(self):
        cert = spectral_certificate(np.zeros((2, 2)))
        assert cert.kind == "gelfand" and cert.power == 1 and cert.rate == 0.0

    def test_nilpotent(self):
        cert = spectral_certificate(NILPOTENT)
        assert cert.kind == "gelfand" and cert.power == 2 and cert.rate == 0.0

    def test_large_offdiagonal_needs_k_12(self):
        c = np.array([[0.5, 100.0], [0.0, 0.5]])
        cert = spectral_certificate(c)
        assert cert.kind == "gelfand" and cert.power == 12
        assert cert.norm.kind == "inf"
        # repeated-multiplication oracle: ||C^k||_inf = 0.5^k + 100 k 0.5^(k-1)
        power = np.eye(2)
        for _ in range(12):
            power = power @ c
        expected = 0.5**12 + 100 * 12 * 0.5**11
        assert norm_value(power, INF_NORM) == pytest.approx(expected)
        assert cert.rate == pytest.approx(expected ** (1 / 12))

    def test_lyapunov_fallback(self):
        # badly scaled rotation: spectral radius 0.9 but built-in norms of
        # low powers all exceed 1, forcing the Lyapunov route
        rot = np.array([[np.cos(1.0), -np.sin(1.0)], [np.sin(1.0), np.cos(1.0)]])
        scale = np.diag([1.0, 100.0])
        c = scale @ (0.9 * rot) @ np.linalg.inv(scale)
        cert = spectral_certificate(c, k_max=4)
        assert cert is not None and cert.kind == "lyapunov"
        assert norm_value(c, cert.norm) <= cert.rate < 1.0

    def test_undecided_is_none(self):
        assert spectral_certificate([[1.5]]) is None
        assert spectral_certificate([[1.0]]) is None

    def test_rate_dominates_spectral_radius(self, rng):
        for _ in range(30):
            n = rng.integers(1, 6)
            c = np.triu(random_complex(rng, n, n))
            c[np.diag_indices(n)] *= rng.uniform(0.1, 0.9) / np.abs(
                np.diag(c)
            ).clip(min=1e-9)
            rho = max(np.abs(np.diag(c)))
            cert = spectral_certificate(c)
            if cert is not None:
                assert cert.rate >= rho - 1e-8
