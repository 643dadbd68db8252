"""Angular operator tests: spherical-limit oracles and basis invariants."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dskerr.angular import (
    angular_basis,
    assemble_P_n,
    export_spectrum_csv,
    gauss_xi,
    spectrum_P,
)
from dskerr.errors import GridError
from dskerr.geometry import SpacetimeParams


def _params(spin, n, lam=0.05):
    return SpacetimeParams(lambda_c=lam, mass=1.0, spin=spin, n=n, m2=0.1)


# ---------------------------------------------------------------------------
# spherical-limit oracle: at a = 0 the operator is the (associated) Legendre
# operator and the spectrum is ell(ell+1) for ell >= |n|, exactly.


@pytest.mark.parametrize("n", [0, 1, 2])
def test_spherical_spectrum(n):
    b = angular_basis(_params(0.0, n), 24)
    ells = np.arange(n, n + b.n_modes, dtype=float)
    assert np.max(np.abs(b.eigenvalues - ells * (ells + 1.0))) < 1e-8


def test_spherical_n2_low_end():
    b = angular_basis(_params(0.0, 2), 24)
    assert b.eigenvalues[0] == pytest.approx(6.0, abs=1e-10)
    assert b.eigenvalues[1] == pytest.approx(12.0, abs=1e-10)
    assert b.eigenvalues[2] == pytest.approx(20.0, abs=1e-10)


def test_matrix_symmetry_and_positivity():
    op = assemble_P_n(_params(0.1, 1), 24)
    scale = np.linalg.norm(op.matrix)
    assert np.linalg.norm(op.matrix - op.matrix.T) < 1e-12 * scale
    rng = np.random.default_rng(7)
    for _ in range(100):
        v = rng.standard_normal(op.matrix.shape[0])
        assert v @ op.matrix @ v > 0.0


def test_orthonormality_and_ordering():
    b = angular_basis(_params(0.3, 1), 24)
    gram = b.eigenvectors.T @ (b.quad_weights[:, None] * b.eigenvectors)
    assert np.max(np.abs(gram - np.eye(b.n_modes))) < 1e-10
    assert np.all(np.diff(b.eigenvalues) >= 0)
    assert b.eigenvalues[0] > 0  # n != 0


def test_completeness_on_mode_subspace():
    """Projector onto the eigenbasis reproduces anything of the right form."""
    b = angular_basis(_params(0.2, 1), 24)
    xi = b.xi_nodes
    rng = np.random.default_rng(3)
    coef = rng.standard_normal(b.n_modes)
    f = np.sqrt(1.0 - xi * xi) * np.polynomial.polynomial.polyval(
        xi, coef
    )  # sin(theta) * poly: exactly the mode-1 form
    proj = b.eigenvectors @ (b.eigenvectors.T @ (b.quad_weights * f))
    assert np.max(np.abs(proj - f)) < 1e-10 * max(1.0, np.max(np.abs(f)))


def test_continuity_in_spin():
    """Eigenvalue shifts scale like a^2 near the spherical limit."""
    lam0 = angular_basis(_params(0.0, 1), 24).eigenvalues
    d1 = np.abs(angular_basis(_params(1e-3, 1), 24).eigenvalues - lam0)
    d2 = np.abs(angular_basis(_params(2e-3, 1), 24).eigenvalues - lam0)
    ratio = d2[:6] / d1[:6]
    assert np.all(np.abs(ratio - 4.0) < 0.2)


def test_truncation_and_factored_eval():
    b = angular_basis(_params(0.1, 1), 24)
    t = b.truncate(6)
    assert t.eigenvalues.shape == (6,)
    assert t.eigenvectors.shape == (b.n_theta, 6)
    np.testing.assert_array_equal(t.eigenvalues, b.eigenvalues[:6])
    # factored evaluation agrees with the grid eigenvectors
    z, dz = t.eval_factored(b.xi_nodes)
    full = (1.0 - b.xi_nodes**2)[:, None] ** 0.5 * z
    assert np.max(np.abs(full - t.eigenvectors)) < 1e-12
    # derivative check against a central difference at interior points
    h = 1e-6
    zp, _ = t.eval_factored(b.xi_nodes[5:-5] + h)
    zm, _ = t.eval_factored(b.xi_nodes[5:-5] - h)
    assert np.allclose(dz[5:-5], (zp - zm) / (2 * h), atol=1e-6)
    with pytest.raises(GridError):
        b.truncate(0)
    with pytest.raises(GridError):
        b.truncate(b.n_modes + 1)


def test_grid_guard():
    with pytest.raises(GridError):
        assemble_P_n(_params(0.1, 3), 13)  # needs >= 14
    assemble_P_n(_params(0.1, 3), 14)


def test_gauss_grid():
    xi, w = gauss_xi(24)
    assert np.all(np.diff(xi) > 0)
    assert np.sum(w) == pytest.approx(2.0, abs=1e-14)
    assert np.all(np.abs(xi) < 1.0)


def test_spectrum_csv(tmp_path):
    b = angular_basis(_params(0.05, 1), 16)
    path = tmp_path / "spec.csv"
    export_spectrum_csv(b, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "q,lambda_q"
    assert len(rows) == b.n_modes + 1
    q0, lam0 = rows[1].split(",")
    assert int(q0) == 0
    assert float(lam0) == pytest.approx(b.eigenvalues[0])


@settings(max_examples=25, deadline=None)
@given(
    lam=st.floats(1e-3, 0.3),
    spin=st.floats(0.0, 0.5),
    n=st.integers(0, 4),
)
def test_spectrum_properties(lam, spin, n):
    b = angular_basis(_params(spin, n, lam=lam), 2 * n + 10)
    assert np.all(np.isfinite(b.eigenvalues))
    assert np.all(np.diff(b.eigenvalues) >= -1e-10)
    if n:
        assert b.eigenvalues[0] > 0
    else:
        assert b.eigenvalues[0] > -1e-10
    gram = b.eigenvectors.T @ (b.quad_weights[:, None] * b.eigenvectors)
    assert np.max(np.abs(gram - np.eye(b.n_modes))) < 1e-10
