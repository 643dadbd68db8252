"""Angular eigenproblem at fixed axial mode.

The axially reduced angular operator at mode number n is

    P_n = lam n^2/(1-xi^2) - d/dxi((1-xi^2) Delta_theta d/dxi .),   xi = cos(theta),

symmetric in L^2(dxi) on (-1, 1), with Delta_theta = 1 + c xi^2 and
c = Lambda a^2/3, lam = 1 + c.  Solutions behave like (1-xi^2)^{|n|/2}
at the axis, so we factor that behavior out and solve for the smooth
remainder in a Jacobi polynomial basis; the quadratic form in the
factored frame is

    a(g, g) = Int Delta_theta (1-xi^2)^{A+1} g'^2
              + (1-xi^2)^A [A^2 (1+c+c xi^2) + A (1+3c xi^2)] g^2 dxi

with A = |n| and mass Int (1-xi^2)^A g^2 dxi.  Gauss-Legendre quadrature
with a few guard nodes makes every matrix entry exact, the Jacobi mass
matrix is diagonal, and the a = 0 spectrum ell(ell+1) comes out to
machine precision.  Collocation on the theta grid is deliberately never
differentiated: for odd n the eigenfunctions carry a sin(theta) factor
that a polynomial stencil cannot see.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import eigh
from scipy.special import eval_jacobi

from .errors import GridError
from .geometry import SpacetimeParams


def gauss_xi(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on (-1, 1), nodes ascending."""
    return np.polynomial.legendre.leggauss(n)


class _FactoredBasis:
    """Normalized Jacobi basis P_m^(A,A)/sqrt(h_m) for the smooth factor."""

    def __init__(self, alpha: int, k: int):
        self.alpha = alpha
        self.k = k
        # mass normalization by (exact) quadrature; the Jacobi weight
        # (1-xi^2)^A makes the mass diagonal analytically
        xq, wq = gauss_xi(k + alpha + 8)
        raw = self._raw_vals(xq)
        mass = (raw * raw * (wq * (1.0 - xq * xq) ** alpha)[:, None]).sum(axis=0)
        self.scale = 1.0 / np.sqrt(mass)

    def _raw_vals(self, xi: np.ndarray) -> np.ndarray:
        cols = [eval_jacobi(m, self.alpha, self.alpha, xi) for m in range(self.k)]
        return np.column_stack(cols)

    def vals(self, xi: np.ndarray) -> np.ndarray:
        return self._raw_vals(np.asarray(xi, dtype=float)) * self.scale

    def derivs(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        a = self.alpha
        cols = [np.zeros_like(xi)]
        for m in range(1, self.k):
            cols.append(
                0.5 * (m + 2 * a + 1) * eval_jacobi(m - 1, a + 1, a + 1, xi)
            )
        return np.column_stack(cols) * self.scale


@dataclass(frozen=True)
class AngularOperator:
    """Symmetric matrix of the mode-n angular operator.

    `matrix` lives in a mass-orthonormal modal frame, so plain transposition
    symmetry here *is* symmetry in the discrete sin(theta)-weighted inner
    product on the collocation grid.
    """

    params: SpacetimeParams
    n_theta: int
    alpha: int
    matrix: np.ndarray
    xi_nodes: np.ndarray
    quad_weights: np.ndarray
    _basis: _FactoredBasis = field(repr=False, compare=False)

    @property
    def theta_nodes(self) -> np.ndarray:
        return np.arccos(self.xi_nodes)


@dataclass(frozen=True)
class AngularBasis:
    """Eigenpairs of the mode-n angular operator on the collocation grid.

    eigenvalues ascend; eigenvector columns are orthonormal in the discrete
    inner product sum_k quad_weights[k] f[k] g[k].  coeffs holds the same
    eigenvectors in the factored modal frame, which is what the 2D operator
    assembly integrates against.
    """

    params: SpacetimeParams
    n_theta: int
    alpha: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (n_theta, K) values on xi_nodes
    coeffs: np.ndarray  # (K, K) modal coefficients, columns match eigenvalues
    xi_nodes: np.ndarray
    quad_weights: np.ndarray
    _basis: _FactoredBasis = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def theta_nodes(self) -> np.ndarray:
        return np.arccos(self.xi_nodes)

    @property
    def n_modes(self) -> int:
        return self.eigenvalues.size

    def truncate(self, q_max: int) -> "AngularBasis":
        """Keep the lowest q_max eigenpairs."""
        if not 1 <= q_max <= self.n_modes:
            raise GridError(
                f"q_max must be in [1, {self.n_modes}], got {q_max}"
            )
        return replace(
            self,
            eigenvalues=self.eigenvalues[:q_max],
            eigenvectors=self.eigenvectors[:, :q_max],
            coeffs=self.coeffs[:, :q_max],
        )

    def eval_factored(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """Smooth factors z_q and dz_q/dxi at arbitrary points.

        The full eigenfunction is (1-xi^2)^{A/2} z_q(xi); the split is what
        pole-regular quadratures need.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        return self._basis.vals(xi) @ self.coeffs, self._basis.derivs(xi) @ self.coeffs

    def eval_eigenfunctions(self, xi) -> np.ndarray:
        """Eigenfunction values at arbitrary xi in [-1, 1]."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        z, _ = self.eval_factored(xi)
        return (1.0 - xi * xi)[:, None] ** (self.alpha / 2.0) * z


def assemble_P_n(params: SpacetimeParams, n_theta: int) -> AngularOperator:
    """Assemble the mode-n angular operator.

    Uses |n|+8 modal margins: GridError when n_theta < 2|n| + 8.  The
    returned matrix is exactly symmetric and positive semidefinite
    (strictly positive definite when n != 0).
    """
    alpha = abs(params.n)
    if n_theta < 2 * alpha + 8:
        raise GridError(
            f"need N_theta >= 2|n| + 8 = {2 * alpha + 8}, got {n_theta}"
        )
    k = n_theta - alpha
    c = params.lambda_c * params.spin**2 / 3.0
    basis = _FactoredBasis(alpha, k)

    xq, wq = gauss_xi(n_theta + 8)
    one_m = 1.0 - xq * xq
    dth = 1.0 + c * xq * xq
    pv = basis.vals(xq)
    pd = basis.derivs(xq)
    grad_w = wq * dth * one_m ** (alpha + 1)
    bracket = alpha * alpha * (1.0 + c + c * xq * xq) + alpha * (
        1.0 + 3.0 * c * xq * xq
    )
    mult_w = wq * one_m**alpha * bracket
    a_mat = pd.T @ (grad_w[:, None] * pd) + pv.T @ (mult_w[:, None] * pv)
    a_mat = 0.5 * (a_mat + a_mat.T)

    xf, wf = gauss_xi(n_theta)
    return AngularOperator(
        params=params,
        n_theta=n_theta,
        alpha=alpha,
        matrix=a_mat,
        xi_nodes=xf,
        quad_weights=wf,
        _basis=basis,
    )


def spectrum_P(op: AngularOperator) -> AngularBasis:
    """Full symmetric eigendecomposition of an assembled angular operator."""
    vals, vecs = eigh(op.matrix)
    xf = op.xi_nodes
    z = op._basis.vals(xf) @ vecs
    zfull = (1.0 - xf * xf)[:, None] ** (op.alpha / 2.0) * z
    # deterministic sign: largest-magnitude sample positive
    for q in range(zfull.shape[1]):
        j = int(np.argmax(np.abs(zfull[:, q])))
        if zfull[j, q] < 0:
            zfull[:, q] = -zfull[:, q]
            vecs[:, q] = -vecs[:, q]
    return AngularBasis(
        params=op.params,
        n_theta=op.n_theta,
        alpha=op.alpha,
        eigenvalues=vals,
        eigenvectors=zfull,
        coeffs=vecs,
        xi_nodes=xf,
        quad_weights=op.quad_weights,
        _basis=op._basis,
    )


def angular_basis(params: SpacetimeParams, n_theta: int) -> AngularBasis:
    """Convenience: assemble and diagonalize in one step."""
    return spectrum_P(assemble_P_n(params, n_theta))


def export_spectrum_csv(basis: AngularBasis, path) -> None:
    """Write the eigenvalue table (q, lambda_q)."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["q", "lambda_q"])
        for q, lam_q in enumerate(basis.eigenvalues):
            wr.writerow([q, "%.17g" % lam_q])
