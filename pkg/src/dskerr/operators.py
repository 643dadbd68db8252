"""Discrete evolution generators and energy norms at fixed axial mode.

Everything acts on complex nodal arrays over the x-by-theta grid.  The
radial derivative is the spectral periodic derivative (exactly
antisymmetric, which the orthogonality and unitarity identities need);
pointwise coefficients act nodally; the polar divergence term is applied
through the factored angular eigenframe with a Gram-form weak assembly,
so it is symmetric positive semidefinite by construction and never
differentiates the sin^|n| axis factor with a polynomial stencil.

Operator conventions, with lam = 1 + Lambda a^2/3, s^2 = sin^2(theta) =
1 - xi^2, sigma^2 = (r^2+a^2)^2 Delta_theta - a^2 Delta_r s^2:

    k  = n a (Delta_r - (r^2+a^2) Delta_theta)/sigma^2
    h  = n^2 (Delta_r - a^2 s^2 Delta_theta)/(s^2 sigma^2)
         - W d/dx (r^2+a^2) d/dx (W .)
         - G d/dxi ((1-xi^2) Delta_theta d/dxi (G .))
         + rho^2 Delta_r Delta_theta m^2/(lam^2 sigma^2)
    W  = sqrt((r^2+a^2) Delta_theta)/sigma,  G = sqrt(Delta_r Delta_theta)/(lam sigma)

with h0 = h + k^2, the separable comparison pair

    h_inf_pm = -l_pm^2 - d^2/dx^2 + (Delta_r/(lam^2 (r^2+a^2)^2)) P + Delta_r m^2
    k_inf_pm = -l_pm

and the transport comparison pair

    h_T_plus  = -(d/dx + i(l - l_plus))^2  - l_plus^2,    k_T_plus  = -l_plus
    h_T_minus = -(-d/dx + i(l - l_minus))^2 - l_minus^2,  k_T_minus = -l_minus.

The first-order system is d/dt (u0, u1) = iH (u0, u1), H = [[0, 1], [h, 2k]].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angular import AngularBasis, gauss_xi
from .errors import NegativeQuadraticForm, ShapeError
from .geometry import RadialChart, SpacetimeParams

NORM_KINDS = ("full_hom", "full_inhom", "T_plus", "T_minus", "inf_plus", "inf_minus")


@dataclass
class FieldState:
    """First-order Cauchy data (u0, u1) on the x-by-theta grid at mode n.

    u1 = (1/i) d/dt u0 along solutions.
    """

    u0: np.ndarray
    u1: np.ndarray
    n: int

    def __post_init__(self):
        self.u0 = np.asarray(self.u0, dtype=complex)
        self.u1 = np.asarray(self.u1, dtype=complex)
        if self.u0.shape != self.u1.shape or self.u0.ndim != 2:
            raise ShapeError(
                f"u0/u1 must be matching 2D arrays, got {self.u0.shape} vs {self.u1.shape}"
            )
        if not (np.all(np.isfinite(self.u0)) and np.all(np.isfinite(self.u1))):
            raise ShapeError("non-finite entries in field state")

    @property
    def stack(self) -> np.ndarray:
        return np.stack([self.u0, self.u1])

    @classmethod
    def from_stack(cls, arr: np.ndarray, n: int) -> "FieldState":
        return cls(u0=arr[0], u1=arr[1], n=n)

    def copy(self) -> "FieldState":
        return FieldState(self.u0.copy(), self.u1.copy(), self.n)

    def support_guard_ok(self, chart: RadialChart, tol: float = 1e-14) -> bool:
        """True when |u| < tol on the outer eighth of the radial grid."""
        n_x = chart.n_x
        m = n_x // 8
        scale = max(np.max(np.abs(self.u0)), np.max(np.abs(self.u1)), 1e-300)
        edge = max(
            np.max(np.abs(self.u0[:m])),
            np.max(np.abs(self.u0[-m:])),
            np.max(np.abs(self.u1[:m])),
            np.max(np.abs(self.u1[-m:])),
        )
        return bool(edge <= tol * scale)


@dataclass
class GeneratorSet:
    """Assembled mode-n generators bound to one chart and angular basis.

    Immutable after assembly; all apply methods are pure.  The comparison
    constants k_inf_plus/k_inf_minus/k_T_plus/k_T_minus equal -l_plus and
    -l_minus.
    """

    params: SpacetimeParams
    chart: RadialChart
    basis: AngularBasis
    k_inf_plus: float
    k_inf_minus: float
    k_T_plus: float
    k_T_minus: float
    # precomputed tables
    kx: np.ndarray = field(repr=False)  # spectral wavenumbers
    k2d: np.ndarray = field(repr=False)  # multiplication table of k
    n2_mult: np.ndarray = field(repr=False)  # nodal n^2/sin^2 table (diagnostic only)
    mass_mult: np.ndarray = field(repr=False)
    w2d: np.ndarray = field(repr=False)  # the W sandwich weight
    cx: np.ndarray = field(repr=False)  # r^2 + a^2
    vinf_x: np.ndarray = field(repr=False)  # Delta_r/(lam^2 (r^2+a^2)^2)
    theta_stack: np.ndarray = field(repr=False)  # (N_x, K, K) weak polar term
    z_modes: np.ndarray = field(repr=False)  # (N_theta, K) eigenframe
    zw_modes: np.ndarray = field(repr=False)  # weights-scaled eigenframe
    lam_q: np.ndarray = field(repr=False)
    l_x: np.ndarray = field(repr=False)
    u_weight: np.ndarray = field(repr=False)  # analysis-frame weight

    # -- shape helpers ------------------------------------------------------

    @property
    def grid_shape(self) -> tuple[int, int]:
        return (self.chart.n_x, self.basis.n_theta)

    def _check(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=complex)
        if f.ndim == 2 and f.shape == self.grid_shape:
            return f
        if f.ndim == 1 and f.shape[0] == self.chart.n_x:
            return f
        raise ShapeError(f"expected shape {self.grid_shape} or ({self.chart.n_x},), got {f.shape}")

    # -- elementary operators ----------------------------------------------

    def d1x(self, f: np.ndarray) -> np.ndarray:
        """Spectral radial derivative; exactly antisymmetric."""
        f = self._check(f)
        spec = np.fft.fft(f, axis=0)
        if f.ndim == 2:
            spec *= 1j * self.kx[:, None]
        else:
            spec = spec * (1j * self.kx)
        return np.fft.ifft(spec, axis=0)

    def to_modes(self, f: np.ndarray) -> np.ndarray:
        """Project nodal theta values onto the angular eigenframe."""
        return self._check(f) @ self.zw_modes

    def from_modes(self, m: np.ndarray) -> np.ndarray:
        return m @ self.z_modes.T

    def apply_P(self, f: np.ndarray) -> np.ndarray:
        """The angular operator through its eigenframe."""
        return self.from_modes(self.to_modes(f) * self.lam_q)

    # -- generators ---------------------------------------------------------

    def apply_k_full(self, f: np.ndarray) -> np.ndarray:
        return self.k2d * self._check(f)

    def apply_h_full(self, f: np.ndarray) -> np.ndarray:
        f = self._check(f)
        if f.ndim != 2:
            raise ShapeError("h_full acts on 2D grid functions")
        out = self.mass_mult * f
        # radial sandwich -W d/dx (r^2+a^2) d/dx (W f)
        g = self.d1x(self.w2d * f)
        out -= self.w2d * self.d1x(self.cx[:, None] * g)
        # combined polar term (divergence + n^2 multiplication), assembled
        # per radial node with the axis pole cancelled analytically
        m = self.to_modes(f)
        out += self.from_modes(np.einsum("xpq,xq->xp", self.theta_stack, m))
        return out

    def apply_h0_full(self, f: np.ndarray) -> np.ndarray:
        return self.apply_h_full(f) + self.k2d * (self.k2d * self._check(f))

    def apply_h_T(self, f: np.ndarray, side: str) -> np.ndarray:
        f = self._check(f)
        l = self.l_x if f.ndim == 1 else self.l_x[:, None]
        if side == "plus":
            mu = l - self.chart.l_plus
            v = self.d1x(f) + 1j * mu * f
            return -(self.d1x(v) + 1j * mu * v) - self.chart.l_plus**2 * f
        if side == "minus":
            mu = l - self.chart.l_minus
            v = -self.d1x(f) + 1j * mu * f
            return -(-self.d1x(v) + 1j * mu * v) - self.chart.l_minus**2 * f
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")

    def apply_h_inf(self, f: np.ndarray, side: str) -> np.ndarray:
        f = self._check(f)
        if f.ndim != 2:
            raise ShapeError(
                "h_inf acts on 2D grid functions; use apply_h_inf_mode for profiles"
            )
        if side == "plus":
            l_h = self.chart.l_plus
        elif side == "minus":
            l_h = self.chart.l_minus
        else:
            raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
        out = -(l_h**2) * f - self.d1x(self.d1x(f))
        out += self.vinf_x[:, None] * self.apply_P(f)
        out += self.chart.delta_r_of_x[:, None] * self.params.m2 * f
        return out

    def apply_h_inf_mode(self, f: np.ndarray, q: int, side: str) -> np.ndarray:
        """h_inf_pm on a single angular mode's radial profile."""
        f = np.asarray(f, dtype=complex)
        if f.ndim != 1 or f.shape[0] != self.chart.n_x:
            raise ShapeError(f"expected radial profile of length {self.chart.n_x}")
        l_h = self.chart.l_plus if side == "plus" else self.chart.l_minus
        out = -(l_h**2) * f - self.d1x(self.d1x(f))
        out += self.vinf_x * self.lam_q[q] * f
        out += self.chart.delta_r_of_x * self.params.m2 * f
        return out


def assemble_generators(
    params: SpacetimeParams, chart: RadialChart, basis: AngularBasis
) -> GeneratorSet:
    """Build the generator set; ShapeError on mismatched inputs."""
    if chart.params != params or basis.params != params:
        raise ShapeError("chart/basis were built from different parameters")
    a = params.spin
    lam = params.lam
    c = params.lambda_c * a * a / 3.0
    alpha = basis.alpha
    n_x, n_th = chart.n_x, basis.n_theta

    r = chart.r_of_x
    dr = chart.delta_r_of_x
    cx = r * r + a * a
    xi = basis.xi_nodes
    s2 = 1.0 - xi * xi
    dth = 1.0 + c * xi * xi

    sigma2 = (cx * cx)[:, None] * dth[None, :] - (a * a) * dr[:, None] * s2[None, :]
    rho2 = r[:, None] ** 2 + (a * a) * (xi * xi)[None, :]
    k2d = params.n * a * (dr[:, None] - cx[:, None] * dth[None, :]) / sigma2
    n2_mult = (
        params.n**2
        * (dr[:, None] - (a * a) * s2[None, :] * dth[None, :])
        / (s2[None, :] * sigma2)
    )
    mass_mult = rho2 * dr[:, None] * dth[None, :] * params.m2 / (lam * lam * sigma2)
    w2d = np.sqrt(cx[:, None] * dth[None, :]) / np.sqrt(sigma2)
    vinf_x = dr / (lam * lam * cx * cx)
    u_weight = np.sqrt(sigma2) / np.sqrt(lam * cx[:, None] * dth[None, :])

    # Combined polar weak form on a guarded quadrature grid.  Between the
    # factored eigenframe columns Z = (1-xi^2)^{alpha/2} z, the divergence
    # term plus the n^2/sin^2 multiplication reduce, after integrating the
    # cross term by parts, to
    #
    #   Int Delta_theta (1-xi^2)^{alpha+1} (G z_p)'(G z_q)'
    #     + alpha (1+3c xi^2) (1-xi^2)^alpha G^2 z_p z_q
    #     + alpha^2 (1-xi^2)^alpha C_reg z_p z_q  dxi,
    #
    #   C_reg = [Delta_r ((1+c)^2 + c(2+c) xi^2 + c^2 xi^4)
    #            - lam^2 a^2 Delta_theta] / (lam^2 sigma^2),
    #
    # where C_reg is the axis-regular combination of the n^2 coefficient
    # with the singular part of the divergence: the 1/sin^2 poles cancel
    # identically before any number is evaluated.
    xq, wq = gauss_xi(n_th + 16)
    s2q = 1.0 - xq * xq
    dthq = 1.0 + c * xq * xq
    z, dz = basis.eval_factored(xq)  # (N_q, K) each
    sig2q = (cx * cx)[:, None] * dthq[None, :] - (a * a) * dr[:, None] * s2q[None, :]
    g2d = np.sqrt(dr[:, None] * dthq[None, :]) / (lam * np.sqrt(sig2q))
    # d/dxi of G at fixed x:  G * (c xi/Delta_theta - dsigma2/dxi/(2 sigma2))
    dsig2 = 2.0 * xq[None, :] * (c * (cx * cx)[:, None] + (a * a) * dr[:, None])
    gp2d = g2d * (c * xq[None, :] / dthq[None, :] - 0.5 * dsig2 / sig2q)
    gz_prime = gp2d[:, :, None] * z[None, :, :] + g2d[:, :, None] * dz[None, :, :]
    w_grad = wq * dthq * s2q ** (alpha + 1)
    c_reg = (
        dr[:, None] * ((1.0 + c) ** 2 + c * (2.0 + c) * xq**2 + c**2 * xq**4)[None, :]
        - (lam * lam * a * a) * dthq[None, :]
    ) / (lam * lam * sig2q)
    w_zz = (wq * s2q**alpha)[None, :] * (
        alpha * (1.0 + 3.0 * c * xq**2)[None, :] * g2d**2 + alpha**2 * c_reg
    )
    theta_stack = np.einsum(
        "i,xip,xiq->xpq", w_grad, gz_prime, gz_prime, optimize=True
    ) + np.einsum("xi,ip,iq->xpq", w_zz, z, z, optimize=True)

    zfull = basis.eigenvectors
    zw = basis.quad_weights[:, None] * zfull
    return GeneratorSet(
        params=params,
        chart=chart,
        basis=basis,
        k_inf_plus=-chart.l_plus,
        k_inf_minus=-chart.l_minus,
        k_T_plus=-chart.l_plus,
        k_T_minus=-chart.l_minus,
        kx=2.0 * np.pi * np.fft.fftfreq(n_x, d=chart.dx),
        k2d=k2d,
        n2_mult=n2_mult,
        mass_mult=mass_mult,
        w2d=w2d,
        cx=cx,
        vinf_x=vinf_x,
        theta_stack=theta_stack,
        z_modes=zfull,
        zw_modes=zw,
        lam_q=basis.eigenvalues,
        l_x=chart.l_of_x,
        u_weight=u_weight,
    )


# ---------------------------------------------------------------------------
# inner products and energy norms


def inner(gens: GeneratorSet, f: np.ndarray, g: np.ndarray) -> complex:
    """Discrete L^2 product: trapezoid in x (periodic, so plain dx sum),
    Gauss in cos(theta); conjugation on the first slot."""
    f, g = np.asarray(f), np.asarray(g)
    if f.ndim == 1:
        return complex(gens.chart.dx * np.sum(np.conj(f) * g))
    return complex(
        gens.chart.dx * np.sum(np.conj(f) * g * gens.basis.quad_weights[None, :])
    )


def norm2(gens: GeneratorSet, f: np.ndarray) -> float:
    return inner(gens, f, f).real


def _form(gens, op_val, u, floor_scale) -> float:
    """Real quadratic-form value with the negativity guard."""
    val = inner(gens, u, op_val).real
    if val < -1e-10 * floor_scale:
        raise NegativeQuadraticForm(
            f"quadratic form evaluated to {val:.3e} (scale {floor_scale:.3e})"
        )
    return max(val, 0.0)


def energy_norm(gens: GeneratorSet, u: FieldState, kind: str) -> float:
    """Squared energy norm of Cauchy data in the requested comparison space."""
    if kind not in NORM_KINDS:
        raise ValueError(f"kind must be one of {NORM_KINDS}, got {kind!r}")
    u0, u1 = gens._check(u.u0), gens._check(u.u1)
    scale = norm2(gens, u0) + norm2(gens, u1)
    if kind in ("full_hom", "full_inhom"):
        val = _form(gens, gens.apply_h0_full(u0), u0, scale)
        val += norm2(gens, u1 - gens.apply_k_full(u0))
        if kind == "full_inhom":
            val += norm2(gens, u0)
        return val
    if kind in ("T_plus", "T_minus"):
        side = "plus" if kind == "T_plus" else "minus"
        l_h = gens.chart.l_plus if side == "plus" else gens.chart.l_minus
        mu = (gens.l_x - l_h)[:, None]
        if side == "plus":
            d = gens.d1x(u0) + 1j * mu * u0
        else:
            d = -gens.d1x(u0) + 1j * mu * u0
        return norm2(gens, d) + norm2(gens, u1 + l_h * u0)
    side = "plus" if kind == "inf_plus" else "minus"
    l_h = gens.chart.l_plus if side == "plus" else gens.chart.l_minus
    val = norm2(gens, gens.d1x(u0))
    pot = gens.vinf_x[:, None] * gens.apply_P(u0) + (
        gens.chart.delta_r_of_x * gens.params.m2
    )[:, None] * u0
    val += _form(gens, pot, u0, norm2(gens, u0) + norm2(gens, u1))
    val += norm2(gens, u1 + l_h * u0)
    return val


# ---------------------------------------------------------------------------
# the membership functionals and the commutator diagnostic


def psi_functional(
    gens: GeneratorSet, u: FieldState, side: str, conjugate: bool = False
) -> np.ndarray:
    """Membership functional: zero exactly on the one-sided transport data.

    Plus side:  (1/i)(d/dx + i(l - l_plus)) u0 + (u1 + l_plus u0); the minus
    side flips the derivative sign and uses l_minus.  With conjugate=True the
    derivative block enters with the opposite sign, which annihilates the
    complementary membership data instead.
    """
    u0, u1 = gens._check(u.u0), gens._check(u.u1)
    if side == "plus":
        l_h = gens.chart.l_plus
        sgn = 1.0
    elif side == "minus":
        l_h = gens.chart.l_minus
        sgn = -1.0
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    mu = (gens.l_x - l_h)[:, None] if u0.ndim == 2 else gens.l_x - l_h
    d = sgn * gens.d1x(u0) + 1j * mu * u0
    block = -1j * d  # (1/i) * d
    if conjugate:
        block = -block
    return block + u1 + l_h * u0


def delta_prime_apply(
    gens: GeneratorSet, u0: np.ndarray, q: int, side: str = "plus"
) -> np.ndarray:
    """Commutator diagnostic i(i_pm h_inf_pm - h_T_pm i_pm) on one radial mode.

    Every term carries the cutoff or one of its derivatives, or a
    coefficient that decays at the horizon rate, which is what makes the
    comparison-dynamics argument quantitative.
    """
    f = np.asarray(u0, dtype=complex)
    if f.ndim != 1 or f.shape[0] != gens.chart.n_x:
        raise ShapeError(f"expected radial profile of length {gens.chart.n_x}")
    ch = gens.chart
    if side == "plus":
        cut, dcut, d2cut = ch.i_plus, ch.di_plus, ch.d2i_plus
        mu = gens.l_x - ch.l_plus
    elif side == "minus":
        cut, dcut, d2cut = ch.i_minus, ch.di_minus, ch.d2i_minus
        mu = gens.l_x - ch.l_minus
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    dmu = ch.dl_dx
    df = gens.d1x(f)
    v_q = gens.vinf_x * gens.lam_q[q]
    v_m = ch.delta_r_of_x * gens.params.m2
    out = (
        cut * v_q * f
        + cut * v_m * f
        + 2.0 * dcut * df
        + 2.0j * mu * cut * df
        + d2cut * f
        + 2.0j * mu * dcut * f
        + 1.0j * dmu * cut * f
        - mu * mu * cut * f
    )
    return 1j * out


def hardy_ratio(gens: GeneratorSet, f: np.ndarray) -> float:
    """Ratio ||q f|| / (||d/dx f|| + ||f||_{L2(-1,1)}) for a radial profile.

    The weight q = sqrt(dist_plus*dist_minus) decays at both horizon rates,
    so the supremum of this ratio over smooth profiles is a finite constant;
    fitting it on a sample and checking stability under refinement is the
    weighted-estimate property test.
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1 or f.shape[0] != gens.chart.n_x:
        raise ShapeError(f"expected radial profile of length {gens.chart.n_x}")
    ch = gens.chart
    num = np.sqrt(ch.dx * np.sum(ch.q_weight**2 * np.abs(f) ** 2))
    mask = np.abs(ch.x_nodes) <= 1.0
    den = np.sqrt(ch.dx * np.sum(np.abs(gens.d1x(f)) ** 2))
    den += np.sqrt(ch.dx * np.sum(np.abs(f[mask]) ** 2))
    return float(num / den)


# ---------------------------------------------------------------------------
# the measure transform


def u_transform(gens: GeneratorSet, f: np.ndarray, direction: str) -> np.ndarray:
    """Multiplication by sigma/sqrt(lam (r^2+a^2) Delta_theta) (or back).

    to_analysis carries physical-measure data to the frame all the
    operators here act in; from_analysis inverts it exactly.
    """
    f = gens._check(f)
    if f.ndim != 2:
        raise ShapeError("u_transform acts on 2D grid functions")
    if direction == "to_analysis":
        return gens.u_weight * f
    if direction == "from_analysis":
        return f / gens.u_weight
    raise ValueError(
        f"direction must be 'to_analysis' or 'from_analysis', got {direction!r}"
    )


# ---------------------------------------------------------------------------
# dense forms and state builders (shared by the oracle tests and the CLI)


def dense_matrix(apply_fn, shape: tuple[int, int]) -> np.ndarray:
    """Materialize a linear operator on the grid by columns."""
    n = shape[0] * shape[1]
    out = np.zeros((n, n), dtype=complex)
    e = np.zeros(shape, dtype=complex)
    flat = e.reshape(-1)
    for j in range(n):
        flat[j] = 1.0
        out[:, j] = np.asarray(apply_fn(e)).reshape(-1)
        flat[j] = 0.0
    return out


def dense_hamiltonian(gens: GeneratorSet, kind: str = "full", side: str = "plus") -> np.ndarray:
    """Dense [[0, 1], [h, 2k]] for the requested comparison dynamics."""
    shape = gens.grid_shape
    n = shape[0] * shape[1]
    if kind == "full":
        h = dense_matrix(gens.apply_h_full, shape)
        k_diag = gens.k2d.reshape(-1)
    elif kind == "T":
        h = dense_matrix(lambda f: gens.apply_h_T(f, side), shape)
        l_h = gens.chart.l_plus if side == "plus" else gens.chart.l_minus
        k_diag = np.full(n, -l_h, dtype=complex)
    elif kind == "inf":
        h = dense_matrix(lambda f: gens.apply_h_inf(f, side), shape)
        l_h = gens.chart.l_plus if side == "plus" else gens.chart.l_minus
        k_diag = np.full(n, -l_h, dtype=complex)
    else:
        raise ValueError(f"kind must be 'full', 'T' or 'inf', got {kind!r}")
    top = np.hstack([np.zeros((n, n)), np.eye(n)])
    bot = np.hstack([h, 2.0 * np.diag(k_diag)])
    return np.vstack([top, bot])


def gaussian_state(
    gens: GeneratorSet,
    center: float = 0.0,
    width: float = 2.0,
    momentum: float = 0.0,
    seed: int | None = 0,
    n_modes: int | None = None,
) -> FieldState:
    """Smooth compact-support Cauchy data with 1/(1+lambda_q) mode weights.

    Deterministic for a fixed seed; the support guard of FieldState holds by
    construction for |center| <= X_max/4 and width <= X_max/16.
    """
    ch = gens.chart
    if abs(center) > ch.x_max / 4 or not 0 < width <= ch.x_max / 16:
        raise ShapeError("bump parameters would break the support guard band")
    rng = np.random.default_rng(seed)
    k = gens.lam_q.size if n_modes is None else min(n_modes, gens.lam_q.size)
    x = ch.x_nodes
    bump = np.exp(-((x - center) ** 2) / (2.0 * width**2) + 1j * momentum * x)
    weights = 1.0 / (1.0 + gens.lam_q[:k])
    c0 = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) * weights
    c1 = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) * weights
    z = gens.z_modes[:, :k]
    u0 = bump[:, None] * (z @ c0)[None, :]
    u1 = bump[:, None] * (z @ c1)[None, :]
    return FieldState(u0=u0, u1=u1, n=gens.params.n)


def random_state(gens: GeneratorSet, seed: int = 0) -> FieldState:
    """A randomized smooth state inside the guard band."""
    rng = np.random.default_rng(seed)
    ch = gens.chart
    center = float(rng.uniform(-ch.x_max / 8, ch.x_max / 8))
    w_hi = min(3.0, ch.x_max / 16)
    width = float(rng.uniform(min(1.0, w_hi / 2), w_hi))
    momentum = float(rng.uniform(-2.0, 2.0))
    return gaussian_state(
        gens,
        center=center,
        width=width,
        momentum=momentum,
        seed=int(rng.integers(1 << 31)),
    )
