"""De Sitter-Kerr background at fixed physical parameters.

Conventions used throughout the package:

  rho2(r,th)    = r^2 + a^2 cos^2(th)
  delta_r(r)    = (1 - L r^2/3)(r^2 + a^2) - 2 M r          (L = Lambda)
  delta_th(th)  = 1 + (L a^2/3) cos^2(th)
  sigma2        = (r^2+a^2)^2 delta_th - a^2 delta_r sin^2(th)
  lam           = 1 + L a^2 / 3

The static-type block lives between the two largest positive roots
r_minus < r_plus of delta_r.  The radial chart x is the tortoise-type
coordinate with dx/dr = lam (r^2+a^2)/delta_r and x=0 at the midpoint
radius r0 = (r_minus + r_plus)/2, so the time-map T(r) equals x(r)
identically.  The rotation map A(r) integrates a/(r^2+a^2) dx and supplies
the axial phase exp(i n A) that the transport dynamics needs.

The grid is uniform on [-X_max, X_max) with the right endpoint left out:
all radial operators in this package are built on the periodic circle of
circumference 2 X_max, and the truncation X_max is chosen so the
coefficients are flat to ~1e-10 long before the seam.  Data is kept away
from the seam by the support guard, so periodicity is never visible to the
physics within a run's causal budget.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import DomainError, GridError, NoHorizonGap

__all__ = [
    "SpacetimeParams",
    "MetricFunctions",
    "RadialChart",
    "eval_metric_functions",
    "find_horizons",
    "surface_gravity",
    "build_background",
    "auto_x_max",
    "fit_decay_rate",
    "horizon_point_maps",
    "export_chart_csv",
]

_ROOT_TOL = 1e-13  # relative root polish target


@dataclass(frozen=True)
class SpacetimeParams:
    """The five physical constants of a run.

    lambda_c : cosmological constant Lambda > 0 (1/length^2)
    mass     : black-hole mass M > 0 (length)
    spin     : rotation parameter a (length); |a| assumed small
    n        : fixed axial Fourier mode (integer)
    m2       : field mass squared m^2 >= 0 (1/length^2)

    n == 0 requires m2 > 0: the massless axisymmetric mode has no
    coercive energy to work with.
    """

    lambda_c: float
    mass: float
    spin: float = 0.0
    n: int = 1
    m2: float = 0.0

    def __post_init__(self):
        if not (self.lambda_c > 0):
            raise DomainError(f"need Lambda > 0, got {self.lambda_c}")
        if not (self.mass > 0):
            raise DomainError(f"need M > 0, got {self.mass}")
        if self.m2 < 0:
            raise DomainError(f"need m^2 >= 0, got {self.m2}")
        if int(self.n) != self.n:
            raise DomainError(f"axial mode n must be an integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.n == 0 and not (self.m2 > 0):
            raise DomainError("n = 0 requires m^2 > 0")

    @property
    def lam(self) -> float:
        """The rotational deformation constant lam = 1 + Lambda a^2/3."""
        return 1.0 + self.lambda_c * self.spin**2 / 3.0


def delta_r(p: SpacetimeParams, r):
    """Radial horizon function; quartic in r with roots at the horizons."""
    return (1.0 - p.lambda_c * np.asarray(r) ** 2 / 3.0) * (
        np.asarray(r) ** 2 + p.spin**2
    ) - 2.0 * p.mass * np.asarray(r)


def delta_r_prime(p: SpacetimeParams, r):
    """d(delta_r)/dr."""
    r = np.asarray(r)
    return (
        -(4.0 * p.lambda_c / 3.0) * r**3
        + 2.0 * (1.0 - p.lambda_c * p.spin**2 / 3.0) * r
        - 2.0 * p.mass
    )


def delta_theta(p: SpacetimeParams, cos_th):
    """Angular deformation 1 + (Lambda a^2/3) cos^2(theta)."""
    return 1.0 + (p.lambda_c * p.spin**2 / 3.0) * np.asarray(cos_th) ** 2


@dataclass(frozen=True)
class MetricFunctions:
    """Pointwise metric data at one radius (theta-dependent entries are
    arrays over the requested angles)."""

    delta_r: float
    delta_theta: np.ndarray
    rho2: np.ndarray
    sigma2: np.ndarray
    lam: float


def eval_metric_functions(p: SpacetimeParams, r, theta=None) -> MetricFunctions:
    """The five scalar metric functions at radius r and angles theta.

    theta defaults to the equator.  DomainError for r <= 0.
    """
    if not np.all(np.asarray(r) > 0):
        raise DomainError(f"need r > 0, got {r}")
    th = np.atleast_1d(np.pi / 2 if theta is None else theta).astype(float)
    c = np.cos(th)
    s2 = np.sin(th) ** 2
    dr = float(delta_r(p, r))
    dth = delta_theta(p, c)
    rho2 = np.asarray(r) ** 2 + p.spin**2 * c**2
    sigma2 = (np.asarray(r) ** 2 + p.spin**2) ** 2 * dth - p.spin**2 * dr * s2
    return MetricFunctions(dr, dth, rho2, sigma2, p.lam)


def _quartic_root_seeds(p: SpacetimeParams):
    """Approximate real roots of delta_r, used only to seed brackets."""
    coeffs = [
        -p.lambda_c / 3.0,
        0.0,
        1.0 - p.lambda_c * p.spin**2 / 3.0,
        -2.0 * p.mass,
        p.spin**2,
    ]
    rts = np.roots(coeffs)
    real = rts[np.abs(rts.imag) < 1e-8 * (1 + np.abs(rts.real))].real
    return np.sort(real)


def _all_roots(p: SpacetimeParams):
    """All four real roots of delta_r, Newton-polished, ascending.

    Only meaningful when the horizon pair exists (checked by the caller via
    find_horizons); used for the fully factored, cancellation-free
    evaluation of delta_r along the chart."""
    seeds = _quartic_root_seeds(p)
    out = []
    for seed in seeds:
        rt = float(seed)
        for _ in range(60):
            d = float(delta_r_prime(p, rt))
            if d == 0.0:
                break
            step = float(delta_r(p, rt)) / d
            rt -= step
            if abs(step) <= _ROOT_TOL * (1.0 + abs(rt)):
                break
        out.append(rt)
    return np.sort(np.asarray(out))


def find_horizons(p: SpacetimeParams) -> tuple[float, float]:
    """The two largest positive simple roots (r_minus, r_plus) of delta_r,
    with delta_r > 0 strictly between them.

    Bracketed bisection seeded from the quartic's companion eigenvalues,
    then a Newton polish to ~1e-13 relative.  NoHorizonGap when the root
    pattern is wrong (e.g. 9 Lambda M^2 >= 1 at a = 0, or spin so large the
    ordering degenerates).
    """
    seeds = _quartic_root_seeds(p)
    pos = seeds[seeds > 1e-12 * p.mass]
    if len(pos) < 2:
        raise NoHorizonGap(
            f"delta_r has {len(pos)} positive real roots; need two "
            f"(Lambda={p.lambda_c}, M={p.mass}, a={p.spin})"
        )
    cand = np.sort(pos)[-2:]
    roots = []
    for seed in cand:
        # bracket around the seed, then bisect + Newton
        h = max(1e-6 * seed, 1e-9)
        lo, hi = seed - h, seed + h
        k = 0
        while delta_r(p, lo) * delta_r(p, hi) > 0:
            h *= 4.0
            lo, hi = seed - h, seed + h
            k += 1
            if k > 40:
                raise NoHorizonGap(
                    "could not bracket a sign change of delta_r near "
                    f"r={seed:.6g}; roots are not simple"
                )
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if delta_r(p, lo) * delta_r(p, mid) <= 0:
                hi = mid
            else:
                lo = mid
        rt = 0.5 * (lo + hi)
        for _ in range(6):
            d = delta_r_prime(p, rt)
            if d == 0:
                break
            step = delta_r(p, rt) / d
            rt -= step
            if abs(step) < _ROOT_TOL * abs(rt):
                break
        roots.append(float(rt))
    r_lo, r_hi = sorted(roots)
    gap = r_hi - r_lo
    if gap < 1e-8 * r_hi:
        raise NoHorizonGap(f"horizon roots coincide: {r_lo} ~ {r_hi}")
    if delta_r(p, 0.5 * (r_lo + r_hi)) <= 0:
        raise NoHorizonGap(
            "delta_r is not positive between its two largest positive "
            "roots; no static-type block"
        )
    for rt in (r_lo, r_hi):
        if abs(delta_r_prime(p, rt)) < 1e-10 * (1 + rt**2):
            raise NoHorizonGap(f"root at r={rt:.6g} is not simple")
    return r_lo, r_hi


def surface_gravity(p: SpacetimeParams, r_h: float) -> float:
    """|delta_r'(r_h)| / (lam (r_h^2 + a^2)): the e-folding rate of the
    chart near the horizon at r_h."""
    return abs(float(delta_r_prime(p, r_h))) / (p.lam * (r_h**2 + p.spin**2))


def auto_x_max(p: SpacetimeParams) -> float:
    """Default half-width of the radial grid.

    Chosen so both coefficient tails have decayed through ~26 e-foldings
    (below 5e-12) at the seam: deep enough that every "neighbourhood of
    infinity" statement is satisfied to round-off, shallow enough that the
    horizon distances r_plus - r(x) stay well above the chart integrator's
    ~1e-13 noise floor.
    """
    r_lo, r_hi = find_horizons(p)
    k = min(surface_gravity(p, r_lo), surface_gravity(p, r_hi))
    return float(math.ceil(26.0 / k))


# ---------------------------------------------------------------------------
# cutoffs


def _splice(t):
    """C-infinity monotone step on [0,1]: exp(-1/t)/(exp(-1/t)+exp(-1/(1-t))).

    Returns (s, s', s'') with exact 0/1 plateaus outside [0.01, 0.99];
    the discarded tails are below 1e-43 so double precision cannot tell.
    """
    t = np.asarray(t, dtype=float)
    s = np.where(t >= 0.5, 1.0, 0.0)
    ds = np.zeros_like(t)
    d2s = np.zeros_like(t)
    m = (t > 0.01) & (t < 0.99)
    tm = t[m]
    e1 = np.exp(-1.0 / tm)
    e2 = np.exp(-1.0 / (1.0 - tm))
    den = e1 + e2
    g = 1.0 / tm**2 + 1.0 / (1.0 - tm) ** 2
    gp = -2.0 / tm**3 + 2.0 / (1.0 - tm) ** 3
    s[m] = e1 / den
    prod = e1 * e2
    ds[m] = prod * g / den**2
    dprod = prod * (1.0 / tm**2 - 1.0 / (1.0 - tm) ** 2)
    dden2 = 2.0 * den * (e1 / tm**2 - e2 / (1.0 - tm) ** 2)
    d2s[m] = (dprod * g + prod * gp) / den**2 - prod * g * dden2 / den**4
    return s, ds, d2s


def _cutoff_tables(x: np.ndarray, x_max: float):
    """i_plus, i_minus and first/second x-derivatives of i_plus, i_minus.

    i_plus^2 = splice(x / (X_max/4)); i_minus = sqrt(1 - i_plus^2), so
    i_plus^2 + i_minus^2 = 1 holds exactly at every node.  The transition
    sits on [0, X_max/4].
    """
    w_c = x_max / 4.0
    t = x / w_c
    s, ds, d2s = _splice(t)
    ds = ds / w_c
    d2s = d2s / w_c**2
    ip = np.sqrt(s)
    im = np.sqrt(np.maximum(1.0 - s, 0.0))
    dip = np.zeros_like(x)
    d2ip = np.zeros_like(x)
    dim = np.zeros_like(x)
    d2im = np.zeros_like(x)
    mp = s > 1e-28
    # i' = s'/(2 sqrt(s)); i'' = s''/(2 sqrt(s)) - s'^2/(4 s^(3/2))
    dip[mp] = ds[mp] / (2.0 * ip[mp])
    d2ip[mp] = d2s[mp] / (2.0 * ip[mp]) - ds[mp] ** 2 / (4.0 * s[mp] * ip[mp])
    mm = (1.0 - s) > 1e-28
    dim[mm] = -ds[mm] / (2.0 * im[mm])
    d2im[mm] = -d2s[mm] / (2.0 * im[mm]) - ds[mm] ** 2 / (
        4.0 * (1.0 - s[mm]) * im[mm]
    )
    return ip, im, dip, d2ip, dim, d2im


# ---------------------------------------------------------------------------
# the chart


@dataclass(frozen=True)
class RadialChart:
    """Tabulated radial chart on the uniform periodic grid.

    All arrays are indexed by the node index of x_nodes.  T(r(x)) = x holds
    by construction (the time map solves the same quadrature from the same
    base point); A is the rotation map, and phase_rot = n * A is the axial
    transport phase.  l_of_x = a n/(a^2+r^2) is the frame-dragging
    frequency at fixed mode n, with horizon limits l_minus, l_plus.
    """

    params: SpacetimeParams
    x_max: float
    n_x: int
    dx: float
    x_nodes: np.ndarray
    r_of_x: np.ndarray
    delta_r_of_x: np.ndarray
    l_of_x: np.ndarray
    dl_dx: np.ndarray
    rot_of_x: np.ndarray  # A(r(x))
    l_plus: float
    l_minus: float
    r_minus: float
    r_plus: float
    r0: float
    kappa_plus: float
    kappa_minus: float
    i_plus: np.ndarray
    i_minus: np.ndarray
    di_plus: np.ndarray
    d2i_plus: np.ndarray
    di_minus: np.ndarray
    d2i_minus: np.ndarray
    w_weight: np.ndarray
    q_weight: np.ndarray
    dist_plus: np.ndarray  # r_plus - r(x), positive, exact in the tails
    dist_minus: np.ndarray  # r(x) - r_minus, positive, exact in the tails
    truncation_error: float
    r_neg: float  # the two remaining quartic roots, for the factored form
    r_inner: float
    _r_query_lo: float = field(repr=False, compare=False, default=0.0)
    _r_query_hi: float = field(repr=False, compare=False, default=0.0)

    def delta_r_factored(self, r):
        """delta_r rebuilt from its polished roots; no cancellation near
        the horizons, strictly positive on the open block."""
        p = self.params
        return (
            (p.lambda_c / 3.0)
            * (r - self.r_neg)
            * (r - self.r_inner)
            * (r - self.r_minus)
            * (self.r_plus - r)
        )

    def T_of_r(self, r):
        """Time map T(r) (equals the chart coordinate x(r)) by adaptive
        quadrature from the midpoint radius against the factored delta_r.
        Accepts scalars or arrays of radii in the resolved range."""
        return self._quad_from_r0(r, rotation=False)

    def A_of_r(self, r):
        """Rotation map A(r), same quadrature as T."""
        return self._quad_from_r0(r, rotation=True)

    def _quad_from_r0(self, r, rotation: bool):
        arr = np.asarray(r, dtype=float)
        self._check_r_range(arr)
        p = self.params
        lam, a = p.lam, p.spin

        if rotation:
            def f(s):
                return lam * a / self.delta_r_factored(s)
        else:
            def f(s):
                return lam * (s * s + a * a) / self.delta_r_factored(s)

        def one(rv):
            val, _ = quad(f, self.r0, rv, limit=400, epsabs=1e-13, epsrel=1e-12)
            return val

        if arr.ndim == 0:
            return one(float(arr))
        return np.array([one(rv) for rv in arr.ravel()]).reshape(arr.shape)

    def _check_r_range(self, r):
        lo, hi = self._r_query_lo, self._r_query_hi
        if np.any(r < lo - 1e-12) or np.any(r > hi + 1e-12):
            raise DomainError(
                f"radius outside the resolved chart range [{lo:.12g}, {hi:.12g}]"
            )

    @property
    def phase_rot(self) -> np.ndarray:
        """Cumulative axial phase n*A(r(x)) (the integral of l along x)."""
        return self.params.n * self.rot_of_x


def build_background(
    p: SpacetimeParams,
    x_max: float | None = None,
    n_x: int = 2048,
) -> RadialChart:
    """Construct the radial chart.

    x_max=None picks auto_x_max(p).  Root-find the horizons, integrate
    dr/dx = delta_r/(lam (r^2+a^2)) and dA/dx = a/(r^2+a^2) outward from
    the midpoint radius with a high-order integrator, then tabulate
    cutoffs, weights and horizon-limit constants.

    GridError when the grid has fewer than 8 nodes per e-folding of the
    faster-decaying side (the chart would alias its own tails).
    """
    if n_x < 16:
        raise GridError(f"need N_x >= 16, got {n_x}")
    if n_x % 2:
        raise GridError(f"need even N_x (periodic grid symmetric about 0), got {n_x}")
    r_lo, r_hi = find_horizons(p)
    if x_max is None:
        x_max = auto_x_max(p)
    x_max = float(x_max)
    if not x_max > 0:
        raise GridError(f"need X_max > 0, got {x_max}")
    kp = surface_gravity(p, r_hi)
    km = surface_gravity(p, r_lo)
    dx = 2.0 * x_max / n_x
    if 1.0 / (max(kp, km) * dx) < 8.0:
        raise GridError(
            f"{1.0/(max(kp, km)*dx):.2f} nodes per e-folding < 8: "
            f"raise N_x or lower X_max"
        )
    x = (np.arange(n_x) - n_x // 2) * dx  # x[n_x//2] == 0 exactly
    r0 = 0.5 * (r_lo + r_hi)

    lam = p.lam
    a = p.spin

    def rhs(_, y):
        r = y[0]
        return [
            float(delta_r(p, r)) / (lam * (r * r + a * a)),
            a / (r * r + a * a),
        ]

    def _integrate(ts):
        # ts ascending (right half) or descending (left half), from near 0
        if len(ts) == 0:
            return np.zeros((2, 0))
        sol = solve_ivp(
            rhs,
            (0.0, ts[-1]),
            [r0, 0.0],
            t_eval=ts,
            method="DOP853",
            rtol=1e-13,
            atol=1e-15,
        )
        if not sol.success:
            raise GridError(f"chart integration failed: {sol.message}")
        return sol.y

    ix0 = n_x // 2
    right = _integrate(x[ix0:])
    left = _integrate(x[:ix0][::-1])
    r_x = np.concatenate([left[0][::-1], right[0]])
    rot_x = np.concatenate([left[1][::-1], right[1]])

    # Splice exact linearized tails where the ODE values sink into the
    # round-off floor.  Beyond the splice radius the horizon distance obeys
    # d' = -kappa d up to a relative O(d) correction (< 1e-10 at the chosen
    # threshold), so the analytic tail is *more* accurate than the
    # integrator there, strictly positive, and decays with the exact rate.
    gap = r_hi - r_lo
    tau = 1e-11 * r_hi
    d_plus = r_hi - r_x
    d_minus = r_x - r_lo
    hit_r = np.nonzero(d_plus[ix0:] < tau)[0]
    if len(hit_r):
        jr = ix0 + hit_r[0]
        d_plus[jr:] = d_plus[jr] * np.exp(-kp * (x[jr:] - x[jr]))
        d_minus[jr:] = gap - d_plus[jr:]
        r_x[jr:] = r_hi - d_plus[jr:]
        rot_x[jr:] = rot_x[jr] + (a / (r_hi * r_hi + a * a)) * (x[jr:] - x[jr])
    hit_l = np.nonzero(d_minus[:ix0] < tau)[0]
    if len(hit_l):
        jl = hit_l[-1]
        d_minus[: jl + 1] = d_minus[jl] * np.exp(-km * (x[jl] - x[: jl + 1]))
        d_plus[: jl + 1] = gap - d_minus[: jl + 1]
        r_x[: jl + 1] = r_lo + d_minus[: jl + 1]
        rot_x[: jl + 1] = rot_x[jl] + (a / (r_lo * r_lo + a * a)) * (
            x[: jl + 1] - x[jl]
        )

    if np.any(np.diff(r_x) < 0):
        raise GridError("r(x) decreased somewhere; integration broke")
    resolved = (d_plus > 1e-10 * r_hi) & (d_minus > 1e-10 * r_hi)
    if np.any(np.diff(r_x[resolved]) <= 0):
        raise GridError("r(x) not strictly increasing on the resolved block")

    # factored, cancellation-free delta_r along the chart:
    # delta_r = (Lambda/3) (r - r_neg)(r - r_in) d_minus d_plus
    rts = _all_roots(p)
    r_neg, r_in = rts[0], rts[1]
    dr_x = (p.lambda_c / 3.0) * (r_x - r_neg) * (r_x - r_in) * d_minus * d_plus
    l_x = a * p.n / (a * a + r_x * r_x)
    dl_x = -2.0 * a * r_x * p.n * dr_x / (lam * (a * a + r_x * r_x) ** 3)
    l_plus = a * p.n / (a * a + r_hi * r_hi)
    l_minus = a * p.n / (a * a + r_lo * r_lo)

    ip, im, dip, d2ip, dim, d2im = _cutoff_tables(x, x_max)
    q = np.sqrt(d_plus * d_minus)
    w = 1.0 / q

    trunc = max(math.exp(-kp * x_max), math.exp(-km * x_max))
    r_resolved = r_x[resolved]
    return RadialChart(
        params=p,
        x_max=x_max,
        n_x=n_x,
        dx=dx,
        x_nodes=x,
        r_of_x=r_x,
        delta_r_of_x=np.asarray(dr_x),
        l_of_x=l_x,
        dl_dx=dl_x,
        rot_of_x=rot_x,
        l_plus=l_plus,
        l_minus=l_minus,
        r_minus=r_lo,
        r_plus=r_hi,
        r0=r0,
        kappa_plus=kp,
        kappa_minus=km,
        i_plus=ip,
        i_minus=im,
        di_plus=dip,
        d2i_plus=d2ip,
        di_minus=dim,
        d2i_minus=d2im,
        w_weight=w,
        q_weight=q,
        dist_plus=d_plus,
        dist_minus=d_minus,
        truncation_error=trunc,
        r_neg=r_neg,
        r_inner=r_in,
        _r_query_lo=float(r_resolved[0]),
        _r_query_hi=float(r_resolved[-1]),
    )


def fit_decay_rate(chart: RadialChart, side: str = "plus") -> float:
    """Fitted e-folding rate of the chart's approach to a horizon radius.

    Least squares on log(r_plus - r(x)) (resp. log(r(x) - r_minus)) over
    the window where the distance is between 1e-9 and 1e-5 of the horizon
    radius: late enough that the subleading exponential is invisible,
    early enough that the integrator noise floor (~1e-13 relative) is too.
    Falls back to the widest clean window available on narrow grids.
    Returns a positive rate comparable to kappa_plus / kappa_minus.
    """
    if side == "plus":
        d = chart.dist_plus / chart.r_plus
        xs = chart.x_nodes
    elif side == "minus":
        d = chart.dist_minus / chart.r_plus
        xs = -chart.x_nodes
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    sel = (d > 1e-9) & (d < 1e-5)
    if np.count_nonzero(sel) < 16:
        sel = (d > 1e-9) & (d < 1e-2)
    if np.count_nonzero(sel) < 16:
        raise GridError("no clean decay window on this grid; widen X_max")
    slope = np.polyfit(xs[sel], np.log(d[sel]), 1)[0]
    return float(-slope)


def horizon_point_maps(chart: RadialChart, t, r, theta, phi) -> dict:
    """Coordinate bookkeeping for one event (t, r, theta, phi).

    Returns the outgoing-chart point (*t = t - T(r), same r/theta,
    *phi = phi - A(r)), the ingoing-chart point (t* = t + T(r),
    phi* = phi + A(r)), and the two points the event's null generators hit
    on the future horizons:

      f_plus : (*t, r_plus, theta, *phi)   in the outgoing chart
      f_minus: (t*, r_minus, theta, phi*)  in the ingoing chart

    T and A are evaluated by direct adaptive quadrature from the midpoint
    radius, so any r strictly inside (r_minus, r_plus) is accepted.
    """
    p = chart.params
    if not (chart.r_minus < r < chart.r_plus):
        raise DomainError(
            f"r={r} outside the open block ({chart.r_minus}, {chart.r_plus})"
        )
    lam, a = p.lam, p.spin

    def dT(s):
        return lam * (s * s + a * a) / float(delta_r(p, s))

    def dA(s):
        return lam * a / float(delta_r(p, s))

    T, _ = quad(dT, chart.r0, r, limit=200)
    A, _ = quad(dA, chart.r0, r, limit=200)
    two_pi = 2.0 * math.pi
    star = (t - T, r, theta, (phi - A) % two_pi)
    ingo = (t + T, r, theta, (phi + A) % two_pi)
    return {
        "star_kerr": star,
        "kerr_star": ingo,
        "f_plus": (t - T, chart.r_plus, theta, (phi - A) % two_pi),
        "f_minus": (t + T, chart.r_minus, theta, (phi + A) % two_pi),
    }


def export_chart_csv(chart: RadialChart, path) -> None:
    """Write the chart tables (x, r, delta_r, l, A, i_plus, i_minus, w)."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "r", "delta_r", "l", "A", "i_plus", "i_minus", "w"])
        for j in range(chart.n_x):
            wr.writerow(
                [
                    "%.17g" % chart.x_nodes[j],
                    "%.17g" % chart.r_of_x[j],
                    "%.17g" % chart.delta_r_of_x[j],
                    "%.17g" % chart.l_of_x[j],
                    "%.17g" % chart.rot_of_x[j],
                    "%.17g" % chart.i_plus[j],
                    "%.17g" % chart.i_minus[j],
                    "%.17g" % chart.w_weight[j],
                ]
            )
