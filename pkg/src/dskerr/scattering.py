"""Wave operators between the full evolution and its comparison transports.

The inverse operators evolve Cauchy data forward under the full dynamics,
mask to one side with the spliced cutoff, and pull back along the matching
transport flow; the direct operators push one-way comparison data forward
along the transport flow and return along the full dynamics.  Both are
Cauchy-monitored at exact-grid-shift checkpoints and declare convergence
from the geometric tail of the checkpoint differences.

Two implementation notes that keep the cost inside the stated budgets:

* Inverse side: the transport flow preserves its own energy norm exactly,
  so the checkpoint difference ``|a_{k+1} - a_k|`` equals the norm of a
  single short pullback against the previous cut state.  Only the declared
  limit needs one full-length pullback.
* Direct side: the full dynamics is not norm-preserving, so the monitored
  sequence is the forward-frame increment (one short full-dynamics step per
  checkpoint); its norm bounds the true checkpoint difference up to the
  fitted group-bound factor.  One full-length backward evolution at the
  declared time produces the result.

Cut states are only near-admissible for the transport formula: the cutoff
derivative breaks the phased integral condition by an amount that decays at
the same exponential rate as the Cauchy tail itself, so the transported
plateau stays at the declaration floor and is discarded by the outflow flag.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, GridError, NoConvergence
from .evolution import cfl_max_dt, evolve
from .operators import (
    FieldState,
    GeneratorSet,
    energy_norm,
    gaussian_state,
    norm2,
    psi_functional,
)
from .transport import admissibility_defect, kirchhoff_evolve, _phased_integrand

SIDES = ("plus", "minus")
_T_NORM = {"plus": "T_plus", "minus": "T_minus"}
_TINY = 1e-300

# geometric-tail declaration: fitted ratio of successive checkpoint
# differences must sit below this before the projected tail is trusted
_RHO_MAX = 0.95
_FIT_WINDOW = 5


@dataclass
class WaveOpRecord:
    """One wave-operator computation: the limit and how it was reached.

    ``history`` rows are ``(t, cauchy_diff, norm)`` per checkpoint; ``rate``
    is the fitted exponential decay rate of the differences (per unit time),
    None when the history never shows a clean decaying stretch.
    """

    limit: FieldState
    history: list
    converged: bool
    rate: float | None
    t_final: float
    side: str


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def _cut_profile(gens: GeneratorSet, side: str, power: int) -> np.ndarray:
    base = gens.chart.i_plus if side == "plus" else gens.chart.i_minus
    return (base**power)[:, None]


def _apply_cut(u: FieldState, cut: np.ndarray) -> FieldState:
    return FieldState(u0=cut * u.u0, u1=cut * u.u1, n=u.n)


def _diff(a: FieldState, b: FieldState) -> FieldState:
    return FieldState(u0=a.u0 - b.u0, u1=a.u1 - b.u1, n=a.n)


def _zeros_like(u: FieldState) -> FieldState:
    return FieldState(u0=np.zeros_like(u.u0), u1=np.zeros_like(u.u1), n=u.n)


def _step_setup(gens: GeneratorSet, dt, checkpoint_every: int):
    """Checkpoint interval; must be an exact grid shift for the pullbacks."""
    if dt is None:
        # largest unit fraction dx/m under the stability step whose m divides
        # checkpoint_every, so the checkpoint interval is an exact grid shift
        m = max(4, math.ceil(gens.chart.dx / cfl_max_dt(gens)))
        while checkpoint_every % m:
            m += 1
        dt = gens.chart.dx / m
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt > cfl_max_dt(gens):
        raise GridError(f"dt={dt:g} above the stability step {cfl_max_dt(gens):g}")
    delta = checkpoint_every * dt
    shift = delta / gens.chart.dx
    if abs(shift - round(shift)) > 1e-9 * max(1.0, abs(shift)):
        raise GridError(
            "checkpoint interval is not an exact grid shift; "
            "adjust dt or checkpoint_every"
        )
    return dt, delta


def _tail_declared(history: list, floor: float) -> bool:
    if len(history) < _FIT_WINDOW:
        return False
    d = np.array([row[1] for row in history[-_FIT_WINDOW:]])
    if np.all(d < 0.01 * floor):
        return True  # already at the rounding floor, nothing left to wait for
    if np.any(d <= 0):
        return False
    k = np.arange(float(_FIT_WINDOW))
    rho = math.exp(np.polyfit(k, np.log(d), 1)[0])
    return rho < _RHO_MAX and d[-1] * rho / (1.0 - rho) < floor


def history_decay_rate(history: list, floor: float) -> float | None:
    """Exponential rate (per unit time) of the late Cauchy tail.

    Fitted over the final two decades of decay (the asymptotic regime); the
    transient peak and everything before it are excluded, as are entries at
    the rounding floor.  None when fewer than three checkpoints qualify.
    """
    if len(history) < 3:
        return None
    t = np.array([row[0] for row in history])
    d = np.array([row[1] for row in history])
    d_max = float(d.max())
    if d_max <= 0:
        return None
    tail = d[-1] if d[-1] > 0 else float(d[d > 0].min(initial=d_max))
    sel = (d > max(tail * 1e-3, 0.3 * floor)) & (d <= 100.0 * tail)
    sel[: int(np.argmax(d))] = False
    if int(sel.sum()) < 3:
        return None
    slope = np.polyfit(t[sel], np.log(d[sel]), 1)[0]
    return float(-slope)


def _inverse_tracks(
    u: FieldState,
    sides: tuple,
    t_max: float,
    tol: float,
    gens: GeneratorSet,
    dt,
    checkpoint_every: int,
    cutoff_power: int,
) -> dict:
    dt, delta = _step_setup(gens, dt, checkpoint_every)
    tracks = {}
    for side in sides:
        _check_side(side)
        scale = math.sqrt(energy_norm(gens, u, _T_NORM[side]))
        tracks[side] = {
            "scale": scale,
            "cut": _cut_profile(gens, side, cutoff_power),
            "history": [],
            "declared": None,
        }
    if all(tr["scale"] == 0.0 for tr in tracks.values()):
        return {
            side: WaveOpRecord(_zeros_like(u), [], True, None, 0.0, side)
            for side in sides
        }
    for tr in tracks.values():
        tr["prev"] = _apply_cut(u, tr["cut"])

    state = u.copy()
    n_ck = max(1, int(math.ceil(t_max / delta - 1e-9)))
    for k in range(1, n_ck + 1):
        state = evolve(state, delta, "full", gens, dt=dt, check_guard=False)
        t_k = k * delta
        done = True
        for side, tr in tracks.items():
            if tr["declared"] is not None:
                continue
            c_now = _apply_cut(state, tr["cut"])
            back = kirchhoff_evolve(c_now, -delta, side, gens, outflow=True)
            kind = _T_NORM[side]
            d = math.sqrt(energy_norm(gens, _diff(back, tr["prev"]), kind))
            nrm = math.sqrt(energy_norm(gens, c_now, kind))
            tr["history"].append((t_k, d, nrm))
            tr["prev"] = c_now
            tr["t_prev"] = t_k
            if _tail_declared(tr["history"], tol * max(tr["scale"], _TINY)):
                tr["declared"] = t_k
            else:
                done = False
        if done:
            break

    records = {}
    for side, tr in tracks.items():
        floor = tol * max(tr["scale"], _TINY)
        rate = history_decay_rate(tr["history"], floor)
        if tr["declared"] is None:
            raise NoConvergence(
                f"side={side}: Cauchy tail above tol={tol:g} at t_max={t_max:g} "
                f"(fitted rate {rate if rate is not None else float('nan'):.4g})",
                history=tr["history"],
                rate=rate,
            )
        limit = kirchhoff_evolve(tr["prev"], -tr["declared"], side, gens, outflow=True)
        records[side] = WaveOpRecord(
            limit=limit,
            history=tr["history"],
            converged=True,
            rate=rate,
            t_final=tr["declared"],
            side=side,
        )
    return records


def inverse_wave_op(
    u: FieldState,
    side: str,
    t_max: float,
    tol: float,
    gens: GeneratorSet,
    dt=None,
    checkpoint_every: int = 35,
    cutoff_power: int = 2,
) -> WaveOpRecord:
    """Pull the large-time full evolution back along one comparison flow.

    Evolves ``u`` under the full dynamics, masks with the side's spliced
    cutoff (squared by default), pulls back exactly along the transport
    flow, and declares convergence from the geometric tail of the
    checkpoint differences in the side's transport energy norm.  Raises
    NoConvergence (carrying the history and the fitted rate) if the tail
    never meets ``tol`` relative to the input's transport norm.
    """
    return _inverse_tracks(
        u, (side,), t_max, tol, gens, dt, checkpoint_every, cutoff_power
    )[side]


def global_omega(
    u: FieldState,
    t_max: float,
    tol: float,
    gens: GeneratorSet,
    dt=None,
    checkpoint_every: int = 35,
    cutoff_power: int = 2,
) -> tuple:
    """Both one-sided inverse operators sharing one forward evolution.

    Returns the ``(minus, plus)`` pair of WaveOpRecord; each side declares
    on its own schedule, and the run stops when both have.
    """
    recs = _inverse_tracks(
        u, ("minus", "plus"), t_max, tol, gens, dt, checkpoint_every, cutoff_power
    )
    return recs["minus"], recs["plus"]


def _admissibility_precheck(u: FieldState, side: str, chart) -> None:
    # A guardrail against structurally one-way-violating inputs, not a
    # precision test: numerically declared limits legitimately carry a
    # truncation-level defect (~ the declaration floor), while non-members
    # sit at O(1).  The threshold separates the two by about three orders
    # either way.
    defect = admissibility_defect(u, side, chart)
    scale = chart.dx * np.sum(np.abs(_phased_integrand(u, side, chart))) + _TINY
    rel = float(np.max(np.abs(defect)) / scale)
    if rel > 1e-3:
        raise AdmissibilityError(
            f"profile violates the phased integral condition at {rel:.3e} "
            "relative; make_admissible first"
        )


def direct_wave_op_record(
    profile: FieldState,
    side: str,
    t_max: float,
    tol: float,
    gens: GeneratorSet,
    dt=None,
    checkpoint_every: int = 35,
    cutoff_power: int = 2,
) -> WaveOpRecord:
    """Push one-way comparison data forward, return along the full dynamics.

    The monitored sequence is the forward-frame increment between each
    transported cut state and one short full-dynamics step of the previous
    one, measured in the full inhomogeneous energy norm; the declared limit
    is produced by a single backward full evolution.
    """
    _check_side(side)
    dt, delta = _step_setup(gens, dt, checkpoint_every)
    _admissibility_precheck(profile, side, gens.chart)
    scale = math.sqrt(energy_norm(gens, profile, _T_NORM[side]))
    if scale == 0.0:
        return WaveOpRecord(_zeros_like(profile), [], True, None, 0.0, side)
    cut = _cut_profile(gens, side, cutoff_power)
    p = profile
    c_prev = _apply_cut(p, cut)
    history = []
    declared = None
    n_ck = max(1, int(math.ceil(t_max / delta - 1e-9)))
    for k in range(1, n_ck + 1):
        p = kirchhoff_evolve(p, delta, side, gens, outflow=True)
        t_k = k * delta
        c_now = _apply_cut(p, cut)
        fwd = evolve(c_prev, delta, "full", gens, dt=dt, check_guard=False)
        d = math.sqrt(energy_norm(gens, _diff(c_now, fwd), "full_inhom"))
        nrm = math.sqrt(energy_norm(gens, c_now, "full_inhom"))
        history.append((t_k, d, nrm))
        c_prev = c_now
        if _tail_declared(history, tol * scale):
            declared = t_k
            break
    rate = history_decay_rate(history, tol * scale)
    if declared is None:
        raise NoConvergence(
            f"side={side}: forward-frame increments above tol={tol:g} at "
            f"t_max={t_max:g} "
            f"(fitted rate {rate if rate is not None else float('nan'):.4g})",
            history=history,
            rate=rate,
        )
    limit = evolve(c_prev, -declared, "full", gens, dt=dt, check_guard=False)
    return WaveOpRecord(
        limit=limit,
        history=history,
        converged=True,
        rate=rate,
        t_final=declared,
        side=side,
    )


def direct_wave_op(
    profile: FieldState,
    side: str,
    t_max: float,
    tol: float,
    gens: GeneratorSet,
    dt=None,
    checkpoint_every: int = 35,
    cutoff_power: int = 2,
) -> FieldState:
    """The limit state of :func:`direct_wave_op_record`."""
    return direct_wave_op_record(
        profile, side, t_max, tol, gens, dt, checkpoint_every, cutoff_power
    ).limit


def global_W(
    pair: tuple,
    t_max: float,
    tol: float,
    gens: GeneratorSet,
    dt=None,
    checkpoint_every: int = 35,
    cutoff_power: int = 2,
) -> FieldState:
    """Glued direct operator: minus side on the left member, plus on the right."""
    u_left, u_right = pair
    w_l = direct_wave_op(
        u_left, "minus", t_max, tol, gens, dt, checkpoint_every, cutoff_power
    )
    w_r = direct_wave_op(
        u_right, "plus", t_max, tol, gens, dt, checkpoint_every, cutoff_power
    )
    return FieldState(u0=w_l.u0 + w_r.u0, u1=w_l.u1 + w_r.u1, n=w_l.n)


def reconstruct_from_profiles(
    pair: tuple, t_back: float, gens: GeneratorSet, dt=None
) -> FieldState:
    """Fixed-horizon inversion of the pullback pair.

    The Cauchy-monitored direct operator needs a settling run as long as the
    content of its input profile, which for pullback limits (whose support
    stretches back through the whole emission history) collides with the
    absorbing layer.  Inverting a known pullback needs none of that: replay
    both profiles forward by the pullback's own duration along their exact
    transport flows, glue them with the cut partition (the glued state ~is~
    the recorded large-time full state), and run the full dynamics backward
    with the absorbing layer off, so the replay is reversible and the only
    errors left are the declared truncation tails and the time-stepper's.
    """
    m, p = pair
    # Profile content carried past the grid edge by the replay sits beyond
    # the recorded horizon by t_back already; keeping it would wrap it onto
    # the opposite end, so let the transport discard it instead.
    tm = kirchhoff_evolve(m, t_back, "minus", gens, outflow=True)
    tp = kirchhoff_evolve(p, t_back, "plus", gens, outflow=True)
    im2 = (gens.chart.i_minus**2)[:, None]
    ip2 = (gens.chart.i_plus**2)[:, None]
    glued = FieldState(
        u0=im2 * tm.u0 + ip2 * tp.u0,
        u1=im2 * tm.u1 + ip2 * tp.u1,
        n=m.n,
    )
    return evolve(
        glued, -t_back, "full", gens, dt=dt, check_guard=False, closure=False
    )


def s_diagnostic(
    u: FieldState, t_max: float, gens: GeneratorSet, dt=None, stride: int = 1
) -> float:
    """Max of the left-cutoff asymptotic norm over the final half of the run.

    Evolves under the plus asymptotic dynamics and records the single-power
    left cutoff in the matching norm at every ``stride``-th step; for data
    in the range of the asymptotic inverse operator this tends to zero
    (mass escapes rightward), while left-escaping data keeps its norm until
    absorbed.
    """
    if dt is None:
        dt = cfl_max_dt(gens)
    cut = gens.chart.i_minus[:, None]
    vals = []

    def record(t, st):
        w = FieldState(u0=cut * st.u0, u1=cut * st.u1, n=st.n)
        vals.append((t, math.sqrt(energy_norm(gens, w, "inf_plus"))))

    evolve(
        u,
        t_max,
        "inf_plus",
        gens,
        dt=dt,
        check_guard=False,
        snapshot_every=stride,
        snapshot_cb=record,
    )
    half = [v for (t, v) in vals if t >= t_max / 2.0 - 1e-12]
    return max(half) if half else 0.0


def membership_residual(gens: GeneratorSet, u: FieldState, side: str) -> float:
    """Relative size of the one-way membership functional on a state.

    Zero (to rounding) exactly when the state lies in the side's one-way
    transport space; the denominator is the side's transport energy norm.
    """
    num = math.sqrt(norm2(gens, psi_functional(gens, u, side)))
    den = math.sqrt(energy_norm(gens, u, _T_NORM[side]))
    return num / max(den, _TINY)


def write_history_csv(path, record: WaveOpRecord) -> None:
    """Emit the convergence history as CSV rows (t, cauchy_diff, norm)."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "cauchy_diff", "norm"])
        for t, d, nrm in record.history:
            wr.writerow(["%.17g" % t, "%.17g" % d, "%.17g" % nrm])


# ---------------------------------------------------------------------------
# random states inside the causal scheduling class
#
# Wave-operator runs declare convergence around t* ~ R + 100 time units; the
# absorbing layer starts at 0.85*X_max.  Keeping |center| <= 4 and width
# <= 2.5 keeps the tail mass that reaches the layer before declaration below
# the declaration floor, so the layer never contaminates the Cauchy tail.
#
# Two corners of state space are excluded from the random class because they
# park mass on the interior potential barrier, whose slow leak (the
# ell-independent barrier-top rate, ~0.07 at the reference parameters) then
# holds the Cauchy tail above any practical floor until the absorbing layer
# interferes: near-zero momentum (quasistatic content dwells at the barrier)
# and centers on top of it.  Momentum magnitude and center draws below stay
# clear of both while keeping both propagation directions populated.


def random_scatter_state(gens: GeneratorSet, seed: int = 0) -> FieldState:
    """Random compact Cauchy data narrow enough for wave-operator budgets."""
    rng = np.random.default_rng(seed)
    sign = 1.0 if rng.integers(2) else -1.0
    return gaussian_state(
        gens,
        center=float(rng.uniform(-2.0, 3.5)),
        width=float(rng.uniform(1.2, 2.2)),
        momentum=sign * float(rng.uniform(0.7, 2.0)),
        seed=int(rng.integers(1 << 31)),
    )


def random_member_profile(gens: GeneratorSet, side: str, seed: int = 0) -> FieldState:
    """Random compact state satisfying the side's one-way membership relation.

    Built as u1 = i(s d/dx + i l) u0 with s = +1 (plus) or -1 (minus); such
    data is automatically admissible (the phased integrand becomes a total
    derivative of compactly supported data), so no correction bump is needed
    and the support stays narrow.
    """
    _check_side(side)
    rng = np.random.default_rng(seed)
    ch = gens.chart
    x = ch.x_nodes
    center = float(rng.uniform(-2.0, 3.5))
    width = float(rng.uniform(1.2, 2.2))
    sign = 1.0 if rng.integers(2) else -1.0
    momentum = sign * float(rng.uniform(0.7, 2.0))
    k = min(3, gens.lam_q.size)
    coef = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / (
        1.0 + gens.lam_q[:k]
    )
    prof = np.exp(-((x - center) ** 2) / (2.0 * width**2) + 1j * momentum * x)
    u0 = prof[:, None] * (gens.z_modes[:, :k] @ coef)[None, :]
    sgn = 1.0 if side == "plus" else -1.0
    u1 = 1j * (sgn * gens.d1x(u0) + 1j * gens.l_x[:, None] * u0)
    return FieldState(u0=u0, u1=u1, n=gens.params.n)
