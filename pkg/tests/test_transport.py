"""Comparison transport: closed-form propagators, admissibility, the
two-characteristic evolution, and the left/right split."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from dskerr.errors import AdmissibilityError, GridError
from dskerr.operators import (
    FieldState,
    dense_hamiltonian,
    energy_norm,
    gaussian_state,
    psi_functional,
)
from dskerr.transport import (
    TRANSPORT_KINDS,
    admissibility_defect,
    exact_transport,
    kirchhoff_evolve,
    make_admissible,
    split_left_right,
    tilde_u1,
)


def banded_profile(chart, seed=0, center=0.0, width=4.0, momentum=1.0):
    rng = np.random.default_rng(seed)
    x = chart.x_nodes
    f = np.exp(-((x - center) ** 2) / (2 * width**2) + 1j * momentum * x)
    return f * (1.0 + 0.3 * rng.standard_normal())


def membership_state(gens, side, seed=0):
    """Cauchy data satisfying the one-characteristic relation u1 = i w u0."""
    u0 = gaussian_state(gens, width=2.0, momentum=1.0, seed=seed).u0
    l2 = gens.l_x[:, None]
    if side == "plus":
        u1 = 1j * (gens.d1x(u0) + 1j * l2 * u0)
    else:
        u1 = 1j * (-gens.d1x(u0) + 1j * l2 * u0)
    return FieldState(u0=u0, u1=u1, n=gens.params.n)


def rel_diff(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


# ---------------------------------------------------------------------------
# the four closed-form propagators


def test_kind_validation(chart):
    with pytest.raises(ValueError):
        exact_transport(np.zeros(chart.n_x, dtype=complex), 0.0, "w_sideways", chart)


@pytest.mark.parametrize("kind", TRANSPORT_KINDS)
def test_aligned_shift_is_unitary_and_moves_support(chart, kind):
    f = banded_profile(chart, seed=3)
    t = 40 * chart.dx
    out = exact_transport(f, t, kind, chart)
    n0 = np.sum(np.abs(f) ** 2)
    n1 = np.sum(np.abs(out) ** 2)
    assert abs(n1 - n0) / n0 < 1e-13
    shift = np.argmax(np.abs(out)) - np.argmax(np.abs(f))
    expected = 40 if kind in ("w_plus", "w_tilde_plus") else -40
    assert shift == expected


def test_t_zero_is_exact_identity(chart):
    f = banded_profile(chart, seed=5)
    for kind in TRANSPORT_KINDS:
        assert np.array_equal(exact_transport(f, 0.0, kind, chart), f)


@pytest.mark.parametrize("kind", TRANSPORT_KINDS)
def test_group_law_aligned(chart, kind):
    f = banded_profile(chart, seed=7)
    t1, t2 = 23 * chart.dx, 41 * chart.dx
    two_leg = exact_transport(exact_transport(f, t1, kind, chart), t2, kind, chart)
    one_leg = exact_transport(f, t1 + t2, kind, chart)
    assert rel_diff(two_leg, one_leg) < 1e-12


@settings(max_examples=25, deadline=None)
@given(m1=st.integers(-80, 80), m2=st.integers(-80, 80))
def test_group_law_property(chart, m1, m2):
    f = banded_profile(chart, seed=11)
    t1, t2 = m1 * chart.dx, m2 * chart.dx
    two_leg = exact_transport(exact_transport(f, t1, "w_plus", chart), t2, "w_plus", chart)
    one_leg = exact_transport(f, t1 + t2, "w_plus", chart)
    assert rel_diff(two_leg, one_leg) < 1e-12


def test_wrap_detection_and_outflow(chart):
    x = chart.x_nodes
    f = np.exp(-((x - 105.0) ** 2) / 8.0).astype(complex)
    t = 500 * chart.dx  # entire support lands past the seam
    with pytest.raises(GridError):
        exact_transport(f, t, "w_plus", chart)
    out = exact_transport(f, t, "w_plus", chart, outflow=True)
    assert np.max(np.abs(out)) < 1e-12 * np.max(np.abs(f))


def test_shift_larger_than_grid_rejected(chart):
    f = banded_profile(chart)
    with pytest.raises(GridError):
        exact_transport(f, chart.n_x * chart.dx, "w_plus", chart)


def test_non_aligned_needs_flag_and_is_consistent(chart):
    f = banded_profile(chart, seed=13, width=3.0)
    t_half = 0.5 * chart.dx
    with pytest.raises(GridError):
        exact_transport(f, t_half, "w_plus", chart)
    # two interpolated half-steps against one exact full step: the only
    # discrepancy is the spline evaluation of the cumulative phase
    two_half = exact_transport(
        exact_transport(f, t_half, "w_plus", chart, allow_interpolation=True),
        t_half,
        "w_plus",
        chart,
        allow_interpolation=True,
    )
    one_full = exact_transport(f, chart.dx, "w_plus", chart)
    assert rel_diff(two_half, one_full) < 1e-7


def test_transport_2d_matches_columnwise(chart):
    f = banded_profile(chart, seed=17)
    g = banded_profile(chart, seed=19, momentum=-1.0)
    both = np.stack([f, g], axis=1)
    out = exact_transport(both, 12 * chart.dx, "w_minus", chart)
    assert np.array_equal(out[:, 0], exact_transport(f, 12 * chart.dx, "w_minus", chart))
    assert np.array_equal(out[:, 1], exact_transport(g, 12 * chart.dx, "w_minus", chart))


# ---------------------------------------------------------------------------
# admissibility and the phased antiderivative


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_membership_data_is_admissible(gens, chart, side):
    u = membership_state(gens, side, seed=2)
    scale = np.max(np.abs(u.u1))
    assert np.max(np.abs(admissibility_defect(u, side, chart))) < 1e-12 * scale
    aux = tilde_u1(u, side, chart)
    assert rel_diff(aux, u.u0) < 1e-12


def test_defective_state_plateau_matches_defect(gens, chart):
    # break admissibility deliberately: the phased antiderivative then ends
    # on a plateau whose height is exactly the total phased integral
    u = membership_state(gens, "plus", seed=4)
    bad = FieldState(u0=u.u0, u1=u.u1 + 0.05 * np.abs(u.u0), n=u.n)
    d = admissibility_defect(bad, "plus", chart)
    assert np.max(np.abs(d)) > 1e-4
    aux = tilde_u1(bad, "plus", chart)
    assert np.max(np.abs(np.abs(aux[-1, :]) - np.abs(d))) < 1e-10 * np.max(np.abs(d))


def test_make_admissible_kills_defect_and_is_local(gens, chart):
    u = membership_state(gens, "plus", seed=6)
    bad = FieldState(u0=u.u0, u1=u.u1 + 0.05 * np.abs(u.u0), n=u.n)
    fixed = make_admissible(bad, "plus", chart)
    scale = np.max(np.abs(fixed.u1))
    assert np.max(np.abs(admissibility_defect(fixed, "plus", chart))) < 1e-12 * scale
    assert np.array_equal(fixed.u0, bad.u0)
    change = np.abs(fixed.u1 - bad.u1)
    far = np.abs(chart.x_nodes) > chart.x_max / 2
    assert np.max(change[far]) < 1e-3 * np.max(change)


# ---------------------------------------------------------------------------
# the two-characteristic closed-form evolution


def admissible_state(gens, chart, side, seed=0):
    u0 = gaussian_state(gens, width=2.5, momentum=0.7, seed=seed)
    mixed = FieldState(u0=u0.u0, u1=0.6 * u0.u1, n=u0.n)
    return make_admissible(mixed, side, chart)


def test_kirchhoff_t_zero(gens, chart):
    u = admissible_state(gens, chart, "plus", seed=1)
    out = kirchhoff_evolve(u, 0.0, "plus", gens)
    assert rel_diff(out.u0, u.u0) < 1e-12
    assert rel_diff(out.u1, u.u1) < 1e-12


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_kirchhoff_group_law(gens, chart, side):
    u = admissible_state(gens, chart, side, seed=3)
    t1, t2 = 18 * chart.dx, 29 * chart.dx
    two_leg = kirchhoff_evolve(kirchhoff_evolve(u, t1, side, gens), t2, side, gens)
    one_leg = kirchhoff_evolve(u, t1 + t2, side, gens)
    assert rel_diff(two_leg.u0, one_leg.u0) < 1e-12
    assert rel_diff(two_leg.u1, one_leg.u1) < 1e-12


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_kirchhoff_matches_dense_exponential(tiny_gens, tiny_chart, side):
    HT = dense_hamiltonian(tiny_gens, kind="T", side=side)
    u = make_admissible(
        gaussian_state(tiny_gens, center=0.0, width=0.5, momentum=0.0, seed=13),
        side,
        tiny_chart,
    )
    t = 6 * tiny_chart.dx
    vec = np.concatenate([u.u0.reshape(-1), u.u1.reshape(-1)])
    ref = expm(1j * t * HT) @ vec
    got = kirchhoff_evolve(u, t, side, tiny_gens)
    gv = np.concatenate([got.u0.reshape(-1), got.u1.reshape(-1)])
    assert np.linalg.norm(gv - ref) / np.linalg.norm(ref) < 1e-12


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_kirchhoff_preserves_transport_norm(gens, chart, side):
    u = admissible_state(gens, chart, side, seed=5)
    kind = "T_plus" if side == "plus" else "T_minus"
    before = energy_norm(gens, u, kind)
    after = energy_norm(gens, kirchhoff_evolve(u, 33 * chart.dx, side, gens), kind)
    assert abs(after - before) / before < 1e-12


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_kirchhoff_on_membership_is_diagonal_transport(gens, chart, side):
    u = membership_state(gens, side, seed=2)
    t = 25 * chart.dx
    out = kirchhoff_evolve(u, t, side, gens)
    kind = "w_plus" if side == "plus" else "w_minus"
    ref0 = exact_transport(u.u0, t, kind, chart)
    assert rel_diff(out.u0, ref0) < 1e-12
    # membership survives the evolution
    scale = np.max(np.abs(out.u1))
    assert np.max(np.abs(psi_functional(gens, out, side))) < 1e-12 * scale


# ---------------------------------------------------------------------------
# the left/right split


@pytest.mark.parametrize("side", ["plus", "minus"])
def test_split_recomposes_and_is_orthogonal(gens, chart, side):
    u = admissible_state(gens, chart, side, seed=7)
    parts = split_left_right(u, side, chart)
    assert parts.side == ("T_plus" if side == "plus" else "T_minus")
    assert rel_diff(parts.u_left.u0 + parts.u_right.u0, u.u0) < 1e-12
    kind = parts.side
    total = energy_norm(gens, u, kind)
    left = energy_norm(gens, parts.u_left, kind)
    right = energy_norm(gens, parts.u_right, kind)
    assert abs(left + right - total) / total < 1e-12


def test_split_parts_satisfy_their_relations(gens, chart):
    u = admissible_state(gens, chart, "plus", seed=9)
    parts = split_left_right(u, "plus", chart)
    scale = np.max(np.abs(u.u1)) + np.max(np.abs(u.u0))
    assert np.max(np.abs(psi_functional(gens, parts.u_right, "plus"))) < 1e-12 * scale
    assert (
        np.max(np.abs(psi_functional(gens, parts.u_left, "plus", conjugate=True)))
        < 1e-12 * scale
    )


def test_split_recovers_constructed_pair(gens, chart):
    # u assembled from a known right-mover f and left-mover g; both phased
    # integrands are total derivatives, so the combination is admissible
    # with no correction and the split must hand back f and g themselves
    x = chart.x_nodes
    f = (np.exp(-((x + 12.0) ** 2) / 18.0) * np.exp(2j * x)).astype(complex)[:, None]
    g = (np.exp(-((x - 9.0) ** 2) / 10.0) * np.exp(-1j * x)).astype(complex)[:, None]
    f2 = f * np.ones((1, gens.grid_shape[1]))
    g2 = g * np.ones((1, gens.grid_shape[1]))
    l2 = gens.l_x[:, None]
    u1 = 1j * (gens.d1x(f2) + 1j * l2 * f2)
    u1 += 1j * (-gens.d1x(g2) - 1j * (l2 - 2.0 * chart.l_plus) * g2)
    u = FieldState(u0=f2 + g2, u1=u1, n=gens.params.n)
    parts = split_left_right(u, "plus", chart)
    assert rel_diff(parts.u_right.u0, f2) < 1e-10
    assert rel_diff(parts.u_left.u0, g2) < 1e-10


def test_split_rejects_defective_data(gens, chart):
    u = membership_state(gens, "plus", seed=4)
    bad = FieldState(u0=u.u0, u1=u.u1 + 0.05 * np.abs(u.u0), n=u.n)
    with pytest.raises(AdmissibilityError):
        split_left_right(bad, "plus", chart)
