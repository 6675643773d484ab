import io
import math

import numpy as np
import pytest

from waveguide_memory import blp_hermitian_closed_form
from waveguide_memory.sweeps import (
    FIG4_ALPHAZ,
    SweepResult,
    gamma_grid,
    interior_minimum,
    is_monotone,
    sweep_blp_vs_gamma,
    sweep_logf_vs_z,
    sweep_transmission_vs_gamma,
    sweep_transmission_vs_z,
)


@pytest.fixture(scope="module")
def fig4():
    return sweep_transmission_vs_gamma()


# --- helpers -----------------------------------------------------------------


def test_gamma_grid():
    g = gamma_grid(0.2, 50.0, 40)
    assert g.size == 40 and g[0] == pytest.approx(0.2) and g[-1] == pytest.approx(50.0)
    assert np.allclose(np.diff(np.log(g)), np.log(250) / 39)
    z = gamma_grid(0.1, 10.0, 5, include_zero=True)
    assert z[0] == 0.0 and z.size == 6


def test_is_monotone():
    assert is_monotone([1, 2, 2, 3])
    assert not is_monotone([1, 2, 1.9])
    assert is_monotone([1, 2, 1.9], tol=0.2)
    assert is_monotone([3, 2, 2, 0], increasing=False)


def test_interior_minimum_parabola():
    x = np.linspace(0, 4, 41)
    hit = interior_minimum(x, (x - 1.23) ** 2 + 0.5)
    assert hit[0] == pytest.approx(1.23, abs=1e-12)
    assert hit[1] == pytest.approx(0.5, abs=1e-12)
    assert interior_minimum(x, x) is None
    assert interior_minimum(x, -((x - 2) ** 2)) is None


def test_interior_minimum_log_axis():
    x = np.geomspace(0.1, 10, 31)
    hit = interior_minimum(x, np.log(x / 1.7) ** 2, log_axis=True)
    assert hit[0] == pytest.approx(1.7, rel=1e-10)


def test_interior_minimum_tolerance():
    x = np.linspace(0, 1, 11)
    v = np.ones(11)
    v[5] = 1 - 5e-5
    assert interior_minimum(x, v) is None
    assert interior_minimum(x, v, tol=1e-6) is not None


def test_sweep_result_validation_and_csv():
    with pytest.raises(ValueError):
        SweepResult("x", "a", [0.0, 0.0], "T", {"k": [1.0, 2.0]})
    with pytest.raises(ValueError):
        SweepResult("x", "a", [0.0, 1.0], "T", {"k": [1.0]})
    r = SweepResult("x", "a", [0.0, 0.5], "T", {"u": [1.0, 0.25], "g": [1.0, 0.5]})
    text = r.to_csv()
    assert text.splitlines() == ["kind,axis_value,observable", "u,0,1", "u,0.5,0.25", "g,0,1", "g,0.5,0.5"]
    buf = io.StringIO()
    r.to_csv(buf)
    assert buf.getvalue() == text


# --- transmission versus z ---------------------------------------------------


def test_fig2_curves():
    r = sweep_transmission_vs_z()
    assert set(r.rows) == {"lorentzian", "gaussian", "uniform", "hermitian"}
    z = r.axis
    assert z[0] == 0 and z[-1] == pytest.approx(10.0)
    assert np.max(np.abs(r["hermitian"] - np.cos(z) ** 2)) < 1e-5
    short = z <= 0.1
    for label, T in r.rows.items():
        assert T[0] == 1.0
        # the shared quadratic holds to 1e-4 wherever the Lorentzian cubic z^3/3 stays below it
        near = z <= 0.06
        assert np.max(np.abs(T[near] - (1 - z[near] ** 2))) < 1e-4, label
    for label in ("gaussian", "uniform", "hermitian"):
        assert np.max(np.abs(r[label][short] - (1 - z[short] ** 2))) < 1e-4, label
    # gamma = 2: f = 1 - z^2/2 + z^3/6 + O(z^5), so T = 1 - z^2 + z^3/3 + z^4/4 + O(z^5)
    zs = z[short]
    assert np.max(np.abs(r["lorentzian"][short] - (1 - zs**2 + zs**3 / 3 + zs**4 / 4))) < 1e-5
    # at short range the Lorentzian cubic term keeps it highest, until the uniform revival near 1.9
    window = (z > 0) & (z < 1.8)
    assert np.all(r["lorentzian"][window] > r["gaussian"][window])
    assert np.all(r["lorentzian"][window] > r["uniform"][window])


@pytest.mark.xfail(strict=True, reason="Lorentzian cubic term z^3/3 exceeds 1e-4 before alpha z = 0.1")
def test_fig2_shared_quadratic_to_one_tenth():
    r = sweep_transmission_vs_z(alphaL=0.2)
    short = r.axis <= 0.1
    assert np.max(np.abs(r["lorentzian"][short] - (1 - r.axis[short] ** 2))) < 1e-4


def test_fig2_parallel_matches_serial():
    a = sweep_transmission_vs_z(alphaL=2.0, step=2e-3)
    b = sweep_transmission_vs_z(alphaL=2.0, step=2e-3, n_jobs=2)
    for label in a.rows:
        np.testing.assert_array_equal(a[label], b[label])


def test_fig2_kind_restriction():
    r = sweep_transmission_vs_z(alphaL=1.0, kinds=["uniform"])
    assert set(r.rows) == {"uniform", "hermitian"}


# --- log|f| versus z ---------------------------------------------------------


def test_fig3_curves():
    r = sweep_logf_vs_z()
    z = r.axis
    assert set(r.rows) == {"lorentzian", "gaussian", "uniform", "markov_lorentzian", "markov_gaussian",
                           "markov_uniform"}
    for k in ("lorentzian", "gaussian", "uniform"):
        assert r[k][0] == 0.0
    lor = 10 ** r["lorentzian"]
    window = (z >= 1.0) & (z <= 6.0)
    assert np.all(np.abs(lor[window] / np.exp(-0.2 * z[window]) - 1) < 0.10)
    assert np.all(r["lorentzian"][window] > r["gaussian"][window])
    assert np.all(r["gaussian"][window] > r["uniform"][window])
    assert r["markov_uniform"][-1] == pytest.approx(-math.pi / 10 * 6 / math.log(10))


# --- transmission versus gamma -----------------------------------------------


def test_fig4_shape(fig4):
    assert len(fig4) == 4
    for r, az in zip(fig4, FIG4_ALPHAZ):
        assert r.metadata["alpha_z"] == pytest.approx(az)
        assert r.axis.size == 40 and set(r.rows) == {"lorentzian", "gaussian", "uniform"}


@pytest.mark.parametrize("idx", [0, 1])
def test_fig4_monotone_at_short_range(fig4, idx):
    for label, T in fig4[idx].rows.items():
        assert is_monotone(T, tol=1e-6), label


@pytest.mark.parametrize("idx", [2, 3])
def test_fig4_interior_minimum(fig4, idx):
    for label, T in fig4[idx].rows.items():
        assert interior_minimum(fig4[idx].axis, T, log_axis=True) is not None, label


def test_fig4_narrow_limit():
    r = sweep_transmission_vs_gamma([math.pi], (1e-3, 1.0), 2)[0]
    for label, T in r.rows.items():
        assert T[0] == pytest.approx(1.0, abs=2e-3), label


def test_fig4_broad_limit_follows_markov_decay():
    from waveguide_memory import ReservoirSpec, markov_rate

    r = sweep_transmission_vs_gamma([math.pi / 2], (50.0, 500.0), 2, step=1e-4)[0]
    for label, T in r.rows.items():
        for g, t in zip(r.axis, T):
            kappa = markov_rate(ReservoirSpec(label, 1.0, g))
            assert t == pytest.approx(math.exp(-2 * kappa * math.pi / 2), abs=0.02), (label, g)
        # decoupling: transparency returns as the band broadens
        assert T[1] > 0.98 and T[1] > T[0]


@pytest.mark.xfail(strict=True, reason="at gamma = 50 alpha the Markov decay already gives T < 0.9 at alpha z = pi/2")
def test_fig4_transparent_at_fifty():
    r = sweep_transmission_vs_gamma([math.pi / 2], (50.0, 60.0), 2)[0]
    assert all(T[0] > 0.9 for T in r.rows.values())


def test_fig4_orderings():
    r = sweep_transmission_vs_gamma([math.pi], (0.47, 21.0), 2)[0]
    lo = {k: v[0] for k, v in r.rows.items()}
    hi = {k: v[1] for k, v in r.rows.items()}
    assert lo["uniform"] > lo["gaussian"] > lo["lorentzian"]
    assert hi["lorentzian"] == max(hi.values())


def test_fig4_interpolation_consistent_with_direct_solve():
    r = sweep_transmission_vs_gamma([1.0, 2.0], (1.0, 4.0), 2, step=1e-3)
    direct = sweep_transmission_vs_gamma([1.0], (1.0, 4.0), 2, step=1e-3)[0]
    for k in r[0].rows:
        np.testing.assert_allclose(r[0][k], direct[k], atol=1e-12)


def test_fig4_rejects_bad_positions():
    with pytest.raises(ValueError):
        sweep_transmission_vs_gamma([0.0, 1.0])


# --- BLP versus gamma --------------------------------------------------------


def test_fig5_small():
    r = sweep_blp_vs_gamma((0.5, 8.0), alphaL=20.0, points=5, step=2e-3)
    assert r.axis[0] == 0.0 and r.axis.size == 6
    ref = blp_hermitian_closed_form(20.0)
    for label, v in r.rows.items():
        assert v[0] == pytest.approx(ref, abs=1e-3), label
        assert is_monotone(v, increasing=False, tol=1e-3), label
    mid = 3  # gamma / alpha = 2
    assert r.axis[mid] == pytest.approx(2.0)
    assert r["uniform"][mid] > r["gaussian"][mid] > r["lorentzian"][mid]


def test_fig5_rejects_bad_length():
    with pytest.raises(ValueError):
        sweep_blp_vs_gamma(alphaL=0.0)
