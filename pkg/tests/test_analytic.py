import dataclasses
import math

import mpmath as mp
import numpy as np
import pytest

import riscov.analytic as analytic
from riscov.analytic import (DivergenceError, SystemParams,
                             coverage_fixed_noris, coverage_fixed_ris,
                             coverage_nearest, coverage_nearest_alpha4,
                             coverage_nearest_intlimited,
                             default_threshold_grid, evaluate_coverage_curve,
                             laplace_fixed, laplace_nearest, rate_fixed,
                             rate_fixed_alpha4_intlim, rate_from_coverage,
                             rate_nearest)
from riscov.fading import dbm_to_watts
from riscov.geometry import Window, sample_gpp


def params_at(p_tx_dbm: float, **kw) -> SystemParams:
    return SystemParams.default(p_tx_w=dbm_to_watts(p_tx_dbm), **kw)


# ---------------------------------------------------------------------------
# SystemParams
# ---------------------------------------------------------------------------

def test_defaults_match_baseline_setup(base_params):
    assert base_params.path.c_d == pytest.approx(1e-3)
    assert base_params.path.alpha == 2.5
    assert base_params.noise_w == pytest.approx(1e-10)
    assert base_params.d_g0 == 20.0
    assert base_params.d_r0 == pytest.approx(math.hypot(20.0, 3.0))
    assert base_params.eta_g0 == pytest.approx(5.5902e-7, rel=1e-4)
    assert base_params.e1 == pytest.approx(
        1e-3 + 32 * 1e-3 * 3.0**-2.5, rel=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams.default(p=1.2)
    with pytest.raises(ValueError):
        SystemParams.default(lambda_t=-1.0)
    with pytest.raises(ValueError):
        SystemParams.default(p_tx_w=0.0)
    # noise-free mode lifts the power requirement
    SystemParams.default(p_tx_w=0.0, interference_limited=True)


def test_gamma_t_semantics(base_params):
    assert base_params.gamma_t == pytest.approx(1e-3 / 1e-10)
    nf = SystemParams.default(interference_limited=True)
    assert nf.gamma_t == math.inf
    assert nf.gamma_t_inv == 0.0


# ---------------------------------------------------------------------------
# Laplace transforms
# ---------------------------------------------------------------------------

def test_laplace_fixed_at_zero(base_params):
    assert laplace_fixed(base_params, 0.0) == 1.0


def test_laplace_fixed_closed_point():
    p = SystemParams.default(lambda_t=1e-4, p=0.0, path=dataclasses.replace(
        SystemParams.default().path, alpha=4.0))
    expect = math.exp(-2 * math.pi**2 * 1e-4 * math.sqrt(1e-3) / 4.0)
    assert expect == pytest.approx(0.9999844, abs=5e-7)
    assert laplace_fixed(p, 1.0) == pytest.approx(expect, rel=1e-12)


def test_laplace_fixed_monte_carlo_crosscheck():
    """Average of exp(-s I) over sampled fields with exponential marks.

    s is chosen so the transform is driven by interferers at tens of metres,
    a range 1e4 realizations populate well (at s = 1 the whole effect sits
    below one metre and no feasible sample resolves it).
    """
    p = SystemParams.default(lambda_t=1e-4, p=0.0, path=dataclasses.replace(
        SystemParams.default().path, alpha=4.0))
    s = 1e9
    rng = np.random.default_rng(17)
    w = Window(1000.0)
    truncation = math.pi * p.lambda_t * s * p.path.c_d / w.radius**2
    vals = np.empty(10_000)
    for t in range(vals.size):
        real = sample_gpp(p.lambda_t, 0.0, 3.0, w, seed=rng.integers(2**63))
        r2 = (real.parents**2).sum(axis=1)
        marks = rng.standard_exponential(r2.size)
        i_tot = (p.path.c_d * r2**-2.0 * marks).sum()
        vals[t] = math.exp(-s * i_tot)
    err = 3.0 * vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - laplace_fixed(p, s)) <= err + truncation


def test_laplace_fixed_monotone(base_params):
    vals = [laplace_fixed(base_params, s) for s in (1.0, 10.0, 100.0)]
    assert vals[0] > vals[1] > vals[2] > 0.0


def test_laplace_fixed_domain(base_params):
    with pytest.raises(ValueError):
        laplace_fixed(base_params, -1.0)


def test_laplace_nearest_at_zero(base_params):
    assert laplace_nearest(base_params, 0.0, 50.0) == 1.0


def test_laplace_nearest_quadrature_oracle(base_params):
    """Compare against the defining radial integral for random draws.

    The integrand tail decays like r^(1-alpha) over several decades, which
    defeats scipy.quad's semi-infinite mapping; mpmath's adaptive quadrature
    resolves it.
    """
    rng = np.random.default_rng(23)
    mp.mp.dps = 35
    for _ in range(20):
        p = SystemParams.default(
            lambda_t=10 ** rng.uniform(-5, -3),
            p=rng.uniform(0.0, 1.0),
            n_elements=int(rng.integers(8, 65)),
        )
        s = 10 ** rng.uniform(2, 6)
        d = rng.uniform(5.0, 200.0)
        a = p.path.alpha

        def fraction(r):
            return (p.p / (1 + s * p.e1 * r**-a)
                    + (1 - p.p) / (1 + s * p.path.c_d * r**-a) - 1.0)

        # r = d / t^4 maps (d, inf) to (0, 1] with a smooth integrand
        def compact(t):
            r = d / t**4
            return fraction(r) * r * 4 * d / t**5

        val = float(mp.quad(compact, [0, 1], maxdegree=10))
        oracle = math.exp(2 * math.pi * p.lambda_t * val)
        assert laplace_nearest(p, s, d) == pytest.approx(oracle, abs=1e-8)


def test_laplace_nearest_small_distance_limit(base_params):
    s = 1e4
    assert laplace_nearest(base_params, s, 1e-6) == pytest.approx(
        laplace_fixed(base_params, s), rel=1e-9)


def test_laplace_log_concavity_probe(base_params):
    """log L must be concave in s^(2/alpha) (complete monotonicity probe)."""
    d = 2.0 / base_params.path.alpha
    for fn in (lambda s: laplace_fixed(base_params, s),
               lambda s: laplace_nearest(base_params, s, 50.0)):
        s = np.logspace(1, 7, 30)
        x = s**d
        y = np.array([math.log(fn(v)) for v in s])
        second = np.diff(y, 2) / np.diff(x)[:-1] ** 2   # uneven grid, sign only
        assert np.all(second <= 1e-9)


# ---------------------------------------------------------------------------
# fixed-association coverage
# ---------------------------------------------------------------------------

def test_coverage_fixed_ris_single_term_reduces_to_noris():
    """A vanishing surface gain collapses the fit to the exponential case."""
    path = dataclasses.replace(SystemParams.default().path, c_r=1e-30)
    p = params_at(-10.0, path=path)
    assert coverage_fixed_ris(p, 1.0) == pytest.approx(
        coverage_fixed_noris(p, 1.0), rel=1e-9)


def test_coverage_fixed_ris_figure_values(fig4_params):
    assert coverage_fixed_ris(fig4_params(1e-3), 1.0) == pytest.approx(0.53, abs=0.03)
    assert coverage_fixed_ris(fig4_params(1e-4), 1.0) == pytest.approx(0.93, abs=0.03)


def test_coverage_fixed_ris_series_is_wellconditioned(fig4_params):
    diag = {}
    coverage_fixed_ris(fig4_params(1e-3), 1.0, diagnostics=diag)
    assert diag["method"] == "series"
    assert diag["cancel_ratio"] < 10.0


def test_coverage_fixed_ris_mc_fallback_agrees(fig4_params, monkeypatch):
    p = fig4_params(1e-3)
    reference = coverage_fixed_ris(p, 1.0)
    monkeypatch.setattr(analytic, "SERIES_LOSS_LIMIT", 0.0)
    diag = {}
    fallback = coverage_fixed_ris(p, 1.0, diagnostics=diag)
    assert diag["method"] == "mc_fallback"
    assert fallback == pytest.approx(reference, abs=3e-3)


def test_coverage_fixed_noris_zero_threshold_limit(base_params):
    assert coverage_fixed_noris(base_params, 1e-15) == pytest.approx(1.0, abs=1e-9)


def test_coverage_fixed_noris_rayleigh_reduction():
    p = params_at(-10.0, lambda_t=0.0)
    for g in (0.3, 1.0, 5.0):
        expect = math.exp(-g * p.gamma_t_inv / p.eta_g0)
        assert coverage_fixed_noris(p, g) == pytest.approx(expect, rel=1e-12)


def test_coverage_fixed_noris_crossing_power():
    from scipy.optimize import brentq
    f = lambda dbm: coverage_fixed_noris(params_at(dbm, lambda_t=1e-5), 1.0) - 0.9
    crossing = brentq(f, -20.0, 40.0, xtol=1e-6)
    assert crossing == pytest.approx(10.0, abs=2.0)


def test_coverage_with_ris_crossing_matches_narrative():
    from scipy.optimize import brentq
    f = lambda dbm: coverage_fixed_ris(params_at(dbm, lambda_t=1e-5), 1.0) - 0.9
    crossing = brentq(f, -40.0, 0.0, xtol=1e-6)
    assert crossing == pytest.approx(-24.0, abs=2.0)


# ---------------------------------------------------------------------------
# nearest-association coverage
# ---------------------------------------------------------------------------

def test_coverage_nearest_p0_alpha4_closed_value():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0)
    p = SystemParams.default(p=0.0, path=path, interference_limited=True)
    expect = 1.0 / (1.0 + math.pi / 4.0)
    assert expect == pytest.approx(0.56010, abs=5e-6)
    assert coverage_nearest(p, 1.0) == pytest.approx(expect, abs=1e-8)
    assert coverage_nearest_intlimited(p, 1.0) == pytest.approx(expect, rel=1e-12)


def test_coverage_nearest_matches_alpha4_closed_form():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0)
    p = params_at(0.0, p=0.9, path=path)
    for g in default_threshold_grid(20, -10.0, 20.0):
        quad_val = coverage_nearest(p, float(g))
        closed = coverage_nearest_alpha4(p, float(g))
        assert abs(quad_val - closed) <= 1e-6


def test_coverage_nearest_intlimited_density_free():
    vals = []
    for lam in (1e-5, 1e-4, 1e-3):
        p = SystemParams.default(lambda_t=lam, p=0.9, interference_limited=True)
        vals.append(coverage_nearest_intlimited(p, 1.0))
    assert abs(vals[0] - vals[1]) <= 1e-14
    assert abs(vals[1] - vals[2]) <= 1e-14


def test_coverage_nearest_high_snr_limit():
    p_lim = SystemParams.default(p=0.9, interference_limited=True)
    p_fin = SystemParams.default(p=0.9, p_tx_w=1e2)     # gamma_t = 1e12
    assert coverage_nearest(p_fin, 1.0) == pytest.approx(
        coverage_nearest_intlimited(p_lim, 1.0), abs=1e-4)


def test_coverage_nearest_intlimited_fallback(monkeypatch):
    p = SystemParams.default(p=0.9, interference_limited=True)
    reference = coverage_nearest_intlimited(p, 1.0)
    monkeypatch.setattr(analytic, "SERIES_LOSS_LIMIT", 0.0)
    diag = {}
    fallback = coverage_nearest_intlimited(p, 1.0, diagnostics=diag)
    assert diag["method"] == "mc_fallback"
    assert fallback == pytest.approx(reference, abs=5e-3)


def test_coverage_nearest_alpha4_rejects_wrong_exponent(base_params):
    with pytest.raises(ValueError):
        coverage_nearest_alpha4(base_params, 1.0)


def test_coverage_nearest_alpha4_zero_threshold_limit():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0)
    p = params_at(0.0, p=0.7, path=path)
    assert coverage_nearest_alpha4(p, 1e-12) == pytest.approx(1.0, abs=1e-5)


def test_coverage_nearest_alpha4_p0_single_branch():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0)
    p = params_at(0.0, p=0.0, path=path)
    got = coverage_nearest_alpha4(p, 1.0)
    x3 = 1.0 * p.gamma_t_inv / p.path.c_d
    from riscov.specfun import erfcx_fn, hyp2f1_cov
    x4 = math.pi * p.lambda_t * hyp2f1_cov(4.0, -1.0)
    expect = (math.pi * p.lambda_t / 2.0 * math.sqrt(math.pi)
              * erfcx_fn(x4 / (2.0 * math.sqrt(x3))) / math.sqrt(x3))
    assert got == pytest.approx(expect, rel=1e-12)


def test_jet_sums_match_high_order_differentiation(fig4_params):
    """Derivatives of the fixed-association exponent kernel vs mpmath."""
    p = fig4_params(1e-3)
    from riscov.jets import jet_exp, jet_spow, jet_variable
    from riscov.powerdist import signal_gamma_fit
    fit = signal_gamma_fit(p.eta_g0, p.eta_h0, p.fading, p.n_elements)
    d = 2.0 / p.path.alpha
    k = 2 * math.pi**2 * p.lambda_t / math.sin(2 * math.pi / p.path.alpha) / p.path.alpha
    a = 1.0 * p.gamma_t_inv / fit.omega
    b = k * (p.p * (p.e1 / fit.omega) ** d + (1 - p.p) * (p.path.c_d / fit.omega) ** d)
    jet = jet_exp(-a * jet_variable(6) - b * jet_spow(d, 6))
    mp.mp.dps = 40
    f = lambda s: mp.exp(-a * s - b * s**d)
    for i in range(7):
        ref = float(mp.diff(f, 1, i))
        assert jet.derivative(i) == pytest.approx(ref, rel=1e-5)


# ---------------------------------------------------------------------------
# rates
# ---------------------------------------------------------------------------

def test_rate_zero_coverage():
    assert rate_from_coverage(lambda x: 0.0) == 0.0


def test_rate_exponential_coverage_closed_form():
    # int_0^inf e^-x/(1+x) dx = e * E1(1); E1(1) = -euler + sum (-1)^(k+1)/(k k!)
    acc = 0.0
    fact = 1.0
    for k in range(1, 40):
        fact *= k
        acc += (-1.0) ** (k + 1) / (k * fact)
    e1_of_one = -0.5772156649015329 + acc
    expect = math.e * e1_of_one / math.log(2.0)
    assert e1_of_one == pytest.approx(0.2193839, abs=2e-7)
    got = rate_from_coverage(lambda x: math.exp(-x))
    assert got == pytest.approx(expect, rel=1e-9)
    assert got == pytest.approx(0.86034, abs=2e-5)


def test_rate_divergence_flagged():
    with pytest.raises(DivergenceError):
        rate_from_coverage(lambda x: 1.0)


def test_rate_fixed_monotone_in_power():
    rates = [rate_fixed(params_at(dbm, lambda_t=1e-5), True)
             for dbm in (-30.0, 0.0, 30.0)]
    assert rates[0] < rates[1] < rates[2]


def test_rate_fixed_decreasing_in_density():
    rates = [rate_fixed(params_at(0.0, lambda_t=lam), True)
             for lam in (1e-6, 1e-5, 1e-4)]
    assert rates[0] > rates[1] > rates[2]


def test_rate_with_surface_exceeds_without():
    for dbm in (-20.0, 0.0):
        p = params_at(dbm, lambda_t=1e-5)
        assert rate_fixed(p, True) > rate_fixed(p, False)


def test_rate_alpha4_closed_form_vs_integration():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0)
    for lam in (1e-5, 1e-4):
        p = SystemParams.default(lambda_t=lam, path=path, interference_limited=True)
        closed = rate_fixed_alpha4_intlim(p, with_ris=False)
        numeric = rate_from_coverage(lambda g: coverage_fixed_noris(p, g))
        assert abs(closed - numeric) <= 1e-6
        closed_ris = rate_fixed_alpha4_intlim(p, with_ris=True)
        numeric_ris = rate_from_coverage(lambda g: coverage_fixed_ris(p, g))
        assert abs(closed_ris - numeric_ris) <= 1e-6


def test_rate_alpha4_single_term_case():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0, c_r=1e-30)
    p = SystemParams.default(path=path, interference_limited=True)
    assert rate_fixed_alpha4_intlim(p, True) == pytest.approx(
        rate_fixed_alpha4_intlim(p, False), rel=1e-9)


def test_rate_alpha4_decreasing_in_density():
    path = dataclasses.replace(SystemParams.default().path, alpha=4.0)
    vals = [rate_fixed_alpha4_intlim(
        SystemParams.default(lambda_t=lam, path=path, interference_limited=True), True)
        for lam in (1e-5, 1e-4, 1e-3)]
    assert vals[0] > vals[1] > vals[2]


def test_rate_alpha4_guards(base_params):
    with pytest.raises(ValueError):
        rate_fixed_alpha4_intlim(base_params, True)


def test_rate_nearest_density_free_and_rising_in_p():
    vals = [rate_nearest(SystemParams.default(lambda_t=lam, p=0.9,
                                              interference_limited=True), True)
            for lam in (1e-5, 1e-4)]
    assert vals[0] == pytest.approx(vals[1], rel=1e-10)
    rising = [rate_nearest(SystemParams.default(p=pp, interference_limited=True), True)
              for pp in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert all(a < b for a, b in zip(rising, rising[1:]))


# ---------------------------------------------------------------------------
# curve-level properties
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("method", ["fixed_ris", "fixed_noris", "nearest",
                                    "nearest_intlimited"])
def test_coverage_in_unit_interval_and_monotone(method):
    p = params_at(0.0, p=0.6)
    curve = evaluate_coverage_curve(p, default_threshold_grid(12), method)
    vals = np.array(curve.values)
    assert np.all((vals >= 0.0) & (vals <= 1.0))
    assert np.all(np.diff(vals) <= 1e-10)


def test_coverage_monotone_in_transmit_snr():
    for g in (0.5, 2.0):
        vals = [coverage_fixed_ris(params_at(dbm), g) for dbm in (-30.0, -20.0, -10.0)]
        assert vals[0] < vals[1] < vals[2]


def test_coverage_fixed_decreasing_in_density():
    for fn in (coverage_fixed_ris, coverage_fixed_noris):
        vals = [fn(params_at(-10.0, lambda_t=lam), 1.0) for lam in (1e-5, 1e-4, 1e-3)]
        assert vals[0] > vals[1] > vals[2]


def test_curve_method_validation(base_params):
    with pytest.raises(ValueError):
        evaluate_coverage_curve(base_params, [1.0], "bogus")


def test_threshold_grid_shape():
    g = default_threshold_grid()
    assert len(g) == 50
    assert g[0] == pytest.approx(1e-2)
    assert g[-1] == pytest.approx(1e4)
