"""Coverage probabilities and achievable rates of the typical user.

Fixed association conditions on a serving transmitter at a known distance;
nearest association averages over the Rayleigh-distributed distance to the
closest transmitter.  Interference enters through its Laplace transform,
and gamma-fitted signal power turns coverage into alternating sums of
derivatives evaluated with truncated Taylor jets.

Two conventions used throughout:

* the serving surface of a fixed-association link sits at perpendicular
  offset d0 from the transmitter, so its distance to the user is
  sqrt(d_g0^2 + d0^2);
* for nearest association the surface-to-user distance is approximated by
  the transmitter-to-user distance, which makes the reflected-to-direct
  amplitude ratio (c_r/c_d * d0^-alpha)^(1/2) independent of the serving
  distance.  The Monte Carlo simulator does not use this approximation, so
  simulator-vs-formula gaps include it by design.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special as _sp
from scipy.integrate import quad

from .fading import FadingParams, PathLossParams, dbm_to_watts, db_to_linear
from .jets import (TaylorJet, alternating_tail_sum, jet_constant, jet_div,
                   jet_erfcx, jet_exp, jet_hyp2f1_cov, jet_pow, jet_recip,
                   jet_si_ci, jet_sin_cos, jet_spow, jet_sqrt, jet_variable)
from .powerdist import GammaFit, signal_gamma_fit
from .specfun import hyp2f1_cov

__all__ = [
    "SystemParams",
    "CoverageCurve",
    "QuadratureError",
    "DivergenceError",
    "laplace_fixed",
    "laplace_nearest",
    "coverage_fixed_ris",
    "coverage_fixed_noris",
    "coverage_nearest",
    "coverage_nearest_alpha4",
    "coverage_nearest_intlimited",
    "rate_from_coverage",
    "rate_fixed",
    "rate_fixed_alpha4_intlim",
    "rate_nearest",
    "default_threshold_grid",
    "evaluate_coverage_curve",
]

log = logging.getLogger(__name__)

# Estimated relative roundoff above which the derivative series is abandoned
# for direct Monte Carlo evaluation of the expected gamma tail.
SERIES_LOSS_LIMIT = 1e-6
_FALLBACK_DRAWS = 1_000_000
_FALLBACK_SEED = 0x5EED


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge; message names the worst subinterval."""


class DivergenceError(RuntimeError):
    """The rate integral does not converge for the supplied coverage function."""


@dataclass(frozen=True)
class SystemParams:
    """Scalar model parameters of one network scenario.

    Powers are linear watts; gains are linear.  lambda_u is carried for
    config completeness but enters no expression (only the typical user at
    the origin matters).
    """

    lambda_t: float
    p: float
    n_elements: int
    path: PathLossParams
    fading: FadingParams
    p_tx_w: float
    noise_w: float
    d_g0: float
    interference_limited: bool = False
    lambda_u: float = 0.0

    def __post_init__(self):
        if self.lambda_t < 0.0:
            raise ValueError(f"transmitter density must be non-negative, got {self.lambda_t}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"association probability must be in [0, 1], got {self.p}")
        if self.n_elements < 1:
            raise ValueError(f"element count must be at least 1, got {self.n_elements}")
        if not self.d_g0 > 0.0:
            raise ValueError(f"serving distance must be positive, got {self.d_g0}")
        if not self.interference_limited:
            if not (self.p_tx_w > 0.0 and self.noise_w > 0.0):
                raise ValueError("transmit and noise powers must be positive "
                                 "unless the scenario is interference limited")

    # -- derived quantities --------------------------------------------------
    @property
    def gamma_t(self) -> float:
        """Transmit SNR P/sigma^2 (infinite when interference limited)."""
        if self.interference_limited:
            return math.inf
        return self.p_tx_w / self.noise_w

    @property
    def gamma_t_inv(self) -> float:
        if self.interference_limited:
            return 0.0
        return self.noise_w / self.p_tx_w

    @property
    def e1(self) -> float:
        """Effective interferer gain c_d + N c_r d0^-alpha."""
        pl = self.path
        return pl.c_d + self.n_elements * pl.c_r * pl.d0 ** -pl.alpha

    @property
    def eta_g0(self) -> float:
        """Direct-path gain of the fixed serving link."""
        return self.path.c_d * self.d_g0 ** -self.path.alpha

    @property
    def d_r0(self) -> float:
        """Surface-to-user distance of the fixed serving link."""
        return math.hypot(self.d_g0, self.path.d0)

    @property
    def eta_h0(self) -> float:
        """Reflected-path gain of the fixed serving link."""
        return self.path.c_r * (self.path.d0 * self.d_r0) ** -self.path.alpha

    @classmethod
    def default(cls, **overrides) -> "SystemParams":
        """Baseline scenario: 5 km disk defaults with a 20 m serving link."""
        base = cls(
            lambda_t=1e-4,
            p=0.5,
            n_elements=32,
            path=PathLossParams(c_d=db_to_linear(-30.0), c_r=db_to_linear(-30.0),
                                alpha=2.5, d0=3.0),
            fading=FadingParams(m_h=2.0, m_r=2.0),
            p_tx_w=dbm_to_watts(0.0),
            noise_w=dbm_to_watts(-70.0),
            d_g0=20.0,
            lambda_u=1e-4,
        )
        return replace(base, **overrides) if overrides else base


@dataclass(frozen=True)
class CoverageCurve:
    """Coverage values on a threshold grid, tagged with the producing method."""

    thresholds: tuple[float, ...]
    values: tuple[float, ...]
    method: str

    def __post_init__(self):
        if len(self.thresholds) != len(self.values):
            raise ValueError("threshold and value grids differ in length")


def default_threshold_grid(n_points: int = 50, low_db: float = -20.0,
                           high_db: float = 40.0) -> np.ndarray:
    """Log-uniform threshold grid, by default 50 points over [-20, 40] dB."""
    return 10.0 ** (np.linspace(low_db, high_db, n_points) / 10.0)


def _round_shape(kappa: float) -> int:
    """Round-half-up to the nearest integer, clamped to at least 1."""
    return max(1, int(math.floor(kappa + 0.5)))


def _csc(x: float) -> float:
    return 1.0 / math.sin(x)


@lru_cache(maxsize=256)
def _fixed_fit(params: SystemParams, exact_sr_moments: bool = False) -> GammaFit:
    return signal_gamma_fit(params.eta_g0, params.eta_h0, params.fading,
                            params.n_elements, exact_sr_moments)


@lru_cache(maxsize=256)
def _nearest_shape(params: SystemParams, exact_sr_moments: bool = False) -> GammaFit:
    """Shape and normalized scale of the nearest-association signal fit.

    Feeding a unit direct gain makes the returned scale equal the
    distance-free normalized scale chi_bar, since the amplitude ratio
    (c_r/c_d * d0^-alpha)^(1/2) does not depend on the serving distance.
    """
    pl = params.path
    eta_ratio = (pl.c_r / pl.c_d) * pl.d0 ** -pl.alpha
    return signal_gamma_fit(1.0, eta_ratio, params.fading, params.n_elements,
                            exact_sr_moments)


def _interference_slope(params: SystemParams) -> float:
    """Common factor 2 pi^2 lambda_t csc(2 pi / alpha) / alpha."""
    a = params.path.alpha
    return 2.0 * math.pi**2 * params.lambda_t * _csc(2.0 * math.pi / a) / a


# ---------------------------------------------------------------------------
# Laplace transforms of the aggregate interference power
# ---------------------------------------------------------------------------

def laplace_fixed(params: SystemParams, s: float) -> float:
    """E[exp(-s I)] with interferers on the whole plane (fixed association)."""
    if s < 0.0:
        raise ValueError(f"transform argument must be non-negative, got {s}")
    if s == 0.0:
        return 1.0
    d = 2.0 / params.path.alpha
    k = _interference_slope(params)
    expo = k * (params.p * (params.e1 * s) ** d
                + (1.0 - params.p) * (params.path.c_d * s) ** d)
    return math.exp(-expo)


def laplace_nearest(params: SystemParams, s: float, d_g0: float) -> float:
    """E[exp(-s I)] with interferers no closer than the serving distance d_g0."""
    if s < 0.0:
        raise ValueError(f"transform argument must be non-negative, got {s}")
    if not d_g0 > 0.0:
        raise ValueError(f"serving distance must be positive, got {d_g0}")
    if s == 0.0:
        return 1.0
    a = params.path.alpha
    base = math.pi * params.lambda_t * d_g0**2
    expo = 0.0
    for weight, gain in ((params.p, params.e1), (1.0 - params.p, params.path.c_d)):
        if weight == 0.0:
            continue
        expo += weight * (1.0 - hyp2f1_cov(a, -gain * d_g0 ** -a * s))
    return math.exp(base * expo)


# ---------------------------------------------------------------------------
# Series evaluation with Monte Carlo fallback
# ---------------------------------------------------------------------------

def _kanter_positive_stable(delta: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Positive stable samples S with E[exp(-s S)] = exp(-s^delta)."""
    u = rng.uniform(0.0, math.pi, n)
    e = rng.standard_exponential(n)
    a = (np.sin(delta * u) ** delta * np.sin((1.0 - delta) * u) ** (1.0 - delta)
         / np.sin(u)) ** (1.0 / (1.0 - delta))
    return (a / e) ** ((1.0 - delta) / delta)


def _series_or_none(exp_jet: TaylorJet, diagnostics: dict | None,
                    where: str) -> float | None:
    """Alternating derivative sum, or None when roundoff loss is too large."""
    value, cancel_ratio = alternating_tail_sum(exp_jet)
    est_loss = np.finfo(float).eps * cancel_ratio
    if diagnostics is not None:
        diagnostics["cancel_ratio"] = cancel_ratio
        diagnostics["method"] = "series"
    if est_loss > SERIES_LOSS_LIMIT or not math.isfinite(value):
        log.warning("%s: derivative series lost ~%.1e relative precision; "
                    "switching to Monte Carlo fallback", where, est_loss)
        if diagnostics is not None:
            diagnostics["method"] = "mc_fallback"
        return None
    return min(max(value, 0.0), 1.0)


def _fallback_fixed_mc(params: SystemParams, gamma_bar: float, fit: GammaFit,
                       kappa_hat: int) -> float:
    """E[regularized upper gamma(kappa_hat, X)] by exact sampling of X.

    For fixed association the whole-plane interference is a positive stable
    variable whose Laplace exponent matches laplace_fixed, so X can be drawn
    exactly and the expectation estimated without the derivative series.
    """
    d = 2.0 / params.path.alpha
    k = _interference_slope(params)
    scale = k * (params.p * params.e1**d + (1.0 - params.p) * params.path.c_d**d)
    scale *= (gamma_bar / fit.omega) ** d
    rng = np.random.default_rng(_FALLBACK_SEED)
    total = 0.0
    n_done = 0
    chunk = 250_000
    while n_done < _FALLBACK_DRAWS:
        n = min(chunk, _FALLBACK_DRAWS - n_done)
        x = scale ** (1.0 / d) * _kanter_positive_stable(d, n, rng)
        x += gamma_bar * params.gamma_t_inv / fit.omega
        total += _sp.gammaincc(kappa_hat, x).sum()
        n_done += n
    return total / _FALLBACK_DRAWS


def _fallback_nearest_intlim_mc(params: SystemParams, gamma_bar: float,
                                kappa_hat: int, chi_bar: float,
                                annulus_factor: float = 8.0) -> float:
    """Surface-served part of the interference-limited nearest coverage by MC.

    Works in units of the serving distance: the scaled interference load is
    built from a Poisson field on the annulus [1, annulus_factor], with the
    mean of the truncated far field added back deterministically.
    """
    a = params.path.alpha
    cd = params.path.c_d
    gains = np.array([params.e1 / cd, 1.0]) * gamma_bar / chi_bar
    weights = np.array([params.p, 1.0 - params.p])
    mean_gain = float(np.dot(weights, gains))
    q2 = annulus_factor**2
    far_mean_unit = 2.0 * mean_gain * annulus_factor ** (2.0 - a) / (a - 2.0)
    rng = np.random.default_rng(_FALLBACK_SEED)
    total = 0.0
    n_done = 0
    chunk = 20_000
    while n_done < _FALLBACK_DRAWS:
        n = min(chunk, _FALLBACK_DRAWS - n_done)
        t = rng.standard_exponential(n)          # lambda pi d^2 of each draw
        counts = rng.poisson(t * (q2 - 1.0))
        m = int(counts.sum())
        draw_id = np.repeat(np.arange(n), counts)
        u2 = 1.0 + (q2 - 1.0) * rng.random(m)    # squared radius over d^2
        ris = rng.random(m) < params.p
        gain = np.where(ris, gains[0], gains[1])
        marks = gain * rng.standard_exponential(m) * u2 ** (-0.5 * a)
        x = np.bincount(draw_id, weights=marks, minlength=n)
        x += t * far_mean_unit
        total += _sp.gammaincc(kappa_hat, x).sum()
        n_done += n
    return total / _FALLBACK_DRAWS


# ---------------------------------------------------------------------------
# Coverage, fixed association
# ---------------------------------------------------------------------------

def coverage_fixed_ris(params: SystemParams, gamma_bar: float,
                       exact_sr_moments: bool = False,
                       diagnostics: dict | None = None) -> float:
    """Coverage of a fixed-distance serving link assisted by a surface.

    Evaluates the alternating derivative sum of exp(V(s)) at s = 1, where V
    collects the noise term and the two interference tiers scaled by the
    fitted signal parameters.
    """
    if not gamma_bar > 0.0:
        raise ValueError(f"threshold must be positive, got {gamma_bar}")
    fit = _fixed_fit(params, exact_sr_moments)
    kappa_hat = _round_shape(fit.kappa)
    order = kappa_hat - 1
    d = 2.0 / params.path.alpha
    k = _interference_slope(params)
    noise_slope = gamma_bar * params.gamma_t_inv / fit.omega
    tier = (k * params.p * (params.e1 * gamma_bar / fit.omega) ** d
            + k * (1.0 - params.p) * (params.path.c_d * gamma_bar / fit.omega) ** d)
    v = -noise_slope * jet_variable(order) - tier * jet_spow(d, order)
    value = _series_or_none(jet_exp(v), diagnostics, "coverage_fixed_ris")
    if value is not None:
        return value
    return _fallback_fixed_mc(params, gamma_bar, fit, kappa_hat)


def coverage_fixed_noris(params: SystemParams, gamma_bar: float) -> float:
    """Coverage of a fixed-distance serving link without a surface (closed form)."""
    if not gamma_bar > 0.0:
        raise ValueError(f"threshold must be positive, got {gamma_bar}")
    d = 2.0 / params.path.alpha
    k = _interference_slope(params)
    eta = params.eta_g0
    expo = (gamma_bar * params.gamma_t_inv / eta
            + k * params.p * (params.e1 * gamma_bar / eta) ** d
            + k * (1.0 - params.p) * (params.path.c_d * gamma_bar / eta) ** d)
    return math.exp(-expo)


# ---------------------------------------------------------------------------
# Coverage, nearest association
# ---------------------------------------------------------------------------

def _quad_checked(fn: Callable[[float], float], lo: float, hi: float,
                  epsabs: float, epsrel: float, where: str) -> float:
    out = quad(fn, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=300, full_output=1)
    if len(out) >= 4:
        info = out[2]
        last = int(info.get("last", 0))
        worst = ""
        if last > 0:
            errs = info["elist"][:last]
            i = int(np.argmax(errs))
            worst = (f"; worst subinterval [{info['alist'][i]:.6g}, "
                     f"{info['blist'][i]:.6g}] with error {errs[i]:.3g}")
        raise QuadratureError(f"{where}: {out[3]}{worst}")
    return out[0]


def _nearest_hyp_jets(params: SystemParams, gamma_bar: float, chi_bar: float,
                      order: int) -> TaylorJet:
    """Association-weighted jet of the two hypergeometric interference factors."""
    a = params.path.alpha
    cd = params.path.c_d
    j = jet_constant(0.0, order)
    for weight, gain in ((params.p, params.e1 / cd), (1.0 - params.p, 1.0)):
        if weight == 0.0:
            continue
        j = j + weight * jet_hyp2f1_cov(a, -gain * gamma_bar / chi_bar, order)
    return j


def _nearest_hyp_scalar(params: SystemParams, gamma_bar: float) -> float:
    """Same weighting for the surface-free branch (scale-free arguments)."""
    a = params.path.alpha
    cd = params.path.c_d
    total = 0.0
    for weight, gain in ((params.p, params.e1 / cd), (1.0 - params.p, 1.0)):
        if weight == 0.0:
            continue
        total += weight * hyp2f1_cov(a, -gain * gamma_bar)
    return total


def coverage_nearest(params: SystemParams, gamma_bar: float,
                     exact_sr_moments: bool = False) -> float:
    """Nearest-transmitter coverage by radial quadrature.

    The serving-distance average is integrated in u = lambda_t pi r^2, which
    folds the distance density into a unit exponential and leaves smooth,
    exponentially decaying integrands for both association branches.
    """
    if not gamma_bar > 0.0:
        raise ValueError(f"threshold must be positive, got {gamma_bar}")
    if not params.lambda_t > 0.0:
        raise ValueError("nearest association requires a positive transmitter density")
    a = params.path.alpha
    cd = params.path.c_d
    half_a = 0.5 * a
    u_scale = (params.lambda_t * math.pi) ** -half_a
    p = params.p
    total = 0.0
    if p > 0.0:
        nfit = _nearest_shape(params, exact_sr_moments)
        kappa_hat = _round_shape(nfit.kappa)
        chi_bar = nfit.omega
        order = kappa_hat - 1
        hyp = _nearest_hyp_jets(params, gamma_bar, chi_bar, order)
        svar = jet_variable(order)
        noise_coef = gamma_bar * params.gamma_t_inv / (cd * chi_bar) * u_scale

        def served_branch(u: float) -> float:
            expo = -noise_coef * u**half_a * svar - u * hyp
            val, _ = alternating_tail_sum(jet_exp(expo))
            return val

        total += p * _quad_checked(served_branch, 0.0, math.inf, 1e-8, 1e-8,
                                   "coverage_nearest (surface branch)")
    if p < 1.0:
        hyp_star = _nearest_hyp_scalar(params, gamma_bar)
        noise_star = gamma_bar * params.gamma_t_inv / cd * u_scale

        def bare_branch(u: float) -> float:
            return math.exp(-noise_star * u**half_a - u * hyp_star)

        total += (1.0 - p) * _quad_checked(bare_branch, 0.0, math.inf, 1e-8, 1e-8,
                                           "coverage_nearest (direct branch)")
    return min(max(total, 0.0), 1.0)


def coverage_nearest_alpha4(params: SystemParams, gamma_bar: float,
                            exact_sr_moments: bool = False) -> float:
    """Closed-form nearest coverage for alpha = 4 (Gaussian-integral reduction).

    Needs a finite noise level; use coverage_nearest_intlimited for the
    noise-free regime.
    """
    if params.path.alpha != 4.0:
        raise ValueError("this closed form requires a path-loss exponent of 4")
    if not gamma_bar > 0.0:
        raise ValueError(f"threshold must be positive, got {gamma_bar}")
    if params.interference_limited:
        raise ValueError("noise-free regime: use coverage_nearest_intlimited")
    if not params.lambda_t > 0.0:
        raise ValueError("nearest association requires a positive transmitter density")
    lam_pi = math.pi * params.lambda_t
    cd = params.path.c_d
    p = params.p
    total = 0.0
    if p > 0.0:
        nfit = _nearest_shape(params, exact_sr_moments)
        kappa_hat = _round_shape(nfit.kappa)
        chi_bar = nfit.omega
        order = kappa_hat - 1
        quad_coef = gamma_bar * params.gamma_t_inv / (cd * chi_bar)
        x1 = quad_coef * jet_variable(order)
        x2 = lam_pi * _nearest_hyp_jets(params, gamma_bar, chi_bar, order)
        root = jet_sqrt(x1)
        kernel = math.sqrt(math.pi) * jet_erfcx(jet_div(x2, 2.0 * root)) * jet_recip(root)
        val, _ = alternating_tail_sum(kernel)
        total += 0.5 * lam_pi * p * val
    if p < 1.0:
        x3 = gamma_bar * params.gamma_t_inv / cd
        x4 = lam_pi * _nearest_hyp_scalar(params, gamma_bar)
        kernel = math.sqrt(math.pi) * _sp.erfcx(x4 / (2.0 * math.sqrt(x3))) / math.sqrt(x3)
        total += 0.5 * lam_pi * (1.0 - p) * kernel
    return min(max(total, 0.0), 1.0)


def coverage_nearest_intlimited(params: SystemParams, gamma_bar: float,
                                exact_sr_moments: bool = False,
                                diagnostics: dict | None = None) -> float:
    """Nearest coverage with negligible noise; independent of the density.

    The radial average collapses to the reciprocal of the weighted
    hypergeometric factor, whose derivative sum is evaluated with jets.
    """
    if not gamma_bar > 0.0:
        raise ValueError(f"threshold must be positive, got {gamma_bar}")
    p = params.p
    total = 0.0
    if p > 0.0:
        nfit = _nearest_shape(params, exact_sr_moments)
        kappa_hat = _round_shape(nfit.kappa)
        chi_bar = nfit.omega
        order = kappa_hat - 1
        hyp = _nearest_hyp_jets(params, gamma_bar, chi_bar, order)
        value = _series_or_none(jet_recip(hyp), diagnostics,
                                "coverage_nearest_intlimited")
        if value is None:
            value = _fallback_nearest_intlim_mc(params, gamma_bar, kappa_hat, chi_bar)
        total += p * value
    if p < 1.0:
        total += (1.0 - p) / _nearest_hyp_scalar(params, gamma_bar)
    return min(max(total, 0.0), 1.0)


# ---------------------------------------------------------------------------
# Average achievable rate
# ---------------------------------------------------------------------------

def rate_from_coverage(coverage_fn: Callable[[float], float],
                       rel_tol: float = 1e-7) -> float:
    """Rate in bits/s/Hz as (1/ln 2) * integral of coverage/(1+x).

    The threshold axis is mapped to (0, 1) by x = t/(1-t).  Raises
    DivergenceError when the coverage does not decay (rate would be
    unbounded).
    """
    if coverage_fn(1e9) > 0.5:
        raise DivergenceError("coverage does not decay at large thresholds; "
                              "the rate integral diverges")

    def integrand(t: float) -> float:
        return coverage_fn(t / (1.0 - t)) / (1.0 - t)

    val = _quad_checked(integrand, 0.0, 1.0, 1e-12, rel_tol, "rate_from_coverage")
    return val / math.log(2.0)


def rate_fixed(params: SystemParams, with_ris: bool) -> float:
    """Rate of the fixed-association user, with or without a serving surface."""
    if with_ris:
        return rate_from_coverage(lambda g: coverage_fixed_ris(params, g))
    return rate_from_coverage(lambda g: coverage_fixed_noris(params, g))


def rate_fixed_alpha4_intlim(params: SystemParams, with_ris: bool) -> float:
    """Closed-form fixed-association rate for alpha = 4 without noise.

    Uses the sine/cosine-integral kernel (pi - 2 Si(v)) sin(v) - 2 Ci(v) cos(v)
    evaluated on the square-root-in-s interference argument.
    """
    if params.path.alpha != 4.0:
        raise ValueError("this closed form requires a path-loss exponent of 4")
    if not params.interference_limited:
        raise ValueError("this closed form applies to the interference-limited regime")
    if not params.lambda_t > 0.0:
        raise ValueError("the noise-free rate is unbounded without interference")
    half_pi2_lam = 0.5 * math.pi**2 * params.lambda_t
    cd = params.path.c_d
    if with_ris:
        fit = _fixed_fit(params)
        kappa_hat = _round_shape(fit.kappa)
        order = kappa_hat - 1
        v_at_1 = half_pi2_lam * (params.p * math.sqrt(params.e1 / fit.omega)
                                 + (1.0 - params.p) * math.sqrt(cd / fit.omega))
        v = v_at_1 * jet_spow(0.5, order)
        si, ci = jet_si_ci(v)
        sj, cj = jet_sin_cos(v)
        kernel = (math.pi - 2.0 * si) * sj - 2.0 * ci * cj
        val, _ = alternating_tail_sum(kernel)
        return val / math.log(2.0)
    eta = params.eta_g0
    v = half_pi2_lam * (params.p * math.sqrt(params.e1 / eta)
                        + (1.0 - params.p) * math.sqrt(cd / eta))
    si, ci = _sp.sici(v)
    return ((math.pi - 2.0 * si) * math.sin(v) - 2.0 * ci * math.cos(v)) / math.log(2.0)


def rate_nearest(params: SystemParams, interference_limited: bool) -> float:
    """Rate of the nearest-association user."""
    if interference_limited:
        return rate_from_coverage(lambda g: coverage_nearest_intlimited(params, g))
    return rate_from_coverage(lambda g: coverage_nearest(params, g))


# ---------------------------------------------------------------------------
# Curve evaluation (CLI surface)
# ---------------------------------------------------------------------------

_CURVE_METHODS = {
    "fixed_ris": lambda params, g: coverage_fixed_ris(params, g),
    "fixed_noris": coverage_fixed_noris,
    "nearest": lambda params, g: coverage_nearest(params, g),
    "nearest_alpha4": lambda params, g: coverage_nearest_alpha4(params, g),
    "nearest_intlimited": lambda params, g: coverage_nearest_intlimited(params, g),
}


def evaluate_coverage_curve(params: SystemParams, thresholds, method: str) -> CoverageCurve:
    if method not in _CURVE_METHODS:
        raise ValueError(f"unknown coverage method {method!r}; "
                         f"choose from {sorted(_CURVE_METHODS)}")
    fn = _CURVE_METHODS[method]
    values = tuple(float(fn(params, float(g))) for g in np.asarray(thresholds, float))
    return CoverageCurve(tuple(float(g) for g in thresholds), values, method)
