"""Laplace transform of a weight density and the mean-energy law it induces.

The central objects::

    Phi(alpha) = integral_0^inf w(eta) exp(-alpha eta) d eta
    Y(alpha)   = -Phi'(alpha)/Phi(alpha) = -(log Phi)'(alpha)

Y is the mean oscillator energy when alpha plays the role of an inverse
temperature. Phi' is always evaluated through the differentiated kernel
(-eta inside the integral / sum), never by finite differences.

To stay well conditioned at large alpha, every density is reduced about the
lowest energy s that carries mass: Phi = exp(-alpha s) * m0 with m0 bounded
away from underflow, and Y = s + m1/m0. The saddle-point route for the
reduced integrand Theta(alpha, omega) = Phi(alpha) e^{alpha omega}
(beta - omega)^r lives here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .density import (
    Comb,
    ConstDensity,
    EnergyCurve,
    EnsembleConfig,
    ExpDensity,
    Mixture,
    Tabulated,
    WeightDensity,
    AlphaGrid,
)
from .errors import DegenerateDensityError, NoSaddleError


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0:
        raise ValueError("alpha must be finite and > 0")
    return alpha


def _gamma123(x: float) -> tuple[float, float, float]:
    """Lower incomplete gamma values (gamma(m, x) for m = 1, 2, 3).

    gamma(1,x) = 1 - e^-x, gamma(2,x) = 1 - (1+x)e^-x,
    gamma(3,x) = 2 - (2 + 2x + x^2)e^-x. The closed forms cancel badly for
    small x, so below x = 1 each is summed as
    x^m * sum_k (-x)^k / (k! (k+m)).
    """
    if x < 1.0:
        out = []
        for order in (1, 2, 3):
            total = 1.0 / order
            term = total
            fact = 1.0
            powx = 1.0
            for k in range(1, 60):
                fact *= k
                powx *= -x
                term = powx / (fact * (k + order))
                total += term
                if abs(term) <= 1e-17 * abs(total):
                    break
            out.append(total * x**order)
        return out[0], out[1], out[2]
    emx = math.exp(-x)
    return (
        1.0 - emx,
        1.0 - (1.0 + x) * emx,
        2.0 - (2.0 + 2.0 * x + x * x) * emx,
    )


def _comb_moments(w: Comb, alpha: float) -> tuple[float, float, float]:
    if w.infinite:
        # All sites carry masses[0]; geometric closed forms about s = 0.
        m = w.masses[0]
        x = w.epsilon * alpha
        q = -math.expm1(-x)  # 1 - e^-x
        m0 = m / q
        m1 = m * w.epsilon * math.exp(-x) / (q * q)
        return m0, m1, 0.0
    first = next((k for k, mk in enumerate(w.masses) if mk > 0), None)
    if first is None:
        return 0.0, 0.0, 0.0
    shift = first * w.epsilon
    m0 = math.fsum(
        mk * math.exp(-alpha * (k - first) * w.epsilon)
        for k, mk in enumerate(w.masses[first:], start=first)
    )
    m1 = math.fsum(
        mk * (k - first) * w.epsilon * math.exp(-alpha * (k - first) * w.epsilon)
        for k, mk in enumerate(w.masses[first:], start=first)
    )
    return m0, m1, shift


def _table_moments(w: Tabulated, alpha: float) -> tuple[float, float, float]:
    segs = [
        (a, b, da, db)
        for (a, da), (b, db) in zip(w.knots[:-1], w.knots[1:])
        if da > 0 or db > 0
    ]
    if not segs:
        return 0.0, 0.0, 0.0
    shift = segs[0][0]
    part0 = []
    part1 = []
    inv_a = 1.0 / alpha
    for a, b, da, db in segs:
        width = b - a
        slope = (db - da) / width
        g1, g2, g3 = _gamma123(alpha * width)
        base = math.exp(-alpha * (a - shift))
        seg0 = da * g1 * inv_a + slope * g2 * inv_a * inv_a
        seg1 = (a - shift) * seg0 + da * g2 * inv_a * inv_a + slope * g3 * inv_a**3
        part0.append(base * seg0)
        part1.append(base * seg1)
    return math.fsum(part0), math.fsum(part1), shift


def _moments(w: WeightDensity, alpha: float) -> tuple[float, float, float]:
    """(m0, m1, s) with Phi = e^{-alpha s} m0 and -Phi' = e^{-alpha s}(s m0 + m1)."""
    if isinstance(w, Comb):
        return _comb_moments(w, alpha)
    if isinstance(w, Tabulated):
        return _table_moments(w, alpha)
    if isinstance(w, ConstDensity):
        return w.level / alpha, w.level / (alpha * alpha), 0.0
    if isinstance(w, ExpDensity):
        q = alpha + w.rate
        return w.level / q, w.level / (q * q), 0.0
    if isinstance(w, Mixture):
        parts = []
        if w.comb is not None:
            parts.append(_comb_moments(w.comb, alpha))
        if w.table is not None:
            parts.append(_table_moments(w.table, alpha))
        parts = [p for p in parts if p[0] > 0.0]
        if not parts:
            return 0.0, 0.0, 0.0
        shift = min(p[2] for p in parts)
        m0 = math.fsum(p[0] * math.exp(-alpha * (p[2] - shift)) for p in parts)
        m1 = math.fsum(
            (p[1] + (p[2] - shift) * p[0]) * math.exp(-alpha * (p[2] - shift))
            for p in parts
        )
        return m0, m1, shift
    raise ValueError(f"not a weight density: {type(w).__name__}")


def phi(w: WeightDensity, alpha: float) -> float:
    """Laplace transform of the weight density at alpha > 0.

    Positive for every valid density; may underflow to 0.0 in float for
    densities supported far from eta = 0 at very large alpha (log_phi stays
    usable much longer).
    """
    alpha = _check_alpha(alpha)
    m0, _, shift = _moments(w, alpha)
    return math.exp(-alpha * shift) * m0


def log_phi(w: WeightDensity, alpha: float) -> float:
    """log Phi(alpha), computed without forming the underflow-prone product."""
    alpha = _check_alpha(alpha)
    m0, _, shift = _moments(w, alpha)
    if not (m0 > 0):
        raise DegenerateDensityError("density carries no mass; log Phi undefined")
    return -alpha * shift + math.log(m0)


def phi_prime(w: WeightDensity, alpha: float) -> float:
    """d Phi / d alpha, via the differentiated kernel (-eta under the integral)."""
    alpha = _check_alpha(alpha)
    m0, m1, shift = _moments(w, alpha)
    return -math.exp(-alpha * shift) * (shift * m0 + m1)


def mean_resonator_energy(w: WeightDensity, alpha: float) -> float:
    """Mean oscillator energy Y(alpha) = -Phi'(alpha)/Phi(alpha).

    Analytic reference densities use their closed forms (w = const gives
    exactly 1/alpha, w = exp gives 1/(alpha + rate)); the infinite comb
    reduces to epsilon/(e^{epsilon alpha} - 1). General densities evaluate
    as s + m1/m0 about the lowest massive energy s, which survives alpha
    values where Phi itself underflows.
    """
    alpha = _check_alpha(alpha)
    if isinstance(w, ConstDensity):
        return 1.0 / alpha
    if isinstance(w, ExpDensity):
        return 1.0 / (alpha + w.rate)
    if isinstance(w, Comb) and w.infinite:
        x = w.epsilon * alpha
        return w.epsilon * math.exp(-x) / (-math.expm1(-x))
    m0, m1, shift = _moments(w, alpha)
    if not (m0 > 0) or not math.isfinite(m0):
        raise DegenerateDensityError("density carries no mass; mean energy undefined")
    return shift + m1 / m0


def energy_curve_on_grid(w: WeightDensity, grid: AlphaGrid) -> EnergyCurve:
    """Sample Y(alpha) over a grid; the result is a valid non-increasing curve."""
    ys = [mean_resonator_energy(w, a) for a in grid.values]
    return EnergyCurve(tuple(grid.values), tuple(ys))


@dataclass(frozen=True)
class ThetaPoint:
    """One evaluation of the reduced integrand Theta(alpha, omega)."""

    alpha: float
    omega: float
    value: float
    log_value: float


def theta(w: WeightDensity, alpha: float, omega: float, config: EnsembleConfig) -> ThetaPoint:
    """Reduced integrand Phi(alpha) e^{alpha omega} (beta - omega)^r, r = p/n.

    Requires 0 < omega < beta; the log form is the one the saddle analysis
    differentiates, so it is returned alongside the plain value.
    """
    alpha = _check_alpha(alpha)
    beta = config.beta
    if not math.isfinite(omega) or omega <= 0 or omega >= beta:
        raise ValueError("omega must satisfy 0 < omega < beta")
    log_value = log_phi(w, alpha) + alpha * omega + config.ratio * math.log(beta - omega)
    return ThetaPoint(alpha, omega, math.exp(log_value), log_value)


@dataclass(frozen=True)
class SaddleSolution:
    """Joint root of the two saddle conditions for the reduced integrand.

    residual_stationarity is Phi'(alpha0)/Phi(alpha0) + omega0 (stationarity
    in alpha); residual_constraint is alpha0 - r/(beta - omega0)
    (stationarity in omega), zero by construction here.
    """

    alpha0: float
    omega0: float
    iterations: int
    residual_stationarity: float
    residual_constraint: float


def solve_saddle(
    w: WeightDensity,
    config: EnsembleConfig,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> SaddleSolution:
    """Solve the saddle equations Y(alpha0) = omega0, alpha0 = r/(beta - omega0).

    Substituting alpha(omega) = r/(beta - omega) leaves a single equation
    g(omega) = Y(alpha(omega)) - omega = 0 on (0, beta). Y is non-increasing
    in alpha and alpha(omega) is increasing, so g is strictly decreasing and
    bisection is guaranteed to converge; Newton steps are not worth the
    monotonicity risk. Raises NoSaddleError when g has no sign change (for
    example a single atom at energy above beta) or when the iteration cap is
    reached before |g| <= tol.
    """
    beta = config.beta
    ratio = config.ratio

    def g(omega: float) -> float:
        return mean_resonator_energy(w, ratio / (beta - omega)) - omega

    lo = beta * 1e-12
    hi = beta * (1.0 - 1e-12)
    g_lo = g(lo)
    if g_lo <= 0.0:
        raise NoSaddleError("mean energy vanishes at the low end; no interior saddle")
    g_hi = g(hi)
    if g_hi >= 0.0:
        raise NoSaddleError(
            "mean energy exceeds the per-resonator budget everywhere; no saddle"
        )
    omega_mid = 0.5 * (lo + hi)
    for iteration in range(1, max_iter + 1):
        omega_mid = 0.5 * (lo + hi)
        g_mid = g(omega_mid)
        if abs(g_mid) <= tol:
            alpha0 = ratio / (beta - omega_mid)
            return SaddleSolution(
                alpha0=alpha0,
                omega0=omega_mid,
                iterations=iteration,
                residual_stationarity=-g_mid,
                residual_constraint=0.0,
            )
        if g_mid > 0.0:
            lo = omega_mid
        else:
            hi = omega_mid
    raise NoSaddleError(f"saddle bisection did not reach |g| <= {tol} in {max_iter} steps")


def asymptotic_energies(sol: SaddleSolution, config: EnsembleConfig) -> tuple[float, float]:
    """Large-system mean energies (Y, X) from a saddle solution.

    Y = omega0 per resonator and X = (beta - omega0)/r per molecule, so
    X * alpha0 = 1 and n Y + p X = e_total hold identically.
    """
    y = sol.omega0
    x = (config.beta - sol.omega0) / config.ratio
    return y, x
