"""Closed-system energy sharing: exact shell integrals and the Planck laws.

n oscillators and p molecules share a fixed total energy. With phi_n the
n-fold self-convolution of the oscillator weight density, the shell
integrals (a common 1/(p-1)! factor is dropped throughout; it cancels in
every ratio)::

    I   = integral_0^E (E - x)^(p-1) phi_n(x) dx
    I'  = integral_0^E x (E - x)^(p-1) phi_n(x) dx
    I'' = integral_0^E (E - x)^p phi_n(x) dx

give the exact finite-system mean energies n*Y = I'/I per oscillator block
and p*X = I''/I per molecule block. Lattice densities evaluate these as
exact sums; continuous ones go through grid quadrature. Every kernel
product is accumulated in the log domain so molecule counts up to 10^4 stay
inside float range.

The spectral laws (planck_u, planck_entropy, wien_temperature) close the
loop between the transform route and classical radiation thermodynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import (
    Comb,
    ConstDensity,
    EnsembleConfig,
    ExpDensity,
    Mixture,
    PhysicalConstants,
    REDUCED,
    Tabulated,
    WeightDensity,
    config_from_beta,
    continuous_density,
)
from .errors import NoStatesError
from .transform import asymptotic_energies, solve_saddle

_NEG_INF = float("-inf")


def log_sum_exp(values) -> float:
    """Stable log(sum(exp(values))) for a 1-d array that may contain -inf."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return _NEG_INF
    m = float(np.max(arr))
    if m == _NEG_INF:
        return _NEG_INF
    return m + math.log(float(np.sum(np.exp(arr - m))))


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# Spectral and entropy laws


@dataclass(frozen=True)
class SpectralPoint:
    """Spectral energy density u at frequency nu."""

    nu: float
    u: float


def planck_u(nu: float, temp: float, constants: PhysicalConstants = REDUCED) -> SpectralPoint:
    """Quantized-oscillator radiation density u(nu, T).

    u = (8 pi nu^2 / c^3) * h nu / (e^{h nu / k T} - 1). Below
    h nu / k T = 1e-8 the mean energy switches to its series form
    k T (1 - x/2 + x^2/12) to avoid the 0/0 of the ratio.
    """
    if not math.isfinite(nu) or nu <= 0:
        raise ValueError("nu must be finite and > 0")
    if not math.isfinite(temp) or temp <= 0:
        raise ValueError("temperature must be finite and > 0")
    x = constants.h * nu / (constants.k_b * temp)
    if x < 1e-8:
        mean = constants.k_b * temp * (1.0 - x / 2.0 + x * x / 12.0)
    elif x > 700.0:
        # e^x - 1 overflows; the mean is h nu e^{-x} to machine precision.
        mean = constants.h * nu * math.exp(-x)
    else:
        mean = constants.h * nu / math.expm1(x)
    u = 8.0 * math.pi * nu * nu / constants.c**3 * mean
    return SpectralPoint(nu, u)


def planck_entropy(u_mean: float, epsilon: float, constants: PhysicalConstants = REDUCED) -> float:
    """Entropy of one oscillator with mean energy u_mean and quantum epsilon.

    S = k [(1 + U/eps) log(1 + U/eps) - (U/eps) log(U/eps)], continuous at
    U = 0 with S = 0.
    """
    if not math.isfinite(u_mean) or u_mean < 0:
        raise ValueError("mean energy must be finite and >= 0")
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise ValueError("epsilon must be finite and > 0")
    ratio = u_mean / epsilon
    if ratio == 0.0:
        return 0.0
    return constants.k_b * ((1.0 + ratio) * math.log1p(ratio) - ratio * math.log(ratio))


def wien_temperature(u_mean: float, epsilon: float, constants: PhysicalConstants = REDUCED) -> float:
    """Temperature from the entropy derivative: 1/T = dS/dU.

    For the oscillator entropy above, dS/dU = (k/eps) log(1 + eps/U), so
    T = eps / (k log(1 + eps/U)). Requires U > 0.
    """
    if not math.isfinite(u_mean) or u_mean <= 0:
        raise ValueError("mean energy must be finite and > 0")
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise ValueError("epsilon must be finite and > 0")
    return epsilon / (constants.k_b * math.log1p(epsilon / u_mean))


# ---------------------------------------------------------------------------
# n-fold self-convolution of a weight density


def _lattice_count(e_total: float, epsilon: float) -> int:
    """Number of lattice sites with k*epsilon <= e_total (closed endpoint)."""
    return int(math.floor(e_total / epsilon * (1.0 + 1e-12))) + 1


def _stars_bars_log(m: int, n: int) -> float:
    """log C(m + n - 1, n - 1): compositions of m into n nonnegative parts."""
    if n + m <= 60:
        return math.log(math.comb(m + n - 1, n - 1))
    return math.lgamma(m + n) - math.lgamma(m + 1) - math.lgamma(n)


def _stars_bars(m: int, n: int) -> float:
    if n + m <= 60:
        return float(math.comb(m + n - 1, n - 1))
    return _safe_exp(_stars_bars_log(m, n))


def _poly_power_trunc(coeffs: np.ndarray, n: int, max_len: int) -> np.ndarray:
    """Truncated n-th power of a polynomial by repeated squaring."""
    result = None
    cur = np.asarray(coeffs, dtype=float)[:max_len]
    while n:
        if n & 1:
            result = cur if result is None else np.convolve(result, cur)[:max_len]
        n >>= 1
        if n:
            cur = np.convolve(cur, cur)[:max_len]
    return result


def _log_conv(a: np.ndarray, b: np.ndarray, max_len: int) -> np.ndarray:
    """Log-domain polynomial product, truncated to max_len coefficients."""
    out_len = min(max_len, len(a) + len(b) - 1)
    out = np.full(out_len, _NEG_INF)
    for i in range(out_len):
        j0 = max(0, i - len(b) + 1)
        j1 = min(len(a) - 1, i)
        seg = a[j0 : j1 + 1] + b[i - j1 : i - j0 + 1][::-1]
        out[i] = log_sum_exp(seg)
    return out


def _log_poly_power(log_coeffs: np.ndarray, n: int, max_len: int) -> np.ndarray:
    result = None
    cur = np.asarray(log_coeffs, dtype=float)[:max_len]
    while n:
        if n & 1:
            result = cur if result is None else _log_conv(result, cur, max_len)
        n >>= 1
        if n:
            cur = _log_conv(cur, cur, max_len)
    return result


def _comb_log_weights(w: Comb, n: int, count: int) -> np.ndarray:
    """Log weights of the n-fold comb product at lattice sites 0..count-1."""
    if w.infinite:
        log_mass = n * math.log(w.masses[0])
        return np.array(
            [log_mass + _stars_bars_log(m, n) for m in range(count)], dtype=float
        )
    with np.errstate(divide="ignore"):
        base = np.log(np.asarray(w.masses, dtype=float))
    return _log_poly_power(base, n, count)


def _conv_grid(e_total: float, step: float | None) -> np.ndarray:
    """Uniform grid on [0, e_total] with at least 512 sample intervals."""
    if step is None:
        num = 513
    else:
        if not math.isfinite(step) or step <= 0:
            raise ValueError("grid step must be finite and > 0")
        num = max(2, int(math.ceil(e_total / step)) + 1)
    return np.linspace(0.0, e_total, num)


def _trap_conv(f: np.ndarray, g: np.ndarray, h: float, max_len: int) -> np.ndarray:
    """Trapezoid-weighted continuous convolution of two sampled densities."""
    full = np.convolve(f, g)[:max_len]
    m = len(full)
    full = full - 0.5 * (f[0] * g[:m] + g[0] * f[:m])
    return np.maximum(full * h, 0.0)


def _sampled_convolution(vals: np.ndarray, n: int, h: float) -> np.ndarray:
    acc = vals
    for _ in range(n - 1):
        acc = _trap_conv(acc, vals, h, len(vals))
    return acc


def phi_convolution(
    w: WeightDensity, n: int, e_total: float, step: float | None = None
) -> WeightDensity:
    """n-fold self-convolution of w, restricted to the support [0, e_total].

    Combs convolve exactly on their lattice (the infinite unit comb weights
    are the composition counts C(m+n-1, n-1)); continuous densities use an
    iterated trapezoid-grid convolution with >= 512 intervals spanning
    [0, e_total] (step overrides the default e_total/512). Mixtures bin
    their comb atoms onto the grid first, an approximation at grid
    resolution. n = 1 returns w itself.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be an integer >= 1")
    if not math.isfinite(e_total) or e_total <= 0:
        raise ValueError("e_total must be finite and > 0")
    if n == 1:
        return w
    if isinstance(w, Comb):
        count = _lattice_count(e_total, w.epsilon)
        if w.infinite:
            scale = w.masses[0] ** n
            weights = tuple(scale * _stars_bars(m, n) for m in range(count))
        else:
            weights = tuple(_poly_power_trunc(np.asarray(w.masses), n, count))
        if not any(v > 0 for v in weights):
            raise NoStatesError("convolution support lies above e_total")
        return Comb(w.epsilon, weights, infinite=False)
    xs = _conv_grid(e_total, step)
    h = float(xs[1] - xs[0])
    if isinstance(w, (ConstDensity, ExpDensity)):
        # Closed form: the n-fold product of level*e^{-rate x} is
        # level^n x^{n-1} e^{-rate x} / (n-1)!, sampled directly.
        rate = w.rate if isinstance(w, ExpDensity) else 0.0
        vals = np.empty(len(xs))
        vals[0] = 0.0
        vals[1:] = np.exp(
            n * math.log(w.level)
            + (n - 1) * np.log(xs[1:])
            - rate * xs[1:]
            - math.lgamma(n)
        )
    else:
        vals = np.array([continuous_density(w, float(x)) for x in xs])
        if isinstance(w, Mixture) and w.comb is not None:
            part = w.comb
            for k in range(_lattice_count(e_total, part.epsilon)):
                if part.infinite:
                    mass = part.masses[0]
                elif k < len(part.masses):
                    mass = part.masses[k]
                else:
                    break
                idx = int(round(k * part.epsilon / h))
                if mass > 0 and idx < len(vals):
                    vals[idx] += mass / h
        vals = _sampled_convolution(vals, n, h)
    if not np.any(vals > 0):
        raise NoStatesError("convolution support lies above e_total")
    return Tabulated(tuple((float(x), float(v)) for x, v in zip(xs, vals)))


# ---------------------------------------------------------------------------
# Exact finite-system mean energies


@dataclass(frozen=True)
class MicrocanonicalResult:
    """Shell integrals and the finite-system mean energies they imply.

    The log fields are authoritative: the linear ``i``/``i_prime``/
    ``i_second`` properties overflow to inf once the integrals leave float
    range (they grow like e_total^(n+p-1)). A common 1/(p-1)! factor is
    dropped from all three integrals; it cancels in y and x. By
    construction n*y + p*x = e_total.
    """

    log_i: float
    log_i_prime: float
    log_i_second: float
    y: float
    x: float

    @property
    def i(self) -> float:
        return _safe_exp(self.log_i)

    @property
    def i_prime(self) -> float:
        return _safe_exp(self.log_i_prime)

    @property
    def i_second(self) -> float:
        return _safe_exp(self.log_i_second)


def _shell_sums(log_weight: np.ndarray, xs: np.ndarray, p: int, e_total: float):
    """Log-domain accumulation of the three kernel sums over support points."""
    d = np.maximum(e_total - xs, 0.0)
    with np.errstate(divide="ignore"):
        logd = np.log(d)
        logx = np.log(xs)
    if p == 1:
        km1 = np.zeros_like(d)  # (E - x)^0 = 1, including at the x = E edge
    else:
        km1 = (p - 1) * logd
    terms = log_weight + km1
    log_i = log_sum_exp(terms)
    log_ip = log_sum_exp(terms + logx)
    log_ipp = log_sum_exp(log_weight + p * logd)
    return log_i, log_ip, log_ipp


def exact_mean_energies(
    w: WeightDensity, config: EnsembleConfig, step: float | None = None
) -> MicrocanonicalResult:
    """Exact mean energies of the closed n-oscillator / p-molecule system.

    Lattice densities are summed exactly over the convolution lattice;
    continuous densities integrate the grid convolution by the trapezoid
    rule. Both accumulate kernel products in the log domain, so molecule
    powers up to 10^4 are safe. Raises NoStatesError when no state lies at
    or below e_total.
    """
    n, p, e_total = config.n, config.p, config.e_total
    if isinstance(w, Comb):
        count = _lattice_count(e_total, w.epsilon)
        log_weight = _comb_log_weights(w, n, count)
        # finite combs may run out of support before the energy cap
        xs = np.arange(len(log_weight), dtype=float) * w.epsilon
    else:
        phi_n = phi_convolution(w, n, e_total, step)
        if n > 1:
            # phi_convolution built this table on the uniform grid already.
            xs = np.array([e for e, _ in phi_n.knots])
            vals = np.array([v for _, v in phi_n.knots])
        else:
            xs = _conv_grid(e_total, step)
            vals = np.array([continuous_density(phi_n, float(x)) for x in xs])
        h = float(xs[1] - xs[0])
        with np.errstate(divide="ignore"):
            log_weight = np.log(vals) + math.log(h)
        log_weight[0] -= math.log(2.0)
        log_weight[-1] -= math.log(2.0)
    log_i, log_ip, log_ipp = _shell_sums(log_weight, xs, p, e_total)
    if log_i == _NEG_INF:
        raise NoStatesError("no states at or below e_total")
    y = _safe_exp(log_ip - math.log(n) - log_i)
    x = _safe_exp(log_ipp - math.log(p) - log_i)
    return MicrocanonicalResult(log_i, log_ip, log_ipp, y, x)


# ---------------------------------------------------------------------------
# Finite-size convergence toward the saddle-point law


@dataclass(frozen=True)
class ConvergenceRow:
    """One system size in a convergence study."""

    n: int
    p: int
    y_exact: float
    y_asymptotic: float
    abs_error: float


def convergence_study(
    w: WeightDensity,
    beta: float,
    r: float,
    n_list,
    step: float | None = None,
) -> list[ConvergenceRow]:
    """Exact vs saddle-point mean energy at fixed beta = E/n and r = p/n.

    Every n in n_list must make r*n a positive integer. The saddle value
    depends only on (beta, r) and is computed once.
    """
    sizes = list(n_list)
    if not sizes:
        raise ValueError("n_list must not be empty")
    configs = []
    for size in sizes:
        as_int = int(size)
        if as_int != size:
            raise ValueError(f"n = {size!r} is not an integer")
        configs.append(config_from_beta(beta, r, as_int))
    sol = solve_saddle(w, configs[0])
    y_asy, _ = asymptotic_energies(sol, configs[0])
    rows = []
    for cfg in configs:
        res = exact_mean_energies(w, cfg, step=step)
        rows.append(ConvergenceRow(cfg.n, cfg.p, res.y, y_asy, abs(res.y - y_asy)))
    return rows
