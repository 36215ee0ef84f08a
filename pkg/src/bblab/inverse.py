"""Inverse route: from a mean-energy law back to the weight density.

Given samples of Y(alpha), integrating -Y recovers log Phi up to an
additive constant, i.e. Phi up to a multiplicative one; that constant is
anchored at the first sample and declared, never hidden. Recovering w
from Phi samples on a finite real alpha-window is ill-posed, so the
inversion is posed as Tikhonov-regularized nonnegative collocation:

    minimize over m >= 0   sum_j (sum_k exp(-alpha_j eta_k) m_k - Phi_j)^2
                           + lam * sum_k m_k^2

Uniqueness therefore holds only up to the regularization scale set by
lam and the sampled alpha-window, not in the ideal sense that analytic
continuation of Phi would give. Downstream verdicts (atom detection,
singularity of w at the origin, divergence of the spectral integral)
are computed from the regularized solution and carry their thresholds
explicitly.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Union

import numpy as np

from .density import (
    Comb,
    EnergyCurve,
    PhysicalConstants,
    REDUCED,
    WeightDensity,
    cumulative_mass,
    stretch_density,
)
from .errors import ComputationError
from .transform import mean_resonator_energy


def reconstruct_log_phi(curve: EnergyCurve) -> np.ndarray:
    """Recover log Phi samples from a mean-energy law by quadrature.

    Y = -(log Phi)', so log Phi is the cumulative trapezoid integral of
    -Y along the alpha grid, anchored at log Phi(alpha_min) = 0. Returns
    an (n, 2) array with columns (alpha, log_phi).
    """
    alphas = np.asarray(curve.alphas, dtype=float)
    energies = np.asarray(curve.energies, dtype=float)
    if alphas.size < 2:
        raise ValueError("need at least 2 samples to integrate")
    steps = np.diff(alphas)
    segments = -0.5 * (energies[:-1] + energies[1:]) * steps
    log_phi = np.concatenate(([0.0], np.cumsum(segments)))
    return np.column_stack((alphas, log_phi))


class DetectedAtom(NamedTuple):
    """A concentrated mass found on the reconstruction grid."""

    position: float
    mass: float


def detect_atoms(
    eta_grid,
    masses,
    window: int = 3,
    threshold: float = 0.05,
) -> list[DetectedAtom]:
    """Find concentrated masses in a gridded density.

    A run of `window` consecutive cells is an atom candidate when its
    summed mass exceeds `threshold` times the total and is a local
    maximum among window sums (missing neighbors count as minus
    infinity). Candidates are accepted greedily by decreasing mass onto
    disjoint windows; each atom sits at the mass-weighted centroid of
    its window. Returned sorted by position.
    """
    grid = np.asarray(eta_grid, dtype=float)
    m = np.asarray(masses, dtype=float)
    if grid.shape != m.shape or grid.ndim != 1:
        raise ValueError("eta_grid and masses must be 1-d of equal length")
    if window < 1 or window > m.size:
        raise ValueError("window must be between 1 and the grid size")
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    total = float(m.sum())
    if total <= 0.0:
        return []
    sums = np.convolve(m, np.ones(window), mode="valid")  # sums[i] = m[i:i+window]
    cut = threshold * total
    candidates = []
    for i, s in enumerate(sums):
        if s <= cut:
            continue
        left = sums[i - 1] if i > 0 else -math.inf
        right = sums[i + 1] if i + 1 < sums.size else -math.inf
        if s >= left and s >= right:
            candidates.append((-s, i))
    candidates.sort()
    accepted: list[int] = []
    for _, i in candidates:
        if all(abs(i - j) >= window for j in accepted):
            accepted.append(i)
    atoms = []
    for i in accepted:
        cells = slice(i, i + window)
        w_sum = float(m[cells].sum())
        centroid = float(np.dot(grid[cells], m[cells]) / w_sum)
        atoms.append(DetectedAtom(centroid, w_sum))
    atoms.sort(key=lambda a: a.position)
    return atoms


# Dual (gradient) tolerance for the active-set solver. Chosen so the
# reported KKT residual 2*|dual| lands safely below the 1e-9 contract.
_DUAL_TOL = 4e-10


def _nnls_normal(h: np.ndarray, f: np.ndarray, max_iter: int):
    """Nonnegative least squares on the normal equations h m = f, m >= 0.

    Active-set method: repeatedly admit the most violating coordinate,
    solve the unconstrained subproblem on the passive set, and back off
    along the segment to the feasible region when the subproblem goes
    negative. Deterministic, zero-initialized. Returns (m, iterations,
    converged); on hitting max_iter the best iterate seen is returned.
    """
    ncols = f.size
    m = np.zeros(ncols)
    passive = np.zeros(ncols, dtype=bool)
    best_m = m.copy()
    best_obj = 0.0  # objective relative to m=0: m.(h m) - 2 f.m
    iterations = 0
    dual = f.copy()  # f - h m, the descent direction at the current m
    converged = False
    while True:
        free = ~passive
        if not free.any() or float(dual[free].max()) <= _DUAL_TOL:
            converged = True
            break
        if iterations >= max_iter:
            break
        cand = np.flatnonzero(free)
        passive[cand[np.argmax(dual[cand])]] = True
        while True:
            iterations += 1
            idx = np.flatnonzero(passive)
            if idx.size == 0:
                m = np.zeros(ncols)
                break
            s = np.zeros(ncols)
            s[idx] = np.linalg.solve(h[np.ix_(idx, idx)], f[idx])
            if float(s[idx].min()) > 0.0:
                m = s
                break
            neg = idx[s[idx] <= 0.0]
            den = m[neg] - s[neg]
            theta = np.where(den > 0.0, m[neg] / np.where(den > 0.0, den, 1.0), 0.0)
            k = int(np.argmin(theta))
            m = m + float(theta[k]) * (s - m)
            m[neg[k]] = 0.0
            gone = idx[m[idx] <= 0.0]
            m[gone] = 0.0
            passive[gone] = False
            if iterations >= max_iter:
                break
        dual = f - h @ m
        obj = float(m @ (h @ m) - 2.0 * (f @ m))
        if obj < best_obj:
            best_obj = obj
            best_m = m.copy()
    if not converged:
        m = best_m
    return m, iterations, converged


def _kkt_residual(h: np.ndarray, f: np.ndarray, m: np.ndarray) -> float:
    """Max violation of the stationarity conditions at m for the QP."""
    g = 2.0 * (h @ m - f)
    support = m > 0.0
    res = 0.0
    if support.any():
        res = float(np.abs(g[support]).max())
    if (~support).any():
        res = max(res, float(np.maximum(-g[~support], 0.0).max()))
    return res


class Reconstruction(NamedTuple):
    """Regularized nonnegative inversion of Laplace-transform samples."""

    eta_grid: tuple[float, ...]
    masses: tuple[float, ...]
    atoms: tuple[DetectedAtom, ...]
    residual_rms: float
    lam: float
    kkt_residual: float
    converged: bool
    iterations: int


def reconstruct_weight(
    phi_samples,
    eta_max: float,
    grid_size: int,
    lam: float = 1e-6,
    max_iter: int = 10**5,
) -> Reconstruction:
    """Invert Phi samples to nonnegative masses on a uniform eta grid.

    phi_samples is a sequence of (alpha, phi) pairs with alpha, phi
    finite and positive. Solves the Tikhonov-regularized nonnegative
    least-squares collocation problem; the result reports the final
    stationarity (KKT) residual and whether it met the 1e-9 contract.
    Hitting the iteration cap is not an exception: the best iterate is
    returned with converged=False so callers can inspect it.

    The overall data scale is a nuisance parameter (the transform is
    only determined up to a multiplicative constant), so the solve runs
    on peak-normalized samples: tolerances mean the same thing for
    every input, and scaling the data scales the masses exactly. The
    reported kkt_residual belongs to the normalized problem;
    residual_rms and masses are in the units of the samples as given.
    """
    samples = np.asarray(phi_samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2 or samples.shape[0] < 2:
        raise ValueError("phi_samples must be at least 2 (alpha, phi) pairs")
    alphas = samples[:, 0]
    phis = samples[:, 1]
    if not np.all(np.isfinite(samples)) or np.any(alphas <= 0) or np.any(phis <= 0):
        raise ValueError("alpha and phi samples must be finite and positive")
    if not math.isfinite(eta_max) or eta_max <= 0:
        raise ValueError("eta_max must be positive")
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    if not math.isfinite(lam) or lam <= 0:
        raise ValueError("lambda must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    grid = np.linspace(0.0, eta_max, int(grid_size))
    scale = float(phis.max())
    phis_unit = phis / scale
    design = np.exp(-np.outer(alphas, grid))
    h = design.T @ design
    h[np.diag_indices_from(h)] += lam
    f = design.T @ phis_unit
    m, iterations, converged = _nnls_normal(h, f, max_iter)
    kkt = _kkt_residual(h, f, m)
    if converged and kkt > 1e-9 and iterations < max_iter:
        # one refinement solve on the support tightens stationarity
        idx = np.flatnonzero(m > 0.0)
        if idx.size:
            m[idx] += np.linalg.solve(
                h[np.ix_(idx, idx)], f[idx] - h[np.ix_(idx, idx)] @ m[idx]
            )
            m[idx] = np.maximum(m[idx], 0.0)
            kkt = _kkt_residual(h, f, m)
    converged = converged and kkt <= 1e-9
    misfit = design @ m - phis_unit
    rms = float(np.sqrt(np.mean(misfit * misfit))) * scale
    m = m * scale
    atoms = tuple(detect_atoms(grid, m))
    return Reconstruction(
        eta_grid=tuple(float(x) for x in grid),
        masses=tuple(float(v) for v in m),
        atoms=atoms,
        residual_rms=rms,
        lam=float(lam),
        kkt_residual=kkt,
        converged=converged,
        iterations=iterations,
    )


def reconstruction_to_density(recon: Reconstruction) -> Comb:
    """View a reconstruction as a lattice density on its own grid."""
    step = recon.eta_grid[1] - recon.eta_grid[0]
    return Comb(epsilon=float(step), masses=tuple(recon.masses))


class SingularityVerdict(NamedTuple):
    """Whether mass persists at the origin, with the extrapolated limit."""

    singular: bool
    limit: float
    exponent: float


# An extrapolated origin mass below this fraction of the total is noise.
_SINGULAR_FRACTION = 1e-6


def singularity_test(w: WeightDensity, eta0_list) -> SingularityVerdict:
    """Decide whether w carries strictly positive mass at the origin.

    Evaluates the cumulative mass at each eta0 and extrapolates to 0 by
    fitting mass ~ a + b*eta0^q over the last 4 points (the smallest
    eta0), trying q in {1/2, 1, 2} and keeping the best least-squares
    fit. Singular means the intercept a exceeds 1e-6 of the total mass
    on [0, max eta0]. An integrable density blowup (finite cumulative
    mass sliding to 0) is not singular in this sense; a point mass is.
    """
    pts = [float(e) for e in eta0_list]
    if len(pts) < 4:
        raise ValueError("need at least 4 eta0 values")
    if any(e <= 0 for e in pts):
        raise ValueError("eta0 values must be positive")
    if any(b >= a for a, b in zip(pts, pts[1:])):
        raise ValueError("eta0 values must be strictly decreasing")
    masses = np.array([cumulative_mass(w, e) for e in pts])
    xs = np.array(pts[-4:])
    ys = masses[-4:]
    best = None
    for q in (0.5, 1.0, 2.0):
        design = np.column_stack((np.ones(4), xs**q))
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        resid = float(np.sum((design @ coef - ys) ** 2))
        if best is None or resid < best[0]:
            best = (resid, float(coef[0]), q)
    _, limit, exponent = best
    total = cumulative_mass(w, pts[0])
    singular = limit > _SINGULAR_FRACTION * total
    return SingularityVerdict(singular, limit, exponent)


class DivergenceVerdict(NamedTuple):
    """Classification of the total spectral energy integral."""

    classification: str  # convergent | divergent | inconclusive
    ratios: tuple[float, ...]
    partials: tuple[float, ...]
    note: str = ""


# Band-ratio thresholds: geometric decay at 1/2 or better is convergent,
# sustained growth-or-stall at 0.9 or worse is divergent, and the zone
# between is left inconclusive on purpose.
_CONVERGENT_RATIO = 0.5
_DIVERGENT_RATIO = 0.9
_RATIO_RUN = 3
_BAND_PANELS = 256


def total_energy_divergence(
    w_family: Union[WeightDensity, Callable[[float], WeightDensity]],
    temperature: float,
    nu_max_doublings: int = 20,
    constants: PhysicalConstants = REDUCED,
) -> DivergenceVerdict:
    """Classify convergence of the total radiated energy at temperature T.

    w_family maps the quantum scale eps = h*nu to a weight density; a
    bare density is promoted to the family of its stretches (it is read
    as the eps = 1 member). Partial integrals of (8 pi nu^2 / c^3) *
    Y(eps(nu), alpha=1/k_B T) are accumulated over dyadic frequency
    bands [2^j, 2^(j+1)] * (k_B T / h) by composite Simpson quadrature.
    Decay of the band sequence decides the verdict; a tail that
    underflows to exact zero after positive bands counts as convergence
    evidence, and a non-finite or failed evaluation yields inconclusive
    with a diagnostic note.
    """
    if not math.isfinite(temperature) or temperature <= 0:
        raise ValueError("temperature must be positive")
    if nu_max_doublings < 1:
        raise ValueError("nu_max_doublings must be at least 1")
    if callable(w_family):
        family = w_family
    else:
        base = w_family

        def family(eps: float, _w=base) -> WeightDensity:
            return stretch_density(_w, eps)

    alpha = 1.0 / (constants.k_b * temperature)
    nu_unit = constants.k_b * temperature / constants.h
    prefactor = 8.0 * math.pi / constants.c**3
    partials: list[float] = []
    note = ""
    failed = False
    for j in range(nu_max_doublings):
        lo = nu_unit * 2.0**j
        hi = nu_unit * 2.0 ** (j + 1)
        nodes = np.linspace(lo, hi, _BAND_PANELS + 1)
        vals = np.empty(nodes.size)
        try:
            for i, nu in enumerate(nodes):
                y = mean_resonator_energy(family(constants.h * nu), alpha)
                if not math.isfinite(y):
                    raise ComputationError(
                        f"mean energy not finite at nu={nu:.6g}"
                    )
                vals[i] = prefactor * nu * nu * y
        except ComputationError as exc:
            note = f"band {j} failed: {exc}"
            failed = True
            break
        step = (hi - lo) / _BAND_PANELS
        weights = np.ones(nodes.size)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        partials.append(float(step / 3.0 * np.dot(weights, vals)))
    ratios = tuple(
        b / a for a, b in zip(partials, partials[1:]) if a > 0.0 and b > 0.0
    )
    if failed:
        return DivergenceVerdict("inconclusive", ratios, tuple(partials), note)
    if not any(p > 0.0 for p in partials):
        return DivergenceVerdict(
            "convergent", ratios, tuple(partials), "integrand vanishes on all bands"
        )
    if partials[-1] == 0.0:
        return DivergenceVerdict(
            "convergent",
            ratios,
            tuple(partials),
            "tail bands underflow to zero after positive bands",
        )
    if len(ratios) < _RATIO_RUN:
        return DivergenceVerdict(
            "inconclusive", ratios, tuple(partials), "too few usable bands"
        )
    tail = ratios[-_RATIO_RUN:]
    if all(r <= _CONVERGENT_RATIO for r in tail):
        return DivergenceVerdict("convergent", ratios, tuple(partials))
    if all(r >= _DIVERGENT_RATIO for r in tail):
        return DivergenceVerdict("divergent", ratios, tuple(partials))
    return DivergenceVerdict("inconclusive", ratios, tuple(partials))
