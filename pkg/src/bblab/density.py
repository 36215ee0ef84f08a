"""Core value types: oscillator energy-weight densities and run parameters.

A weight density w(eta) >= 0 describes how much statistical weight an
oscillator state carries at energy eta. Four concrete shapes are supported:

* ``Comb``: point masses on the lattice eta = k*epsilon, k = 0, 1, ..., K.
  With ``infinite=True`` the (all equal) masses repeat for every k, which is
  the shape that produces the quantized radiation law.
* ``Tabulated``: a piecewise-linear density over a finite knot span, zero
  outside it.
* ``ConstDensity`` / ``ExpDensity``: analytic references w = level and
  w = level*exp(-rate*eta) on [0, inf). Tabulated densities cannot reach to
  infinity, so these two exist as exact builtins for cross-checks.
* ``Mixture``: a comb part plus a tabulated part.

All values are frozen after construction; every operation in the package is
a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

# Relative slack when deciding whether a lattice atom sits inside a closed
# interval; atoms live at closed left endpoints.
_ATOM_EDGE = 1e-12


@dataclass(frozen=True)
class Comb:
    """Point masses m_k at eta = k*epsilon; infinite combs repeat masses[0]."""

    epsilon: float
    masses: tuple[float, ...]
    infinite: bool = False

    @property
    def kind(self) -> str:
        return "comb"


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear density through (eta, w) knots, zero outside the span."""

    knots: tuple[tuple[float, float], ...]

    @property
    def kind(self) -> str:
        return "tabulated"


@dataclass(frozen=True)
class ConstDensity:
    """w(eta) = level on [0, inf); the equipartition reference."""

    level: float = 1.0

    @property
    def kind(self) -> str:
        return "const"


@dataclass(frozen=True)
class ExpDensity:
    """w(eta) = level * exp(-rate * eta) on [0, inf)."""

    rate: float = 1.0
    level: float = 1.0

    @property
    def kind(self) -> str:
        return "exp"


@dataclass(frozen=True)
class Mixture:
    """Sum of a comb part and a tabulated part; either may be absent."""

    comb: Comb | None = None
    table: Tabulated | None = None

    @property
    def kind(self) -> str:
        return "mixture"


WeightDensity = Union[Comb, Tabulated, ConstDensity, ExpDensity, Mixture]


def _is_finite_number(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def validate(w: WeightDensity) -> list[str]:
    """Collect invariant violations for a density; empty list means valid.

    Never raises: this is the inspection path for values built by hand.
    Densities produced by the module builders always come back clean.
    """
    problems: list[str] = []
    if isinstance(w, Comb):
        if not _is_finite_number(w.epsilon) or w.epsilon <= 0:
            problems.append("comb spacing epsilon must be finite and > 0")
        if len(w.masses) == 0:
            problems.append("comb needs at least one mass")
        if any(not _is_finite_number(m) or m < 0 for m in w.masses):
            problems.append("comb masses must be finite and >= 0")
        elif not any(m > 0 for m in w.masses):
            problems.append("comb must carry at least one positive mass")
        if w.infinite and len(set(w.masses)) > 1:
            problems.append("infinite comb requires all listed masses equal")
        if w.infinite and w.masses and w.masses[0] <= 0:
            problems.append("infinite comb mass must be > 0")
    elif isinstance(w, Tabulated):
        if len(w.knots) < 2:
            problems.append("table needs at least two knots")
        etas = [e for e, _ in w.knots]
        vals = [v for _, v in w.knots]
        if any(not _is_finite_number(e) or e < 0 for e in etas):
            problems.append("table eta values must be finite and >= 0")
        if any(b <= a for a, b in zip(etas, etas[1:])):
            problems.append("table eta values must be strictly increasing")
        if any(not _is_finite_number(v) or v < 0 for v in vals):
            problems.append("table densities must be finite and >= 0")
        elif vals and not any(v > 0 for v in vals):
            problems.append("table must carry at least one positive density")
    elif isinstance(w, ConstDensity):
        if not _is_finite_number(w.level) or w.level <= 0:
            problems.append("constant density level must be finite and > 0")
    elif isinstance(w, ExpDensity):
        if not _is_finite_number(w.rate) or w.rate <= 0:
            problems.append("exponential density rate must be finite and > 0")
        if not _is_finite_number(w.level) or w.level <= 0:
            problems.append("exponential density level must be finite and > 0")
    elif isinstance(w, Mixture):
        if w.comb is None and w.table is None:
            problems.append("mixture needs a comb part or a table part")
        if w.comb is not None:
            problems.extend("comb part: " + p for p in validate(w.comb))
        if w.table is not None:
            problems.extend("table part: " + p for p in validate(w.table))
    else:
        problems.append(f"not a weight density: {type(w).__name__}")
    return problems


def _checked(w: WeightDensity) -> WeightDensity:
    problems = validate(w)
    if problems:
        raise ValueError("; ".join(problems))
    return w


def comb(epsilon: float, masses, infinite: bool = False) -> Comb:
    """Build a validated comb density."""
    return _checked(Comb(float(epsilon), tuple(float(m) for m in masses), bool(infinite)))


def unit_comb(epsilon: float) -> Comb:
    """The infinite comb with unit mass at every lattice site k*epsilon, k >= 0."""
    return comb(epsilon, (1.0,), infinite=True)


def tabulated(knots) -> Tabulated:
    """Build a validated piecewise-linear density from (eta, value) pairs."""
    return _checked(Tabulated(tuple((float(e), float(v)) for e, v in knots)))


def const_density(level: float = 1.0) -> ConstDensity:
    return _checked(ConstDensity(float(level)))


def exp_density(rate: float = 1.0, level: float = 1.0) -> ExpDensity:
    return _checked(ExpDensity(float(rate), float(level)))


def mixture(comb_part: Comb | None = None, table_part: Tabulated | None = None) -> Mixture:
    return _checked(Mixture(comb_part, table_part))


def cumulative_mass(w: WeightDensity, eta0: float) -> float:
    """Total weight on [0, eta0].

    Lattice atoms sit at closed left endpoints, so an atom exactly at eta0
    is counted with full mass. Continuous parts integrate exactly (the
    density is piecewise linear or analytic).
    """
    if not _is_finite_number(eta0) or eta0 < 0:
        raise ValueError("eta0 must be finite and >= 0")
    if isinstance(w, Comb):
        edge = eta0 + _ATOM_EDGE * max(1.0, eta0, w.epsilon)
        if w.infinite:
            count = int(math.floor(edge / w.epsilon)) + 1
            return w.masses[0] * count
        return math.fsum(
            m for k, m in enumerate(w.masses) if k * w.epsilon <= edge
        )
    if isinstance(w, Tabulated):
        total = 0.0
        for (a, da), (b, db) in zip(w.knots[:-1], w.knots[1:]):
            lo, hi = a, min(b, eta0)
            if hi <= lo:
                break
            slope = (db - da) / (b - a)
            vlo = da + slope * (lo - a)
            vhi = da + slope * (hi - a)
            total += 0.5 * (vlo + vhi) * (hi - lo)
        return total
    if isinstance(w, ConstDensity):
        return w.level * eta0
    if isinstance(w, ExpDensity):
        return w.level * (-math.expm1(-w.rate * eta0)) / w.rate
    if isinstance(w, Mixture):
        total = 0.0
        if w.comb is not None:
            total += cumulative_mass(w.comb, eta0)
        if w.table is not None:
            total += cumulative_mass(w.table, eta0)
        return total
    raise ValueError(f"not a weight density: {type(w).__name__}")


def continuous_density(w: WeightDensity, eta: float) -> float:
    """Pointwise value of the continuous part of w (combs contribute zero)."""
    if eta < 0:
        return 0.0
    if isinstance(w, Comb):
        return 0.0
    if isinstance(w, Tabulated):
        knots = w.knots
        if eta < knots[0][0] or eta > knots[-1][0]:
            return 0.0
        for (a, da), (b, db) in zip(knots[:-1], knots[1:]):
            if a <= eta <= b:
                return da + (db - da) * (eta - a) / (b - a)
        return 0.0
    if isinstance(w, ConstDensity):
        return w.level
    if isinstance(w, ExpDensity):
        return w.level * math.exp(-w.rate * eta)
    if isinstance(w, Mixture):
        return continuous_density(w.table, eta) if w.table is not None else 0.0
    raise ValueError(f"not a weight density: {type(w).__name__}")


def scale_density(w: WeightDensity, factor: float) -> WeightDensity:
    """Multiply every mass / density value by a positive factor."""
    if not _is_finite_number(factor) or factor <= 0:
        raise ValueError("scale factor must be finite and > 0")
    if isinstance(w, Comb):
        return Comb(w.epsilon, tuple(m * factor for m in w.masses), w.infinite)
    if isinstance(w, Tabulated):
        return Tabulated(tuple((e, v * factor) for e, v in w.knots))
    if isinstance(w, ConstDensity):
        return ConstDensity(w.level * factor)
    if isinstance(w, ExpDensity):
        return ExpDensity(w.rate, w.level * factor)
    if isinstance(w, Mixture):
        return Mixture(
            scale_density(w.comb, factor) if w.comb is not None else None,
            scale_density(w.table, factor) if w.table is not None else None,
        )
    raise ValueError(f"not a weight density: {type(w).__name__}")


def stretch_density(w: WeightDensity, scale: float) -> WeightDensity:
    """Stretch the energy axis by ``scale``: the result weighs eta/scale.

    Used to promote a single density to a one-parameter family indexed by
    its energy quantum (the input is the scale = 1 member). Density values
    are kept, so total mass grows linearly with the stretch; mean-energy
    ratios are unaffected by that overall factor.
    """
    if not _is_finite_number(scale) or scale <= 0:
        raise ValueError("stretch scale must be finite and > 0")
    if isinstance(w, Comb):
        return Comb(w.epsilon * scale, w.masses, w.infinite)
    if isinstance(w, Tabulated):
        return Tabulated(tuple((e * scale, v) for e, v in w.knots))
    if isinstance(w, ConstDensity):
        return w
    if isinstance(w, ExpDensity):
        return ExpDensity(w.rate / scale, w.level)
    if isinstance(w, Mixture):
        return Mixture(
            stretch_density(w.comb, scale) if w.comb is not None else None,
            stretch_density(w.table, scale) if w.table is not None else None,
        )
    raise ValueError(f"not a weight density: {type(w).__name__}")


# ---------------------------------------------------------------------------
# Run parameters


@dataclass(frozen=True)
class PhysicalConstants:
    """Boltzmann constant, quantum of action, speed of light; reduced by default."""

    k_b: float = 1.0
    h: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("k_b", "h", "c"):
            v = getattr(self, name)
            if not _is_finite_number(v) or v <= 0:
                raise ValueError(f"constant {name} must be finite and > 0")


REDUCED = PhysicalConstants()


@dataclass(frozen=True)
class EnsembleConfig:
    """Counts and total energy for the closed resonator/molecule system.

    n resonators share e_total with p molecules; beta = e_total/n is the
    available energy per resonator and ratio = p/n fixes the saddle geometry.
    (The source material overloads one letter for both the per-resonator
    energy and other quantities; here the names are explicit.)
    """

    n: int
    p: int
    e_total: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be an integer >= 1")
        if not isinstance(self.p, int) or self.p < 1:
            raise ValueError("p must be an integer >= 1")
        if not _is_finite_number(self.e_total) or self.e_total <= 0:
            raise ValueError("e_total must be finite and > 0")

    @property
    def beta(self) -> float:
        return self.e_total / self.n

    @property
    def ratio(self) -> float:
        return self.p / self.n


def config_from_beta(beta: float, r: float, n: int) -> EnsembleConfig:
    """Build a config from per-resonator energy beta and ratio r = p/n.

    r*n must land on a positive integer (within 1e-9 relative), because p
    counts molecules.
    """
    if not _is_finite_number(beta) or beta <= 0:
        raise ValueError("beta must be finite and > 0")
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be an integer >= 1")
    p_exact = r * n
    p = round(p_exact)
    if p < 1 or abs(p_exact - p) > 1e-9 * max(1.0, abs(p_exact)):
        raise ValueError(f"r*n = {p_exact!r} is not a positive integer")
    return EnsembleConfig(n=n, p=int(p), e_total=beta * n)


@dataclass(frozen=True)
class AlphaGrid:
    """Strictly increasing positive evaluation points for the transform."""

    values: tuple[float, ...]


def alpha_grid(lo: float, hi: float, count: int, spacing: str = "linear") -> AlphaGrid:
    """Linear or log spaced grid with both endpoints included."""
    if not isinstance(count, int) or count < 2:
        raise ValueError("grid needs at least two points")
    if not (_is_finite_number(lo) and _is_finite_number(hi)) or lo <= 0 or hi <= lo:
        raise ValueError("grid requires 0 < lo < hi, both finite")
    if spacing == "linear":
        step = (hi - lo) / (count - 1)
        vals = [lo + i * step for i in range(count)]
    elif spacing == "log":
        lr = math.log(lo)
        step = (math.log(hi) - lr) / (count - 1)
        vals = [math.exp(lr + i * step) for i in range(count)]
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    vals[0] = lo
    vals[-1] = hi
    return AlphaGrid(tuple(vals))


@dataclass(frozen=True)
class EnergyCurve:
    """Sampled mean-energy law Y(alpha) on an increasing alpha grid."""

    alphas: tuple[float, ...]
    energies: tuple[float, ...]


# Mean energy must not increase with alpha; violations beyond this absolute
# tolerance mark the data as not a valid energy law.
_CURVE_MONOTONE_ATOL = 1e-9


def energy_curve(alphas, energies) -> EnergyCurve:
    """Build a validated curve: alpha increasing and positive, Y >= 0 non-increasing."""
    a = tuple(float(x) for x in alphas)
    y = tuple(float(x) for x in energies)
    if len(a) != len(y):
        raise ValueError("alpha and Y columns differ in length")
    if len(a) < 2:
        raise ValueError("curve needs at least two samples")
    if any(not math.isfinite(x) or x <= 0 for x in a):
        raise ValueError("alpha values must be finite and > 0")
    if any(nxt <= prev for prev, nxt in zip(a, a[1:])):
        raise ValueError("alpha values must be strictly increasing")
    if any(not math.isfinite(v) or v < 0 for v in y):
        raise ValueError("Y values must be finite and >= 0")
    for prev, nxt in zip(y[:-1], y[1:]):
        if nxt > prev + _CURVE_MONOTONE_ATOL:
            raise ValueError("Y must be non-increasing in alpha")
    return EnergyCurve(a, y)


# ---------------------------------------------------------------------------
# Density grammar and CSV loading (shared with the command line front end)


def parse_density(text: str) -> WeightDensity:
    """Parse a density spec string.

    Grammar::

        const
        exp
        comb:eps=<float>[,masses=<float;float;...>]
        table:<csv path>

    A comb without masses is the infinite unit comb. Table CSV files carry
    the header ``eta,w``.
    """
    body = text.strip()
    if body == "const":
        return const_density()
    if body == "exp":
        return exp_density()
    if body.startswith("comb:"):
        fields = body[len("comb:"):].split(",")
        kv: dict[str, str] = {}
        for field in fields:
            key, sep, value = field.partition("=")
            if not sep or not key:
                raise ValueError(f"bad comb field {field!r}")
            if key in kv:
                raise ValueError(f"duplicate comb field {key!r}")
            kv[key] = value
        unknown = sorted(set(kv) - {"eps", "masses"})
        if unknown:
            raise ValueError(f"unknown comb fields: {', '.join(unknown)}")
        if "eps" not in kv:
            raise ValueError("comb spec requires eps=<float>")
        try:
            eps = float(kv["eps"])
        except ValueError:
            raise ValueError(f"bad comb eps value {kv['eps']!r}") from None
        if "masses" not in kv:
            return unit_comb(eps)
        try:
            masses = tuple(float(tok) for tok in kv["masses"].split(";"))
        except ValueError:
            raise ValueError(f"bad comb masses value {kv['masses']!r}") from None
        return comb(eps, masses)
    if body.startswith("table:"):
        path = body[len("table:"):]
        if not path:
            raise ValueError("table spec requires a file path")
        return load_table_csv(path)
    raise ValueError(f"unrecognized density spec {text!r}")


def _read_csv_rows(path: str, header: str) -> list[tuple[float, ...]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    if lines[0] != header:
        raise ValueError(f"{path}: expected header {header!r}, got {lines[0]!r}")
    width = len(header.split(","))
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != width:
            raise ValueError(f"{path}:{i}: expected {width} columns")
        try:
            rows.append(tuple(float(tok) for tok in parts))
        except ValueError:
            raise ValueError(f"{path}:{i}: non-numeric value") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def load_table_csv(path: str) -> Tabulated:
    """Load a piecewise-linear density from a CSV with header ``eta,w``."""
    return tabulated(_read_csv_rows(path, "eta,w"))


def load_curve_csv(path: str) -> EnergyCurve:
    """Load a mean-energy curve from a CSV with header ``alpha,Y``."""
    rows = _read_csv_rows(path, "alpha,Y")
    return energy_curve([r[0] for r in rows], [r[1] for r in rows])
