"""Density constructors, invariants, mass accounting, and run parameters."""

import math

import numpy as np
import pytest

from bblab import (
    Comb,
    EnsembleConfig,
    Mixture,
    PhysicalConstants,
    REDUCED,
    Tabulated,
    alpha_grid,
    comb,
    config_from_beta,
    const_density,
    continuous_density,
    cumulative_mass,
    energy_curve,
    exp_density,
    load_curve_csv,
    load_table_csv,
    mixture,
    parse_density,
    scale_density,
    stretch_density,
    tabulated,
    unit_comb,
    validate,
)


def test_builders_return_clean_densities():
    for w in (
        comb(1.0, [1.0, 0.0, 2.0]),
        unit_comb(0.5),
        tabulated([(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)]),
        const_density(3.0),
        exp_density(2.0, 0.5),
        mixture(comb(1.0, [1.0]), tabulated([(0.0, 1.0), (1.0, 0.0)])),
    ):
        assert validate(w) == []


def test_builders_reject_bad_input():
    with pytest.raises(ValueError):
        comb(0.0, [1.0])
    with pytest.raises(ValueError):
        comb(1.0, [])
    with pytest.raises(ValueError):
        comb(1.0, [-1.0, 2.0])
    with pytest.raises(ValueError):
        comb(1.0, [0.0, 0.0])
    with pytest.raises(ValueError):
        comb(1.0, [1.0, 2.0], infinite=True)
    with pytest.raises(ValueError):
        tabulated([(0.0, 1.0)])
    with pytest.raises(ValueError):
        tabulated([(0.0, 1.0), (0.0, 2.0)])
    with pytest.raises(ValueError):
        tabulated([(1.0, 1.0), (0.0, 2.0)])
    with pytest.raises(ValueError):
        tabulated([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(ValueError):
        const_density(0.0)
    with pytest.raises(ValueError):
        exp_density(rate=-1.0)
    with pytest.raises(ValueError):
        mixture(None, None)


def test_validate_reports_handbuilt_problems_without_raising():
    bad = Comb(epsilon=-1.0, masses=(float("nan"),), infinite=False)
    problems = validate(bad)
    assert len(problems) == 2
    assert validate(Tabulated(((0.0, 1.0),))) != []
    assert validate("not a density") != []


def test_cumulative_mass_counts_atoms_with_closed_endpoint():
    w = comb(0.5, [1.0, 2.0, 4.0])
    assert cumulative_mass(w, 0.0) == 1.0
    assert cumulative_mass(w, 0.5) == 3.0
    assert cumulative_mass(w, 0.499) == 1.0
    assert cumulative_mass(w, 10.0) == 7.0
    u = unit_comb(1.0)
    assert cumulative_mass(u, 3.0) == 4.0
    assert cumulative_mass(u, 2.999) == 3.0


def test_cumulative_mass_closed_forms():
    assert cumulative_mass(const_density(2.0), 3.0) == 6.0
    w = exp_density(rate=2.0, level=3.0)
    assert math.isclose(
        cumulative_mass(w, 1.5), 3.0 / 2.0 * (1.0 - math.exp(-3.0)), rel_tol=1e-15
    )
    # trapezoid area of the tent (0,1)->(1,2)->(2,0)
    tent = tabulated([(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)])
    assert math.isclose(cumulative_mass(tent, 2.0), 2.5, rel_tol=1e-15)
    assert math.isclose(cumulative_mass(tent, 0.5), 0.625, rel_tol=1e-15)
    mix = mixture(comb(1.0, [1.0, 1.0]), tent)
    assert math.isclose(cumulative_mass(mix, 2.0), 4.5, rel_tol=1e-15)


def test_continuous_density_interpolates_and_ignores_atoms():
    tent = tabulated([(0.5, 1.0), (1.5, 3.0)])
    assert continuous_density(tent, 1.0) == 2.0
    assert continuous_density(tent, 0.25) == 0.0
    assert continuous_density(tent, 2.0) == 0.0
    assert continuous_density(comb(1.0, [5.0]), 0.0) == 0.0
    assert continuous_density(exp_density(), 1.0) == math.exp(-1.0)
    assert continuous_density(const_density(4.0), 100.0) == 4.0


def test_scale_density_multiplies_every_mass():
    rng = np.random.default_rng(20120401)
    tent = tabulated([(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)])
    densities = [comb(0.5, [1.0, 2.0]), tent, const_density(), exp_density(), unit_comb(2.0)]
    for w in densities:
        for factor in (1e-3, 7.0, 1e3):
            scaled = scale_density(w, factor)
            for _ in range(5):
                eta0 = float(rng.uniform(0.1, 5.0))
                assert math.isclose(
                    cumulative_mass(scaled, eta0),
                    factor * cumulative_mass(w, eta0),
                    rel_tol=1e-12,
                )
    with pytest.raises(ValueError):
        scale_density(tent, 0.0)


def test_stretch_density_rescales_the_energy_axis():
    # atoms keep their mass; continuous values are kept, so the mass on
    # [0, s*x] picks up one factor of s from the wider support
    rng = np.random.default_rng(20120402)
    tent = tabulated([(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)])
    for w, mass_factor in ((comb(1.0, [1.0, 3.0]), 1.0), (unit_comb(1.0), 1.0), (tent, None)):
        for s in (0.25, 2.0, 8.0):
            stretched = stretch_density(w, s)
            factor = s if mass_factor is None else mass_factor
            for _ in range(5):
                x = float(rng.uniform(0.1, 4.0))
                assert math.isclose(
                    cumulative_mass(stretched, s * x),
                    factor * cumulative_mass(w, x),
                    rel_tol=1e-12,
                )
    # the constant density is a fixed point: one scale-free family
    assert stretch_density(const_density(2.0), 5.0).level == 2.0
    assert stretch_density(exp_density(rate=1.0), 2.0).rate == 0.5
    assert unit_comb(1.0) != stretch_density(unit_comb(1.0), 2.0)


def test_ensemble_config_checks_counts():
    cfg = EnsembleConfig(n=4, p=2, e_total=6.0)
    assert cfg.beta == 1.5
    assert cfg.ratio == 0.5
    with pytest.raises(ValueError):
        EnsembleConfig(n=0, p=1, e_total=1.0)
    with pytest.raises(ValueError):
        EnsembleConfig(n=1, p=-1, e_total=1.0)
    with pytest.raises(ValueError):
        EnsembleConfig(n=1, p=1, e_total=0.0)


def test_config_from_beta_requires_integer_molecule_count():
    cfg = config_from_beta(2.5, 0.5, 4)
    assert (cfg.n, cfg.p) == (4, 2)
    assert cfg.e_total == 10.0
    with pytest.raises(ValueError):
        config_from_beta(2.5, 0.3, 4)
    with pytest.raises(ValueError):
        config_from_beta(-1.0, 1.0, 4)


def test_physical_constants_default_to_reduced_units():
    assert (REDUCED.k_b, REDUCED.h, REDUCED.c) == (1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        PhysicalConstants(k_b=0.0)


def test_alpha_grid_spacings_and_endpoints():
    lin = alpha_grid(1.0, 2.0, 5)
    assert lin.values == (1.0, 1.25, 1.5, 1.75, 2.0)
    lg = alpha_grid(0.1, 10.0, 3, "log")
    assert lg.values[0] == 0.1 and lg.values[-1] == 10.0
    assert math.isclose(lg.values[1], 1.0, rel_tol=1e-12)
    with pytest.raises(ValueError):
        alpha_grid(2.0, 1.0, 5)
    with pytest.raises(ValueError):
        alpha_grid(1.0, 2.0, 1)
    with pytest.raises(ValueError):
        alpha_grid(1.0, 2.0, 5, "cubic")


def test_energy_curve_validation():
    c = energy_curve([1.0, 2.0, 3.0], [3.0, 2.0, 2.0])
    assert c.alphas == (1.0, 2.0, 3.0)
    with pytest.raises(ValueError):
        energy_curve([1.0], [1.0])
    with pytest.raises(ValueError):
        energy_curve([1.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        energy_curve([1.0, 2.0], [1.0, 2.0])  # increasing Y
    with pytest.raises(ValueError):
        energy_curve([1.0, 2.0], [1.0, -1.0])
    with pytest.raises(ValueError):
        energy_curve([-1.0, 2.0], [2.0, 1.0])


def test_parse_density_grammar(tmp_path):
    assert parse_density("const").level == 1.0
    assert parse_density("exp").rate == 1.0
    w = parse_density("comb:eps=0.5,masses=1;0;2")
    assert w.epsilon == 0.5 and w.masses == (1.0, 0.0, 2.0) and not w.infinite
    u = parse_density("comb:eps=2")
    assert u.infinite and u.masses == (1.0,)
    path = tmp_path / "tent.csv"
    path.write_text("eta,w\n0,1\n1,2\n2,0\n")
    t = parse_density(f"table:{path}")
    assert t.knots == ((0.0, 1.0), (1.0, 2.0), (2.0, 0.0))
    for bad in (
        "gauss",
        "comb:masses=1;2",
        "comb:eps=abc",
        "comb:eps=1,masses=1;x",
        "comb:eps=1,eps=2",
        "comb:eps=1,foo=2",
        "table:",
    ):
        with pytest.raises(ValueError):
            parse_density(bad)


def test_csv_loaders_round_trip(tmp_path):
    table = tmp_path / "w.csv"
    table.write_text("eta,w\n0,1.5\n2,0.5\n")
    w = load_table_csv(str(table))
    assert w.knots == ((0.0, 1.5), (2.0, 0.5))
    curve = tmp_path / "curve.csv"
    curve.write_text("alpha,Y\n0.5,2\n1,1\n2,0.25\n")
    c = load_curve_csv(str(curve))
    assert c.alphas == (0.5, 1.0, 2.0)
    assert c.energies == (2.0, 1.0, 0.25)
    bad = tmp_path / "bad.csv"
    bad.write_text("alpha,Z\n1,1\n")
    with pytest.raises(ValueError):
        load_curve_csv(str(bad))
    bad.write_text("alpha,Y\n")
    with pytest.raises(ValueError):
        load_curve_csv(str(bad))
    bad.write_text("alpha,Y\n1,2,3\n")
    with pytest.raises(ValueError):
        load_curve_csv(str(bad))
