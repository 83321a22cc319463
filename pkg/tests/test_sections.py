import random

import pytest
from hypothesis import given, strategies as st

from rspin_disks.sections import (
    ConfigurationError,
    ConvergenceError,
    DiskConfiguration,
    PoleError,
    arc_samples,
    basis_rank,
    boundary_root_closed_form,
    mobius,
    normalize,
    random_configuration,
    residue_profile,
    rotation_determinant_sign,
    sigma_boundary_root,
    sigma_power,
    xi_boundary,
    xi_internal,
)


def simple():
    return DiskConfiguration(3, (-1.0, 1.0), (1j,), (1,))


# ---------------------------------------------------------------- forms


def test_xi_boundary_value_and_antisymmetry():
    c = simple()
    assert xi_boundary(c, 1, 2, 0) == pytest.approx(-2)
    for w in (0.3, 2.5 + 0.1j, -7.0):
        assert xi_boundary(c, 2, 1, w) == pytest.approx(-xi_boundary(c, 1, 2, w))


def test_xi_internal_values():
    c = simple()
    assert xi_internal(c, 1, 0) == pytest.approx(2)
    for w in (-3.0, 0.5, 4.0):
        v = xi_internal(c, 1, w)
        assert abs(v.imag) < 1e-15 and v.real == pytest.approx(2 / (w * w + 1)) and v.real > 0
    w = 0.4 + 0.7j
    assert xi_internal(c, 1, w.conjugate()) == pytest.approx(xi_internal(c, 1, w).conjugate())


def test_translation_invariance():
    c = simple()
    shifted = c.map(lambda w: w + 1)
    for w in (0.2, -3.0, 0.5 + 2j):
        assert xi_boundary(shifted, 1, 2, w + 1) == pytest.approx(xi_boundary(c, 1, 2, w))
        assert sigma_power(shifted, 1, w + 1) == pytest.approx(sigma_power(c, 1, w))


def test_poles_raise():
    c = simple()
    with pytest.raises(PoleError):
        xi_boundary(c, 1, 2, -1.0)
    with pytest.raises(PoleError):
        xi_internal(c, 1, 1j)
    with pytest.raises(PoleError):
        sigma_boundary_root(c, 1, [1.0])


# ---------------------------------------------------------------- power form and root


def test_sigma_power_examples():
    c = simple()
    assert sigma_power(c, 1, 0) == pytest.approx(4)
    for w in (-0.9, -0.2, 0.5, 0.99):
        g = sigma_power(c, 1, w)
        assert g.real > 0 and g.real == pytest.approx(4 / ((w * w + 1) * (1 - w * w)))
    for w in (-5.0, 1.5, 30.0):
        assert sigma_power(c, 1, w).real < 0


def test_sigma_root_examples():
    c = simple()
    assert sigma_boundary_root(c, 1, [0.0])[0] == pytest.approx(4 ** (1 / 3))
    left, right = sigma_boundary_root(c, 1, [0.999, 1.001])
    assert left > 0 > right


def test_regime_errors():
    c = DiskConfiguration(3, (-1.0, 1.0), (1j,), (2,))
    with pytest.raises(ConfigurationError):
        sigma_power(c, 1, 0)
    with pytest.raises(ConfigurationError):
        sigma_power(simple(), 2, 0)


def test_configuration_errors():
    with pytest.raises(ConfigurationError):
        DiskConfiguration(3, (1.0, -1.0), (1j,), (1,))
    with pytest.raises(ConfigurationError):
        DiskConfiguration(3, (-1.0, 1.0), (-1j,), (1,))
    with pytest.raises(ConfigurationError):
        DiskConfiguration(3, (-1.0, 1.0), (1j, 1j + 1e-12), (1, 0))
    with pytest.raises(ConfigurationError):
        DiskConfiguration.from_json({"r": 3})


def test_json_round_trip():
    c = DiskConfiguration(4, (-1.0, 0.2, 1.0), (0.3 + 1j,), (2,))
    assert DiskConfiguration.from_json(c.to_json()) == c


@given(st.integers(0, 10**6))
def test_power_form_real_on_boundary(seed):
    rng = random.Random(seed)
    c = random_configuration(rng, rng.randint(2, 5), rng.randint(2, 6))
    for w in arc_samples(c, 2, rng):
        for j in range(1, c.k):
            g = sigma_power(c, j, complex(w))
            assert abs(g.imag) <= 1e-12 * abs(g)


@given(st.integers(0, 10**6))
def test_root_matches_closed_form(seed):
    rng = random.Random(seed)
    c = random_configuration(rng, rng.randint(2, 5), rng.randint(2, 6))
    samples = arc_samples(c, 2, rng)
    for j in range(1, c.k):
        for w, h in zip(samples, sigma_boundary_root(c, j, samples)):
            assert h == pytest.approx(boundary_root_closed_form(c, j, w), rel=1e-9)


@given(st.integers(0, 10**6))
def test_moebius_invariance(seed):
    rng = random.Random(seed)
    c = random_configuration(rng, rng.randint(2, 5), rng.randint(2, 5))
    p = c.x[0] - rng.uniform(0.5, 3.0)
    maps = [
        mobius(0.0, -1.0, 1.0, -p),
        mobius(rng.uniform(0.2, 3.0), rng.uniform(-2, 2), 0.0, 1.0),
    ]
    for f, df in maps:
        d = c.map(f)
        for w in [0.3 * c.x[0] + 0.7 * c.x[-1], c.z[0] + 0.25, c.x[-1] + 0.5j]:
            for j in range(1, c.k):
                old = sigma_power(c, j, w)
                new = sigma_power(d, j, f(w)) * df(w) ** (c.r - 1)
                assert abs(new - old) <= 1e-9 * abs(old)


@given(st.integers(0, 10**6), st.floats(0.1, 10.0))
def test_scaling_keeps_signs(seed, lam):
    rng = random.Random(seed)
    c = random_configuration(rng, rng.randint(2, 5), rng.randint(2, 5))
    d = c.map(lambda w: lam * w)
    samples = arc_samples(c, 2, rng)
    for j in range(1, c.k):
        a = sigma_boundary_root(c, j, samples)
        b = sigma_boundary_root(d, j, [lam * w for w in samples])
        assert [x > 0 for x in a] == [x > 0 for x in b]


# ---------------------------------------------------------------- rank, residues, rotation


def test_basis_rank_examples():
    assert basis_rank(simple())[0] == 1
    c = DiskConfiguration(2, (-1.0, 0.0, 1.0), (1j, 0.5 + 2j), (1, 1))
    assert basis_rank(c)[0] == 2
    assert basis_rank(DiskConfiguration(3, (0.0,), (1j,), (0,)))[0] == 0
    with pytest.raises(ConfigurationError):
        basis_rank(c, n_samples=2)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_basis_rank_random(r):
    rng = random.Random(r)
    for k in range(2, 7):
        for _ in range(5):
            c = random_configuration(rng, r, k)
            assert basis_rank(c, seed=rng.randint(0, 99))[0] == k - 1


def test_residue_examples():
    assert residue_profile(simple(), 1) == (1, -1)
    c = random_configuration(random.Random(7), 3, 4)
    profiles = [residue_profile(c, j) for j in range(1, 4)]
    assert all(p[0] * p[1] == -1 for p in profiles)
    assert len({p[0] for p in profiles}) == 1


def test_residue_ladder_instability_reported():
    with pytest.raises(ConvergenceError):
        residue_profile(simple(), 1, ladder=(3.0, 1e-3, 1e-4))


def test_rotation_examples():
    c2 = simple()
    assert rotation_determinant_sign(c2, 1) == -1
    assert rotation_determinant_sign(c2, 0) == 1
    c3 = random_configuration(random.Random(3), 3, 3)
    assert rotation_determinant_sign(c3, 1) == 1


def test_rotation_random():
    rng = random.Random(11)
    for k in range(2, 6):
        c = random_configuration(rng, rng.randint(2, 5), k)
        for h in range(0, k + 1):
            assert rotation_determinant_sign(c, h) == (-1) ** ((k - 1) * h)


def test_normalize_puts_ends_at_plus_minus_one():
    c = DiskConfiguration(3, (2.0, 3.0, 7.0), (4 + 1j, 5 + 2j), (1, 1))
    n = normalize(c)
    assert n.x[0] == pytest.approx(-1) and n.x[-1] == pytest.approx(1)
    with pytest.raises(ValueError):
        mobius(1, 0, 0, -1)
