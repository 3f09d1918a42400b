import numpy as np
import pytest

from vilenkin import (
    SampledFunction,
    Spectrum,
    convolve,
    forward,
    inverse,
    make_structure,
    naive_convolve,
    naive_forward,
    naive_inverse,
    translate,
    vilenkin,
    vilenkin_column,
)

from conftest import oracle_forward_1d, random_sample


def test_constant_transforms_to_delta():
    s = make_structure((2, 3))
    f = SampledFunction(s, np.ones(s.size))
    coeffs = forward(f).coefficients
    expected = np.zeros(s.size)
    expected[0] = 1.0
    np.testing.assert_allclose(coeffs, expected, atol=1e-12)


def test_character_transforms_to_delta():
    s = make_structure((2, 3, 2))
    for k in (0, 3, 7, 11):
        f = SampledFunction(s, vilenkin_column(s, k))
        coeffs = forward(f).coefficients
        expected = np.zeros(s.size)
        expected[k] = 1.0
        np.testing.assert_allclose(coeffs, expected, atol=1e-12)


def test_interval_indicator_table_against_oracle():
    radices = (2, 3)
    s = make_structure(radices)
    values = np.zeros(s.size, dtype=complex)
    values[s.interval_indices(1, 0)] = 1.0
    coeffs = forward(SampledFunction(s, values)).coefficients
    oracle = oracle_forward_1d(radices, values)
    np.testing.assert_allclose(coeffs, oracle, atol=1e-12)
    assert coeffs[0] == pytest.approx(0.5)
    assert coeffs[1] == pytest.approx(0.5)
    assert np.abs(coeffs[2:]).max() < 1e-12


def test_delta_synthesizes_character():
    s = make_structure((2, 3))
    spec = np.zeros(s.size, dtype=complex)
    spec[0] = 1.0
    np.testing.assert_allclose(
        inverse(Spectrum(s, spec)).values, np.ones(s.size), atol=1e-12
    )
    spec = np.zeros(s.size, dtype=complex)
    spec[4] = 1.0
    np.testing.assert_allclose(
        inverse(Spectrum(s, spec)).values, vilenkin_column(s, 4), atol=1e-12
    )


@pytest.mark.parametrize("radices", [(2, 2, 2, 2, 2, 2), (2, 3, 2, 3), (3, 3, 3), (6, 6, 6)])
def test_roundtrip_parseval_and_naive_1d(radices, rng):
    s = make_structure(radices)
    f = random_sample(s, rng, arity=1)
    spectrum = forward(f)
    np.testing.assert_allclose(inverse(spectrum).values, f.values, atol=1e-12)
    energy_grid = np.mean(np.abs(f.values) ** 2)
    energy_spec = np.sum(np.abs(spectrum.coefficients) ** 2)
    assert energy_grid == pytest.approx(energy_spec, abs=1e-12)
    np.testing.assert_allclose(
        spectrum.coefficients, naive_forward(f).coefficients, atol=1e-12
    )
    np.testing.assert_allclose(naive_inverse(spectrum).values, f.values, atol=1e-12)


def test_roundtrip_parseval_large_grid(rng):
    s = make_structure((2, 3), 8)  # grid 1296
    f = random_sample(s, rng, arity=1)
    spectrum = forward(f)
    np.testing.assert_allclose(inverse(spectrum).values, f.values, atol=1e-12)
    assert np.mean(np.abs(f.values) ** 2) == pytest.approx(
        np.sum(np.abs(spectrum.coefficients) ** 2), abs=1e-12
    )


@pytest.mark.parametrize("radices", [(2, 3), (2, 3, 2), (2, 3, 2, 3)])
def test_fast_equals_naive_2d(radices, rng):
    s = make_structure(radices)
    f = random_sample(s, rng)
    np.testing.assert_allclose(
        forward(f).coefficients, naive_forward(f).coefficients, atol=1e-12
    )
    np.testing.assert_allclose(inverse(forward(f)).values, f.values, atol=1e-12)


def test_convolution_theorem(rng):
    s = make_structure((2, 3, 2))
    f = random_sample(s, rng, arity=1)
    g = random_sample(s, rng, arity=1)
    lhs = forward(convolve(f, g)).coefficients
    rhs = forward(f).coefficients * forward(g).coefficients
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("arity", [1, 2])
def test_convolve_matches_naive(arity, rng):
    s = make_structure((2, 3, 2))
    f = random_sample(s, rng, arity=arity)
    g = random_sample(s, rng, arity=arity)
    np.testing.assert_allclose(
        convolve(f, g).values, naive_convolve(f, g).values, atol=1e-10
    )


def test_convolve_with_block_kernel_averages(rng):
    s = make_structure((2, 3, 2))
    f = random_sample(s, rng, arity=1)
    n = 1
    kernel = np.zeros(s.size, dtype=complex)
    kernel[s.interval_indices(n, 0)] = s.orders[n]
    smoothed = convolve(f, SampledFunction(s, kernel))
    for x in range(s.size):
        average = f.values[s.interval_indices(n, x)].mean()
        assert smoothed.values[x] == pytest.approx(average, abs=1e-12)


def test_convolve_with_constant_gives_mean(rng):
    s = make_structure((2, 3))
    f = random_sample(s, rng, arity=1)
    out = convolve(f, SampledFunction(s, np.ones(s.size)))
    np.testing.assert_allclose(out.values, np.full(s.size, f.values.mean()), atol=1e-12)


def test_characters_idempotent_under_convolution():
    s = make_structure((2, 3))
    for a in (1, 3, 5):
        psi = SampledFunction(s, vilenkin_column(s, a))
        np.testing.assert_allclose(convolve(psi, psi).values, psi.values, atol=1e-12)


def test_translation_covariance(rng):
    s = make_structure((2, 3, 2))
    f = random_sample(s, rng, arity=1)
    base = forward(f).coefficients
    for _ in range(5):
        a = int(rng.integers(s.size))
        shifted = forward(translate(f, a)).coefficients
        factors = np.array([vilenkin(s, n, a).conjugate() for n in range(s.size)])
        np.testing.assert_allclose(shifted, factors * base, atol=1e-12)


def test_structure_mismatch_rejected(rng):
    f = random_sample(make_structure((2, 3)), rng, arity=1)
    g = random_sample(make_structure((3, 2)), rng, arity=1)
    with pytest.raises(ValueError, match="structure-mismatch"):
        convolve(f, g)


def test_values_validation():
    s = make_structure((2, 3))
    with pytest.raises(ValueError, match="structure-mismatch"):
        SampledFunction(s, np.ones(5))
    with pytest.raises(ValueError, match="finite"):
        SampledFunction(s, np.array([np.nan] * s.size))
