import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonmix.classical import (
    ClassicalInputs,
    coincidence_phase_averaged,
    coincidence_uncorrelated,
    output_intensities,
    phase_monte_carlo,
    visibility_classical,
    visibility_from_moments,
)
from photonmix.fock import BeamsplitterParams

from oracles import classical_coincidence_quadrature

BS50 = BeamsplitterParams.balanced()


def test_output_intensities_examples():
    Ic, Id = output_intensities(1.0, 1.0, math.pi / 2, BS50)
    assert Ic == pytest.approx(0.0, abs=1e-15) and Id == pytest.approx(2.0)
    assert output_intensities(1.0, 1.0, 0.0, BS50) == pytest.approx((1.0, 1.0))
    bs = BeamsplitterParams.from_reflectance(0.3)
    for phi in np.linspace(0, 2 * math.pi, 7):
        assert output_intensities(2.0, 0.0, phi, bs) == pytest.approx((1.4, 0.6))


@settings(max_examples=100)
@given(Ia=st.floats(0, 100), Ib=st.floats(0, 100), phi=st.floats(-10, 10), r_sq=st.floats(0, 1))
def test_energy_conservation(Ia, Ib, phi, r_sq):
    Ic, Id = output_intensities(Ia, Ib, phi, BeamsplitterParams.from_reflectance(r_sq))
    assert Ic + Id == pytest.approx(Ia + Ib, rel=1e-12, abs=1e-12)


def test_coincidence_examples():
    same = ClassicalInputs(1.0, 1.0)
    assert coincidence_phase_averaged(same, BS50) == pytest.approx(0.5)
    assert coincidence_uncorrelated(same, BS50) == pytest.approx(1.0)
    single = ClassicalInputs(3.0, 0.0)
    assert coincidence_phase_averaged(single, BS50) == pytest.approx(9 / 4)
    assert visibility_from_moments(single, BS50) == pytest.approx(0.0, abs=1e-15)
    unequal = ClassicalInputs(2.0, 1.0)
    assert coincidence_phase_averaged(unequal, BS50) == pytest.approx(1.25)
    assert visibility_from_moments(unequal, BS50) == pytest.approx(4 / 9)


@pytest.mark.parametrize("Ia,Ib,r_sq", [(1, 1, 0.5), (2, 1, 0.5), (0.3, 1.7, 0.3), (5, 0.2, 0.8)])
def test_coincidence_matches_quadrature(Ia, Ib, r_sq):
    bs = BeamsplitterParams.from_reflectance(r_sq)
    closed = coincidence_phase_averaged(ClassicalInputs(Ia, Ib), bs)
    assert closed == pytest.approx(classical_coincidence_quadrature(Ia, Ib, r_sq), rel=1e-10)


def test_second_moments_raise_coincidence():
    thermal = ClassicalInputs(1.0, 1.0, Ia_sq=2.0, Ib_sq=2.0)
    assert coincidence_phase_averaged(thermal, BS50) == pytest.approx(1.0)
    assert visibility_from_moments(thermal, BS50) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        ClassicalInputs(1.0, 1.0, Ia_sq=0.5)


def test_visibility_classical_examples():
    assert visibility_classical(1.0) == 0.5
    assert visibility_classical(0.0) == 0.0
    assert visibility_classical(103 / 5) == pytest.approx(0.0883, abs=5e-5)
    with pytest.raises(ValueError):
        visibility_classical(-1.0)


@settings(max_examples=200)
@given(R=st.floats(1e-6, 1e6))
def test_visibility_classical_symmetry_and_bound(R):
    assert visibility_classical(R) == pytest.approx(visibility_classical(1 / R), rel=1e-12)
    assert visibility_classical(R) <= 0.5


@settings(max_examples=100)
@given(R=st.floats(0.0, 50.0))
def test_eq7_equals_moment_visibility_for_constant_intensity(R):
    v = visibility_from_moments(ClassicalInputs(R, 1.0), BS50)
    assert v == pytest.approx(visibility_classical(R), abs=1e-12)


def test_visibility_classical_vectorised():
    v = visibility_classical(np.array([0.5, 1.0, 2.0]))
    np.testing.assert_allclose(v, [4 / 9, 0.5, 4 / 9])


@pytest.mark.parametrize("Ia,Ib,expected", [(1.0, 1.0, 0.5), (2.0, 1.0, 1.25)])
def test_phase_monte_carlo_within_three_se(Ia, Ib, expected):
    est = phase_monte_carlo(ClassicalInputs(Ia, Ib), BS50, 10**6, seed=11)
    assert abs(est.mean - expected) < 3 * est.stderr


def test_phase_monte_carlo_single_source_exact():
    est = phase_monte_carlo(ClassicalInputs(2.0, 0.0), BS50, 1000, seed=3)
    # every sample is the same product; only rounding remains
    assert est.mean == pytest.approx(1.0, abs=1e-15)
    assert est.stderr < 1e-15


def test_phase_monte_carlo_reproducible():
    a = phase_monte_carlo(ClassicalInputs(1.0, 2.0), BS50, 5000, seed=9)
    b = phase_monte_carlo(ClassicalInputs(1.0, 2.0), BS50, 5000, seed=9)
    assert a == b
    with pytest.raises(ValueError):
        phase_monte_carlo(ClassicalInputs(1.0, 2.0), BS50, 0)
