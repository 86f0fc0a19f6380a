import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffbeam import (
    ArrayElement,
    ArrayGeometry,
    InfeasibleGeometryError,
    PhysicalConstants,
    element_response,
    geometry_digest,
    sample_random_geometry,
    steering_vector,
    validate_geometry,
)


def two_element_geometry(separation: float, min_spacing: float = 0.008):
    half = separation / 2.0
    return ArrayGeometry(
        elements=(
            ArrayElement(r=half, phi=0.0, q=0.0, theta_steer=0.0),
            ArrayElement(r=half, phi=math.pi, q=0.0, theta_steer=0.0),
        ),
        aperture_radius=0.02,
        min_spacing=min_spacing,
    )


class TestValidation:
    def test_spacing_satisfied(self):
        assert validate_geometry(two_element_geometry(0.010)).ok

    def test_spacing_violated(self):
        report = validate_geometry(two_element_geometry(0.005))
        assert not report.ok
        (pair,) = report.spacing_violations
        assert pair[:2] == (0, 1)
        assert pair[2] == pytest.approx(0.005, abs=1e-15)

    def test_out_of_aperture(self):
        geom = ArrayGeometry(
            elements=(ArrayElement(r=0.025, phi=0.0, q=0.0, theta_steer=0.0),),
            aperture_radius=0.020,
            min_spacing=0.008,
        )
        report = validate_geometry(geom)
        assert report.out_of_aperture == (0,)


class TestElementInvariants:
    def test_angle_wrapping(self):
        e = ArrayElement(r=0.01, phi=-0.25, q=0.5, theta_steer=7.0)
        assert 0.0 <= e.phi < 2 * math.pi
        assert 0.0 <= e.theta_steer < 2 * math.pi

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(r=-0.01, phi=0.0, q=0.5, theta_steer=0.0),
            dict(r=0.01, phi=0.0, q=-0.1, theta_steer=0.0),
            dict(r=0.01, phi=0.0, q=1.1, theta_steer=0.0),
            dict(r=float("nan"), phi=0.0, q=0.5, theta_steer=0.0),
        ],
    )
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            ArrayElement(**kwargs)

    def test_constants_must_be_positive(self):
        with pytest.raises(ValueError):
            PhysicalConstants(speed_of_sound=0.0)


class TestElementResponse:
    def test_omni(self):
        e = ArrayElement(r=0.0, phi=0.0, q=0.0, theta_steer=1.0)
        assert element_response(e, 2.2) == 1.0

    def test_dipole_mainlobe(self):
        e = ArrayElement(r=0.0, phi=0.0, q=1.0, theta_steer=1.3)
        assert element_response(e, 1.3) == pytest.approx(1.0)

    def test_cardioid_rear_null(self):
        e = ArrayElement(r=0.0, phi=0.0, q=0.5, theta_steer=0.4)
        assert element_response(e, 0.4 + math.pi) == pytest.approx(0.0, abs=1e-15)

    @given(
        q=st.floats(min_value=0.0, max_value=1.0),
        steer=st.floats(min_value=0.0, max_value=2 * math.pi),
        delta=st.floats(min_value=-10.0, max_value=10.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_symmetry_and_periodicity(self, q, steer, delta):
        e = ArrayElement(r=0.01, phi=0.0, q=q, theta_steer=steer)
        left = element_response(e, steer - delta)
        right = element_response(e, steer + delta)
        assert left == pytest.approx(right, abs=1e-12)
        wrapped = element_response(e, steer + delta + 2 * math.pi)
        assert right == pytest.approx(wrapped, abs=1e-12)


class TestSampling:
    def test_single_element(self):
        geom = sample_random_geometry(1, 0.02, 0.008, seed=42)
        assert geom.size == 1
        assert geom.elements[0].r <= 0.02

    def test_sampled_geometry_validates(self):
        geom = sample_random_geometry(9, 0.02, 0.008, seed=7)
        assert validate_geometry(geom).ok

    def test_determinism(self):
        a = sample_random_geometry(9, 0.02, 0.008, seed=7)
        b = sample_random_geometry(9, 0.02, 0.008, seed=7)
        assert a == b

    def test_distinct_seeds_differ(self):
        a = sample_random_geometry(9, 0.02, 0.008, seed=7)
        b = sample_random_geometry(9, 0.02, 0.008, seed=8)
        assert a != b

    def test_infeasible_request_rejected_immediately(self):
        with pytest.raises(InfeasibleGeometryError):
            sample_random_geometry(50, 0.02, 0.008, seed=1)

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1))
    @settings(max_examples=25, deadline=None)
    def test_sampled_always_valid(self, seed):
        geom = sample_random_geometry(13, 0.02, 0.008, seed=seed)
        assert validate_geometry(geom).ok


class TestSteeringVector:
    def test_zero_frequency_is_ones(self, constants):
        geom = sample_random_geometry(5, 0.02, 0.008, seed=3)
        vec = steering_vector(geom, constants, 0.0, 1.234)
        assert np.allclose(vec, 1.0)

    def test_frozen_phase_example(self, constants):
        # r = 2 cm on the x-axis, f = 1 kHz, wave from theta = 0
        geom = ArrayGeometry(
            elements=(ArrayElement(r=0.02, phi=0.0, q=0.0, theta_steer=0.0),),
            aperture_radius=0.02,
            min_spacing=0.008,
        )
        vec = steering_vector(geom, constants, 2 * math.pi * 1000.0, 0.0)
        phase = 2 * math.pi * 1000.0 * 0.02 / 343.0
        assert vec[0] == pytest.approx(complex(math.cos(phase), math.sin(phase)), abs=1e-15)
        assert phase == pytest.approx(0.36636649021455314, abs=1e-15)

    @given(
        omega=st.floats(min_value=0.0, max_value=2 * math.pi * 8000.0),
        theta=st.floats(min_value=-10.0, max_value=10.0),
        seed=st.integers(min_value=0, max_value=1000),
    )
    @settings(max_examples=50, deadline=None)
    def test_unit_modulus(self, constants, omega, theta, seed):
        geom = sample_random_geometry(4, 0.02, 0.008, seed=seed)
        vec = steering_vector(geom, constants, omega, theta)
        assert np.max(np.abs(np.abs(vec) - 1.0)) < 1e-14

    def test_vectorized_matches_scalar(self, constants):
        geom = sample_random_geometry(6, 0.02, 0.008, seed=11)
        thetas = np.linspace(0.0, 2 * np.pi, 17, endpoint=False)
        matrix = steering_vector(geom, constants, 5000.0, thetas)
        assert matrix.shape == (6, 17)
        for k, theta in enumerate(thetas):
            assert np.array_equal(matrix[:, k], steering_vector(geom, constants, 5000.0, theta))

    def test_negative_omega_rejected(self, constants):
        geom = sample_random_geometry(2, 0.02, 0.008, seed=5)
        with pytest.raises(ValueError):
            steering_vector(geom, constants, -1.0, 0.0)


class TestDigest:
    def test_stable_and_sensitive(self):
        geom = sample_random_geometry(5, 0.02, 0.008, seed=9)
        assert geometry_digest(geom) == geometry_digest(geom)
        other = sample_random_geometry(5, 0.02, 0.008, seed=10)
        assert geometry_digest(geom) != geometry_digest(other)

    def test_element_order_matters(self):
        geom = sample_random_geometry(3, 0.02, 0.008, seed=9)
        swapped = ArrayGeometry(
            elements=(geom.elements[1], geom.elements[0], geom.elements[2]),
            aperture_radius=geom.aperture_radius,
            min_spacing=geom.min_spacing,
        )
        assert geometry_digest(geom) != geometry_digest(swapped)
