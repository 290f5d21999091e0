import math

import numpy as np
import pytest

from wsn3d.geometry import (
    CorrelationModel,
    Dodecahedron,
    EventSource,
    correlation,
    correlation_radius,
    dodeca_circumradius,
    dodeca_edge_from_circumradius,
    dodeca_vertices,
    dodeca_volume,
    event_volume,
)

MODEL = CorrelationModel(theta=30.0, alpha=1.0)

# frozen from an independent arbitrary-precision evaluation
EXP_MINUS_02 = 0.8187307530779819
RADIUS_085 = 4.875567884933247
RADIUS_085_ALPHA2 = 2.2080688134506242
VOLUME_085 = 485.47205116056333
CIRCUM_CONST = 1.401258538444074
VOLUME_CONST = 7.663118960624632


class TestCorrelation:
    def test_zero_distance_identity(self):
        assert correlation(MODEL, 0.0) == 1.0

    def test_inverse_by_construction(self):
        d = 30.0 * math.log(1.0 / 0.85)
        assert correlation(MODEL, d) == pytest.approx(0.85, abs=1e-12)

    def test_known_value_at_six_meters(self):
        assert correlation(MODEL, 6.0) == pytest.approx(EXP_MINUS_02, abs=1e-12)

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            correlation(MODEL, -0.1)

    def test_strictly_decreasing_and_in_range(self):
        d = np.linspace(0.0, 200.0, 2001)
        c = correlation(MODEL, d)
        assert np.all(np.diff(c) < 0.0)
        assert np.all((c > 0.0) & (c <= 1.0))

    def test_pure_function_bitwise(self):
        assert correlation(MODEL, 1.234) == correlation(MODEL, 1.234)


class TestCorrelationRadius:
    def test_paper_default_threshold(self):
        assert correlation_radius(MODEL, 0.85) == pytest.approx(RADIUS_085, abs=1e-9)

    def test_alpha_two(self):
        model = CorrelationModel(theta=30.0, alpha=2.0)
        assert correlation_radius(model, 0.85) == pytest.approx(RADIUS_085_ALPHA2, abs=1e-9)

    def test_tau_one_gives_zero(self):
        assert correlation_radius(MODEL, 1.0) == 0.0

    def test_tau_near_one_vanishes(self):
        assert correlation_radius(MODEL, 1.0 - 1e-12) < 1e-5

    @pytest.mark.parametrize("tau", [-0.5, 0.0, 1.5])
    def test_domain_errors(self, tau):
        with pytest.raises(ValueError):
            correlation_radius(MODEL, tau)

    def test_round_trip_with_correlation(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            model = CorrelationModel(
                theta=rng.uniform(1.0, 100.0), alpha=float(rng.choice([0.5, 1.0, 2.0]))
            )
            tau = rng.uniform(0.01, 0.99)
            assert abs(correlation(model, correlation_radius(model, tau)) - tau) < 1e-12


class TestEventVolume:
    def test_paper_default_threshold(self):
        assert event_volume(MODEL, 0.85) == pytest.approx(VOLUME_085, abs=1e-9)

    def test_matches_radius_definition_exactly(self):
        for tau in (0.1, 0.5, 0.85, 0.99):
            r = correlation_radius(MODEL, tau)
            assert event_volume(MODEL, tau) == 4.0 / 3.0 * math.pi * r**3

    def test_monotone_decreasing_in_tau(self):
        assert event_volume(MODEL, 0.7) > event_volume(MODEL, 0.85)

    def test_vanishes_as_tau_approaches_one(self):
        assert event_volume(MODEL, 1.0 - 1e-12) < 1e-12


class TestDodecahedron:
    def test_circumradius_unit_edge(self):
        assert dodeca_circumradius(Dodecahedron(edge=1.0)) == pytest.approx(CIRCUM_CONST, abs=1e-9)

    def test_circumradius_linear_in_edge(self):
        assert dodeca_circumradius(Dodecahedron(edge=2.0)) == pytest.approx(2 * CIRCUM_CONST, abs=1e-9)

    def test_edge_inverse_round_trip(self):
        for edge in (0.3, 1.0, 4.876):
            r = dodeca_circumradius(Dodecahedron(edge=edge))
            assert dodeca_edge_from_circumradius(r) == pytest.approx(edge, abs=1e-12)

    def test_edge_from_paper_derived_radius(self):
        assert dodeca_edge_from_circumradius(RADIUS_085) == pytest.approx(3.4794, abs=1e-3)

    def test_edge_from_zero_radius(self):
        assert dodeca_edge_from_circumradius(0.0) == 0.0

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            dodeca_edge_from_circumradius(-1.0)

    def test_volume_unit_edge(self):
        assert dodeca_volume(Dodecahedron(edge=1.0)) == pytest.approx(VOLUME_CONST, abs=1e-9)

    def test_volume_cubic_scaling(self):
        v1 = dodeca_volume(Dodecahedron(edge=1.0))
        assert dodeca_volume(Dodecahedron(edge=2.0)) == pytest.approx(8.0 * v1, abs=1e-9)

    def test_volume_inside_circumsphere(self):
        for edge in (0.5, 1.0, 3.0):
            v = dodeca_volume(Dodecahedron(edge=edge))
            r = dodeca_circumradius(Dodecahedron(edge=edge))
            assert v < 4.0 / 3.0 * math.pi * r**3

    def test_invalid_edge_rejected(self):
        with pytest.raises(ValueError):
            Dodecahedron(edge=0.0)

    def test_vertices_have_requested_edge_and_circumradius(self):
        pts = dodeca_vertices(edge=1.0)
        assert pts.shape == (20, 3)
        radii = np.linalg.norm(pts, axis=1)
        assert np.allclose(radii, CIRCUM_CONST, atol=1e-12)
        # nearest-neighbor distance of each vertex is the edge length
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        np.fill_diagonal(d, np.inf)
        assert np.allclose(d.min(axis=1), 1.0, atol=1e-12)


class TestModelValidation:
    def test_theta_must_be_positive(self):
        with pytest.raises(ValueError):
            CorrelationModel(theta=0.0)

    @pytest.mark.parametrize("alpha", [0.0, -1.0, 2.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(ValueError):
            CorrelationModel(theta=30.0, alpha=alpha)

    def test_event_source_threshold_range(self):
        with pytest.raises(ValueError):
            EventSource(position=(0.0, 0.0, 0.0), tau_e=0.0)
        with pytest.raises(ValueError):
            EventSource(position=(0.0, float("nan"), 0.0), tau_e=0.5)
