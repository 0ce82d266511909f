import math

import numpy as np
import pytest

from chiralqubit.chirality import (
    DegeneratePlaquette,
    GaplessTexture,
    NotConverged,
    chern_plaquette,
    chern_quadrature,
    cross_validate,
    default_k_max,
)
from chiralqubit.kspace import GapParams


class TestQuadrature:
    def test_base_state_plus(self):
        result = chern_quadrature(GapParams(1.0, 1.0, +1), 8.0, 256)
        assert result.n_integer == +1
        assert result.residual < 1e-3

    def test_base_state_minus(self):
        result = chern_quadrature(GapParams(1.0, 1.0, -1), 8.0, 256)
        assert result.n_integer == -1

    def test_no_fermi_surface_is_trivial(self):
        result = chern_quadrature(GapParams(1.0, -1.0, +1), 8.0, 256)
        assert result.n_integer == 0

    def test_not_converged_carries_result(self):
        # in-plane scale delta/k_F = 7 puts the texture core far under the mesh
        with pytest.raises(NotConverged) as excinfo:
            chern_quadrature(GapParams(5.0, 0.5, +1), 40.0, 64)
        assert excinfo.value.result.grid_size == 64
        assert excinfo.value.result.residual >= 1e-3

    def test_rejects_small_k_max(self):
        with pytest.raises(ValueError):
            chern_quadrature(GapParams(1.0, 1.0, +1), 2.0, 256)

    def test_rejects_small_grid(self):
        with pytest.raises(ValueError):
            chern_quadrature(GapParams(1.0, 1.0, +1), 8.0, 16)


class TestPlaquette:
    def test_exact_quantization(self):
        result = chern_plaquette(GapParams(0.5, 1.0, +1), 8.0, 128)
        assert result.n_integer == +1
        assert result.residual < 1e-6

    def test_independent_of_gap_scale(self):
        for delta in (0.1, 0.5, 1.0, 2.0, 5.0):
            params = GapParams(delta, 1.0, +1)
            result = chern_plaquette(params, default_k_max(params), 256)
            assert result.n_integer == +1, delta
            assert result.residual < 1e-6

    def test_transition_point_refused(self):
        with pytest.raises(GaplessTexture):
            chern_plaquette(GapParams(1.0, 0.0, +1), 8.0, 128)

    def test_gapless_refused(self):
        with pytest.raises(GaplessTexture):
            chern_plaquette(GapParams(0.0, 1.0, +1), 8.0, 128)
        with pytest.raises(GaplessTexture):
            chern_quadrature(GapParams(0.0, 1.0, +1), 8.0, 128)

    def test_degenerate_plaquette_detected(self):
        # mu tuned so the innermost corners sit antipodally on the equator:
        # node spacing h = 0.25, corner (h/2, h/2) has k^2 = mu exactly
        h = 2.0 * 8.0 / 64
        mu = (h / 2.0) ** 2 * 2.0
        with pytest.raises(DegeneratePlaquette):
            chern_plaquette(GapParams(1.0, mu, +1), 8.0, 64)

    def test_quantization_random_gapped_parameters(self):
        rng = np.random.default_rng(2024)
        count = 0
        while count < 20:
            delta = rng.uniform(0.1, 3.0)
            mu = rng.uniform(-2.0, 4.0)
            if abs(mu) < 0.05:
                continue
            chi = +1 if rng.random() < 0.5 else -1
            params = GapParams(delta, mu, chi)
            result = chern_plaquette(params, default_k_max(params), 256)
            assert result.residual < 1e-6, (delta, mu, chi)
            count += 1


class TestSignAndScale:
    def test_sign_antisymmetry(self):
        for delta, mu in ((0.5, 1.0), (1.0, 2.0), (2.0, 0.5), (1.0, -1.0)):
            k_max = default_k_max(GapParams(delta, mu, +1))
            plus = chern_plaquette(GapParams(delta, mu, +1), k_max, 256)
            minus = chern_plaquette(GapParams(delta, mu, -1), k_max, 256)
            assert plus.n_integer == -minus.n_integer

    def test_scale_invariance(self):
        base = cross_validate(GapParams(1.0, 1.0, +1)).n_integer
        for c in (0.1, 10.0):
            assert cross_validate(GapParams(c, 1.0, +1)).n_integer == base

    def test_transition_across_mu(self):
        for chi in (+1, -1):
            for mu in (-2.0, -0.5, 0.5, 2.0):
                params = GapParams(1.0, mu, chi)
                result = chern_plaquette(params, default_k_max(params), 256)
                expected = chi if mu > 0 else 0
                assert result.n_integer == expected, (mu, chi)

    def test_method_agreement_matched_grids(self):
        cases = [
            (GapParams(1.0, 1.0, +1), 8.0, 128),
            (GapParams(1.0, 1.0, -1), 8.0, 256),
            (GapParams(0.5, 2.0, +1), 12.0, 256),
        ]
        for params, k_max, n_grid in cases:
            quad = chern_quadrature(params, k_max, n_grid)
            plaq = chern_plaquette(params, k_max, n_grid)
            assert quad.n_integer == plaq.n_integer
            assert abs(quad.raw - plaq.raw) < 1e-2


class TestCrossValidate:
    def test_base_agreement(self):
        report = cross_validate(GapParams(1.0, 1.0, +1))
        assert report.n_integer == +1
        assert report.quadrature.n_integer == report.plaquette.n_integer == +1

    def test_trivial_phase(self):
        report = cross_validate(GapParams(1.0, -0.5, +1))
        assert report.n_integer == 0

    def test_small_gap_large_mu(self):
        params = GapParams(0.2, 4.0, -1)
        report = cross_validate(params)
        # independent high-resolution run of the raw texture as oracle
        oracle = chern_plaquette(params, default_k_max(params), 512)
        assert report.n_integer == oracle.n_integer == -1

    def test_extreme_gap_scale(self):
        report = cross_validate(GapParams(5.0, 0.5, +1))
        assert report.n_integer == +1

    def test_gapless_refused(self):
        with pytest.raises(GaplessTexture):
            cross_validate(GapParams(0.0, 1.0, +1))

    def test_explicit_cutoff_honored(self):
        report = cross_validate(GapParams(1.0, 1.0, +1), k_max=10.0, n_grid_start=256)
        assert report.quadrature.k_max == 10.0
        assert report.n_integer == +1
