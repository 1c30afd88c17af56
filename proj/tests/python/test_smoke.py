import math

import numpy as np
import pytest

import sasatk


def test_gamma_half():
    assert abs(sasatk.gamma(0.5) - math.sqrt(math.pi)) < 1e-13


def test_pcf_d_order_zero_is_gaussian():
    z = 1.3 - 0.4j
    assert abs(sasatk.pcf_d(0.0, z) - np.exp(-z * z / 4)) < 1e-12


def test_zero_profile_scatters_to_identity():
    p = sasatk.InitialProfile.gaussian(0.0)
    s = sasatk.scattering_matrix(p, 0.7)
    assert np.allclose(s.s, np.eye(3), atol=1e-14)


def test_born_regime():
    eps = 1e-3
    p = sasatk.InitialProfile.gaussian(eps)
    for k in (-1.0, 0.0, 0.5):
        s = sasatk.scattering_matrix(p, k)
        born = -eps * math.sqrt(math.pi) * math.exp(-k * k)
        assert abs(s.s[2, 0] - born) < 5e-6


def test_scatter_grid_report():
    p = sasatk.InitialProfile.gaussian(0.3)
    res = sasatk.scatter_grid(p, -1.0, 1.0, 41)
    assert len(res.table.k_nodes) == 41
    assert res.report.max_det < 1e-8
    assert res.report.max_unitarity < 1e-8
    assert res.report.max_conjugation < 1e-8


def test_signature_on_real_axis():
    for x in np.linspace(-2, 2, 9):
        assert sasatk.signature_sample(12.0, complex(x, 0.0)) == 0
    assert sasatk.stationary_points(12.0) == pytest.approx((-1.0, 1.0))


def test_jump_residual_small():
    d = np.array([1.0 + 0.5j, -0.3 + 0.8j])
    assert sasatk.jump_residual(0.3, d, 1.0) < 1e-8


def test_beta_modulus():
    d = np.array([1.0 + 0.5j, -0.3 + 0.8j])
    for nu in (0.05, 0.5, 2.0):
        b = sasatk.beta21(nu, d)
        assert abs(np.vdot(b, b).real - nu) < 1e-12


def test_nonlinear_term_plane_wave():
    g = sasatk.SimGrid(math.pi * 8, 64)
    kappa = 2 * math.pi / (2 * g.half_width) * 3
    xs = np.array([g.x(j) for j in range(g.n_modes)])
    u = np.exp(1j * kappa * xs)
    n = np.array(sasatk.nonlinear_term(list(u), g))
    assert np.max(np.abs(n - 6j * kappa * u)) < 1e-11


def test_zero_simulation():
    p = sasatk.InitialProfile.gaussian(0.0)
    g = sasatk.SimGrid(64.0, 512)
    snaps = sasatk.simulate(p, g, 0.01, 1.0, [0.5, 1.0])
    assert [s.t for s in snaps] == pytest.approx([0.5, 1.0])
    assert max(abs(z) for s in snaps for z in s.u) == 0.0


def test_errors_are_typed():
    with pytest.raises(sasatk.DomainError):
        sasatk.SimGrid(10.0, 100)
