import json
import math

import numpy as np
import pytest

import hbtdit


@pytest.fixture(scope="module")
def params():
    return hbtdit.PhysicalParams.electron(5 * hbtdit.CM, 50 * hbtdit.NS)


def test_kinetic_energy(params):
    assert hbtdit.kinetic_energy_ev(params) == pytest.approx(2.843, rel=1e-3)


def test_contrast_closed_form():
    for n in (2, 3, 5, 10):
        assert hbtdit.contrast_analytic(n, "polarized") == pytest.approx(1 / (n - 1))
        assert hbtdit.contrast_analytic(n) == pytest.approx(1 / (2 * n - 1))
    with pytest.raises(ValueError):
        hbtdit.contrast_analytic(1)


def test_first_zeros_bracket_flight_time(params):
    leading, trailing = hbtdit.first_zero_times(5 * hbtdit.FS, params)
    assert trailing < params.flight_time < leading
    leading, _ = hbtdit.first_zero_times(0.1 * hbtdit.FS, params)
    assert leading is None


def test_slit_amplitude_normalizes(params):
    grid = hbtdit.default_detection_grid(5 * hbtdit.FS, params, 801)
    phi = hbtdit.slit_amplitude(0.0, 5 * hbtdit.FS, grid, params, normalize=True)
    assert phi.dtype == np.complex128
    assert np.trapezoid(np.abs(phi) ** 2, grid.times()) == pytest.approx(1.0, rel=1e-9)


def test_single_slit_modes_agree(params):
    grid = hbtdit.default_detection_grid(5 * hbtdit.FS, params, 401)
    slits = [(0.0, 5 * hbtdit.FS)]
    coh = hbtdit.multi_slit_spectrum(slits, True, grid, params)
    inc = hbtdit.multi_slit_spectrum(slits, False, grid, params)
    assert np.array_equal(coh, inc)


def test_mixture_spectrum(params):
    r = hbtdit.mixture_spectrum(10, 50, params, grid_points=601)
    assert r["n_intervals"] == 10
    assert r["contrast"] == pytest.approx(1 / 19, rel=1e-2)
    d = r["mixture"]
    assert np.trapezoid(d["density"], d["delays"]) == pytest.approx(1.0, abs=1e-6)
    anti = r["coh_AS"]
    zero = len(anti["delays"]) // 2
    assert anti["delays"][zero] == 0.0
    assert anti["density"][zero] < 1e-10 * anti["density"].max()


def test_decoherence_single_particle():
    out = hbtdit.decoherence_outputs(3)
    rho1 = out["single"]["matrix"]
    assert np.allclose(rho1, np.array([[3, 1, 1], [1, 2, 1], [1, 1, 3]]) / 8, atol=1e-12)
    assert out["pair_spin"]["matrix"].shape == (12, 12)
    assert len(out["pair"]["labels"]) == 6


def test_config_and_errors(tmp_path):
    resolved = json.loads(hbtdit.resolved_config('{"scenario": "rates"}'))
    assert resolved["scenario"] == "rates"
    with pytest.raises(ValueError, match="t_pulse_fs"):
        hbtdit.resolved_config('{"t_pulse_fs": 5}')
    files = hbtdit.run_scenario(json.dumps({"scenario": "rates", "output_dir": str(tmp_path)}))
    assert files and all(f.startswith(str(tmp_path)) for f in files)
    assert math.isfinite(hbtdit.reduced_rate(1.39e7, 26e-12, 80e6))
