import math

import pytest

import twinphoton as tp


def test_version():
    assert tp.version() == "0.1.0"


def test_photon_flux_and_idler():
    assert tp.photon_flux(1e-6, 657.0) == pytest.approx(3.3074145848755600e12, rel=1e-12)
    assert tp.idler_wavelength(500.0, 750.0) == pytest.approx(1500.0, rel=1e-14)
    with pytest.raises(ValueError):
        tp.idler_wavelength(657.0, 600.0)


def test_estimator_paper_point():
    assert tp.infer_pair_rate(155e3, 155e3, 1550.0, True) == 7.75e6
    r = tp.estimate(155e3, 155e3, 1550.0, True, 1e-6, 657.0, 10.0)
    assert 2.0e-6 <= r["conversion_efficiency"] <= 2.5e-6
    assert "pair_rate_sigma_hz" in r
    with pytest.raises(ArithmeticError):
        tp.infer_pair_rate(1e5, 1e5, 0.0, True)


def test_qpm_round_trip():
    model = tp.SellmeierModel.load(str(tp.data_file("ln_congruent_ne_edwards_lawrence.txt")))
    period = tp.solve_poling_period(657.0, 1314.0, 100.0, model)
    assert abs(period / 12.1 - 1.0) <= 0.15
    assert abs(tp.phase_mismatch(657.0, 1314.0, 100.0, period, model)) < 1e-6
    assert tp.solve_degeneracy_temperature(657.0, period, model) == pytest.approx(100.0, abs=0.05)


def test_simulate_count_estimate():
    cfg = tp.load_config(str(tp.data_file("canonical_source.conf")))
    s1, s2, rc = tp.expected_rates(cfg)
    assert rc == pytest.approx(1550.0, rel=1e-12)
    run = tp.simulate(cfg, 0.5, 3)
    again = tp.simulate(cfg, 0.5, 3)
    assert run["timestamps_ps"] == again["timestamps_ps"]
    summary = tp.count(run["detectors"], run["timestamps_ps"], 0.5, dark1_hz=22e3, dark2_hz=22e3)
    assert abs(summary["s1_net_hz"] - 155e3) < 4 * math.sqrt(177e3 * 0.5) / 0.5
    est = tp.estimate(summary["s1_net_hz"], summary["s2_net_hz"], summary["rc_net_hz"], True, 7.8e-7, 657.0, 0.5)
    assert abs(est["pair_rate_hz"] - 7.75e6) <= 4 * est["pair_rate_sigma_hz"]


def test_table1():
    rows = tp.table1(str(tp.data_file("table1_sources.txt")))
    assert len(rows) == 5
    assert [r["key"] for r in rows if r["flagged"]] == ["bbo_type2"]


def test_cli_entry():
    code, out, _ = tp.run_cli(["estimate", "--s1", "155e3", "--s2", "155e3", "--rc", "1550", "--splitter",
                                "--power", "1e-6", "--pump", "657e-9"])
    assert code == 0
    assert "pair_rate_hz = 7750000" in out
    code, _, err = tp.run_cli(["qpm", "--pump", "657e-9"])
    assert code == 1
