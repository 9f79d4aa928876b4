import json

import pytest

from cdsreplica import (
    BondSpec,
    DiscountCurve,
    SurvivalCurve,
    build_schedule,
    mtm_profile,
    par_asw_spread,
    par_cancelable_asw_spread,
    par_cds_spread,
    price_risky_bond,
)
from cdsreplica.cli import main, parse_config, serialize_config

F1_CONFIG = {
    "discount_nodes": [[5.0, 0.02]],
    "hazard_nodes": [[5.0, 0.02]],
    "bond": {"coupon": 0.05, "recovery": 0.4, "maturity": 5.0, "frequency": 1},
    "repo": {"spread": 0.001, "forward_price": "fair"},
}


@pytest.fixture
def config_file(tmp_path):
    def write(payload):
        path = tmp_path / "market.json"
        path.write_text(json.dumps(payload))
        return str(path)

    return write


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPrice:
    def test_report_matches_library_calls(self, config_file, capsys):
        code, out, _ = run_cli(capsys, "--config", config_file(F1_CONFIG), "price")
        assert code == 0
        report = json.loads(out)

        discount = DiscountCurve.flat(0.02)
        survival = SurvivalCurve.flat(0.02)
        schedule = build_schedule(0.0, 5.0, 1)
        bond = BondSpec(coupon=0.05, recovery=0.4)
        assert report["risky_bond_price"] == price_risky_bond(discount, survival, schedule, bond)
        assert report["cds_par_spread"] == par_cds_spread(discount, survival, schedule, 0.4).spread
        assert report["asw_par_spread"] == par_asw_spread(discount, survival, schedule, bond).spread
        assert report["cancelable_asw_par_spread"] == par_cancelable_asw_spread(
            discount, survival, schedule, bond
        ).spread
        assert "early_termination_pv" in report
        assert "generalized_cancelable_asw_par_spread" not in report

    def test_riskless_config_gives_zero_spreads(self, config_file, capsys):
        payload = dict(F1_CONFIG, hazard_nodes=[[5.0, 0.0]])
        code, out, _ = run_cli(capsys, "--config", config_file(payload), "price")
        assert code == 0
        report = json.loads(out)
        for key in ("cds_par_spread", "asw_par_spread", "cancelable_asw_par_spread"):
            assert abs(report[key]) < 1e-14

    def test_early_repo_adds_generalized_section(self, config_file, capsys):
        payload = dict(F1_CONFIG, repo={"spread": 0.001, "maturity": 3.0})
        code, out, _ = run_cli(capsys, "--config", config_file(payload), "price")
        assert code == 0
        report = json.loads(out)
        assert "forward_bond_price" in report
        assert "generalized_cancelable_asw_par_spread" in report

    def test_pretty_and_bp_flags(self, config_file, capsys):
        code, out, _ = run_cli(
            capsys, "--config", config_file(F1_CONFIG), "--pretty", "--bp", "price"
        )
        assert code == 0
        assert "cds_par_spread" in out
        assert "bp" in out
        with pytest.raises(json.JSONDecodeError):
            json.loads(out)


class TestConfigValidation:
    def test_both_hazard_and_quote_rejected(self, config_file, capsys):
        payload = dict(F1_CONFIG, cds_quote=0.01)
        code, _, err = run_cli(capsys, "--config", config_file(payload), "price")
        assert code == 2
        assert "hazard_nodes" in err

    def test_neither_hazard_nor_quote_rejected(self, config_file, capsys):
        payload = {k: v for k, v in F1_CONFIG.items() if k != "hazard_nodes"}
        code, _, err = run_cli(capsys, "--config", config_file(payload), "price")
        assert code == 2

    def test_unknown_field_named(self, config_file, capsys):
        payload = dict(F1_CONFIG, surprise=1)
        code, _, err = run_cli(capsys, "--config", config_file(payload), "price")
        assert code == 2
        assert "surprise" in err

    def test_bad_number_named(self, config_file, capsys):
        payload = dict(F1_CONFIG, bond=dict(F1_CONFIG["bond"], coupon="high"))
        code, _, err = run_cli(capsys, "--config", config_file(payload), "price")
        assert code == 2
        assert "bond.coupon" in err

    def test_malformed_json_rejected(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "--config", str(path), "price")
        assert code == 2

    def test_roundtrip_parse_serialize_parse(self):
        config = parse_config(
            dict(F1_CONFIG, quotes={"cds_bid": 0.01, "cds_ask": 0.012,
                                    "aswc_bid": 0.009, "aswc_ask": 0.011})
        )
        assert parse_config(serialize_config(config)) == config

    def test_roundtrip_with_quote_calibration(self):
        payload = {k: v for k, v in F1_CONFIG.items() if k != "hazard_nodes"}
        payload["cds_quote"] = 0.0123
        config = parse_config(payload)
        assert parse_config(serialize_config(config)) == config


class TestReplicate:
    def test_clause_on_exits_zero_with_flat_residuals(self, config_file, capsys):
        code, out, _ = run_cli(capsys, "--config", config_file(F1_CONFIG), "replicate")
        assert code == 0
        report = json.loads(out)
        assert report["clause_enabled"] is True
        assert report["max_abs_residual"] < 1e-12
        assert len(report["scenarios"]) == 6

    def test_no_clause_residuals_match_close_outs(self, config_file, capsys):
        code, out, _ = run_cli(
            capsys, "--config", config_file(F1_CONFIG), "replicate", "--no-clause"
        )
        assert code == 0
        report = json.loads(out)
        discount = DiscountCurve.flat(0.02)
        schedule = build_schedule(0.0, 5.0, 1)
        bond = BondSpec(coupon=0.05, recovery=0.4)
        profile = mtm_profile(discount, schedule, bond, report["asw_spread"])
        for row in report["scenarios"]:
            if row["default_bucket"] is None:
                continue
            k = row["default_bucket"]
            expected = discount.discount_factor(float(k)) * profile.values[k - 1]
            assert row["residual"] == pytest.approx(expected, abs=1e-12)

    def test_residual_above_tolerance_exits_4(self, config_file, capsys, monkeypatch):
        import cdsreplica.cli as cli_module

        real = cli_module.replication_report

        def degraded(*args, **kwargs):
            report = real(*args, **kwargs)
            scenarios = report.scenarios[:-1] + (
                report.scenarios[-1]._replace(residual=1e-6),
            )
            return type(report)(
                **{
                    **report.__dict__,
                    "scenarios": scenarios,
                    "max_abs_residual": 1e-6,
                }
            )

        monkeypatch.setattr(cli_module, "replication_report", degraded)
        code, _, _ = run_cli(capsys, "--config", config_file(F1_CONFIG), "replicate")
        assert code == 4

    def test_mc_runs_are_reproducible(self, config_file, capsys):
        args = (
            "--config", config_file(F1_CONFIG),
            "replicate", "--no-clause", "--mc", "20000", "--seed", "7",
        )
        code_a, out_a, _ = run_cli(capsys, *args)
        code_b, out_b, _ = run_cli(capsys, *args)
        assert code_a == code_b == 0
        assert out_a == out_b
        report = json.loads(out_a)
        assert report["mc_paths"] == 20000
        assert report["mc_seed"] == 7
        assert report["mc_std_error"] > 0.0


class TestImpliedRepo:
    QUOTES = {"cds_bid": 0.010, "cds_ask": 0.012, "aswc_bid": 0.009, "aswc_ask": 0.011}

    def test_spreads(self, config_file, capsys):
        payload = dict(F1_CONFIG, quotes=self.QUOTES)
        code, out, _ = run_cli(capsys, "--config", config_file(payload), "implied-repo")
        assert code == 0
        report = json.loads(out)
        assert report["implied_repo_spread"] == pytest.approx(0.003, abs=1e-15)
        assert report["implied_reverse_repo_spread"] == pytest.approx(-0.001, abs=1e-15)

    def test_crossed_quotes_exit_2(self, config_file, capsys):
        payload = dict(F1_CONFIG, quotes=dict(self.QUOTES, cds_bid=0.013))
        code, _, err = run_cli(capsys, "--config", config_file(payload), "implied-repo")
        assert code == 2

    def test_missing_quotes_exit_2(self, config_file, capsys):
        code, _, err = run_cli(capsys, "--config", config_file(F1_CONFIG), "implied-repo")
        assert code == 2
        assert "quotes" in err


class TestCalibrate:
    def base(self, quote):
        payload = {k: v for k, v in F1_CONFIG.items() if k != "hazard_nodes"}
        payload["cds_quote"] = quote
        return payload

    def test_zero_quote(self, config_file, capsys):
        code, out, _ = run_cli(capsys, "--config", config_file(self.base(0.0)), "calibrate")
        assert code == 0
        report = json.loads(out)
        assert report["calibrated_hazard"] == 0.0

    def test_roundtrip_quote(self, config_file, capsys):
        discount = DiscountCurve.flat(0.02)
        schedule = build_schedule(0.0, 5.0, 1)
        quote = par_cds_spread(discount, SurvivalCurve.flat(0.02), schedule, 0.4).spread
        code, out, _ = run_cli(capsys, "--config", config_file(self.base(quote)), "calibrate")
        assert code == 0
        report = json.loads(out)
        assert report["calibrated_hazard"] == pytest.approx(0.02, abs=1e-10)
        assert report["reproduced_cds_spread"] == pytest.approx(quote, abs=1e-12)

    def test_unattainable_quote_exit_3(self, config_file, capsys):
        code, _, err = run_cli(capsys, "--config", config_file(self.base(20000.0)), "calibrate")
        assert code == 3
        assert "quote" in err.lower()
