from __future__ import annotations

import re
from pathlib import Path

import pytest

from odqkd import cli
from odqkd.core.alphabet import Basis, BellSign, GhzSign
from odqkd.core.errors import ContractViolation, UndefinedRateError

IDEAL_TOML = """
[detector]
eta_d = 1.0
p_d = 0.0
e_d = 0.0

[topology]
distance_km = 0.0
""".strip()


def _exit_code(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    return int(exc.value.code)  # type: ignore[arg-type]


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path: Path, monkeypatch) -> None:
    # keep a stray ./odqkd.toml from leaking into the runs
    monkeypatch.chdir(tmp_path)


def test_help_without_command(capsys) -> None:
    cli.main([])
    assert "verify-tables" in capsys.readouterr().out


def test_unknown_command(capsys) -> None:
    assert _exit_code(["bogus"]) == 2
    assert "Unknown command" in capsys.readouterr().err


def test_verify_tables_passes(capsys) -> None:
    assert _exit_code(["verify-tables"]) == 0
    out = capsys.readouterr().out
    for name, rows in [("aux-povm", 4), ("equivalent-bsm", 8), ("flip", 2), ("ghz-analyzer", 16)]:
        assert f"{name}: PASS ({rows} rows checked" in out
    assert "end-to-end: PASS (1024 rows checked" in out
    assert "6/6 checks passed" in out


def test_verify_tables_reports_an_injected_fault(monkeypatch, capsys) -> None:
    def never_flip(basis: Basis, sign: BellSign | GhzSign) -> bool:
        return False

    monkeypatch.setattr(cli, "flip_decision", never_flip)
    assert _exit_code(["verify-tables"]) == 1
    out = capsys.readouterr().out
    assert "flip: FAIL" in out
    assert "FAILED: " in out


def test_detector_params_defaults(capsys) -> None:
    assert _exit_code(["detector-params"]) == 0
    out = capsys.readouterr().out
    assert re.search(r"^eta_z=\S+ rounded=0\.08$", out, re.M)
    assert re.search(r"^eta_x=\S+ rounded=0\.16$", out, re.M)
    dark = re.search(r"^dark=(\S+) rounded=6\.4e-08$", out, re.M)
    assert dark is not None
    assert float(dark.group(1)) == pytest.approx(6.4e-8, abs=1e-10)


def test_detector_params_overrides_as_json(capsys) -> None:
    argv = ["detector-params", "--eta-d", "1.0", "--dark-count", "0", "--format", "json"]
    assert _exit_code(argv) == 0
    out = capsys.readouterr().out
    assert '"eta_x":1.0' in out
    assert '"eta_z":0.5' in out


def test_detector_params_rejects_bad_values(capsys) -> None:
    assert _exit_code(["detector-params", "--eta-d", "1.5"]) == 2
    assert "error:" in capsys.readouterr().err


def test_sweep_defaults_print_cutoffs(capsys) -> None:
    assert _exit_code(["sweep", "--distance", "0"]) == 0
    out = capsys.readouterr().out
    cutoffs = {
        float(m.group(1)): float(m.group(2))
        for m in re.finditer(r"^p=(\S+) cutoff_km=([\d.]+)$", out, re.M)
    }
    assert set(cutoffs) == {1.0, 0.98, 0.96}
    assert cutoffs[1.0] >= 500.0
    assert cutoffs[1.0] > cutoffs[0.98] > cutoffs[0.96]
    assert out.startswith("#schema=1\n")


def test_sweep_single_point_file_is_reproducible(tmp_path: Path) -> None:
    argv = ["sweep", "--p", "1.0", "--distance", "100", "--format", "csv"]
    assert _exit_code([*argv, "--out", str(tmp_path / "a.csv")]) == 0
    assert _exit_code([*argv, "--out", str(tmp_path / "b.csv")]) == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    lines = a.decode().splitlines()
    assert lines[:2] == ["#schema=1", "p,distance_km,gain_zz,qber_zz,phase_error_xx,rate"]
    assert len(lines) == 3


def test_sweep_unwritable_output(tmp_path: Path, capsys) -> None:
    (tmp_path / "blocker").write_text("x")
    assert _exit_code(["sweep", "--distance", "0", "--out", str(tmp_path / "blocker/s.csv")]) == 3
    assert "I/O error" in capsys.readouterr().err


BLIND_TOML = """
[detector]
eta_d = 0.0
p_d = 0.0
""".strip()


def test_sweep_with_blind_detectors(tmp_path: Path, capsys) -> None:
    (tmp_path / "odqkd.toml").write_text(BLIND_TOML)
    assert _exit_code(["sweep", "--p", "1.0", "--distance", "10"]) == 0
    captured = capsys.readouterr()
    assert "p=1 cutoff_km=0.0" in captured.out
    assert "Traceback" not in captured.err


def test_montecarlo_with_blind_detectors(tmp_path: Path, capsys) -> None:
    (tmp_path / "odqkd.toml").write_text(BLIND_TOML)
    assert _exit_code(["montecarlo", "--rounds", "50", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "delta: n/a (analytic yield vanishes)" in out
    assert re.search(r"^gain_zz=0 ", out, re.M)


@pytest.mark.parametrize(
    "error", [UndefinedRateError("yield vanishes"), ContractViolation("not an X symbol")]
)
def test_library_errors_map_to_usage(monkeypatch, capsys, error: Exception) -> None:
    def failing_sweep(*args: object, **kwargs: object) -> None:
        raise error

    monkeypatch.setattr(cli, "sweep", failing_sweep)
    assert _exit_code(["sweep", "--distance", "0"]) == 2
    assert f"error: {error}" in capsys.readouterr().err


def test_montecarlo_ideal_run(tmp_path: Path, capsys) -> None:
    (tmp_path / "odqkd.toml").write_text(IDEAL_TOML)
    assert _exit_code(["montecarlo", "--rounds", "600", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "resources: relays=4 (pairwise 6) detectors=16 (conventional 56)" in out
    assert re.search(r"^qber_z=0 ", out, re.M)
    assert "delta heralded_gain_zz" in out


def test_montecarlo_is_reproducible_across_workers(tmp_path: Path) -> None:
    config = tmp_path / "ideal.toml"
    config.write_text(IDEAL_TOML)
    base = ["montecarlo", "--config", str(config), "--rounds", "300", "--format", "json"]
    assert _exit_code([*base, "--out", str(tmp_path / "a.json")]) == 0
    assert _exit_code([*base, "--out", str(tmp_path / "b.json")]) == 0
    assert _exit_code([*base, "--workers", "2", "--out", str(tmp_path / "c.json")]) == 0
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes() == (tmp_path / "c.json").read_bytes()


def test_montecarlo_conference(tmp_path: Path, capsys) -> None:
    (tmp_path / "odqkd.toml").write_text(IDEAL_TOML)
    argv = ["montecarlo", "--rounds", "400", "--comm-users", "0,1,2"]
    assert _exit_code(argv) == 0
    out = capsys.readouterr().out
    assert "conference_rate=" in out
    assert "delta " not in out


def test_records_feed_verify_tables(tmp_path: Path, capsys) -> None:
    records = tmp_path / "records.ndjson"
    argv = ["montecarlo", "--rounds", "200", "--users", "3", "--records-out", str(records)]
    assert _exit_code(argv) == 0
    assert '"kind":"round_records"' in records.read_text().splitlines()[0]
    capsys.readouterr()
    assert _exit_code(["verify-tables", "--records", str(records)]) == 0
    out = capsys.readouterr().out
    assert "rounds=200 kept=" in out


def test_foreign_record_stream(tmp_path: Path, capsys) -> None:
    records = tmp_path / "old.ndjson"
    records.write_text('{"kind":"round_records","schema":"0.9"}\n')
    assert _exit_code(["verify-tables", "--records", str(records)]) == 3
    assert "I/O error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["montecarlo", "--users", "9", "--rounds", "10"],
        ["montecarlo", "--comm-users", "0", "--rounds", "10"],
        ["montecarlo", "--rounds", "0"],
        ["sweep", "--config", "missing.toml"],
        ["sweep", "--log-level", "LOUD"],
    ],
)
def test_usage_errors(argv: list[str]) -> None:
    assert _exit_code(argv) == 2


def test_capacity_error_gives_guidance(capsys) -> None:
    assert _exit_code(["montecarlo", "--users", "9", "--rounds", "10"]) == 2
    assert "reduce --users" in capsys.readouterr().err
