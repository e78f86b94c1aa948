"""Exhaustive oracle checks and fault injection for `odqkd.protocol.oracle`."""

from __future__ import annotations

from odqkd.core.alphabet import Basis, BellSign, BsmOutcome, GhzSign
from odqkd.protocol.oracle import (
    AUX_POVM_ROWS,
    EQUIVALENT_BSM_ROWS,
    FLIP_ROWS,
    GHZ_ANALYZER_ROWS,
    verify_all,
    verify_aux_povm,
    verify_conference_end_to_end,
    verify_end_to_end,
    verify_equivalent_bsm,
    verify_flip,
    verify_ghz_analyzer,
)
from odqkd.protocol.sifting import PovmEquivalent


def test_fixture_sizes() -> None:
    assert (len(AUX_POVM_ROWS), len(EQUIVALENT_BSM_ROWS), len(FLIP_ROWS)) == (4, 8, 2)
    assert len(GHZ_ANALYZER_ROWS) == 16
    assert len({row[0] for row in GHZ_ANALYZER_ROWS}) == 16


def test_rule_tables_pass() -> None:
    reports = [verify_aux_povm(), verify_equivalent_bsm(), verify_flip(), verify_ghz_analyzer()]
    assert [r.rows_checked for r in reports] == [4, 8, 2, 16]
    for r in reports:
        assert r.passed, r.mismatches


def test_end_to_end_zero_qber() -> None:
    report = verify_end_to_end()
    assert report.passed, report.mismatches[:5]
    assert report.rows_checked == 1024
    assert report.details["kept"] > 0
    assert report.details["impossible"] > 0


def test_conference_end_to_end() -> None:
    report = verify_conference_end_to_end()
    assert report.passed, report.mismatches[:5]
    assert report.rows_checked == 64 * 4 * 32
    assert report.details["kept"] > 0


def test_verify_all_passes_with_production_rules() -> None:
    reports = verify_all()
    assert all(r.passed for r in reports)
    assert "PASS" in reports[0].summary()


def _never_flip(basis: Basis, sign: BellSign | GhzSign) -> bool:
    return False


def test_faulty_flip_rule_is_caught() -> None:
    report = verify_flip(_never_flip)
    assert not report.passed
    assert any(m.startswith("row 2") for m in report.mismatches)
    assert "FAIL" in report.summary()
    assert not verify_end_to_end(_never_flip).passed


def test_faulty_bsm_rule_is_caught() -> None:
    report = verify_equivalent_bsm(lambda a, b1, b2: BellSign.PHI_PLUS)
    assert len(report.mismatches) == 4


def test_faulty_povm_rule_is_caught() -> None:
    report = verify_aux_povm(lambda s, o: PovmEquivalent(s, 0.5))
    assert len(report.mismatches) == 2


def test_faulty_analyzer_rule_is_caught() -> None:
    report = verify_ghz_analyzer(lambda g, b1, b2, b3: g)
    assert not report.passed
    # rows whose three outcomes contain an odd number of psi-
    odd = [r for r in GHZ_ANALYZER_ROWS if sum(b is BsmOutcome.PSI_MINUS for b in r[2:5]) % 2]
    assert len(report.mismatches) == len(odd)
