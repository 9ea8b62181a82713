"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

All checks use the fixed default seed, so the outcome is deterministic. The
tolerances are the stated ones; nothing here is loosened to make a check pass.
"""

import pytest

from polyeig.validation import DEFAULT_SEED, run_check

CRITERIA = {
    1: ["closed_form_equality"],
    2: ["sampler_gof"],
    3: ["modn_equivalence"],
    4: ["expectations"],
    5: ["spectra_d1"],
    6: ["spectra_binary"],
    7: ["homotopy_oracle"],
    8: ["det_identity"],
    9: ["limit_d2", "limit_d1"],
    10: ["figures"],
}


def _summary(res):
    keep = {k: v for k, v in res.details.items() if k != "cases"}
    cases = res.details.get("cases", [])
    if len(cases) <= 3:
        keep.update({f"case{i}": c for i, c in enumerate(cases)})
    else:
        keep["cases"] = len(cases)
    return ", ".join(f"{k}={v}" for k, v in keep.items())


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion, capsys):
    results = [run_check(name, DEFAULT_SEED, workers=1) for name in CRITERIA[criterion]]
    passed = all(r.passed for r in results)
    parts = "; ".join(f"{r.name} {'pass' if r.passed else 'FAIL'} ({_summary(r)})" for r in results)
    with capsys.disabled():
        print(f"\nACCEPTANCE criterion {criterion:>2}: {'PASS' if passed else 'FAIL'} | {parts}")
    failed = [r for r in results if not r.passed]
    assert not failed, f"criterion {criterion} failed: {[r.details for r in failed]}"
