import pytest

from secalign import verify


def test_registry_counts_match_expected():
    got = {}
    for inv in verify._REGISTRY:
        got[inv.area] = got.get(inv.area, 0) + 1
    assert got == verify.EXPECTED_COUNTS
    assert sum(verify.EXPECTED_COUNTS.values()) == 19


def test_all_invariants_pass():
    results = verify.run_verify()
    failed = [r for r in results if not r.passed]
    assert not failed, "\n".join(r.line() for r in failed)
    assert len(results) == 19


def test_suite_filter():
    results = verify.run_verify(suite="bounds")
    assert results
    assert all(r.suite == "bounds" for r in results)
    results = verify.run_verify(suite=("f3", "mc"))
    assert {r.suite for r in results} == {"f3", "mc"}


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        verify.run_verify(suite="bogus")


def test_report_text_shape():
    results = verify.run_verify(suite="f3")
    text = verify.report_text(results)
    lines = text.strip().split("\n")
    assert lines[0].startswith("PASS ")
    assert lines[-1].endswith("invariants passed")
