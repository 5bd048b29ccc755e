import math

import pytest

from src.errors import ConfigError
from src.services.validation import CheckResult, ValidationReport, run_validation


def test_quick_suite_passes():
    report = run_validation(quick=True)
    assert report.passed, [c.line() for c in report.failures]
    names = [c.name for c in report.checks]
    assert 'delta oracle agreement' in names
    assert 'coulomb printed energy flagged' in names
    assert len(names) == len(set(names))


def test_kernel_sign_fault_is_detected():
    report = run_validation(quick=True, fault='kernel-sign')
    assert not report.passed
    failed = {c.name for c in report.failures}
    assert 'delta oracle agreement' in failed
    assert 'double-delta oracle agreement' in failed
    # analytic checks do not touch the oracle kernel
    assert 'delta closed form' not in failed


def test_unknown_fault():
    with pytest.raises(ConfigError):
        run_validation(quick=True, fault='nan-energy')


def test_report_lines():
    checks = [
        CheckResult('a', True, 1e-14, 1e-12),
        CheckResult('b', False, math.inf, 1e-6, 'no states'),
    ]
    report = ValidationReport(checks, quick=True)
    lines = report.lines()
    assert lines[0].startswith('PASS a: measured=')
    assert lines[1].startswith('FAIL b: ') and lines[1].endswith('(no states)')
    assert lines[-1] == '1/2 checks passed'
    assert report.to_dict()['passed'] is False


@pytest.mark.slow
def test_full_suite_passes():
    report = run_validation(quick=False)
    assert report.passed, [c.line() for c in report.failures]
