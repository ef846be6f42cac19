"""Acceptance battery: one test per cross-verification criterion.

Each test runs the corresponding check from kfpq.acceptance, prints its
one-line verdict (visible under pytest -v -s or in failure output), and
asserts the verdict together with the wall-clock budget.  The final test
checks that the reporting pipeline itself is reproducible byte for byte.
"""

import pytest

from kfpq import acceptance
from kfpq.cli import main


def _check(number: int) -> None:
    result = acceptance.CRITERIA[number](seed=0)
    status = "PASS" if result.passed else "FAIL"
    line = "criterion %02d %s %s: %s" % (result.number, status,
                                         result.name, result.details)
    print(line)
    assert result.passed, line
    assert result.elapsed < result.budget, line


def test_criterion_01_algebra_closure():
    _check(1)


def test_criterion_02_basis_identities():
    _check(2)


def test_criterion_03_flow_closed_forms():
    _check(3)


def test_criterion_04_positivity_threshold():
    _check(4)


def test_criterion_05_exact_semigroup_norm():
    _check(5)


def test_criterion_06_resolvent_log_bound():
    _check(6)


def test_criterion_07_optimality_witness():
    _check(7)


def test_criterion_08_holomorphic_quotient():
    _check(8)


def test_criterion_09_degenerate_fibers():
    _check(9)


@pytest.mark.slow
def test_criterion_10_discretization_probes():
    _check(10)


def test_criterion_11_byte_reproducible_report(tmp_path, capsys):
    crit = ",".join(str(n) for n in acceptance.FAST_CRITERIA)
    first = tmp_path / "first.txt"
    second = tmp_path / "second.txt"
    rc1 = main(["verify-all", "--criteria", crit, "--seed", "0",
                "--out", str(first)])
    rc2 = main(["verify-all", "--criteria", crit, "--seed", "0",
                "--out", str(second)])
    capsys.readouterr()
    print("criterion 11 %s byte reproducibility: rc=(%d,%d)"
          % ("PASS" if rc1 == rc2 == 0 else "FAIL", rc1, rc2))
    assert rc1 == 0 and rc2 == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().endswith(
        "passed %d of %d criteria\n"
        % (len(acceptance.FAST_CRITERIA), len(acceptance.FAST_CRITERIA)))
