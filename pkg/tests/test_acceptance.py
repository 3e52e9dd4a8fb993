"""Acceptance gate: one test per criterion, each printing its pass/fail line.

The measured residuals come from the same invariant suite that backs the
``verify`` CLI command, so the tolerances asserted here are exactly the ones
the tool reports.  Run with ``pytest -s tests/test_acceptance.py`` to see the
per-criterion lines; ``pointscatter verify`` prints the same information.
"""

import pytest

from pointscatter import cli, verify

CRITERIA = {
    1: ("route agreement dfss == renormalized", ["1-route-agreement"]),
    2: ("closed-form solve and band integral", ["2a-closed-form-solve",
                                                "2b-band-integral-pi"]),
    3: ("Green-function regularization", ["3a-green-cutoff-quadrature",
                                          "3b-green-imag-minus-quarter"]),
    4: ("oscillatory momentum identity", ["4-oscillatory-identity"]),
    5: ("scheme-matching constant", ["5-scheme-matching-constant"]),
    6: ("renormalization-flow collapse", ["6-renormalization-flow-collapse"]),
    7: ("singularity absorption", ["7a-absorption-roundtrip",
                                   "7b-family-sum-only", "7c-b-tilde-limit"]),
    8: ("unitarity circle Im(1/f)", ["8-unitarity-circle"]),
    9: ("field-level checks", ["9a-far-field-decay", "9b-near-field-log-slope",
                               "9c-psi0-transverse-current",
                               "9d-current-divergence"]),
    10: ("special functions vs series oracles", ["10a-specfun-series-oracle",
                                                 "10b-expansion-quadratic-scaling"]),
    11: ("CLI determinism", ["11-cli-determinism"]),
}


@pytest.fixture(scope="module")
def suite():
    return {r.name: r for r in verify.run_all()}


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_acceptance_criterion(criterion, suite):
    label, check_names = CRITERIA[criterion]
    results = [suite[name] for name in check_names]
    status = "PASS" if all(r.passed for r in results) else "FAIL"
    detail = "; ".join(f"{r.name} measured={r.measured:.3e} tol={r.tolerance:.1e}"
                       for r in results)
    print(f"[acceptance {criterion:>2}] {status} {label}: {detail}")
    for r in results:
        assert r.passed, r.line()


def test_acceptance_11_file_level_determinism(tmp_path):
    # criterion 11 again at the file level, across distinct command families
    for argv in (["amplitude", "--theta-grid", "8"],
                 ["flow", "--lambda", "10,100"],
                 ["field", "--grid=-0.45,0.45,46,-0.45,0.45,46"]):
        payloads = set()
        for run in range(2):
            path = tmp_path / f"{argv[0]}-{run}.out"
            assert cli.main(argv + ["--out", str(path)]) == 0
            payloads.add(path.read_bytes())
        assert len(payloads) == 1, f"nondeterministic output for {argv[0]}"
