"""End-to-end acceptance criteria, one test per criterion.

Every criterion is exact arithmetic, so the tolerance everywhere is literal
equality; each test prints a single pass/fail line for the run log.
"""
import time
from pathlib import Path

from dkdv import suites
from dkdv.cli import main


def _require(name: str, report) -> None:
    fails = [c for c in report.checks if c.status != "pass"]
    status = "PASS" if not fails else "FAIL"
    print(f"ACCEPTANCE {name}: {status} ({len(report.checks)} checks)")
    for c in fails:
        print(f"    {c.identity}: {c.first_discrepancy}")
    assert not fails, f"{name}: {[c.identity for c in fails]}"


def test_01_operator_identity_suite():
    t0 = time.time()
    rep = suites.suite_operators(8)
    elapsed = time.time() - t0
    _require("1 operator-identities[j<=8]", rep)
    assert elapsed < 60, f"suite took {elapsed:.1f}s, budget is one minute"


def test_02_flow_equivalence():
    _require("2 flow-equivalence[j<=4]", suites.suite_flows(4))


def test_03_resolvent_suite():
    _require("3 resolvent[J=8]", suites.suite_resolvent(8))


def test_04_tau_structure():
    _require("4 tau-structure[i+j<=10]", suites.suite_tau(10))


def test_05_toda_reduction():
    _require("5 toda-reduction[order 8]", suites.suite_toda(8))


def test_06_correlators_vs_oracle():
    _require("6 gue-vs-oracle[j<=6]", suites.suite_gue(6))


def test_07_explicit_resolvent_consistency():
    _require("7 defrab-consistency[order 8]", suites.suite_defrab(8))


def test_08_partition_expansions():
    _require("8 partition-expansions[|j|<=5, eps^6]", suites.suite_eb(5, 6))


def test_09_hodge_suite():
    _require("9 hodge[g<=2, probes 1..8]", suites.suite_hodge(2, 8))


def test_10_determinism(tmp_path: Path):
    paths = [tmp_path / f"report{i}.json" for i in range(3)]
    codes = [
        main(["verify", "--suite", "all", "--out", str(paths[0])]),
        main(["verify", "--suite", "all", "--out", str(paths[1])]),
        main(["verify", "--suite", "all", "--jobs", "4", "--out", str(paths[2])]),
    ]
    blobs = [p.read_bytes() for p in paths]
    ok = codes == [0, 0, 0] and blobs[0] == blobs[1] == blobs[2]
    print(f"ACCEPTANCE 10 determinism: {'PASS' if ok else 'FAIL'}")
    assert codes == [0, 0, 0]
    assert blobs[0] == blobs[1] == blobs[2]
