import numpy as np
import pytest

import sympleq
import sympleq.cli
import sympleq.engine
import sympleq.fundamental
import sympleq.sweep

TAU_SYMP_SUITE = 1e-9
_track = {"count": 0, "worst": 0.0}
_criteria = {}


def _tracked(fn):
    def wrapper(ham):
        pair, psi = fn(ham)
        _track["count"] += 1
        _track["worst"] = max(_track["worst"], pair.symplectic_residual())
        return pair, psi
    wrapper.__wrapped__ = fn
    return wrapper


def pytest_configure(config):
    # every forward transform run anywhere in the suite is checked for symplecticity
    wrapped = _tracked(sympleq.engine.forward_transform)
    for mod in (sympleq, sympleq.engine, sympleq.fundamental, sympleq.sweep, sympleq.cli):
        mod.forward_transform = wrapped


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    name = report.nodeid.split("::")[-1]
    if "test_acceptance" in report.nodeid and name.startswith("test_criterion_"):
        num = int(name.split("_")[2])
        detail = dict(report.user_properties).get("detail", "")
        _criteria[num] = ("PASS" if report.passed else "FAIL", name, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria and not _track["count"]:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_criteria):
        status, name, detail = _criteria[num]
        tr.write_line(f"criterion {num:2d}: {status}  {name}  {detail}")
    ok = _track["worst"] < TAU_SYMP_SUITE
    tr.write_line(f"suite-wide symplectic check: {'PASS' if ok else 'FAIL'}  "
                  f"{_track['count']} forward transforms, worst residual {_track['worst']:.3e}")


def pytest_sessionfinish(session, exitstatus):
    if _track["worst"] >= TAU_SYMP_SUITE and exitstatus == 0:
        session.exitstatus = 1


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
