import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympleq.errors import SchemaError
from sympleq.sweep import (
    STUDIES,
    SweepConfig,
    amplification,
    boundary_theta,
    divergence_phases,
    run_sweep,
)


def _parse(text):
    return list(csv.reader(io.StringIO(text)))


@given(st.floats(0.01, 3.0), st.floats(0, 2 * np.pi))
@settings(max_examples=50, deadline=None)
def test_amplification_is_closed_form(r, theta):
    # |s| for h = 1 read off s = -i sinh(r)/r h + i (cosh r - 1)/r e^{i theta} conj(h)
    direct = abs(np.sinh(r) - np.exp(1j * theta) * (np.cosh(r) - 1)) / r
    assert np.isclose(amplification(r, theta), direct, rtol=1e-12)


def test_squeeze_theta_extrema():
    res = run_sweep(SweepConfig("squeeze-theta", r=1.0))
    vals = np.array(res.column("abs_s"))
    theta = np.array(res.column("theta"))
    assert theta[vals.argmax()] == pytest.approx(np.pi)
    assert vals.max() == pytest.approx(1.7182818284590455, abs=1e-12)
    assert theta[vals.argmin()] == 0
    assert vals.min() == pytest.approx(0.6321205588285577, abs=1e-12)


def test_squeeze_r_grows_at_pi():
    vals = run_sweep(SweepConfig("squeeze-r", theta=np.pi, start=0.1, stop=3, num=30)).column("abs_s")
    assert np.all(np.diff(vals) > 0)


def test_boundary():
    for r in (0.5, 1.0, 2.0):
        t = boundary_theta(r)
        assert abs(amplification(r, t) - 1) < 1e-9
    res = run_sweep(SweepConfig("amp-boundary", num=10))
    for r, t, m, flag in res.rows:
        assert flag == "" and m == pytest.approx(2 * np.pi - t)


def test_divergence_phases_oracle():
    roots = divergence_phases(0.5, np.linspace(0, 2 * np.pi, 720, endpoint=False))
    assert roots[0] == pytest.approx(2.6612115744560887, abs=1e-12)
    assert roots[1] == pytest.approx(2 * np.pi - 2.6612115744560887, abs=1e-12)


def test_rot_squeeze_phi_flags():
    res = run_sweep(SweepConfig("rot-squeeze-phi", r=0.5, theta=0.7))
    phi = res.column("phi")
    assert np.all(np.diff(phi) > 0)
    flags = res.column("flag")
    assert flags.count("div") == 2
    for row in res.rows:
        if row[-1] == "div":
            assert row[1] is None
        else:
            assert np.isfinite(row[1])
    # between the two roots no Hermitian Hamiltonian exists; values are continued
    c = np.cos(np.array(phi)) * np.cosh(0.5)
    cont = [f == "continued" for f in flags]
    assert all(cont[i] == (c[i] < -1) for i in range(len(c)) if flags[i] != "div")


def test_rot_only_bound():
    s = run_sweep(SweepConfig("rot-only")).column("abs_s")
    assert max(s) <= 1 + 1e-15


def test_csv_format():
    text = run_sweep(SweepConfig("squeeze-theta", num=4)).to_csv()
    rows = _parse(text)
    assert rows[0] == ["theta", "abs_s", "re_s", "im_s", "flag"]
    assert len(rows) == 5
    # 17 significant digits round trip exactly
    assert float(rows[2][0]) == np.linspace(0, 2 * np.pi, 4, endpoint=False)[1]
    assert "nan" not in text.lower() and "inf" not in text.lower()


def test_parallel_matches_serial():
    a = run_sweep(SweepConfig("rot-squeeze-phi", r=0.5, num=60)).to_csv()
    b = run_sweep(SweepConfig("rot-squeeze-phi", r=0.5, num=60, workers=4)).to_csv()
    assert a == b


def test_h_changes_squeeze_curve():
    a = run_sweep(SweepConfig("squeeze-theta", h=1.0, num=8)).column("abs_s")
    b = run_sweep(SweepConfig("squeeze-theta", h=1j, num=8)).column("abs_s")
    assert not np.allclose(a, b)


def test_config_errors():
    assert set(STUDIES) == {"squeeze-theta", "squeeze-r", "rot-squeeze-phi", "amp-boundary", "rot-only"}
    with pytest.raises(SchemaError):
        SweepConfig("nope")
    with pytest.raises(SchemaError):
        SweepConfig("squeeze-r", start=2, stop=1)
