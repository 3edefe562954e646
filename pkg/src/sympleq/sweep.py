"""Parameter sweeps of the displacement amount |s| behind the amplification figures."""
import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import TAU_DEN, Rotation, Squeeze
from .engine import forward_transform
from .errors import NearDivergence, SchemaError
from .fundamental import hamiltonian_of, sylvester_pq

STUDIES = ("squeeze-theta", "squeeze-r", "rot-squeeze-phi", "amp-boundary", "rot-only")

DEFAULT_GRIDS = {
    "squeeze-theta": (0.0, 2 * np.pi, 360, False),
    "squeeze-r": (0.0, 3.0, 301, True),
    "rot-squeeze-phi": (0.0, 2 * np.pi, 720, False),
    "amp-boundary": (0.05, 3.0, 60, True),
    "rot-only": (-np.pi, np.pi, 1000, False),
}


@dataclass
class SweepConfig:
    study: str
    r: float = 1.0
    theta: float = 0.0
    phi: float = 0.0
    h: complex = 1.0
    start: float = None
    stop: float = None
    num: int = None
    endpoint: bool = None
    workers: int = 1

    def __post_init__(self):
        if self.study not in STUDIES:
            raise SchemaError(f"unknown study {self.study!r}; expected one of {', '.join(STUDIES)}")
        start, stop, num, endpoint = DEFAULT_GRIDS[self.study]
        self.start = start if self.start is None else float(self.start)
        self.stop = stop if self.stop is None else float(self.stop)
        self.num = num if self.num is None else int(self.num)
        self.endpoint = endpoint if self.endpoint is None else bool(self.endpoint)
        if self.num < 2 or not self.stop > self.start:
            raise SchemaError("grid needs num >= 2 and stop > start")

    def grid(self):
        return np.linspace(self.start, self.stop, self.num, endpoint=self.endpoint)


@dataclass
class SweepResult:
    columns: list
    rows: list = field(default_factory=list)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow(["" if v is None else (f"{v:.17g}" if isinstance(v, float) else v)
                        for v in row])
        return buf.getvalue()

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def amplification(r, theta):
    """|s| of a single-mode squeeze acting on h = 1: 2 sinh(r/2) sqrt(cosh r - sinh r cos theta) / r."""
    r = np.asarray(r, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = 2 * np.sinh(r / 2) * np.sqrt(np.cosh(r) - np.sinh(r) * np.cos(theta)) / r
    return np.where(r == 0, 1.0, val)


def _bisect(f, lo, hi, tol=1e-10):
    flo = f(lo)
    if flo == 0:
        return lo
    if np.sign(flo) == np.sign(f(hi)):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def boundary_theta(r, tol=1e-10):
    """theta in [0, pi] with |s(r, theta)| = 1; |s| increases monotonically on that interval."""
    return _bisect(lambda t: float(amplification(r, t)) - 1.0, 0.0, np.pi, tol)


def _engine_shift(ham, h):
    pair, _ = forward_transform(ham.with_h([h]))
    return complex(pair.s[0])


def _map(fn, xs, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(fn, xs))
    return [fn(x) for x in xs]


def _row(params, s, flag=""):
    return list(params) + [abs(s), s.real, s.imag, flag]


def run_sweep(cfg):
    grid = cfg.grid()
    tail = ["abs_s", "re_s", "im_s", "flag"]
    h = complex(cfg.h)
    if cfg.study == "squeeze-theta":
        def point(t):
            if cfg.phi:
                P, Q = sylvester_pq(cfg.r, t, cfg.phi)
                return _row([t], P * h + Q * np.conj(h))
            return _row([t], _engine_shift(hamiltonian_of(Squeeze.polar(cfg.r, t)), h))
        return SweepResult(["theta"] + tail, _map(point, grid, cfg.workers))
    if cfg.study == "squeeze-r":
        def point(r):
            return _row([r], _engine_shift(hamiltonian_of(Squeeze.polar(r, cfg.theta)), h))
        return SweepResult(["r"] + tail, _map(point, grid, cfg.workers))
    if cfg.study == "rot-only":
        def point(p):
            return _row([p], _engine_shift(hamiltonian_of(Rotation([[p]])), h))
        return SweepResult(["phi"] + tail, _map(point, grid, cfg.workers))
    if cfg.study == "amp-boundary":
        def point(r):
            t = boundary_theta(r)
            if t is None:
                return [r, None, None, "none"]
            return [r, t, 2 * np.pi - t, ""]
        return SweepResult(["r", "theta_boundary", "theta_boundary_mirror", "flag"],
                           _map(point, grid, cfg.workers))
    return _rot_squeeze_phi(cfg, grid, tail, h)


def divergence_phases(r, grid, tol=1e-13):
    """Roots of cos(phi) cosh(r) = -1, located by sign changes on the grid and bisection."""
    f = lambda x: np.cos(x) * np.cosh(r) + 1
    vals = f(np.asarray(grid))
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa != 0 and fb != 0 and np.sign(fa) != np.sign(fb):
            roots.append(_bisect(f, a, b, tol))
    return roots


def _rot_squeeze_phi(cfg, grid, tail, h):
    r, theta = cfg.r, cfg.theta

    def point(p):
        c = np.cos(p) * np.cosh(r)
        try:
            P, Q = sylvester_pq(r, theta, p)
        except NearDivergence:
            return [p, None, None, None, "div"]
        return _row([p], P * h + Q * np.conj(h), "continued" if c < -1 else "")

    rows = _map(point, grid, cfg.workers)
    for root in divergence_phases(r, grid):
        i = int(np.searchsorted([row[0] for row in rows], root))
        if i < len(rows) and abs(rows[i][0] - root) <= TAU_DEN:
            rows[i] = [root, None, None, None, "div"]
        else:
            rows.insert(i, [root, None, None, None, "div"])
    return SweepResult(["phi"] + tail, rows)
