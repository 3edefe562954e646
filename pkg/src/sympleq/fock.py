"""Truncated Fock-space oracle for the operator identity e^{iH} a e^{-iH} = E a + F a^dagger + s.

Operators are stored as scipy.sparse matrices.  The default method expands the
conjugation as a commutator series, sum_k (i^k/k!) ad_H^k(a).  Truncation only
corrupts matrix elements whose total excitation is near d, and each commutator
with H widens that corrupted band by at most `band` levels (2 with squeezing,
1 with a linear term, 0 for pure rotations).  Each term is therefore projected
onto the levels it can be trusted on, and the series stops before the trusted
region shrinks below the comparison subspace.  Exponentiating the truncated
H directly ("propagator") is kept for comparison; its error grows with d.

Round-off that leaves span{a, a^dagger, 1} is amplified by roughly
||ad_H||^k / k! along the series, and ||ad_H|| grows with the excitation
level, so the series is run in extended precision (clongdouble) and is cut
as soon as tiny terms start growing again.
"""
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import linalg as sla

from .core import HamiltonianRep
from .errors import DimensionMismatch, DimensionOverflow, TruncationDominates

DEFAULT_MAX_DIM = 4096


def max_dim():
    return int(os.environ.get("SYMPLEQ_MAX_DIM", DEFAULT_MAX_DIM))


def default_truncation(n):
    """Largest per-mode cutoff up to 40 that respects the dimension cap."""
    d = 40
    while d ** n > max_dim() and d > 4:
        d -= 1
    return d


class FockRep:
    """Annihilation operators a_1..a_n on the tensor product of d-level modes."""

    def __init__(self, n, d, dtype=np.clongdouble):
        if n < 1 or d < 4:
            raise ValueError("need n >= 1 and d >= 4")
        if d ** n > max_dim():
            raise DimensionOverflow(f"d^n = {d ** n} exceeds the cap {max_dim()}",
                                    n=n, d=d, cap=max_dim())
        self.n, self.d, self.dim = n, d, d ** n
        self.dtype = dtype
        real = np.longdouble if dtype == np.clongdouble else float
        a1 = sp.diags(np.sqrt(np.arange(1, d, dtype=real)), 1, format="csr")
        eye = sp.identity(d, dtype=real, format="csr")
        self.a = []
        for k in range(n):
            op = sp.identity(1, format="csr")
            for j in range(n):
                op = sp.kron(op, a1 if j == k else eye, format="csr")
            self.a.append(op.astype(dtype))
        grids = np.indices((d,) * n).reshape(n, -1)
        self.levels = grids.sum(axis=0)
        self.identity = sp.identity(self.dim, dtype=dtype, format="csr")

    def adag(self, k):
        return self.a[k].conj().T.tocsr()

    def subspace(self, level):
        return np.flatnonzero(self.levels <= level)


def build_hamiltonian_operator(ham, rep):
    """Sparse operator of the quadratic Hamiltonian, term by term."""
    if ham.n != rep.n:
        raise DimensionMismatch(f"Hamiltonian has {ham.n} modes, Fock space {rep.n}")
    a = rep.a
    ad = [rep.adag(k) for k in range(rep.n)]
    A, B, h = ham.A, ham.B, ham.h
    out = sp.csr_matrix((rep.dim, rep.dim), dtype=rep.dtype)
    A, B, h = (x.astype(rep.dtype) for x in (A, B, h))
    for r in range(rep.n):
        for s in range(rep.n):
            if A[r, s] != 0:
                out = out + 0.5 * (A[r, s] * (ad[r] @ a[s]) + np.conj(A[r, s]) * (a[r] @ ad[s]))
            if B[r, s] != 0:
                out = out + 0.5 * (B[r, s] * (ad[r] @ ad[s]) + np.conj(B[r, s]) * (a[r] @ a[s]))
        if h[r] != 0:
            out = out + h[r] * ad[r] + np.conj(h[r]) * a[r]
    return out.tocsr()


def excitation_band(ham):
    """Largest change of total excitation number produced by one application of H."""
    if np.any(ham.B != 0):
        return 2
    if np.any(ham.h != 0):
        return 1
    return 0


def _mask(M, keep):
    """Zero every entry whose row or column lies outside `keep` (boolean per basis state)."""
    D = sp.diags(keep.astype(M.dtype))
    return (D @ M @ D).tocsr()


def _conjugate_series(Hop, X, levels, trusted, floor, band, max_terms):
    """e^{iH} X e^{-iH} by the projected commutator series.

    `trusted` is the excitation level up to which X is exact; the series stops
    once the next term could not be trusted above `floor`.  Returns the result,
    its new trusted level, the number of terms used and the size of the last one.
    """
    out = X.copy()
    term = X
    k = 0
    tail = prev = np.inf
    while k < max_terms:
        nxt = trusted - band
        if nxt < floor:
            break
        term = (Hop @ term - term @ Hop) * (1j / (k + 1))
        term = _mask(term, levels <= nxt)
        size = float(np.max(np.abs(term.data))) if term.nnz else 0.0
        scale = max(1.0, float(np.max(np.abs(out.data))))
        # past its peak the true series decreases; growth among tiny terms is
        # amplified round-off, so the term is dropped and the sum stops
        if size <= 1e-12 * scale and size > prev:
            break
        k += 1
        trusted = nxt
        out = out + term
        tail = prev = size
        # below double resolution of the result: later terms carry only round-off
        if tail <= 1e-17 * scale:
            break
    return out, trusted, k, (0.0 if tail == np.inf else tail)


def heisenberg_map(hams, rep, d_safe=None, method="commutator", max_terms=400):
    """e^{iH} a_k e^{-iH} for a cascade of Hamiltonians (hams[0] acts first).

    Returns (list of operators per mode, info dict).  For a cascade U = U_m..U_1
    the conjugation U^dagger a U applies the last unitary's map first.
    """
    if isinstance(hams, HamiltonianRep):
        hams = [hams]
    d_safe = rep.d // 2 if d_safe is None else d_safe
    ops = [build_hamiltonian_operator(h, rep) for h in hams]
    if method == "propagator":
        outs = []
        Us = []
        for op in ops:
            w, V = np.linalg.eigh(op.toarray().astype(complex))
            Us.append((V * np.exp(-1j * w)) @ V.conj().T)
        for k in range(rep.n):
            X = rep.a[k].toarray().astype(complex)
            for U in reversed(Us):
                X = U.conj().T @ X @ U
            outs.append(X)
        return outs, {"terms": 0, "tail": 0.0, "trusted": d_safe}
    if method != "commutator":
        raise ValueError(f"unknown method {method!r}")
    bands = [excitation_band(h) for h in hams]
    outs, used, tail, final = [], 0, 0.0, rep.d - 1
    for k in range(rep.n):
        X = rep.a[k]
        trusted = rep.d - 1
        for j in reversed(range(len(ops))):
            banded_left = sum(1 for b in bands[:j] if b > 0)
            room = trusted - d_safe
            floor = d_safe + (room // (banded_left + 1)) * banded_left if bands[j] else d_safe
            X, trusted, nterms, t = _conjugate_series(ops[j], X, rep.levels, trusted,
                                                      floor, bands[j], max_terms)
            used += nterms
            tail = max(tail, t)
        final = min(final, trusted)
        outs.append(X)
    return outs, {"terms": used, "tail": tail, "trusted": final}


def _restrict(M, idx):
    if sp.issparse(M):
        return M[idx][:, idx].toarray().astype(complex)
    return np.asarray(M[np.ix_(idx, idx)], dtype=complex)


@dataclass(frozen=True)
class HeisenbergReport:
    residual: float
    per_mode: tuple
    d: int
    d_safe: int
    method: str
    terms: int
    tail: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol


def _residual(hams, pair, rep, d_safe, method):
    outs, info = heisenberg_map(hams, rep, d_safe=d_safe, method=method)
    idx = rep.subspace(d_safe)
    eye = np.eye(len(idx))
    a = [_restrict(rep.a[j], idx) for j in range(rep.n)]
    ad = [x.conj().T for x in a]
    per = []
    for k in range(rep.n):
        want = pair.s[k] * eye
        for j in range(rep.n):
            want = want + pair.E[k, j] * a[j] + pair.F[k, j] * ad[j]
        per.append(float(np.max(np.abs(_restrict(outs[k], idx) - want))))
    return max(per), tuple(per), info


def heisenberg_check(hams, pair, rep, method="commutator", tol=1e-6, d_safe=None, retry=True):
    """Compare the conjugated mode operators against E a + F a^dagger + s on the low-excitation block."""
    d_safe = rep.d // 2 if d_safe is None else d_safe
    res, per, info = _residual(hams, pair, rep, d_safe, method)
    if res > tol and retry and (rep.d + 10) ** rep.n <= max_dim():
        bigger = FockRep(rep.n, rep.d + 10)
        res2, _, _ = _residual(hams, pair, bigger, d_safe, method)
        if res2 < res:
            raise TruncationDominates("residual shrinks as the truncation grows",
                                      residual=res, residual_bigger=res2, d=rep.d)
    return HeisenbergReport(res, per, rep.d, d_safe, method, info["terms"], info["tail"], tol)


def measured_shift(hams, rep, method="commutator"):
    """Vacuum expectation <0| e^{iH} a_k e^{-iH} |0>, i.e. the shift s_k."""
    outs, _ = heisenberg_map(hams, rep, d_safe=0, method=method)
    return np.array([complex(X[0, 0]) for X in outs], dtype=complex)


def unitary_operator(ham, rep):
    """Dense e^{-iH} on the truncated space (small problems only)."""
    return sla.expm(-1j * build_hamiltonian_operator(ham, rep).toarray().astype(complex))
