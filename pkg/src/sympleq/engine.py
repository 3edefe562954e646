"""Hamiltonian pair (H, h) <-> affine symplectic pair (S, s)."""
from dataclasses import dataclass

import numpy as np

from .core import (
    TAU_NUM,
    TAU_STRUCT,
    HamiltonianRep,
    PsiMatrix,
    SymplecticPair,
    block_vector,
    omega,
    split_blocks,
)
from .errors import IllConditioned, NoConvergence, StructureViolation
from .linalg import jordan_split, mat_exp, mat_log_principal

# Psi = (S - I) H^-1 loses about eps * cond(H) digits, so the closed form is
# only used while cond(H) stays below 1e6; anything worse goes through the
# Jordan route, which has no such loss.
RANK_REL = 1e-6
SERIES_MAX_TERMS = 200


def generator(ham):
    """C = -i Omega H, the exponent of S."""
    return -1j * omega(ham.n) @ ham.H


def _psi_from_full(Psi, path):
    n = Psi.shape[0] // 2
    return PsiMatrix(Psi[:n, :n], Psi[:n, n:], path=path)


def _phi1_series(L, max_terms=SERIES_MAX_TERMS):
    """sum_{m>=1} L^{m-1}/m!  (finite when L is nilpotent)."""
    p = L.shape[0]
    out = np.eye(p, dtype=complex)
    term = out.copy()
    for m in range(2, max_terms):
        term = term @ L / m
        out = out + term
        if np.max(np.abs(term)) <= 1e-17 * np.max(np.abs(out)):
            return out
    raise NoConvergence("nilpotent block series did not terminate")


def psi_series_oracle(ham, tol=1e-14, max_terms=SERIES_MAX_TERMS):
    """Psi by direct partial sums of sum_m (-i Omega H)^{m-1} (-i Omega) / m!."""
    n = ham.n
    C = generator(ham)
    base = -1j * omega(n)
    term = base.copy()
    total = base.copy()
    for m in range(2, max_terms + 1):
        term = C @ term / m
        total = total + term
        if np.linalg.norm(term) < tol * np.linalg.norm(total):
            return _psi_from_full(total, "series")
    raise NoConvergence(f"series did not reach tol {tol} in {max_terms} terms",
                        norm=float(np.linalg.norm(C)))


def singular_psi(ham, tau_rank=None):
    """Psi = V (W_r (+) W_0) V^-1 (-i Omega) from a Jordan split of -i Omega H."""
    n = ham.n
    split = jordan_split(generator(ham), tau_rank)
    if split.ill_conditioned:
        raise IllConditioned("Jordan basis is ill conditioned", cond=split.cond)
    Lr = split.Lr
    if split.r == 0:
        Wr = np.zeros((0, 0), complex)
    elif split.diagonal:
        lam = np.diag(Lr)
        Wr = np.diag(np.expm1(lam) / lam)
    else:
        Wr = np.linalg.solve(Lr.T, (mat_exp(Lr) - np.eye(split.r)).T).T
    W0 = _phi1_series(split.L0)
    W = np.zeros((2 * n, 2 * n), complex)
    W[:split.r, :split.r] = Wr
    W[split.r:, split.r:] = W0
    V = split.V
    Psi = V @ np.linalg.solve(V.T, W.T).T @ (-1j * omega(n))
    return _psi_from_full(Psi, "jordan-series")


def compute_psi(ham, S=None):
    """Psi by the closed form when H is well conditioned, otherwise the Jordan route."""
    n = ham.n
    H = ham.H
    if S is None:
        S = mat_exp(generator(ham))
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[0] > 0 and sv[-1] > RANK_REL * sv[0]:
        SmI = S - np.eye(2 * n)
        Psi = np.linalg.solve(H.T, SmI.T).T
        res = np.max(np.abs(Psi @ H - SmI))
        if res <= TAU_NUM * max(1.0, float(np.max(np.abs(SmI)))):
            return _psi_from_full(Psi, "inverse")
    try:
        return singular_psi(ham)
    except IllConditioned:
        psi = psi_series_oracle(ham, tol=1e-13)
        return PsiMatrix(psi.P, psi.Q, path="series-fallback")


def forward_transform(ham):
    """(H, h) -> (S, s) with S = exp(-i Omega H) and s = P h + Q conj(h)."""
    S = mat_exp(generator(ham))
    psi = compute_psi(ham, S)
    n = ham.n
    pair = SymplecticPair(S[:n, :n], S[:n, n:], psi.shift(ham.h))
    return pair, psi


def inverse_hamiltonian(pair):
    """(S, s) -> (H, h): H = i Omega log S on the principal branch, h = Psi^-1 s."""
    n = pair.n
    H = 1j * omega(n) @ mat_log_principal(pair.S)
    scale = max(1.0, float(np.max(np.abs(H))))
    dev = float(max(np.max(np.abs(H - H.conj().T)),
                    np.max(np.abs(H[n:, :n] - H[:n, n:].conj())),
                    np.max(np.abs(H[n:, n:] - H[:n, :n].conj()))))
    if dev > TAU_STRUCT * scale * 100:
        raise StructureViolation("recovered H is not a structured Hermitian matrix", residual=dev)
    H = (H + H.conj().T) / 2
    ham0 = HamiltonianRep(H[:n, :n], (H[:n, n:] + H[:n, n:].T) / 2)
    if not np.any(pair.s):
        return ham0
    psi = compute_psi(ham0, pair.S)
    hvec = np.linalg.solve(psi.Psi, pair.svec)
    return ham0.with_h(hvec[:n])


@dataclass(frozen=True)
class AffineDecomposition:
    """Linear part plus a shift applied after (post) or before (pre) it."""
    mode: str
    linear: SymplecticPair
    shift: np.ndarray

    def apply(self, xi):
        xi = np.asarray(xi, dtype=complex)
        S = self.linear.S
        y = block_vector(self.shift)
        if self.mode == "post":
            return S @ xi + y
        return S @ (xi + y)


def decompose_affine(pair, mode="post"):
    """Split xi -> S xi + s into S then displacement, or displacement then S."""
    linear = SymplecticPair(pair.E, pair.F, None, validate=False)
    if mode == "post":
        return AffineDecomposition("post", linear, pair.s.copy())
    if mode == "pre":
        Y = np.linalg.solve(pair.S, pair.svec)
        return AffineDecomposition("pre", linear, Y[:pair.n])
    raise ValueError("mode must be 'post' or 'pre'")


def hamiltonian_from_full(H, h=None):
    """Structured HamiltonianRep from a dense 2n x 2n H and optional full 2n h."""
    return split_blocks(H, h, kind="hamiltonian")
