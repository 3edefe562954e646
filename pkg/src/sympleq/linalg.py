"""Dense complex matrix kernels: exp, principal log, Jordan splitting, polar form."""
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .core import KAPPA_MAX, TAU_EIG, TAU_NUM, TAU_RECON, TAU_STRUCT
from .errors import (
    BranchCut,
    DegenerateEigenvalues,
    NoConvergence,
    NonFinite,
    Singular,
    StructureViolation,
)


def _check_finite(M, name="matrix"):
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise NonFinite(f"{name} has NaN or Inf entries")
    return M


def mat_exp(C):
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    return sla.expm(_check_finite(C))


def taylor_exp(C, terms=60):
    """Plain truncated Taylor sum, used only as a cross-check of mat_exp."""
    C = _check_finite(C)
    out = np.eye(C.shape[0], dtype=complex)
    term = out.copy()
    for k in range(1, terms):
        term = term @ C / k
        out = out + term
    return out


def mat_log_principal(M):
    """Principal matrix logarithm; refuses inputs with eigenvalues on or near the cut."""
    M = _check_finite(M)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= 1e-14 * sv[0]:
        raise Singular("matrix is numerically singular", sigma_min=float(sv[-1]))
    lam = np.linalg.eigvals(M)
    scale = float(np.max(np.abs(lam)))
    on_cut = (lam.real < 0) & (np.abs(lam.imag) <= TAU_EIG * scale)
    if np.any(on_cut):
        bad = lam[on_cut][0]
        raise BranchCut("eigenvalue on the negative real axis; principal log undefined",
                        eigenvalue=complex(bad))
    L, _ = sla.logm(M, disp=False)
    L = np.asarray(L, dtype=complex)
    res = float(np.max(np.abs(sla.expm(L) - M))) / max(1.0, float(np.max(np.abs(M))))
    if res > TAU_NUM:
        raise NoConvergence("matrix logarithm failed the exp round trip", residual=res)
    return L


def funm_hermitian(M, f):
    """f(M) for Hermitian M through its spectral decomposition."""
    M = _check_finite(M)
    w, U = np.linalg.eigh((M + M.conj().T) / 2)
    return (U * f(w)) @ U.conj().T


@dataclass(frozen=True)
class JordanSplit:
    """C = V (Lr (+) L0) V^-1 with Lr carrying the nonzero spectrum and L0 the (near) zero part."""
    V: np.ndarray
    Lr: np.ndarray
    L0: np.ndarray
    r: int
    cond: float
    ill_conditioned: bool
    diagonal: bool

    def reconstruct(self):
        D = sla.block_diag(self.Lr, self.L0)
        return self.V @ D @ np.linalg.inv(self.V)


def jordan_split(C, tau_rank=None, diagonalize=True):
    """Separate the zero and nonzero spectrum of C.

    A sorted complex Schur form puts the eigenvalues with |lambda| > tau_rank
    first; a Sylvester solve then removes the coupling block, and the regular
    block is diagonalized when its eigenvector basis is well conditioned.
    The default tau_rank is 1e-6 * ||C||_2, which catches zero eigenvalues of
    defective blocks that round-off splits to ~sqrt(eps).
    """
    C = _check_finite(C)
    p = C.shape[0]
    norm = float(np.linalg.norm(C, 2)) if p else 0.0
    if tau_rank is None:
        tau_rank = 1e-6 * norm
    if norm == 0.0:
        eye = np.eye(p, dtype=complex)
        return JordanSplit(eye, np.zeros((0, 0), complex), C.copy(), 0, 1.0, False, True)
    T, Z, r = sla.schur(C, output="complex", sort=lambda x: abs(x) > tau_rank)
    T11, T12, T22 = T[:r, :r], T[:r, r:], T[r:, r:]
    V = Z.copy()
    if 0 < r < p:
        X = sla.solve_sylvester(T11, -T22, -T12)
        V[:, r:] = Z[:, r:] + Z[:, :r] @ X
    Lr, diagonal = T11, r <= 1
    if diagonalize and r > 1:
        w, U = np.linalg.eig(T11)
        order = np.lexsort((np.round(w.real, 12), np.round(w.imag, 12)))
        w, U = w[order], U[:, order]
        if np.linalg.cond(U) < 1e8:
            V[:, :r] = V[:, :r] @ U
            Lr, diagonal = np.diag(w), True
    cond = float(np.linalg.cond(V))
    return JordanSplit(V, Lr, T22, int(r), cond, cond > KAPPA_MAX, diagonal)


def polar_decompose_squeeze(z, return_flag=False):
    """Polar factors z = r e^{i theta}, r = (z z^dagger)^{1/2} PSD and theta Hermitian.

    On the null space of z the unitary factor is completed by the unitary
    closest to the identity, which gives theta = 0 whenever the left and right
    null spaces coincide (always the case for n = 1 or z = 0).
    """
    z = _check_finite(z, "z")
    if np.max(np.abs(z - z.T)) > TAU_STRUCT * max(1.0, float(np.max(np.abs(z)))):
        raise StructureViolation("squeeze matrix must be symmetric")
    U, sig, Wh = np.linalg.svd(z)
    n = z.shape[0]
    tol = max(sig[0], 1.0) * n * 1e-14
    k = int(np.sum(sig > tol))
    r = (U * sig) @ U.conj().T
    r = (r + r.conj().T) / 2
    K = U[:, :k] @ Wh[:k, :]
    if k < n:
        U0, W0 = U[:, k:], Wh[k:, :].conj().T
        a, _, bh = np.linalg.svd(U0.conj().T @ W0)
        K = K + U0 @ (a @ bh) @ W0.conj().T
    T, Zs = sla.schur(K, output="complex")
    ang = np.angle(np.diag(T))
    theta = (Zs * ang) @ Zs.conj().T
    theta = (theta + theta.conj().T) / 2
    res = float(np.max(np.abs(r @ sla.expm(1j * theta) - z)))
    if res > TAU_RECON * max(1.0, float(np.max(np.abs(z)))):
        raise NoConvergence("polar factors fail to reassemble z", residual=res)
    if return_flag:
        return r, theta, k < n
    return r, theta


def _eig2(S):
    tr = S[0, 0] + S[1, 1]
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    disc = np.sqrt(complex(tr * tr / 4 - det))
    return tr / 2 + disc, tr / 2 - disc, det


def sylvester_coefficients(lam):
    """d0, d1 with log S = -d0 I + d1 S for a unimodular 2x2 S with eigenvalue lam."""
    lg = np.log(complex(lam))
    d0 = (lam * lam + 1) / (lam * lam - 1) * lg
    d1 = 2 * lam / (lam * lam - 1) * lg
    return d0, d1


def sylvester_log_2x2(S):
    """Principal log of a 2x2 matrix by two-point Sylvester interpolation."""
    S = _check_finite(S)
    if S.shape != (2, 2):
        raise ValueError("sylvester_log_2x2 needs a 2x2 matrix")
    lp, lm, det = _eig2(S)
    scale = max(abs(lp), abs(lm))
    if abs(lp - lm) <= TAU_EIG * scale:
        raise DegenerateEigenvalues("coincident eigenvalues; interpolation undefined",
                                    eigenvalue=complex(lp))
    for lam in (lp, lm):
        if lam.real < 0 and abs(lam.imag) <= TAU_EIG * scale:
            raise BranchCut("eigenvalue on the negative real axis", eigenvalue=complex(lam))
    eye = np.eye(2, dtype=complex)
    if abs(det - 1) <= TAU_NUM:
        d0, d1 = sylvester_coefficients(lp)
        return -d0 * eye + d1 * S
    return (np.log(lp) * (S - lm * eye) - np.log(lm) * (S - lp * eye)) / (lp - lm)
