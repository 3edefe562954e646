"""Random structured inputs shared by the test modules."""
import numpy as np
from hypothesis import strategies as st

from sympleq.core import HamiltonianRep, omega


def herm(rng, n, scale=1.0):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (X + X.conj().T) / 2


def sym(rng, n, scale=1.0):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (X + X.T) / 2


def cvec(rng, n, scale=1.0):
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n))


def _drop_eigen(H, n, count):
    """Zero the `count` smallest eigenvalues of a structured H, keeping the block pattern.

    Each eigenspace is invariant under v -> J conj(v), so it holds a vector u with
    J conj(u) = u, and u u^dagger has the block pattern.
    """
    w, V = np.linalg.eigh(H)
    J = np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    for k in np.argsort(np.abs(w))[:count]:
        v = V[:, k]
        u = v + J @ v.conj()
        if np.linalg.norm(u) < 1e-6:
            u = 1j * v + J @ (1j * v).conj()
        u = u / np.linalg.norm(u)
        H = H - w[k] * np.outer(u, u.conj())
    return (H + H.conj().T) / 2


def random_ham(rng, n, scale=0.6, drop=0, with_h=True):
    """Random HamiltonianRep; `drop` eigenvalues of H are zeroed (rank-deficient H)."""
    A, B = herm(rng, n, scale), sym(rng, n, scale)
    h = cvec(rng, n) if with_h else None
    if drop:
        H = _drop_eigen(np.block([[A, B], [B.conj(), A.conj()]]), n, drop)
        A, B = H[:n, :n], (H[:n, n:] + H[:n, n:].T) / 2
    return HamiltonianRep(A, B, h)


def in_branch(ham, margin=0.2):
    lam = np.linalg.eigvals(-1j * omega(ham.n) @ ham.H)
    return bool(np.all(np.abs(lam.imag) < np.pi - margin))


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@st.composite
def hamiltonians(draw, n_max=3, singular=True, scale=0.6):
    rng = np.random.default_rng(draw(seeds))
    n = draw(st.integers(1, n_max))
    drop = draw(st.integers(0, 1)) if singular else 0
    return random_ham(rng, n, scale=scale, drop=drop)


@st.composite
def branch_hamiltonians(draw, n_max=3):
    ham = draw(hamiltonians(n_max=n_max, singular=False))
    lam = np.linalg.eigvals(-1j * omega(ham.n) @ ham.H)
    peak = float(np.max(np.abs(lam))) if lam.size else 0.0
    if peak > np.pi - 0.3:
        f = (np.pi - 0.3) / peak
        ham = HamiltonianRep(ham.A * f, ham.B * f, ham.h)
    return ham
