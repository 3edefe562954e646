"""Structured block types shared by every representation.

All block matrices here have the pattern [[X, Y], [conj(Y), conj(X)]] and all
vectors the pattern [x; conj(x)].  Only the upper blocks are stored, so the
conjugate structure holds by construction.
"""
from dataclasses import dataclass, field, InitVar
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, NonFinite, StructureViolation

TAU_STRUCT = 1e-10
TAU_SYMP = 1e-9
TAU_RECON = 1e-9
TAU_NUM = 1e-9
TAU_EIG = 1e-8
KAPPA_MAX = 1e10
TAU_DEN = 1e-8


def _frozen(x):
    x.setflags(write=False)
    return x


def as_matrix(x, name="matrix"):
    """Coerce scalars and nested lists to a read-only square complex matrix."""
    m = np.array(x, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite(f"{name} has non-finite entries")
    return _frozen(m)


def as_vector(x, n, name="vector"):
    if x is None:
        return _frozen(np.zeros(n, dtype=complex))
    v = np.array(x, dtype=complex)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.shape != (n,):
        raise DimensionMismatch(f"{name} must have shape ({n},), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFinite(f"{name} has non-finite entries")
    return _frozen(v)


def _scale(*arrays):
    s = max(float(np.max(np.abs(a))) if a.size else 0.0 for a in arrays)
    return s if s > 0 else 1.0


def omega(n):
    """Complex symplectic form diag(I, -I)."""
    return np.diag(np.r_[np.ones(n), -np.ones(n)]).astype(complex)


def omega0(n):
    """Real symplectic form [[0, I], [-I, 0]]."""
    eye = np.eye(n)
    z = np.zeros((n, n))
    return np.block([[z, eye], [-eye, z]])


def block_matrix(X, Y):
    return np.block([[X, Y], [Y.conj(), X.conj()]])


def block_vector(x):
    return np.concatenate([x, x.conj()])


@dataclass(frozen=True)
class HamiltonianRep:
    """Quadratic Hamiltonian: full H = [[A, B], [conj(B), conj(A)]], linear term [h; conj(h)]."""
    A: np.ndarray
    B: np.ndarray
    h: np.ndarray = None

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        if A.shape != B.shape:
            raise DimensionMismatch(f"A {A.shape} and B {B.shape} differ in shape")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "h", as_vector(self.h, A.shape[0], "h"))
        tol = TAU_STRUCT * _scale(A, B)
        herm = float(np.max(np.abs(A - A.conj().T)))
        sym = float(np.max(np.abs(B - B.T)))
        if herm > tol:
            raise StructureViolation("A is not Hermitian", residual=herm)
        if sym > tol:
            raise StructureViolation("B is not symmetric", residual=sym)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def H(self):
        return block_matrix(self.A, self.B)

    @property
    def hvec(self):
        return block_vector(self.h)

    def with_h(self, h):
        return HamiltonianRep(self.A, self.B, h)


@dataclass(frozen=True)
class SymplecticPair:
    """Affine map xi -> S xi + s with S = [[E, F], [conj(F), conj(E)]]."""
    E: np.ndarray
    F: np.ndarray
    s: np.ndarray = None
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        E = as_matrix(self.E, "E")
        F = as_matrix(self.F, "F")
        if E.shape != F.shape:
            raise DimensionMismatch(f"E {E.shape} and F {F.shape} differ in shape")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "s", as_vector(self.s, E.shape[0], "s"))
        if validate:
            res = self.symplectic_residual()
            if res > TAU_SYMP:
                raise StructureViolation("S violates S Omega S^dagger = Omega", residual=res)

    @property
    def n(self):
        return self.E.shape[0]

    @property
    def S(self):
        return block_matrix(self.E, self.F)

    @property
    def svec(self):
        return block_vector(self.s)

    def symplectic_residual(self):
        S = self.S
        Om = omega(self.n)
        return float(np.max(np.abs(S @ Om @ S.conj().T - Om)))

    def apply(self, xi):
        """Image of a full 2n vector under the affine map."""
        return self.S @ np.asarray(xi, dtype=complex) + self.svec


@dataclass(frozen=True)
class RealSymplecticPair:
    """Affine map in quadrature ordering [q_1..q_n, p_1..p_n]."""
    S0: np.ndarray
    s0: np.ndarray = None
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        S0 = np.array(self.S0, dtype=float)
        if S0.ndim != 2 or S0.shape[0] != S0.shape[1] or S0.shape[0] % 2:
            raise DimensionMismatch(f"S0 must be 2n x 2n, got {S0.shape}")
        if not np.all(np.isfinite(S0)):
            raise NonFinite("S0 has non-finite entries")
        s0 = np.zeros(S0.shape[0]) if self.s0 is None else np.array(self.s0, dtype=float)
        if s0.shape != (S0.shape[0],):
            raise DimensionMismatch(f"s0 must have shape ({S0.shape[0]},), got {s0.shape}")
        object.__setattr__(self, "S0", _frozen(S0))
        object.__setattr__(self, "s0", _frozen(s0))
        if validate:
            res = self.symplectic_residual()
            if res > TAU_SYMP:
                raise StructureViolation("S0 violates S0 Omega0 S0^T = Omega0", residual=res)

    @property
    def n(self):
        return self.S0.shape[0] // 2

    def symplectic_residual(self):
        J = omega0(self.n)
        return float(np.max(np.abs(self.S0 @ J @ self.S0.T - J)))


@dataclass(frozen=True)
class PsiMatrix:
    """Psi = [[P, Q], [conj(Q), conj(P)]]; `path` records how it was computed."""
    P: np.ndarray
    Q: np.ndarray
    path: str = ""

    def __post_init__(self):
        P = as_matrix(self.P, "P")
        Q = as_matrix(self.Q, "Q")
        if P.shape != Q.shape:
            raise DimensionMismatch("P and Q differ in shape")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def n(self):
        return self.P.shape[0]

    @property
    def Psi(self):
        return block_matrix(self.P, self.Q)

    def shift(self, h):
        """Upper half of Psi [h; conj(h)], i.e. P h + Q conj(h)."""
        h = as_vector(h, self.n, "h")
        return self.P @ h + self.Q @ h.conj()


@dataclass(frozen=True)
class Displacement:
    alpha: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=complex)
        object.__setattr__(self, "alpha", as_vector(a, a.size, "alpha"))

    @property
    def n(self):
        return self.alpha.shape[0]


@dataclass(frozen=True)
class Rotation:
    phi: np.ndarray

    def __post_init__(self):
        phi = as_matrix(self.phi, "phi")
        res = float(np.max(np.abs(phi - phi.conj().T)))
        if res > TAU_STRUCT * _scale(phi):
            raise StructureViolation("phi is not Hermitian", residual=res)
        object.__setattr__(self, "phi", phi)

    @property
    def n(self):
        return self.phi.shape[0]


@dataclass(frozen=True)
class Squeeze:
    """Squeeze matrix z = r e^{i theta}; the polar factors are computed lazily."""
    z: np.ndarray

    def __post_init__(self):
        z = as_matrix(self.z, "z")
        res = float(np.max(np.abs(z - z.T)))
        if res > TAU_STRUCT * _scale(z):
            raise StructureViolation("z is not symmetric", residual=res)
        object.__setattr__(self, "z", z)

    @property
    def n(self):
        return self.z.shape[0]

    @cached_property
    def _polar(self):
        from .linalg import polar_decompose_squeeze
        return polar_decompose_squeeze(self.z)

    @property
    def r(self):
        return self._polar[0]

    @property
    def theta(self):
        return self._polar[1]

    @classmethod
    def polar(cls, r, theta):
        """Single-mode (or commuting) construction z = r e^{i theta} from scalars or matrices."""
        from scipy.linalg import expm
        r = np.atleast_2d(np.asarray(r, dtype=complex))
        theta = np.atleast_2d(np.asarray(theta, dtype=complex))
        return cls(r @ expm(1j * theta))


def assemble_full(rep):
    """Dense 2n x 2n matrix and 2n vector of a structured representation."""
    if isinstance(rep, HamiltonianRep):
        return rep.H, rep.hvec
    if isinstance(rep, SymplecticPair):
        return rep.S, rep.svec
    if isinstance(rep, PsiMatrix):
        return rep.Psi, None
    raise TypeError(f"cannot assemble {type(rep).__name__}")


def split_blocks(M, v=None, kind="symplectic", validate=True):
    """Inverse of assemble_full: check the conjugate block pattern and keep upper blocks."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch(f"expected a 2n x 2n matrix, got shape {M.shape}")
    n = M.shape[0] // 2
    X, Y = M[:n, :n], M[:n, n:]
    tol = TAU_STRUCT * _scale(M)
    res = max(np.max(np.abs(M[n:, :n] - Y.conj())), np.max(np.abs(M[n:, n:] - X.conj())))
    if res > tol:
        raise StructureViolation("lower blocks are not conjugates of upper blocks", residual=float(res))
    x = None
    if v is not None:
        v = np.asarray(v, dtype=complex)
        if v.shape != (2 * n,):
            raise DimensionMismatch(f"vector must have shape ({2 * n},), got {v.shape}")
        vres = np.max(np.abs(v[n:] - v[:n].conj())) if n else 0.0
        if vres > TAU_STRUCT * _scale(v):
            raise StructureViolation("vector halves are not conjugate", residual=float(vres))
        x = v[:n]
    if kind == "symplectic":
        return SymplecticPair(X, Y, x, validate=validate)
    if kind == "hamiltonian":
        return HamiltonianRep(X, Y, x)
    if kind == "psi":
        return PsiMatrix(X, Y)
    raise ValueError(f"unknown kind {kind!r}")


def compose_pairs(first, second):
    """Apply `first`, then `second`: S = S2 S1, s = S2 s1 + s2."""
    if first.n != second.n:
        raise DimensionMismatch(f"mode counts differ: {first.n} vs {second.n}")
    E1, F1, E2, F2 = first.E, first.F, second.E, second.F
    E = E2 @ E1 + F2 @ F1.conj()
    F = E2 @ F1 + F2 @ E1.conj()
    s = E2 @ first.s + F2 @ first.s.conj() + second.s
    return SymplecticPair(E, F, s, validate=False)
