"""Displacement, rotation and squeeze builders, their closed forms and cascades."""
from dataclasses import dataclass

import numpy as np

from .core import (
    TAU_DEN,
    TAU_EIG,
    TAU_STRUCT,
    Displacement,
    HamiltonianRep,
    PsiMatrix,
    Rotation,
    Squeeze,
    SymplecticPair,
    as_matrix,
    as_vector,
    compose_pairs,
    omega,
)
from .engine import forward_transform
from .errors import (
    BranchCut,
    DegenerateEigenvalues,
    DimensionMismatch,
    NearDivergence,
    OutOfPeriod,
    Singular,
    StructureViolation,
)
from .linalg import funm_hermitian, polar_decompose_squeeze


def hamiltonian_of(params):
    """Hamiltonian pair generating a fundamental unitary.

    Displacement alpha -> h = i alpha; rotation phi -> A = -phi; squeeze z -> B = i z.
    """
    if isinstance(params, Displacement):
        n = params.n
        zero = np.zeros((n, n))
        return HamiltonianRep(zero, zero, 1j * params.alpha)
    if isinstance(params, Rotation):
        return HamiltonianRep(-params.phi, np.zeros_like(params.phi))
    if isinstance(params, Squeeze):
        return HamiltonianRep(np.zeros_like(params.z), 1j * params.z)
    raise TypeError(f"not a fundamental unitary: {type(params).__name__}")


def _rot_p(lam):
    # -(e^{i lam} - 1)/lam written so that lam = 0 is harmless
    return -1j * np.exp(0.5j * lam) * np.sinc(lam / (2 * np.pi))


def _check_period(phi):
    w = np.linalg.eigvalsh(phi)
    if np.any(w >= np.pi) or np.any(w < -np.pi):
        raise OutOfPeriod("rotation eigenvalues must lie in [-pi, pi)", eigenvalues=w.tolist())


def rotation_closed_form(phi, h=None):
    """S = diag(e^{i phi}, e^{-i phi^T}), P = -(e^{i phi} - I) phi^{-1}, Q = 0.

    P is evaluated on the spectrum of phi, where it is an entire function, so
    singular phi needs no separate treatment.
    """
    phi = Rotation(phi).phi
    _check_period(phi)
    n = phi.shape[0]
    E = funm_hermitian(phi, lambda w: np.exp(1j * w))
    P = funm_hermitian(phi, _rot_p)
    psi = PsiMatrix(P, np.zeros((n, n)), path="closed-form")
    pair = SymplecticPair(E, np.zeros((n, n)), psi.shift(as_vector(h, n, "h")))
    return pair, psi


def periodic_p0(phi):
    """Single-mode periodic variant P0 = -i(e^{i phi} - 1)/log(e^{i phi})."""
    wrapped = np.angle(np.exp(1j * np.asarray(phi, dtype=float)))
    return _rot_p(wrapped)


def _cosh_sinh(r):
    ch = funm_hermitian(r, np.cosh)
    sh = funm_hermitian(r, np.sinh)
    chm1 = funm_hermitian(r, lambda x: 2 * np.sinh(x / 2) ** 2)
    return ch, sh, chm1


def squeeze_closed_form(z, h=None):
    """S = [[cosh r, sinh r e^{i theta}], ...], P = sinh(r) e^{i theta}(-i z^-1), Q = (cosh r - I) i conj(z)^-1."""
    z = Squeeze(z).z
    n = z.shape[0]
    sv = np.linalg.svd(z, compute_uv=False)
    if sv[-1] <= 1e-12 * max(1.0, sv[0]):
        raise Singular("squeeze matrix is singular; use the engine's singular path")
    r, theta = polar_decompose_squeeze(z)
    ch, sh, chm1 = _cosh_sinh(r)
    U = funm_hermitian(theta, lambda w: np.exp(1j * w))
    F = sh @ U
    zinv = np.linalg.inv(z)
    P = F @ (-1j * zinv)
    Q = chm1 @ (1j * zinv.conj())
    psi = PsiMatrix(P, Q, path="closed-form")
    pair = SymplecticPair(ch, F, psi.shift(as_vector(h, n, "h")))
    return pair, psi


def general_symplectic(z, phi):
    """S of squeeze after rotation: E = cosh(r) e^{i phi}, F = sinh(r) e^{i theta} e^{-i phi^T}."""
    z = Squeeze(z).z
    phi = Rotation(phi).phi
    if z.shape != phi.shape:
        raise DimensionMismatch("z and phi differ in shape")
    r, theta = polar_decompose_squeeze(z)
    ch, sh, _ = _cosh_sinh(r)
    eph = funm_hermitian(phi, lambda w: np.exp(1j * w))
    eth = funm_hermitian(theta, lambda w: np.exp(1j * w))
    return SymplecticPair(ch @ eph, sh @ eth @ eph.conj())


def _shc(T):
    """sinh(T)/T, analytic at T = 0."""
    T = complex(T)
    if abs(T) < 1e-4:
        t2 = T * T
        return 1 + t2 / 6 + t2 * t2 / 120
    return np.sinh(T) / T


def _delta_log_form(E, F):
    c = E.real
    if abs(c + 1) <= TAU_DEN:
        raise NearDivergence("cos(phi) cosh(r) = -1: displacement diverges", c=float(c))
    delta = np.sqrt(complex(c * c - 1))
    lam = c + delta
    A = 2 * np.log(lam)
    ratio = 2 * delta / A if abs(A) > 1e-4 else _shc(0.5 * A)
    P = -1j * ratio * (1 + E) / (c + 1)
    Q = 1j * np.conj(ratio) * F / (c + 1)
    return complex(P), complex(Q)


def sylvester_pq(r, theta, phi):
    """Single-mode P, Q of rotation then squeeze, Delta/A form.

    Valid on cos(phi) cosh(r) > -1; below that the same expression is kept as
    an analytic continuation (no Hermitian Hamiltonian exists there).
    """
    E = np.cosh(r) * np.exp(1j * phi)
    F = np.sinh(r) * np.exp(1j * (theta - phi))
    return _delta_log_form(E, F)


def single_mode_sylvester(pair):
    """Single-mode inverse by Sylvester interpolation: (H, P, Q) from (S, s)."""
    if pair.n != 1:
        raise DimensionMismatch("single_mode_sylvester needs n = 1")
    E, F = complex(pair.E[0, 0]), complex(pair.F[0, 0])
    c = E.real
    if abs(abs(c) - 1) <= TAU_EIG * max(1.0, abs(E)):
        raise DegenerateEigenvalues("|Re(E)| = 1: eigenvalues of S coincide", c=c)
    if c < -1:
        raise BranchCut("S has negative real eigenvalues; no principal Hamiltonian", c=c)
    delta = np.sqrt(complex(c * c - 1))
    lam = c + delta
    lg = np.log(lam)
    d0 = (lam * lam + 1) / (lam * lam - 1) * lg
    d1 = 2 * lam / (lam * lam - 1) * lg
    H = 1j * omega(1) @ (-d0 * np.eye(2) + d1 * pair.S)
    dev = max(abs(H[0, 0].imag), abs(H[1, 1] - H[0, 0].conj()), abs(H[1, 0] - H[0, 1].conj()))
    if dev > TAU_STRUCT * 1e3 * max(1.0, float(np.max(np.abs(H)))):
        raise StructureViolation("interpolated H is not structured", residual=float(dev))
    P, Q = _delta_log_form(E, F)
    s = complex(pair.s[0])
    Psi = np.array([[P, Q], [np.conj(Q), np.conj(P)]])
    h = np.linalg.solve(Psi, np.array([s, np.conj(s)]))[0]
    ham = HamiltonianRep([[H[0, 0].real]], [[H[0, 1]]], [h])
    return ham, P, Q


def single_mode_arccosh_form(r, theta, phi):
    """Single-mode P, Q from the T = arccosh(cos(phi) cosh(r)) parametrization.

    Returns (P, Q, T).  At cos(phi) cosh(r) = 1 both the numerator and the
    denominator vanish and the T -> 0 limit is taken instead; at
    cos(phi) cosh(r) = -1 the displacement diverges.
    """
    c = np.cos(phi) * np.cosh(r)
    if c >= 1:
        T = complex(np.arccosh(c))
    else:
        T = 1j * np.arccos(complex(c))
    Eph = np.exp(1j * phi)
    ch, sh = np.cosh(r), np.sinh(r)
    coshT = np.cosh(T)
    den = sh ** 2 + (coshT - Eph * ch) ** 2
    if abs(den) < TAU_DEN:
        if abs(c - 1) > abs(c + 1):
            raise NearDivergence("arccosh-form denominator vanishes", c=float(c), phi=float(phi))
        g = _shc(T) / (1 + c)
        P = -1j * g * (1 + Eph * ch)
        Q = 1j * g * np.exp(-1j * (phi - theta)) * sh
        return complex(P), complex(Q), T
    num = -Eph * ch * (coshT + 1) + Eph ** 2 * ch ** 2 + sh ** 2 + coshT
    shcT = _shc(T)
    P = -1j * shcT * num / den
    Q = 1j * np.exp(-1j * (phi - theta)) * sh * shcT * (coshT - 1) / den
    return complex(P), complex(Q), T


def bs_cs_eigenvalues(beta, r):
    """Eigenvalues mu_1, mu_2 (each double) of the beam-splitter + two-mode squeeze S."""
    root = np.sqrt(complex(2 * np.cos(beta) ** 2 * np.cosh(2 * r) + np.cos(2 * beta) - 3))
    base = np.cos(beta) * np.cosh(r)
    return base - root / 2, base + root / 2


def double_eigen_log_coefficients(mu1, mu2):
    """d_0..d_3 with log S = sum d_m S^m when S has two double eigenvalues."""
    l1, l2 = np.log(mu1), np.log(mu2)
    D = (mu1 - mu2) ** 3
    d0 = (-(mu1 - mu2) * (mu1 ** 2 + mu2 ** 2) + (mu1 - 3 * mu2) * mu1 ** 2 * l2
          + (3 * mu1 - mu2) * mu2 ** 2 * l1) / D
    d1 = ((mu1 - mu2) * (mu1 + mu2) * (mu1 ** 2 + mu2 * mu1 + mu2 ** 2)
          + 6 * mu1 ** 2 * mu2 ** 2 * (l2 - l1)) / (mu1 * D * mu2)
    d2 = (-2 * mu1 ** 3 + 2 * mu2 ** 3 + 3 * mu2 * (mu1 + mu2) * mu1 * (l1 - l2)) / (mu1 * D * mu2)
    d3 = (mu1 ** 2 - mu2 ** 2 + 2 * mu2 * mu1 * (l2 - l1)) / (mu1 * D * mu2)
    return np.array([d0, d1, d2, d3])


def hermite_coefficients(f, fprime, mu1, mu2):
    """Cubic p with p = f and p' = f' at mu1 and mu2 (monomial coefficients)."""
    V = np.array([
        [1, mu1, mu1 ** 2, mu1 ** 3],
        [0, 1, 2 * mu1, 3 * mu1 ** 2],
        [1, mu2, mu2 ** 2, mu2 ** 3],
        [0, 1, 2 * mu2, 3 * mu2 ** 2],
    ], dtype=complex)
    rhs = np.array([f(mu1), fprime(mu1), f(mu2), fprime(mu2)], dtype=complex)
    return np.linalg.solve(V, rhs)


def _phi_psi(x):
    return (x - 1) / np.log(x)


def _phi_psi_prime(x):
    lg = np.log(x)
    return (lg - (x - 1) / x) / lg ** 2


def beam_splitter_phi(beta):
    return np.array([[0, -1j * beta], [1j * beta, 0]])


def caves_schumaker_z(r, theta):
    w = r * np.exp(1j * theta)
    return np.array([[0, w], [w, 0]])


def two_mode_bs_cs(beta, r, theta, h=None):
    """Beam splitter followed by a two-mode squeezer, inverted in closed form.

    Returns (pair, ham, P, Q).  H = i Omega sum_m d_m S^m and
    Psi = sum_m e_m S^m (-i Omega), where both cubics interpolate log and
    (x - 1)/log x with derivatives at the two double eigenvalues of S.
    """
    ch, sh = np.cosh(r), np.sinh(r)
    cb, sb = np.cos(beta), np.sin(beta)
    eth = np.exp(1j * theta)
    Eb = np.array([[cb, sb], [-sb, cb]], dtype=complex)
    Ec = ch * np.eye(2, dtype=complex)
    Fc = sh * eth * np.array([[0, 1], [1, 0]], dtype=complex)
    Sb = SymplecticPair(Eb, np.zeros((2, 2)))
    Sc = SymplecticPair(Ec, Fc)
    S = compose_pairs(Sb, Sc)
    mu1, mu2 = bs_cs_eigenvalues(beta, r)
    if abs(mu1 - mu2) <= TAU_EIG * max(abs(mu1), abs(mu2)):
        raise DegenerateEigenvalues("mu_1 = mu_2", mu=complex(mu1))
    for mu in (mu1, mu2):
        if mu.real < 0 and abs(mu.imag) <= TAU_EIG * abs(mu):
            raise BranchCut("eigenvalue of S on the negative real axis", mu=complex(mu))
    Sf = S.S
    powers = [np.eye(4, dtype=complex), Sf, Sf @ Sf, Sf @ Sf @ Sf]
    d = double_eigen_log_coefficients(mu1, mu2)
    logS = sum(dm * Pm for dm, Pm in zip(d, powers))
    H = 1j * omega(2) @ logS
    H = (H + H.conj().T) / 2
    ham = HamiltonianRep(H[:2, :2], (H[:2, 2:] + H[:2, 2:].T) / 2)
    e = hermite_coefficients(_phi_psi, _phi_psi_prime, mu1, mu2)
    Psi = sum(em * Pm for em, Pm in zip(e, powers)) @ (-1j * omega(2))
    P, Q = Psi[:2, :2], Psi[:2, 2:]
    if h is not None:
        h = as_vector(h, 2, "h")
        S = SymplecticPair(S.E, S.F, P @ h + Q @ h.conj())
        ham = ham.with_h(h)
    return S, ham, P, Q


@dataclass(frozen=True)
class CascadeSpec:
    """Fundamental unitaries in the order they act: steps[0] first."""
    steps: tuple

    def __post_init__(self):
        steps = tuple(self.steps)
        if not steps:
            raise ValueError("empty cascade")
        ns = {s.n for s in steps}
        if len(ns) != 1:
            raise DimensionMismatch(f"cascade mixes mode counts {sorted(ns)}")
        object.__setattr__(self, "steps", steps)

    @property
    def n(self):
        return self.steps[0].n

    def hamiltonians(self):
        return [hamiltonian_of(p) for p in self.steps]


def compose(cascade):
    """Affine pair of a cascade: [U_a, U_b] gives S = S_b S_a, s = S_b s_a + s_b."""
    if not isinstance(cascade, CascadeSpec):
        cascade = CascadeSpec(tuple(cascade))
    pair = None
    for ham in cascade.hamiltonians():
        step, _ = forward_transform(ham)
        pair = step if pair is None else compose_pairs(pair, step)
    return pair
