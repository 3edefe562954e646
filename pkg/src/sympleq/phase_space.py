"""Complex (a, a^dagger) <-> real quadrature (q, p) representations."""
from dataclasses import dataclass

import numpy as np

from .core import TAU_STRUCT, RealSymplecticPair, SymplecticPair, split_blocks
from .errors import StructureViolation


@dataclass(frozen=True)
class QuadratureMap:
    """xi0 = L xi with q = (a + a^dagger)/sqrt 2, p = -i(a - a^dagger)/sqrt 2."""
    n: int

    @property
    def L(self):
        eye = np.eye(self.n)
        return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2)


def _drop_imag(M, what):
    scale = max(1.0, float(np.max(np.abs(M))))
    res = float(np.max(np.abs(M.imag)))
    if res > TAU_STRUCT * scale:
        raise StructureViolation(f"{what} has an imaginary residue", residual=res)
    return M.real


def to_real(pair):
    """S0 = L S L^dagger and s0 = L s."""
    L = QuadratureMap(pair.n).L
    S0 = _drop_imag(L @ pair.S @ L.conj().T, "L S L^dagger")
    s0 = _drop_imag(L @ pair.svec, "L s")
    return RealSymplecticPair(S0, s0)


def real_blocks(pair):
    """Closed form [[Re(E+F), -Im(E-F)], [Im(E+F), Re(E-F)]]."""
    E, F = pair.E, pair.F
    return np.block([[(E + F).real, -(E - F).imag], [(E + F).imag, (E - F).real]])


def to_complex(real_pair, validate=True):
    """S = L^dagger S0 L and s = L^dagger s0."""
    L = QuadratureMap(real_pair.n).L
    S = L.conj().T @ real_pair.S0 @ L
    s = L.conj().T @ real_pair.s0
    return split_blocks(S, s, kind="symplectic", validate=validate)


def compose_real(first, second):
    """Same convention as core.compose_pairs: apply first, then second."""
    return RealSymplecticPair(second.S0 @ first.S0, second.S0 @ first.s0 + second.s0,
                              validate=False)
