"""Gaussian unitaries as (H, h) <-> (S, s) maps, with fundamental closed forms and a Fock oracle."""
from .core import (
    Displacement,
    HamiltonianRep,
    PsiMatrix,
    RealSymplecticPair,
    Rotation,
    Squeeze,
    SymplecticPair,
    compose_pairs,
    omega,
    omega0,
    split_blocks,
)
from .engine import compute_psi, forward_transform, inverse_hamiltonian, psi_series_oracle
from .errors import SympleqError
from .fundamental import CascadeSpec, compose, hamiltonian_of
from .phase_space import to_complex, to_real

__all__ = [
    "CascadeSpec", "Displacement", "HamiltonianRep", "PsiMatrix", "RealSymplecticPair",
    "Rotation", "Squeeze", "SympleqError", "SymplecticPair", "compose", "compose_pairs",
    "compute_psi", "forward_transform", "hamiltonian_of", "inverse_hamiltonian", "omega",
    "omega0", "psi_series_oracle", "split_blocks", "to_complex", "to_real",
]
__version__ = "0.1.0"
