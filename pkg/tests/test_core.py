import numpy as np
import pytest
from hypothesis import given, settings

from helpers import cvec, hamiltonians, herm, sym
from sympleq.core import (
    Displacement,
    HamiltonianRep,
    PsiMatrix,
    RealSymplecticPair,
    Rotation,
    Squeeze,
    SymplecticPair,
    assemble_full,
    compose_pairs,
    omega,
    omega0,
    split_blocks,
)
from sympleq.engine import forward_transform
from sympleq.errors import DimensionMismatch, NonFinite, SchemaError, StructureViolation


def test_omega_forms():
    assert np.array_equal(omega(2), np.diag([1, 1, -1, -1]))
    J = omega0(2)
    assert np.array_equal(J @ J, -np.eye(4))


def test_hamiltonian_blocks(rng):
    A, B, h = herm(rng, 2), sym(rng, 2), cvec(rng, 2)
    ham = HamiltonianRep(A, B, h)
    H = ham.H
    assert np.allclose(H, H.conj().T)
    assert np.allclose(H[2:, 2:], A.conj()) and np.allclose(H[2:, :2], B.conj())
    assert np.allclose(ham.hvec, np.r_[h, h.conj()])


def test_hamiltonian_rejects_bad_input():
    with pytest.raises(StructureViolation):
        HamiltonianRep([[0, 1], [2, 0]], np.zeros((2, 2)))
    with pytest.raises(StructureViolation):
        HamiltonianRep(np.zeros((2, 2)), [[0, 1], [2, 0]])
    with pytest.raises(DimensionMismatch):
        HamiltonianRep(np.zeros((2, 2)), np.zeros((3, 3)))
    with pytest.raises(DimensionMismatch):
        HamiltonianRep([[1]], [[0]], [1, 2])
    with pytest.raises(NonFinite):
        HamiltonianRep([[np.nan]], [[0]])
    # shape problems are schema errors for the CLI
    assert issubclass(DimensionMismatch, SchemaError)


def test_representations_are_frozen(rng):
    ham = HamiltonianRep(herm(rng, 1), sym(rng, 1))
    with pytest.raises(ValueError):
        ham.A[0, 0] = 3
    with pytest.raises(AttributeError):
        ham.A = np.eye(1)


def test_symplectic_pair_validation():
    SymplecticPair([[np.cosh(1)]], [[np.sinh(1)]])
    with pytest.raises(StructureViolation):
        SymplecticPair([[1.001]], [[0]])
    bad = SymplecticPair([[1.001]], [[0]], validate=False)
    assert bad.symplectic_residual() > 1e-3


def test_real_pair_validation():
    RealSymplecticPair(np.eye(2))
    with pytest.raises(StructureViolation):
        RealSymplecticPair(np.diag([2.0, 1.0]))
    with pytest.raises(DimensionMismatch):
        RealSymplecticPair(np.eye(3))


def test_fundamental_parameter_checks():
    with pytest.raises(StructureViolation):
        Rotation([[0, 1], [0, 0]])
    with pytest.raises(StructureViolation):
        Squeeze([[0, 1], [0, 0]])
    assert Displacement([1, 2j]).n == 2
    sq = Squeeze.polar(0.7, 1.2)
    assert np.isclose(sq.z[0, 0], 0.7 * np.exp(1.2j))
    assert np.isclose(sq.r[0, 0], 0.7) and np.isclose(sq.theta[0, 0], 1.2)


def test_psi_shift(rng):
    P, Q, h = herm(rng, 2), sym(rng, 2), cvec(rng, 2)
    psi = PsiMatrix(P, Q)
    full = psi.Psi @ np.r_[h, h.conj()]
    assert np.allclose(psi.shift(h), full[:2])
    assert np.allclose(full[2:], full[:2].conj())


@given(hamiltonians())
@settings(max_examples=40, deadline=None)
def test_split_inverts_assemble(ham):
    H, hv = assemble_full(ham)
    back = split_blocks(H, hv, kind="hamiltonian")
    assert np.allclose(back.A, ham.A) and np.allclose(back.B, ham.B) and np.allclose(back.h, ham.h)
    pair, psi = forward_transform(ham)
    S, sv = assemble_full(pair)
    again = split_blocks(S, sv)
    assert np.allclose(again.S, pair.S) and np.allclose(again.s, pair.s)
    assert np.allclose(split_blocks(psi.Psi, kind="psi").Psi, psi.Psi)


def test_split_rejects_broken_pattern(rng):
    M = np.eye(4, dtype=complex)
    M[2, 2] = 2
    with pytest.raises(StructureViolation):
        split_blocks(M, validate=False)
    with pytest.raises(StructureViolation):
        split_blocks(np.eye(2), [1, 1j])
    with pytest.raises(DimensionMismatch):
        split_blocks(np.eye(3))


@given(hamiltonians(n_max=2, singular=False), hamiltonians(n_max=2, singular=False))
@settings(max_examples=30, deadline=None)
def test_composition_is_affine_and_symplectic(h1, h2):
    if h1.n != h2.n:
        return
    p1, _ = forward_transform(h1)
    p2, _ = forward_transform(h2)
    p = compose_pairs(p1, p2)
    assert p.symplectic_residual() < 1e-9
    xi = np.r_[np.arange(1, h1.n + 1), np.arange(1, h1.n + 1)].astype(complex)
    assert np.allclose(p.apply(xi), p2.apply(p1.apply(xi)))


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        compose_pairs(SymplecticPair([[1]], [[0]]), SymplecticPair(np.eye(2), np.zeros((2, 2))))
