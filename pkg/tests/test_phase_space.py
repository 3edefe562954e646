import numpy as np
import pytest
from hypothesis import given, settings

from helpers import hamiltonians
from sympleq.core import RealSymplecticPair, Rotation, Squeeze, SymplecticPair, compose_pairs, omega0
from sympleq.engine import forward_transform
from sympleq.errors import StructureViolation
from sympleq.fundamental import hamiltonian_of
from sympleq.phase_space import QuadratureMap, compose_real, real_blocks, to_complex, to_real


def test_quadrature_map_is_unitary():
    L = QuadratureMap(3).L
    assert np.allclose(L @ L.conj().T, np.eye(6))


@given(hamiltonians(n_max=3))
@settings(max_examples=40, deadline=None)
def test_bridge_properties(ham):
    pair, _ = forward_transform(ham)
    rp = to_real(pair)
    assert np.max(np.abs(rp.S0 - real_blocks(pair))) < 1e-12
    assert rp.symplectic_residual() < 1e-9
    back = to_complex(rp)
    assert np.max(np.abs(back.S - pair.S)) < 1e-12
    assert np.max(np.abs(back.s - pair.s)) < 1e-12


def test_rotation_is_phase_space_rotation():
    rp = to_real(forward_transform(hamiltonian_of(Rotation([[0.3]])))[0])
    c, s = np.cos(0.3), np.sin(0.3)
    # a -> e^{i phi} a  rotates (q, p) by phi
    assert np.allclose(rp.S0, [[c, -s], [s, c]])


def test_squeeze_is_diagonal_for_real_z():
    rp = to_real(forward_transform(hamiltonian_of(Squeeze([[0.5]])))[0])
    assert np.allclose(rp.S0, np.diag([np.exp(0.5), np.exp(-0.5)]))


def test_shift_is_real_quadratures():
    pair = SymplecticPair([[1]], [[0]], [1 + 2j])
    rp = to_real(pair)
    assert np.allclose(rp.s0, np.sqrt(2) * np.array([1, 2]))


def test_real_composition_commutes_with_bridge(rng):
    p1, _ = forward_transform(hamiltonian_of(Squeeze([[0.3 + 0.2j]])).with_h([1j]))
    p2, _ = forward_transform(hamiltonian_of(Rotation([[0.7]])).with_h([0.5]))
    left = to_real(compose_pairs(p1, p2))
    right = compose_real(to_real(p1), to_real(p2))
    assert np.allclose(left.S0, right.S0) and np.allclose(left.s0, right.s0)
    J = omega0(1)
    assert np.allclose(right.S0 @ J @ right.S0.T, J)


def test_to_complex_rejects_non_symplectic():
    with pytest.raises(StructureViolation):
        to_complex(RealSymplecticPair(np.diag([2.0, 1.0]), validate=False))
