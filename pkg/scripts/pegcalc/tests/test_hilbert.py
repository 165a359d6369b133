"""
Tests for tensor products, partial traces and slot permutations.

Run with: pytest scripts/pegcalc/tests/test_hilbert.py -v
"""

import numpy as np
import pytest

from pegcalc.errors import (
    DimensionMismatchError,
    InvalidRankError,
    NonFiniteMatrixError,
    SlotOutOfRangeError,
    UnequalSlotDimsError,
)
from pegcalc.hilbert import (
    SubsystemDims,
    as_complex_matrix,
    is_density,
    is_hermitian,
    is_projector,
    is_unitary,
    partial_trace,
    permutation_operator,
    random_density,
    random_hermitian,
    random_projector,
    random_resolution,
    random_unitary,
    tensor,
    tensor_all,
)


def _ket(vector):
    return np.asarray(vector, dtype=np.complex128)


class TestSubsystemDims:
    """Test the slot factorization."""

    def test_total_and_slots(self):
        dims = SubsystemDims((2, 3, 2))
        assert dims.total == 12
        assert dims.n_slots == 3
        assert not dims.is_uniform

    def test_uniform(self):
        dims = SubsystemDims.uniform(3, 2)
        assert dims.dims == (3, 3)
        assert dims.is_uniform

    def test_without_and_appended(self):
        dims = SubsystemDims((2, 3))
        assert dims.without(0).dims == (3,)
        assert dims.appended(4).dims == (2, 3, 4)

    def test_rejects_non_positive(self):
        with pytest.raises(DimensionMismatchError):
            SubsystemDims((2, 0))


class TestCoercion:
    """Test matrix coercion errors."""

    def test_non_square(self):
        with pytest.raises(DimensionMismatchError):
            as_complex_matrix(np.zeros((2, 3)))

    def test_non_finite(self):
        with pytest.raises(NonFiniteMatrixError):
            as_complex_matrix([[np.nan, 0], [0, 1]])

    def test_dtype(self):
        assert as_complex_matrix([[1, 0], [0, 1]]).dtype == np.complex128


class TestTensor:
    """Test Kronecker products."""

    def test_empty_product_is_scalar_one(self):
        assert np.array_equal(tensor_all([]), np.eye(1))

    def test_matches_kron(self, rng):
        a, b, c = (random_hermitian(2, rng) for _ in range(3))
        assert np.allclose(tensor_all([a, b, c]), np.kron(np.kron(a, b), c))
        assert np.allclose(tensor(a, b), np.kron(a, b))

    def test_mixed_product(self, rng):
        a, b, c, d = (random_hermitian(2, rng) for _ in range(4))
        assert np.allclose(tensor(a, b) @ tensor(c, d), tensor(a @ c, b @ d))


class TestPartialTrace:
    """Test tracing out one slot."""

    def test_product_operator(self, rng):
        a = random_hermitian(2, rng)
        b = random_hermitian(3, rng)
        dims = SubsystemDims((2, 3))
        assert np.allclose(partial_trace(tensor(a, b), dims, 1), a * np.trace(b))
        assert np.allclose(partial_trace(tensor(a, b), dims, 0), b * np.trace(a))

    def test_middle_slot(self, rng):
        a, b, c = (random_hermitian(2, rng) for _ in range(3))
        dims = SubsystemDims.uniform(2, 3)
        reduced = partial_trace(tensor_all([a, b, c]), dims, 1)
        assert np.allclose(reduced, np.trace(b) * tensor(a, c))

    def test_preserves_trace(self, rng):
        m = random_hermitian(8, rng)
        reduced = partial_trace(m, SubsystemDims.uniform(2, 3), 2)
        assert reduced.shape == (4, 4)
        assert np.isclose(np.trace(reduced), np.trace(m))

    def test_last_slot_gives_scalar(self, rng):
        m = random_hermitian(3, rng)
        assert partial_trace(m, SubsystemDims((3,)), 0).shape == (1, 1)

    def test_slot_out_of_range(self):
        with pytest.raises(SlotOutOfRangeError):
            partial_trace(np.eye(4), SubsystemDims((2, 2)), 2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            partial_trace(np.eye(4), SubsystemDims((2, 3)), 0)


class TestPermutationOperator:
    """Test slot permutations, M and S."""

    def test_shift_moves_first_slot_last(self):
        e = np.eye(3)
        v1, v2, v3 = _ket(e[0]), _ket(e[1]), _ket(e[2])
        dims = SubsystemDims.uniform(3, 3)
        shift = permutation_operator(dims, [1, 2, 0])
        product = np.kron(np.kron(v1, v2), v3)
        assert np.allclose(shift @ product, np.kron(np.kron(v2, v3), v1))

    def test_reversal_is_involution(self):
        dims = SubsystemDims.uniform(2, 3)
        m = permutation_operator(dims, [2, 1, 0])
        assert np.allclose(m @ m, np.eye(8))
        assert is_unitary(m)

    def test_identity_permutation(self):
        assert np.array_equal(permutation_operator(SubsystemDims.uniform(2, 2), [0, 1]), np.eye(4))

    def test_unequal_dims(self):
        with pytest.raises(UnequalSlotDimsError):
            permutation_operator(SubsystemDims((2, 3)), [1, 0])

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            permutation_operator(SubsystemDims.uniform(2, 2), [0, 0])


class TestRandomSampling:
    """Test seeded random matrices."""

    def test_same_seed_same_draw(self):
        assert np.array_equal(random_unitary(3, 7), random_unitary(3, 7))

    def test_unitary(self, rng):
        assert is_unitary(random_unitary(3, rng))

    def test_hermitian(self, rng):
        assert is_hermitian(random_hermitian(4, rng))

    @pytest.mark.parametrize("rank", [0, 1, 2, 3])
    def test_projector_rank(self, rng, rank):
        p = random_projector(3, rank, rng)
        assert is_projector(p)
        assert np.isclose(np.trace(p).real, rank)

    def test_projector_bad_rank(self, rng):
        with pytest.raises(InvalidRankError):
            random_projector(2, 3, rng)

    def test_density(self, rng):
        assert is_density(random_density(3, rng))

    def test_resolution_of_identity(self, rng):
        projectors = random_resolution(4, [1, 2, 1], rng)
        assert np.allclose(sum(projectors), np.eye(4))
        assert np.allclose(projectors[0] @ projectors[1], 0)

    def test_resolution_overfull(self, rng):
        with pytest.raises(InvalidRankError):
            random_resolution(2, [2, 1], rng)
