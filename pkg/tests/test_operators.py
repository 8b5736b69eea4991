"""Operator-core tests: construction rules, independent oracles, invariants."""
import numpy as np
import pytest

from phaseonium_engine.operators import (
    DensityMatrix,
    HilbertSpace,
    OperatorMatrix,
    annihilation,
    embed,
    expectation,
    fock_space,
    identity,
    joint_space,
    matrix_exp,
    mutual_information,
    number_operator,
    partial_trace,
    tensor,
    thermal_state,
    trace_distance,
    uhlmann_fidelity,
    von_neumann_entropy,
)

RNG = np.random.default_rng(20240811)


def random_density(space):
    d = space.total_dim
    g = RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d))
    mat = g @ g.conj().T
    return DensityMatrix(space, mat / mat.trace())


def random_hermitian(d):
    g = RNG.normal(size=(d, d)) + 1j * RNG.normal(size=(d, d))
    return 0.5 * (g + g.conj().T)


class TestSpaces:
    def test_fock_space_dims(self):
        assert fock_space(2).total_dim == 2
        assert fock_space(20).total_dim == 20

    def test_fock_space_rejects_degenerate(self):
        with pytest.raises(ValueError):
            fock_space(1)

    def test_joint_space_concatenates(self):
        s = joint_space(fock_space(4), HilbertSpace((3,)))
        assert s.dims == (4, 3)
        assert s.total_dim == 12

    def test_total_dim_is_product(self):
        s = HilbertSpace((2, 3, 5))
        assert s.total_dim == 30


class TestLadderOperators:
    def test_qubit_truncation(self):
        a = annihilation(fock_space(2))
        assert np.allclose(a.mat, [[0, 1], [0, 0]])

    def test_sqrt_rule(self):
        a = annihilation(fock_space(3))
        assert a.mat[1, 2] == pytest.approx(np.sqrt(2))

    def test_number_operator_by_direct_multiplication(self):
        # Oracle: a^dag a must be diagonal (0, 1, ..., 19).
        space = fock_space(20)
        a = annihilation(space)
        n_mat = a.dag().mat @ a.mat
        assert np.allclose(n_mat, np.diag(np.arange(20)))
        assert np.allclose(number_operator(space).mat, n_mat)

    def test_annihilation_rejects_composite(self):
        with pytest.raises(ValueError):
            annihilation(HilbertSpace((2, 2)))


class TestTensor:
    def test_identity_product(self):
        out = tensor([identity(fock_space(2)), identity(HilbertSpace((3,)))])
        assert out.space.dims == (2, 3)
        assert np.allclose(out.mat, np.eye(6))

    def test_kronecker_structure(self):
        a2 = annihilation(fock_space(2))
        out = tensor([a2, identity(fock_space(2))])
        for k in range(2):
            assert out.mat[0 * 2 + k, 1 * 2 + k] == pytest.approx(1.0)

    def test_against_index_oracle(self):
        # Brute-force Kronecker: K[(i,k),(j,l)] = A[i,j] B[k,l].
        a = random_hermitian(2)
        b = random_hermitian(3)
        out = tensor(
            [OperatorMatrix(fock_space(2), a), OperatorMatrix(HilbertSpace((3,)), b)]
        )
        oracle = np.zeros((6, 6), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(3):
                    for l in range(3):
                        oracle[i * 3 + k, j * 3 + l] = a[i, j] * b[k, l]
        assert np.allclose(out.mat, oracle)

    def test_embed_positions(self):
        space = HilbertSpace((2, 3, 2))
        a = annihilation(fock_space(2))
        lifted = embed(a, space, 2)
        direct = tensor([identity(fock_space(2)), identity(HilbertSpace((3,))), a])
        assert np.allclose(lifted.mat, direct.mat)
        with pytest.raises(ValueError):
            embed(a, space, 1)  # dimension mismatch


class TestPartialTrace:
    def test_product_state_recovers_factor(self):
        sa, sb = fock_space(3), fock_space(4)
        rho_a, rho_b = random_density(sa), random_density(sb)
        joint = DensityMatrix(joint_space(sa, sb), np.kron(rho_a.mat, rho_b.mat))
        assert np.allclose(partial_trace(joint, [0]).mat, rho_a.mat, atol=1e-12)
        assert np.allclose(partial_trace(joint, [1]).mat, rho_b.mat, atol=1e-12)

    def test_maximally_entangled_pair(self):
        space = HilbertSpace((2, 2))
        bell = DensityMatrix.from_pure(space, np.array([1, 0, 0, 1]) / np.sqrt(2))
        reduced = partial_trace(bell, [0])
        assert np.allclose(reduced.mat, np.eye(2) / 2, atol=1e-12)

    def test_against_index_summation_oracle(self):
        # Keep {0, 2} of a random 3-subsystem state; sum out index 1 by hand.
        dims = (2, 3, 2)
        space = HilbertSpace(dims)
        rho = random_density(space)
        tensor_form = rho.mat.reshape(dims + dims)
        oracle = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for a in range(2):
                for j in range(2):
                    for b in range(2):
                        acc = 0.0
                        for m in range(3):
                            acc += tensor_form[i, m, a, j, m, b]
                        oracle[i * 2 + a, j * 2 + b] = acc
        reduced = partial_trace(rho, [0, 2])
        assert reduced.space.dims == (2, 2)
        assert np.allclose(reduced.mat, oracle, atol=1e-12)

    def test_empty_keep_rejected(self):
        rho = random_density(HilbertSpace((2, 2)))
        with pytest.raises(ValueError):
            partial_trace(rho, [])

    def test_preserves_trace_and_hermiticity(self):
        for _ in range(5):
            rho = random_density(HilbertSpace((3, 4)))
            red = partial_trace(rho, [0])
            assert abs(red.mat.trace() - 1) < 1e-10
            assert np.abs(red.mat - red.mat.conj().T).max() < 1e-10

    def test_tensor_then_trace_roundtrip(self):
        sa, sb = fock_space(4), fock_space(3)
        rho_a, rho_b = random_density(sa), random_density(sb)
        joint = DensityMatrix(joint_space(sa, sb), np.kron(rho_a.mat, rho_b.mat))
        assert np.abs(partial_trace(joint, [0]).mat - rho_a.mat).max() < 1e-10
        assert np.abs(partial_trace(joint, [1]).mat - rho_b.mat).max() < 1e-10


class TestMatrixExp:
    def test_zero_scale_is_identity(self):
        space = fock_space(5)
        h = number_operator(space)
        assert np.allclose(matrix_exp(h, 0.0).mat, np.eye(5))

    def test_sigma_x_quarter_period(self):
        # exp(-i pi/2 sigma_x) = -i sigma_x; off-diagonal magnitude 1.
        sx = OperatorMatrix(fock_space(2), np.array([[0, 1], [1, 0]], dtype=complex))
        u = matrix_exp(sx, -1j * np.pi / 2)
        assert abs(u.mat[0, 1]) == pytest.approx(1.0)
        assert np.allclose(u.mat, -1j * sx.mat, atol=1e-12)

    def test_against_taylor_oracle(self):
        h = random_hermitian(6)
        scale = -0.37j
        oracle = np.zeros((6, 6), dtype=complex)
        term = np.eye(6, dtype=complex)
        for k in range(1, 60):
            oracle += term
            term = term @ (scale * h) / k
        out = matrix_exp(OperatorMatrix(fock_space(6), h), scale)
        assert np.abs(out.mat - oracle).max() < 1e-8

    def test_unitarity_for_imaginary_scale(self):
        h = random_hermitian(8)
        u = matrix_exp(OperatorMatrix(fock_space(8), h), -1.3j)
        defect = np.abs(u.dag().mat @ u.mat - np.eye(8)).max()
        assert defect < 1e-9

    def test_rejects_non_hermitian(self):
        bad = OperatorMatrix(fock_space(2), np.array([[0, 1], [0, 0]], dtype=complex))
        with pytest.raises(ValueError):
            matrix_exp(bad, 1.0)


class TestExpectation:
    def test_identity_gives_trace(self):
        space = fock_space(7)
        rho = random_density(space)
        assert expectation(rho, identity(space)) == pytest.approx(1.0, abs=1e-12)

    def test_number_eigenstate(self):
        space = fock_space(10)
        rho = DensityMatrix.from_pure(space, 4)
        assert expectation(rho, number_operator(space)).real == pytest.approx(4.0)

    def test_thermal_occupation_geometric_oracle(self):
        # Direct geometric sums: <n> = sum n x^n / sum x^n over the truncation.
        space = fock_space(25)
        omega, temp = 1.0, 0.8
        x = np.exp(-omega / temp)
        levels = np.arange(25)
        oracle = float((levels * x**levels).sum() / (x**levels).sum())
        rho = thermal_state(space, omega, temp)
        got = expectation(rho, number_operator(space)).real
        assert got == pytest.approx(oracle, rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(random_density(fock_space(3)), identity(fock_space(4)))

    def test_real_for_hermitian(self):
        space = fock_space(6)
        rho = random_density(space)
        a = OperatorMatrix(space, random_hermitian(6))
        assert abs(expectation(rho, a).imag) < 1e-10


class TestEntropy:
    def test_pure_state_zero(self):
        assert von_neumann_entropy(DensityMatrix.from_pure(fock_space(5), 2)) == 0.0

    def test_maximally_mixed(self):
        for d in (2, 3, 7):
            rho = DensityMatrix.maximally_mixed(fock_space(d))
            assert von_neumann_entropy(rho) == pytest.approx(np.log(d), rel=1e-12)

    def test_bosonic_closed_form(self):
        # (n+1)ln(n+1) - n ln n at <n> = 1 is 2 ln 2; truncation N=30 shifts
        # the mean slightly, so compare against the closed form at the
        # truncated mean occupation.
        space = fock_space(30)
        omega = 1.0
        temp = 1.0 / np.log(2.0)  # exp(-omega/T) = 1/2 puts <n> near 1
        rho = thermal_state(space, omega, temp)
        s = von_neumann_entropy(rho)
        assert s == pytest.approx(2 * np.log(2), abs=1e-6)

    def test_unitary_invariance(self):
        space = fock_space(6)
        rho = random_density(space)
        u = matrix_exp(OperatorMatrix(space, random_hermitian(6)), -0.7j)
        rotated = DensityMatrix(space, u.mat @ rho.mat @ u.dag().mat)
        assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-8

    def test_unitary_conjugation_preserves_spectrum(self):
        space = fock_space(6)
        rho = random_density(space)
        u = matrix_exp(OperatorMatrix(space, random_hermitian(6)), -1.1j)
        rotated = DensityMatrix(space, u.mat @ rho.mat @ u.dag().mat)
        assert abs(rotated.mat.trace() - 1) < 1e-10
        assert np.abs(rotated.mat - rotated.mat.conj().T).max() < 1e-10
        assert np.abs(np.sort(rotated.eigenvalues()) - np.sort(rho.eigenvalues())).max() < 1e-8


class TestMutualInformation:
    def test_product_state_zero(self):
        sa, sb = fock_space(3), fock_space(3)
        joint = DensityMatrix(
            joint_space(sa, sb), np.kron(random_density(sa).mat, random_density(sb).mat)
        )
        assert mutual_information(joint, ([0], [1])) <= 1e-9

    def test_maximally_entangled_pair(self):
        space = HilbertSpace((2, 2))
        bell = DensityMatrix.from_pure(space, np.array([1, 0, 0, 1]) / np.sqrt(2))
        assert mutual_information(bell, ([0], [1])) == pytest.approx(2 * np.log(2), rel=1e-10)

    def test_against_eigenvalue_oracle(self):
        # Independent path: entropies from raw eigvalsh sums.
        space = HilbertSpace((4, 4))
        rho = random_density(space)

        def entropy_oracle(mat):
            lam = np.linalg.eigvalsh(mat)
            lam = lam[lam > 1e-14]
            return float(-(lam * np.log(lam)).sum())

        s_full = entropy_oracle(rho.mat)
        t = rho.mat.reshape(4, 4, 4, 4)
        red_a = np.trace(t, axis1=1, axis2=3)
        red_b = np.trace(t, axis1=0, axis2=2)
        oracle = entropy_oracle(red_a) + entropy_oracle(red_b) - s_full
        assert mutual_information(rho, ([0], [1])) == pytest.approx(oracle, abs=1e-10)

    def test_invalid_split(self):
        rho = random_density(HilbertSpace((2, 2, 2)))
        with pytest.raises(ValueError):
            mutual_information(rho, ([0], [1]))  # does not cover subsystem 2
        with pytest.raises(ValueError):
            mutual_information(rho, ([0, 1], [1, 2]))  # overlap

    def test_nonnegative_on_random_states(self):
        for _ in range(5):
            rho = random_density(HilbertSpace((3, 3)))
            assert mutual_information(rho, ([0], [1])) >= 0.0


class TestStateValidation:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            DensityMatrix(fock_space(2), np.array([[1, 1], [0, 0]], dtype=complex))

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError):
            DensityMatrix(fock_space(2), np.eye(2, dtype=complex))

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            DensityMatrix(fock_space(3), np.eye(2, dtype=complex) / 2)


class TestFidelityAndDistance:
    def test_fidelity_identical_states(self):
        rho = random_density(fock_space(5))
        assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_fidelity_orthogonal_pures(self):
        space = fock_space(4)
        a = DensityMatrix.from_pure(space, 0)
        b = DensityMatrix.from_pure(space, 3)
        assert uhlmann_fidelity(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_trace_distance_bounds(self):
        space = fock_space(4)
        a, b = random_density(space), random_density(space)
        d = trace_distance(a, b)
        assert 0.0 <= d <= 1.0
        assert trace_distance(a, a) == pytest.approx(0.0, abs=1e-12)
