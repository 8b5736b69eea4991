"""Dense operator algebra on truncated Fock spaces.

Everything is plain numpy underneath. Thin wrappers carry the subsystem
structure (an ordered tuple of dimensions) that tensor products and partial
traces need. All matrix exponentials and entropies go through Hermitian
eigendecompositions, which keeps collision unitaries unitary to round-off
and avoids log(0) on truncated spectra.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
ENTROPY_EIGENVALUE_FLOOR = 1e-14

__all__ = [
    "HilbertSpace",
    "OperatorMatrix",
    "DensityMatrix",
    "fock_space",
    "joint_space",
    "identity",
    "annihilation",
    "creation",
    "number_operator",
    "tensor",
    "embed",
    "partial_trace",
    "matrix_exp",
    "expectation",
    "von_neumann_entropy",
    "mutual_information",
    "thermal_state",
    "uhlmann_fidelity",
    "trace_distance",
]


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered composite of finite-dimensional subsystems."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a Hilbert space needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def is_single(self) -> bool:
        return len(self.dims) == 1


def fock_space(n_levels: int) -> HilbertSpace:
    """Single truncated bosonic mode with levels |0>..|n_levels-1>."""
    if n_levels < 2:
        raise ValueError(f"need at least 2 levels to truncate a mode, got {n_levels}")
    return HilbertSpace((n_levels,))


def joint_space(*spaces: HilbertSpace) -> HilbertSpace:
    """Composite space with subsystems concatenated in order."""
    return HilbertSpace(tuple(d for s in spaces for d in s.dims))


def _as_complex_matrix(entries, dim: int) -> np.ndarray:
    mat = np.asarray(entries, dtype=complex)
    if mat.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {mat.shape}")
    return mat


class OperatorMatrix:
    """Linear operator on a HilbertSpace, stored dense."""

    __slots__ = ("space", "mat")

    def __init__(self, space: HilbertSpace, entries):
        self.space = space
        self.mat = _as_complex_matrix(entries, space.total_dim)

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.mat.conj().T)

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        scale = max(1.0, np.abs(self.mat).max())
        return np.abs(self.mat - self.mat.conj().T).max() <= tol * scale

    def _require_same_space(self, other: "OperatorMatrix"):
        if self.space.dims != other.space.dims:
            raise ValueError(
                f"operator spaces differ: {self.space.dims} vs {other.space.dims}"
            )

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._require_same_space(other)
        return OperatorMatrix(self.space, self.mat + other.mat)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._require_same_space(other)
        return OperatorMatrix(self.space, self.mat - other.mat)

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, -self.mat)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.mat * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._require_same_space(other)
        return OperatorMatrix(self.space, self.mat @ other.mat)

    def __repr__(self):
        return f"OperatorMatrix(dims={self.space.dims})"


class DensityMatrix:
    """Normalized quantum state: Hermitian, unit trace, positive semidefinite.

    Hermiticity and trace are validated on construction. The eigenvalue
    check is O(d^3) and left to `min_eigenvalue`, which tests call on the
    outputs of every channel under scrutiny.
    """

    __slots__ = ("space", "mat")

    def __init__(self, space: HilbertSpace, entries):
        mat = _as_complex_matrix(entries, space.total_dim)
        herm_defect = np.abs(mat - mat.conj().T).max()
        if herm_defect > HERMITICITY_TOL:
            raise ValueError(f"state is not Hermitian (defect {herm_defect:.3e})")
        trace_defect = abs(mat.trace() - 1.0)
        if trace_defect > TRACE_TOL:
            raise ValueError(f"state trace differs from 1 by {trace_defect:.3e}")
        self.space = space
        self.mat = mat

    @classmethod
    def from_pure(cls, space: HilbertSpace, ket) -> "DensityMatrix":
        """State |psi><psi| from a ket vector or a basis index."""
        if np.isscalar(ket):
            vec = np.zeros(space.total_dim, dtype=complex)
            vec[int(ket)] = 1.0
        else:
            vec = np.asarray(ket, dtype=complex)
            vec = vec / np.linalg.norm(vec)
        return cls(space, np.outer(vec, vec.conj()))

    @classmethod
    def maximally_mixed(cls, space: HilbertSpace) -> "DensityMatrix":
        d = space.total_dim
        return cls(space, np.eye(d, dtype=complex) / d)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def trace(self) -> complex:
        return complex(self.mat.trace())

    def __repr__(self):
        return f"DensityMatrix(dims={self.space.dims})"


def identity(space: HilbertSpace) -> OperatorMatrix:
    return OperatorMatrix(space, np.eye(space.total_dim, dtype=complex))


def annihilation(space: HilbertSpace) -> OperatorMatrix:
    """Truncated mode annihilation operator: <n-1|a|n> = sqrt(n)."""
    if not space.is_single:
        raise ValueError("annihilation acts on a single mode; embed it for composites")
    n = space.total_dim
    mat = np.zeros((n, n), dtype=complex)
    mat[np.arange(n - 1), np.arange(1, n)] = np.sqrt(np.arange(1, n))
    return OperatorMatrix(space, mat)


def creation(space: HilbertSpace) -> OperatorMatrix:
    return annihilation(space).dag()


def number_operator(space: HilbertSpace) -> OperatorMatrix:
    if not space.is_single:
        raise ValueError("number_operator acts on a single mode; embed it for composites")
    return OperatorMatrix(space, np.diag(np.arange(space.total_dim, dtype=complex)))


def tensor(ops: list[OperatorMatrix] | tuple[OperatorMatrix, ...]) -> OperatorMatrix:
    """Kronecker product in the given order; subsystem dims concatenate."""
    if not ops:
        raise ValueError("tensor of an empty operator list")
    mat = ops[0].mat
    for op in ops[1:]:
        mat = np.kron(mat, op.mat)
    return OperatorMatrix(joint_space(*(op.space for op in ops)), mat)


def embed(op: OperatorMatrix, space: HilbertSpace, at: int) -> OperatorMatrix:
    """Lift a single-subsystem operator into a composite space at position `at`."""
    if not op.space.is_single:
        raise ValueError("embed expects a single-subsystem operator")
    if not 0 <= at < space.n_subsystems:
        raise ValueError(f"subsystem index {at} out of range for {space.dims}")
    if space.dims[at] != op.space.total_dim:
        raise ValueError(
            f"operator dimension {op.space.total_dim} does not match subsystem {at} "
            f"of {space.dims}"
        )
    factors = []
    for k, d in enumerate(space.dims):
        if k == at:
            factors.append(op)
        else:
            factors.append(identity(HilbertSpace((d,))))
    return tensor(factors)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the kept subsystems (original order preserved)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("partial_trace needs a nonempty set of kept subsystems")
    dims = rho.space.dims
    n = len(dims)
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"kept subsystems {keep} out of range for {dims}")

    tensor_form = rho.mat.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # Trace highest-index subsystems first so earlier axis numbers stay valid.
    remaining = n
    for k in sorted(traced, reverse=True):
        tensor_form = np.trace(tensor_form, axis1=k, axis2=k + remaining)
        remaining -= 1
    kept_dims = tuple(dims[k] for k in keep)
    d = prod(kept_dims)
    return DensityMatrix(HilbertSpace(kept_dims), tensor_form.reshape(d, d))


def matrix_exp(H: OperatorMatrix, scale: complex) -> OperatorMatrix:
    """exp(scale * H) through the spectral decomposition of Hermitian H."""
    if not H.is_hermitian():
        raise ValueError("matrix_exp takes a Hermitian generator")
    evals, evecs = np.linalg.eigh(H.mat)
    exp_mat = (evecs * np.exp(scale * evals)) @ evecs.conj().T
    return OperatorMatrix(H.space, exp_mat)


def expectation(rho: DensityMatrix, A: OperatorMatrix) -> complex:
    """Tr[A rho]; real to ~1e-10 for Hermitian A."""
    if rho.space.dims != A.space.dims:
        raise ValueError(
            f"state and operator spaces differ: {rho.space.dims} vs {A.space.dims}"
        )
    return complex(np.einsum("ij,ji->", A.mat, rho.mat))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum(lam ln lam) in nats, eigenvalues below 1e-14 dropped."""
    evals = rho.eigenvalues()
    evals = evals[evals > ENTROPY_EIGENVALUE_FLOOR]
    if evals.size == 0:
        return 0.0
    return float(max(0.0, -np.sum(evals * np.log(evals))))


def mutual_information(rho: DensityMatrix, split) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB) for a bipartition (A, B) of the subsystems.

    Tiny negative round-off is clamped to zero.
    """
    part_a, part_b = split
    part_a = sorted(set(int(k) for k in part_a))
    part_b = sorted(set(int(k) for k in part_b))
    n = rho.space.n_subsystems
    if not part_a or not part_b:
        raise ValueError("both sides of the bipartition must be nonempty")
    if set(part_a) & set(part_b):
        raise ValueError(f"bipartition overlaps: {part_a} and {part_b}")
    if set(part_a) | set(part_b) != set(range(n)):
        raise ValueError(f"bipartition {part_a}|{part_b} does not cover all {n} subsystems")
    s_a = von_neumann_entropy(partial_trace(rho, part_a))
    s_b = von_neumann_entropy(partial_trace(rho, part_b))
    s_ab = von_neumann_entropy(rho)
    return max(0.0, s_a + s_b - s_ab)


def thermal_state(space: HilbertSpace, omega: float, temperature: float) -> DensityMatrix:
    """Truncated Gibbs state of a mode: p_n proportional to exp(-n omega / T)."""
    if not space.is_single:
        raise ValueError("thermal_state builds a single-mode state")
    if temperature < 0:
        raise ValueError("thermal_state needs temperature >= 0")
    n = np.arange(space.total_dim)
    if temperature == 0.0:
        weights = np.zeros(space.total_dim)
        weights[0] = 1.0
    else:
        weights = np.exp(-n * omega / temperature)
        weights = weights / weights.sum()
    return DensityMatrix(space, np.diag(weights.astype(complex)))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(mat)
    evals = np.clip(evals, 0.0, None)
    return (evecs * np.sqrt(evals)) @ evecs.conj().T


def uhlmann_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1]."""
    if rho.space.dims != sigma.space.dims:
        raise ValueError("fidelity needs states on the same space")
    sqrt_rho = _psd_sqrt(rho.mat)
    inner = sqrt_rho @ sigma.mat @ sqrt_rho
    evals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(1.0, np.sum(np.sqrt(evals)) ** 2))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) * trace norm of (rho - sigma)."""
    if rho.space.dims != sigma.space.dims:
        raise ValueError("trace_distance needs states on the same space")
    evals = np.linalg.eigvalsh(rho.mat - sigma.mat)
    return float(0.5 * np.abs(evals).sum())
