"""Finite-dimensional Hilbert spaces with an explicit tensor product structure.

States here always know which labeled factors they live on and in what
order; that order fixes the row-major flattening used by every dense
operation, so amplitude layouts are reproducible across the package.
Bipartite states with one Schmidt term per mode get a dedicated sparse
representation (SchmidtPairState) whose reduced quantities come out in
closed form, including a symbolic variant for mode counts far beyond
anything materializable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Default bound on the joint dimension of any dense representation.
# Overridable per TensorProductStructure; the default keeps a full
# density matrix plus its eigendecomposition comfortably in memory.
DENSE_CAP = 2**14

# Tolerance for structural invariants (normalization, hermiticity, trace).
ATOL_STRUCT = 1e-10


class ExplicitWeightsRequired(Exception):
    """Raised when an operation needs materialized Schmidt weights but the
    state only carries a symbolic flat distribution."""


@dataclass(frozen=True)
class FactorSpace:
    """A labeled finite-dimensional tensor factor."""

    label: str
    dim: int

    def __post_init__(self) -> None:
        if not isinstance(self.label, str) or not self.label:
            raise ValueError("factor label must be a non-empty string")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"factor dimension must be an integer >= 2, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))


@dataclass(frozen=True)
class TensorProductStructure:
    """Ordered factorization of a joint Hilbert space.

    The factor order is significant: amplitudes flatten row-major with the
    first factor as the slowest index. Labels must be unique so subsystems
    can be addressed by name.
    """

    factors: tuple[FactorSpace, ...]
    cap: int = DENSE_CAP

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("need at least one factor")
        labels = [f.label for f in self.factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate factor labels in {labels}")
        if self.cap < 2:
            raise ValueError("dense cap must be at least 2")
        if self.total_dim > self.cap:
            raise ValueError(
                f"joint dimension {self.total_dim} exceeds dense cap {self.cap}"
            )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f.label for f in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def total_dim(self) -> int:
        return math.prod(f.dim for f in self.factors)

    def index_of(self, label: str) -> int:
        for i, f in enumerate(self.factors):
            if f.label == label:
                return i
        raise KeyError(f"no factor labeled {label!r}")

    def dim_of(self, labels: Iterable[str]) -> int:
        return math.prod(self.factors[self.index_of(lb)].dim for lb in labels)


def qubits(labels: Sequence[str], cap: int = DENSE_CAP) -> TensorProductStructure:
    """Tensor product structure of dimension-2 factors, one per label."""
    return TensorProductStructure(tuple(FactorSpace(lb, 2) for lb in labels), cap=cap)


def _as_locked_complex(values, length: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=complex, copy=True).reshape(-1)
    if arr.shape != (length,):
        raise ValueError(f"{what} must have length {length}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over an explicit tensor product structure.

    Amplitudes are stored row-major in the factor order of `tps` and are
    locked read-only; every operation returns a fresh state.
    """

    tps: TensorProductStructure
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = _as_locked_complex(self.amplitudes, self.tps.total_dim, "amplitudes")
        nrm = np.linalg.norm(amp)
        if abs(nrm - 1.0) > ATOL_STRUCT:
            raise ValueError(f"state not normalized: |psi| = {nrm!r}")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.tps.labels


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator over an ordered tuple of labeled factors.

    Hermiticity and unit trace are checked on every construction (so any
    partial trace output is validated per call). Spectrum nonnegativity is
    asserted wherever eigenvalues are actually computed; validate() runs
    the full eigenvalue check on demand.
    """

    factors: tuple[FactorSpace, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("need at least one factor")
        labels = [f.label for f in self.factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate factor labels in {labels}")
        d = math.prod(f.dim for f in self.factors)
        mat = np.array(self.matrix, dtype=complex, copy=True)
        if mat.shape != (d, d):
            raise ValueError(f"matrix must be {d}x{d} for factors {labels}, got {mat.shape}")
        herm_err = np.abs(mat - mat.conj().T).max()
        if herm_err > ATOL_STRUCT:
            raise ValueError(f"matrix not hermitian: max |rho - rho^dag| = {herm_err}")
        tr = mat.trace()
        if abs(tr - 1.0) > ATOL_STRUCT:
            raise ValueError(f"matrix trace must be 1, got {tr}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(f.label for f in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, atol: float = ATOL_STRUCT) -> None:
        """Full invariant check including spectrum nonnegativity."""
        lam = np.linalg.eigvalsh(self.matrix)
        if lam.min() < -atol:
            raise ValueError(f"matrix has negative eigenvalue {lam.min()}")

    def index_of(self, label: str) -> int:
        for i, f in enumerate(self.factors):
            if f.label == label:
                return i
        raise KeyError(f"no factor labeled {label!r}")


def tensor(*states: PureState) -> PureState:
    """Kronecker product of pure states, factors concatenated in call order.

    Labels must stay globally unique. The result's dense cap is the largest
    cap among the inputs, so an explicitly raised cap survives composition.
    """
    if not states:
        raise ValueError("tensor() needs at least one state")
    if len(states) == 1:
        return states[0]
    factors: list[FactorSpace] = []
    for s in states:
        factors.extend(s.tps.factors)
    cap = max(s.tps.cap for s in states)
    tps = TensorProductStructure(tuple(factors), cap=cap)
    amp = states[0].amplitudes
    for s in states[1:]:
        amp = np.kron(amp, s.amplitudes)
    return PureState(tps, amp)


def density_of(psi: PureState) -> DensityMatrix:
    """Rank-one density operator |psi><psi| over all factors of psi."""
    return DensityMatrix(psi.tps.factors, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def _kept_positions(labels: Sequence[str], keep: Iterable[str]) -> tuple[list[int], list[int]]:
    keep_set = set(keep)
    if not keep_set:
        raise ValueError("must keep at least one factor")
    unknown = keep_set - set(labels)
    if unknown:
        raise KeyError(f"unknown factor labels {sorted(unknown)}")
    kept = [i for i, lb in enumerate(labels) if lb in keep_set]
    dropped = [i for i, lb in enumerate(labels) if lb not in keep_set]
    return kept, dropped


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    """Trace out every factor not named in `keep`.

    The kept factors retain their original relative order. Output passes
    the hermiticity/trace checks of the DensityMatrix constructor.
    """
    kept, dropped = _kept_positions(rho.labels, keep)
    if not dropped:
        return rho
    dims = list(rho.dims)
    t = rho.matrix.reshape(dims + dims)
    for pos in reversed(dropped):
        half = t.ndim // 2
        t = np.trace(t, axis1=pos, axis2=pos + half)
    kept_factors = tuple(rho.factors[i] for i in kept)
    d = math.prod(f.dim for f in kept_factors)
    return DensityMatrix(kept_factors, t.reshape(d, d))


def reduced_density(psi: PureState, keep: Iterable[str]) -> DensityMatrix:
    """Reduced density operator of a pure state without forming |psi><psi|.

    Contracts the complement directly from the state vector, so the cost is
    set by the kept and dropped dimensions rather than the squared joint
    dimension. Agrees with partial_trace(density_of(psi), keep).
    """
    kept, dropped = _kept_positions(psi.tps.labels, keep)
    dims = psi.tps.dims
    if not dropped:
        return density_of(psi)
    t = psi.amplitudes.reshape(dims)
    t = np.transpose(t, kept + dropped)
    dk = math.prod(dims[i] for i in kept)
    dd = math.prod(dims[i] for i in dropped)
    m = t.reshape(dk, dd)
    mat = m @ m.conj().T
    # enforce exact hermiticity against rounding in the contraction
    mat = 0.5 * (mat + mat.conj().T)
    kept_factors = tuple(psi.tps.factors[i] for i in kept)
    return DensityMatrix(kept_factors, mat)


@dataclass(frozen=True)
class SchmidtPairState:
    """Bipartite pure state with one Schmidt term per mode index.

    Represents sum_n w_n |n>_A |f(n)>_B for n = 1..num_modes with an
    injective pairing f. The canonical pairing reverses the index,
    f(n) = num_modes + 1 - n. Reduced density operators are diagonal with
    entries |w_n|^2, so entropies and mutual information come out in
    closed form without any dense construction.

    A flat distribution may be carried symbolically (weights is None):
    num_modes is then the only stored datum and may be astronomically
    large. Only closed-form operations work on symbolic states; anything
    needing the actual weights raises ExplicitWeightsRequired.
    """

    num_modes: int
    weights: np.ndarray | None = None
    pairing: np.ndarray | None = None

    def __post_init__(self) -> None:
        if int(self.num_modes) != self.num_modes or self.num_modes < 1:
            raise ValueError(f"num_modes must be an integer >= 1, got {self.num_modes!r}")
        object.__setattr__(self, "num_modes", int(self.num_modes))
        if self.weights is None:
            if self.pairing is not None:
                raise ValueError("symbolic flat state cannot carry an explicit pairing")
            return
        w = _as_locked_complex(self.weights, self.num_modes, "weights")
        nrm = np.linalg.norm(w)
        if abs(nrm - 1.0) > ATOL_STRUCT:
            raise ValueError(f"weights not normalized: |w| = {nrm!r}")
        object.__setattr__(self, "weights", w)
        if self.pairing is not None:
            p = np.array(self.pairing, dtype=np.int64, copy=True).reshape(-1)
            if p.shape != (self.num_modes,):
                raise ValueError("pairing must assign one partner per mode")
            if p.min() < 1 or p.max() > self.num_modes or len(set(p.tolist())) != self.num_modes:
                raise ValueError("pairing must be injective on 1..num_modes")
            p.setflags(write=False)
            object.__setattr__(self, "pairing", p)

    @classmethod
    def from_weights(cls, weights, pairing=None) -> "SchmidtPairState":
        w = np.asarray(weights, dtype=complex).reshape(-1)
        return cls(num_modes=w.shape[0], weights=w, pairing=pairing)

    @classmethod
    def flat(cls, num_modes: int, symbolic: bool = True) -> "SchmidtPairState":
        """Uniform-weight state over num_modes modes.

        Symbolic by default (no allocation, any size); pass symbolic=False
        to materialize the weight vector.
        """
        if symbolic:
            return cls(num_modes=num_modes)
        w = np.full(int(num_modes), 1.0 / math.sqrt(num_modes), dtype=complex)
        return cls(num_modes=int(num_modes), weights=w)

    @property
    def is_symbolic(self) -> bool:
        return self.weights is None

    def require_weights(self, op: str) -> np.ndarray:
        if self.weights is None:
            raise ExplicitWeightsRequired(
                f"{op} needs explicit Schmidt weights; this state is symbolic "
                f"flat over {self.num_modes} modes"
            )
        return self.weights

    def probabilities(self) -> np.ndarray:
        """Mode probabilities |w_n|^2 (read-only)."""
        w = self.require_weights("probabilities")
        p = np.abs(w) ** 2
        p.setflags(write=False)
        return p

    def pairing_values(self) -> np.ndarray:
        """Partner index f(n) for n = 1..num_modes (canonical: reversal)."""
        self.require_weights("pairing_values")
        if self.pairing is not None:
            return self.pairing
        p = np.arange(self.num_modes, 0, -1, dtype=np.int64)
        p.setflags(write=False)
        return p

    def materialize(self) -> "SchmidtPairState":
        """Explicit-weight copy of a symbolic flat state (identity otherwise)."""
        if self.weights is not None:
            return self
        if self.num_modes > 2**26:
            raise ExplicitWeightsRequired(
                f"refusing to materialize {self.num_modes} flat weights"
            )
        return SchmidtPairState.flat(self.num_modes, symbolic=False)


def schmidt_to_dense(
    s: SchmidtPairState,
    labels: tuple[str, str] = ("A", "B"),
    cap: int = DENSE_CAP,
) -> PureState:
    """Dense two-factor state vector realizing a Schmidt-pair state.

    Both factors get dimension num_modes, so num_modes >= 2 is required
    (a lone mode has no dimension-2 factor to live on) and num_modes^2
    must fit under the dense cap.
    """
    w = s.require_weights("schmidt_to_dense")
    m = s.num_modes
    if m < 2:
        raise ValueError("dense realization needs at least 2 modes")
    if m * m > cap:
        raise ValueError(f"joint dimension {m * m} exceeds dense cap {cap}")
    tps = TensorProductStructure(
        (FactorSpace(labels[0], m), FactorSpace(labels[1], m)), cap=cap
    )
    amp = np.zeros((m, m), dtype=complex)
    partners = s.pairing_values()
    amp[np.arange(m), partners - 1] = w
    return PureState(tps, amp.reshape(-1))


def schmidt_reduce(s: SchmidtPairState, side: str = "A") -> DensityMatrix:
    """Closed-form reduced density operator of one side: diag of |w_n|^2.

    Side "A" indexes by mode n, side "B" by partner f(n); for any injective
    pairing both spectra are the same multiset.
    """
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    p = s.probabilities()
    m = s.num_modes
    if m < 2:
        raise ValueError("reduced operator needs at least 2 modes")
    diag = np.zeros(m, dtype=float)
    if side == "A":
        diag[:] = p
    else:
        diag[s.pairing_values() - 1] = p
    return DensityMatrix((FactorSpace(side, m),), np.diag(diag).astype(complex))
