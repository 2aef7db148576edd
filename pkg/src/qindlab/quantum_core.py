"""Dense state-vector and density-matrix simulation primitives.

Bit-order convention, fixed for the whole package: wire 0 is the most
significant bit of a computational-basis index. The basis state
|b_0 b_1 ... b_{n-1}> has index sum_j b_j * 2^(n-1-j), so an n-bit integer
written MSB-first reads off wire contents directly, and an m-bit plaintext
integer equals the basis index of its register. Nothing else in the package
reinterprets bit order.

Values are immutable: constructors copy and freeze their arrays and every
operation returns a new value. Randomness always enters through an explicitly
passed ``numpy.random.Generator``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

# Dense simulation only: 2^n amplitudes, so cap the wire count. Raise at your
# own risk; 14 wires is a 16384-dim state and already the largest the games
# need.
WIRE_CAP = 14

NORM_ATOL = 1e-9
UNITARY_ATOL = 1e-9
DENSITY_ATOL = 1e-9

# Dense matrices above this wire count are refused (the permutation-table path
# in oracles covers the large cases).
_DENSE_CAP = 10
# Positive-semidefiniteness is verified by eigendecomposition up to this
# dimension; larger matrices check Hermiticity and trace only.
_PSD_CHECK_DIM = 512


def _check_wire_count(num_wires: int) -> None:
    if not isinstance(num_wires, (int, np.integer)) or num_wires < 1:
        raise ValueError(f"num_wires must be a positive integer, got {num_wires!r}")
    if num_wires > WIRE_CAP:
        raise ValueError(f"num_wires {num_wires} exceeds the cap of {WIRE_CAP}")


def _frozen_array(values, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.shape != shape:
        raise ValueError(f"expected array of shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Pure state on ``num_wires`` qubits as 2^n complex amplitudes."""

    num_wires: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        _check_wire_count(self.num_wires)
        arr = _frozen_array(self.amplitudes, (2**self.num_wires,))
        object.__setattr__(self, "amplitudes", arr)
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_ATOL}")

    @property
    def dim(self) -> int:
        return 2**self.num_wires

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.num_wires, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state on ``num_wires`` qubits: Hermitian, PSD, unit trace."""

    num_wires: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        _check_wire_count(self.num_wires)
        d = 2**self.num_wires
        arr = _frozen_array(self.matrix, (d, d))
        object.__setattr__(self, "matrix", arr)
        if np.max(np.abs(arr - arr.conj().T)) > DENSITY_ATOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(arr))
        if abs(tr - 1.0) > DENSITY_ATOL:
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        if d <= _PSD_CHECK_DIM:
            eigs = np.linalg.eigvalsh(arr)
            if eigs.min() < -DENSITY_ATOL:
                raise ValueError(f"density matrix has negative eigenvalue {eigs.min()}")

    @property
    def dim(self) -> int:
        return 2**self.num_wires

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class UnitaryOperator:
    """Dense unitary on ``num_wires`` qubits, validated at construction."""

    num_wires: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        _check_wire_count(self.num_wires)
        if self.num_wires > _DENSE_CAP:
            raise ValueError(
                f"dense unitaries are capped at {_DENSE_CAP} wires; "
                "use basis-permutation application for larger operators"
            )
        d = 2**self.num_wires
        arr = _frozen_array(self.matrix, (d, d))
        object.__setattr__(self, "matrix", arr)
        dev = np.max(np.abs(arr @ arr.conj().T - np.eye(d)))
        if dev > UNITARY_ATOL:
            raise ValueError(f"matrix is not unitary: max |U U^dag - I| = {dev}")

    @property
    def dim(self) -> int:
        return 2**self.num_wires

    def adjoint(self) -> UnitaryOperator:
        return UnitaryOperator(self.num_wires, self.matrix.conj().T)


_GATE_ARITY = {"h": 1, "x": 1, "z": 1, "cnot": 2}


@dataclass(frozen=True)
class Gate:
    name: str
    wires: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.name not in _GATE_ARITY:
            raise ValueError(f"unknown gate {self.name!r}; supported: {sorted(_GATE_ARITY)}")
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if len(self.wires) != _GATE_ARITY[self.name]:
            raise ValueError(f"gate {self.name} takes {_GATE_ARITY[self.name]} wire(s)")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"gate {self.name} wires must be distinct")


def H(wire: int) -> Gate:
    return Gate("h", (wire,))


def X(wire: int) -> Gate:
    return Gate("x", (wire,))


def Z(wire: int) -> Gate:
    return Gate("z", (wire,))


def CNOT(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


@dataclass(frozen=True)
class StateDescription:
    """Classical description of a state: a circuit from |0...0>, or a mixture.

    ``gates`` describes a single pure component. ``mixture`` is an optional
    list of (probability, gates) entries; when present it replaces ``gates``
    and the probabilities must sum to 1. All challenge states the games accept
    are communicated in this form, so the challenger can rebuild them
    privately.
    """

    num_wires: int
    gates: tuple[Gate, ...] = ()
    mixture: tuple[tuple[float, tuple[Gate, ...]], ...] | None = None

    def __post_init__(self) -> None:
        _check_wire_count(self.num_wires)
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.mixture is not None:
            if self.gates:
                raise ValueError("give either gates or mixture, not both")
            entries = tuple((float(p), tuple(gs)) for p, gs in self.mixture)
            if not entries:
                raise ValueError("mixture must have at least one component")
            total = sum(p for p, _ in entries)
            if any(p < -NORM_ATOL or p > 1 + NORM_ATOL for p, _ in entries):
                raise ValueError("mixture probabilities must lie in [0, 1]")
            if abs(total - 1.0) > NORM_ATOL:
                raise ValueError(f"mixture probabilities sum to {total}, not 1")
            object.__setattr__(self, "mixture", entries)
        for _, gates in self.components():
            for gate in gates:
                if any(w < 0 or w >= self.num_wires for w in gate.wires):
                    raise ValueError(f"gate {gate} out of range for {self.num_wires} wires")

    def components(self) -> tuple[tuple[float, tuple[Gate, ...]], ...]:
        if self.mixture is not None:
            return self.mixture
        return ((1.0, self.gates),)


# -- construction -----------------------------------------------------------


def state_from_bits(bits: str) -> StateVector:
    """Computational-basis state |bits>, wire 0 taken from bits[0] (MSB)."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"bits must be a nonempty string over 0/1, got {bits!r}")
    amp = np.zeros(2 ** len(bits), dtype=np.complex128)
    amp[int(bits, 2)] = 1.0
    return StateVector(len(bits), amp)


def zero_state(num_wires: int) -> StateVector:
    return state_from_bits("0" * num_wires)


@functools.lru_cache(maxsize=None)
def hadamard_all(m: int) -> UnitaryOperator:
    """m-fold tensor Hadamard; entry (i, j) = (-1)^popcount(i & j) / 2^(m/2)."""
    if m < 1:
        raise ValueError("hadamard_all requires m >= 1")
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    mat = np.array([[1.0]])
    for _ in range(m):
        mat = np.kron(mat, h)
    return UnitaryOperator(m, mat.astype(np.complex128))


@functools.lru_cache(maxsize=None)
def _gate_unitary(name: str) -> UnitaryOperator:
    s = 1 / np.sqrt(2.0)
    table = {
        "h": np.array([[s, s], [s, -s]]),
        "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
        "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
        # control is the gate's wire 0 (MSB of the 2-wire block)
        "cnot": np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]
        ),
    }
    return UnitaryOperator(_GATE_ARITY[name], table[name].astype(np.complex128))


# -- application ------------------------------------------------------------


def _check_wires(num_wires: int, wires: tuple[int, ...], expected: int | None = None) -> None:
    if expected is not None and len(wires) != expected:
        raise ValueError(f"expected {expected} wires, got {len(wires)}")
    if len(set(wires)) != len(wires):
        raise ValueError(f"wires must be distinct, got {wires}")
    if any(w < 0 or w >= num_wires for w in wires):
        raise ValueError(f"wires {wires} out of range for {num_wires}-wire state")


def apply_unitary(
    unitary: UnitaryOperator, state: StateVector, wires: tuple[int, ...] | None = None
) -> StateVector:
    """Apply ``unitary`` to the listed wires; wires[j] carries the operator's wire j."""
    if wires is None:
        wires = tuple(range(state.num_wires))
    wires = tuple(wires)
    _check_wires(state.num_wires, wires, unitary.num_wires)
    k = unitary.num_wires
    arr = state.amplitudes.reshape((2,) * state.num_wires)
    arr = np.moveaxis(arr, wires, range(k))
    block = arr.reshape(2**k, -1)
    block = unitary.matrix @ block
    arr = np.moveaxis(block.reshape((2,) * state.num_wires), range(k), wires)
    return StateVector(state.num_wires, arr.reshape(-1))


def apply_basis_permutation(
    permutation: np.ndarray, state: StateVector, wires: tuple[int, ...]
) -> StateVector:
    """Apply the basis map |i> -> |permutation[i]> to the listed wires.

    Permutation application costs O(2^n) regardless of the operator's wire
    count, which is what lets encryption oracles act on states too large for
    dense matrices.
    """
    wires = tuple(wires)
    perm = np.asarray(permutation)
    k = len(wires)
    if perm.shape != (2**k,):
        raise ValueError(f"permutation of length {perm.shape} does not fit {k} wires")
    _check_wires(state.num_wires, wires)
    arr = np.moveaxis(state.amplitudes.reshape((2,) * state.num_wires), wires, range(k))
    block = arr.reshape(2**k, -1)
    out = np.empty_like(block)
    out[perm] = block
    arr = np.moveaxis(out.reshape((2,) * state.num_wires), range(k), wires)
    return StateVector(state.num_wires, arr.reshape(-1))


def embed_unitary(
    unitary: UnitaryOperator, num_wires: int, wires: tuple[int, ...]
) -> UnitaryOperator:
    """Dense embedding of ``unitary`` on the listed wires of a larger register."""
    wires = tuple(wires)
    _check_wires(num_wires, wires, unitary.num_wires)
    rest = num_wires - unitary.num_wires
    full = np.kron(unitary.matrix, np.eye(2**rest)) if rest else unitary.matrix
    order = list(wires) + [w for w in range(num_wires) if w not in wires]
    inv = np.argsort(order)
    axes = list(inv) + [num_wires + i for i in inv]
    t = full.reshape((2,) * (2 * num_wires)).transpose(axes)
    return UnitaryOperator(num_wires, t.reshape(2**num_wires, 2**num_wires))


# -- reduction and measurement ----------------------------------------------


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...]) -> DensityMatrix:
    """Reduced state on the kept wires (listed order becomes the new order)."""
    keep = tuple(keep)
    n = rho.num_wires
    _check_wires(n, keep)
    if not keep:
        raise ValueError("must keep at least one wire")
    drop = [w for w in range(n) if w not in keep]
    k = len(keep)
    order = list(keep) + drop
    t = rho.matrix.reshape((2,) * (2 * n))
    t = t.transpose(order + [n + w for w in order])
    t = t.reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    return DensityMatrix(k, np.einsum("ajbj->ab", t))


def _measure_block(
    state: StateVector, wires: tuple[int, ...], rng: np.random.Generator
) -> tuple[int, np.ndarray, float]:
    k = len(wires)
    arr = np.moveaxis(state.amplitudes.reshape((2,) * state.num_wires), wires, range(k))
    block = arr.reshape(2**k, -1)
    probs = np.abs(block) ** 2
    probs = probs.sum(axis=1)
    probs = probs / probs.sum()
    outcome = int(rng.choice(2**k, p=probs))
    return outcome, block, float(probs[outcome])


def measure_computational(
    state: StateVector, wires: tuple[int, ...], rng: np.random.Generator
) -> tuple[str, StateVector]:
    """Born-rule measurement of the listed wires.

    Returns the outcome bitstring (MSB-first over the listed wires, in listed
    order) and the normalized post-measurement state; measured wires collapse
    to the observed basis state but stay in the register.
    """
    wires = tuple(wires)
    _check_wires(state.num_wires, wires)
    if not wires:
        raise ValueError("must measure at least one wire")
    k = len(wires)
    outcome, block, p = _measure_block(state, wires, rng)
    post = np.zeros_like(block)
    post[outcome] = block[outcome] / np.sqrt(p)
    arr = np.moveaxis(post.reshape((2,) * state.num_wires), range(k), wires)
    return format(outcome, f"0{k}b"), StateVector(state.num_wires, arr.reshape(-1))


def measure_and_remove(
    state: StateVector, wires: tuple[int, ...], rng: np.random.Generator
) -> tuple[str, StateVector]:
    """Measure the listed wires, then delete them from the register.

    The post-measurement state is a product across the cut, so deletion is
    exact; remaining wires keep their relative order (indices shift down).
    """
    wires = tuple(wires)
    _check_wires(state.num_wires, wires)
    if not 0 < len(wires) < state.num_wires:
        raise ValueError("must remove at least one wire and keep at least one")
    k = len(wires)
    outcome, block, p = _measure_block(state, wires, rng)
    return format(outcome, f"0{k}b"), StateVector(state.num_wires - k, block[outcome] / np.sqrt(p))


def append_wires(state: StateVector, count: int) -> StateVector:
    """Tensor ``count`` fresh |0> wires onto the low-significance end."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return state
    amp = np.zeros(2 ** (state.num_wires + count), dtype=np.complex128)
    amp[np.arange(state.dim) << count] = state.amplitudes
    return StateVector(state.num_wires + count, amp)


# -- distances ---------------------------------------------------------------


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    matrix = np.asarray(matrix)
    if np.max(np.abs(matrix - matrix.conj().T)) > 1e-8:
        raise ValueError("trace_norm expects a Hermitian matrix")
    return float(np.abs(np.linalg.eigvalsh(matrix)).sum())


def trace_distance(a: DensityMatrix | StateVector, b: DensityMatrix | StateVector) -> float:
    """(1/2) ||a - b||_tr via eigenvalues of the Hermitian difference."""
    rho = a.to_density() if isinstance(a, StateVector) else a
    sigma = b.to_density() if isinstance(b, StateVector) else b
    if rho.num_wires != sigma.num_wires:
        raise ValueError("states live on different wire counts")
    return 0.5 * trace_norm(rho.matrix - sigma.matrix)


# -- descriptions and random states ------------------------------------------


def run_gates(num_wires: int, gates: tuple[Gate, ...]) -> StateVector:
    """Run a gate list from |0...0>."""
    state = zero_state(num_wires)
    for gate in gates:
        state = apply_unitary(_gate_unitary(gate.name), state, gate.wires)
    return state


def build_state(description: StateDescription) -> DensityMatrix:
    """Exact density matrix of a description (probability-weighted components)."""
    d = 2**description.num_wires
    out = np.zeros((d, d), dtype=np.complex128)
    for p, gates in description.components():
        amp = run_gates(description.num_wires, gates).amplitudes
        out += p * np.outer(amp, amp.conj())
    return DensityMatrix(description.num_wires, out)


def sample_description(
    description: StateDescription, rng: np.random.Generator
) -> StateVector:
    """Draw one pure component of a description (the component for pure ones)."""
    comps = description.components()
    if len(comps) == 1:
        return run_gates(description.num_wires, comps[0][1])
    probs = np.array([p for p, _ in comps])
    idx = int(rng.choice(len(comps), p=probs / probs.sum()))
    return run_gates(description.num_wires, comps[idx][1])


def random_pure_bipartite(
    wires_x: int, wires_y: int, rng: np.random.Generator
) -> StateVector:
    """Haar-random pure state on wires_x + wires_y qubits (normalized Gaussian)."""
    if wires_x < 1 or wires_y < 1:
        raise ValueError("both registers need at least one wire")
    n = wires_x + wires_y
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, vec / np.linalg.norm(vec))


def maximally_entangled(m: int) -> StateVector:
    """2^(-m/2) sum_y |y>|y> on 2m wires."""
    if m < 1:
        raise ValueError("m must be >= 1")
    amp = np.zeros(2 ** (2 * m), dtype=np.complex128)
    y = np.arange(2**m)
    amp[(y << m) | y] = 2.0 ** (-m / 2)
    return StateVector(2 * m, amp)
