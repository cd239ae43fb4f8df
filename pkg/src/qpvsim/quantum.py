"""State-vector engine for the few-qubit protocol rounds, plus a
density-matrix brute-force oracle used to cross-check it.

Conventions, fixed once and used everywhere:

- Slot 0 is the leftmost tensor factor (basis index bit n-1-slot).
- Bell labels are (z, x) bit pairs naming (I (x) Z^z X^x)|phi+>:
  (0,0) phi+, (0,1) psi+, (1,0) phi-, (1,1) psi-.
- A Bell measurement with outcome (z, x) leaves a teleported qubit in
  X^x Z^z |psi>; the correction operator is Z^z X^x.
- Global phase is ignored; state equality means |<a|b>|^2 within tolerance.

Operations return new states; nothing mutates amplitudes in place. Sampling
uses an explicitly passed numpy Generator, and every sampling operation
accepts a forced outcome so tests can walk all branches (forcing a
zero-probability branch raises).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

ATOL = 1e-12
# Largest register any scheme or attack round needs; keeps exhaustive
# oracle sweeps over outcomes tractable.
MAX_QUBITS = 4

_SQRT_HALF = 1 / np.sqrt(2.0)


class Basis(Enum):
    Z = "Z"
    X = "X"


class BellOutcome(NamedTuple):
    """Bell-measurement outcome bits: z (phase) and x (parity)."""

    z: int
    x: int

    @property
    def label(self) -> str:
        return {(0, 0): "phi+", (0, 1): "psi+", (1, 0): "phi-", (1, 1): "psi-"}[(self.z, self.x)]


BELL_OUTCOMES = (BellOutcome(0, 0), BellOutcome(0, 1), BellOutcome(1, 0), BellOutcome(1, 1))


@dataclass(frozen=True)
class StateVector:
    """Pure state of 1..4 qubits, unit norm, complex amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        size = amps.shape[0] if amps.ndim == 1 else 0
        n = size.bit_length() - 1
        if amps.ndim != 1 or size != 2**n or not (1 <= n <= MAX_QUBITS):
            raise ValueError(f"amplitudes must be a vector of 2**n entries, 1 <= n <= {MAX_QUBITS}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state vector must be normalized, got norm {norm}")

    @property
    def n(self) -> int:
        return int(self.amplitudes.shape[0]).bit_length() - 1


# --- constructors -----------------------------------------------------------

_KET = {
    (0, Basis.Z): np.array([1, 0], dtype=np.complex128),
    (1, Basis.Z): np.array([0, 1], dtype=np.complex128),
    (0, Basis.X): np.array([_SQRT_HALF, _SQRT_HALF], dtype=np.complex128),
    (1, Basis.X): np.array([_SQRT_HALF, -_SQRT_HALF], dtype=np.complex128),
}


def basis_state(bit: int, basis: Basis) -> StateVector:
    """The four challenge states: |0>, |1>, |+>, |->."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    return StateVector(_KET[(bit, basis)].copy())


def bell_vector(k: BellOutcome) -> np.ndarray:
    """Two-qubit amplitudes of the Bell state labeled k."""
    v = np.zeros(4, dtype=np.complex128)
    v[(0 << 1) | k.x] = _SQRT_HALF
    v[(1 << 1) | (1 - k.x)] = _SQRT_HALF * (-1) ** k.z
    return v


def bell_pair() -> StateVector:
    """Fresh phi+ pair."""
    return StateVector(bell_vector(BellOutcome(0, 0)))


def bell_state(k: BellOutcome) -> StateVector:
    return StateVector(bell_vector(k))


def haar_random_qubit(rng: np.random.Generator) -> StateVector:
    """Single qubit drawn from the Haar measure."""
    amps = rng.normal(size=2) + 1j * rng.normal(size=2)
    return StateVector(amps / np.linalg.norm(amps))


def compose(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; a's slots come first."""
    if a.n + b.n > MAX_QUBITS:
        raise ValueError(f"register would exceed {MAX_QUBITS} qubits")
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


# --- sampling helpers -------------------------------------------------------


def _pick(probs: np.ndarray, rng: np.random.Generator | None, force: int | None) -> int:
    if force is not None:
        if probs[force] < ATOL:
            raise ValueError(f"forced outcome index {force} has probability {probs[force]}")
        return force
    if rng is None:
        raise ValueError("an rng is required when no outcome is forced")
    return int(rng.choice(len(probs), p=probs / probs.sum()))


_BELL_MATRIX = np.stack([bell_vector(k) for k in BELL_OUTCOMES])  # rows indexed z<<1|x


def bsm(
    state: StateVector,
    slots: tuple[int, int],
    rng: np.random.Generator | None = None,
    force: BellOutcome | None = None,
) -> tuple[BellOutcome, StateVector | None]:
    """Bell-state measurement on two slots.

    Returns the outcome and the post-measurement state with the measured
    pair factored out (None when nothing remains). Remaining slots keep
    their relative order.
    """
    i, j = slots
    n = state.n
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"bad slot pair {slots} for {n}-qubit state")
    tensor = state.amplitudes.reshape((2,) * n)
    moved = np.moveaxis(tensor, (i, j), (0, 1)).reshape(4, -1)
    branches = _BELL_MATRIX.conj() @ moved  # (4, 2**(n-2))
    probs = np.einsum("ij,ij->i", branches, branches.conj()).real
    idx = _pick(probs, rng, None if force is None else (force.z << 1) | force.x)
    outcome = BELL_OUTCOMES[idx]
    if n == 2:
        return outcome, None
    remnant = branches[idx] / np.sqrt(probs[idx])
    return outcome, StateVector(remnant.reshape(-1))


def measure(
    state: StateVector,
    slot: int,
    basis: Basis,
    rng: np.random.Generator | None = None,
    force: int | None = None,
) -> tuple[int, StateVector]:
    """Projective single-qubit measurement in the Z or X basis.

    Returns (outcome bit, collapsed state). The measured qubit stays in the
    register, collapsed to the outcome eigenstate.
    """
    n = state.n
    if not 0 <= slot < n:
        raise ValueError(f"slot {slot} out of range for {n}-qubit state")
    vecs = np.stack([_KET[(0, basis)], _KET[(1, basis)]])
    tensor = state.amplitudes.reshape((2,) * n)
    moved = np.moveaxis(tensor, slot, 0).reshape(2, -1)
    branches = vecs.conj() @ moved  # (2, rest)
    probs = np.einsum("ij,ij->i", branches, branches.conj()).real
    idx = _pick(probs, rng, force)
    rest = branches[idx] / np.sqrt(probs[idx])
    post = np.einsum("i,j->ij", vecs[idx], rest).reshape((2,) + (2,) * (n - 1))
    post = np.moveaxis(post, 0, slot)
    return idx, StateVector(post.reshape(-1))


def apply_pauli(state: StateVector, slot: int, k: BellOutcome) -> StateVector:
    """Apply Z^z X^x (X first, then Z) to one slot."""
    n = state.n
    if not 0 <= slot < n:
        raise ValueError(f"slot {slot} out of range for {n}-qubit state")
    tensor = state.amplitudes.reshape((2,) * n)
    moved = np.moveaxis(tensor, slot, 0)
    out = pauli_matrix(k) @ moved.reshape(2, -1)
    out = np.moveaxis(out.reshape((2,) + (2,) * (n - 1)), 0, slot)
    return StateVector(out.reshape(-1))


def teleport(
    psi: StateVector,
    rng: np.random.Generator | None = None,
    force: BellOutcome | None = None,
) -> tuple[BellOutcome, StateVector]:
    """Teleport a single qubit over a fresh phi+ pair.

    Returns (outcome, receiver qubit). The receiver holds X^x Z^z |psi>
    until the Z^z X^x correction is applied.
    """
    if psi.n != 1:
        raise ValueError("teleport moves exactly one qubit")
    full = compose(psi, bell_pair())
    outcome, remnant = bsm(full, (0, 1), rng, force)
    assert remnant is not None
    return outcome, remnant


def relabel_bsm(prior: BellOutcome, observed: BellOutcome) -> BellOutcome:
    """Compose Pauli frames: a pair relabeled by `prior` measured with raw
    outcome `observed` has true label prior XOR observed, component-wise."""
    return BellOutcome(prior.z ^ observed.z, prior.x ^ observed.x)


def correction_bit(k: BellOutcome, basis: Basis) -> int:
    """Outcome flip that X^x Z^z induces on a basis-b eigenstate measurement:
    x if b = Z (X flips computational outcomes), z if b = X."""
    return k.x if basis is Basis.Z else k.z


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2; the global-phase-free equality metric for pure states."""
    if a.n != b.n:
        raise ValueError("fidelity needs equal qubit counts")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def reduced_density(state: StateVector, keep: tuple[int, ...]) -> np.ndarray:
    """Reduced density matrix of the kept slots (ascending order)."""
    n = state.n
    keep = tuple(sorted(keep))
    if len(set(keep)) != len(keep) or not keep or any(not 0 <= q < n for q in keep):
        raise ValueError(f"bad keep set {keep} for {n}-qubit state")
    drop = tuple(q for q in range(n) if q not in keep)
    tensor = state.amplitudes.reshape((2,) * n)
    rho = np.tensordot(tensor, tensor.conj(), axes=(drop, drop))
    d = 2 ** len(keep)
    return rho.reshape(d, d)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2) * trace norm of rho - sigma."""
    return float(0.5 * np.linalg.svd(rho - sigma, compute_uv=False).sum())


# --- density-matrix oracle --------------------------------------------------
#
# Everything below recomputes measurement statistics from projector algebra
# on density matrices, sharing no code path with the state-vector engine
# above except the basis/Bell vector constants. Tests use it to cross-check
# every sampling branch.

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_I2 = np.eye(2, dtype=np.complex128)


def pauli_matrix(k: BellOutcome) -> np.ndarray:
    """Z^z X^x as a 2x2 matrix."""
    m = _I2
    if k.x:
        m = _X @ m
    if k.z:
        m = _Z @ m
    return m


def density(state: StateVector) -> np.ndarray:
    return np.outer(state.amplitudes, state.amplitudes.conj())


def validate_density_matrix(rho: np.ndarray, atol: float = ATOL) -> None:
    """Hermitian, unit trace, positive semidefinite; raises otherwise."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not np.allclose(rho, rho.conj().T, atol=atol):
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > max(atol, 1e-9):
        raise ValueError(f"density matrix trace must be 1, got {np.trace(rho)}")
    if np.linalg.eigvalsh(rho).min() < -max(atol, 1e-9):
        raise ValueError("density matrix must be positive semidefinite")


def basis_projectors(basis: Basis) -> tuple[np.ndarray, np.ndarray]:
    v0, v1 = _KET[(0, basis)], _KET[(1, basis)]
    return np.outer(v0, v0.conj()), np.outer(v1, v1.conj())


def bell_projector(k: BellOutcome) -> np.ndarray:
    v = bell_vector(k)
    return np.outer(v, v.conj())


def embed(op: np.ndarray, slots: tuple[int, ...], n: int) -> np.ndarray:
    """Extend an operator on `slots` to the full n-qubit space."""
    k = len(slots)
    if op.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {op.shape} does not match {k} slots")
    rest = [q for q in range(n) if q not in slots]
    full = np.kron(op, np.eye(2 ** (n - k), dtype=np.complex128))
    full = full.reshape((2,) * (2 * n))
    order = list(slots) + rest  # logical qubit carried by each current axis
    perm = tuple(int(p) for p in np.argsort(order))
    full = full.transpose(perm + tuple(n + p for p in perm))
    return full.reshape(2**n, 2**n)


def project(rho: np.ndarray, projector: np.ndarray) -> tuple[float, np.ndarray]:
    """Born probability and renormalized post-measurement density matrix."""
    prob = float(np.trace(projector @ rho).real)
    if prob < ATOL:
        return prob, rho
    post = projector @ rho @ projector.conj().T / prob
    return prob, post


def partial_trace(rho: np.ndarray, keep: tuple[int, ...], n: int) -> np.ndarray:
    """Partial trace of an n-qubit density matrix onto the kept slots."""
    keep = tuple(sorted(keep))
    drop = tuple(q for q in range(n) if q not in keep)
    t = rho.reshape((2,) * (2 * n))
    row_drop = drop
    col_drop = tuple(n + q for q in drop)
    out = np.trace(
        t.reshape((2,) * (2 * n)).transpose(
            tuple(q for q in range(n) if q in keep)
            + tuple(n + q for q in range(n) if q in keep)
            + row_drop
            + col_drop
        )
        .reshape(2 ** len(keep), 2 ** len(keep), 2 ** len(drop), 2 ** len(drop)),
        axis1=2,
        axis2=3,
    )
    return out
