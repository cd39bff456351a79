"""One- and two-qubit Clifford groups and stabilizer states, by enumeration.

Groups are generated breadth-first from H, S (on every wire) and CNot (both
orientations), identifying matrices that differ by a global phase. The
tables are built on first use and cached.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Optional

import numpy as np

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])
I2 = np.eye(2, dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

# breadth-first depth bounds per register size
WORD_BOUND = {1: 12, 2: 20}


def phase_key(v: np.ndarray, decimals: int = 8) -> bytes:
    """Hashable key of an array modulo global phase."""
    flat = v.ravel()
    idx = int(np.argmax(np.abs(flat) > 1e-9))
    w = flat * (abs(flat[idx]) / flat[idx])
    w = np.round(w, decimals) + 0.0  # clears negative zeros
    return w.tobytes()


def generators(n: int) -> list[tuple[str, np.ndarray]]:
    if n == 1:
        return [("h", H), ("s", S)]
    if n == 2:
        return [
            ("h0", np.kron(H, I2)),
            ("h1", np.kron(I2, H)),
            ("s0", np.kron(S, I2)),
            ("s1", np.kron(I2, S)),
            ("cnot01", CNOT),
            ("cnot10", SWAP @ CNOT @ SWAP),
        ]
    raise ValueError("tables are bundled for 1 and 2 qubits only")


@lru_cache(maxsize=None)
def clifford_group(n: int) -> tuple[tuple[tuple[str, ...], np.ndarray], ...]:
    """Every n-qubit Clifford up to global phase, as (word, matrix) pairs.

    Words list generator names in application order.
    """
    gens = generators(n)
    start = np.eye(2**n, dtype=complex)
    seen = {phase_key(start): ((), start)}
    frontier = [((), start)]
    for _ in range(WORD_BOUND[n]):
        nxt = []
        for word, u in frontier:
            for name, g in gens:
                v = g @ u
                key = phase_key(v)
                if key not in seen:
                    seen[key] = (word + (name,), v)
                    nxt.append(seen[key])
        if not nxt:
            break
        frontier = nxt
    return tuple(seen.values())


@lru_cache(maxsize=None)
def stabilizer_states(n: int) -> tuple[np.ndarray, ...]:
    """Every n-qubit stabilizer state up to global phase (orbit of |0...0>)."""
    zero = np.zeros(2**n, dtype=complex)
    zero[0] = 1
    seen: dict[bytes, np.ndarray] = {}
    for _, u in clifford_group(n):
        v = u @ zero
        seen.setdefault(phase_key(v), v)
    return tuple(seen.values())


def phase_between(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> Optional[complex]:
    """lam with |lam| = 1 and a = lam b, or None."""
    idx = int(np.argmax(np.abs(b)))
    if abs(b[idx]) <= tol:
        return None
    lam = a[idx] / b[idx]
    if abs(abs(lam) - 1) > tol:
        return None
    lam /= abs(lam)
    if np.max(np.abs(a - lam * b)) <= tol:
        return complex(lam)
    return None


def find_in_table(phi: np.ndarray, tol: float = 1e-10) -> Optional[int]:
    """Index of phi in the bundled table (up to global phase)."""
    phi = np.asarray(phi, dtype=complex).ravel()
    n = int(phi.size).bit_length() - 1
    if n not in WORD_BOUND or 2**n != phi.size:
        return None
    for i, s in enumerate(stabilizer_states(n)):
        if phase_between(phi, s, tol) is not None:
            return i
    return None
