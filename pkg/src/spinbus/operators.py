"""Dense operator algebra on small chains of spin-1/2 sites.

Operators are plain complex numpy arrays of shape (2^n, 2^n).  Site 0 is
the leftmost (most significant) tensor factor; this ordering is fixed
package-wide.  Everything here is pure: no function mutates its inputs.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import DomainError, NumericalError

MAX_SITES = 12  # dense cap; the architecture simulations need at most 4

_SINGLE = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "+": np.array([[0, 1], [0, 0]], dtype=complex),  # (x + i y)/2
    "-": np.array([[0, 0], [1, 0]], dtype=complex),  # (x - i y)/2
}


def pauli(axis: str, site: int, n_sites: int) -> np.ndarray:
    """I x ... x sigma_axis x ... x I with sigma at position ``site``."""
    if axis not in _SINGLE:
        raise DomainError(f"unknown Pauli axis {axis!r}")
    if not (1 <= n_sites <= MAX_SITES):
        raise DomainError(f"n_sites must be in [1, {MAX_SITES}], got {n_sites}")
    if not (0 <= site < n_sites):
        raise DomainError(f"site {site} out of range for {n_sites} sites")
    return embed(_SINGLE[axis], [site], n_sites)


def embed(op: np.ndarray, sites: list[int], n_sites: int) -> np.ndarray:
    """Embed a k-site operator on the given sites (most significant first)."""
    op = np.asarray(op, dtype=complex)
    k = len(sites)
    if op.shape != (2**k, 2**k):
        raise DomainError(f"operator shape {op.shape} does not match {k} sites")
    if len(set(sites)) != k or not all(0 <= s < n_sites for s in sites):
        raise DomainError(f"bad site list {sites} for {n_sites} sites")
    rest = [s for s in range(n_sites) if s not in sites]
    full = np.kron(op, np.eye(2 ** (n_sites - k), dtype=complex))
    # full acts on factor order sites + rest; permute tensor axes back to 0..n-1
    order = list(sites) + rest
    perm = [order.index(p) for p in range(n_sites)]
    t = full.reshape((2,) * (2 * n_sites))
    t = np.transpose(t, perm + [n_sites + p for p in perm])
    return np.ascontiguousarray(t.reshape(2**n_sites, 2**n_sites))


def heisenberg_coupling(site_a: int, site_b: int, n_sites: int) -> np.ndarray:
    """sigma_a . sigma_b = xx + yy + zz between two sites."""
    return sum(
        pauli(ax, site_a, n_sites) @ pauli(ax, site_b, n_sites) for ax in "xyz"
    )


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    """Max-norm Hermiticity test, scaled by the operator's own magnitude."""
    m = np.asarray(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * scale)


def is_unitary(m: np.ndarray, tol: float = 1e-8) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def expm_h(h: np.ndarray, angle_t: float) -> np.ndarray:
    """exp(-i * H * angle_t) for Hermitian H, by eigendecomposition.

    The product H * angle_t must be dimensionless (H in rad/s with t in
    seconds, or H dimensionless with angle_t in radians).
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise DomainError("expm_h requires a Hermitian matrix")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * angle_t)) @ v.conj().T


def evolve_td(
    hamiltonian_fn: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """Time-ordered propagator by the exponential midpoint rule.

    Each step applies exp(-i H(t_mid) dt); the result is unitary by
    construction and converges with O(dt^2) error.  ``hamiltonian_fn``
    must return matrices in angular-frequency units (rad/s).
    """
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    dt = (t1 - t0) / steps
    mids = t0 + (np.arange(steps) + 0.5) * dt
    hs = np.stack([np.asarray(hamiltonian_fn(t), dtype=complex) for t in mids])
    scale = max(1.0, float(np.max(np.abs(hs))))
    if np.max(np.abs(hs - np.conj(np.swapaxes(hs, -1, -2)))) > 1e-10 * scale:
        raise DomainError("hamiltonian_fn returned a non-Hermitian matrix")
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * w * dt)
    u = np.eye(hs.shape[-1], dtype=complex)
    for k in range(steps):
        u = (v[k] * phases[k]) @ v[k].conj().T @ u
    if not is_unitary(u, 1e-8):
        raise NumericalError("evolve_td produced a non-unitary propagator")
    return u


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|Tr(U^dag V)| / dim, invariant under a global phase of either argument."""
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise DomainError(f"dimension mismatch {u.shape} vs {v.shape}")
    if not (is_unitary(u) and is_unitary(v)):
        raise DomainError("fidelity is defined for unitary operators")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


def global_phase(u: np.ndarray, v: np.ndarray) -> float:
    """Phase phi with v ~ e^{i phi} u (the argument of Tr(U^dag V))."""
    return float(np.angle(np.trace(np.asarray(u).conj().T @ np.asarray(v))))


def operator_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max-norm distance after aligning the global phase of u to v."""
    phi = global_phase(u, v)
    return float(np.max(np.abs(np.exp(1j * phi) * np.asarray(u) - np.asarray(v))))
