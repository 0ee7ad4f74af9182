"""Quantum Ising chain in an imaginary longitudinal field.

    H = -1/2 sum_j ( lambda sx_j sx_{j+1} + sz_j + i h sx_j ),

periodic, 0 < lambda < 1.  H is complex symmetric; with P = prod_j sz_j one
has P H P = H^dagger, so the spectrum is closed under conjugation.  Below a
size-dependent threshold h_c the two lowest levels are real; at h_c they
merge into a complex-conjugate pair (the finite-size shadow of the edge
singularity).

The density matrix is the bi-orthogonal one, rho = r0 w0 with w0 r0 = 1;
for a complex-symmetric matrix w0 is just the transpose of r0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig as dense_eig, eigvals as dense_eigvals

MAX_SITES = 20


class SizeError(ValueError):
    pass


class ComplexGroundStateError(RuntimeError):
    """Requested a real ground state above the merging threshold."""


def ising_imaginary_chain(lam: float, h: float, L: int) -> np.ndarray:
    """Dense 2^L x 2^L Hamiltonian; verifies P H P = H^dagger at build time."""
    if not 0 < lam < 1:
        raise ValueError("require 0 < lambda < 1")
    if L > MAX_SITES:
        raise SizeError(f"L = {L} > {MAX_SITES}")
    dim = 1 << L
    H = np.zeros((dim, dim), dtype=complex)
    for s in range(dim):
        # sz_j = +1 for bit 0; popcount counts down-spins
        z = L - 2 * bin(s).count("1")
        H[s, s] += -0.5 * z
        for j in range(L):
            jp = (j + 1) % L
            t = s ^ (1 << j) ^ (1 << jp)
            H[t, s] += -0.5 * lam
            f = s ^ (1 << j)
            H[f, s] += -0.5j * h
    P = parity_diagonal(L)
    residual = np.max(np.abs((P[:, None] * H * P[None, :]) - H.conj().T))
    if residual > 1e-12:
        raise AssertionError(f"P H P != H^dagger (residual {residual})")
    return H


def parity_diagonal(L: int) -> np.ndarray:
    """Diagonal of P = prod_j sz_j in the computational basis."""
    dim = 1 << L
    return np.array([1.0 if bin(s).count("1") % 2 == 0 else -1.0 for s in range(dim)])


def lowest_levels(H: np.ndarray, n: int = 4) -> np.ndarray:
    ev = dense_eigvals(H)
    return ev[np.argsort(ev.real)][:n]


def levels_merged(lam: float, h: float, L: int, tol: float = 1e-9) -> bool:
    """True when the two lowest levels form a complex pair."""
    ev = lowest_levels(ising_imaginary_chain(lam, h, L), 2)
    return bool(np.abs(ev[0].imag) > tol)


def critical_field(lam: float, L: int, tol: float = 1e-8) -> float:
    """Merging threshold h_c(lambda, L) by bisection on the complex-pair onset."""
    lo, hi = 0.0, 0.25
    while not levels_merged(lam, hi, L):
        lo, hi = hi, hi * 2.0
        if hi > 64:
            raise RuntimeError("no merging found below h = 64")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if levels_merged(lam, mid, L):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass
class GroundPair:
    energy: complex
    right: np.ndarray
    left: np.ndarray        # covector, left @ right = 1
    overlap_defect: float   # |w.r| / (|w||r|) before normalization


def ground_pair(H: np.ndarray) -> GroundPair:
    """Bi-orthogonal ground pair; for complex-symmetric H the left vector is
    the transpose of the right one (dual-basis covector, not the conjugate)."""
    if np.max(np.abs(H - H.T)) > 1e-12:
        raise ValueError("expected a complex-symmetric Hamiltonian")
    evals, vr = dense_eig(H)
    idx = np.argsort(evals.real)[0]
    e0 = evals[idx]
    if abs(e0.imag) > 1e-9:
        raise ComplexGroundStateError(f"lowest level is complex: {e0}")
    r = vr[:, idx]
    w = r.copy()
    ov = w @ r
    defect = abs(ov) / (np.linalg.norm(w) * np.linalg.norm(r))
    if defect < 1e-10:
        raise RuntimeError("defective ground pair (Jordan block at threshold?)")
    return GroundPair(energy=complex(e0), right=r, left=w / ov, overlap_defect=float(defect))


def renyi2_profile(H: np.ndarray, L: int) -> np.ndarray:
    """S_2(ell) for ell = 1..L-1 from rho = r0 w0, subsystem = first ell sites.

    Values are real in the unbroken-symmetry phase (the imaginary parts are
    checked and discarded).
    """
    gp = ground_pair(H)
    out = np.empty(L - 1)
    for ell in range(1, L):
        R = gp.right.reshape(1 << ell, 1 << (L - ell))
        W = gp.left.reshape(1 << ell, 1 << (L - ell))
        rho = R @ W.T
        t2 = np.trace(rho @ rho)
        if abs(t2.imag) > 1e-8 * max(1.0, abs(t2.real)):
            raise RuntimeError(f"Tr rho^2 not real: {t2}")
        s2 = -np.log(complex(t2))
        out[ell - 1] = s2.real
    return out


def crossover_study(lam: float, L: int, h_fractions) -> dict:
    """S_2 profiles at h = fraction * h_c(lam, L) for each fraction in (0, 1)."""
    hc = critical_field(lam, L)
    profiles = {}
    for f in h_fractions:
        if not 0 < f < 1:
            raise ValueError("fractions must lie in (0, 1)")
        H = ising_imaginary_chain(lam, f * hc, L)
        profiles[f] = renyi2_profile(H, L)
    return {"h_c": hc, "profiles": profiles}


def midpoint_second_difference(profile: np.ndarray) -> float:
    """Discrete second difference of S_2 at the chain midpoint."""
    mid = len(profile) // 2
    return float(profile[mid - 1] - 2 * profile[mid] + profile[mid + 1])
