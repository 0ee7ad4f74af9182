"""Exact diagonalization of the critical RSOS height chain.

Basis states are height strings (a_1 ... a_L), a_i in 1..m, with
|a_i - a_{i+1}| = 1 cyclically.  The Hamiltonian H = -sum_i e_i is built from
Temperley-Lieb generators whose weights involve sin(pi k a / (m+1)).

Reduced density matrices are formed from bi-orthonormal eigenpairs
rho = r w (non-Hermitian chains have distinct left/right vectors), and the
replica traces Tr(D rho_A^N) carry diagonal twist insertions on the two
boundary heights of the subsystem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eig as dense_eig

DENSE_LIMIT = 2_000
ITERATIVE_LIMIT = 200_000


class BasisError(ValueError):
    pass


class SingularWeightError(ValueError):
    pass


class DefectivePairError(RuntimeError):
    """w . r ~ 0: the eigenpair sits in a nontrivial Jordan block."""


@dataclass(frozen=True)
class HeightBasis:
    m: int
    L: int
    states: np.ndarray          # (dim, L) int8, lexicographic
    index: dict                 # state bytes -> row

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    def dump(self) -> str:
        """One state per line, heights as digits."""
        return "\n".join("".join(str(int(a)) for a in row) for row in self.states) + "\n"


def adjacency_matrix(m: int) -> np.ndarray:
    A = np.zeros((m, m), dtype=np.int64)
    for a in range(1, m):
        A[a - 1, a] = A[a, a - 1] = 1
    return A


def basis_count(m: int, L: int) -> int:
    """Number of closed height paths: Tr(A^L) for the path-graph adjacency."""
    return int(np.trace(np.linalg.matrix_power(adjacency_matrix(m), L)))


def enumerate_heights(m: int, L: int) -> HeightBasis:
    """All cyclically admissible height strings, lexicographically ordered."""
    if m < 2 or L < 2:
        raise BasisError("need m >= 2 and L >= 2")
    if L % 2 == 1:
        raise BasisError(
            f"odd L = {L}: the height constraint is bipartite, the cyclic basis is empty"
        )
    states = []
    stack = [(a,) for a in range(m, 0, -1)]
    while stack:
        path = stack.pop()
        if len(path) == L:
            if abs(path[-1] - path[0]) == 1:
                states.append(path)
            continue
        a = path[-1]
        for b in (a + 1, a - 1):
            if 1 <= b <= m:
                stack.append(path + (b,))
    states.sort()
    arr = np.array(states, dtype=np.int8)
    index = {arr[i].tobytes(): i for i in range(len(states))}
    return HeightBasis(m=m, L=L, states=arr, index=index)


def _weights(m: int, k: int) -> np.ndarray:
    lam = math.pi * k / (m + 1)
    w = np.array([math.sin(lam * a) for a in range(0, m + 2)])
    if np.any(np.abs(w[1 : m + 1]) < 1e-12):
        raise SingularWeightError(f"sin(lambda a) vanishes for (m, k) = ({m}, {k})")
    return w


def temperley_lieb_generator(basis: HeightBasis, k: int, i: int) -> sp.csr_matrix:
    """e_i acting on height i (0-based site), periodic indexing.

    Matrix elements: for a_{i-1} = a_{i+1} = b,

        <.. a'_i ..| e_i |.. a_i ..> = f(a'_i, a_i) / sin(lambda b),

    with f = sqrt(sin(lambda a') sin(lambda a)) when all weights share one
    sign (symmetric gauge, k = 1), else f = sin(lambda a') (real gauge).
    Both choices represent the same algebra; traces are gauge invariant.
    """
    m, L = basis.m, basis.L
    w = _weights(m, k)
    symmetric = np.all(w[1 : m + 1] > 0) or np.all(w[1 : m + 1] < 0)
    rows, cols, vals = [], [], []
    im1, ip1 = (i - 1) % L, (i + 1) % L
    for s_idx in range(basis.dim):
        s = basis.states[s_idx]
        b = s[im1]
        if s[ip1] != b:
            continue
        a = int(s[i])
        for ap in (b - 1, b + 1):
            if not 1 <= ap <= m:
                continue
            t = s.copy()
            t[i] = ap
            t_idx = basis.index[t.tobytes()]
            if symmetric:
                val = math.sqrt(w[ap] * w[a]) / w[b]
            else:
                val = w[ap] / w[b]
            rows.append(t_idx)
            cols.append(s_idx)
            vals.append(val)
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))


def build_rsos_hamiltonian(m: int, k: int, L: int, basis: Optional[HeightBasis] = None):
    """H = -sum_i e_i on the periodic chain; returns (H, basis)."""
    if not 1 <= k <= m:
        raise ValueError("require 1 <= k <= m")
    if basis is None:
        basis = enumerate_heights(m, L)
    H = sp.csr_matrix((basis.dim, basis.dim))
    for i in range(L):
        H = H - temperley_lieb_generator(basis, k, i)
    return H.tocsr(), basis


def translation_operator(basis: HeightBasis) -> sp.csr_matrix:
    rows = []
    for s_idx in range(basis.dim):
        t = np.roll(basis.states[s_idx], 1)
        rows.append(basis.index[t.tobytes()])
    dim = basis.dim
    return sp.csr_matrix((np.ones(dim), (rows, np.arange(dim))), shape=(dim, dim))


@dataclass
class EigenPair:
    energy: complex
    right: np.ndarray
    left: np.ndarray            # covector: left @ right == 1
    momentum_phase: complex = 1.0

    def check(self, H, tol=1e-10) -> bool:
        r = abs(self.left @ self.right - 1.0) < 1e-12
        hr = np.linalg.norm(H @ self.right - self.energy * self.right)
        hl = np.linalg.norm(self.left @ H - self.energy * self.left)
        scale = np.linalg.norm(self.right) * max(1.0, abs(self.energy))
        return r and hr <= tol * scale and hl <= tol * scale


def eigensystem(H, n_states: int = 6, sector: Optional[str] = None,
                basis: Optional[HeightBasis] = None) -> list[EigenPair]:
    """Lowest-(real part) eigenpairs with bi-orthonormal left covectors.

    Dense solve below DENSE_LIMIT, implicitly-restarted Arnoldi otherwise.
    ``sector="zero_momentum"`` keeps translation-invariant states only
    (requires ``basis``).
    """
    dim = H.shape[0]
    if dim > ITERATIVE_LIMIT:
        raise ValueError(f"dimension {dim} exceeds the iterative solver limit")
    if dim <= DENSE_LIMIT:
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        evals, vl, vr = dense_eig(Hd, left=True, right=True)
        order = np.argsort(evals.real)
        sel = order[: max(4 * n_states, 16)]
        energies = evals[sel]
        rights = vr[:, sel]
        lefts = vl[:, sel].conj()
    else:
        k = min(max(3 * n_states, 12), dim - 2)
        evals_r, vr = spla.eigs(H, k=k, which="SR", tol=0)
        evals_l, vl = spla.eigs(H.T, k=k, which="SR", tol=0)
        order = np.argsort(evals_r.real)
        energies, rights, lefts = [], [], []
        used = set()
        for idx in order:
            e = evals_r[idx]
            jbest, dbest = None, np.inf
            for j in range(len(evals_l)):
                if j in used:
                    continue
                d = abs(evals_l[j] - e)
                if d < dbest:
                    jbest, dbest = j, d
            if jbest is None or dbest > 1e-6 * max(1.0, abs(e)):
                continue
            used.add(jbest)
            energies.append(e)
            rights.append(vr[:, idx])
            lefts.append(vl[:, jbest])
        energies = np.array(energies)
        rights = np.column_stack(rights)
        lefts = np.column_stack(lefts)

    # bi-orthonormalize in clusters of (near-)degenerate eigenvalues, and
    # resolve each cluster into translation eigenstates (degeneracies mix
    # momentum sectors otherwise)
    T = translation_operator(basis) if basis is not None else None
    ncomp = len(energies)
    pairs = []
    done = np.zeros(ncomp, dtype=bool)
    for j in range(ncomp):
        if done[j]:
            continue
        cluster = [i for i in range(ncomp) if abs(energies[i] - energies[j]) < 1e-8]
        for i in cluster:
            done[i] = True
        R = rights[:, cluster]
        W = lefts[:, cluster].T          # rows are covectors
        G = W @ R
        if np.linalg.cond(G) > 1e10:
            raise DefectivePairError(
                f"cluster at E = {energies[j]:.6g} has a singular overlap (Jordan block?)"
            )
        W = np.linalg.solve(G, W)        # now W @ R = identity
        if T is not None and len(cluster) > 1:
            Tsub = W @ (T @ R)
            tvals, tvec = np.linalg.eig(Tsub)
            tvec_left = np.linalg.inv(tvec)
            R = R @ tvec
            W = tvec_left @ W
            phases = tvals
        elif T is not None:
            phases = np.array([complex((W @ (T @ R))[0, 0])])
        else:
            phases = np.ones(len(cluster), dtype=complex)
        for t in range(len(cluster)):
            r = R[:, t].copy()
            w = W[t, :].copy()
            big = np.argmax(np.abs(r))
            ph = r[big] / abs(r[big])
            r, w = r / ph, w * ph
            w = w / (w @ r)
            e = complex(energies[cluster[t]])
            if abs(e.imag) < 1e-9 and np.max(np.abs(r.imag)) < 1e-9 * max(np.max(np.abs(r.real)), 1e-300):
                r, w = r.real.astype(complex), w.real.astype(complex)
                w = w / (w @ r)
            pairs.append(EigenPair(energy=e, right=r, left=w,
                                   momentum_phase=complex(phases[t])))
    if sector == "zero_momentum":
        pairs = [p for p in pairs if abs(p.momentum_phase - 1.0) < 1e-6]
    pairs.sort(key=lambda p: p.energy.real)
    return pairs[:n_states]


def select_state(H, basis: HeightBasis, which: str) -> EigenPair:
    """"ground": lowest energy; "vacuum": next zero-momentum real state."""
    pairs = eigensystem(H, n_states=12, sector="zero_momentum", basis=basis)
    real_pairs = [p for p in pairs if abs(p.energy.imag) < 1e-8]
    if which == "ground":
        return real_pairs[0]
    if which == "vacuum":
        return real_pairs[1]
    raise ValueError("state must be 'ground' or 'vacuum'")


# ---------------------------------------------------------------------------
# reduced density matrices and twisted replica traces


@dataclass
class ReducedDensity:
    sites: tuple                 # (i, j) inclusive, branch heights at i and j
    sub_states: np.ndarray       # (nsub, j-i+1) int8
    matrix: np.ndarray           # dense, trace 1
    block_labels: np.ndarray     # (nsub, 2): boundary heights (a_i, a_j)


def _open_paths(m: int, n_sites: int) -> np.ndarray:
    paths = []
    stack = [(a,) for a in range(m, 0, -1)]
    if n_sites == 1:
        return np.array([[a] for a in range(1, m + 1)], dtype=np.int8)
    while stack:
        p = stack.pop()
        if len(p) == n_sites:
            paths.append(p)
            continue
        for b in (p[-1] + 1, p[-1] - 1):
            if 1 <= b <= m:
                stack.append(p + (b,))
    paths.sort()
    return np.array(paths, dtype=np.int8)


def reduced_density(basis: HeightBasis, pair: EigenPair, i: int, j: int) -> ReducedDensity:
    """rho_A for the interval of sites [i..j] from rho = r w.

    The branch-point heights a_i and a_j are shared between the bra and ket
    sheets of the replicated surface, so matrix elements between blocks with
    differing boundary heights are identically zero; the projection is
    enforced here (it also makes the sweep exactly symmetric under
    exchanging the interval with its complement).
    """
    L = basis.L
    n_sites = (j - i) % L + 1
    if not 1 <= n_sites <= L:
        raise ValueError("bad interval")
    sub = _open_paths(basis.m, n_sites)
    sub_index = {sub[t].tobytes(): t for t in range(len(sub))}
    cols = [(i + t) % L for t in range(n_sites)]
    env_cols = [c for c in range(L) if c not in cols]

    sub_of = np.empty(basis.dim, dtype=np.int64)
    env_key = np.empty(basis.dim, dtype=object)
    for s_idx in range(basis.dim):
        s = basis.states[s_idx]
        sub_of[s_idx] = sub_index[s[cols].tobytes()]
        env_key[s_idx] = s[env_cols].tobytes()

    groups = {}
    for s_idx in range(basis.dim):
        groups.setdefault(env_key[s_idx], []).append(s_idx)

    nsub = len(sub)
    rho = np.zeros((nsub, nsub), dtype=complex)
    r, w = pair.right, pair.left
    for idxs in groups.values():
        idxs = np.asarray(idxs)
        subs = sub_of[idxs]
        rho[np.ix_(subs, subs)] += np.outer(r[idxs], w[idxs])
    labels = np.column_stack([sub[:, 0], sub[:, -1]])
    same_block = ((labels[:, None, 0] == labels[None, :, 0])
                  & (labels[:, None, 1] == labels[None, :, 1]))
    rho[~same_block] = 0.0
    return ReducedDensity(sites=(i, j), sub_states=sub, matrix=rho, block_labels=labels)


def twist_weights(m: int, k: int, q: int, n: int) -> np.ndarray:
    """w[a] = sin(pi q a / (m+1)) / sin(lambda a)^n on a = 1..m (index 0 unused)."""
    if not 1 <= q <= m:
        raise ValueError("1 <= q <= m required")
    lam = math.pi * k / (m + 1)
    out = np.zeros(m + 1)
    for a in range(1, m + 1):
        out[a] = math.sin(math.pi * q * a / (m + 1)) / math.sin(lam * a) ** n
    return out


def bare_weights(m: int, k: int, n: int) -> np.ndarray:
    """Mixing amplitudes x_q of the bare twist over the dressed family.

    Discrete sine transform of sin(lambda a)^n; with the 2/(m+1)
    normalization the round trip sum_q x_q w_q(a) = 1 is exact.
    """
    lam = math.pi * k / (m + 1)
    out = np.zeros(m + 1)
    for q in range(1, m + 1):
        acc = 0.0
        for a in range(1, m + 1):
            acc += math.sin(lam * a) ** n * math.sin(math.pi * q * a / (m + 1))
        out[q] = 2.0 / (m + 1) * acc
    return out


def renyi_twisted(rd: ReducedDensity, N: int, m: int, k: int,
                  insertion) -> tuple[complex, complex]:
    """(trace, entropy) of Tr(D rho_A^N) with the diagonal twist insertion.

    ``insertion``: integer q for the dressed twist t_q, or "bare" for the
    physical twist sum_q x_q t_q.  D acts once on the common boundary
    heights (a_i, a_j), not per replica.
    """
    if N < 2:
        raise ValueError("N >= 2 required")
    rhoN = np.linalg.matrix_power(rd.matrix, N)
    ai = rd.block_labels[:, 0].astype(int)
    aj = rd.block_labels[:, 1].astype(int)
    if insertion == "bare":
        # the bare branch point carries unit weight: sum_q x_q w_q(a) = 1
        d = np.ones(len(ai))
    elif isinstance(insertion, tuple):
        qi, qj = insertion
        d = twist_weights(m, k, qi, N)[ai] * twist_weights(m, k, qj, N)[aj]
    else:
        q = int(insertion)
        wq = twist_weights(m, k, q, N)
        d = wq[ai] * wq[aj]
    value = complex(np.sum(d * np.diag(rhoN)))
    entropy = np.log(value + 0j) / (1 - N)
    return value, entropy


def entropy_curve(m: int, k: int, L: int, N: int, state: str, insertion,
                  h_twist: float, pair: Optional[EigenPair] = None,
                  basis: Optional[HeightBasis] = None) -> dict:
    """Sweep ell = 1..L-1 (branch points at sites 0 and ell).

    Returns columns (ell, trace, entropy, rescaled) where rescaled is
    trace * L^(4 N h_twist / N ... ) -- concretely trace * L^(4 h_twist)
    with h_twist the continuum dimension of the inserted twist operator.
    """
    if basis is None or pair is None:
        H, basis = build_rsos_hamiltonian(m, k, L)
        pair = select_state(H, basis, state)
    ells, traces, entropies, rescaled = [], [], [], []
    for ell in range(1, L):
        rd = reduced_density(basis, pair, 0, ell)
        val, ent = renyi_twisted(rd, N, m, k, insertion)
        ells.append(ell)
        traces.append(val)
        entropies.append(ent)
        rescaled.append(val * L ** (4 * h_twist))
    return {"ell": np.array(ells), "trace": np.array(traces),
            "entropy": np.array(entropies), "rescaled": np.array(rescaled),
            "L": L, "N": N, "insertion": insertion}


def fit_twist_dimension(curve: dict, window: Optional[slice] = None) -> float:
    """Least-squares slope of log|trace| vs log((L/pi) sin(pi ell / L)).

    For a conformal two-point function of twists the slope is -4 h_twist.
    The default window keeps the middle third of the chain, where lattice
    corrections (decaying with the chord length) are smallest.
    """
    L = curve["L"]
    ell = curve["ell"]
    tr = np.abs(curve["trace"])
    if window is None:
        lo = max(int(np.ceil(L / 3)), 2)
        hi = L - lo
        sel = (ell >= lo) & (ell <= hi)
    else:
        sel = window
    xs = np.log((L / np.pi) * np.sin(np.pi * ell[sel] / L))
    ys = np.log(tr[sel])
    slope = np.polyfit(xs, ys, 1)[0]
    return float(-slope / 4.0)


def overlay_fit(lattice_trace: np.ndarray, prediction: np.ndarray) -> tuple[float, float]:
    """One multiplicative constant between lattice data and a prediction.

    Returns (constant, rms_relative_deviation).
    """
    t = np.asarray(lattice_trace, dtype=float)
    p = np.asarray(prediction, dtype=float)
    const = float(np.dot(t, p) / np.dot(p, p))
    rel = (t - const * p) / (const * p)
    return const, float(np.sqrt(np.mean(rel ** 2)))


def curve_csv(curve: dict, q_or_bare) -> str:
    lines = ["L,ell,N,q_or_bare,trace_re,trace_im,entropy_re,entropy_im,rescaled"]
    for i, ell in enumerate(curve["ell"]):
        tr = curve["trace"][i]
        en = curve["entropy"][i]
        rs = curve["rescaled"][i]
        vals = [float(tr.real), float(tr.imag), float(en.real), float(en.imag),
                float(rs.real)]
        lines.append(f"{curve['L']},{ell},{curve['N']},{q_or_bare},"
                     + ",".join(repr(v) for v in vals))
    return "\n".join(lines) + "\n"
