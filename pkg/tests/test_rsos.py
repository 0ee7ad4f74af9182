"""Height-chain exact diagonalization: bases, algebra, density matrices,
twisted replica traces."""

import math

import numpy as np
import pytest

from cyclorb import rsos


class TestBasis:
    def test_counts_match_adjacency_traces(self):
        for m in range(2, 7):
            for L in range(2, 17, 2):
                basis = rsos.enumerate_heights(m, L)
                assert basis.dim == rsos.basis_count(m, L)

    def test_small_counts(self):
        assert rsos.enumerate_heights(4, 2).dim == 6
        assert rsos.enumerate_heights(4, 4).dim == 14

    def test_two_heights(self):
        for L in (2, 6, 10):
            assert rsos.enumerate_heights(2, L).dim == 2

    def test_odd_length_rejected_and_trace_zero(self):
        for m in (3, 4, 5):
            with pytest.raises(rsos.BasisError):
                rsos.enumerate_heights(m, 7)
            assert rsos.basis_count(m, 7) == 0

    def test_states_satisfy_constraint(self):
        basis = rsos.enumerate_heights(5, 6)
        diffs = np.abs(np.diff(np.column_stack([basis.states, basis.states[:, :1]]), axis=1))
        assert np.all(diffs == 1)

    def test_dump_format(self):
        basis = rsos.enumerate_heights(3, 4)
        lines = basis.dump().strip().splitlines()
        assert len(lines) == basis.dim
        assert all(len(ln) == 4 and ln.isdigit() for ln in lines)


class TestTemperleyLieb:
    @pytest.mark.parametrize("m,k", [(4, 3), (4, 1), (5, 1), (6, 5)])
    def test_relations(self, m, k):
        L = 6
        basis = rsos.enumerate_heights(m, L)
        es = [rsos.temperley_lieb_generator(basis, k, i).toarray() for i in range(L)]
        beta = 2 * math.cos(math.pi * k / (m + 1))
        for i in range(L):
            assert np.max(np.abs(es[i] @ es[i] - beta * es[i])) < 1e-12
            j = (i + 1) % L
            assert np.max(np.abs(es[i] @ es[j] @ es[i] - es[i])) < 1e-12
            assert np.max(np.abs(es[j] @ es[i] @ es[j] - es[j])) < 1e-12
            for j in range(L):
                if 2 <= abs(i - j) <= L - 2:
                    assert np.max(np.abs(es[i] @ es[j] - es[j] @ es[i])) < 1e-12

    def test_unitary_point_symmetric(self):
        H, _ = rsos.build_rsos_hamiltonian(4, 1, 6)
        assert np.max(np.abs((H - H.T).toarray())) < 1e-14

    def test_nonunitary_real(self):
        H, _ = rsos.build_rsos_hamiltonian(4, 3, 6)
        assert np.isrealobj(H.toarray())

    def test_singular_weights_rejected(self):
        with pytest.raises(rsos.SingularWeightError):
            rsos.build_rsos_hamiltonian(5, 2, 4)  # gcd(k, m+1) > 1: sin vanishes


class TestEigensystem:
    def test_translation_commutes(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 3, 8)
        T = rsos.translation_operator(basis)
        assert abs(H @ T - T @ H).max() < 1e-12

    def test_pairs_check(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 3, 8)
        pairs = rsos.eigensystem(H, n_states=4, basis=basis)
        for p in pairs:
            assert p.check(H)

    def test_biorthonormality(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 3, 8)
        pairs = rsos.eigensystem(H, n_states=6, basis=basis)
        for i, pi in enumerate(pairs):
            for j, pj in enumerate(pairs):
                if abs(pi.energy - pj.energy) > 1e-8:
                    assert abs(pi.left @ pj.right) < 1e-8

    def test_unitary_left_equals_right(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 1, 8)
        pairs = rsos.eigensystem(H, n_states=3, basis=basis)
        p = pairs[0]
        r = p.right / np.linalg.norm(p.right)
        w = p.left / np.linalg.norm(p.left)
        assert min(np.max(np.abs(w - r)), np.max(np.abs(w + r))) < 1e-8

    def test_state_identification(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 3, 10)
        g = rsos.select_state(H, basis, "ground")
        v = rsos.select_state(H, basis, "vacuum")
        assert g.energy.real < v.energy.real
        assert abs(g.momentum_phase - 1) < 1e-8
        assert abs(v.momentum_phase - 1) < 1e-8
        # conformal gap ratio (x_1 - x_phi)/(x_dphi - x_phi) -> (2/5)/1
        pairs = rsos.eigensystem(H, n_states=8, basis=basis)
        e_dphi = min(p.energy.real for p in pairs
                     if abs(p.momentum_phase - np.exp(2j * np.pi / 10)) < 1e-6)
        ratio = (v.energy.real - g.energy.real) / (e_dphi - g.energy.real)
        assert abs(ratio - 0.4) < 0.05

    def test_dense_vs_iterative(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 3, 10)  # dim 246: dense path
        dense = rsos.eigensystem(H, n_states=4, basis=basis)
        import scipy.sparse.linalg as spla
        ev = np.sort_complex(spla.eigs(H, k=8, which="SR", tol=0)[0])
        lowest = sorted(set(np.round(e.real, 9) for e in ev))[:2]
        assert abs(dense[0].energy.real - lowest[0]) < 1e-9
        assert abs(lowest[1] - dense[2].energy.real) < 1e-9

    def test_spectrum_conjugation_closed(self):
        H, _ = rsos.build_rsos_hamiltonian(4, 3, 8)
        ev = np.linalg.eigvals(H.toarray())
        for e in ev:
            assert np.min(np.abs(ev - e.conjugate())) < 1e-8


@pytest.fixture(scope="module")
def chain_10():
    H, basis = rsos.build_rsos_hamiltonian(4, 3, 10)
    g = rsos.select_state(H, basis, "ground")
    return basis, g


class TestReducedDensity:
    @pytest.fixture()
    def setup(self, chain_10):
        return chain_10

    def test_trace_one(self, setup):
        basis, g = setup
        for j in (1, 4, 8):
            rd = rsos.reduced_density(basis, g, 0, j)
            assert abs(np.trace(rd.matrix) - 1.0) < 1e-12

    def test_block_structure(self, setup):
        basis, g = setup
        rd = rsos.reduced_density(basis, g, 0, 4)
        off = ((rd.block_labels[:, None, 0] != rd.block_labels[None, :, 0])
               | (rd.block_labels[:, None, 1] != rd.block_labels[None, :, 1]))
        assert np.max(np.abs(rd.matrix[off])) == 0.0

    def test_single_site_diagonal(self, setup):
        basis, g = setup
        rd = rsos.reduced_density(basis, g, 0, 0)
        offdiag = rd.matrix - np.diag(np.diag(rd.matrix))
        assert np.max(np.abs(offdiag)) == 0.0

    def test_unitary_point_psd(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 1, 8)
        g = rsos.select_state(H, basis, "ground")
        rd = rsos.reduced_density(basis, g, 0, 3)
        evals = np.linalg.eigvalsh((rd.matrix + rd.matrix.conj().T).real / 2)
        assert evals.min() > -1e-12
        assert evals.max() < 1.0 + 1e-12

    def test_power_versus_eigenvalues(self, setup):
        basis, g = setup
        rd = rsos.reduced_density(basis, g, 0, 4)
        ev = np.linalg.eigvals(rd.matrix)
        t3 = np.trace(np.linalg.matrix_power(rd.matrix, 3))
        assert abs(t3 - np.sum(ev**3)) < 1e-10


class TestTwistWeights:
    def test_loop_weight_eigenrelation(self):
        m, k = 4, 3
        A = rsos.adjacency_matrix(m)
        lam = math.pi * k / (m + 1)
        for n in (2, 3):
            for q in range(1, m + 1):
                w = rsos.twist_weights(m, k, q, n)
                beta_q = 2 * math.cos(math.pi * q / (m + 1))
                for a in range(1, m + 1):
                    acc = sum(A[a - 1, b - 1]
                              * (math.sin(lam * b) / math.sin(lam * a)) ** n * w[b]
                              for b in range(1, m + 1))
                    assert abs(acc - beta_q * w[a]) < 1e-12

    def test_golden_ratio_weight(self):
        assert abs(2 * math.cos(math.pi / 5) - (1 + math.sqrt(5)) / 2) < 1e-15

    def test_bare_round_trip(self):
        for m, k, n in ((4, 3, 2), (4, 3, 3), (6, 5, 2)):
            xq = rsos.bare_weights(m, k, n)
            for a in range(1, m + 1):
                tot = sum(xq[q] * rsos.twist_weights(m, k, q, n)[a]
                          for q in range(1, m + 1))
                assert abs(tot - 1.0) < 1e-12


class TestRenyiTraces:
    def test_bare_decomposition_exact(self, yl_chain_16):
        basis, v = yl_chain_16["basis"], yl_chain_16["vacuum"]
        rd = rsos.reduced_density(basis, v, 0, 7)
        for N in (2, 3):
            tb, _ = rsos.renyi_twisted(rd, N, 4, 3, "bare")
            xq = rsos.bare_weights(4, 3, N)
            tot = sum(xq[q1] * xq[q2] * rsos.renyi_twisted(rd, N, 4, 3, (q1, q2))[0]
                      for q1 in range(1, 5) for q2 in range(1, 5))
            assert abs(tb - tot) < 1e-10 * max(1.0, abs(tb))

    def test_n_below_two_rejected(self, yl_chain_16):
        basis, v = yl_chain_16["basis"], yl_chain_16["vacuum"]
        rd = rsos.reduced_density(basis, v, 0, 4)
        with pytest.raises(ValueError):
            rsos.renyi_twisted(rd, 1, 4, 3, "bare")

    def test_unitary_entropies_real_nonnegative(self):
        H, basis = rsos.build_rsos_hamiltonian(4, 1, 10)
        g = rsos.select_state(H, basis, "ground")
        curve = rsos.entropy_curve(4, 1, 10, 2, "ground", "bare",
                                   h_twist=0.0, pair=g, basis=basis)
        assert np.max(np.abs(curve["trace"].imag)) < 1e-12
        assert np.all(curve["entropy"].real >= 0)
        assert np.all(curve["trace"].real > 0)

    def test_reflection_symmetry(self, yl_vacuum_curves_16):
        for key, curve in yl_vacuum_curves_16.items():
            tr = curve["trace"].real
            assert np.max(np.abs(tr - tr[::-1])) < 1e-7 * np.max(np.abs(tr))

    def test_collapse_across_sizes(self):
        # rescaled dressed-twist curves at fixed ell/L spread below 5 percent
        vals = {}
        for L in (10, 12, 14):
            H, basis = rsos.build_rsos_hamiltonian(4, 3, L)
            v = rsos.select_state(H, basis, "vacuum")
            c = rsos.entropy_curve(4, 3, L, 2, "vacuum", 3,
                                   h_twist=-11 / 40, pair=v, basis=basis)
            vals[L] = dict(zip((c["ell"] / L).round(6), c["rescaled"].real))
        common = set(vals[10]) & set(vals[12]) & set(vals[14])
        assert common
        for s in common:
            trio = [vals[L][s] for L in (10, 12, 14)]
            spread = (max(trio) - min(trio)) / abs(np.mean(trio))
            assert spread < 0.05

    def test_unitary_slope_standard(self):
        # (m,k) = (4,1): identity-dressed vacuum trace slope -> (N+1) c / (6N)
        # with c = 4/5; wide window averages out the even-odd lattice
        # oscillation of the unitary chain
        L, N = 16, 2
        H, basis = rsos.build_rsos_hamiltonian(4, 1, L)
        g = rsos.select_state(H, basis, "ground")
        curve = rsos.entropy_curve(4, 1, L, N, "ground", 1,
                                   h_twist=0.0, pair=g, basis=basis)
        sel = slice(1, 14)
        ell = curve["ell"][sel]
        S = (L / np.pi) * np.sin(np.pi * ell / L)
        coef = -np.polyfit(np.log(S), np.log(curve["trace"].real[sel]), 1)[0] / (N - 1)
        want = (N + 1) * (4 / 5) / (6 * N)
        assert abs(coef - want) / want < 0.05


class TestCurveCsv:
    def test_format(self, yl_vacuum_curves_16):
        curve = yl_vacuum_curves_16[(2, "3")]
        text = rsos.curve_csv(curve, 3)
        lines = text.strip().splitlines()
        assert lines[0].startswith("L,ell,N,q_or_bare")
        assert len(lines) == 16
        assert lines[1].split(",")[0] == "16"
