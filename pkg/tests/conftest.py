"""Shared fixtures: the large height-chain diagonalizations are expensive,
so they are computed once per session and reused across test modules."""

import pytest

from cyclorb import rsos


@pytest.fixture(scope="session")
def yl_chain_16():
    """(m, k) = (4, 3), L = 16: Hamiltonian, basis, ground and vacuum pairs."""
    H, basis = rsos.build_rsos_hamiltonian(4, 3, 16)
    ground = rsos.select_state(H, basis, "ground")
    vacuum = rsos.select_state(H, basis, "vacuum")
    return {"H": H, "basis": basis, "ground": ground, "vacuum": vacuum}


@pytest.fixture(scope="session")
def yl_vacuum_curves_16(yl_chain_16):
    """Vacuum-state replica curves at L = 16 for the dressed and bare twists."""
    b = yl_chain_16["basis"]
    v = yl_chain_16["vacuum"]
    out = {}
    for N, ins, h in [(2, 3, -11 / 40), (2, 1, -3 / 8), (2, "bare", -3 / 8),
                      (3, 3, -22 / 45), (3, 1, -5 / 9), (3, "bare", -5 / 9)]:
        out[(N, str(ins))] = rsos.entropy_curve(4, 3, 16, N, "vacuum", ins,
                                                h_twist=h, pair=v, basis=b)
    return out


@pytest.fixture(scope="session")
def yl_ground_overlay():
    """Ground-state dressed-twist curves for L = 10..16 with CFT predictions."""
    from cyclorb import catalog as cat

    model = cat.get_model("yl1int_gs")
    data = {}
    for L in (10, 12, 14, 16):
        H, basis = rsos.build_rsos_hamiltonian(4, 3, L)
        g = rsos.select_state(H, basis, "ground")
        bare = rsos.entropy_curve(4, 3, L, 2, "ground", "bare",
                                  h_twist=-3 / 8, pair=g, basis=basis)
        dressed = rsos.entropy_curve(4, 3, L, 2, "ground", 1,
                                     h_twist=-3 / 8, pair=g, basis=basis)
        s = bare["ell"] / L
        pred = cat.predict_on_circle(model, s, dressing_power=-1 / 20)
        data[L] = {"bare": bare["trace"].real, "dressed": dressed["trace"].real,
                   "s": s, "pred": pred}
    return data
