import math

import numpy as np
import pytest

from casimir_lab import dressed
from casimir_lab import modulation as mod
from casimir_lab.hamiltonians import SystemSpec, build_rabi


def spec_with(omega0=1.0, Omega0=0.8, g0=0.05, chi0=0.0, **tones):
    bare = {"omega": omega0, "Omega": Omega0, "g": g0, "chi": chi0, "d": 0.0}
    laws = {name: mod.single_tone(bare[name], depth, eta, w, ph)
            for name, (depth, eta, w, ph) in tones.items()}
    return SystemSpec(omega0=omega0, Omega0=Omega0, g0=g0, chi0=chi0, laws=laws)


def test_resonant_eigenfrequencies_and_angle():
    spec = spec_with(Omega0=1.0)
    for n in (1, 2, 5):
        beta = 2 * 0.05 * math.sqrt(n)
        assert dressed.lambda_bare(spec, n, +1) == pytest.approx(1.0 * n + beta / 2)
        assert dressed.lambda_bare(spec, n, -1) == pytest.approx(1.0 * n - beta / 2)
        assert dressed.mixing_angle(spec, n) == pytest.approx(math.pi / 4)


def test_dressed_example_level_one():
    spec = spec_with()
    assert dressed.lambda_bare(spec, 1, +1) == pytest.approx(1.0118034, abs=1e-7)
    assert dressed.lambda_bare(spec, 1, -1) == pytest.approx(0.7881966, abs=1e-7)


def test_sc_normalization_and_branch_order():
    spec = spec_with()
    for m in range(1, 12):
        s_p, c_p = dressed.sc_coefficients(spec, m, +1)
        s_m, c_m = dressed.sc_coefficients(spec, m, -1)
        assert s_p ** 2 + c_p ** 2 == pytest.approx(1.0, abs=1e-12)
        assert s_m ** 2 + c_m ** 2 == pytest.approx(1.0, abs=1e-12)
        assert dressed.lambda_bare(spec, m, +1) >= dressed.lambda_bare(spec, m, -1)


@pytest.mark.parametrize("Omega0", [0.8, 1.2])
def test_lambda_matches_numerical_jc_spectrum(Omega0):
    spec = spec_with(Omega0=Omega0)
    dim_c = 24
    h = build_rabi(spec, 0.0, dim_c, rwa=True)
    eig = np.linalg.eigvalsh(h.entries)
    for m in range(0, 21):
        for branch in dressed.branch_states(m):
            lam = dressed.lambda_bare(spec, m, branch)
            assert np.abs(eig - lam).min() < 1e-12


def test_dressed_states_match_numerical_eigenvectors():
    spec = spec_with(Omega0=1.15, g0=0.07)
    dim_c = 16
    h = build_rabi(spec, 0.0, dim_c, rwa=True).entries
    for m in range(1, 8):
        for branch in (+1, -1):
            lam = dressed.lambda_bare(spec, m, branch)
            s, c = dressed.sc_coefficients(spec, m, branch)
            # |g,m> index m; |e,m-1> index dim_c + m - 1
            vec = np.zeros(2 * dim_c, dtype=complex)
            vec[m] = s
            vec[dim_c + m - 1] = c
            assert np.linalg.norm(h @ vec - lam * vec) < 1e-12


def test_pi_lambda_l_match_numeric_dressed_elements():
    spec = spec_with(Omega0=1.1, g0=0.06)
    dim_c = 20
    h = build_rabi(spec, 0.0, dim_c, rwa=True).entries
    a = np.zeros((dim_c, dim_c))
    n = np.arange(1, dim_c)
    a[n - 1, n] = np.sqrt(n)
    a_full = np.kron(np.eye(2), a)
    sm = np.zeros((2, 2))
    sm[0, 1] = 1.0
    asm = np.kron(sm, np.eye(dim_c)) @ a_full  # a sigma_-
    ee = np.kron(np.diag([0.0, 1.0]), np.eye(dim_c))
    n_full = np.kron(np.eye(2), np.diag(np.arange(dim_c, dtype=float)))
    coup = a_full @ np.kron(sm.T, np.eye(dim_c)) + a_full.T @ np.kron(sm, np.eye(dim_c))

    def numeric_state(m, branch):
        s, c = dressed.sc_coefficients(spec, m, branch)
        vec = np.zeros(2 * dim_c)
        if m == 0:
            vec[0] = 1.0
        else:
            vec[m] = s
            vec[dim_c + m - 1] = c
        return vec

    for m in range(0, 6):
        for tb in dressed.branch_states(m):
            bra = numeric_state(m, tb)
            for sb in dressed.branch_states(m + 2):
                ket2 = numeric_state(m + 2, sb)
                assert bra @ asm @ ket2 == pytest.approx(
                    dressed.lambda_element(spec, m + 2, tb, sb), abs=1e-12)
                assert bra @ a_full @ a_full @ ket2 == pytest.approx(
                    dressed.ladder_element(spec, 2, m + 2, tb, sb), abs=1e-12)
            for sb in dressed.branch_states(m + 1):
                ket1 = numeric_state(m + 1, sb)
                assert bra @ a_full @ ket1 == pytest.approx(
                    dressed.ladder_element(spec, 1, m + 1, tb, sb), abs=1e-12)
            for sb in dressed.branch_states(m):
                ket0 = numeric_state(m, sb)
                assert bra @ n_full @ ket0 == pytest.approx(
                    dressed.pi_element(spec, "omega", m, tb, sb), abs=1e-12)
                assert bra @ ee @ ket0 == pytest.approx(
                    dressed.pi_element(spec, "Omega", m, tb, sb), abs=1e-12)
                assert bra @ coup @ ket0 == pytest.approx(
                    dressed.pi_element(spec, "g", m, tb, sb), abs=1e-12)


def test_pi_elements_symmetric():
    spec = spec_with()
    for m in range(1, 8):
        for kind in ("omega", "Omega", "g"):
            assert dressed.pi_element(spec, kind, m, +1, -1) == pytest.approx(
                dressed.pi_element(spec, kind, m, -1, +1), abs=1e-14)


def test_l1_selection_rules_dispersive():
    # L_{1,m+1,D,D} ~ sqrt(m+1), L_{1,m+1,D,-D} ~ g0/|Delta_-|, with
    # next-order corrections O((g0 sqrt(m)/Delta_-)^2)
    spec = spec_with(Omega0=0.8, g0=0.004)
    d = dressed.ground_branch(spec)
    ratio2 = (0.004 / 0.2) ** 2
    for m in range(0, 6):
        exact_dd = dressed.ladder_element(spec, 1, m + 1, d if m else +1, d)
        assert exact_dd == pytest.approx(math.sqrt(m + 1), rel=3 * (m + 1) * ratio2)
        if m >= 1:
            exact_cross = dressed.ladder_element(spec, 1, m + 1, d, -d)
            assert abs(exact_cross) == pytest.approx(0.004 / 0.2,
                                                     rel=3 * (m + 1) * ratio2)


def test_nu2_matches_resonant_closed_form():
    spec = spec_with(Omega0=1.0, g0=0.02, chi0=0.01)
    _, dp, dchi = __import__("casimir_lab.effective", fromlist=["single_atom_shifts"]) \
        .single_atom_shifts(spec)
    for m in range(0, 7):
        for branch in dressed.branch_states(m):
            general = dressed.lambda_corrected(spec, m, branch)
            closed = dressed.lambda_bar_resonant(spec, m, branch)
            # closed form drops O(g0 sqrt(m)/omega0) of the shift itself
            shift_scale = dp + (m + 2) * dchi
            slack = 6.0 * shift_scale * (0.02 * math.sqrt(m + 2) + 2 * 0.01 * (m + 2) * 0.0 + 0.02)
            assert abs(general - closed) <= slack, (m, branch, general, closed)


def test_nu2_matches_dispersive_closed_form():
    spec = spec_with(Omega0=0.8, g0=0.01, chi0=0.005)
    d = dressed.ground_branch(spec)
    for m in range(0, 7):
        for branch in dressed.branch_states(m):
            general = dressed.lambda_corrected(spec, m, branch)
            closed = dressed.lambda_bar_dispersive(spec, m, branch == d or m == 0)
            ratio = (0.01 * math.sqrt(m + 2) / 0.2) ** 2
            shift_scale = abs(dressed.lambda_bare(spec, m, branch)) + 1.0
            assert abs(general - closed) <= 10.0 * ratio * (
                0.01 ** 2 / 0.2 * (m + 2) + 4 * 0.005 ** 2 / 1.8 * (m + 2)) + 1e-12, (
                m, branch, general, closed)


def test_nu1_matches_closed_pump_shift():
    spec = spec_with(Omega0=1.0, g0=0.02, d=(0.01, 1.7, 1.0, 0.0))
    closed = -0.25 * 0.01 ** 2 / (1.0 + 1.7)
    for m in range(0, 5):
        for branch in dressed.branch_states(m):
            nu1 = dressed.nu1_shift(spec, m, branch)
            assert nu1 == pytest.approx(closed, rel=0.1), (m, branch)


def test_theta_general_matches_resonant_exact_channels():
    eta = 2.0
    # chi-modulation only, chi0 = 0: closed form is exact
    spec = spec_with(Omega0=1.0, g0=0.03, chi0=0.0, chi=(1e-3, eta, 1.0, 0.35))
    eps = {"omega": 0.0, "Omega": 0.0, "g": 0.0,
           "chi": 1e-3 * np.exp(0.35j), "d": 0.0}
    for m in range(0, 6):
        for tb in dressed.branch_states(m):
            for sb in dressed.branch_states(m + 2):
                gen = dressed.theta_general(spec, eta, eps, m, tb, sb)
                closed = dressed.theta_resonant_closed(spec, eta, eps, m, tb, sb)
                assert gen == pytest.approx(closed, abs=1e-15), (m, tb, sb)
    # g-modulation only at g0 = 0, chi0 = 0: exact as well
    spec0 = spec_with(Omega0=1.0, g0=0.0, chi0=0.0, g=(1e-3, eta, 1.0, -0.2))
    eps0 = {"omega": 0.0, "Omega": 0.0, "g": 1e-3 * np.exp(-0.2j),
            "chi": 0.0, "d": 0.0}
    for m in range(0, 6):
        for tb in dressed.branch_states(m):
            for sb in dressed.branch_states(m + 2):
                gen = dressed.theta_general(spec0, eta, eps0, m, tb, sb)
                closed = dressed.theta_resonant_closed(spec0, eta, eps0, m, tb, sb)
                assert gen == pytest.approx(closed, abs=1e-15), (m, tb, sb)


def test_theta_resonant_g_channel_leading_term():
    eta = 2.0
    spec = spec_with(Omega0=1.0, g0=0.02, chi0=0.0, g=(1e-3, eta, 1.0, 0.0))
    eps = {"omega": 0.0, "Omega": 0.0, "g": 1e-3, "chi": 0.0, "d": 0.0}
    for m in range(1, 6):
        gen = dressed.theta_general(spec, eta, eps, m, +1, +1)
        lead = -math.sqrt(m + 1) / 4 * 1e-3
        # general formula carries O(g0/eta) corrections on this channel
        assert abs(gen - lead) <= 3 * (0.02 / eta) * abs(lead)


def test_theta_general_matches_dispersive_closed():
    # the stated asymptotic band 3 (g0 sqrt(m)/Delta_-)^2 covers the pure
    # dispersive hierarchy (chi0 = 0); with chi0 on, extra chi0/Delta_-
    # cross terms enter and only a looser order bound applies
    eta = 2.0
    g0 = 0.002
    from casimir_lab.effective import tone_depths

    for chi0, factor in ((0.0, 3.0), (1e-3, 100.0)):
        spec = spec_with(Omega0=0.8, g0=g0, chi0=chi0,
                         omega=(3e-4, eta, 1.0, 0.2),
                         Omega=(2e-4, eta, 1.0, -0.4),
                         g=(2e-4, eta, 1.0, 0.1),
                         chi=((1e-4, eta, 1.0, 0.0) if chi0 else (0.0, eta, 1.0, 0.0)))
        eps = tone_depths(spec, eta)
        d = dressed.ground_branch(spec)
        for m in range(0, 7):
            band = factor * (g0 * math.sqrt(m + 2) / 0.2) ** 2
            for tb in dressed.branch_states(m):
                for sb in dressed.branch_states(m + 2):
                    gen = dressed.theta_general(spec, eta, eps, m, tb, sb)
                    closed = dressed.theta_dispersive_closed(
                        spec, eta, eps, m,
                        (tb == d) if m > 0 else True, sb == d)
                    scale = max(abs(closed), abs(gen))
                    assert abs(gen - closed) <= max(band * scale, 1e-16), (
                        chi0, m, tb, sb, gen, closed)


def test_theta_dd_reproduces_gdce_rate():
    from casimir_lab.effective import theta_gdce, tone_depths
    eta = 2.0
    spec = spec_with(omega0=1.0, Omega0=1.2, g0=0.02, chi0=0.003,
                     omega=(1e-4, eta, 1.0, 0.15),
                     g=(0.004, eta, 1.0, 0.0),
                     chi=(2e-4, eta, 1.0, -0.3))
    eps = tone_depths(spec, eta)
    th_plus, _ = theta_gdce(spec, eta)
    d = dressed.ground_branch(spec)
    for m in range(0, 5):
        closed = dressed.theta_dispersive_closed(spec, eta, eps, m, True, True)
        assert closed == pytest.approx(
            th_plus * math.sqrt((m + 1) * (m + 2)), rel=1e-12)


def test_transition_coefficients_table_shape():
    spec = spec_with(Omega0=0.8, g0=0.004, g=(4e-4, 2.0, 1.0, 0.0))
    table = dressed.transition_coefficients(spec, 2.0, m_max=4)
    assert table.closed_kind == "dispersive"
    assert (0, +1, +1) in table.theta
    assert (4, -1, +1) in table.theta
    assert table.l1[(1, +1, +1)] == pytest.approx(
        dressed.ladder_element(spec, 1, 1, +1, +1))


def test_dressed_basis_structure():
    spec = spec_with()
    levels = dressed.dressed_basis(spec, 5)
    assert len(levels) == 11
    assert levels[0].m == 0 and levels[0].lam == 0.0
    for lv in levels:
        assert lv.s ** 2 + lv.c ** 2 == pytest.approx(1.0, abs=1e-12)
