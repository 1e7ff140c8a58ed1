import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klts import constitutive as cst
from klts import surface_geometry as sg
from klts import surface_kinematics as sk
from klts import tensor_core as tc
from klts import volume_kinematics as vk
from klts.errors import NegativeJacobian, NonpositiveTemperature, NotSPD
from klts.fd import central_diff

THETA0 = 300.0


@pytest.fixture
def vol_params():
    return cst.VolumeMaterialParams(mu0=1.0e6, lam=2.0e6, c1=1.5e6, c2=1.0e-3,
                                    T_ref=293.15, T0=THETA0, rho0=1200.0)


@pytest.fixture
def surf_params():
    return cst.SurfaceMaterialParams(K=500.0, mu_s=300.0, c1=50.0, c3=0.5,
                                     rho0s=1.0, t0=0.01)


@pytest.fixture
def vol_model(rng):
    return cst.ThermalExpansionModel(alpha=1.0e-3 * vk.random_spd(rng), theta0=THETA0)


@pytest.fixture
def surf_model():
    return cst.SurfaceThermalExpansionModel(alpha_inplane=8.0e-4, theta0=THETA0,
                                            alpha_normal=5.0e-4)


class TestThermalExpansion:
    def test_reference_temperature(self):
        model = cst.ThermalExpansionModel(alpha=2.0e-3 * np.eye(3), theta0=THETA0)
        assert np.allclose(model.deformation(THETA0), np.eye(3))

    def test_isotropic_scalar_reduction(self):
        # alpha = 1e-3 * 1, dT = 100 -> F_T = e^{0.1} * 1
        model = cst.ThermalExpansionModel(alpha=1.0e-3 * np.eye(3), theta0=THETA0)
        ft = model.deformation(THETA0 + 100.0)
        assert ft[0, 0] == pytest.approx(1.1051709180756477, abs=1e-12)
        assert np.abs(ft - ft[0, 0] * np.eye(3)).max() <= 1e-14

    def test_rate_matches_time_differences(self, vol_model):
        t = 355.0
        fd = central_diff(vol_model.deformation, t, h=1e-3)
        rate = vol_model.rate(t, 1.0)
        assert np.abs(rate - fd).max() / np.abs(fd).max() <= 1e-6
        # coaxiality: alpha F_T = F_T alpha
        ft = vol_model.deformation(t)
        assert np.abs(vol_model.alpha @ ft - ft @ vol_model.alpha).max() <= 1e-15

    def test_spd(self, vol_model):
        ft = vol_model.deformation(430.0)
        assert np.allclose(ft, ft.T)
        assert np.linalg.eigvalsh(ft).min() > 0.0

    def test_asymmetric_alpha_rejected(self):
        with pytest.raises(ValueError):
            cst.ThermalExpansionModel(alpha=np.triu(np.ones((3, 3))), theta0=THETA0)


class TestVolumeResponse:
    def test_pure_thermal_deformation_is_stress_free(self, vol_params, vol_model):
        for dt in (0.0, 25.0, 120.0, 200.0):
            t = THETA0 + dt
            resp = cst.volume_response(vol_model.deformation(t), t, vol_model, vol_params)
            assert np.abs(resp.S).max() <= 1e-12 * vol_params.mu0
            assert np.abs(resp.sigma).max() <= 1e-12 * vol_params.mu0

    def test_reference_state_zero_entropy(self, vol_params):
        model = cst.ThermalExpansionModel(alpha=np.zeros((3, 3)), theta0=THETA0)
        resp = cst.volume_response(np.eye(3), THETA0, model, vol_params)
        assert resp.entropy == pytest.approx(0.0, abs=1e-15)
        assert resp.psi == pytest.approx(0.0, abs=1e-12)

    def test_stress_matches_energy_differences(self, rng, vol_params, vol_model):
        f = vk.random_invertible_matrix(rng)
        t = 332.0
        resp = cst.volume_response(f, t, vol_model, vol_params)
        c = f.T @ f
        h = 1e-6 * np.linalg.norm(c)
        s_fd = np.zeros((3, 3))
        for i in range(3):
            for j in range(i, 3):
                cp, cm = c.copy(), c.copy()
                cp[i, j] += h
                cm[i, j] -= h
                if i != j:
                    cp[j, i] += h
                    cm[j, i] -= h
                d = (cst.volume_energy_from_C(cp, t, vol_model, vol_params)
                     - cst.volume_energy_from_C(cm, t, vol_model, vol_params)) / (2 * h)
                s_fd[i, j] = s_fd[j, i] = 2 * (0.5 * d if i != j else d)
        assert np.abs(resp.S - s_fd).max() / np.abs(resp.S).max() <= 1e-6

    def test_entropy_matches_energy_differences(self, rng, vol_params, vol_model):
        f = vk.random_invertible_matrix(rng)
        c = f.T @ f
        t = 348.0
        resp = cst.volume_response(f, t, vol_model, vol_params)
        s_fd = -central_diff(lambda tt: cst.volume_energy_from_C(c, tt, vol_model, vol_params),
                             t, h=1e-3) / vol_params.rho0
        assert resp.entropy == pytest.approx(s_fd, rel=1e-6)

    def test_mandel_and_cauchy(self, rng, vol_params, vol_model):
        f = vk.random_invertible_matrix(rng)
        t = 315.0
        resp = cst.volume_response(f, t, vol_model, vol_params)
        f_t = vol_model.deformation(t)
        assert np.abs(resp.S_T - f_t @ resp.S @ f_t.T / resp.J_T).max() \
            <= 1e-12 * np.abs(resp.S_T).max()
        assert np.abs(resp.sigma - resp.sigma.T).max() <= 1e-12 * np.abs(resp.sigma).max()
        assert np.abs(resp.P - resp.S @ f.T).max() == 0.0
        assert np.abs(resp.sigma - f @ resp.S @ f.T / resp.J).max() \
            <= 1e-12 * np.abs(resp.sigma).max()

    def test_frame_indifference(self, rng, vol_params, vol_model):
        f = vk.random_invertible_matrix(rng)
        base = cst.volume_response(f, 320.0, vol_model, vol_params)
        for _ in range(5):
            q = vk.random_rotation(rng)
            rot = cst.volume_response(q @ f, 320.0, vol_model, vol_params)
            assert rot.psi == pytest.approx(base.psi, rel=1e-12)
            assert np.abs(rot.sigma - q @ base.sigma @ q.T).max() \
                <= 1e-12 * np.abs(base.sigma).max()

    def test_internal_energy_legendre(self, rng, vol_params, vol_model):
        f = vk.random_invertible_matrix(rng)
        resp = cst.volume_response(f, 340.0, vol_model, vol_params)
        assert resp.internal_energy == pytest.approx(resp.psi + 340.0 * resp.entropy)

    def test_temperature_guard(self, vol_params, vol_model):
        with pytest.raises(NonpositiveTemperature):
            cst.volume_response(np.eye(3), -10.0, vol_model, vol_params)

    def test_negative_jacobian_guard(self, vol_params, vol_model):
        with pytest.raises(NegativeJacobian):
            cst.volume_response(np.diag([-1.0, 1.0, 1.0]), 320.0, vol_model, vol_params)

    def test_non_spd_elastic_state(self, vol_params):
        with pytest.raises(NotSPD):
            cst.volume_energy_density(np.diag([-1.0, 1.0, 1.0]), 320.0, vol_params)


def make_shell_state(ref_chart, cur_chart, u, t, surf_model, lam3=None):
    rfr = sg.frame(ref_chart, u)
    cfr = sg.frame(cur_chart, u, tc.CURRENT)
    st = sk.surface_deformation(rfr, cfr,
                                lam3=surf_model.lam_T3(t) if lam3 is None else lam3)
    bt = surf_model.b_t_pull_cov(ref_chart, u, t)
    return sk.thermo_split_surface(st, surf_model.map_at(rfr, t), b_t_pull_cov=bt)


class TestShellResponse:
    def test_surface_reference_state(self, surf_params, surf_model):
        chart = sg.sphere_chart(2.0)
        u = np.array([1.1, 0.6])
        st = make_shell_state(chart, chart, u, THETA0, surf_model, lam3=1.0)
        resp = cst.shell_response(st, THETA0, surf_model, surf_params)
        assert np.abs(resp.sigma_pull).max() <= 1e-12 * (surf_params.K + surf_params.mu_s)
        assert np.abs(resp.mu_pull).max() <= 1e-12

    def test_thermal_sweep_is_stress_free(self, surf_params, surf_model):
        chart = sg.sphere_chart(2.0)
        u = np.array([1.0, 0.7])
        rfr = sg.frame(chart, u)
        mu_scale = 2.0 * surf_params.c3 * max(1.0, np.abs(rfr.b_cov).max())
        for dt in (0.0, 60.0, 140.0, 200.0):
            t = THETA0 + dt
            cur = surf_model.intermediate_chart(chart, t)
            st = make_shell_state(chart, cur, u, t, surf_model)
            resp = cst.shell_response(st, t, surf_model, surf_params,
                                      b_t_pull_cov_dT=surf_model.b_t_pull_cov_dT(chart, u, t))
            assert np.abs(resp.sigma_pull).max() <= 1e-12 * (surf_params.K + surf_params.mu_s)
            assert np.abs(resp.mu_pull).max() <= 1e-12 * mu_scale

    def test_linear_bending_law(self, surf_params, surf_model):
        # c3 = 0.5 and imposed kappa_11 = 0.2 give the moment component 0.2
        fr = sg.frame(sg.plane_chart(), np.zeros(2))
        kappa_cov = np.array([[0.2, 0.0], [0.0, 0.0]])
        kappa_amb = fr.from_cov_components(kappa_cov)
        _, _, dw_dkappa, _ = cst.surface_energy_density(
            fr.identity_inplane, fr.normal, kappa_amb, THETA0, surf_params, THETA0)
        m_con = fr.a_dual.T @ dw_dkappa @ fr.a_dual
        assert m_con[0, 0] == pytest.approx(2.0 * surf_params.c3 * 0.2, abs=1e-15)
        # mu-pull = -2 c3 kappa-sharp componentwise
        assert np.abs(-dw_dkappa + 2.0 * surf_params.c3 * kappa_amb).max() <= 1e-15

    def test_gradients_match_energy_differences(self, rng, surf_params, surf_model):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.12)
        u = np.array([0.1, -0.05])
        t = THETA0 + 35.0
        st = make_shell_state(ref, cur, u, t, surf_model, lam3=1.02)
        resp = cst.shell_response(st, t, surf_model, surf_params)
        rfr = st.ref
        bt = surf_model.b_t_pull_cov(ref, u, t)
        c_cov = rfr.cov_components(st.C_s)
        b_cov = st.b_pull_cov

        def fd22(fn, a, h):
            out = np.zeros((2, 2))
            for i in range(2):
                for j in range(i, 2):
                    ap, am = a.copy(), a.copy()
                    ap[i, j] += h
                    am[i, j] -= h
                    if i != j:
                        ap[j, i] += h
                        am[j, i] -= h
                    d = (fn(ap) - fn(am)) / (2 * h)
                    out[i, j] = out[j, i] = 0.5 * d if i != j else d
            return out

        sig_fd = 2 * fd22(lambda cc: cst.surface_energy_from_state(
            cc, b_cov, t, rfr, surf_model, surf_params, bt), c_cov, 1e-6)
        m_fd = fd22(lambda bb: cst.surface_energy_from_state(
            c_cov, bb, t, rfr, surf_model, surf_params, bt), b_cov, 1e-6)
        assert np.abs(resp.sigma_con - sig_fd).max() / np.abs(resp.sigma_con).max() <= 1e-6
        assert np.abs(resp.M_con - m_fd).max() / np.abs(resp.M_con).max() <= 1e-6

    def test_entropy_includes_curvature_term(self, rng, surf_params, surf_model):
        ref = sg.sphere_chart(2.0)
        cur = sg.scaled_surface_chart(ref, 1.02)
        u = np.array([1.2, 0.5])
        t = THETA0 + 50.0
        st = make_shell_state(ref, cur, u, t, surf_model)
        with_term = cst.shell_response(st, t, surf_model, surf_params,
                                       b_t_pull_cov_dT=surf_model.b_t_pull_cov_dT(ref, u, t))
        rfr = st.ref
        c_cov = rfr.cov_components(st.C_s)
        b_cov = st.b_pull_cov

        def w_total(tt):
            btt = surf_model.b_t_pull_cov(ref, u, tt)
            return cst.surface_energy_from_state(c_cov, b_cov, tt, rfr,
                                                 surf_model, surf_params, btt)

        s_fd = -central_diff(w_total, t, h=1e-3) / surf_params.rho0s
        assert with_term.entropy == pytest.approx(s_fd, rel=1e-6)

    def test_resultants(self, rng, surf_params, surf_model):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.1)
        u = np.zeros(2)
        t = THETA0 + 20.0
        st = make_shell_state(ref, cur, u, t, surf_model, lam3=1.0)
        resp = cst.shell_response(st, t, surf_model, surf_params)
        recovered = resp.N_con - np.einsum("gb,ga->ab", st.cur.b_mix, resp.M_con)
        assert np.abs(recovered - recovered.T).max() <= 1e-12 * np.abs(recovered).max()
        assert np.allclose(resp.tau_con, st.J_s * resp.sigma_con)
        # boundary moment components against the stated contractions
        nu = st.cur.a_cov[:, 0] / np.linalg.norm(st.cur.a_cov[:, 0])
        tau = np.cross(st.cur.normal, nu)
        m_nu, m_tau = resp.boundary_moments(st.cur, nu, tau)
        nu_cov = st.cur.a_cov.T @ nu
        tau_cov = st.cur.a_cov.T @ tau
        assert m_nu == pytest.approx(float(nu_cov @ resp.M_con @ tau_cov))
        assert m_tau == pytest.approx(-float(nu_cov @ resp.M_con @ nu_cov))


class TestHeatLaws:
    def test_fourier_zero_gradient(self):
        assert np.abs(cst.fourier_flux(np.eye(3), np.zeros(3))).max() == 0.0

    def test_fourier_direction(self):
        q = cst.fourier_flux(2.0 * np.eye(3), np.array([1.0, 0.0, 0.0]))
        assert np.allclose(q, [-2.0, 0.0, 0.0])

    def test_radiation_equilibrium(self):
        heat = cst.HeatLawParams(k=np.eye(3), emissivity=0.7, geometry_factor=1.0,
                                 T_env=350.0)
        assert cst.radiation_flux(heat, 350.0) == pytest.approx(0.0, abs=1e-12)
        cooler = cst.radiation_flux(heat, 400.0)
        assert cooler < 0.0  # hotter surface radiates energy away

    def test_radiation_constant(self):
        heat = cst.HeatLawParams(k=np.eye(3))
        assert heat.sigma_sb == pytest.approx(5.670374419e-8)

    def test_convection(self):
        heat = cst.HeatLawParams(k=np.eye(3), transfer_coeff=12.0, T_env=290.0)
        assert cst.convection_flux(heat, 290.0) == pytest.approx(0.0)
        assert cst.convection_flux(heat, 300.0) == pytest.approx(-120.0)

    def test_psd_guard(self):
        with pytest.raises(ValueError):
            cst.HeatLawParams(k=-np.eye(3))


class TestEntropyProduction:
    def test_isothermal(self):
        assert cst.conductive_entropy_production(300.0, np.zeros(3), np.zeros(3)) == 0.0

    def test_spot_value(self):
        # k = 1, |grad T| = 1, T = 300 -> gamma_con = 1/90000
        gamma = cst.conductive_entropy_production(
            300.0, np.array([1.0, 0.0, 0.0]), cst.fourier_flux(np.eye(3), [1.0, 0.0, 0.0]))
        assert gamma == pytest.approx(1.0 / 90000.0, abs=1e-20)

    def test_skew_part_invariance(self, rng):
        for _ in range(10):
            k_sym = vk.random_spd(rng)
            skew = rng.normal(size=(3, 3))
            skew = 0.5 * (skew - skew.T)
            g = rng.normal(size=3)
            a = cst.conductive_entropy_production(400.0, g, cst.fourier_flux(k_sym, g))
            b = cst.conductive_entropy_production(400.0, g, cst.fourier_flux(k_sym + skew, g))
            assert abs(a - b) <= 1e-14 * max(abs(a), 1.0)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2 ** 31), t=st.floats(1.0, 2000.0))
    def test_nonnegative_for_psd(self, seed, t):
        gen = np.random.Generator(np.random.Philox(key=seed))
        q_rot = vk.random_rotation(gen)
        k = q_rot @ np.diag(gen.uniform(0.0, 3.0, size=3)) @ q_rot.T
        g = gen.normal(size=3)
        gamma = cst.conductive_entropy_production(t, g, cst.fourier_flux(k, g))
        assert gamma >= -1e-15

    def test_local_production(self):
        gamma_loc, gamma_con = cst.entropy_production(
            300.0, grad_temperature=np.array([1.0, 0.0, 0.0]), k=np.eye(3),
            rho=2.0, entropy_rate=0.5, heat_source=30.0, div_q=6.0)
        assert gamma_con == pytest.approx(1.0 / 90000.0)
        assert gamma_loc == pytest.approx(2.0 * 0.5 - 2.0 * 30.0 / 300.0 + 6.0 / 300.0)

    def test_temperature_guard(self):
        with pytest.raises(NonpositiveTemperature):
            cst.conductive_entropy_production(0.0, np.zeros(3), np.zeros(3))


class TestStructuralTensors:
    def test_identity_map(self):
        y0 = np.array([0.0, 1.0, 0.0])
        st = cst.structural_update(y0, np.eye(3))
        assert np.allclose(st.y_T, y0)
        assert np.allclose(st.L_T, st.L0)

    def test_axis_stretch_preserves_direction(self):
        st = cst.structural_update(np.array([1.0, 0.0, 0.0]), np.diag([2.0, 1.0, 1.0]))
        assert np.allclose(st.y_T, [1.0, 0.0, 0.0])

    def test_pushforward_variants(self, rng):
        y0 = rng.normal(size=3)
        y0 /= np.linalg.norm(y0)
        f_t = vk.random_spd(rng)
        st = cst.structural_update(y0, f_t)
        fti = np.linalg.inv(f_t)
        assert np.abs(st.push_con - f_t @ st.L0 @ f_t.T).max() <= 1e-12
        assert np.abs(st.push_cov - fti.T @ st.L0 @ fti).max() <= 1e-12
        assert np.abs(st.push_mix - f_t @ st.L0 @ fti).max() <= 1e-12
        assert np.linalg.matrix_rank(st.L0) == 1

    def test_unit_vector_required(self):
        with pytest.raises(ValueError):
            cst.structural_update(np.array([2.0, 0.0, 0.0]), np.eye(3))

    def test_negative_jacobian(self):
        with pytest.raises(NegativeJacobian):
            cst.structural_update(np.array([1.0, 0.0, 0.0]), np.diag([-1.0, 1.0, 1.0]))


class TestThermalTableFallback:
    def test_matches_closed_form(self, rng, vol_model):
        c = vk.random_spd(rng)
        t = 345.0
        exact = cst.h_tensor(c, vol_model.deformation(t),
                             vol_model.temperature_derivative(t))
        table = cst.thermal_coupling_from_table(c, vol_model.deformation, t)
        assert np.abs(table - exact).max() / np.abs(exact).max() <= 1e-6


def test_sigma_sb_is_pinned():
    with pytest.raises(ValueError):
        cst.HeatLawParams(k=np.eye(3), sigma_sb=5.7e-8)


def test_shell_energy_rejects_out_of_plane_state(surf_params):
    from klts.surface_geometry import frame, plane_chart
    fr = frame(plane_chart(), np.zeros(2))
    with pytest.raises(NotSPD):
        cst.surface_energy_density(np.eye(3), fr.normal, np.zeros((3, 3)),
                                   THETA0, surf_params, THETA0)
