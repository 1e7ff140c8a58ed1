import numpy as np
import pytest

from klts import surface_geometry as sg
from klts import surface_kinematics as sk
from klts import tensor_core as tc
from klts.errors import MalformedThermalMap


def frames_at(ref_chart, cur_chart, u):
    return sg.frame(ref_chart, u), sg.frame(cur_chart, u, tc.CURRENT)


class TestSurfaceDeformation:
    def test_identity(self, rng):
        chart = sg.random_surface_chart(rng)
        u = np.array([0.1, 0.1])
        rfr, cfr = frames_at(chart, chart, u)
        st = sk.surface_deformation(rfr, cfr, lam3=1.0)
        assert np.abs(st.F_hat - np.eye(3)).max() <= 1e-12
        assert st.J_s == pytest.approx(1.0, abs=1e-14)

    def test_isotropic_inplane_stretch(self):
        lam = 3.0
        ref = sg.plane_chart()
        cur = sg.scaled_surface_chart(ref, lam)
        rfr, cfr = frames_at(ref, cur, np.array([0.1, -0.1]))
        st = sk.surface_deformation(rfr, cfr)
        assert st.J_s == pytest.approx(lam ** 2, rel=1e-13)

    def test_area_ratio(self, rng):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.2)
        u = np.array([0.0, 0.15])
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr)
        ratio = (np.linalg.norm(np.cross(cfr.a_cov[:, 0], cfr.a_cov[:, 1]))
                 / np.linalg.norm(np.cross(rfr.a_cov[:, 0], rfr.a_cov[:, 1])))
        assert st.J_s == pytest.approx(ratio, rel=1e-12)

    def test_maps_tangents_and_normal(self, rng):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.1)
        u = np.zeros(2)
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr, lam3=1.2)
        assert np.abs(st.F_s @ rfr.a_cov - cfr.a_cov).max() <= 1e-12
        assert np.abs(st.F_hat @ rfr.normal - 1.2 * cfr.normal).max() <= 1e-12
        assert np.abs(st.F_s @ rfr.normal).max() <= 1e-14


class TestThermoSplitSurface:
    def test_trivial_thermal_map(self, rng):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.1)
        u = np.array([0.05, 0.05])
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr)
        fht = tc.surface_identity(rfr.normal) + np.outer(rfr.normal, rfr.normal)
        st = sk.thermo_split_surface(st, fht, b_t_pull_cov=rfr.b_cov)
        assert np.abs(st.F_hat_e - st.F_hat).max() <= 1e-12
        assert np.abs(st.kappa_cov - (cfr.b_cov - rfr.b_cov)).max() <= 1e-14

    def test_pure_thermal_expansion_zero_elastic_strain(self):
        beta, lam_t3 = 1.07, 1.04
        ref = sg.sphere_chart(2.0)
        cur = sg.scaled_surface_chart(ref, beta)
        u = np.array([1.1, 0.6])
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr, lam3=lam_t3)
        fht = beta * tc.surface_identity(rfr.normal) + lam_t3 * np.outer(rfr.normal, rfr.normal)
        st = sk.thermo_split_surface(st, fht)
        assert np.abs(st.C_se - tc.surface_identity(st.n_T)).max() <= 1e-12
        assert st.lam_e3 == pytest.approx(1.0, rel=1e-13)

    def test_split_identities(self, rng):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.15)
        u = np.array([-0.1, 0.1])
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr, lam3=1.05)
        fht = (1.03 * tc.surface_identity(rfr.normal)
               + 1.01 * np.outer(rfr.normal, rfr.normal))
        st = sk.thermo_split_surface(st, fht)
        assert np.abs(st.C_hat - st.F_hat_T.T @ st.C_hat_e @ st.F_hat_T).max() \
            <= 1e-12 * np.abs(st.C_hat).max()
        assert st.J_se * st.J_sT == pytest.approx(st.J_s, rel=1e-12)
        assert st.lam_e3 * st.lam_T3 == pytest.approx(st.lam3, rel=1e-13)

    def test_malformed_thermal_map(self, rng):
        ref = sg.plane_chart()
        cur = sg.plane_chart()
        u = np.zeros(2)
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr)
        bad = np.eye(3)
        bad[0, 2] = 0.4  # F^_T N picks up an in-plane part
        with pytest.raises(MalformedThermalMap):
            sk.thermo_split_surface(st, bad)


class TestCurvatureChange:
    def test_reference_intermediate(self, rng):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.1)
        u = np.zeros(2)
        rfr, cfr = frames_at(ref, cur, u)
        kappa = sk.curvature_change(cfr, rfr)
        assert np.allclose(kappa, cfr.b_cov - rfr.b_cov)

    def test_current_equals_intermediate(self, rng):
        chart = sg.random_surface_chart(rng)
        u = np.zeros(2)
        fr = sg.frame(chart, u, tc.CURRENT)
        assert np.abs(sk.curvature_change(fr, fr)).max() == 0.0

    def test_sphere_pair_against_chart_oracle(self):
        # reference sphere R = 2, current R = 1 along the same parametrization
        ref = sg.sphere_chart(2.0)
        cur = sg.scaled_surface_chart(ref, 0.5)
        u = np.array([1.2, 0.8])
        rfr, cfr = frames_at(ref, cur, u)
        kappa = sk.curvature_change(cfr, rfr)
        from klts.fd import partial_diff

        def cov_curvature(chart, uu):
            fr = sg.frame(chart, uu)

            def normal_at(x):
                t = chart.tangents(x)
                raw = np.cross(t[:, 0], t[:, 1])
                return raw / np.linalg.norm(raw)

            n_fd = np.column_stack([partial_diff(normal_at, uu, k) for k in range(2)])
            b = -(fr.a_cov.T @ n_fd)
            return 0.5 * (b + b.T)

        oracle = cov_curvature(cur, u) - cov_curvature(ref, u)
        assert np.abs(kappa - oracle).max() <= 1e-8

    def test_explicit_pullback_route(self, rng):
        ref = sg.random_surface_chart(rng)
        cur = sg.combine_surface_charts(ref, sg.random_surface_chart(rng), 0.1)
        u = np.zeros(2)
        rfr, cfr = frames_at(ref, cur, u)
        st = sk.surface_deformation(rfr, cfr)
        f_st = tc.surface_identity(rfr.normal)
        amb = sk.curvature_change(cfr, rfr, f_s=st.F_s, f_st=f_st)
        comps = rfr.a_cov.T @ amb @ rfr.a_cov
        assert np.abs(comps - sk.curvature_change(cfr, rfr)).max() <= 1e-12


class TestSurfaceRates:
    def test_rigid_translation(self, rng):
        fr = sg.frame(sg.random_surface_chart(rng), np.zeros(2), tc.CURRENT)
        rates = sk.surface_rates(fr, np.array([0.3, -1.0, 2.0]),
                                 np.zeros((3, 2)), np.zeros((3, 2, 2)))
        assert np.abs(rates.a_dot_cov).max() == 0.0
        assert np.abs(rates.b_dot_cov).max() == 0.0
        assert np.abs(rates.n_dot).max() == 0.0

    def test_sphere_inflation(self):
        radius, rate = 2.0, 0.3
        chart = sg.sphere_chart(radius)
        u = np.array([1.2, 0.7])
        fr = sg.frame(chart, u, tc.CURRENT)
        # v = rate * n = (rate / R) x on the sphere, with exact derivatives
        rates = sk.surface_rates(fr, rate / radius * chart.position(u),
                                 rate / radius * chart.tangents(u),
                                 rate / radius * chart.second(u))
        assert np.abs(rates.a_dot_cov - 2.0 * rate / radius * fr.metric_cov).max() <= 1e-14
        assert np.abs(rates.n_dot).max() <= 1e-14

    def test_random_field_matches_time_differences(self, rng):
        h = 1e-5
        for _ in range(5):
            base = sg.random_surface_chart(rng)
            vel = sg.random_surface_chart(rng)
            u = rng.uniform(-0.3, 0.3, size=2)
            fr = sg.frame(base, u, tc.CURRENT)
            rates = sk.surface_rates(fr, vel.position(u), vel.tangents(u), vel.second(u))
            fam = lambda t: sg.combine_surface_charts(base, vel, t)
            adot = (sg.frame(fam(h), u).metric_cov - sg.frame(fam(-h), u).metric_cov) / (2 * h)
            bdot = (sg.frame(fam(h), u).b_cov - sg.frame(fam(-h), u).b_cov) / (2 * h)
            ndot = (sg.frame(fam(h), u).normal - sg.frame(fam(-h), u).normal) / (2 * h)
            assert np.abs(rates.a_dot_cov - adot).max() / np.abs(adot).max() <= 1e-6
            assert np.abs(rates.b_dot_cov - bdot).max() / np.abs(bdot).max() <= 1e-6
            assert np.abs(rates.n_dot - ndot).max() / max(np.abs(ndot).max(), 1e-9) <= 1e-6

    def test_rate_structure(self, rng):
        base = sg.random_surface_chart(rng)
        vel = sg.random_surface_chart(rng)
        u = np.zeros(2)
        fr = sg.frame(base, u, tc.CURRENT)
        rates = sk.surface_rates(fr, vel.position(u), vel.tangents(u), vel.second(u))
        assert np.allclose(rates.a_dot_cov, rates.w_cov + rates.w_cov.T)
        assert abs(rates.n_dot @ fr.normal) <= 1e-14
        assert np.abs(rates.n_dot + fr.a_cov @ (fr.metric_con @ rates.w_normal)).max() <= 1e-14
        decomposed = sk.velocity_gradient_decomposed(fr, rates)
        assert np.abs(rates.l_s - decomposed).max() <= 1e-12

    def test_mixed_rate_against_tangential_formula(self, rng):
        # w_a^b = v^b_{;a} - v b^b_a, assembled from exact chart data
        from klts.fd import partial_diff
        base = sg.random_surface_chart(rng)
        vel = sg.random_surface_chart(rng)
        u = np.array([0.1, -0.1])
        fr = sg.frame(base, u, tc.CURRENT)
        rates = sk.surface_rates(fr, vel.position(u), vel.tangents(u), vel.second(u))
        v_con = lambda x: sg.frame(base, x, tc.CURRENT).a_dual.T @ vel.position(x)
        dv = np.column_stack([partial_diff(v_con, u, a) for a in range(2)])  # [b, a]
        v_n = fr.normal @ vel.position(u)
        alt = np.empty((2, 2))
        for a in range(2):
            for b in range(2):
                cov = dv[b, a] + fr.gamma[b, :, a] @ v_con(u)
                alt[a, b] = cov - v_n * fr.b_mix[a, b]
        assert np.abs(rates.w_mix - alt).max() <= 1e-8


class TestIntermediateCurvatureRoutes:
    def test_map_route_matches_geometry(self, rng):
        beta = 1.06
        ref = sg.random_surface_chart(rng)
        u = np.array([0.1, 0.15])
        rfr = sg.frame(ref, u)
        scaled = sg.scaled_surface_chart(ref, beta)
        geometric = sg.frame(scaled, u, tc.INTERMEDIATE).b_cov
        n, dn = rfr.normal, rfr.normal_partial
        dfst = np.stack([-beta * (np.outer(dn[:, k], n) + np.outer(n, dn[:, k]))
                         for k in range(2)], axis=2)
        from_map = sk.intermediate_curvature_from_map(
            rfr, beta * tc.surface_identity(n), dfst)
        assert np.abs(from_map - geometric).max() <= 1e-10
