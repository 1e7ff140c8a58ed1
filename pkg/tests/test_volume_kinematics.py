import numpy as np
import pytest

from klts import tensor_core as tc
from klts import volume_kinematics as vk
from klts.errors import NegativeJacobian, NotSPD
from klts.fd import partial_diff

LN2 = 0.6931471805599453  # ln 2, frozen


def identity_chart():
    return vk.affine_volume_chart()


class TestDeformationGradient:
    def test_identity(self):
        chart = identity_chart()
        f = vk.deformation_gradient(chart, chart, np.zeros(3))
        assert np.allclose(f.mat, np.eye(3))
        assert f.det == pytest.approx(1.0)

    def test_uniform_stretch(self):
        ref = identity_chart()
        cur = vk.affine_volume_chart(2.0 * np.eye(3))
        f = vk.deformation_gradient(ref, cur, np.array([0.1, 0.2, -0.1]))
        assert np.allclose(f.mat, 2.0 * np.eye(3))
        assert f.det == pytest.approx(8.0)

    def test_matches_finite_differences(self, rng):
        ref = vk.random_volume_chart(rng)
        cur = vk.random_volume_chart(rng)
        for xi in rng.uniform(-0.35, 0.35, size=(4, 3)):
            f = vk.deformation_gradient(ref, cur, xi)
            dx = np.column_stack([partial_diff(cur.position, xi, k) for k in range(3)])
            dX = np.column_stack([partial_diff(ref.position, xi, k) for k in range(3)])
            f_fd = dx @ np.linalg.inv(dX)
            assert np.abs(f.mat - f_fd).max() / np.abs(f.mat).max() <= 1e-6

    def test_negative_jacobian(self):
        ref = identity_chart()
        flipped = vk.affine_volume_chart(np.diag([-1.0, 1.0, 1.0]))
        with pytest.raises(NegativeJacobian):
            vk.deformation_gradient(ref, flipped, np.zeros(3))


class TestChristoffel:
    def test_cartesian_vanishes(self):
        gamma = vk.christoffel(identity_chart(), np.zeros(3)).gamma
        assert np.abs(gamma).max() == 0.0

    def test_cylindrical_value(self):
        # Gamma^r_{theta theta} = -r; checked at r = 1.5 plus the FD oracle
        chart = vk.cylindrical_chart()
        xi = np.array([1.5, 0.4, 0.0])
        gamma = vk.christoffel(chart, xi).gamma
        assert gamma[0, 1, 1] == pytest.approx(-1.5, abs=1e-12)
        basis = chart.basis(xi)
        dtan = partial_diff(chart.tangents, xi, 1)
        oracle = basis.duals[:, 0] @ dtan[:, 1]
        assert gamma[0, 1, 1] == pytest.approx(oracle, abs=1e-9)

    def test_ricci_metric(self, rng):
        chart = vk.random_volume_chart(rng)
        xi = np.array([0.1, -0.2, 0.25])
        chris = vk.christoffel(chart, xi)
        met = lambda x: chart.basis(x).metric_cov
        mp = np.stack([partial_diff(met, xi, k) for k in range(3)], axis=2)
        res = vk.covariant_derivative_tensor(met(xi), mp, chris, "dd")
        assert np.abs(res).max() <= 1e-10


class TestThermoSplit:
    def test_trivial_thermal_part(self, rng):
        f = tc.TwoPointMap(vk.random_invertible_matrix(rng), tc.REFERENCE, tc.CURRENT)
        one = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.INTERMEDIATE)
        st = vk.thermo_split(f, one)
        assert np.allclose(st.F_e.mat, f.mat)
        assert np.allclose(st.C_e.mat, st.C.mat)
        assert np.allclose(st.C_T.mat, np.eye(3))

    def test_purely_thermal_compression(self):
        beta = 1.25
        f = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.CURRENT)
        f_t = tc.TwoPointMap(beta * np.eye(3), tc.REFERENCE, tc.INTERMEDIATE)
        st = vk.thermo_split(f, f_t)
        assert np.allclose(st.C_e.mat, beta ** -2 * np.eye(3))

    def test_split_identity(self, rng):
        for _ in range(10):
            f = tc.TwoPointMap(vk.random_invertible_matrix(rng), tc.REFERENCE, tc.CURRENT)
            f_t = tc.TwoPointMap(vk.random_spd(rng), tc.REFERENCE, tc.INTERMEDIATE)
            st = vk.thermo_split(f, f_t)
            lhs = st.C.mat
            rhs = f_t.mat.T @ st.C_e.mat @ f_t.mat
            assert np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs) <= 1e-12
            assert st.F_e.det * st.F_T.det == pytest.approx(st.J, rel=1e-12)

    def test_negative_thermal_jacobian(self, rng):
        f = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.CURRENT)
        bad = tc.TwoPointMap(np.diag([-1.0, 1.0, 1.0]), tc.REFERENCE, tc.INTERMEDIATE)
        with pytest.raises(NegativeJacobian):
            vk.thermo_split(f, bad)


class TestVelocityGradient:
    def test_zero_rate(self, rng):
        f = tc.TwoPointMap(vk.random_invertible_matrix(rng), tc.REFERENCE, tc.CURRENT)
        f_t = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.INTERMEDIATE)
        rates = vk.velocity_gradient(f, np.zeros((3, 3)), f_t, np.zeros((3, 3)))
        assert np.abs(rates.l).max() == 0.0
        assert np.abs(rates.d).max() == 0.0
        assert np.abs(rates.w).max() == 0.0

    def test_rigid_spin(self):
        spin = tc.spin_from_axial([0.0, 0.0, 2.0])
        f = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.CURRENT)
        f_t = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.INTERMEDIATE)
        rates = vk.velocity_gradient(f, spin, f_t, np.zeros((3, 3)))
        assert np.abs(rates.d).max() <= 1e-15
        assert np.allclose(rates.w, spin)
        assert np.allclose(rates.wbar, [0.0, 0.0, 2.0])

    def test_matches_time_differences(self, rng):
        f0 = vk.random_invertible_matrix(rng)
        f1 = 0.3 * rng.normal(size=(3, 3))
        f2 = 0.3 * rng.normal(size=(3, 3))
        path = lambda t: f0 + (t + t ** 2) * f1 + t ** 3 * f2
        f = tc.TwoPointMap(path(0.0), tc.REFERENCE, tc.CURRENT)
        f_t = tc.TwoPointMap(vk.random_spd(rng), tc.REFERENCE, tc.INTERMEDIATE)
        rates = vk.velocity_gradient(f, f1, f_t, np.zeros((3, 3)))
        h = 1e-5
        l_fd = (path(h) - path(-h)) / (2 * h) @ f.inv
        assert np.abs(rates.l - l_fd).max() / np.abs(rates.l).max() <= 1e-6
        fe = f.mat @ f_t.inv
        split = rates.l - rates.l_e - fe @ rates.l_T @ np.linalg.inv(fe)
        assert np.abs(split).max() <= 1e-12 * np.abs(rates.l).max()


class TestNanson:
    def test_identity(self):
        f = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.CURRENT)
        v = np.array([0.0, 0.0, 1.0])
        assert np.allclose(vk.nanson(f, v, 2.5), 2.5 * v)

    def test_isotropic_magnitude(self):
        f = tc.TwoPointMap(2.0 * np.eye(3), tc.REFERENCE, tc.CURRENT)
        out = vk.nanson(f, np.array([1.0, 0.0, 0.0]), 1.0)
        assert np.linalg.norm(out) == pytest.approx(4.0)

    def test_parallelogram_area(self, rng):
        for _ in range(10):
            f = tc.TwoPointMap(vk.random_invertible_matrix(rng), tc.REFERENCE, tc.CURRENT)
            y1, y2 = rng.normal(size=3), rng.normal(size=3)
            raw = np.cross(y1, y2)
            area = np.linalg.norm(raw)
            mapped = vk.nanson(f, raw / area, area)
            oracle = np.cross(f.mat @ y1, f.mat @ y2)
            assert np.abs(mapped - oracle).max() <= 1e-12 * np.abs(oracle).max()


class TestSethHill:
    def test_identity_gives_zero(self):
        f = tc.TwoPointMap(np.eye(3), tc.REFERENCE, tc.CURRENT)
        for n in (-2.0, 0.0, 1.0, 2.0):
            assert np.abs(vk.seth_hill(f, n).tensor.mat).max() <= 1e-15

    def test_log_branch_diagonal(self):
        f = tc.TwoPointMap(np.diag([2.0, 1.0, 1.0]), tc.REFERENCE, tc.CURRENT)
        strain = vk.seth_hill(f, 0.0)
        assert strain.tensor.mat[0, 0] == pytest.approx(LN2, abs=1e-12)
        assert np.abs(np.diag(strain.tensor.mat)[1:]).max() <= 1e-15

    def test_green_lagrange_diagonal(self):
        f = tc.TwoPointMap(np.diag([2.0, 1.0, 1.0]), tc.REFERENCE, tc.CURRENT)
        strain = vk.seth_hill(f, 2.0)
        assert strain.tensor.mat[0, 0] == pytest.approx(1.5, abs=1e-14)
        # E^(2) = (C - 1)/2 exactly
        c = f.mat.T @ f.mat
        assert np.allclose(strain.tensor.mat, 0.5 * (c - np.eye(3)))

    def test_eulerian_frame(self, rng):
        fm = vk.random_invertible_matrix(rng)
        f = tc.TwoPointMap(fm, tc.REFERENCE, tc.CURRENT)
        almansi = vk.seth_hill(f, -2.0, frame="eulerian").tensor.mat
        oracle = 0.5 * (np.eye(3) - np.linalg.inv(fm @ fm.T))
        assert np.abs(almansi - oracle).max() <= 1e-12

    def test_log_limit(self, rng):
        f = tc.TwoPointMap(vk.random_invertible_matrix(rng), tc.REFERENCE, tc.CURRENT)
        e0 = vk.seth_hill(f, 0.0).tensor.mat
        for n in (1e-3, -1e-3, 1e-4, -1e-4):
            defect = np.abs(vk.seth_hill(f, n).tensor.mat - e0).max()
            assert defect <= 0.5 * abs(n) * np.linalg.norm(e0) ** 2 + 1e-10

    def test_not_spd_fractional_power(self, rng):
        # fractional powers in the composition rule need a symmetric F1
        f1 = vk.random_invertible_matrix(rng)
        f1 = f1 if not np.allclose(f1, f1.T) else f1 + 0.1 * np.triu(np.ones((3, 3)), 1)
        with pytest.raises(NotSPD):
            vk.hencky_additivity_check(f1, np.eye(3), orders=(1.0,))

    def test_not_spd_matrix_log(self):
        from klts.linalg import logm_spd
        with pytest.raises(NotSPD):
            logm_spd(np.diag([-1.0, 1.0, 1.0]))


class TestHenckyAdditivity:
    def test_identity_pair(self):
        rep = vk.hencky_additivity_check(np.eye(3), np.eye(3), orders=(0.0, 1.0, 2.0))
        for entry in rep.entries:
            assert entry.additive_defect <= 1e-15
            assert entry.composition_defect <= 1e-15

    def test_log_additivity_scalar(self):
        # ln 6 = ln 2 + ln 3 along the stretched axis
        rep = vk.hencky_additivity_check(np.diag([2.0, 1.0, 1.0]),
                                         np.diag([3.0, 1.0, 1.0]), orders=(0.0,))
        assert rep.entries[0].additive_defect <= 1e-12

    def test_quadratic_composition(self):
        rep = vk.hencky_additivity_check(np.diag([2.0, 1.0, 1.0]),
                                         np.diag([3.0, 1.0, 1.0]), orders=(2.0,))
        entry = rep.entries[0]
        # the additive defect is real for n = 2 ...
        assert entry.additive_defect == pytest.approx(12.0, abs=1e-12)
        # ... while the composition rule is exact
        assert entry.composition_defect <= 1e-12

    def test_coaxial_random(self, rng):
        q = vk.random_rotation(rng)
        f1 = q @ np.diag(rng.uniform(0.6, 1.6, size=3)) @ q.T
        f2 = q @ np.diag(rng.uniform(0.6, 1.6, size=3)) @ q.T
        rep = vk.hencky_additivity_check(f1, f2, orders=(0.0, 2.0))
        assert rep.entries[0].additive_defect <= 1e-10
        assert rep.entries[1].composition_defect <= 1e-12


def test_chart_domain_is_carried(rng):
    chart = vk.random_volume_chart(rng)
    assert chart.domain.shape == (3, 2)
    assert np.all(chart.domain[:, 1] > chart.domain[:, 0])
