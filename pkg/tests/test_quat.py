import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fliptricks.quat import (
    I,
    J,
    K,
    MINUS_K,
    ONE,
    ImaginaryQuaternion,
    NonUnitAxis,
    NonUnitQuaternion,
    Quaternion,
    UnitQuaternion,
    ZeroQuaternion,
    conj,
    from_axis_angle,
    inverse,
    mul,
    re,
    rho,
    rotate_vector,
    rotation_about,
)

from helpers import axis_angle_matrix, naive_conjugation, naive_mul, random_unit_axis, random_unit_quaternion

ROOT2 = math.sqrt(2.0) / 2.0

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


def assert_quat_close(q, expected, tol=1e-12):
    got = np.array([q.q0, q.q1, q.q2, q.q3])
    assert np.abs(got - np.asarray(expected)).max() <= tol, f"{got} != {expected}"


class TestMul:
    def test_basis_table(self):
        basis = [ONE, I, J, K]
        for a in range(4):
            for b in range(4):
                got = mul(basis[a], basis[b])
                assert_quat_close(got, naive_mul(basis[a], basis[b]))

    def test_i_times_j_is_k(self):
        assert_quat_close(mul(I, J), (0, 0, 0, 1))

    def test_identity(self):
        q = Quaternion(0.3, 0.1, -0.2, 0.9)
        assert mul(Quaternion(1, 0, 0, 0), q) == q

    def test_i_times_minus_j(self):
        # hardflip lift endpoint: i * (-j) = -k
        assert_quat_close(mul(I, -J), (0, 0, 0, -1))

    @given(quats, quats)
    def test_matches_naive_expansion(self, p, q):
        assert_quat_close(mul(p, q), naive_mul(p, q), tol=1e-9)

    @given(quats, quats)
    def test_norm_multiplicative(self, p, q):
        assert mul(p, q).norm() == pytest.approx(p.norm() * q.norm(), abs=1e-7)

    def test_associative(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            p, q, r = (Quaternion(*rng.normal(size=4)) for _ in range(3))
            lhs = mul(mul(p, q), r)
            rhs = mul(p, mul(q, r))
            assert_quat_close(lhs, (rhs.q0, rhs.q1, rhs.q2, rhs.q3), tol=1e-10)

    def test_unit_times_unit_is_unit(self):
        assert isinstance(mul(I, J), UnitQuaternion)


class TestConj:
    def test_one_plus_i(self):
        assert conj(Quaternion(1, 1, 0, 0)) == Quaternion(1, -1, 0, 0)

    def test_k(self):
        assert conj(K) == MINUS_K

    def test_real_part_identity(self):
        q = Quaternion(0.3, 0.1, -0.2, 0.9)
        half_sum = (q + conj(q)) / 2
        assert half_sum == Quaternion(0.3, 0, 0, 0)
        assert re(q) == 0.3

    def test_reverses_products(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            p, q = (Quaternion(*rng.normal(size=4)) for _ in range(2))
            lhs = conj(mul(p, q))
            rhs = mul(conj(q), conj(p))
            assert_quat_close(lhs, (rhs.q0, rhs.q1, rhs.q2, rhs.q3))

    def test_norm_squared(self):
        q = Quaternion(0.3, 0.1, -0.2, 0.9)
        prod = mul(q, conj(q))
        assert_quat_close(prod, (q.norm() ** 2, 0, 0, 0))


class TestInverse:
    def test_unit_k(self):
        assert inverse(K) == MINUS_K

    def test_real(self):
        assert inverse(Quaternion(2, 0, 0, 0)) == Quaternion(0.5, 0, 0, 0)

    def test_shove_it_lift_midpoint(self):
        # sigma(1/2) = cos(pi/4) - sin(pi/4) k, whose inverse flips the k sign
        sigma_half = UnitQuaternion(ROOT2, 0, 0, -ROOT2)
        assert_quat_close(inverse(sigma_half), (ROOT2, 0, 0, ROOT2))

    def test_right_inverse(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            q = Quaternion(*rng.normal(size=4))
            if q.norm() < 1e-6:
                continue
            assert_quat_close(mul(q, inverse(q)), (1, 0, 0, 0))

    def test_zero_raises(self):
        with pytest.raises(ZeroQuaternion):
            inverse(Quaternion(0, 0, 0, 0))


class TestRho:
    def test_identity(self):
        assert np.array_equal(rho(ONE).m, np.eye(3))

    def test_k_gives_reversed_landing(self):
        assert np.abs(rho(K).m - np.diag([-1.0, -1.0, 1.0])).max() == 0.0

    def test_half_shove_it(self):
        q = UnitQuaternion(math.cos(math.pi / 4), 0, 0, -math.sin(math.pi / 4))
        expected = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        assert np.abs(rho(q).m - expected).max() <= 1e-15

    def test_homomorphism(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            p = random_unit_quaternion(rng)
            q = random_unit_quaternion(rng)
            dev = np.abs(rho(mul(p, q)).m - rho(p).m @ rho(q).m).max()
            assert dev < 1e-12

    def test_special_orthogonal(self):
        rng = np.random.default_rng(6)
        for _ in range(500):
            m = rho(random_unit_quaternion(rng)).m
            assert np.abs(m.T @ m - np.eye(3)).max() < 1e-12
            assert abs(np.linalg.det(m) - 1.0) < 1e-12

    def test_even(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            q = random_unit_quaternion(rng)
            assert np.array_equal(rho(q).m, rho(-q).m)

    def test_against_axis_angle_oracle(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            u = random_unit_axis(rng)
            theta = rng.uniform(-math.pi, math.pi)
            got = rho(from_axis_angle(u, theta)).m
            assert np.abs(got - axis_angle_matrix(u, 2.0 * theta)).max() < 1e-12


class TestFromAxisAngle:
    def test_minus_k_quarter(self):
        q = from_axis_angle(ImaginaryQuaternion(0, 0, -1), math.pi / 2)
        assert_quat_close(q, (0, 0, 0, -1))
        assert np.abs(rho(q).m - np.diag([-1.0, -1.0, 1.0])).max() <= 1e-15

    def test_zero_angle(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            assert_quat_close(from_axis_angle(random_unit_axis(rng), 0.0), (1, 0, 0, 0))

    def test_minus_j_quarter_is_kick_lift_midpoint(self):
        q = from_axis_angle(np.array([0.0, -1.0, 0.0]), math.pi / 2)
        assert_quat_close(q, (0, 0, -1, 0))

    def test_non_unit_axis(self):
        with pytest.raises(NonUnitAxis):
            from_axis_angle(np.array([0.0, 0.0, 2.0]), 0.3)

    def test_rotation_about_full_angle(self):
        u = np.array([0.0, 0.0, 1.0])
        got = rho(rotation_about(u, math.pi / 2)).m
        assert np.abs(got - axis_angle_matrix(u, math.pi / 2)).max() < 1e-12


class TestRotateVector:
    def test_identity(self):
        v = ImaginaryQuaternion(0.3, -0.4, 0.5)
        assert rotate_vector(ONE, v) == v

    def test_k_flips_i(self):
        got = rotate_vector(K, ImaginaryQuaternion(1, 0, 0))
        assert np.abs(got.as_array() - naive_conjugation(K, (1, 0, 0))).max() == 0.0
        assert np.abs(got.as_array() - np.array([-1.0, 0.0, 0.0])).max() == 0.0

    def test_axis_is_fixed(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            u = random_unit_axis(rng)
            q = from_axis_angle(u, rng.uniform(-2, 2))
            assert np.abs(rotate_vector(q, u).as_array() - u).max() < 1e-12

    def test_matches_matrix_action(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            q = random_unit_quaternion(rng)
            v = rng.normal(size=3)
            got = rotate_vector(q, v).as_array()
            assert np.abs(got - rho(q).m @ v).max() < 1e-12
            assert abs(np.linalg.norm(got) - np.linalg.norm(v)) < 1e-12


class TestUnitQuaternion:
    def test_renormalizes(self):
        q = UnitQuaternion(1.0 + 4e-10, 0, 0, 0)
        assert q.norm() == 1.0

    def test_rejects_far_from_sphere(self):
        with pytest.raises(NonUnitQuaternion):
            UnitQuaternion(1.1, 0, 0, 0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Quaternion(float("nan"), 0, 0, 0)
