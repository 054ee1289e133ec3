import numpy as np
import pytest
from hypothesis import given, strategies as st

from cartan.domains import (
    J2,
    AutBall,
    AutIV,
    Ball,
    DomainSpec,
    SingularActionError,
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    apply_aut_ball,
    apply_aut_IV,
    ball_metric_exact,
    boundary_defect,
    contains,
    from_coords,
    homogeneous_lift_IV,
    kernel_factor,
    max_ball_dimension,
    metric,
    to_coords,
)

from conftest import random_complex

seeds = st.integers(0, 10**6)


class TestSpecs:
    @pytest.mark.parametrize("D,genus,cdim", [
        (Ball(3), 4, 3), (TypeI(2, 3), 5, 6), (TypeII(4), 3, 6), (TypeIII(3), 4, 6), (TypeIV(5), 5, 5),
    ])
    def test_genus_and_chart(self, D, genus, cdim):
        assert D.genus == genus
        assert D.coord_dim == cdim
        assert DomainSpec.from_json(D.to_json()) == D

    @pytest.mark.parametrize("kind,dims", [("I", (3, 2)), ("II", (1,)), ("IV", (1,)), ("V", (2,)), ("I", (2,))])
    def test_invalid(self, kind, dims):
        with pytest.raises(ValueError):
            DomainSpec(kind, dims)

    def test_max_ball_dimension(self):
        assert max_ball_dimension(TypeI(2, 3)) == 4
        assert max_ball_dimension(TypeII(5)) == 7
        assert max_ball_dimension(TypeIII(4)) == 4
        assert max_ball_dimension(TypeIV(6)) == 5
        with pytest.raises(ValueError):
            max_ball_dimension(Ball(2))


class TestMembership:
    def test_origin(self):
        for D in (Ball(2), TypeI(2, 2), TypeII(3), TypeIII(2), TypeIV(3)):
            assert contains(D, np.zeros(D.shape))
            assert boundary_defect(D, np.zeros(D.shape)) == pytest.approx(1)

    def test_type_iv_hand_values(self):
        # |Z|^2 = 1 < 2, defect 1 - 1 + 1/4
        assert contains(TypeIV(2), [1, 0])
        assert boundary_defect(TypeIV(2), [1, 0]) == pytest.approx(0.25)
        assert not contains(TypeIV(2), [1.5, 0])

    def test_shape_and_symmetry_checks(self):
        with pytest.raises(ValueError):
            contains(TypeI(2, 3), np.zeros((3, 2)))
        with pytest.raises(ValueError):
            contains(TypeII(2), np.array([[0, 0.1], [0.1, 0]]))
        with pytest.raises(ValueError):
            contains(TypeIII(2), np.array([[0, 0.1], [-0.1, 0]]))

    @given(seeds)
    def test_type_iv_two_is_a_bidisc(self, seed):
        # a = (z1 + i z2)/sqrt2, b = (z1 - i z2)/sqrt2 turns the defect into (1-|a|^2)(1-|b|^2)
        z = random_complex(np.random.default_rng(seed), 2, 0.5)
        a, b = (z[0] + 1j * z[1]) / np.sqrt(2), (z[0] - 1j * z[1]) / np.sqrt(2)
        assert boundary_defect(TypeIV(2), z) == pytest.approx((1 - abs(a) ** 2) * (1 - abs(b) ** 2), abs=1e-12)
        assert contains(TypeIV(2), z) == (abs(a) < 1 and abs(b) < 1)

    @given(seeds, st.integers(1, 3), st.integers(0, 2))
    def test_type_i_defect_is_singular_value_product(self, seed, p, extra):
        Z = random_complex(np.random.default_rng(seed), (p, p + extra), 0.4)
        s = np.linalg.svd(Z, compute_uv=False)
        assert boundary_defect(TypeI(p, p + extra), Z) == pytest.approx(np.prod(1 - s**2), abs=1e-12)
        assert contains(TypeI(p, p + extra), Z) == bool(s[0] < 1)

    def test_batch_defect(self, rng):
        Z = random_complex(rng, (6, 3), 0.3)
        batch = boundary_defect(TypeIV(3), Z)
        assert np.allclose(batch, [boundary_defect(TypeIV(3), z) for z in Z])

    def test_kernel_factor(self):
        # 1 - 1/4 + (1/4)(1/4)^2
        assert kernel_factor(TypeIV(3), [0.5, 0, 0]) == pytest.approx(0.765625 ** -3)
        with pytest.raises(ValueError):
            kernel_factor(Ball(2), [1, 0])


class TestCoordinates:
    @pytest.mark.parametrize("D", [TypeI(2, 3), TypeII(4), TypeIII(3), TypeIV(3), Ball(2)])
    def test_round_trip(self, rng, D):
        w = random_complex(rng, D.coord_dim, 0.2)
        assert np.allclose(to_coords(D, from_coords(D, w)), w)

    def test_type_ii_skew(self, rng):
        Z = from_coords(TypeII(3), random_complex(rng, 3))
        assert np.allclose(Z, -Z.T)


class TestMetric:
    @given(seeds, st.integers(1, 3))
    def test_ball_matches_closed_form(self, seed, n):
        z = random_complex(np.random.default_rng(seed), n, 0.25)
        assert np.allclose(metric(Ball(n), z), ball_metric_exact(n, z), rtol=1e-5, atol=1e-6)

    def test_single_row_type_i_is_a_ball(self, rng):
        z = random_complex(rng, 3, 0.2)
        assert np.allclose(metric(TypeI(1, 3), z[None]), ball_metric_exact(3, z), rtol=1e-5, atol=1e-6)

    @pytest.mark.parametrize("D,c", [(TypeI(2, 2), 4), (TypeII(4), 3), (TypeIII(2), 3), (TypeIV(3), 3)])
    def test_origin_value(self, D, c):
        # genus * (metric of the Euclidean chart at 0), up to the chart weights of the symmetric part
        g = metric(D, np.zeros(D.shape))
        if D.kind == "III":
            assert np.allclose(np.diag(g).real, [c, 2 * c, c], rtol=1e-6)
        elif D.kind == "II":
            assert np.allclose(g, 2 * c * np.eye(D.coord_dim), rtol=1e-6, atol=1e-8)
        else:
            assert np.allclose(g, c * np.eye(D.coord_dim), rtol=1e-6, atol=1e-8)

    def test_rejects_near_boundary(self):
        with pytest.raises(ValueError):
            metric(Ball(1), [0.99999])

    def test_type_iv_invariance(self, rng):
        m = 3
        T = AutIV.random(m, rng, 0.3)
        z = random_complex(rng, m, 0.2)
        w = apply_aut_IV(T, z)
        h = 1e-6
        J = np.array([(apply_aut_IV(T, z + h * e) - apply_aut_IV(T, z - h * e)) / (2 * h) for e in np.eye(m)])
        assert np.allclose(J @ metric(TypeIV(m), w) @ J.conj().T, metric(TypeIV(m), z), rtol=1e-5, atol=1e-5)


class TestAutomorphisms:
    def test_lift_on_quadric(self, rng):
        xi = homogeneous_lift_IV(random_complex(rng, (5, 4)))
        assert np.allclose(np.einsum("ni,ij,nj->n", xi, J2(4), xi), 0)

    @given(seeds)
    def test_type_iv_preserves_domain(self, seed):
        rng = np.random.default_rng(seed)
        T = AutIV.random(3, rng)
        Z = random_complex(rng, (10, 3), 0.2)
        W, mu = apply_aut_IV(T, Z, return_scale=True)
        assert np.all(boundary_defect(TypeIV(3), W) > 0)
        assert np.allclose(homogeneous_lift_IV(W), mu[:, None] * (homogeneous_lift_IV(Z) @ T.T))

    def test_rotation_is_linear(self, rng):
        A, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        z = random_complex(rng, 3, 0.2)
        assert np.allclose(apply_aut_IV(AutIV.rotation(A), z), z @ A)

    def test_invalid_aut(self):
        with pytest.raises(ValueError):
            AutIV(2 * np.eye(5))
        T = np.eye(5)
        T[3:, 3:] = [[1, 0], [0, -1]]
        with pytest.raises(ValueError):
            AutIV(T)

    def test_outside_point_rejected(self):
        with pytest.raises(ValueError):
            apply_aut_IV(AutIV.identity(2), [1.5, 0])

    def test_singular_action_class(self):
        assert issubclass(SingularActionError, ArithmeticError)

    @given(seeds)
    def test_ball_automorphism(self, seed):
        rng = np.random.default_rng(seed)
        n = 3
        a = random_complex(rng, n)
        a *= 0.9 * rng.random() / np.linalg.norm(a)
        U, _ = np.linalg.qr(random_complex(rng, (n, n)))
        phi = AutBall(a, U)
        z = random_complex(rng, n, 0.3)
        w = apply_aut_ball(phi, z)
        expect = (1 - np.vdot(a, a).real) * (1 - np.vdot(z, z).real) / abs(1 - np.vdot(a, z)) ** 2
        assert 1 - np.vdot(w, w).real == pytest.approx(expect, abs=1e-12)
        assert np.allclose(apply_aut_ball(phi, a), 0, atol=1e-12)

    def test_ball_automorphism_validation(self):
        with pytest.raises(ValueError):
            AutBall([1.0, 0.0], np.eye(2))
        with pytest.raises(ValueError):
            AutBall([0.0, 0.0], 2 * np.eye(2))
