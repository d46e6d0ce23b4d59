import numpy as np
import pytest

from loopfock.bogoliubov import implementation_residual, normalize_phase
from loopfock.clifford import build_clifford_model
from loopfock.errors import EndpointMismatch
from loopfock.linalg import maxabs, scalar_defect
from loopfock.loops import (ExtLoopGroup, PathGroup, SpinGroup, concat_paths,
                            disjoint_support_pair, discrete_loop_cocycle,
                            discrete_loop_cocycle_centered, double_path,
                            edge_reflection, gamma_matrices, is_half_supported,
                            lift, loop_cocycle_compare, loop_identity,
                            omega_matrix, random_loop_algebra,
                            reflect_orthogonal, restrict_loop, reversed_loop,
                            spin_exp, string_crossed_module, vertex_reflection)
from loopfock.twogroup import check_crossed_module

rng = np.random.default_rng(53)


@pytest.fixture(scope="module")
def model22():
    return build_clifford_model(2, 2)


@pytest.fixture(scope="module")
def spin3():
    return SpinGroup(3)


class TestGammaMatrices:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_clifford_relations(self, d):
        G = gamma_matrices(d)
        eye = np.eye(G.shape[1])
        for a in range(d):
            for b in range(d):
                anti = G[a] @ G[b] + G[b] @ G[a]
                assert maxabs(anti - 2.0 * (a == b) * eye) < 1e-14
                assert maxabs(G[a].conj().T - G[a]) == 0.0


class TestSpinGroup:
    def test_covering_kernel(self, spin3):
        assert maxabs(spin3.covering(spin3.identity()) - np.eye(3)) < 1e-14
        assert maxabs(spin3.covering(-spin3.identity()) - np.eye(3)) < 1e-14

    def test_closed_form_rotation(self, spin3):
        theta = 1.3
        B = np.zeros((3, 3))
        B[1, 0], B[0, 1] = theta, -theta
        x = spin_exp(B, spin3.gammas)
        R = np.eye(3)
        R[0, 0] = R[1, 1] = np.cos(theta)
        R[1, 0], R[0, 1] = np.sin(theta), -np.sin(theta)
        assert maxabs(spin3.covering(x) - R) < 1e-12

    def test_covering_is_a_homomorphism(self, spin3):
        for _ in range(30):
            x, y = spin3.sample(rng), spin3.sample(rng)
            assert maxabs(spin3.covering(x @ y) - spin3.covering(x) @ spin3.covering(y)) < 1e-12
            lam = spin3.covering(x)
            assert maxabs(lam.T @ lam - np.eye(3)) < 1e-12
            assert abs(np.linalg.det(lam) - 1.0) < 1e-12

    def test_samples_are_unitary(self, spin3):
        x = spin3.sample(rng)
        assert maxabs(x @ x.conj().T - np.eye(spin3.rep_dim)) < 1e-12


class TestPathsAndLoops:
    def test_double_of_trivial(self, model22):
        spin = SpinGroup(2)
        paths = PathGroup(2, spin)
        assert maxabs(double_path(paths.identity()) - loop_identity(2, spin)) == 0.0

    def test_concat_consistency_at_midpoint(self):
        spin = SpinGroup(2)
        paths = PathGroup(2, spin)
        p = paths.sample(rng)
        loop = concat_paths(p, p)
        assert maxabs(loop[2] - p[2]) == 0.0
        assert is_half_supported(double_path(paths.identity()))

    def test_endpoint_mismatch(self):
        spin = SpinGroup(2)
        paths = PathGroup(2, spin)
        p, q = paths.sample(rng), paths.sample(rng)
        with pytest.raises(EndpointMismatch):
            concat_paths(p, q)

    def test_restrict_is_a_homomorphism_on_half_loops(self, model22):
        spin = SpinGroup(2)
        H = ExtLoopGroup(model22, spin)
        for _ in range(10):
            a, b = H.sample(rng), H.sample(rng)
            left = restrict_loop((a.loop @ b.loop))
            right = restrict_loop(a.loop) @ restrict_loop(b.loop)
            assert maxabs(left - right) < 1e-12


class TestOmega:
    def test_identity_loop(self, model22):
        spin = SpinGroup(2)
        assert maxabs(omega_matrix(model22, spin, loop_identity(2, spin)) - np.eye(8)) < 1e-14

    def test_homomorphism_and_rotation(self, model22):
        spin = SpinGroup(2)
        for _ in range(50):
            a = np.stack([spin.sample(rng) for _ in range(4)])
            b = np.stack([spin.sample(rng) for _ in range(4)])
            ga, gb = omega_matrix(model22, spin, a), omega_matrix(model22, spin, b)
            assert maxabs(omega_matrix(model22, spin, a @ b) - ga @ gb) < 1e-12
            assert maxabs(ga.T @ ga - np.eye(8)) < 1e-12
            assert abs(np.linalg.det(ga) - 1.0) < 1e-10

    def test_half_supported_blocks(self, model22):
        spin = SpinGroup(2)
        H = ExtLoopGroup(model22, spin)
        g = omega_matrix(model22, spin, H.sample(rng).loop)
        assert maxabs(g[4:, 4:] - np.eye(4)) < 1e-13
        assert maxabs(g[:2, :2] - np.eye(2)) < 1e-13  # vertex 0 fixed as well


class TestLifts:
    def test_identity_loop_lifts_to_one(self, model22):
        spin = SpinGroup(2)
        ext = lift(model22, spin, loop_identity(2, spin))
        assert maxabs(ext.unitary - np.eye(16)) < 1e-12

    def test_lift_implements(self, model22):
        spin = SpinGroup(2)
        loop = np.stack([spin.sample(rng) for _ in range(4)])
        ext = lift(model22, spin, loop)
        g = omega_matrix(model22, spin, loop)
        assert implementation_residual(model22, ext.unitary, g) < 1e-11

    def test_products_implement_products(self, model22):
        spin = SpinGroup(2)
        a = np.stack([spin.sample(rng) for _ in range(4)])
        b = np.stack([spin.sample(rng) for _ in range(4)])
        U = lift(model22, spin, a).unitary @ lift(model22, spin, b).unitary
        g = omega_matrix(model22, spin, a @ b)
        assert implementation_residual(model22, U, g) < 1e-11

    def test_scan_relift_differs_by_phase(self, model22):
        spin = SpinGroup(2)
        loop = np.stack([spin.sample(rng) for _ in range(4)])
        ext = lift(model22, spin, loop)
        rescan = normalize_phase(ext.implementer, "scan")
        defect, lam = scalar_defect(rescan.unitary @ ext.unitary.conj().T)
        assert defect < 1e-12
        assert abs(abs(lam) - 1.0) < 1e-12

    def test_cache_hits(self, model22):
        spin = SpinGroup(2)
        loop = np.stack([spin.sample(rng) for _ in range(4)])
        first = lift(model22, spin, loop)
        again = lift(model22, spin, np.array(loop))
        assert first is again


class TestStringCrossedModule:
    def test_axioms(self):
        model = build_clifford_model(2, 3)
        spin = SpinGroup(3)
        cm = string_crossed_module(model, spin)
        report = check_crossed_module(cm, 40, np.random.default_rng(9))
        assert report.passed, report.residuals

    def test_action_phase_independence(self, model22):
        spin = SpinGroup(2)
        cm = string_crossed_module(model22, spin)
        paths = cm.base
        p = paths.sample(rng)
        ext = cm.fiber.sample(rng)
        out1 = cm.act(p, ext)
        # conjugating by any other lift of the doubled loop gives the same result
        dbl = double_path(p)
        V = lift(model22, spin, dbl).unitary * np.exp(0.61j)
        twisted = V @ ext.unitary @ V.conj().T
        assert maxabs(out1.unitary - twisted) < 1e-11

    def test_central_fiber(self, model22):
        spin = SpinGroup(2)
        cm = string_crossed_module(model22, spin)
        z = np.exp(0.4j)
        central = cm.fiber.central(z)
        assert maxabs(central.unitary - z * np.eye(16)) == 0.0
        p = cm.base.sample(rng)
        acted = cm.act(p, central)
        assert cm.fiber.dist(acted, central) < 1e-12

    def test_restriction_ends_at_identity(self, model22):
        spin = SpinGroup(2)
        cm = string_crossed_module(model22, spin)
        ext = cm.fiber.sample(rng)
        path = cm.t(ext)
        assert maxabs(path[0] - np.eye(2)) < 1e-13
        assert maxabs(path[2] - np.eye(2)) < 1e-13


class TestDisjointness:
    def test_disjoint_half_loops_commute(self, model22):
        spin = SpinGroup(2)
        for _ in range(20):
            a, b = disjoint_support_pair(model22, spin, rng)
            Ua = lift(model22, spin, a).unitary
            Ub = lift(model22, spin, b).unitary
            assert maxabs(Ua @ Ub - Ub @ Ua) < 1e-12

    def test_abelian_internal_rotations_commute(self, model22):
        # d = 2 is special: every loop rotation lies in one torus, so even
        # overlapping supports give commuting lifts
        spin = SpinGroup(2)
        local = np.random.default_rng(77)
        for _ in range(3):
            a = np.stack([spin.sample(local) for _ in range(4)])
            b = np.stack([spin.sample(local) for _ in range(4)])
            Ua = lift(model22, spin, a).unitary
            Ub = lift(model22, spin, b).unitary
            assert maxabs(Ua @ Ub - Ub @ Ua) < 1e-12

    def test_overlapping_supports_do_not_commute(self):
        model = build_clifford_model(2, 3)
        spin = SpinGroup(3)
        local = np.random.default_rng(77)
        worst = 0.0
        for _ in range(3):
            a = np.stack([spin.sample(local) for _ in range(4)])
            b = np.stack([spin.sample(local) for _ in range(4)])
            Ua = lift(model, spin, a).unitary
            Ub = lift(model, spin, b).unitary
            worst = max(worst, maxabs(Ua @ Ub - Ub @ Ua))
        assert worst > 0.05


class TestReflections:
    def test_vertex_reflection_involution_and_lagrangian(self, model22):
        tau = vertex_reflection(model22)
        assert maxabs(tau @ tau - np.eye(8)) == 0.0
        assert maxabs(tau @ model22.lagrangian + np.conj(model22.lagrangian)) < 1e-14

    def test_reversal_swaps_concatenation(self, model22):
        spin = SpinGroup(2)
        paths = PathGroup(2, spin)
        tau = vertex_reflection(model22)
        for _ in range(10):
            p, q = paths.sample(rng), paths.sample(rng)
            q[-1] = p[-1]
            gpq = omega_matrix(model22, spin, concat_paths(p, q))
            gqp = omega_matrix(model22, spin, concat_paths(q, p))
            assert maxabs(reflect_orthogonal(tau, gpq) - gqp) < 1e-12

    def test_doubled_loops_are_reversal_fixed(self, model22):
        spin = SpinGroup(2)
        paths = PathGroup(2, spin)
        tau = vertex_reflection(model22)
        p = paths.sample(rng)
        g = omega_matrix(model22, spin, double_path(p))
        assert maxabs(reflect_orthogonal(tau, g) - g) < 1e-12

    def test_edge_reflection_swaps_halves(self, model22):
        tau = edge_reflection(model22)
        assert maxabs(tau @ tau - np.eye(8)) == 0.0
        spin = SpinGroup(2)
        loop = np.stack([spin.sample(rng) for _ in range(4)])
        g = omega_matrix(model22, spin, loop)
        shifted = omega_matrix(model22, spin, reversed_loop(loop, shift=1))
        assert maxabs(reflect_orthogonal(tau, g) - shifted) < 1e-12


class TestLoopCocycle:
    def test_diagonal_vanishes(self, model22):
        xi = random_loop_algebra(model22, rng)
        cmp = loop_cocycle_compare(model22, xi, xi)
        assert abs(cmp["centered"]) < 1e-12
        assert abs(cmp["fock"]) < 1e-12
        # the one-sided difference is only antisymmetric up to lattice terms
        assert abs(cmp["discrete"]) > 1e-8

    def test_constant_loops(self, model22):
        B = rng.standard_normal((2, 2))
        xi = [B - B.T] * 4
        eta = random_loop_algebra(model22, rng)
        assert abs(discrete_loop_cocycle(eta, xi)) < 1e-12

    def test_centered_antisymmetry_exact(self, model22):
        xi = random_loop_algebra(model22, rng)
        eta = random_loop_algebra(model22, rng)
        assert abs(discrete_loop_cocycle_centered(xi, eta)
                   + discrete_loop_cocycle_centered(eta, xi)) < 1e-14

    def test_forward_difference_asymmetry_is_second_order(self, model22):
        xi = random_loop_algebra(model22, rng)
        eta = random_loop_algebra(model22, rng)
        asym = abs(discrete_loop_cocycle(xi, eta) + discrete_loop_cocycle(eta, xi))
        assert asym > 1e-8  # genuine lattice artifact of the one-sided difference
