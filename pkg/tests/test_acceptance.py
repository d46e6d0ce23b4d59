"""Acceptance gate: every stated criterion at its stated tolerance.

Reference lattice configurations (n, d) in {(1,2), (2,2), (2,3), (3,2)},
Fock dimensions 4 to 64, fixed seed.  Each test prints one line per
criterion with the worst measured residual.

Two sub-criteria of the 2-group layer are implemented faithfully and fail
on this lattice for a proven structural reason: the modular conjugation
implements the edge-centered reflection j -> 2n-1-j (verified here to
machine precision), which differs from the vertex reflection used by loop
concatenation by half a lattice spacing.  The companion identities that the
lattice does satisfy are asserted alongside at 1e-9.
"""

import numpy as np
import pytest

from loopfock import algebra as am
from loopfock import bogoliubov as bog
from loopfock import loops as lp
from loopfock import rep
from loopfock import twogroup as tg
from loopfock.clifford import build_clifford_model
from loopfock.linalg import maxabs, scalar_defect, span_residual
from loopfock.report import RunConfig, emit_report, strip_timing
from loopfock.suites import Environment, run_suites

CONFIGS = [(1, 2), (2, 2), (2, 3), (3, 2)]
SEED = 2024

_envs = {}


def env_for(n, d):
    if (n, d) not in _envs:
        _envs[(n, d)] = Environment(RunConfig(n=n, d=d, seed=SEED))
    return _envs[(n, d)]


def report_line(number, label, worst, gate):
    status = "PASS" if worst <= gate else "FAIL"
    print(f"[{status}] criterion {number}: {label} (worst {worst:.3e}, gate {gate:.1e})")
    return status == "PASS"


def test_c01_clifford_relations():
    worst = 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        model = env.model
        rng = env.rng("acceptance clifford")
        for _ in range(200):
            v = rng.standard_normal(model.dim_h) + 1j * rng.standard_normal(model.dim_h)
            w = rng.standard_normal(model.dim_h) + 1j * rng.standard_normal(model.dim_h)
            from loopfock.clifford import anticommutator_residual
            worst = max(worst, anticommutator_residual(model, v, w))
    ok = report_line(1, "anticommutation relation over 200 pairs per configuration", worst, 1e-10)
    assert ok


def test_c02_implementers():
    worst_dim, worst_rel, worst_agree = 0.0, 0.0, 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        model = env.model
        rng = env.rng("acceptance implementers")
        for _ in range(50):
            g = bog.random_special_orthogonal(model.dim_h, rng)
            oracle = bog.implement_oracle(model, g, env.tol, rng)   # raises unless the kernel is a line
            worst_rel = max(worst_rel, bog.implementation_residual(model, oracle.unitary, g))
            pin = bog.normalize_phase(bog.implement_pin(model, g, env.tol))
            orn = bog.normalize_phase(oracle)
            if orn.normalization == "vacuum" and pin.normalization == "vacuum":
                worst_agree = max(worst_agree, maxabs(orn.unitary - pin.unitary))
            else:
                worst_agree = max(worst_agree, bog.projective_distance(orn.unitary, pin.unitary))
    ok = report_line(2, "implementer kernel dimension one (50 maps per configuration)", worst_dim, 1e-12)
    ok &= report_line(2, "implementer relation", worst_rel, 1e-9)
    ok &= report_line(2, "pin/oracle agreement after phase normalization", worst_agree, 1e-8)
    assert ok


def test_c03_central_extension():
    worst_scalar, worst_identity = 0.0, 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        model = env.model
        rng = env.rng("acceptance cocycle")
        for _ in range(50):
            g, h, k = (bog.random_special_orthogonal(model.dim_h, rng) for _ in range(3))
            c = bog.extension_cocycle(model, g, h, env.tol)   # raises on a non-scalar defect
            worst_scalar = max(worst_scalar, abs(abs(c) - 1.0))
            lhs = c * bog.extension_cocycle(model, g @ h, k, env.tol)
            rhs = bog.extension_cocycle(model, g, h @ k, env.tol) * bog.extension_cocycle(model, h, k, env.tol)
            worst_identity = max(worst_identity, abs(lhs - rhs))
    ok = report_line(3, "triple products collapse to unit scalars", worst_scalar, 1e-8)
    ok &= report_line(3, "cocycle identity over 50 triples per configuration", worst_identity, 1e-8)
    assert ok


def test_c04_twisted_duality():
    worst = 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        report = rep.check_twisted_duality(env.ctx)
        worst = max(worst, report.max_residual)
    ok = report_line(4, "half algebras are each other's super commutants", worst, 1e-8)
    assert ok


def test_c05_modular_theory():
    worst = 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        ctx = env.ctx
        model, sfd = env.model, ctx.sfd
        N = model.fock_dim
        Ms, Mj, delta = sfd.tomita.linear, sfd.conjugation.linear, sfd.delta
        w, V = np.linalg.eigh(delta)
        half = (V * np.sqrt(w)) @ V.conj().T
        worst = max(worst,
                    maxabs(Mj @ np.conj(Mj) - np.eye(N)),
                    maxabs(Ms - Mj @ np.conj(half)) / max(1.0, maxabs(half)))
        JAJ = np.stack([sfd.conjugation.conjugate_matrix(a) for a in ctx.algebra.basis])
        worst = max(worst, span_residual(JAJ, ctx.algebra_comm.basis))
        rng = env.rng("acceptance haagerup")
        units = rep.UnitaryInAlgebraGroup(ctx.algebra)
        for _ in range(20):
            theta = am.inner_automorphism_from_unitary(ctx.algebra, units.sample(rng))
            U = am.canonical_implementation(sfd, ctx.algebra, theta, env.tol, rng=rng)
            worst = max(worst, maxabs(U @ ctx.algebra.basis @ U.conj().T - theta.images))
            worst = max(worst, maxabs(U @ Mj - Mj @ np.conj(U)))
            probe = ctx.algebra.from_coordinates(
                rng.standard_normal(ctx.algebra.dim) + 1j * rng.standard_normal(ctx.algebra.dim))
            worst = max(worst, sfd.cone_defect(U @ (probe @ sfd.reflect(probe) @ sfd.omega)))
    ok = report_line(5, "modular identities and canonical implementations", worst, 1e-9)
    assert ok


def test_c06_string_crossed_module():
    worst_axioms, worst_disjoint = 0.0, 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        report = tg.check_crossed_module(env.ctx.string_cm, 100,
                                         env.rng("acceptance string axioms"), env.tol)
        worst_axioms = max(worst_axioms, report.residuals["equivariance"],
                           report.residuals["peiffer"])
        rng = env.rng("acceptance disjoint")
        for _ in range(50):
            a, b = lp.disjoint_support_pair(env.model, env.spin, rng)
            Ua = lp.lift(env.model, env.spin, a, env.tol).unitary
            Ub = lp.lift(env.model, env.spin, b, env.tol).unitary
            worst_disjoint = max(worst_disjoint, maxabs(Ua @ Ub - Ub @ Ua))
    ok = report_line(6, "equivariance and Peiffer over 100 samples", worst_axioms, 1e-8)
    ok &= report_line(6, "disjoint commutativity over 50 pairs", worst_disjoint, 1e-8)
    assert ok


def test_c07_representation_compatibilities():
    worst_t, worst_alpha, worst_member, worst_well = 0.0, 0.0, 0.0, 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        ctx = env.ctx
        worst_t = max(worst_t, rep.check_t_compatibility(
            ctx, 100, env.rng("acceptance t"), env.tol).max_residual)
        worst_alpha = max(worst_alpha, rep.check_alpha_compatibility(
            ctx, 100, env.rng("acceptance alpha"), env.tol).max_residual)
        worst_member = max(worst_member, rep.check_membership_evenness(
            ctx, 50, env.rng("acceptance membership"), env.tol).max_residual)
        worst_well = max(worst_well, rep.check_well_definedness(
            ctx, 50, env.rng("acceptance well"), env.tol).max_residual)
    ok = report_line(7, "t compatibility over 100 samples", worst_t, 1e-8)
    ok &= report_line(7, "action compatibility over 100 samples", worst_alpha, 1e-8)
    ok &= report_line(7, "fiber membership and evenness", worst_member, 1e-8)
    ok &= report_line(7, "well-definedness", worst_well, 1e-8)
    assert ok


def test_c08_two_group_layer_structure():
    worst_round, worst_sections, worst_norm, worst_ff, worst_target = 0.0, 0.0, 0.0, 0.0, 0.0
    for cm in [tg.delooping(tg.FiniteGroup.cyclic(4)), tg.discrete(tg.FiniteGroup.symmetric(3)),
               tg.matrix_automorphism_module(2)]:
        two = tg.to_two_group(cm)
        back = tg.to_crossed_module(two)
        rng = np.random.default_rng(SEED)
        worst_round = max(worst_round, tg.check_crossed_module(back, 50, rng).max_residual)
        for _ in range(20):
            h, g = cm.fiber.sample(rng), cm.base.sample(rng)
            worst_round = max(worst_round, cm.base.dist(back.t((h, cm.base.identity())), cm.t(h)))
            worst_round = max(worst_round,
                              cm.fiber.dist(back.act(g, (h, cm.base.identity()))[0], cm.act(g, h)))
    for n, d in CONFIGS:
        env = env_for(n, d)
        ctx = env.ctx
        pair_report = tg.check_minimal_data(rep.pair_two_group(ctx), 10,
                                            env.rng("acceptance pair data"), env.tol)
        sections = {k: v for k, v in pair_report.residuals.items() if k != "i homomorphism"}
        worst_sections = max(worst_sections, max(sections.values()))
        worst_norm = max(worst_norm, tg.check_minimal_data(
            rep.normalizer_two_group(ctx), 6, env.rng("acceptance norm data"), env.tol).max_residual)
        ff_report, _ = rep.check_fusion_factorization(ctx, 10, env.rng("acceptance ff"), env.tol)
        worst_ff = max(worst_ff, ff_report.residuals["homomorphism"])
        gated, _ = rep.check_two_group_compatibility(ctx, 15, env.rng("acceptance compat"), env.tol)
        worst_target = max(worst_target, gated.residuals["target"])
    ok = report_line(8, "functor round trip", worst_round, 1e-10)
    ok &= report_line(8, "path-pair 2-group sections and kernels", worst_sections, 1e-8)
    ok &= report_line(8, "normalizer 2-group minimal data", worst_norm, 1e-8)
    ok &= report_line(8, "fusion factorization homomorphism", worst_ff, 1e-8)
    ok &= report_line(8, "2-group target compatibility", worst_target, 1e-8)
    assert ok


def test_c08_unit_section_multiplicativity():
    """Faithful gate on the unit homomorphism axiom of the path-pair 2-group.

    The lifted unit section multiplies up to a sign cocycle on branch strata
    of the vacuum overlap; the companion structural facts (the cocycle is a
    sign, the commutator pairing is trivial) are asserted at 1e-9.
    """
    worst_unit = 0.0
    worst_sign = 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        ctx = env.ctx
        pair_report = tg.check_minimal_data(rep.pair_two_group(ctx), 10,
                                            env.rng("acceptance pair data"), env.tol)
        worst_unit = max(worst_unit, pair_report.residuals["i homomorphism"])
        sign = rep.unit_sign_cocycle(ctx, 15, env.rng("acceptance signs"), env.tol)
        worst_sign = max(worst_sign, sign["distance from signs"])
    assert worst_sign <= 1e-9, "unit cocycle stopped being a sign"
    ok = report_line(8, "path-pair unit section is a homomorphism", worst_unit, 1e-8)
    assert ok, (
        f"the lifted unit section of the doubled-loop extension is multiplicative only up to "
        f"a sign cocycle on this lattice (worst defect {worst_unit:.3e}); the cocycle values "
        f"are +-1 to 1e-9 and the commutator pairing is trivial, so the obstruction is a "
        f"branch-cut artifact of every computable phase convention tried, not an extension class"
    )


def test_c08_unit_comparison_scalar():
    """Faithful gate: canonical and lifted units should differ by a phase.

    On this lattice the canonical unit implements the edge-doubled loop
    (asserted at 1e-9 below), which differs from the vertex-doubled loop by
    half a lattice spacing, so the comparison operator is a non-scalar
    element of the commutant.
    """
    worst_scalar = 0.0
    worst_edge = 0.0
    deviations = []
    for n, d in CONFIGS:
        env = env_for(n, d)
        ctx = env.ctx
        f_report, extra = rep.check_f_scalar(ctx, 15, env.rng("acceptance f"), env.tol)
        worst_scalar = max(worst_scalar, f_report.residuals["scalar defect"])
        deviations.append(extra["scalar minus one"])
        _, impl = rep.check_fusion_factorization(ctx, 6, env.rng("acceptance f edge"), env.tol)
        worst_edge = max(worst_edge, impl["edge doubled"])
    assert worst_edge <= 1e-9, "canonical unit stopped implementing the edge-doubled loop"
    print(f"[info] criterion 8: observed phase deviations from one per configuration: "
          + ", ".join(f"{v:.3e}" for v in deviations))
    ok = report_line(8, "canonical and lifted units differ by a scalar", worst_scalar, 1e-8)
    assert ok, (
        f"the unit-comparison operator is a non-scalar commutant element (defect "
        f"{worst_scalar:.3e}): the modular conjugation implements the edge reflection "
        f"j -> 2n-1-j exactly, so the canonical unit implements the edge-doubled loop "
        f"(residual {worst_edge:.2e}) rather than the vertex-doubled one"
    )


def test_c08_source_compatibility():
    """Faithful gate on source compatibility over interior loops.

    The identity the lattice does satisfy, source = conjugation by a lift of
    the edge-reversed loop, is asserted at 1e-9; the vertex-aligned gate
    below inherits the half-spacing shift and fails.
    """
    worst_source = 0.0
    worst_shifted = 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        gated, extra = rep.check_two_group_compatibility(env.ctx, 15,
                                                         env.rng("acceptance source"), env.tol)
        worst_source = max(worst_source, gated.residuals["source (interior class)"])
        worst_shifted = max(worst_shifted, extra["source vs edge-reversed loop"])
    assert worst_shifted <= 1e-9, "edge-reversed source identity stopped holding"
    ok = report_line(8, "2-group source compatibility on interior loops", worst_source, 1e-8)
    assert ok, (
        f"source compatibility fails on the designated interior class (residual "
        f"{worst_source:.3e}) because the modular reflection is edge-centered; the "
        f"edge-reversed comparison holds at {worst_shifted:.2e}"
    )


def test_c09_pi_level_structure():
    worst_kernel, worst_identity, worst_central = 0.0, 0.0, 0.0
    for n, d in CONFIGS:
        env = env_for(n, d)
        ctx = env.ctx
        dim = rep.irreducibility_dimension(env.model, env.rng("acceptance pi1"), env.tol)
        worst_kernel = max(worst_kernel, float(abs(dim - 1)))
        rng = env.rng("acceptance central")
        fiber = ctx.string_cm.fiber
        for _ in range(20):
            z = np.exp(2j * np.pi * rng.random())
            central = fiber.central(z)
            worst_identity = max(worst_identity, maxabs(
                rep.loop_unitary(ctx, central, env.tol) - z * np.eye(env.model.fock_dim)))
            p = ctx.string_cm.base.sample(rng)
            worst_central = max(worst_central, fiber.dist(ctx.string_cm.act(p, central), central))
    ok = report_line(9, "phase subgroup is the full kernel", worst_kernel, 1e-12)
    ok &= report_line(9, "fiber map restricts to the identity on phases", worst_identity, 1e-10)
    ok &= report_line(9, "centrality of the phase subgroup", worst_central, 1e-12)
    assert ok


def test_c10_determinism():
    cfg = RunConfig(n=1, d=2, seed=SEED)
    _, r1 = run_suites(cfg)
    _, r2 = run_suites(cfg)
    a = strip_timing(emit_report(cfg, r1, "json"))
    b = strip_timing(emit_report(cfg, r2, "json"))
    same = a == b
    print(f"[{'PASS' if same else 'FAIL'}] criterion 10: identical configurations reproduce "
          f"byte-identical reports modulo timing")
    assert same


def test_exploratory_observations():
    """Reported quantities without stated bounds; never gated."""
    print("[info] exploratory: commutator anomaly versus discrete pairing, d=2:")
    for n in (2, 3, 4):
        model = build_clifford_model(n, 2)
        rng = np.random.default_rng(SEED + n)
        xi = lp.random_loop_algebra(model, rng)
        eta = lp.random_loop_algebra(model, rng)
        cmp = lp.loop_cocycle_compare(model, xi, eta)
        print(f"    n={n}: fock {cmp['fock']:+.6f}, forward {cmp['discrete']:+.6f}, "
              f"centered {cmp['centered']:+.6f}, difference {abs(cmp['difference']):.3e}")
    env = env_for(2, 2)
    out = rep.modular_vs_reflection(env.ctx, 6, env.rng("exploratory mirror"), env.tol)
    print(f"[info] exploratory: mirror conjugation at (2,2): stays a rotation to "
          f"{out['bogoliubov defect']:.2e}; vertex-reflection defect on moved coordinates "
          f"{out['vertex moved']:.3e}, on fixed coordinates {out['vertex fixed']:.3e}; "
          f"edge-reflection defect {out['edge']:.2e}")
    sign = rep.unit_sign_cocycle(env.ctx, 20, env.rng("exploratory signs"), env.tol)
    print(f"[info] exploratory: unit cocycle sign structure at (2,2): distance from signs "
          f"{sign['distance from signs']:.2e}, negative-branch fraction {sign['negative fraction']:.2f}")
