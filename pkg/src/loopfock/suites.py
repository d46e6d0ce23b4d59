"""Check catalog and suite runner.

Every check draws randomness from a generator seeded by (config.seed, crc32
of the check name), so adding or removing checks never perturbs the samples
of the others and identical configurations reproduce identical reports.
"""

import time
import zlib

import numpy as np

from . import algebra as alg_mod
from . import bogoliubov as bog
from . import clifford as cliff
from . import loops as lp
from . import rep
from . import twogroup as tg
from .linalg import TolerancePolicy, maxabs, scalar_defect, span_residual
from .report import CheckRecord, emit_report, summarize

EXPLORATORY = float("inf")


class Environment:
    """Lazily built model and context shared by the checks of one run."""

    def __init__(self, config):
        self.config = config
        self.tol = TolerancePolicy(config.eq_tol, config.rank_tol)
        self._model = None
        self._ctx = None

    @property
    def model(self):
        if self._model is None:
            self._model = cliff.build_clifford_model(self.config.n, self.config.d, tol=self.tol)
        return self._model

    @property
    def ctx(self):
        if self._ctx is None:
            self._ctx = rep.build_context(self.model, self.tol)
        return self._ctx

    @property
    def spin(self):
        return self.ctx.spin

    def rng(self, name):
        return np.random.default_rng([self.config.seed, zlib.crc32(name.encode())])


def _record(env, suite, name, anchor, residual, tolerance, samples):
    return CheckRecord(suite, name, anchor, float(residual), tolerance,
                       bool(residual <= tolerance), 0.0, samples)


def _from_report(env, suite, name, anchor, report, tolerance, samples=None):
    return _record(env, suite, name, anchor, report.max_residual, tolerance,
                   samples if samples is not None else env.config.samples)


# ---------------------------------------------------------------- clifford

def clifford_checks(env):
    cfg, model, tol = env.config, env.model, env.tol
    out = []

    rng = env.rng("clifford anticommutation")
    worst_ac, worst_star = 0.0, 0.0
    for _ in range(200):
        v = rng.standard_normal(model.dim_h) + 1j * rng.standard_normal(model.dim_h)
        w = rng.standard_normal(model.dim_h) + 1j * rng.standard_normal(model.dim_h)
        worst_ac = max(worst_ac, cliff.anticommutator_residual(model, v, w))
        worst_star = max(worst_star, cliff.star_residual(model, v))
    out.append(_record(env, "clifford", "anticommutation", "generator anticommutator",
                       worst_ac, 1e-10, 200))
    out.append(_record(env, "clifford", "star relation", "adjoint versus conjugate vector",
                       worst_star, 1e-10, 200))

    L = model.lagrangian
    m = model.lattice.modes
    res = max(maxabs(L.conj().T @ L - np.eye(m)), maxabs(L.T @ L))
    out.append(_record(env, "clifford", "lagrangian", "orthonormal and isotropic", res, cfg.gate, 1))

    G = model.grading
    res = maxabs(G @ G - np.eye(model.fock_dim))
    res = max(res, maxabs(G @ model.generators @ G + model.generators))
    out.append(_record(env, "clifford", "grading", "involution flipping generators", res, cfg.gate, 1))

    dim = rep.irreducibility_dimension(model, env.rng("clifford irreducibility"), tol)
    out.append(_record(env, "clifford", "irreducibility", "generator commutant is scalar",
                       abs(dim - 1), cfg.gate, 1))

    first = cliff.half_space(model, "first")
    mono = cliff.clifford_monomials(model, first)
    spanned = alg_mod.generated_star_algebra(model.generators[cliff.generator_indices(model, first)], tol)
    res = 0.0 if spanned.dim == mono.shape[0] else float(abs(spanned.dim - mono.shape[0]))
    res = max(res, span_residual(mono, spanned.basis))
    out.append(_record(env, "clifford", "monomial span", "monomials span the generated algebra",
                       res, cfg.gate, 1))
    return out


# -------------------------------------------------------------- bogoliubov

def bogoliubov_checks(env):
    cfg, model, tol = env.config, env.model, env.tol
    out = []
    D = model.dim_h

    rng = env.rng("implementer construction")
    dim_defect = 0.0
    relation = 0.0
    agreement = 0.0
    for _ in range(50):
        g = bog.random_special_orthogonal(D, rng)
        oracle = bog.implement_oracle(model, g, tol, rng)
        relation = max(relation, bog.implementation_residual(model, oracle.unitary, g))
        pin = bog.implement_pin(model, g, tol)
        no = bog.normalize_phase(oracle, "vacuum", tol)
        npi = bog.normalize_phase(pin, "vacuum", tol)
        if no.normalization == "vacuum" and npi.normalization == "vacuum":
            agreement = max(agreement, maxabs(no.unitary - npi.unitary))
        else:
            agreement = max(agreement, bog.projective_distance(no.unitary, npi.unitary))
    out.append(_record(env, "bogoliubov", "implementer uniqueness", "intertwiner space is a line",
                       dim_defect, cfg.gate, 50))
    out.append(_record(env, "bogoliubov", "implementer relation", "conjugation realizes the rotation",
                       relation, 1e-9, 50))
    out.append(_record(env, "bogoliubov", "pin oracle agreement", "two constructions, one unitary",
                       agreement, cfg.gate, 50))

    rng = env.rng("extension cocycle")
    scal = 0.0
    ident = 0.0
    for _ in range(50):
        g = bog.random_special_orthogonal(D, rng)
        h = bog.random_special_orthogonal(D, rng)
        k = bog.random_special_orthogonal(D, rng)
        cgh = bog.extension_cocycle(model, g, h, tol)
        scal = max(scal, abs(abs(cgh) - 1.0))
        lhs = cgh * bog.extension_cocycle(model, g @ h, k, tol)
        rhs = bog.extension_cocycle(model, g, h @ k, tol) * bog.extension_cocycle(model, h, k, tol)
        ident = max(ident, abs(lhs - rhs))
    out.append(_record(env, "bogoliubov", "cocycle scalar", "triple product collapses to a phase",
                       scal, cfg.gate, 50))
    out.append(_record(env, "bogoliubov", "cocycle identity", "associativity of the phase defect",
                       ident, cfg.gate, 50))

    rng = env.rng("derived implementers")
    contract = 0.0
    linear = 0.0
    expmatch = 0.0
    for _ in range(10):
        X = bog.random_skew(D, rng)
        Y = bog.random_skew(D, rng)
        dX = bog.derived_implementer(model, X, tol)
        dY = bog.derived_implementer(model, Y, tol)
        dXY = bog.derived_implementer(model, X + Y, tol)
        linear = max(linear, maxabs(dX + dY - dXY))
        contract = max(contract, maxabs(dX @ model.generators[0] - model.generators[0] @ dX
                                        - cliff.pi_vector(model, X[:, 0].astype(complex))))
    theta = 0.7
    K = np.zeros((D, D))
    K[1, 0], K[0, 1] = 1.0, -1.0
    dK = bog.derived_implementer(model, K, tol)
    w, V = np.linalg.eigh(1j * theta * dK)
    U_exp = (V * np.exp(-1j * w)) @ V.conj().T
    g_rot = np.eye(D)
    g_rot[0, 0] = g_rot[1, 1] = np.cos(theta)
    g_rot[1, 0], g_rot[0, 1] = np.sin(theta), -np.sin(theta)
    U_pin = bog.normalize_phase(bog.implement_pin(model, g_rot, tol), "vacuum", tol).unitary
    expmatch = bog.projective_distance(U_exp, U_pin)
    out.append(_record(env, "bogoliubov", "derived linearity", "quadratic generator is linear",
                       linear, cfg.gate, 10))
    out.append(_record(env, "bogoliubov", "derived contract", "commutator reproduces the generator",
                       contract, cfg.gate, 10))
    out.append(_record(env, "bogoliubov", "derived exponential", "one-parameter rotation matches",
                       expmatch, cfg.gate, 1))

    rng = env.rng("schwinger term")
    bilin = 0.0
    jacobi = 0.0
    for _ in range(20):
        X, Y, Z = (bog.random_skew(D, rng) for _ in range(3))
        a, b = rng.standard_normal(2)
        sXY = bog.schwinger_term(model, X, Y, tol)
        bilin = max(bilin, abs(sXY + bog.schwinger_term(model, Y, X, tol)))
        bilin = max(bilin, abs(bog.schwinger_term(model, a * X + b * Y, Z, tol)
                               - a * bog.schwinger_term(model, X, Z, tol)
                               - b * bog.schwinger_term(model, Y, Z, tol)))
        comm = lambda P, Q: P @ Q - Q @ P
        jacobi = max(jacobi, abs(bog.schwinger_term(model, comm(X, Y), Z, tol)
                                 + bog.schwinger_term(model, comm(Y, Z), X, tol)
                                 + bog.schwinger_term(model, comm(Z, X), Y, tol)))
    out.append(_record(env, "bogoliubov", "schwinger bilinear", "anomaly is an antisymmetric form",
                       bilin, cfg.gate, 20))
    out.append(_record(env, "bogoliubov", "schwinger jacobi", "cocycle identity of the anomaly",
                       jacobi, cfg.gate, 20))
    return out


# ------------------------------------------------------------------ tomita

def tomita_checks(env):
    cfg, model, tol = env.config, env.model, env.tol
    ctx = env.ctx
    out = []
    N = model.fock_dim
    A = ctx.algebra
    sfd = ctx.sfd

    status = alg_mod.cyclic_separating_check(A, model.vacuum, tol)
    out.append(_record(env, "tomita", "cyclic separating", "vacuum is cyclic and separating",
                       0.0 if bool(status) else 1.0, cfg.gate, 1))

    Ms = sfd.tomita.linear
    Mj = sfd.conjugation.linear
    delta = sfd.delta
    w, V = np.linalg.eigh(delta)
    half = (V * np.sqrt(w)) @ V.conj().T
    inv = (V * (1.0 / w)) @ V.conj().T
    res = max(
        maxabs(Ms @ np.conj(Ms) - np.eye(N)),
        maxabs(Mj @ np.conj(Mj) - np.eye(N)),
        maxabs(Ms - Mj @ np.conj(half)) / max(1.0, maxabs(half)),
        maxabs(sfd.conjugation.conjugate_matrix(delta) - inv) / max(1.0, maxabs(inv)),
        maxabs(Ms @ np.conj(model.vacuum) - model.vacuum),
        maxabs(delta @ model.vacuum - model.vacuum),
    )
    out.append(_record(env, "tomita", "modular identities", "polar pieces of the star map",
                       res, 1e-9, 1))

    JAJ = np.stack([sfd.conjugation.conjugate_matrix(a) for a in A.basis])
    res = max(span_residual(JAJ, ctx.algebra_comm.basis),
              span_residual(ctx.algebra_comm.basis, alg_mod.orthonormal_rows(JAJ, tol)))
    out.append(_record(env, "tomita", "conjugation onto commutant", "J maps the algebra onto its commutant",
                       res, 1e-9, 1))

    report = rep.check_twisted_duality(ctx, tol)
    out.append(_from_report(env, "tomita", "twisted duality", "half algebras are mutual super commutants",
                            report, cfg.gate))

    comm = ctx.algebra_comm
    pairwise = maxabs(np.einsum("aij,bjk->abik", A.basis, comm.basis)
                      - np.einsum("bij,ajk->abik", comm.basis, A.basis))
    dim_defect = 0.0 if A.dim * comm.dim == N * N else 1.0
    out.append(_record(env, "tomita", "double commutant", "commutant dimensions multiply to the full algebra",
                       max(pairwise, dim_defect), cfg.gate, 1))

    rng = env.rng("haagerup implementation")
    units = rep.UnitaryInAlgebraGroup(A)
    act_res, j_res, cone_res, mult_res, kernel_res = 0.0, 0.0, 0.0, 0.0, 0.0
    for _ in range(20):
        theta = alg_mod.inner_automorphism_from_unitary(A, units.sample(rng))
        theta2 = alg_mod.inner_automorphism_from_unitary(A, units.sample(rng))
        U = alg_mod.canonical_implementation(sfd, A, theta, tol, rng=rng)
        act_res = max(act_res, maxabs(U @ A.basis @ U.conj().T - theta.images))
        j_res = max(j_res, maxabs(U @ Mj - Mj @ np.conj(U)))
        probe = A.from_coordinates(rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim))
        cone_res = max(cone_res, sfd.cone_defect(U @ (probe @ sfd.reflect(probe) @ sfd.omega)))
        U2 = alg_mod.canonical_implementation(sfd, A, theta2, tol, rng=rng)
        U12 = alg_mod.canonical_implementation(sfd, A, theta.compose(theta2), tol, rng=rng)
        mult_res = max(mult_res, maxabs(U @ U2 - U12))
        # kernel identities: algebra unitaries are trivial on the mirror side
        # and mirrored unitaries act trivially on the algebra
        u = units.sample(rng)
        kernel_res = max(kernel_res,
                         maxabs(alg_mod.reflected_action(u, A, sfd, tol).images - A.basis),
                         maxabs(alg_mod.conjugation_action(sfd.reflect(u), A, tol).images - A.basis))
    out.append(_record(env, "tomita", "canonical action", "implementation acts as the automorphism",
                       act_res, 1e-9, 20))
    out.append(_record(env, "tomita", "canonical J commutation", "implementation commutes with J",
                       j_res, 1e-9, 20))
    out.append(_record(env, "tomita", "canonical cone", "implementation preserves the positive cone",
                       cone_res, 1e-9, 20))
    out.append(_record(env, "tomita", "canonical multiplicative", "implementation is a homomorphism",
                       mult_res, cfg.gate, 20))
    out.append(_record(env, "tomita", "action kernels", "algebra unitaries act trivially on the mirror side",
                       kernel_res, cfg.gate, 20))
    return out


# --------------------------------------------------------------- two-group

def _builtin_crossed_modules():
    z4 = tg.FiniteGroup.cyclic(4)
    s3 = tg.FiniteGroup.symmetric(3)
    builtins = [tg.delooping(z4), tg.discrete(s3), tg.delooping(tg.FiniteGroup.cyclic(2)),
                tg.discrete(tg.FiniteGroup.cyclic(6))]
    return builtins


def twogroup_checks(env):
    cfg, tol = env.config, env.tol
    out = []
    samples = cfg.samples

    worst = 0.0
    for cm in _builtin_crossed_modules():
        report = tg.check_crossed_module(cm, samples, env.rng(f"axioms {cm.name}"), tol)
        worst = max(worst, report.max_residual)
    out.append(_record(env, "two-group", "finite crossed modules", "axioms on the stock examples",
                       worst, cfg.gate, samples))

    s3 = tg.FiniteGroup.symmetric(3)
    bad = tg.delooping(s3)
    report = tg.check_crossed_module(bad, samples, env.rng("nonabelian fiber"), tol)
    detected = report.residuals["peiffer"] > 0.5
    out.append(_record(env, "two-group", "peiffer detects nonabelian", "delooped nonabelian group fails",
                       0.0 if detected else 1.0, cfg.gate, samples))

    aut = tg.matrix_automorphism_module(2)
    report = tg.check_crossed_module(aut, 50, env.rng("matrix automorphisms"), tol)
    out.append(_from_report(env, "two-group", "matrix automorphism module", "units over conjugations",
                            report, cfg.gate))

    z2, z4cm = tg.delooping(tg.FiniteGroup.cyclic(2)), tg.delooping(tg.FiniteGroup.cyclic(4))
    incl = tg.inclusion_intertwiner(2, z2, z4cm)
    report = tg.check_intertwiner(incl, z2, z4cm, samples, env.rng("inclusion"), tol)
    out.append(_from_report(env, "two-group", "inclusion intertwiner", "doubling map between deloopings",
                            report, cfg.gate))
    broken = tg.StrictIntertwiner(on_base=incl.on_base, on_fiber=lambda h: (h * h + 1) % 4, name="broken")
    report = tg.check_intertwiner(broken, z2, z4cm, samples, env.rng("broken map"), tol)
    out.append(_record(env, "two-group", "intertwiner detects defect", "non-homomorphism is flagged",
                       0.0 if report.max_residual > 0.5 else 1.0, cfg.gate, samples))

    round_trip = 0.0
    minimal = 0.0
    composition = 0.0
    for cm in _builtin_crossed_modules() + [tg.matrix_automorphism_module(2)]:
        two = tg.to_two_group(cm)
        rng = env.rng(f"round trip {cm.name}")
        minimal = max(minimal, tg.check_minimal_data(two, 50, rng, tol).max_residual)
        back = tg.to_crossed_module(two)
        round_trip = max(round_trip, tg.check_crossed_module(back, 50, rng, tol).max_residual)
        for _ in range(20):
            h = cm.fiber.sample(rng)
            g = cm.base.sample(rng)
            round_trip = max(round_trip, cm.base.dist(back.t((h, cm.base.identity())), cm.t(h)))
            round_trip = max(round_trip,
                             cm.fiber.dist(back.act(g, (h, cm.base.identity()))[0], cm.act(g, h)))
        composition = max(composition, tg.check_interchange(two, 30, rng, tol).max_residual)
        x = two.morphisms.sample(rng)
        left = tg.compose_morphisms(two, tg.invert_morphism(two, x), x, tol)
        composition = max(composition, two.morphisms.dist(left, two.unit(two.source(x))))
        g = two.objects.sample(rng)
        composition = max(composition,
                          two.morphisms.dist(tg.compose_morphisms(two, two.unit(g), two.unit(g), tol),
                                             two.unit(g)))
    out.append(_record(env, "two-group", "functor round trip", "crossed module survives the 2-group detour",
                       round_trip, 1e-10, 50))
    out.append(_record(env, "two-group", "minimal data", "section and kernel conditions",
                       minimal, cfg.gate, 50))
    out.append(_record(env, "two-group", "composition laws", "interchange, units and inverses",
                       composition, cfg.gate, 30))

    rng = env.rng("pi structure")
    z4 = tg.FiniteGroup.cyclic(4)
    ba = tg.delooping(z4)
    pi = tg.pi0_pi1(ba, rng, 50, tol=tol)
    res = pi.centrality
    res = max(res, 0.0 if all(pi.pi1_contains(h) for h in z4.elements) else 1.0)
    res = max(res, 0.0 if pi.pi0_equal(0, 0) else 1.0)
    s3 = tg.FiniteGroup.symmetric(3)
    dis = tg.discrete(s3)
    pi = tg.pi0_pi1(dis, rng, 50, tol=tol)
    eq01 = pi.pi0_equal(s3.elements[0], s3.elements[1])
    res = max(res, 1.0 if eq01 else 0.0)
    out.append(_record(env, "two-group", "pi structure", "kernel and quotient of the stock examples",
                       res, cfg.gate, 50))
    return out


# ------------------------------------------------------------------ string

def string_checks(env):
    cfg, model, tol = env.config, env.model, env.tol
    spin = env.spin
    out = []
    d = model.d

    rng = env.rng("spin covering")
    res = maxabs(spin.covering(spin.identity()) - np.eye(d))
    res = max(res, maxabs(spin.covering(-spin.identity()) - np.eye(d)))
    theta = 0.9
    B = np.zeros((d, d))
    B[1, 0], B[0, 1] = theta, -theta
    R = np.eye(d)
    R[0, 0] = R[1, 1] = np.cos(theta)
    R[1, 0], R[0, 1] = np.sin(theta), -np.sin(theta)
    res = max(res, maxabs(spin.covering(lp.spin_exp(B, spin.gammas)) - R))
    for _ in range(50):
        x, y = spin.sample(rng), spin.sample(rng)
        res = max(res, maxabs(spin.covering(x @ y) - spin.covering(x) @ spin.covering(y)))
        lam = spin.covering(x)
        res = max(res, maxabs(lam.T @ lam - np.eye(d)))
        res = max(res, abs(np.linalg.det(lam) - 1.0))
    out.append(_record(env, "string", "spin covering", "double cover onto rotations",
                       res, cfg.gate, 50))

    rng = env.rng("pointwise action")
    paths = lp.PathGroup(model.n, spin)
    res = 0.0
    for _ in range(50):
        a = np.stack([spin.sample(rng) for _ in range(2 * model.n)])
        b = np.stack([spin.sample(rng) for _ in range(2 * model.n)])
        res = max(res, maxabs(lp.omega_matrix(model, spin, a @ b)
                              - lp.omega_matrix(model, spin, a) @ lp.omega_matrix(model, spin, b)))
    out.append(_record(env, "string", "orthogonal action", "pointwise rotations form a homomorphism",
                       res, cfg.gate, 50))

    rng = env.rng("paths and doubling")
    res = maxabs(lp.double_path(paths.identity(), tol) - lp.loop_identity(model.n, spin))
    for _ in range(20):
        p = paths.sample(rng)
        q = paths.sample(rng)
        q[-1] = p[-1]
        loop = lp.concat_paths(p, q, tol)
        res = max(res, maxabs(loop[model.n] - p[model.n]))
        res = max(res, maxabs(loop[0] - spin.identity()))
        half = _half_supported_from(model, spin, rng)
        back = lp.concat_paths(lp.restrict_loop(half, tol), paths.identity(), tol)
        res = max(res, maxabs(back - half))
    out.append(_record(env, "string", "path doubling", "concatenation and restriction bookkeeping",
                       res, cfg.gate, 20))

    rng = env.rng("lift structure")
    res_proj = 0.0
    res_scan = 0.0
    for _ in range(20):
        a = np.stack([spin.sample(rng) for _ in range(2 * model.n)])
        b = np.stack([spin.sample(rng) for _ in range(2 * model.n)])
        Ua = lp.lift(model, spin, a, tol).unitary
        Ub = lp.lift(model, spin, b, tol).unitary
        Uab = lp.lift(model, spin, a @ b, tol).unitary
        defect, lam = scalar_defect(Ua @ Ub @ Uab.conj().T)
        res_proj = max(res_proj, defect, abs(abs(lam) - 1.0))
        imp = lp.lift(model, spin, a, tol).implementer
        rescan = bog.normalize_phase(imp, "scan", tol).unitary
        sdef, slam = scalar_defect(rescan @ Ua.conj().T)
        res_scan = max(res_scan, max(sdef, abs(abs(slam) - 1.0)))
    out.append(_record(env, "string", "projective lifts", "lift products differ by a phase",
                       res_proj, cfg.gate, 20))
    out.append(_record(env, "string", "lift ambiguity", "renormalized lifts differ by a phase",
                       res_scan, cfg.gate, 20))

    report = tg.check_crossed_module(env.ctx.string_cm, 100, env.rng("string axioms"), tol)
    out.append(_from_report(env, "string", "string crossed module", "equivariance and peiffer",
                            report, cfg.gate))

    rng = env.rng("disjoint supports")
    res = 0.0
    overlap = 0.0
    for _ in range(50):
        first, second = lp.disjoint_support_pair(model, spin, rng)
        U1 = lp.lift(model, spin, first, tol).unitary
        U2 = lp.lift(model, spin, second, tol).unitary
        res = max(res, maxabs(U1 @ U2 - U2 @ U1))
    for _ in range(5):
        a = np.stack([spin.sample(rng) for _ in range(2 * model.n)])
        b = np.stack([spin.sample(rng) for _ in range(2 * model.n)])
        Ua, Ub = lp.lift(model, spin, a, tol).unitary, lp.lift(model, spin, b, tol).unitary
        overlap = max(overlap, maxabs(Ua @ Ub - Ub @ Ua))
    out.append(_record(env, "string", "disjoint commutativity", "separated half loops commute",
                       res, cfg.gate, 50))
    out.append(_record(env, "string", "overlapping supports", "generic loops fail to commute (reported)",
                       overlap, EXPLORATORY, 5))

    rng = env.rng("reflection")
    tau = lp.vertex_reflection(model)
    res = maxabs(tau @ tau - np.eye(model.dim_h))
    res = max(res, maxabs(tau @ model.lagrangian + np.conj(model.lagrangian)))
    for _ in range(10):
        p = paths.sample(rng)
        q = paths.sample(rng)
        q[-1] = p[-1]
        gpq = lp.omega_matrix(model, spin, lp.concat_paths(p, q, tol))
        gqp = lp.omega_matrix(model, spin, lp.concat_paths(q, p, tol))
        res = max(res, maxabs(lp.reflect_orthogonal(tau, gpq) - gqp))
    out.append(_record(env, "string", "vertex reflection", "reversal swaps concatenated halves",
                       res, cfg.gate, 10))

    rng = env.rng("endpoint section")
    fiber = env.ctx.string_cm.fiber
    res = 0.0
    for _ in range(20):
        ext = fiber.sample(rng)
        res = max(res, maxabs(lp.restrict_loop(ext.loop, tol)[model.n] - spin.identity()))
    out.append(_record(env, "string", "endpoint section", "restricted half loops end at the identity",
                       res, cfg.gate, 20))

    rng = env.rng("loop cocycle")
    xi = lp.random_loop_algebra(model, rng)
    eta = lp.random_loop_algebra(model, rng)
    cmp = lp.loop_cocycle_compare(model, xi, eta, tol)
    out.append(_record(env, "string", "loop cocycle comparison",
                       "discrete pairing versus commutator anomaly (reported)",
                       abs(cmp["difference"]), EXPLORATORY, 1))
    anti = abs(lp.discrete_loop_cocycle_centered(xi, eta) + lp.discrete_loop_cocycle_centered(eta, xi))
    anti = max(anti, abs(bog.schwinger_term(model, lp.skew_from_loop_algebra(model, xi),
                                            lp.skew_from_loop_algebra(model, eta), tol)
                         + bog.schwinger_term(model, lp.skew_from_loop_algebra(model, eta),
                                              lp.skew_from_loop_algebra(model, xi), tol)))
    out.append(_record(env, "string", "loop cocycle antisymmetry", "pairing changes sign under swap",
                       anti, cfg.gate, 1))
    fwd = abs(lp.discrete_loop_cocycle(xi, eta) + lp.discrete_loop_cocycle(eta, xi))
    out.append(_record(env, "string", "forward difference asymmetry",
                       "lattice defect of the one-sided pairing (reported)", fwd, EXPLORATORY, 1))
    return out


def _half_supported_from(model, spin, rng):
    loop = [spin.identity() for _ in range(2 * model.n)]
    for j in range(1, model.n):
        loop[j] = spin.sample(rng)
    return np.stack(loop)


# --------------------------------------------------------------------- rep

def rep_checks(env):
    cfg, tol = env.config, env.tol
    ctx = env.ctx
    out = []

    out.append(_from_report(env, "rep", "fiber lands in the algebra", "even unitaries inside the span",
                            rep.check_membership_evenness(ctx, 50, env.rng("fiber membership"), tol), cfg.gate))
    out.append(_from_report(env, "rep", "t compatibility", "restriction matches conjugation",
                            rep.check_t_compatibility(ctx, 100, env.rng("t compatibility"), tol), cfg.gate))
    out.append(_from_report(env, "rep", "action compatibility", "doubling action matches evaluation",
                            rep.check_alpha_compatibility(ctx, 100, env.rng("action compatibility"), tol),
                            cfg.gate))
    out.append(_from_report(env, "rep", "well definedness", "only the first half matters",
                            rep.check_well_definedness(ctx, 50, env.rng("well definedness"), tol), cfg.gate))

    R = rep.representation_intertwiner(ctx)
    report = tg.check_intertwiner(R, ctx.string_cm, ctx.unitary_cm, 50,
                                  env.rng("full intertwiner"), tol)
    out.append(_from_report(env, "rep", "strict intertwiner", "both compatibilities and both homomorphisms",
                            report, cfg.gate))

    ff_report, ff_impl = rep.check_fusion_factorization(ctx, 12, env.rng("fusion factorization"), tol)
    out.append(_from_report(env, "rep", "fusion factorization", "section, homomorphism, J commutation",
                            ff_report, cfg.gate))
    out.append(_record(env, "rep", "fusion factorization implements",
                       "canonical unitary versus the vertex-doubled rotation (reported)",
                       ff_impl["vertex doubled"], EXPLORATORY, 12))
    out.append(_record(env, "rep", "canonical unit edge law",
                       "canonical unitary implements the edge-doubled rotation (reported)",
                       ff_impl["edge doubled"], EXPLORATORY, 12))

    f_report, f_extra = rep.check_f_scalar(ctx, 20, env.rng("unit comparison"), tol)
    out.append(_from_report(env, "rep", "unit comparison scalar", "canonical and lifted units differ by a phase",
                            f_report, cfg.gate))
    out.append(_record(env, "rep", "unit comparison value", "observed deviation of the phase from one (reported)",
                       f_extra["scalar minus one"], EXPLORATORY, 20))

    pair_tg = rep.pair_two_group(ctx)
    norm_tg = rep.normalizer_two_group(ctx)
    pair_report = tg.check_minimal_data(pair_tg, 12, env.rng("pair minimal data"), tol)
    unit_res = pair_report.residuals.pop("i homomorphism")
    out.append(_record(env, "rep", "pair 2-group minimal data", "sections and commuting kernels",
                       pair_report.max_residual, cfg.gate, 12))
    out.append(_record(env, "rep", "pair 2-group unit multiplicativity",
                       "lifted unit section is a homomorphism", unit_res, cfg.gate, 12))
    sign_report = rep.unit_sign_cocycle(ctx, 20, env.rng("unit sign cocycle"), tol)
    out.append(_record(env, "rep", "unit section sign cocycle",
                       "worst distance of the unit cocycle from +-1 (reported)",
                       sign_report["distance from signs"], EXPLORATORY, 20))
    out.append(_record(env, "rep", "unit section sign frequency",
                       "fraction of sampled pairs on the negative branch (reported)",
                       sign_report["negative fraction"], EXPLORATORY, 20))
    res = tg.check_minimal_data(norm_tg, 8, env.rng("normalizer minimal data"), tol).max_residual
    out.append(_record(env, "rep", "normalizer 2-group minimal data", "sections and commuting kernels",
                       res, cfg.gate, 8))

    gated, extra = rep.check_two_group_compatibility(ctx, 25, env.rng("2-group compatibility"), tol)
    out.append(_record(env, "rep", "2-group target compatibility", "targets intertwine",
                       gated.residuals["target"], cfg.gate, 25))
    out.append(_record(env, "rep", "2-group source compatibility", "sources intertwine on interior loops",
                       gated.residuals["source (interior class)"], cfg.gate, 25))
    out.append(_record(env, "rep", "2-group source shifted", "source equals the edge-reversed conjugation (reported)",
                       extra["source vs edge-reversed loop"], EXPLORATORY, 25))

    mod = rep.modular_vs_reflection(ctx, 8, env.rng("modular reflection"), tol)
    out.append(_record(env, "rep", "mirror is a rotation", "J conjugation stays Bogoliubov (reported)",
                       mod["bogoliubov defect"], EXPLORATORY, 8))
    out.append(_record(env, "rep", "mirror vs vertex reflection", "moved-coordinate defect (reported)",
                       mod["vertex moved"], EXPLORATORY, 8))
    out.append(_record(env, "rep", "mirror vs vertex reflection fixed", "fixed-coordinate defect (reported)",
                       mod["vertex fixed"], EXPLORATORY, 8))
    out.append(_record(env, "rep", "mirror vs edge reflection", "edge-reversal defect (reported)",
                       mod["edge"], EXPLORATORY, 8))

    pi_report = rep.check_pi_levels(ctx, 20, env.rng("pi levels"), tol)
    out.append(_record(env, "rep", "central fiber identity", "phases map to phases",
                       pi_report.residuals["central identity"], 1e-10, 20))
    out.append(_record(env, "rep", "centrality", "phases are fixed by the action",
                       pi_report.residuals["centrality"], 1e-10, 20))
    out.append(_record(env, "rep", "endpoint inner difference", "equal endpoints differ by an inner twist",
                       pi_report.residuals["endpoint inner difference"], cfg.gate, 20))
    kernel_dim = rep.irreducibility_dimension(ctx.model, env.rng("pi1 kernel"), tol)
    out.append(_record(env, "rep", "pi1 kernel dimension", "only phases fix every generator",
                       abs(kernel_dim - 1), cfg.gate, 1))
    return out


SUITES = {
    "clifford": clifford_checks,
    "bogoliubov": bogoliubov_checks,
    "tomita": tomita_checks,
    "two-group": twogroup_checks,
    "string": string_checks,
    "rep": rep_checks,
}


def run_suites(config):
    """Execute the configured suites; returns (exit_code, records)."""
    config.validate()
    env = Environment(config)
    records = []
    for suite in config.ordered_suites():
        t0 = time.perf_counter()
        suite_records = SUITES[suite](env)
        elapsed = time.perf_counter() - t0
        share = elapsed / max(len(suite_records), 1)
        for r in suite_records:
            r.wall_time = share
        records.extend(suite_records)
    failed = [r for r in records if not r.exploratory and not r.passed]
    return (1 if failed else 0), records


def run(config):
    """Full entry point: run, write the report file if requested, return exit code."""
    code, records = run_suites(config)
    if config.report_path:
        data = emit_report(config, records, config.report_format)
        with open(config.report_path, "wb") as fh:
            fh.write(data)
    return code, records, summarize(records)
