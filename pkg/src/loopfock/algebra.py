"""Operator subalgebras of the Fock space and their modular structure.

Algebras are carried as linear bases (stacks of matrices).  Commutants and
super commutants have a generic kernel-solver route plus an exact averaging
fast path available whenever the algebra comes with involution-type unitary
generators, which is the case for all Clifford half-circle algebras.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (ConeViolation, NotAutomorphism, NotCyclicSeparating,
                     NotGraded, NotInNormalizer, NotInner)
from .linalg import (DEFAULT_TOL, AntilinearOperator, antilinear_polar,
                     averaged_intertwiners, joint_kernel, maxabs,
                     orthonormal_rows, polar_unitary, span_residual)


@dataclass
class OperatorAlgebra:
    """Unital star-closed linear span of Fock operators.

    basis rows are orthonormal in the Hilbert-Schmidt inner product;
    generators, when present, enable averaging-based commutant solves and
    cheaper automorphism checks.
    """

    basis: np.ndarray
    generators: np.ndarray | None = None

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def space_dim(self):
        return self.basis.shape[1]

    def membership_residual(self, X):
        return span_residual(np.asarray(X)[None, :, :] if np.asarray(X).ndim == 2 else X, self.basis)

    def coordinates(self, X):
        flat = self.basis.reshape(self.dim, -1)
        return flat.conj() @ np.asarray(X, dtype=complex).ravel()

    def from_coordinates(self, c):
        return np.tensordot(np.asarray(c, dtype=complex), self.basis, axes=(0, 0))

    def constraint_generators(self):
        """Matrices whose commutation constraints cut out the commutant."""
        return self.generators if self.generators is not None else self.basis


def algebra_from_span(stack, generators=None, tol=DEFAULT_TOL, require_unital=True, require_star=True):
    """Build an OperatorAlgebra from a spanning stack, with basic validation."""
    stack = np.asarray(stack, dtype=complex)
    basis = orthonormal_rows(stack, tol)
    N = basis.shape[1]
    if require_unital and span_residual(np.eye(N, dtype=complex)[None], basis) > tol.eq_tol:
        raise ValueError("span does not contain the identity")
    if require_star:
        adj = np.conj(np.transpose(basis, (0, 2, 1)))
        if span_residual(adj, basis) > tol.eq_tol:
            raise ValueError("span is not closed under adjoints")
    gens = None if generators is None else np.asarray(generators, dtype=complex)
    return OperatorAlgebra(basis, gens)


def product_closure_residual(alg, tol=DEFAULT_TOL, pairs=None, rng=None):
    """Residual of basis products against the span; all pairs unless sampled."""
    k = alg.dim
    if pairs is None:
        prods = np.einsum("aij,bjk->abik", alg.basis, alg.basis).reshape(k * k, alg.space_dim, alg.space_dim)
    else:
        idx = rng.integers(0, k, size=(pairs, 2))
        prods = np.stack([alg.basis[i] @ alg.basis[j] for i, j in idx])
    return span_residual(prods, alg.basis)


def generated_star_algebra(gens, tol=DEFAULT_TOL, max_rounds=64):
    """Smallest unital star-closed span containing the generators.

    Grows the span by right multiplication with generators and their adjoints
    until the dimension stabilizes; at finite dimension this is the same
    algebra as the one obtained from weak closure.
    """
    gens = np.asarray(gens, dtype=complex)
    N = gens.shape[1]
    multipliers = np.concatenate([gens, np.conj(np.transpose(gens, (0, 2, 1)))])
    basis = orthonormal_rows(np.concatenate([np.eye(N, dtype=complex)[None], multipliers]), tol)
    for _ in range(max_rounds):
        grown = np.einsum("aij,bjk->abik", basis, multipliers).reshape(-1, N, N)
        new_basis = orthonormal_rows(np.concatenate([basis, grown]), tol)
        if new_basis.shape[0] == basis.shape[0]:
            return OperatorAlgebra(new_basis, gens)
        basis = new_basis
    raise ArithmeticError("span growth failed to stabilize")


def _averaging_ready(mats, tol):
    """Unitaries with scalar square +-1 qualify for the averaging projection."""
    eye = np.eye(mats[0].shape[0])
    sign = None
    for u in mats:
        if maxabs(u @ u.conj().T - eye) > tol.eq_tol:
            return False
        sq = u @ u
        s = sq[0, 0].real
        if abs(abs(s) - 1.0) > tol.eq_tol or maxabs(sq - s * eye) > tol.eq_tol:
            return False
        if sign is None:
            sign = s
        elif abs(s - sign) > tol.eq_tol:
            return False
    return True


def _averaged_commutant_basis(mats, tol, rng, expected=None):
    N = mats[0].shape[0]
    probes = 8 if expected is None else min(N * N, expected + 8)
    while True:
        basis = averaged_intertwiners(mats, mats, probes, rng, tol)
        if basis.shape[0] < probes or probes >= N * N:
            return basis
        probes = min(2 * probes, N * N)


def _kernel_commutant_basis(constraints_mats, N, tol, grading_twist=None):
    """Generic route: iterative kernel of the (possibly graded) commutators."""
    def constraint(a, odd):
        def apply(cols):
            X = cols.T.reshape(-1, N, N)
            if odd:
                Xt = grading_twist @ X @ grading_twist
                vals = a @ X - Xt @ a
            else:
                vals = a @ X - X @ a
            return vals.reshape(-1, N * N).T
        return apply

    cs = [constraint(a, odd) for a, odd in constraints_mats]
    cols = joint_kernel(cs, N * N, tol)
    return np.transpose(cols).reshape(-1, N, N)


def commutant(alg, tol=DEFAULT_TOL, rng=None):
    """Commutant algebra {X : aX = Xa for all a}, star-closed and unital."""
    mats = list(alg.constraint_generators())
    N = alg.space_dim
    if rng is None:
        rng = np.random.default_rng(1)
    if alg.generators is not None and _averaging_ready(mats, tol):
        basis = _averaged_commutant_basis(mats, tol, rng, expected=N * N // alg.dim)
    else:
        basis = _kernel_commutant_basis([(a, False) for a in mats], N, tol)
    return algebra_from_span(basis, tol=tol)


def grading_parts(alg, grading, tol=DEFAULT_TOL):
    """Homogeneous spanning elements (matrix, is_odd); fails if not graded."""
    twisted = grading @ alg.basis @ grading
    if span_residual(twisted, alg.basis) > tol.eq_tol:
        raise NotGraded("algebra span is not invariant under the grading")
    parts = []
    for a, t in zip(alg.basis, twisted):
        even = 0.5 * (a + t)
        odd = 0.5 * (a - t)
        if maxabs(even) > tol.rank_tol:
            parts.append((even, False))
        if maxabs(odd) > tol.rank_tol:
            parts.append((odd, True))
    return parts


def super_commutant(alg, grading, tol=DEFAULT_TOL, rng=None):
    """Graded commutant: commutes with even elements, odd parts anticommute
    with odd elements.

    Fast path: odd involution-type unitary generators u are dressed to
    u @ grading, turning the graded condition into a plain commutant solve.
    """
    N = alg.space_dim
    if rng is None:
        rng = np.random.default_rng(2)
    gens = alg.generators
    if gens is not None:
        odd_ok = all(maxabs(grading @ u @ grading + u) <= tol.eq_tol for u in gens)
        dressed = [u @ grading for u in gens]
        if odd_ok and _averaging_ready(dressed, tol):
            basis = _averaged_commutant_basis(dressed, tol, rng, expected=N * N // alg.dim)
            return algebra_from_span(basis, tol=tol)
    parts = grading_parts(alg, grading, tol)
    basis = _kernel_commutant_basis([(a, odd) for a, odd in parts], N, tol, grading_twist=grading)
    return algebra_from_span(basis, tol=tol)


@dataclass(frozen=True)
class CyclicSeparating:
    cyclic: bool
    separating: bool

    def __bool__(self):
        return self.cyclic and self.separating


def cyclic_separating_check(alg, omega, tol=DEFAULT_TOL):
    """Cyclicity (a Omega spans) and separation (a -> a Omega injective)."""
    frame = alg.basis @ omega
    svals = np.linalg.svd(frame, compute_uv=False)
    rank = int(np.sum(svals > tol.rank_tol))
    return CyclicSeparating(cyclic=rank == alg.space_dim, separating=rank == alg.dim)


@dataclass
class StandardFormData:
    """Vacuum vector, Tomita operator, modular pair and positive-cone data."""

    omega: np.ndarray
    tomita: AntilinearOperator
    conjugation: AntilinearOperator
    delta: np.ndarray
    cone_frame: np.ndarray
    _cone_tensor: np.ndarray = field(repr=False, default=None)

    def reflect(self, U):
        """J U J for a linear operator U."""
        return self.conjugation.conjugate_matrix(U)

    def cone_defect(self, v):
        """Distance data of v from the self-dual positive cone.

        v lies in the cone iff <v, a J b J omega> assembles to a positive
        semidefinite Hermitian form on the algebra; the defect is the worst
        of the negative-eigenvalue overshoot and the non-Hermitian part.
        """
        v = np.asarray(v, dtype=complex)
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        M = np.tensordot(self._cone_tensor, np.conj(v) / nv, axes=(2, 0))
        herm = 0.5 * (M + M.conj().T)
        skew = maxabs(M - M.conj().T)
        lam_min = float(np.linalg.eigvalsh(herm)[0])
        return max(skew, -min(lam_min, 0.0))

    def in_cone(self, v, tol=DEFAULT_TOL):
        return self.cone_defect(v) <= tol.eq_tol


def tomita_data(alg, omega, tol=DEFAULT_TOL):
    """Standard-form data for (alg, omega): S: a omega -> a* omega, polar parts,
    and the positive-cone pairing tensor."""
    status = cyclic_separating_check(alg, omega, tol)
    if not status:
        raise NotCyclicSeparating(f"cyclic={status.cyclic} separating={status.separating}")
    frame = (alg.basis @ omega).T             # columns a_i omega
    star_frame = (np.conj(np.transpose(alg.basis, (0, 2, 1))) @ omega).T
    Ms = star_frame @ np.linalg.inv(np.conj(frame))
    S = AntilinearOperator(Ms)
    J, delta = antilinear_polar(S, tol)
    N = alg.space_dim
    checks = {
        "S omega": maxabs(S(omega) - omega),
        "J omega": maxabs(J(omega) - omega),
        "delta omega": maxabs(delta @ omega - omega),
    }
    worst = max(checks.values())
    if worst > tol.eq_tol:
        raise NotCyclicSeparating(f"modular data failed vacuum identities: {checks}")
    # cone pairing tensor T[i, j] = vector a_i J a_j J omega
    jbj_omega = np.stack([J.conjugate_matrix(b) @ omega for b in alg.basis])
    cone_tensor = np.einsum("iab,jb->ija", alg.basis, jbj_omega)
    cone_frame = np.stack([cone_tensor[i, i] for i in range(alg.dim)])
    return StandardFormData(np.asarray(omega, dtype=complex), S, J, delta, cone_frame, cone_tensor)


@dataclass
class InnerAutomorphism:
    """Automorphism of an algebra recorded by its action on the basis.

    Equality is action equality, so the phase of any implementing unitary is
    irrelevant.  Composition and inversion work on the coordinate matrix of
    the action; a representative unitary inside the algebra is attached
    lazily when some construction needs one.
    """

    algebra: OperatorAlgebra
    images: np.ndarray
    _representative: np.ndarray | None = field(default=None, repr=False)
    _coord: np.ndarray | None = field(default=None, repr=False)

    def coord_matrix(self):
        if self._coord is None:
            flat = self.algebra.basis.reshape(self.algebra.dim, -1)
            self._coord = self.images.reshape(self.algebra.dim, -1) @ flat.conj().T
        return self._coord

    def distance(self, other):
        return maxabs(self.images - other.images)

    def is_identity(self, tol=DEFAULT_TOL):
        return maxabs(self.images - self.algebra.basis) <= tol.eq_tol

    def apply(self, X):
        return np.tensordot(self.algebra.coordinates(X), self.images, axes=(0, 0))

    def _from_coord(self, C):
        images = np.tensordot(C, self.algebra.basis, axes=(1, 0))
        out = InnerAutomorphism(self.algebra, images)
        out._coord = C
        return out

    def compose(self, other):
        """self after other."""
        return self._from_coord(other.coord_matrix() @ self.coord_matrix())

    def inverse(self):
        return self._from_coord(np.linalg.inv(self.coord_matrix()))

    def representative(self, tol=DEFAULT_TOL):
        if self._representative is None:
            self._representative = inner_unitary(self.algebra, self.images, tol)
        return self._representative


def inner_automorphism_from_unitary(alg, u, tol=DEFAULT_TOL):
    """Conjugation by a unitary, recorded on the algebra basis."""
    images = u @ alg.basis @ u.conj().T
    if span_residual(images, alg.basis) > tol.eq_tol:
        raise NotInNormalizer("conjugation does not preserve the algebra")
    rep = u if span_residual(u[None], alg.basis) <= tol.eq_tol else None
    return InnerAutomorphism(alg, images, rep)


def automorphism_residual(alg, images, tol=DEFAULT_TOL, rng=None, product_samples=4):
    """How far basis images are from defining a star-automorphism of the span."""
    res = span_residual(images, alg.basis)
    adj_in = np.conj(np.transpose(alg.basis, (0, 2, 1)))
    adj_out = np.conj(np.transpose(images, (0, 2, 1)))
    coords = np.stack([alg.coordinates(a) for a in adj_in])
    res = max(res, maxabs(np.tensordot(coords, images, axes=(1, 0)) - adj_out))
    if rng is None:
        rng = np.random.default_rng(3)
    k = alg.dim
    for _ in range(product_samples):
        i, j = rng.integers(0, k, size=2)
        prod_im = np.tensordot(alg.coordinates(alg.basis[i] @ alg.basis[j]), images, axes=(0, 0))
        res = max(res, maxabs(images[i] @ images[j] - prod_im))
    return res


def inner_unitary(alg, images, tol=DEFAULT_TOL):
    """Unitary u in the algebra with u a u^* matching the given basis images.

    Solves x a = theta(a) x inside the span by a stacked kernel solve in
    algebra coordinates.  The cutoff separating the solution line from the
    rest is noise aware (the images may carry the conditioning error of the
    modular data), and the returned unitary is re-verified against the
    action, so a misclassified kernel cannot slip through.
    """
    if automorphism_residual(alg, images, tol) > tol.eq_tol:
        raise NotAutomorphism("images do not define a star-automorphism of the span")
    k, N = alg.dim, alg.space_dim
    if alg.generators is not None:
        constraints = [(g, np.tensordot(alg.coordinates(g), images, axes=(0, 0)))
                       for g in alg.generators]
    else:
        constraints = list(zip(alg.basis, images))
    gram = np.zeros((k, k), dtype=complex)
    for a, theta_a in constraints:
        block = (alg.basis @ a - theta_a @ alg.basis).reshape(k, N * N)
        gram += block.conj() @ block.T
    w, V = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    svals = np.sqrt(np.maximum(w, 0.0))
    cutoff = max(tol.rank_tol, 1e-6 * svals[-1])
    dim = int(np.sum(svals < cutoff))
    if dim == 0:
        raise NotInner("no implementing element inside the algebra")
    if dim > 1:
        raise NotInner(f"solution space has dimension {dim}; algebra is not a factor")
    x = alg.from_coordinates(V[:, 0])
    u = polar_unitary(x, tol)
    worst = max(maxabs(u @ a @ u.conj().T - theta_a) for a, theta_a in constraints)
    if worst > tol.eq_tol or span_residual(u[None], alg.basis) > tol.eq_tol:
        raise NotInner(f"candidate representative fails the action by {worst:.2e}")
    return u


def normalizer_membership(U, alg, tol=DEFAULT_TOL):
    """True iff conjugation by U maps the algebra span into itself."""
    return span_residual(U @ alg.basis @ U.conj().T, alg.basis) <= tol.eq_tol


def conjugation_action(U, alg, tol=DEFAULT_TOL):
    """The automorphism a -> U a U^* of the algebra (t-side structure map)."""
    images = U @ alg.basis @ U.conj().T
    if span_residual(images, alg.basis) > tol.eq_tol:
        raise NotInNormalizer("unitary does not normalize the algebra")
    return InnerAutomorphism(alg, images)


def reflected_action(U, alg, sfd, tol=DEFAULT_TOL):
    """The automorphism a -> (JUJ) a (JUJ)^* (s-side structure map)."""
    W = sfd.reflect(U)
    images = W @ alg.basis @ W.conj().T
    if span_residual(images, alg.basis) > tol.eq_tol:
        raise NotInNormalizer("reflected unitary does not normalize the algebra")
    return InnerAutomorphism(alg, images)


def canonical_implementation(sfd, alg, theta, tol=DEFAULT_TOL, cone_samples=4, rng=None):
    """The unitary u J u J implementing theta on the algebra.

    Phase independent in the representative u; verified to act as theta, to
    commute with J, and to preserve the positive cone on sampled elements.
    """
    u = theta.representative(tol)
    U = u @ sfd.reflect(u)
    images = U @ alg.basis @ U.conj().T
    act = maxabs(images - theta.images)
    jcomm = maxabs(U @ sfd.conjugation.linear - sfd.conjugation.linear @ np.conj(U))
    if max(act, jcomm) > tol.eq_tol:
        raise NotInner(f"canonical implementation failed action/J checks ({act:.2e}, {jcomm:.2e})")
    if rng is None:
        rng = np.random.default_rng(4)
    probes = list(sfd.cone_frame[:cone_samples])
    for _ in range(cone_samples):
        c = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        a = alg.from_coordinates(c)
        probes.append(a @ sfd.reflect(a) @ sfd.omega)
    worst = max(sfd.cone_defect(U @ v) for v in probes)
    if worst > tol.eq_tol:
        raise ConeViolation(f"cone moved by {worst:.2e}")
    return U
