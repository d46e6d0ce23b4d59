"""Dense complex linear algebra: kernels, polar factors, antilinear operators.

Matrices are plain complex ndarrays.  Bases of subspaces come in two shapes:
column bases (dim, k) for vector problems, and row stacks (k, n, n) for
spans of operators, which get flattened before rank computations.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotInvolutive, SingularInput


@dataclass(frozen=True)
class TolerancePolicy:
    """Comparison thresholds.

    eq_tol bounds operator-norm residuals in equality checks, rank_tol is the
    absolute singular-value cutoff deciding numerical rank.  Defaults leave
    double-precision headroom for products of order ten matrices at Fock
    dimensions up to 256.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-11

    def __post_init__(self):
        if self.eq_tol < 0 or self.rank_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.rank_tol > self.eq_tol:
            raise ValueError("rank_tol must not exceed eq_tol")


DEFAULT_TOL = TolerancePolicy()


def opnorm(M):
    """Spectral norm."""
    return float(np.linalg.norm(M, 2))


def maxabs(M):
    return float(np.max(np.abs(M))) if np.size(M) else 0.0


def null_space(M, tol=DEFAULT_TOL):
    """Orthonormal basis of ker(M), as columns.

    Singular values below tol.rank_tol count as zero; the returned block Q
    satisfies Q*Q = 1 and ``M @ Q`` small relative to ``opnorm(M)``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {M.shape}")
    # the full right factor is only needed for wide inputs; for tall ones the
    # economy decomposition already carries every kernel direction
    _, s, vh = np.linalg.svd(M, full_matrices=M.shape[0] < M.shape[1])
    rank = int(np.sum(s > tol.rank_tol))
    return vh[rank:].conj().T


def joint_kernel(constraints, dim, tol=DEFAULT_TOL):
    """Orthonormal column basis of the intersection of constraint kernels.

    Each constraint is a matrix acting on C^dim or a callable mapping a
    column basis (dim, k) to constraint values (out, k).  Constraints are
    imposed one at a time, each restricted to the kernel of the previous
    ones, so the working dimension only shrinks.
    """
    basis = np.eye(dim, dtype=complex)
    for c in constraints:
        if basis.shape[1] == 0:
            break
        vals = c(basis) if callable(c) else np.asarray(c, dtype=complex) @ basis
        basis = basis @ null_space(vals, tol)
    return basis


def stacked_kernel(constraints, dim, tol=DEFAULT_TOL):
    """Single-shot cross-check for joint_kernel: null space of all constraints stacked."""
    basis = np.eye(dim, dtype=complex)
    rows = [c(basis) if callable(c) else np.asarray(c, dtype=complex) for c in constraints]
    if not rows:
        return basis
    return null_space(np.vstack(rows), tol)


def averaged_intertwiners(lefts, rights, num_probes, rng, tol=DEFAULT_TOL):
    """Orthonormal stack spanning {X : L_k X = X R_k for all k}.

    Requires every L_k and R_k unitary with L_k^2 = R_k^2 = s*1 for a common
    scalar s in {+1, -1}, and the L_k (resp. R_k) pairwise commuting up to
    sign.  Then the maps X -> (X + L_k X R_k*)/2 are orthogonal projections
    whose ordered composition is the projection onto the joint intertwiner
    space (an average over the finite group of signed ordered products), so
    applying it to generic probes spans that space with probability one.

    Each returned element is re-verified against the constraints; residuals
    above tol.eq_tol raise ArithmeticError.
    """
    lefts = [np.asarray(L, dtype=complex) for L in lefts]
    rights = [np.asarray(R, dtype=complex) for R in rights]
    if len(lefts) != len(rights):
        raise DimensionMismatch("constraint sides differ in length")
    n = lefts[0].shape[0] if lefts else None
    if n is None:
        raise ValueError("need at least one constraint pair")
    eye = np.eye(n)
    for L, R in zip(lefts, rights):
        sq = L @ L
        sign = sq[0, 0].real
        if abs(abs(sign) - 1.0) > tol.eq_tol or maxabs(sq - sign * eye) > tol.eq_tol:
            raise ValueError("left generator square is not a +-1 scalar")
        sq = R @ R
        if maxabs(sq - sign * eye) > tol.eq_tol:
            raise ValueError("right generator square does not match the left one")

    Z = rng.standard_normal((num_probes, n, n)) + 1j * rng.standard_normal((num_probes, n, n))
    for L, R in zip(lefts, rights):
        Z = 0.5 * (Z + L @ Z @ R.conj().T)
    flat = Z.reshape(num_probes, n * n)
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    scale = s[0] if len(s) and s[0] > 0 else 1.0
    dim = int(np.sum(s > max(tol.rank_tol, 1e-7 * scale)))
    basis = vh[:dim].reshape(dim, n, n)
    for X in basis:
        worst = max(maxabs(L @ X - X @ R) for L, R in zip(lefts, rights))
        if worst > tol.eq_tol:
            raise ArithmeticError(f"averaged intertwiner violates constraints by {worst:.2e}")
    return basis


def polar_unitary(M, tol=DEFAULT_TOL):
    """Unitary factor U of M = U P with P positive definite."""
    M = np.asarray(M, dtype=complex)
    u, s, vh = np.linalg.svd(M)
    if s[-1] < tol.rank_tol:
        raise SingularInput(f"smallest singular value {s[-1]:.2e} below rank cutoff")
    return u @ vh


@dataclass(frozen=True)
class AntilinearOperator:
    """Antilinear map v -> linear @ conj(v) in a fixed basis."""

    linear: np.ndarray

    def __call__(self, v):
        return self.linear @ np.conj(v)

    def compose(self, other):
        """Composition with another antilinear operator; the result is linear."""
        return self.linear @ np.conj(other.linear)

    def compose_linear(self, M):
        """self after the linear map M, as an antilinear operator."""
        return AntilinearOperator(self.linear @ np.conj(M))

    def adjoint(self):
        # <x, S y> = <y, S* x> for antilinear S forces the transpose, not the
        # conjugate transpose.
        return AntilinearOperator(self.linear.T)

    def conjugate_matrix(self, M):
        """S M S^{-1} for linear M (S must be involutive for this formula)."""
        return self.linear @ np.conj(M) @ np.conj(self.linear)

    @staticmethod
    def conjugation(dim):
        return AntilinearOperator(np.eye(dim, dtype=complex))


def antilinear_polar(S, tol=DEFAULT_TOL, require_involutive=True):
    """Split an antilinear S as J Delta^{1/2} with J antiunitary, Delta > 0.

    Delta = S*S always; J = S Delta^{-1/2} is antiunitary for any invertible
    S.  The extra identities J J = 1 and J Delta J = Delta^{-1} need S S = 1,
    which is checked unless require_involutive is disabled (handy for
    decomposing non-involutive antilinear maps).
    """
    M = np.asarray(S.linear, dtype=complex)
    n = M.shape[0]
    svals = np.linalg.svd(M, compute_uv=False)
    if svals[-1] < tol.rank_tol:
        raise SingularInput("antilinear operator is numerically singular")
    if require_involutive and maxabs(M @ np.conj(M) - np.eye(n)) > tol.eq_tol:
        raise NotInvolutive("S composed with itself is not the identity")
    delta = M.T @ np.conj(M)
    delta = 0.5 * (delta + delta.conj().T)
    w, V = np.linalg.eigh(delta)
    if w[0] <= 0:
        raise SingularInput("modulus operator not positive definite")
    inv_half = (V * (w ** -0.5)) @ V.conj().T
    J = AntilinearOperator(M @ np.conj(inv_half))
    if require_involutive:
        jj = maxabs(J.compose(J) - np.eye(n))
        inv = (V * (1.0 / w)) @ V.conj().T
        # relative residual: the inverse modulus can be large when S is badly
        # conditioned, and only the relative deviation is meaningful then
        jdj = maxabs(J.conjugate_matrix(delta) - inv) / max(1.0, maxabs(inv))
        if max(jj, jdj) > tol.eq_tol:
            raise NotInvolutive(f"polar factors violate involution identities ({jj:.2e}, {jdj:.2e})")
    return J, delta


def orthonormal_rows(stack, tol=DEFAULT_TOL):
    """Orthonormalize a stack of vectors/matrices along its first axis."""
    stack = np.asarray(stack, dtype=complex)
    if stack.shape[0] == 0:
        return stack
    flat = stack.reshape(stack.shape[0], -1)
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    scale = s[0] if len(s) and s[0] > 0 else 1.0
    dim = int(np.sum(s > max(tol.rank_tol, 1e-7 * scale)))
    return vh[:dim].reshape((dim,) + stack.shape[1:])


def span_residual(stack, ortho, relative=True):
    """Sup-norm residual of stack elements against an orthonormal row span."""
    stack = np.atleast_2d(np.asarray(stack, dtype=complex))
    if stack.shape[0] == 0:
        return 0.0
    flat = stack.reshape(stack.shape[0], -1)
    if ortho.shape[0] == 0:
        res = maxabs(flat)
    else:
        B = np.asarray(ortho, dtype=complex).reshape(ortho.shape[0], -1)
        rec = (flat @ B.conj().T) @ B
        res = maxabs(flat - rec)
    if relative:
        res /= max(1.0, maxabs(flat))
    return res


def subspace_equal(B1, B2, tol=DEFAULT_TOL):
    """True iff two column bases span the same subspace within eq_tol."""
    Q1 = orthonormal_rows(np.asarray(B1, dtype=complex).T, tol)
    Q2 = orthonormal_rows(np.asarray(B2, dtype=complex).T, tol)
    if Q1.shape[0] != Q2.shape[0]:
        return False
    return max(span_residual(Q1, Q2), span_residual(Q2, Q1)) <= tol.eq_tol


def scalar_part(M):
    """Best scalar approximation tr(M)/n of a square matrix."""
    n = M.shape[0]
    return complex(np.trace(M) / n)


def scalar_defect(M):
    """Distance of M from the scalar line C*1 (sup norm), and the scalar."""
    lam = scalar_part(M)
    return maxabs(M - lam * np.eye(M.shape[0])), lam


def format_complex(z):
    """Render a complex scalar as 'a+bi' with full double precision."""
    return f"{z.real:.17g}{z.imag:+.17g}i"


def dump_matrix(M, fh, name=None):
    """Write a matrix in the textual dump format: one tab-separated row per line."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if name is not None:
        fh.write(f"# {name} {M.shape[0]} {M.shape[1]}\n")
    for row in M:
        fh.write("\t".join(format_complex(z) for z in row) + "\n")
