"""Orthogonal maps on the one-particle space and their Fock implementers.

Two independent routes construct an implementer U with
U pi(v) U^* = pi(g v): a convention-free kernel solve (group-averaged
projection onto the intertwiner space) and a fast constructive product of
plane-rotation exponentials.  Quadratic generators and their scalar
commutator anomaly live here as well.
"""

from dataclasses import dataclass, replace

import numpy as np

from .clifford import pi_vector
from .errors import (ContractViolation, NonScalarDefect, NonUniqueImplementer,
                     NotOrthogonal, NotSpecialOrthogonal)
from .linalg import (DEFAULT_TOL, averaged_intertwiners, joint_kernel, maxabs,
                     polar_unitary, scalar_defect)


def check_orthogonal(g, tol=DEFAULT_TOL):
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NotOrthogonal(f"bad shape {g.shape}")
    if maxabs(g.T @ g - np.eye(g.shape[0])) > tol.eq_tol:
        raise NotOrthogonal("g^T g deviates from the identity")
    return g


def is_special(g, tol=DEFAULT_TOL):
    return abs(np.linalg.det(g) - 1.0) <= max(tol.eq_tol, 1e-8)


@dataclass(frozen=True)
class Implementer:
    """A Fock unitary together with the orthogonal map it implements."""

    unitary: np.ndarray
    implemented: np.ndarray
    parity: str  # 'even' | 'odd'
    normalization: str  # 'raw' | 'vacuum' | 'scan'


def _classify_parity(model, U, tol):
    G = model.grading
    comm = maxabs(U @ G - G @ U)
    anti = maxabs(U @ G + G @ U)
    if comm <= tol.eq_tol:
        return "even"
    if anti <= tol.eq_tol:
        return "odd"
    raise NonUniqueImplementer(f"implementer is not grading homogeneous ({comm:.2e}, {anti:.2e})")


def implementation_residual(model, U, g):
    """max_i ||U pi_i U^* - pi(g e_i)|| over the real basis."""
    conj = U @ model.generators @ U.conj().T
    targets = np.stack([pi_vector(model, np.asarray(g, dtype=complex)[:, i])
                        for i in range(model.dim_h)])
    return maxabs(conj - targets)


def implement_oracle(model, g, tol=DEFAULT_TOL, rng=None, probes=6):
    """Implementer from the kernel of the intertwining constraints.

    The joint kernel {U : pi(g e_i) U = U pi_i} is produced by the exact
    averaging projection of linalg.averaged_intertwiners, whose image rank is
    asserted to be one; the polar-unitary representative is returned raw.
    """
    g = check_orthogonal(g, tol)
    if rng is None:
        rng = np.random.default_rng(0)
    lefts = [pi_vector(model, g[:, i].astype(complex)) for i in range(model.dim_h)]
    rights = list(model.generators)
    basis = averaged_intertwiners(lefts, rights, probes, rng, tol)
    if basis.shape[0] != 1:
        raise NonUniqueImplementer(f"intertwiner space has dimension {basis.shape[0]}")
    U = polar_unitary(basis[0], tol)
    return Implementer(U, g, _classify_parity(model, U, tol), "raw")


def implement_oracle_kernel(model, g, tol=DEFAULT_TOL):
    """Slow cross-check route: iterative restriction on the matrix space.

    Intended for small Fock dimensions; agrees with implement_oracle up to a
    unit scalar.
    """
    g = check_orthogonal(g, tol)
    N = model.fock_dim

    def constraint(i):
        left = pi_vector(model, g[:, i].astype(complex))
        right = model.generators[i]

        def apply(cols):
            X = cols.T.reshape(-1, N, N)
            vals = left @ X - X @ right
            return vals.reshape(-1, N * N).T

        return apply

    basis = joint_kernel([constraint(i) for i in range(model.dim_h)], N * N, tol)
    if basis.shape[1] != 1:
        raise NonUniqueImplementer(f"kernel dimension {basis.shape[1]}")
    U = polar_unitary(basis[:, 0].reshape(N, N), tol)
    return Implementer(U, g, _classify_parity(model, U, tol), "raw")


def givens_factorization(g, tol=DEFAULT_TOL):
    """Plane rotations and the residual +-1 diagonal with g = (prod G_k) diag."""
    D = g.shape[0]
    work = np.array(g, dtype=float)
    rotations = []
    for col in range(D):
        for row in range(D - 1, col, -1):
            a, b = work[row - 1, col], work[row, col]
            if abs(b) < 1e-15:
                continue
            r = np.hypot(a, b)
            c, s = a / r, b / r
            block = np.array([[c, s], [-s, c]])
            work[[row - 1, row], :] = block @ work[[row - 1, row], :]
            rotations.append((row - 1, row, float(np.arctan2(s, c))))
    diag = np.diag(work).copy()
    if maxabs(work - np.diag(diag)) > tol.eq_tol:
        raise NotOrthogonal("Givens sweep did not diagonalize; input not orthogonal")
    return rotations, diag


def implement_pin(model, g, tol=DEFAULT_TOL):
    """Constructive implementer for det +1 maps via plane rotations.

    A rotation by theta in the plane of orthonormal real u, w is implemented
    by cos(theta/2) + sin(theta/2) pi(u) pi(w); the Givens factors of g and
    the paired -1 diagonal entries (pi rotations) multiply up to U.
    """
    g = check_orthogonal(g, tol)
    if not is_special(g, tol):
        raise NotSpecialOrthogonal("det(g) = -1 is outside the rotation fast path")
    rotations, diag = givens_factorization(g, tol)
    N = model.fock_dim
    U = np.eye(N, dtype=complex)
    for i, j, theta in rotations:
        U = U @ (np.cos(theta / 2) * np.eye(N) + np.sin(theta / 2) * (model.generators[i] @ model.generators[j]))
    negatives = [i for i in range(model.dim_h) if diag[i] < 0]
    if len(negatives) % 2 == 1:
        raise NotSpecialOrthogonal("odd reflection count")
    for k in range(0, len(negatives), 2):
        i, j = negatives[k], negatives[k + 1]
        U = U @ (model.generators[i] @ model.generators[j])
    return Implementer(U, g, "even", "raw")


def normalize_phase(imp, mode="vacuum", tol=DEFAULT_TOL):
    """Fix the U(1) ambiguity of an implementer; idempotent.

    vacuum mode makes the vacuum expectation real positive, falling back to
    scan (first row-major entry of significant magnitude) when the vacuum
    overlap degenerates.
    """
    if mode not in ("vacuum", "scan"):
        raise ValueError(f"unknown mode {mode!r}")
    U = imp.unitary
    used = mode
    pivot = U[0, 0] if mode == "vacuum" else None
    if mode == "vacuum" and abs(pivot) < tol.rank_tol:
        used = "scan"
        pivot = None
    if pivot is None:
        flat = U.ravel()
        k = int(np.argmax(np.abs(flat) > tol.eq_tol))
        pivot = flat[k]
    phase = np.conj(pivot) / abs(pivot)
    return replace(imp, unitary=U * phase, normalization=used)


def normalized_unitary(model, g, tol=DEFAULT_TOL):
    """Vacuum-normalized rotation implementer (the standard lift)."""
    return normalize_phase(implement_pin(model, g, tol), "vacuum", tol).unitary


def projective_distance(U, V):
    """min over unit scalars of ||U - z V||, sup norm."""
    z = np.trace(V.conj().T @ U)
    if abs(z) < 1e-300:
        return maxabs(U)
    z = z / abs(z)
    return maxabs(U - z * V)


def extension_cocycle(model, g, h, tol=DEFAULT_TOL):
    """Unit scalar U_g U_h U_{gh}^{-1} of vacuum-normalized implementers."""
    Ug = normalized_unitary(model, g, tol)
    Uh = normalized_unitary(model, h, tol)
    Ugh = normalized_unitary(model, np.asarray(g) @ np.asarray(h), tol)
    defect, lam = scalar_defect(Ug @ Uh @ Ugh.conj().T)
    if defect > tol.eq_tol:
        raise NonScalarDefect(f"cocycle defect {defect:.2e} is not scalar")
    if abs(abs(lam) - 1.0) > tol.eq_tol:
        raise NonScalarDefect(f"cocycle modulus {abs(lam):.2e} is not one")
    return lam / abs(lam)


def check_skew(X, tol=DEFAULT_TOL):
    X = np.asarray(X, dtype=float)
    if maxabs(X + X.T) > tol.eq_tol:
        raise ValueError("generator is not antisymmetric")
    return X


def derived_implementer(model, X, tol=DEFAULT_TOL):
    """Quadratic generator dG(X) with [dG(X), pi(v)] = pi(X v), vacuum-centred.

    dG(X) = -1/4 sum_j pi_j pi(X e_j) minus its vacuum expectation.
    """
    X = check_skew(X, tol)
    N = model.fock_dim
    out = np.zeros((N, N), dtype=complex)
    for j in range(model.dim_h):
        row = X[j, :].astype(complex)
        if not np.any(row):
            continue
        out += model.generators[j] @ pi_vector(model, row)
    out *= -0.25
    out -= out[0, 0] * np.eye(N)
    worst = 0.0
    for i in range(model.dim_h):
        target = pi_vector(model, X[:, i].astype(complex))
        worst = max(worst, maxabs(out @ model.generators[i] - model.generators[i] @ out - target))
    if worst > tol.eq_tol:
        raise ContractViolation(f"commutator contract violated by {worst:.2e}")
    return out


def schwinger_term(model, X, Y, tol=DEFAULT_TOL):
    """Scalar s(X, Y) with [dG(X), dG(Y)] - dG([X, Y]) = s(X, Y) 1."""
    X, Y = check_skew(X, tol), check_skew(Y, tol)
    dX = derived_implementer(model, X, tol)
    dY = derived_implementer(model, Y, tol)
    dXY = derived_implementer(model, X @ Y - Y @ X, tol)
    defect, lam = scalar_defect(dX @ dY - dY @ dX - dXY)
    if defect > tol.eq_tol:
        raise NonScalarDefect(f"commutator anomaly not scalar: {defect:.2e}")
    return lam


def random_special_orthogonal(dim, rng):
    """exp of a random antisymmetric matrix."""
    B = rng.standard_normal((dim, dim))
    B = B - B.T
    w, V = np.linalg.eigh(1j * B)
    return np.real((V * np.exp(-1j * w)) @ V.conj().T)


def random_skew(dim, rng, scale=1.0):
    B = rng.standard_normal((dim, dim)) * scale
    return B - B.T
