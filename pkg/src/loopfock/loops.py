"""Discrete spin loops and paths, their orthogonal action, and lifted loops.

Spin(d) lives inside a fixed gamma-matrix representation; loops are arrays
of 2n spin elements (one per lattice vertex), based paths have n+1 entries
starting at the identity.  Pointwise conjugation on vectors gives the
orthogonal action on H, and the rotation implementers of the previous layer
lift loops to pairs (loop, unitary) forming the extension group.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .bogoliubov import Implementer, implement_pin, normalize_phase, schwinger_term
from .errors import EndpointMismatch
from .linalg import DEFAULT_TOL, maxabs
from .twogroup import ComputableGroup, CrossedModule

_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def gamma_matrices(d):
    """Hermitian anticommuting matrices with square one, dimension 2^ceil(d/2)."""
    pairs = (d + 1) // 2
    out = []
    for a in range(d):
        i = a // 2
        factors = [_PAULI_Z] * i + [_PAULI_X if a % 2 == 0 else _PAULI_Y]
        factors += [np.eye(2, dtype=complex)] * (pairs - i - 1)
        out.append(reduce(np.kron, factors))
    return np.stack(out)


def spin_exp(B, gammas):
    """Exponential of the bivector with coefficient matrix B (antisymmetric d x d).

    Normalized so that the covering map sends the result to expm(B).
    """
    d = B.shape[0]
    K = np.zeros_like(gammas[0])
    for a in range(d):
        for b in range(d):
            if B[a, b] != 0.0:
                K += 0.25 * B[a, b] * (gammas[a] @ gammas[b])
    w, V = np.linalg.eigh(1j * K)
    return (V * np.exp(-1j * w)) @ V.conj().T


def covering(x, gammas):
    """The rotation lambda(x) with x gamma_a x^* = sum_b lambda_{ba} gamma_b."""
    d, gdim = gammas.shape[0], gammas.shape[1]
    conj = x @ gammas @ np.asarray(x).conj().T
    lam = np.real(np.einsum("bij,aji->ba", gammas, conj)) / gdim
    return lam


def spin_sample(d, rng, gammas=None, scale=0.7):
    if gammas is None:
        gammas = gamma_matrices(d)
    B = rng.standard_normal((d, d)) * scale
    return spin_exp(B - B.T, gammas)


class SpinGroup(ComputableGroup):
    """Even unit elements of the gamma representation, double covering SO(d)."""

    def __init__(self, d, scale=0.7):
        self.d = d
        self.gammas = gamma_matrices(d)
        self.scale = scale
        self.name = f"Spin({d})"

    @property
    def rep_dim(self):
        return self.gammas.shape[1]

    def identity(self):
        return np.eye(self.rep_dim, dtype=complex)

    def mul(self, a, b):
        return a @ b

    def inv(self, a):
        return np.asarray(a).conj().T

    def dist(self, a, b):
        return maxabs(np.asarray(a) - np.asarray(b))

    def sample(self, rng):
        return spin_sample(self.d, rng, self.gammas, self.scale)

    def covering(self, x):
        return covering(x, self.gammas)


class PathGroup(ComputableGroup):
    """Based discrete paths: arrays (n+1, r, r) with p[0] = 1, pointwise product."""

    def __init__(self, n, spin):
        self.n, self.spin = n, spin
        self.name = f"paths({spin.name}, n={n})"

    def identity(self):
        return np.stack([self.spin.identity()] * (self.n + 1))

    def mul(self, a, b):
        return a @ b

    def inv(self, a):
        return np.conj(np.transpose(a, (0, 2, 1)))

    def dist(self, a, b):
        return maxabs(np.asarray(a) - np.asarray(b))

    def sample(self, rng, end_identity=False):
        vals = [self.spin.identity()]
        for _ in range(self.n - 1):
            vals.append(self.spin.sample(rng))
        vals.append(self.spin.identity() if end_identity else self.spin.sample(rng))
        return np.stack(vals)

    def endpoint(self, p):
        return p[self.n]


def loop_identity(n, spin):
    return np.stack([spin.identity()] * (2 * n))


def is_half_supported(loop, tol=DEFAULT_TOL):
    """Trivial at vertex 0 and on the closed second half n..2n-1."""
    n2 = loop.shape[0]
    n = n2 // 2
    eye = np.eye(loop.shape[1])
    if maxabs(loop[0] - eye) > tol.eq_tol:
        return False
    return all(maxabs(loop[j] - eye) <= tol.eq_tol for j in range(n, n2))


def restrict_loop(loop, tol=DEFAULT_TOL):
    """Path of the first-half values of a half-supported loop."""
    if not is_half_supported(loop, tol):
        raise ValueError("loop is not supported in the first half circle")
    n = loop.shape[0] // 2
    return np.array(loop[: n + 1])


def concat_paths(p, q, tol=DEFAULT_TOL):
    """Loop traversing p then the reverse of q; endpoints must match."""
    n = p.shape[0] - 1
    if maxabs(p[n] - q[n]) > tol.eq_tol:
        raise EndpointMismatch("paths end at different group elements")
    values = [p[j] for j in range(n + 1)]
    values += [q[2 * n - j] for j in range(n + 1, 2 * n)]
    return np.stack(values)


def double_path(p, tol=DEFAULT_TOL):
    return concat_paths(p, p, tol)


def edge_double_path(p):
    """Loop reflecting the path about the half-integer axis.

    Values (p_0 .. p_{n-1}, p_{n-1} .. p_0); the endpoint p_n never appears.
    This is the doubling matched to the edge reflection, and the loop whose
    rotation the modular-canonical unit of a path automorphism implements.
    """
    n = p.shape[0] - 1
    vals = [p[j] for j in range(n)] + [p[2 * n - 1 - j] for j in range(n, 2 * n)]
    return np.stack(vals)


def omega_matrix(model, spin, loop):
    """Block-diagonal orthogonal action: block lambda(loop_j) at vertex j."""
    D, d = model.dim_h, model.d
    out = np.zeros((D, D))
    for j in range(2 * model.n):
        out[j * d:(j + 1) * d, j * d:(j + 1) * d] = spin.covering(loop[j])
    return out


@dataclass(frozen=True)
class ExtLoop:
    """A loop with an implementer of its orthogonal action (extension element)."""

    loop: np.ndarray
    implementer: Implementer

    @property
    def unitary(self):
        return self.implementer.unitary


def lift(model, spin, loop, tol=DEFAULT_TOL):
    """Vacuum-normalized rotation implementer paired with the loop; cached."""
    key = np.asarray(loop).tobytes()
    cached = model.lift_cache.get(key)
    if cached is not None:
        return cached
    g = omega_matrix(model, spin, loop)
    imp = normalize_phase(implement_pin(model, g, tol), "vacuum", tol)
    out = ExtLoop(np.array(loop), imp)
    model.lift_cache[key] = out
    return out


class ExtLoopGroup(ComputableGroup):
    """Lifted half-supported loops with their U(1) fiber.

    Elements multiply componentwise; equality sees both the loop and the
    unitary, so central phases are distinct elements.
    """

    def __init__(self, model, spin, tol=DEFAULT_TOL, phase_fiber=True):
        self.model, self.spin, self.tol = model, spin, tol
        self.phase_fiber = phase_fiber
        self.name = "lifted half loops"

    def identity(self):
        n = self.model.n
        loop = loop_identity(n, self.spin)
        imp = Implementer(np.eye(self.model.fock_dim, dtype=complex),
                          np.eye(self.model.dim_h), "even", "vacuum")
        return ExtLoop(loop, imp)

    def mul(self, a, b):
        return ExtLoop(a.loop @ b.loop,
                       Implementer(a.unitary @ b.unitary,
                                   a.implementer.implemented @ b.implementer.implemented,
                                   "even" if a.implementer.parity == b.implementer.parity else "odd",
                                   "raw"))

    def inv(self, a):
        return ExtLoop(np.conj(np.transpose(a.loop, (0, 2, 1))),
                       Implementer(a.unitary.conj().T, a.implementer.implemented.T,
                                   a.implementer.parity, "raw"))

    def dist(self, a, b):
        return max(maxabs(a.loop - b.loop), maxabs(a.unitary - b.unitary))

    def sample(self, rng):
        n = self.model.n
        loop = [self.spin.identity() for _ in range(2 * n)]
        for j in range(1, n):
            loop[j] = self.spin.sample(rng)
        ext = lift(self.model, self.spin, np.stack(loop), self.tol)
        if self.phase_fiber:
            z = np.exp(2j * np.pi * rng.random())
            ext = ExtLoop(ext.loop, Implementer(z * ext.unitary, ext.implementer.implemented,
                                                ext.implementer.parity, "raw"))
        return ext

    def central(self, z):
        e = self.identity()
        return ExtLoop(e.loop, Implementer(z * e.unitary, e.implementer.implemented, "even", "raw"))


def string_crossed_module(model, spin, tol=DEFAULT_TOL):
    """Lifted half loops over based paths, acting through doubled-path lifts.

    The action conjugates the loop pointwise by the doubled path and the
    unitary by any lift of the doubled loop; central phases make the choice
    of lift irrelevant.
    """
    fiber = ExtLoopGroup(model, spin, tol)
    base = PathGroup(model.n, spin)

    def t(ext):
        return restrict_loop(ext.loop, tol)

    def act(p, ext):
        dbl = double_path(p, tol)
        V = lift(model, spin, dbl, tol)
        loop = dbl @ ext.loop @ np.conj(np.transpose(dbl, (0, 2, 1)))
        g = V.implementer.implemented
        return ExtLoop(loop, Implementer(V.unitary @ ext.unitary @ V.unitary.conj().T,
                                         g @ ext.implementer.implemented @ g.T,
                                         ext.implementer.parity, "raw"))

    return CrossedModule(base=base, fiber=fiber, t=t, act=act, name="string model")


def disjoint_support_pair(model, spin, rng):
    """Loops supported strictly inside opposite half circles."""
    n = model.n
    first = [spin.identity() for _ in range(2 * n)]
    second = [spin.identity() for _ in range(2 * n)]
    for j in range(1, n):
        first[j] = spin.sample(rng)
    for j in range(n + 1, 2 * n):
        second[j] = spin.sample(rng)
    return np.stack(first), np.stack(second)


def vertex_reflection(model):
    """Reflection fixing vertices 0 and n, with the antiperiodic sign at 0.

    tau e_{j,a} = (+-) e_{(2n-j) mod 2n, a}; the sign at the fixed vertex 0
    makes tau map the half-integer Lagrangian into its conjugate exactly.
    """
    n, d = model.n, model.d
    T = np.zeros((model.dim_h, model.dim_h))
    for j in range(2 * n):
        sign = -1.0 if j == 0 else 1.0
        jj = (2 * n - j) % (2 * n)
        for a in range(d):
            T[jj * d + a, j * d + a] = sign
    return T


def edge_reflection(model):
    """Reflection about the half-circle boundary edges: j -> 2n-1-j, no signs.

    This fixed-point-free reflection swaps the two half circles exactly and
    is the one induced by the modular conjugation of the first-half algebra.
    """
    n, d = model.n, model.d
    T = np.zeros((model.dim_h, model.dim_h))
    for j in range(2 * n):
        jj = 2 * n - 1 - j
        for a in range(d):
            T[jj * d + a, j * d + a] = 1.0
    return T


def reflect_orthogonal(tau, g):
    """sigma(g) = tau g tau for an involutive reflection tau."""
    return tau @ g @ tau


def reversed_loop(loop, shift=0):
    """Pointwise reversal j -> (2n - shift - j) mod 2n of the value array."""
    n2 = loop.shape[0]
    idx = [(n2 - shift - j) % n2 for j in range(n2)]
    return np.array(loop[idx])


def skew_from_loop_algebra(model, xi):
    """Block-diagonal antisymmetric generator from per-vertex so(d) values."""
    D, d = model.dim_h, model.d
    X = np.zeros((D, D))
    for j in range(2 * model.n):
        X[j * d:(j + 1) * d, j * d:(j + 1) * d] = xi[j]
    return X


def discrete_loop_cocycle(xi, eta):
    """(2 pi i)^{-1} sum_j <xi_j, eta_{j+1} - eta_j> with <A, B> = tr(A^T B)/2.

    The forward difference is antisymmetric in (xi, eta) only up to a
    second-order lattice term; see the centered variant for the exact one.
    """
    n2 = len(xi)
    total = 0.0
    for j in range(n2):
        diff = eta[(j + 1) % n2] - eta[j]
        total += 0.5 * np.trace(xi[j].T @ diff)
    return total / (2j * np.pi)


def discrete_loop_cocycle_centered(xi, eta):
    """Centered-difference variant, exactly antisymmetric under xi <-> eta."""
    n2 = len(xi)
    total = 0.0
    for j in range(n2):
        diff = 0.5 * (eta[(j + 1) % n2] - eta[(j - 1) % n2])
        total += 0.5 * np.trace(xi[j].T @ diff)
    return total / (2j * np.pi)


def loop_cocycle_compare(model, xi, eta, tol=DEFAULT_TOL):
    """Discrete curvature pairing versus the Fock commutator anomaly.

    Exploratory: returns the scalars and their differences without a
    pass/fail threshold, since the lattice spacing error carries no stated
    bound.
    """
    disc = discrete_loop_cocycle(xi, eta)
    centered = discrete_loop_cocycle_centered(xi, eta)
    fock = schwinger_term(model, skew_from_loop_algebra(model, xi),
                          skew_from_loop_algebra(model, eta), tol)
    return {"discrete": complex(disc), "centered": complex(centered), "fock": complex(fock),
            "difference": complex(fock - disc), "difference centered": complex(fock - centered)}


def random_loop_algebra(model, rng, scale=0.7):
    d = model.d
    out = []
    for _ in range(2 * model.n):
        B = rng.standard_normal((d, d)) * scale
        out.append(B - B.T)
    return out


def bivector_from_coordinates(coords, d):
    """Antisymmetric d x d matrix from coordinates ordered (0,1), (0,2), ..."""
    coords = list(coords)
    if len(coords) != d * (d - 1) // 2:
        raise ValueError(f"expected {d * (d - 1) // 2} bivector coordinates, got {len(coords)}")
    B = np.zeros((d, d))
    k = 0
    for a in range(d):
        for b in range(a + 1, d):
            B[a, b] = coords[k]
            B[b, a] = -coords[k]
            k += 1
    return B


def loop_from_bivectors(spin, coords_per_point):
    """Loop literal: one coordinate list per lattice vertex, exponentiated.

    Each entry holds the d*(d-1)/2 bivector coordinates in lexicographic
    plane order; the loop value at that vertex is the spin exponential.
    """
    d = spin.d
    values = [spin_exp(bivector_from_coordinates(c, d), spin.gammas)
              for c in coords_per_point]
    return np.stack(values)
