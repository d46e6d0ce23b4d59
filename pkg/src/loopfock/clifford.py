"""Discrete circle model: lattice, Lagrangian subspace, Fock representation.

The circle is sampled at 2n vertices j = 0..2n-1 (angles pi*j/n) carrying d
internal dimensions, so the one-particle space H is R^(2nd) with basis
e_{j,a} at flat index j*d + a.  A Lagrangian of nd modes fixes the Fock
space of dimension 2^(nd); the generators pi(e_{j,a}) obey

    pi(v) pi(w) + pi(w) pi(v) = -2 <conj(v), w> * 1
    pi(v)^* = -pi(conj(v))

with pi(f) = sqrt(2) a^dag(f) on Lagrangian vectors f.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .linalg import DEFAULT_TOL, maxabs


@dataclass(frozen=True)
class LatticeModel:
    """Circle lattice parameters: n half-points, d internal dimensions."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive")

    @property
    def points(self):
        return 2 * self.n

    @property
    def dim_h(self):
        return 2 * self.n * self.d

    @property
    def modes(self):
        return self.n * self.d

    @property
    def fock_dim(self):
        return 2 ** self.modes

    def flat_index(self, point, axis):
        return point * self.d + axis


def default_lagrangian(lattice):
    """Half-integer Fourier Lagrangian, columns l_{k,a} for k < n, a < d.

    l_{k,a} = (2n)^(-1/2) sum_j zeta^((k+1/2) j) e_{j,a} with zeta = exp(i pi/n).
    Antiperiodic mode numbers keep the span disjoint from its conjugate.
    """
    n, d = lattice.n, lattice.d
    j = np.arange(2 * n)
    L = np.zeros((lattice.dim_h, lattice.modes), dtype=complex)
    for k in range(n):
        col = np.exp(1j * np.pi * (k + 0.5) * j / n) / np.sqrt(2 * n)
        for a in range(d):
            L[j * d + a, k * d + a] = col
    return L


def validate_lagrangian(L, tol=DEFAULT_TOL):
    """Check orthonormality and isotropy of the column span."""
    L = np.asarray(L, dtype=complex)
    dim, m = L.shape
    if dim != 2 * m:
        return False
    orth = maxabs(L.conj().T @ L - np.eye(m))
    iso = maxabs(L.T @ L)
    return max(orth, iso) <= tol.eq_tol


def _popcount_below(indices, mode):
    mask = (1 << mode) - 1
    out = np.zeros_like(indices)
    v = indices & mask
    while np.any(v):
        out += v & 1
        v >>= 1
    return out


def creation_operators(modes):
    """Dense wedge-insertion operators, little-endian bitmask basis.

    Inserting mode mu into occupation mask S picks up the sign (-1)^(number
    of set bits of S below mu).
    """
    N = 2 ** modes
    idx = np.arange(N)
    ops = np.zeros((modes, N, N), dtype=complex)
    for mu in range(modes):
        empty = (idx >> mu) & 1 == 0
        src = idx[empty]
        dst = src | (1 << mu)
        sign = 1.0 - 2.0 * (_popcount_below(src, mu) & 1)
        ops[mu][dst, src] = sign
    return ops


@dataclass
class CliffordModel:
    """Lattice, Lagrangian, Fock generators and grading, plus small caches."""

    lattice: LatticeModel
    lagrangian: np.ndarray
    generators: np.ndarray
    grading: np.ndarray
    creators: np.ndarray
    annihilators: np.ndarray
    lift_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self):
        return self.lattice.n

    @property
    def d(self):
        return self.lattice.d

    @property
    def dim_h(self):
        return self.lattice.dim_h

    @property
    def fock_dim(self):
        return self.lattice.fock_dim

    @property
    def vacuum(self):
        v = np.zeros(self.fock_dim, dtype=complex)
        v[0] = 1.0
        return v

    def basis_vector(self, flat):
        v = np.zeros(self.dim_h, dtype=complex)
        v[flat] = 1.0
        return v


def build_clifford_model(n, d, lagrangian=None, allow_odd_modes=False, tol=DEFAULT_TOL):
    """Construct the model; n*d must be even unless allow_odd_modes.

    Odd n*d leaves the half-circle algebra with a nontrivial center, so the
    modular and representation layers reject it; the flag exists for the
    tiny single-mode examples of the operator layer.
    """
    lattice = LatticeModel(n, d)
    if lattice.modes % 2 == 1 and not allow_odd_modes:
        raise ValueError(f"n*d = {lattice.modes} is odd; the half-circle algebra would not be a factor")
    if lagrangian is None:
        lagrangian = default_lagrangian(lattice)
    else:
        lagrangian = np.asarray(lagrangian, dtype=complex)
        if not validate_lagrangian(lagrangian, tol):
            raise ValueError("provided subspace is not Lagrangian")
    creators = creation_operators(lattice.modes)
    annihilators = np.conj(np.transpose(creators, (0, 2, 1)))
    N = lattice.fock_dim
    parity = np.array([bin(i).count("1") & 1 for i in range(N)])
    grading = np.diag(1.0 - 2.0 * parity).astype(complex)
    model = CliffordModel(lattice, lagrangian, np.empty(0), grading, creators, annihilators)
    gens = np.stack([pi_vector(model, model.basis_vector(i)) for i in range(lattice.dim_h)])
    model.generators = gens
    return model


def pi_vector(model, v):
    """Fock operator of v in H^C: sqrt(2) (a^dag on the L part - a on the conj(L) part)."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (model.dim_h,):
        raise DimensionMismatch(f"vector has shape {v.shape}, expected ({model.dim_h},)")
    L = model.lagrangian
    create_coeff = L.conj().T @ v
    annihilate_coeff = L.T @ v
    return np.sqrt(2.0) * (
        np.tensordot(create_coeff, model.creators, axes=(0, 0))
        - np.tensordot(annihilate_coeff, model.annihilators, axes=(0, 0))
    )


def half_space(model, which):
    """Vertex sets of the two half circles."""
    n = model.n
    if which == "first":
        return tuple(range(0, n))
    if which == "second":
        return tuple(range(n, 2 * n))
    raise ValueError("which must be 'first' or 'second'")


def generator_indices(model, point_subset):
    return [model.lattice.flat_index(j, a) for j in sorted(point_subset) for a in range(model.d)]


def clifford_monomials(model, point_subset):
    """Ordered generator products over subsets of the selected vertices.

    Returns 2^(|subset|*d) linearly independent matrices; the empty product
    is the identity and factors appear in increasing flat-index order.
    """
    mats = [np.eye(model.fock_dim, dtype=complex)]
    for i in generator_indices(model, point_subset):
        g = model.generators[i]
        mats.extend([m @ g for m in mats])
    return np.stack(mats)


def anticommutator_residual(model, v, w):
    """Sup-norm deviation from the defining relation for one pair."""
    pv, pw = pi_vector(model, v), pi_vector(model, w)
    target = -2.0 * np.vdot(np.conj(v), w) * np.eye(model.fock_dim)
    return maxabs(pv @ pw + pw @ pv - target)


def star_residual(model, v):
    pv = pi_vector(model, v)
    return maxabs(pv.conj().T + pi_vector(model, np.conj(v)))
