"""Spin sites, spin systems, and Hamiltonian assembly.

The full Hamiltonian contains the central-spin self term S.D.S, Zeeman
terms B.gamma.S and B.gamma_i.I_i, hyperfine couplings S.A_i.I_i, bath
self terms I_i.P_i.I_i, and bath-bath couplings I_i.J_ij.I_j.  Cluster
Hamiltonians keep the terms internal to the cluster and fold every
excluded bath spin into static mean-field contributions through its
expectation vector.

Coupling tensors default to the point-dipole form derived from the site
geometry; explicit tensors may override any of them.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cluster_engine import Cluster
from .constants import DEFAULT_DIMENSION_CAP, DIPOLAR_COEFF, IDENTITY3
from .exceptions import (
    CapacityError,
    DegenerateGeometryError,
    InconsistentPartitionError,
    InvalidArgumentError,
)
from .linalg_core import kron_embed


def _as_gamma_tensor(gamma) -> np.ndarray:
    arr = np.asarray(gamma, dtype=float)
    if arr.ndim == 0:
        return float(arr) * IDENTITY3.copy()
    if arr.shape == (3, 3):
        return arr.copy()
    raise InvalidArgumentError(f"gamma must be a scalar or 3x3 tensor, got {arr.shape}")


@lru_cache(maxsize=None)
def _cached_spin_operators(two_s: int):
    s = two_s / 2.0
    dim = two_s + 1
    m = s - np.arange(dim)
    ladder = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    sp = np.zeros((dim, dim), dtype=complex)
    sp[np.arange(dim - 1), np.arange(1, dim)] = ladder
    sx = (sp + sp.conj().T) / 2.0
    sy = (sp - sp.conj().T) / 2j
    sz = np.diag(m).astype(complex)
    for op in (sx, sy, sz):
        op.setflags(write=False)
    return sx, sy, sz


def spin_operators(s: float):
    """Angular-momentum matrices (Sx, Sy, Sz) for spin quantum number s.

    Sz is diagonal with entries s, s-1, ..., -s and [Sx, Sy] = i Sz.
    """
    two_s = 2.0 * float(s)
    if s < 0 or abs(two_s - round(two_s)) > 1e-9:
        raise InvalidArgumentError(f"spin must be a nonnegative half-integer, got {s}")
    return _cached_spin_operators(int(round(two_s)))


@dataclass(frozen=True)
class SpinSite:
    """One spin (central or bath): position, spin number, coupling tensors.

    ``gamma`` accepts an isotropic scalar (expanded to gamma * identity) or
    a full 3x3 tensor in rad/(ms*mT).  ``self_tensor`` is the zero-field
    splitting tensor for the central spin or the quadrupole tensor for a
    bath spin, in rad/ms; it must vanish for s = 1/2.
    """

    label: str
    position: np.ndarray
    s: float
    gamma: np.ndarray
    self_tensor: np.ndarray | None = None

    def __post_init__(self):
        position = np.asarray(self.position, dtype=float)
        if position.shape != (3,):
            raise InvalidArgumentError(f"position must be a 3-vector, got {position.shape}")
        two_s = 2.0 * float(self.s)
        if self.s < 0.5 or abs(two_s - round(two_s)) > 1e-9:
            raise InvalidArgumentError(
                f"site {self.label!r}: spin must be a half-integer >= 1/2, got {self.s}"
            )
        gamma = _as_gamma_tensor(self.gamma)
        if self.self_tensor is None:
            self_tensor = np.zeros((3, 3))
        else:
            self_tensor = np.asarray(self.self_tensor, dtype=float)
        if self_tensor.shape != (3, 3):
            raise InvalidArgumentError("self_tensor must be 3x3")
        scale = max(np.abs(self_tensor).max(), 1.0)
        if np.abs(self_tensor - self_tensor.T).max() > 1e-12 * scale:
            raise InvalidArgumentError(f"site {self.label!r}: self_tensor not symmetric")
        if int(round(two_s)) == 1 and np.any(self_tensor != 0.0):
            raise InvalidArgumentError(
                f"site {self.label!r}: spin-1/2 sites cannot carry a self tensor"
            )
        for arr in (position, gamma, self_tensor):
            arr.setflags(write=False)
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "self_tensor", self_tensor)

    @property
    def dim(self) -> int:
        return int(round(2 * self.s)) + 1

    def operators(self):
        return spin_operators(self.s)


def dipolar_tensor(site_a: SpinSite, site_b: SpinSite) -> np.ndarray:
    """Point-dipole coupling tensor between two sites, rad/ms.

    coeff * gamma_a * gamma_b * (1 - 3 n n) / r^3 with isotropic gammas
    (the isotropic part of each gamma tensor); symmetric and traceless.
    """
    delta = site_b.position - site_a.position
    r = float(np.linalg.norm(delta))
    if r < 1e-9:
        raise DegenerateGeometryError(
            f"sites {site_a.label!r} and {site_b.label!r} coincide"
        )
    n = delta / r
    gamma_a = np.trace(site_a.gamma) / 3.0
    gamma_b = np.trace(site_b.gamma) / 3.0
    return DIPOLAR_COEFF * gamma_a * gamma_b * (IDENTITY3 - 3.0 * np.outer(n, n)) / r**3


@dataclass(frozen=True)
class MeanField:
    """Static expectation vectors <I_a> of the bath spins outside a cluster."""

    expectations: dict

    def __post_init__(self):
        clean = {}
        for idx, vec in self.expectations.items():
            arr = np.asarray(vec, dtype=float)
            if arr.shape != (3,):
                raise InvalidArgumentError(f"expectation for spin {idx} must be a 3-vector")
            arr.setflags(write=False)
            clean[int(idx)] = arr
        object.__setattr__(self, "expectations", clean)

    @classmethod
    def zeros(cls, indices) -> "MeanField":
        return cls({int(a): np.zeros(3) for a in indices})

    def indices(self) -> frozenset:
        return frozenset(self.expectations)


@dataclass(frozen=True)
class SpinSystem:
    """Central spin plus ordered bath with pairwise coupling tensors.

    ``hyperfine[i]`` couples the central spin to bath spin i; the
    bath-bath tensors are stored for i < j only, oriented I_i . J . I_j.
    """

    central: SpinSite
    bath: tuple
    field_B: np.ndarray
    hyperfine: tuple
    bath_couplings: dict

    def __post_init__(self):
        bath = tuple(self.bath)
        field = np.asarray(self.field_B, dtype=float)
        if field.shape != (3,):
            raise InvalidArgumentError("field_B must be a 3-vector in mT")
        hyperfine = tuple(np.asarray(a, dtype=float) for a in self.hyperfine)
        if len(hyperfine) != len(bath):
            raise InvalidArgumentError(
                f"{len(hyperfine)} hyperfine tensors for {len(bath)} bath spins"
            )
        for a in hyperfine:
            if a.shape != (3, 3):
                raise InvalidArgumentError("hyperfine tensors must be 3x3")
            a.setflags(write=False)
        n = len(bath)
        expected = {(i, j) for i in range(n) for j in range(i + 1, n)}
        couplings = {}
        for key, tensor in self.bath_couplings.items():
            i, j = int(key[0]), int(key[1])
            if not i < j:
                raise InvalidArgumentError(f"bath coupling key {key} must have i < j")
            arr = np.asarray(tensor, dtype=float)
            if arr.shape != (3, 3):
                raise InvalidArgumentError("bath coupling tensors must be 3x3")
            arr.setflags(write=False)
            couplings[(i, j)] = arr
        if set(couplings) != expected:
            raise InvalidArgumentError(
                f"bath couplings must cover exactly the {len(expected)} pairs i < j"
            )
        field.setflags(write=False)
        object.__setattr__(self, "bath", bath)
        object.__setattr__(self, "field_B", field)
        object.__setattr__(self, "hyperfine", hyperfine)
        object.__setattr__(self, "bath_couplings", couplings)

    @classmethod
    def from_geometry(
        cls,
        central: SpinSite,
        bath,
        field_B,
        hyperfine_overrides: dict | None = None,
        coupling_overrides: dict | None = None,
    ) -> "SpinSystem":
        """Build a system with point-dipole tensors derived from positions."""
        bath = tuple(bath)
        hyperfine_overrides = hyperfine_overrides or {}
        coupling_overrides = coupling_overrides or {}
        hyperfine = tuple(
            np.asarray(hyperfine_overrides[i], dtype=float)
            if i in hyperfine_overrides
            else dipolar_tensor(central, site)
            for i, site in enumerate(bath)
        )
        couplings = {}
        for i in range(len(bath)):
            for j in range(i + 1, len(bath)):
                if (i, j) in coupling_overrides:
                    couplings[(i, j)] = np.asarray(coupling_overrides[(i, j)], dtype=float)
                else:
                    couplings[(i, j)] = dipolar_tensor(bath[i], bath[j])
        return cls(central, bath, field_B, hyperfine, couplings)

    @property
    def n_bath(self) -> int:
        return len(self.bath)

    @property
    def dims(self) -> tuple:
        return (self.central.dim,) + tuple(site.dim for site in self.bath)

    @property
    def full_dimension(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def bath_coupling(self, i: int, j: int) -> np.ndarray:
        """Tensor oriented I_i . T . I_j for any i != j."""
        if i < j:
            return self.bath_couplings[(i, j)]
        return self.bath_couplings[(j, i)].T

    def bath_indices(self) -> range:
        return range(self.n_bath)


def _single_site_hamiltonian(ops, quadratic: np.ndarray | None, linear: np.ndarray):
    dim = ops[0].shape[0]
    h = np.zeros((dim, dim), dtype=complex)
    for alpha in range(3):
        if linear[alpha] != 0.0:
            h += linear[alpha] * ops[alpha]
    if quadratic is not None and np.any(quadratic):
        for alpha in range(3):
            for beta in range(3):
                c = quadratic[alpha, beta]
                if c != 0.0:
                    h += c * (ops[alpha] @ ops[beta])
    return h


def _pair_term(tensor: np.ndarray, slot_a: int, slot_b: int, dims, ops_a, ops_b):
    """Sum_ab tensor[a,b] O_a(slot_a) O_b(slot_b) embedded in the product space."""
    pre = int(np.prod(dims[:slot_a], dtype=np.int64))
    mid = int(np.prod(dims[slot_a + 1 : slot_b], dtype=np.int64))
    post = int(np.prod(dims[slot_b + 1 :], dtype=np.int64))
    eye_mid = np.eye(mid)
    da, db = dims[slot_a], dims[slot_b]
    block = np.zeros((da * mid * db, da * mid * db), dtype=complex)
    for alpha in range(3):
        for beta in range(3):
            c = tensor[alpha, beta]
            if c != 0.0:
                block += c * np.kron(ops_a[alpha], np.kron(eye_mid, ops_b[beta]))
    return np.kron(np.eye(pre), np.kron(block, np.eye(post)))


def central_static_hamiltonian(system: SpinSystem) -> np.ndarray:
    """Central-spin-only part S.D.S + B.gamma_S.S on the central space."""
    ops = system.central.operators()
    linear = system.field_B @ system.central.gamma
    return _single_site_hamiltonian(ops, system.central.self_tensor, linear)


def build_full_hamiltonian(
    system: SpinSystem, dimension_cap: int = DEFAULT_DIMENSION_CAP
) -> np.ndarray:
    """Full-space Hamiltonian over central (x) all bath spins."""
    if system.full_dimension > dimension_cap:
        raise CapacityError(
            f"full dimension {system.full_dimension} exceeds cap {dimension_cap}"
        )
    dims = system.dims
    n = int(np.prod(dims, dtype=np.int64))
    h = np.zeros((n, n), dtype=complex)


    h += kron_embed(central_static_hamiltonian(system), 0, dims)
    for i, site in enumerate(system.bath):
        ops = site.operators()
        linear = system.field_B @ site.gamma
        h += kron_embed(_single_site_hamiltonian(ops, site.self_tensor, linear), i + 1, dims)
    ops_c = system.central.operators()
    for i, site in enumerate(system.bath):
        h += _pair_term(system.hyperfine[i], 0, i + 1, dims, ops_c, site.operators())
    for i in range(system.n_bath):
        ops_i = system.bath[i].operators()
        for j in range(i + 1, system.n_bath):
            h += _pair_term(
                system.bath_couplings[(i, j)],
                i + 1,
                j + 1,
                dims,
                ops_i,
                system.bath[j].operators(),
            )
    return h


def build_cluster_hamiltonian(
    system: SpinSystem, cluster: Cluster, mean_field: MeanField
) -> np.ndarray:
    """Hamiltonian on central (x) cluster spins with mean-field exclusions.

    All terms internal to {central} + cluster are kept; every bath spin a
    outside the cluster enters through S.A_a.<I_a> and I_i.J_ia.<I_a>.
    ``mean_field`` must cover exactly the excluded bath spins.
    """
    members = cluster.members
    if members and (members[0] < 0 or members[-1] >= system.n_bath):
        raise InvalidArgumentError(f"cluster {cluster} outside bath of {system.n_bath}")
    excluded = frozenset(range(system.n_bath)) - frozenset(members)
    if mean_field.indices() != excluded:
        overlap = mean_field.indices() & frozenset(members)
        if overlap:
            raise InconsistentPartitionError(
                f"mean-field indices {sorted(overlap)} overlap cluster {cluster}"
            )
        raise InconsistentPartitionError(
            f"mean field covers {sorted(mean_field.indices())}, "
            f"expected exactly {sorted(excluded)}"
        )
    for a in excluded:
        site = system.bath[a]
        vec = mean_field.expectations[a]
        if np.linalg.norm(vec) > site.s + 1e-9:
            raise InvalidArgumentError(
                f"|<I_{a}>| = {np.linalg.norm(vec):.3g} exceeds spin {site.s}"
            )

    dims = (system.central.dim,) + tuple(system.bath[i].dim for i in members)
    n = int(np.prod(dims, dtype=np.int64))
    h = np.zeros((n, n), dtype=complex)


    # Central static part plus the mean-field shift from excluded spins.
    ops_c = system.central.operators()
    linear_c = system.field_B @ system.central.gamma
    for a in excluded:
        linear_c = linear_c + system.hyperfine[a] @ mean_field.expectations[a]
    h += kron_embed(
        _single_site_hamiltonian(ops_c, system.central.self_tensor, linear_c), 0, dims
    )

    for slot, i in enumerate(members, start=1):
        site = system.bath[i]
        linear = system.field_B @ site.gamma
        for a in excluded:
            linear = linear + system.bath_coupling(i, a) @ mean_field.expectations[a]
        h += kron_embed(
            _single_site_hamiltonian(site.operators(), site.self_tensor, linear),
            slot,
            dims,
        )

    for slot, i in enumerate(members, start=1):
        h += _pair_term(system.hyperfine[i], 0, slot, dims, ops_c, system.bath[i].operators())
    for a_pos in range(len(members)):
        for b_pos in range(a_pos + 1, len(members)):
            i, j = members[a_pos], members[b_pos]
            h += _pair_term(
                system.bath_couplings[(i, j)],
                a_pos + 1,
                b_pos + 1,
                dims,
                system.bath[i].operators(),
                system.bath[j].operators(),
            )
    return h
