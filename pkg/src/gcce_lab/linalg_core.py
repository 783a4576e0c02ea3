"""Dense complex Hermitian linear algebra for unitary spin dynamics.

Propagation is spectral: one eigendecomposition per Hamiltonian, reused
across the whole time grid, exact to machine precision for these small
dense problems.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgumentError

SERIES_KINDS = ("exact", "cluster", "irreducible", "product")


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition H = V diag(w) V^dagger, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class ElementSeries:
    """Complex time series of one central-spin density-matrix element.

    ``kind`` distinguishes exact dynamics, raw per-cluster elements, their
    irreducible factors, and truncated cluster-expansion products.
    ``element`` is the (i, j) central level pair the series refers to.
    """

    times: np.ndarray
    values: np.ndarray
    kind: str
    element: tuple[int, int]

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if times.ndim != 1 or values.shape != times.shape:
            raise InvalidArgumentError("times and values must be equal-length 1-D")
        if times.size == 0 or times[0] != 0.0:
            raise InvalidArgumentError("time grid must start at 0")
        if np.any(np.diff(times) <= 0):
            raise InvalidArgumentError("time grid must be strictly increasing")
        if self.kind not in SERIES_KINDS:
            raise InvalidArgumentError(f"unknown series kind {self.kind!r}")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "element", (int(self.element[0]), int(self.element[1])))

    def with_values(self, values, kind=None) -> "ElementSeries":
        return ElementSeries(self.times, values, kind or self.kind, self.element)


def hermitian_eigendecompose(H: np.ndarray) -> HermitianEig:
    """Eigendecompose a Hermitian matrix, symmetrizing (H + H^dagger)/2 first."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {H.shape}")
    scale = max(np.abs(H).max(), 1.0) if H.size else 1.0
    if np.abs(H - H.conj().T).max() > 1e-10 * scale:
        raise InvalidArgumentError("matrix is not Hermitian within 1e-10")
    w, v = np.linalg.eigh((H + H.conj().T) / 2.0)
    return HermitianEig(eigenvalues=w, eigenvectors=v)


def propagator(eig: HermitianEig, t: float) -> np.ndarray:
    """Unitary U(t) = V diag(exp(-i w t)) V^dagger."""
    phases = np.exp(-1j * eig.eigenvalues * t)
    return (eig.eigenvectors * phases) @ eig.eigenvectors.conj().T


def propagate_density(H: np.ndarray, rho0: np.ndarray, times) -> np.ndarray:
    """Evolve rho0 under H across a time grid; returns array (n_t, d, d).

    rho(t) = U(t) rho0 U(t)^dagger with U from the spectral decomposition.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    H = np.asarray(H, dtype=complex)
    times = np.asarray(times, dtype=float)
    if rho0.shape != H.shape:
        raise InvalidArgumentError(
            f"density shape {rho0.shape} does not match H shape {H.shape}"
        )
    if np.abs(rho0 - rho0.conj().T).max() > 1e-10:
        raise InvalidArgumentError("rho0 is not Hermitian within 1e-10")
    if abs(np.trace(rho0) - 1.0) > 1e-9:
        raise InvalidArgumentError("rho0 does not have unit trace")
    if np.linalg.eigvalsh((rho0 + rho0.conj().T) / 2.0).min() < -1e-9:
        raise InvalidArgumentError("rho0 is not positive semidefinite")

    eig = hermitian_eigendecompose(H)
    v = eig.eigenvectors
    rho_eig = v.conj().T @ rho0 @ v
    out = np.empty((times.size,) + rho0.shape, dtype=complex)
    for k, t in enumerate(times):
        phases = np.exp(-1j * eig.eigenvalues * t)
        evolved = (phases[:, None] * rho_eig) * phases.conj()[None, :]
        out[k] = v @ evolved @ v.conj().T
    return out


def kron_embed(op: np.ndarray, slot: int, dims) -> np.ndarray:
    """Embed ``op`` at ``slot`` of a product space: I (x) ... op ... (x) I."""
    dims = tuple(int(d) for d in dims)
    if not 0 <= slot < len(dims):
        raise InvalidArgumentError(f"slot {slot} outside dims of length {len(dims)}")
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[slot], dims[slot]):
        raise InvalidArgumentError(
            f"operator shape {op.shape} does not match dims[{slot}]={dims[slot]}"
        )
    pre = int(np.prod(dims[:slot], dtype=np.int64)) if slot else 1
    post = int(np.prod(dims[slot + 1 :], dtype=np.int64)) if slot + 1 < len(dims) else 1
    return np.kron(np.kron(np.eye(pre), op), np.eye(post))


def partial_trace_first(rho_full: np.ndarray, dims) -> np.ndarray:
    """Reduced density matrix of the first factor of a product space."""
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims, dtype=np.int64))
    rho_full = np.asarray(rho_full, dtype=complex)
    if rho_full.shape != (n, n):
        raise InvalidArgumentError(
            f"density shape {rho_full.shape} does not match dims product {n}"
        )
    d0 = dims[0]
    rest = n // d0
    reshaped = rho_full.reshape(d0, rest, d0, rest)
    return np.einsum("arbr->ab", reshaped)


def extract_central_element(
    rho_full: np.ndarray, dims, i: int, j: int, basis: np.ndarray | None = None
) -> complex:
    """<i| Tr_bath[rho_full] |j> with the central subsystem as first factor.

    ``basis`` optionally holds the level states as columns (defaults to the
    computational basis of the first factor).
    """
    dims = tuple(int(d) for d in dims)
    d0 = dims[0]
    if not (0 <= i < d0 and 0 <= j < d0):
        raise InvalidArgumentError(f"levels ({i}, {j}) outside range of dim {d0}")
    rho_c = partial_trace_first(rho_full, dims)
    if basis is None:
        return complex(rho_c[i, j])
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (d0, d0):
        raise InvalidArgumentError(f"basis must be {d0}x{d0}")
    return complex(basis[:, i].conj() @ rho_c @ basis[:, j])


def trace_observable_series(
    H: np.ndarray, rho0: np.ndarray, observable: np.ndarray, times
) -> np.ndarray:
    """Tr[rho(t) X] on a time grid without materializing rho(t).

    Uses one eigendecomposition of H; identical to propagate-then-trace.
    """
    times = np.asarray(times, dtype=float)
    eig = hermitian_eigendecompose(H)
    v = eig.eigenvectors
    rho_eig = v.conj().T @ np.asarray(rho0, dtype=complex) @ v
    obs_eig = v.conj().T @ np.asarray(observable, dtype=complex) @ v
    weights = rho_eig.T * obs_eig
    phases = np.exp(1j * np.outer(times, eig.eigenvalues))
    return np.einsum("tm,mn,tn->t", phases, weights, phases.conj(), optimize=True)
