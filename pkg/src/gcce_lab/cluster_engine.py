"""Bath-spin cluster enumeration and subset-lattice transforms.

Clusters are index subsets of the bath.  The lattice order used everywhere
is size-then-lexicographic, which fixes the evaluation order of every
product and sum built on top of the lattice.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import IncompleteLatticeError, InvalidArgumentError


@dataclass(frozen=True)
class Cluster:
    """An index subset of bath spins, stored strictly ascending."""

    members: tuple[int, ...]

    def __init__(self, members=()):
        ordered = tuple(sorted(int(m) for m in members))
        if len(set(ordered)) != len(ordered):
            raise InvalidArgumentError(f"duplicate cluster members: {members}")
        if ordered and ordered[0] < 0:
            raise InvalidArgumentError(f"negative cluster member: {members}")
        object.__setattr__(self, "members", ordered)

    @property
    def order(self) -> int:
        return len(self.members)

    def contains(self, other: "Cluster") -> bool:
        return set(other.members).issubset(self.members)

    def lattice_key(self):
        return (self.order, self.members)

    def __repr__(self):
        return f"Cluster({{{', '.join(map(str, self.members))}}})"


EMPTY_CLUSTER = Cluster(())


def all_subclusters(c: Cluster) -> list[Cluster]:
    """Every subset of ``c`` including the empty set and ``c`` itself."""
    return [
        Cluster(comb)
        for size in range(c.order + 1)
        for comb in combinations(c.members, size)
    ]


def proper_subclusters(c: Cluster) -> list[Cluster]:
    """All 2^|C| - 1 proper subsets of ``c`` in size-then-lex order."""
    return [
        Cluster(comb)
        for size in range(c.order)
        for comb in combinations(c.members, size)
    ]


def mobius_coefficient(sub: Cluster, sup: Cluster) -> int:
    """Mobius function of the subset lattice: (-1)^(|sup|-|sub|) on chains."""
    if not sup.contains(sub):
        return 0
    return -1 if (sup.order - sub.order) % 2 else 1


def mobius_invert(values, target: Cluster) -> float:
    """Alternating-sign sum over all subsets of ``target``.

    Recovers the irreducible part of a cumulative subset function:
    out = sum_{C' <= target} (-1)^(|target|-|C'|) values[C'].
    """
    total = 0.0
    for sub in all_subclusters(target):
        try:
            v = values[sub]
        except KeyError:
            raise IncompleteLatticeError(f"missing value for {sub}") from None
        total += mobius_coefficient(sub, target) * v
    return total


def zeta_transform(irreducible, target: Cluster) -> float:
    """Plain sum over all subsets of ``target``; inverse of mobius_invert."""
    total = 0.0
    for sub in all_subclusters(target):
        try:
            total += irreducible[sub]
        except KeyError:
            raise IncompleteLatticeError(f"missing value for {sub}") from None
    return total


@dataclass(frozen=True)
class ClusterSet:
    """Deduplicated, subset-closed family of clusters up to a truncation order."""

    clusters: tuple[Cluster, ...]
    truncation_order: int
    cutoff_radius: float | None = None
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(set(self.clusters), key=Cluster.lattice_key))
        object.__setattr__(self, "clusters", ordered)
        object.__setattr__(self, "_index", frozenset(ordered))
        for c in ordered:
            if c.order > self.truncation_order:
                raise InvalidArgumentError(
                    f"{c} exceeds truncation order {self.truncation_order}"
                )
            for size in range(c.order):
                for comb in combinations(c.members, size):
                    if Cluster(comb) not in self._index:
                        raise InvalidArgumentError(
                            f"cluster family not subset-closed: {c} present "
                            f"but {set(comb) or '{}'} missing"
                        )

    def __iter__(self):
        return iter(self.clusters)

    def __len__(self):
        return len(self.clusters)

    def __contains__(self, c: Cluster):
        return c in self._index

    def of_order(self, k: int) -> tuple[Cluster, ...]:
        return tuple(c for c in self.clusters if c.order == k)

    def up_to_order(self, m: int) -> tuple[Cluster, ...]:
        return tuple(c for c in self.clusters if c.order <= m)


def _connected(members: tuple[int, ...], adjacency: np.ndarray) -> bool:
    if len(members) <= 1:
        return True
    todo = {members[0]}
    seen = set()
    rest = set(members)
    while todo:
        node = todo.pop()
        seen.add(node)
        todo.update(
            other for other in rest if other not in seen and adjacency[node, other]
        )
    return seen == rest


def enumerate_clusters(
    n_bath: int,
    M: int,
    positions: np.ndarray | None = None,
    cutoff: float | None = None,
) -> ClusterSet:
    """All bath-index subsets of size <= M, optionally distance-filtered.

    With ``cutoff`` given, a cluster is kept only when its members form a
    connected graph under pairwise distance <= cutoff (angstrom); the family
    is then re-closed under subsets so lattice denominators stay computable.
    """
    if not 0 <= M <= n_bath:
        raise InvalidArgumentError(f"order M={M} outside [0, {n_bath}]")
    indices = range(n_bath)
    if cutoff is None:
        clusters = [
            Cluster(comb) for size in range(M + 1) for comb in combinations(indices, size)
        ]
        return ClusterSet(tuple(clusters), truncation_order=M, cutoff_radius=None)

    if positions is None:
        raise InvalidArgumentError("cutoff requires site positions")
    pos = np.asarray(positions, dtype=float)
    if pos.shape != (n_bath, 3):
        raise InvalidArgumentError(f"positions must have shape ({n_bath}, 3)")
    delta = pos[:, None, :] - pos[None, :, :]
    adjacency = np.linalg.norm(delta, axis=-1) <= cutoff
    np.fill_diagonal(adjacency, False)

    kept = set()
    for size in range(M + 1):
        for comb in combinations(indices, size):
            if _connected(comb, adjacency):
                kept.add(comb)
    # Subsets of a connected cluster may themselves be disconnected; put
    # them back so every denominator on the lattice exists.
    closed = set()
    for comb in kept:
        for size in range(len(comb) + 1):
            closed.update(combinations(comb, size))
    clusters = tuple(Cluster(comb) for comb in closed)
    return ClusterSet(clusters, truncation_order=M, cutoff_radius=cutoff)
