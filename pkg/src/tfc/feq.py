"""Forced extension quadrangulations and homomorphisms to a k-cycle.

A cylinder quadrangulation whose equal-length cuffs are joined by a chain of
pairwise-intersecting non-contractible k-cycles admits exactly one cyclic
homomorphism pattern to the k-cycle; all other instances admit a second one,
offset by two positions on the second cuff. Recognition of the chain
structure and the recursive construction of those homomorphisms live here.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .embedding import (
    EmbeddedGraph,
    Surface,
    Walk,
    cycle_key,
    is_quadrangulation,
    subgraph_between,
)
from .errors import AlgorithmError, PreconditionError, SurgeryError
from .homotopy import (
    cuff_distance,
    identify_across_quad,
    noncontractible_cycles,
    shortest_noncontractible,
)


@dataclass(frozen=True)
class FeqWitness:
    """Chain of non-contractible k-cycles from cuff 1 to cuff 2.

    Consecutive cycles share at least one vertex; the first equals cuff 1
    and the last equals cuff 2 (as cycles).
    """

    chain: tuple[Walk, ...]
    k: int


@dataclass(frozen=True)
class FeqResult:
    witness: FeqWitness | None
    reason: str | None

    def __bool__(self) -> bool:
        return self.witness is not None


def _check_feq_preconditions(g: EmbeddedGraph) -> int:
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("not a cylinder graph")
    if len(g.cuffs[0]) != len(g.cuffs[1]):
        raise PreconditionError(
            f"cuff lengths differ: {len(g.cuffs[0])} vs {len(g.cuffs[1])}"
        )
    if not is_quadrangulation(g):
        raise PreconditionError("an internal face is not a quad")
    return len(g.cuffs[0])


def is_feq(g: EmbeddedGraph) -> FeqResult:
    """Recognize the forced-extension chain structure.

    Returns a witness chain when (a) no non-contractible cycle is shorter
    than the cuff length k and (b) the intersection graph of all
    non-contractible k-cycles connects cuff 1 to cuff 2. Reasons on failure:
    "short_cycle" or "no_chain".
    """
    k = _check_feq_preconditions(g)
    shortest, _ = shortest_noncontractible(g)
    if shortest < k:
        return FeqResult(None, "short_cycle")
    cycles = noncontractible_cycles(g, k)
    key1, key2 = cycle_key(g.cuffs[0]), cycle_key(g.cuffs[1])
    if key1 not in cycles or key2 not in cycles:
        raise AlgorithmError("cuff cycle missing from its own enumeration")
    vsets = {c: set(c) for c in cycles}
    parent: dict[Walk, Walk] = {key1: key1}
    queue = deque([key1])
    while queue:
        c = queue.popleft()
        if c == key2:
            break
        for other in cycles:
            if other not in parent and vsets[c] & vsets[other]:
                parent[other] = c
                queue.append(other)
    if key2 not in parent:
        return FeqResult(None, "no_chain")
    chain = [key2]
    while chain[-1] != key1:
        chain.append(parent[chain[-1]])
    chain.reverse()
    return FeqResult(FeqWitness(tuple(chain), k), None)


def is_wide_feq(g: EmbeddedGraph) -> bool:
    """True when the chain structure holds and the cuffs are 4k apart."""
    result = is_feq(g)
    if not result:
        raise PreconditionError(
            f"not a forced extension quadrangulation ({result.reason})"
        )
    assert result.witness is not None
    return cuff_distance(g) >= 4 * result.witness.k


@dataclass(frozen=True)
class CycleHomomorphism:
    """Vertex-to-residue map into the k-cycle on residues 0..k-1."""

    k: int
    mapping: dict[int, int]

    def __call__(self, v: int) -> int:
        return self.mapping[v]


def verify_homomorphism(
    g: EmbeddedGraph, h: CycleHomomorphism, cyclic_on: Iterable[Walk] = ()
) -> bool:
    """Check the homomorphism invariants plus requested cyclic restrictions.

    A restriction to a k-walk is cyclic when it hits all k residues; being a
    homomorphism then forces it to be an isomorphism onto the target cycle.
    """
    k = h.k
    if k < 3:
        return False
    for v in range(g.n):
        r = h.mapping.get(v)
        if r is None or not (0 <= r < k):
            return False
    for u, v in g.edges:
        if (h.mapping[u] - h.mapping[v]) % k not in (1, k - 1):
            return False
    for walk in cyclic_on:
        if len(walk) != k or len({h.mapping[v] for v in walk}) != k:
            return False
    return True


def offset_by_two(
    h1: CycleHomomorphism, h2: CycleHomomorphism, walk: Walk
) -> bool:
    """True when h2 equals h1 shifted by a uniform +-2 residues on the walk.

    On a triangle a shift of 2 coincides with a shift of -1; the uniform
    shift reading is what the construction produces for every k.
    """
    k = h1.k
    if k != h2.k:
        return False
    shifts = {(h2.mapping[v] - h1.mapping[v]) % k for v in walk}
    return len(shifts) == 1 and shifts <= {2 % k, (-2) % k}


def _recheck(g: EmbeddedGraph) -> int:
    # Cheap invariants only; non-contractible girth is inherited by the
    # recursion's pieces (their non-contractible cycles separate the same
    # holes in the parent), so it is checked once at the public entry.
    return _check_feq_preconditions(g)


def _compose(theta: dict[int, int], ren: dict[int, int]) -> dict[int, int]:
    return {old: theta[new] for old, new in ren.items()}


def _build(g: EmbeddedGraph) -> tuple[dict[int, int], dict[int, int] | None]:
    k = _recheck(g)
    cuff1, cuff2 = g.cuffs
    key1, key2 = cycle_key(cuff1), cycle_key(cuff2)

    # Base: the bare cycle traced by both cuffs.
    if not g.faces:
        return {v: i for i, v in enumerate(cuff1)}, None

    # Case 1: split at an intermediate non-contractible k-cycle.
    middles = [c for c in noncontractible_cycles(g, k) if c not in (key1, key2)]
    if middles:
        for cand in middles:
            g1, m1 = subgraph_between(g, cuff1, cand)
            g2, m2 = subgraph_between(g, cand, cuff2)
            if g1.n >= g.n or g2.n >= g.n:
                continue
            t1, t1p = _build(g1)
            t2, t2p = _build(g2)
            left1 = _compose(t1, m1)
            left1p = _compose(t1p, m1) if t1p is not None else None
            right2 = _compose(t2, m2)
            right2p = _compose(t2p, m2) if t2p is not None else None
            # Align the two halves on the shared cycle: both restrictions
            # are cyclic, so their mismatch is an automorphism of the target.
            alpha = {right2[x]: left1[x] for x in cand}
            if len(alpha) != k:
                raise AlgorithmError("split halves disagree on the shared cycle")
            theta = dict(left1)
            for v, r in right2.items():
                theta[v] = alpha[r]
            if right2p is not None:
                thetap = dict(left1)
                for v, r in right2p.items():
                    thetap[v] = alpha[r]
            elif left1p is not None:
                # left1p equals left1 rotated by s on the shared cycle; keep
                # the union consistent by rotating the right half the same way.
                s = (left1p[cand[0]] - left1[cand[0]]) % k
                thetap = dict(left1p)
                for v, r in right2.items():
                    thetap[v] = (alpha[r] + s) % k
            else:
                thetap = None
            return theta, thetap
        raise AlgorithmError("no splitting cycle yields two smaller halves")

    shared = sorted(set(cuff1) & set(cuff2))
    if shared:
        # Case 3: intersecting cuffs; contract a quad beside a shared vertex.
        for z1 in shared:
            for f in g.faces:
                if z1 not in f:
                    continue
                i = f.index(z1)
                z2, z4 = f[(i + 1) % 4], f[(i - 1) % 4]
                try:
                    g3, ren = identify_across_quad(g, f, (z2, z4))
                    t3, _ = _build(g3)
                except (SurgeryError, PreconditionError, AlgorithmError):
                    continue
                return _compose(t3, ren), None
        raise AlgorithmError("no quad at a shared cuff vertex is contractible")

    if all(g.degree(v) == 3 for v in cuff1):
        # Case 4: the graph is the double k-cycle; explicit formulas.
        mates = []
        for i, v in enumerate(cuff1):
            off = [
                w
                for w in g.neighbors(v)
                if w != cuff1[i - 1] and w != cuff1[(i + 1) % k]
            ]
            if len(off) != 1:
                raise AlgorithmError(f"cuff vertex {v} lacks a unique mate")
            mates.append(off[0])
        if len(set(mates)) != k or cycle_key(tuple(mates)) != key2:
            raise AlgorithmError("cuff mates do not trace the second cuff")
        if set(cuff1) | set(mates) != set(range(g.n)):
            raise AlgorithmError("unexpected extra vertices in the base case")
        theta = {v: i for i, v in enumerate(cuff1)}
        thetap = dict(theta)
        for i, u in enumerate(mates):
            theta[u] = (i + 1) % k
            thetap[u] = (i - 1) % k
        return theta, thetap

    # Case 5: a cuff-1 vertex of degree >= 4; contract a quad away from C1.
    c1set = set(cuff1)
    for z1 in sorted(v for v in cuff1 if g.degree(v) >= 4):
        for f in g.faces:
            if z1 not in f:
                continue
            i = f.index(z1)
            z2, z4 = f[(i + 1) % 4], f[(i - 1) % 4]
            if z2 in c1set or z4 in c1set:
                continue
            try:
                g3, ren = identify_across_quad(g, f, (z2, z4))
                t3, t3p = _build(g3)
            except (SurgeryError, PreconditionError, AlgorithmError):
                continue
            if t3p is None:
                continue
            return _compose(t3, ren), _compose(t3p, ren)
    raise AlgorithmError("no admissible quad beside a high-degree cuff vertex")


def build_homomorphisms(
    g: EmbeddedGraph,
) -> tuple[CycleHomomorphism, CycleHomomorphism | None]:
    """Homomorphisms of g to the k-cycle, cyclic on both cuffs.

    Requires a cylinder quadrangulation with equal cuff lengths k and no
    non-contractible cycle shorter than k. The first map always exists; the
    second is produced exactly when the recursion finds slack (no forced
    chain), agrees with the first on cuff 1, and sits at a uniform offset of
    two residues on cuff 2.

    The recursion follows five shapes: split at an intermediate
    non-contractible k-cycle and align the halves; the bare-cycle base;
    intersecting cuffs (contract a quad at a shared vertex); the double
    cycle with all cuff-1 degrees 3 (explicit formulas); and a degree-4
    cuff vertex (contract a quad pointing away from the cuff).
    """
    k = _check_feq_preconditions(g)
    shortest, witness = shortest_noncontractible(g)
    if shortest < k:
        raise PreconditionError(
            f"non-contractible cycle {witness} shorter than the cuffs"
        )
    t, tp = _build(g)
    theta = CycleHomomorphism(k, t)
    if not verify_homomorphism(g, theta, cyclic_on=g.cuffs):
        raise AlgorithmError("constructed map fails its own contract")
    if tp is None:
        return theta, None
    thetap = CycleHomomorphism(k, tp)
    if not verify_homomorphism(g, thetap, cyclic_on=g.cuffs):
        raise AlgorithmError("second map fails its own contract")
    if any(tp[v] != t[v] for v in g.cuffs[0]):
        raise AlgorithmError("second map does not agree on cuff 1")
    if not offset_by_two(theta, thetap, g.cuffs[1]):
        raise AlgorithmError("second map is not offset by two on cuff 2")
    return theta, thetap
