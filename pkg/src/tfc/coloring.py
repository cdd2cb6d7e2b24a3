"""Extending cuff precolorings to proper 3-colorings.

The exact oracle is a plain MRV backtracker behind a vertex budget. The
structural deciders answer the same question without search whenever the
instance is wide enough: the winding constraint rules colorings out, the
cyclic homomorphisms either force the extension pattern (chained instances)
or leave enough slack to construct one explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .embedding import (
    Coloring,
    EmbeddedGraph,
    PlainGraph,
    Surface,
    Walk,
    cycle_key,
    is_quadrangulation,
    subgraph_between,
    walk_edges,
)
from .errors import AlgorithmError, BudgetError, PreconditionError
from .feq import build_homomorphisms, is_feq
from .homotopy import (
    build_cocycle,
    cuff_distance,
    flip_cuffs,
    noncontractible_cycles,
    shortest_excluding_cuffs,
    shortest_noncontractible,
)
from .winding import COLORS, winding_constraint_satisfied, winding_number

Graph = PlainGraph | EmbeddedGraph

WINDING_CONSTRAINT = "WindingConstraint"
THETA_IDENTIFICATION = "ThetaIdentification"
NO_EXTENSION = "NoExtension"


@dataclass(frozen=True)
class ExtensionVerdict:
    extends: bool
    witness: Coloring | None = None
    violated: str | None = None

    def __bool__(self) -> bool:
        return self.extends


def _check_colors(g: Graph, psi: Coloring) -> None:
    for v, c in psi.items():
        if not (0 <= v < g.n):
            raise PreconditionError(f"precolored vertex {v} out of range")
        if c not in COLORS:
            raise PreconditionError(f"color {c} of vertex {v} not in {COLORS}")


def oracle_extend(g: Graph, psi: Coloring, *, budget: int = 64) -> ExtensionVerdict:
    """Exact search for a proper 3-coloring extending the precoloring.

    Deterministic backtracking, most-constrained vertex first. A precoloring
    that is already improper on an edge trivially has no proper extension
    and yields a negative verdict rather than an error.
    """
    if g.n > budget:
        raise BudgetError(f"{g.n} vertices exceed the decision budget {budget}")
    _check_colors(g, psi)
    for u, v in g.edges:
        if u in psi and v in psi and psi[u] == psi[v]:
            return ExtensionVerdict(False, None, NO_EXTENSION)

    assignment = dict(psi)
    uncolored = [v for v in range(g.n) if v not in assignment]

    def available(v: int) -> list[int]:
        taken = {assignment[w] for w in g.adjacency[v] if w in assignment}
        return [c for c in COLORS if c not in taken]

    def search() -> bool:
        best_v, best_avail = -1, None
        for v in uncolored:
            if v in assignment:
                continue
            avail = available(v)
            if best_avail is None or len(avail) < len(best_avail):
                best_v, best_avail = v, avail
                if not avail:
                    return False
        if best_avail is None:
            return True
        for c in best_avail:
            assignment[best_v] = c
            if search():
                return True
            del assignment[best_v]
        return False

    if search():
        return ExtensionVerdict(True, dict(sorted(assignment.items())))
    return ExtensionVerdict(False, None, NO_EXTENSION)


def enumerate_proper_colorings(g: Graph, *, budget: int = 20) -> Iterator[Coloring]:
    """Yield every proper 3-coloring, in lexicographic vertex/color order."""
    if g.n > budget:
        raise BudgetError(f"{g.n} vertices exceed the enumeration budget {budget}")
    assignment: dict[int, int] = {}

    def rec(v: int) -> Iterator[Coloring]:
        if v == g.n:
            yield dict(assignment)
            return
        taken = {assignment[w] for w in g.adjacency[v] if w in assignment}
        for c in COLORS:
            if c not in taken:
                assignment[v] = c
                yield from rec(v + 1)
                del assignment[v]

    yield from rec(0)


def _cuff_structure(g: EmbeddedGraph) -> tuple[list[int], set[tuple[int, int]]]:
    vertices: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for c in g.cuffs:
        vertices |= set(c)
        edges |= walk_edges(c)
    return sorted(vertices), edges


def _check_cuff_precoloring(g: EmbeddedGraph, psi: Coloring) -> None:
    _check_colors(g, psi)
    cuff_vertices, _ = _cuff_structure(g)
    if set(psi) != set(cuff_vertices):
        raise PreconditionError("precoloring domain must be the cuff vertices")
    for u, v in g.edges:
        if u in psi and v in psi and psi[u] == psi[v]:
            raise PreconditionError(f"precoloring improper on edge ({u}, {v})")


def _pullback(
    g: EmbeddedGraph, theta: dict[int, int], psi: Coloring
) -> Coloring:
    # theta is cyclic on cuff 1, so pattern[residue] is well defined and
    # adjacent residues get distinct colors; the composite is then proper.
    pattern = {theta[v]: psi[v] for v in g.cuffs[0]}
    phi = {v: pattern[theta[v]] for v in range(g.n)}
    for u, v in g.edges:
        if phi[u] == phi[v]:
            raise AlgorithmError("pulled-back coloring is not proper")
    return dict(sorted(phi.items()))


def decide_wide_feq(
    g: EmbeddedGraph, psi: Coloring, *, budget: int = 64
) -> ExtensionVerdict:
    """Decide extension over a chained quadrangulation with distant cuffs.

    The winding constraint is necessary. When the cuff winding sits at the
    extremal value k/3 the unique homomorphism forces equality of colors
    across every identified cuff pair, and the pullback of the cuff-1
    pattern is the only candidate extension; otherwise extension is
    guaranteed and the oracle just produces a witness.
    """
    result = is_feq(g)
    if not result:
        raise PreconditionError(
            f"not a forced extension quadrangulation ({result.reason})"
        )
    assert result.witness is not None
    k = result.witness.k
    if cuff_distance(g) < 4 * k:
        raise PreconditionError(f"cuff distance below {4 * k}")
    _check_cuff_precoloring(g, psi)
    if not winding_constraint_satisfied(g, psi):
        return ExtensionVerdict(False, None, WINDING_CONSTRAINT)
    if k % 3 == 0 and abs(winding_number(psi, g.cuffs[0])) == k // 3:
        theta, _ = build_homomorphisms(g)
        seen: dict[int, int] = {}
        for v in sorted(set(g.cuffs[0]) | set(g.cuffs[1])):
            r = theta.mapping[v]
            if seen.setdefault(r, psi[v]) != psi[v]:
                return ExtensionVerdict(False, None, THETA_IDENTIFICATION)
        return ExtensionVerdict(True, _pullback(g, theta.mapping, psi))
    verdict = oracle_extend(g, psi, budget=budget)
    if not verdict:
        raise AlgorithmError("extension guaranteed off the extremal winding")
    return verdict


def construct_extension_nonfeq(
    g: EmbeddedGraph, cycle: Walk, psi: Coloring
) -> ExtensionVerdict:
    """Searchlessly extend an extremal-winding precoloring past a slack cycle.

    `cycle` must be a non-contractible k-cycle distinct from the cuffs with
    neither side chained. Both halves then carry a second homomorphism, so
    among the three alignments (plain, left offset, right offset) one pulls
    the cuff-1 pattern back onto exactly the required cuff-2 pattern.
    """
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("needs a cylinder graph")
    if not is_quadrangulation(g):
        raise PreconditionError("an internal face is not a quad")
    k1, k2 = len(g.cuffs[0]), len(g.cuffs[1])
    if k1 != k2:
        raise PreconditionError("cuff lengths differ")
    k = k1
    if k % 3 != 0:
        raise PreconditionError("cuff length not divisible by 3")
    key = cycle_key(cycle)
    if len(key) != k or len(set(key)) != k:
        raise PreconditionError(f"{cycle} is not a simple {k}-cycle")
    if key in (cycle_key(g.cuffs[0]), cycle_key(g.cuffs[1])):
        raise PreconditionError("cycle coincides with a cuff")
    if key not in noncontractible_cycles(g, k):
        raise PreconditionError(f"{cycle} is not non-contractible")
    shortest, _ = shortest_noncontractible(g)
    if shortest < k:
        raise PreconditionError(f"non-contractible cycle shorter than {k}")
    if cuff_distance(g) < 4 * k:
        raise PreconditionError(f"cuff distance below {4 * k}")
    _check_cuff_precoloring(g, psi)
    if not winding_constraint_satisfied(g, psi):
        raise PreconditionError("winding constraint unsatisfied")
    if abs(winding_number(psi, g.cuffs[0])) != k // 3:
        raise PreconditionError("cuff winding is not extremal")

    left_raw, m1 = subgraph_between(g, g.cuffs[0], key)
    right, m2 = subgraph_between(g, key, g.cuffs[1])
    if is_feq(left_raw) or is_feq(right):
        raise PreconditionError("a side of the cycle is a forced chain")
    left = flip_cuffs(left_raw)  # cuff order (cycle, cuff 1)
    th1, th1p = build_homomorphisms(left)
    th2, th2p = build_homomorphisms(right)
    if th1p is None or th2p is None:
        raise AlgorithmError("an unchained side produced no second map")

    def back(theta: dict[int, int], ren: dict[int, int]) -> dict[int, int]:
        return {old: theta[new] for old, new in ren.items()}

    t1, t1p = back(th1.mapping, m1), back(th1p.mapping, m1)
    t2, t2p = back(th2.mapping, m2), back(th2p.mapping, m2)
    alpha = {t2[x]: t1[x] for x in key}
    if len(alpha) != k:
        raise AlgorithmError("halves disagree on the shared cycle")

    def union(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
        out = dict(a)
        out.update({v: alpha[r] for v, r in b.items()})
        return out

    # t1p agrees with t1 on the shared cycle (the left piece's first cuff),
    # t2p agrees with t2 there; all three unions are well defined.
    for theta in (union(t1, t2), union(t1p, t2), union(t1, t2p)):
        pattern = {theta[v]: psi[v] for v in g.cuffs[0]}
        if any(pattern[theta[v]] != psi[v] for v in g.cuffs[1]):
            continue
        return ExtensionVerdict(True, _pullback(g, theta, psi))
    raise AlgorithmError("no alignment matches the far cuff pattern")


def decide_far_quadrangulation(
    g: EmbeddedGraph, psi: Coloring, *, budget: int = 64
) -> ExtensionVerdict:
    """Decide extension over a cylinder quadrangulation with distant cuffs.

    Two sufficient regimes are recognized. With no internal non-contractible
    cycle up to the larger cuff length and cuff distance at least their sum,
    the winding constraint alone decides. With equal cuff lengths k, no
    non-contractible cycle below k and distance at least 4k, the constraint
    decides except at extremal winding, where the chained case delegates and
    the unchained case extends through a slack cycle. Instances fitting
    neither regime are rejected.
    """
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("needs a cylinder graph")
    if not is_quadrangulation(g):
        raise PreconditionError("an internal face is not a quad")
    _check_cuff_precoloring(g, psi)
    k1, k2 = len(g.cuffs[0]), len(g.cuffs[1])
    dist = cuff_distance(g)

    loose_fail: list[str] = []
    internal = shortest_excluding_cuffs(g, max(k1, k2))
    if internal is not None:
        loose_fail.append(
            f"internal non-contractible cycle of length {internal}"
        )
    if dist < k1 + k2:
        loose_fail.append(f"cuff distance {dist} < {k1 + k2}")
    if not loose_fail:
        if not winding_constraint_satisfied(g, psi):
            return ExtensionVerdict(False, None, WINDING_CONSTRAINT)
        verdict = oracle_extend(g, psi, budget=budget)
        if not verdict:
            raise AlgorithmError("extension guaranteed under the loose regime")
        return verdict

    tight_fail: list[str] = []
    if k1 != k2:
        tight_fail.append("cuff lengths differ")
    else:
        shortest, _ = shortest_noncontractible(g)
        if shortest < k1:
            tight_fail.append(f"non-contractible cycle of length {shortest} < {k1}")
        if dist < 4 * k1:
            tight_fail.append(f"cuff distance {dist} < {4 * k1}")
    if tight_fail:
        raise PreconditionError(
            "neither regime applies: " + "; ".join(loose_fail + tight_fail)
        )
    k = k1
    if not winding_constraint_satisfied(g, psi):
        return ExtensionVerdict(False, None, WINDING_CONSTRAINT)
    if k % 3 != 0 or abs(winding_number(psi, g.cuffs[0])) != k // 3:
        verdict = oracle_extend(g, psi, budget=budget)
        if not verdict:
            raise AlgorithmError("extension guaranteed off the extremal winding")
        return verdict
    if is_feq(g):
        return decide_wide_feq(g, psi, budget=budget)
    keys = {cycle_key(c) for c in g.cuffs}
    for cand in noncontractible_cycles(g, k):
        if cand in keys:
            continue
        left, _ = subgraph_between(g, g.cuffs[0], cand)
        right, _ = subgraph_between(g, cand, g.cuffs[1])
        if not is_feq(left) and not is_feq(right):
            return construct_extension_nonfeq(g, cand, psi)
    return oracle_extend(g, psi, budget=budget)


def decide_extension(
    g: EmbeddedGraph, psi: Coloring, *, budget: int = 64
) -> ExtensionVerdict:
    """Route a cuff precoloring to the applicable decision procedure."""
    if (
        g.surface is Surface.CYLINDER
        and is_quadrangulation(g)
        and len(g.cuffs[0]) == len(g.cuffs[1])
    ):
        result = is_feq(g)
        if result:
            assert result.witness is not None
            if cuff_distance(g) >= 4 * result.witness.k:
                return decide_wide_feq(g, psi, budget=budget)
    return decide_far_quadrangulation(g, psi, budget=budget)


def is_critical(
    g: EmbeddedGraph, *, decision_budget: int = 64, enumeration_budget: int = 20
) -> bool:
    """Is every non-cuff edge load-bearing for some cuff precoloring?

    True when for each edge off the cuff walks some proper coloring of the
    cuff cycles extends to the graph without that edge but not to the graph
    itself. The cuff union C itself (the graph with no extra edges) does
    not count as critical.
    """
    if g.n > decision_budget:
        raise BudgetError(
            f"{g.n} vertices exceed the decision budget {decision_budget}"
        )
    cuff_vertices, cuff_edges = _cuff_structure(g)
    if len(cuff_vertices) > enumeration_budget:
        raise BudgetError(
            f"{len(cuff_vertices)} cuff vertices exceed the enumeration "
            f"budget {enumeration_budget}"
        )
    spare = sorted(set(g.edges) - cuff_edges)
    if not spare and set(cuff_vertices) == set(range(g.n)):
        return False

    colorings: list[Coloring] = []
    assignment: dict[int, int] = {}

    def rec(i: int) -> None:
        if i == len(cuff_vertices):
            colorings.append(dict(assignment))
            return
        v = cuff_vertices[i]
        taken = {
            assignment[w]
            for w in g.adjacency[v]
            if w in assignment and (min(v, w), max(v, w)) in cuff_edges
        }
        for c in COLORS:
            if c not in taken:
                assignment[v] = c
                rec(i + 1)
                del assignment[v]

    rec(0)
    full = [oracle_extend(g, psi, budget=decision_budget).extends for psi in colorings]
    for e in spare:
        pruned = PlainGraph(g.n, g.edges - {e})
        if not any(
            not full[i] and oracle_extend(pruned, psi, budget=decision_budget)
            for i, psi in enumerate(colorings)
        ):
            return False
    return True


def is_4_critical(g: PlainGraph, *, budget: int = 64) -> bool:
    """Not 3-colorable, but every proper subgraph is."""
    if g.n > budget:
        raise BudgetError(f"{g.n} vertices exceed the decision budget {budget}")
    if any(not g.adjacency[v] for v in range(g.n)):
        return False
    if oracle_extend(g, {}, budget=budget):
        return False
    for e in sorted(g.edges):
        if not oracle_extend(PlainGraph(g.n, g.edges - {e}), {}, budget=budget):
            return False
    return True
