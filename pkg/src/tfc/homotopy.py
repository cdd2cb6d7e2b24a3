"""Contractibility machinery for the cylinder, plus the two local surgeries.

Homotopy on the cylinder reduces to integer homology: a fixed cocycle built
from one cuff-to-cuff dual path classifies every cycle by its signed
crossing sum (0 = contractible). Also provides shortest non-contractible
cycles, cuff distance, bounded cycle enumeration, vertex identification
across a quad face, and cutting the cylinder along a path into a disk.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .embedding import (
    Edge,
    EmbeddedGraph,
    Surface,
    Walk,
    cycle_key,
    edge_key,
    validated,
    walk_steps,
)
from .errors import AlgorithmError, PreconditionError, SurgeryError


@dataclass(frozen=True)
class Cocycle:
    """Signed edge crossings of one dual path between the two holes.

    crossing[e] is the contribution of traversing e from its smaller to its
    larger endpoint; the reverse traversal contributes the negative. The sum
    along any internal face walk is 0, so the sum along a cycle depends only
    on its homotopy class and is nonzero exactly for non-contractible ones.
    """

    crossing: dict[Edge, int]

    def step_value(self, u: int, v: int) -> int:
        c = self.crossing.get(edge_key(u, v), 0)
        return c if u <= v else -c

    def sum_along(self, walk: Walk) -> int:
        return sum(self.step_value(u, v) for u, v in walk_steps(walk))


def build_cocycle(g: EmbeddedGraph) -> Cocycle:
    """Build a crossing cocycle from a dual path between the two holes."""
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("disk has no non-contractible cycles")
    h1, h2 = g.hole_ids
    # BFS in the dual: walks are nodes, shared edges connect them.
    parent: dict[int, tuple[int, tuple[int, int]]] = {}
    seen = {h1}
    queue = deque([h1])
    while queue:
        w = queue.popleft()
        if w == h2:
            break
        for u, v in walk_steps(g.walks[w]):
            other = g.step_to_walk[(v, u)]
            if other not in seen:
                seen.add(other)
                parent[other] = (w, (u, v))
                queue.append(other)
    if h2 not in seen:
        raise AlgorithmError("dual graph does not connect the two holes")
    crossing: dict[Edge, int] = {}
    node = h2
    while node != h1:
        prev, (u, v) = parent[node]
        # The path crosses edge {u,v} from the walk traversing (u,v) into
        # the walk traversing (v,u); that orientation carries value +1.
        crossing[edge_key(u, v)] = 1 if u <= v else -1
        node = prev
    return Cocycle(crossing)


def is_contractible(g: EmbeddedGraph, cocycle: Cocycle, c: Walk) -> bool:
    return cocycle.sum_along(c) == 0


def cuff_distance(g: EmbeddedGraph) -> int:
    """Minimum graph distance between the two cuff walks (0 when they meet)."""
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("cuff_distance needs a cylinder")
    sources = set(g.cuffs[0])
    targets = set(g.cuffs[1])
    if sources & targets:
        return 0
    dist = {v: 0 for v in sources}
    queue = deque(sorted(sources))
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                if w in targets:
                    return dist[w]
                queue.append(w)
    raise AlgorithmError("cuffs not connected")


def shortest_noncontractible(g: EmbeddedGraph) -> tuple[int, Walk]:
    """Length and canonical witness of a shortest non-contractible cycle.

    Lengths come from BFS in the cover induced by the cocycle (states are
    vertex/crossing-sum pairs); the witness is then the lexicographically
    least canonical cycle of that exact length, taken from the exhaustive
    enumeration.
    """
    cocycle = build_cocycle(g)
    best = min(len(c) for c in g.cuffs)
    for root in range(g.n):
        dist: dict[tuple[int, int], int] = {(root, 0): 0}
        queue = deque([(root, 0)])
        while queue:
            u, c = queue.popleft()
            d = dist[(u, c)]
            if d + 1 > best:
                continue
            for w in g.neighbors(u):
                c2 = c + cocycle.step_value(u, w)
                if w == root and c2 != 0:
                    best = min(best, d + 1)
                    continue
                if (w, c2) not in dist:
                    dist[(w, c2)] = d + 1
                    queue.append((w, c2))
    witnesses = noncontractible_cycles(g, best, cocycle)
    if not witnesses:
        raise AlgorithmError(f"no simple non-contractible cycle at length {best}")
    return best, witnesses[0]


def noncontractible_cycles(
    g: EmbeddedGraph, length: int, cocycle: Cocycle | None = None
) -> list[Walk]:
    """All simple non-contractible cycles of exactly the given length.

    Exhaustive rooted DFS; each cycle is anchored at its smallest vertex and
    reported once in canonical form, sorted. Distance-to-root pruning keeps
    this viable at desk scale.
    """
    if cocycle is None:
        cocycle = build_cocycle(g)
    out: set[Walk] = set()
    for root in range(g.n):
        # Plain BFS distances back to the root, for pruning.
        dist = {root: 0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)

        path = [root]
        in_path = {root}

        def dfs(u: int, c: int) -> None:
            remaining = length - len(path)
            if remaining == 0:
                if (
                    path[1] < path[-1]
                    and root in g.adjacency[u]
                    and c + cocycle.step_value(u, root) != 0
                ):
                    out.add(cycle_key(tuple(path)))
                return
            for w in g.neighbors(u):
                if w <= root or w in in_path:
                    continue
                if dist.get(w, length + 1) > remaining:
                    continue
                path.append(w)
                in_path.add(w)
                dfs(w, c + cocycle.step_value(u, w))
                path.pop()
                in_path.remove(w)

        if length >= 3:
            dfs(root, 0)
    return sorted(out)


def shortest_excluding_cuffs(g: EmbeddedGraph, cap: int) -> int | None:
    """Length of the shortest non-contractible cycle distinct from both cuffs.

    Only lengths up to `cap` are examined; returns None when every such
    cycle is longer. Distinctness is as cycles (edge sets), so a second
    traversal of a cuff does not count.
    """
    cocycle = build_cocycle(g)
    keys = {cycle_key(c) for c in g.cuffs}
    for length in range(3, cap + 1):
        if any(
            c not in keys for c in noncontractible_cycles(g, length, cocycle)
        ):
            return length
    return None


def identify_across_quad(
    g: EmbeddedGraph, face: Walk, pair: tuple[int, int]
) -> tuple[EmbeddedGraph, dict[int, int]]:
    """Merge the two opposite corners `pair` of an internal quad face.

    The face collapses: its two edge pairs are zipped together and any
    resulting parallel edges coalesce. Returns the relabeled graph and the
    old-to-new vertex map. Raises if the corners are adjacent (a loop would
    form) or if the merge cannot produce a valid embedding.
    """
    key = cycle_key(face)
    stored = next((f for f in g.faces if cycle_key(f) == key), None)
    if stored is None:
        raise PreconditionError(f"no internal face {face}")
    if len(stored) != 4:
        raise PreconditionError(f"face {stored} is not a quad")
    z2, z4 = pair
    if z2 not in stored or z4 not in stored:
        raise PreconditionError(f"pair {pair} not on face {stored}")
    i2 = stored.index(z2)
    if stored[(i2 + 2) % 4] != z4:
        raise PreconditionError(f"pair {pair} is not opposite on face {stored}")
    if z4 in g.adjacency[z2]:
        raise SurgeryError(f"identifying adjacent vertices {pair} creates a loop")

    keep, gone = min(pair), max(pair)
    ren: dict[int, int] = {}
    for v in range(g.n):
        if v == gone:
            continue
        ren[v] = v - (1 if v > gone else 0)
    ren[gone] = ren[keep]

    faces = tuple(
        tuple(ren[v] for v in f) for f in g.faces if cycle_key(f) != key
    )
    cuffs = tuple(tuple(ren[v] for v in c) for c in g.cuffs)
    edges = frozenset(edge_key(ren[u], ren[v]) for u, v in g.edges)
    merged = EmbeddedGraph(g.surface, g.n - 1, edges, faces, cuffs)
    return validated(merged), ren


def cut_along_path(
    g: EmbeddedGraph, path: Walk
) -> tuple[EmbeddedGraph, dict[int, int]]:
    """Cut the cylinder open along a cuff-to-cuff path, yielding a disk.

    The path is duplicated: original vertices keep one bank's edges, fresh
    copies (returned in the map) take the other bank, decided by the corner
    rotation at each path vertex. The disk's boundary is cuff1-arc, copied
    path, cuff2-arc, original path.
    """
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("cut_along_path needs a cylinder")
    if len(path) < 2:
        raise PreconditionError("path must have at least one edge")
    if len(set(path)) != len(path):
        raise PreconditionError("path must be simple")
    for u, v in zip(path, path[1:]):
        if v not in g.adjacency[u]:
            raise PreconditionError(f"path step ({u}, {v}) is not an edge")
    cuff1, cuff2 = g.cuffs
    set1, set2 = set(cuff1), set(cuff2)
    if path[0] in set2 and path[-1] in set1:
        path = tuple(reversed(path))
    if not (path[0] in set1 and path[-1] in set2):
        raise PreconditionError("path endpoints must lie on distinct cuffs")
    for v in path[1:-1]:
        if v in set1 or v in set2:
            raise PreconditionError(f"path interior vertex {v} lies on a cuff")
    t = len(path) - 1
    v0, vt = path[0], path[t]

    def walk_around(c: Walk, v: int) -> tuple[int, int]:
        i = c.index(v)
        return c[i - 1], c[(i + 1) % len(c)]

    a, b = walk_around(cuff1, v0)
    cc, d = walk_around(cuff2, vt)

    # Right-bank corners per path vertex, as (prev, next) pairs.
    right_corners: dict[int, set[tuple[int, int]]] = {}
    right_neighbors: dict[int, set[int]] = {}

    def collect(v: int, start: int, stop_at: int, stop_inclusive: bool) -> None:
        rot = g.sigma[v]
        corners: set[tuple[int, int]] = set()
        nbrs: set[int] = set()
        u = start
        for _ in range(len(rot) + 1):
            if not stop_inclusive and u == stop_at:
                break
            corners.add((u, rot[u]))
            nbrs.add(u)
            nbrs.add(rot[u])
            if stop_inclusive and rot[u] == stop_at:
                break
            u = rot[u]
        else:
            raise AlgorithmError(f"rotation walk at {v} never reached its stop")
        right_corners[v] = corners
        right_neighbors[v] = nbrs

    for i in range(1, t):
        collect(path[i], start=path[i + 1], stop_at=path[i - 1], stop_inclusive=False)
    collect(v0, start=path[1], stop_at=a, stop_inclusive=False)
    collect(vt, start=d, stop_at=path[t - 1], stop_inclusive=True)

    copy = {path[i]: g.n + i for i in range(t + 1)}
    on_path = set(path)
    path_edges = {edge_key(u, v) for u, v in zip(path, path[1:])}

    def attach(v: int, other: int) -> int:
        if v in on_path and other in right_neighbors[v]:
            return copy[v]
        return v

    edges: set[Edge] = set()
    for u, v in g.edges:
        if (u, v) in path_edges:
            continue
        edges.add(edge_key(attach(u, v), attach(v, u)))
    for u, v in zip(path, path[1:]):
        edges.add(edge_key(u, v))
        edges.add(edge_key(copy[u], copy[v]))

    def rewrite(face: Walk) -> Walk:
        k = len(face)
        out = []
        for p, v in enumerate(face):
            if v in on_path and (face[p - 1], face[(p + 1) % k]) in right_corners[v]:
                out.append(copy[v])
            else:
                out.append(v)
        return tuple(out)

    faces = tuple(rewrite(f) for f in g.faces)

    def arc(c: Walk, frm: int, to: int) -> list[int]:
        i = c.index(frm)
        out = [c[i]]
        while c[i] != to:
            i = (i + 1) % len(c)
            out.append(c[i])
        return out

    boundary = (
        [v0]
        + arc(cuff1, b, a)
        + [copy[v] for v in path]
        + arc(cuff2, d, cc)
        + [vt]
        + [path[i] for i in range(t - 1, 0, -1)]
    )
    disk = EmbeddedGraph(
        Surface.DISK,
        g.n + t + 1,
        frozenset(edges),
        faces,
        (tuple(boundary),),
    )
    return validated(disk), copy


def flip_cuffs(g: EmbeddedGraph) -> EmbeddedGraph:
    """Swap the roles of the two cuffs (same embedding, holes renamed)."""
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("flip_cuffs needs a cylinder")
    return EmbeddedGraph(
        g.surface, g.n, g.edges, g.faces, (g.cuffs[1], g.cuffs[0])
    )
