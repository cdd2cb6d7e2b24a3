"""Embedded graphs on the disk and cylinder.

The central data model: a graph together with its facial walks and one or two
boundary (cuff) walks, all stored with a consistent orientation so that every
edge is traversed exactly once in each direction across the full collection
of walks. Includes validation, canonical text serialization, and the
region-extraction surgery used by the decision procedures.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

from .errors import EmgParseError, PreconditionError, SurgeryError

Edge = tuple[int, int]
Walk = tuple[int, ...]
Coloring = dict[int, int]


class Surface(str, Enum):
    DISK = "disk"
    CYLINDER = "cylinder"


def edge_key(u: int, v: int) -> Edge:
    """Normalized undirected edge: endpoints in increasing order."""
    return (u, v) if u <= v else (v, u)


def walk_steps(walk: Walk) -> list[tuple[int, int]]:
    """Directed steps of a closed walk, including the wrap-around step."""
    n = len(walk)
    return [(walk[i], walk[(i + 1) % n]) for i in range(n)]


def walk_edges(walk: Walk) -> set[Edge]:
    return {edge_key(u, v) for u, v in walk_steps(walk)}


def canonical_rotation(walk: Walk) -> Walk:
    """Rotate a closed walk so it starts at its smallest vertex.

    Orientation is preserved. Among occurrences of the smallest vertex the
    lexicographically least rotation is chosen, so the result is unique.
    """
    if not walk:
        return walk
    m = min(walk)
    best: Walk | None = None
    for i, v in enumerate(walk):
        if v == m:
            cand = walk[i:] + walk[:i]
            if best is None or cand < best:
                best = cand
    assert best is not None
    return best


def cycle_key(walk: Walk) -> Walk:
    """Orientation-free canonical form of a closed walk.

    Used to compare cycles as vertex sequences regardless of direction or
    starting point.
    """
    fwd = canonical_rotation(walk)
    rev = canonical_rotation(tuple(reversed(walk)))
    return min(fwd, rev)


@dataclass(frozen=True)
class PlainGraph:
    """An abstract graph without an embedding: vertices 0..n-1 and edges."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u > v:
                raise ValueError(f"edge ({u}, {v}) not normalized")

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adjacency[v])


@dataclass(frozen=True)
class EmbeddedGraph:
    """A graph embedded in the disk or cylinder with explicit walks.

    `faces` are the internal facial walks; `cuffs` are the boundary walks
    (one for the disk, two for the cylinder). All walks are stored in the
    consistent orientation: each edge appears exactly once as (u, v) and
    exactly once as (v, u) across faces + cuffs. Walks are canonically
    rotated on construction; faces are additionally sorted, while the cuff
    order is preserved (the two cuffs are semantically distinct).
    """

    surface: Surface
    n: int
    edges: frozenset[Edge]
    faces: tuple[Walk, ...]
    cuffs: tuple[Walk, ...]

    def __post_init__(self) -> None:
        faces = tuple(sorted(canonical_rotation(f) for f in self.faces))
        cuffs = tuple(canonical_rotation(c) for c in self.cuffs)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "cuffs", cuffs)

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adjacency[v])

    @cached_property
    def walks(self) -> tuple[Walk, ...]:
        """All walks: faces first, then cuffs. Indices into this tuple are
        used as dual-graph node ids; the cuff positions are the hole ids."""
        return self.faces + self.cuffs

    @cached_property
    def hole_ids(self) -> tuple[int, ...]:
        return tuple(range(len(self.faces), len(self.walks)))

    @cached_property
    def step_to_walk(self) -> dict[tuple[int, int], int]:
        """Map each directed step (u, v) to the index of the walk using it."""
        out: dict[tuple[int, int], int] = {}
        for i, w in enumerate(self.walks):
            for s in walk_steps(w):
                if s in out:
                    raise ValueError(f"step {s} traversed twice")
                out[s] = i
        return out

    @cached_property
    def sigma(self) -> dict[int, dict[int, int]]:
        """Rotation at each vertex: sigma[v][a] = b when some walk has the
        corner (a, v, b). Encodes the cyclic order of edges around v."""
        rot: dict[int, dict[int, int]] = {v: {} for v in range(self.n)}
        for w in self.walks:
            k = len(w)
            for i in range(k):
                a, v, b = w[i - 1], w[i], w[(i + 1) % k]
                rot[v][a] = b
        return rot

    def cuff_vertices(self) -> set[int]:
        out: set[int] = set()
        for c in self.cuffs:
            out.update(c)
        return out

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def validate(g: EmbeddedGraph) -> list[str]:
    """Check structural invariants; return human-readable violations.

    An empty list means the embedding is valid. Checks: edge sanity, cuff
    count for the surface, walk steps lying on edges, the once-per-direction
    traversal condition, cuffs being simple cycles of length >= 3, the Euler
    relation for the surface, connectivity, and single-cycle vertex links.
    """
    problems: list[str] = []
    for u, v in g.edges:
        if u == v:
            problems.append(f"loop at vertex {u}")
        if not (0 <= u < g.n and 0 <= v < g.n):
            problems.append(f"edge ({u}, {v}) out of range")
        if u > v:
            problems.append(f"edge ({u}, {v}) not normalized")
    expected_cuffs = 1 if g.surface is Surface.DISK else 2
    if len(g.cuffs) != expected_cuffs:
        problems.append(
            f"{g.surface.value} needs {expected_cuffs} cuff(s), got {len(g.cuffs)}"
        )
    for w in g.walks:
        if len(w) < 3:
            problems.append(f"walk {w} shorter than 3")
        for u, v in walk_steps(w):
            if edge_key(u, v) not in g.edges:
                problems.append(f"walk step ({u}, {v}) is not an edge")
    if problems:
        return problems

    # Once per direction, across all walks together.
    seen: dict[tuple[int, int], int] = {}
    for w in g.walks:
        for s in walk_steps(w):
            seen[s] = seen.get(s, 0) + 1
    for u, v in g.edges:
        for s in ((u, v), (v, u)):
            c = seen.pop(s, 0)
            if c != 1:
                problems.append(f"step {s} traversed {c} times (want 1)")
    for s, c in seen.items():
        problems.append(f"step {s} traversed {c} times on a non-edge")

    for c in g.cuffs:
        if len(set(c)) != len(c):
            problems.append(f"cuff {c} is not a simple cycle")

    euler = g.n - len(g.edges) + len(g.faces)
    want = 1 if g.surface is Surface.DISK else 0
    if euler != want:
        problems.append(
            f"Euler count V-E+F = {euler}, want {want} for {g.surface.value}"
        )

    if g.n > 0:
        seen_v = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in g.adjacency[v]:
                if u not in seen_v:
                    seen_v.add(u)
                    stack.append(u)
        if len(seen_v) != g.n:
            problems.append(f"graph is disconnected ({len(seen_v)} of {g.n} reached)")

    if problems:
        return problems

    # Vertex links: the corner rotation at each vertex must be one cycle.
    # The Euler count alone cannot see a vertex pinched between two regions.
    for v in range(g.n):
        rot = g.sigma[v]
        deg = g.degree(v)
        if len(rot) != deg:
            problems.append(f"vertex {v}: rotation covers {len(rot)} of {deg} edges")
            continue
        if deg == 0:
            problems.append(f"vertex {v} is isolated")
            continue
        start = next(iter(rot))
        cur = rot[start]
        count = 1
        while cur != start:
            cur = rot[cur]
            count += 1
            if count > deg:
                break
        if count != deg:
            problems.append(f"vertex {v}: link is not a single cycle")
    return problems


def validated(g: EmbeddedGraph) -> EmbeddedGraph:
    problems = validate(g)
    if problems:
        raise SurgeryError("invalid embedding: " + "; ".join(problems))
    return g


def is_quadrangulation(g: EmbeddedGraph) -> bool:
    """True when every internal face has length 4."""
    return all(len(f) == 4 for f in g.faces)


def is_triangle_free(g: PlainGraph | EmbeddedGraph) -> bool:
    adj = g.adjacency
    for u, v in g.edges:
        if adj[u] & adj[v]:
            return False
    return True


# ---------------------------------------------------------------------------
# Text formats


def _fmt_walk(kind: str, walk: Walk) -> str:
    return kind + " " + " ".join(str(v) for v in walk)


def serialize_emg(g: EmbeddedGraph) -> str:
    """Canonical one-graph text form.

    Deterministic: edges sorted, faces canonically rotated and sorted, cuffs
    canonically rotated in stored order. Ends with a newline.
    """
    lines = [f"emg 1 {g.surface.value}", f"vertices {g.n}"]
    for u, v in sorted(g.edges):
        lines.append(f"edge {u} {v}")
    for f in g.faces:
        lines.append(_fmt_walk("face", f))
    for c in g.cuffs:
        lines.append(_fmt_walk("cuff", c))
    return "\n".join(lines) + "\n"


def serialize_plain(g: PlainGraph) -> str:
    lines = ["graph 1", f"vertices {g.n}"]
    for u, v in sorted(g.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield i, line


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise EmgParseError(f"line {lineno}: expected integer, got {tok!r}") from None


def parse_emg(text: str) -> EmbeddedGraph:
    """Parse the embedded-graph text form; errors carry line numbers."""
    it = _content_lines(text)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise EmgParseError("line 1: empty input") from None
    parts = header.split()
    if len(parts) != 3 or parts[0] != "emg" or parts[1] != "1":
        raise EmgParseError(f"line {lineno}: expected 'emg 1 <surface>'")
    try:
        surface = Surface(parts[2])
    except ValueError:
        raise EmgParseError(f"line {lineno}: unknown surface {parts[2]!r}") from None

    n: int | None = None
    edges: set[Edge] = set()
    faces: list[Walk] = []
    cuffs: list[Walk] = []
    for lineno, line in it:
        parts = line.split()
        kw = parts[0]
        if kw == "vertices":
            if n is not None:
                raise EmgParseError(f"line {lineno}: duplicate vertices line")
            if len(parts) != 2:
                raise EmgParseError(f"line {lineno}: expected 'vertices <n>'")
            n = _parse_int(parts[1], lineno)
            if n < 0:
                raise EmgParseError(f"line {lineno}: negative vertex count")
        elif kw == "edge":
            if n is None:
                raise EmgParseError(f"line {lineno}: edge before vertices line")
            if len(parts) != 3:
                raise EmgParseError(f"line {lineno}: expected 'edge <u> <v>'")
            u = _parse_int(parts[1], lineno)
            v = _parse_int(parts[2], lineno)
            if u == v:
                raise EmgParseError(f"line {lineno}: loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise EmgParseError(f"line {lineno}: edge endpoint out of range")
            e = edge_key(u, v)
            if e in edges:
                raise EmgParseError(f"line {lineno}: duplicate edge {e}")
            edges.add(e)
        elif kw in ("face", "cuff"):
            if n is None:
                raise EmgParseError(f"line {lineno}: {kw} before vertices line")
            if len(parts) < 4:
                raise EmgParseError(f"line {lineno}: {kw} walk shorter than 3")
            walk = tuple(_parse_int(t, lineno) for t in parts[1:])
            for v in walk:
                if not (0 <= v < n):
                    raise EmgParseError(f"line {lineno}: walk vertex {v} out of range")
            (faces if kw == "face" else cuffs).append(walk)
        else:
            raise EmgParseError(f"line {lineno}: unknown keyword {kw!r}")
    if n is None:
        raise EmgParseError("line 1: missing vertices line")
    g = EmbeddedGraph(surface, n, frozenset(edges), tuple(faces), tuple(cuffs))
    problems = validate(g)
    if problems:
        raise EmgParseError("invalid embedding: " + "; ".join(problems))
    return g


def parse_plain(text: str) -> PlainGraph:
    it = _content_lines(text)
    try:
        lineno, header = next(it)
    except StopIteration:
        raise EmgParseError("line 1: empty input") from None
    if header.split() != ["graph", "1"]:
        raise EmgParseError(f"line {lineno}: expected 'graph 1'")
    n: int | None = None
    edges: set[Edge] = set()
    for lineno, line in it:
        parts = line.split()
        kw = parts[0]
        if kw == "vertices":
            if n is not None:
                raise EmgParseError(f"line {lineno}: duplicate vertices line")
            if len(parts) != 2:
                raise EmgParseError(f"line {lineno}: expected 'vertices <n>'")
            n = _parse_int(parts[1], lineno)
        elif kw == "edge":
            if n is None:
                raise EmgParseError(f"line {lineno}: edge before vertices line")
            if len(parts) != 3:
                raise EmgParseError(f"line {lineno}: expected 'edge <u> <v>'")
            u = _parse_int(parts[1], lineno)
            v = _parse_int(parts[2], lineno)
            if u == v:
                raise EmgParseError(f"line {lineno}: loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise EmgParseError(f"line {lineno}: edge endpoint out of range")
            e = edge_key(u, v)
            if e in edges:
                raise EmgParseError(f"line {lineno}: duplicate edge {e}")
            edges.add(e)
        else:
            raise EmgParseError(f"line {lineno}: unknown keyword {kw!r}")
    if n is None:
        raise EmgParseError("line 1: missing vertices line")
    return PlainGraph(n, frozenset(edges))


def parse_graph(text: str) -> EmbeddedGraph | PlainGraph:
    """Dispatch on the header line of either text format."""
    for _, line in _content_lines(text):
        if line.startswith("emg"):
            return parse_emg(text)
        if line.startswith("graph"):
            return parse_plain(text)
        break
    raise EmgParseError("line 1: unrecognized header")


def sha256_of(g: EmbeddedGraph | PlainGraph) -> str:
    text = serialize_emg(g) if isinstance(g, EmbeddedGraph) else serialize_plain(g)
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Region extraction


def _dual_components(
    g: EmbeddedGraph, blocked: set[Edge]
) -> tuple[dict[int, int], dict[int, int]]:
    """Union the walk indices across every non-blocked edge.

    Two walks are joined when some edge not in `blocked` is traversed by
    both (once in each direction). Returns (component id per walk index,
    component sizes keyed by id).
    """
    parent = list(range(len(g.walks)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for u, v in g.edges:
        if (u, v) in blocked or edge_key(u, v) in blocked:
            continue
        union(g.step_to_walk[(u, v)], g.step_to_walk[(v, u)])
    comp = {i: find(i) for i in range(len(g.walks))}
    sizes: dict[int, int] = {}
    for c in comp.values():
        sizes[c] = sizes.get(c, 0) + 1
    return comp, sizes


def _check_separating(g: EmbeddedGraph, cyc: Walk, name: str) -> None:
    """A cycle on the cylinder separates the two holes iff non-contractible."""
    blocked = walk_edges(cyc)
    comp, _ = _dual_components(g, blocked)
    h1, h2 = g.hole_ids
    if comp[h1] == comp[h2]:
        raise PreconditionError(f"cycle {name} {cyc} is contractible")


def subgraph_between(
    g: EmbeddedGraph, a: Walk, b: Walk
) -> tuple[EmbeddedGraph, dict[int, int]]:
    """Cut the cylinder along two non-contractible cycles and keep the middle.

    `a` and `b` are non-contractible cycles given as closed vertex walks
    (any rotation/orientation); `a` must lie on the first-cuff side. The
    result is the sub-cylinder between them, with `a` as its first cuff and
    `b` as its second, relabeled to dense vertex ids. Returns the piece and
    the old-to-new vertex map.

    The two cycles may share vertices and edges (touching or pinched
    configurations are legal as long as the middle region is non-empty on
    no side crossings); `a` == `b` as edge sets yields the degenerate bare
    cycle.
    """
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("subgraph_between needs a cylinder")
    _check_separating(g, a, "a")
    _check_separating(g, b, "b")
    h1, h2 = g.hole_ids
    a_edges = walk_edges(a)
    b_edges = walk_edges(b)

    # Nesting: b must not lie strictly inside the hole-1 side of a, and
    # symmetrically. Blocked by a, every b-edge's two walk sides must not
    # both fall in hole 1's component (and vice versa).
    comp_a, _ = _dual_components(g, a_edges)
    for u, v in b_edges - a_edges:
        if comp_a[g.step_to_walk[(u, v)]] == comp_a[h1] and comp_a[
            g.step_to_walk[(v, u)]
        ] == comp_a[h1]:
            raise PreconditionError("cycle b lies on the first-cuff side of a")
    comp_b, _ = _dual_components(g, b_edges)
    for u, v in a_edges - b_edges:
        if comp_b[g.step_to_walk[(u, v)]] == comp_b[h2] and comp_b[
            g.step_to_walk[(v, u)]
        ] == comp_b[h2]:
            raise PreconditionError("cycle a lies on the second-cuff side of b")

    if a_edges == b_edges:
        # Degenerate piece: the bare cycle, both cuffs tracing it oppositely.
        verts = sorted(set(a))
        ren = {v: i for i, v in enumerate(verts)}
        wa = canonical_rotation(tuple(ren[v] for v in a))
        piece = EmbeddedGraph(
            Surface.CYLINDER,
            len(verts),
            frozenset(edge_key(ren[u], ren[v]) for u, v in a_edges),
            (),
            (wa, tuple(reversed(wa))),
        )
        return validated(piece), ren

    blocked = a_edges | b_edges
    comp, _ = _dual_components(g, blocked)
    middle_faces = [
        i
        for i in range(len(g.faces))
        if comp[i] != comp[h1] and comp[i] != comp[h2]
    ]

    # Orient each derived cuff against the middle: the stored direction of
    # the piece's cuff at a given edge is the one whose opposite step lies
    # on a middle face (the middle sees the edge from inside).
    def orient(cyc: Walk, own_edges: set[Edge], other_edges: set[Edge]) -> Walk:
        votes_fwd = 0
        votes_rev = 0
        for u, v in walk_steps(cyc):
            if edge_key(u, v) in other_edges:
                continue
            w_fwd = g.step_to_walk[(u, v)]
            w_rev = g.step_to_walk[(v, u)]
            fwd_in = w_fwd < len(g.faces) and comp[w_fwd] not in (comp[h1], comp[h2])
            rev_in = w_rev < len(g.faces) and comp[w_rev] not in (comp[h1], comp[h2])
            if rev_in and not fwd_in:
                votes_fwd += 1
            elif fwd_in and not rev_in:
                votes_rev += 1
            else:
                raise SurgeryError(
                    f"cycle edge ({u}, {v}) does not border the middle region"
                )
        if votes_fwd and votes_rev:
            raise SurgeryError(f"cycle {cyc} is inconsistently oriented vs the middle")
        if not (votes_fwd or votes_rev):
            raise SurgeryError(f"cycle {cyc} has no private edge on the middle")
        return cyc if votes_fwd else tuple(reversed(cyc))

    cuff_a = orient(a, a_edges, b_edges)
    cuff_b = orient(b, b_edges, a_edges)

    # Shared edges must be traversed oppositely by the two derived cuffs.
    steps_a = set(walk_steps(cuff_a))
    for u, v in walk_steps(cuff_b):
        if edge_key(u, v) in a_edges & b_edges and (v, u) not in steps_a:
            raise SurgeryError("shared edge not opposed by the two cuffs")

    verts: set[int] = set()
    for i in middle_faces:
        verts.update(g.faces[i])
    verts.update(a)
    verts.update(b)
    order = sorted(verts)
    ren = {v: i for i, v in enumerate(order)}

    piece_edges: set[Edge] = set()
    for i in middle_faces:
        for u, v in walk_steps(g.faces[i]):
            piece_edges.add(edge_key(ren[u], ren[v]))
    for u, v in a_edges | b_edges:
        piece_edges.add(edge_key(ren[u], ren[v]))

    piece = EmbeddedGraph(
        Surface.CYLINDER,
        len(order),
        frozenset(piece_edges),
        tuple(tuple(ren[v] for v in g.faces[i]) for i in middle_faces),
        (
            tuple(ren[v] for v in cuff_a),
            tuple(ren[v] for v in cuff_b),
        ),
    )
    return validated(piece), ren
