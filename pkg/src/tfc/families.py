"""Instance generators.

Cylinder grids and chained quadrangulations exercise the homomorphism and
decomposition machinery; the tower of 4-critical graphs, its reduced
cylinder form and the patched/framed variants exercise criticality; the
near-quadrangulations carry one pentagon per subdivided cuff edge.
"""

from __future__ import annotations

from itertools import combinations

from .embedding import (
    Edge,
    EmbeddedGraph,
    PlainGraph,
    Surface,
    Walk,
    edge_key,
    validate,
    validated,
    walk_edges,
)
from .errors import AlgorithmError, PreconditionError

Pair = tuple[int, int]
FrameOptions = tuple[tuple[bool, bool], tuple[bool, bool]]


def gen_cylinder_grid(k: int, m: int) -> EmbeddedGraph:
    """Cartesian product of a k-cycle with an m-vertex path, on the cylinder.

    Vertex j*k + i sits on level j. Level 0 is the first cuff (walked
    against the level orientation), level m-1 the second. m = 1 gives the
    bare k-cycle with both cuffs tracing it.
    """
    if k < 3:
        raise PreconditionError("cycle length must be at least 3")
    if m < 1:
        raise PreconditionError("path must have at least one vertex")
    edges: set[Edge] = set()
    for j in range(m):
        for i in range(k):
            edges.add(edge_key(j * k + i, j * k + (i + 1) % k))
        if j + 1 < m:
            for i in range(k):
                edges.add(edge_key(j * k + i, (j + 1) * k + i))
    faces = tuple(
        (
            j * k + i,
            j * k + (i + 1) % k,
            (j + 1) * k + (i + 1) % k,
            (j + 1) * k + i,
        )
        for j in range(m - 1)
        for i in range(k)
    )
    cuff1 = (0,) + tuple(range(k - 1, 0, -1))
    cuff2 = tuple((m - 1) * k + i for i in range(k))
    return validated(
        EmbeddedGraph(Surface.CYLINDER, k * m, frozenset(edges), faces, (cuff1, cuff2))
    )


def gen_feq_chain(t: int) -> EmbeddedGraph:
    """Chain of t quad gadgets whose triangles force the extension pattern.

    Each gadget contributes two quads between consecutive triangles of the
    chain; gluing is by a rotation of the shared triangle, so the cuffs end
    up t - 1 apart. 2t + 3 vertices.
    """
    if t < 1:
        raise PreconditionError("chain needs at least one link")
    edges: set[Edge] = {(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (2, 3)}
    faces: list[Walk] = [(3, 4, 0, 2), (2, 1, 0, 3)]
    end = (0, 4, 3)
    n = 5
    for _ in range(t - 1):
        a, e, d = end
        edges |= {
            edge_key(e, n),
            edge_key(n, n + 1),
            edge_key(n + 1, e),
            edge_key(d, n),
        }
        faces.append((n, n + 1, e, d))
        faces.append((d, a, e, n))
        end = (e, n + 1, n)
        n += 2
    return validated(
        EmbeddedGraph(
            Surface.CYLINDER, n, frozenset(edges), tuple(faces), ((0, 1, 2), end)
        )
    )


def _double_triangle_edges(n: int, edges: frozenset[Edge]) -> list[Edge]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return [e for e in sorted(edges) if len(adj[e[0]] & adj[e[1]]) >= 2]


def gen_thomas_walls(n: int) -> tuple[PlainGraph, tuple[Pair, ...]]:
    """n-th graph of the 4-critical tower, with its interface pairs.

    Starts from K4; each step picks the least edge lying in two triangles,
    removes it and grafts a fresh triangle across its ends. For n >= 2 the
    two returned pairs are the present diagonals of the two end squares
    (equivalently, the edges lying in two triangles).
    """
    if n < 1:
        raise PreconditionError("the tower starts at 1")
    edges: set[Edge] = {(u, v) for u, v in combinations(range(4), 2)}
    nv = 4
    for _ in range(n - 1):
        doubled = _double_triangle_edges(nv, frozenset(edges))
        if not doubled:
            raise AlgorithmError("no edge lies in two triangles")
        u, v = doubled[0]
        x, y, z = nv, nv + 1, nv + 2
        edges.remove((u, v))
        edges |= {
            edge_key(u, x),
            edge_key(x, y),
            edge_key(x, z),
            edge_key(v, y),
            edge_key(v, z),
            edge_key(y, z),
        }
        nv += 3
    g = PlainGraph(nv, frozenset(edges))
    if n == 1:
        return g, ()
    pairs = _double_triangle_edges(nv, g.edges)
    if len(pairs) != 2:
        raise AlgorithmError(f"expected two interface pairs, found {pairs}")
    return g, tuple(pairs)


Record = tuple[int, int, int, int]


def _grow_record(
    rec: Record, nv: int, edges: set[Edge], faces: list[Walk]
) -> tuple[Record, int]:
    # rec = (u, v, a, b): the square (u, a, v, b) whose diagonal uv is the
    # absent interface edge. Grafting x, y, z across it turns the square
    # into two pentagons and hands the interface role to (y, z).
    u, v, a, b = rec
    x, y, z = nv, nv + 1, nv + 2
    edges |= {
        edge_key(u, x),
        edge_key(x, y),
        edge_key(x, z),
        edge_key(v, y),
        edge_key(v, z),
    }
    faces.append((x, y, v, a, u))
    faces.append((x, u, b, v, z))
    return (y, z, v, x), nv + 3


def gen_reduced_tw(
    n: int,
) -> tuple[PlainGraph | EmbeddedGraph, tuple[Pair, ...]]:
    """Tower graph minus its two interface edges, embedded for n >= 3.

    The interface squares become the two cuffs (length 4); every internal
    face is a pentagon. n = 2 is too small to embed this way and comes back
    as a plain graph. Pairs are aligned with the cuffs.
    """
    if n < 2:
        raise PreconditionError("the reduced tower starts at 2")
    if n == 2:
        tw, pairs = gen_thomas_walls(2)
        return PlainGraph(tw.n, tw.edges - set(pairs)), pairs
    edges: set[Edge] = {(0, 2), (0, 3), (1, 2), (1, 3)}
    faces: list[Walk] = []
    left: Record = (2, 3, 0, 1)
    right, nv = _grow_record((0, 1, 2, 3), 4, edges, faces)
    for _ in range(n - 2):
        if left[:2] < right[:2]:
            left, nv = _grow_record(left, nv, edges, faces)
        else:
            right, nv = _grow_record(right, nv, edges, faces)

    def cuff(rec: Record) -> Walk:
        u, v, a, b = rec
        return (u, b, v, a)

    g = validated(
        EmbeddedGraph(
            Surface.CYLINDER,
            nv,
            frozenset(edges),
            tuple(faces),
            (cuff(left), cuff(right)),
        )
    )
    pairs = (
        (min(left[:2]), max(left[:2])),
        (min(right[:2]), max(right[:2])),
    )
    return g, pairs


PATCH_DESCRIPTORS = ("minimal", "layered")


def gen_patch(descriptor: str) -> EmbeddedGraph:
    """A quadrangulated disk filling a chordless hexagon.

    "minimal" is the 7-vertex hub-and-hexagon patch; "layered" inserts an
    intermediate hexagon (13 vertices, 9 quads).
    """
    if descriptor == "minimal":
        edges = frozenset(
            {(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 6), (2, 6), (4, 6)}
        )
        faces = ((0, 6, 2, 1), (2, 6, 4, 3), (4, 6, 0, 5))
        return validated(
            EmbeddedGraph(Surface.DISK, 7, edges, faces, ((0, 1, 2, 3, 4, 5),))
        )
    if descriptor == "layered":
        edges: set[Edge] = set()
        for i in range(6):
            edges.add(edge_key(i, (i + 1) % 6))
            edges.add(edge_key(i, 6 + i))
            edges.add(edge_key(6 + i, 6 + (i + 1) % 6))
        edges |= {(6, 12), (8, 12), (10, 12)}
        faces = tuple(
            (i, 6 + i, 6 + (i + 1) % 6, (i + 1) % 6) for i in range(6)
        ) + ((6, 12, 8, 7), (8, 12, 10, 9), (10, 12, 6, 11))
        return validated(
            EmbeddedGraph(
                Surface.DISK, 13, frozenset(edges), faces, ((0, 1, 2, 3, 4, 5),)
            )
        )
    raise PreconditionError(f"unknown patch descriptor {descriptor!r}")


def is_patch(g: EmbeddedGraph) -> bool:
    """Quadrangulated disk over a chordless simple hexagon boundary."""
    if g.surface is not Surface.DISK or validate(g):
        return False
    boundary = g.cuffs[0]
    if len(boundary) != 6 or len(set(boundary)) != 6:
        return False
    chords = {
        edge_key(u, v) for u, v in combinations(boundary, 2)
    } & g.edges
    if chords != walk_edges(boundary):
        return False
    return all(len(f) == 4 for f in g.faces)


def apply_patching(
    g: EmbeddedGraph, plan: dict[int, str | EmbeddedGraph]
) -> tuple[EmbeddedGraph, dict[int, int]]:
    """Replace each planned degree-3 vertex by a hexagon filled with a patch.

    The three corners around a planned vertex v open into a hexagon
    x a y b z c (x, y, z the old neighbors); each incident walk then passes
    through the corner's new midpoint, and the patch is glued into the
    hexagon. Planned vertices must be pairwise non-adjacent, of degree 3,
    and their neighbor pairs non-adjacent (no hexagon chords). Returns the
    relabeled graph and the old-to-new map of surviving vertices.
    """
    if not plan:
        raise PreconditionError("empty patching plan")
    patches: dict[int, EmbeddedGraph] = {}
    for v in sorted(plan):
        if not (0 <= v < g.n):
            raise PreconditionError(f"vertex {v} out of range")
        spec = plan[v]
        patch = gen_patch(spec) if isinstance(spec, str) else spec
        if not is_patch(patch):
            raise PreconditionError(f"plan for vertex {v} is not a patch")
        patches[v] = patch
    for u, v in combinations(sorted(plan), 2):
        if v in g.adjacency[u]:
            raise PreconditionError(f"planned vertices {u} and {v} are adjacent")

    corner_mid: dict[tuple[int, int, int], int] = {}
    hexagons: dict[int, tuple[int, ...]] = {}
    nv = g.n
    for v in sorted(plan):
        if g.degree(v) != 3:
            raise PreconditionError(f"vertex {v} has degree {g.degree(v)}, not 3")
        rot = g.sigma[v]
        x = min(rot)
        y, z = rot[x], rot[rot[x]]
        for p, q in ((x, y), (y, z), (z, x)):
            if q in g.adjacency[p]:
                raise PreconditionError(
                    f"neighbors {p} and {q} of {v} are adjacent"
                )
        a, b, c = nv, nv + 1, nv + 2
        nv += 3
        corner_mid[(x, v, y)] = a
        corner_mid[(y, v, z)] = b
        corner_mid[(z, v, x)] = c
        hexagons[v] = (x, a, y, b, z, c)

    def rewrite(walk: Walk) -> Walk:
        out = []
        for p, v in enumerate(walk):
            if v in plan:
                corner = (walk[p - 1], v, walk[(p + 1) % len(walk)])
                if corner not in corner_mid:
                    raise AlgorithmError(f"corner {corner} missing from rotation")
                out.append(corner_mid[corner])
            else:
                out.append(v)
        return tuple(out)

    edges = {e for e in g.edges if not (e[0] in plan or e[1] in plan)}
    faces = [rewrite(f) for f in g.faces]
    cuffs = tuple(rewrite(c) for c in g.cuffs)

    for v in sorted(plan):
        x, a, y, b, z, c = hexagons[v]
        hexagon = (x, a, y, b, z, c)
        for i in range(6):
            edges.add(edge_key(hexagon[i], hexagon[(i + 1) % 6]))
        patch = patches[v]
        # The patch boundary winds once around its hexagon; the host faces
        # already traverse ours forward, so gluing boundary position i to
        # hexagon position i + 1 puts the patch's interior on the free side.
        ren: dict[int, int] = {}
        for i, pv in enumerate(patch.cuffs[0]):
            ren[pv] = hexagon[(i + 1) % 6]
        for pv in range(patch.n):
            if pv not in ren:
                ren[pv] = nv
                nv += 1
        for pu, pv in patch.edges:
            edges.add(edge_key(ren[pu], ren[pv]))
        for f in patch.faces:
            faces.append(tuple(ren[pv] for pv in f))

    keep = [v for v in range(g.n) if v not in plan] + list(range(g.n, nv))
    dense = {old: i for i, old in enumerate(keep)}
    out = EmbeddedGraph(
        g.surface,
        len(keep),
        frozenset(edge_key(dense[u], dense[v]) for u, v in edges),
        tuple(tuple(dense[v] for v in f) for f in faces),
        tuple(tuple(dense[v] for v in c) for c in cuffs),
    )
    mapping = {v: dense[v] for v in range(g.n) if v not in plan}
    return validated(out), mapping


def gen_patched_tw(
    n: int, vertices: tuple[int, ...], descriptor: str = "minimal"
) -> tuple[EmbeddedGraph, tuple[Pair, ...]]:
    """Reduced tower with the given degree-3 vertices patched.

    Interface-pair vertices stay untouched: patching one would destroy the
    cuff square the pair tags, so such plans are rejected.
    """
    g, pairs = gen_reduced_tw(n)
    if not isinstance(g, EmbeddedGraph):
        raise PreconditionError("patching needs the embedded form (n >= 3)")
    reserved = {v for pair in pairs for v in pair}
    bad = sorted(set(vertices) & reserved)
    if bad:
        raise PreconditionError(f"vertices {bad} carry an interface pair")
    patched, mapping = apply_patching(g, {v: descriptor for v in vertices})
    new_pairs = tuple((mapping[p], mapping[q]) for p, q in pairs)
    return patched, new_pairs


def apply_framing(
    g: EmbeddedGraph, pairs: tuple[Pair, Pair], options: FrameOptions
) -> EmbeddedGraph:
    """Push each length-4 cuff outward across its tagged diagonal pair.

    Writing a cuff as x y z w with {x, z} the pair, the new cuff is
    x y' z w' where each primed vertex is fresh or reused per `options`
    ((y1', w1'), (y2', w2')); a fresh vertex adds one quad face between the
    old and new cuff. Reusing both leaves that cuff unchanged.
    """
    if g.surface is not Surface.CYLINDER:
        raise PreconditionError("framing needs a cylinder graph")
    edges = set(g.edges)
    faces = list(g.faces)
    cuffs = []
    nv = g.n
    for idx in (0, 1):
        walk = g.cuffs[idx]
        if len(walk) != 4:
            raise PreconditionError(f"cuff {idx + 1} is not a 4-cycle")
        x = min(pairs[idx])
        i = walk.index(x)
        y, z, w = walk[(i + 1) % 4], walk[(i + 2) % 4], walk[(i + 3) % 4]
        if z != max(pairs[idx]):
            raise PreconditionError(
                f"pair {pairs[idx]} is not opposite on cuff {idx + 1}"
            )
        fresh_y, fresh_w = options[idx]
        yp, wp = y, w
        if fresh_y:
            yp = nv
            nv += 1
            edges |= {edge_key(x, yp), edge_key(yp, z)}
            faces.append((x, y, z, yp))
        if fresh_w:
            wp = nv
            nv += 1
            edges |= {edge_key(z, wp), edge_key(wp, x)}
            faces.append((z, w, x, wp))
        cuffs.append((x, yp, z, wp))
    return validated(
        EmbeddedGraph(
            Surface.CYLINDER, nv, frozenset(edges), tuple(faces), tuple(cuffs)
        )
    )


def gen_framed_tw(
    n: int, options: FrameOptions = ((True, True), (True, True))
) -> tuple[EmbeddedGraph, tuple[Pair, ...]]:
    """Reduced tower with both cuffs framed across their interface pairs."""
    g, pairs = gen_reduced_tw(n)
    if not isinstance(g, EmbeddedGraph):
        raise PreconditionError("framing needs the embedded form (n >= 3)")
    return apply_framing(g, pairs, options), pairs


def _subdivide_cuff_edge(g: EmbeddedGraph, cuff_idx: int, step: int) -> EmbeddedGraph:
    walk = g.cuffs[cuff_idx]
    if not (0 <= step < len(walk)):
        raise PreconditionError(f"cuff has no step {step}")
    u, v = walk[step], walk[(step + 1) % len(walk)]
    other = g.step_to_walk[(v, u)]
    if other >= len(g.faces):
        raise PreconditionError(f"edge ({u}, {v}) borders the other cuff")
    s = g.n
    new_cuff = walk[: step + 1] + (s,) + walk[step + 1 :]
    face = g.walks[other]
    j = next(
        p
        for p in range(len(face))
        if face[p] == v and face[(p + 1) % len(face)] == u
    )
    new_face = face[: j + 1] + (s,) + face[j + 1 :]
    faces = tuple(new_face if f == face else f for f in g.faces)
    cuffs = tuple(
        new_cuff if i == cuff_idx else c for i, c in enumerate(g.cuffs)
    )
    edges = (g.edges - {edge_key(u, v)}) | {edge_key(u, s), edge_key(s, v)}
    return validated(EmbeddedGraph(g.surface, g.n + 1, edges, faces, cuffs))


def gen_near_33_quadrangulation(
    m: int, sub1: int | None = None, sub2: int | None = None
) -> EmbeddedGraph:
    """Triangle-cuff cylinder grid with at most one subdivided edge per cuff.

    Subdividing cuff step i replaces that cuff edge by a two-edge path; the
    internal face behind it becomes a pentagon, so cuff lengths range over
    {3, 4} and all other faces stay quads. Needs m >= 2 so that each cuff
    edge borders an internal face.
    """
    if m < 2:
        raise PreconditionError("need at least two levels")
    g = gen_cylinder_grid(3, m)
    if sub1 is not None:
        g = _subdivide_cuff_edge(g, 0, sub1)
    if sub2 is not None:
        g = _subdivide_cuff_edge(g, 1, sub2)
    return g
