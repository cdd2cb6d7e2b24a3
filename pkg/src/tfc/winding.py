"""Winding numbers of 3-colorings along closed walks.

A proper step between colors in {1,2,3} is a turn of +1 or -1 around the
color triangle; a closed walk's turns sum to a multiple of 3, and one third
of that sum is its winding number. Summed over all faces and cuffs in the
stored consistent orientation the winding numbers cancel, which yields the
necessary boundary condition for extending a cuff precoloring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedding import Coloring, EmbeddedGraph, Surface, Walk, walk_steps
from .errors import AlgorithmError

COLORS = (1, 2, 3)


def delta_step(a: int, b: int) -> int:
    """+1 when b follows a on the color triangle 1→2→3→1, else -1."""
    if a not in COLORS or b not in COLORS:
        raise ValueError(f"colors must be in {COLORS}, got ({a}, {b})")
    if a == b:
        raise ValueError(f"non-proper step: both endpoints colored {a}")
    return 1 if (b - a) % 3 == 1 else -1


def delta_sum(psi: Coloring, q: Walk) -> int:
    total = 0
    for u, v in walk_steps(q):
        if u not in psi or v not in psi:
            raise ValueError(f"walk vertex {u if u not in psi else v} is uncolored")
        total += delta_step(psi[u], psi[v])
    return total


def winding_number(psi: Coloring, q: Walk) -> int:
    """delta sum / 3 along the closed walk q; always an integer."""
    d = delta_sum(psi, q)
    if d % 3 != 0:
        raise AlgorithmError(f"delta sum {d} of a closed walk not divisible by 3")
    return d // 3


def winding_constraint_satisfied(g: EmbeddedGraph, psi: Coloring) -> bool:
    """Necessary condition on cuff colorings, in the stored orientations.

    Disk: the cuff winding is 0. Cylinder: the two cuff windings sum to 0.
    """
    windings = [winding_number(psi, c) for c in g.cuffs]
    if g.surface is Surface.DISK:
        return windings[0] == 0
    return windings[0] + windings[1] == 0


@dataclass(frozen=True)
class WindingReport:
    """Per-walk delta sums and windings (faces first, then cuffs)."""

    delta_sums: tuple[int, ...]
    windings: tuple[int, ...]
    constraint_satisfied: bool

    @property
    def total(self) -> int:
        return sum(self.windings)


def full_coloring_winding_audit(g: EmbeddedGraph, psi: Coloring) -> WindingReport:
    """Windings of every face and cuff under a total proper coloring.

    Their sum over all walks must vanish (each edge's two traversals
    cancel); a nonzero total indicates a broken invariant, not bad input.
    """
    sums = tuple(delta_sum(psi, w) for w in g.walks)
    windings = []
    for w, d in zip(g.walks, sums):
        if d % 3 != 0:
            raise AlgorithmError(f"delta sum {d} on walk {w} not divisible by 3")
        windings.append(d // 3)
    report = WindingReport(
        sums, tuple(windings), winding_constraint_satisfied(g, psi)
    )
    if report.total != 0:
        raise AlgorithmError(f"winding total {report.total} over all walks, want 0")
    return report
