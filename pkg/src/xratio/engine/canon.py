"""Canonical form of a configuration up to relabeling.

Two configurations have the same degree whenever some bijection of their
label sets carries one multiset of quads to the other, so the memo cache
and the search dedup both key on a canonical form: the lexicographically
least encoding of the quad multiset over all relabelings.

Computing the minimum over all m! relabelings directly is wasteful; we
first refine a label coloring (a label's color sees its own color plus
the multiset of color patterns of the quads through it, iterated to a
fixed point), which is invariant under bijections, then break remaining
ties by individualizing each member of the first non-singleton class and
recursing.  The minimum over the explored branches does not depend on
exploration order, so the result is a complete isomorphism invariant.
"""

from __future__ import annotations

from .instance import bits_of

__all__ = ["canonical_key", "canonical_relabeling"]


def _refine(colors: list[int], quad_bits: list[list[int]],
            quads_of: list[list[int]]) -> list[int]:
    m = len(colors)
    ncol = len(set(colors))
    while True:
        qsig = [tuple(sorted(colors[b] for b in qb)) for qb in quad_bits]
        sig = [
            (colors[l], tuple(sorted(qsig[j] for j in quads_of[l])))
            for l in range(m)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[s] for s in sig]
        if len(rank) == ncol:
            return new
        colors, ncol = new, len(rank)


def _encode(colors: list[int], masks: tuple[int, ...]) -> tuple[int, ...]:
    # colors form a bijection label -> position once all classes are singletons
    out = []
    for q in masks:
        out.append(sum(1 << colors[b] for b in bits_of(q)))
    return tuple(sorted(out))


def _canon(colors, masks, quad_bits, quads_of):
    colors = _refine(colors, quad_bits, quads_of)
    m = len(colors)
    classes: dict[int, list[int]] = {}
    for l, c in enumerate(colors):
        classes.setdefault(c, []).append(l)
    tie = None
    for c in sorted(classes):
        if len(classes[c]) > 1:
            tie = classes[c]
            break
    if tie is None:
        return _encode(colors, masks), colors
    best = None
    best_colors = None
    for l in tie:
        # individualize l: give it a color just below the rest of its class
        seeded = [(colors[x], 0 if x != l else -1) for x in range(m)]
        rank = {s: i for i, s in enumerate(sorted(set(seeded)))}
        enc, full = _canon([rank[s] for s in seeded], masks, quad_bits, quads_of)
        if best is None or enc < best:
            best, best_colors = enc, full
    return best, best_colors


def canonical_key(m: int, masks: tuple[int, ...]) -> tuple:
    """Relabeling-invariant key for a compact instance."""
    quad_bits = [bits_of(q) for q in masks]
    quads_of: list[list[int]] = [[] for _ in range(m)]
    for j, qb in enumerate(quad_bits):
        for b in qb:
            quads_of[b].append(j)
    enc, _ = _canon([0] * m, masks, quad_bits, quads_of)
    return (m, enc)


def canonical_relabeling(m: int, masks: tuple[int, ...]) -> list[int]:
    """One relabeling (old index -> new index) realizing the canonical key."""
    quad_bits = [bits_of(q) for q in masks]
    quads_of: list[list[int]] = [[] for _ in range(m)]
    for j, qb in enumerate(quad_bits):
        for b in qb:
            quads_of[b].append(j)
    _, colors = _canon([0] * m, masks, quad_bits, quads_of)
    return colors
