"""Randomized instance generators shared by the test suite.

These sit next to the oracles: they produce inputs, the library is the
system under test, and `oracles` provides the independent ground truth.
"""

from __future__ import annotations

from treedesk.fixtures import merge_fragments, random_standard_fragment
from treedesk.shape import EMPTY_SHAPE, ShapeTree
from treedesk.structure import Fragment, complete

TRIPOD = ShapeTree(("r", "r0", "r1"), "r", {"r0": "r", "r1": "r"},
                   {"r": "r", "r0": "0", "r1": "1"})


def rename(f: Fragment, pref: str):
    """Isomorphic copy with every node id prefixed, plus the node map."""
    r = {n: pref + n for n in f.nodes}
    g = Fragment(
        f.shape, tuple(sorted(r.values())),
        {r[n]: s for n, s in f.sort.items()},
        {r[n]: l for n, l in f.level.items()},
        {(r[a], r[b]) for a, b in f.order},
        {tuple(sorted((r[x], r[y]))): r[m] for (x, y), m in f.meet.items()},
        {(r[x], r[y]): r[v] for (x, y), v in f.suc.items()},
        {r[x]: r[v] for x, v in f.pre.items()},
        {r[x]: r[v] for x, v in f.lim.items()},
        {e: {r[x]: r[v] for x, v in t.items()} for e, t in f.gmap.items()},
        {k: r[v] for k, v in f.constants.items()}, f.mode)
    return g, r


def random_tripod(rng) -> Fragment:
    """Closed fragment over a root with two children: three random
    single-sort trees joined by limit-keyed (hence regressive) maps."""
    parts = {}
    for idx in TRIPOD.indices:
        g = random_standard_fragment(rng, max_nodes=7)
        r = {n: idx.replace("r", "q") + "_" + n for n in g.nodes}
        parts[idx] = Fragment(
            ShapeTree((idx,), idx), tuple(sorted(r.values())),
            {r[n]: idx for n in g.nodes},
            {r[n]: l for n, l in g.level.items()},
            {(r[a], r[b]) for a, b in g.order},
            {tuple(sorted((r[x], r[y]))): r[m]
             for (x, y), m in g.meet.items()},
            {(r[x], r[y]): r[v] for (x, y), v in g.suc.items()},
            {r[x]: r[v] for x, v in g.pre.items()},
            {r[x]: r[v] for x, v in g.lim.items()})
    gmap = {}
    for child in ("r0", "r1"):
        targets = sorted(parts[child].nodes)
        table = {}
        by_lim = {}
        src = parts["r"]
        for x in sorted(src.nodes):
            if src.level[x].is_limit:
                continue
            key = src.lim.get(x)
            if key is None:
                continue
            if key not in by_lim:
                by_lim[key] = targets[rng.randrange(len(targets))]
            table[x] = by_lim[key]
        gmap[("r", child)] = table
    return complete(merge_fragments(TRIPOD, parts, gmap))


def random_unsorted(rng, max_nodes: int = 6) -> Fragment:
    """Fragment over the empty shape: bare points, no structure."""
    n = rng.randint(2, max_nodes)
    return Fragment(EMPTY_SHAPE, tuple("x%d" % i for i in range(n)))
