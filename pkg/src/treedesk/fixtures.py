"""Shipped fixtures and seeded random generators.

Deterministic builders used by the test suite, the examples and the
demos: a three-sort step-map fixture, exhaustive-window dichotomy
fixtures, small colored-tree bases, and seeded random standard-tree
fragments.
"""

from __future__ import annotations

import itertools
import random

from .ordinal import Ordinal
from .shape import ShapeTree, chain_shape
from .structure import Fragment, complete, from_standard_tree
from .partition import Coloring, PTriple, p_from_coloring


def _o(m: int = 0, n: int = 0) -> Ordinal:
    """Ordinal w*m + n."""
    if m == 0:
        return Ordinal.nat(n)
    return Ordinal.omega(1, m).plus(n)


def merge_fragments(shape: ShapeTree, parts: dict[str, Fragment],
                    gmap=None, mode: str = "base") -> Fragment:
    """One fragment per shape index, merged over the given shape with
    the supplied cross-sort level-map tables."""
    nodes = []
    sort = {}
    level = {}
    order = set()
    meet = {}
    suc = {}
    pre = {}
    lim = {}
    constants = {}
    for idx, f in sorted(parts.items()):
        nodes.extend(f.nodes)
        for n in f.nodes:
            sort[n] = idx
        level.update(f.level)
        order |= set(f.order)
        meet.update(f.meet)
        suc.update(f.suc)
        pre.update(f.pre)
        lim.update(f.lim)
        for (eta, i), c in f.constants.items():
            constants[(idx, i)] = c
    return Fragment(shape, tuple(sorted(nodes)), sort, level, order, meet,
                    suc, pre, lim, dict(gmap or {}), constants, mode)


# ---------------------------------------------------------------------------
# three-sort step-map fixture


def three_sort_step_fixture() -> tuple[Fragment, tuple[str, ...]]:
    """Fragment over a 3-sort chain and a length-4 window in the top
    sort whose step-map iteration descends: almost-increasing in sorts
    0 and 1, Fan in sort 2 after two steps."""
    shape = chain_shape(3)
    s0_levels = {
        "a_r": _o(), "a_m0": _o(1), "a_p0": _o(1, 1), "a_s0": _o(1, 1),
        "a_m1": _o(2), "a_p1": _o(2, 1), "a_s1": _o(2, 1),
        "a_m2": _o(3), "a_p2": _o(3, 1), "a_s2": _o(3, 1),
        "a_s3": _o(3, 2),
    }
    s0_edges = set()
    spine = ["a_r", "a_m0", "a_p0", "a_m1", "a_p1", "a_m2"]
    for i, x in enumerate(spine):
        for y in spine[i + 1:]:
            s0_edges.add((x, y))
    for tooth, below in (("a_s0", "a_m0"), ("a_s1", "a_m1"),
                         ("a_s2", "a_m2"), ("a_p2", "a_m2"),
                         ("a_s3", "a_p2")):
        anc = {below} | {x for x in spine
                         if (x, below) in s0_edges or x == below}
        for x in anc:
            s0_edges.add((x, tooth))
    f0 = from_standard_tree(s0_levels, s0_edges, index="0", shape=shape)

    s1_levels = {
        "b_r": _o(), "b_q0": _o(1), "b_w0": _o(1, 1), "b_v0": _o(1, 1),
        "b_q1": _o(2), "b_v1": _o(2, 1), "b_w1": _o(2, 1),
        "b_v2": _o(2, 2),
    }
    s1_edges = set()
    spine1 = ["b_r", "b_q0", "b_w0", "b_q1"]
    for i, x in enumerate(spine1):
        for y in spine1[i + 1:]:
            s1_edges.add((x, y))
    for tooth, below in (("b_v0", "b_q0"), ("b_v1", "b_q1"),
                         ("b_w1", "b_q1"), ("b_v2", "b_w1")):
        anc = {below} | {x for x in spine1
                         if (x, below) in s1_edges or x == below}
        for x in anc:
            s1_edges.add((x, tooth))
    f1 = from_standard_tree(s1_levels, s1_edges, index="1", shape=shape)

    s2_levels = {"c_r": _o(), "c_x0": _o(0, 1), "c_x1": _o(0, 1)}
    s2_edges = {("c_r", "c_x0"), ("c_r", "c_x1")}
    f2 = from_standard_tree(s2_levels, s2_edges, index="2", shape=shape)

    gmap = {
        ("0", "1"): {"a_p0": "b_v0", "a_p1": "b_v1", "a_p2": "b_v2"},
        ("1", "2"): {"b_w0": "c_x0", "b_w1": "c_x1"},
    }
    f = merge_fragments(shape, {"0": f0, "1": f1, "2": f2}, gmap)
    return f, ("a_s0", "a_s1", "a_s2", "a_s3")


# ---------------------------------------------------------------------------
# dichotomy fixtures: rich Fan and almost-increasing material


def fan_pair_fixture() -> Fragment:
    """Chain-mode fragment with two sibling fans over limit roots: the
    only indiscernible exhaustive windows are within a single fan."""
    levels = {"t_r": _o()}
    edges = set()
    for side, base in (("a", 1), ("b", 2)):
        top = "t_%s" % side
        levels[top] = _o(base)
        edges.add(("t_r", top))
        for i in range(6):
            leaf = "t_%s%d" % (side, i)
            levels[leaf] = _o(base, 1)
            edges.add(("t_r", leaf))
            edges.add((top, leaf))
    return from_standard_tree(levels, edges, mode="classT")


def comb_and_fan_fixture() -> Fragment:
    """Chain-mode fragment with a fan and an almost-increasing comb:
    exhaustive indiscernible windows classify Fan (within the fan) or
    AlmostIncreasing (comb teeth, spine chains)."""
    levels = {"u_r": _o()}
    edges = set()
    # fan over its own limit
    levels["u_f"] = _o(1)
    edges.add(("u_r", "u_f"))
    for i in range(5):
        leaf = "u_f%d" % i
        levels[leaf] = _o(1, 1)
        edges.add(("u_r", leaf))
        edges.add(("u_f", leaf))
    # comb: spine of limits with one tooth each
    spine = []
    for j in range(4):
        m = "u_m%d" % j
        levels[m] = _o(j + 1)
        for x in ["u_r"] + spine:
            edges.add((x, m))
        spine.append(m)
        tooth = "u_t%d" % j
        levels[tooth] = _o(j + 1, 1)
        for x in ["u_r"] + spine:
            edges.add((x, tooth))
    # make the fan limit incomparable with the comb spine
    edges.discard(("u_f", "u_m0"))
    return from_standard_tree(levels, edges, mode="classT")


def dichotomy_fixtures() -> list[Fragment]:
    return [fan_pair_fixture(), comb_and_fan_fixture()]


# ---------------------------------------------------------------------------
# colored-tree bases


def six_chain_base(d_table=None, colors: int = 2) -> PTriple:
    """Colored 6-node chain with three successor-of-limit nodes."""
    levels = [_o(1), _o(1, 1), _o(2), _o(2, 1), _o(3), _o(3, 1)]
    c = Coloring(len(levels), 2, {}, 0)
    p = p_from_coloring(c, levels)
    if d_table is not None:
        sl = p.suc_lim()
        d = {}
        for key, v in d_table.items():
            d[tuple(sl[i] for i in key)] = v
        for m in (1, 2):
            for tup in itertools.combinations(sl, m):
                d.setdefault(tup, 0)
        p = PTriple(p.tree, d, p.e)
    return p


def hard_six() -> PTriple:
    """Six-node chain base that admits no increasing length-3 sequence
    with per-length-constant d."""
    return six_chain_base({(0,): 1})


# ---------------------------------------------------------------------------
# seeded random generators


def random_standard_fragment(rng: random.Random, max_nodes: int = 40,
                             max_limb: int = 3) -> Fragment:
    """Random level-labelled tree with levels below w*(max_limb+1)."""
    n = rng.randint(5, max_nodes)
    names = ["n%03d" % i for i in range(n)]
    levels = {names[0]: Ordinal()}
    parents: dict[str, str] = {}
    for i in range(1, n):
        p = names[rng.randrange(i)]
        cur = levels[p]
        coeff = cur.terms[0][1] if cur.terms and cur.terms[0][0] == 1 else 0
        roll = rng.random()
        if roll < 0.35 and coeff < max_limb:
            lvl = Ordinal.omega(1, coeff + 1).plus(rng.randint(0, 2))
        else:
            lvl = cur.plus(rng.randint(1, 3))
        levels[names[i]] = lvl
        parents[names[i]] = p
    edges = set()
    for x in names[1:]:
        a = parents[x]
        while True:
            edges.add((a, x))
            if a not in parents:
                break
            a = parents[a]
    return from_standard_tree(levels, edges)


def random_closed_fragment(rng: random.Random,
                           max_nodes: int = 25) -> Fragment:
    """Completed random fragment with at most max_nodes nodes."""
    while True:
        f = random_standard_fragment(rng, max_nodes=max_nodes // 2)
        out = complete(f)
        if len(out.nodes) <= max_nodes:
            return out


def random_two_sort_fragment(rng: random.Random,
                             max_nodes: int = 12) -> Fragment:
    """Completed two-sort fragment with a regressive cross-sort map
    keyed by the limit of each successor node."""
    shape = chain_shape(2)
    fa = random_standard_fragment(rng, max_nodes=max_nodes)
    fb = random_standard_fragment(rng, max_nodes=max_nodes)
    fa = fa.replace(shape=shape, sort={n: "0" for n in fa.nodes})
    ren = {n: "z" + n for n in fb.nodes}
    fb = Fragment(shape, tuple(sorted(ren.values())),
                  {ren[n]: "1" for n in fb.nodes},
                  {ren[n]: l for n, l in fb.level.items()},
                  {(ren[a], ren[b]) for a, b in fb.order},
                  {tuple(sorted((ren[x], ren[y]))): ren[m]
                   for (x, y), m in fb.meet.items()},
                  {(ren[x], ren[y]): ren[v] for (x, y), v in fb.suc.items()},
                  {ren[x]: ren[v] for x, v in fb.pre.items()},
                  {ren[x]: ren[v] for x, v in fb.lim.items()})
    targets = sorted(fb.nodes)
    table = {}
    by_lim: dict[str, str] = {}
    for x in sorted(fa.nodes):
        if fa.level[x].is_limit:
            continue
        key = fa.lim.get(x)
        if key is None:
            continue
        if key not in by_lim:
            by_lim[key] = targets[rng.randrange(len(targets))]
        table[x] = by_lim[key]
    f = merge_fragments(shape, {"0": fa, "1": fb},
                        gmap={("0", "1"): table})
    return complete(f)


def random_sequence_fixture(rng: random.Random):
    """Completed fragment plus a sorted same-sort sequence of length 8
    for round-trip coloring experiments."""
    while True:
        f = random_closed_fragment(rng, max_nodes=30)
        pool = sorted(n for n in f.nodes if f.sort.get(n) is not None)
        if len(pool) >= 8:
            start = rng.randrange(len(pool) - 7)
            return f, tuple(pool[start:start + 8])
