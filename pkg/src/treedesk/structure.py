"""Finite partial models of the tree theories ("fragments").

A fragment holds finitely many nodes spread over the sorts of a shape,
with partially declared tables for the meet, directed successor,
predecessor, greatest-limit-below and regressive level maps, plus an
optional family of named constants.  Everything downstream (closures,
type codes, one-point extensions, indiscernible analysis) works on
fragments.

Tables are partial: a fragment only promises that its *declared*
values satisfy the axioms.  `complete` materializes the finitely
generated superstructure on which the closure operators are total.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .ordinal import Ordinal
from .shape import ShapeTree

INF = math.inf


class InvalidTree(ValueError):
    pass


class CannotComplete(RuntimeError):
    pass


class NotClosed(RuntimeError):
    pass


class SortError(TypeError):
    pass


class Incomparable(ValueError):
    pass


class UndefinedTerm(LookupError):
    """A term has no value under the fragment's declared tables."""


def _mk(x: str, y: str) -> tuple[str, str]:
    """Unordered pair key."""
    return (x, y) if x <= y else (y, x)


class Fragment:
    """Immutable-by-convention partial model.  Build once, then query."""

    def __init__(
        self,
        shape: ShapeTree,
        nodes,
        sort: dict[str, str] | None = None,
        level: dict[str, Ordinal] | None = None,
        order: set[tuple[str, str]] | None = None,
        meet: dict[tuple[str, str], str] | None = None,
        suc: dict[tuple[str, str], str] | None = None,
        pre: dict[str, str] | None = None,
        lim: dict[str, str] | None = None,
        gmap: dict[tuple[str, str], dict[str, str]] | None = None,
        constants: dict[tuple[str, int], str] | None = None,
        mode: str = "base",
    ):
        self.shape = shape
        self.nodes = tuple(sorted(nodes))
        self.sort = dict(sort or {})
        self.level = dict(level or {})
        self.order = frozenset(order or ())
        self.meet = {_mk(*k): v for k, v in (meet or {}).items()}
        self.suc = dict(suc or {})
        self.pre = dict(pre or {})
        self.lim = dict(lim or {})
        self.gmap = {e: dict(m) for e, m in (gmap or {}).items()}
        self.constants = dict(constants or {})
        self.mode = mode
        self._below = self._transitive_closure()

    # -- derived order -----------------------------------------------

    def _transitive_closure(self) -> dict[str, set[str]]:
        below = {n: set() for n in self.nodes}
        for a, b in self.order:
            if b in below:
                below[b].add(a)
        changed = True
        while changed:
            changed = False
            for b in self.nodes:
                extra = set()
                for a in below[b]:
                    extra |= below.get(a, set())
                if not extra <= below[b]:
                    below[b] |= extra
                    changed = True
        return below

    def lt(self, x: str, y: str) -> bool:
        return x in self._below.get(y, ())

    def leq(self, x: str, y: str) -> bool:
        return x == y or self.lt(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.lt(y, x)

    def strictly_below(self, y: str) -> set[str]:
        return set(self._below.get(y, ()))

    def has_cycle(self) -> bool:
        return any(n in self._below[n] for n in self.nodes)

    # -- accessors ---------------------------------------------------

    def sort_of(self, x: str) -> str | None:
        return self.sort.get(x)

    def level_of(self, x: str) -> Ordinal | None:
        return self.level.get(x)

    def nodes_of_sort(self, eta: str) -> list[str]:
        return [n for n in self.nodes if self.sort.get(n) == eta]

    def meet_of(self, x: str, y: str) -> str | None:
        return self.meet.get(_mk(x, y))

    def suc_of(self, x: str, y: str) -> str | None:
        return self.suc.get((x, y))

    def pre_of(self, x: str) -> str | None:
        return self.pre.get(x)

    def lim_of(self, x: str) -> str | None:
        return self.lim.get(x)

    def g_of(self, edge: tuple[str, str], x: str) -> str | None:
        return self.gmap.get(edge, {}).get(x)

    def const_of(self, eta: str, i: int) -> str | None:
        return self.constants.get((eta, i))

    def is_successor(self, x: str) -> bool:
        """Declared successor: lim(x) is declared and strictly below x."""
        l = self.lim.get(x)
        return l is not None and l != x

    def suc_members(self, eta: str) -> list[str]:
        return [n for n in self.nodes_of_sort(eta) if self.is_successor(n)]

    def minimal_nodes(self, eta: str) -> list[str]:
        ns = set(self.nodes_of_sort(eta))
        return sorted(n for n in ns if not (self._below[n] & ns))

    def replace(self, **kw) -> "Fragment":
        args = dict(
            shape=self.shape, nodes=self.nodes, sort=self.sort,
            level=self.level, order=self.order, meet=self.meet,
            suc=self.suc, pre=self.pre, lim=self.lim, gmap=self.gmap,
            constants=self.constants, mode=self.mode,
        )
        args.update(kw)
        return Fragment(**args)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return "Fragment(%d nodes, %d sorts, mode=%s)" % (
            len(self.nodes), len(self.shape), self.mode)


# ---------------------------------------------------------------------------
# construction from a plain level-labelled tree


def from_standard_tree(levels: dict[str, Ordinal], edges, index: str = "r",
                       shape: ShapeTree | None = None,
                       mode: str = "base") -> Fragment:
    """Single-sort fragment induced by a level-labelled tree order.

    `edges` generates the strict order; lim/pre/suc/meet are declared
    wherever the labelled tree already contains the required node.
    """
    if shape is None:
        shape = ShapeTree((index,), index)
    if index not in shape:
        raise InvalidTree("index %r not in shape" % index)
    nodes = sorted(levels)
    f = Fragment(shape, nodes, {n: index for n in nodes}, dict(levels),
                 {(a, b) for a, b in edges}, mode=mode)
    if f.has_cycle():
        raise InvalidTree("order contains a cycle")
    for y in nodes:
        down = sorted(f.strictly_below(y))
        for a, b in itertools.combinations(down, 2):
            if not f.comparable(a, b):
                raise InvalidTree("down-set of %r is not a chain" % y)
        for a in down:
            if not levels[a] < levels[y]:
                raise InvalidTree(
                    "levels not strictly increasing on %r < %r" % (a, y))
    lim: dict[str, str] = {}
    pre: dict[str, str] = {}
    suc: dict[tuple[str, str], str] = {}
    meet: dict[tuple[str, str], str] = {}
    by_level = {}
    for x in nodes:
        lx = levels[x]
        anc = f.strictly_below(x)
        if lx.is_limit:
            lim[x] = x
        else:
            lam = lx.limb()
            for u in anc:
                if levels[u] == lam:
                    lim[x] = u
            for u in anc:
                if levels[u] == lx.predecessor():
                    pre[x] = u
    for x, y in itertools.permutations(nodes, 2):
        if not f.lt(x, y):
            continue
        target = levels[x].plus(1)
        for z in nodes:
            if levels[z] == target and f.lt(x, z) and f.leq(z, y):
                suc[(x, y)] = z
    for x, y in itertools.combinations(nodes, 2):
        if f.leq(x, y):
            meet[_mk(x, y)] = x
        elif f.leq(y, x):
            meet[_mk(x, y)] = y
        else:
            common = (f.strictly_below(x)) & (f.strictly_below(y))
            if common:
                meet[_mk(x, y)] = max(common, key=lambda c: sum(
                    1 for d in common if f.leq(d, c)))
    for x in nodes:
        meet[_mk(x, x)] = x
    return f.replace(meet=meet, suc=suc, pre=pre, lim=lim)


# ---------------------------------------------------------------------------
# validation


def validate(f: Fragment, mode: str | None = None) -> list[str]:
    """Empty report iff every declared value satisfies every axiom of
    the chosen mode.  Entries are "axiom-name: witnesses"."""
    mode = mode or f.mode
    rep: list[str] = []
    nodeset = set(f.nodes)

    for n, s in f.sort.items():
        if s not in f.shape:
            rep.append("sort-unknown-index: node %r sort %r" % (n, s))
        if n not in f.level:
            rep.append("level-missing: node %r" % n)
    for a, b in sorted(f.order):
        if a not in nodeset or b not in nodeset:
            rep.append("order-unknown-node: (%r,%r)" % (a, b))
        elif f.sort.get(a) != f.sort.get(b) or f.sort.get(a) is None:
            rep.append("order-cross-sort: (%r,%r)" % (a, b))
    for n in f.nodes:
        if f.lt(n, n):
            rep.append("order-cycle: at %r" % n)
    if any("order-cycle" in r or "order-unknown-node" in r or
           "order-cross-sort" in r or "level-missing" in r for r in rep):
        return rep

    for y in f.nodes:
        down = sorted(f.strictly_below(y))
        for a, b in itertools.combinations(down, 2):
            if not f.comparable(a, b):
                rep.append("order-downset-chain: %r,%r below %r" % (a, b, y))
        for a in down:
            if not f.level[a] < f.level[y]:
                rep.append("order-level: %r < %r but levels %s >= %s"
                           % (a, y, f.level[a], f.level[y]))

    for (x, y), m in sorted(f.meet.items()):
        sx = f.sort.get(x)
        if sx is None or f.sort.get(y) != sx or f.sort.get(m) != sx:
            rep.append("meet-sort: (%r,%r)->%r" % (x, y, m))
            continue
        if not (f.leq(m, x) and f.leq(m, y)):
            rep.append("meet-lower-bound: (%r,%r)->%r" % (x, y, m))
        for z in f.nodes_of_sort(sx):
            if f.leq(z, x) and f.leq(z, y) and not f.leq(z, m):
                rep.append("meet-not-max: (%r,%r)->%r misses %r" % (x, y, m, z))

    for (x, y), s in sorted(f.suc.items()):
        sx = f.sort.get(x)
        if sx is None or f.sort.get(y) != sx or f.sort.get(s) != sx:
            rep.append("suc-sort: (%r,%r)->%r" % (x, y, s))
            continue
        if not (f.lt(x, y) and f.lt(x, s) and f.leq(s, y)):
            rep.append("suc-bounds: (%r,%r)->%r" % (x, y, s))
            continue
        if f.level[s] != f.level[x].plus(1):
            rep.append("suc-level: (%r,%r)->%r at %s" % (x, y, s, f.level[s]))
        for z in f.nodes_of_sort(sx):
            if f.lt(x, z) and f.lt(z, s):
                rep.append("suc-between: %r inside (%r,%r]" % (z, x, s))
        lx, ls = f.lim.get(x), f.lim.get(s)
        if lx is not None and ls is not None and lx != ls:
            rep.append("lim-of-suc: lim(%r)=%r but lim(suc)=%r" % (x, lx, ls))

    for x, l in sorted(f.lim.items()):
        if f.sort.get(l) != f.sort.get(x) or f.sort.get(x) is None:
            rep.append("lim-sort: %r->%r" % (x, l))
            continue
        if not f.leq(l, x):
            rep.append("lim-bound: %r->%r" % (x, l))
            continue
        if f.level[l] != f.level[x].limb():
            rep.append("lim-level: lim(%r)=%r at %s, expected %s"
                       % (x, l, f.level[l], f.level[x].limb()))
        if f.lim.get(l) not in (None, l):
            rep.append("lim-idempotent: lim(%r)=%r, lim(%r)=%r"
                       % (x, l, l, f.lim[l]))
    for x, y in itertools.permutations(sorted(f.lim), 2):
        if f.lt(x, y) and not f.leq(f.lim[x], f.lim[y]):
            rep.append("lim-monotone: %r < %r" % (x, y))

    for x, p in sorted(f.pre.items()):
        if f.sort.get(p) != f.sort.get(x) or f.sort.get(x) is None:
            rep.append("pre-sort: %r->%r" % (x, p))
            continue
        if not f.lt(p, x):
            rep.append("pre-bound: %r->%r" % (x, p))
            continue
        if f.level[p].plus(1) != f.level[x]:
            rep.append("pre-level: pre(%r)=%r at %s" % (x, p, f.level[p]))
        s = f.suc.get((p, x))
        if s is not None and s != x:
            rep.append("pre-suc: suc(pre(%r),%r)=%r" % (x, x, s))

    shape_edges = set(f.shape.suc_pairs())
    for edge, table in sorted(f.gmap.items()):
        if edge not in shape_edges:
            rep.append("gmap-edge: %r" % (edge,))
            continue
        e1, e2 = edge
        for x, y in sorted(table.items()):
            if f.sort.get(x) != e1 or f.sort.get(y) != e2:
                rep.append("gmap-sort: G%r(%r)=%r" % (edge, x, y))
                continue
            if f.lim.get(x) == x:
                rep.append("gmap-domain: %r is not a successor" % x)
            if f.mode == "classT" or mode == "classT":
                if not f.level[y] <= f.level[x]:
                    rep.append("classT-level: G%r(%r)=%r" % (edge, x, y))
                if f.lim.get(y) == y:
                    rep.append("classT-successor-image: G%r(%r)=%r"
                               % (edge, x, y))
        for x, y in itertools.combinations(sorted(table), 2):
            if (f.comparable(x, y) and f.is_successor(x) and f.is_successor(y)
                    and f.lim.get(x) == f.lim.get(y)
                    and table[x] != table[y]):
                rep.append("regressive: G%r differs on %r,%r" % (edge, x, y))

    if mode == "theta":
        rep.extend(_validate_theta(f))
    if mode == "classT" and not f.shape.is_chain():
        rep.append("classT-shape: shape is not a chain")
    return rep


def _validate_theta(f: Fragment) -> list[str]:
    rep: list[str] = []
    for (eta, i), c in sorted(f.constants.items()):
        if f.sort.get(c) != eta:
            rep.append("constants-sort: c(%r,%d)=%r" % (eta, i, c))
    by_sort: dict[str, dict[int, str]] = {}
    for (eta, i), c in f.constants.items():
        by_sort.setdefault(eta, {})[i] = c
    for eta, cs in sorted(by_sort.items()):
        items = sorted(cs.items())
        for (i, ci), (j, cj) in itertools.combinations(items, 2):
            if ci == cj:
                rep.append("constants-distinct: c(%r,%d)=c(%r,%d)"
                           % (eta, i, eta, j))
        meets = set()
        for (i, ci), (j, cj) in itertools.combinations(items, 2):
            m = f.meet_of(ci, cj)
            if m is None:
                continue
            meets.add(m)
            if f.lim.get(m) not in (None, m):
                rep.append("constants-limit-meet: c%d^c%d=%r" % (i, j, m))
            s = f.suc.get((m, ci))
            if s is not None and s != ci:
                rep.append("constants-suc-meet: suc(c%d^c%d,c%d)=%r"
                           % (i, j, i, s))
        if len(meets) > 1:
            rep.append("constants-meet: meets of %r constants not all equal"
                       % eta)
    for (e1, e2) in f.shape.suc_pairs():
        for i, c1 in by_sort.get(e1, {}).items():
            img = f.g_of((e1, e2), c1)
            c2 = f.constants.get((e2, i))
            if img is not None and c2 is not None and img != c2:
                rep.append("constants-gmap: G(c(%r,%d))=%r != c(%r,%d)"
                           % (e1, i, img, e2, i))
    return rep


# ---------------------------------------------------------------------------
# completion


def _finite_gap(lx: Ordinal, ly: Ordinal) -> bool:
    return lx.limb() == ly.limb()


def complete(f: Fragment, budget_nodes: int = 2000) -> Fragment:
    """Smallest extension (under the fixed materialization policy) on
    which all tables are total over their intended domains."""
    rep = validate(f)
    if rep:
        raise CannotComplete("fragment invalid: %s" % rep[0])
    nodes = set(f.nodes)
    sort = dict(f.sort)
    level = dict(f.level)
    order = set(f.order)
    meet = dict(f.meet)
    suc = dict(f.suc)
    pre = dict(f.pre)
    lim = dict(f.lim)
    gmap = {e: dict(t) for e, t in f.gmap.items()}
    counter = itertools.count()

    def fresh() -> str:
        while True:
            n = "_c%03d" % next(counter)
            if n not in nodes:
                return n

    def current() -> Fragment:
        return Fragment(f.shape, nodes, sort, level, order, meet, suc, pre,
                        lim, gmap, f.constants, f.mode)

    while True:
        if len(nodes) > budget_nodes:
            raise CannotComplete("node budget %d exceeded" % budget_nodes)
        cur = current()
        if not _step(cur, nodes, sort, level, order, meet, suc, pre, lim,
                     gmap, fresh):
            break
    out = current()
    rep = validate(out)
    if rep:
        raise CannotComplete("completion produced invalid fragment: %s"
                             % rep[0])
    return out


def _step(cur: Fragment, nodes, sort, level, order, meet, suc, pre, lim,
          gmap, fresh) -> bool:
    """Fix the first deficiency in priority order; True if changed."""
    sorted_nodes = sorted(n for n in cur.nodes if n in cur.sort)

    # lim: total on sorted nodes
    for x in sorted_nodes:
        if x in lim:
            continue
        lx = level[x]
        if lx.is_limit:
            lim[x] = x
            return True
        lam = lx.limb()
        anc = [u for u in cur.strictly_below(x) if level[u] == lam]
        if anc:
            lim[x] = anc[0]
            return True
        w = fresh()
        nodes.add(w)
        sort[w] = sort[x]
        level[w] = lam
        order.add((w, x))
        for u in cur.strictly_below(x):
            if level[u] < lam:
                order.add((u, w))
            elif lam < level[u]:
                order.add((w, u))
        lim[x] = w
        lim[w] = w
        return True

    # pre: total on nodes at successor levels
    for x in sorted_nodes:
        if x in pre or level[x].is_limit:
            continue
        lp = level[x].predecessor()
        anc = [u for u in cur.strictly_below(x) if level[u] == lp]
        if anc:
            pre[x] = anc[0]
            suc.setdefault((anc[0], x), x)
            return True
        w = fresh()
        nodes.add(w)
        sort[w] = sort[x]
        level[w] = lp
        order.add((w, x))
        for u in cur.strictly_below(x):
            if level[u] < lp:
                order.add((u, w))
            elif lp < level[u]:
                order.add((w, u))
        pre[x] = w
        suc[(w, x)] = x
        return True

    # meet: total on same-sort pairs
    for eta in cur.shape.indices:
        ns = cur.nodes_of_sort(eta)
        for x, y in itertools.combinations_with_replacement(sorted(ns), 2):
            if _mk(x, y) in meet:
                continue
            if cur.leq(x, y):
                meet[_mk(x, y)] = x
                return True
            if cur.leq(y, x):
                meet[_mk(x, y)] = y
                return True
            common = cur.strictly_below(x) & cur.strictly_below(y)
            if common:
                m = max(common, key=lambda c: len(cur.strictly_below(c)))
                meet[_mk(x, y)] = m
                return True
            rx = min(cur.strictly_below(x) | {x},
                     key=lambda c: len(cur.strictly_below(c)))
            ry = min(cur.strictly_below(y) | {y},
                     key=lambda c: len(cur.strictly_below(c)))
            if level[rx].is_zero or level[ry].is_zero:
                raise CannotComplete(
                    "meet of %r,%r forced below a level-0 node" % (x, y))
            z = fresh()
            nodes.add(z)
            sort[z] = eta
            level[z] = Ordinal()
            order.add((z, rx))
            order.add((z, ry))
            meet[_mk(x, y)] = z
            lim[z] = z
            return True

    # suc: total on finite-gap comparable pairs; declared on crossing
    # pairs whenever the required node already exists
    for eta in cur.shape.indices:
        ns = sorted(cur.nodes_of_sort(eta))
        for x, y in itertools.permutations(ns, 2):
            if (x, y) in suc or not cur.lt(x, y):
                continue
            target = level[x].plus(1)
            cands = [z for z in ns
                     if level[z] == target and cur.lt(x, z) and cur.leq(z, y)]
            if cands:
                suc[(x, y)] = cands[0]
                return True
            if not _finite_gap(level[x], level[y]):
                continue
            z = fresh()
            nodes.add(z)
            sort[z] = eta
            level[z] = target
            order.add((x, z))
            for v in ns:
                if cur.lt(x, v) and cur.leq(v, y):
                    order.add((z, v))
            suc[(x, y)] = z
            suc[(x, z)] = z
            pre[z] = x
            lx = lim.get(x)
            if lx is not None:
                lim[z] = lx if level[x] != level[x].limb() else x
            return True

    # G: total on declared successors along each shape edge
    for edge in cur.shape.suc_pairs():
        e1, e2 = edge
        table = gmap.setdefault(edge, {})
        missing = [x for x in sorted(cur.suc_members(e1)) if x not in table]
        if not missing:
            continue
        x = missing[0]
        cls = _regressive_class(cur, e1, x)
        declared = sorted({table[y] for y in cls if y in table})
        if declared:
            for y in cls:
                table.setdefault(y, declared[0])
            return True
        ns2 = cur.nodes_of_sort(e2)
        if not ns2:
            r = fresh()
            nodes.add(r)
            sort[r] = e2
            level[r] = Ordinal()
            lim[r] = r
            parent = r
        else:
            mins = cur.minimal_nodes(e2)
            if len(mins) > 1:
                continue  # meets will merge the components first
            parent = mins[0]
        t = fresh()
        nodes.add(t)
        sort[t] = e2
        level[t] = level[parent].plus(1)
        order.add((parent, t))
        if parent in cur.nodes:
            for u in cur.strictly_below(parent):
                order.add((u, t))
        pre[t] = parent
        suc[(parent, t)] = t
        if level[parent].is_limit:
            lim[t] = parent
        for y in cls:
            table[y] = t
        return True

    return False


def _regressive_class(f: Fragment, eta: str, x: str) -> list[str]:
    """Connected component of x under "comparable successors sharing lim"."""
    members = {x}
    frontier = [x]
    sucs = f.suc_members(eta)
    while frontier:
        a = frontier.pop()
        for b in sucs:
            if (b not in members and f.comparable(a, b)
                    and f.lim.get(a) == f.lim.get(b)):
                members.add(b)
                frontier.append(b)
    return sorted(members)


def is_closed(f: Fragment) -> bool:
    """All tables total over their intended desk-scale domains."""
    for x in f.nodes:
        if f.sort.get(x) is None:
            continue
        if x not in f.lim:
            return False
        if not f.level[x].is_limit and x not in f.pre:
            return False
    for eta in f.shape.indices:
        ns = sorted(f.nodes_of_sort(eta))
        for x, y in itertools.combinations_with_replacement(ns, 2):
            if _mk(x, y) not in f.meet:
                return False
        for x, y in itertools.permutations(ns, 2):
            if (f.lt(x, y) and _finite_gap(f.level[x], f.level[y])
                    and (x, y) not in f.suc):
                return False
    for edge in f.shape.suc_pairs():
        table = f.gmap.get(edge, {})
        for x in f.suc_members(edge[0]):
            if x not in table:
                return False
    return True


# ---------------------------------------------------------------------------
# closure operators


def _cl_wedge(f: Fragment, s: frozenset[str]) -> frozenset[str]:
    extra = set()
    for x, y in itertools.combinations_with_replacement(sorted(s), 2):
        if f.sort.get(x) is not None and f.sort.get(x) == f.sort.get(y):
            m = f.meet_of(x, y)
            if m is not None:
                extra.add(m)
    return s | extra


def _cl_g(f: Fragment, s: frozenset[str]) -> frozenset[str]:
    extra = set()
    for edge in f.shape.suc_pairs():
        table = f.gmap.get(edge, {})
        for x in s:
            if x in table:
                extra.add(table[x])
    return s | extra


def _cl_lim(f: Fragment, s: frozenset[str]) -> frozenset[str]:
    return s | {f.lim[x] for x in s if x in f.lim}


def _cl_suc(f: Fragment, s: frozenset[str]) -> frozenset[str]:
    extra = set()
    for x, y in itertools.permutations(sorted(s), 2):
        v = f.suc.get((x, y))
        if v is not None:
            extra.add(v)
    for x in s:
        if x in f.pre:
            extra.add(f.pre[x])
    return s | extra


def _cl_zero(f: Fragment, s: frozenset[str]) -> frozenset[str]:
    s = s | frozenset(f.constants.values())
    for _ in range(f.shape.longest_branch()):
        s = _cl_g(f, _cl_lim(f, _cl_wedge(f, s)))
    return s


def _cl_one(f: Fragment, s: frozenset[str]) -> frozenset[str]:
    return _cl_zero(f, _cl_suc(f, s))


def closure(f: Fragment, a, variant="zero") -> frozenset[str]:
    """Closure of the node set `a` under the chosen operator family.

    variant: "wedge" | "g" | "lim" | "suc" | "zero" | "one" | natural k.
    The rank-k variant applies the one-step closure k times on top of
    the rank-0 closure, so it contains every term value of successor
    rank at most k over the generators.
    """
    if not is_closed(f):
        raise NotClosed("closure requires a completed fragment")
    s = frozenset(a)
    for x in s:
        if x not in set(f.nodes):
            raise KeyError("unknown node %r" % x)
    if variant == "wedge":
        return _cl_wedge(f, s)
    if variant == "g":
        return _cl_g(f, s)
    if variant == "lim":
        return _cl_lim(f, s)
    if variant == "suc":
        return _cl_suc(f, s)
    if variant == "zero":
        return _cl_zero(f, s)
    if variant == "one":
        return _cl_one(f, s)
    if isinstance(variant, int) and variant >= 0:
        s = _cl_zero(f, s)
        for _ in range(variant):
            nxt = _cl_one(f, s)
            if nxt == s:
                break
            s = nxt
        return s
    raise ValueError("unknown closure variant %r" % (variant,))


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Term:
    op: str                      # var | const | wedge | suc | pre | lim | g
    args: tuple["Term", ...] = ()
    data: object = None          # var index / constant key / g edge

    @staticmethod
    def var(i: int) -> "Term":
        return Term("var", (), i)

    @staticmethod
    def const(eta: str, i: int) -> "Term":
        return Term("const", (), (eta, i))

    @staticmethod
    def wedge(t1: "Term", t2: "Term") -> "Term":
        return Term("wedge", (t1, t2))

    @staticmethod
    def suc(t1: "Term", t2: "Term") -> "Term":
        return Term("suc", (t1, t2))

    @staticmethod
    def pre(t: "Term") -> "Term":
        return Term("pre", (t,))

    @staticmethod
    def lim(t: "Term") -> "Term":
        return Term("lim", (t,))

    @staticmethod
    def g(t: "Term", edge: tuple[str, str] | None = None) -> "Term":
        return Term("g", (t,), edge)

    def __str__(self) -> str:
        if self.op == "var":
            return "x%d" % self.data
        if self.op == "const":
            return "c(%s,%d)" % self.data
        if self.op == "wedge":
            return "(%s^%s)" % self.args
        if self.op == "suc":
            return "suc(%s,%s)" % self.args
        if self.op == "g":
            return "G(%s)" % self.args
        return "%s(%s)" % (self.op, self.args[0])


def r_suc(t: Term) -> int:
    """Successor rank: suc/pre add one, the other operators carry the max."""
    if t.op in ("var", "const"):
        return 0
    ranks = [r_suc(a) for a in t.args]
    if t.op in ("suc", "pre"):
        return max(ranks) + 1
    return max(ranks)


def eval_term(f: Fragment, t: Term, assignment) -> str:
    """Value of t under the fragment's declared tables.

    assignment: sequence or map from variable index to node id.
    Raises SortError on ill-sorted arguments, UndefinedTerm when a
    required table entry is missing (including arguments outside an
    operator's intended domain).
    """
    if t.op == "var":
        try:
            return assignment[t.data]
        except (KeyError, IndexError):
            raise SortError("unbound variable x%d" % t.data)
    if t.op == "const":
        v = f.constants.get(t.data)
        if v is None:
            raise UndefinedTerm("constant %r not declared" % (t.data,))
        return v
    vals = [eval_term(f, a, assignment) for a in t.args]
    sorts = [f.sort.get(v) for v in vals]
    if any(s is None for s in sorts):
        raise SortError("unsorted argument in %s" % t)
    if t.op == "wedge":
        if sorts[0] != sorts[1]:
            raise SortError("meet across sorts in %s" % t)
        m = f.meet_of(vals[0], vals[1])
        if m is None:
            raise UndefinedTerm("meet(%r,%r) not declared" % tuple(vals))
        return m
    if t.op == "suc":
        if sorts[0] != sorts[1]:
            raise SortError("suc across sorts in %s" % t)
        if not f.lt(vals[0], vals[1]):
            raise UndefinedTerm("suc outside domain: %r !< %r" % tuple(vals))
        s = f.suc.get((vals[0], vals[1]))
        if s is None:
            raise UndefinedTerm("suc(%r,%r) not declared" % tuple(vals))
        return s
    if t.op == "pre":
        p = f.pre.get(vals[0])
        if p is None:
            raise UndefinedTerm("pre(%r) not declared" % vals[0])
        return p
    if t.op == "lim":
        l = f.lim.get(vals[0])
        if l is None:
            raise UndefinedTerm("lim(%r) not declared" % vals[0])
        return l
    if t.op == "g":
        edge = t.data
        if edge is None:
            kids = f.shape.children(sorts[0])
            if len(kids) != 1:
                raise SortError("ambiguous level-map edge in %s" % t)
            edge = (sorts[0], kids[0])
        if edge not in set(f.shape.suc_pairs()) or sorts[0] != edge[0]:
            raise SortError("bad level-map edge %r in %s" % (edge, t))
        v = f.g_of(edge, vals[0])
        if v is None:
            raise UndefinedTerm("G%r(%r) not declared" % (edge, vals[0]))
        return v
    raise ValueError("unknown operator %r" % t.op)


# ---------------------------------------------------------------------------
# distance


def distance(f: Fragment, x: str, y: str):
    """Number of successor steps between comparable same-sort nodes,
    math.inf when the level gap is infinite or the intermediate chain
    is not materialized."""
    if f.sort.get(x) is None or f.sort.get(x) != f.sort.get(y):
        raise Incomparable("nodes %r,%r not in one sort" % (x, y))
    if x == y:
        return 0
    if f.lt(y, x):
        x, y = y, x
    elif not f.lt(x, y):
        raise Incomparable("nodes %r,%r incomparable" % (x, y))
    lx, ly = f.level[x], f.level[y]
    if lx.limb() != ly.limb():
        return INF
    n = ly.mod_omega() - lx.mod_omega()
    for j in range(1, n):
        step = lx.plus(j)
        if not any(f.lt(x, z) and f.lt(z, y) and f.level[z] == step
                   for z in f.nodes_of_sort(f.sort[x])):
            return INF
    return n
