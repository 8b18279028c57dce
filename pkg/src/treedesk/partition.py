"""Partition-calculus machinery at desk scale.

Four layers: tuple colorings with exhaustive homogeneous-subsequence
search; the reduction producing a coloring from a fragment sequence
(homogeneity then certifies indiscernibility); triples (d, tree, E) of
a colored standard tree with a neighbor-refining equivalence, together
with the hardness search; and the operator that builds, from such a
triple, the tree of guess-sequences (Gamma, eta) with its derived
coloring and equivalence.

Colors are naturals throughout.  Base colorings may bound their
colors; derived colorings exceed the bound through the Cantor pairing.
Gamma components are stored only at limit positions, and position 0
counts as a limit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .ordinal import Ordinal
from .qe import eval_formula
from .structure import Fragment, from_standard_tree, validate
from .types import BudgetExceeded, atomic_basis, tp_code


# ---------------------------------------------------------------------------
# Cantor pairing


def pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("naturals expected")
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(x: int) -> tuple[int, int]:
    if x < 0:
        raise ValueError("natural expected")
    w = (math.isqrt(8 * x + 1) - 1) // 2
    b = x - w * (w + 1) // 2
    return (w - b, b)


def pi1(x: int) -> int:
    return unpair(x)[0]


def pi2(x: int) -> int:
    return unpair(x)[1]


# ---------------------------------------------------------------------------
# colorings and homogeneous subsequences


@dataclass
class Coloring:
    """Coloring of strictly increasing tuples from [n]."""
    n: int
    arity: int
    table: dict[tuple[int, ...], int] = field(default_factory=dict)
    default: int = 0

    def __post_init__(self):
        for key in self.table:
            if len(key) > self.arity:
                raise ValueError("tuple %r longer than arity bound" % (key,))
            if any(not (0 <= i < self.n) for i in key):
                raise ValueError("tuple %r outside ground set" % (key,))
            if any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
                raise ValueError("tuple %r not strictly increasing" % (key,))

    def color(self, key) -> int:
        key = tuple(key)
        if any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
            raise ValueError("tuple %r not strictly increasing" % (key,))
        return self.table.get(key, self.default)


def find_homogeneous(c: Coloring, delta: int, budget: int = 10 ** 7):
    """Lexicographically least subsequence of [n] of length delta on
    whose increasing tuples the color depends only on tuple length, as
    (indices, {length: color}), or None."""
    if delta > c.n:
        raise ValueError("delta exceeds the ground size")
    if c.arity < 2:
        raise ValueError("arity bound must be at least 2")
    spent = 0
    for idxs in itertools.combinations(range(c.n), delta):
        per_len = {}
        ok = True
        for m in range(1, min(c.arity, delta) + 1):
            for sub in itertools.combinations(idxs, m):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded("homogeneity search budget")
                col = c.color(sub)
                if m not in per_len:
                    per_len[m] = col
                elif per_len[m] != col:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return idxs, per_len
    return None


def coloring_from_sequence(f: Fragment, seq, k: int,
                           arity: int | None = None) -> Coloring:
    """Coloring of index tuples of the sequence: odd lengths get 0; a
    tuple of length 2m gets 0 when its halves have equal rank-k types,
    else 1 plus the index of the least separating atomic formula."""
    seq = list(seq)
    n = len(seq)
    if arity is None:
        arity = n
    table = {}
    basis_cache = {}
    for m in range(1, arity // 2 + 1):
        for idxs in itertools.combinations(range(n), 2 * m):
            left = tuple(seq[i] for i in idxs[:m])
            right = tuple(seq[i] for i in idxs[m:])
            if tp_code(f, left, (), k) == tp_code(f, right, (), k):
                continue
            if m not in basis_cache:
                sorts = tuple(f.sort[x] for x in left)
                basis_cache[m] = atomic_basis(m, k, f.shape, sorts)
            basis = basis_cache[m]
            col = 1 + len(basis)
            for i, (rel, t1, t2) in enumerate(basis):
                phi = ("atom", rel, t1, t2)
                if eval_formula(f, phi, left) != eval_formula(f, phi, right):
                    col = 1 + i
                    break
            table[idxs] = col
    return Coloring(n, arity, table, 0)


# ---------------------------------------------------------------------------
# colored trees with a neighbor-refining equivalence


@dataclass
class PTriple:
    """A single-sort standard tree, a coloring d of its increasing
    tuples of successor-of-limit nodes, and an equivalence E refining
    the neighbor relation (equal sets of strict predecessors)."""
    tree: Fragment
    d: dict[tuple[str, ...], int]
    e: dict[str, object]     # node -> class label

    def suc_lim(self) -> list[str]:
        out = [x for x in self.tree.nodes
               if self.tree.sort.get(x) is not None
               and self.tree.level[x].mod_omega() == 1]
        return sorted(out, key=lambda x: (self.tree.level[x].terms, x))

    def nb_class(self, x: str) -> frozenset[str]:
        return frozenset(y for y in self.tree.nodes if self.tree.lt(y, x))

    def d_of(self, key) -> int:
        return self.d[tuple(key)]


def validate_ptriple(p: PTriple) -> list[str]:
    rep = []
    bad = validate(p.tree)
    if bad:
        rep.append("tree-invalid: %s" % bad[0])
        return rep
    f = p.tree
    sorted_nodes = [x for x in f.nodes if f.sort.get(x) is not None]
    for x in sorted_nodes:
        if x not in p.e:
            rep.append("e-missing: %r" % x)
    classes: dict[object, list[str]] = {}
    for x in sorted_nodes:
        if x in p.e:
            classes.setdefault(p.e[x], []).append(x)
    for label, xs in classes.items():
        nbs = {p.nb_class(x) for x in xs}
        if len(nbs) > 1:
            rep.append("e-refines: class %r crosses neighbor classes"
                       % (label,))
    for x, y in itertools.combinations(sorted_nodes, 2):
        if p.nb_class(x) != p.nb_class(y):
            continue
        lx = f.level[x]
        if lx.mod_omega() != 1 and f.level[y].mod_omega() != 1:
            if p.e.get(x) != p.e.get(y):
                rep.append("e-off-levels: %r,%r split outside the "
                           "successor-of-limit levels" % (x, y))
    for x, y in itertools.combinations(sorted_nodes, 2):
        if (f.level[x].is_limit and f.level[y].is_limit
                and p.e.get(x) == p.e.get(y) and x in p.e):
            rep.append("e-limit-equality: %r,%r" % (x, y))
    sl = set(p.suc_lim())
    for key in p.d:
        if any(x not in sl for x in key):
            rep.append("d-key-sort: %r" % (key,))
        elif any(not f.lt(key[i], key[i + 1]) for i in range(len(key) - 1)):
            rep.append("d-key-order: %r" % (key,))
    return rep


def is_hard(p: PTriple, delta: int, budget: int = 10 ** 6) -> bool:
    """No increasing delta-sequence of successor-of-limit nodes has a
    color depending only on tuple length."""
    sl = p.suc_lim()
    f = p.tree
    spent = 0
    for cand in itertools.combinations(sl, delta):
        if any(not f.lt(cand[i], cand[i + 1]) for i in range(delta - 1)):
            continue
        per_len = {}
        ok = True
        for m in range(1, delta + 1):
            for sub in itertools.combinations(cand, m):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded("hardness search budget")
                if sub not in p.d:
                    ok = False
                    break
                col = p.d[sub]
                if m not in per_len:
                    per_len[m] = col
                elif per_len[m] != col:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return False
    return True


def p_from_coloring(c: Coloring, levels) -> PTriple:
    """The chain with the given strictly increasing levels, colored by
    c on its successor-of-limit positions, with E the equality."""
    levels = list(levels)
    for a, b in zip(levels, levels[1:]):
        if not a < b:
            raise ValueError("levels must be strictly increasing")
    width = max(3, len(str(len(levels))))
    names = ["n%0*d" % (width, i) for i in range(len(levels))]
    lv = dict(zip(names, levels))
    edges = set(itertools.combinations(names, 2))
    tree = from_standard_tree(lv, edges)
    p = PTriple(tree, {}, {x: x for x in names})
    pos = {x: i for i, x in enumerate(names)}
    sl = p.suc_lim()
    for m in range(1, min(len(sl), c.arity) + 1):
        for key in itertools.combinations(sl, m):
            p.d[key] = c.color(tuple(pos[x] for x in key))
    return p


# ---------------------------------------------------------------------------
# d-types


@dataclass
class DType:
    """Equations d(a_0,...,a_{n-1}, x) = color over a linearly ordered
    support; the empty key is the bare d(x) = color equation."""
    support: tuple[str, ...]
    eqs: dict[tuple[str, ...], int]

    def restrict(self, b) -> "DType":
        b = set(b)
        return DType(tuple(x for x in self.support if x in b),
                     {key: v for key, v in self.eqs.items()
                      if all(a in b for a in key)})

    def is_complete(self) -> bool:
        keys = set(self.eqs)
        for m in range(len(self.support) + 1):
            for key in itertools.combinations(self.support, m):
                if key not in keys:
                    return False
        return True


def satisfies(p: PTriple, t: str, dt: DType) -> bool:
    """t realizes every equation whose tuple sits strictly below t."""
    f = p.tree
    for key, eps in dt.eqs.items():
        if key and not f.lt(key[-1], t):
            continue
        full = key + (t,)
        if full not in p.d or p.d[full] != eps:
            return False
    return True


def dtp(p: PTriple, t: str, a_set) -> DType:
    """The complete d-type realized by t over the set."""
    f = p.tree
    support = tuple(sorted(a_set, key=lambda x: (f.level[x].terms, x)))
    for x, y in zip(support, support[1:]):
        if not f.lt(x, y):
            raise ValueError("support not linearly ordered")
    eqs = {}
    for m in range(len(support) + 1):
        for key in itertools.combinations(support, m):
            if key and not f.lt(key[-1], t):
                continue
            full = key + (t,)
            if full in p.d:
                eqs[key] = p.d[full]
    return DType(support, eqs)


def enumerate_complete_dtypes(p: PTriple, a_set, colors: int,
                              budget_bits: int = 22) -> list[DType]:
    """All complete d-types over the set: one color choice per
    increasing tuple of the support, the empty tuple included."""
    f = p.tree
    support = tuple(sorted(a_set, key=lambda x: (f.level[x].terms, x)))
    for x, y in zip(support, support[1:]):
        if not f.lt(x, y):
            raise ValueError("support not linearly ordered")
    keys = [key for m in range(len(support) + 1)
            for key in itertools.combinations(support, m)]
    if len(keys) * math.log2(max(colors, 2)) > budget_bits:
        raise BudgetExceeded("type space too large: %d keys, %d colors"
                             % (len(keys), colors))
    out = []
    for assignment in itertools.product(range(colors), repeat=len(keys)):
        out.append(DType(support, dict(zip(keys, assignment))))
    return out


# ---------------------------------------------------------------------------
# the guess-sequence tree


@dataclass
class QNode:
    """A pair (Gamma, eta): an increasing sequence eta of
    successor-of-limit nodes of the base triple, with complete d-types
    attached at the limit positions."""
    eta: tuple[str, ...]
    gammas: dict[int, DType] = field(default_factory=dict)

    @property
    def lg(self) -> int:
        return len(self.eta)

    @property
    def last(self) -> str:
        if not self.eta:
            raise ValueError("the empty guess sequence has no last entry")
        return self.eta[-1]

    def prefix(self, beta: int) -> "QNode":
        return QNode(self.eta[:beta],
                     {i: g for i, g in self.gammas.items() if i < beta})

    def is_prefix_of(self, other: "QNode") -> bool:
        return (self.eta == other.eta[:self.lg]
                and self.gammas == other.prefix(self.lg).gammas)


def _limits(alpha: int) -> list[int]:
    # 0 is the only limit position at finite lengths
    return [0] if alpha > 0 else []


def validate_qnode(p: PTriple, a: QNode) -> list[str]:
    """Clause-by-clause check of membership in the guess-sequence tree."""
    rep = []
    f = p.tree
    sl = set(p.suc_lim())
    alpha = a.lg
    for t in a.eta:
        if t not in sl:
            rep.append("eta-range: %r" % t)
    for i in range(alpha - 1):
        if not f.lt(a.eta[i], a.eta[i + 1]):
            rep.append("eta-increasing: positions %d,%d" % (i, i + 1))
    if set(a.gammas) != set(_limits(alpha)):
        rep.append("gamma-positions: %r" % sorted(a.gammas))
        return rep
    for beta in _limits(alpha):
        g = a.gammas[beta]
        want = tuple(a.eta[:beta + 1])
        if g.support != want:
            rep.append("gamma-support: position %d" % beta)
        elif not g.is_complete():
            rep.append("gamma-incomplete: position %d" % beta)
    if rep:
        return rep
    if alpha > 0:
        g0 = a.gammas[0]
        if not satisfies(p, a.eta[0], g0.restrict(())):
            rep.append("zero-satisfies")
        for i, gi in a.gammas.items():
            for j, gj in a.gammas.items():
                if i < j and not all(gj.eqs.get(key) == v
                                     for key, v in gi.eqs.items()):
                    rep.append("gamma-monotone: %d,%d" % (i, j))
        for beta in range(1, alpha):
            for bp in _limits(alpha):
                if bp < beta and not satisfies(p, a.eta[beta], a.gammas[bp]):
                    rep.append("realized: position %d over %d" % (beta, bp))
    for beta in range(alpha):
        g0 = a.gammas[0]
        for t in sl:
            if not f.lt(t, a.eta[beta]):
                continue
            if any(not f.lt(a.eta[bp], t) for bp in range(beta)):
                continue
            if not satisfies(p, t, g0.restrict(())):
                continue
            if all(satisfies(p, t, a.gammas[bp])
                   for bp in _limits(alpha) if bp < beta):
                rep.append("tightness: position %d witnessed by %r"
                           % (beta, t))
    return rep


def q_enumerate(p: PTriple, alpha_max: int, colors: int,
                c_levels: Coloring | None = None,
                budget: int = 10 ** 5):
    """The complete bounded-length fragment of the guess-sequence
    triple: every QNode of length <= alpha_max passing all clauses,
    packaged as a PTriple (prefix order, level = length) together with
    the node-id -> QNode map."""
    sl = p.suc_lim()
    if len(sl) > 6:
        raise BudgetExceeded("base triple too large: %d candidate nodes"
                             % len(sl))
    if alpha_max > len(sl):
        raise ValueError("alpha_max exceeds the candidate count")
    f = p.tree
    by_len: list[list[QNode]] = [[QNode(())]]
    for alpha in range(1, alpha_max + 1):
        layer = []
        if alpha == 1:
            for t in sl:
                for g0 in enumerate_complete_dtypes(p, (t,), colors):
                    cand = QNode((t,), {0: g0})
                    if not validate_qnode(p, cand):
                        layer.append(cand)
        else:
            for base in by_len[alpha - 1]:
                for t in sl:
                    if not f.lt(base.last, t):
                        continue
                    cand = QNode(base.eta + (t,), dict(base.gammas))
                    if not validate_qnode(p, cand):
                        layer.append(cand)
        if len(layer) > budget:
            raise BudgetExceeded("guess-sequence layer too large")
        by_len.append(layer)
    qnodes = [a for layer in by_len for a in layer]
    qnodes.sort(key=_qnode_key)
    width = max(3, len(str(len(qnodes))))
    ids = {}
    for i, a in enumerate(qnodes):
        ids["q%0*d" % (width, i)] = a
    levels = {nid: Ordinal.nat(a.lg) for nid, a in ids.items()}
    edges = {(x, y) for x, a in ids.items() for y, b in ids.items()
             if x != y and a.lg < b.lg and a.is_prefix_of(b)}
    tree = from_standard_tree(levels, edges)
    out = PTriple(tree, {}, {})
    # derived coloring on increasing successor-of-limit tuples
    for key in _increasing_suc_lim_tuples(out):
        out.d[key] = d_q(p, tuple(ids[x] for x in key), c_levels)
    # derived equivalence
    labels = {}
    for nid, a in sorted(ids.items()):
        for other, lab in labels.items():
            if e_q(p, a, ids[other]):
                labels[nid] = lab
                break
        else:
            labels[nid] = nid
    out.e = labels
    return out, ids


def _qnode_key(a: QNode):
    return (a.lg, a.eta,
            tuple((i, sorted(g.eqs.items())) for i, g in
                  sorted(a.gammas.items())))


def _increasing_suc_lim_tuples(p: PTriple, max_len: int = 4):
    sl = p.suc_lim()
    for m in range(1, max_len + 1):
        for key in itertools.combinations(sl, m):
            if all(p.tree.lt(key[i], key[i + 1]) for i in range(m - 1)):
                yield key


def d_q(p: PTriple, qnodes: tuple[QNode, ...],
        c_levels: Coloring | None = None) -> int:
    """Derived color of an increasing tuple of guess sequences: the
    color the top Gamma assigns to the tuple of last entries, paired
    with the base coloring of the lengths."""
    n = len(qnodes)
    top = qnodes[-1]
    gpos = top.lg - 1
    if gpos not in top.gammas:
        raise ValueError("top node is not at a successor-of-limit level")
    tkey = tuple(a.last for a in qnodes)
    eps = top.gammas[gpos].eqs[tkey]
    if c_levels is not None:
        cval = c_levels.color(tuple(a.lg for a in qnodes))
    else:
        cval = 0
    return pair(eps, cval)


def e_q(p: PTriple, a: QNode, b: QNode) -> bool:
    """Derived equivalence: same length, equal proper prefixes, equal
    bare color equations, and matching top-type equations through the
    shared support."""
    if a.lg != b.lg:
        return False
    alpha = a.lg
    if alpha == 0:
        return True
    for beta in range(alpha):
        if a.prefix(beta) != b.prefix(beta):
            return False
    if a.gammas[0].eqs.get(()) != b.gammas[0].eqs.get(()):
        return False
    beta = max(i for i in _limits(alpha))
    ga, gb = a.gammas[beta], b.gammas[beta]
    for m in range(beta + 1):
        for pos in itertools.combinations(range(beta), m):
            ka = tuple(a.eta[i] for i in pos) + (a.eta[beta],)
            kb = tuple(b.eta[i] for i in pos) + (b.eta[beta],)
            if ga.eqs.get(ka) != gb.eqs.get(kb):
                return False
    return True


def lift_element(p: PTriple, t: str, colors: int = 2) -> QNode:
    """Greedy guess sequence ending at t: extend below t with the least
    admissible successor-of-limit node while one exists, attaching the
    d-type of t over the support at the limit position."""
    f = p.tree
    sl = [s for s in p.suc_lim() if f.lt(s, t)]
    eta: list[str] = []
    gamma0: DType | None = None
    while True:
        if not eta:
            cands = [s for s in sl
                     if satisfies(p, s, dtp(p, t, (s,)).restrict(()))]
        else:
            cands = [s for s in sl if f.lt(eta[-1], s)
                     and satisfies(p, s, gamma0)]
        if not cands:
            break
        eta.append(cands[0])
        if len(eta) == 1:
            gamma0 = dtp(p, t, (eta[0],))
    if not eta:
        g0 = dtp(p, t, (t,))
        for m in range(2):
            for key in itertools.combinations((t,), m):
                g0.eqs.setdefault(key, 0)
        return QNode((t,), {0: g0})
    return QNode(tuple(eta) + (t,), {0: gamma0})
