import itertools

import pytest
from hypothesis import given, strategies as st

from treedesk.fixtures import hard_six, six_chain_base
from treedesk.ordinal import Ordinal
from treedesk.partition import (
    Coloring, DType, PTriple, coloring_from_sequence, d_q, dtp,
    enumerate_complete_dtypes, find_homogeneous, is_hard, lift_element,
    p_from_coloring, pair, pi1, pi2, q_enumerate, satisfies, unpair,
    validate_ptriple, validate_qnode,
)


@given(st.integers(0, 500), st.integers(0, 500))
def test_pairing_round_trip(a, b):
    assert unpair(pair(a, b)) == (a, b)
    assert pi1(pair(a, b)) == a
    assert pi2(pair(a, b)) == b


def test_pairing_rejects_negatives():
    with pytest.raises(ValueError):
        pair(-1, 0)
    with pytest.raises(ValueError):
        unpair(-1)


def test_coloring_rejects_non_increasing_keys():
    c = Coloring(4, 2, {(0, 1): 1}, 0)
    assert c.color((0, 1)) == 1
    assert c.color((0, 2)) == 0
    with pytest.raises(ValueError):
        c.color((1, 0))


def test_find_homogeneous_least_witness():
    # constant coloring: the least triple is the lexicographic first
    c = Coloring(5, 2, {}, 0)
    idxs, per_len = find_homogeneous(c, 3)
    assert idxs == (0, 1, 2)
    assert per_len[2] == 0


def test_find_homogeneous_pentagon_has_none():
    table = {p: 1 if (p[1] - p[0]) in (1, 4) else 0
             for p in itertools.combinations(range(5), 2)}
    assert find_homogeneous(Coloring(5, 2, table, 0), 3) is None


def test_find_homogeneous_delta_bounds():
    c = Coloring(3, 2, {}, 0)
    with pytest.raises(ValueError):
        find_homogeneous(c, 4)


def test_coloring_from_sequence_homogeneous_on_chain_tail():
    from treedesk.structure import from_standard_tree
    levels = {"n%02d" % i: Ordinal.nat(i) for i in range(8)}
    names = sorted(levels)
    edges = {(names[i], names[j]) for i in range(8)
             for j in range(i + 1, 8)}
    f = from_standard_tree(levels, edges)
    col = coloring_from_sequence(f, names, k=0, arity=2)
    # at rank 0 every non-root entry has the same singleton type (itself
    # plus the root), so the tail is homogeneous with color 0; pairs
    # involving the root are separated
    tail = {col.color(p) for p in itertools.combinations(range(1, 8), 2)}
    assert tail == {0}
    with_root = {col.color((0, j)) for j in range(1, 8)}
    assert 0 not in with_root


def test_p_from_coloring_and_validate():
    p = six_chain_base()
    assert not validate_ptriple(p)
    assert p.suc_lim() == ["n001", "n003", "n005"]
    assert len([x for x in p.tree.nodes
                if p.tree.sort.get(x) is not None]) == 6


def test_hardness():
    assert is_hard(hard_six(), 3)
    # the all-zero coloring has homogeneous pairs, hence is not hard
    assert not is_hard(six_chain_base(), 2)


def test_validate_ptriple_catches_bad_d_key():
    p = six_chain_base()
    p.d[("n003", "n001")] = 0
    rep = validate_ptriple(p)
    assert any(r.startswith("d-key-order") for r in rep)


def test_complete_dtype_count():
    p = six_chain_base()
    sl = p.suc_lim()
    # one equation per subset of the support, empty set included
    for m in (1, 2):
        dts = enumerate_complete_dtypes(p, tuple(sl[:m]), 2)
        assert len(dts) == 2 ** (2 ** m)
        assert all(dt.is_complete() for dt in dts)


def test_dtp_satisfies_round_trip():
    p = six_chain_base()
    sl = p.suc_lim()
    g = dtp(p, sl[2], (sl[0], sl[1]))
    assert satisfies(p, sl[2], g)


def test_q_enumerate_structure():
    p = six_chain_base()
    q, ids = q_enumerate(p, alpha_max=2, colors=2)
    assert not validate_ptriple(q)
    for nid, a in ids.items():
        assert q.tree.level[nid] == Ordinal.nat(a.lg)
        assert not validate_qnode(p, a) or a.lg == 0
    # prefix order is the tree order
    for x, a in ids.items():
        for y, b in ids.items():
            if q.tree.lt(x, y):
                assert a.is_prefix_of(b)


def test_lift_element_bounded():
    p = six_chain_base()
    for t in p.suc_lim():
        a = lift_element(p, t)
        assert a.last == t
        assert not validate_qnode(p, a)
        assert Ordinal.nat(a.lg) <= p.tree.level[t]


def test_d_q_requires_top_gamma():
    p = six_chain_base()
    q, ids = q_enumerate(p, alpha_max=2, colors=2)
    two = [a for a in ids.values() if a.lg == 2]
    if two:
        with pytest.raises(ValueError):
            d_q(p, (two[0],))
