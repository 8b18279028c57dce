import pytest

from treedesk.glue import (
    AxiomViolated, DisjointnessViolated, GlueSpec, build_control,
    build_witness, reindex, star_construct,
)
from treedesk.indis import search_indiscernible
from treedesk.ordinal import Ordinal
from treedesk.shape import POINT_SHAPE
from treedesk.structure import from_standard_tree, validate


def _base(prefix="b"):
    w = Ordinal.omega()
    names = {prefix + "0": Ordinal(), prefix + "l": w,
             prefix + "s": w.plus(1)}
    edges = {(prefix + "0", prefix + "l"), (prefix + "0", prefix + "s"),
             (prefix + "l", prefix + "s")}
    return from_standard_tree(names, edges)


def test_reindex_format():
    assert reindex("r", 0, "0") == "r.0.0"


def test_star_construct_attaches_boundary():
    g = GlueSpec(POINT_SHAPE, _base("b"),
                 {("r", 0): _base("w")},
                 {("r", 0): {"bs": "w0"}})
    out = star_construct(g)
    assert "r.0.r" in out.shape.indices
    assert out.sort["w0"] == "r.0.r"
    assert out.sort["b0"] == "r"
    assert out.g_of(("r", "r.0.r"), "bs") == "w0"
    assert out.mode == "theta"
    assert not validate(out)


def test_star_construct_rejects_shared_ids():
    g = GlueSpec(POINT_SHAPE, _base("b"), {("r", 0): _base("b")}, {})
    with pytest.raises(DisjointnessViolated):
        star_construct(g)


def test_star_construct_rejects_unknown_attachment():
    g = GlueSpec(POINT_SHAPE, _base("b"), {("zz", 0): _base("w")}, {})
    with pytest.raises(AxiomViolated):
        star_construct(g)


def test_star_construct_rejects_non_regressive_connector():
    # target at a level >= the source level
    g = GlueSpec(POINT_SHAPE, _base("b"),
                 {("r", 0): _base("w")},
                 {("r", 0): {"b0": "ws"}})
    with pytest.raises(AxiomViolated):
        star_construct(g)


def test_star_construct_rejects_dangling_connector():
    g = GlueSpec(POINT_SHAPE, _base("b"), {},
                 {("r", 0): {"bs": "b0"}})
    with pytest.raises(AxiomViolated):
        star_construct(g)


@pytest.mark.parametrize("case", ["theta", "singular", "regular",
                                  "inaccessible"])
def test_build_witness_validates_and_blocks_windows(case):
    w, a_set = build_witness(case)
    assert not validate(w)
    assert set(a_set) <= set(w.nodes)
    assert search_indiscernible(w, a_set, length=4, k=1, r=2) is None


def test_build_witness_unknown_case():
    with pytest.raises(ValueError):
        build_witness("nope")


def test_build_control_admits_window():
    ctrl, a_set = build_control(12)
    assert not validate(ctrl)
    assert search_indiscernible(ctrl, a_set, length=4, k=1, r=2) is not None
