"""File formats: fragments, colorings, triples, glue specifications.

All documents are JSON.  Ordinals appear as literals in the grammar

    ordinal := "0" | term ("+" term)*
    term    := "w" ("^" nat)? ("*" nat)? | nat

and every list is serialized sorted by id, so files are diff-stable.
Parse errors carry a location string naming the section and offending
token.
"""

from __future__ import annotations

import json
import os

from .ordinal import Ordinal, OrdinalParseError
from .shape import ShapeTree
from .structure import Fragment, Term
from .partition import Coloring, PTriple
from .glue import GlueSpec


class InputError(ValueError):
    def __init__(self, message: str, location: str = ""):
        super().__init__("%s (at %s)" % (message, location) if location
                         else message)
        self.location = location


# ---------------------------------------------------------------------------
# shapes


def shape_to_dict(s: ShapeTree) -> dict:
    return {
        "indices": list(s.indices),
        "root": s.root,
        "parent": {i: s.parent[i] for i in sorted(s.parent)},
        "labels": {i: s.labels[i] for i in sorted(s.labels)},
    }


def shape_from_dict(doc: dict, location: str = "shape") -> ShapeTree:
    try:
        idxs = tuple(doc["indices"])
        root = doc.get("root")
        parent = dict(doc.get("parent", {}))
        labels = dict(doc.get("labels", {}))
    except (KeyError, TypeError) as exc:
        raise InputError("malformed shape section: %s" % exc, location)
    for i, p in parent.items():
        if i not in idxs or p not in idxs:
            raise InputError("parent edge %r -> %r uses unknown index"
                             % (i, p), location)
    return ShapeTree(idxs, root, parent, labels)


def _parse_level(text, location: str) -> Ordinal:
    try:
        return Ordinal.parse(text)
    except (OrdinalParseError, AttributeError, TypeError) as exc:
        raise InputError("malformed ordinal literal %r: %s" % (text, exc),
                         location)


# ---------------------------------------------------------------------------
# fragments


def fragment_to_dict(f: Fragment) -> dict:
    nodes = []
    for n in sorted(f.nodes):
        entry = {"id": n, "level": str(f.level[n])}
        if f.sort.get(n) is not None:
            entry["sort"] = f.sort[n]
        nodes.append(entry)
    return {
        "shape": shape_to_dict(f.shape),
        "nodes": nodes,
        "order": sorted([a, b] for a, b in f.order),
        "meet": sorted([x, y, m] for (x, y), m in f.meet.items()),
        "suc": sorted([x, y, v] for (x, y), v in f.suc.items()),
        "pre": sorted([x, v] for x, v in f.pre.items()),
        "lim": sorted([x, v] for x, v in f.lim.items()),
        "g": [{"edge": [e1, e2],
               "entries": sorted([x, v] for x, v in t.items())}
              for (e1, e2), t in sorted(f.gmap.items())],
        "constants": sorted([eta, i, c]
                            for (eta, i), c in f.constants.items()),
        "mode": f.mode,
    }


def fragment_from_dict(doc: dict, location: str = "fragment") -> Fragment:
    shape = shape_from_dict(doc.get("shape", {}), location + ".shape")
    sort = {}
    level = {}
    ids = set()
    for i, entry in enumerate(doc.get("nodes", [])):
        loc = "%s.nodes[%d]" % (location, i)
        if "id" not in entry:
            raise InputError("node entry without id", loc)
        nid = entry["id"]
        ids.add(nid)
        level[nid] = _parse_level(entry.get("level"), loc)
        if "sort" in entry:
            if entry["sort"] not in shape:
                raise InputError("unknown sort %r" % entry["sort"], loc)
            sort[nid] = entry["sort"]

    def ref(nid, loc):
        if nid not in ids:
            raise InputError("dangling node reference %r" % nid, loc)
        return nid

    order = set()
    for i, pair in enumerate(doc.get("order", [])):
        loc = "%s.order[%d]" % (location, i)
        a, b = pair
        order.add((ref(a, loc), ref(b, loc)))
    meet = {}
    for i, (x, y, m) in enumerate(doc.get("meet", [])):
        loc = "%s.meet[%d]" % (location, i)
        key = tuple(sorted((ref(x, loc), ref(y, loc))))
        meet[key] = ref(m, loc)
    suc = {}
    for i, (x, y, v) in enumerate(doc.get("suc", [])):
        loc = "%s.suc[%d]" % (location, i)
        suc[(ref(x, loc), ref(y, loc))] = ref(v, loc)
    pre = {}
    for i, (x, v) in enumerate(doc.get("pre", [])):
        loc = "%s.pre[%d]" % (location, i)
        pre[ref(x, loc)] = ref(v, loc)
    lim = {}
    for i, (x, v) in enumerate(doc.get("lim", [])):
        loc = "%s.lim[%d]" % (location, i)
        lim[ref(x, loc)] = ref(v, loc)
    gmap = {}
    for i, block in enumerate(doc.get("g", [])):
        loc = "%s.g[%d]" % (location, i)
        e1, e2 = block.get("edge", (None, None))
        if e1 not in shape or e2 not in shape:
            raise InputError("unknown level-map edge %r" % ((e1, e2),), loc)
        gmap[(e1, e2)] = {ref(x, loc): ref(v, loc)
                          for x, v in block.get("entries", [])}
    constants = {}
    for i, (eta, idx, c) in enumerate(doc.get("constants", [])):
        loc = "%s.constants[%d]" % (location, i)
        if eta not in shape:
            raise InputError("unknown sort %r in constant" % eta, loc)
        constants[(eta, int(idx))] = ref(c, loc)
    mode = doc.get("mode", "base")
    if mode not in ("base", "theta", "classT"):
        raise InputError("unknown mode %r" % mode, location)
    return Fragment(shape, tuple(sorted(ids)), sort, level, order, meet,
                    suc, pre, lim, gmap, constants, mode)


def save_fragment(f: Fragment, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(fragment_to_dict(f), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_fragment(path: str) -> Fragment:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError("not valid JSON: %s" % exc, path)
    return fragment_from_dict(doc, path)


# ---------------------------------------------------------------------------
# colorings


def coloring_to_dict(c: Coloring) -> dict:
    return {"n": c.n, "arity": c.arity, "default": c.default,
            "entries": sorted([list(k), v] for k, v in c.table.items())}


def coloring_from_dict(doc: dict, location: str = "coloring") -> Coloring:
    try:
        table = {tuple(k): int(v) for k, v in doc.get("entries", [])}
        return Coloring(int(doc["n"]), int(doc["arity"]), table,
                        int(doc.get("default", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("malformed coloring: %s" % exc, location)


def load_coloring(path: str) -> Coloring:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError("not valid JSON: %s" % exc, path)
    return coloring_from_dict(doc, path)


def save_coloring(c: Coloring, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(coloring_to_dict(c), fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# triples


def ptriple_to_dict(p: PTriple) -> dict:
    return {"fragment": fragment_to_dict(p.tree),
            "d": sorted([list(k), v] for k, v in p.d.items()),
            "e": sorted([x, str(lab)] for x, lab in p.e.items())}


def ptriple_from_dict(doc: dict, location: str = "ptriple") -> PTriple:
    tree = fragment_from_dict(doc.get("fragment", {}),
                              location + ".fragment")
    ids = set(tree.nodes)
    d = {}
    for i, (key, v) in enumerate(doc.get("d", [])):
        loc = "%s.d[%d]" % (location, i)
        for x in key:
            if x not in ids:
                raise InputError("dangling node reference %r" % x, loc)
        d[tuple(key)] = int(v)
    e = {}
    for i, (x, lab) in enumerate(doc.get("e", [])):
        loc = "%s.e[%d]" % (location, i)
        if x not in ids:
            raise InputError("dangling node reference %r" % x, loc)
        e[x] = lab
    return PTriple(tree, d, e)


def load_ptriple(path: str) -> PTriple:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError("not valid JSON: %s" % exc, path)
    return ptriple_from_dict(doc, path)


def save_ptriple(p: PTriple, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(ptriple_to_dict(p), fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# glue specifications (reference fragment files by path)


def load_gluespec(path: str) -> GlueSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError("not valid JSON: %s" % exc, path)
    here = os.path.dirname(os.path.abspath(path))

    def resolve(rel):
        return rel if os.path.isabs(rel) else os.path.join(here, rel)

    s_prime = shape_from_dict(doc.get("s_prime", {}), path + ".s_prime")
    base = load_fragment(resolve(doc["base"]))
    boundary = {}
    for i, block in enumerate(doc.get("boundary", [])):
        loc = "%s.boundary[%d]" % (path, i)
        try:
            key = (block["nu"], int(block["eps"]))
            boundary[key] = load_fragment(resolve(block["path"]))
        except (KeyError, TypeError) as exc:
            raise InputError("malformed boundary block: %s" % exc, loc)
    connectors = {}
    for i, block in enumerate(doc.get("connectors", [])):
        loc = "%s.connectors[%d]" % (path, i)
        try:
            key = (block["nu"], int(block["eps"]))
            connectors[key] = {x: v for x, v in block["entries"]}
        except (KeyError, TypeError) as exc:
            raise InputError("malformed connector block: %s" % exc, loc)
    return GlueSpec(s_prime, base, boundary, connectors)


# ---------------------------------------------------------------------------
# terms and formulas (for the quantifier-free evaluator)


def term_from_list(doc, location: str = "term") -> Term:
    if not isinstance(doc, list) or not doc:
        raise InputError("malformed term %r" % (doc,), location)
    op = doc[0]
    if op == "var":
        return Term.var(int(doc[1]))
    if op == "const":
        return Term.const(doc[1][0], int(doc[1][1]))
    if op == "wedge":
        return Term.wedge(term_from_list(doc[1], location),
                          term_from_list(doc[2], location))
    if op == "suc":
        return Term.suc(term_from_list(doc[1], location),
                        term_from_list(doc[2], location))
    if op == "pre":
        return Term.pre(term_from_list(doc[1], location))
    if op == "lim":
        return Term.lim(term_from_list(doc[1], location))
    if op == "g":
        edge = tuple(doc[2]) if len(doc) > 2 else None
        return Term.g(term_from_list(doc[1], location), edge)
    raise InputError("unknown term operator %r" % op, location)


def formula_from_list(doc, location: str = "formula"):
    if not isinstance(doc, list) or not doc:
        raise InputError("malformed formula %r" % (doc,), location)
    tag = doc[0]
    if tag == "atom":
        return ("atom", doc[1], term_from_list(doc[2], location),
                term_from_list(doc[3], location))
    if tag == "not":
        return ("not", formula_from_list(doc[1], location))
    if tag in ("and", "or"):
        return (tag,) + tuple(formula_from_list(p, location)
                              for p in doc[1:])
    raise InputError("unknown connective %r" % tag, location)


# ---------------------------------------------------------------------------
# CSV export


def write_series_csv(path: str, rows) -> None:
    """Rows of (set_size, rank, tuple_len, count)."""
    import csv
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["set_size", "k", "n", "count"])
        for row in rows:
            w.writerow(list(row))
