"""Decorated genus-zero dual graphs for graded r-spin disks.

A graph is a forest of open (disk) and closed (sphere) vertices carrying
half-edges.  Unpaired half-edges are tails; paired ones form edges.  Every
half-edge has a twist, boundary half-edges carry an alternation bit, and
tails carry a marking (the zero marker or a nonempty set of labels).

Values are immutable; all operations return new graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

import jsonschema

OPEN = "open"
CLOSED = "closed"
BOUNDARY = "boundary"
INTERNAL = "internal"

ZERO = 0
Marking = Union[int, FrozenSet[int]]


class GraphError(ValueError):
    """Base class for graph construction errors."""


class GraphParseError(GraphError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class GraphStructureError(GraphError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str


@dataclass(frozen=True)
class HalfEdge:
    id: str
    vertex: str
    sector: str
    tw: int
    alt: Optional[int] = None
    marking: Optional[Marking] = None
    cb: bool = False
    anchor: bool = False
    anchor_orientation_fixed: bool = False

    @property
    def is_boundary(self) -> bool:
        return self.sector == BOUNDARY


def make_marking(value: Any) -> Marking:
    if value == 0 and not isinstance(value, bool):
        return ZERO
    labels = frozenset(int(x) for x in value)
    if not labels:
        raise GraphError("empty marking set; use the zero marker instead")
    return labels


def marking_labels(m: Optional[Marking]) -> FrozenSet[int]:
    if m is None or m == ZERO:
        return frozenset()
    return m  # type: ignore[return-value]


@dataclass(frozen=True)
class RSpinGraph:
    r: int
    vertices: Tuple[Vertex, ...] = ()
    half_edges: Tuple[HalfEdge, ...] = ()
    pairs: Tuple[Tuple[str, str], ...] = ()
    extended: bool = False

    # --- lookup tables -------------------------------------------------
    @cached_property
    def vertex(self) -> Dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def he(self) -> Dict[str, HalfEdge]:
        return {h.id: h for h in self.half_edges}

    @cached_property
    def partner(self) -> Dict[str, str]:
        out: Dict[str, str] = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    @cached_property
    def incident(self) -> Dict[str, Tuple[HalfEdge, ...]]:
        out: Dict[str, List[HalfEdge]] = {v.id: [] for v in self.vertices}
        for h in self.half_edges:
            out[h.vertex].append(h)
        return {k: tuple(v) for k, v in out.items()}

    def is_tail(self, hid: str) -> bool:
        return hid not in self.partner

    def tails(self) -> List[HalfEdge]:
        return [h for h in self.half_edges if h.id not in self.partner]

    def edges(self) -> List[Tuple[str, str]]:
        return list(self.pairs)

    def edge_of(self, hid: str) -> Tuple[str, str]:
        if hid not in self.partner:
            raise GraphError(f"{hid!r} is not part of an edge")
        for pair in self.pairs:
            if hid in pair:
                return pair
        raise AssertionError("unreachable")

    def k(self, vid: str) -> int:
        return sum(1 for h in self.incident[vid] if h.sector == BOUNDARY)

    def l(self, vid: str) -> int:
        return sum(1 for h in self.incident[vid] if h.sector == INTERNAL)

    # --- connectivity --------------------------------------------------
    def neighbours(self, vid: str, skip: Iterable[str] = ()) -> List[Tuple[str, str, str]]:
        """(half-edge on vid, partner half-edge, neighbouring vertex) triples."""
        skip = set(skip)
        out = []
        for h in self.incident[vid]:
            p = self.partner.get(h.id)
            if p is None or h.id in skip:
                continue
            out.append((h.id, p, self.he[p].vertex))
        return out

    def reach(self, start: str, cut: Iterable[str] = ()) -> List[str]:
        """Vertices reachable from start without crossing the half-edges in cut."""
        cut = set(cut)
        seen = {start}
        stack = [start]
        order = [start]
        while stack:
            v = stack.pop()
            for h, p, w in self.neighbours(v):
                if h in cut or p in cut or w in seen:
                    continue
                seen.add(w)
                stack.append(w)
                order.append(w)
        return order

    @cached_property
    def components(self) -> Tuple[Tuple[str, ...], ...]:
        seen: set = set()
        comps = []
        for v in self.vertices:
            if v.id in seen:
                continue
            comp = self.reach(v.id)
            seen.update(comp)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def component_of(self) -> Dict[str, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}

    def component_half_edges(self, comp: Iterable[str]) -> List[HalfEdge]:
        return [h for v in comp for h in self.incident[v]]

    def is_open_component(self, comp: Iterable[str]) -> bool:
        return any(self.vertex[v].kind == OPEN for v in comp)

    def subgraph(self, comp: Iterable[str]) -> "RSpinGraph":
        keep = set(comp)
        hes = tuple(h for h in self.half_edges if h.vertex in keep)
        ids = {h.id for h in hes}
        return RSpinGraph(
            r=self.r,
            vertices=tuple(v for v in self.vertices if v.id in keep),
            half_edges=hes,
            pairs=tuple(p for p in self.pairs if p[0] in ids),
            extended=self.extended,
        )

    def with_half_edge(self, hid: str, **changes: Any) -> "RSpinGraph":
        hes = tuple(replace(h, **changes) if h.id == hid else h for h in self.half_edges)
        return replace(self, half_edges=hes)


# --------------------------------------------------------------------------
# JSON documents

_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["r", "vertices", "half_edges", "pairs"],
    "properties": {
        "r": {"type": "integer"},
        "extended": {"type": "boolean"},
        "vertices": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind"],
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"enum": [OPEN, CLOSED]},
                },
                "additionalProperties": False,
            },
        },
        "half_edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "vertex", "sector", "tw"],
                "properties": {
                    "id": {"type": "string"},
                    "vertex": {"type": "string"},
                    "sector": {"enum": [BOUNDARY, INTERNAL]},
                    "tw": {"type": "integer"},
                    "alt": {"enum": [0, 1]},
                    "marking": {
                        "oneOf": [
                            {"const": 0},
                            {
                                "type": "array",
                                "items": {"type": "integer", "minimum": 1},
                                "minItems": 1,
                                "uniqueItems": True,
                            },
                        ]
                    },
                    "cb": {"type": "boolean"},
                    "anchor": {"type": "boolean"},
                    "anchor_orientation_fixed": {"type": "boolean"},
                },
                "additionalProperties": False,
            },
        },
        "pairs": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "string"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft7Validator(_SCHEMA)


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in error.absolute_path]
    return "/" + "/".join(parts) if parts else "/"


def parse_graph(doc: Union[str, Dict[str, Any]]) -> RSpinGraph:
    """Build a structurally well-formed graph from a JSON document (no axiom checks)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise GraphParseError("/", f"invalid JSON: {exc}") from None
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise GraphParseError(_json_path(err), err.message)
    assert isinstance(doc, dict)
    r = doc["r"]
    if r < 2:
        raise GraphParseError("/r", f"r must be at least 2, got {r}")

    vertices = []
    vids = set()
    for i, v in enumerate(doc["vertices"]):
        if v["id"] in vids:
            raise GraphStructureError(f"duplicate vertex id {v['id']!r}")
        vids.add(v["id"])
        vertices.append(Vertex(v["id"], v["kind"]))

    paired: Dict[str, str] = {}
    for i, (a, b) in enumerate(doc["pairs"]):
        if a == b:
            raise GraphStructureError(f"pair {i} joins {a!r} to itself")
        for x, y in ((a, b), (b, a)):
            if x in paired and paired[x] != y:
                raise GraphStructureError(
                    f"pairing is not an involution: {x!r} is paired with both "
                    f"{paired[x]!r} and {y!r}"
                )
            paired[x] = y

    half_edges = []
    hids = set()
    for i, h in enumerate(doc["half_edges"]):
        path = f"/half_edges/{i}"
        hid = h["id"]
        if hid in hids:
            raise GraphStructureError(f"duplicate half-edge id {hid!r}")
        hids.add(hid)
        if h["vertex"] not in vids:
            raise GraphStructureError(f"half-edge {hid!r} refers to unknown vertex {h['vertex']!r}")
        boundary = h["sector"] == BOUNDARY
        if boundary and "alt" not in h:
            raise GraphParseError(path, "boundary half-edge requires 'alt'")
        if not boundary and "alt" in h:
            raise GraphParseError(path + "/alt", "internal half-edges carry no alternation")
        is_tail = hid not in paired
        cb = bool(h.get("cb", False))
        if cb and (boundary or not is_tail):
            raise GraphStructureError(f"{hid!r}: only internal tails can be contracted-boundary tails")
        marking: Optional[Marking] = None
        if is_tail and not cb:
            marking = make_marking(h.get("marking", 0))
        elif "marking" in h and not (cb and h["marking"] == 0):
            raise GraphParseError(path + "/marking", "markings are carried by ordinary tails only")
        half_edges.append(
            HalfEdge(
                id=hid,
                vertex=h["vertex"],
                sector=h["sector"],
                tw=h["tw"],
                alt=h.get("alt"),
                marking=marking,
                cb=cb,
                anchor=bool(h.get("anchor", False)),
                anchor_orientation_fixed=bool(h.get("anchor_orientation_fixed", False)),
            )
        )

    pairs = []
    for i, (a, b) in enumerate(doc["pairs"]):
        for x in (a, b):
            if x not in hids:
                raise GraphStructureError(f"pair {i} refers to unknown half-edge {x!r}")
        pairs.append((a, b))
    by_id = {h.id: h for h in half_edges}
    seen_pairs = set()
    out_pairs = []
    for a, b in pairs:
        if by_id[a].sector != by_id[b].sector:
            raise GraphStructureError(f"pair ({a!r}, {b!r}) mixes boundary and internal half-edges")
        key = tuple(sorted((a, b)))
        if key not in seen_pairs:
            seen_pairs.add(key)
            out_pairs.append(key)
    return RSpinGraph(
        r=r,
        vertices=tuple(vertices),
        half_edges=tuple(half_edges),
        pairs=tuple(out_pairs),
        extended=bool(doc.get("extended", False)),
    )


def _marking_doc(m: Marking) -> Any:
    return 0 if m == ZERO else sorted(m)  # type: ignore[arg-type]


def emit_graph(g: RSpinGraph) -> Dict[str, Any]:
    """Graph document with a stable field order."""
    hes = []
    for h in g.half_edges:
        d: Dict[str, Any] = {"id": h.id, "vertex": h.vertex, "sector": h.sector, "tw": h.tw}
        if h.alt is not None:
            d["alt"] = h.alt
        if h.marking is not None:
            d["marking"] = _marking_doc(h.marking)
        if h.cb:
            d["cb"] = True
        if h.anchor:
            d["anchor"] = True
        if h.anchor_orientation_fixed:
            d["anchor_orientation_fixed"] = True
        hes.append(d)
    doc: Dict[str, Any] = {
        "r": g.r,
        "vertices": [{"id": v.id, "kind": v.kind} for v in g.vertices],
        "half_edges": hes,
        "pairs": [list(p) for p in g.pairs],
    }
    if g.extended:
        doc["extended"] = True
    return doc


# --------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class RuleResult:
    rule: str
    statement: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    entries: Tuple[RuleResult, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failed(self) -> List[str]:
        return [e.rule for e in self.entries if not e.ok]

    def to_json(self) -> Dict[str, Any]:
        return {
            "overall": "pass" if self.ok else "fail",
            "entries": [
                {"rule": e.rule, "statement": e.statement, "result": "pass" if e.ok else "fail", "detail": e.detail}
                for e in self.entries
            ],
        }


RULES: Tuple[Tuple[str, str], ...] = (
    ("boundary-on-open", "boundary half-edges attach only to open vertices"),
    ("tree", "every connected component is a tree"),
    ("contracted-boundary", "at most one contracted-boundary tail per component, and then all its vertices are closed"),
    ("open-part-connected", "open vertices and boundary edges of each component form a connected subgraph"),
    ("markings", "nonzero markings are disjoint per component and sector; internal markings are strict on components with an open vertex or a contracted-boundary tail"),
    ("twist-range", "twists lie in {-1,...,r-1} (internal tails may exceed r-1 only on extended graphs); alternations are 0 or 1"),
    ("unstable-shapes", "an unstable component is a lone open vertex with one internal tail, or a lone closed vertex with a contracted-boundary tail and one internal tail"),
    ("anchors", "closed components have exactly one anchor, open ones none; contracted-boundary and twist -1 tails are anchors; an ordinary anchor is the unique tail marked 0"),
    ("anchor-per-vertex", "each vertex has at most one incident half-edge that is an anchor or has twist -1"),
    ("contracted-boundary-twist", "contracted-boundary tails have twist r-1"),
    ("open-vertex", "2*sum(internal tw) + sum(boundary tw) = r-2 mod r, and (that sum + 2)/r has the parity of the number of legal half-edges"),
    ("closed-vertex", "sum of twists = r-2 mod r"),
    ("edge-twists", "tw(h) + tw(h') = r-2 mod r, not both -1, no boundary half-edge of twist -1, and a Ramond internal half-edge has twist r-1 exactly on the side holding the anchor or an open vertex"),
    ("edge-alternation", "on a boundary edge alt(h) + alt(h') = 1 unless tw = r-1, in which case both are 0"),
    ("boundary-parity", "r odd: alt = tw mod 2; r even: boundary twists are even"),
    ("graded", "every marked boundary tail has twist r-2 and is legal; unmarked node halves are exempt"),
)


def _check_prestable(g: RSpinGraph) -> Dict[str, List[str]]:
    bad: Dict[str, List[str]] = {name: [] for name, _ in RULES}
    for h in g.half_edges:
        if h.sector == BOUNDARY and g.vertex[h.vertex].kind != OPEN:
            bad["boundary-on-open"].append(f"{h.id} sits on closed vertex {h.vertex}")
    for comp in g.components:
        hes = g.component_half_edges(comp)
        n_edges = sum(1 for h in hes if h.id in g.partner) // 2
        if n_edges != len(comp) - 1:
            bad["tree"].append(f"component {comp} has {n_edges} edges on {len(comp)} vertices")
        cbs = [h for h in hes if h.cb]
        if len(cbs) > 1:
            bad["contracted-boundary"].append(f"component {comp} has {len(cbs)} contracted-boundary tails")
        if cbs and g.is_open_component(comp):
            bad["contracted-boundary"].append(f"component {comp} has a contracted-boundary tail and an open vertex")
        opens = [v for v in comp if g.vertex[v].kind == OPEN]
        if opens:
            seen = {opens[0]}
            stack = [opens[0]]
            while stack:
                v = stack.pop()
                for h, p, w in g.neighbours(v):
                    if g.he[h].sector == BOUNDARY and g.vertex[w].kind == OPEN and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(opens):
                bad["open-part-connected"].append(f"open part of component {comp} is disconnected")
        strict = bool(opens) or bool(cbs)
        for sector in (BOUNDARY, INTERNAL):
            used: Dict[int, str] = {}
            for h in hes:
                if h.sector != sector or h.id in g.partner or h.cb:
                    continue
                if h.marking == ZERO:
                    if sector == INTERNAL and strict:
                        bad["markings"].append(f"internal tail {h.id} marked 0 on a component requiring strict markings")
                    continue
                for lab in marking_labels(h.marking):
                    if lab in used:
                        bad["markings"].append(f"label {lab} used by both {used[lab]} and {h.id}")
                    used[lab] = h.id
    return bad


def _ramond_side_expected(g: RSpinGraph, h: HalfEdge) -> int:
    """Twist r-1 or -1 required on a Ramond internal half-edge h by the side rule."""
    p = g.partner[h.id]
    side = g.reach(h.vertex, cut=[h.id, p])
    comp = g.components[g.component_of[h.vertex]]
    if g.is_open_component(comp):
        marked = any(g.vertex[v].kind == OPEN for v in side)
    else:
        marked = any(x.anchor and x.id not in g.partner for v in side for x in g.incident[v])
    return g.r - 1 if marked else -1


def validate(g: RSpinGraph) -> ValidationReport:
    """Check every axiom; failures are report entries, never exceptions."""
    r = g.r
    bad = _check_prestable(g)

    for h in g.half_edges:
        tail = h.id not in g.partner
        hi = r - 1
        if h.tw < -1 or (h.tw > hi and not (g.extended and tail and h.sector == INTERNAL and not h.cb)):
            bad["twist-range"].append(f"{h.id} has twist {h.tw}")
        if h.sector == BOUNDARY and h.alt not in (0, 1):
            bad["twist-range"].append(f"{h.id} has alternation {h.alt}")

    for comp in g.components:
        hes = g.component_half_edges(comp)
        tails = [h for h in hes if h.id not in g.partner]
        unstable = [v for v in comp if not vertex_is_stable(g, v)]
        if unstable:
            shape_a = (
                len(comp) == 1
                and g.vertex[comp[0]].kind == OPEN
                and len(hes) == 1
                and hes[0].sector == INTERNAL
                and hes[0].id not in g.partner
                and not hes[0].cb
            )
            shape_b = (
                len(comp) == 1
                and g.vertex[comp[0]].kind == CLOSED
                and len(hes) == 2
                and all(h.id not in g.partner and h.sector == INTERNAL for h in hes)
                and sum(1 for h in hes if h.cb) == 1
            )
            if not (shape_a or shape_b):
                bad["unstable-shapes"].append(f"component {comp} has unstable vertices {unstable}")

        anchors = [h for h in hes if h.anchor]
        for h in anchors:
            if h.id in g.partner:
                bad["anchors"].append(f"anchor {h.id} is not a tail")
        for h in tails:
            if (h.cb or h.tw == -1) and not h.anchor:
                bad["anchors"].append(f"tail {h.id} must be an anchor")
        if g.is_open_component(comp):
            if anchors:
                bad["anchors"].append(f"open component {comp} has anchors")
        else:
            if len(anchors) != 1:
                bad["anchors"].append(f"closed component {comp} has {len(anchors)} anchors")
        for h in anchors:
            if h.cb or h.id in g.partner:
                continue
            if h.marking != ZERO:
                bad["anchors"].append(f"anchor {h.id} is not marked 0")
            others = [t.id for t in tails if t.id != h.id and not t.cb and t.marking == ZERO]
            if others:
                bad["anchors"].append(f"anchor {h.id} shares the zero marking with {others}")

    for v in g.vertices:
        hes = g.incident[v.id]
        special = [h.id for h in hes if h.anchor or h.tw == -1]
        if len(special) > 1:
            bad["anchor-per-vertex"].append(f"vertex {v.id} has {special}")
        if v.kind == OPEN:
            s = 2 * sum(h.tw for h in hes if h.sector == INTERNAL) + sum(h.tw for h in hes if h.sector == BOUNDARY)
            if (s - (r - 2)) % r:
                bad["open-vertex"].append(f"vertex {v.id}: twist sum {s} is not r-2 mod r")
            else:
                legal = sum(h.alt or 0 for h in hes if h.sector == BOUNDARY)
                if ((s + 2) // r - legal) % 2:
                    bad["open-vertex"].append(f"vertex {v.id}: (S+2)/r = {(s + 2) // r} but {legal} legal half-edges")
        else:
            s = sum(h.tw for h in hes)
            if (s - (r - 2)) % r:
                bad["closed-vertex"].append(f"vertex {v.id}: twist sum {s} is not r-2 mod r")

    for h in g.half_edges:
        if h.cb and h.tw != r - 1:
            bad["contracted-boundary-twist"].append(f"{h.id} has twist {h.tw}")
        if h.sector == BOUNDARY and h.tw == -1:
            bad["edge-twists"].append(f"boundary half-edge {h.id} has twist -1")
        if h.sector == BOUNDARY and h.alt in (0, 1):
            if r % 2 and (h.alt - h.tw) % 2:
                bad["boundary-parity"].append(f"{h.id}: alt {h.alt} vs twist {h.tw}")
            if r % 2 == 0 and h.tw % 2:
                bad["boundary-parity"].append(f"{h.id}: odd twist {h.tw} with r even")
        if h.sector == BOUNDARY and h.id not in g.partner and h.marking != ZERO:
            if h.tw != r - 2 or h.alt != 1:
                bad["graded"].append(f"boundary tail {h.id} has (tw, alt) = ({h.tw}, {h.alt})")

    for a, b in g.pairs:
        ha, hb = g.he[a], g.he[b]
        if (ha.tw + hb.tw - (r - 2)) % r:
            bad["edge-twists"].append(f"edge ({a}, {b}): twists {ha.tw} + {hb.tw} not r-2 mod r")
        if ha.tw == -1 and hb.tw == -1:
            bad["edge-twists"].append(f"edge ({a}, {b}): both twists are -1")
        if ha.sector == INTERNAL:
            for h in (ha, hb):
                if (h.tw + 1) % r == 0 and h.tw in (-1, r - 1):
                    want = _ramond_side_expected(g, h)
                    if h.tw != want:
                        bad["edge-twists"].append(f"Ramond half-edge {h.id} should have twist {want}")
        else:
            if ha.tw == r - 1 or hb.tw == r - 1:
                if ha.alt != 0 or hb.alt != 0:
                    bad["edge-alternation"].append(f"Ramond boundary edge ({a}, {b}) needs both alternations 0")
            elif (ha.alt or 0) + (hb.alt or 0) != 1:
                bad["edge-alternation"].append(f"edge ({a}, {b}): alternations {ha.alt}, {hb.alt}")

    entries = tuple(
        RuleResult(name, statement, not bad[name], "; ".join(bad[name])) for name, statement in RULES
    )
    return ValidationReport(entries)


def vertex_is_stable(g: RSpinGraph, vid: str) -> bool:
    if g.vertex[vid].kind == OPEN:
        return g.k(vid) + 2 * g.l(vid) > 2
    return g.l(vid) > 2


def is_stable(g: RSpinGraph) -> bool:
    return all(vertex_is_stable(g, v.id) for v in g.vertices)


# --------------------------------------------------------------------------
# Canonical form and isomorphism


def _marking_key(m: Optional[Marking]) -> Tuple:
    if m is None:
        return ("n",)
    if m == ZERO:
        return ("z",)
    return ("s", tuple(sorted(m)))  # type: ignore[arg-type]


def _label(h: HalfEdge) -> Tuple:
    return (
        h.sector,
        h.tw,
        -9 if h.alt is None else h.alt,
        _marking_key(h.marking),
        h.cb,
        h.anchor,
        h.anchor_orientation_fixed,
    )


def _rooted(g: RSpinGraph, vid: str, via: Optional[str]) -> Tuple:
    items = []
    for h in g.incident[vid]:
        if h.id == via:
            continue
        p = g.partner.get(h.id)
        if p is None:
            items.append((0, _label(h)))
        else:
            q = g.he[p]
            items.append((1, _label(h), _label(q), _rooted(g, q.vertex, p)))
    return (g.vertex[vid].kind, tuple(sorted(items)))


def canonical_form(g: RSpinGraph) -> Tuple:
    """A complete isomorphism invariant: trees are encoded from every root and the minimum kept."""
    comps = []
    for comp in g.components:
        comps.append(min(_rooted(g, v, None) for v in comp))
    return (g.r, g.extended, tuple(sorted(comps)))


def canonical_string(g: RSpinGraph) -> str:
    return json.dumps(canonical_form(g), separators=(",", ":"))


def are_isomorphic(g1: RSpinGraph, g2: RSpinGraph) -> bool:
    return canonical_form(g1) == canonical_form(g2)


# --------------------------------------------------------------------------
# Small constructors used throughout the package


@dataclass
class GraphBuilder:
    """Mutable helper for assembling graphs with generated identifiers."""

    r: int
    extended: bool = False
    vertices: List[Vertex] = field(default_factory=list)
    half_edges: List[HalfEdge] = field(default_factory=list)
    pairs: List[Tuple[str, str]] = field(default_factory=list)

    def add_vertex(self, kind: str, vid: Optional[str] = None) -> str:
        vid = vid or f"v{len(self.vertices) + 1}"
        self.vertices.append(Vertex(vid, kind))
        return vid

    def add_half_edge(self, vertex: str, sector: str, tw: int, alt: Optional[int] = None,
                      marking: Optional[Any] = 0, hid: Optional[str] = None, cb: bool = False,
                      anchor: bool = False) -> str:
        hid = hid or f"h{len(self.half_edges) + 1}"
        m = None if (marking is None or cb) else make_marking(marking)
        self.half_edges.append(HalfEdge(hid, vertex, sector, tw, alt, m, cb, anchor))
        return hid

    def join(self, a: str, b: str) -> None:
        self.half_edges = [replace(h, marking=None) if h.id in (a, b) else h for h in self.half_edges]
        self.pairs.append(tuple(sorted((a, b))))  # type: ignore[arg-type]

    def build(self) -> RSpinGraph:
        return RSpinGraph(self.r, tuple(self.vertices), tuple(self.half_edges), tuple(self.pairs), self.extended)


def smooth_graph(r: int, k: int, twists: Iterable[int], boundary_labels: Optional[Iterable[int]] = None,
                 internal_labels: Optional[Iterable[int]] = None) -> RSpinGraph:
    """The connected smooth graded graph with k boundary tails and the given internal twists."""
    twists = list(twists)
    blabels = list(boundary_labels) if boundary_labels is not None else list(range(1, k + 1))
    ilabels = list(internal_labels) if internal_labels is not None else list(range(1, len(twists) + 1))
    b = GraphBuilder(r)
    v = b.add_vertex(OPEN, "v")
    for lab in blabels:
        b.add_half_edge(v, BOUNDARY, r - 2, 1, [lab], hid=f"b{lab}")
    for lab, a in zip(ilabels, twists):
        b.add_half_edge(v, INTERNAL, a, None, [lab], hid=f"i{lab}")
    return b.build()
