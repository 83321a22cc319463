"""Graph rewrites: detaching edges and contracted-boundary tails, forgetting
twist-zero tails, and the base graph of a two-disk boundary stratum."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .graph import (
    BOUNDARY,
    CLOSED,
    INTERNAL,
    OPEN,
    ZERO,
    GraphError,
    HalfEdge,
    Marking,
    RSpinGraph,
    marking_labels,
    validate,
    vertex_is_stable,
)


class OperationError(GraphError):
    pass


class ForgetError(OperationError):
    """Raised when a tail may not be forgotten; `reason` is one of
    'legal-boundary', 'nonzero-twist', 'anchor', 'unknown-label'."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class NewTail:
    id: str
    tw: int
    marking: Marking
    anchor: bool
    empty_union: bool = False


@dataclass(frozen=True)
class DetachResult:
    graph: RSpinGraph
    new_tails: Tuple[NewTail, ...] = ()


def _require_valid(g: RSpinGraph) -> None:
    rep = validate(g)
    if not rep.ok:
        raise OperationError(f"input graph is invalid: {rep.failed()}")


def _edge_key(g: RSpinGraph, e: Union[str, Sequence[str]]) -> Tuple[str, str]:
    if isinstance(e, str):
        if e not in g.he:
            raise OperationError(f"unknown half-edge {e!r}")
        if e not in g.partner:
            raise OperationError(f"{e!r} is a tail, not an edge")
        return g.edge_of(e)
    a, b = e
    if g.partner.get(a) != b:
        raise OperationError(f"({a!r}, {b!r}) is not an edge")
    return g.edge_of(a)


def detach_edge(g: RSpinGraph, e: Union[str, Sequence[str]], check: bool = True) -> DetachResult:
    """Cut an edge, keeping twists and alternations and assigning markings/anchors to the halves."""
    if check:
        _require_valid(g)
    a, b = _edge_key(g, e)
    cut = replace(g, pairs=tuple(p for p in g.pairs if p != (a, b)))
    ha, hb = cut.he[a], cut.he[b]
    if ha.sector == BOUNDARY:
        out = cut.with_half_edge(a, marking=ZERO).with_half_edge(b, marking=ZERO)
        return DetachResult(out, (NewTail(a, ha.tw, ZERO, False), NewTail(b, hb.tw, ZERO, False)))

    def unanchored_closed(h: HalfEdge) -> bool:
        side = cut.reach(h.vertex)
        if any(cut.vertex[v].kind == OPEN for v in side):
            return False
        return not any(x.anchor for v in side for x in cut.incident[v] if x.id != h.id)

    cands = [h for h in (ha, hb) if unanchored_closed(h)]
    if len(cands) != 1:
        raise OperationError(f"edge ({a}, {b}) does not separate off exactly one unanchored closed component")
    h = cands[0]
    h2 = hb if h is ha else ha
    side = cut.reach(h.vertex)
    labels: set = set()
    for v in side:
        for x in cut.incident[v]:
            if x.id != h.id and x.sector == INTERNAL and x.id not in cut.partner and not x.cb:
                labels |= marking_labels(x.marking)
    union: Marking = frozenset(labels) if labels else ZERO
    out = cut.with_half_edge(h.id, anchor=True, marking=ZERO).with_half_edge(h2.id, marking=union)
    return DetachResult(
        out,
        (NewTail(h.id, h.tw, ZERO, True), NewTail(h2.id, h2.tw, union, False, empty_union=not labels)),
    )


def detach_cb_tail(g: RSpinGraph, t: str, check: bool = True) -> DetachResult:
    """Turn a contracted-boundary tail into an ordinary anchored internal tail."""
    if check:
        _require_valid(g)
    h = g.he.get(t)
    if h is None or not h.cb:
        raise OperationError(f"{t!r} is not a contracted-boundary tail")
    out = g.with_half_edge(t, cb=False, marking=ZERO, anchor=True)
    return DetachResult(out, (NewTail(t, h.tw, ZERO, True),))


def detach_set(g: RSpinGraph, items: Iterable[Union[str, Sequence[str]]], check: bool = True) -> DetachResult:
    """Detach every listed edge (named by a half-edge or a pair) and contracted-boundary tail, in order."""
    if check:
        _require_valid(g)
    steps: List[Tuple[str, object]] = []
    for it in items:
        if isinstance(it, str) and it in g.he and g.he[it].cb:
            steps.append(("cb", it))
        else:
            steps.append(("edge", _edge_key(g, it)))
    cur = g
    tails: List[NewTail] = []
    for kind, x in steps:
        res = detach_cb_tail(cur, x, check=False) if kind == "cb" else detach_edge(cur, x, check=False)  # type: ignore[arg-type]
        cur = res.graph
        tails.extend(res.new_tails)
    return DetachResult(cur, tuple(tails))


# --------------------------------------------------------------------------
# Forgetting tails


def normalize_ramond(g: RSpinGraph) -> RSpinGraph:
    """Re-derive the -1 / r-1 representative on every Ramond edge from the side rule."""
    r = g.r
    out = g
    for a, b in g.pairs:
        ha, hb = g.he[a], g.he[b]
        if (ha.tw + 1) % r or (hb.tw + 1) % r:
            continue
        if ha.sector == BOUNDARY:
            out = out.with_half_edge(a, tw=r - 1).with_half_edge(b, tw=r - 1)
            continue
        comp = g.components[g.component_of[ha.vertex]]
        open_comp = g.is_open_component(comp)
        for h in (ha, hb):
            side = g.reach(h.vertex, cut=[a, b])
            if open_comp:
                marked = any(g.vertex[v].kind == OPEN for v in side)
            else:
                marked = any(x.anchor and x.id not in g.partner for v in side for x in g.incident[v])
            out = out.with_half_edge(h.id, tw=r - 1 if marked else -1)
    return out


def _allowed_unstable(g: RSpinGraph, vid: str) -> bool:
    comp = g.components[g.component_of[vid]]
    if len(comp) != 1:
        return False
    hes = g.incident[vid]
    if g.vertex[vid].kind == OPEN:
        return len(hes) == 1 and hes[0].sector == INTERNAL and not hes[0].cb
    return len(hes) == 2 and sum(1 for h in hes if h.cb) == 1


def _drop(g: RSpinGraph, vertices: Iterable[str] = (), half_edges: Iterable[str] = ()) -> RSpinGraph:
    vs, hs = set(vertices), set(half_edges)
    return replace(
        g,
        vertices=tuple(v for v in g.vertices if v.id not in vs),
        half_edges=tuple(h for h in g.half_edges if h.id not in hs),
        pairs=tuple(p for p in g.pairs if p[0] not in hs and p[1] not in hs),
    )


def _contract_vertex(g: RSpinGraph, vid: str) -> RSpinGraph:
    hes = list(g.incident[vid])
    edge_halves = [h for h in hes if h.id in g.partner]
    if not edge_halves:
        return _drop(g, [vid], [h.id for h in hes])
    if len(hes) == 1:
        h = hes[0]
        p = g.he[g.partner[h.id]]
        out = _drop(g, [vid], [h.id])
        if h.sector == INTERNAL and g.vertex[vid].kind == OPEN:
            # a disk with nothing on it but an internal node shrinks to a contracted boundary
            if p.tw != g.r - 1:
                raise OperationError(f"cannot contract {vid}: node twist {p.tw} is not r-1")
            return out.with_half_edge(p.id, cb=True, anchor=True, marking=None)
        return _drop(out, [], [p.id])
    if len(hes) == 2:
        h1, h2 = hes
        if h1.id in g.partner and h2.id in g.partner:
            p1, p2 = g.partner[h1.id], g.partner[h2.id]
            out = _drop(g, [vid], [h1.id, h2.id])
            return replace(out, pairs=out.pairs + (tuple(sorted((p1, p2))),))  # type: ignore[operator]
        t, h = (h1, h2) if h2.id in g.partner else (h2, h1)
        p = g.partner[h.id]
        out = _drop(g, [vid], [t.id, h.id])
        return out.with_half_edge(p, tw=t.tw, alt=t.alt, marking=t.marking, cb=t.cb, anchor=t.anchor)
    raise OperationError(f"vertex {vid} with {len(hes)} half-edges is not contractible")


def stabilize(g: RSpinGraph) -> RSpinGraph:
    """Contract unstable vertices (smallest id first) until none remain, keeping the
    two permitted unstable component shapes."""
    while True:
        todo = sorted(
            v.id for v in g.vertices if not vertex_is_stable(g, v.id) and not _allowed_unstable(g, v.id)
        )
        if not todo:
            return normalize_ramond(g)
        g = normalize_ramond(_contract_vertex(g, todo[0]))


def forget_half_edges(g: RSpinGraph, ids: Iterable[str]) -> RSpinGraph:
    ids = list(ids)
    for hid in ids:
        h = g.he.get(hid)
        if h is None or hid in g.partner:
            raise ForgetError("unknown-label", f"{hid!r} is not a tail")
        if h.anchor or h.cb:
            raise ForgetError("anchor", f"tail {hid} is an anchor")
        if h.tw != 0:
            raise ForgetError("nonzero-twist", f"tail {hid} has twist {h.tw}")
        if h.sector == BOUNDARY and h.alt != 0:
            raise ForgetError("legal-boundary", f"boundary tail {hid} is legal")
    return stabilize(_drop(g, [], ids))


def forget_tails(g: RSpinGraph, boundary: Iterable[int] = (), internal: Iterable[int] = ()) -> RSpinGraph:
    """Forget tails named by their labels; only twist-zero (and, on the boundary, illegal) tails qualify."""
    ids: List[str] = []
    for sector, labels in ((BOUNDARY, boundary), (INTERNAL, internal)):
        for lab in labels:
            hits = [
                h.id for h in g.half_edges
                if h.sector == sector and h.id not in g.partner and lab in marking_labels(h.marking)
            ]
            if not hits:
                raise ForgetError("unknown-label", f"no {sector} tail marked {lab}")
            ids.extend(x for x in hits if x not in ids)
    return forget_half_edges(g, ids)


# --------------------------------------------------------------------------
# Base graph


@dataclass(frozen=True)
class BaseResult:
    graph: RSpinGraph
    v1: str
    h1: str


def base_graph(g: RSpinGraph) -> BaseResult:
    """Detach the boundary edge of a two-disk graph and forget the twist-zero half on the first disk."""
    _require_valid(g)
    r = g.r
    if len(g.vertices) != 2 or any(v.kind != OPEN for v in g.vertices) or len(g.pairs) != 1:
        raise OperationError("base graph needs exactly two open vertices joined by one edge")
    a, b = g.pairs[0]
    if g.he[a].sector != BOUNDARY:
        raise OperationError("the edge must be a boundary edge")

    def congruence(h: HalfEdge) -> Tuple[bool, bool]:
        tails = [x for x in g.incident[h.vertex] if x.id != h.id]
        nb = sum(1 for x in tails if x.sector == BOUNDARY)
        sa = sum(x.tw for x in tails if x.sector == INTERNAL)
        return (nb - 1 - sa) % r == 0, (nb - sa) % r == 0

    ca, cb_ = congruence(g.he[a]), congruence(g.he[b])
    if ca[0] and cb_[1]:
        h1, h2 = a, b
    elif cb_[0] and ca[1]:
        h1, h2 = b, a
    else:
        raise OperationError("no side satisfies the splitting congruences")
    if g.he[h1].tw != 0 or g.he[h1].alt != 0:
        raise OperationError(f"inconsistent input: half-edge {h1} has (tw, alt) = ({g.he[h1].tw}, {g.he[h1].alt})")
    det = detach_edge(g, (a, b), check=False).graph
    return BaseResult(forget_half_edges(det, [h1]), g.he[h1].vertex, h1)
