"""Boundary strata of a moduli component, and vertex splitting (the inverse of smoothing a node)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graph import (
    BOUNDARY,
    CLOSED,
    INTERNAL,
    OPEN,
    GraphBuilder,
    HalfEdge,
    RSpinGraph,
    Vertex,
    canonical_form,
    is_stable,
    smooth_graph,
    validate,
    vertex_is_stable,
)
from .invariants import feasibility, moduli_dimension
from .ops import normalize_ramond


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class AmbientSpec:
    r: int
    boundary: Tuple[int, ...]
    internal: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def make(cls, r: int, boundary: Iterable[int], twists: Mapping[int, int] | Iterable[int] = ()) -> "AmbientSpec":
        if isinstance(twists, Mapping):
            items = tuple(sorted(twists.items()))
        else:
            items = tuple(enumerate(twists, start=1))
        return cls(r, tuple(boundary), items)

    @property
    def twists(self) -> Tuple[int, ...]:
        return tuple(a for _, a in self.internal)

    def smooth(self) -> RSpinGraph:
        return smooth_graph(self.r, len(self.boundary), self.twists, self.boundary, [lab for lab, _ in self.internal])


@dataclass(frozen=True)
class StratumRecord:
    graph: RSpinGraph
    kind: str
    edge_class: str
    insertion: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()
    block: Tuple[int, ...] = ()
    internal_split: Tuple[int, ...] = ()

    def to_json(self) -> Dict:
        return {
            "kind": self.kind,
            "edge_class": self.edge_class,
            "boundary_block": list(self.block),
            "internal_labels_on_first_vertex": list(self.internal_split),
            "insertion": {v: list(seq) for v, seq in self.insertion},
        }


# --------------------------------------------------------------------------
# Decorating a two-disk split


def stratum_decorations(
    r: int,
    b1: Sequence[int],
    i1: Mapping[int, int],
    b2: Sequence[int],
    i2: Mapping[int, int],
) -> RSpinGraph:
    """The unique twist/alternation decoration of two open vertices joined by a boundary edge,
    or InfeasibleError explaining why none exists."""
    for name, bs, is_ in (("v1", b1, i1), ("v2", b2, i2)):
        if len(bs) + 1 + 2 * len(is_) <= 2:
            raise InfeasibleError(f"{name} is unstable: k + 2l = {len(bs) + 1 + 2 * len(is_)}")
    sums = []
    twists = []
    for bs, is_ in ((b1, i1), (b2, i2)):
        s = 2 * sum(is_.values()) + len(bs) * (r - 2)
        twists.append((r - 2 - s) % r)
        sums.append(s)
    c1, c2 = twists
    if (c1 + c2 - (r - 2)) % r:
        raise InfeasibleError(f"node twists {c1}, {c2} are incompatible")
    ramond = c1 == r - 1
    if not ramond and c1 + c2 != r - 2:
        raise InfeasibleError(f"node twists {c1}, {c2} do not sum to r-2")
    alts = []
    for s, c, bs in zip(sums, twists, (b1, b2)):
        alts.append(((s + c + 2) // r - len(bs)) % 2)
    a1, a2 = alts
    if ramond:
        if a1 or a2:
            raise InfeasibleError("Ramond boundary node forces illegal halves but parity demands a legal one")
    elif a1 + a2 != 1:
        raise InfeasibleError(f"parity gives alternations {a1}, {a2}; exactly one half must be legal")
    for c, a in ((c1, a1), (c2, a2)):
        if r % 2 and (c - a) % 2:
            raise InfeasibleError(f"odd r needs alt = tw mod 2, got tw {c}, alt {a}")
        if r % 2 == 0 and c % 2:
            raise InfeasibleError(f"even r needs even boundary twists, got {c}")
    b = GraphBuilder(r)
    v1 = b.add_vertex(OPEN, "v1")
    v2 = b.add_vertex(OPEN, "v2")
    h1 = b.add_half_edge(v1, BOUNDARY, c1, a1, None, hid="n1")
    h2 = b.add_half_edge(v2, BOUNDARY, c2, a2, None, hid="n2")
    for v, bs, is_ in ((v1, b1, i1), (v2, b2, i2)):
        for lab in bs:
            b.add_half_edge(v, BOUNDARY, r - 2, 1, [lab], hid=f"b{lab}")
        for lab, a in sorted(is_.items()):
            b.add_half_edge(v, INTERNAL, a, None, [lab], hid=f"i{lab}")
    b.join(h1, h2)
    g = b.build()
    rep = validate(g)
    if not rep.ok:
        raise InfeasibleError(f"decoration fails {rep.failed()}")
    return g


def _edge_class(g: RSpinGraph) -> str:
    a, _ = g.pairs[0]
    return "Ramond" if (g.he[a].tw + 1) % g.r == 0 else "NS"


def enumerate_codim1(
    spec: AmbientSpec, include_ramond: bool = False, codim2: bool = False
) -> List[StratumRecord]:
    """Codimension-one strata of the component with cyclic boundary order spec.boundary.

    By default the census lists Neveu-Schwarz boundary-edge strata and the contracted-boundary
    stratum; Ramond boundary-edge strata are added with include_ramond, and internal-edge
    (codimension two) strata with codim2."""
    r = spec.r
    feas = feasibility(r, len(spec.boundary), spec.twists)
    if not feas.feasible:
        raise InfeasibleError(f"ambient space is empty: {feas.reason}")
    B = list(spec.boundary)
    k = len(B)
    tw = dict(spec.internal)
    labels = sorted(tw)
    found: Dict[object, Tuple[Tuple, StratumRecord]] = {}

    starts = range(k) if k else [0]
    for m in range(k + 1):
        for i in starts:
            block = [B[(i + t) % k] for t in range(m)] if k else []
            rest = [B[(i + m + t) % k] for t in range(k - m)] if k else []
            for n in range(len(labels) + 1):
                for sub in itertools.combinations(labels, n):
                    i1 = {x: tw[x] for x in sub}
                    i2 = {x: tw[x] for x in labels if x not in i1}
                    try:
                        g = stratum_decorations(r, block, i1, rest, i2)
                    except InfeasibleError:
                        continue
                    cls = _edge_class(g)
                    if cls == "Ramond" and not include_ramond:
                        continue
                    seq1 = ("*",) + tuple(str(x) for x in block)
                    seq2 = ("*",) + tuple(str(x) for x in rest)
                    key = frozenset({(seq1, tuple(sub)), (seq2, tuple(x for x in labels if x not in i1))})
                    h1 = g.he["n1"]
                    # representative: the illegal half on the first vertex, then the smaller block
                    rank = (0 if h1.alt == 0 else 1, m, i, tuple(sub))
                    rec = StratumRecord(g, "boundary-edge", cls, (("v1", seq1), ("v2", seq2)), tuple(block), tuple(sub))
                    if key not in found or rank < found[key][0]:
                        found[key] = (rank, rec)

    boundary_strata = sorted(
        (rec for _, rec in found.values()),
        key=lambda rec: (
            len(rec.block),
            B.index(rec.block[0]) if rec.block else _gap_index(rec, B),
            rec.internal_split,
        ),
    )
    out = list(boundary_strata)

    if k == 0 and len(labels) >= 2:
        b = GraphBuilder(r)
        v = b.add_vertex(CLOSED, "v1")
        b.add_half_edge(v, INTERNAL, r - 1, None, None, hid="cb", cb=True, anchor=True)
        for lab in labels:
            b.add_half_edge(v, INTERNAL, tw[lab], None, [lab], hid=f"i{lab}")
        g = b.build()
        if validate(g).ok and is_stable(g):
            out.append(StratumRecord(g, "contracted-boundary", "Ramond"))

    if codim2:
        seen = set()
        for n in range(2, len(labels) + 1):
            for sub in itertools.combinations(labels, n):
                g = _internal_split(r, B, {x: tw[x] for x in labels if x not in sub}, {x: tw[x] for x in sub})
                if g is None:
                    continue
                key = canonical_form(g)
                if key in seen:
                    continue
                seen.add(key)
                out.append(StratumRecord(g, "internal-edge", _edge_class(g), internal_split=tuple(sub)))
    for rec in out:
        assert validate(rec.graph).ok and is_stable(rec.graph)
    return out


def _gap_index(rec: StratumRecord, B: Sequence[int]) -> int:
    seq = dict(rec.insertion)["v2"]
    if len(seq) > 1:
        return (B.index(int(seq[1]))) % len(B)
    return 0


def _internal_split(r: int, B: Sequence[int], io: Mapping[int, int], ic: Mapping[int, int]) -> Optional[RSpinGraph]:
    c = (r - 2 - sum(ic.values())) % r
    if c == r - 1:
        tc, to = -1, r - 1
    else:
        tc, to = c, r - 2 - c
    b = GraphBuilder(r)
    vo = b.add_vertex(OPEN, "v1")
    vc = b.add_vertex(CLOSED, "v2")
    ho = b.add_half_edge(vo, INTERNAL, to, None, None, hid="n1")
    hc = b.add_half_edge(vc, INTERNAL, tc, None, None, hid="n2")
    for lab in B:
        b.add_half_edge(vo, BOUNDARY, r - 2, 1, [lab], hid=f"b{lab}")
    for lab, a in sorted(io.items()):
        b.add_half_edge(vo, INTERNAL, a, None, [lab], hid=f"i{lab}")
    for lab, a in sorted(ic.items()):
        b.add_half_edge(vc, INTERNAL, a, None, [lab], hid=f"i{lab}")
    b.join(ho, hc)
    g = b.build()
    return g if validate(g).ok and is_stable(g) else None


# --------------------------------------------------------------------------
# Vertex splitting: the inverse of smoothing one node


def _fresh(existing: Iterable[str], stem: str) -> str:
    existing = set(existing)
    n = 1
    while f"{stem}{n}" in existing:
        n += 1
    return f"{stem}{n}"


def split_vertex(g: RSpinGraph, vid: str, moved: Iterable[str], new_kind: str) -> Optional[RSpinGraph]:
    """Move the half-edges `moved` from vid onto a new vertex of kind new_kind joined to vid by a
    new node, decorating the node from the vertex congruences.  Returns None when no valid
    decoration exists."""
    r = g.r
    moved = set(moved)
    v = g.vertex[vid]
    if new_kind == OPEN and v.kind != OPEN:
        return None
    if new_kind == CLOSED and any(g.he[h].sector == BOUNDARY for h in moved):
        return None
    sector = BOUNDARY if (v.kind == OPEN and new_kind == OPEN) else INTERNAL
    w = _fresh(g.vertex, "v")
    hw = _fresh(g.he, "n")
    hv = _fresh(set(g.he) | {hw}, "n")
    part = [g.he[h] for h in moved]
    if new_kind == OPEN:
        s = 2 * sum(h.tw for h in part if h.sector == INTERNAL) + sum(h.tw for h in part if h.sector == BOUNDARY)
    else:
        s = sum(h.tw for h in part)
    c_w = (r - 2 - s) % r
    c_v = r - 1 if c_w == r - 1 else r - 2 - c_w
    alt_w = alt_v = None
    if sector == BOUNDARY:
        if c_w == r - 1:
            alt_w = alt_v = 0
        else:
            legal = sum(h.alt or 0 for h in part if h.sector == BOUNDARY)
            alt_w = ((s + c_w + 2) // r - legal) % 2
            alt_v = 1 - alt_w
    from dataclasses import replace

    hes = [replace(h, vertex=w) if h.id in moved else h for h in g.half_edges]
    hes.append(HalfEdge(hw, w, sector, c_w, alt_w))
    hes.append(HalfEdge(hv, vid, sector, c_v, alt_v))
    out = RSpinGraph(r, g.vertices + (Vertex(w, new_kind),), tuple(hes), g.pairs + ((min(hv, hw), max(hv, hw)),), g.extended)
    out = normalize_ramond(out)
    return out if validate(out).ok else None


def contract_boundary(g: RSpinGraph) -> Optional[RSpinGraph]:
    """Shrink the boundary of a one-vertex disk with no boundary half-edges to a contracted-boundary tail."""
    if len(g.vertices) != 1 or g.vertices[0].kind != OPEN or any(h.sector == BOUNDARY for h in g.half_edges):
        return None
    from dataclasses import replace

    vid = g.vertices[0].id
    t = _fresh(g.he, "t")
    out = RSpinGraph(
        g.r,
        (Vertex(vid, CLOSED),),
        g.half_edges + (HalfEdge(t, vid, INTERNAL, g.r - 1, None, None, cb=True, anchor=True),),
        g.pairs,
        g.extended,
    )
    return out if validate(out).ok else None


def one_step_degenerations(g: RSpinGraph, stable_only: bool = True) -> List[RSpinGraph]:
    """Every graph obtained from g by splitting one vertex (or contracting the boundary of a
    smooth disk without boundary points), deduplicated up to isomorphism."""
    out: Dict[Tuple, RSpinGraph] = {}

    def keep(x: Optional[RSpinGraph]) -> None:
        if x is None:
            return
        if stable_only and not is_stable(x):
            return
        out.setdefault(canonical_form(x), x)

    def weight(hs: Sequence[str], kind: str, node: str) -> int:
        # stability count of one side of the split, the new node included
        if kind == CLOSED:
            return len(hs) + 1
        w = sum(1 if g.he[h].sector == BOUNDARY else 2 for h in hs)
        return w + (1 if node == BOUNDARY else 2)

    for v in g.vertices:
        ids = [h.id for h in g.incident[v.id]]
        kinds = [OPEN, CLOSED] if v.kind == OPEN else [CLOSED]
        for kind in kinds:
            pool = ids if kind == OPEN else [h for h in ids if g.he[h].sector == INTERNAL]
            node = BOUNDARY if kind == OPEN else INTERNAL
            symmetric = kind == v.kind
            for n in range(0 if kind == OPEN else 1, len(pool) + 1):
                for sub in itertools.combinations(pool, n):
                    if kind == CLOSED and v.kind == CLOSED and len(sub) == len(ids):
                        continue
                    if symmetric and pool and pool[0] not in sub:
                        continue
                    rest = [h for h in ids if h not in sub]
                    if stable_only and (weight(sub, kind, node) <= 2 or weight(rest, v.kind, node) <= 2):
                        continue
                    keep(split_vertex(g, v.id, sub, kind))
    keep(contract_boundary(g))
    return list(out.values())


def degeneration_closure(g: RSpinGraph, max_edges: int) -> List[RSpinGraph]:
    """All stable graphs reachable from g by at most max_edges node-creating steps (cb tails count as one)."""
    level = {canonical_form(g): g}
    seen = dict(level)
    for _ in range(max_edges):
        nxt: Dict[Tuple, RSpinGraph] = {}
        for x in level.values():
            for y in one_step_degenerations(x):
                key = canonical_form(y)
                if key not in seen:
                    seen[key] = y
                    nxt[key] = y
        level = nxt
    return list(seen.values())


def random_graph(rng: random.Random, r: Optional[int] = None, max_k: int = 8, max_l: int = 4,
                 max_steps: int = 4, attempts: int = 200) -> RSpinGraph:
    """A random valid graded graph: a feasible smooth disk followed by random vertex splits."""
    for _ in range(attempts):
        rr = r if r is not None else rng.randint(2, 7)
        k = rng.randint(0, max_k)
        l = rng.randint(0, max_l)
        twists = [rng.randint(0, rr - 1) for _ in range(l)]
        if not feasibility(rr, k, twists).feasible:
            continue
        g = smooth_graph(rr, k, twists)
        if k == 0 and rng.random() < 0.3:
            g = contract_boundary(g) or g
        want = rng.randint(0, max_steps)
        done = 0
        for _ in range(8 * want):
            if done == want:
                break
            v = rng.choice(g.vertices)
            kind = rng.choice([OPEN, CLOSED]) if v.kind == OPEN else CLOSED
            pool = [h.id for h in g.incident[v.id] if kind == OPEN or g.he[h.id].sector == INTERNAL]
            sub = [h for h in pool if rng.random() < 0.5]
            if kind == CLOSED and not sub:
                continue
            x = split_vertex(g, v.id, sub, kind)
            if x is not None:
                g, done = x, done + 1
        return g
    raise RuntimeError("no feasible smooth graph found")
