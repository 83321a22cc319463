"""Exact integer invariants of graded r-spin graphs.

Ranks are real ranks throughout; a closed vertex of complex rank c counts as 2c.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graph import (
    BOUNDARY,
    CLOSED,
    INTERNAL,
    OPEN,
    GraphError,
    RSpinGraph,
    is_stable,
    validate,
)
from .ops import OperationError, detach_cb_tail, detach_edge


class RankError(GraphError):
    pass


def mod_prime(x: int, r: int) -> int:
    """The representative of x mod r in {-1, 0, ..., r-2}."""
    return (x + 1) % r - 1


def _exact_div(num: int, r: int, what: str) -> int:
    if num % r:
        raise RankError(f"{what}: {num}/{r} is not an integer")
    return num // r


# --------------------------------------------------------------------------
# Ranks


def open_vertex_rank(r: int, internal: Iterable[int], boundary: Iterable[int]) -> int:
    return _exact_div(2 * sum(internal) + sum(boundary) - (r - 2), r, "open vertex rank")


def closed_vertex_complex_rank(r: int, twists: Iterable[int]) -> int:
    return _exact_div(sum(twists) - (r - 2), r, "closed vertex rank")


@dataclass(frozen=True)
class RankReport:
    per_vertex: Dict[str, int]
    complex_per_closed_vertex: Dict[str, int]
    total: int
    bundle_rank: int
    corrections: int

    def to_json(self) -> Dict:
        return {
            "per_vertex": dict(sorted(self.per_vertex.items())),
            "closed_complex_ranks": dict(sorted(self.complex_per_closed_vertex.items())),
            "total": self.total,
            "ramond_boundary_and_cb_count": self.corrections,
            "bundle_rank": self.bundle_rank,
        }


def _vertex_rank(g: RSpinGraph, vid: str) -> Tuple[int, Optional[int]]:
    hes = g.incident[vid]
    if g.vertex[vid].kind == OPEN:
        return (
            open_vertex_rank(
                g.r,
                [h.tw for h in hes if h.sector == INTERNAL],
                [h.tw for h in hes if h.sector == BOUNDARY],
            ),
            None,
        )
    c = closed_vertex_complex_rank(g.r, [h.tw for h in hes])
    return 2 * c, c


def _trivial_line_count(g: RSpinGraph, vertices: Optional[Iterable[str]] = None) -> int:
    keep = set(vertices) if vertices is not None else set(g.vertex)
    n = 0
    for a, b in g.pairs:
        ha = g.he[a]
        if ha.vertex in keep and ha.sector == BOUNDARY and ha.tw == g.r - 1:
            n += 1
    n += sum(1 for h in g.half_edges if h.cb and h.vertex in keep)
    return n


def witten_rank(g: RSpinGraph) -> RankReport:
    """Per-vertex ranks, their sum, and the rank of the bundle on the stratum
    (the sum minus one trivial real line per Ramond boundary edge and contracted-boundary tail)."""
    per: Dict[str, int] = {}
    cplx: Dict[str, int] = {}
    for v in g.vertices:
        real, c = _vertex_rank(g, v.id)
        per[v.id] = real
        if c is not None:
            cplx[v.id] = c
    total = sum(per.values())
    corr = _trivial_line_count(g)
    return RankReport(per, cplx, total, total - corr, corr)


def smoothing_rank(g: RSpinGraph, comp: Optional[Sequence[str]] = None) -> int:
    """Rank of the bundle on the smooth graph obtained by smoothing every node of a
    connected component; computed from the tails alone."""
    if comp is None:
        if len(g.components) != 1:
            raise RankError("smoothing_rank needs a connected graph or an explicit component")
        comp = g.components[0]
    tails = [h for h in g.component_half_edges(comp) if h.id not in g.partner]
    r = g.r
    if g.is_open_component(comp) or any(h.cb for h in tails):
        internal = [h.tw for h in tails if h.sector == INTERNAL and not h.cb]
        boundary = [h.tw for h in tails if h.sector == BOUNDARY]
        return open_vertex_rank(r, internal, boundary)
    return 2 * closed_vertex_complex_rank(r, [h.tw for h in tails])


# --------------------------------------------------------------------------
# Feasibility, legality, node classes


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    reason: str
    rank: Optional[int] = None


def feasibility(r: int, k: int, twists: Sequence[int]) -> Feasibility:
    if r < 2:
        raise ValueError("r must be at least 2")
    if k < 0:
        raise ValueError("k must be non-negative")
    for a in twists:
        if not 0 <= a <= r - 1:
            raise ValueError(f"twist {a} out of range 0..{r - 1}")
    l = len(twists)
    if k + 2 * l <= 2 and not (k == 0 and l == 1):
        return Feasibility(False, "unstable smooth graph")
    num = 2 * sum(twists) + k * (r - 2) - (r - 2)
    if num % r:
        return Feasibility(False, f"rank {num}/{r} is not an integer")
    e = num // r
    if (e - (k - 1)) % 2:
        return Feasibility(False, f"parity fails: rank {e} but k-1 = {k - 1}", e)
    return Feasibility(True, "ok", e)


def moduli_nonempty(r: int, k: int, twists: Sequence[int]) -> bool:
    return feasibility(r, k, twists).feasible


LEGAL = "legal"
ILLEGAL = "illegal"
NEEDS_ALT = "needs_alt_datum"
IMPOSSIBLE = "illegal-invalid"


def boundary_legality(r: int, tw: int) -> str:
    if not 0 <= tw <= r - 1:
        raise ValueError(f"twist {tw} out of range 0..{r - 1}")
    if r % 2:
        return LEGAL if tw % 2 else ILLEGAL
    return NEEDS_ALT if tw % 2 == 0 else IMPOSSIBLE


RAMOND = "Ramond"
NEVEU_SCHWARZ = "NeveuSchwarz"


def classify_node(r: int, tw_a: int, tw_b: int) -> str:
    if (tw_a + tw_b - (r - 2)) % r:
        raise ValueError(f"twists {tw_a}, {tw_b} do not sum to r-2 mod r")
    if (tw_a + 1) % r == 0:
        return RAMOND
    if tw_a + tw_b != r - 2:
        raise ValueError(f"Neveu-Schwarz twists {tw_a}, {tw_b} must sum to exactly r-2")
    return NEVEU_SCHWARZ


# --------------------------------------------------------------------------
# Automorphisms and dimension


@dataclass(frozen=True)
class AutomorphismCount:
    order: int
    tag: str
    per_component: Tuple[int, ...]


def automorphism_order(g: RSpinGraph) -> AutomorphismCount:
    """r to the number of internal edges on disk components; closed components carry one extra factor r."""
    orders = []
    closed_seen = False
    for comp in g.components:
        n_int = sum(
            1 for a, b in g.pairs if g.he[a].sector == INTERNAL and g.he[a].vertex in comp
        )
        if g.is_open_component(comp):
            orders.append(g.r ** n_int)
        else:
            closed_seen = True
            orders.append(g.r ** (n_int + 1))
    total = 1
    for o in orders:
        total *= o
    return AutomorphismCount(total, "closed" if closed_seen else "disk", tuple(orders))


def moduli_dimension(g: RSpinGraph) -> Tuple[int, int]:
    """(real dimension of the stratum, codimension in the smooth moduli space of the same tails)."""
    if len(g.components) != 1:
        raise RankError("dimension bookkeeping needs a connected graph")
    if not is_stable(g):
        raise RankError("graph has an unstable vertex")
    comp = g.components[0]
    tails = g.tails()
    has_cb = any(h.cb for h in tails)
    if not g.is_open_component(comp) and not has_cb:
        raise RankError("closed graphs have no disk ambient space")
    dim = 0
    for v in g.vertices:
        if v.kind == OPEN:
            dim += g.k(v.id) + 2 * g.l(v.id) - 3
        else:
            dim += 2 * (g.l(v.id) - 3)
    k_amb = sum(1 for h in tails if h.sector == BOUNDARY)
    l_amb = sum(1 for h in tails if h.sector == INTERNAL and not h.cb)
    return dim, (k_amb + 2 * l_amb - 3) - dim


# --------------------------------------------------------------------------
# Decomposition along a node


NS = "NS"
RAMOND_BOUNDARY = "RamondBoundary"
RAMOND_CLOSED_CLOSED = "RamondInternalClosedClosed"
RAMOND_OPEN_CLOSED = "RamondInternalOpenClosed"
CONTRACTED_BOUNDARY = "ContractedBoundary"

T_PLUS = "T_plus_real_line"
T_TORSION = "T_r_torsion_complex_line"
L_TILDE = "L_tilde_complex_line"
EXTRA_RANK = {T_PLUS: 1, T_TORSION: 2, L_TILDE: 2}


@dataclass(frozen=True)
class DecompositionReport:
    case: str
    ambient_rank: int
    component_ranks: Tuple[int, ...]
    extra_terms: Tuple[str, ...]
    identity: str
    primed_component_ranks: Tuple[int, ...] = ()
    primed_identity: str = ""
    pullback_from_one_component: bool = False
    splits: bool = False

    def to_json(self) -> Dict:
        d = {
            "case": self.case,
            "ambient_rank": self.ambient_rank,
            "component_ranks": list(self.component_ranks),
            "extra_terms": list(self.extra_terms),
            "identity": self.identity,
            "pullback_from_one_component": self.pullback_from_one_component,
        }
        if self.primed_component_ranks:
            d["primed_component_ranks"] = list(self.primed_component_ranks)
            d["primed_identity"] = self.primed_identity
            d["splits"] = self.splits
        return d


class DecompositionError(AssertionError):
    pass


def _piece_rank(g: RSpinGraph, vid: str) -> Tuple[int, Tuple[str, ...]]:
    comp = g.components[g.component_of[vid]]
    return smoothing_rank(g, comp), comp


def decompose_witten(g: RSpinGraph, e: str) -> DecompositionReport:
    """Classify the node e (a half-edge of an edge, or a contracted-boundary tail) and verify
    the exact rank identity relating the bundle to the bundles on the detached pieces."""
    rep = validate(g)
    if not rep.ok:
        raise OperationError(f"input graph is invalid: {rep.failed()}")
    r = g.r
    if e not in g.he:
        raise OperationError(f"unknown half-edge {e!r}")
    h = g.he[e]
    comp = g.components[g.component_of[h.vertex]]
    ambient = smoothing_rank(g, comp)
    # second route: per-vertex ranks minus trivial real lines inside the component
    vertex_route = sum(witten_rank(g).per_vertex[v] for v in comp) - _trivial_line_count(g, comp)
    if vertex_route != ambient:
        raise DecompositionError(f"smoothing rank {ambient} differs from vertex route {vertex_route}")

    if h.cb:
        det = detach_cb_tail(g, e, check=False).graph
        w1, _ = _piece_rank(det, h.vertex)
        if ambient != w1 - 1:
            raise DecompositionError(f"contracted boundary: {ambient} != {w1} - 1")
        return DecompositionReport(
            CONTRACTED_BOUNDARY, ambient, (w1,), (T_PLUS,), f"{ambient} = {w1} - 1",
            pullback_from_one_component=(w1 == 0),
        )
    if e not in g.partner:
        raise OperationError(f"{e!r} is neither an edge nor a contracted-boundary tail")

    a, b = g.edge_of(e)
    ha, hb = g.he[a], g.he[b]
    det = detach_edge(g, (a, b), check=False).graph
    ramond = (ha.tw + 1) % r == 0

    # order the pieces: the side holding the anchor (or an open vertex) first
    def first_side(x) -> bool:
        piece = det.components[det.component_of[x.vertex]]
        if det.is_open_component(piece):
            return True
        return any(y.anchor for v in piece for y in det.incident[v] if y.id != x.id)

    if ha.sector == INTERNAL and not first_side(ha) and first_side(hb):
        ha, hb = hb, ha
    w1, p1 = _piece_rank(det, ha.vertex)
    w2, p2 = _piece_rank(det, hb.vertex)
    closed_zero = any(
        not det.is_open_component(p) and w == 0 for p, w in ((p1, w1), (p2, w2))
    )

    if not ramond:
        if ambient != w1 + w2:
            raise DecompositionError(f"NS: {ambient} != {w1} + {w2}")
        return DecompositionReport(
            NS, ambient, (w1, w2), (), f"{ambient} = {w1} + {w2}",
            pullback_from_one_component=closed_zero,
        )
    if ha.sector == BOUNDARY:
        if ambient != w1 + w2 - 1:
            raise DecompositionError(f"Ramond boundary: {ambient} != {w1} + {w2} - 1")
        return DecompositionReport(
            RAMOND_BOUNDARY, ambient, (w1, w2), (T_PLUS,), f"{ambient} = {w1} + {w2} - 1",
        )

    if ambient != w1 + w2:
        raise DecompositionError(f"Ramond internal: {ambient} != {w1} + {w2}")
    # primed pieces: every Ramond tail gets twist r-1
    primed = det
    for x in (ha, hb):
        primed = primed.with_half_edge(x.id, tw=r - 1)
    q1, _ = _piece_rank(primed, ha.vertex)
    q2, _ = _piece_rank(primed, hb.vertex)
    if ambient != q1 + q2 - 2:
        raise DecompositionError(f"Ramond internal, primed: {ambient} != {q1} + {q2} - 2")
    case = RAMOND_OPEN_CLOSED if det.is_open_component(p1) else RAMOND_CLOSED_CLOSED
    splits = False
    if case == RAMOND_CLOSED_CLOSED:
        anchor_vertex_tails = [y for y in g.incident[ha.vertex] if y.id not in g.partner]
        anchors = [y for y in anchor_vertex_tails if y.anchor]
        splits = bool(anchors) and anchors[0].tw == -1 and all(
            y.tw == 0 for y in anchor_vertex_tails if not y.anchor
        )
    return DecompositionReport(
        case, ambient, (w1, w2), (), f"{ambient} = {w1} + {w2}",
        primed_component_ranks=(q1, q2),
        primed_identity=f"{ambient} = {q1} + {q2} - 2 ({T_TORSION})",
        pullback_from_one_component=closed_zero,
        splits=splits,
    )


# --------------------------------------------------------------------------
# Twist shift


def shift_internal_twist(g: RSpinGraph, tail: str) -> Tuple[RSpinGraph, int]:
    """Raise an internal tail's twist by r; the rank grows by the complex line of real rank 2."""
    h = g.he.get(tail)
    if h is None or tail in g.partner:
        raise OperationError(f"{tail!r} is not a tail")
    if h.sector != INTERNAL or h.cb:
        raise OperationError(f"{tail!r} is not an ordinary internal tail")
    if h.tw < 0:
        raise OperationError(f"{tail!r} has negative twist")
    shifted = g.with_half_edge(tail, tw=h.tw + g.r)
    shifted = replace(shifted, extended=True)
    delta = witten_rank(shifted).total - witten_rank(g).total
    if delta != EXTRA_RANK[L_TILDE]:
        raise DecompositionError(f"twist shift changed the rank by {delta}")
    return shifted, delta
