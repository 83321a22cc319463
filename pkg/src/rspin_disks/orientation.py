"""Sign bookkeeping for relative orientations.

Orientations are never materialized; every quantity here is a +1/-1 comparison factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

from .graph import BOUNDARY, INTERNAL, OPEN, RSpinGraph, validate
from .invariants import mod_prime
from .ops import OperationError, detach_edge


class SignError(ValueError):
    pass


@dataclass(frozen=True)
class SignFactor:
    value: int
    rule: str
    note: str = ""


@dataclass(frozen=True)
class SignLedger:
    factors: Tuple[SignFactor, ...] = ()

    @property
    def product(self) -> int:
        p = 1
        for f in self.factors:
            p *= f.value
        return p

    def to_json(self) -> dict:
        return {
            "factors": [{"value": f.value, "rule": f.rule, "note": f.note} for f in self.factors],
            "product": self.product,
        }


def mc_invariant(r: int, twists: Iterable[int]) -> int:
    twists = list(twists)
    if not twists:
        raise ValueError("twist multiset must be nonempty")
    if any(not 0 <= a <= r - 1 for a in twists):
        raise ValueError(f"twists must lie in 0..{r - 1}: {twists}")
    s = sum(twists)
    num = s - (r - 2) + mod_prime(r - 2 - s, r)
    if num % r:
        raise ValueError(f"non-integral invariant {num}/{r}")
    return num // r


def closed_split_sign(r: int, closed_twists: Iterable[int], delta: int = 1) -> int:
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    return delta ** mc_invariant(r, closed_twists)


def boundary_split_sign(n1: int, n2: int) -> int:
    if n1 < 0 or n2 < 0:
        raise ValueError("block sizes must be non-negative")
    return -1 if ((n1 - 1) * n2) % 2 else 1


def rotation_signs(k: int, h: int) -> Tuple[int, int, int]:
    """Signs of a cyclic shift by h on the bundle and on the moduli, and their product."""
    if k < 1:
        raise ValueError("k must be at least 1")
    eps = -1 if (k - 1) % 2 else 1
    sign_w = eps ** (h % 2)
    sign_m = -1 if (h * (k - 1)) % 2 else 1
    return sign_w, sign_m, sign_w * sign_m


def zero_dim_orientation(k: int, l: int) -> int:
    if (k, l) == (1, 1):
        return 1
    if (k, l) == (3, 0):
        return -1
    raise ValueError(f"(k, l) = ({k}, {l}) is not a zero-dimensional base case")


def two_family_factor(k: int) -> int:
    """Flip between the two admissible orientation families."""
    return -1 if (k - 1) % 2 else 1


def prior_convention_factor(k: int) -> int:
    """Metadata only: the factor relating the odd-k orientation to an older convention."""
    if k % 2 == 0:
        raise ValueError("defined for odd k only")
    return -1 if ((k - 1) // 2) % 2 else 1


# --------------------------------------------------------------------------
# Transport along a chain of detachments


Edge = Union[str, Sequence[str]]


def _boundary_tails(g: RSpinGraph, side: Iterable[str]) -> int:
    return sum(1 for v in side for h in g.incident[v] if h.sector == BOUNDARY and h.id not in g.partner)


def transport_sign(
    g: RSpinGraph,
    chain: Sequence[Edge],
    delta: int = 1,
    other_family: bool = False,
    check: bool = True,
) -> SignLedger:
    """Sign relating the orientation transported along `chain` (edges of g, detached one at a
    time) to the product of the canonical orientations of the pieces."""
    if check:
        rep = validate(g)
        if not rep.ok:
            raise SignError(f"graph is invalid: {rep.failed()}")
    r = g.r
    cur = g
    factors: List[SignFactor] = []
    for step in chain:
        try:
            a, b = (cur.edge_of(step) if isinstance(step, str) else tuple(step))
        except (KeyError, ValueError) as exc:
            raise SignError(f"step {step!r} is not an edge of the current graph") from exc
        if cur.partner.get(a) != b:
            raise SignError(f"step {step!r} is not an edge of the current graph")
        ha, hb = cur.he[a], cur.he[b]
        if ha.sector == BOUNDARY:
            # the first block sits on the illegal half; Ramond edges use the smaller half-edge id
            h1, h2 = (ha, hb) if (ha.alt, ha.id) <= (hb.alt, hb.id) else (hb, ha)
            n1 = _boundary_tails(cur, cur.reach(h1.vertex, cut=[a, b]))
            n2 = _boundary_tails(cur, cur.reach(h2.vertex, cut=[a, b]))
            s = boundary_split_sign(n1, n2)
            factors.append(SignFactor(s, "boundary-split", f"outward normal, blocks {n1}|{n2}"))
            factors.append(SignFactor(s, "boundary-commute", "moving the normal and the forgotten half past the first block"))
        else:
            comp = cur.components[cur.component_of[ha.vertex]]
            if not cur.is_open_component(comp):
                factors.append(SignFactor(1, "closed-closed", "complex orientations"))
            else:
                closed = [
                    h for h in (ha, hb)
                    if not any(cur.vertex[v].kind == OPEN for v in cur.reach(h.vertex, cut=[a, b]))
                ]
                if len(closed) != 1:
                    raise SignError(f"edge ({a}, {b}) does not split off a closed piece")
                h = closed[0]
                side = cur.reach(h.vertex, cut=[a, b])
                tws = [
                    x.tw % r for v in side for x in cur.incident[v]
                    if x.id not in cur.partner and x.id != h.id and not x.cb
                ]
                m = mc_invariant(r, tws)
                factors.append(SignFactor(delta ** m, "closed-split", f"m^c = {m}, delta = {delta}"))
        try:
            cur = detach_edge(cur, (a, b), check=False).graph
        except OperationError as exc:
            raise SignError(str(exc)) from exc
    if other_family:
        nb = sum(1 for h in g.half_edges if h.sector == BOUNDARY and h.id not in g.partner)
        factors.append(SignFactor(two_family_factor(nb), "other-family", f"|B| = {nb}"))
    return SignLedger(tuple(factors))
