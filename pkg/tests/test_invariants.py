import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from examples import (
    contracted_boundary_r3,
    open_closed_ns_r3,
    open_closed_ramond_r3,
    ramond_boundary_r3,
    two_disk_r2,
    two_disk_r3,
)
from oracles import brute_nonempty, component_tail_rank
from rspin_disks.graph import BOUNDARY, INTERNAL, smooth_graph, validate
from rspin_disks.invariants import (
    CONTRACTED_BOUNDARY,
    IMPOSSIBLE,
    ILLEGAL,
    LEGAL,
    NEEDS_ALT,
    NEVEU_SCHWARZ,
    NS,
    RAMOND,
    RAMOND_BOUNDARY,
    RAMOND_OPEN_CLOSED,
    T_PLUS,
    automorphism_order,
    boundary_legality,
    classify_node,
    closed_vertex_complex_rank,
    decompose_witten,
    feasibility,
    mod_prime,
    moduli_dimension,
    moduli_nonempty,
    shift_internal_twist,
    witten_rank,
)
from rspin_disks.ops import OperationError, detach_cb_tail, detach_edge
from rspin_disks.strata import random_graph


# ---------------------------------------------------------------- ranks


@pytest.mark.parametrize("r,k,a,e", [(3, 2, [1], 1), (5, 1, [2, 3], 2), (2, 3, [], 0), (4, 1, [1, 1], 1)])
def test_smooth_rank(r, k, a, e):
    rep = witten_rank(smooth_graph(r, k, a))
    assert rep.total == e and rep.bundle_rank == e


def test_closed_vertex_rank_is_twice_complex_rank():
    assert closed_vertex_complex_rank(3, [1, 1, 2]) == 1
    rep = witten_rank(contracted_boundary_r3())
    assert rep.per_vertex["v1"] == 2 and rep.complex_per_closed_vertex["v1"] == 1


def test_rank_report_bundle_rank_subtracts_ramond_boundary_lines():
    rep = witten_rank(ramond_boundary_r3())
    assert rep.total == 5 and rep.bundle_rank == 4 and rep.corrections == 1


@given(st.integers(0, 10**6))
def test_per_vertex_ranks_non_negative(seed):
    g = random_graph(random.Random(seed))
    rep = witten_rank(g)
    assert all(x >= 0 for x in rep.per_vertex.values())
    assert rep.total == sum(rep.per_vertex.values())


def test_mod_prime_representatives():
    assert [mod_prime(x, 3) for x in range(-3, 4)] == [0, 1, -1, 0, 1, -1, 0]
    for r in range(2, 8):
        for x in range(-20, 20):
            y = mod_prime(x, r)
            assert -1 <= y <= r - 2 and (x - y) % r == 0


# ---------------------------------------------------------------- feasibility


@pytest.mark.parametrize("r,k,a,want", [(2, 4, [], False), (3, 2, [1], True), (2, 3, [], True), (3, 1, [], False)])
def test_feasibility_examples(r, k, a, want):
    assert moduli_nonempty(r, k, a) is want


def test_feasibility_reasons_and_errors():
    f = feasibility(2, 4, [])
    assert not f.feasible and "parity" in f.reason and f.rank == 0
    assert "integer" in feasibility(3, 3, [1]).reason
    with pytest.raises(ValueError):
        feasibility(3, 2, [3])


def test_feasibility_matches_brute_force_small():
    for r in range(2, 5):
        for k in range(0, 5):
            for a in ([], [0], [1], [r - 1], [1, 1]):
                assert moduli_nonempty(r, k, a) == brute_nonempty(r, k, a), (r, k, a)


# ---------------------------------------------------------------- legality and nodes


def test_boundary_legality():
    assert boundary_legality(3, 1) == LEGAL
    assert boundary_legality(3, 2) == ILLEGAL
    assert boundary_legality(4, 2) == NEEDS_ALT
    assert boundary_legality(4, 1) == IMPOSSIBLE
    with pytest.raises(ValueError):
        boundary_legality(3, 3)


def test_classify_node():
    assert classify_node(3, 2, 2) == RAMOND
    assert classify_node(3, 0, 1) == NEVEU_SCHWARZ
    assert classify_node(5, -1, 4) == RAMOND
    with pytest.raises(ValueError):
        classify_node(3, 1, 1)


# ---------------------------------------------------------------- automorphisms and dimension


def test_automorphism_examples():
    assert automorphism_order(smooth_graph(3, 2, [1])).order == 1
    assert automorphism_order(open_closed_ns_r3()).order == 3
    assert automorphism_order(two_disk_r3()).order == 1
    cb = automorphism_order(contracted_boundary_r3())
    assert cb.tag == "closed" and cb.order == 3


def test_automorphisms_multiply_over_components():
    g = detach_edge(open_closed_ns_r3(), "h1").graph
    aut = automorphism_order(g)
    assert aut.per_component == (1, 3) or aut.per_component == (3, 1)
    assert aut.order == 3


def test_dimension_examples():
    assert moduli_dimension(smooth_graph(3, 4, [1, 1])) == (5, 0)
    assert moduli_dimension(two_disk_r2()) == (1, 1)
    assert moduli_dimension(open_closed_ns_r3())[1] == 2
    assert moduli_dimension(contracted_boundary_r3()) == (0, 1)


# ---------------------------------------------------------------- decomposition


def test_decompose_ns_boundary_r2():
    rep = decompose_witten(two_disk_r2(), "h1")
    assert rep.case == NS and rep.identity == "0 = 0 + 0"


def test_decompose_ramond_boundary():
    rep = decompose_witten(ramond_boundary_r3(), "h1")
    assert rep.case == RAMOND_BOUNDARY
    assert rep.ambient_rank == 4 and sorted(rep.component_ranks) == [2, 3] and rep.extra_terms == (T_PLUS,)


def test_decompose_contracted_boundary():
    rep = decompose_witten(contracted_boundary_r3(), "t")
    assert rep.case == CONTRACTED_BOUNDARY and rep.ambient_rank == 1 and rep.component_ranks == (2,)


def test_decompose_open_closed_ramond():
    rep = decompose_witten(open_closed_ramond_r3(), "h2")
    assert rep.case == RAMOND_OPEN_CLOSED
    assert rep.component_ranks == (2, 0) and rep.primed_component_ranks == (2, 2)
    assert rep.pullback_from_one_component


def test_decompose_rejects_tail():
    with pytest.raises(OperationError):
        decompose_witten(two_disk_r3(), "b1")


@given(st.integers(0, 10**6))
def test_decomposition_agrees_with_tail_oracle(seed):
    g = random_graph(random.Random(seed), r=random.Random(seed).randint(2, 7))
    for a, _ in g.pairs:
        rep = decompose_witten(g, a)
        assert rep.ambient_rank == component_tail_rank(g, g.he[a].vertex)
        det = detach_edge(g, a).graph
        pieces = sorted(component_tail_rank(det, g.he[x].vertex) for x in g.edge_of(a))
        assert sorted(rep.component_ranks) == pieces
    for h in g.half_edges:
        if h.cb:
            rep = decompose_witten(g, h.id)
            det = detach_cb_tail(g, h.id).graph
            assert rep.component_ranks == (component_tail_rank(det, h.vertex),)


@given(st.integers(0, 10**6))
def test_detach_keeps_total_and_frees_one_line_per_ramond_boundary_edge(seed):
    g = random_graph(random.Random(seed))
    before = witten_rank(g)
    for a, b in g.pairs:
        after = witten_rank(detach_edge(g, a).graph)
        assert after.total == before.total
        ramond_bdry = g.he[a].sector == BOUNDARY and (g.he[a].tw + 1) % g.r == 0
        assert after.bundle_rank == before.bundle_rank + (1 if ramond_bdry else 0)


# ---------------------------------------------------------------- twist shift


def test_shift_examples():
    g = smooth_graph(3, 2, [1])
    shifted, delta = shift_internal_twist(g, [h.id for h in g.half_edges if h.sector == INTERNAL][0])
    assert delta == 2 and witten_rank(shifted).total == 3
    assert validate(shifted).ok
    assert shifted.extended
    assert not validate(dataclasses.replace(shifted, extended=False)).ok


def test_shift_r2_and_errors():
    g = smooth_graph(2, 1, [0, 0])
    hid = [h.id for h in g.half_edges if h.sector == INTERNAL][0]
    assert shift_internal_twist(g, hid)[1] == 2
    with pytest.raises(OperationError):
        shift_internal_twist(g, [h.id for h in g.half_edges if h.sector == BOUNDARY][0])


@given(st.integers(0, 10**6))
def test_shift_delta_is_always_two(seed):
    g = random_graph(random.Random(seed))
    for h in g.tails():
        if h.sector == INTERNAL and not h.cb and h.tw >= 0:
            assert shift_internal_twist(g, h.id)[1] == 2
