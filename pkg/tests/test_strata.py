import itertools

import pytest

from oracles import brute_census
from rspin_disks.graph import BOUNDARY, CLOSED, INTERNAL, GraphBuilder, are_isomorphic, is_stable, validate
from rspin_disks.invariants import decompose_witten, feasibility, moduli_dimension
from rspin_disks.strata import (
    AmbientSpec,
    InfeasibleError,
    enumerate_codim1,
    stratum_decorations,
)


def _halves(g):
    a, b = g.pairs[0]
    return g.he[a], g.he[b]


# ---------------------------------------------------------------- census examples


def test_census_r2_five_points():
    recs = enumerate_codim1(AmbientSpec.make(2, [1, 2, 3, 4, 5]))
    assert len(recs) == 5
    for rec in recs:
        h1, h2 = _halves(rec.graph)
        assert (h1.tw, h2.tw) == (0, 0) and {h1.alt, h2.alt} == {0, 1}
        assert len(rec.block) in (2, 3)


def test_census_r3_one_internal_point():
    recs = enumerate_codim1(AmbientSpec.make(3, [1, 2, 3], [2]))
    assert len(recs) == 3
    for rec in recs:
        h1, h2 = _halves(rec.graph)
        assert sorted([(h1.tw, h1.alt), (h2.tw, h2.alt)]) == [(0, 0), (1, 1)]
    positions = {dict(rec.insertion)["v2"] for rec in recs}
    assert len(positions) == 3


def test_census_zero_dimensional_space_is_empty():
    assert enumerate_codim1(AmbientSpec.make(2, [1, 2, 3])) == []


def test_census_ramond_strata_behind_flag():
    spec = AmbientSpec.make(3, [1, 2, 3], [2])
    full = enumerate_codim1(spec, include_ramond=True)
    assert len(full) == 6
    assert sum(rec.edge_class == "Ramond" for rec in full) == 3


def test_census_infeasible_spec():
    with pytest.raises(InfeasibleError):
        enumerate_codim1(AmbientSpec.make(2, [1, 2, 3, 4]))


def test_census_output_is_deterministic():
    spec = AmbientSpec.make(5, [1, 2, 3], [1, 1])
    a = [rec.to_json() for rec in enumerate_codim1(spec, include_ramond=True)]
    b = [rec.to_json() for rec in enumerate_codim1(spec, include_ramond=True)]
    assert a == b
    sizes = [len(x["boundary_block"]) for x in a]
    assert sizes == sorted(sizes)


# ---------------------------------------------------------------- decorations


def test_decoration_r2():
    g = stratum_decorations(2, [1, 2, 3], {}, [4, 5], {})
    assert (g.he["n1"].tw, g.he["n1"].alt, g.he["n2"].tw, g.he["n2"].alt) == (0, 0, 0, 1)


def test_decoration_r3_empty_block():
    g = stratum_decorations(3, [], {1: 2}, [1, 2, 3], {})
    assert (g.he["n1"].tw, g.he["n1"].alt, g.he["n2"].tw, g.he["n2"].alt) == (0, 0, 1, 1)


def test_decoration_unstable_side():
    with pytest.raises(InfeasibleError) as ei:
        stratum_decorations(2, [1], {}, [2, 3, 4, 5], {})
    assert "unstable" in str(ei.value)


def test_decoration_matches_exhaustive_search():
    # every (tw, alt) choice for the two halves; exactly the returned one survives validate
    r = 3
    b1, i1, b2, i2 = [], {1: 2}, [1, 2, 3], {}
    want = stratum_decorations(r, b1, i1, b2, i2)
    hits = []
    for t1, t2 in itertools.product(range(-1, r), repeat=2):
        for a1, a2 in itertools.product((0, 1), repeat=2):
            g = want.with_half_edge("n1", tw=t1, alt=a1).with_half_edge("n2", tw=t2, alt=a2)
            if validate(g).ok:
                hits.append(g)
    assert len(hits) == 1 and are_isomorphic(hits[0], want)


# ---------------------------------------------------------------- oracle comparison


def _specs(max_r, max_k, max_l, max_total):
    for r in range(2, max_r + 1):
        for k in range(0, max_k + 1):
            for l in range(0, max_l + 1):
                if k + l > max_total:
                    continue
                for a in itertools.combinations_with_replacement(range(r), l):
                    if feasibility(r, k, a).feasible:
                        yield r, k, a


def test_census_matches_brute_force():
    n = 0
    for r, k, a in _specs(4, 5, 2, 6):
        spec = AmbientSpec.make(r, range(1, k + 1), a)
        recs = enumerate_codim1(spec, include_ramond=True)
        got = {"NS": 0, "Ramond": 0}
        for rec in recs:
            if rec.kind == "boundary-edge":
                got[rec.edge_class] += 1
        assert got == brute_census(r, list(range(1, k + 1)), dict(spec.internal)), (r, k, a)
        n += 1
    assert n > 20


def _brute_cb_count(r, twists):
    count = 0
    for t in range(-1, r):
        b = GraphBuilder(r)
        v = b.add_vertex(CLOSED)
        b.add_half_edge(v, INTERNAL, t, None, None, cb=True, anchor=True)
        for lab, a in enumerate(twists, start=1):
            b.add_half_edge(v, INTERNAL, a, None, [lab])
        g = b.build()
        if validate(g).ok and is_stable(g):
            count += 1
    return count


def test_contracted_boundary_stratum_matches_brute_force():
    for r, k, a in _specs(6, 0, 4, 4):
        recs = enumerate_codim1(AmbientSpec.make(r, [], a))
        got = sum(rec.kind == "contracted-boundary" for rec in recs)
        assert got == _brute_cb_count(r, a), (r, a)


# ---------------------------------------------------------------- stratum properties


def _all_records():
    for r, k, a in _specs(5, 5, 3, 6):
        yield from enumerate_codim1(AmbientSpec.make(r, range(1, k + 1), a), include_ramond=True, codim2=True)


def test_codimension_bookkeeping():
    for rec in _all_records():
        g = rec.graph
        n_bdry = sum(1 for x, _ in g.pairs if g.he[x].sector == BOUNDARY)
        n_int = len(g.pairs) - n_bdry
        n_cb = sum(1 for h in g.half_edges if h.cb)
        assert moduli_dimension(g)[1] == n_bdry + 2 * n_int + n_cb


def test_ns_boundary_edges_have_one_legal_half():
    for rec in _all_records():
        if rec.kind == "boundary-edge" and rec.edge_class == "NS":
            h1, h2 = _halves(rec.graph)
            assert h1.alt + h2.alt == 1


def test_strata_rank_identities():
    for rec in _all_records():
        g = rec.graph
        target = g.pairs[0][0] if g.pairs else next(h.id for h in g.half_edges if h.cb)
        rep = decompose_witten(g, target)
        drop = 1 if rep.extra_terms else 0
        assert rep.ambient_rank == sum(rep.component_ranks) - drop
