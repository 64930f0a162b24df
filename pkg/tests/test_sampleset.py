"""Sample-set construction over disjoint ball families.

Expected decompositions below are derived by hand from the ball
structure of each family (see comments), then checked against both the
builder and the independent verifier.
"""

import dataclasses

import pytest

from flipwide import (
    BudgetExceeded,
    DisjointFamilyInput,
    InputError,
    ModeError,
    SampleBudget,
    build_sample_set,
    decompose_exceptional,
    phi_equivalent_over,
    verify_sample_set,
)
from flipwide.generators import clique, edgeless, half_graph, path, star_forest
from flipwide.graphcore import Graph, ball_mask
from flipwide.sampleset import _stable_certificate


def build_and_verify(g, centers, hr, mode, budget=None):
    inp = DisjointFamilyInput(tuple(centers), hr, mode)
    res = build_sample_set(g, inp, budget or SampleBudget())
    ok, why = verify_sample_set(g, inp, res)
    assert ok, why
    return res


# ---------------------------------------------------------------- builds

@pytest.mark.parametrize("mode", ["nip", "stable"])
def test_star_forest_build(mode):
    # Ten disjoint stars, radius-1 balls. Every leaf of center c >= 1 is
    # inequivalent to the lone sample (center 0) only over ball c-1, the
    # ball that contains it; leaves of center 0 sit in no surviving ball
    # and get the sentinel.
    g = star_forest(10, 8)
    res = build_and_verify(g, range(10), 1, mode)
    assert res.samples == (0,)
    assert res.subseq == tuple(range(1, 10))
    assert res.mode == mode
    expected = [9] + list(range(9)) + [9] * 8
    for c in range(1, 10):
        expected.extend([c - 1] * 8)
    assert res.ex == tuple(expected)
    assert res.ex[:14] == (9, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 9)
    assert set(res.s_lt) == {0} and set(res.s_gt) == {0}


@pytest.mark.parametrize("factory,n", [(edgeless, 50), (clique, 30)])
@pytest.mark.parametrize("mode", ["nip", "stable"])
def test_uniform_family_build(factory, n, mode):
    # Radius-0 balls are singletons; all vertices look alike, so each
    # surviving center's only exception is its own position.
    g = factory(n)
    res = build_and_verify(g, range(n), 0, mode)
    assert res.samples == (0,)
    assert res.subseq == tuple(range(1, n))
    assert res.ex == (n - 1,) + tuple(range(n - 1))
    assert set(res.s_lt) == {0} and set(res.s_gt) == {0}


def test_half_graph_modes_diverge():
    # Half graphs order their vertices; two samples are needed and the
    # two modes certify vertex 8 differently while both verify.
    g = half_graph(6)
    nip = build_and_verify(g, range(12), 0, "nip")
    stable = build_and_verify(g, range(12), 0, "stable")
    assert nip.samples == stable.samples == (0, 9)
    assert nip.subseq == stable.subseq == (1, 2, 3)
    assert nip.ex == (3, 0, 1, 2, 3, 3, 3, 0, 1, 3, 3, 3)
    assert nip.s_lt == (0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1)
    assert nip.s_gt == (0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1)
    assert stable.ex == (3, 0, 1, 2, 3, 3, 3, 0, 2, 3, 3, 3)
    assert stable.s_lt == stable.s_gt == (0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1)


def test_containment_rule_direct():
    g = star_forest(10, 8)
    inp = DisjointFamilyInput(tuple(range(10)), 1, "nip")
    res = build_sample_set(g, inp)
    balls = [ball_mask(g, c, 1) for c in res.subseq]
    for a in range(g.n):
        for i, ball in enumerate(balls):
            if ball >> a & 1:
                assert res.ex[a] == i


def test_empty_centers():
    g = clique(5)
    res = build_sample_set(g, DisjointFamilyInput((), 0))
    assert res.samples == () and res.subseq == ()
    assert res.ex == (0,) * 5
    assert res.s_lt == (None,) * 5
    ok, why = verify_sample_set(g, DisjointFamilyInput((), 0), res)
    assert ok, why


# ------------------------------------------------------------ primitives

def test_phi_equivalent_over():
    g = Graph.from_edges(5, [(0, 2), (1, 3)])
    ball = 1 << 2
    # 0 has the edge into the ball, 1 does not
    assert not phi_equivalent_over(g, 0, 1, ball)
    # membership mismatch
    assert not phi_equivalent_over(g, 0, 2, ball)
    # edges outside the ball are invisible
    assert phi_equivalent_over(g, 0, 1, 1 << 4)
    assert phi_equivalent_over(g, 0, 0, g.full_mask())


def singleton_balls(*vs):
    return [1 << v for v in vs]


def test_decompose_no_split():
    # equivalence profile T,F,T,F against the only sample: no single
    # exceptional position can absorb two separated failures
    g = Graph.from_edges(6, [(0, 3), (0, 5)])
    assert decompose_exceptional(g, (1,), singleton_balls(2, 3, 4, 5), 0) is None


def test_decompose_smallest_exception():
    g = Graph.from_edges(5, [(0, 2)])
    assert decompose_exceptional(g, (1,), singleton_balls(2, 3, 4), 0) == (0, 0, 0)
    g = Graph.from_edges(5, [(0, 3)])
    assert decompose_exceptional(g, (1,), singleton_balls(2, 3, 4), 0) == (1, 0, 0)
    g = Graph.from_edges(5, [(0, 4)])
    assert decompose_exceptional(g, (1,), singleton_balls(2, 3, 4), 0) == (2, 0, 0)


def test_decompose_sentinel_beats_split():
    # vertex 0 matches sample 2 over every ball and sample 1 only over
    # the first; the uniform certificate wins
    g = Graph.from_edges(6, [(1, 4), (1, 5)])
    res = decompose_exceptional(g, (1, 2), singleton_balls(3, 4, 5), 0)
    assert res == (3, 1, 1)


def test_decompose_lowest_sample_wins():
    g = edgeless(5)
    assert decompose_exceptional(g, (1, 2), singleton_balls(3, 4), 0) == (2, 0, 0)


def test_decompose_degenerate():
    g = edgeless(4)
    assert decompose_exceptional(g, (), [1 << 1], 0) is None
    assert decompose_exceptional(g, (1,), [], 0) == (0, 0, 0)


def test_decompose_split_needs_two_samples():
    # 0 agrees with 1 on the first two balls and with 2 on the last two;
    # the earliest workable exception absorbs ball 1
    g = Graph.from_edges(7, [(0, 5), (2, 5), (0, 6), (2, 6), (2, 3), (2, 4)])
    balls = singleton_balls(3, 4, 5, 6)
    assert decompose_exceptional(g, (1, 2), balls, 0) == (1, 0, 1)
    # ... but no single sample covers all-but-one ball
    assert _stable_certificate(g, (1, 2), balls, 0) is None


def test_stable_certificate_one_bad_ball():
    g = Graph.from_edges(5, [(0, 3)])
    assert _stable_certificate(g, (1,), singleton_balls(2, 3, 4), 0) == (1, 0, 0)
    g = edgeless(5)
    assert _stable_certificate(g, (1,), singleton_balls(2, 3, 4), 0) == (3, 0, 0)


# ------------------------------------------------------------ validation

def test_input_validation():
    g = path(6)
    with pytest.raises(InputError, match="balls of centers 0 and 1 overlap"):
        build_sample_set(g, DisjointFamilyInput((0, 1), 1))
    with pytest.raises(InputError, match="pairwise distinct"):
        DisjointFamilyInput((2, 2), 0)
    with pytest.raises(InputError, match="mode"):
        DisjointFamilyInput((0,), 0, "loose")
    with pytest.raises(InputError, match="half radius"):
        DisjointFamilyInput((0,), -1)
    with pytest.raises(InputError):
        build_sample_set(g, DisjointFamilyInput((0, 99), 0))
    with pytest.raises(InputError, match="max_samples"):
        SampleBudget(max_samples=0)
    with pytest.raises(InputError, match="max_rounds"):
        SampleBudget(max_rounds=-3)


def test_budget_exhaustion_payloads():
    g = half_graph(6)
    inp = DisjointFamilyInput(tuple(range(12)), 0, "nip")
    with pytest.raises(BudgetExceeded) as exc:
        build_sample_set(g, inp, SampleBudget(max_samples=1))
    assert "sample budget of 1" in str(exc.value)
    assert exc.value.partial == ((0,), (1, 2, 3, 4, 5))
    assert "monadically NIP" in exc.value.diagnostic

    with pytest.raises(BudgetExceeded) as exc:
        build_sample_set(g, inp, SampleBudget(max_rounds=1))
    assert "round budget of 1" in str(exc.value)
    samples, survivors = exc.value.partial
    assert samples == (0,) and survivors == tuple(range(1, 12))


# ---------------------------------------------------------- verification

def half_graph_result(mode="nip"):
    g = half_graph(6)
    inp = DisjointFamilyInput(tuple(range(12)), 0, mode)
    return g, inp, build_sample_set(g, inp)


def test_verify_rejects_shifted_exception():
    g, inp, res = half_graph_result()
    ex = list(res.ex)
    ex[2] = 3  # vertex 2 sits in ball 1, which no sample can match
    bad = dataclasses.replace(res, ex=tuple(ex))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "vertex 2 is not equivalent to sample 0 over ball 1" in why


def test_verify_rejects_non_subsequence():
    g, inp, res = half_graph_result()
    bad = dataclasses.replace(res, subseq=(2, 1, 3))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "ordered subsequence" in why


def test_verify_rejects_sample_in_ball():
    g, inp, res = half_graph_result()
    bad = dataclasses.replace(res, samples=(0, 1))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "sample 1 lies inside a surviving ball" in why


def test_verify_rejects_equivalent_samples():
    g, inp, res = half_graph_result()
    # 10 and 11 are both adjacent to every ball vertex
    bad = dataclasses.replace(res, samples=(10, 11))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "equivalent over ball" in why


def test_verify_rejects_wrong_side_sample():
    g, inp, res = half_graph_result()
    s_lt = list(res.s_lt)
    s_lt[8] = 0  # vertex 8 matches sample 0 over no ball before its exception
    bad = dataclasses.replace(res, s_lt=tuple(s_lt))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "not equivalent to sample 0" in why


def test_verify_rejects_split_in_stable_mode():
    g, inp, res = half_graph_result("stable")
    s_gt = list(res.s_gt)
    s_gt[8] = 0
    bad = dataclasses.replace(res, s_gt=tuple(s_gt))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "split samples" in why


def test_verify_rejects_short_tables():
    g, inp, res = half_graph_result()
    bad = dataclasses.replace(res, ex=res.ex[:-1])
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "cover every vertex" in why


def test_verify_rejects_out_of_range_exception():
    g, inp, res = half_graph_result()
    ex = list(res.ex)
    ex[0] = 7
    bad = dataclasses.replace(res, ex=tuple(ex))
    ok, why = verify_sample_set(g, inp, bad)
    assert not ok and "out of range" in why
