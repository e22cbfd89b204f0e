"""
Tests for graph-product normal forms and the wreath relator certificates
"""
from collections import deque
from itertools import chain, combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from markedgroups.models.errors import PreconditionError
from markedgroups.models.graphprod import (
    CommutationGraph,
    gp_is_trivial,
    gp_normalize,
    retract,
    word_to_syllables,
    wreath_alphabet,
    wreath_family,
    wreath_independence,
    wreath_relator,
)
from markedgroups.models.words import Alphabet, commutator, conjugate


def _subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def _moves(state, graph):
    """Swap adjacent commuting syllables, or merge adjacent equal-vertex ones"""
    for i in range(len(state) - 1):
        (v, e), (w, f) = state[i], state[i + 1]
        if v == w:
            merged = ((v, e + f),) if e + f else ()
            yield state[:i] + merged + state[i + 2:]
        elif graph.commute(v, w):
            yield state[:i] + (state[i + 1], state[i]) + state[i + 2:]


def _reachable(raw, graph):
    start = tuple(raw)
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for nxt in _moves(state, graph):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


syllables = st.lists(
    st.tuples(st.integers(min_value=0, max_value=4), st.sampled_from([1, -1, 2])),
    max_size=6,
)
distance_sets = st.sets(st.integers(min_value=1, max_value=4))


@settings(max_examples=500)
@given(syllables, distance_sets)
def test_normal_form_is_reachable_and_shortest(raw, J):
    graph = CommutationGraph.from_distances(J)
    normal = gp_normalize(raw, graph)
    reachable = _reachable(raw, graph)
    assert normal.syllables in reachable
    assert len(normal) == min(len(state) for state in reachable)


@settings(max_examples=300)
@given(syllables, distance_sets)
def test_normal_form_is_constant_on_shuffle_classes(raw, J):
    graph = CommutationGraph.from_distances(J)
    normal = gp_normalize(raw, graph)
    for state in _reachable(raw, graph):
        assert gp_normalize(state, graph) == normal


@pytest.mark.slow
@pytest.mark.parametrize('J', [{1, 3}, {2, 4}])
def test_normal_form_on_all_positive_sequences_of_six_syllables(J):
    graph = CommutationGraph.from_distances(J)
    for length in range(7):
        for vertices in product(range(5), repeat=length):
            raw = [(v, 1) for v in vertices]
            reachable = _reachable(raw, graph)
            normal = gp_normalize(raw, graph)
            assert normal.syllables in reachable, raw
            assert len(normal) == min(len(state) for state in reachable), raw


def test_graph_edges():
    graph = CommutationGraph.from_distances({1, 3})
    assert graph.commute(0, 3)
    assert graph.commute(5, 4)
    assert not graph.commute(0, 2)
    assert not graph.commute(2, 2)
    assert graph.describe() == '{1,3}'
    complete = CommutationGraph.complete()
    assert complete.commute(0, 100)
    assert not complete.commute(7, 7)
    assert complete.describe() == 'all but {}'
    with pytest.raises(ValueError):
        CommutationGraph.from_distances({0})


def test_canonical_order_sorts_commuting_syllables():
    assert gp_normalize([(2, 1), (0, 1)], CommutationGraph.complete()).syllables == ((0, 1), (2, 1))
    assert gp_normalize([(2, 1), (0, 1)], CommutationGraph.empty()).syllables == ((2, 1), (0, 1))
    assert gp_normalize([(0, 1), (0, 0), (0, -1)], CommutationGraph.empty()).syllables == ()


def test_merge_through_commuting_syllables():
    graph = CommutationGraph.from_distances({1})
    normal = gp_normalize([(0, 1), (1, 1), (0, 2)], graph)
    assert normal.syllables == ((0, 3), (1, 1))
    blocked = gp_normalize([(0, 1), (2, 1), (0, 2)], graph)
    assert len(blocked) == 3


@pytest.mark.parametrize('s', range(1, 7))
def test_commutator_trivial_iff_distance_is_an_edge(s):
    for J in _subsets(range(1, 7)):
        graph = CommutationGraph.from_distances(J)
        image = gp_normalize([(0, 1), (s, 1), (0, -1), (s, -1)], graph)
        assert gp_is_trivial(image) == (s in J)


@pytest.mark.parametrize('s', range(1, 7))
def test_wreath_relators_are_independent(s):
    for J in _subsets(j for j in range(1, 7) if j != s):
        assert wreath_independence(s, J)
        assert wreath_independence(s, J, truncation=s + 2)


def test_wreath_relator_matches_commutator():
    t, x = wreath_alphabet().gens()
    assert wreath_relator(1) == commutator(conjugate(x, t), x)
    assert wreath_relator(3) == commutator(conjugate(x, t ** 3), x)
    assert len(wreath_relator(3)) == 2 * 3 * 2 + 4
    assert wreath_family(4).labels == (1, 2, 3, 4)


def test_word_to_syllables():
    assert word_to_syllables(wreath_relator(1)) == [(1, 1), (0, 1), (1, -1), (0, -1)]
    t, x = wreath_alphabet().gens()
    assert word_to_syllables(t * x * x * ~t * x) == [(1, 2), (0, 1)]
    with pytest.raises(PreconditionError):
        word_to_syllables(t * x)
    y = Alphabet.of('t', 'x', 'y').generator('y')
    with pytest.raises(PreconditionError):
        word_to_syllables(y)


def test_retract_drops_vertices():
    graph = CommutationGraph.from_distances({2})
    image = gp_normalize(word_to_syllables(wreath_relator(3)), graph)
    assert len(image) == 4
    assert gp_is_trivial(retract(image, {0}))
    assert gp_is_trivial(retract(image, {3}))
    assert not gp_is_trivial(retract(image, {0, 3}))


def test_wreath_preconditions():
    with pytest.raises(PreconditionError):
        wreath_independence(2, {1, 2})
    with pytest.raises(PreconditionError):
        wreath_independence(0, set())
    with pytest.raises(PreconditionError):
        wreath_independence(3, {1}, truncation=2)
    with pytest.raises(PreconditionError):
        wreath_relator(0)
    with pytest.raises(PreconditionError):
        wreath_relator(1, Alphabet.of('a', 'b', 'c'))
