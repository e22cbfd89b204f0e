"""
Tests for C'(1/6) verification, Dehn's algorithm and relator independence
"""
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from markedgroups.models.errors import FamilyInvariantError, PreconditionError
from markedgroups.models.graphprod import wreath_family
from markedgroups.models.smallcancel import (
    DehnSolver,
    RelatorFamily,
    check_c16,
    cofinite_continuity_witness,
    dehn_reduce,
    in_normal_closure,
    independence_check,
    make_c16_family,
    max_repeated_piece,
    symmetrized_words,
    verify_continuity_witness,
)
from markedgroups.models.words import (
    Alphabet,
    Generator,
    Word,
    abelianization,
    conjugate,
    enumerate_reduced_words,
    inverse_text,
    occurrences,
    reduce,
)
from markedgroups.services.presentation_service import parse_presentation

AB = Alphabet.of('a', 'b')


def _relator(family):
    return family.relators[0]


def test_surface_relator_is_c16(surface):
    _, family = surface
    assert check_c16(family).ok
    assert max_repeated_piece(family) == (1, Fraction(1, 8))


def test_wreath_pair_is_rejected_with_reverifiable_witness():
    family = wreath_family(2)
    verdict = check_c16(family)
    assert not verdict.ok
    report = verdict.violation
    assert 6 * len(report.witness) >= len(family.relator(report.relator_index))
    first = family.relator(report.relator_index)
    assert report.position in occurrences(report.witness, first, mode='cyclic')
    label, position, orientation = report.second_occurrence
    host = family.relator(label) if orientation == 1 else ~family.relator(label)
    assert position in occurrences(report.witness, host, mode='cyclic')
    assert (label, position, orientation) != (report.relator_index, report.position, 1)


def test_proper_powers_are_rejected():
    x, y = Alphabet.of('x', 'y').gens()
    with pytest.raises(FamilyInvariantError):
        RelatorFamily(x.alphabet, (x ** 7, y ** 7))
    with pytest.raises(FamilyInvariantError):
        RelatorFamily(x.alphabet, (x * y * x * y,))
    with pytest.raises(FamilyInvariantError):
        RelatorFamily.from_words([y * (x * y) ** 2 * ~y])
    assert len(RelatorFamily(x.alphabet, (x * x * y,))) == 1


def test_family_invariants():
    a, b = AB.gens()
    with pytest.raises(FamilyInvariantError):
        RelatorFamily(AB, (AB.identity(),))
    with pytest.raises(FamilyInvariantError):
        RelatorFamily(AB, (a * b * ~a,))
    with pytest.raises(ValueError):
        RelatorFamily(AB, (a * b, a * b * b), labels=(1, 1))


def test_subfamily_keeps_labels():
    family = make_c16_family(AB, 4)
    sub = family.subfamily([2, 4])
    assert sub.labels == (2, 4)
    assert sub.relator(4) == family.relator(4)
    assert family.without(1).labels == (2, 3, 4)
    with pytest.raises(PreconditionError):
        family.subfamily([7])


def test_symmetrized_words_are_distinct(surface):
    _, family = surface
    cyclic = symmetrized_words(_relator(family))
    assert len(cyclic) == 16
    assert len(set(cyclic)) == 16


def test_dehn_relator_is_trivial_in_one_step(surface):
    _, family = surface
    result, trace = dehn_reduce(_relator(family), family)
    assert result.is_identity()
    assert len(trace) == 1
    assert trace.steps[0].relator_index == 1


def test_dehn_requires_c16():
    with pytest.raises(PreconditionError):
        DehnSolver(wreath_family(2))


def test_short_words_are_nontrivial_in_surface_group(surface):
    # Greendlinger: a nonempty word in the normal closure contains more than half a relator
    alphabet, family = surface
    solver = DehnSolver(family)
    for w in enumerate_reduced_words(alphabet, 4):
        result, trace = solver.reduce(w)
        assert result.is_identity() == w.is_identity()
        assert len(trace) <= len(w)


def _conjugated_factors(alphabet, relator, conjugator_length):
    factors = []
    for g in enumerate_reduced_words(alphabet, conjugator_length):
        factors.append(conjugate(relator, g))
        factors.append(conjugate(~relator, g))
    return factors


def test_products_of_conjugated_relators_are_trivial(surface):
    alphabet, family = surface
    solver = DehnSolver(family)
    singles = _conjugated_factors(alphabet, _relator(family), 2)
    pairs = _conjugated_factors(alphabet, _relator(family), 1)
    candidates = singles + [u * v for u, v in product(pairs, repeat=2)]
    for w in candidates:
        result, trace = solver.reduce(w)
        assert result.is_identity(), w
        assert len(trace) <= len(w)


def _conjugated_relator_texts(relator, conjugator_length):
    return {
        conjugate(r, g).text
        for g in enumerate_reduced_words(relator.alphabet, conjugator_length)
        for r in (relator, ~relator)
    }


def _join_texts(a, b):
    cancel = 0
    limit = min(len(a), len(b))
    while cancel < limit and inverse_text(a[len(a) - 1 - cancel]) == b[cancel]:
        cancel += 1
    return a[:len(a) - cancel] + b[cancel:]


def _short_products(lefts, factors_by_prefix, lengths, bound):
    """Reduced products a·f (f a factor) of length at most bound"""
    out = set()
    for a in lefts:
        for length in lengths:
            need = -(-(len(a) + length - bound) // 2)
            if need > min(len(a), length):
                continue
            key = inverse_text(a[len(a) - need:]) if need > 0 else ''
            for f in factors_by_prefix.get((length, key), ()):
                product = _join_texts(a, f)
                if len(product) <= bound:
                    out.add(product)
    return out


def _bruteforce_closure_texts(relator, max_length, conjugator_length=4):
    """Reduced products of at most 3 conjugated relators, kept when no longer than max_length"""
    factors = _conjugated_relator_texts(relator, conjugator_length)
    by_prefix = {}
    for f in factors:
        for k in range(len(f) + 1):
            by_prefix.setdefault((len(f), f[:k]), []).append(f)
    lengths = sorted({len(f) for f in factors})
    longest = lengths[-1]
    found = {''} | {f for f in factors if len(f) <= max_length}
    found |= _short_products(factors, by_prefix, lengths, max_length)
    # a pair can only shrink to max_length with a third factor if it is short enough
    pairs = _short_products(factors, by_prefix, lengths, max_length + longest)
    found |= _short_products(pairs, by_prefix, lengths, max_length)
    return found


@pytest.mark.slow
def test_dehn_agrees_with_bruteforce_closure_up_to_length_8(surface):
    alphabet, family = surface
    closure = _bruteforce_closure_texts(family.relator(1), 8)
    solver = DehnSolver(family)
    checked = trivial_count = 0
    for w in enumerate_reduced_words(alphabet, 8):
        trivial = solver.contains(w)
        assert trivial == (w.text in closure), w
        if any(abelianization(w)):
            assert not trivial, w
        checked += 1
        trivial_count += trivial
    assert checked == 1 + 8 * (7 ** 8 - 1) // 6
    # the empty word and the 16 cyclic words of the relator and its inverse
    assert trivial_count == 17


letter_codes = st.lists(
    st.builds(Generator, st.integers(min_value=0, max_value=3), st.sampled_from([1, -1])),
    max_size=8,
)


SURFACE_ALPHABET, SURFACE_FAMILY = parse_presentation("x1 y1 x2 y2\nx1 y1 X1 Y1 x2 y2 X2 Y2\n")


@settings(max_examples=150)
@given(letter_codes)
def test_dehn_trace_is_bounded_and_shortening(letters):
    alphabet, family = SURFACE_ALPHABET, SURFACE_FAMILY
    w = reduce(letters, alphabet)
    solver = DehnSolver(family)
    result, trace = solver.reduce(w)
    assert len(trace) <= len(w)
    # each step shortens the word
    lengths = [len(step.input_word) for step in trace.steps] + [len(result)]
    assert all(a > b for a, b in zip(lengths, lengths[1:]))
    # no essential piece survives
    assert solver.reduce(result)[1].steps == []
    if len(w) <= 4:
        assert result.is_identity() == w.is_identity()


def test_dehn_step_cap_stops_early(surface):
    _, family = surface
    r = _relator(family)
    result, trace = dehn_reduce(r * r, family, max_steps=1)
    assert len(trace) == 1
    assert result == r
    assert dehn_reduce(r * r, family)[0].is_identity()


@pytest.mark.parametrize('count', range(2, 11))
def test_make_c16_family_is_independent(count):
    family = make_c16_family(AB, count)
    assert check_c16(family).ok
    lengths = [len(r) for r in family.relators]
    assert lengths == sorted(set(lengths))
    assert independence_check(family).independent


def test_in_normal_closure_of_subfamily():
    family = make_c16_family(AB, 3)
    u1, u2, _ = family.relators
    a, _ = AB.gens()
    sub = family.subfamily([1, 2])
    assert in_normal_closure(conjugate(u1, a) * u2, sub)
    assert not in_normal_closure(family.relator(3), sub)
    assert not in_normal_closure(a, family)


def test_cofinite_continuity_witness():
    family = make_c16_family(AB, 4)
    u1 = family.relator(1)
    excluded = cofinite_continuity_witness(u1, {2}, family)
    assert 1 in excluded
    assert 2 not in excluded
    assert verify_continuity_witness(u1, {2}, family, excluded)
    # every finite P avoiding the excluded labels keeps u1 out of the closure
    a, _ = AB.gens()
    assert verify_continuity_witness(a, set(), family, cofinite_continuity_witness(a, set(), family))


def test_continuity_witness_rejects_members():
    family = make_c16_family(AB, 3)
    with pytest.raises(PreconditionError):
        cofinite_continuity_witness(family.relator(2), {2}, family)


def test_continuity_witness_sees_relators_split_by_j_relators():
    family = make_c16_family(AB, 3)
    u1, u2 = family.relator(1), family.relator(2)
    cut = len(u2) // 2
    w = Word(u2.letters[:cut], AB) * u1 * Word(u2.letters[cut:], AB)
    excluded = cofinite_continuity_witness(w, {1}, family)
    # w = u2 modulo u1, so u2 must be excluded for P to avoid w
    assert 2 in excluded
    assert verify_continuity_witness(w, {1}, family, excluded)
    assert cofinite_continuity_witness(w, set(), family) - {1} <= excluded
