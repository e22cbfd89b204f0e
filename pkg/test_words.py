"""
Tests for free-group word arithmetic
"""
import pytest
from hypothesis import given, strategies as st

from markedgroups.models.errors import AlphabetMismatchError, PreconditionError
from markedgroups.models.words import (
    Alphabet,
    Generator,
    Word,
    abelianization,
    commutator,
    conjugate,
    cyclic_conjugates,
    cyclic_reduce,
    enumerate_reduced_words,
    is_cyclically_reduced,
    is_proper_power,
    occurrences,
    power,
    reduce,
    rotate,
    word_from_indices,
    word_from_text,
)

AB = Alphabet.of('a', 'b')

raw_letters = st.lists(
    st.builds(Generator, st.integers(min_value=0, max_value=1), st.sampled_from([1, -1])),
    max_size=14,
)
words = raw_letters.map(lambda letters: reduce(letters, AB))


def test_reduce_cancels_adjacent_inverses():
    a, b = AB.gens()
    assert reduce([Generator(0, 1), Generator(1, 1), Generator(1, -1), Generator(0, -1)], AB).is_identity()
    assert reduce([Generator(0, 1), Generator(1, 1)], AB) == a * b


def test_word_constructor_rejects_unreduced_letters():
    with pytest.raises(ValueError):
        Word((Generator(0, 1), Generator(0, -1)), AB)


def test_alphabet_rejects_duplicates_and_bad_names():
    with pytest.raises(ValueError):
        Alphabet.of('x', 'x')
    with pytest.raises(ValueError):
        Alphabet.of('1x')


def test_mixed_alphabets_raise():
    x = Alphabet.of('x', 'y').generator('x')
    with pytest.raises(AlphabetMismatchError):
        _ = x * AB.generator('a')


def test_commutator_and_conjugate():
    a, b = AB.gens()
    assert commutator(a, b) == a * b * ~a * ~b
    assert conjugate(a, b) == b * a * ~b
    assert len(commutator(a, b)) == 4
    assert commutator(a, a).is_identity()


def test_power_of_conjugated_word():
    a, b = AB.gens()
    w = b * a * ~b
    assert power(w, 3) == b * a * a * a * ~b
    assert power(w, -2) == b * ~a * ~a * ~b
    assert (a * b) ** 0 == AB.identity()


@given(words)
def test_reduction_is_idempotent(w):
    assert reduce(w.letters, AB) == w
    for left, right in zip(w.letters, w.letters[1:]):
        assert left != right.inverse()


@given(words, words, words)
def test_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert (u * ~u).is_identity()
    assert u * AB.identity() == u
    assert ~(u * v) == ~v * ~u


@given(words)
def test_cyclic_reduce_splits_word(w):
    core, conjugator = cyclic_reduce(w)
    assert is_cyclically_reduced(core)
    assert conjugate(core, conjugator) == w


@given(words.filter(lambda w: len(w) > 0))
def test_rotations_are_conjugates(w):
    core, _ = cyclic_reduce(w)
    for k in range(len(core)):
        rotated = rotate(core, k)
        assert rotated in cyclic_conjugates(core)
        assert abelianization(rotated) == abelianization(core)


def test_cyclic_conjugates_require_cyclically_reduced():
    a, b = AB.gens()
    with pytest.raises(PreconditionError):
        cyclic_conjugates(a * b * ~a)


def test_proper_powers():
    a, b = AB.gens()
    assert is_proper_power((a * b) ** 3)
    assert is_proper_power(a * a)
    assert is_proper_power(b * (a * b) ** 2 * ~b)
    assert not is_proper_power(a * b)
    assert not is_proper_power(a * a * b)


def test_occurrences_linear_and_cyclic():
    a, b = AB.gens()
    host = a * b * a * b
    assert occurrences(b * a, host) == [1]
    assert occurrences(b * a, host, mode='cyclic') == [1, 3]
    assert occurrences(a * a, host) == []
    with pytest.raises(PreconditionError):
        occurrences(AB.identity(), host)


SHORT_PATTERNS = [w for w in enumerate_reduced_words(AB, 2) if w.letters]


def _naive_occurrences(pattern, host, cyclic):
    text, needle = host.text, pattern.text
    n, m = len(text), len(needle)
    if cyclic:
        text = (text + text)[:2 * n - 1]
        starts = range(n)
    else:
        starts = range(n - m + 1)
    return [s for s in starts if text[s:s + m] == needle]


@pytest.mark.slow
def test_occurrences_match_naive_scan_on_all_short_words():
    hosts = 0
    for host in enumerate_reduced_words(AB, 12):
        hosts += 1
        n = len(host)
        cyclic = is_cyclically_reduced(host)
        patterns = list(SHORT_PATTERNS)
        if n > 1:
            patterns.append(host[1:])
        if cyclic and n > 1:
            doubled = host.text * 2
            # wraparound pair, a full rotation and one letter more than the host
            patterns += [word_from_text(doubled[s:s + m], AB) for s, m in ((n - 1, 2), (1, n), (0, n + 1))]
        for pattern in patterns:
            assert occurrences(pattern, host) == _naive_occurrences(pattern, host, False)
            if cyclic:
                assert occurrences(pattern, host, mode='cyclic') == _naive_occurrences(pattern, host, True)
    assert hosts == 1 + 2 * (3 ** 12 - 1)


def test_abelianization_counts_exponents():
    a, b = AB.gens()
    assert abelianization(commutator(a, b)) == (0, 0)
    assert abelianization(a * a * ~b) == (2, -1)


def test_text_encoding_round_trips_letters():
    w = word_from_indices([1, 2, -1, -1, 2], AB)
    assert word_from_text(w.text, AB) == w
    assert len(w.text) == len(w)


def test_enumerate_reduced_words_counts():
    # 1 + 4 + 4 * 3 reduced words of length <= 2 over two generators
    listed = list(enumerate_reduced_words(AB, 2))
    assert len(listed) == 17
    assert len(set(listed)) == 17
    assert listed[0].is_identity()
