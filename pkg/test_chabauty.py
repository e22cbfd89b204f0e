"""
Tests for basic open sets, marked groups and low-index normal subgroups
"""
from itertools import permutations, product

import pytest

from markedgroups.models.chabauty import (
    CATALOGUE,
    BasicOpenSet,
    FiniteQuotientCert,
    MarkedGroup,
    default_alphabet,
    enumerate_normal_lowindex,
    finitely_presented_neighbourhood,
    in_open_set,
    isolated_in_sample,
)
from markedgroups.models.errors import AlphabetMismatchError, PreconditionError
from markedgroups.models.verdicts import Verdict
from markedgroups.models.words import Alphabet, commutator, conjugate, enumerate_reduced_words


def _multiply(a, b):
    """a then b"""
    return tuple(b[i] for i in a)


def _generated(gens, identity):
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _multiply(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def _epi_over_aut(group, m):
    elements = sorted(group.elements())
    identity = tuple(range(group.degree))
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[_multiply(a, b)] for b in elements] for a in elements]
    e = index[identity]
    size = len(elements)
    rest = [i for i in range(size) if i != e]
    automorphisms = 0
    for image in permutations(rest):
        sigma = dict(zip(rest, image))
        sigma[e] = e
        if all(table[sigma[i]][sigma[j]] == sigma[table[i][j]] for i in range(size) for j in range(size)):
            automorphisms += 1
    epimorphisms = sum(
        1 for choice in product(elements, repeat=m) if len(_generated(choice, identity)) == size
    )
    return epimorphisms // automorphisms


def test_catalogue_orders():
    assert [g.order for g in CATALOGUE] == [1, 2, 3, 4, 4, 5, 6, 6, 7]
    assert len({g.name for g in CATALOGUE}) == len(CATALOGUE)


@pytest.mark.parametrize('m, n, expected', [(2, 2, 3), (2, 3, 7), (2, 4, 14), (1, 7, 6)])
def test_known_counts(m, n, expected):
    assert len(enumerate_normal_lowindex(m, n)) == expected


@pytest.mark.parametrize('m, n', [(1, 7), (2, 4), (2, 7), (3, 4)])
def test_counts_match_epimorphisms_over_automorphisms(m, n):
    expected = sum(_epi_over_aut(g, m) for g in CATALOGUE if 2 <= g.order <= n)
    assert len(enumerate_normal_lowindex(m, n)) == expected


def test_min_index_one_adds_the_whole_group():
    certs = enumerate_normal_lowindex(2, 2, min_index=1)
    assert len(certs) == 4
    whole = certs[0]
    assert whole.index == 1
    assert all(whole.oracle(w) for w in enumerate_reduced_words(whole.alphabet, 2))


def test_kernels_are_normal_and_regular():
    certs = enumerate_normal_lowindex(2, 4)
    assert len({c.coset_table for c in certs}) == len(certs)
    words = list(enumerate_reduced_words(default_alphabet(2), 3))
    for cert in certs:
        # the permutation group on cosets acts regularly
        identity = tuple(range(cert.index))
        perms = [tuple(int(v) for v in image) for image in cert.images]
        assert len(_generated(perms, identity)) == cert.index
        for w in words:
            if cert.oracle(w):
                for g in cert.alphabet.gens():
                    assert cert.oracle(conjugate(w, g))


def test_abelian_quotients_contain_commutators():
    x, y = default_alphabet(2).gens()
    for cert in enumerate_normal_lowindex(2, 5):
        if cert.group_name != 'S3':
            assert commutator(x, y) in cert
    s3 = [c for c in enumerate_normal_lowindex(2, 6) if c.group_name == 'S3']
    assert len(s3) == 3
    assert all(commutator(x, y) not in c for c in s3)


def test_enumeration_limits():
    with pytest.raises(PreconditionError):
        enumerate_normal_lowindex(4, 2)
    with pytest.raises(PreconditionError):
        enumerate_normal_lowindex(2, 8)
    with pytest.raises(PreconditionError):
        enumerate_normal_lowindex(0, 2)
    with pytest.raises(AlphabetMismatchError):
        enumerate_normal_lowindex(2, 2, alphabet=Alphabet.of('a', 'b', 'c'))


def test_default_alphabet():
    assert default_alphabet(2).names == ('x', 'y')
    assert default_alphabet(4).names == ('x1', 'x2', 'x3', 'x4')
    with pytest.raises(PreconditionError):
        default_alphabet(0)


def test_coset_action():
    cert = FiniteQuotientCert(default_alphabet(1), ((1,), (2,), (0,)), 'Z3')
    x = cert.alphabet.generator('x')
    assert cert.index == 3
    assert cert.act(x) == 1
    assert cert.act(~x) == 2
    assert x ** 3 in cert
    assert x not in cert
    assert cert.label == 'Z3[1;2;0]'
    with pytest.raises(AlphabetMismatchError):
        cert.act(Alphabet.of('y').generator('y'))


def test_open_set_validation(xy):
    x, y = xy.gens()
    with pytest.raises(PreconditionError):
        BasicOpenSet(xy, must_avoid=frozenset({xy.identity()}))
    with pytest.raises(AlphabetMismatchError):
        BasicOpenSet(xy, must_contain=frozenset({Alphabet.of('a').generator('a')}))
    left = BasicOpenSet(xy, must_contain=frozenset({x * x}))
    right = BasicOpenSet(xy, must_avoid=frozenset({y}))
    both = left.intersect(right)
    assert both.must_contain == {x * x}
    assert both.must_avoid == {y}
    assert BasicOpenSet(xy).is_whole_space()
    assert not both.is_whole_space()


def test_free_and_free_abelian_points(xy):
    x, y = xy.gens()
    free, abelian = MarkedGroup.free(xy), MarkedGroup.free_abelian(xy)
    avoid_x = BasicOpenSet(xy, must_avoid=frozenset({x}))
    contain_commutator = BasicOpenSet(xy, must_contain=frozenset({commutator(x, y)}))
    assert in_open_set(free, avoid_x) is Verdict.MEMBER
    assert in_open_set(free, contain_commutator) is Verdict.NONMEMBER
    assert in_open_set(abelian, contain_commutator.intersect(avoid_x)) is Verdict.MEMBER
    assert in_open_set(free, BasicOpenSet(xy)) is Verdict.MEMBER
    with pytest.raises(AlphabetMismatchError):
        in_open_set(free, BasicOpenSet(Alphabet.of('a', 'b')))


def test_undetermined_conditions(xy):
    x, y = xy.gens()

    def partial(w):
        if w.is_identity():
            return Verdict.TRIVIAL
        if w == x:
            return Verdict.NONTRIVIAL
        return Verdict.UNDETERMINED

    group = MarkedGroup(xy, partial, 'partial')
    assert in_open_set(group, BasicOpenSet(xy, must_avoid=frozenset({x, y}))) is Verdict.UNDETERMINED
    assert in_open_set(group, BasicOpenSet(xy, frozenset({x}), frozenset({y}))) is Verdict.NONMEMBER
    assert in_open_set(group, BasicOpenSet(xy, must_avoid=frozenset({x}))) is Verdict.MEMBER


def test_marked_group_needs_trivial_identity(xy):
    with pytest.raises(ValueError):
        MarkedGroup(xy, lambda w: Verdict.NONTRIVIAL)


def test_surface_group_neighbourhood(surface):
    alphabet, family = surface
    group = MarkedGroup.from_family(family, 'surface')
    relator = family.relators[0]
    x1 = alphabet.generator('x1')
    neighbourhood = finitely_presented_neighbourhood([relator], [x1, x1 * x1])
    assert neighbourhood.alphabet == alphabet
    assert in_open_set(group, neighbourhood) is Verdict.MEMBER
    assert in_open_set(MarkedGroup.free(alphabet), neighbourhood) is Verdict.NONMEMBER
    assert group.is_trivial(conjugate(relator, x1)) is Verdict.TRIVIAL
    with pytest.raises(PreconditionError):
        finitely_presented_neighbourhood([], [])
    assert finitely_presented_neighbourhood([], [], alphabet=alphabet).is_whole_space()


def test_quotient_points_in_open_sets():
    certs = enumerate_normal_lowindex(2, 3)
    x, y = certs[0].alphabet.gens()
    open_set = BasicOpenSet(certs[0].alphabet, must_contain=frozenset({x ** 3}), must_avoid=frozenset({x}))
    members = [c for c in certs if in_open_set(MarkedGroup.from_quotient(c), open_set) is Verdict.MEMBER]
    # Z3 quotients in which x survives
    assert len(members) == 3
    assert all(c.group_name == 'Z3' for c in members)


@pytest.mark.parametrize('n', [2, 3, 4])
def test_isolation_contract(n):
    sample = enumerate_normal_lowindex(2, n)
    isolated = 0
    for target in sample:
        open_set = isolated_in_sample(target, sample)
        if open_set is None:
            continue
        isolated += 1
        assert in_open_set(MarkedGroup.from_quotient(target), open_set) is Verdict.MEMBER
        for other in sample:
            if other is not target:
                assert in_open_set(MarkedGroup.from_quotient(other), open_set) is Verdict.NONMEMBER
    if n == 2:
        assert isolated == len(sample)


def test_isolation_edge_cases():
    sample = enumerate_normal_lowindex(2, 2)
    assert isolated_in_sample(sample[0], sample, separator_budget=0) is None
    assert isolated_in_sample(sample[0], sample[:1]).is_whole_space()
