"""
Tests for the standard map J -> N_J and the independence checks
"""
import math
from itertools import combinations_with_replacement, permutations, product

import pytest
from hypothesis import given, strategies as st

from markedgroups.config import Config
from markedgroups.models.errors import PreconditionError
from markedgroups.models.graphprod import wreath_alphabet, wreath_family, wreath_relator
from markedgroups.models.indfam import (
    FamilyHandle,
    SubgroupZd,
    bruteforce_collision,
    chain_family,
    check_monotone,
    hermite_normal_form,
    injectivity_bruteforce,
    is_independent,
    standard_map,
    wreath_membership,
    xgcd,
)
from markedgroups.models.smallcancel import make_c16_family
from markedgroups.models.words import Alphabet, conjugate, enumerate_reduced_words

AB = Alphabet.of('a', 'b')

vectors = st.tuples(st.integers(min_value=-4, max_value=4), st.integers(min_value=-4, max_value=4))
members = st.lists(st.lists(vectors, min_size=1, max_size=2), min_size=1, max_size=4)


@given(st.integers(min_value=-500, max_value=500), st.integers(min_value=-500, max_value=500))
def test_xgcd(a, b):
    x, y, g = xgcd(a, b)
    assert x * a + y * b == g
    assert abs(g) == math.gcd(a, b)


def test_hermite_normal_form_examples():
    assert hermite_normal_form([(2, 0), (0, 2), (1, 1)], 2) == ((1, 1), (0, 2))
    assert hermite_normal_form([(1, 1), (1, -1)], 2) == ((1, 1), (0, 2))
    assert hermite_normal_form([(0, 0)], 2) == ()
    assert hermite_normal_form([(-6,), (4,)], 1) == ((2,),)
    with pytest.raises(ValueError):
        hermite_normal_form([(1, 2, 3)], 2)


@given(st.lists(vectors, max_size=5), st.randoms(use_true_random=False))
def test_hermite_normal_form_ignores_generator_order(gens, rnd):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    subgroup = SubgroupZd.from_generators(gens, 2)
    assert subgroup == SubgroupZd.from_generators(shuffled, 2)
    assert all(v in subgroup for v in gens)
    assert SubgroupZd.from_generators(subgroup.basis, 2) == subgroup
    for row in subgroup.basis:
        assert any(row)


def test_subgroup_operations():
    even = SubgroupZd.from_generators([(2, 0), (0, 2)], 2)
    diagonal = SubgroupZd.from_generators([(1, 1)], 2)
    total = even.sum(diagonal)
    assert total.rank == 2
    assert (1, 1) in total
    assert (1, 0) not in total
    assert even.is_subgroup_of(total)
    assert not total.is_subgroup_of(even)
    assert SubgroupZd.trivial(2).is_subgroup_of(diagonal)
    with pytest.raises(ValueError):
        even.contains((1,))
    with pytest.raises(ValueError):
        even.sum(SubgroupZd.trivial(3))


def test_reverse_scan_names_last_dependent_member():
    family = FamilyHandle.abelian([[(1, 0)], [(0, 1)], [(1, 1)]], 2)
    verdict = is_independent(family)
    assert not verdict.independent
    assert verdict.index == 3
    assert verdict.witness == (1, 1)
    assert bruteforce_collision(family) == (frozenset({1, 2}), frozenset({1, 3}))


def test_chain_family_is_dependent():
    verdict = is_independent(chain_family(3))
    assert (verdict.independent, verdict.index, verdict.witness) == (False, 3, (4,))
    assert bruteforce_collision(chain_family(2)) == (frozenset({1}), frozenset({1, 2}))
    assert check_monotone(chain_family(4))
    with pytest.raises(PreconditionError):
        chain_family(0)


def test_trivial_member_is_dependent():
    family = FamilyHandle.abelian([[(0, 0)], [(1, 0)]], 2)
    verdict = is_independent(family)
    assert verdict.index == 1
    assert verdict.witness == (0, 0)


def test_coordinate_family_is_independent():
    family = FamilyHandle.abelian([[(1, 0, 0)], [(0, 2, 0)], [(0, 0, 3)]], 3, labels=[5, 6, 7])
    assert is_independent(family).independent
    assert injectivity_bruteforce(family)
    assert standard_map({5, 7}, family) == SubgroupZd.from_generators([(1, 0, 0), (0, 0, 3)], 3)


@given(members)
def test_independence_matches_bruteforce(generators):
    family = FamilyHandle.abelian(generators, 2)
    assert is_independent(family).independent == injectivity_bruteforce(family)
    assert check_monotone(family)


def _cube_symmetries(d):
    """Signed coordinate permutations of Z^d"""
    return [(perm, signs) for perm in permutations(range(d)) for signs in product((1, -1), repeat=d)]


def _sign_normalized(v):
    leading = next((c for c in v if c), 0)
    return v if leading >= 0 else tuple(-c for c in v)


def _grid_families(d, size, bound=2):
    """
    Families of `size` cyclic subgroups <v>, v in [-bound, bound]^d, one per
    orbit of member reordering, v -> -v and signed coordinate permutations
    """
    reps = sorted({_sign_normalized(v) for v in product(range(-bound, bound + 1), repeat=d)})
    index = {v: k for k, v in enumerate(reps)}
    images = [
        [index[_sign_normalized(tuple(signs[k] * v[perm[k]] for k in range(d)))] for v in reps]
        for perm, signs in _cube_symmetries(d)
    ]
    for combo in combinations_with_replacement(range(len(reps)), size):
        if all(combo <= tuple(sorted(image[k] for k in combo)) for image in images):
            yield [[reps[k]] for k in combo]


def test_grid_families_cover_the_plane_up_to_symmetry():
    # one <(a, b)> per orbit, the least in sorted order: 0, <e1>, <2e1>, <(1,2)>, <(1,1)>, <(2,2)>
    assert [g[0][0] for g in _grid_families(2, 1)] == [(0, 0), (0, 1), (0, 2), (1, -2), (1, -1), (2, -2)]
    assert len(list(_grid_families(1, 4))) == len(list(combinations_with_replacement(range(3), 4)))


@pytest.mark.slow
@pytest.mark.parametrize('d', [1, 2, 3])
def test_independence_matches_bruteforce_on_grid(d):
    checked = 0
    for size in range(1, min(4, Config.BRUTEFORCE_MAX_FAMILY) + 1):
        for generators in _grid_families(d, size):
            family = FamilyHandle.abelian(generators, d)
            assert is_independent(family).independent == injectivity_bruteforce(family), generators
            checked += 1
    assert checked > 0


def test_smallcancel_backend():
    family = FamilyHandle.from_relators(make_c16_family(AB, 4))
    assert is_independent(family).independent
    oracle = standard_map({1, 2}, family)
    u1, u2 = family.relators.relator(1), family.relators.relator(2)
    a, b = AB.gens()
    assert oracle(conjugate(u1, a) * conjugate(u2, b))
    assert not oracle(family.relators.relator(3))
    assert standard_map(set(), family)(AB.identity())
    sample = [u1, u2, u1 * u2, a, family.relators.relator(4)]
    assert check_monotone(family, sample)


def test_smallcancel_backend_requires_c16():
    family = FamilyHandle.from_relators(wreath_family(2))
    with pytest.raises(PreconditionError):
        is_independent(family)


def test_wreath_backend():
    family = FamilyHandle.wreath([1, 2, 3])
    assert family.labels == (1, 2, 3)
    assert is_independent(family).independent
    t, _ = wreath_alphabet().gens()
    u1, u2 = wreath_relator(1), wreath_relator(2)
    oracle = standard_map({1, 2}, family)
    assert oracle(u1 * conjugate(u2, t))
    assert not oracle(wreath_relator(3))
    assert not oracle(t)
    sample = list(enumerate_reduced_words(wreath_alphabet(), 3)) + [u1, u2, u1 * u2]
    assert check_monotone(family, sample)
    with pytest.raises(PreconditionError):
        oracle(AB.generator('a'))


def test_wreath_membership():
    assert wreath_membership(wreath_relator(1), {1, 3})
    assert not wreath_membership(wreath_relator(2), {1, 3})
    assert not wreath_membership(wreath_relator(2), set())


def test_standard_map_rejects_unknown_labels():
    with pytest.raises(PreconditionError):
        standard_map({4}, chain_family(3))


def test_bruteforce_limits():
    with pytest.raises(PreconditionError):
        bruteforce_collision(FamilyHandle.wreath([1, 2]))
    with pytest.raises(PreconditionError):
        injectivity_bruteforce(chain_family(13))


def test_handle_validation():
    with pytest.raises(ValueError):
        FamilyHandle('matrix', (1,))
    with pytest.raises(ValueError):
        FamilyHandle.abelian([[(1,)], [(2,)]], 1, labels=[1, 1])
    with pytest.raises(ValueError):
        FamilyHandle.wreath([0, 1])
    assert FamilyHandle.wreath([1]).generators(1) == [wreath_relator(1)]
