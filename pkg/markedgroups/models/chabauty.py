"""
Basic open sets of the Chabauty topology on normal subgroups of F_m,
marked groups given by triviality oracles, and low-index normal subgroups
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from markedgroups.config import Config
from markedgroups.models.errors import AlphabetMismatchError, PreconditionError
from markedgroups.models.smallcancel import DehnSolver, RelatorFamily
from markedgroups.models.verdicts import Verdict
from markedgroups.models.words import Alphabet, Word, abelianization, enumerate_reduced_words

logger = logging.getLogger(__name__)

Oracle = Callable[[Word], Verdict]
CosetTable = Tuple[Tuple[int, ...], ...]


def default_alphabet(m: int) -> Alphabet:
    """x, y, z for rank up to 3, otherwise x1..xm"""
    if m < 1:
        raise PreconditionError("rank must be positive")
    names = ('x', 'y', 'z') if m <= 3 else tuple(f"x{i}" for i in range(1, m + 1))
    return Alphabet(names[:m])


@dataclass(frozen=True)
class BasicOpenSet:
    """{S ◁ F_m : must_contain ⊆ S, S ∩ must_avoid = ∅}"""
    alphabet: Alphabet
    must_contain: FrozenSet[Word] = frozenset()
    must_avoid: FrozenSet[Word] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'must_contain', frozenset(self.must_contain))
        object.__setattr__(self, 'must_avoid', frozenset(self.must_avoid))
        for w in self.must_contain | self.must_avoid:
            if w.alphabet != self.alphabet:
                raise AlphabetMismatchError(f"{w} is not a word over {self.alphabet}")
        if any(w.is_identity() for w in self.must_avoid):
            raise PreconditionError("must_avoid contains the empty word; the open set would be empty")

    def intersect(self, other: 'BasicOpenSet') -> 'BasicOpenSet':
        if other.alphabet != self.alphabet:
            raise AlphabetMismatchError(f"Alphabet mismatch: {self.alphabet} vs {other.alphabet}")
        return BasicOpenSet(self.alphabet, self.must_contain | other.must_contain,
                            self.must_avoid | other.must_avoid)

    def is_whole_space(self) -> bool:
        return not self.must_contain and not self.must_avoid


@dataclass(frozen=True)
class MarkedGroup:
    """A point of the space of marked groups, seen through its triviality oracle"""
    alphabet: Alphabet
    oracle: Oracle = field(compare=False)
    name: str = 'G'

    def __post_init__(self):
        if self.oracle(self.alphabet.identity()) is not Verdict.TRIVIAL:
            raise ValueError(f"Oracle of {self.name} does not report the empty word as trivial")

    def is_trivial(self, w: Word) -> Verdict:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatchError(f"{w} is not a word over {self.alphabet}")
        return self.oracle(w)

    @classmethod
    def free(cls, alphabet: Alphabet) -> 'MarkedGroup':
        return cls(alphabet, lambda w: Verdict.triviality(w.is_identity()), f"F{alphabet.size}")

    @classmethod
    def free_abelian(cls, alphabet: Alphabet) -> 'MarkedGroup':
        return cls(alphabet, lambda w: Verdict.triviality(not any(abelianization(w))), f"Z^{alphabet.size}")

    @classmethod
    def from_family(cls, family: RelatorFamily, name: str = 'G') -> 'MarkedGroup':
        """Quotient by a C'(1/6) family; Dehn's algorithm decides every word"""
        solver = DehnSolver(family)
        return cls(family.alphabet, lambda w: Verdict.triviality(solver(w)), name)

    @classmethod
    def from_quotient(cls, cert: 'FiniteQuotientCert') -> 'MarkedGroup':
        return cls(cert.alphabet, lambda w: Verdict.triviality(cert.oracle(w)), cert.label)


def in_open_set(G: MarkedGroup, O: BasicOpenSet) -> Verdict:
    """
    Membership of G (its kernel) in the basic open set O

    Returns:
        NONMEMBER as soon as one condition definitely fails, UNDETERMINED
        when some condition is undetermined and none fails, else MEMBER
    """
    if G.alphabet != O.alphabet:
        raise AlphabetMismatchError(f"Alphabet mismatch: {G.alphabet} vs {O.alphabet}")
    undetermined = False
    checks = [(w, Verdict.TRIVIAL) for w in O.must_contain] + [(w, Verdict.NONTRIVIAL) for w in O.must_avoid]
    for w, wanted in checks:
        verdict = G.is_trivial(w)
        if verdict is Verdict.UNDETERMINED:
            undetermined = True
        elif verdict is not wanted:
            return Verdict.NONMEMBER
    return Verdict.UNDETERMINED if undetermined else Verdict.MEMBER


def finitely_presented_neighbourhood(relators: Iterable[Word], avoid: Iterable[Word],
                                     alphabet: Optional[Alphabet] = None) -> BasicOpenSet:
    """
    O_{R, F'} = {S : R ⊆ S, S ∩ F' = ∅}

    For G = F_m / <<R>> finitely presented, these sets with F' finite form a
    neighbourhood basis of G.
    """
    relators, avoid = list(relators), list(avoid)
    words = relators + avoid
    if alphabet is None:
        if not words:
            raise PreconditionError("An alphabet is required when both word sets are empty")
        alphabet = words[0].alphabet
    return BasicOpenSet(alphabet, frozenset(relators), frozenset(avoid))


@dataclass(frozen=True)
class SmallGroup:
    """Finite group given by generating permutations"""
    name: str
    generators: Tuple[Tuple[int, ...], ...]

    @property
    def degree(self) -> int:
        return len(self.generators[0])

    def elements(self) -> List[Tuple[int, ...]]:
        return _closure([np.array(g) for g in self.generators], self.degree)

    @property
    def order(self) -> int:
        return len(self.elements())


def _cycle(n: int) -> Tuple[int, ...]:
    return tuple((i + 1) % n for i in range(n))


def _closure(gens: Sequence[np.ndarray], degree: int) -> List[Tuple[int, ...]]:
    """Elements of the group generated by gens, in BFS order from the identity"""
    start = tuple(range(degree))
    seen = {start: None}
    queue = deque([np.arange(degree)])
    while queue:
        g = queue.popleft()
        for s in gens:
            # g then s
            h = s[g]
            key = tuple(h.tolist())
            if key not in seen:
                seen[key] = None
                queue.append(h)
    return list(seen)


# Every group of order at most 7, up to isomorphism
CATALOGUE: Tuple[SmallGroup, ...] = (
    SmallGroup('Z1', ((0,),)),
    SmallGroup('Z2', (_cycle(2),)),
    SmallGroup('Z3', (_cycle(3),)),
    SmallGroup('Z4', (_cycle(4),)),
    SmallGroup('V4', ((1, 0, 3, 2), (2, 3, 0, 1))),
    SmallGroup('Z5', (_cycle(5),)),
    SmallGroup('Z6', (_cycle(6),)),
    SmallGroup('S3', ((1, 0, 2), (1, 2, 0))),
    SmallGroup('Z7', (_cycle(7),)),
)


@dataclass(frozen=True)
class FiniteQuotientCert:
    """
    Normal subgroup K of F_m of finite index, given by the coset table of
    F_m acting on F_m / K.

    Cosets are numbered by breadth-first search from K along x1..xm, so
    the table depends on K alone. The action is regular and w ∈ K iff w
    fixes coset 0.
    """
    alphabet: Alphabet
    coset_table: CosetTable
    group_name: str = ''
    images: Tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)
    inverse_images: Tuple[np.ndarray, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        table = np.array(self.coset_table, dtype=int).reshape(len(self.coset_table), self.alphabet.size)
        images = tuple(table[:, i].copy() for i in range(self.alphabet.size))
        inverse_images = tuple(np.argsort(perm) for perm in images)
        object.__setattr__(self, 'images', images)
        object.__setattr__(self, 'inverse_images', inverse_images)

    @property
    def index(self) -> int:
        return len(self.coset_table)

    @property
    def degree(self) -> int:
        return self.index

    @property
    def label(self) -> str:
        rows = ';'.join(','.join(str(c) for c in row) for row in self.coset_table)
        return f"{self.group_name}[{rows}]"

    def act(self, w: Word, point: int = 0) -> int:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatchError(f"{w} is not a word over {self.alphabet}")
        for letter in w:
            perm = self.images[letter.index] if letter.sign > 0 else self.inverse_images[letter.index]
            point = int(perm[point])
        return point

    def oracle(self, w: Word) -> bool:
        """w ∈ K"""
        return self.act(w) == 0

    __contains__ = oracle


def _coset_table(elements: Sequence[Tuple[int, ...]], images: Sequence[np.ndarray]) -> Optional[CosetTable]:
    """Canonical BFS coset table of the right-regular action; None unless the images generate"""
    degree = len(elements[0])
    identity = tuple(range(degree))
    number = {identity: 0}
    order = [np.arange(degree)]
    rows: List[List[int]] = []
    cursor = 0
    while cursor < len(order):
        g = order[cursor]
        row = []
        for s in images:
            h = s[g]
            key = tuple(h.tolist())
            if key not in number:
                number[key] = len(order)
                order.append(h)
            row.append(number[key])
        rows.append(row)
        cursor += 1
    if len(order) != len(elements):
        return None
    return tuple(tuple(row) for row in rows)


def enumerate_normal_lowindex(m: int, n: int, min_index: int = 2,
                              alphabet: Optional[Alphabet] = None) -> List[FiniteQuotientCert]:
    """
    Normal subgroups of F_m with min_index <= index <= n

    Each is the kernel of a surjection onto a group of order <= n; surjections
    with equal kernels have equal canonical coset tables.

    Raises:
        PreconditionError: m or n outside the desk-scale limits
    """
    if not 1 <= m <= Config.CHABAUTY_MAX_RANK:
        raise PreconditionError(f"rank m = {m} outside 1..{Config.CHABAUTY_MAX_RANK}")
    if not 1 <= n <= Config.CHABAUTY_MAX_INDEX:
        raise PreconditionError(f"index bound n = {n} outside 1..{Config.CHABAUTY_MAX_INDEX}")
    alphabet = alphabet or default_alphabet(m)
    if alphabet.size != m:
        raise AlphabetMismatchError(f"Alphabet {alphabet} does not have rank {m}")
    certs: Dict[CosetTable, FiniteQuotientCert] = {}
    for group in CATALOGUE:
        elements = group.elements()
        if not min_index <= len(elements) <= n:
            continue
        arrays = [np.array(e) for e in elements]
        surjections = 0
        for choice in product(range(len(elements)), repeat=m):
            table = _coset_table(elements, [arrays[c] for c in choice])
            if table is None:
                continue
            surjections += 1
            if table not in certs:
                certs[table] = FiniteQuotientCert(alphabet, table, group.name)
        logger.debug("%s: %d surjections from F_%d", group.name, surjections, m)
    result = sorted(certs.values(), key=lambda c: (c.index, c.coset_table))
    logger.info("F_%d has %d normal subgroups of index %d..%d", m, len(result), min_index, n)
    return result


def isolated_in_sample(target: FiniteQuotientCert, sample: Sequence[FiniteQuotientCert],
                       separator_budget: Optional[int] = None) -> Optional[BasicOpenSet]:
    """
    Basic open set containing target's kernel and no other kernel of the sample

    A sample-level heuristic: words up to separator_budget letters
    (default Config.SEPARATOR_WORD_LENGTH) are tried in shortlex order.
    The target itself is skipped by identity, so an equal but distinct
    certificate cannot be separated.

    Returns:
        The separating BasicOpenSet, or None when some member is not separated
    """
    budget = Config.SEPARATOR_WORD_LENGTH if separator_budget is None else separator_budget
    others = [cert for cert in sample if cert is not target]
    alphabet = target.alphabet
    words = [w for w in enumerate_reduced_words(alphabet, budget) if not w.is_identity()]
    contain: List[Word] = []
    avoid: List[Word] = []
    for other in others:
        if other.alphabet != alphabet:
            raise AlphabetMismatchError(f"Sample mixes alphabets {alphabet} and {other.alphabet}")
        if any(not other.oracle(w) for w in contain) or any(other.oracle(w) for w in avoid):
            continue
        for w in words:
            in_target, in_other = target.oracle(w), other.oracle(w)
            if in_target and not in_other:
                contain.append(w)
                break
            if in_other and not in_target:
                avoid.append(w)
                break
        else:
            logger.info("No word of length <= %d separates %s from %s", budget, target.label, other.label)
            return None
    return BasicOpenSet(alphabet, frozenset(contain), frozenset(avoid))
