"""
The standard map J -> N_J of a family of normal subgroups, and independence
tests over abelian, small-cancellation and wreath backends
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from markedgroups.config import Config
from markedgroups.models.errors import PreconditionError
from markedgroups.models.graphprod import (
    CommutationGraph,
    gp_is_trivial,
    gp_normalize,
    word_to_syllables,
    wreath_alphabet,
    wreath_relator,
)
from markedgroups.models.smallcancel import DehnSolver, IndependenceVerdict, RelatorFamily, check_c16
from markedgroups.models.words import Word, abelianization

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
WordOracle = Callable[[Word], bool]

BACKENDS = ('abelian', 'smallcancel', 'graphprod')


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(x, y, g) with x a + y b = g"""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def hermite_normal_form(vectors: Iterable[Sequence[int]], d: int) -> Tuple[Vector, ...]:
    """
    Row-style Hermite normal form of the subgroup of Z^d spanned by vectors

    Returns:
        Basis rows sorted by pivot column, pivots positive, entries above
        each pivot reduced into [0, pivot)
    """
    rows: Dict[int, List[int]] = {}
    for vec0 in vectors:
        vec = [int(c) for c in vec0]
        if len(vec) != d:
            raise ValueError(f"Vector {tuple(vec)} does not have dimension {d}")
        for j in range(d):
            if vec[j] == 0:
                continue
            if j not in rows:
                rows[j] = vec
                break
            row = rows[j]
            a, b = row[j], vec[j]
            x, y, g = xgcd(a, b)
            ag, mbg = a // g, -b // g
            rows[j] = [x * r + y * v for r, v in zip(row, vec)]
            vec = [mbg * r + ag * v for r, v in zip(row, vec)]
    pivots = sorted(rows)
    for j in pivots:
        if rows[j][j] < 0:
            rows[j] = [-c for c in rows[j]]
    for j in pivots:
        pivot_row = rows[j]
        for i in pivots:
            if i >= j:
                break
            q = rows[i][j] // pivot_row[j]
            if q:
                rows[i] = [r - q * s for r, s in zip(rows[i], pivot_row)]
    return tuple(tuple(rows[j]) for j in pivots)


@dataclass(frozen=True)
class SubgroupZd:
    """Subgroup of Z^d in Hermite normal form; equal subgroups compare equal"""
    d: int
    basis: Tuple[Vector, ...] = ()

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], d: int) -> 'SubgroupZd':
        return cls(d, hermite_normal_form(generators, d))

    @classmethod
    def trivial(cls, d: int) -> 'SubgroupZd':
        return cls(d, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, vector: Sequence[int]) -> bool:
        vec = [int(c) for c in vector]
        if len(vec) != self.d:
            raise ValueError(f"Vector {tuple(vec)} does not have dimension {self.d}")
        for row in self.basis:
            j = next(idx for idx, c in enumerate(row) if c)
            if any(vec[:j]):
                return False
            if vec[j] % row[j]:
                return False
            q = vec[j] // row[j]
            vec = [v - q * r for v, r in zip(vec, row)]
        return not any(vec)

    __contains__ = contains

    def sum(self, other: 'SubgroupZd') -> 'SubgroupZd':
        if other.d != self.d:
            raise ValueError(f"Dimension mismatch: {self.d} vs {other.d}")
        return SubgroupZd.from_generators(self.basis + other.basis, self.d)

    def is_subgroup_of(self, other: 'SubgroupZd') -> bool:
        return all(other.contains(row) for row in self.basis)


@dataclass(frozen=True)
class FamilyHandle:
    """
    A finite family (N_i)_{i in I} over one ambient object.

    abelian: subgroups of Z^d; smallcancel: normal closures of the relators
    of a C'(1/6) family; graphprod: normal closures of the wreath relators
    u_j = [t^j x t^-j, x] in F(t, x), labelled by j.
    """
    backend: str
    labels: Tuple[int, ...]
    subgroups: Tuple[SubgroupZd, ...] = ()
    relators: Optional[RelatorFamily] = None
    d: int = 0
    _checked: List[bool] = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"Unknown backend {self.backend!r}; expected one of {BACKENDS}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"Duplicate labels: {self.labels}")
        if self.backend == 'abelian':
            if len(self.subgroups) != len(self.labels):
                raise ValueError("Abelian families need one subgroup per label")
            if any(s.d != self.d for s in self.subgroups):
                raise ValueError(f"All subgroups must live in Z^{self.d}")

    @classmethod
    def abelian(cls, generators: Sequence[Sequence[Sequence[int]]], d: int,
                labels: Optional[Sequence[int]] = None) -> 'FamilyHandle':
        """One entry of generators per member: the vectors spanning N_i"""
        labels = tuple(labels) if labels else tuple(range(1, len(generators) + 1))
        subgroups = tuple(SubgroupZd.from_generators(gens, d) for gens in generators)
        return cls('abelian', labels, subgroups=subgroups, d=d)

    @classmethod
    def from_relators(cls, family: RelatorFamily) -> 'FamilyHandle':
        return cls('smallcancel', tuple(family.labels), relators=family)

    @classmethod
    def wreath(cls, distances: Iterable[int]) -> 'FamilyHandle':
        labels = tuple(sorted(set(distances)))
        if any(j < 1 for j in labels):
            raise ValueError("Wreath relator labels are positive integers")
        return cls('graphprod', labels)

    def __len__(self) -> int:
        return len(self.labels)

    def member(self, label: int) -> SubgroupZd:
        return self.subgroups[self.labels.index(label)]

    def generators(self, label: int) -> List[Union[Vector, Word]]:
        """Generators of N_label (as a normal subgroup for word backends)"""
        if self.backend == 'abelian':
            return list(self.member(label).basis)
        if self.backend == 'smallcancel':
            return [self.relators.relator(label)]
        return [wreath_relator(label)]

    def require_c16(self):
        if self.backend == 'smallcancel' and not self._checked:
            verdict = check_c16(self.relators)
            if not verdict.ok:
                raise PreconditionError(f"Relator family is not C'(1/6): {verdict.violation}")
            self._checked.append(True)


def _require_subset(J: Iterable[int], family: FamilyHandle) -> FrozenSet[int]:
    J = frozenset(J)
    unknown = J - set(family.labels)
    if unknown:
        raise PreconditionError(f"Labels {sorted(unknown)} are not in the index set")
    return J


def wreath_membership(w: Word, J: Iterable[int]) -> bool:
    """
    w ∈ N_J for the wreath relators

    F(t, x) is U ⋊ <t> with U free on x_k = t^k x t^-k, and N_J is the kernel
    of U onto the graph product over distance set J.
    """
    if abelianization(w)[0] != 0:
        return False
    graph = CommutationGraph.from_distances(J)
    return gp_is_trivial(gp_normalize(word_to_syllables(w), graph))


def standard_map(J: Iterable[int], family: FamilyHandle) -> Union[SubgroupZd, WordOracle]:
    """
    Φ(J) = N_J

    Returns:
        The canonical SubgroupZd for the abelian backend, otherwise a
        membership oracle w -> (w ∈ N_J)

    Raises:
        PreconditionError: J is not a subset of the index set
    """
    J = _require_subset(J, family)
    chosen = [label for label in family.labels if label in J]
    if family.backend == 'abelian':
        total = SubgroupZd.trivial(family.d)
        for label in chosen:
            total = total.sum(family.member(label))
        return total
    if family.backend == 'smallcancel':
        family.require_c16()
        if not chosen:
            return lambda w: w.is_identity()
        return DehnSolver(family.relators.subfamily(chosen), checked=True)
    alphabet = wreath_alphabet()

    def oracle(w: Word) -> bool:
        if w.alphabet != alphabet:
            raise PreconditionError("Wreath families act on words over (t, x)")
        return wreath_membership(w, chosen)

    return oracle


def _contained(generators: Sequence, target: Union[SubgroupZd, WordOracle]) -> bool:
    if isinstance(target, SubgroupZd):
        return all(target.contains(g) for g in generators)
    return all(target(g) for g in generators)


def is_independent(family: FamilyHandle) -> IndependenceVerdict:
    """
    Φ is injective iff no N_i lies in Φ(I ∖ {i})

    Labels are scanned from the highest down, so a dependent verdict names
    the last member that the others already generate.

    Returns:
        IndependenceVerdict; witness is the first generator of N_i (the zero
        vector when N_i is trivial)
    """
    for label in reversed(family.labels):
        others = standard_map([j for j in family.labels if j != label], family)
        generators = family.generators(label)
        if _contained(generators, others):
            witness = generators[0] if generators else tuple([0] * family.d)
            logger.info("Member %s lies in the span of the others (witness %s)", label, witness)
            return IndependenceVerdict(independent=False, index=label, witness=witness)
    return IndependenceVerdict(independent=True)


def _subsets(labels: Sequence[int]):
    for size in range(len(labels) + 1):
        for subset in combinations(labels, size):
            yield frozenset(subset)


def bruteforce_collision(family: FamilyHandle) -> Optional[Tuple[FrozenSet[int], FrozenSet[int]]]:
    """
    First pair J != K with Φ(J) = Φ(K), enumerating subsets by size

    Raises:
        PreconditionError: non-abelian backend or more than
            Config.BRUTEFORCE_MAX_FAMILY members
    """
    if family.backend != 'abelian':
        raise PreconditionError("Brute-force injectivity needs the abelian backend")
    if len(family) > Config.BRUTEFORCE_MAX_FAMILY:
        raise PreconditionError(
            f"Family of size {len(family)} exceeds the brute-force limit {Config.BRUTEFORCE_MAX_FAMILY}"
        )
    seen: Dict[SubgroupZd, FrozenSet[int]] = {}
    for subset in _subsets(family.labels):
        image = standard_map(subset, family)
        if image in seen:
            return seen[image], subset
        seen[image] = subset
    return None


def injectivity_bruteforce(family: FamilyHandle) -> bool:
    """Compare Φ(J) over all 2^|I| subsets"""
    return bruteforce_collision(family) is None


def check_monotone(family: FamilyHandle, sample_words: Sequence[Word] = ()) -> bool:
    """
    J ⊆ K implies Φ(J) ⊆ Φ(K), over all subset pairs

    Word backends compare the oracles on sample_words.
    """
    subsets = list(_subsets(family.labels))
    images = {subset: standard_map(subset, family) for subset in subsets}
    for small in subsets:
        for large in subsets:
            if not small <= large:
                continue
            if family.backend == 'abelian':
                if not images[small].is_subgroup_of(images[large]):
                    return False
            elif any(images[small](w) and not images[large](w) for w in sample_words):
                return False
    return True


def chain_family(length: int) -> FamilyHandle:
    """⟨2^n e1⟩ in Z for n = 0..length-1, a totally ordered family"""
    if length < 1:
        raise PreconditionError("length must be positive")
    return FamilyHandle.abelian([[(2 ** n,)] for n in range(length)], 1)
