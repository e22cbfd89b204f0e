"""
Word problem in Coxeter groups over integer vertices, decided by Tits'
braid-move search with a node budget
"""
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple, Union

from markedgroups.config import Config
from markedgroups.models.errors import BudgetExceededError, PreconditionError
from markedgroups.models.verdicts import Verdict

logger = logging.getLogger(__name__)

Order = Union[int, float]
INFINITY: float = math.inf


def _check_order(m: Order) -> Order:
    if m == INFINITY:
        return INFINITY
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise ValueError(f"Off-diagonal Coxeter entries must be integers >= 2 or inf, got {m!r}")
    return int(m)


def format_order(m: Order) -> str:
    return 'inf' if m == INFINITY else str(m)


@dataclass(frozen=True)
class CoxeterMatrix:
    """
    Symmetric Coxeter matrix on the integers.

    entry(i, j) resolves in order: explicit pair entries, then the distance
    map mu(|i - j|), then the default. Diagonal entries are 1.
    """
    distances: Tuple[Tuple[int, Order], ...] = ()
    pairs: Tuple[Tuple[Tuple[int, int], Order], ...] = ()
    default: Order = INFINITY
    _distance_lookup: Dict[int, Order] = field(init=False, repr=False, compare=False)
    _pair_lookup: Dict[Tuple[int, int], Order] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        distance_lookup = {}
        for d, m in self.distances:
            if d <= 0:
                raise ValueError(f"Distances must be positive, got {d}")
            distance_lookup[int(d)] = _check_order(m)
        pair_lookup = {}
        for (i, j), m in self.pairs:
            if i == j:
                raise ValueError(f"Diagonal entry ({i}, {j}) is fixed to 1")
            pair_lookup[(min(i, j), max(i, j))] = _check_order(m)
        object.__setattr__(self, 'distances', tuple(sorted(distance_lookup.items())))
        object.__setattr__(self, 'pairs', tuple(sorted(pair_lookup.items())))
        object.__setattr__(self, 'default', _check_order(self.default))
        object.__setattr__(self, '_distance_lookup', distance_lookup)
        object.__setattr__(self, '_pair_lookup', pair_lookup)

    @classmethod
    def from_distance_map(cls, mu: Mapping[int, Order], default: Order = INFINITY) -> 'CoxeterMatrix':
        """Shift-invariant matrix entry(i, j) = mu(|i - j|)"""
        return cls(distances=tuple(mu.items()), default=default)

    @classmethod
    def from_entries(cls, entries: Mapping[Tuple[int, int], Order], default: Order = INFINITY) -> 'CoxeterMatrix':
        return cls(pairs=tuple(entries.items()), default=default)

    def entry(self, i: int, j: int) -> Order:
        if i == j:
            return 1
        key = (min(i, j), max(i, j))
        if key in self._pair_lookup:
            return self._pair_lookup[key]
        return self._distance_lookup.get(abs(i - j), self.default)

    def mu(self, d: int) -> Order:
        """Distance map value; meaningful for shift-invariant matrices"""
        return self._distance_lookup.get(d, self.default)

    @property
    def is_shift_invariant(self) -> bool:
        return not self.pairs

    def restricted(self, letters: Iterable[int]) -> 'CoxeterMatrix':
        """Explicit matrix on the given vertices only"""
        vertices = sorted(set(letters))
        entries = {
            (a, b): self.entry(a, b)
            for idx, a in enumerate(vertices)
            for b in vertices[idx + 1:]
        }
        return CoxeterMatrix.from_entries(entries)

    def with_overrides(self, distances: Optional[Mapping[int, Order]] = None,
                       pairs: Optional[Mapping[Tuple[int, int], Order]] = None) -> 'CoxeterMatrix':
        merged_distances = dict(self._distance_lookup)
        merged_distances.update(distances or {})
        merged_pairs = dict(self._pair_lookup)
        merged_pairs.update(pairs or {})
        return CoxeterMatrix(tuple(merged_distances.items()), tuple(merged_pairs.items()), self.default)

    def describe(self) -> str:
        parts = [f"{d}={format_order(m)}" for d, m in self.distances]
        parts += [f"({i},{j})={format_order(m)}" for (i, j), m in self.pairs]
        parts.append(f"*={format_order(self.default)}")
        return ','.join(parts)


@dataclass(frozen=True)
class CoxWord:
    """Word in the Coxeter generators; adjacent equal letters are cancelled"""
    letters: Tuple[int, ...]

    @classmethod
    def of(cls, letters: Iterable[int]) -> 'CoxWord':
        return cox_reduce(letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: 'CoxWord') -> 'CoxWord':
        return cox_reduce(self.letters + other.letters)

    def __pow__(self, n: int) -> 'CoxWord':
        base = self.letters if n >= 0 else tuple(reversed(self.letters))
        return cox_reduce(base * abs(n))

    def vertices(self) -> FrozenSet[int]:
        return frozenset(self.letters)


def cox_reduce(raw: Iterable[int]) -> CoxWord:
    stack = []
    for letter in raw:
        letter = int(letter)
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    return CoxWord(tuple(stack))


def _alternating(s: int, t: int, length: int) -> Tuple[int, ...]:
    return tuple(s if k % 2 == 0 else t for k in range(length))


def _braid_neighbours(word: Tuple[int, ...], matrix: CoxeterMatrix):
    """Words reachable by one braid move s t s ... -> t s t ... (same length)"""
    n = len(word)
    for i in range(n - 1):
        s, t = word[i], word[i + 1]
        if s == t:
            continue
        m = matrix.entry(s, t)
        if m == INFINITY or i + m > n:
            continue
        if word[i:i + m] == _alternating(s, t, m):
            yield word[:i] + _alternating(t, s, m) + word[i + m:]


def _deletion_site(word: Tuple[int, ...]) -> int:
    for i in range(len(word) - 1):
        if word[i] == word[i + 1]:
            return i
    return -1


def parity_certificate(word: CoxWord, matrix: CoxeterMatrix) -> Optional[FrozenSet[int]]:
    """
    Abelianization obstruction to triviality.

    Generators joined by odd entries are conjugate, so W maps onto
    (Z/2)^(components of the odd-entry graph). Returns a component whose
    letters occur an odd number of times, or None when the image is trivial.
    """
    vertices = sorted(word.vertices())
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for idx, a in enumerate(vertices):
        for b in vertices[idx + 1:]:
            m = matrix.entry(a, b)
            if m != INFINITY and m % 2 == 1:
                parent[find(a)] = find(b)
    counts: Dict[int, int] = {}
    for letter in word.letters:
        root = find(letter)
        counts[root] = counts.get(root, 0) + 1
    for root, count in counts.items():
        if count % 2:
            return frozenset(v for v in vertices if find(v) == root)
    return None


def tits_is_trivial(word: CoxWord, matrix: CoxeterMatrix, node_limit: Optional[int] = None) -> Verdict:
    """
    Decide w = 1 in the Coxeter group W(matrix)

    Tits: a word is reduced iff no word of its braid class contains two
    adjacent equal letters. The search explores the braid class, deletes a
    pair as soon as one shows up, and restarts from the shorter word.

    Args:
        word: Word in the vertex generators
        matrix: Coxeter matrix; only entries among the letters of word are read
        node_limit: Total number of words visited before giving up
            (default Config.COXETER_NODE_LIMIT)

    Returns:
        Verdict.TRIVIAL, Verdict.NONTRIVIAL or Verdict.UNDETERMINED
    """
    limit = Config.COXETER_NODE_LIMIT if node_limit is None else node_limit
    current = cox_reduce(word.letters).letters
    if not current:
        return Verdict.TRIVIAL
    if parity_certificate(CoxWord(current), matrix) is not None:
        logger.debug("Parity obstruction for %s", current)
        return Verdict.NONTRIVIAL
    visited_total = 0
    while current:
        seen = {current}
        queue = deque([current])
        shortened = None
        while queue:
            node = queue.popleft()
            site = _deletion_site(node)
            if site >= 0:
                shortened = node[:site] + node[site + 2:]
                break
            for neighbour in _braid_neighbours(node, matrix):
                if neighbour not in seen:
                    seen.add(neighbour)
                    queue.append(neighbour)
            if visited_total + len(seen) > limit:
                logger.info("Braid search exceeded %d nodes at length %d", limit, len(current))
                return Verdict.UNDETERMINED
        visited_total += len(seen)
        if shortened is None:
            logger.debug("Reduced word of length %d after %d nodes", len(current), visited_total)
            return Verdict.NONTRIVIAL
        current = cox_reduce(shortened).letters
    logger.debug("Trivial after %d nodes", visited_total)
    return Verdict.TRIVIAL


def rank2_order(s: int, t: int, matrix: CoxeterMatrix, node_limit: Optional[int] = None,
                infinite_checks: int = 6) -> Order:
    """
    Order of w_s w_t, read from the matrix and confirmed by search

    Raises:
        PreconditionError: s == t
        BudgetExceededError: a confirming search was undetermined
    """
    if s == t:
        raise PreconditionError("rank2_order needs two distinct vertices")
    m = matrix.entry(s, t)
    pair = CoxWord((s, t))
    top = infinite_checks if m == INFINITY else int(m)
    for k in range(1, top + 1):
        verdict = tits_is_trivial(pair ** k, matrix, node_limit)
        if verdict is Verdict.UNDETERMINED:
            raise BudgetExceededError(f"Search budget exceeded checking (w{s} w{t})^{k}")
        expected = Verdict.TRIVIAL if k == m else Verdict.NONTRIVIAL
        if verdict is not expected:
            raise RuntimeError(f"(w{s} w{t})^{k} gave {verdict.value}, expected {expected.value}")
    return m


def coxeter_relator(p: int, matrix: CoxeterMatrix) -> CoxWord:
    """r_p = (w_0 w_p)^mu(p)"""
    m = matrix.mu(p)
    if m == INFINITY:
        raise PreconditionError(f"mu({p}) is infinite; r_{p} is not a relator")
    return CoxWord((0, p)) ** int(m)


def coxeter_relator_independence(p: int, mu: Union[CoxeterMatrix, Mapping[int, Order]],
                                 window: Iterable[int], node_limit: Optional[int] = None) -> bool:
    """
    Certify r_p != 1 in the group with relators r_n, n in window minus {p}

    The presented group is the Coxeter group with mu'(n) = mu(n) on the
    window, mu'(p) = inf and inf elsewhere. By Tits the subgroup on
    {w_0, w_p} is the infinite dihedral group, where r_p is nontrivial.

    Raises:
        PreconditionError: mu(p) is infinite or p is not positive
        BudgetExceededError: the search was undetermined
    """
    matrix = mu if isinstance(mu, CoxeterMatrix) else CoxeterMatrix.from_distance_map(mu)
    if p < 1:
        raise PreconditionError("p must be a positive integer")
    relator = coxeter_relator(p, matrix)
    kept = {n: matrix.mu(n) for n in set(window) if n != p and n > 0}
    presented = CoxeterMatrix.from_distance_map(kept).with_overrides(distances={p: INFINITY})
    verdict = tits_is_trivial(relator, presented.restricted((0, p)), node_limit)
    logger.info("r_%d in quotient by window %s: %s", p, sorted(kept), verdict.value)
    if verdict is Verdict.UNDETERMINED:
        raise BudgetExceededError(f"Search budget exceeded deciding r_{p}")
    return verdict is Verdict.NONTRIVIAL
