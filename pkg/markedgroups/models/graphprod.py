"""
Graph products of copies of Z indexed by Z: normal forms and the wreath
relators [t^n x t^-n, x]
"""
import heapq
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from markedgroups.models.errors import PreconditionError
from markedgroups.models.smallcancel import RelatorFamily
from markedgroups.models.words import Alphabet, Word, commutator, conjugate, power

logger = logging.getLogger(__name__)

Syllable = Tuple[int, int]  # (vertex, nonzero exponent)


@dataclass(frozen=True)
class CommutationGraph:
    """
    Graph on Z with an edge {i, j} iff |i - j| lies in the distance set J.

    With complement=True the distance set is cofinite: every positive
    distance except those listed.
    """
    distances: FrozenSet[int] = frozenset()
    complement: bool = False

    def __post_init__(self):
        distances = frozenset(self.distances)
        if any(d <= 0 for d in distances):
            raise ValueError(f"Distances must be positive integers: {sorted(distances)}")
        object.__setattr__(self, 'distances', distances)

    @classmethod
    def from_distances(cls, J: Iterable[int]) -> 'CommutationGraph':
        return cls(frozenset(J))

    @classmethod
    def empty(cls) -> 'CommutationGraph':
        return cls(frozenset())

    @classmethod
    def complete(cls) -> 'CommutationGraph':
        return cls(frozenset(), complement=True)

    def has_distance(self, d: int) -> bool:
        return (d in self.distances) != self.complement

    def commute(self, i: int, j: int) -> bool:
        """Edge predicate: symmetric and irreflexive"""
        if i == j:
            return False
        return self.has_distance(abs(i - j))

    def describe(self) -> str:
        listed = ','.join(str(d) for d in sorted(self.distances))
        return f"all but {{{listed}}}" if self.complement else f"{{{listed}}}"


@dataclass(frozen=True)
class GPWord:
    """Syllable sequence in normal form over a fixed commutation graph"""
    syllables: Tuple[Syllable, ...]
    graph: CommutationGraph

    def __len__(self) -> int:
        return len(self.syllables)


def _merge_pass(sylls: List[Syllable], graph: CommutationGraph) -> bool:
    """Merge the first pair of equal-vertex syllables separated only by commuting ones"""
    for i, (vertex, exponent) in enumerate(sylls):
        for j in range(i + 1, len(sylls)):
            other, other_exp = sylls[j]
            if other == vertex:
                total = exponent + other_exp
                del sylls[j]
                if total:
                    sylls[i] = (vertex, total)
                else:
                    del sylls[i]
                return True
            if not graph.commute(vertex, other):
                break
    return False


def _canonical_order(sylls: Sequence[Syllable], graph: CommutationGraph) -> Tuple[Syllable, ...]:
    """Lexicographically least representative of the shuffle class (vertex order)"""
    n = len(sylls)
    successors: List[List[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if not graph.commute(sylls[i][0], sylls[j][0]):
                successors[i].append(j)
                indegree[j] += 1
    ready = [(sylls[i][0], i) for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        _, i = heapq.heappop(ready)
        out.append(sylls[i])
        for j in successors[i]:
            indegree[j] -= 1
            if indegree[j] == 0:
                heapq.heappush(ready, (sylls[j][0], j))
    return tuple(out)


def gp_normalize(raw: Iterable[Syllable], graph: CommutationGraph) -> GPWord:
    """
    Normal form in the graph product of copies of Z

    Args:
        raw: Syllables (vertex, exponent); zero exponents are dropped
        graph: Commutation graph

    Returns:
        GPWord whose syllables are reduced (no merge available after any
        shuffle) and listed in the canonical order of their shuffle class
    """
    sylls = [(int(v), int(e)) for v, e in raw if e]
    while _merge_pass(sylls, graph):
        pass
    return GPWord(_canonical_order(sylls, graph), graph)


def gp_is_trivial(w: GPWord) -> bool:
    return not gp_normalize(w.syllables, w.graph).syllables


def retract(w: GPWord, vertices: Iterable[int]) -> GPWord:
    """Retraction onto the subgraph product spanned by the given vertices"""
    keep = frozenset(vertices)
    return gp_normalize((s for s in w.syllables if s[0] in keep), w.graph)


def wreath_alphabet() -> Alphabet:
    return Alphabet(('t', 'x'))


def wreath_relator(n: int, alphabet: Optional[Alphabet] = None) -> Word:
    """u_n = [t^n x t^-n, x] over the alphabet (t, x)"""
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    alphabet = alphabet or wreath_alphabet()
    if alphabet.size != 2:
        raise PreconditionError("The wreath relators live over a two-letter alphabet (t, x)")
    t, x = alphabet.gens()
    return commutator(conjugate(x, power(t, n)), x)


def wreath_family(n: int, alphabet: Optional[Alphabet] = None) -> RelatorFamily:
    """u_1..u_n as a relator family labelled by n"""
    alphabet = alphabet or wreath_alphabet()
    return RelatorFamily(alphabet, tuple(wreath_relator(k, alphabet) for k in range(1, n + 1)))


def word_to_syllables(word: Word, t_index: int = 0, x_index: int = 1) -> List[Syllable]:
    """
    Read a word of the normal closure of x as syllables t^k x^e t^-k -> (k, e)

    Raises:
        PreconditionError: total t-exponent is nonzero, or a third generator occurs
    """
    height = 0
    out: List[Syllable] = []
    for letter in word:
        if letter.index == t_index:
            height += letter.sign
        elif letter.index == x_index:
            if out and out[-1][0] == height:
                out[-1] = (height, out[-1][1] + letter.sign)
                if not out[-1][1]:
                    out.pop()
            else:
                out.append((height, letter.sign))
        else:
            raise PreconditionError(f"Letter {letter} is neither t nor x")
    if height:
        raise PreconditionError("Word has nonzero t-exponent sum; it is not in the normal closure of x")
    return out


def wreath_independence(s: int, J: Iterable[int], truncation: Optional[int] = None) -> bool:
    """
    Certify u_s ∉ N_J, the normal closure of {u_j : j ∈ J}

    u_s maps to [x_s, x_0] in the graph product over distance set J; the
    retraction onto the vertex window {0..truncation} (default {0..s}) keeps
    B_0 and B_s, and {0, s} is not an edge, so the image is nontrivial.

    Returns:
        True when the retracted image is nontrivial
    """
    J = frozenset(J)
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    if s in J:
        raise PreconditionError(f"s = {s} lies in J; u_s is one of the relators")
    window = s if truncation is None else truncation
    if window < s:
        raise PreconditionError(f"Truncation window {window} does not reach vertex {s}")
    graph = CommutationGraph.from_distances(J)
    image = gp_normalize(word_to_syllables(wreath_relator(s)), graph)
    retracted = retract(image, range(0, window + 1))
    logger.debug("u_%d image over J=%s: %s", s, sorted(J), retracted.syllables)
    return not gp_is_trivial(retracted)
