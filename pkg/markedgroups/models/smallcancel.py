"""
C'(1/6) verification, Dehn's algorithm and independence certificates
for families of relators
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from markedgroups.config import Config
from markedgroups.models.errors import FamilyInvariantError, PreconditionError
from markedgroups.models.words import (
    Alphabet,
    Generator,
    Word,
    cyclic_reduce,
    inverse_text,
    is_cyclically_reduced,
    is_proper_power,
    letters_from_text,
    reduce,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelatorFamily:
    """
    Finite family of cyclically reduced relators, none of them a proper
    power, with stable labels.

    Labels default to 1..n; subfamilies keep the labels of the parent
    family so that reports always cite the original indices.
    """
    alphabet: Alphabet
    relators: Tuple[Word, ...]
    labels: Tuple[int, ...] = ()

    def __post_init__(self):
        relators = tuple(self.relators)
        object.__setattr__(self, 'relators', relators)
        if not self.labels:
            object.__setattr__(self, 'labels', tuple(range(1, len(relators) + 1)))
        if len(self.labels) != len(relators):
            raise ValueError("One label per relator is required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"Relator labels must be distinct: {self.labels}")
        for label, relator in zip(self.labels, relators):
            if relator.alphabet != self.alphabet:
                raise FamilyInvariantError(f"Relator {label} is over a different alphabet")
            if not relator.letters:
                raise FamilyInvariantError(f"Relator {label} is empty")
            if not is_cyclically_reduced(relator):
                raise FamilyInvariantError(f"Relator {label} is not cyclically reduced: {relator}")
            if is_proper_power(relator):
                raise FamilyInvariantError(f"Relator {label} is a proper power: {relator}")

    def __len__(self) -> int:
        return len(self.relators)

    def items(self) -> List[Tuple[int, Word]]:
        return list(zip(self.labels, self.relators))

    def relator(self, label: int) -> Word:
        return self.relators[self.labels.index(label)]

    def subfamily(self, labels: Iterable[int]) -> 'RelatorFamily':
        keep = set(labels)
        unknown = keep - set(self.labels)
        if unknown:
            raise PreconditionError(f"Unknown relator labels: {sorted(unknown)}")
        pairs = [(label, r) for label, r in self.items() if label in keep]
        return RelatorFamily(self.alphabet, tuple(r for _, r in pairs), tuple(label for label, _ in pairs))

    def without(self, label: int) -> 'RelatorFamily':
        return self.subfamily(l for l in self.labels if l != label)

    @classmethod
    def from_words(cls, words: Sequence[Word], labels: Sequence[int] = ()) -> 'RelatorFamily':
        """Cyclically reduce the given words and package them as a family"""
        if not words:
            raise PreconditionError("Cannot infer the alphabet of an empty family")
        cores = tuple(cyclic_reduce(w)[0] for w in words)
        return cls(words[0].alphabet, cores, tuple(labels))


@dataclass(frozen=True)
class PieceReport:
    """A 1/6-large piece that occurs at two different locations"""
    witness: Word
    relator_index: int
    position: int
    second_occurrence: Tuple[int, int, int]  # (relator label, position, orientation ±1)
    ratio: Fraction


@dataclass(frozen=True)
class C16Verdict:
    ok: bool
    violation: Optional[PieceReport] = None


@dataclass(frozen=True)
class DehnStep:
    input_word: Word
    piece: Word
    relator_index: int
    output_word: Word


@dataclass
class DehnTrace:
    steps: List[DehnStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class IndependenceVerdict:
    """Ok when independent is True; otherwise index names the first dependent member"""
    independent: bool
    index: Optional[int] = None
    witness: Optional[object] = None


def symmetrized_texts(relator: Word) -> List[str]:
    """Text of the 2k cyclic words: rotations of u, then rotations of u⁻¹"""
    text = relator.text
    inv = inverse_text(text)
    n = len(text)
    return [text[k:] + text[:k] for k in range(n)] + [inv[k:] + inv[:k] for k in range(n)]


def symmetrized_words(relator: Word) -> List[Word]:
    return [Word(letters_from_text(t), relator.alphabet) for t in symmetrized_texts(relator)]


def _cyclic_substrings(text: str, length: int) -> List[str]:
    n = len(text)
    doubled = text + text
    return [doubled[k:k + length] for k in range(n)]


def _large_threshold(length: int) -> int:
    """Least ℓ with ℓ ≥ length/6"""
    return -(-length // 6)


def _essential_threshold(length: int) -> int:
    """Least ℓ with ℓ > length/2"""
    return length // 2 + 1


def _location_index(family: RelatorFamily, length: int) -> Dict[str, List[Tuple[int, int, int]]]:
    """Every cyclic subword of the given length, in every relator and inverse, with its locations"""
    index: Dict[str, List[Tuple[int, int, int]]] = {}
    for label, relator in family.items():
        if len(relator) < length:
            continue
        text = relator.text
        for orientation, host in ((1, text), (-1, inverse_text(text))):
            for pos, sub in enumerate(_cyclic_substrings(host, length)):
                index.setdefault(sub, []).append((label, pos, orientation))
    return index


def check_c16(family: RelatorFamily) -> C16Verdict:
    """
    Check the C'(1/6) condition with occurrence-based pieces.

    A subword of length ℓ ≥ |u|/6 read at some cyclic position of u is a
    violation when it also occurs at another location: another position of u,
    a position of u⁻¹, or any position of another relator or its inverse.
    Extensions of a unique subword are unique, so only the shortest 1/6-large
    length has to be scanned at each position.

    Args:
        family: Relator family

    Returns:
        C16Verdict, carrying the first violation in (label, position) order
    """
    indexes: Dict[int, Dict[str, List[Tuple[int, int, int]]]] = {}
    for label, relator in family.items():
        length = _large_threshold(len(relator))
        if length not in indexes:
            indexes[length] = _location_index(family, length)
        locations = indexes[length]
        for pos, sub in enumerate(_cyclic_substrings(relator.text, length)):
            found = locations[sub]
            if len(found) > 1:
                other = next(loc for loc in found if loc != (label, pos, 1))
                witness = Word(letters_from_text(sub), family.alphabet)
                report = PieceReport(
                    witness=witness,
                    relator_index=label,
                    position=pos,
                    second_occurrence=other,
                    ratio=Fraction(length, len(relator)),
                )
                logger.info("C'(1/6) violation: %s in relator %s at %s, again at %s", witness, label, pos, other)
                return C16Verdict(ok=False, violation=report)
    logger.info("C'(1/6) holds for %d relators", len(family))
    return C16Verdict(ok=True)


def max_repeated_piece(family: RelatorFamily) -> Tuple[int, Fraction]:
    """
    Longest subword occurring at two locations of the family, with its worst
    ratio to the relator it was read in. Diagnostic for reports.
    """
    best_length, best_ratio = 0, Fraction(0)
    indexes: Dict[int, Dict[str, List[Tuple[int, int, int]]]] = {}
    for _, relator in family.items():
        for length in range(1, len(relator) + 1):
            if length not in indexes:
                indexes[length] = _location_index(family, length)
            locations = indexes[length]
            if not any(len(locations[sub]) > 1 for sub in _cyclic_substrings(relator.text, length)):
                break
            best_length = max(best_length, length)
            best_ratio = max(best_ratio, Fraction(length, len(relator)))
    return best_length, best_ratio


def _require_c16(family: RelatorFamily):
    verdict = check_c16(family)
    if not verdict.ok:
        v = verdict.violation
        raise PreconditionError(
            f"Family is not C'(1/6): piece {v.witness} of relator {v.relator_index} recurs at {v.second_occurrence}"
        )


class _EssentialIndex:
    """Prefixes of essential length of every cyclic word u^{±1}, keyed by text"""

    def __init__(self, family: RelatorFamily):
        self.alphabet = family.alphabet
        self.entries: List[Tuple[int, int, Dict[str, str]]] = []
        self.min_length = None
        for label, relator in family.items():
            h = _essential_threshold(len(relator))
            table: Dict[str, str] = {}
            for cyclic in symmetrized_texts(relator):
                # piece -> inverse of its complement
                table.setdefault(cyclic[:h], inverse_text(cyclic[h:]))
            self.entries.append((label, h, table))
            self.min_length = h if self.min_length is None else min(self.min_length, h)
        self.entries.sort(key=lambda entry: entry[0])

    def find(self, text: str) -> Optional[Tuple[int, int, int, str]]:
        """First essential piece in the cyclic word text, by (lowest label, lowest position)"""
        n = len(text)
        doubled = text + text
        for label, h, table in self.entries:
            if h > n:
                continue
            for pos in range(n):
                replacement = table.get(doubled[pos:pos + h])
                if replacement is not None:
                    return label, pos, h, replacement
        return None


def _dehn(w: Word, index: _EssentialIndex, max_steps: int = 0) -> Tuple[Word, DehnTrace]:
    trace = DehnTrace()
    current = w
    limit = len(w) if max_steps <= 0 else min(max_steps, len(w))
    while current.letters and len(trace) < limit:
        core, conjugator = cyclic_reduce(current)
        hit = index.find(core.text)
        if hit is None:
            break
        label, pos, h, replacement = hit
        text = core.text
        n = len(text)
        if pos + h <= n:
            new_core = text[:pos] + replacement + text[pos + h:]
        else:
            # the piece wraps around: continue with the rotated cyclic word
            rotated = text[pos:] + text[:pos]
            new_core = replacement + rotated[h:]
        piece = Word(letters_from_text((text + text)[pos:pos + h]), w.alphabet)
        letters = conjugator.letters + letters_from_text(new_core) + tuple(
            g.inverse() for g in reversed(conjugator.letters))
        result = reduce(letters, w.alphabet)
        trace.steps.append(DehnStep(current, piece, label, result))
        logger.debug("Dehn step %d: relator %s piece %s -> |w| = %d", len(trace), label, piece, len(result))
        current = result
    return current, trace


class DehnSolver:
    """
    Word problem solver for one C'(1/6) family.

    The C'(1/6) check and the essential-piece index are built once, so the
    solver can serve as a triviality oracle for many words.
    """

    def __init__(self, family: RelatorFamily, checked: bool = False):
        if not checked:
            _require_c16(family)
        self.family = family
        self._index = _EssentialIndex(family)

    def reduce(self, w: Word, max_steps: int = 0) -> Tuple[Word, DehnTrace]:
        if w.alphabet != self.family.alphabet:
            raise PreconditionError("Word and family use different alphabets")
        return _dehn(w, self._index, max_steps)

    def contains(self, w: Word) -> bool:
        result, _ = self.reduce(w)
        return not result.letters

    __call__ = contains


def dehn_reduce(w: Word, family: RelatorFamily, max_steps: Optional[int] = None) -> Tuple[Word, DehnTrace]:
    """
    Dehn's algorithm: substitute essential pieces by the inverse of their complement

    Args:
        w: Reduced word over the family's alphabet
        family: C'(1/6) relator family
        max_steps: Optional step cap (defaults to Config.DEHN_MAX_STEPS; 0 = |w|)

    Returns:
        (result, trace); the result has no cyclic conjugate containing an
        essential piece, unless the step cap stopped the run early
    """
    steps = Config.DEHN_MAX_STEPS if max_steps is None else max_steps
    return DehnSolver(family).reduce(w, steps)


def in_normal_closure(w: Word, family: RelatorFamily) -> bool:
    """Decide w ∈ ⟨⟨family⟩⟩ by running Dehn's algorithm to the end"""
    return DehnSolver(family).contains(w)


def independence_check(family: RelatorFamily) -> IndependenceVerdict:
    """
    Check that no relator lies in the normal closure of the others

    Returns:
        IndependenceVerdict(independent=True) or the first dependent label
        with the relator as witness
    """
    _require_c16(family)
    for label, relator in family.items():
        # subfamilies of a C'(1/6) family are C'(1/6)
        solver = DehnSolver(family.without(label), checked=True)
        if solver.contains(relator):
            logger.info("Relator %s lies in the normal closure of the others", label)
            return IndependenceVerdict(independent=False, index=label, witness=relator)
    return IndependenceVerdict(independent=True)


def _piece_texts(w: Word) -> FrozenSet[str]:
    """All subwords of cyclic conjugates of w and w⁻¹ (the pieces of w)"""
    core, _ = cyclic_reduce(w)
    text = core.text
    n = len(text)
    pieces = set()
    for host in (text, inverse_text(text)):
        doubled = host + host
        for start in range(n):
            for length in range(1, n + 1):
                pieces.add(doubled[start:start + length])
    return frozenset(pieces)


def cofinite_continuity_witness(w: Word, J: Iterable[int], family: RelatorFamily) -> FrozenSet[int]:
    """
    Labels j ∉ J such that u_j contains an essential piece that is also a piece of w

    Pieces are read from w itself and from its Dehn reduction by the
    J-relators, which has no essential J-piece left. A relator split by an
    inserted J-relator only shows up in the reduced word. The complement P
    of the returned set (inside the family) then satisfies
    w ∉ ⟨⟨u_j : j ∈ P⟩⟩; see verify_continuity_witness.
    """
    J = frozenset(J)
    _require_c16(family)
    unknown = J - set(family.labels)
    if unknown:
        raise PreconditionError(f"Unknown relator labels in J: {sorted(unknown)}")
    reduced = DehnSolver(family.subfamily(J), checked=True).reduce(w)[0] if J else w
    if not reduced.letters:
        raise PreconditionError("w lies in the normal closure of the relators indexed by J")
    pieces = _piece_texts(w) | _piece_texts(reduced)
    core_length = max(len(cyclic_reduce(w)[0]), len(cyclic_reduce(reduced)[0]))
    excluded = set()
    for label, relator in family.items():
        if label in J:
            continue
        h = _essential_threshold(len(relator))
        if h > core_length:
            continue
        for cyclic in symmetrized_texts(relator):
            if cyclic[:h] in pieces:
                excluded.add(label)
                break
    return frozenset(excluded)


def verify_continuity_witness(w: Word, J: Iterable[int], family: RelatorFamily, excluded: Iterable[int]) -> bool:
    """w ∉ ⟨⟨u_j : j ∈ P⟩⟩ for P = labels ∖ excluded (P contains J)"""
    excluded = frozenset(excluded)
    if excluded & frozenset(J):
        return False
    P = [label for label in family.labels if label not in excluded]
    if not P:
        return bool(w.letters)
    return not in_normal_closure(w, family.subfamily(P))


def _block_exponents(count: int, blocks: int) -> List[List[int]]:
    """
    Exponent sequences c_n, v_1, c_n, v_2, ..., c_n, v_blocks per relator.

    Markers c_n = n are distinct per relator and the values v_j = count + j are
    distinct inside a relator, so every ordered pair of consecutive exponents
    is unique across the family.
    """
    sequences = []
    for n in range(1, count + 1):
        seq = []
        for j in range(1, blocks + 1):
            seq.extend([n, count + j])
        sequences.append(seq)
    return sequences


def _longest_ambiguous(seq: List[int]) -> int:
    """Longest subword with at most two a-letters: b^s a b^e a b^t around any block"""
    k = len(seq)
    return max(seq[i - 1] + seq[i] + seq[(i + 1) % k] for i in range(k)) + 2


def make_c16_family(alphabet: Alphabet, count: int) -> RelatorFamily:
    """
    Build a C'(1/6) family of `count` relators with strictly increasing lengths.

    Relator n is ∏ a b^{e_i} over the first two generators a, b, with the
    exponent sequence from _block_exponents. A subword containing three a's
    pins down a unique consecutive exponent pair, so repeated subwords contain
    at most two a's; the number of blocks is raised until those are shorter
    than |u_n|/6. The result is certified by check_c16 before it is returned.
    """
    if alphabet.size < 2:
        raise PreconditionError("make_c16_family needs at least two generators")
    if count < 1:
        raise PreconditionError("count must be at least 1")
    blocks = 1
    while True:
        sequences = _block_exponents(count, blocks)
        lengths = [len(seq) + sum(seq) for seq in sequences]
        if all(6 * _longest_ambiguous(seq) < length for seq, length in zip(sequences, lengths)):
            break
        blocks += 1
    a, b = Generator(0, 1), Generator(1, 1)
    relators = []
    for seq in sequences:
        letters: List[Generator] = []
        for e in seq:
            letters.append(a)
            letters.extend([b] * e)
        relators.append(Word(tuple(letters), alphabet))
    family = RelatorFamily(alphabet, tuple(relators))
    verdict = check_c16(family)
    if not verdict.ok:
        raise RuntimeError(f"make_c16_family produced a non-C'(1/6) family: {verdict.violation}")
    logger.info("Built C'(1/6) family: %d relators, %d blocks, lengths %s", count, blocks, lengths)
    return family
