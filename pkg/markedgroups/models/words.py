"""
Free-group word arithmetic: reduction, cyclic operations and occurrence scanning
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Sequence, Tuple

from markedgroups.models.errors import AlphabetMismatchError, PreconditionError


# Letters are encoded as single characters so that subword search runs on str
_CODE_BASE = 0x4E00


class Generator(NamedTuple):
    """A generator of the alphabet or its formal inverse"""
    index: int
    sign: int  # +1 or -1

    def inverse(self) -> 'Generator':
        return Generator(self.index, -self.sign)

    @property
    def code(self) -> str:
        return chr(_CODE_BASE + 2 * self.index + (0 if self.sign > 0 else 1))


@dataclass(frozen=True)
class Alphabet:
    """Finite generating set; generator names are kept here only"""
    names: Tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("Alphabet must contain at least one generator")
        for name in self.names:
            if not (name and name[0].isalpha() and name.isalnum()):
                raise ValueError(f"Invalid generator name: {name!r}")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Generator names must be pairwise distinct: {self.names}")

    @classmethod
    def of(cls, *names: str) -> 'Alphabet':
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        return cls(tuple(names))

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"Unknown generator {name!r} in alphabet {self.names}") from None

    def generator(self, name: str) -> 'Word':
        return Word((Generator(self.index(name), 1),), self)

    def gens(self) -> List['Word']:
        return [Word((Generator(i, 1),), self) for i in range(self.size)]

    def identity(self) -> 'Word':
        return Word((), self)

    def letters(self) -> List[Generator]:
        """All 2m letters, positive ones first"""
        return [Generator(i, 1) for i in range(self.size)] + [Generator(i, -1) for i in range(self.size)]

    def __repr__(self):
        return f"Alphabet({', '.join(self.names)})"


@dataclass(frozen=True)
class Word:
    """
    Freely reduced word over an alphabet.

    Build words through reduce() or the operations below; the constructor
    rejects non-reduced letter sequences.
    """
    letters: Tuple[Generator, ...]
    alphabet: Alphabet

    def __post_init__(self):
        size = self.alphabet.size
        previous = None
        for letter in self.letters:
            if not 0 <= letter.index < size or letter.sign not in (1, -1):
                raise ValueError(f"Letter {letter} outside alphabet {self.alphabet}")
            if previous is not None and previous == letter.inverse():
                raise ValueError("Word is not freely reduced; use reduce()")
            previous = letter

    @cached_property
    def text(self) -> str:
        """One character per letter, for fast subword search"""
        return ''.join(letter.code for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return reduce(self.letters[item], self.alphabet)
        return self.letters[item]

    def __mul__(self, other: 'Word') -> 'Word':
        return concat(self, other)

    def __invert__(self) -> 'Word':
        return invert(self)

    def __pow__(self, n: int) -> 'Word':
        return power(self, n)

    def is_identity(self) -> bool:
        return not self.letters

    def __repr__(self):
        if not self.letters:
            return "Word(1)"
        names = self.alphabet.names
        body = ' '.join(names[g.index] if g.sign > 0 else f"{names[g.index]}^-1" for g in self.letters)
        return f"Word({body})"


def reduce(raw: Iterable[Generator], alphabet: Alphabet) -> Word:
    """
    Freely reduce a letter sequence (stack-based single pass)

    Args:
        raw: Sequence of Generator letters, possibly with cancelling pairs
        alphabet: Owning alphabet

    Returns:
        The unique freely reduced word equal to the input
    """
    stack: List[Generator] = []
    for letter in raw:
        letter = Generator(*letter)
        if stack and stack[-1].index == letter.index and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    return Word(tuple(stack), alphabet)


def word_from_indices(signed: Iterable[int], alphabet: Alphabet) -> Word:
    """Build a word from 1-based signed indices: 2 -> second generator, -2 -> its inverse"""
    letters = []
    for code in signed:
        if code == 0:
            raise ValueError("0 is not a letter code")
        letters.append(Generator(abs(code) - 1, 1 if code > 0 else -1))
    return reduce(letters, alphabet)


def _same_alphabet(*words: Word) -> Alphabet:
    alphabet = words[0].alphabet
    for w in words[1:]:
        if w.alphabet != alphabet:
            raise AlphabetMismatchError(f"Alphabet mismatch: {alphabet} vs {w.alphabet}")
    return alphabet


def concat(a: Word, b: Word) -> Word:
    alphabet = _same_alphabet(a, b)
    return reduce(a.letters + b.letters, alphabet)


def invert(a: Word) -> Word:
    return Word(tuple(letter.inverse() for letter in reversed(a.letters)), a.alphabet)


def conjugate(a: Word, g: Word) -> Word:
    """g·a·g⁻¹"""
    alphabet = _same_alphabet(a, g)
    return reduce(g.letters + a.letters + invert(g).letters, alphabet)


def commutator(a: Word, b: Word) -> Word:
    """a·b·a⁻¹·b⁻¹"""
    alphabet = _same_alphabet(a, b)
    return reduce(a.letters + b.letters + invert(a).letters + invert(b).letters, alphabet)


def power(a: Word, n: int) -> Word:
    if n < 0:
        return power(invert(a), -n)
    if n == 0:
        return a.alphabet.identity()
    core, conjugator = cyclic_reduce(a)
    # (g c g^-1)^n = g c^n g^-1 and c^n is reduced when c is cyclically reduced
    return conjugate(Word(core.letters * n, a.alphabet), conjugator)


def is_cyclically_reduced(w: Word) -> bool:
    if len(w) < 2:
        return True
    return w.letters[0] != w.letters[-1].inverse()


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """
    Split a reduced word as conjugator·core·conjugator⁻¹

    Returns:
        (core, conjugator) with core cyclically reduced
    """
    letters = w.letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == letters[hi - 1].inverse():
        lo += 1
        hi -= 1
    return Word(letters[lo:hi], w.alphabet), Word(letters[:lo], w.alphabet)


def rotate(w: Word, k: int) -> Word:
    """Cyclic rotation starting at position k; w must be cyclically reduced"""
    if not w.letters:
        return w
    k %= len(w)
    return Word(w.letters[k:] + w.letters[:k], w.alphabet)


def cyclic_conjugates(w: Word) -> FrozenSet[Word]:
    """All rotations of a cyclically reduced word"""
    if not is_cyclically_reduced(w):
        raise PreconditionError(f"{w} is not cyclically reduced")
    if not w.letters:
        return frozenset({w})
    return frozenset(rotate(w, k) for k in range(len(w)))


def is_proper_power(w: Word) -> bool:
    """True when the cyclic core of w equals v^k for some k >= 2"""
    core, _ = cyclic_reduce(w)
    n = len(core)
    text = core.text
    for period in range(1, n // 2 + 1):
        if n % period == 0 and text[:period] * (n // period) == text:
            return True
    return False


def occurrences(pattern: Word, host: Word, mode: str = 'linear') -> List[int]:
    """
    Start positions of pattern as a contiguous subword of host

    Args:
        pattern: Nonempty reduced word
        host: Reduced word (cyclically reduced in cyclic mode)
        mode: 'linear' or 'cyclic'; cyclic positions wrap modulo |host|

    Returns:
        Sorted list of start positions
    """
    _same_alphabet(pattern, host)
    if not pattern.letters:
        raise PreconditionError("Pattern must be nonempty")
    if mode not in ('linear', 'cyclic'):
        raise ValueError(f"Unknown occurrence mode: {mode}")
    n = len(host)
    if n == 0:
        return []
    if mode == 'cyclic':
        if not is_cyclically_reduced(host):
            raise PreconditionError(f"{host} is not cyclically reduced")
        text = (host.text * 2)[:2 * n - 1]
        limit = n
    else:
        text = host.text
        limit = n
    needle = pattern.text
    positions = []
    start = text.find(needle)
    while start != -1 and start < limit:
        positions.append(start)
        start = text.find(needle, start + 1)
    return positions


def abelianization(w: Word) -> Tuple[int, ...]:
    """Exponent-sum vector of w"""
    sums = [0] * w.alphabet.size
    for letter in w.letters:
        sums[letter.index] += letter.sign
    return tuple(sums)


def letters_from_text(text: str) -> Tuple[Generator, ...]:
    """Inverse of Word.text"""
    out = []
    for ch in text:
        offset = ord(ch) - _CODE_BASE
        out.append(Generator(offset // 2, -1 if offset % 2 else 1))
    return tuple(out)


def word_from_text(text: str, alphabet: Alphabet) -> Word:
    return reduce(letters_from_text(text), alphabet)


def inverse_text(text: str) -> str:
    """Word.text of the inverse word"""
    flip: Dict[str, str] = {}
    out = []
    for ch in reversed(text):
        if ch not in flip:
            offset = ord(ch) - _CODE_BASE
            flip[ch] = chr(_CODE_BASE + (offset ^ 1))
        out.append(flip[ch])
    return ''.join(out)


def enumerate_reduced_words(alphabet: Alphabet, max_length: int) -> Iterator[Word]:
    """Reduced words in shortlex order, up to max_length letters"""
    letters = alphabet.letters()
    layer: List[Tuple[Generator, ...]] = [()]
    yield alphabet.identity()
    for depth in range(max_length):
        last = depth == max_length - 1
        next_layer = []
        for prefix in layer:
            for letter in letters:
                if prefix and prefix[-1] == letter.inverse():
                    continue
                extended = prefix + (letter,)
                if not last:
                    next_layer.append(extended)
                yield Word(extended, alphabet)
        layer = next_layer
