"""
Presentation files, open-set files and word literals: parsing and canonical printing
"""
import logging
from typing import Dict, List, Tuple

from markedgroups.models.chabauty import BasicOpenSet
from markedgroups.models.coxeter import INFINITY, CoxeterMatrix, CoxWord, Order, cox_reduce
from markedgroups.models.errors import ParseError
from markedgroups.models.smallcancel import RelatorFamily
from markedgroups.models.words import Alphabet, Generator, Word, cyclic_reduce, is_proper_power, reduce

logger = logging.getLogger(__name__)

IDENTITY_LITERAL = '1'


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0]


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """(1-based line number, text) of every line with content outside comments"""
    out = []
    for number, line in enumerate(text.splitlines(), start=1):
        if _strip_comment(line).strip():
            out.append((number, _strip_comment(line)))
    return out


def parse_alphabet(line: str, line_number: int = 1) -> Alphabet:
    names = line.split()
    if not names:
        raise ParseError("Expected generator names", line_number, 1)
    try:
        return Alphabet(tuple(names))
    except ValueError as e:
        raise ParseError(str(e), line_number, 1) from None


def _candidates(alphabet: Alphabet, token: str, pos: int) -> List[Tuple[int, int, int, int]]:
    """(length, exactness, generator index, sign) for names matching token at pos"""
    found = []
    names = set(alphabet.names)
    for index, name in enumerate(alphabet.names):
        if token.startswith(name, pos):
            found.append((len(name), 1, index, 1))
        capital = name[0].upper() + name[1:]
        if name[0].islower() and capital not in names and token.startswith(capital, pos):
            found.append((len(name), 0, index, -1))
    return found


def _parse_exponent(token: str, pos: int, line: int, column: int) -> Tuple[int, int]:
    """Parse '^k' at pos; returns (k, new position)"""
    end = pos + 1
    if end < len(token) and token[end] == '-':
        end += 1
    digits_start = end
    while end < len(token) and token[end].isdigit():
        end += 1
    if end == digits_start:
        raise ParseError("Expected an integer exponent after '^'", line, column + pos + 1)
    return int(token[pos + 1:end]), end


def parse_word(text: str, alphabet: Alphabet, line: int = 1, column_offset: int = 0) -> Word:
    """
    Parse a word literal

    Tokens are separated by whitespace; inside a token the longest matching
    generator name is taken first. A name may be followed by ^-1 or ^k, and a
    capitalized name denotes the inverse. '1' alone is the empty word.

    Raises:
        ParseError: unknown generator or malformed exponent, with line/column
    """
    if text.strip() == IDENTITY_LITERAL:
        return alphabet.identity()
    letters: List[Generator] = []
    pos_in_line = 0
    for token in text.split():
        start = text.index(token, pos_in_line)
        pos_in_line = start + len(token)
        column = column_offset + start
        pos = 0
        while pos < len(token):
            candidates = _candidates(alphabet, token, pos)
            if not candidates:
                raise ParseError(f"Unknown generator in {token!r}", line, column + pos + 1)
            length, _, index, sign = max(candidates)
            pos += length
            exponent = 1
            if pos < len(token) and token[pos] == '^':
                exponent, pos = _parse_exponent(token, pos, line, column)
            letter = Generator(index, sign if exponent >= 0 else -sign)
            letters.extend([letter] * abs(exponent))
    return reduce(letters, alphabet)


def format_word(w: Word) -> str:
    """Canonical printer: space-separated names, inverses as name^-1, '1' for the identity"""
    if w.is_identity():
        return IDENTITY_LITERAL
    names = w.alphabet.names
    return ' '.join(names[g.index] if g.sign > 0 else f"{names[g.index]}^-1" for g in w)


def parse_presentation(text: str) -> Tuple[Alphabet, RelatorFamily]:
    """
    Parse a presentation file

    Line 1 lists the generators; each further line is one relator. '#' starts
    a comment. Relators are freely and cyclically reduced.

    Raises:
        ParseError: syntax errors, unknown generators, empty relators or
            proper powers
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("Empty presentation: expected generator names on line 1", 1, 1)
    number, first = lines[0]
    alphabet = parse_alphabet(first, number)
    relators = []
    for number, line in lines[1:]:
        word = parse_word(line, alphabet, number)
        if word.is_identity():
            raise ParseError("Relator reduces to the empty word", number, 1)
        core = cyclic_reduce(word)[0]
        if is_proper_power(core):
            raise ParseError(f"Relator is a proper power: {format_word(core)}", number, 1)
        relators.append(core)
    if not relators:
        raise ParseError("Presentation has no relators", number, 1)
    family = RelatorFamily(alphabet, tuple(relators))
    logger.debug("Parsed presentation with %d generators and %d relators", alphabet.size, len(family))
    return alphabet, family


def format_presentation(alphabet: Alphabet, family: RelatorFamily) -> str:
    lines = [' '.join(alphabet.names)]
    lines.extend(format_word(relator) for _, relator in family.items())
    return '\n'.join(lines) + '\n'


def parse_open_set(text: str) -> BasicOpenSet:
    """
    Parse an open-set file: generator names, then '+ WORD' (must contain)
    and '- WORD' (must avoid) lines
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("Empty open-set file: expected generator names on line 1", 1, 1)
    number, first = lines[0]
    alphabet = parse_alphabet(first, number)
    contain, avoid = set(), set()
    for number, line in lines[1:]:
        stripped = line.lstrip()
        marker = stripped[:1]
        offset = len(line) - len(stripped)
        if marker not in ('+', '-'):
            raise ParseError("Expected '+ WORD' or '- WORD'", number, offset + 1)
        word = parse_word(stripped[1:], alphabet, number, offset + 1)
        if marker == '+':
            contain.add(word)
        else:
            if word.is_identity():
                raise ParseError("The empty word cannot be avoided", number, offset + 1)
            avoid.add(word)
    return BasicOpenSet(alphabet, frozenset(contain), frozenset(avoid))


def _parse_order(text: str, column: int) -> Order:
    value = text.strip().lower()
    if value in ('inf', 'infinity', '∞'):
        return INFINITY
    try:
        m = int(value)
    except ValueError:
        raise ParseError(f"Expected an integer >= 2 or 'inf', got {text!r}", 1, column) from None
    if m < 2:
        raise ParseError(f"Coxeter entries must be >= 2, got {m}", 1, column)
    return m


def parse_mu_spec(spec: str) -> CoxeterMatrix:
    """
    Parse 'd=m,...,*=m' into a shift-invariant Coxeter matrix; unlisted
    distances default to '*' (inf when absent)
    """
    distances: Dict[int, Order] = {}
    default: Order = INFINITY
    column = 1
    for part in spec.split(','):
        if not part.strip():
            column += len(part) + 1
            continue
        if '=' not in part:
            raise ParseError(f"Expected 'distance=order', got {part!r}", 1, column)
        key, value = part.split('=', 1)
        order = _parse_order(value, column + len(key) + 1)
        if key.strip() == '*':
            default = order
        else:
            try:
                d = int(key)
            except ValueError:
                raise ParseError(f"Expected a positive distance, got {key!r}", 1, column) from None
            if d < 1:
                raise ParseError(f"Distances must be positive, got {d}", 1, column)
            distances[d] = order
        column += len(part) + 1
    return CoxeterMatrix.from_distance_map(distances, default)


def parse_cox_word(text: str) -> CoxWord:
    """Space-separated integer vertices"""
    letters = []
    for token in text.split():
        try:
            letters.append(int(token))
        except ValueError:
            raise ParseError(f"Expected an integer vertex, got {token!r}", 1, text.index(token) + 1) from None
    return cox_reduce(letters)


def format_cox_word(w: CoxWord) -> str:
    return ' '.join(str(v) for v in w.letters) if w.letters else IDENTITY_LITERAL


def read_text(path: str) -> str:
    with open(path, encoding='utf-8') as handle:
        return handle.read()


def load_presentation(path: str) -> Tuple[Alphabet, RelatorFamily]:
    return parse_presentation(read_text(path))


def load_open_set(path: str) -> BasicOpenSet:
    return parse_open_set(read_text(path))
