"""
Thompson's group F as dyadic piecewise-linear homeomorphisms of [0, 1]
"""
import ast
import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Tuple, Union

from markedgroups.models.errors import ParseError, PreconditionError

logger = logging.getLogger(__name__)

Dyadic = Fraction
Breakpoint = Tuple[Fraction, Fraction]


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def dyadic(value: Union[int, str, Fraction]) -> Dyadic:
    """Exact dyadic rational; raises ValueError for other denominators"""
    q = Fraction(value)
    if not _is_power_of_two(q.denominator):
        raise ValueError(f"{q} is not a dyadic rational")
    return q


def dyadic_parts(x: Dyadic) -> Tuple[int, int]:
    """(mantissa, exponent) with x = mantissa / 2^exponent, canonical"""
    x = dyadic(x)
    return x.numerator, x.denominator.bit_length() - 1


def log2_exact(q: Fraction) -> int:
    """Binary logarithm of an integral power of 2"""
    if q <= 0 or not (_is_power_of_two(q.numerator) and _is_power_of_two(q.denominator)):
        raise ValueError(f"{q} is not an integral power of 2")
    return (q.numerator.bit_length() - 1) - (q.denominator.bit_length() - 1)


@dataclass(frozen=True)
class CharacterPair:
    """(log2 slope at 0, log2 slope at 1)"""
    chi0: int
    chi1: int

    def __add__(self, other: 'CharacterPair') -> 'CharacterPair':
        return CharacterPair(self.chi0 + other.chi0, self.chi1 + other.chi1)

    def __neg__(self) -> 'CharacterPair':
        return CharacterPair(-self.chi0, -self.chi1)


@dataclass(frozen=True)
class DyadicPL:
    """
    Element of F given by its breakpoints (x, y), (0,0) first and (1,1) last.

    Collinear interior points are dropped, so equal maps have equal
    breakpoint tuples.
    """
    breakpoints: Tuple[Breakpoint, ...]

    def __post_init__(self):
        points = [(dyadic(x), dyadic(y)) for x, y in self.breakpoints]
        if len(points) < 2 or points[0] != (0, 0) or points[-1] != (1, 1):
            raise ValueError("Breakpoints must start at (0, 0) and end at (1, 1)")
        slopes = []
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            if x1 <= x0 or y1 <= y0:
                raise ValueError(f"Breakpoints must increase strictly: ({x0}, {y0}) -> ({x1}, {y1})")
            slope = (y1 - y0) / (x1 - x0)
            log2_exact(slope)
            slopes.append(slope)
        kept = [points[0]]
        for idx in range(1, len(points) - 1):
            if slopes[idx - 1] != slopes[idx]:
                kept.append(points[idx])
        kept.append(points[-1])
        object.__setattr__(self, 'breakpoints', tuple(kept))

    @classmethod
    def of(cls, points: Iterable[Tuple[Any, Any]]) -> 'DyadicPL':
        return cls(tuple((Fraction(x), Fraction(y)) for x, y in points))

    @property
    def xs(self) -> List[Fraction]:
        return [x for x, _ in self.breakpoints]

    @property
    def ys(self) -> List[Fraction]:
        return [y for _, y in self.breakpoints]

    def slopes(self) -> List[Fraction]:
        pts = self.breakpoints
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __mul__(self, other: 'DyadicPL') -> 'DyadicPL':
        return compose(self, other)

    def __invert__(self) -> 'DyadicPL':
        return inverse(self)

    def __pow__(self, n: int) -> 'DyadicPL':
        return power(self, n)

    def is_identity(self) -> bool:
        return len(self.breakpoints) == 2

    def __repr__(self):
        body = ', '.join(f"({x}, {y})" for x, y in self.breakpoints)
        return f"DyadicPL[{body}]"


def _interpolate(points: Tuple[Breakpoint, ...], x: Fraction) -> Fraction:
    xs = [p[0] for p in points]
    if x < 0 or x > 1:
        raise ValueError(f"{x} lies outside [0, 1]")
    idx = min(bisect_right(xs, x), len(xs) - 1)
    (x0, y0), (x1, y1) = points[idx - 1], points[idx]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def evaluate(f: DyadicPL, x) -> Fraction:
    return _interpolate(f.breakpoints, Fraction(x))


IDENTITY = DyadicPL.of([(0, 0), (1, 1)])


def compose(f: DyadicPL, g: DyadicPL) -> DyadicPL:
    """f∘g (apply g first)"""
    g_inverse = inverse(g)
    xs = sorted(set(g.xs) | {evaluate(g_inverse, x) for x in f.xs})
    return DyadicPL(tuple((x, evaluate(f, evaluate(g, x))) for x in xs))


def inverse(f: DyadicPL) -> DyadicPL:
    return DyadicPL(tuple((y, x) for x, y in f.breakpoints))


def power(f: DyadicPL, n: int) -> DyadicPL:
    if n < 0:
        return power(inverse(f), -n)
    result, base = IDENTITY, f
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def commutator(f: DyadicPL, g: DyadicPL) -> DyadicPL:
    """f g f^-1 g^-1"""
    return compose(compose(f, g), compose(inverse(f), inverse(g)))


def characters(f: DyadicPL) -> CharacterPair:
    slopes = f.slopes()
    return CharacterPair(log2_exact(slopes[0]), log2_exact(slopes[-1]))


def _require_pq(p: int, q: int):
    if p == 0 or q == 0:
        raise PreconditionError("p and q must be nonzero")
    if math.gcd(p, q) != 1:
        raise PreconditionError(f"p = {p} and q = {q} must be coprime")


def in_Npq(f: DyadicPL, p: int, q: int) -> bool:
    """f ∈ N_{p,q} = ker(p χ0 - q χ1)"""
    _require_pq(p, q)
    chi = characters(f)
    return p * chi.chi0 == q * chi.chi1


def fixes(f: DyadicPL, x) -> bool:
    return evaluate(f, x) == Fraction(x)


def support(f: DyadicPL) -> List[Tuple[Fraction, Fraction]]:
    """Open intervals whose union is {x : f(x) != x}, in increasing order"""
    points = f.breakpoints
    cuts = {Fraction(0), Fraction(1)}
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        g0, g1 = y0 - x0, y1 - x1
        if g0 == 0:
            cuts.add(x0)
        if g1 == 0:
            cuts.add(x1)
        if g0 * g1 < 0:
            cuts.add(x0 - g0 * (x1 - x0) / (g1 - g0))
    ordered = sorted(cuts)
    return [(a, b) for a, b in zip(ordered, ordered[1:]) if not fixes(f, (a + b) / 2)]


def embed_i0(f: DyadicPL) -> DyadicPL:
    """t -> f(2t)/2 on [0, 1/2], identity on [1/2, 1]"""
    half = Fraction(1, 2)
    return DyadicPL(tuple((x * half, y * half) for x, y in f.breakpoints) + ((Fraction(1), Fraction(1)),))


def embed_i1(f: DyadicPL) -> DyadicPL:
    """Identity on [0, 1/2], t -> 1/2 + f(2t - 1)/2 on [1/2, 1]"""
    half = Fraction(1, 2)
    return DyadicPL(((Fraction(0), Fraction(0)),) + tuple((half + x * half, half + y * half) for x, y in f.breakpoints))


# Standard generators: A has slopes 1/2, 1, 2; B is A squeezed onto [1/2, 1]
A = DyadicPL.of([(0, 0), ('1/2', '1/4'), ('3/4', '1/2'), (1, 1)])
B = embed_i1(A)
# slope 2 at both ends
SIGMA = DyadicPL.of([(0, 0), ('1/4', '1/2'), ('3/4', '5/8'), ('7/8', '3/4'), (1, 1)])


def _require_sigma(sigma: DyadicPL):
    if characters(sigma) != CharacterPair(1, 1):
        raise PreconditionError(f"sigma must have slope 2 at 0 and at 1, got {characters(sigma)}")


def build_j0(f: DyadicPL, p: int, q: int, sigma: DyadicPL = SIGMA) -> DyadicPL:
    """
    j0(f) = i0(f) · i1(σ)^(p χ0(f) / q)

    The result fixes 1/2 and lies in N_{p,q}.

    Raises:
        PreconditionError: q does not divide χ0(f), bad (p, q) or σ
    """
    _require_pq(p, q)
    _require_sigma(sigma)
    chi0 = characters(f).chi0
    if chi0 % q:
        raise PreconditionError(f"q = {q} does not divide chi0(f) = {chi0}")
    return compose(embed_i0(f), power(embed_i1(sigma), p * chi0 // q))


def build_j1(f: DyadicPL, p: int, q: int, sigma: DyadicPL = SIGMA) -> DyadicPL:
    """j1(f) = i0(σ^(q χ1(f) / p)) · i1(f); needs p | χ1(f)"""
    _require_pq(p, q)
    _require_sigma(sigma)
    chi1 = characters(f).chi1
    if chi1 % p:
        raise PreconditionError(f"p = {p} does not divide chi1(f) = {chi1}")
    return compose(embed_i0(power(sigma, q * chi1 // p)), embed_i1(f))


def in_commutator_subgroup(f: DyadicPL) -> bool:
    """[F, F] = ker χ0 ∩ ker χ1"""
    return characters(f) == CharacterPair(0, 0)


_CALLABLES: Dict[str, Callable] = {
    'compose': lambda *fs: _compose_many(fs),
    'inverse': inverse,
    'power': power,
    'characters': characters,
    'in_npq': in_Npq,
    'commutator': commutator,
    'j0': build_j0,
    'j1': build_j1,
    'in_commutator': in_commutator_subgroup,
    'i0': embed_i0,
    'i1': embed_i1,
    'evaluate': evaluate,
    'fixes': fixes,
    'support': support,
}

_NAMES: Dict[str, DyadicPL] = {'A': A, 'B': B, 'sigma': SIGMA, 'identity': IDENTITY}

_PL, _INT, _NUM = 'an element of F', 'an integer', 'a number'

# argument kinds per callable; j0/j1 take an optional fourth sigma
_SIGNATURES: Dict[str, Tuple[str, ...]] = {
    'inverse': (_PL,),
    'power': (_PL, _INT),
    'characters': (_PL,),
    'in_npq': (_PL, _INT, _INT),
    'commutator': (_PL, _PL),
    'j0': (_PL, _INT, _INT, _PL),
    'j1': (_PL, _INT, _INT, _PL),
    'in_commutator': (_PL,),
    'i0': (_PL,),
    'i1': (_PL,),
    'evaluate': (_PL, _NUM),
    'fixes': (_PL, _NUM),
    'support': (_PL,),
}
_OPTIONAL_TAIL = {'j0': 1, 'j1': 1}


def _has_kind(value, kind: str) -> bool:
    if kind == _PL:
        return isinstance(value, DyadicPL)
    if isinstance(value, bool):
        return False
    if kind == _INT:
        return isinstance(value, int)
    return isinstance(value, (int, Fraction))


def _compose_many(fs) -> DyadicPL:
    result = IDENTITY
    for f in fs:
        result = compose(result, f)
    return result


class _ExpressionEvaluator(ast.NodeVisitor):
    """Whitelisted evaluation of the Thompson expression language"""

    def fail(self, node: ast.AST, message: str):
        raise ParseError(message, getattr(node, 'lineno', 1), getattr(node, 'col_offset', 0) + 1)

    def check_arguments(self, node: ast.Call, name: str, args: List[Any]):
        if name == 'compose':
            expected = (_PL,) * len(args)
        else:
            expected = _SIGNATURES[name]
            minimum = len(expected) - _OPTIONAL_TAIL.get(name, 0)
            if not minimum <= len(args) <= len(expected):
                self.fail(node, f"{name} expects {minimum}..{len(expected)} arguments, got {len(args)}")
        for position, (arg, kind) in enumerate(zip(args, expected)):
            if not _has_kind(arg, kind):
                self.fail(node.args[position], f"Argument {position + 1} of {name} must be {kind}")

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Call(self, node):
        if not isinstance(node.func, ast.Name) or node.func.id not in _CALLABLES:
            self.fail(node, f"Unknown function: {ast.unparse(node.func)}")
        if node.keywords:
            self.fail(node, "Keyword arguments are not supported")
        args = [_as_integer(self.visit(arg)) for arg in node.args]
        self.check_arguments(node, node.func.id, args)
        try:
            return _CALLABLES[node.func.id](*args)
        except TypeError as e:
            self.fail(node, f"Bad arguments to {node.func.id}: {e}")

    def visit_Name(self, node):
        if node.id not in _NAMES:
            self.fail(node, f"Unknown name: {node.id}")
        return _NAMES[node.id]

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            self.fail(node, f"Only integer constants are allowed, got {node.value!r}")
        return Fraction(node.value)

    def visit_UnaryOp(self, node):
        if not isinstance(node.op, ast.USub):
            self.fail(node, "Only unary minus is supported")
        operand = self.visit(node.operand)
        if not isinstance(operand, Fraction):
            self.fail(node, "Unary minus applies to numbers only")
        return -operand

    def visit_BinOp(self, node):
        left, right = self.visit(node.left), self.visit(node.right)
        if not (isinstance(left, Fraction) and isinstance(right, Fraction)):
            self.fail(node, "Arithmetic is only allowed between numbers")
        if isinstance(node.op, ast.Div):
            if right == 0:
                self.fail(node.right, "Division by zero")
            return left / right
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        self.fail(node, "Unsupported operator")

    def visit_Tuple(self, node):
        return tuple(self.visit(elt) for elt in node.elts)

    def visit_List(self, node):
        points = [self.visit(elt) for elt in node.elts]
        if not all(isinstance(pt, tuple) and len(pt) == 2
                   and all(isinstance(c, Fraction) for c in pt) for pt in points):
            self.fail(node, "Breakpoint lists hold (x, y) pairs of numbers")
        try:
            return DyadicPL.of(points)
        except ValueError as e:
            self.fail(node, str(e))

    def generic_visit(self, node):
        self.fail(node, f"Unsupported syntax: {type(node).__name__}")


def _as_integer(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def evaluate_expression(text: str) -> Any:
    """
    Evaluate an expression such as compose(A, inverse(B)) or
    in-npq(j0(A, 1, 1), 1, 1)

    Returns:
        DyadicPL, CharacterPair, bool, Fraction or a support list

    Raises:
        ParseError: syntax outside the expression language
    """
    source = text.strip().replace('in-npq', 'in_npq')
    try:
        tree = ast.parse(source, mode='eval')
    except SyntaxError as e:
        raise ParseError(f"Invalid expression: {e.msg}", e.lineno or 1, e.offset or 1) from None
    result = _ExpressionEvaluator().visit(tree)
    logger.debug("Evaluated %s -> %r", source, result)
    return result
