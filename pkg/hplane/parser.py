"""
Expression front end for the hplane engine.

Expressions are parsed by a Pratt parser into a small immutable AST and then
evaluated in a named context that fixes the algebra and the calculi.

Grammar:
    expr    := expr ('+' | '-') expr
             | expr ('*' | '/' | '(x)') expr      juxtaposition means '*'
             | '-' expr
             | expr '^' ['-'] INTEGER
             | '[' expr ',' expr ']'              commutator ab - ba
             | '(' expr ')' | INTEGER | IDENT

    '^' binds tighter than unary minus, which binds tighter than '*', '/' and
    '(x)', which bind tighter than '+' and '-'. Binary operators associate to
    the left. ``(x)`` in operand position is the generator x in parentheses.

Contexts:
    plane    x, y, xi, eta, kappa
    plane2   x, y, xi, eta, kappa, hp
    ext      x, y^{+-1}, u, v, w, xi, eta, kappa (xi/eta calculus), t1, t2 (frame)
    ext3     x, y^{+-1}, u, v, w, t1, t2, t3
    uv       u, v^{+-1}, w
    qgroup   A, B, C, D, x, y, xi, eta
    h and i are available everywhere.

Example:
    >>> from hplane.parser import reduce_expr
    >>> str(reduce_expr("y*x", "plane"))
    'x*y - h*y^2'
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple, Union

from .calculus import (
    C_EXT2,
    C_EXT3,
    C_EXT_XY,
    C_PLANE,
    C_PLANE2,
    FormElement,
    TensorElement,
    tensor,
)
from .exceptions import ExprParseError, HPlaneError
from .geometry import kappa
from .ncalg import P_EXT, P_PLANE, P_PLANE2, P_UV, AlgebraElement, Presentation, ext_uvw, uv_generators
from .qgroup import P_QPLANE, qplane_calculus
from .scalar import H, HP, I

logger = logging.getLogger(__name__)

Token = Tuple[str, str, int]
Value = Union[AlgebraElement, FormElement, TensorElement]

SINGLE_CHAR_TOKENS = {
    "+": "PLUS",
    "-": "MINUS",
    "*": "TIMES",
    "/": "DIVIDE",
    "^": "CARET",
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACKET",
    "]": "RBRACKET",
    ",": "COMMA",
}

PRECEDENCE = {
    "PLUS": 10,
    "MINUS": 10,
    "TIMES": 20,
    "DIVIDE": 20,
    "TENSOR": 20,
    "IMPLICIT": 20,
    "PREFIX": 25,
    "CARET": 30,
}

OPERATORS = {"PLUS": "+", "MINUS": "-", "TIMES": "*", "DIVIDE": "/", "TENSOR": "(x)"}

# tokens that can start an operand (juxtaposition)
OPERAND_START = ("NUMBER", "IDENT", "LPAREN", "LBRACKET")


def tokenize(text: str) -> List[Token]:
    """
    Split an expression into (TYPE, value, position) tuples ending with EOF.

    Raises:
        ExprParseError: On a character outside the grammar
    """
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("NUMBER", text[i:j], i))
            i = j
        elif c.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("IDENT", text[i:j], i))
            i = j
        elif text.startswith("(x)", i):
            tokens.append(("TENSOR", "(x)", i))
            i += 3
        elif c in SINGLE_CHAR_TOKENS:
            tokens.append((SINGLE_CHAR_TOKENS[c], c, i))
            i += 1
        else:
            raise ExprParseError(f"unexpected character '{c}'", i)
    tokens.append(("EOF", "", len(text)))
    return tokens


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Symbol:
    name: str
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    position: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Commutator:
    left: "Expr"
    right: "Expr"
    position: int = field(default=0, compare=False)


Expr = Union[Num, Symbol, Neg, BinOp, Pow, Commutator]


# -- contexts -------------------------------------------------------------------


@dataclass(frozen=True)
class ParseContext:
    """Names available in one context and how to build their values."""

    name: str
    algebra: Presentation
    symbols: Dict[str, Callable[[], Value]]
    invertible: FrozenSet[str] = frozenset()


# h, hp and i are units of the coefficient ring
SCALAR_UNITS = frozenset({"h", "hp", "i"})


def _scalar_symbols(algebra: Presentation) -> Dict[str, Callable[[], Value]]:
    return {"h": lambda: algebra.scalar(H), "i": lambda: algebra.scalar(I)}


def _plane_context(name, algebra, calculus, hp=False, with_kappa=True) -> ParseContext:
    symbols = _scalar_symbols(algebra)
    symbols.update({
        "x": lambda: algebra.gen("x"),
        "y": lambda: algebra.gen("y"),
        "xi": lambda: calculus.basis("xi"),
        "eta": lambda: calculus.basis("eta"),
    })
    if with_kappa:
        symbols["kappa"] = lambda: kappa(calculus)
    if hp:
        symbols["hp"] = lambda: algebra.scalar(HP)
    return ParseContext(name, algebra, symbols, SCALAR_UNITS)


def _ext_symbols(frame) -> Dict[str, Callable[[], Value]]:
    symbols = _scalar_symbols(P_EXT)
    symbols.update({
        "x": lambda: P_EXT.gen("x"),
        "y": lambda: P_EXT.gen("y"),
        "u": lambda: ext_uvw()[0],
        "v": lambda: ext_uvw()[1],
        "w": lambda: ext_uvw()[2],
    })
    for k, name in enumerate(frame.cogenerators):
        symbols[name] = (lambda k=k: frame.basis(k))
    return symbols


@lru_cache(maxsize=None)
def get_context(name: str) -> ParseContext:
    """
    Look up a parse context by name.

    Raises:
        ExprParseError: For an unknown context name
    """
    if name == "plane":
        return _plane_context("plane", P_PLANE, C_PLANE)
    if name == "plane2":
        return _plane_context("plane2", P_PLANE2, C_PLANE2, hp=True)
    if name == "ext":
        symbols = _ext_symbols(C_EXT2)
        symbols.update({
            "xi": lambda: C_EXT_XY.basis("xi"),
            "eta": lambda: C_EXT_XY.basis("eta"),
            "kappa": lambda: kappa(C_EXT_XY),
        })
        return ParseContext("ext", P_EXT, symbols, SCALAR_UNITS | {"y", "v"})
    if name == "ext3":
        return ParseContext("ext3", P_EXT, _ext_symbols(C_EXT3), SCALAR_UNITS | {"y", "v"})
    if name == "uv":
        symbols = _scalar_symbols(P_UV)
        symbols.update({
            "u": lambda: uv_generators()[0],
            "v": lambda: uv_generators()[1],
            "w": lambda: uv_generators()[2],
        })
        return ParseContext("uv", P_UV, symbols, SCALAR_UNITS | {"v"})
    if name == "qgroup":
        calc = qplane_calculus()
        ctx = _plane_context("qgroup", P_QPLANE, calc, with_kappa=False)
        for g in "ABCD":
            ctx.symbols[g] = (lambda g=g: P_QPLANE.gen(g))
        return ctx
    raise ExprParseError(f"unknown context '{name}'")


CONTEXTS = ("plane", "plane2", "ext", "ext3", "uv", "qgroup")


# -- parser --------------------------------------------------------------------


class PrattParser:
    """Precedence-climbing parser over the token list."""

    def __init__(self, tokens: List[Token], context: ParseContext):
        """
        Initialize the parser.

        Args:
            tokens: Output of tokenize()
            context: Names allowed in the expression
        """
        self.tokens = tokens
        self.context = context
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def current(self) -> Token:
        return self.tokens[self.pos]

    def consume(self, expected_type: str) -> Token:
        token = self.tokens[self.pos]
        if token[0] != expected_type:
            found = token[1] or "end of input"
            raise ExprParseError(f"expected {expected_type} but got '{found}'", token[2])
        self.pos += 1
        return token

    def parse(self) -> Expr:
        expr = self.parse_expression(0)
        if self.peek() != "EOF":
            _, value, position = self.current()
            raise ExprParseError(f"unexpected '{value}'", position)
        return expr

    def parse_expression(self, precedence: int) -> Expr:
        left = self.parse_prefix()
        while True:
            token_type = self.peek()
            if token_type in OPERAND_START:
                token_type = "IMPLICIT"
            if token_type not in PRECEDENCE or token_type == "PREFIX":
                break
            if precedence >= PRECEDENCE[token_type]:
                break
            left = self.parse_infix(left, token_type)
        return left

    def parse_prefix(self) -> Expr:
        token_type, value, position = self.current()
        if token_type == "NUMBER":
            self.pos += 1
            return Num(int(value), position)
        if token_type == "IDENT":
            self.pos += 1
            if value not in self.context.symbols:
                raise ExprParseError(
                    f"unknown symbol '{value}' in context '{self.context.name}'", position
                )
            return Symbol(value, position)
        if token_type == "TENSOR":
            # "(x)" in operand position is a parenthesized generator
            self.pos += 1
            if "x" not in self.context.symbols:
                raise ExprParseError(f"unknown symbol 'x' in context '{self.context.name}'",
                                     position + 1)
            return Symbol("x", position + 1)
        if token_type == "MINUS":
            self.pos += 1
            return Neg(self.parse_expression(PRECEDENCE["PREFIX"]), position)
        if token_type == "LPAREN":
            self.pos += 1
            inner = self.parse_expression(0)
            self.consume("RPAREN")
            return inner
        if token_type == "LBRACKET":
            self.pos += 1
            left = self.parse_expression(0)
            self.consume("COMMA")
            right = self.parse_expression(0)
            self.consume("RBRACKET")
            return Commutator(left, right, position)
        found = value or "end of input"
        raise ExprParseError(f"expected an operand but got '{found}'", position)

    def parse_infix(self, left: Expr, token_type: str) -> Expr:
        _, _, position = self.current()
        if token_type == "CARET":
            self.pos += 1
            return Pow(left, self.parse_exponent(left, position), position)
        if token_type == "IMPLICIT":
            right = self.parse_expression(PRECEDENCE["IMPLICIT"])
            return BinOp("*", left, right, position)
        self.pos += 1
        right = self.parse_expression(PRECEDENCE[token_type])
        return BinOp(OPERATORS[token_type], left, right, position)

    def parse_exponent(self, base: Expr, position: int) -> int:
        parens = self.peek() == "LPAREN"
        if parens:
            self.pos += 1
        sign = 1
        if self.peek() == "MINUS":
            self.pos += 1
            sign = -1
        _, digits, _ = self.consume("NUMBER")
        if parens:
            self.consume("RPAREN")
        exponent = sign * int(digits)
        if exponent < 0 and isinstance(base, Symbol) and base.name not in self.context.invertible:
            raise ExprParseError(
                f"'{base.name}' is not invertible in context '{self.context.name}'", position
            )
        return exponent


def parse_expr(text: str, context: str = "plane") -> Expr:
    """
    Parse an expression for the named context.

    Args:
        text: Expression source
        context: One of CONTEXTS

    Returns:
        The AST

    Raises:
        ExprParseError: With the character position of the problem
    """
    if not isinstance(text, str):
        raise ExprParseError("Input must be a string")
    if not text.strip():
        raise ExprParseError("Cannot parse an empty expression")
    ctx = get_context(context)
    return PrattParser(tokenize(text), ctx).parse()


# -- printing --------------------------------------------------------------------


def _precedence(node: Expr) -> int:
    if isinstance(node, BinOp):
        return PRECEDENCE["PLUS"] if node.op in "+-" else PRECEDENCE["TIMES"]
    if isinstance(node, Neg):
        return PRECEDENCE["PREFIX"]
    if isinstance(node, Pow):
        return PRECEDENCE["CARET"]
    return 100


def print_expr(node: Expr) -> str:
    """Render an AST so that parsing the text gives back an equal AST."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Commutator):
        return f"[{print_expr(node.left)}, {print_expr(node.right)}]"
    if isinstance(node, Pow):
        base = print_expr(node.base)
        if _precedence(node.base) <= PRECEDENCE["CARET"]:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Neg):
        inner = print_expr(node.operand)
        if _precedence(node.operand) < PRECEDENCE["PREFIX"]:
            inner = f"({inner})"
        return f"-{inner}"
    prec = _precedence(node)
    left, right = print_expr(node.left), print_expr(node.right)
    if _precedence(node.left) < prec:
        left = f"({left})"
    if _precedence(node.right) <= prec:
        right = f"({right})"
    if node.op in "+-":
        return f"{left} {node.op} {right}"
    if node.op == "(x)":
        return f"{left} (x) {right}"
    return f"{left}{node.op}{right}"


# -- evaluation ------------------------------------------------------------------


def _is_function(value: Value) -> bool:
    return isinstance(value, AlgebraElement)


def _combine(op: str, a: Value, b: Value, position: int) -> Value:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if not (_is_function(b) and b.is_scalar()):
            raise ExprParseError("division by a non-scalar", position)
        return a * b.scalar_value().inverse()
    if op == "(x)":
        if _is_function(a) or _is_function(b):
            raise ExprParseError("tensor factors must be forms", position)
        return tensor(a, b)
    raise ExprParseError(f"unknown operator '{op}'", position)


class Evaluator:
    """Evaluate an AST to an algebra element, form or tensor."""

    def __init__(self, context: ParseContext):
        self.context = context

    def evaluate(self, node: Expr) -> Value:
        try:
            return self._eval(node)
        except ExprParseError:
            raise
        except HPlaneError as e:
            raise ExprParseError(str(e), node_position(node)) from e
        except Exception as e:
            raise ExprParseError(f"Failed to evaluate expression: {str(e)}") from e

    def _eval(self, node: Expr) -> Value:
        algebra = self.context.algebra
        if isinstance(node, Num):
            return algebra.scalar(node.value)
        if isinstance(node, Symbol):
            return self.context.symbols[node.name]()
        if isinstance(node, Neg):
            return -self._eval(node.operand)
        if isinstance(node, Pow):
            base = self._eval(node.base)
            if not _is_function(base):
                raise ExprParseError("only functions can be raised to a power", node.position)
            return base ** node.exponent
        if isinstance(node, Commutator):
            a, b = self._eval(node.left), self._eval(node.right)
            return a * b - b * a
        a, b = self._eval(node.left), self._eval(node.right)
        result = _combine(node.op, a, b, node.position)
        if result is NotImplemented:
            raise ExprParseError(f"cannot apply '{node.op}' to these operands", node.position)
        return result


def node_position(node: Expr) -> Optional[int]:
    return getattr(node, "position", None)


def evaluate(node: Expr, context: str = "plane") -> Value:
    """Evaluate an AST in the named context."""
    return Evaluator(get_context(context)).evaluate(node)


def reduce_expr(text: str, context: str = "plane") -> Value:
    """
    Parse and evaluate in one step; the result is in normal form.

    Raises:
        ExprParseError: On syntax, symbol, invertibility or type errors
    """
    node = parse_expr(text, context)
    logger.debug("parsed %r in %s as %s", text, context, print_expr(node))
    return evaluate(node, context)
