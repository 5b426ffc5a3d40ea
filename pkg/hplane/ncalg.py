"""
Presented noncommutative algebras and their normal forms.

A Presentation lists its generators in normal order (x before y, u before v,
A < B < C < D) and a swap rule that rewrites a disordered adjacent pair
g_j^b g_i^a (j > i) into words that are strictly smaller. Normalization
applies the first available swap, recurses and sums; results are memoized per
word, so every element is stored as a map from exponent vectors to Scalars.

Built-in presentations:
    P_PLANE   x, y            y x -> x y - h y^2
    P_EXT     x, y^{+-1}      y^b x -> x y^b - b h y^(b+1), b any integer
    P_UV      u, v^{+-1}      v^b u -> u v^b + 2 h b v^b
    P_PLANE2  x, y            same rule as P_PLANE, coefficients may carry h'

Example:
    >>> from hplane.ncalg import P_PLANE
    >>> x, y = P_PLANE.gens()
    >>> str(y * y * x)
    'x*y^2 - 2h*y^3'
"""

import logging
import random
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import AlgebraError, ScalarError
from .scalar import H, ONE, ZERO, Scalar, ScalarLike, format_term, join_terms

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]
Monomial = Tuple[int, ...]
Replacement = List[Tuple[Word, Scalar]]
SwapRule = Callable[[int, int, int, int], Replacement]

MAX_EXPONENT = 2 ** 31 - 1


class Generator:
    """A named generator with an invertibility flag."""

    __slots__ = ("name", "invertible")

    def __init__(self, name: str, invertible: bool = False):
        self.name = name
        self.invertible = invertible

    def __repr__(self) -> str:
        suffix = "^{+-1}" if self.invertible else ""
        return f"{self.name}{suffix}"


class Presentation:
    """
    An algebra given by ordered generators and a terminating swap rule.

    Presentations are compared by identity: two presentations built from the
    same data are still different algebras.
    """

    def __init__(self, name: str, generators: Sequence[Generator], swap: SwapRule):
        """
        Initialize a presentation.

        Args:
            name: Display name used in error messages
            generators: Generators in normal order
            swap: Callable swap(j, b, i, a) rewriting g_j^b g_i^a (j > i) into a
                list of (word, coefficient) pairs, each word smaller in the
                disorder measure
        """
        self.name = name
        self.generators = list(generators)
        self.swap = swap
        self._index = {g.name: k for k, g in enumerate(self.generators)}
        self._cache: Dict[Word, Dict[Monomial, Scalar]] = {}

    def __repr__(self) -> str:
        return f"Presentation({self.name}: {', '.join(map(repr, self.generators))})"

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as e:
            raise AlgebraError(f"unknown generator '{name}' in {self.name}") from e

    def is_invertible(self, name: str) -> bool:
        return self.generators[self.index(name)].invertible

    # -- element constructors -------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return self.scalar(ONE)

    def scalar(self, value: ScalarLike) -> "AlgebraElement":
        return AlgebraElement(self, {(0,) * self.rank: Scalar.coerce(value)})

    def gen(self, name: str, exponent: int = 1) -> "AlgebraElement":
        return self.word([(name, exponent)])

    def gens(self) -> List["AlgebraElement"]:
        return [self.gen(g.name) for g in self.generators]

    def monomial(self, exponents: Sequence[int], coefficient: ScalarLike = 1) -> "AlgebraElement":
        """Element for an exponent vector that is already in normal order."""
        word = tuple((k, e) for k, e in enumerate(exponents) if e)
        return AlgebraElement(self, self.normalize_word(word)) * Scalar.coerce(coefficient)

    def word(self, letters: Iterable[Tuple[Union[str, int], int]],
             coefficient: ScalarLike = 1) -> "AlgebraElement":
        """
        Normalize a word given as (generator, exponent) pairs.

        Args:
            letters: Generators by name or index, with integer exponents
            coefficient: Scalar multiplying the word

        Returns:
            The normal form of the word

        Raises:
            AlgebraError: If a non-invertible generator has a negative exponent
        """
        word = tuple(
            (self.index(g) if isinstance(g, str) else int(g), int(e)) for g, e in letters
        )
        return AlgebraElement(self, self.normalize_word(word)) * Scalar.coerce(coefficient)

    # -- normal form ----------------------------------------------------

    def _compact(self, word: Word) -> Word:
        out: List[Letter] = []
        for g, e in word:
            if abs(e) > MAX_EXPONENT:
                raise AlgebraError(f"exponent overflow for {self.generators[g].name}")
            if e < 0 and not self.generators[g].invertible:
                raise AlgebraError(
                    f"{self.generators[g].name} is not invertible in {self.name}"
                )
            if out and out[-1][0] == g:
                e += out.pop()[1]
            if e:
                out.append((g, e))
        return tuple(out)

    def normalize_word(self, word: Word) -> Dict[Monomial, Scalar]:
        """Normal form of a word as a map from exponent vectors to scalars."""
        word = self._compact(word)
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        for k in range(len(word) - 1):
            (j, b), (i, a) = word[k], word[k + 1]
            if j > i:
                break
        else:
            exponents = [0] * self.rank
            for g, e in word:
                exponents[g] = e
            result = {tuple(exponents): ONE}
            self._cache[word] = result
            return result

        result: Dict[Monomial, Scalar] = {}
        for replacement, coeff in self.swap(j, b, i, a):
            sub = word[:k] + tuple(replacement) + word[k + 2:]
            for mono, c in self.normalize_word(sub).items():
                result[mono] = result.get(mono, ZERO) + coeff * c
        result = {m: c for m, c in result.items() if c}
        self._cache[word] = result
        if len(self._cache) % 5000 == 0:
            logger.debug("%s: %d words memoized", self.name, len(self._cache))
        return result

    def random_word(self, rng: random.Random, max_length: int = 8,
                    exponent_range: Tuple[int, int] = (-3, 3)) -> Word:
        """Random word respecting invertibility (zero exponents skipped)."""
        lo, hi = exponent_range
        word = []
        for _ in range(rng.randint(1, max_length)):
            g = rng.randrange(self.rank)
            low = lo if self.generators[g].invertible else max(1, lo)
            e = 0
            while e == 0:
                e = rng.randint(low, max(hi, 1))
            word.append((g, e))
        return tuple(word)

    def random_element(self, rng: random.Random, terms: int = 3, max_length: int = 4,
                       exponent_range: Tuple[int, int] = (-2, 2)) -> "AlgebraElement":
        """Random sum of small words with small integer coefficients."""
        total = self.zero()
        for _ in range(terms):
            coeff = Scalar.const(rng.randint(-3, 3)) + Scalar.monomial(1, 0, rng.randint(-2, 2))
            total = total + self.word(self.random_word(rng, max_length, exponent_range), coeff)
        return total


class AlgebraElement:
    """Immutable element of a presented algebra in normal form."""

    __slots__ = ("algebra", "_terms", "_hash")

    def __init__(self, algebra: Presentation, terms: Mapping[Monomial, Scalar]):
        self.algebra = algebra
        self._terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        return dict(self._terms)

    def _check(self, other: "AlgebraElement") -> None:
        if other.algebra is not self.algebra:
            raise AlgebraError(
                f"algebra mismatch: {self.algebra.name} and {other.algebra.name}"
            )

    def _lift(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        return self.algebra.scalar(other)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(not any(m) for m in self._terms)

    def scalar_value(self) -> Scalar:
        """The coefficient of 1; raises if the element is not a scalar."""
        if not self.is_scalar():
            raise AlgebraError(f"{self} is not a scalar")
        return self._terms.get((0,) * self.algebra.rank, ZERO)

    def coefficient(self, exponents: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exponents), ZERO)

    def __add__(self, other) -> "AlgebraElement":
        try:
            other = self._lift(other)
        except ScalarError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, ZERO) + c
        return AlgebraElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "AlgebraElement":
        try:
            other = self._lift(other)
        except ScalarError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "AlgebraElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, (Scalar, int, Fraction)):
            s = Scalar.coerce(other)
            return AlgebraElement(self.algebra, {m: c * s for m, c in self._terms.items()})
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        alg = self.algebra
        out: Dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            left = tuple((g, e) for g, e in enumerate(m1) if e)
            for m2, c2 in other._terms.items():
                word = left + tuple((g, e) for g, e in enumerate(m2) if e)
                coeff = c1 * c2
                for m, c in alg.normalize_word(word).items():
                    out[m] = out.get(m, ZERO) + coeff * c
        return AlgebraElement(alg, out)

    def __rmul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return other.__mul__(self)
        s = Scalar.coerce(other)
        return AlgebraElement(self.algebra, {m: s * c for m, c in self._terms.items()})

    def __truediv__(self, other: ScalarLike) -> "AlgebraElement":
        return self * Scalar.coerce(other).inverse()

    def inverse(self) -> "AlgebraElement":
        """
        Inverse of a single invertible monomial with a unit coefficient.

        Raises:
            AlgebraError: If the element has no inverse in the presentation
        """
        if len(self._terms) != 1:
            raise AlgebraError(f"{self} is not invertible in {self.algebra.name}")
        ((mono, coeff),) = self._terms.items()
        try:
            inv_coeff = coeff.inverse()
        except ScalarError as e:
            raise AlgebraError(f"{self} is not invertible: {str(e)}") from e
        letters = [(g, -e) for g, e in reversed(list(enumerate(mono))) if e]
        return self.algebra.word(letters, inv_coeff)

    def __pow__(self, exponent: int) -> "AlgebraElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {m: fn(c) for m, c in self._terms.items()})

    def limit_at_zero(self) -> "AlgebraElement":
        return self.map_coefficients(lambda c: c.limit_at_zero())

    def substitute_hp(self, factor: Scalar) -> "AlgebraElement":
        return self.map_coefficients(lambda c: c.substitute_hp(factor))

    def degree(self) -> int:
        return max((sum(abs(e) for e in m) for m in self._terms), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Scalar, int)):
            other = self.algebra.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.algebra), frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"AlgebraElement({self.algebra.name}: {self})"

    def monomial_text(self, mono: Monomial) -> str:
        parts = []
        for g, e in zip(self.algebra.generators, mono):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        pieces = [
            format_term(c, self.monomial_text(m))
            for m, c in sorted(self._terms.items(), reverse=True)
        ]
        return join_terms(pieces)

    def is_single_term(self) -> bool:
        return len(self._terms) == 1


class Homomorphism:
    """Substitution homomorphism defined by images of the generators."""

    def __init__(self, source: Presentation, target: Presentation,
                 images: Mapping[str, AlgebraElement],
                 inverse_images: Optional[Mapping[str, AlgebraElement]] = None):
        """
        Args:
            source: Presentation whose generators are substituted
            target: Presentation holding the images
            images: Image of every source generator
            inverse_images: Images of the inverses of invertible generators
        """
        self.source = source
        self.target = target
        self.images = [images[g.name] for g in source.generators]
        self.inverse_images = dict(inverse_images or {})
        self._powers: Dict[Letter, AlgebraElement] = {}

    def _power(self, g: int, e: int) -> AlgebraElement:
        key = (g, e)
        if key not in self._powers:
            if e >= 0:
                base = self.images[g]
            else:
                name = self.source.generators[g].name
                base = self.inverse_images.get(name) or self.images[g].inverse()
            self._powers[key] = base ** abs(e)
        return self._powers[key]

    def __call__(self, element: AlgebraElement) -> AlgebraElement:
        if element.algebra is not self.source:
            raise AlgebraError(
                f"algebra mismatch: {element.algebra.name} and {self.source.name}"
            )
        total = self.target.zero()
        for mono, coeff in element.terms.items():
            value = self.target.scalar(coeff)
            for g, e in enumerate(mono):
                if e:
                    value = value * self._power(g, e)
            total = total + value
        return total


# -- swap rule builders ---------------------------------------------------


def plane_swap(j: int, b: int, i: int, a: int) -> Replacement:
    """y^b x^a -> (x y^b - b h y^(b+1)) x^(a-1), valid for every integer b."""
    return [
        (((0, 1), (1, b), (0, a - 1)), ONE),
        (((1, b + 1), (0, a - 1)), -b * H),
    ]


def uv_swap(j: int, b: int, i: int, a: int) -> Replacement:
    """v^b u^a -> (u v^b + 2 h b v^b) u^(a-1)."""
    return [
        (((0, 1), (1, b), (0, a - 1)), ONE),
        (((1, b), (0, a - 1)), 2 * b * H),
    ]


def letter_swap(rules: Mapping[Tuple[int, int], Replacement]) -> SwapRule:
    """
    Build a swap rule from single-letter rules g_j g_i -> sum of words.

    Powers are peeled one letter at a time:
    g_j^b g_i^a -> g_j^(b-1) (g_j g_i) g_i^(a-1).
    """

    def swap(j: int, b: int, i: int, a: int) -> Replacement:
        out = []
        for word, coeff in rules[(j, i)]:
            out.append((((j, b - 1),) + tuple(word) + ((i, a - 1),), coeff))
        return out

    return swap


def _shift(replacement: Replacement, offset: int) -> Replacement:
    return [(tuple((g + offset, e) for g, e in word), c) for word, c in replacement]


def tensor_presentation(name: str, left: Presentation, right: Presentation) -> Presentation:
    """Presentation of left (x) right: generators of different factors commute."""
    n = left.rank

    def swap(j: int, b: int, i: int, a: int) -> Replacement:
        if j < n:
            return left.swap(j, b, i, a)
        if i >= n:
            return _shift(right.swap(j - n, b, i - n, a), n)
        return [(((i, a), (j, b)), ONE)]

    return Presentation(name, left.generators + right.generators, swap)


# -- module level convenience functions -------------------------------------


def normalize(word: Iterable[Tuple[Union[str, int], int]], algebra: Presentation,
              coefficient: ScalarLike = 1) -> AlgebraElement:
    """Normal form of ``coefficient * word`` in ``algebra``."""
    return algebra.word(word, coefficient)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """[a, b] = ab - ba."""
    return a * b - b * a


P_PLANE = Presentation("plane", [Generator("x"), Generator("y")], plane_swap)
P_EXT = Presentation("ext", [Generator("x"), Generator("y", invertible=True)], plane_swap)
P_UV = Presentation("uv", [Generator("u"), Generator("v", invertible=True)], uv_swap)
P_PLANE2 = Presentation("plane2", [Generator("x"), Generator("y")], plane_swap)


def uv_generators() -> Tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """u, v and w = -1/2 (u^2 - 2hu + 1 + 2h^2) v^-1 in P_UV."""
    u, v = P_UV.gens()
    w = (u * u - 2 * H * u + 1 + 2 * H * H) * v.inverse() * Fraction(-1, 2)
    return u, v, w


def ext_uvw() -> Tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
    """u, v, w expressed in P_EXT."""
    u, v, w = uv_generators()
    return embed_uv(u), embed_uv(v), embed_uv(w)


_EMBED: Optional[Homomorphism] = None


def embed_uv(element: AlgebraElement) -> AlgebraElement:
    """
    Map P_UV into P_EXT by u -> x y^-1 + h/2, v -> y^-2.

    Args:
        element: Element of P_UV

    Returns:
        The image in P_EXT
    """
    global _EMBED
    if _EMBED is None:
        x, y = P_EXT.gens()
        y_inv = y.inverse()
        _EMBED = Homomorphism(
            P_UV,
            P_EXT,
            {"u": x * y_inv + H / 2, "v": y_inv * y_inv},
            inverse_images={"v": y * y},
        )
    return _EMBED(element)


def confluence_failures(algebra: Presentation, rng: random.Random, count: int = 1000,
                        max_length: int = 6,
                        exponent_range: Tuple[int, int] = (-3, 3)) -> List[Word]:
    """
    Random words whose normal form depends on the reduction order.

    Every word is normalized whole and as the product of the normal forms of
    a random split; a word is returned when the two disagree.

    Args:
        algebra: Presentation under test
        rng: Seeded random source
        count: Number of random words
        max_length: Maximum number of letters per word
        exponent_range: Exponent bounds (negative only for invertible generators)

    Returns:
        The failing words (empty when no order dependence was found)
    """
    failures = []
    for _ in range(count):
        word = algebra.random_word(rng, max_length, exponent_range)
        k = rng.randint(0, len(word))
        whole = AlgebraElement(algebra, algebra.normalize_word(word))
        left = AlgebraElement(algebra, algebra.normalize_word(word[:k]))
        right = AlgebraElement(algebra, algebra.normalize_word(word[k:]))
        if whole != left * right:
            failures.append(word)
    if failures:
        logger.debug("%s: %d of %d words reduce order-dependently", algebra.name,
                     len(failures), count)
    return failures
