"""
Differential calculi over presented algebras.

Forms are kept in right-coefficient normal form: every term is a basis form
followed by an algebra coefficient, ``sum theta^K * a_K``. Moving an algebra
element to the right of a cogenerator uses the calculus swap rules, one
letter at a time, memoized per (monomial, cogenerator).

Two kinds of calculus are supported:

- coordinate calculi, where the cogenerators are the differentials of the
  algebra generators (xi = dx, eta = dy) and d is the Leibniz extension;
- frame calculi, where the cogenerators theta^i commute with the algebra,
  d f = sum theta^i e_i(f) with inner derivations e_i = ad lambda_i, and
  d theta^i = -1/2 C^i_jk theta^j theta^k.

Built-in calculi: C_PLANE, C_PLANE2, C_EXT_XY, C_EXT2, C_EXT3 (see the
factory functions at the end of this module).

Example:
    >>> from hplane.calculus import C_PLANE
    >>> x, y = C_PLANE.algebra.gens()
    >>> str(x * C_PLANE.basis("xi"))
    'xi*(x - h*y) + eta*(h*x + h^2*y)'
"""

import logging
import random
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import CalculusError
from .ncalg import (
    P_EXT,
    P_PLANE,
    P_PLANE2,
    AlgebraElement,
    Monomial,
    Presentation,
    commutator,
    ext_uvw,
)
from .scalar import H, HP, ONE, ZERO, Scalar, ScalarLike

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]
FormTerms = Dict[Key, AlgebraElement]
# (generator index, +1 or -1, cogenerator index) -> {cogenerator: coefficient}
SwapTable = Dict[Tuple[int, int, int], Dict[int, AlgebraElement]]


class Derivation:
    """
    A derivation of a presented algebra.

    Either inner (e = ad lambda, e(f) = lambda f - f lambda) or tabulated by its
    values on the generators and extended by the Leibniz rule.
    """

    def __init__(self, algebra: Presentation, name: str,
                 inner: Optional[AlgebraElement] = None,
                 table: Optional[Mapping[str, AlgebraElement]] = None):
        """
        Args:
            algebra: Presentation the derivation acts on
            name: Display name (e1, e2, ...)
            inner: lambda for an inner derivation
            table: Images of the generators for a tabulated derivation
        """
        if (inner is None) == (table is None):
            raise CalculusError("a derivation is either inner or tabulated")
        self.algebra = algebra
        self.name = name
        self.inner = inner
        self.table = dict(table or {})
        self._cache: Dict[Monomial, AlgebraElement] = {}

    @classmethod
    def ad(cls, element: AlgebraElement, name: str) -> "Derivation":
        return cls(element.algebra, name, inner=element)

    def __repr__(self) -> str:
        return f"Derivation({self.name})"

    def _letter(self, g: int, sign: int) -> AlgebraElement:
        gen = self.algebra.generators[g]
        image = self.table.get(gen.name, self.algebra.zero())
        if sign > 0:
            return image
        inv = self.algebra.gen(gen.name, -1)
        return -(inv * image * inv)

    def _monomial(self, mono: Monomial) -> AlgebraElement:
        cached = self._cache.get(mono)
        if cached is not None:
            return cached
        letters = _letters(mono)
        alg = self.algebra
        total = alg.zero()
        for k, (g, sign) in enumerate(letters):
            prefix = alg.word([(p, s) for p, s in letters[:k]])
            suffix = alg.word([(p, s) for p, s in letters[k + 1:]])
            total = total + prefix * self._letter(g, sign) * suffix
        self._cache[mono] = total
        return total

    def __call__(self, f: AlgebraElement) -> AlgebraElement:
        if self.inner is not None:
            return commutator(self.inner, f)
        total = self.algebra.zero()
        for mono, coeff in f.terms.items():
            total = total + self._monomial(mono) * coeff
        return total


def _letters(mono: Monomial) -> List[Tuple[int, int]]:
    out = []
    for g, e in enumerate(mono):
        sign = 1 if e > 0 else -1
        out.extend([(g, sign)] * abs(e))
    return out


class Calculus:
    """A first order differential calculus with degree-2 forms."""

    def __init__(self, name: str, algebra: Presentation, cogenerators: Sequence[str],
                 wedge: Mapping[Tuple[int, int], Mapping[int, ScalarLike]],
                 wedge_basis: Sequence[Tuple[int, int]],
                 swap_rules: Optional[SwapTable] = None,
                 differentials: Optional[Mapping[str, int]] = None,
                 lambdas: Optional[Sequence[AlgebraElement]] = None,
                 structure: Optional[Mapping[Tuple[int, int, int], ScalarLike]] = None,
                 representations: Optional[Mapping[int, Sequence[Tuple[AlgebraElement, AlgebraElement]]]] = None,
                 constants: Sequence[str] = (),
                 check: bool = True):
        """
        Initialize a calculus.

        Args:
            name: Display name
            algebra: Base presentation
            cogenerators: Basis 1-form names in order
            wedge: theta^i theta^j -> {wedge basis index: scalar}
            wedge_basis: Representative cogenerator pair of each 2-form basis element
            swap_rules: Coordinate calculi only: g^(+-1) theta^c in right normal form
            differentials: Coordinate calculi only: generator name -> cogenerator index
            lambdas: Frame calculi only: lambda_i with e_i = ad lambda_i
            structure: Frame calculi only: C^i_jk keyed (i, j, k)
            representations: theta^c = sum f dg, used to evaluate on derivations
            constants: Coordinate calculi only: generators with zero differential
            check: Run the construction consistency checks
        """
        self.name = name
        self.algebra = algebra
        self.cogenerators = list(cogenerators)
        self.wedge_table = {
            pair: {b: Scalar.coerce(s) for b, s in row.items() if Scalar.coerce(s)}
            for pair, row in wedge.items()
        }
        self.wedge_basis = list(wedge_basis)
        self.is_frame = lambdas is not None
        self.swap_rules = dict(swap_rules or {})
        self.differentials = dict(differentials or {})
        self.constants = set(constants)
        self.lambdas = list(lambdas or [])
        self.structure = {k: Scalar.coerce(v) for k, v in (structure or {}).items()}
        self.frame = [
            Derivation.ad(lam, f"e{i + 1}") for i, lam in enumerate(self.lambdas)
        ]
        self._left_cache: Dict[Tuple[Monomial, int], Dict[int, AlgebraElement]] = {}
        self._d_cache: Dict[Monomial, "FormElement"] = {}
        self.representations = {}
        if representations:
            self.representations = {c: list(rep) for c, rep in representations.items()}
        elif not self.is_frame:
            for gen, c in self.differentials.items():
                self.representations[c] = [(algebra.one(), algebra.gen(gen))]
        if check:
            self.check_consistency()

    def __repr__(self) -> str:
        return f"Calculus({self.name} over {self.algebra.name})"

    @property
    def dimension(self) -> int:
        return len(self.cogenerators)

    def index(self, name: Union[str, int]) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.cogenerators.index(name)
        except ValueError as e:
            raise CalculusError(f"unknown cogenerator '{name}' in {self.name}") from e

    def basis2_name(self, b: int) -> str:
        p, q = self.wedge_basis[b]
        return f"{self.cogenerators[p]}*{self.cogenerators[q]}"

    # -- constructors -------------------------------------------------

    def zero(self, degree: int = 1) -> "FormElement":
        return FormElement(self, degree, {})

    def function(self, f: AlgebraElement) -> "FormElement":
        return FormElement(self, 0, {(): f})

    def basis(self, name: Union[str, int], coefficient=None) -> "FormElement":
        """The basis 1-form ``name`` times an optional right coefficient."""
        coeff = self._coefficient(coefficient)
        return FormElement(self, 1, {(self.index(name),): coeff})

    def basis2(self, b: int, coefficient=None) -> "FormElement":
        return FormElement(self, 2, {(b,): self._coefficient(coefficient)})

    def tensor_basis(self, names: Sequence[Union[str, int]], coefficient=None) -> "TensorElement":
        key = tuple(self.index(n) for n in names)
        return TensorElement(self, {key: self._coefficient(coefficient)}, (1,) * len(key))

    def _coefficient(self, value) -> AlgebraElement:
        if value is None:
            return self.algebra.one()
        if isinstance(value, AlgebraElement):
            return value
        return self.algebra.scalar(value)

    # -- moving algebra elements through forms ------------------------

    def _left_letter(self, g: int, sign: int, form: Dict[int, AlgebraElement]) -> Dict[int, AlgebraElement]:
        out: Dict[int, AlgebraElement] = {}
        for c, coeff in form.items():
            rule = self.swap_rules.get((g, sign, c))
            if rule is None:
                raise CalculusError(
                    f"no swap rule for {self.algebra.generators[g].name}^{sign} "
                    f"and {self.cogenerators[c]} in {self.name}"
                )
            for l, r in rule.items():
                out[l] = out.get(l, self.algebra.zero()) + r * coeff
        return {l: r for l, r in out.items() if r}

    def _left_monomial(self, mono: Monomial, c: int) -> Dict[int, AlgebraElement]:
        key = (mono, c)
        cached = self._left_cache.get(key)
        if cached is not None:
            return cached
        if self.is_frame:
            result = {c: self.algebra.monomial(mono)}
        else:
            result = {c: self.algebra.one()}
            for g, sign in reversed(_letters(mono)):
                result = self._left_letter(g, sign, result)
        self._left_cache[key] = result
        return result

    def left_one(self, f: AlgebraElement, c: int) -> Dict[int, AlgebraElement]:
        """f * theta^c as {cogenerator: right coefficient}."""
        out: Dict[int, AlgebraElement] = {}
        for mono, s in f.terms.items():
            for l, r in self._left_monomial(mono, c).items():
                out[l] = out.get(l, self.algebra.zero()) + r * s
        return {l: r for l, r in out.items() if r}

    def _left_tensor(self, f: AlgebraElement, key: Key) -> Dict[Key, AlgebraElement]:
        if not key:
            return {(): f} if f else {}
        out: Dict[Key, AlgebraElement] = {}
        for l, r in self.left_one(f, key[0]).items():
            for rest, c in self._left_tensor(r, key[1:]).items():
                k = (l,) + rest
                out[k] = out.get(k, self.algebra.zero()) + c
        return {k: c for k, c in out.items() if c}

    def _left_two_form(self, f: AlgebraElement, b: int) -> Dict[int, AlgebraElement]:
        p, q = self.wedge_basis[b]
        out: Dict[int, AlgebraElement] = {}
        for l, r in self.left_one(f, p).items():
            for m, s in self.left_one(r, q).items():
                for b2, w in self.wedge_table.get((l, m), {}).items():
                    out[b2] = out.get(b2, self.algebra.zero()) + s * w
        return {b2: c for b2, c in out.items() if c}

    def left_mul(self, f: AlgebraElement, x: Union["FormElement", "TensorElement"]):
        """f * x with all coefficients moved back to the right."""
        if f.algebra is not self.algebra:
            raise CalculusError(f"algebra mismatch: {f.algebra.name} and {self.algebra.name}")
        if isinstance(x, TensorElement):
            out: Dict[Key, AlgebraElement] = {}
            if any(s != 1 for s in x.shape):
                raise CalculusError("left multiplication of mixed tensors is not supported")
            for key, coeff in x.terms.items():
                for k, c in self._left_tensor(f, key).items():
                    out[k] = out.get(k, self.algebra.zero()) + c * coeff
            return TensorElement(self, out, x.shape)
        if x.degree == 0:
            return self.function(f * x.coefficient(()))
        out = {}
        for key, coeff in x.terms.items():
            if x.degree == 1:
                moved = {(l,): r for l, r in self.left_one(f, key[0]).items()}
            else:
                moved = {(b,): r for b, r in self._left_two_form(f, key[0]).items()}
            for k, c in moved.items():
                out[k] = out.get(k, self.algebra.zero()) + c * coeff
        return FormElement(self, x.degree, out)

    # -- exterior algebra ---------------------------------------------

    def wedge(self, a: "FormElement", b: "FormElement") -> "FormElement":
        """
        Wedge product of two forms.

        Raises:
            CalculusError: If the total degree exceeds 2
        """
        if a.degree + b.degree > 2:
            raise CalculusError(f"unsupported degree {a.degree + b.degree}")
        if a.degree == 0:
            return self.left_mul(a.coefficient(()), b)
        if b.degree == 0:
            return a * b.coefficient(())
        out: Dict[Key, AlgebraElement] = {}
        zero = self.algebra.zero()
        for (i,), ai in a.terms.items():
            for (j,), bj in b.terms.items():
                for l, r in self.left_one(ai, j).items():
                    for b2, w in self.wedge_table.get((i, l), {}).items():
                        out[(b2,)] = out.get((b2,), zero) + r * bj * w
        return FormElement(self, 2, out)

    def normalize_form(self, terms: Iterable[Tuple[AlgebraElement, Sequence[Union[str, int]], AlgebraElement]]) -> "FormElement":
        """
        Normalize a formal sum of words f * theta^c1 ... theta^ck * g.

        Args:
            terms: (left coefficient, cogenerators, right coefficient) triples

        Returns:
            The sum in right-coefficient normal form

        Raises:
            CalculusError: If a word has more than two cogenerators
        """
        total: Optional[FormElement] = None
        for left, cogs, right in terms:
            if len(cogs) > 2:
                raise CalculusError(f"unsupported degree {len(cogs)}")
            if not cogs:
                form = self.function(left * right)
            else:
                form = self.basis(cogs[0])
                for c in cogs[1:]:
                    form = self.wedge(form, self.basis(c))
                form = self.left_mul(left, form) * right
            total = form if total is None else total + form
        return total if total is not None else self.zero(0)

    def tensor(self, a: "TensorElement", b: "TensorElement") -> "TensorElement":
        """a (x) b over the algebra: middle coefficients migrate right."""
        a, b = as_tensor(a), as_tensor(b)
        out: Dict[Key, AlgebraElement] = {}
        zero = self.algebra.zero()
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                for k, c in self._left_tensor(ca, kb).items():
                    key = ka + k
                    out[key] = out.get(key, zero) + c * cb
        return TensorElement(self, out, a.shape + b.shape)

    def wedge_projection(self, t: "TensorElement") -> "FormElement":
        """pi: Omega^1 (x) Omega^1 -> Omega^2."""
        t = as_tensor(t)
        if t.shape != (1, 1):
            raise CalculusError(f"wedge projection needs a rank 2 tensor, got shape {t.shape}")
        out: Dict[Key, AlgebraElement] = {}
        for (i, j), coeff in t.terms.items():
            for b, w in self.wedge_table.get((i, j), {}).items():
                out[(b,)] = out.get((b,), self.algebra.zero()) + coeff * w
        return FormElement(self, 2, out)

    def project_first_pair(self, t: "TensorElement") -> "TensorElement":
        """pi_12 on a rank 3 tensor, giving an element of Omega^2 (x) Omega^1."""
        if t.shape != (1, 1, 1):
            raise CalculusError(f"pi_12 needs a rank 3 tensor, got shape {t.shape}")
        out: Dict[Key, AlgebraElement] = {}
        for (i, j, k), coeff in t.terms.items():
            for b, w in self.wedge_table.get((i, j), {}).items():
                out[(b, k)] = out.get((b, k), self.algebra.zero()) + coeff * w
        return TensorElement(self, out, (2, 1))

    # -- exterior derivative ------------------------------------------

    def _d_generator(self, g: int) -> "FormElement":
        name = self.algebra.generators[g].name
        if name in self.constants:
            return self.zero(1)
        if name not in self.differentials:
            raise CalculusError(f"no differential for {name} in {self.name}")
        return self.basis(self.differentials[name])

    def _d_monomial(self, mono: Monomial) -> "FormElement":
        cached = self._d_cache.get(mono)
        if cached is not None:
            return cached
        alg = self.algebra
        letters = _letters(mono)
        total = self.zero(1)
        for k, (g, sign) in enumerate(letters):
            prefix = alg.word(letters[:k])
            suffix = alg.word(letters[k + 1:])
            dg = self._d_generator(g)
            if sign < 0:
                inv = alg.word([(g, -1)])
                dg = -(self.left_mul(inv, dg) * inv)
            total = total + self.left_mul(prefix, dg) * suffix
        self._d_cache[mono] = total
        return total

    def d_cogenerator(self, i: int) -> "FormElement":
        """d theta^i: zero for coordinate calculi, -1/2 C^i_jk theta^j theta^k for frames."""
        total = self.zero(2)
        if not self.is_frame:
            return total
        for (a, j, k), c in self.structure.items():
            if a == i and c:
                total = total + self.wedge(self.basis(j), self.basis(k)) * (c * Scalar.const(-1) / 2)
        return total

    def d(self, x: Union[AlgebraElement, "FormElement"]) -> "FormElement":
        """
        Exterior derivative on functions and 1-forms.

        d(theta^i c) = (d theta^i) c - theta^i d c.

        Raises:
            CalculusError: For forms of degree 2
        """
        if isinstance(x, AlgebraElement):
            if self.is_frame:
                out = {}
                for i, e in enumerate(self.frame):
                    value = e(x)
                    if value:
                        out[(i,)] = value
                return FormElement(self, 1, out)
            total = self.zero(1)
            for mono, coeff in x.terms.items():
                if any(mono):
                    total = total + self._d_monomial(mono) * coeff
            return total
        if x.degree == 0:
            return self.d(x.coefficient(()))
        if x.degree != 1:
            raise CalculusError(f"unsupported degree {x.degree + 1}")
        total = self.zero(2)
        for (i,), coeff in x.terms.items():
            total = total + self.d_cogenerator(i) * coeff
            total = total - self.wedge(self.basis(i), self.d(coeff))
        return total

    # -- derivations --------------------------------------------------

    def _cogenerator_value(self, c: int, e: Derivation) -> AlgebraElement:
        if self.is_frame:
            for j, frame_e in enumerate(self.frame):
                if frame_e is e:
                    return self.algebra.one() if j == c else self.algebra.zero()
        rep = self.representations.get(c)
        if rep is None:
            raise CalculusError(
                f"cannot evaluate {self.cogenerators[c]} on {e.name} in {self.name}"
            )
        total = self.algebra.zero()
        for f, g in rep:
            total = total + f * e(g)
        return total

    def evaluate(self, omega: "FormElement", e: Derivation) -> AlgebraElement:
        """
        Evaluate a 1-form on a derivation, (f dg)(e) = f e(g).

        Args:
            omega: Degree 1 form
            e: Derivation of the base algebra

        Returns:
            Algebra element sum theta^c(e) a_c
        """
        if omega.degree != 1:
            raise CalculusError(f"evaluation needs a 1-form, got degree {omega.degree}")
        total = self.algebra.zero()
        for (c,), coeff in omega.terms.items():
            total = total + self._cogenerator_value(c, e) * coeff
        return total

    def interior(self, e: Derivation, omega: "FormElement") -> "FormElement":
        """
        Interior product i_e as an antiderivation.

        Raises:
            CalculusError: For degree 0
        """
        if omega.degree == 0:
            raise CalculusError("interior product of a degree 0 form")
        if omega.degree == 1:
            return self.function(self.evaluate(omega, e))
        total = self.zero(1)
        for (b,), coeff in omega.terms.items():
            p, q = self.wedge_basis[b]
            vp = self._cogenerator_value(p, e)
            vq = self._cogenerator_value(q, e)
            total = total + self.left_mul(vp, self.basis(q)) * coeff
            total = total - self.left_mul(vq, self.basis(p)) * coeff
        return total

    def lie_derivative(self, e: Derivation, t: Union["FormElement", "TensorElement"]):
        """
        Lie derivative by the Cartan formula, extended over (x) by Leibniz.

        Args:
            e: Derivation
            t: Function, 1-form or rank 2 tensor

        Returns:
            Element of the same kind
        """
        if isinstance(t, TensorElement):
            if t.shape != (1, 1):
                raise CalculusError(f"Lie derivative needs rank 2, got shape {t.shape}")
            total = TensorElement(self, {}, (1, 1))
            for (a, b), coeff in t.terms.items():
                first = self.basis(a)
                second = self.basis(b, coeff)
                total = total + self.tensor(self.lie_derivative(e, first), second)
                total = total + self.tensor(first, self.lie_derivative(e, second))
            return total
        if t.degree == 0:
            return self.function(e(t.coefficient(())))
        if t.degree != 1:
            raise CalculusError(f"unsupported degree {t.degree}")
        inner = self.evaluate(t, e)
        return self.d(inner) + self.interior(e, self.d(t))

    # -- consistency --------------------------------------------------

    def check_consistency(self) -> None:
        """
        Check that swap rules, wedge relations and d agree.

        Coordinate calculi: d applied to both sides of every swap rule.
        Frame calculi: d(d g) = 0 on every generator.

        Raises:
            CalculusError: On the first disagreement
        """
        alg = self.algebra
        if self.is_frame:
            for gen in alg.generators:
                signs = (1, -1) if gen.invertible else (1,)
                for sign in signs:
                    f = alg.gen(gen.name, sign)
                    if self.d(self.d(f)):
                        raise CalculusError(
                            f"d^2 {gen.name}^{sign} != 0 in {self.name}: structure constants "
                            "disagree with the frame derivations"
                        )
            logger.debug("%s: d^2 = 0 on generators", self.name)
            return
        for (g, sign, c), rule in self.swap_rules.items():
            letter = alg.word([(g, sign)])
            lhs = self.wedge(self.d(letter), self.basis(c))
            rhs = self.d(FormElement(self, 1, {(l,): r for l, r in rule.items()}))
            if lhs != rhs:
                raise CalculusError(
                    f"swap rule for {alg.generators[g].name}^{sign} {self.cogenerators[c]} "
                    f"disagrees with the wedge relations in {self.name}: {lhs} != {rhs}"
                )
        logger.debug("%s: %d swap rules consistent with d", self.name, len(self.swap_rules))

    def dirac_operator(self) -> "FormElement":
        """theta = -sum theta^a lambda_a; d f = -[theta, f] on a frame calculus."""
        if not self.is_frame:
            raise CalculusError(f"{self.name} has no frame")
        total = self.zero(1)
        for i, lam in enumerate(self.lambdas):
            total = total - self.basis(i, lam)
        return total

    def random_form(self, rng: random.Random, **kwargs) -> "FormElement":
        total = self.zero(1)
        for c in range(self.dimension):
            total = total + self.basis(c, self.algebra.random_element(rng, **kwargs))
        return total


class FormElement:
    """Element of Omega^k (k = 0, 1, 2) in right-coefficient normal form."""

    __slots__ = ("calculus", "degree", "_terms")

    def __init__(self, calculus: Calculus, degree: int, terms: Mapping[Key, AlgebraElement]):
        if degree > 2:
            raise CalculusError(f"unsupported degree {degree}")
        self.calculus = calculus
        self.degree = degree
        self._terms = {k: c for k, c in terms.items() if c}

    @property
    def terms(self) -> FormTerms:
        return dict(self._terms)

    def coefficient(self, key: Key) -> AlgebraElement:
        return self._terms.get(tuple(key), self.calculus.algebra.zero())

    def component(self, name: Union[str, int]) -> AlgebraElement:
        """Right coefficient of a basis 1-form."""
        return self.coefficient((self.calculus.index(name),))

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other: "FormElement") -> None:
        if other.calculus is not self.calculus or other.degree != self.degree:
            raise CalculusError(
                f"cannot combine degree {self.degree} in {self.calculus.name} with "
                f"degree {other.degree} in {other.calculus.name}"
            )

    def __add__(self, other: "FormElement") -> "FormElement":
        if not isinstance(other, FormElement):
            return NotImplemented
        self._same(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return FormElement(self.calculus, self.degree, out)

    def __neg__(self) -> "FormElement":
        return FormElement(self.calculus, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "FormElement") -> "FormElement":
        if not isinstance(other, FormElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FormElement):
            return self.calculus.wedge(self, other)
        if isinstance(other, AlgebraElement):
            return FormElement(self.calculus, self.degree,
                               {k: c * other for k, c in self._terms.items()})
        try:
            s = Scalar.coerce(other)
        except Exception:
            return NotImplemented
        return FormElement(self.calculus, self.degree, {k: c * s for k, c in self._terms.items()})

    def __rmul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.calculus.left_mul(other, self)
        return self.__mul__(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, FormElement):
            return NotImplemented
        return (self.calculus is other.calculus and self.degree == other.degree
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((id(self.calculus), self.degree, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def basis_text(self, key: Key) -> str:
        if self.degree == 1:
            return self.calculus.cogenerators[key[0]]
        if self.degree == 2:
            return self.calculus.basis2_name(key[0])
        return ""

    def __str__(self) -> str:
        if self.degree == 0:
            return str(self.coefficient(()))
        return _render(self._terms, self.basis_text)

    def __repr__(self) -> str:
        return f"FormElement(degree {self.degree}: {self})"


class TensorElement:
    """
    Element of Omega^{k1} (x) ... (x) Omega^{kn} in right-coefficient normal form.

    ``shape`` lists the form degree of every slot: (1, 1) is Omega^1 (x) Omega^1,
    (2, 1) is Omega^2 (x) Omega^1 (the values of the curvature).
    """

    __slots__ = ("calculus", "shape", "_terms")

    def __init__(self, calculus: Calculus, terms: Mapping[Key, AlgebraElement],
                 shape: Optional[Tuple[int, ...]] = None):
        self.calculus = calculus
        if shape is None:
            shape = (1,) * len(next(iter(terms))) if terms else (1, 1)
        self.shape = tuple(shape)
        self._terms = {tuple(k): c for k, c in terms.items() if c}

    @property
    def rank(self) -> int:
        return len(self.shape)

    @property
    def terms(self) -> Dict[Key, AlgebraElement]:
        return dict(self._terms)

    def coefficient(self, key: Sequence[int]) -> AlgebraElement:
        return self._terms.get(tuple(key), self.calculus.algebra.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        if other.calculus is not self.calculus or other.shape != self.shape:
            raise CalculusError(f"cannot add tensors of shapes {self.shape} and {other.shape}")
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElement(self.calculus, out, self.shape)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.calculus, {k: -c for k, c in self._terms.items()}, self.shape)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return TensorElement(self.calculus, {k: c * other for k, c in self._terms.items()},
                                 self.shape)
        try:
            s = Scalar.coerce(other)
        except Exception:
            return NotImplemented
        return TensorElement(self.calculus, {k: c * s for k, c in self._terms.items()}, self.shape)

    def __rmul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.calculus.left_mul(other, self)
        return self.__mul__(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self.calculus is other.calculus and self.shape == other.shape
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((id(self.calculus), self.shape, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def basis_text(self, key: Key) -> str:
        parts = []
        for slot, index in zip(self.shape, key):
            if slot == 2:
                parts.append(self.calculus.basis2_name(index))
            else:
                parts.append(self.calculus.cogenerators[index])
        return "(x)".join(parts)

    def __str__(self) -> str:
        return _render(self._terms, self.basis_text)

    def __repr__(self) -> str:
        return f"TensorElement(shape {self.shape}: {self})"


def _render(terms: Mapping[Key, AlgebraElement], basis_text) -> str:
    if not terms:
        return "0"
    text = ""
    for key in sorted(terms):
        coeff = terms[key]
        body = basis_text(key)
        if coeff == 1:
            piece = body
        elif coeff == -1:
            piece = f"-{body}"
        else:
            piece = f"{body}*({coeff})"
        if not text:
            text = piece
        elif piece.startswith("-"):
            text += f" - {piece[1:]}"
        else:
            text += f" + {piece}"
    return text


def as_tensor(x: Union[FormElement, TensorElement]) -> TensorElement:
    """View a 1-form as a rank 1 tensor."""
    if isinstance(x, TensorElement):
        return x
    if x.degree != 1:
        raise CalculusError(f"only 1-forms are tensor factors, got degree {x.degree}")
    return TensorElement(x.calculus, x.terms, (1,))


def as_form(t: TensorElement) -> FormElement:
    """View a rank 1 tensor as a 1-form."""
    if t.shape != (1,):
        raise CalculusError(f"rank 1 tensor expected, got shape {t.shape}")
    return FormElement(t.calculus, 1, t.terms)


def tensor(a, b) -> TensorElement:
    return a.calculus.tensor(a, b)


def wedge(a: FormElement, b: FormElement) -> FormElement:
    return a.calculus.wedge(a, b)


def wedge_projection(t: TensorElement) -> FormElement:
    return t.calculus.wedge_projection(t)


def d(x: FormElement) -> FormElement:
    return x.calculus.d(x)


# -- built-in calculi -------------------------------------------------------

RMatrix = Dict[Tuple[int, int], Dict[Tuple[int, int], Scalar]]


def rmatrix(rows: Sequence[Sequence[ScalarLike]]) -> RMatrix:
    """4x4 matrix with rows and columns ordered 11, 12, 21, 22 -> R[(a, b)][(c, d)]."""
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    return {
        pairs[r]: {pairs[c]: Scalar.coerce(rows[r][c]) for c in range(4) if Scalar.coerce(rows[r][c])}
        for r in range(4)
    }


def plane_rmatrix(h: Scalar = H, hp: Optional[Scalar] = None) -> RMatrix:
    """R-hat of GL_h(2); with ``hp`` the two-parameter GL_{h,h'}(2) matrix."""
    hp = h if hp is None else hp
    return rmatrix([
        [1, -hp, hp, h * hp],
        [0, 0, 1, h],
        [0, 1, 0, -h],
        [0, 0, 0, 1],
    ])


def rmatrix_swap_rules(algebra: Presentation, R: RMatrix) -> SwapTable:
    """x^a xi^b = R^{ab}_{cd} xi^c x^d as single-letter swap rules."""
    rules: SwapTable = {}
    for (a, b), row in R.items():
        entry: Dict[int, AlgebraElement] = {}
        for (c, dd), s in row.items():
            term = algebra.monomial([1 if k == dd else 0 for k in range(2)], s)
            entry[c] = entry.get(c, algebra.zero()) + term
        rules[(a, 1, b)] = entry
    return rules


def plane_calculus(name: str = "plane", algebra: Presentation = P_PLANE,
                   hp: Optional[Scalar] = None) -> Calculus:
    """Wess-Zumino calculus on the h-plane (xi = dx, eta = dy)."""
    hp_value = H if hp is None else hp
    wedge_table = {
        (0, 0): {0: hp_value},
        (0, 1): {0: 1},
        (1, 0): {0: -1},
        (1, 1): {},
    }
    return Calculus(
        name,
        algebra,
        ["xi", "eta"],
        wedge_table,
        [(0, 1)],
        swap_rules=rmatrix_swap_rules(algebra, plane_rmatrix(H, hp)),
        differentials={"x": 0, "y": 1},
    )


def ext_xy_calculus() -> Calculus:
    """The xi, eta calculus over the extended plane, with rules for y^-1."""
    alg = P_EXT
    rules = rmatrix_swap_rules(alg, plane_rmatrix())
    y_inv = alg.gen("y", -1)
    rules[(1, -1, 0)] = {0: y_inv, 1: y_inv * H}
    rules[(1, -1, 1)] = {1: y_inv}
    wedge_table = {(0, 0): {0: H}, (0, 1): {0: 1}, (1, 0): {0: -1}, (1, 1): {}}
    return Calculus("ext_xy", alg, ["xi", "eta"], wedge_table, [(0, 1)],
                    swap_rules=rules, differentials={"x": 0, "y": 1})


def antisymmetric_wedge(n: int) -> Tuple[Dict[Tuple[int, int], Dict[int, int]], List[Tuple[int, int]]]:
    """Exterior algebra relations theta^i theta^j = -theta^j theta^i on n generators."""
    basis = [(i, j) for i in range(n) for j in range(i + 1, n)]
    table: Dict[Tuple[int, int], Dict[int, int]] = {}
    for i in range(n):
        for j in range(n):
            if i < j:
                table[(i, j)] = {basis.index((i, j)): 1}
            elif i > j:
                table[(i, j)] = {basis.index((j, i)): -1}
            else:
                table[(i, j)] = {}
    return table, basis


def lie_structure(brackets: Mapping[Tuple[int, int], Mapping[int, ScalarLike]]) -> Dict[Tuple[int, int, int], Scalar]:
    """C^k_ij from [lambda_i, lambda_j] = F^k_ij lambda_k (antisymmetrized)."""
    out: Dict[Tuple[int, int, int], Scalar] = {}
    for (i, j), row in brackets.items():
        for k, value in row.items():
            out[(k, i, j)] = Scalar.coerce(value)
            out[(k, j, i)] = -Scalar.coerce(value)
    return out


def ext_frame_lambdas(three: bool = False) -> List[AlgebraElement]:
    """lambda_1 = v/2h, lambda_2 = u/2h (and lambda_3 = w/2h) in P_EXT."""
    u, v, w = ext_uvw()
    half_inv_h = H.inverse() / 2
    lambdas = [v * half_inv_h, u * half_inv_h]
    if three:
        lambdas.append(w * half_inv_h)
    return lambdas


EXT2_BRACKETS = {(0, 1): {0: 1}}
EXT3_BRACKETS = {(0, 1): {0: 1}, (1, 2): {2: 1}, (2, 0): {1: 1}}


def ext_frame_calculus() -> Calculus:
    """Two-dimensional frame calculus theta^1 = v^-1 du, theta^2 = -v^-1 dv."""
    u, v, _ = ext_uvw()
    v_inv = v.inverse()
    table, basis = antisymmetric_wedge(2)
    return Calculus(
        "ext2",
        P_EXT,
        ["t1", "t2"],
        table,
        basis,
        lambdas=ext_frame_lambdas(),
        structure=lie_structure(EXT2_BRACKETS),
        representations={0: [(v_inv, u)], 1: [(-v_inv, v)]},
    )


def ext_three_calculus() -> Calculus:
    """Three-dimensional frame calculus dual to e_i = ad lambda_i, i = 1, 2, 3."""
    table, basis = antisymmetric_wedge(3)
    return Calculus(
        "ext3",
        P_EXT,
        ["t1", "t2", "t3"],
        table,
        basis,
        lambdas=ext_frame_lambdas(three=True),
        structure=lie_structure(EXT3_BRACKETS),
    )


C_PLANE = plane_calculus()
C_PLANE2 = plane_calculus("plane2", P_PLANE2, hp=HP)
C_EXT_XY = ext_xy_calculus()
C_EXT2 = ext_frame_calculus()
C_EXT3 = ext_three_calculus()
