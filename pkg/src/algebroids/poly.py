"""Exact sparse multivariate polynomials over the rationals.

Variables are identified by name and form one global universe: base
coordinates ``x1 .. xk``, fiber coordinates ``xi1 .. xin`` and the
deformation parameter ``t``.  A monomial is a tuple of ``(name, exponent)``
pairs sorted by name, so two polynomials over different variable sets combine
without any re-indexing.

    >>> p = parse_poly("2*x1^2*xi3 - 1/3*t")
    >>> p.partial("x1")
    Poly('4*x1*xi3')
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple  # tuple[tuple[str, int], ...]

Scalar = Union[int, Fraction]

_VAR_RE = re.compile(r"^[A-Za-z_][A-Za-z_]*\d*$")
_NAME_SPLIT = re.compile(r"^(.*?)(\d*)$")


def var_key(name: str):
    """Sort key putting ``t`` first, then ``x2`` before ``x10``, then ``xi*``."""
    prefix, digits = _NAME_SPLIT.match(name).groups()
    rank = {"t": 0, "x": 1, "xi": 2}.get(prefix, 3)
    return (rank, prefix, int(digits) if digits else -1)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Immutable polynomial with Fraction coefficients.

    ``terms`` maps monomials to nonzero coefficients; equality is equality of
    term maps, which is canonical because zero terms are never stored.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # terms already canonical: no zeros, Fraction values
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Poly":
        if not _VAR_RE.match(name):
            raise ValueError(f"invalid variable name {name!r}")
        if exp == 0:
            return cls.const(1)
        return cls._raw({((name, exp),): Fraction(1)})

    @classmethod
    def coerce(cls, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.const(other)
        raise TypeError(f"cannot convert {type(other).__name__} to Poly")

    # -- inspection -----------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    @property
    def variables(self) -> tuple[str, ...]:
        names = {v for m in self.terms for v, _ in m}
        return tuple(sorted(names, key=var_key))

    def degree(self, names: Iterable[str] | None = None) -> int:
        """Total degree, or the degree in the given subset of variables.

        The zero polynomial has degree -1.
        """
        if not self.terms:
            return -1
        if names is None:
            return max(_mono_degree(m) for m in self.terms)
        names = set(names)
        return max(sum(e for v, e in m if v in names) for m in self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- ring operations -----------------------------------------------

    def __add__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Poly._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "Poly":
        return self * c

    # -- calculus and substitution ---------------------------------------

    def partial(self, name: str) -> "Poly":
        """Formal partial derivative with respect to ``name``."""
        if not _VAR_RE.match(name):
            raise ValueError(f"unknown variable {name!r}")
        out: dict = {}
        for m, c in self.terms.items():
            for idx, (v, e) in enumerate(m):
                if v == name:
                    rest = m[:idx] + ((v, e - 1),) + m[idx + 1:] if e > 1 else m[:idx] + m[idx + 1:]
                    out[rest] = out.get(rest, 0) + c * e
                    break
        return Poly._raw({m: c for m, c in out.items() if c})

    def substitute(self, bindings: Mapping[str, "Poly | Scalar"]) -> "Poly":
        """Replace variables by polynomials (simultaneously)."""
        if not bindings:
            return self
        images = {v: Poly.coerce(p) for v, p in bindings.items()}
        result = ZERO
        powers: dict = {}
        for m, c in self.terms.items():
            kept = []
            factor = Poly.const(c)
            for v, e in m:
                if v in images:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = images[v] ** e
                    factor = factor * powers[key]
                else:
                    kept.append((v, e))
            result = result + factor * Poly._raw({tuple(kept): Fraction(1)})
        return result

    def split(self, names: Iterable[str]) -> dict:
        """Group terms by their exponents in ``names``.

        Returns a map from exponent tuples (aligned with ``names``) to the
        coefficient polynomial in the remaining variables.
        """
        names = tuple(names)
        index = {v: i for i, v in enumerate(names)}
        groups: dict = {}
        for m, c in self.terms.items():
            alpha = [0] * len(names)
            rest = []
            for v, e in m:
                i = index.get(v)
                if i is None:
                    rest.append((v, e))
                else:
                    alpha[i] = e
            groups.setdefault(tuple(alpha), {})[tuple(rest)] = c
        return {a: Poly._raw(t) for a, t in groups.items()}

    # -- printing --------------------------------------------------------

    def _sorted_terms(self):
        def key(item):
            m, _ = item
            tdeg = sum(e for v, e in m if v == "t")
            word = [(var_key(v), -e) for v, e in sorted(m, key=lambda ve: var_key(ve[0]))]
            return (tdeg, -_mono_degree(m), word)

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self._sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            factors = [v if e == 1 else f"{v}^{e}"
                       for v, e in sorted(m, key=lambda ve: var_key(ve[0]))]
            if a == 1 and factors:
                coeff = []
            elif a.denominator == 1:
                coeff = [str(a.numerator)]
            else:
                coeff = [f"({a})"]
            body = "*".join(coeff + factors)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


ZERO = Poly._raw({})
ONE = Poly._raw({(): Fraction(1)})


def var(name: str) -> Poly:
    return Poly.var(name)


def const(c: Scalar) -> Poly:
    return Poly.const(c)


def add(a: Poly, b: Poly) -> Poly:
    return a + b


def mul(a: Poly, b: Poly) -> Poly:
    return a * b


def partial(p: Poly, name: str) -> Poly:
    return p.partial(name)


def substitute(p: Poly, bindings: Mapping[str, Poly | Scalar]) -> Poly:
    return p.substitute(bindings)


# -- literal grammar -------------------------------------------------------


class ParseError(ValueError):
    """Raised for malformed polynomial or word literals."""


def _parse_tree(text: str) -> ast.expr:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    if "**" in text:
        raise ParseError("use '^' for powers")
    try:
        return ast.parse(text.strip().replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None


def evaluate(text: str, *, leaf, add, mul, neg, power, number):
    """Fold a literal through caller-supplied ring operations.

    The grammar is sums/differences of products of rationals, identifiers,
    parenthesized subexpressions and non-negative integer powers.  Division
    is only allowed between numeric constants.
    """

    def num(node):
        value = walk(node)
        if not isinstance(value, Fraction):
            raise ParseError("division is only allowed between numbers")
        return value

    def lift(value):
        return number(value) if isinstance(value, Fraction) else value

    def walk(node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError(f"unsupported literal {node.value!r}")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if not _VAR_RE.match(node.id):
                raise ParseError(f"bad identifier {node.id!r}")
            return leaf(node.id)
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                v = walk(node.operand)
                return -v if isinstance(v, Fraction) else neg(v)
            if isinstance(node.op, ast.UAdd):
                return walk(node.operand)
        if isinstance(node, ast.BinOp):
            op = node.op
            if isinstance(op, ast.Div):
                a, b = num(node.left), num(node.right)
                if b == 0:
                    raise ParseError("division by zero")
                return a / b
            if isinstance(op, ast.Pow):
                base = walk(node.left)
                e = walk(node.right)
                if not isinstance(e, Fraction) or e.denominator != 1 or e < 0:
                    raise ParseError("exponent must be a non-negative integer")
                if isinstance(base, Fraction):
                    return base ** int(e)
                return power(base, int(e))
            if isinstance(op, (ast.Add, ast.Sub, ast.Mult)):
                a, b = walk(node.left), walk(node.right)
                if isinstance(a, Fraction) and isinstance(b, Fraction):
                    return a + b if isinstance(op, ast.Add) else a - b if isinstance(op, ast.Sub) else a * b
                a, b = lift(a), lift(b)
                if isinstance(op, ast.Add):
                    return add(a, b)
                if isinstance(op, ast.Sub):
                    return add(a, neg(b))
                return mul(a, b)
        raise ParseError(f"unsupported syntax: {ast.dump(node)[:40]}")

    return lift(walk(_parse_tree(text)))


def parse_poly(text: str) -> Poly:
    """Parse a literal such as ``2*x1^2*xi3 - 1/3*t``."""
    return evaluate(
        text,
        leaf=Poly.var,
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        power=lambda a, n: a ** n,
        number=Poly.const,
    )


def parse_rational(value) -> Fraction:
    """Accept ints, Fractions or strings like ``"-3/2"``."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"not a rational: {value!r}")


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
