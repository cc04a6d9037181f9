"""Universal enveloping algebras of algebroids in PBW normal form.

Elements of U(A) are stored as ``{alpha: coefficient}`` where ``alpha`` is a
multi-index standing for the ordered monomial e_1^alpha_1 ... e_n^alpha_n and
the coefficient is a function on the base written on the left.  The
enveloping algebra of the adiabatic algebroid A_t is handled by the same code:
its structure data already carries the factor ``t``.

Two independent routes compute products:

* :meth:`EnvelopingAlgebra.normal_form` runs the rewrite system
  ``e_j e_i -> e_i e_j + [e_j, e_i]`` (j > i) and ``e_i f -> f e_i + rho(e_i) f``
  on free words, with a pluggable choice of redex;
* :meth:`EnvelopingAlgebra.multiply` uses memoized left multiplication of an
  ordered monomial by a single generator.
"""

from __future__ import annotations

import weakref
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebroid import Algebroid, Section, T, fiber_var
from .poly import ONE, ZERO, Poly, evaluate, format_rational

Strategy = Callable[[Sequence], object]


def leftmost(options: Sequence):
    return options[0]


class FreeWord:
    """prefix * letters[0] * letters[1] * ... in the free algebra.

    A letter is either a generator index (0-based int) or a :class:`Poly`
    acting by multiplication.
    """

    __slots__ = ("prefix", "letters")

    def __init__(self, letters: Iterable = (), prefix=ONE):
        self.prefix = Poly.coerce(prefix)
        self.letters = tuple(l if isinstance(l, int) else Poly.coerce(l) for l in letters)

    def __repr__(self):
        parts = [f"e{l + 1}" if isinstance(l, int) else f"({l})" for l in self.letters]
        return f"FreeWord(({self.prefix})" + "".join("·" + p for p in parts) + ")"


class UEAElement:
    __slots__ = ("parent", "terms")

    def __init__(self, parent: "EnvelopingAlgebra", terms: dict):
        self.parent = parent
        self.terms = {a: c for a, c in terms.items() if c}

    @property
    def algebroid(self) -> Algebroid:
        return self.parent.algebroid

    @property
    def order(self) -> int:
        """Filtration degree; -1 for the zero element."""
        return max((sum(a) for a in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other) -> "UEAElement":
        if isinstance(other, (int, Fraction, Poly)):
            return self.parent.function(Poly.coerce(other))
        if not isinstance(other, UEAElement):
            raise TypeError(f"cannot combine UEAElement with {type(other).__name__}")
        if other.parent is not self.parent:
            raise ValueError("elements belong to different enveloping algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        return UEAElement(self.parent, _add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return UEAElement(self.parent, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        return self.parent.multiply(self, self._check(other))

    def __rmul__(self, other):
        return self.parent.multiply(self._check(other), self)

    def __eq__(self, other):
        if isinstance(other, UEAElement):
            return self.parent is other.parent and self.terms == other.terms
        if isinstance(other, (int, Fraction, Poly)):
            return self == self.parent.function(Poly.coerce(other))
        return NotImplemented

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda ac: (-sum(ac[0]), tuple(-x for x in ac[0])))
        out = []
        for alpha, c in items:
            gens = "".join(
                f"·e{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(alpha) if e)
            coeff = format_rational(c.constant_term()) if c.is_constant() else str(c)
            out.append(f"({coeff}){gens}")
        return " + ".join(out)

    def __repr__(self):
        return f"UEAElement({self})"


def _add_terms(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, ZERO) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _accumulate(out: dict, key, c: Poly) -> None:
    if not c:
        return
    s = out.get(key, ZERO) + c
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class EnvelopingAlgebra:
    """U(A) for a fixed algebroid, with memo tables for fast products."""

    def __init__(self, algebroid: Algebroid):
        self.algebroid = algebroid
        self.rank = algebroid.rank
        self._left: dict = {}
        self._sym: dict = {}
        self._rho_cache: dict = {}

    # -- constructors ----------------------------------------------------

    def element(self, terms: dict) -> UEAElement:
        clean = {}
        for alpha, c in terms.items():
            alpha = tuple(alpha)
            if len(alpha) != self.rank or any(e < 0 for e in alpha):
                raise ValueError(f"bad multi-index {alpha}")
            _accumulate(clean, alpha, self.algebroid.check_function(Poly.coerce(c)))
        return UEAElement(self, clean)

    @property
    def zero(self) -> UEAElement:
        return UEAElement(self, {})

    @property
    def one(self) -> UEAElement:
        return self.function(ONE)

    def _unit(self, i: int | None = None) -> tuple:
        alpha = [0] * self.rank
        if i is not None:
            alpha[i] = 1
        return tuple(alpha)

    def function(self, f) -> UEAElement:
        """Embed a function on the base as an order-0 element."""
        f = self.algebroid.check_function(Poly.coerce(f))
        return UEAElement(self, {self._unit(): f})

    def section(self, X: Section) -> UEAElement:
        """Embed a section sum X_i e_i as an element of order <= 1."""
        self.algebroid._check_section(X)
        terms = {}
        for i, c in enumerate(X.components):
            _accumulate(terms, self._unit(i), self.algebroid.check_function(c))
        return UEAElement(self, terms)

    def gen(self, i: int) -> UEAElement:
        """Frame generator e_{i+1}."""
        return UEAElement(self, {self._unit(i): ONE})

    # -- rewrite system on free words --------------------------------------

    def _rho(self, i: int, f: Poly) -> Poly:
        key = (i, f)
        hit = self._rho_cache.get(key)
        if hit is None:
            hit = self._rho_cache[key] = self.algebroid.anchor_apply(i, f)
        return hit

    def _redexes(self, letters: tuple) -> list:
        found = []
        if letters and not isinstance(letters[0], int):
            found.append(-1)
        for p in range(len(letters) - 1):
            a, b = letters[p], letters[p + 1]
            if isinstance(a, int):
                if isinstance(b, int):
                    if a > b:
                        found.append(p)
                else:
                    found.append(p)
            elif not isinstance(b, int):
                found.append(p)
        return found

    def _rewrite(self, coeff: Poly, letters: tuple, p: int) -> list:
        if p == -1:
            return [(coeff * letters[0], letters[1:])]
        head, tail = letters[:p], letters[p + 2:]
        a, b = letters[p], letters[p + 1]
        if not isinstance(a, int):
            return [(coeff, head + (a * b,) + tail)]
        if isinstance(b, int):
            out = [(coeff, head + (b, a) + tail)]
            for k, c in enumerate(self.algebroid.structure[a][b]):
                if c:
                    out.append((coeff, head + (c, k) + tail))
            return out
        out = [(coeff, head + (b, a) + tail)]
        d = self._rho(a, b)
        if d:
            out.append((coeff, head + (d,) + tail))
        return out

    def normal_form(self, word: FreeWord, strategy: Strategy | None = None,
                    max_steps: int = 1_000_000) -> UEAElement:
        """Normal-order a free word by rewriting until no redex is left.

        ``strategy`` picks one item from a non-empty sequence; it chooses
        both the pending term to work on and the redex inside it.  The default
        always takes the first option (leftmost redex of the first term).
        """
        pick = strategy or leftmost
        for l in word.letters:
            if isinstance(l, int):
                if not 0 <= l < self.rank:
                    raise ValueError(f"generator e{l + 1} out of range")
            else:
                self.algebroid.check_function(l)
        done: dict = {}
        pending = []
        if word.prefix and not any(not isinstance(l, int) and not l for l in word.letters):
            pending.append((word.prefix, word.letters))
        steps = 0
        while pending:
            idx = pick(range(len(pending)))
            coeff, letters = pending[idx]
            redexes = self._redexes(letters)
            if not redexes:
                pending.pop(idx)
                alpha = [0] * self.rank
                for l in letters:
                    alpha[l] += 1
                _accumulate(done, tuple(alpha), coeff)
                continue
            steps += 1
            if steps > max_steps:
                raise RuntimeError(f"normal form did not terminate in {max_steps} steps")
            new = [(c, ls) for c, ls in self._rewrite(coeff, letters, pick(redexes))
                   if c and not any(not isinstance(l, int) and not l for l in ls)]
            if new:
                pending[idx] = new[0]
                pending.extend(new[1:])
            else:
                pending.pop(idx)
        return UEAElement(self, done)

    # -- fast multiplication -----------------------------------------------

    def _left_monomial(self, i: int, beta: tuple) -> dict:
        """Normal form of e_i * e^beta."""
        key = (i, beta)
        hit = self._left.get(key)
        if hit is not None:
            return hit
        j = next((j for j, e in enumerate(beta) if e), None)
        if j is None or j >= i:
            result = {beta[:i] + (beta[i] + 1,) + beta[i + 1:]: ONE}
        else:
            rest = beta[:j] + (beta[j] - 1,) + beta[j + 1:]
            # e_i e_j rest = e_j (e_i rest) + [e_i, e_j] rest
            result = self._left_terms(j, self._left_monomial(i, rest))
            for k, c in enumerate(self.algebroid.structure[i][j]):
                if c:
                    for gamma, g in self._left_monomial(k, rest).items():
                        _accumulate(result, gamma, c * g)
        self._left[key] = result
        return result

    def _left_terms(self, i: int, terms: dict) -> dict:
        """Normal form of e_i * (sum g_gamma e^gamma)."""
        out: dict = {}
        for gamma, g in terms.items():
            for delta, h in self._left_monomial(i, gamma).items():
                _accumulate(out, delta, g * h)
            _accumulate(out, gamma, self._rho(i, g))
        return out

    def _monomial_times(self, alpha: tuple, terms: dict) -> dict:
        for i in reversed(range(self.rank)):
            for _ in range(alpha[i]):
                terms = self._left_terms(i, terms)
        return terms

    def multiply(self, a: UEAElement, b: UEAElement) -> UEAElement:
        if a.parent is not self or b.parent is not self:
            raise ValueError("algebroid mismatch")
        out: dict = {}
        for alpha, f in a.terms.items():
            for gamma, g in self._monomial_times(alpha, b.terms).items():
                _accumulate(out, gamma, f * g)
        return UEAElement(self, out)

    def commutator(self, a: UEAElement, b: UEAElement) -> UEAElement:
        return self.multiply(a, b) - self.multiply(b, a)

    # -- symbols ---------------------------------------------------------

    def symmetrized(self, alpha: tuple) -> dict:
        """Normal form of the full symmetrization of e^alpha.

        Uses sym(alpha) = (1/m) sum_i alpha_i e_i sym(alpha - eps_i), which
        groups the m! orderings by their first letter.
        """
        alpha = tuple(alpha)
        hit = self._sym.get(alpha)
        if hit is not None:
            return hit
        m = sum(alpha)
        if m <= 1:
            result = {alpha: ONE}
        else:
            result = {}
            for i, e in enumerate(alpha):
                if e:
                    lower = alpha[:i] + (e - 1,) + alpha[i + 1:]
                    weight = Fraction(e, m)
                    for gamma, c in self._left_terms(i, self.symmetrized(lower)).items():
                        _accumulate(result, gamma, c * weight)
        self._sym[alpha] = result
        return result

    def quantize(self, f: Poly) -> UEAElement:
        """Symmetrization quantization: h(x) xi^alpha -> h(x) sym(e^alpha)."""
        A = self.algebroid
        f = A.check_fiber_poly(f, allow_t=A.is_adiabatic)
        out: dict = {}
        for alpha, h in f.split(A.fiber_vars).items():
            for gamma, c in self.symmetrized(alpha).items():
                _accumulate(out, gamma, h * c)
        return UEAElement(self, out)

    def symbol(self, a: UEAElement) -> Poly:
        """Complete symbol: the inverse of :meth:`quantize`.

        Peels off the top-order part, which quantize reproduces up to lower
        order terms, and repeats on the remainder.
        """
        if a.parent is not self:
            raise ValueError("algebroid mismatch")
        xi = [Poly.var(fiber_var(i)) for i in range(self.rank)]
        result = ZERO
        rem = dict(a.terms)
        while rem:
            m = max(sum(alpha) for alpha in rem)
            top = [(alpha, c) for alpha, c in rem.items() if sum(alpha) == m]
            for alpha, c in top:
                result = result + c * _xi_power(xi, alpha)
                for gamma, s in self.symmetrized(alpha).items():
                    _accumulate(rem, gamma, -(c * s))
        return result

    def principal_symbol(self, a: UEAElement, m: int) -> Poly:
        if a.parent is not self:
            raise ValueError("algebroid mismatch")
        if a.order > m:
            raise ValueError(f"element has order {a.order} > {m}")
        xi = [Poly.var(fiber_var(i)) for i in range(self.rank)]
        out = ZERO
        for alpha, c in a.terms.items():
            if sum(alpha) == m:
                out = out + c * _xi_power(xi, alpha)
        return out

    # -- anchor representation -------------------------------------------

    def act(self, a: UEAElement, h: Poly) -> Poly:
        """Apply a as the differential operator sum f_alpha rho(e)^alpha to h."""
        if a.parent is not self:
            raise ValueError("algebroid mismatch")
        h = self.algebroid.check_function(Poly.coerce(h))
        out = ZERO
        for alpha, f in a.terms.items():
            g = h
            for i in reversed(range(self.rank)):
                for _ in range(alpha[i]):
                    g = self.algebroid.anchor_apply(i, g)
            out = out + f * g
        return out


def _xi_power(xi: list, alpha: tuple) -> Poly:
    out = ONE
    for v, e in zip(xi, alpha):
        if e:
            out = out * v ** e
    return out


_ALGEBRAS: "weakref.WeakKeyDictionary[Algebroid, EnvelopingAlgebra]" = weakref.WeakKeyDictionary()


def enveloping(A: Algebroid) -> EnvelopingAlgebra:
    """The (shared, memoized) enveloping algebra of an algebroid."""
    U = _ALGEBRAS.get(A)
    if U is None:
        U = _ALGEBRAS[A] = EnvelopingAlgebra(A)
    return U


def inject_function(A: Algebroid, f) -> UEAElement:
    return enveloping(A).function(f)


def inject_section(A: Algebroid, X: Section) -> UEAElement:
    return enveloping(A).section(X)


def normal_form(word: FreeWord, A: Algebroid, adiabatic: bool = False,
                strategy: Strategy | None = None) -> UEAElement:
    if adiabatic and not A.is_adiabatic:
        A = A.adiabatic()
    return enveloping(A).normal_form(word, strategy)


def quantize(A: Algebroid, f: Poly) -> UEAElement:
    return enveloping(A).quantize(f)


def symbol(a: UEAElement) -> Poly:
    return a.parent.symbol(a)


def principal_symbol(a: UEAElement, m: int) -> Poly:
    return a.parent.principal_symbol(a, m)


def star(A: Algebroid, f: Poly, g: Poly) -> Poly:
    """Star product on fiberwise polynomials, exact as a polynomial in ``t``.

    Quantizes in the enveloping algebra of the adiabatic algebroid, multiplies
    and takes the complete symbol.  Inputs may already depend on ``t``.
    """
    if A.is_adiabatic:
        raise ValueError("star expects the undeformed algebroid")
    U = enveloping(A.adiabatic())
    return U.symbol(U.multiply(U.quantize(f), U.quantize(g)))


def t_expansion(p: Poly) -> dict:
    """Split a polynomial into {r: coefficient of t^r}."""
    return {a[0]: c for a, c in p.split((T,)).items()}


def parse_words(text: str, A: Algebroid) -> list[FreeWord]:
    """Parse a noncommutative literal such as ``e2*x1*e1 - 1/2*e3``.

    Tokens ``e1 .. en`` are generators; every other identifier is a base
    variable acting by multiplication.  Products keep their written order.
    """
    gens = {f"e{i + 1}": i for i in range(A.rank)}

    def leaf(name):
        return {(name,): Fraction(1)}

    def add(a, b):
        out = dict(a)
        for w, c in b.items():
            out[w] = out.get(w, 0) + c
        return {w: c for w, c in out.items() if c}

    def mul(a, b):
        out: dict = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
        return {w: c for w, c in out.items() if c}

    def power(a, n):
        out = {(): Fraction(1)}
        for _ in range(n):
            out = mul(out, a)
        return out

    sums = evaluate(text, leaf=leaf, add=add, mul=mul,
                    neg=lambda a: {w: -c for w, c in a.items()}, power=power,
                    number=lambda c: {(): c} if c else {})
    words = []
    for w, c in sums.items():
        letters = []
        for name in w:
            if name in gens:
                letters.append(gens[name])
            elif name.startswith("e") and name[1:].isdigit():
                raise ValueError(f"generator {name} out of range for rank {A.rank}")
            else:
                letters.append(A.check_function(Poly.var(name)))
        words.append(FreeWord(letters, Poly.const(c)))
    return words


def parse_element(text: str, A: Algebroid) -> UEAElement:
    U = enveloping(A)
    out = U.zero
    for w in parse_words(text, A):
        out = out + U.normal_form(w)
    return out
