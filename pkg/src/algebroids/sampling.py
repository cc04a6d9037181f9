"""Seeded random generators for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .algebroid import Algebroid, T
from .groupoid import FiniteGroupoid, ReducedKernel
from .poly import ONE, Poly
from .uea import EnvelopingAlgebra, FreeWord, UEAElement


def rational(rng: random.Random, size: int = 3) -> Fraction:
    num = rng.randint(-size, size)
    return Fraction(num, rng.choice((1, 1, 2, 3)))


def poly(rng: random.Random, names, max_degree: int = 2, max_terms: int = 3) -> Poly:
    """Random polynomial in ``names`` with small rational coefficients."""
    names = list(names)
    out = Poly()
    for _ in range(rng.randint(1, max_terms)):
        mono = ONE
        for _ in range(rng.randint(0, max_degree) if names else 0):
            mono = mono * Poly.var(rng.choice(names))
        out = out + mono * rational(rng)
    return out


def _coefficient_vars(A: Algebroid, with_t: bool) -> list:
    names = list(A.base_vars)
    if with_t or A.is_adiabatic:
        names.append(T)
    return names


def fiber_poly(rng: random.Random, A: Algebroid, max_fiber_degree: int, *,
               base_degree: int = 1, max_terms: int = 3, with_t: bool = False) -> Poly:
    """Random h(x) xi^alpha sums with |alpha| <= max_fiber_degree."""
    names = _coefficient_vars(A, with_t)
    out = Poly()
    for _ in range(rng.randint(1, max_terms)):
        mono = ONE
        for _ in range(rng.randint(0, max_fiber_degree)):
            mono = mono * Poly.var(rng.choice(A.fiber_vars))
        out = out + mono * poly(rng, names, base_degree, 2)
    return out


def element(rng: random.Random, U: EnvelopingAlgebra, max_order: int, *,
            base_degree: int = 1, max_terms: int = 3) -> UEAElement:
    A = U.algebroid
    names = _coefficient_vars(A, False)
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = [0] * A.rank
        for _ in range(rng.randint(0, max_order)):
            alpha[rng.randrange(A.rank)] += 1
        alpha = tuple(alpha)
        terms[alpha] = terms.get(alpha, Poly()) + poly(rng, names, base_degree, 2)
    return U.element(terms)


def homogeneous_element(rng: random.Random, U: EnvelopingAlgebra, order: int,
                        base_degree: int = 1) -> UEAElement:
    """Random element whose top-order part is nonzero and of exactly ``order``."""
    while True:
        a = element(rng, U, order, base_degree=base_degree)
        top = U.element({alpha: _nonzero(rng, U, base_degree)
                         for alpha in [_random_alpha(rng, U.rank, order)]})
        a = a + top
        if a.order == order:
            return a


def _nonzero(rng, U, base_degree):
    names = _coefficient_vars(U.algebroid, False)
    while True:
        p = poly(rng, names, base_degree, 2)
        if p:
            return p


def _random_alpha(rng, n, order):
    alpha = [0] * n
    for _ in range(order):
        alpha[rng.randrange(n)] += 1
    return tuple(alpha)


def word(rng: random.Random, A: Algebroid, max_length: int, *,
         function_rate: float = 0.3) -> FreeWord:
    """Random free word mixing generators and base functions."""
    names = _coefficient_vars(A, False)
    letters = []
    for _ in range(rng.randint(0, max_length)):
        if names and rng.random() < function_rate:
            f = poly(rng, names, 2, 2)
            letters.append(f if f else ONE)
        else:
            letters.append(rng.randrange(A.rank))
    return FreeWord(letters, rational(rng) or 1)


def kernel(rng: random.Random, G: FiniteGroupoid, dims=None, density: float = 0.6) -> ReducedKernel:
    dims = dims or {x: 1 for x in G.units}
    values = {}
    for g in G.arrows:
        m, n = dims[G.r[g]], dims[G.d[g]]
        if rng.random() < density:
            values[g] = [[rational(rng) for _ in range(n)] for _ in range(m)]
    return ReducedKernel(G, values, dims)


def section(rng: random.Random, dims) -> dict:
    return {x: tuple(rational(rng) for _ in range(n)) for x, n in dims.items()}


def all_alphas(n: int, max_order: int):
    for alpha in product(range(max_order + 1), repeat=n):
        if sum(alpha) <= max_order:
            yield alpha
