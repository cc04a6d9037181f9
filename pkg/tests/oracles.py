"""Brute-force reference computations that avoid the fast code paths.

Everything here goes through the word rewrite system only: no memoized
left multiplication, no recursive symmetrization.
"""

from fractions import Fraction
from itertools import permutations
from math import factorial

from algebroids.poly import ONE, ZERO, Poly
from algebroids.uea import FreeWord, UEAElement


def gens_of(alpha):
    return [i for i, e in enumerate(alpha) for _ in range(e)]


def brute_symmetrize(U, alpha, coeff=ONE):
    """(1/m!) sum over all m! orderings of the generator multiset."""
    letters = gens_of(alpha)
    m = len(letters)
    total = U.zero
    for perm in permutations(letters):
        total = total + U.normal_form(FreeWord(perm))
    scaled = {a: c * Fraction(1, factorial(m)) * coeff for a, c in total.terms.items()}
    return UEAElement(U, scaled)


def brute_quantize(U, f):
    A = U.algebroid
    out = U.zero
    for alpha, h in f.split(A.fiber_vars).items():
        out = out + brute_symmetrize(U, alpha, h)
    return out


def word_product(U, a, b):
    """Multiply by concatenating words and rewriting."""
    out = U.zero
    for alpha, f in a.terms.items():
        for beta, g in b.terms.items():
            letters = gens_of(alpha) + [g] + gens_of(beta)
            out = out + U.normal_form(FreeWord(letters, f))
    return out


def brute_symbol(U, a):
    """Back-substitution against brute-force symmetrization."""
    xi = [Poly.var(v) for v in U.algebroid.fiber_vars]
    result = ZERO
    rem = a
    while not rem.is_zero():
        m = rem.order
        for alpha, c in list(rem.terms.items()):
            if sum(alpha) != m:
                continue
            mono = ONE
            for v, e in zip(xi, alpha):
                mono = mono * v ** e
            result = result + c * mono
            rem = rem - brute_symmetrize(U, alpha, c)
    return result


def brute_star(A, f, g):
    from algebroids.uea import enveloping

    U = enveloping(A.adiabatic())
    return brute_symbol(U, word_product(U, brute_quantize(U, f), brute_quantize(U, g)))


def matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][l] * b[l][j] for l in range(k)), Fraction(0)) for j in range(m)]
            for i in range(n)]
