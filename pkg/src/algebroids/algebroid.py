"""Trivialized Lie algebroids over a single polynomial chart.

A rank-n algebroid over coordinates ``x1 .. xk`` is given by its anchor
(``anchor[i][a]`` is the coefficient of d/dx_a in the image of the frame
section e_i) and structure functions ``structure[i][j][k]`` with
[e_i, e_j] = sum_k structure[i][j][k] e_k.  Indices are 0-based in code and
1-based in reports and files.

Functions on the dual bundle A* that are polynomial along the fibers are
plain :class:`Poly` values in the variables ``x*``, ``xi*`` and, for an
adiabatic algebroid, ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from .poly import ONE, ZERO, Poly

T = "t"


def base_var(a: int) -> str:
    return f"x{a + 1}"


def fiber_var(i: int) -> str:
    return f"xi{i + 1}"


class UniverseError(ValueError):
    """A polynomial mentions variables outside the algebroid's universe."""


class Section:
    """A section sum_i components[i] * e_i of the algebroid."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Poly]):
        self.components = tuple(Poly.coerce(c) for c in components)

    @property
    def rank(self) -> int:
        return len(self.components)

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other: "Section") -> "Section":
        _same_rank(self, other)
        return Section([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "Section") -> "Section":
        _same_rank(self, other)
        return Section([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "Section":
        return Section([-a for a in self.components])

    def scale(self, f) -> "Section":
        """Multiply every component by a function (or rational)."""
        return Section([f * c for c in self.components])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __repr__(self):
        return "Section(" + ", ".join(str(c) for c in self.components) + ")"


def _same_rank(X: Section, Y: Section) -> None:
    if X.rank != Y.rank:
        raise ValueError(f"rank mismatch: {X.rank} vs {Y.rank}")


@dataclass
class AxiomReport:
    """Outcome of :func:`check_axioms`; indices are 1-based."""

    antisymmetry: dict = field(default_factory=dict)    # (i, j, k) -> bool, i <= j
    anchor_morphism: dict = field(default_factory=dict)  # (i, j) -> bool, i < j
    jacobi: dict = field(default_factory=dict)           # (i, j, l) -> bool, i < j < l

    @staticmethod
    def _failures(table):
        return sorted(k for k, ok in table.items() if not ok)

    @property
    def antisymmetry_failures(self):
        return self._failures(self.antisymmetry)

    @property
    def anchor_failures(self):
        return self._failures(self.anchor_morphism)

    @property
    def jacobi_failures(self):
        return self._failures(self.jacobi)

    @property
    def ok(self) -> bool:
        return not (self.antisymmetry_failures or self.anchor_failures or self.jacobi_failures)

    def lines(self) -> list[str]:
        def status(fails):
            return "PASS" if not fails else "FAIL at " + ", ".join(
                "(" + ",".join(map(str, idx)) + ")" for idx in fails)

        return [
            f"antisymmetry: {status(self.antisymmetry_failures)}",
            f"anchor: {status(self.anchor_failures)}",
            f"jacobi: {status(self.jacobi_failures)}",
        ]


class Algebroid:
    """Lie algebroid data over one chart.

    Construction enforces antisymmetry of the structure functions unless
    ``strict=False``; the non-strict form exists so that deliberately broken
    data can be fed to :func:`check_axioms`.
    """

    def __init__(self, base_dim: int, rank: int, anchor, structure, *,
                 adiabatic: bool = False, name: str | None = None, strict: bool = True):
        if base_dim < 0 or rank < 1:
            raise ValueError("need base_dim >= 0 and rank >= 1")
        anchor = tuple(tuple(Poly.coerce(p) for p in row) for row in anchor)
        if len(anchor) != rank or any(len(row) != base_dim for row in anchor):
            raise ValueError(f"anchor must be a {rank}x{base_dim} matrix")
        structure = tuple(tuple(tuple(Poly.coerce(p) for p in ck) for ck in row)
                          for row in structure)
        if len(structure) != rank or any(
                len(row) != rank or any(len(ck) != rank for ck in row) for row in structure):
            raise ValueError(f"structure must be a {rank}x{rank}x{rank} array")
        self.base_dim = base_dim
        self.rank = rank
        self.anchor = anchor
        self.structure = structure
        self.is_adiabatic = adiabatic
        self.name = name
        allowed = set(self.base_vars) | ({T} if adiabatic else set())
        for p in [p for row in anchor for p in row] + [
                p for row in structure for ck in row for p in ck]:
            bad = set(p.variables) - allowed
            if bad:
                raise UniverseError(f"coefficient {p} mentions {sorted(bad)}")
        if strict:
            bad = _antisymmetry_table(structure)
            failures = [idx for idx, ok in bad.items() if not ok]
            if failures:
                raise ValueError(f"structure functions not antisymmetric at {failures[0]}")

    @classmethod
    def from_brackets(cls, base_dim: int, rank: int, anchor,
                      brackets: Mapping[tuple, Sequence], **kw) -> "Algebroid":
        """Build from brackets ``{(i, j): [c_ij^1, ..., c_ij^n]}`` with i < j (0-based)."""
        structure = [[[ZERO] * rank for _ in range(rank)] for _ in range(rank)]
        for (i, j), coeffs in brackets.items():
            if not 0 <= i < j < rank:
                raise ValueError(f"bracket index ({i + 1},{j + 1}) must satisfy i < j")
            for k, c in enumerate(coeffs):
                c = Poly.coerce(c)
                structure[i][j][k] = c
                structure[j][i][k] = -c
        return cls(base_dim, rank, anchor, structure, **kw)

    # -- variable universe -------------------------------------------------

    @cached_property
    def base_vars(self) -> tuple[str, ...]:
        return tuple(base_var(a) for a in range(self.base_dim))

    @cached_property
    def fiber_vars(self) -> tuple[str, ...]:
        return tuple(fiber_var(i) for i in range(self.rank))

    @cached_property
    def coefficient_vars(self) -> frozenset:
        return frozenset(self.base_vars) | ({T} if self.is_adiabatic else frozenset())

    def check_function(self, f: Poly, *, allow_t: bool = False) -> Poly:
        f = Poly.coerce(f)
        allowed = self.coefficient_vars | ({T} if allow_t else frozenset())
        bad = set(f.variables) - allowed
        if bad:
            raise UniverseError(f"{f} mentions {sorted(bad)}, not functions on the base")
        return f

    def check_fiber_poly(self, f: Poly, *, allow_t: bool = False) -> Poly:
        f = Poly.coerce(f)
        allowed = self.coefficient_vars | set(self.fiber_vars) | ({T} if allow_t else frozenset())
        bad = set(f.variables) - allowed
        if bad:
            raise UniverseError(f"{f} mentions {sorted(bad)}, outside this algebroid")
        return f

    # -- elementary operations ----------------------------------------------

    def anchor_apply(self, i: int, f: Poly) -> Poly:
        """The vector field rho(e_i) applied to a function."""
        out = ZERO
        for a, coeff in enumerate(self.anchor[i]):
            if coeff:
                df = f.partial(base_var(a))
                if df:
                    out = out + coeff * df
        return out

    def anchor_section(self, X: Section, f: Poly) -> Poly:
        out = ZERO
        for i, xi in enumerate(X.components):
            if xi:
                out = out + xi * self.anchor_apply(i, f)
        return out

    def frame(self, i: int) -> Section:
        return Section([ONE if k == i else ZERO for k in range(self.rank)])

    def section_to_fiber(self, X: Section) -> Poly:
        self._check_section(X)
        out = ZERO
        for i, c in enumerate(X.components):
            out = out + c * Poly.var(fiber_var(i))
        return out

    def fiber_to_section(self, f: Poly) -> Section:
        """Inverse of :meth:`section_to_fiber` on fiber-linear polynomials."""
        parts = self.check_fiber_poly(f, allow_t=True).split(self.fiber_vars)
        comps = [ZERO] * self.rank
        for alpha, c in parts.items():
            if sum(alpha) != 1:
                raise ValueError(f"{f} is not linear in the fiber variables")
            comps[alpha.index(1)] = c
        return Section(comps)

    def _check_section(self, X: Section) -> None:
        if X.rank != self.rank:
            raise ValueError(f"rank mismatch: section has {X.rank}, algebroid {self.rank}")

    @cached_property
    def _adiabatic(self) -> "Algebroid":
        return adiabatic(self)

    def adiabatic(self) -> "Algebroid":
        return self._adiabatic

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        kind = " adiabatic" if self.is_adiabatic else ""
        return f"<Algebroid{label}{kind} base_dim={self.base_dim} rank={self.rank}>"


def _antisymmetry_table(structure) -> dict:
    n = len(structure)
    table = {}
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                table[(i + 1, j + 1, k + 1)] = (structure[i][j][k] + structure[j][i][k]).is_zero()
    return table


def bracket(A: Algebroid, X: Section, Y: Section) -> Section:
    """Bracket of sections, extended from the frame by the Leibniz rule."""
    A._check_section(X)
    A._check_section(Y)
    n = A.rank
    comps = [ZERO] * n
    for i, xi in enumerate(X.components):
        if not xi:
            continue
        for j, yj in enumerate(Y.components):
            if not yj:
                continue
            prod = None
            for k, c in enumerate(A.structure[i][j]):
                if c:
                    if prod is None:
                        prod = xi * yj
                    comps[k] = comps[k] + prod * c
    for k in range(n):
        comps[k] = comps[k] + A.anchor_section(X, Y.components[k]) - A.anchor_section(Y, X.components[k])
    return Section(comps)


def poisson(A: Algebroid, f: Poly, g: Poly) -> Poly:
    """Lie-Poisson bracket of fiberwise-polynomial functions on A*.

    {xi_i, xi_j} = sum_k c_ij^k xi_k, {xi_i, h} = rho(e_i) h and functions on
    the base Poisson-commute; extended as a biderivation.  ``t`` is treated
    as a central parameter.
    """
    f = A.check_fiber_poly(f, allow_t=True)
    g = A.check_fiber_poly(g, allow_t=True)
    xis = A.fiber_vars
    df = [f.partial(v) for v in xis]
    dg = [g.partial(v) for v in xis]
    out = ZERO
    for i in range(A.rank):
        for j in range(A.rank):
            if not df[i] or not dg[j]:
                continue
            lin = ZERO
            for k, c in enumerate(A.structure[i][j]):
                if c:
                    lin = lin + c * Poly.var(xis[k])
            if lin:
                out = out + df[i] * dg[j] * lin
    for a, xa in enumerate(A.base_vars):
        fa = f.partial(xa)
        ga = g.partial(xa)
        if not fa and not ga:
            continue
        for i in range(A.rank):
            rho = A.anchor[i][a]
            if not rho:
                continue
            term = df[i] * ga - fa * dg[i]
            if term:
                out = out + rho * term
    return out


def check_axioms(A: Algebroid) -> AxiomReport:
    """Verify antisymmetry, the anchor morphism property and Jacobi exactly."""
    report = AxiomReport()
    report.antisymmetry = _antisymmetry_table(A.structure)
    n = A.rank
    for i, j in combinations(range(n), 2):
        ok = True
        for a in range(A.base_dim):
            lhs = ZERO
            for k, c in enumerate(A.structure[i][j]):
                if c:
                    lhs = lhs + c * A.anchor[k][a]
            rhs = A.anchor_apply(i, A.anchor[j][a]) - A.anchor_apply(j, A.anchor[i][a])
            if lhs != rhs:
                ok = False
                break
        report.anchor_morphism[(i + 1, j + 1)] = ok
    frame_brackets = {}

    def fb(i, j):
        if (i, j) not in frame_brackets:
            frame_brackets[(i, j)] = Section(A.structure[i][j])
        return frame_brackets[(i, j)]

    for i, j, l in combinations(range(n), 3):
        total = (bracket(A, fb(i, j), A.frame(l))
                 + bracket(A, fb(j, l), A.frame(i))
                 + bracket(A, fb(l, i), A.frame(j)))
        report.jacobi[(i + 1, j + 1, l + 1)] = total.is_zero()
    return report


def adiabatic(A: Algebroid) -> Algebroid:
    """The adiabatic algebroid: anchor and bracket scaled by ``t``."""
    if A.is_adiabatic:
        raise ValueError("algebroid is already adiabatic")
    t = Poly.var(T)
    anchor = [[t * p for p in row] for row in A.anchor]
    structure = [[[t * p for p in ck] for ck in row] for row in A.structure]
    name = f"{A.name}_t" if A.name else None
    return Algebroid(A.base_dim, A.rank, anchor, structure,
                     adiabatic=True, name=name)
