"""Named example algebroids and finite groupoids used as fixtures.

Constructors are memoized, so repeated calls return the same object and
elements built from them share one enveloping algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Union

from .algebroid import Algebroid
from .groupoid import (FiniteGroupoid, cyclic_group, group_groupoid, pair_groupoid,
                       transformation_groupoid)
from .poly import parse_poly


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # "algebroid" or "groupoid"
    payload: Union[Algebroid, FiniteGroupoid]


def _p(s):
    return parse_poly(s)


@cache
def tangent(k: int) -> Algebroid:
    """TR^k with the coordinate frame: identity anchor, zero bracket."""
    anchor = [[1 if a == i else 0 for a in range(k)] for i in range(k)]
    return Algebroid.from_brackets(k, k, anchor, {}, name=f"tangent_R{k}")


@cache
def so3() -> Algebroid:
    return Algebroid.from_brackets(
        0, 3, [[], [], []],
        {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]}, name="so3")


@cache
def heisenberg() -> Algebroid:
    return Algebroid.from_brackets(0, 3, [[], [], []], {(0, 1): [0, 0, 1]}, name="heisenberg")


@cache
def affine2() -> Algebroid:
    """Nonabelian 2-dimensional Lie algebra, [e1, e2] = e1."""
    return Algebroid.from_brackets(0, 2, [[], []], {(0, 1): [1, 0]}, name="aff2")


@cache
def euler_field() -> Algebroid:
    """Transformation algebroid of x d/dx on the line."""
    return Algebroid.from_brackets(1, 1, [[_p("x1")]], {}, name="euler_field")


@cache
def affine_action() -> Algebroid:
    """Action algebroid of d/dx, x d/dx on the line; [e1, e2] = e1."""
    return Algebroid.from_brackets(1, 2, [[1], [_p("x1")]], {(0, 1): [1, 0]},
                                   name="aff_action")


@cache
def twisted_frame() -> Algebroid:
    """TR^2 in the frame e1 = d1, e2 = d2 + x1 x2 d1; [e1, e2] = x2 e1."""
    return Algebroid.from_brackets(2, 2, [[1, 0], [_p("x1*x2"), 1]],
                                   {(0, 1): [_p("x2"), 0]}, name="twisted_frame")


BASE_ALGEBROIDS = (
    lambda: tangent(1), lambda: tangent(2), so3, heisenberg, affine2,
    euler_field, affine_action, twisted_frame,
)


def _orbit_action(x: int, g: int) -> int:
    # Z/3 acting freely on 6 points: two orbits {0,1,2}, {3,4,5}
    return 3 * (x // 3) + (x % 3 + g) % 3


@cache
def z3_on_six() -> FiniteGroupoid:
    return transformation_groupoid(range(6), cyclic_group(3), _orbit_action, name="z3_on_6")


@cache
def cyclic(n: int) -> FiniteGroupoid:
    return group_groupoid(cyclic_group(n), name=f"z{n}")


@cache
def pair(n: int) -> FiniteGroupoid:
    return pair_groupoid(range(1, n + 1))


def catalog() -> list[CatalogEntry]:
    entries = []
    bases = [make() for make in BASE_ALGEBROIDS]
    for A in bases:
        entries.append(CatalogEntry(A.name, "algebroid", A))
    for A in bases:
        At = A.adiabatic()
        entries.append(CatalogEntry(At.name, "algebroid", At))
    groupoids = [pair(n) for n in range(3, 7)] + [cyclic(3), cyclic(4), z3_on_six()]
    for G in groupoids:
        entries.append(CatalogEntry(G.name, "groupoid", G))
    return entries


def get(name: str):
    for entry in catalog():
        if entry.name == name:
            return entry.payload
    raise KeyError(name)


def algebroids(*, adiabatic_too: bool = True) -> list[Algebroid]:
    return [e.payload for e in catalog() if e.kind == "algebroid"
            and (adiabatic_too or not e.payload.is_adiabatic)]


def groupoids() -> list[FiniteGroupoid]:
    return [e.payload for e in catalog() if e.kind == "groupoid"]
