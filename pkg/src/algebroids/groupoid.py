"""Finite groupoids, their convolution algebras and representations.

Everything is exact: kernels take values in rational matrices (blocks of
shape dim(r(g)) x dim(d(g))), fibers G_x = d^{-1}(x) carry counting measure,
and matrices are tuples of tuples of :class:`~fractions.Fraction`.

Conventions: an arrow g goes from d(g) to r(g); a product gh is defined when
d(g) = r(h), and then d(gh) = d(h), r(gh) = r(g).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


# -- small exact matrix helpers ---------------------------------------------


def matrix(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(m: int, n: int) -> Matrix:
    return tuple((Fraction(0),) * n for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def shape(a: Matrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise ValueError(f"shape mismatch {shape(a)} @ {shape(b)}")
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
                 for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} + {shape(b)}")
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> tuple:
    if shape(a)[1] != len(v):
        raise ValueError(f"shape mismatch {shape(a)} @ vector of length {len(v)}")
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


# -- groupoids ----------------------------------------------------------------


@dataclass
class GroupoidReport:
    """Counterexamples found by :func:`check_groupoid` (empty lists mean pass)."""

    structure: list = field(default_factory=list)    # r, d of products and associativity
    units: list = field(default_factory=list)
    inverses: list = field(default_factory=list)
    composable: list = field(default_factory=list)   # mul defined exactly on composable pairs

    @property
    def ok(self) -> bool:
        return not (self.structure or self.units or self.inverses or self.composable)

    def lines(self) -> list[str]:
        def status(items):
            if not items:
                return "PASS"
            shown = "; ".join(str(x) for x in items[:5])
            more = f" (+{len(items) - 5} more)" if len(items) > 5 else ""
            return f"FAIL {shown}{more}"

        return [
            f"composable pairs: {status(self.composable)}",
            f"products: {status(self.structure)}",
            f"units: {status(self.units)}",
            f"inverses: {status(self.inverses)}",
        ]


class FiniteGroupoid:
    """Structure tables of a finite groupoid.

    ``mul`` maps composable pairs (g, h) to gh.  The tables are not validated
    beyond referential sanity; run :func:`check_groupoid` for the axioms.
    """

    def __init__(self, units: Iterable[Hashable], arrows: Mapping[Hashable, tuple],
                 mul: Mapping[tuple, Hashable], inv: Mapping[Hashable, Hashable],
                 unit_arrows: Mapping[Hashable, Hashable], name: str | None = None):
        self.units = tuple(units)
        self.arrows = tuple(arrows)
        self.d = {g: dr[0] for g, dr in arrows.items()}
        self.r = {g: dr[1] for g, dr in arrows.items()}
        self.mul = dict(mul)
        self.inv = dict(inv)
        self.unit_arrow = dict(unit_arrows)
        self.name = name
        unit_set, arrow_set = set(self.units), set(self.arrows)
        if len(unit_set) != len(self.units) or len(arrow_set) != len(self.arrows):
            raise ValueError("duplicate unit or arrow id")
        for g in self.arrows:
            if self.d[g] not in unit_set or self.r[g] not in unit_set:
                raise ValueError(f"arrow {g!r} has an unknown source or target")
        for (g, h), gh in self.mul.items():
            if g not in arrow_set or h not in arrow_set or gh not in arrow_set:
                raise ValueError(f"product table mentions unknown arrow in {(g, h, gh)!r}")
        if set(self.inv) != arrow_set or not set(self.inv.values()) <= arrow_set:
            raise ValueError("inverse table must be a map from arrows to arrows")
        if set(self.unit_arrow) != unit_set or not set(self.unit_arrow.values()) <= arrow_set:
            raise ValueError("unit table must map every unit to an arrow")
        self._fibers = {x: [] for x in self.units}
        self._targets = {x: [] for x in self.units}
        for g in self.arrows:
            self._fibers[self.d[g]].append(g)
            self._targets[self.r[g]].append(g)

    def source_fiber(self, x) -> list:
        """G_x = d^{-1}(x), in arrow order."""
        return self._fibers[x]

    def target_fiber(self, x) -> list:
        return self._targets[x]

    def compose(self, g, h):
        try:
            return self.mul[(g, h)]
        except KeyError:
            raise ValueError(f"arrows {g!r}, {h!r} are not composable") from None

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FiniteGroupoid{label} units={len(self.units)} arrows={len(self.arrows)}>"


def check_groupoid(G: FiniteGroupoid) -> GroupoidReport:
    """Exhaustively verify the groupoid axioms on all (composable) tuples."""
    rep = GroupoidReport()
    for g, h in product(G.arrows, repeat=2):
        composable = G.d[g] == G.r[h]
        defined = (g, h) in G.mul
        if composable != defined:
            rep.composable.append(("undefined" if composable else "spurious", g, h))
            continue
        if defined:
            gh = G.mul[(g, h)]
            if G.r[gh] != G.r[g] or G.d[gh] != G.d[h]:
                rep.structure.append(("range/source", g, h))
    for g, h, k in product(G.arrows, repeat=3):
        if (g, h) in G.mul and (h, k) in G.mul:
            gh, hk = G.mul[(g, h)], G.mul[(h, k)]
            left, right = G.mul.get((gh, k)), G.mul.get((g, hk))
            if left is None or left != right:
                rep.structure.append(("associativity", g, h, k))
    seen = {}
    for x in G.units:
        u = G.unit_arrow[x]
        if G.d[u] != x or G.r[u] != x:
            rep.units.append(("unit endpoints", x))
        if u in seen:
            rep.units.append(("unit not injective", seen[u], x))
        seen[u] = x
    for g in G.arrows:
        ur, ud = G.unit_arrow[G.r[g]], G.unit_arrow[G.d[g]]
        if G.mul.get((ur, g)) != g or G.mul.get((g, ud)) != g:
            rep.units.append(("unit law", g))
        gi = G.inv[g]
        if G.mul.get((g, gi)) != ur or G.mul.get((gi, g)) != ud:
            rep.inverses.append(("inverse law", g))
    return rep


# -- named constructions --------------------------------------------------------


def pair_groupoid(points: Sequence) -> FiniteGroupoid:
    """Arrows are ordered pairs (x, y) from y to x; (x, y)(y, z) = (x, z)."""
    points = [str(p) for p in points]

    def a(x, y):
        return f"({x},{y})"

    arrows = {a(x, y): (y, x) for x in points for y in points}
    mul = {(a(x, y), a(y, z)): a(x, z) for x in points for y in points for z in points}
    inv = {a(x, y): a(y, x) for x in points for y in points}
    units = {x: a(x, x) for x in points}
    return FiniteGroupoid(points, arrows, mul, inv, units, name=f"pair{len(points)}")


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple
    op: Mapping  # (g, h) -> gh
    identity: Hashable

    def inverse(self, g):
        return next(h for h in self.elements if self.op[(g, h)] == self.identity)


def cyclic_group(n: int) -> FiniteGroup:
    elems = tuple(range(n))
    return FiniteGroup(elems, {(a, b): (a + b) % n for a in elems for b in elems}, 0)


def group_groupoid(group: FiniteGroup, name: str | None = None) -> FiniteGroupoid:
    """A group as a groupoid with the single unit ``"*"``."""
    ids = {g: str(g) for g in group.elements}
    arrows = {ids[g]: ("*", "*") for g in group.elements}
    mul = {(ids[g], ids[h]): ids[group.op[(g, h)]] for g in group.elements for h in group.elements}
    inv = {ids[g]: ids[group.inverse(g)] for g in group.elements}
    return FiniteGroupoid(["*"], arrows, mul, inv, {"*": ids[group.identity]}, name=name)


def transformation_groupoid(points: Sequence, group: FiniteGroup,
                            action: Callable | Mapping, name: str | None = None) -> FiniteGroupoid:
    """Groupoid of a right action: arrows (x, g) with r = x, d = x.g.

    (x, g)(x.g, h) = (x, gh).  ``action`` is a callable or a mapping
    ``(x, g) -> x.g``.
    """
    act = action if callable(action) else (lambda x, g: action[(x, g)])
    pts = list(points)
    table = {}
    for x in pts:
        for g in group.elements:
            try:
                y = act(x, g)
            except (KeyError, TypeError) as exc:
                raise ValueError(f"action undefined at {(x, g)!r}") from exc
            if y not in pts:
                raise ValueError(f"action maps {(x, g)!r} outside the point set")
            table[(x, g)] = y
    for x in pts:
        if table[(x, group.identity)] != x:
            raise ValueError(f"identity does not fix {x!r}")
        for g in group.elements:
            for h in group.elements:
                if table[(table[(x, g)], h)] != table[(x, group.op[(g, h)])]:
                    raise ValueError(f"not a right action at {(x, g, h)!r}")

    def a(x, g):
        return f"({x},{g})"

    arrows = {a(x, g): (str(table[(x, g)]), str(x)) for x in pts for g in group.elements}
    mul = {}
    for x in pts:
        for g in group.elements:
            for h in group.elements:
                mul[(a(x, g), a(table[(x, g)], h))] = a(x, group.op[(g, h)])
    inv = {a(x, g): a(table[(x, g)], group.inverse(g)) for x in pts for g in group.elements}
    units = {str(x): a(x, group.identity) for x in pts}
    return FiniteGroupoid([str(x) for x in pts], arrows, mul, inv, units, name=name)


# -- kernels, families, representations --------------------------------------


class ReducedKernel:
    """A matrix-valued function on the arrows (the convolution algebra)."""

    __slots__ = ("groupoid", "dims", "values")

    def __init__(self, groupoid: FiniteGroupoid, values: Mapping, dims: Mapping | None = None):
        self.groupoid = groupoid
        vals = {g: matrix(v) for g, v in values.items()}
        if set(vals) - set(groupoid.arrows):
            raise ValueError(f"unknown arrows {sorted(set(vals) - set(groupoid.arrows))}")
        if dims is None:
            dims = {}
            for x in groupoid.units:
                u = groupoid.unit_arrow[x]
                dims[x] = shape(vals[u])[0] if u in vals else 1
        self.dims = dict(dims)
        for g in groupoid.arrows:
            want = (self.dims[groupoid.r[g]], self.dims[groupoid.d[g]])
            if g not in vals:
                vals[g] = zeros(*want)
            elif shape(vals[g]) != want:
                raise ValueError(f"block at {g!r} has shape {shape(vals[g])}, expected {want}")
        self.values = vals

    def __getitem__(self, g) -> Matrix:
        return self.values[g]

    def __eq__(self, other):
        if not isinstance(other, ReducedKernel):
            return NotImplemented
        return self.groupoid is other.groupoid and self.values == other.values

    __hash__ = None

    def __add__(self, other: "ReducedKernel") -> "ReducedKernel":
        _same_setting(self, other)
        return ReducedKernel(self.groupoid,
                             {g: mat_add(self[g], other[g]) for g in self.groupoid.arrows},
                             self.dims)

    def support(self) -> set:
        return {g for g, v in self.values.items() if not is_zero(v)}

    def __repr__(self):
        return f"ReducedKernel({len(self.support())} nonzero blocks on {self.groupoid!r})"


def _same_setting(a, b) -> None:
    if a.groupoid is not b.groupoid:
        raise ValueError("different groupoids")
    if a.dims != b.dims:
        raise ValueError("fiber dimension mismatch")


def delta_kernel(G: FiniteGroupoid, dims: Mapping | None = None) -> ReducedKernel:
    """Identity blocks on the unit arrows: the unit of the convolution algebra."""
    dims = dims or {x: 1 for x in G.units}
    return ReducedKernel(G, {G.unit_arrow[x]: identity(dims[x]) for x in G.units}, dims)


def convolve(f1: ReducedKernel, f2: ReducedKernel) -> ReducedKernel:
    """(f1 * f2)(g) = sum over h1 h2 = g of f1(h1) f2(h2)."""
    _same_setting(f1, f2)
    G = f1.groupoid
    out = {g: zeros(f1.dims[G.r[g]], f1.dims[G.d[g]]) for g in G.arrows}
    for (h1, h2), g in G.mul.items():
        a, b = f1[h1], f2[h2]
        if is_zero(a) or is_zero(b):
            continue
        out[g] = mat_add(out[g], mat_mul(a, b))
    return ReducedKernel(G, out, f1.dims)


def support_products(G: FiniteGroupoid, s1: set, s2: set) -> set:
    """{g1 g2 : g1 in s1, g2 in s2, composable}."""
    return {G.mul[(a, b)] for a in s1 for b in s2 if (a, b) in G.mul}


class InvarianceError(ValueError):
    """A family violates k_{r(g)}(h', h) = k_{d(g)}(h'g, hg); ``witness`` is (g, h, h')."""

    def __init__(self, witness):
        super().__init__(f"invariance fails at g={witness[0]!r}, h={witness[1]!r}, h'={witness[2]!r}")
        self.witness = witness


class InvariantFamily:
    """Per-unit kernels k_x(h', h) on G_x x G_x with blocks E_{r(h')} <- E_{r(h)}."""

    __slots__ = ("groupoid", "dims", "kernels")

    def __init__(self, groupoid: FiniteGroupoid, kernels: Mapping, dims: Mapping | None = None):
        self.groupoid = groupoid
        self.dims = dict(dims) if dims else {x: 1 for x in groupoid.units}
        self.kernels = {}
        for x in groupoid.units:
            fiber = groupoid.source_fiber(x)
            given = kernels.get(x, {})
            kx = {}
            for hp in fiber:
                for h in fiber:
                    want = (self.dims[groupoid.r[hp]], self.dims[groupoid.r[h]])
                    block = matrix(given[(hp, h)]) if (hp, h) in given else zeros(*want)
                    if shape(block) != want:
                        raise ValueError(f"block ({hp!r},{h!r}) at {x!r} has shape "
                                         f"{shape(block)}, expected {want}")
                    kx[(hp, h)] = block
            self.kernels[x] = kx

    def __eq__(self, other):
        if not isinstance(other, InvariantFamily):
            return NotImplemented
        return self.groupoid is other.groupoid and self.kernels == other.kernels

    __hash__ = None

    def invariance_violation(self):
        """First (g, h, h') breaking invariance, or None."""
        G = self.groupoid
        for g in G.arrows:
            x, y = G.r[g], G.d[g]
            for hp in G.source_fiber(x):
                hpg = G.mul[(hp, g)]
                for h in G.source_fiber(x):
                    if self.kernels[x][(hp, h)] != self.kernels[y][(hpg, G.mul[(h, g)])]:
                        return (g, h, hp)
        return None

    def check_invariance(self) -> None:
        witness = self.invariance_violation()
        if witness is not None:
            raise InvarianceError(witness)


def identity_family(G: FiniteGroupoid, dims: Mapping | None = None) -> InvariantFamily:
    dims = dims or {x: 1 for x in G.units}
    kernels = {x: {(h, h): identity(dims[G.r[h]]) for h in G.source_fiber(x)} for x in G.units}
    return InvariantFamily(G, kernels, dims)


def kernel_from_family(P: InvariantFamily) -> ReducedKernel:
    """k_P(g) = k_{d(g)}(g, u(d(g))); raises InvarianceError for non-invariant input."""
    P.check_invariance()
    G = P.groupoid
    vals = {g: P.kernels[G.d[g]][(g, G.unit_arrow[G.d[g]])] for g in G.arrows}
    return ReducedKernel(G, vals, P.dims)


def family_from_kernel(k: ReducedKernel) -> InvariantFamily:
    """k_x(h', h) = k(h' h^{-1})."""
    G = k.groupoid
    kernels = {}
    for x in G.units:
        fiber = G.source_fiber(x)
        kernels[x] = {(hp, h): k[G.mul[(hp, G.inv[h])]] for hp in fiber for h in fiber}
    return InvariantFamily(G, kernels, k.dims)


def compose_families(P: InvariantFamily, Q: InvariantFamily) -> InvariantFamily:
    """Per-unit operator product (PQ)_x = P_x Q_x with counting measure."""
    _same_setting(P, Q)
    G = P.groupoid
    kernels = {}
    for x in G.units:
        fiber = G.source_fiber(x)
        px, qx = P.kernels[x], Q.kernels[x]
        kx = {}
        for hp in fiber:
            for h in fiber:
                acc = zeros(P.dims[G.r[hp]], P.dims[G.r[h]])
                for m in fiber:
                    a, b = px[(hp, m)], qx[(m, h)]
                    if not is_zero(a) and not is_zero(b):
                        acc = mat_add(acc, mat_mul(a, b))
                kx[(hp, h)] = acc
        kernels[x] = kx
    out = InvariantFamily(G, kernels, P.dims)
    out.check_invariance()
    return out


class EquivariantBundle:
    """Vector spaces V_x with invertible rho(g): V_{d(g)} -> V_{r(g)}."""

    def __init__(self, groupoid: FiniteGroupoid, dims: Mapping, rho: Mapping):
        self.groupoid = groupoid
        self.dims = dict(dims)
        self.rho = {g: matrix(m) for g, m in rho.items()}
        for g in groupoid.arrows:
            if g not in self.rho:
                raise ValueError(f"rho missing at arrow {g!r}")
            want = (self.dims[groupoid.r[g]], self.dims[groupoid.d[g]])
            if shape(self.rho[g]) != want:
                raise ValueError(f"rho({g!r}) has shape {shape(self.rho[g])}, expected {want}")

    def functoriality_failures(self) -> list:
        G = self.groupoid
        bad = [("product", g, h) for (g, h), gh in G.mul.items()
               if mat_mul(self.rho[g], self.rho[h]) != self.rho[gh]]
        bad += [("unit", x) for x in G.units
                if self.rho[G.unit_arrow[x]] != identity(self.dims[x])]
        return bad


def trivial_bundle(G: FiniteGroupoid) -> EquivariantBundle:
    return EquivariantBundle(G, {x: 1 for x in G.units}, {g: identity(1) for g in G.arrows})


def represent(f: ReducedKernel, V: EquivariantBundle, phi: Mapping) -> dict:
    """(pi(f) phi)(x) = sum over h in G_x of f(h^{-1}) rho(h^{-1}) phi(r(h)).

    Block kernels act as ``f(h^{-1}) @ rho(h^{-1}) @ phi``; the homomorphism
    property then needs the blocks of f to commute with rho, which is
    automatic for scalar kernels.
    """
    G = f.groupoid
    if V.groupoid is not G:
        raise ValueError("kernel and bundle live on different groupoids")
    scalar = all(n == 1 for n in f.dims.values())
    if not scalar and f.dims != V.dims:
        raise ValueError("block kernel sizes must match the bundle ranks")
    out = {}
    for x in G.units:
        acc = (Fraction(0),) * V.dims[x]
        for h in G.source_fiber(x):
            hi = G.inv[h]
            block = f[hi]
            if is_zero(block):
                continue
            v = tuple(Fraction(c) for c in phi[G.r[h]])
            if len(v) != V.dims[G.r[h]]:
                raise ValueError(f"section value at {G.r[h]!r} has length {len(v)}")
            v = mat_vec(V.rho[hi], v)
            v = tuple(block[0][0] * c for c in v) if scalar else mat_vec(block, v)
            acc = tuple(a + b for a, b in zip(acc, v))
        out[x] = acc
    return out
