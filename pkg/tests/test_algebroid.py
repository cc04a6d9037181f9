import random

import pytest

from algebroids import catalog as cat
from algebroids import sampling
from algebroids.algebroid import (Algebroid, Section, UniverseError, adiabatic, bracket,
                                  check_axioms, poisson)
from algebroids.poly import Poly, parse_poly
from conftest import ALGEBROIDS, ids

P = parse_poly


def so3_jacobi_by_hand(c):
    """sum_m c_ij^m c_ml^p + cyclic, for constant structure constants."""
    n = len(c)
    bad = []
    for i in range(n):
        for j in range(n):
            for l in range(n):
                for p in range(n):
                    total = sum(c[i][j][m] * c[m][l][p] + c[j][l][m] * c[m][i][p]
                                + c[l][i][m] * c[m][j][p] for m in range(n))
                    if total:
                        bad.append((i, j, l, p))
    return bad


def test_tangent_r2_passes():
    assert check_axioms(cat.tangent(2)).ok


def test_so3_passes_and_matches_hand_expansion():
    A = cat.so3()
    consts = [[[c.constant_term() for c in ck] for ck in row] for row in A.structure]
    assert so3_jacobi_by_hand(consts) == []
    report = check_axioms(A)
    assert report.ok
    assert report.jacobi == {(1, 2, 3): True}


def test_symmetric_structure_reports_antisymmetry_failure():
    c = [[[Poly()] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][0] = Poly.const(1)
    c[1][0][0] = Poly.const(1)
    with pytest.raises(ValueError):
        Algebroid(0, 2, [[], []], c)
    report = check_axioms(Algebroid(0, 2, [[], []], c, strict=False))
    assert report.antisymmetry_failures == [(1, 2, 1)]
    assert not report.ok


def test_flipped_sign_in_so3_is_still_lie():
    # every sign pattern [e1,e2]=a e3, [e2,e3]=b e1, [e3,e1]=c e2 satisfies Jacobi
    A = Algebroid.from_brackets(0, 3, [[], [], []],
                                {(0, 1): [0, 0, -1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]})
    assert check_axioms(A).ok


def test_perturbed_structure_constant_breaks_jacobi():
    # [e1, e2] = e1 + e3: the cyclic sum reduces to [e1, e3] = -e2
    A = Algebroid.from_brackets(0, 3, [[], [], []],
                                {(0, 1): [1, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]})
    report = check_axioms(A)
    assert report.antisymmetry_failures == []
    assert report.jacobi_failures == [(1, 2, 3)]


def test_flipped_structure_constant_breaks_anchor():
    A = Algebroid.from_brackets(1, 2, [[1], [P("x1")]], {(0, 1): [-1, 0]})
    report = check_axioms(A)
    assert report.anchor_failures == [(1, 2)]
    assert report.antisymmetry_failures == [] and report.jacobi_failures == []


def test_bad_anchor_is_reported():
    # anchor e1 -> d/dx, e2 -> d/dx but [e1, e2] = e1 would need [d/dx, d/dx] = d/dx
    A = Algebroid.from_brackets(1, 2, [[1], [1]], {(0, 1): [1, 0]})
    assert check_axioms(A).anchor_failures == [(1, 2)]


def test_bracket_examples():
    T1 = cat.tangent(1)
    X = Section([1])
    assert bracket(T1, X, Section([P("x1")])) == Section([1])
    A = cat.so3()
    assert bracket(A, A.frame(0), A.frame(1)) == A.frame(2)


def test_bracket_rank_mismatch():
    with pytest.raises(ValueError):
        bracket(cat.so3(), Section([1, 0]), Section([0, 1, 0]))


def random_section(rng, A):
    return Section([sampling.poly(rng, A.base_vars, 2, 2) for _ in range(A.rank)])


@pytest.mark.parametrize("A", ALGEBROIDS, ids=ids(ALGEBROIDS))
def test_bracket_antisymmetric_and_leibniz(A, rng):
    names = list(A.coefficient_vars)
    for _ in range(20):
        X, Y = random_section(rng, A), random_section(rng, A)
        f = sampling.poly(rng, names, 2, 2)
        assert bracket(A, X, X).is_zero()
        assert bracket(A, X, Y) == -bracket(A, Y, X)
        lhs = bracket(A, X, Y.scale(f))
        rhs = bracket(A, X, Y).scale(f) + Y.scale(A.anchor_section(X, f))
        assert lhs == rhs


def test_poisson_examples():
    A = cat.so3()
    assert poisson(A, P("3"), P("1/2")) == Poly()
    assert poisson(A, P("xi1"), P("xi2")) == P("xi3")
    T1 = cat.tangent(1)
    assert poisson(T1, P("xi1"), P("x1^2")) == P("2*x1")
    assert poisson(T1, P("x1^2"), P("x1")) == Poly()


def test_poisson_rejects_foreign_variables():
    with pytest.raises(UniverseError):
        poisson(cat.so3(), P("x1"), P("xi1"))
    with pytest.raises(UniverseError):
        poisson(cat.so3(), P("xi4"), P("xi1"))


@pytest.mark.parametrize("A", ALGEBROIDS, ids=ids(ALGEBROIDS))
def test_poisson_degree_one_matches_bracket(A, rng):
    for _ in range(20):
        X, Y = random_section(rng, A), random_section(rng, A)
        got = poisson(A, A.section_to_fiber(X), A.section_to_fiber(Y))
        assert got == A.section_to_fiber(bracket(A, X, Y))


@pytest.mark.parametrize("A", ALGEBROIDS, ids=ids(ALGEBROIDS))
def test_poisson_antisymmetric(A, rng):
    for _ in range(20):
        f = sampling.fiber_poly(rng, A, 3)
        g = sampling.fiber_poly(rng, A, 3)
        assert poisson(A, f, g) == -poisson(A, g, f)


def test_adiabatic_slices():
    for A in cat.algebroids(adiabatic_too=False):
        At = adiabatic(A)
        assert At.is_adiabatic and At.rank == A.rank
        at1 = [[p.substitute({"t": 1}) for p in row] for row in At.anchor]
        assert at1 == [list(row) for row in A.anchor]
        s1 = [[[p.substitute({"t": 1}) for p in ck] for ck in row] for row in At.structure]
        assert s1 == [[list(ck) for ck in row] for row in A.structure]
        assert all(p.substitute({"t": 0}).is_zero() for row in At.anchor for p in row)
        assert all(p.substitute({"t": 0}).is_zero()
                   for row in At.structure for ck in row for p in ck)
        assert check_axioms(At).ok


def test_adiabatic_twice_rejected():
    with pytest.raises(ValueError):
        adiabatic(adiabatic(cat.so3()))


def test_adiabatic_poisson_scales_by_t():
    rng = random.Random(3)
    A = cat.twisted_frame()
    At = A.adiabatic()
    for _ in range(10):
        f, g = sampling.fiber_poly(rng, A, 2), sampling.fiber_poly(rng, A, 2)
        assert poisson(At, f, g) == Poly.var("t") * poisson(A, f, g)


def test_t_is_central_in_adiabatic_bracket():
    At = cat.tangent(1).adiabatic()
    assert poisson(At, P("xi1"), P("t")) == Poly()
    assert poisson(At, P("xi1"), P("x1")) == P("t")


def test_universe_checks_on_construction():
    with pytest.raises(UniverseError):
        Algebroid.from_brackets(1, 1, [[P("x2")]], {})
    with pytest.raises(UniverseError):
        Algebroid.from_brackets(1, 1, [[P("t")]], {})
    with pytest.raises(ValueError):
        Algebroid.from_brackets(0, 2, [[], []], {(1, 0): [1, 0]})
