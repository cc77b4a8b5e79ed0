from fractions import Fraction
from itertools import product as cartesian

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confalg.catalog import jordan_current, symmetric_matrices2, truncated_polynomial_algebra
from confalg.jordan import (DiffJordanCoalgebra, JordanConformalAlgebra, check_cocommutativity,
                            check_cojordan, check_jordan_commutativity, check_jordan_identity,
                            dualize_jordan, dualize_jordan_coalgebra, jordan_residual)
from confalg.polycore import LAM, ONE, Poly, d, lam, x, y

from strategies import polys

JORDAN_CATALOG = [truncated_polynomial_algebra(1), truncated_polynomial_algebra(2),
                  truncated_polynomial_algebra(3), symmetric_matrices2()]


def counterexample():
    # a o a = b, b o b = a, a o b = 0
    return jordan_current({(0, 0): {1: 1}, (1, 1): {0: 1}}, ("a", "b"))


# -- commutativity ----------------------------------------------------------------------------

def test_dual_numbers_commutative():
    assert check_jordan_commutativity(truncated_polynomial_algebra(2)).passed


def test_virasoro_type_product_not_commutative():
    rep = check_jordan_commutativity(JordanConformalAlgebra(1, {(0, 0): {0: 2 * lam + d}}))
    assert not rep.passed
    assert rep.witnesses[0][1] == 2 * (2 * lam + d)


def test_zero_product_commutative():
    assert check_jordan_commutativity(JordanConformalAlgebra(2)).passed


# -- Jordan identity ------------------------------------------------------------------------------

def test_dual_numbers_jordan_identity():
    assert check_jordan_identity(truncated_polynomial_algebra(2)).passed


def test_counterexample_residual():
    rep = check_jordan_identity(counterexample())
    assert not rep.passed
    # left side 0, each right-hand term is b o b = a
    assert dict(rep.witnesses)[(0, 0, 0, 0, 0)] == -3
    assert jordan_residual(counterexample(), 0, 0, 0, 0).coeffs == {0: Poly.const(-3)}


def test_zero_product_jordan_identity():
    assert check_jordan_identity(JordanConformalAlgebra(2)).passed


# -- co-Jordan ---------------------------------------------------------------------------------

def test_dual_of_dual_numbers():
    C = dualize_jordan(truncated_polynomial_algebra(2))
    assert isinstance(C, DiffJordanCoalgebra)
    assert C.Q(0) == {(0, 0): ONE}
    assert C.Q(1) == {(0, 1): ONE, (1, 0): ONE}
    assert check_cocommutativity(C).passed
    assert check_cojordan(C).passed


def test_zero_coproduct_cojordan():
    assert check_cojordan(DiffJordanCoalgebra(2)).passed


def test_antisymmetric_coproduct_not_cocommutative():
    assert not check_cocommutativity(DiffJordanCoalgebra(1, {0: {(0, 0): x - y}})).passed


def test_dual_of_counterexample_fails_cojordan():
    assert not check_cojordan(dualize_jordan(counterexample())).passed


def test_jordan_dual_round_trip():
    for J in JORDAN_CATALOG:
        assert dualize_jordan_coalgebra(dualize_jordan(J)) == J


@pytest.mark.parametrize("J", JORDAN_CATALOG, ids=lambda J: J.name)
def test_jordan_catalog(J):
    assert check_jordan_commutativity(J).passed
    assert check_jordan_identity(J).passed
    C = dualize_jordan(J)
    assert check_cocommutativity(C).passed
    assert check_cojordan(C).passed


# -- properties --------------------------------------------------------------------------------

def commutative_completion(rank, entries):
    """``P^{ji}(lam, d) := P^{ij}(-lam-d, d)`` from the ``i <= j`` entries."""
    table = {}
    for (i, j, k), p in entries.items():
        i, j = min(i, j), max(i, j)
        if i == j:
            p = (p + p.subst({LAM: -lam - d})) * Fraction(1, 2)
        table.setdefault((i, j), {})[k] = p
        if i != j:
            table.setdefault((j, i), {})[k] = p.subst({LAM: -lam - d})
    return JordanConformalAlgebra(rank, table)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_commutative_dualizes_to_cocommutative(rank, data):
    keys = st.tuples(*[st.integers(0, rank - 1)] * 3)
    entries = data.draw(st.dictionaries(keys, polys(("lam", "d"), 2), max_size=5))
    J = commutative_completion(rank, entries)
    assert check_jordan_commutativity(J).passed
    assert check_cocommutativity(dualize_jordan(J)).passed


def classical_residual(table, a, b, c, e):
    """``a((bc)e) + b((ca)e) + c((ab)e) - (ab)(ce) - (bc)(ae) - (ca)(be)`` from constants."""
    def mul(u, v):
        out = {}
        for i, ui in u.items():
            for j, vj in v.items():
                for k, ck in table.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + ui * vj * ck
        return {k: v for k, v in out.items() if v}

    def add(*vs, sign=1):
        out = {}
        for v in vs:
            for k, c_ in v.items():
                out[k] = out.get(k, 0) + sign * c_
        return out

    A, B, C, E = ({a: 1}, {b: 1}, {c: 1}, {e: 1})
    left = add(mul(A, mul(mul(B, C), E)), mul(B, mul(mul(C, A), E)), mul(C, mul(mul(A, B), E)))
    right = add(mul(mul(A, B), mul(C, E)), mul(mul(B, C), mul(A, E)), mul(mul(C, A), mul(B, E)))
    total = add(left, add(right, sign=-1))
    return {k: v for k, v in total.items() if v}


def _product_algebra(*factors):
    """Direct product of constant-structure commutative algebras given as (dim, table)."""
    table, off = {}, 0
    for dim, t in factors:
        for (i, j), row in t.items():
            table[(i + off, j + off)] = {k + off: c for k, c in row.items()}
        off += dim
    return off, table


Q1 = (1, {(0, 0): {0: 1}})
QT2 = (2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})
QT3 = (3, {(i, j): {i + j: 1} for i in range(3) for j in range(3) if i + j < 3})
QST = (3, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}})
ASSOCIATIVE = [Q1, QT2, QT3, QST, _product_algebra(Q1, Q1), _product_algebra(Q1, Q1, Q1),
               _product_algebra(Q1, QT2)]


def _agrees_with_classical(dim, table):
    J = jordan_current(table, tuple(f"u{i}" for i in range(dim)))
    rep_ok = check_jordan_identity(J).passed
    classical_ok = True
    for a, b, c, e in cartesian(range(dim), repeat=4):
        res = jordan_residual(J, a, b, c, e)
        want = classical_residual(table, a, b, c, e)
        assert res.coeffs == {k: Poly.const(v) for k, v in want.items()}
        classical_ok = classical_ok and not want
    return rep_ok == classical_ok and rep_ok


@pytest.mark.parametrize("alg", ASSOCIATIVE, ids=lambda a: f"dim{a[0]}-{len(a[1])}")
def test_current_of_associative_matches_classical(alg):
    assert _agrees_with_classical(*alg)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.data())
def test_constant_products_match_classical_identity(dim, data):
    coeff = st.integers(-2, 2)
    table = {}
    for i in range(dim):
        for j in range(i, dim):
            row = {k: data.draw(coeff) for k in range(dim)}
            row = {k: v for k, v in row.items() if v}
            if row:
                table[(i, j)] = row
                table[(j, i)] = dict(row)
    J = jordan_current(table, tuple(f"u{i}" for i in range(dim)))
    classical_ok = True
    for a, b, c, e in cartesian(range(dim), repeat=4):
        res = jordan_residual(J, a, b, c, e)
        want = classical_residual(table, a, b, c, e)
        assert res.coeffs == {k: Poly.const(v) for k, v in want.items()}
        classical_ok = classical_ok and not want
    assert check_jordan_identity(J).passed == classical_ok
    if classical_ok:
        assert check_cojordan(dualize_jordan(J)).passed
