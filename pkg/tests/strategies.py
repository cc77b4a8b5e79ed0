"""Hypothesis strategies and small builders shared by the test modules."""
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from confalg.lca import Element, LieConformalAlgebra
from confalg.polycore import VAR_NAMES, Poly, Var

SYMBOLS = {name: sympy.Symbol(name) for name in VAR_NAMES}

small_rat = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
nonzero_rat = small_rat.filter(bool)


def polys(variables=("lam", "d"), max_degree=2, max_terms=4):
    """Random polynomials over ``variables`` with small rational coefficients."""
    exps = st.tuples(*[st.integers(0, max_degree) for _ in variables])
    monomials = st.lists(st.tuples(small_rat, exps), max_size=max_terms)

    def build(ms):
        out = Poly()
        for c, e in ms:
            out = out + Poly.monomial(c, **dict(zip(variables, e)))
        return out

    return monomials.map(build)


def d_polys(max_degree=3):
    return polys(("d",), max_degree=max_degree)


def elements(rank, max_degree=2):
    return st.lists(d_polys(max_degree), min_size=rank, max_size=rank).map(
        lambda cs: Element(dict(enumerate(cs))))


def skew_completed(rank, entries):
    """Algebra whose ``(j, i)`` entries are forced by skew-symmetry from the ``i <= j`` ones."""
    from confalg.polycore import LAM, d, lam
    table = {}
    for (i, j, k), p in entries.items():
        if i > j:
            continue
        table.setdefault((i, j), {})[k] = table.get((i, j), {}).get(k, Poly()) + p
    full = dict(table)
    for (i, j), row in table.items():
        if i == j:
            # P(lam, d) + P(-lam-d, d) = 0 is forced by averaging
            full[(i, i)] = {k: (p - p.subst({LAM: -lam - d})) * Fraction(1, 2) for k, p in row.items()}
        else:
            full[(j, i)] = {k: -p.subst({LAM: -lam - d}) for k, p in row.items()}
    return LieConformalAlgebra(rank, full)


@st.composite
def skew_algebras(draw, max_rank=2, max_degree=1):
    rank = draw(st.integers(1, max_rank))
    keys = st.tuples(st.integers(0, rank - 1), st.integers(0, rank - 1), st.integers(0, rank - 1))
    entries = draw(st.dictionaries(keys, polys(("lam", "d"), max_degree), max_size=4))
    return skew_completed(rank, entries)


@st.composite
def raw_algebras(draw, max_rank=2, max_degree=1):
    """Unconstrained structure tables (usually neither skew nor Jacobi)."""
    rank = draw(st.integers(1, max_rank))
    keys = st.tuples(st.integers(0, rank - 1), st.integers(0, rank - 1))
    rows = st.dictionaries(st.integers(0, rank - 1), polys(("lam", "d"), max_degree), max_size=rank)
    return LieConformalAlgebra(rank, draw(st.dictionaries(keys, rows, max_size=4)))


@st.composite
def unimodular(draw, n, steps=3):
    """Product of elementary matrices over ``Q[d]`` and invertible scalars."""
    from confalg.polycore import ONE, ZERO
    M = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, steps))):
        if n > 1 and draw(st.booleans()):
            i, j = draw(st.sampled_from([(i, j) for i in range(n) for j in range(n) if i != j]))
            p = draw(d_polys(2))
            M[i] = [a + p * b for a, b in zip(M[i], M[j])]
        else:
            i = draw(st.integers(0, n - 1))
            c = draw(nonzero_rat)
            M[i] = [c * a for a in M[i]]
    return M


def to_sympy(p):
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in enumerate(exp):
            if e:
                term *= SYMBOLS[Var(v).symbol] ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr):
    out = Poly()
    expr = sympy.expand(expr)
    if expr == 0:
        return out
    gens = [SYMBOLS[n] for n in VAR_NAMES]
    for monom, c in sympy.Poly(expr, *gens).terms():
        out = out + Poly.monomial(Fraction(int(c.p), int(c.q)), **dict(zip(VAR_NAMES, monom)))
    return out


NAME_POOL = ("A", "B", "C", "Vir", "W2", "g", "h_1", "Lx")
BASIS_POOL = ("a", "b", "c", "e", "f", "L", "L0", "u_1", "v2", "p")


@st.composite
def models(draw):
    """One algebra or coalgebra, optionally followed by a hom, an ideal and a sequence over it."""
    from confalg.catalog import LieAlgebraSC
    from confalg.dlc import DiffLieCoalgebra
    from confalg.dsl import Sequence
    from confalg.duality import ModuleHom
    from confalg.jordan import DiffJordanCoalgebra, JordanConformalAlgebra
    from confalg.lca import DiagonalIdeal

    names = iter(draw(st.permutations(NAME_POOL)))
    rank = draw(st.integers(1, 3))
    basis = draw(st.permutations(BASIS_POOL))[:rank]
    pairs = st.tuples(st.integers(0, rank - 1), st.integers(0, rank - 1))
    kind = draw(st.sampled_from(["conformal_algebra", "jordan_conformal_algebra", "coalgebra",
                                 "jordan_coalgebra", "lie_algebra"]))
    if kind in ("conformal_algebra", "jordan_conformal_algebra"):
        rows = st.dictionaries(st.integers(0, rank - 1), polys(("lam", "d"), 2), max_size=rank)
        cls = LieConformalAlgebra if kind == "conformal_algebra" else JordanConformalAlgebra
        base = cls(rank, draw(st.dictionaries(pairs, rows, max_size=4)), basis, next(names))
    elif kind in ("coalgebra", "jordan_coalgebra"):
        rows = st.dictionaries(pairs, polys(("x", "y"), 2), max_size=3)
        cls = DiffLieCoalgebra if kind == "coalgebra" else DiffJordanCoalgebra
        base = cls(rank, draw(st.dictionaries(st.integers(0, rank - 1), rows, max_size=rank)),
                   basis, next(names))
    else:
        rows = st.dictionaries(st.integers(0, rank - 1), nonzero_rat, max_size=rank)
        base = LieAlgebraSC(rank, draw(st.dictionaries(pairs, rows, max_size=4)), basis,
                            next(names), validate=False)
    out = [base]
    if kind != "lie_algebra" and draw(st.booleans()):
        matrix = draw(st.lists(st.lists(d_polys(2), min_size=rank, max_size=rank),
                               min_size=rank, max_size=rank))
        out.append(ModuleHom(matrix, rank, name=next(names), source=base.name, target=base.name))
    if kind != "lie_algebra" and draw(st.booleans()):
        gens = draw(st.lists(d_polys(2), min_size=rank, max_size=rank))
        out.append(DiagonalIdeal(gens, next(names), base.name))
    if draw(st.booleans()):
        values = draw(st.lists(polys(("lam",), 3), min_size=1, max_size=5))
        out.append(Sequence(next(names), values))
    return out
