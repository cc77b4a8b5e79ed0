"""Concrete algebras and coalgebras: classical Lie data, current constructions,
the e_i family with its J_a ideals, Witt-type truncations and Jordan examples."""
from __future__ import annotations

from dataclasses import dataclass, field

from .dlc import DiffLieCoalgebra, Tensor
from .duality import ConformalFunctional, verify_goodness
from .errors import IndexOutOfRank
from .jordan import JordanConformalAlgebra
from .lca import DiagonalIdeal, Element, LieConformalAlgebra
from .polycore import D, ONE, ZERO, Poly, d, lam, rat, x, y


def _clean_rows(table, what):
    out = {}
    for key, row in (table or {}).items():
        items = row.items() if isinstance(row, dict) else row
        acc = {}
        for k, c in items:
            acc[k] = acc.get(k, 0) + rat(c)
        acc = {k: c for k, c in acc.items() if c}
        if acc:
            out[tuple(key) if isinstance(key, tuple) else key] = acc
    return out


class LieAlgebraSC:
    """Finite-dimensional Lie algebra by structure constants ``[e_i, e_j] = sum c_ij^k e_k``.

    Antisymmetry and the Jacobi identity are checked on construction.
    """

    kind = "lie_algebra"

    def __init__(self, dim, structure=None, basis_names=None, name="", validate=True):
        self.dim = dim
        self.basis_names = tuple(basis_names) if basis_names else tuple(f"e{i}" for i in range(dim))
        self.name = name
        self.structure = _clean_rows(structure, "bracket")
        for (i, j), row in self.structure.items():
            for k in row:
                if not all(0 <= t < dim for t in (i, j, k)):
                    raise IndexOutOfRank(f"structure constant index outside dimension {dim}")
        if validate:
            self.validate()

    def validate(self):
        dim = self.dim
        for i in range(dim):
            for j in range(dim):
                if self.bracket_basis(i, j) != {k: -c for k, c in self.bracket_basis(j, i).items()}:
                    raise ValueError(f"bracket not antisymmetric at ({i}, {j})")
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    if self.jacobiator(i, j, k):
                        raise ValueError(f"Jacobi identity fails at ({i}, {j}, {k})")

    def __eq__(self, other):
        if not isinstance(other, LieAlgebraSC):
            return NotImplemented
        return (self.dim, self.basis_names, self.structure, self.name) == \
            (other.dim, other.basis_names, other.structure, other.name)

    __hash__ = None

    def bracket_basis(self, i, j):
        return dict(self.structure.get((i, j), {}))

    def bracket(self, u, v):
        """Bracket of coordinate dicts."""
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.structure.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def jacobiator(self, i, j, k):
        e = lambda t: {t: rat(1)}
        total = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for t, v in self.bracket(e(a), self.bracket(e(b), e(c))).items():
                total[t] = total.get(t, 0) + v
        return {t: v for t, v in total.items() if v}


class LieCoalgebraSC:
    """Finite-dimensional Lie coalgebra ``delta(c_k) = sum c^{ij}_k c_i (x) c_j``.

    Co-antisymmetry and co-Jacobi are checked on construction.
    """

    def __init__(self, dim, cobracket=None, basis_names=None, name="", validate=True):
        self.dim = dim
        self.basis_names = tuple(basis_names) if basis_names else tuple(f"c{i}" for i in range(dim))
        self.name = name
        rows = {}
        for k, entries in (cobracket or {}).items():
            items = entries.items() if isinstance(entries, dict) else (((i, j), c) for i, j, c in entries)
            rows[k] = [(tuple(key), c) for key, c in items]
        self.cobracket = _clean_rows(rows, "cobracket")
        if validate:
            self.validate()

    def validate(self):
        dim = self.dim
        for k in range(dim):
            row = self.cobracket.get(k, {})
            for (i, j), c in row.items():
                if row.get((j, i), 0) != -c:
                    raise ValueError(f"cobracket of c{k} is not antisymmetric")
        for k in range(dim):
            if self.cojacobiator(k):
                raise ValueError(f"co-Jacobi fails on c{k}")

    def _apply_second(self, t2):
        out = {}
        for (i, a), c in t2.items():
            for (p, q), e in self.cobracket.get(a, {}).items():
                out[(i, p, q)] = out.get((i, p, q), 0) + c * e
        return out

    def cojacobiator(self, k):
        """``(1 + s + s^2)(I (x) delta) delta`` with ``s`` the cyclic leg shift."""
        base = self._apply_second(self.cobracket.get(k, {}))
        total = {}
        for (i, p, q), c in base.items():
            for key in ((i, p, q), (q, i, p), (p, q, i)):
                total[key] = total.get(key, 0) + c
        return {key: c for key, c in total.items() if c}


def _star_names(names):
    return tuple(n[:-1] if n.endswith("*") else n + "*" for n in names)


def transpose_cobracket(g):
    """Dual coalgebra of a finite-dimensional Lie algebra: ``delta(e_k^*) = sum c_ij^k e_i^* (x) e_j^*``."""
    cob = {}
    for (i, j), row in g.structure.items():
        for k, c in row.items():
            cob.setdefault(k, {})[(i, j)] = c
    return LieCoalgebraSC(g.dim, cob, _star_names(g.basis_names), g.name + "*" if g.name else "")


def current_algebra(g, name=None):
    """``Cur(g)``: constant structure polynomials ``P^{ij}_k = c_ij^k``."""
    structure = {key: {k: Poly.const(c) for k, c in row.items()} for key, row in g.structure.items()}
    return LieConformalAlgebra(g.dim, structure, g.basis_names,
                               f"Cur_{g.name}" if name is None and g.name else (name or ""))


def current_coalgebra(c, name=None):
    coproduct = {k: {key: Poly.const(v) for key, v in row.items()} for k, row in c.cobracket.items()}
    return DiffLieCoalgebra(c.dim, coproduct, c.basis_names,
                            f"Cur_{c.name}" if name is None and c.name else (name or ""))


# -- classical examples -----------------------------------------------------------

def sl2():
    # basis e, f, h
    return LieAlgebraSC(3, {
        (0, 1): {2: 1}, (1, 0): {2: -1},
        (2, 0): {0: 2}, (0, 2): {0: -2},
        (2, 1): {1: -2}, (1, 2): {1: 2},
    }, ("e", "f", "h"), "sl2")


def heisenberg3():
    return LieAlgebraSC(3, {(0, 1): {2: 1}, (1, 0): {2: -1}}, ("p", "q", "c"), "heis3")


def nonabelian2d():
    """``[x, y] = x``."""
    return LieAlgebraSC(2, {(0, 1): {0: 1}, (1, 0): {0: -1}}, ("ex", "ey"), "aff2")


def abelian(dim):
    return LieAlgebraSC(dim, {}, None, f"ab{dim}")


def virasoro():
    return LieConformalAlgebra(1, {(0, 0): {0: 2 * lam + d}}, ("L",), "Vir")


def witt_truncated(N):
    """Graded quotient ``[L_i lam L_j] = (2 lam + d) L_{i+j}`` with indices above ``N`` dropped."""
    if N < 0:
        raise ValueError("N must be non-negative")
    P = 2 * lam + d
    structure = {(i, j): {i + j: P} for i in range(N + 1) for j in range(N + 1 - i)}
    return LieConformalAlgebra(N + 1, structure, tuple(f"L{i}" for i in range(N + 1)), f"Witt{N}")


# -- Theta embedding -------------------------------------------------------------------

def theta_embed(F, dim, pairing=None):
    """``Theta(sum q_i(d) (x) phi_i)`` as a functional on ``Cur(V)``.

    ``pairing[i][j] = phi_i(v_j)`` (identity by default, i.e. ``phi_i`` is
    the dual basis).  The value on ``p(d) (x) v_j`` is
    ``sum_i q_i(-lam) p(lam) phi_i(v_j)``.
    """
    coords = {}
    for i, q in F.coeffs.items():
        q_neg = q.subst({D: -lam})
        for j in range(dim):
            c = (1 if i == j else 0) if pairing is None else rat(pairing[i][j])
            if c:
                coords[j] = coords.get(j, ZERO) + c * q_neg
    return ConformalFunctional(coords, dim)


def verify_theta_goodness(g, cob, window):
    """Goodness of ``Theta(Cur(cob))`` inside the dual of ``Cur(g)``.

    Functionals ``Theta(d^k (x) phi_i)`` for ``k <= window`` are paired
    against ``d^s e_p, d^t e_q`` with ``s, t <= 1``; the coproduct is the
    current one, ``(x+y)^k delta(phi_i)``, written over the ``k = 0`` images.
    """
    if cob.dim != g.dim:
        raise ValueError("coalgebra and algebra dimensions differ")
    L = current_algebra(g)
    V, delta = {}, {}
    for k in range(window + 1):
        for i in range(g.dim):
            V[(k, i)] = theta_embed(Element.basis(i, d ** k), g.dim)
            row = cob.cobracket.get(i, {})
            delta[(k, i)] = Tensor(2, {((0, a), (0, b)): c * (x + y) ** k for (a, b), c in row.items()})
    pairs = [(Element.basis(p, d ** s), Element.basis(q, d ** t))
             for p in range(g.dim) for q in range(g.dim) for s in range(2) for t in range(2)]
    return verify_goodness(L, V, delta, pairs=pairs, name="theta-goodness")


# -- the e_i family ----------------------------------------------------------------------

@dataclass
class Michaelis:
    """``span{e_0..e_N}`` with ``[e_0, e_k] = e_{k-1}`` for ``k >= 2``.

    The span is closed under the bracket because brackets lower the index.
    """

    N: int
    lie_algebra: LieAlgebraSC = field(repr=False)
    conformal: LieConformalAlgebra = field(repr=False)

    def ideal(self, a):
        """``J_a = a(d) e_0 + sum_{i>=1} C[d] e_i``."""
        a = Poly.coerce(a)
        return DiagonalIdeal([a] + [ONE] * self.N, f"J({a})", self.conformal.name)

    def ideal_family(self, gens=(ZERO, ONE, d)):
        return [self.ideal(a) for a in gens]

    def coalgebra_window(self):
        """Dual basis functionals with ``delta(e_i^*) = e_0^* (x) e_{i+1}^* - e_{i+1}^* (x) e_0^*``.

        ``delta(e_0^*) = 0``.  The top element needs ``e_{N+1}^*`` and gets
        ``None``; goodness sweeps report it as outside the window.
        """
        n = self.N + 1
        V = {i: ConformalFunctional.dual_basis(i, n) for i in range(n)}
        delta = {0: Tensor(2)}
        for i in range(1, self.N):
            delta[i] = Tensor(2, {(0, i + 1): ONE, (i + 1, 0): -ONE})
        delta[self.N] = None
        return V, delta


def michaelis(N):
    if N < 2:
        raise ValueError("N must be at least 2")
    structure = {}
    for k in range(2, N + 1):
        structure[(0, k)] = {k - 1: 1}
        structure[(k, 0)] = {k - 1: -1}
    names = tuple(f"e{i}" for i in range(N + 1))
    g = LieAlgebraSC(N + 1, structure, names, f"m{N}")
    return Michaelis(N, g, current_algebra(g))


# -- Jordan examples ----------------------------------------------------------------------

def jordan_current(products, names, name=""):
    """Current Jordan conformal algebra over a commutative algebra with constant products."""
    structure = {key: {k: Poly.const(c) for k, c in row.items()} for key, row in products.items()}
    return JordanConformalAlgebra(len(names), structure, names, name)


def truncated_polynomial_algebra(n):
    """``Q[t]/(t^n)`` on ``1, t, .., t^{n-1}``."""
    products = {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                products[(i, j)] = {i + j: 1}
    names = ("u",) if n == 1 else tuple(["u"] + ["t" if i == 1 else f"t{i}" for i in range(1, n)])
    return jordan_current(products, names, f"Cur_Qt{n}")


def symmetric_matrices2():
    """2x2 symmetric matrices under ``A o B = (AB + BA)/2`` on ``E11, E22, F``."""
    h = rat("1/2")
    products = {
        (0, 0): {0: 1}, (1, 1): {1: 1},
        (0, 2): {2: h}, (2, 0): {2: h}, (1, 2): {2: h}, (2, 1): {2: h},
        (2, 2): {0: 1, 1: 1},
    }
    return jordan_current(products, ("E11", "E22", "F"), "Cur_Sym2")


CATALOG = {
    "virasoro": lambda n=None: virasoro(),
    "witt": lambda n=None: witt_truncated(4 if n is None else n),
    "sl2": lambda n=None: current_algebra(sl2()),
    "heisenberg": lambda n=None: current_algebra(heisenberg3()),
    "nonabelian2d": lambda n=None: current_algebra(nonabelian2d()),
    "michaelis": lambda n=None: michaelis(6 if n is None else n).conformal,
    "jordan-dual-numbers": lambda n=None: truncated_polynomial_algebra(2),
    "jordan-truncated": lambda n=None: truncated_polynomial_algebra(3 if n is None else n),
    "jordan-sym2": lambda n=None: symmetric_matrices2(),
}


def catalog_object(name, rank=None):
    try:
        build = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    return build(rank)
