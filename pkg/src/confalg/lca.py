"""Finite free Lie conformal algebras given by structure polynomials.

An algebra of rank ``n`` has basis ``a_0 .. a_{n-1}`` over the polynomial
ring in ``d`` and a bracket determined by

    [a_i lam a_j] = sum_k P[i, j][k](lam, d) a_k

Elements are :class:`Element` objects: ``{i: p_i}`` standing for
``sum_i p_i(d) a_i``.  The same class is used for elements of
``C[lam] (x) L``; their coefficients may then involve ``lam``, ``mu``, ``nu``
as scalar parameters.
"""
from __future__ import annotations

from .errors import IndexOutOfRank, NonFreeQuotient, NotAnIdeal, NotUnimodular
from .polycore import D, LAM, ONE, ZERO, Poly, divmod_univariate, lam, mu, d
from .report import ReportBuilder


class Element:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for i, p in coeffs.items():
                p = Poly.coerce(p)
                if p:
                    clean[int(i)] = p
        self.coeffs = clean

    @classmethod
    def basis(cls, i, coeff=ONE):
        return cls({i: coeff})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for i, p in other.coeffs.items():
            out[i] = out.get(i, ZERO) + p
        return Element(out)

    def __neg__(self):
        return Element({i: -p for i, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        # c(d) * element, c a polynomial or scalar
        c = Poly.coerce(c)
        return Element({i: c * p for i, p in self.coeffs.items()})

    def map(self, fn):
        return Element({i: fn(p) for i, p in self.coeffs.items()})

    def max_index(self):
        return max(self.coeffs, default=-1)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "Element(0)"
        body = " + ".join(f"({p})a{i}" for i, p in sorted(self.coeffs.items()))
        return f"Element({body})"


LambdaElement = Element


def _normalize_table(table, rank, allowed_vars, what):
    """Normalise ``{key: iterable of (k, poly) | {k: poly}}`` into nested dicts."""
    out = {}
    for key, entries in (table or {}).items():
        key = tuple(int(i) for i in key)
        if any(not 0 <= i < rank for i in key):
            raise IndexOutOfRank(f"{what} index {key} outside rank {rank}")
        items = entries.items() if isinstance(entries, dict) else entries
        row = {}
        for k, p in items:
            k = k if isinstance(k, tuple) else int(k)
            ks = k if isinstance(k, tuple) else (k,)
            if any(not 0 <= i < rank for i in ks):
                raise IndexOutOfRank(f"{what} output index {k} outside rank {rank}")
            p = Poly.coerce(p)
            extra = p.variables() - allowed_vars
            if extra:
                names = ", ".join(v.symbol for v in sorted(extra))
                raise ValueError(f"{what} polynomial {p} uses variables outside the allowed set: {names}")
            row[k] = row.get(k, ZERO) + p
        row = {k: p for k, p in row.items() if p}
        if row:
            out[key] = row
    return out


def _default_names(prefix, rank):
    return tuple(f"{prefix}{i}" for i in range(rank))


class LieConformalAlgebra:
    """Rank-``n`` free conformal algebra with bracket ``[a_i lam a_j]``.

    ``structure`` maps ``(i, j)`` to either ``{k: P}`` or a list of
    ``(k, P)`` pairs with ``P`` a polynomial in ``lam`` and ``d``.
    Absent pairs bracket to zero.  Torsion summands are not representable.
    """

    kind = "conformal_algebra"

    def __init__(self, rank, structure=None, basis_names=None, name=""):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.rank = rank
        self.basis_names = tuple(basis_names) if basis_names else _default_names("a", rank)
        if len(self.basis_names) != rank:
            raise ValueError("basis_names length differs from rank")
        self.structure = _normalize_table(structure, rank, {LAM, D}, "structure")
        self.name = name

    def P(self, i, j):
        return self.structure.get((i, j), {})

    def entries(self):
        for (i, j) in sorted(self.structure):
            for k, p in sorted(self.structure[(i, j)].items()):
                yield i, j, k, p

    def is_abelian(self):
        return not self.structure

    def basis_element(self, i, coeff=ONE):
        self._check_index(i)
        return Element.basis(i, coeff)

    def _check_index(self, i):
        if not 0 <= i < self.rank:
            raise IndexOutOfRank(f"index {i} outside rank {self.rank}")

    def check_element(self, e):
        for i in e.coeffs:
            self._check_index(i)

    def renamed(self, name=None, basis_names=None):
        return type(self)(self.rank, self.structure, basis_names or self.basis_names,
                          self.name if name is None else name)

    def __eq__(self, other):
        if not isinstance(other, LieConformalAlgebra) or other.kind != self.kind:
            return NotImplemented
        return (self.rank, self.basis_names, self.structure, self.name) == \
            (other.rank, other.basis_names, other.structure, other.name)

    def __hash__(self):
        return hash((self.kind, self.rank, self.basis_names, self.name))

    def __repr__(self):
        return f"{type(self).__name__}(rank={self.rank}, name={self.name!r}, terms={sum(len(r) for r in self.structure.values())})"


def product(alg, a, b, param=lam):
    """Sesquilinear product ``a_param b`` in ``C[params] (x) alg``.

    ``param`` is any polynomial; it may contain ``d`` (as in ``b_{-lam-d} a``),
    in which case the substitution is formal, exactly like skew-symmetry.
    Coefficients of ``a`` and ``b`` may carry scalar parameters; only their
    ``d`` is moved through the product::

        p(d)a_i  _x  q(d)a_j  =  p(-x) q(x+d) sum_k P^{ij}_k(x, d) a_k
    """
    param = Poly.coerce(param)
    neg = -param
    shifted = param + d
    cache = {}
    out = {}
    for i, p in a.coeffs.items():
        p_sub = p.subst({D: neg})
        for j, q in b.coeffs.items():
            table = alg.structure.get((i, j))
            if not table:
                continue
            pq = p_sub * q.subst({D: shifted})
            for k, Pk in table.items():
                key = (i, j, k)
                if key not in cache:
                    cache[key] = Pk.subst({LAM: param}) if param != lam else Pk
                out[k] = out.get(k, ZERO) + pq * cache[key]
    return Element(out)


def lambda_bracket(L, a, b, param=lam):
    """``[a_lam b]``; pass ``param=mu`` for the bracket in another parameter."""
    L.check_element(a)
    L.check_element(b)
    return product(L, a, b, param)


# -- axiom checks -----------------------------------------------------------

def check_skew(L):
    """``P^{ij}_k(lam, d) + P^{ji}_k(-lam-d, d) == 0`` for all ``i, j, k``."""
    rb = ReportBuilder("skew")
    flip = {LAM: -lam - d}
    for i in range(L.rank):
        for j in range(i, L.rank):
            pij, pji = L.P(i, j), L.P(j, i)
            for k in sorted(set(pij) | set(pji)):
                res = pij.get(k, ZERO) + pji.get(k, ZERO).subst(flip)
                rb.check_zero((i, j, k), res)
    return rb.build()


def _subst_table(L, bindings):
    return {key: {k: p.subst(bindings) for k, p in row.items()}
            for key, row in L.structure.items()}


def check_jacobi(L):
    """Jacobi identity on all basis triples as an identity in ``lam, mu, d``.

    For each ``(i, j, k)`` and output ``l``::

        sum_m P^{jk}_m(mu, lam+d) P^{im}_l(lam, d)
      - sum_m P^{ij}_m(lam, -lam-mu) P^{mk}_l(lam+mu, d)
      - sum_m P^{ik}_m(lam, mu+d) P^{jm}_l(mu, d)  == 0
    """
    rb = ReportBuilder("jacobi")
    S = L.structure
    if not S:
        return rb.build()
    inner_a = _subst_table(L, {LAM: mu, D: lam + d})     # P^{jk}_m(mu, lam+d)
    inner_b = _subst_table(L, {D: -lam - mu})             # P^{ij}_m(lam, -lam-mu)
    outer_b = _subst_table(L, {LAM: lam + mu})            # P^{mk}_l(lam+mu, d)
    inner_c = _subst_table(L, {D: mu + d})                # P^{ik}_m(lam, mu+d)
    outer_c = _subst_table(L, {LAM: mu})                  # P^{jm}_l(mu, d)

    n = L.rank
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = {}

                def accumulate(first, second_table, second_key, sign):
                    for m, p1 in first.items():
                        row = second_table.get(second_key(m))
                        if not row:
                            continue
                        for l, p2 in row.items():
                            acc[l] = acc.get(l, ZERO) + sign * (p1 * p2)

                accumulate(inner_a.get((j, k), {}), S, lambda m: (i, m), 1)
                accumulate(inner_b.get((i, j), {}), outer_b, lambda m: (m, k), -1)
                accumulate(inner_c.get((i, k), {}), outer_c, lambda m: (j, m), -1)
                for l in sorted(acc):
                    rb.check_zero((i, j, k, l), acc[l])
    return rb.build()


def jacobi_residual_nested(L, i, j, k):
    """Jacobi residual on one basis triple by three nested bracket calls.

    Independent of :func:`check_jacobi`'s closed formula; used to cross-check it.
    """
    a, b, c = Element.basis(i), Element.basis(j), Element.basis(k)
    lhs = product(L, a, product(L, b, c, mu), lam)
    mid = product(L, product(L, a, b, lam), c, lam + mu)
    rhs = product(L, b, product(L, a, c, lam), mu)
    return lhs - mid - rhs


# -- polynomial matrices over Q[d] --------------------------------------------

def _exact_div(p, q):
    quo, rem = divmod_univariate(p, q, D)
    if rem:
        raise ArithmeticError("inexact division in Bareiss elimination")
    return quo


def poly_det(M):
    """Determinant of a square matrix of polynomials in ``d`` (fraction-free Bareiss)."""
    n = len(M)
    if n == 0:
        return ONE
    A = [[Poly.coerce(e) for e in row] for row in M]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return ZERO
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = _exact_div(A[k][k] * A[i][j] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign


def poly_matrix_inverse(C):
    """Exact inverse of a unimodular polynomial matrix (determinant a nonzero rational)."""
    n = len(C)
    C = [[Poly.coerce(e) for e in row] for row in C]
    for row in C:
        if len(row) != n:
            raise ValueError("matrix must be square")
        for e in row:
            if e.variables() - {D}:
                raise ValueError("matrix entries must be polynomials in d")
    det = poly_det(C)
    if det.is_zero() or not det.is_constant():
        raise NotUnimodular(f"determinant {det} is not a nonzero rational")
    inv_det = 1 / det.constant_value()
    inv = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(C) if r != i]
            cof = poly_det(minor) * (-1 if (i + j) % 2 else 1)
            inv[j][i] = cof * inv_det
    return inv


def base_change(L, C):
    """Structure polynomials in the basis ``a'_i = sum_j C[i][j](d) a_j``."""
    n = L.rank
    if len(C) != n:
        raise ValueError("change-of-basis matrix must be rank x rank")
    Cinv = poly_matrix_inverse(C)
    primed = [Element({j: C[i][j] for j in range(n)}) for i in range(n)]
    structure = {}
    for i in range(n):
        for j in range(n):
            br = product(L, primed[i], primed[j])
            row = {}
            for k, r in br.coeffs.items():
                for l in range(n):
                    if Cinv[k][l]:
                        row[l] = row.get(l, ZERO) + r * Cinv[k][l]
            row = {l: p for l, p in row.items() if p}
            if row:
                structure[(i, j)] = row
    return type(L)(n, structure, L.basis_names, L.name)


# -- ideals --------------------------------------------------------------------

class DiagonalIdeal:
    """Submodule ``sum_i a_i(d) C[d] e_i``; a zero generator omits the line."""

    kind = "ideal"

    def __init__(self, gens, name="", algebra=""):
        self.gens = tuple(Poly.coerce(g) for g in gens)
        for g in self.gens:
            if g.variables() - {D}:
                raise ValueError(f"ideal generator {g} must be a polynomial in d")
        self.name = name
        self.algebra = algebra

    @property
    def rank(self):
        return len(self.gens)

    def is_line_ideal(self):
        return all(g.is_constant() for g in self.gens)

    def saturation(self):
        return DiagonalIdeal([ONE if g else ZERO for g in self.gens], self.name, self.algebra)

    def residual(self, element):
        """Per-coordinate obstruction to membership in ``C[params] (x) I``."""
        out = {}
        for k, r in element.coeffs.items():
            g = self.gens[k]
            rem = r if g.is_zero() else divmod_univariate(r, g, D)[1]
            if rem:
                out[k] = rem
        return out

    def contains(self, element):
        return not self.residual(element)

    def generator_elements(self):
        return [(i, Element.basis(i, g)) for i, g in enumerate(self.gens) if g]

    def __eq__(self, other):
        if not isinstance(other, DiagonalIdeal):
            return NotImplemented
        return (self.gens, self.name, self.algebra) == (other.gens, other.name, other.algebra)

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return f"DiagonalIdeal({[str(g) for g in self.gens]})"


def check_ideal(L, I):
    """Closure of ``I`` under brackets with basis elements, from both sides."""
    if I.rank != L.rank:
        raise IndexOutOfRank(f"ideal has {I.rank} generators, algebra has rank {L.rank}")
    rb = ReportBuilder("ideal")
    for i, gen in I.generator_elements():
        for j in range(L.rank):
            e = Element.basis(j)
            for side, br in (("left", product(L, e, gen)), ("right", product(L, gen, e))):
                for k, rem in sorted(I.residual(br).items()):
                    rb.add((side, j, i, k), rem)
    return rb.build()


def quotient_by_line_ideal(L, I):
    """``L / I`` for an ideal spanned by whole basis lines.

    Returns the quotient on the surviving indices (renumbered in order).
    """
    if not I.is_line_ideal():
        raise NonFreeQuotient("generators outside {0, 1} give a quotient with torsion")
    report = check_ideal(L, I)
    if not report.passed:
        raise NotAnIdeal(f"not an ideal: {report.witnesses[0]}")
    keep = [i for i, g in enumerate(I.gens) if not g]
    new_index = {old: new for new, old in enumerate(keep)}
    structure = {}
    for (i, j), row in L.structure.items():
        if i in new_index and j in new_index:
            kept = {new_index[k]: p for k, p in row.items() if k in new_index}
            if kept:
                structure[(new_index[i], new_index[j])] = kept
    names = [L.basis_names[i] for i in keep]
    return type(L)(len(keep), structure, names, L.name)
