"""Finite free differential Lie coalgebras given by coproduct polynomials.

The coproduct of a basis element is

    delta(c_k) = sum_{i,j} Q^{ij}_k(x, y) c_i (x) c_j

where ``x`` and ``y`` stand for ``d`` acting on the left and right tensor
leg.  Tensors of higher order use ``z`` and ``w`` for legs three and four,
so leg permutations are plain variable renamings.
"""
from __future__ import annotations

from .errors import IndexOutOfRank
from .lca import _default_names, _normalize_table
from .polycore import D, W, X, Y, Z, ZERO, Poly, x, y, z
from .report import ReportBuilder

LEG_VARS = (X, Y, Z, W)


class Tensor:
    """Element of ``C^{(x) n}``: ``{(i_1, .., i_n): poly in the leg variables}``.

    Index entries can be any hashable label, which lets symbolic bases
    (e.g. the power functionals of :mod:`confalg.recursion`) reuse it.
    """

    __slots__ = ("order", "terms")

    def __init__(self, order, terms=None):
        self.order = order
        clean = {}
        for key, p in (terms or {}).items():
            key = tuple(key)
            if len(key) != order:
                raise ValueError(f"tensor key {key} has wrong length for order {order}")
            p = Poly.coerce(p)
            if p:
                clean[key] = clean.get(key, ZERO) + p
        self.terms = {k: p for k, p in clean.items() if p}

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if other.order != self.order:
            raise ValueError("tensor order mismatch")
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out.get(k, ZERO) + p
        return Tensor(self.order, out)

    def __neg__(self):
        return Tensor(self.order, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = Poly.coerce(c)
        return Tensor(self.order, {k: c * p for k, p in self.terms.items()})

    def permute(self, perm):
        """Move leg ``s`` to position ``perm[s]`` (indices and leg variables alike)."""
        rename = {LEG_VARS[s]: LEG_VARS[perm[s]] for s in range(self.order)}
        out = {}
        for key, p in self.terms.items():
            new = [None] * self.order
            for s, label in enumerate(key):
                new[perm[s]] = label
            new = tuple(new)
            out[new] = out.get(new, ZERO) + p.rename(rename)
        return Tensor(self.order, out)

    def swap(self):
        """``tau`` on a two-leg tensor."""
        return self.permute((1, 0))

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def __repr__(self):
        body = " + ".join(f"({p}){'(x)'.join(map(str, k))}" for k, p in sorted(self.terms.items(), key=lambda kv: str(kv[0])))
        return f"Tensor{self.order}({body or 0})"


def Tensor2(terms=None):
    return Tensor(2, terms)


def Tensor3(terms=None):
    return Tensor(3, terms)


class DiffLieCoalgebra:
    """Rank-``n`` free differential coalgebra.

    ``coproduct`` maps ``k`` to ``{(i, j): Q}`` or a list of ``(i, j, Q)``
    with ``Q`` a polynomial in ``x`` and ``y``.
    """

    kind = "coalgebra"

    def __init__(self, rank, coproduct=None, basis_names=None, name=""):
        self.rank = rank
        self.basis_names = tuple(basis_names) if basis_names else _default_names("c", rank)
        if len(self.basis_names) != rank:
            raise ValueError("basis_names length differs from rank")
        table = {}
        for k, entries in (coproduct or {}).items():
            if isinstance(entries, dict):
                items = entries.items()
            else:
                items = (((i, j), q) for i, j, q in entries)
            table[(k,)] = list(items)
        norm = _normalize_table(table, rank, {X, Y}, "coproduct")
        self.coproduct = {k: row for (k,), row in norm.items()}
        self.name = name

    def Q(self, k):
        return self.coproduct.get(k, {})

    def delta(self, k):
        if not 0 <= k < self.rank:
            raise IndexOutOfRank(f"index {k} outside rank {self.rank}")
        return Tensor(2, self.Q(k))

    def entries(self):
        for k in sorted(self.coproduct):
            for (i, j), q in sorted(self.coproduct[k].items()):
                yield k, i, j, q

    def check_element(self, e):
        for i in e.coeffs:
            if not 0 <= i < self.rank:
                raise IndexOutOfRank(f"index {i} outside rank {self.rank}")

    def renamed(self, name=None, basis_names=None):
        return type(self)(self.rank, self.coproduct, basis_names or self.basis_names,
                          self.name if name is None else name)

    def __eq__(self, other):
        if not isinstance(other, DiffLieCoalgebra) or other.kind != self.kind:
            return NotImplemented
        return (self.rank, self.basis_names, self.coproduct, self.name) == \
            (other.rank, other.basis_names, other.coproduct, other.name)

    def __hash__(self):
        return hash((self.kind, self.rank, self.basis_names, self.name))

    def __repr__(self):
        return f"{type(self).__name__}(rank={self.rank}, name={self.name!r})"


def coproduct_apply(C, e):
    """``delta(sum_k p_k(d) c_k) = sum_k p_k(x + y) delta(c_k)``."""
    C.check_element(e)
    out = Tensor(2)
    for k, p in e.coeffs.items():
        out = out + p.subst({D: x + y}) * C.delta(k)
    return out


def check_coskew(C):
    """``Q^{ij}_k(x, y) + Q^{ji}_k(y, x) == 0``."""
    rb = ReportBuilder("coskew")
    for k in range(C.rank):
        Qk = C.Q(k)
        swapped = C.delta(k).swap().terms
        for key in sorted(set(Qk) | set(swapped)):
            rb.check_zero((k,) + key, Qk.get(key, ZERO) + swapped.get(key, ZERO))
    return rb.build()


def id_delta(C, t2):
    """``(I (x) delta)`` applied to a two-leg tensor, producing three legs."""
    out = {}
    for (i, a), q in t2.terms.items():
        q = q.subst({Y: y + z})
        for (p, r), qa in C.Q(a).items():
            key = (i, p, r)
            out[key] = out.get(key, ZERO) + q * qa.rename({X: Y, Y: Z})
    return Tensor(3, out)


def delta_id(C, t2):
    """``(delta (x) I)`` applied to a two-leg tensor."""
    out = {}
    for (a, j), q in t2.terms.items():
        q = q.subst({X: x + y, Y: z})
        for (p, r), qa in C.Q(a).items():
            key = (p, r, j)
            out[key] = out.get(key, ZERO) + q * qa
    return Tensor(3, out)


def cojacobi_terms(C, k):
    """The three co-Jacobi tensors for ``c_k``: ``(I(x)delta)delta``, its
    ``tau (x) I`` image and ``(delta(x)I)delta``."""
    dk = C.delta(k)
    first = id_delta(C, dk)
    return first, first.permute((1, 0, 2)), delta_id(C, dk)


def check_cojacobi(C):
    """``(I(x)delta)delta - (tau(x)I)(I(x)delta)delta - (delta(x)I)delta == 0``."""
    rb = ReportBuilder("cojacobi")
    for k in range(C.rank):
        a, b, c = cojacobi_terms(C, k)
        res = a - b - c
        for key, p in sorted(res.terms.items()):
            rb.add((k,) + key, p)
    return rb.build()
