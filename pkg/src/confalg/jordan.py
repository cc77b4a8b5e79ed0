"""Jordan conformal algebras and differential Jordan coalgebras.

Both reuse the free-module presentations of :mod:`confalg.lca` and
:mod:`confalg.dlc`; only the axioms differ.  Parameters containing ``d``
(such as ``a_{-mu-d} b``) are substituted formally into the product slot.
"""
from __future__ import annotations

from .dlc import DiffLieCoalgebra, Tensor
from .lca import Element, LieConformalAlgebra, product
from .polycore import LAM, W, X, Y, Z, ZERO, d, lam, mu, nu, w, x, y, z
from .report import ReportBuilder


class JordanConformalAlgebra(LieConformalAlgebra):
    kind = "jordan_conformal_algebra"


class DiffJordanCoalgebra(DiffLieCoalgebra):
    kind = "jordan_coalgebra"


def check_jordan_commutativity(J):
    """``P^{ij}_k(lam, d) - P^{ji}_k(-lam-d, d) == 0``."""
    rb = ReportBuilder("commutativity")
    flip = {LAM: -lam - d}
    for i in range(J.rank):
        for j in range(J.rank):
            Pij, Pji = J.P(i, j), J.P(j, i)
            for k in sorted(set(Pij) | set(Pji)):
                res = Pij.get(k, ZERO) - Pji.get(k, ZERO).subst(flip)
                rb.check_zero((i, j, k), res)
    return rb.build()


def jordan_terms(J, a, b, c, e):
    """The six terms of the conformal Jordan identity, left side then right side.

    Left:  a_lam((b_mu c)_nu e),  b_mu((c_{nu-mu} a)_{lam-mu} e),
           c_{nu-mu}((a_{-mu-d} b)_{lam+mu} e).
    Right: (a_{-mu-d} b)_{lam+mu}(c_{nu-mu} e),  (b_mu c)_nu(a_lam e),
           (c_{nu-mu} a)_{lam+nu-mu}(b_mu e).
    """
    p = lambda u, v, t: product(J, u, v, t)
    bc = p(b, c, mu)
    ca = p(c, a, nu - mu)
    ab = p(a, b, -mu - d)
    left = (
        p(a, p(bc, e, nu), lam),
        p(b, p(ca, e, lam - mu), mu),
        p(c, p(ab, e, lam + mu), nu - mu),
    )
    right = (
        p(ab, p(c, e, nu - mu), lam + mu),
        p(bc, p(a, e, lam), nu),
        p(ca, p(b, e, mu), lam + nu - mu),
    )
    return left, right


def jordan_residual(J, i, j, k, l):
    left, right = jordan_terms(J, *(Element.basis(t) for t in (i, j, k, l)))
    total = Element()
    for t in left:
        total = total + t
    for t in right:
        total = total - t
    return total


def check_jordan_identity(J):
    """Six-term identity on every basis quadruple, exact in ``lam, mu, nu, d``."""
    rb = ReportBuilder("jordan-identity")
    n = J.rank
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    res = jordan_residual(J, i, j, k, l)
                    for m, r in sorted(res.coeffs.items()):
                        rb.add((i, j, k, l, m), r)
    return rb.build()


def check_cocommutativity(C):
    """``Q^{ij}_k(x, y) == Q^{ji}_k(y, x)``."""
    rb = ReportBuilder("cocommutativity")
    for k in range(C.rank):
        Qk = C.Q(k)
        swapped = C.delta(k).swap().terms
        for key in sorted(set(Qk) | set(swapped)):
            rb.check_zero((k,) + key, Qk.get(key, ZERO) - swapped.get(key, ZERO))
    return rb.build()


# zeta(a (x) b (x) c (x) e) = b (x) c (x) a (x) e: leg 1 -> 3, 2 -> 1, 3 -> 2
ZETA = (2, 0, 1, 3)


def delta_delta(C, k):
    """``(Delta (x) Delta) Delta(c_k)`` on legs ``x, y, z, w``."""
    out = {}
    for (a, b), q in C.Q(k).items():
        q = q.subst({X: x + y, Y: z + w})
        for (p, r), qa in C.Q(a).items():
            left = q * qa
            for (s, t), qb in C.Q(b).items():
                key = (p, r, s, t)
                out[key] = out.get(key, ZERO) + left * qb.rename({X: Z, Y: W})
    return Tensor(4, out)


def nested_delta(C, k):
    """``(I (x) Delta (x) I)(I (x) Delta) Delta(c_k)`` on legs ``x, y, z, w``."""
    out = {}
    for (i, a), q in C.Q(k).items():
        q = q.subst({Y: y + z + w})
        for (p, r), qa in C.Q(a).items():
            left = q * qa.subst({X: y + z, Y: w})
            for (u, v), qp in C.Q(p).items():
                key = (i, u, v, r)
                out[key] = out.get(key, ZERO) + left * qp.rename({X: Y, Y: Z})
    return Tensor(4, out)


def _cyclic_sum(T):
    once = T.permute(ZETA)
    return T + once + once.permute(ZETA)


def check_cojordan(C):
    """``(1 + zeta + zeta^2)`` applied to both four-leg expansions must agree."""
    rb = ReportBuilder("cojordan")
    for k in range(C.rank):
        res = _cyclic_sum(delta_delta(C, k)) - _cyclic_sum(nested_delta(C, k))
        for key, r in sorted(res.terms.items()):
            rb.add((k,) + key, r)
    return rb.build()


def dualize_jordan(J):
    from .duality import dualize_algebra
    return dualize_algebra(J)


def dualize_jordan_coalgebra(C):
    from .duality import dualize_coalgebra
    return dualize_coalgebra(C)
