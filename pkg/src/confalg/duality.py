"""Conformal duals, the pairings between them, and dualization at finite rank.

Conventions used throughout:

* A :class:`ConformalFunctional` ``f`` on a free module with basis ``a_i``
  stores ``f_lam(a_i)`` as a polynomial in ``lam``.  ``f_lam(p(d) a_i)`` is
  then ``p(lam) f_lam(a_i)`` and ``(d f)_lam = -lam f_lam``.
* Brackets inside a pairing use the parameter ``mu`` and functionals are
  evaluated at ``lam``, so every pairing is a polynomial in ``mu, lam``.
* A two-leg tensor ``sum T_ij(x, y) v_i (x) v_j`` over functionals means
  ``x^s y^t -> d^s v_i (x) d^t v_j``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dlc import DiffLieCoalgebra, Tensor, coproduct_apply
from .errors import IndexOutOfRank, NotAnIdeal, RankMismatch, WindowTooSmall
from .lca import (Element, LieConformalAlgebra, check_ideal, lambda_bracket, product,
                  quotient_by_line_ideal)
from .polycore import D, LAM, MU, ONE, X, Y, Z, ZERO, Poly, d, lam, mu, x, y, z
from .report import ReportBuilder


class ConformalFunctional:
    """Element of the conformal dual of a free module.

    ``coords[i]`` is ``f_lam(a_i)``.  When ``truncated`` is set the functional
    is a window onto an infinite family: coordinates are known only for
    indices below ``ambient_rank`` and asking for others raises
    :class:`WindowTooSmall`.
    """

    __slots__ = ("coords", "ambient_rank", "truncated")

    def __init__(self, coords, ambient_rank, truncated=False):
        if isinstance(coords, (list, tuple)):
            coords = dict(enumerate(coords))
        clean = {}
        for i, p in coords.items():
            p = Poly.coerce(p)
            if not 0 <= i < ambient_rank:
                raise IndexOutOfRank(f"coordinate {i} outside rank {ambient_rank}")
            if p:
                clean[int(i)] = p
        self.coords = clean
        self.ambient_rank = ambient_rank
        self.truncated = truncated

    @classmethod
    def dual_basis(cls, i, rank, truncated=False):
        return cls({i: ONE}, rank, truncated)

    @classmethod
    def zero(cls, rank, truncated=False):
        return cls({}, rank, truncated)

    @classmethod
    def from_element(cls, e, rank, truncated=False):
        """``sum_i p_i(d) a_i^*`` as a functional: coordinates ``p_i(-lam)``."""
        return cls({i: p.subst({D: -lam}) for i, p in e.coeffs.items()}, rank, truncated)

    def to_element(self):
        """Inverse of :meth:`from_element`: coefficient ``p_i(-d)`` on ``a_i^*``."""
        return Element({i: p.subst({LAM: -d}) for i, p in self.coords.items()})

    def coord(self, i):
        if i >= self.ambient_rank:
            if self.truncated:
                raise WindowTooSmall(f"index {i} beyond window of {self.ambient_rank}")
            raise RankMismatch(f"index {i} outside rank {self.ambient_rank}")
        return self.coords.get(i, ZERO)

    def partial(self):
        return ConformalFunctional({i: -lam * p for i, p in self.coords.items()},
                                   self.ambient_rank, self.truncated)

    def __rmul__(self, c):
        # c(d) f has coordinates c(-lam) f_lam
        c = Poly.coerce(c).subst({D: -lam})
        return ConformalFunctional({i: c * p for i, p in self.coords.items()},
                                   self.ambient_rank, self.truncated)

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.coords)
        for i, p in other.coords.items():
            out[i] = out.get(i, ZERO) + p
        return ConformalFunctional(out, self.ambient_rank, self.truncated)

    def __neg__(self):
        return ConformalFunctional({i: -p for i, p in self.coords.items()},
                                   self.ambient_rank, self.truncated)

    def __sub__(self, other):
        return self + (-other)

    def _compatible(self, other):
        if (self.ambient_rank, self.truncated) != (other.ambient_rank, other.truncated):
            raise RankMismatch("functionals live on different modules")

    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, ConformalFunctional):
            return NotImplemented
        return (self.coords, self.ambient_rank, self.truncated) == \
            (other.coords, other.ambient_rank, other.truncated)

    def __hash__(self):
        return hash((frozenset(self.coords.items()), self.ambient_rank))

    def __repr__(self):
        tag = "TRUNCATED" if self.truncated else "rank"
        body = ", ".join(f"{i}: {p}" for i, p in sorted(self.coords.items()))
        return f"ConformalFunctional({{{body}}}, {tag}={self.ambient_rank})"


# -- pairings -----------------------------------------------------------------

def evaluate_functional(f, e, at=lam):
    """``f_at(e)`` for ``e = sum q_i(d) a_i``: ``sum q_i(at) f_at(a_i)``.

    Coefficients of ``e`` may carry parameters other than ``lam``.
    """
    at = Poly.coerce(at)
    total = ZERO
    for i, q in e.coeffs.items():
        if not f.truncated and i >= f.ambient_rank:
            raise RankMismatch(f"element index {i} outside functional rank {f.ambient_rank}")
        p = f.coord(i)
        if p:
            total = total + q.subst({D: at}) * p.subst({LAM: at})
    return total


def evaluate_phi(f, g, a, b, shift=mu):
    """``[Phi_shift(f (x) g)]_lam(a (x) b) = f_shift(a) g_{lam-shift}(b)``."""
    shift = Poly.coerce(shift)
    left = evaluate_functional(f, a, shift)
    if not left:
        return ZERO
    return left * evaluate_functional(g, b, lam - shift)


def evaluate_pi(L, f, a, b):
    """``[pi_mu(f)]_lam(a (x) b) = f_lam([a_mu b])``."""
    if not f.truncated and f.ambient_rank != L.rank:
        raise RankMismatch(f"functional rank {f.ambient_rank} vs algebra rank {L.rank}")
    return evaluate_functional(f, lambda_bracket(L, a, b, mu), lam)


def evaluate_psi(f, g, h, a, b, c):
    """``[Psi_{x,y,z}(f (x) g (x) h)](a (x) b (x) c) = f_x(a) g_y(b) h_z(c)``."""
    return (evaluate_functional(f, a, x) * evaluate_functional(g, b, y)
            * evaluate_functional(h, c, z))


def phi_of_tensor(T, basis, a, b, shift=mu):
    """``[Phi_shift(T)]_lam(a (x) b)`` for a two-leg tensor over ``basis``.

    ``basis`` maps tensor labels to functionals.  A leg monomial ``x^s y^t``
    contributes ``(-shift)^s (shift-lam)^t``, the action of ``d^s`` and
    ``d^t`` on the two functionals at their evaluation points.
    """
    shift = Poly.coerce(shift)
    legs = {X: -shift, Y: shift - lam}
    total = ZERO
    for (i, j), coeff in T.terms.items():
        left = evaluate_functional(basis[i], a, shift)
        if not left:
            continue
        right = evaluate_functional(basis[j], b, lam - shift)
        if right:
            total = total + coeff.subst(legs) * left * right
    return total


def psi_of_tensor(T, basis, a, b, c, at=(x, y, z)):
    """Three-leg analogue of :func:`phi_of_tensor` with evaluation points ``at``."""
    px, py, pz = (Poly.coerce(p) for p in at)
    legs = {X: -px, Y: -py, Z: -pz}
    total = ZERO
    for (i, j, k), coeff in T.terms.items():
        val = (evaluate_functional(basis[i], a, px) * evaluate_functional(basis[j], b, py)
               * evaluate_functional(basis[k], c, pz))
        if val:
            total = total + coeff.subst(legs) * val
    return total


# -- dualization ----------------------------------------------------------------

def _star(name):
    if not name:
        return name
    return name[:-1] if name.endswith("*") else name + "*"


def _dual_class(obj):
    from . import jordan
    pairs = {
        LieConformalAlgebra: DiffLieCoalgebra,
        DiffLieCoalgebra: LieConformalAlgebra,
        jordan.JordanConformalAlgebra: jordan.DiffJordanCoalgebra,
        jordan.DiffJordanCoalgebra: jordan.JordanConformalAlgebra,
    }
    return pairs[type(obj)]


def dualize_algebra(L):
    """Coproduct of the dual: ``Q^{ij}_k(x, y) = P^{ij}_k(x, -x-y)``."""
    sub = {LAM: x, D: -x - y}
    table = {}
    for i, j, k, p in L.entries():
        table.setdefault(k, {})[(i, j)] = p.subst(sub)
    cls = _dual_class(L)
    return cls(L.rank, table, [_star(n) for n in L.basis_names], _star(L.name))


def dualize_coalgebra(C):
    """Bracket of the dual: ``P^{ij}_k(lam, d) = Q^{ij}_k(lam, -lam-d)``."""
    sub = {X: lam, Y: -lam - d}
    table = {}
    for k, i, j, q in C.entries():
        table.setdefault((i, j), {})[k] = q.subst(sub)
    cls = _dual_class(C)
    return cls(C.rank, table, [_star(n) for n in C.basis_names], _star(C.name))


# -- module homomorphisms -----------------------------------------------------------

class ModuleHom:
    """``F(a_i) = sum_k matrix[i][k](d) b_k`` between free modules."""

    kind = "hom"

    def __init__(self, matrix, target_rank=None, name="", source="", target=""):
        rows = [tuple(Poly.coerce(e) for e in row) for row in matrix]
        if target_rank is None:
            if not rows:
                raise ValueError("target_rank required for an empty matrix")
            target_rank = len(rows[0])
        for row in rows:
            if len(row) != target_rank:
                raise ValueError("ragged hom matrix")
            for e in row:
                if e.variables() - {D}:
                    raise ValueError(f"hom entry {e} must be a polynomial in d")
        self.matrix = tuple(rows)
        self.source_rank = len(rows)
        self.target_rank = target_rank
        self.name = name
        self.source = source
        self.target = target

    @classmethod
    def identity(cls, n, **kw):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, **kw)

    def is_identity(self):
        return self.source_rank == self.target_rank and all(
            self.matrix[i][j] == (ONE if i == j else ZERO)
            for i in range(self.source_rank) for j in range(self.target_rank))

    def apply(self, e):
        out = {}
        for i, q in e.coeffs.items():
            if i >= self.source_rank:
                raise RankMismatch(f"index {i} outside hom source rank {self.source_rank}")
            for k, f in enumerate(self.matrix[i]):
                if f:
                    out[k] = out.get(k, ZERO) + q * f
        return Element(out)

    def apply_tensor(self, T):
        """``(F (x) F)`` on a two-leg tensor."""
        out = {}
        for (i, j), q in T.terms.items():
            for p, fi in enumerate(self.matrix[i]):
                if not fi:
                    continue
                left = q * fi.subst({D: x})
                for r, fj in enumerate(self.matrix[j]):
                    if fj:
                        out[(p, r)] = out.get((p, r), ZERO) + left * fj.subst({D: y})
        return Tensor(2, out)

    def __eq__(self, other):
        if not isinstance(other, ModuleHom):
            return NotImplemented
        return (self.matrix, self.target_rank, self.name, self.source, self.target) == \
            (other.matrix, other.target_rank, other.name, other.source, other.target)

    def same_map(self, other):
        return (self.matrix, self.target_rank) == (other.matrix, other.target_rank)

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        rows = "; ".join(", ".join(str(e) for e in row) for row in self.matrix)
        return f"ModuleHom([{rows}])"


def hom_compose(G, F):
    """``G o F`` (apply ``F`` first)."""
    if F.target_rank != G.source_rank:
        raise RankMismatch("composition of incompatible homs")
    n, m, p = F.source_rank, F.target_rank, G.target_rank
    rows = []
    for i in range(n):
        row = []
        for k in range(p):
            acc = ZERO
            for j in range(m):
                if F.matrix[i][j] and G.matrix[j][k]:
                    acc = acc + F.matrix[i][j] * G.matrix[j][k]
            row.append(acc)
        rows.append(row)
    return ModuleHom(rows, p)


def transpose_hom(F):
    """``F^*(b_k^*) = sum_i F_ik(-d) a_i^*``."""
    rows = [[F.matrix[i][k].subst({D: -d}) for i in range(F.source_rank)]
            for k in range(F.target_rank)]
    return ModuleHom(rows, F.source_rank, name=_star(F.name),
                     source=_star(F.target), target=_star(F.source))


def quotient_projection(L, I):
    """Projection ``L -> L/I`` for a line ideal, matching :func:`quotient_by_line_ideal`."""
    keep = [i for i, g in enumerate(I.gens) if not g]
    pos = {old: new for new, old in enumerate(keep)}
    rows = [[ONE if pos.get(i) == k else ZERO for k in range(len(keep))] for i in range(L.rank)]
    return ModuleHom(rows, len(keep))


def check_hom(kind, F, source, target):
    """Algebra homs: ``F([a_i lam a_j]) = [F(a_i) lam F(a_j)]``.
    Coalgebra homs: ``(F (x) F) delta = delta F`` on basis elements."""
    if F.source_rank != source.rank or F.target_rank != target.rank:
        raise RankMismatch("hom shape does not match source/target ranks")
    rb = ReportBuilder(f"{kind}-hom")
    if kind == "algebra":
        images = [F.apply(Element.basis(i)) for i in range(source.rank)]
        for i in range(source.rank):
            for j in range(source.rank):
                lhs = F.apply(product(source, Element.basis(i), Element.basis(j)))
                rhs = product(target, images[i], images[j])
                res = lhs - rhs
                for k, p in sorted(res.coeffs.items()):
                    rb.add((i, j, k), p)
    elif kind == "coalgebra":
        for k in range(source.rank):
            lhs = F.apply_tensor(source.delta(k))
            rhs = coproduct_apply(target, F.apply(Element.basis(k)))
            res = lhs - rhs
            for key, p in sorted(res.terms.items()):
                rb.add((k,) + key, p)
    else:
        raise ValueError(f"unknown hom kind {kind!r}")
    return rb.build()


# -- goodness -----------------------------------------------------------------

def verify_goodness(L, V, delta, pairs=None, name="goodness"):
    """Check ``Phi_{-mu}(delta(f)) = pi_mu(f)`` on basis pairs of ``L``.

    ``V`` maps labels to functionals, ``delta`` maps the same labels to
    two-leg tensors over those labels.  ``pairs`` holds basis index pairs
    or explicit element pairs.  A ``None`` coproduct marks a basis
    element whose coproduct leaves the window; it, and any evaluation that
    needs coordinates beyond a truncated functional's window, yields a
    window-too-small verdict unless some identity genuinely fails.
    """
    if isinstance(V, (list, tuple)):
        V = dict(enumerate(V))
    rb = ReportBuilder(name)
    if pairs is None:
        pairs = [(p, q) for p in range(L.rank) for q in range(L.rank)]
    pairs = list(pairs)
    basis = {i: Element.basis(i) for i in range(L.rank)}
    for label, f in V.items():
        if not f.truncated and f.ambient_rank != L.rank:
            raise RankMismatch(f"functional {label!r} has rank {f.ambient_rank}, algebra {L.rank}")
        T = delta.get(label)
        if T is None:
            rb.too_small = True
            rb.note(f"coproduct of {label} needs functionals outside the window")
            continue
        for p, q in pairs:
            a = basis[p] if isinstance(p, int) else p
            b = basis[q] if isinstance(q, int) else q
            try:
                lhs = evaluate_pi(L, f, a, b)
                rhs = phi_of_tensor(T, V, a, b, shift=-mu)
            except WindowTooSmall as exc:
                rb.too_small = True
                rb.note(f"{label} at ({p}, {q}): {exc}")
                continue
            rb.check_zero((label, p, q), lhs - rhs)
    return rb.build()


def dual_basis(L_or_rank):
    n = L_or_rank if isinstance(L_or_rank, int) else L_or_rank.rank
    return [ConformalFunctional.dual_basis(i, n) for i in range(n)]


def verify_dual_goodness(L):
    """The full dual with the coproduct of :func:`dualize_algebra` is good,
    i.e. ``Phi_{-mu} o delta = pi_mu`` on every dual basis functional."""
    C = dualize_algebra(L)
    delta = {k: C.delta(k) for k in range(L.rank)}
    return verify_goodness(L, dual_basis(L), delta, name="phi-delta=pi")


# -- adjunction at finite rank ------------------------------------------------------

def _evaluation_hom(n, name):
    """Matrix of ``v -> (f -> f_{-mu}(v))`` into the double dual.

    The double-dual coordinate of the image of ``a_i`` on ``b_j^{**}`` is read
    off from its value on ``a_j^*`` with ``mu -> -d``.
    """
    rows = []
    for i in range(n):
        v = Element.basis(i)
        row = []
        for j in range(n):
            val = evaluate_functional(ConformalFunctional.dual_basis(j, n), v, -mu)
            row.append(val.subst({MU: -d}))
        rows.append(row)
    hom = ModuleHom(rows, n, name=name)
    # the same map on d*a_i must be d times the image: d-linearity of the evaluation map
    for i in range(n):
        for j in range(n):
            val = evaluate_functional(ConformalFunctional.dual_basis(j, n), d * Element.basis(i), -mu)
            if val.subst({MU: -d}) != d * rows[i][j]:
                raise ArithmeticError("evaluation map is not d-linear")
    return hom


def adjunction_maps(obj):
    """``chi``, ``phi`` and ``psi`` as basis matrices (into canonical double-dual bases)."""
    n = obj.rank
    return {
        "chi": _evaluation_hom(n, "chi"),
        "phi": _evaluation_hom(n, "phi"),
        "psi": _evaluation_hom(n, "psi"),
    }


def alpha(f, M):
    """``alpha(f) = f^0 o phi_M`` for ``f: L -> M^*``."""
    return hom_compose(transpose_hom(f), adjunction_maps(M)["phi"])


def beta(g, L):
    """``beta(g) = g^* o psi_L`` for ``g: M -> L^0``."""
    return hom_compose(transpose_hom(g), adjunction_maps(L)["psi"])


def verify_triangles(obj, sample_hom=None):
    """Both triangle composites are identities, ``phi``/``psi`` respect the
    structures, and ``beta(alpha(f)) = f`` on a sample hom ``f: L -> M^*``."""
    if isinstance(obj, LieConformalAlgebra):
        L, M = obj, dualize_algebra(obj)
    else:
        M, L = obj, dualize_coalgebra(obj)
    rb = ReportBuilder("triangles")
    n = L.rank

    maps_M = adjunction_maps(M)
    psi_Mdual = adjunction_maps(dualize_coalgebra(M))["psi"]
    tri1 = hom_compose(transpose_hom(maps_M["phi"]), psi_Mdual)
    if not tri1.is_identity():
        rb.add(("triangle-1",), tri1)

    maps_L = adjunction_maps(L)
    phi_L0 = adjunction_maps(dualize_algebra(L))["phi"]
    tri2 = hom_compose(transpose_hom(maps_L["psi"]), phi_L0)
    if not tri2.is_identity():
        rb.add(("triangle-2",), tri2)

    for label, rep in (
            ("phi_M coalgebra hom", check_hom("coalgebra", maps_M["phi"], M,
                                              dualize_algebra(dualize_coalgebra(M)))),
            ("psi_L algebra hom", check_hom("algebra", maps_L["psi"], L,
                                            dualize_coalgebra(dualize_algebra(L))))):
        if not rep.passed:
            rb.add((label,), rep.witnesses[0][1] if rep.witnesses else rep.verdict)

    Mdual = dualize_coalgebra(M)
    f = sample_hom if sample_hom is not None else ModuleHom.identity(n)
    if check_hom("algebra", f, L, Mdual).passed:
        a = alpha(f, M)
        rep = check_hom("coalgebra", a, M, dualize_algebra(L))
        if not rep.passed:
            rb.add(("alpha(f) coalgebra hom",), rep.witnesses[0][1])
        back = beta(a, L)
        if not back.same_map(f):
            rb.add(("beta(alpha(f)) != f",), back)
    else:
        rb.note("sample map is not an algebra hom; alpha/beta check skipped")
    return rb.build()


# -- Loc / annihilators ---------------------------------------------------------------

@dataclass
class Annihilator:
    """``W = {g : g_lam(I) = 0}`` with the coproduct it inherits from ``L/I``."""

    indices: tuple
    basis: tuple
    coalgebra: DiffLieCoalgebra
    delta: dict
    report: object

    @property
    def rank(self):
        return len(self.indices)

    def is_zero(self):
        return not self.indices


def annihilator(L, I):
    """Annihilator of a diagonal ideal, certified good inside the dual of ``L``.

    A line with a nonzero generator forces the matching dual coordinate to
    vanish, so ``W`` is spanned by the dual basis elements of lines absent
    from ``I``; its coproduct comes from dualizing ``L / sat(I)``.
    """
    if I.rank != L.rank:
        raise RankMismatch("ideal and algebra ranks differ")
    rep = check_ideal(L, I)
    if not rep.passed:
        raise NotAnIdeal(f"not an ideal: {rep.witnesses[0]}")
    sat = I.saturation()
    if not check_ideal(L, sat).passed:
        raise NotAnIdeal("saturation of the ideal is not an ideal")
    keep = tuple(i for i, g in enumerate(I.gens) if not g)
    Q = quotient_by_line_ideal(L, sat)
    C = dualize_algebra(Q)
    delta = {}
    for k_new, k in enumerate(keep):
        delta[k] = Tensor(2, {(keep[i], keep[j]): q for (i, j), q in C.Q(k_new).items()})
    basis = tuple(ConformalFunctional.dual_basis(i, L.rank) for i in keep)
    report = verify_goodness(L, dict(zip(keep, basis)), delta, name="annihilator-goodness")
    for i, f in zip(keep, basis):
        for _, gen in I.generator_elements():
            if evaluate_functional(f, gen):
                raise ArithmeticError("annihilator basis does not kill the ideal")
    return Annihilator(keep, basis, C, delta, report)


def loc_membership(f, L, ideal_family):
    """Return ``(True, I)`` for the first supplied ideal ``I`` killed by ``f``."""
    if not f.truncated and f.ambient_rank != L.rank:
        raise RankMismatch("functional and algebra ranks differ")
    for I in ideal_family:
        if all(not evaluate_functional(f, gen) for _, gen in I.generator_elements()):
            return True, I
    return False, None
