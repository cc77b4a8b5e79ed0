"""Recursive sequences of functionals on the Witt-type algebra.

A functional ``f`` on ``span{L_i}`` is recorded by its window
``p_i(lam) = f_lam(L_i)``.  It is recursive when fixed scalars
``beta_0..beta_r`` satisfy ``sum_s beta_s p_{m+s} = 0`` for all ``m >= N``.
Such windows decompose over the power functionals
``f_{a,m}: L_i -> a^i i^m`` plus finitely many dual basis functionals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from .catalog import witt_truncated
from .dlc import Tensor
from .duality import ConformalFunctional, evaluate_functional, evaluate_pi, phi_of_tensor
from .errors import IrrationalRoots, WindowTooSmall
from .lca import Element, product
from .polycore import D, LAM, ZERO, Poly, d, lam, mu, rat, x, y
from .report import ReportBuilder


def _power(a, i, m):
    # 0^0 = 1 in both slots
    return a ** i * (Fraction(i) ** m if m else 1)


@dataclass(frozen=True)
class PowerFunctional:
    """``f_{a,m}`` with ``(f_{a,m})_lam(L_i) = a^i i^m``."""

    a: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "a", rat(self.a))
        if self.m < 0:
            raise ValueError("m must be non-negative")

    def value(self, i):
        return _power(self.a, i, self.m)

    def window(self, N):
        return SeqFunctional([Poly.const(self.value(i)) for i in range(N + 1)])

    def __str__(self):
        return f"f[{self.a},{self.m}]"


class SeqFunctional:
    """Window ``p_0(lam), .., p_N(lam)`` of a functional on the Witt-type algebra."""

    __slots__ = ("window",)

    def __init__(self, window):
        window = tuple(Poly.coerce(p) for p in window)
        if not window:
            raise ValueError("window must be non-empty")
        for p in window:
            if p.variables() - {LAM}:
                raise ValueError(f"window entry {p} must be a polynomial in lam")
        self.window = window

    def __len__(self):
        return len(self.window)

    def __getitem__(self, i):
        return self.window[i]

    def as_functional(self):
        """A truncated :class:`ConformalFunctional` on the first ``len`` basis elements."""
        return ConformalFunctional(dict(enumerate(self.window)), len(self.window), truncated=True)

    def degree(self):
        return max((p.degree(LAM) for p in self.window if p), default=0)

    def coefficient_sequences(self):
        """``seq[k][i]`` = coefficient of ``lam^k`` in ``p_i``."""
        K = self.degree()
        seqs = [[Fraction(0)] * len(self.window) for _ in range(K + 1)]
        for i, p in enumerate(self.window):
            for (exp, c) in p.terms.items():
                seqs[exp[LAM]][i] = c
        return seqs

    def __add__(self, other):
        n = min(len(self), len(other))
        return SeqFunctional([self[i] + other[i] for i in range(n)])

    def __eq__(self, other):
        if not isinstance(other, SeqFunctional):
            return NotImplemented
        return self.window == other.window

    def __hash__(self):
        return hash(self.window)

    def __repr__(self):
        return f"SeqFunctional([{', '.join(str(p) for p in self.window)}])"


def f_am(a, m, N):
    return PowerFunctional(a, m).window(N)


def delta_f_am(a, m):
    """``sum_j C(m, j) (x - y) f_{a,j} (x) f_{a,m-j}`` over :class:`PowerFunctional` labels."""
    terms = {}
    for j in range(m + 1):
        key = (PowerFunctional(a, j), PowerFunctional(a, m - j))
        terms[key] = terms.get(key, ZERO) + comb(m, j) * (x - y)
    return Tensor(2, terms)


def verify_fam_pairing(a, m, rmax):
    """Both sides of ``pi_mu(f_{a,m}) = Phi_{-mu}(delta f_{a,m})`` on ``L_r (x) L_s``
    against the closed form ``(2 mu + lam) a^{r+s} (r+s)^m``, for ``r, s <= rmax``."""
    a = rat(a)
    if a == 0:
        raise ValueError("a = 0 is outside the power-functional regime")
    if rmax < 1:
        raise ValueError("rmax must be at least 1")
    top = 2 * rmax
    L = witt_truncated(top)
    V = {PowerFunctional(a, j): PowerFunctional(a, j).window(top).as_functional() for j in range(m + 1)}
    f = V[PowerFunctional(a, m)]
    T = delta_f_am(a, m)
    rb = ReportBuilder(f"f[{a},{m}]-pairing")
    for r in range(rmax + 1):
        for s in range(rmax + 1):
            er, es = Element.basis(r), Element.basis(s)
            oracle = (2 * mu + lam) * _power(a, r + s, m)
            lhs = evaluate_pi(L, f, er, es)
            rhs = phi_of_tensor(T, V, er, es, shift=-mu)
            rb.check_zero(("pi", r, s), lhs - oracle)
            rb.check_zero(("phi-delta", r, s), rhs - oracle)
    return rb.build()


# -- detection ---------------------------------------------------------------

@dataclass(frozen=True)
class RecursionCertificate:
    betas: tuple
    offset: int

    @property
    def order(self):
        return len(self.betas) - 1

    def holds_on(self, f, start=None):
        start = self.offset if start is None else start
        r = self.order
        for m in range(start, len(f) - r):
            acc = ZERO
            for s, b in enumerate(self.betas):
                if b:
                    acc = acc + b * f[m + s]
            if acc:
                return False
        return True


def _nullspace(rows, ncols):
    """Basis of ``{v : rows v = 0}`` over the rationals, one vector per free column."""
    M = [list(r) for r in dict.fromkeys(tuple(r) for r in rows if any(r))]
    pivots = []
    rank = 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if pr is None:
            continue
        M[rank], M[pr] = M[pr], M[rank]
        inv = 1 / M[rank][c]
        M[rank] = [v * inv for v in M[rank]]
        for i in range(rank + 1, len(M)):
            if M[i][c]:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(M):
            break
    # back substitution to reduced form
    for i in range(rank - 1, -1, -1):
        for k in range(i):
            f = M[k][pivots[i]]
            if f:
                M[k] = [vk - f * vi for vk, vi in zip(M[k], M[i])]
    basis = {}
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][free]
        basis[free] = v
    return basis


def detect_recursion(f, max_order):
    """Smallest-order, then smallest-offset scalar recursion valid on the whole window.

    A candidate ``(r, N)`` is only tried when at least ``r + 2`` shifted rows
    are available, so no relation is ever read off an underdetermined system.
    Returns ``None`` when nothing up to ``max_order`` fits.
    """
    n = len(f)
    if n < 2 * max_order + 2:
        raise WindowTooSmall(f"window of {n} too short for order {max_order}")
    seqs = f.coefficient_sequences()

    def relation(r, N):
        rows = [[seq[m + s] for s in range(r + 1)] for m in range(N, n - r) for seq in seqs]
        null = _nullspace(rows, r + 1)
        # a relation whose top coefficient vanishes has lower order
        return null.get(r)

    for r in range(max_order + 1):
        # rows for offset N contain those for N + 1, so success is monotone in N
        hi = n - 2 * r - 2
        best = relation(r, hi)
        if best is None:
            continue
        lo = -1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            v = relation(r, mid)
            if v is None:
                lo = mid
            else:
                hi, best = mid, v
        return RecursionCertificate(tuple(best), hi)
    return None


# -- decomposition --------------------------------------------------------------

def _poly_divide_root(coeffs, root):
    """Synthetic division of ``sum coeffs[s] t^s`` by ``t - root``; returns (quotient, remainder)."""
    deg = len(coeffs) - 1
    q = [Fraction(0)] * deg
    acc = Fraction(0)
    for s in range(deg, 0, -1):
        acc = acc * root + coeffs[s]
        q[s - 1] = acc
    rem = acc * root + coeffs[0]
    return q, rem


def _divisors(n):
    n = abs(n)
    out = set()
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.update((k, n // k))
        k += 1
    return out


def rational_roots(coeffs):
    """Rational roots with multiplicity of ``sum coeffs[s] t^s`` and the unsplit cofactor.

    Returns ``([(root, mult), ..], cofactor_coeffs)``; root ``0`` is included.
    """
    coeffs = [rat(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    roots = {}
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
    changed = True
    while changed and len(coeffs) > 1:
        changed = False
        scale = lcm(*(c.denominator for c in coeffs))
        ints = [int(c * scale) for c in coeffs]
        cands = sorted({Fraction(sgn * p, q) for p in _divisors(ints[0])
                        for q in _divisors(ints[-1]) for sgn in (1, -1)})
        for c in cands:
            q, rem = _poly_divide_root(coeffs, c)
            if rem == 0:
                roots[c] = roots.get(c, 0) + 1
                coeffs = q
                changed = True
                break
    return sorted(roots.items()), coeffs


@dataclass
class Decomposition:
    """``f = sum c(d) f_{a,m} + sum e(d) L_i^*``; coefficients are polynomials in ``d``."""

    power_terms: list
    finite_terms: list

    def value(self, i):
        """``f_lam(L_i)``: a coefficient ``c(d)`` contributes ``c(-lam)``."""
        total = ZERO
        for c, pf in self.power_terms:
            v = pf.value(i)
            if v:
                total = total + v * c.subst({D: -lam})
        for c, k in self.finite_terms:
            if k == i:
                total = total + c.subst({D: -lam})
        return total

    def reconstruct(self, n):
        return SeqFunctional([self.value(i) for i in range(n)])


def _solve(A, b):
    """Exact solve of a square nonsingular system."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        pr = next(i for i in range(c, n) if M[i][c])
        M[c], M[pr] = M[pr], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [vi - f * vc for vi, vc in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def decompose(f, cert):
    """Express ``f`` over ``{f_{a,m}}`` and dual basis functionals.

    The roots of ``sum beta_s t^s`` must all be rational; otherwise
    :class:`IrrationalRoots` carries the certificate and the unsplit factor.
    """
    if not cert.holds_on(f):
        raise ValueError("certificate does not hold on this window")
    roots, rest = rational_roots(cert.betas)
    if len(rest) > 1:
        raise IrrationalRoots("characteristic polynomial does not split over the rationals",
                              certificate=cert, residual=tuple(rest))
    k0 = dict(roots).get(Fraction(0), 0)
    start = cert.offset + k0
    basis = [PowerFunctional(a, m) for a, mult in roots if a != 0 for m in range(mult)]
    n = len(f)
    if start + len(basis) > n:
        raise WindowTooSmall("window too short to fit the power coefficients")
    seqs = f.coefficient_sequences()
    power_coeffs = [ZERO] * len(basis)
    if basis:
        A = [[pf.value(i) for pf in basis] for i in range(start, start + len(basis))]
        for k, seq in enumerate(seqs):
            sol = _solve(A, seq[start:start + len(basis)])
            for t, c in enumerate(sol):
                if c:
                    power_coeffs[t] = power_coeffs[t] + c * lam ** k
    power_terms = [(c.subst({LAM: -d}), pf) for c, pf in zip(power_coeffs, basis) if c]
    dec = Decomposition(power_terms, [])
    for i in range(min(start, n)):
        gap = f[i] - dec.value(i)
        if gap:
            dec.finite_terms.append((gap.subst({LAM: -d}), i))
    if dec.reconstruct(n) != f:
        raise ArithmeticError("decomposition does not reproduce the window")
    return dec


# -- the auxiliary action ----------------------------------------------------------

def lambda_action(f, j):
    """``(f ._lam L_j)_mu(L_m) = f_{lam+mu}([L_m _{-mu} L_j])`` for every ``m`` in the window.

    Entry ``m`` is a polynomial in ``lam`` and ``mu``; it equals
    ``(lam - mu) p_{m+j}(lam + mu)``.
    """
    n = len(f)
    if not 0 <= j < n:
        raise WindowTooSmall(f"L_{j} outside a window of {n}")
    W = witt_truncated(n - 1)
    func = f.as_functional()
    out = []
    for m in range(n - j):
        br = product(W, Element.basis(m), Element.basis(j), -mu)
        out.append(evaluate_functional(func, br, lam + mu))
    return out
