"""Acceptance suite.  Every check is an exact identity over the rationals.

Run ``pytest tests/test_acceptance.py`` for the per-criterion summary.
"""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
from hypothesis import Phase, given, settings

from confalg.catalog import (current_algebra, heisenberg3, michaelis, nonabelian2d, sl2,
                             transpose_cobracket, truncated_polynomial_algebra,
                             verify_theta_goodness, virasoro, witt_truncated, symmetric_matrices2,
                             jordan_current)
from confalg.cli import run_cli
from confalg.dlc import check_cojacobi, check_coskew
from confalg.dsl import parse, to_json
from confalg.duality import (ConformalFunctional, annihilator, dualize_algebra, dualize_coalgebra,
                             loc_membership, verify_dual_goodness, verify_triangles)
from confalg.errors import IrrationalRoots
from confalg.jordan import (check_cocommutativity, check_cojordan, check_jordan_commutativity,
                            check_jordan_identity, dualize_jordan, dualize_jordan_coalgebra,
                            jordan_residual)
from confalg.lca import check_jacobi, check_skew
from confalg.polycore import ZERO, Poly, d, x, y
from confalg.recursion import SeqFunctional, decompose, detect_recursion, verify_fam_pairing

import planted
from strategies import models

criterion = pytest.mark.criterion


def axiom_suite():
    return ([virasoro()] + [witt_truncated(n) for n in range(9)] +
            [current_algebra(sl2()), current_algebra(heisenberg3())] +
            [michaelis(n).conformal for n in range(2, 13)])


def lie_catalog():
    return axiom_suite() + [current_algebra(nonabelian2d())]


def jordan_catalog():
    return [truncated_polynomial_algebra(2), truncated_polynomial_algebra(3), symmetric_matrices2()]


# -- 1, 2 ---------------------------------------------------------------------------------------

@criterion(1, "axiom suite passes exactly, < 10 s")
def test_c1_axiom_suite():
    start = time.perf_counter()
    failed = [L.name for L in axiom_suite() if not (check_skew(L).passed and check_jacobi(L).passed)]
    elapsed = time.perf_counter() - start
    assert failed == []
    assert elapsed < 10, f"{elapsed:.2f} s"


@criterion(2, "duals of the axiom suite pass co-skew and co-Jacobi")
def test_c2_duals_pass_coaxioms():
    for L in axiom_suite():
        C = dualize_algebra(L)
        assert check_coskew(C).passed, C.name
        assert check_cojacobi(C).passed, C.name


# -- 3, 4 ---------------------------------------------------------------------------------------

@criterion(3, "dualizing twice is the identity on every catalog object")
def test_c3_round_trip():
    for L in lie_catalog():
        assert dualize_coalgebra(dualize_algebra(L)) == L, L.name
    for J in jordan_catalog():
        assert dualize_jordan_coalgebra(dualize_jordan(J)) == J, J.name


@criterion(4, "goodness on every dual basis functional and basis pair")
def test_c4_goodness():
    for L in lie_catalog():
        rep = verify_dual_goodness(L)
        assert rep.passed, (L.name, rep.witnesses[:3])


@criterion(4, "goodness on every dual basis functional and basis pair")
def test_c4_witt8_closed_form():
    C = dualize_algebra(witt_truncated(8))
    for k in range(9):
        assert C.Q(k) == {(r, k - r): x - y for r in range(k + 1)}, k


# -- 5 ------------------------------------------------------------------------------------------

@criterion(5, "f_{a,m} pairing identity on r, s <= 8, < 5 s")
def test_c5_power_functional_pairing():
    start = time.perf_counter()
    for a in (1, -1, 2, Fraction(1, 2)):
        for m in range(5):
            rep = verify_fam_pairing(a, m, 8)
            assert rep.passed, (a, m, rep.witnesses[:2])
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"{elapsed:.2f} s"


# -- 6 ------------------------------------------------------------------------------------------

@criterion(6, "planted recursions: detect and reconstruct exactly; Fibonacci unsupported")
def test_c6_planted_recursions():
    for seed in range(100):
        rng = random.Random(seed)
        power, finite = planted.plant(rng, max_roots=3, max_mult=3, max_finite=2, max_index=5)
        f = planted.window(power, finite, 30)
        cert = detect_recursion(f, 9)
        assert cert is not None, seed
        assert cert.order == planted.order(power), seed
        dec = decompose(f, cert)
        assert dec.reconstruct(30) == f, seed
        assert {(pf.a, pf.m): c for c, pf in dec.power_terms} == power, seed
        assert {i: c for c, i in dec.finite_terms} == finite, seed


@criterion(6, "planted recursions: detect and reconstruct exactly; Fibonacci unsupported")
def test_c6_fibonacci():
    fib = [0, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    f = SeqFunctional(fib)
    cert = detect_recursion(f, 9)
    assert cert is not None and cert.betas == (-1, -1, 1)
    with pytest.raises(IrrationalRoots):
        decompose(f, cert)


# -- 7 ------------------------------------------------------------------------------------------

@criterion(7, "both adjunction triangles are identities")
def test_c7_triangles():
    algebras = [virasoro(), current_algebra(sl2()), witt_truncated(4), michaelis(6).conformal]
    for L in algebras:
        for obj in (L, dualize_algebra(L)):
            rep = verify_triangles(obj)
            assert rep.passed, (obj.name, rep.witnesses[:3], rep.notes)


# -- 8 ------------------------------------------------------------------------------------------

@criterion(8, "locally finite part of the e_i algebra: the e_0 line only")
def test_c8_annihilators():
    M = michaelis(12)
    L = M.conformal
    W0 = annihilator(L, M.ideal(ZERO))
    assert W0.indices == (0,)
    assert W0.basis == (ConformalFunctional.dual_basis(0, 13),)
    assert W0.delta[0].is_zero()
    assert W0.report.passed
    assert annihilator(L, M.ideal(d)).is_zero()


@criterion(8, "locally finite part of the e_i algebra: the e_0 line only")
def test_c8_loc_membership():
    M = michaelis(12)
    L = M.conformal
    family = M.ideal_family([ZERO, Poly.const(1)] + [d ** k for k in range(1, 6)])
    ok, ideal = loc_membership(ConformalFunctional.dual_basis(0, 13), L, family)
    assert ok and ideal == M.ideal(ZERO)
    for i in range(1, 13):
        ok, _ = loc_membership(ConformalFunctional.dual_basis(i, 13), L, family)
        assert not ok, i


# -- 9 ------------------------------------------------------------------------------------------

@criterion(9, "Theta goodness for sl2 and the 2-dim nonabelian algebra, window <= 4")
@pytest.mark.parametrize("g", [sl2(), nonabelian2d()], ids=["sl2", "aff2"])
def test_c9_theta(g):
    for k in range(5):
        rep = verify_theta_goodness(g, transpose_cobracket(g), k)
        assert rep.passed, (k, rep.witnesses[:2])


# -- 10 -----------------------------------------------------------------------------------------

@criterion(10, "Jordan examples, their duals, and the rank-2 counterexample")
def test_c10_jordan():
    for n in (2, 3):
        J = truncated_polynomial_algebra(n)
        assert check_jordan_commutativity(J).passed
        assert check_jordan_identity(J).passed
        C = dualize_jordan(J)
        assert check_cocommutativity(C).passed
        assert check_cojordan(C).passed
    bad = jordan_current({(0, 0): {1: 1}, (1, 1): {0: 1}}, ("a", "b"))
    rep = check_jordan_identity(bad)
    assert not rep.passed
    assert not jordan_residual(bad, 0, 0, 0, 0).is_zero()
    assert (0, 0, 0, 0, 0) in dict(rep.witnesses)


# -- 11 -----------------------------------------------------------------------------------------

_GENERATED = []


@criterion(11, "parser/CLI: JSON round trip, example invocations, deterministic reports")
@settings(max_examples=20, derandomize=True, deadline=None, phases=[Phase.generate])
@given(models())
def test_c11_json_round_trip(ms):
    _GENERATED.append(ms)
    assert parse(to_json(ms)) == ms


@criterion(11, "parser/CLI: JSON round trip, example invocations, deterministic reports")
def test_c11_twenty_models_generated():
    assert len(_GENERATED) >= 20


VIR = "conformal_algebra Vir { basis L; [L lam L] = (2*lam + d) L; }\n"


@criterion(11, "parser/CLI: JSON round trip, example invocations, deterministic reports")
def test_c11_cli_examples(tmp_path):
    vir = tmp_path / "vir.lca"
    vir.write_text(VIR)
    invocations = [["check", str(vir)], ["roundtrip", str(vir)],
                   ["loc", "--catalog", "michaelis", "--N", "12", "--ideal", "d"]]
    outputs = []
    for argv in invocations:
        code, text = run_cli(argv)
        assert code == 0, (argv, text)
        outputs.append(json.loads(text))
        # byte-identical on a second run
        assert run_cli(argv) == (code, text)
    assert [(c["name"], c["verdict"]) for c in outputs[0]["checks"]] == [("skew", "pass"), ("jacobi", "pass")]
    assert outputs[2]["artifacts"]["W_rank"] == 0


@criterion(11, "parser/CLI: JSON round trip, example invocations, deterministic reports")
def test_c11_reports_deterministic_across_processes(tmp_path):
    vir = tmp_path / "vir.lca"
    vir.write_text(VIR)
    runs = [subprocess.run([sys.executable, "-m", "confalg", "check", str(vir)],
                           capture_output=True, check=False) for _ in range(2)]
    assert runs[0].returncode == runs[1].returncode == 0
    assert runs[0].stdout == runs[1].stdout
