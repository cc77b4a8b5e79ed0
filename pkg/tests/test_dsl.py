import json

import pytest
from hypothesis import given, settings

from confalg.catalog import LieAlgebraSC, sl2, virasoro, witt_truncated
from confalg.dlc import DiffLieCoalgebra, check_cojacobi, check_coskew
from confalg.dsl import Sequence, parse, to_dsl, to_json, to_latex
from confalg.duality import ModuleHom, dualize_algebra
from confalg.errors import DslSyntaxError, DuplicateName, UnknownBasisSymbol
from confalg.jordan import JordanConformalAlgebra
from confalg.lca import DiagonalIdeal, LieConformalAlgebra, check_jacobi, check_skew
from confalg.polycore import ONE, ZERO, d, lam, x, y

from strategies import models

VIR = "conformal_algebra Vir { basis L; [L lam L] = (2*lam + d) L; }"
COALG = "coalgebra C { basis c; delta(c) = (x - y) c (x) c; }"


# -- parsing ---------------------------------------------------------------------------------

def test_parse_virasoro():
    [V] = parse(VIR)
    assert type(V) is LieConformalAlgebra
    assert V.name == "Vir" and V.basis_names == ("L",)
    assert V.P(0, 0) == {0: 2 * lam + d}
    assert check_skew(V).passed and check_jacobi(V).passed
    assert dualize_algebra(V).Q(0) == {(0, 0): x - y}


def test_parse_dual_virasoro():
    [C] = parse(COALG)
    assert type(C) is DiffLieCoalgebra
    assert C.coproduct == dualize_algebra(virasoro()).coproduct
    assert check_coskew(C).passed and check_cojacobi(C).passed


def test_empty_file():
    assert parse("") == []
    assert parse("  # only a comment\n\n") == []


def test_comments_and_layout():
    text = "# header\nconformal_algebra Vir {   # trailing\n  basis L;\n\n  [L lam L] = 2*lam L + d L;\n}\n"
    [V] = parse(text)
    assert V.P(0, 0) == {0: 2 * lam + d}


def test_signed_terms_and_rationals():
    [A] = parse("conformal_algebra A { basis a, b; [a lam b] = -1/2*lam a - (d + 3) b; }")
    assert A.P(0, 1) == {0: -lam / 2, 1: -(d + 3)}


def test_lie_algebra_fills_antisymmetry():
    [g] = parse("lie_algebra g { basis e, f, h; [e, f] = h; [h, e] = 2 e; [h, f] = -2 f; }")
    assert isinstance(g, LieAlgebraSC)
    assert g.structure == sl2().structure


def test_hom_ideal_sequence():
    text = VIR + """
    hom F { from Vir; to Vir; L -> (d + 1) L; }
    ideal I { in Vir; L : d^2; }
    sequence s { values 1, lam, lam^2 - 1; }
    """
    V, F, I, s = parse(text)
    assert isinstance(F, ModuleHom) and F.matrix == ((d + 1,),)
    assert (F.source, F.target) == ("Vir", "Vir")
    assert isinstance(I, DiagonalIdeal) and I.gens == (d ** 2,) and I.algebra == "Vir"
    assert s == Sequence("s", [ONE, lam, lam ** 2 - 1])


def test_jordan_kinds():
    [J] = parse("jordan_conformal_algebra J { basis a; [a lam a] = a; }")
    assert isinstance(J, JordanConformalAlgebra) and J.P(0, 0) == {0: ONE}


def test_zero_right_hand_side():
    [A] = parse("conformal_algebra A { basis a; [a lam a] = 0; }")
    assert A.is_abelian()


# -- errors ---------------------------------------------------------------------------------

def test_syntax_error_position():
    text = "conformal_algebra V {\n  basis L;\n  [L lam L] = (2*lam + d L;\n}\n"
    with pytest.raises(DslSyntaxError) as info:
        parse(text)
    assert info.value.line == 3
    assert info.value.col > 1
    assert "line 3" in str(info.value)


def test_syntax_error_lists_expected_tokens():
    with pytest.raises(DslSyntaxError) as info:
        parse("conformal_algebra V { basis L; [L lam L] = L }")
    assert info.value.expected


def test_unknown_kind():
    with pytest.raises(DslSyntaxError):
        parse("group G { basis g; }")


def test_unknown_basis_symbol():
    with pytest.raises(UnknownBasisSymbol):
        parse("conformal_algebra V { basis L; [L lam M] = L; }")
    with pytest.raises(UnknownBasisSymbol):
        parse("hom F { from Nope; to Nope; }")


def test_duplicate_names():
    with pytest.raises(DuplicateName):
        parse(VIR + VIR)
    with pytest.raises(DuplicateName):
        parse("conformal_algebra V { basis L, L; }")


def test_basis_symbol_clashing_with_variable():
    with pytest.raises(DslSyntaxError):
        parse("conformal_algebra V { basis d; }")


def test_bad_json():
    with pytest.raises(DslSyntaxError):
        parse('{"kind": "conformal_algebra",')
    with pytest.raises(DslSyntaxError):
        parse('{"kind": "monoid"}')


# -- export ----------------------------------------------------------------------------------

def test_virasoro_json():
    obj = json.loads(to_json(virasoro()))
    assert obj["kind"] == "conformal_algebra" and obj["rank"] == 1
    assert obj["structure"] == [{"i": 0, "j": 0, "terms": [{"k": 0, "poly": "2*lam+d"}]}]


def test_dual_virasoro_json():
    obj = json.loads(to_json(dualize_algebra(virasoro())))
    assert obj["coproduct"] == [{"k": 0, "terms": [{"i": 0, "j": 0, "poly": "x-y"}]}]


def test_witt2_latex_has_three_terms_for_top_functional():
    tex = to_latex(dualize_algebra(witt_truncated(2)))
    lines = tex.splitlines()
    assert len(lines) == 3 and all(ln.startswith(r"\[") and ln.endswith(r"\]") for ln in lines)
    top = lines[2]
    assert top.count(r"\otimes \mathrm") == 3
    for i, j in [(0, 2), (1, 1), (2, 0)]:
        assert rf"\mathrm{{L{i}}}^{{*}}\otimes \mathrm{{L{j}}}^{{*}}" in top


def test_latex_bracket_display():
    assert to_latex(virasoro()) == "\\[ [\\mathrm{L}{}_\\lambda \\mathrm{L}] = (2\\lambda+\\partial)\\,\\mathrm{L} \\]\n"


def test_json_key_order_is_fixed():
    text = to_json(virasoro())
    assert text.index('"kind"') < text.index('"rank"') < text.index('"basis"') < text.index('"structure"')


def test_exports_are_byte_deterministic():
    m = dualize_algebra(witt_truncated(3))
    assert to_json(m) == to_json(dualize_algebra(witt_truncated(3)))
    assert to_latex(m) == to_latex(dualize_algebra(witt_truncated(3)))
    assert to_dsl(m) == to_dsl(dualize_algebra(witt_truncated(3)))


# -- properties -------------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(models())
def test_json_round_trip(ms):
    assert parse(to_json(ms)) == ms
    assert parse(to_json(ms[0])) == ms[:1]


@settings(max_examples=60, deadline=None)
@given(models())
def test_dsl_round_trip(ms):
    assert parse(to_dsl(ms)) == ms


@settings(max_examples=60, deadline=None)
@given(models(), models())
def test_json_export_is_injective(a, b):
    if a != b:
        assert to_json(a) != to_json(b)
    else:
        assert to_json(a) == to_json(b)


def test_zero_polys_do_not_survive_round_trip():
    A = LieConformalAlgebra(1, {(0, 0): {0: ZERO}}, ("a",), "A")
    assert parse(to_json(A)) == [LieConformalAlgebra(1, {}, ("a",), "A")]
