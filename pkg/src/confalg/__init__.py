"""Exact computations with finite free Lie and Jordan conformal algebras and
their dual differential coalgebras."""

__version__ = "0.1.0"

from .polycore import Poly, Var, parse_poly, poly_arith, poly_eval, poly_subst  # noqa: E402
from .report import CheckReport  # noqa: E402
from .lca import (DiagonalIdeal, Element, LieConformalAlgebra, base_change,  # noqa: E402
                  check_ideal, check_jacobi, check_skew, lambda_bracket, quotient_by_line_ideal)
from .dlc import (DiffLieCoalgebra, Tensor, Tensor2, Tensor3, check_cojacobi,  # noqa: E402
                  check_coskew, coproduct_apply)
from .jordan import (DiffJordanCoalgebra, JordanConformalAlgebra, check_cocommutativity,  # noqa: E402
                     check_cojordan, check_jordan_commutativity, check_jordan_identity,
                     dualize_jordan, dualize_jordan_coalgebra)
from .duality import (ConformalFunctional, ModuleHom, adjunction_maps, annihilator,  # noqa: E402
                      check_hom, dualize_algebra, dualize_coalgebra, evaluate_functional,
                      evaluate_phi, evaluate_pi, evaluate_psi, loc_membership,
                      transpose_hom, verify_goodness, verify_triangles)

__all__ = [
    "__version__", "Poly", "Var", "parse_poly", "poly_arith", "poly_eval", "poly_subst",
    "CheckReport", "DiagonalIdeal", "Element", "LieConformalAlgebra", "base_change",
    "check_ideal", "check_jacobi", "check_skew", "lambda_bracket", "quotient_by_line_ideal",
    "DiffLieCoalgebra", "Tensor", "Tensor2", "Tensor3", "check_cojacobi", "check_coskew",
    "coproduct_apply", "DiffJordanCoalgebra", "JordanConformalAlgebra",
    "check_cocommutativity", "check_cojordan", "check_jordan_commutativity",
    "check_jordan_identity", "dualize_jordan", "dualize_jordan_coalgebra",
    "ConformalFunctional", "ModuleHom", "adjunction_maps", "annihilator", "check_hom",
    "dualize_algebra", "dualize_coalgebra", "evaluate_functional", "evaluate_phi",
    "evaluate_pi", "evaluate_psi", "loc_membership", "transpose_hom", "verify_goodness",
    "verify_triangles",
]
