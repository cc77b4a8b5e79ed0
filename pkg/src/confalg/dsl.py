"""Text and JSON formats for algebras, coalgebras, homs, ideals and sequences.

DSL example::

    conformal_algebra Vir {
        basis L;
        [L lam L] = (2*lam + d) L;
    }
    coalgebra C { basis c; delta(c) = (x - y) c (x) c; }

Supported kinds: ``lie_algebra`` (``[a, b] = 2 c - e;``, the opposite
ordering is filled in by antisymmetry), ``conformal_algebra`` and
``jordan_conformal_algebra`` (``[a lam b] = P a_k + ...;``),
``coalgebra`` and ``jordan_coalgebra`` (``delta(c) = Q c_i (x) c_j + ...;``),
``hom`` (``from A; to B; a -> p(d) b + ...;``), ``ideal`` (``in A; a : p(d);``)
and ``sequence`` (``values p_0, p_1, ...;``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .catalog import LieAlgebraSC
from .dlc import DiffLieCoalgebra
from .duality import ModuleHom
from .errors import DslSyntaxError, DuplicateName, UnknownBasisSymbol
from .jordan import DiffJordanCoalgebra, JordanConformalAlgebra
from .lca import DiagonalIdeal, LieConformalAlgebra
from .polycore import (VAR_BY_NAME, ONE, ZERO, Poly, PolyParser, TokenStream,
                       _starts_factor, parse_poly, tokenize)


@dataclass(frozen=True)
class Sequence:
    """A named window of polynomials in ``lam``."""

    name: str
    values: tuple
    kind: str = "sequence"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Poly.coerce(v) for v in self.values))


ALGEBRA_KINDS = {
    "conformal_algebra": LieConformalAlgebra,
    "jordan_conformal_algebra": JordanConformalAlgebra,
}
COALGEBRA_KINDS = {
    "coalgebra": DiffLieCoalgebra,
    "jordan_coalgebra": DiffJordanCoalgebra,
}
KINDS = ("lie_algebra", *ALGEBRA_KINDS, *COALGEBRA_KINDS, "hom", "ideal", "sequence")


# -- text parsing ----------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.s = TokenStream(tokenize(text))
        self.defs = {}
        self.order = []

    def ident(self, what="name"):
        tok = self.s.peek()
        if tok.kind != "ident":
            self.s.error(f"unexpected {tok.text or 'end of input'!r}", expected=(what,))
        return self.s.next()

    def parse(self):
        while self.s.peek().kind != "eof":
            tok = self.ident("definition kind")
            if tok.text not in KINDS:
                raise DslSyntaxError(f"unknown definition kind {tok.text!r}", tok.line, tok.col,
                                     expected=KINDS)
            name_tok = self.ident()
            name = name_tok.text
            if name in self.defs:
                raise DuplicateName(f"{name!r} defined twice (line {name_tok.line})")
            self.s.expect("{")
            model = getattr(self, "_" + tok.text)(name)
            self.s.expect("}")
            self.defs[name] = model
            self.order.append(model)
        return self.order

    # shared pieces

    def basis(self):
        self.s.expect("basis")
        names = [self.ident("basis symbol")]
        while not self.s.at(";"):
            if self.s.at(","):
                self.s.next()
            names.append(self.ident("basis symbol"))
        self.s.expect(";")
        out = []
        for tok in names:
            if tok.text in VAR_BY_NAME:
                raise DslSyntaxError(f"basis symbol {tok.text!r} clashes with a variable",
                                     tok.line, tok.col)
            if tok.text in out:
                raise DuplicateName(f"basis symbol {tok.text!r} repeated (line {tok.line})")
            out.append(tok.text)
        return out

    def symbol(self, index):
        tok = self.ident("basis symbol")
        if tok.text not in index:
            raise UnknownBasisSymbol(f"unknown basis symbol {tok.text!r} at line {tok.line}, column {tok.col}")
        return index[tok.text]

    def coefficient(self):
        s = self.s
        return PolyParser(s).term() if _starts_factor(s.peek()) else ONE

    def signed_sum(self, read_term):
        """``term (('+'|'-') term)*`` where each term is ``[poly] payload``; ``0`` alone is empty."""
        s = self.s
        if s.peek().kind == "num" and s.peek().text == "0" and s.at(";", 1):
            s.next()
            return []
        out = []
        sign = 1
        if s.at("-"):
            s.next()
            sign = -1
        elif s.at("+"):
            s.next()
        while True:
            c = self.coefficient()
            out.append((c * sign, read_term()))
            if s.at("+"):
                sign = 1
            elif s.at("-"):
                sign = -1
            else:
                return out
            s.next()

    def algebra_ref(self, keyword):
        self.s.expect(keyword)
        tok = self.ident("definition name")
        self.s.expect(";")
        model = self.defs.get(tok.text)
        if model is None or not hasattr(model, "basis_names"):
            raise UnknownBasisSymbol(f"no algebra or coalgebra named {tok.text!r} before line {tok.line}")
        return model

    # definitions

    def _conformal_algebra(self, name, cls=LieConformalAlgebra):
        names = self.basis()
        index = {n: i for i, n in enumerate(names)}
        structure = {}
        while not self.s.at("}"):
            self.s.expect("[")
            i = self.symbol(index)
            self.s.expect("lam")
            j = self.symbol(index)
            self.s.expect("]")
            self.s.expect("=")
            row = structure.setdefault((i, j), {})
            for c, k in self.signed_sum(lambda: self.symbol(index)):
                row[k] = row.get(k, ZERO) + c
            self.s.expect(";")
        return cls(len(names), structure, names, name)

    def _jordan_conformal_algebra(self, name):
        return self._conformal_algebra(name, JordanConformalAlgebra)

    def _coalgebra(self, name, cls=DiffLieCoalgebra):
        names = self.basis()
        index = {n: i for i, n in enumerate(names)}
        coproduct = {}
        while not self.s.at("}"):
            self.s.expect("delta")
            self.s.expect("(")
            k = self.symbol(index)
            self.s.expect(")")
            self.s.expect("=")

            def pair():
                i = self.symbol(index)
                self.s.expect("(")
                self.s.expect("x")
                self.s.expect(")")
                return i, self.symbol(index)

            row = coproduct.setdefault(k, {})
            for c, key in self.signed_sum(pair):
                row[key] = row.get(key, ZERO) + c
            self.s.expect(";")
        return cls(len(names), coproduct, names, name)

    def _jordan_coalgebra(self, name):
        return self._coalgebra(name, DiffJordanCoalgebra)

    def _lie_algebra(self, name):
        names = self.basis()
        index = {n: i for i, n in enumerate(names)}
        given = {}
        while not self.s.at("}"):
            self.s.expect("[")
            i = self.symbol(index)
            self.s.expect(",")
            j = self.symbol(index)
            self.s.expect("]")
            self.s.expect("=")
            row = given.setdefault((i, j), {})
            for c, k in self.signed_sum(lambda: self.symbol(index)):
                if not c.is_constant():
                    self.s.error("Lie algebra structure constants must be rational numbers")
                row[k] = row.get(k, 0) + c.constant_value()
            self.s.expect(";")
        structure = dict(given)
        for (i, j), row in given.items():
            if (j, i) not in given:
                structure[(j, i)] = {k: -c for k, c in row.items()}
        return LieAlgebraSC(len(names), structure, names, name, validate=False)

    def _hom(self, name):
        src = self.algebra_ref("from")
        tgt = self.algebra_ref("to")
        si = {n: i for i, n in enumerate(src.basis_names)}
        ti = {n: i for i, n in enumerate(tgt.basis_names)}
        rows = [[ZERO] * tgt.rank for _ in range(src.rank)]
        while not self.s.at("}"):
            i = self.symbol(si)
            if not self.s.at("->"):
                self.s.error("expected '->'", expected=("'->'",))
            self.s.next()
            for c, k in self.signed_sum(lambda: self.symbol(ti)):
                rows[i][k] = rows[i][k] + c
            self.s.expect(";")
        return ModuleHom(rows, tgt.rank, name=name, source=src.name, target=tgt.name)

    def _ideal(self, name):
        alg = self.algebra_ref("in")
        index = {n: i for i, n in enumerate(alg.basis_names)}
        gens = [ZERO] * alg.rank
        while not self.s.at("}"):
            i = self.symbol(index)
            self.s.expect(":")
            gens[i] = PolyParser(self.s).expr()
            self.s.expect(";")
        return DiagonalIdeal(gens, name, alg.name)

    def _sequence(self, name):
        self.s.expect("values")
        values = [PolyParser(self.s).expr()]
        while self.s.at(","):
            self.s.next()
            values.append(PolyParser(self.s).expr())
        self.s.expect(";")
        return Sequence(name, values)


def parse(text):
    """Definitions in ``text`` (DSL, or JSON when the text starts with ``{``/``[``)."""
    stripped = text.lstrip()
    if stripped.startswith(("{", "[")):
        return from_json(stripped)
    return _Parser(text).parse()


# -- JSON -------------------------------------------------------------------------

def _model_to_obj(m):
    if isinstance(m, LieConformalAlgebra):
        return {"kind": m.kind, "name": m.name, "rank": m.rank, "basis": list(m.basis_names),
                "structure": [{"i": i, "j": j,
                               "terms": [{"k": k, "poly": str(p)} for k, p in sorted(row.items())]}
                              for (i, j), row in sorted(m.structure.items())]}
    if isinstance(m, DiffLieCoalgebra):
        return {"kind": m.kind, "name": m.name, "rank": m.rank, "basis": list(m.basis_names),
                "coproduct": [{"k": k,
                               "terms": [{"i": i, "j": j, "poly": str(q)} for (i, j), q in sorted(row.items())]}
                              for k, row in sorted(m.coproduct.items())]}
    if isinstance(m, LieAlgebraSC):
        return {"kind": "lie_algebra", "name": m.name, "rank": m.dim, "basis": list(m.basis_names),
                "structure": [{"i": i, "j": j,
                               "terms": [{"k": k, "poly": str(Poly.const(c))} for k, c in sorted(row.items())]}
                              for (i, j), row in sorted(m.structure.items())]}
    if isinstance(m, ModuleHom):
        return {"kind": "hom", "name": m.name, "source": m.source, "target": m.target,
                "source_rank": m.source_rank, "target_rank": m.target_rank,
                "matrix": [[str(e) for e in row] for row in m.matrix]}
    if isinstance(m, DiagonalIdeal):
        return {"kind": "ideal", "name": m.name, "algebra": m.algebra,
                "gens": [str(g) for g in m.gens]}
    if isinstance(m, Sequence):
        return {"kind": "sequence", "name": m.name, "values": [str(v) for v in m.values]}
    raise TypeError(f"cannot serialize {type(m).__name__}")


def _obj_to_model(o):
    kind = o.get("kind")
    if kind in ALGEBRA_KINDS or kind == "lie_algebra":
        structure = {}
        for entry in o.get("structure", []):
            row = structure.setdefault((entry["i"], entry["j"]), {})
            for t in entry["terms"]:
                row[t["k"]] = row.get(t["k"], ZERO) + parse_poly(t["poly"])
        if kind == "lie_algebra":
            structure = {key: {k: p.constant_value() for k, p in row.items()} for key, row in structure.items()}
            return LieAlgebraSC(o["rank"], structure, o["basis"], o.get("name", ""), validate=False)
        return ALGEBRA_KINDS[kind](o["rank"], structure, o["basis"], o.get("name", ""))
    if kind in COALGEBRA_KINDS:
        coproduct = {}
        for entry in o.get("coproduct", []):
            row = coproduct.setdefault(entry["k"], {})
            for t in entry["terms"]:
                key = (t["i"], t["j"])
                row[key] = row.get(key, ZERO) + parse_poly(t["poly"])
        return COALGEBRA_KINDS[kind](o["rank"], coproduct, o["basis"], o.get("name", ""))
    if kind == "hom":
        return ModuleHom([[parse_poly(e) for e in row] for row in o["matrix"]], o["target_rank"],
                         name=o.get("name", ""), source=o.get("source", ""), target=o.get("target", ""))
    if kind == "ideal":
        return DiagonalIdeal([parse_poly(g) for g in o["gens"]], o.get("name", ""), o.get("algebra", ""))
    if kind == "sequence":
        return Sequence(o.get("name", ""), [parse_poly(v) for v in o["values"]])
    raise DslSyntaxError(f"unknown kind {kind!r} in JSON input", 1, 1, expected=KINDS)


def from_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DslSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(data, dict) and "definitions" in data:
        data = data["definitions"]
    if isinstance(data, dict):
        data = [data]
    models, seen = [], set()
    for o in data:
        m = _obj_to_model(o)
        if m.name and m.name in seen:
            raise DuplicateName(f"{m.name!r} defined twice")
        seen.add(m.name)
        models.append(m)
    return models


def to_json(models):
    """Byte-deterministic JSON: one object for a single model, else ``{"definitions": [...]}``."""
    if isinstance(models, (list, tuple)):
        payload = {"definitions": [_model_to_obj(m) for m in models]}
    else:
        payload = _model_to_obj(models)
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# -- DSL output -----------------------------------------------------------------------

def _coef(p):
    if p == ONE:
        return ""
    if p == -ONE:
        return "-"
    s = str(p)
    return s + " " if len(p.terms) == 1 and "+" not in s[1:] and "-" not in s[1:] else f"({s}) "


def _sum(terms):
    if not terms:
        return "0"
    parts = []
    for n, (p, payload) in enumerate(terms):
        text = _coef(p) + payload
        if n and text.startswith("-"):
            parts.append("- " + text[1:])
        elif n:
            parts.append("+ " + text)
        else:
            parts.append(text)
    return " ".join(parts)


def _to_dsl_one(m, lookup):
    if isinstance(m, LieConformalAlgebra):
        b = m.basis_names
        lines = [f"[{b[i]} lam {b[j]}] = " + _sum([(p, b[k]) for k, p in sorted(row.items())]) + ";"
                 for (i, j), row in sorted(m.structure.items())]
    elif isinstance(m, DiffLieCoalgebra):
        b = m.basis_names
        lines = [f"delta({b[k]}) = " + _sum([(q, f"{b[i]} (x) {b[j]}") for (i, j), q in sorted(row.items())]) + ";"
                 for k, row in sorted(m.coproduct.items())]
    elif isinstance(m, LieAlgebraSC):
        b = m.basis_names
        lines = [f"[{b[i]}, {b[j]}] = " + _sum([(Poly.const(c), b[k]) for k, c in sorted(row.items())]) + ";"
                 for (i, j), row in sorted(m.structure.items())
                 if i < j or (j, i) not in m.structure or
                 m.structure[(j, i)] != {k: -c for k, c in row.items()}]
    elif isinstance(m, ModuleHom):
        src, tgt = lookup.get(m.source), lookup.get(m.target)
        if src is None or tgt is None:
            raise ValueError(f"hom {m.name!r} needs its source and target in the same file")
        lines = [f"from {m.source};", f"to {m.target};"]
        for i, row in enumerate(m.matrix):
            terms = [(e, tgt.basis_names[k]) for k, e in enumerate(row) if e]
            if terms:
                lines.append(f"{src.basis_names[i]} -> {_sum(terms)};")
        return f"hom {m.name} {{\n" + "".join(f"    {ln}\n" for ln in lines) + "}\n"
    elif isinstance(m, DiagonalIdeal):
        alg = lookup.get(m.algebra)
        if alg is None:
            raise ValueError(f"ideal {m.name!r} needs its algebra in the same file")
        lines = [f"in {m.algebra};"] + [f"{alg.basis_names[i]} : {g};" for i, g in enumerate(m.gens) if g]
        return f"ideal {m.name} {{\n" + "".join(f"    {ln}\n" for ln in lines) + "}\n"
    elif isinstance(m, Sequence):
        return f"sequence {m.name} {{\n    values {', '.join(str(v) for v in m.values)};\n}}\n"
    else:
        raise TypeError(f"cannot write {type(m).__name__}")
    head = f"{m.kind} {m.name} {{\n    basis {', '.join(m.basis_names)};\n"
    return head + "".join(f"    {ln}\n" for ln in lines) + "}\n"


def to_dsl(models):
    if not isinstance(models, (list, tuple)):
        models = [models]
    lookup = {getattr(m, "name", None): m for m in models}
    return "\n".join(_to_dsl_one(m, lookup) for m in models)


# -- LaTeX ---------------------------------------------------------------------------

_TEX_VARS = {"lam": r"\lambda", "mu": r"\mu", "nu": r"\nu", "d": r"\partial",
             "x": r"(\partial\otimes 1)", "y": r"(1\otimes\partial)", "z": "z", "w": "w"}


def _tex_poly(p):
    out = []
    for tok in tokenize(str(p))[:-1]:
        if tok.kind == "ident":
            out.append(_TEX_VARS[tok.text])
        elif tok.text == "*":
            continue
        elif tok.kind == "num" and out and out[-1] == "^":
            out.append("{" + tok.text + "}")
        elif tok.text == "/":
            out.append("/")
        else:
            out.append(tok.text)
    return "".join(out)


def _tex_name(n):
    stars = len(n) - len(n.rstrip("*"))
    base = n.rstrip("*").replace("_", r"\_")
    return r"\mathrm{" + base + "}" + ("^{" + "*" * stars + "}" if stars else "")


def _tex_coef(p):
    if p == ONE:
        return ""
    if p == -ONE:
        return "-"
    return "(" + _tex_poly(p) + ")\\,"


def _tex_sum(terms):
    if not terms:
        return "0"
    text = ""
    for n, (p, payload) in enumerate(terms):
        piece = _tex_coef(p) + payload
        if n and not piece.startswith("-"):
            text += " + "
        elif n:
            text += " "
        text += piece
    return text


def to_latex(model):
    """One display per bracket or coproduct line."""
    m = model
    lines = []
    if isinstance(m, LieConformalAlgebra):
        b = [_tex_name(n) for n in m.basis_names]
        for (i, j), row in sorted(m.structure.items()):
            rhs = _tex_sum([(p, b[k]) for k, p in sorted(row.items())])
            lhs = f"{b[i]}{{}}_\\lambda {b[j]}"
            if m.kind == "conformal_algebra":
                lhs = f"[{lhs}]"
            lines.append(f"{lhs} = {rhs}")
    elif isinstance(m, DiffLieCoalgebra):
        b = [_tex_name(n) for n in m.basis_names]
        op = r"\delta" if m.kind == "coalgebra" else r"\Delta"
        for k, row in sorted(m.coproduct.items()):
            rhs = _tex_sum([(q, f"{b[i]}\\otimes {b[j]}") for (i, j), q in sorted(row.items())])
            lines.append(f"{op}({b[k]}) = {rhs}")
    elif isinstance(m, LieAlgebraSC):
        b = [_tex_name(n) for n in m.basis_names]
        for (i, j), row in sorted(m.structure.items()):
            rhs = _tex_sum([(Poly.const(c), b[k]) for k, c in sorted(row.items())])
            lines.append(f"[{b[i]}, {b[j]}] = {rhs}")
    else:
        raise TypeError(f"no LaTeX form for {type(m).__name__}")
    return "".join(f"\\[ {ln} \\]\n" for ln in lines)
