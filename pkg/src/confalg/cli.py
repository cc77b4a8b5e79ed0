"""Command-line driver.  Every invocation prints a JSON report.

Exit codes: 0 every check passed, 1 some check failed, 2 parse or usage
error, 3 unsupported input or a verdict the tool cannot certify.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .catalog import CATALOG, catalog_object, michaelis
from .dlc import DiffLieCoalgebra, Tensor, check_cojacobi, check_coskew
from .dsl import Sequence, parse, to_dsl, to_json, to_latex
from .duality import (ConformalFunctional, annihilator, check_hom, dualize_algebra,
                      dualize_coalgebra, loc_membership, verify_goodness, verify_triangles)
from .errors import (DslSyntaxError, DuplicateName, IrrationalRoots, NonFreeQuotient,
                     RankMismatch, UnknownBasisSymbol, WindowTooSmall)
from .jordan import (DiffJordanCoalgebra, JordanConformalAlgebra, check_cocommutativity,
                     check_cojordan, check_jordan_commutativity, check_jordan_identity)
from .lca import DiagonalIdeal, LieConformalAlgebra, check_ideal, check_jacobi, check_skew
from .polycore import parse_poly
from .recursion import SeqFunctional, decompose, detect_recursion, verify_fam_pairing
from .report import FAIL, PASS, UNSUPPORTED, WINDOW_TOO_SMALL, CheckReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Run:
    """Collects checks and artifacts for one invocation."""

    def __init__(self, command):
        self.command = command
        self.digest = hashlib.sha256()
        self.checks = []
        self.artifacts = {}
        self.error = None
        self.unsupported = False

    def read(self, path):
        data = Path(path).read_bytes()
        self.digest.update(data)
        return data.decode("utf-8")

    def feed(self, text):
        self.digest.update(text.encode("utf-8"))

    def add(self, target, report):
        entry = {"target": target}
        entry.update(report.to_dict())
        self.checks.append(entry)

    def exit_code(self):
        if self.error is not None:
            return self.error[0]
        verdicts = {c["verdict"] for c in self.checks}
        if FAIL in verdicts:
            return EXIT_FAIL
        if self.unsupported or verdicts & {UNSUPPORTED, WINDOW_TOO_SMALL}:
            return EXIT_UNSUPPORTED
        return EXIT_OK

    def to_json(self):
        out = {
            "tool": "confalg",
            "version": __version__,
            "command": self.command,
            "input_digest": "sha256:" + self.digest.hexdigest(),
            "checks": self.checks,
            "artifacts": self.artifacts,
            "exit_code": self.exit_code(),
        }
        if self.error is not None:
            out["error"] = {"type": self.error[1], "message": self.error[2]}
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


# -- helpers -----------------------------------------------------------------------

def _is_algebra(m):
    return isinstance(m, LieConformalAlgebra)


def _is_coalgebra(m):
    return isinstance(m, DiffLieCoalgebra)


def _as_jordan(m):
    if type(m) is LieConformalAlgebra:
        return JordanConformalAlgebra(m.rank, m.structure, m.basis_names, m.name)
    if type(m) is DiffLieCoalgebra:
        return DiffJordanCoalgebra(m.rank, m.coproduct, m.basis_names, m.name)
    return m


def _axiom_checks(run, m, jordan=False):
    from .catalog import LieAlgebraSC, current_algebra
    if isinstance(m, LieAlgebraSC):
        m = current_algebra(m, name=m.name)
    if jordan:
        m = _as_jordan(m)
    if isinstance(m, JordanConformalAlgebra):
        run.add(m.name, check_jordan_commutativity(m))
        run.add(m.name, check_jordan_identity(m))
    elif isinstance(m, DiffJordanCoalgebra):
        run.add(m.name, check_cocommutativity(m))
        run.add(m.name, check_cojordan(m))
    elif _is_algebra(m):
        run.add(m.name, check_skew(m))
        run.add(m.name, check_jacobi(m))
    elif _is_coalgebra(m):
        run.add(m.name, check_coskew(m))
        run.add(m.name, check_cojacobi(m))


def _write_models(path, models):
    text = to_json(models) if str(path).endswith(".json") else to_dsl(models)
    Path(path).write_text(text, encoding="utf-8")
    return text


def _dual(m):
    return dualize_algebra(m) if _is_algebra(m) else dualize_coalgebra(m)


# -- subcommands -------------------------------------------------------------------------

def cmd_check(run, args):
    models = parse(run.read(args.file))
    by_name = {m.name: m for m in models}
    for m in models:
        if isinstance(m, DiagonalIdeal):
            alg = by_name.get(m.algebra)
            if alg is None or not _is_algebra(alg):
                run.add(m.name, CheckReport("ideal", UNSUPPORTED, notes=(f"algebra {m.algebra!r} not in file",)))
            else:
                run.add(m.name, check_ideal(alg, m))
        elif getattr(m, "kind", None) == "hom":
            src, tgt = by_name.get(m.source), by_name.get(m.target)
            if _is_algebra(src) and _is_algebra(tgt):
                run.add(m.name, check_hom("algebra", m, src, tgt))
            elif _is_coalgebra(src) and _is_coalgebra(tgt):
                run.add(m.name, check_hom("coalgebra", m, src, tgt))
            else:
                run.add(m.name, CheckReport("hom", UNSUPPORTED, notes=("source/target missing or of mixed kinds",)))
        elif not isinstance(m, Sequence):
            _axiom_checks(run, m, args.jordan)


def cmd_dual(run, args):
    models = [m for m in parse(run.read(args.file)) if _is_algebra(m) or _is_coalgebra(m)]
    duals = [_dual(m) for m in models]
    if args.output:
        _write_models(args.output, duals)
        run.artifacts["output"] = str(args.output)
    else:
        run.artifacts["dsl"] = to_dsl(duals) if duals else ""
    run.artifacts["dualized"] = [f"{m.name} -> {d.name}" for m, d in zip(models, duals)]


def cmd_roundtrip(run, args):
    for m in parse(run.read(args.file)):
        if _is_algebra(m) or _is_coalgebra(m):
            back = _dual(_dual(m))
            ok = back == m
            run.add(m.name, CheckReport("roundtrip", PASS if ok else FAIL, failures=0 if ok else 1))


def cmd_goodness(run, args):
    models = parse(run.read(args.file))
    algebras = [m for m in models if _is_algebra(m)]
    if args.algebra:
        algebras = [m for m in algebras if m.name == args.algebra]
    if not algebras:
        raise UsageError("no conformal algebra found in the input")
    L = algebras[0]
    sub = parse(run.read(args.subspace))
    seqs = [m for m in sub if isinstance(m, Sequence)]
    coalgs = [m for m in sub if _is_coalgebra(m)]
    if not seqs:
        raise UsageError("subspace file must define at least one sequence")
    V = {}
    for s in seqs:
        if len(s.values) > L.rank:
            raise RankMismatch(f"sequence {s.name!r} longer than the algebra rank {L.rank}")
        V[s.name] = ConformalFunctional(dict(enumerate(s.values)), L.rank if len(s.values) == L.rank
                                        else len(s.values), truncated=len(s.values) < L.rank)
    delta = {name: None for name in V}
    for C in coalgs:
        for k, name in enumerate(C.basis_names):
            if name in V:
                terms = {(C.basis_names[i], C.basis_names[j]): q for (i, j), q in C.Q(k).items()}
                unknown = {lbl for key in terms for lbl in key} - set(V)
                if unknown:
                    raise UnknownBasisSymbol(f"coproduct of {name!r} uses undefined functionals {sorted(unknown)}")
                delta[name] = Tensor(2, terms)
    top = L.rank - 1 if args.window is None else min(args.window, L.rank - 1)
    pairs = [(p, q) for p in range(top + 1) for q in range(top + 1)]
    run.add(L.name, verify_goodness(L, V, delta, pairs=pairs))


def cmd_loc(run, args):
    if args.catalog != "michaelis":
        raise UsageError("loc supports --catalog michaelis")
    run.feed(f"loc michaelis N={args.N} ideal={args.ideal}")
    M = michaelis(args.N)
    a = parse_poly(args.ideal)
    I = M.ideal(a)
    W = annihilator(M.conformal, I)
    run.add(M.conformal.name, W.report)
    names = [M.conformal.basis_names[i] + "*" for i in W.indices]
    run.artifacts["W_rank"] = W.rank
    run.artifacts["W_basis"] = names
    label = {i: name for i, name in zip(W.indices, names)}
    run.artifacts["W_coproduct"] = {
        label[i]: [{"left": label[a], "right": label[b], "poly": str(q)}
                   for (a, b), q in sorted(W.delta[i].terms.items())]
        for i in W.indices}
    n = M.conformal.rank
    members = {}
    for i in range(n):
        ok, _ = loc_membership(ConformalFunctional.dual_basis(i, n), M.conformal, [I])
        members[M.conformal.basis_names[i] + "*"] = ok
    run.artifacts["kills_ideal"] = members


def cmd_catalog(run, args):
    run.feed(f"catalog {args.name} rank={args.rank}")
    m = catalog_object(args.name, args.rank)
    _axiom_checks(run, m)
    if args.output:
        _write_models(args.output, [m])
        run.artifacts["output"] = str(args.output)
    else:
        run.artifacts["dsl"] = to_dsl([m])


def _read_sequence(run, args):
    if args.values is not None:
        run.feed(args.values)
        return SeqFunctional([parse_poly(v) for v in args.values.split(",")])
    if args.file is None:
        raise UsageError("give --values or a sequence FILE")
    seqs = [m for m in parse(run.read(args.file)) if isinstance(m, Sequence)]
    if not seqs:
        raise UsageError("no sequence definition in the input")
    return SeqFunctional(seqs[0].values)


def _cert_json(cert):
    return None if cert is None else {"betas": [str(b) for b in cert.betas], "offset": cert.offset}


def cmd_recursion(run, args):
    if args.action == "verify-fam":
        run.feed(f"verify-fam a={args.a} m={args.m} rmax={args.rmax}")
        run.add(f"f[{args.a},{args.m}]", verify_fam_pairing(parse_poly(args.a).constant_value(), args.m, args.rmax))
        return
    f = _read_sequence(run, args)
    max_order = args.max_order if args.max_order is not None else (len(f) - 2) // 2
    cert = detect_recursion(f, max_order)
    run.artifacts["certificate"] = _cert_json(cert)
    if cert is None:
        run.add("sequence", CheckReport("recursion", FAIL, failures=1,
                                        notes=(f"no recursion of order <= {max_order}",)))
        return
    run.add("sequence", CheckReport("recursion", PASS))
    if args.action == "decompose":
        try:
            dec = decompose(f, cert)
        except IrrationalRoots as exc:
            run.add("sequence", CheckReport("decompose", UNSUPPORTED, notes=(str(exc),)))
            run.artifacts["unsplit_factor"] = [str(c) for c in exc.residual]
            return
        run.artifacts["power_terms"] = [{"coeff": str(c), "a": str(pf.a), "m": pf.m} for c, pf in dec.power_terms]
        run.artifacts["finite_terms"] = [{"coeff": str(c), "index": i} for c, i in dec.finite_terms]
        run.add("sequence", CheckReport("decompose", PASS))


def cmd_triangles(run, args):
    for m in parse(run.read(args.file)):
        if type(m) in (LieConformalAlgebra, DiffLieCoalgebra):
            run.add(m.name, verify_triangles(m))


def cmd_export(run, args):
    models = parse(run.read(args.file))
    if args.format == "json":
        text = to_json(models if len(models) != 1 else models[0])
    else:
        parts = []
        for m in models:
            try:
                parts.append(to_latex(m))
            except TypeError:
                run.artifacts.setdefault("skipped", []).append(m.name)
        text = "\n".join(parts)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        run.artifacts["output"] = str(args.output)
    else:
        run.artifacts["text"] = text


COMMANDS = {
    "check": cmd_check, "dual": cmd_dual, "roundtrip": cmd_roundtrip, "goodness": cmd_goodness,
    "loc": cmd_loc, "catalog": cmd_catalog, "recursion": cmd_recursion,
    "triangles": cmd_triangles, "export": cmd_export,
}


def build_parser():
    p = _ArgumentParser(prog="confalg", description=__doc__.splitlines()[0])
    p.add_argument("--report", help="also write the JSON report to this path")
    sub = p.add_subparsers(dest="command")

    c = sub.add_parser("check", help="run the axiom suites on every definition")
    c.add_argument("file")
    c.add_argument("--jordan", action="store_true", help="read algebras/coalgebras as Jordan ones")

    c = sub.add_parser("dual", help="dualize every algebra and coalgebra")
    c.add_argument("file")
    c.add_argument("-o", "--output")

    c = sub.add_parser("roundtrip", help="check that dualizing twice is the identity")
    c.add_argument("file")

    c = sub.add_parser("goodness", help="certify a candidate coproduct on functionals")
    c.add_argument("file")
    c.add_argument("--subspace", required=True, help="sequences plus a coalgebra over their names")
    c.add_argument("--window", type=int)
    c.add_argument("--algebra")

    c = sub.add_parser("loc", help="annihilator of J_a in the truncated e_i algebra")
    c.add_argument("--catalog", required=True)
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--ideal", required=True, help="generator a(d) of the e_0 line")

    c = sub.add_parser("catalog", help="emit a catalog object")
    c.add_argument("name", choices=sorted(CATALOG))
    c.add_argument("--rank", type=int)
    c.add_argument("-o", "--output")

    c = sub.add_parser("recursion", help="recursive sequence tools")
    c.add_argument("action", choices=["detect", "decompose", "verify-fam"])
    c.add_argument("file", nargs="?")
    c.add_argument("--values", help="comma-separated window polynomials")
    c.add_argument("--max-order", type=int)
    c.add_argument("--a", default="1")
    c.add_argument("--m", type=int, default=0)
    c.add_argument("--rmax", type=int, default=8)

    c = sub.add_parser("triangles", help="adjunction triangle identities")
    c.add_argument("file")

    c = sub.add_parser("export", help="write JSON or LaTeX")
    c.add_argument("file")
    c.add_argument("--format", choices=["json", "latex"], default="json")
    c.add_argument("-o", "--output")
    return p


def run_cli(argv=None):
    """Run one command; returns ``(exit_code, report_text)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    run = Run(argv[0] if argv else "")
    report_path = None
    try:
        args = build_parser().parse_args(argv)
        report_path = args.report
        if not args.command:
            raise UsageError("a subcommand is required")
        run.command = args.command
        COMMANDS[args.command](run, args)
    except (UsageError, DslSyntaxError, UnknownBasisSymbol, DuplicateName, RankMismatch,
            OSError, ValueError) as exc:
        code = EXIT_USAGE
        if isinstance(exc, (NonFreeQuotient, WindowTooSmall)):
            code = EXIT_UNSUPPORTED
        run.error = (code, type(exc).__name__, str(exc))
    text = run.to_json()
    if report_path:
        Path(report_path).write_text(text, encoding="utf-8")
    return run.exit_code(), text


def main(argv=None):
    code, text = run_cli(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
