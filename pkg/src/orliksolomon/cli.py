"""Command-line entry point: ``orliksolomon <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 validation failure (certificate printed).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import chromatic, hyperplane
from .graph import bond_lattice, chromatic_poly_dc, graph_from_json
from .manifold import ManifoldError, manifold_from_json
from .osalg import build_os
from .oscomplex import OSComplex, e2_ring, homology
from .poset import PosetError, poset_from_json
from .presheaf import presheaf_from_json, validate


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"{path} is not valid JSON: {exc}") from None


def _manifold(args, path):
    M = manifold_from_json(_load(path), field=args.field)
    v = M.validate()
    if not v:
        raise ValidationFailure(f"invalid manifold data: {v.reason}", v.certificate)
    return M


def _graph(path):
    return graph_from_json(_load(path))


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, default=str))
    else:
        print(text)


def _label(label) -> str:
    if isinstance(label, tuple) and label and isinstance(label[0], tuple):
        return "|".join("".join(str(v) for v in b) if len(b) < 10 else ",".join(map(str, b)) for b in label)
    return str(label)


# -- subcommands -------------------------------------------------------------------


def cmd_bond_lattice(args):
    G = _graph(args.graph)
    L = bond_lattice(G, args.max_lattice)
    mu = L.mobius_row(L.bottom)
    lines = [f"bond lattice: {L.n} elements, rank {max(L.rank)}"]
    for p in range(L.n):
        lines.append(f"  [{p}] rank {L.rank[p]}  mu {mu.get(p, 0):+d}  {_label(L.labels[p])}")
    data = L.to_json()
    data["mobius"] = [mu.get(p, 0) for p in range(L.n)]
    _emit(args, "\n".join(lines), data)


def cmd_chromatic(args):
    G = _graph(args.graph)
    chi = chromatic_poly_dc(G)
    _emit(args, chi.to_str("desc"), {"chromatic": chi.to_str("desc"), "coeffs": chi.t_coeffs()})


def cmd_os_dims(args):
    data = _load(args.input)
    if "normals" in data:
        L = hyperplane.intersection_lattice(hyperplane.arrangement_from_json(data), max_elements=args.max_lattice)
    else:
        L = bond_lattice(graph_from_json(data), args.max_lattice)
    from .exactfield import get_field
    os = build_os(L, get_field(args.field or "Q"))
    by_deg = {}
    for p in range(L.n):
        by_deg[L.rank[p]] = by_deg.get(L.rank[p], 0) + os.dim(p)
    dims = [by_deg.get(k, 0) for k in range(max(by_deg) + 1)]
    lines = ["OS dims by degree: (" + ", ".join(map(str, dims)) + ")"]
    for p in range(L.n):
        lines.append(f"  [{p}] {_label(L.labels[p])}: {os.dim(p)}")
    _emit(args, "\n".join(lines), {"by_degree": dims, "by_element": [os.dim(p) for p in range(L.n)]})


def cmd_e1_poly(args):
    M = _manifold(args, args.manifold)
    G = _graph(args.graph)
    closed = chromatic.e1_poly_closed(M, G)
    direct = chromatic.e1_poly_direct(M, G, args.max_lattice)
    if closed != direct:
        raise ValidationFailure("closed form and lattice sum disagree",
                                {"closed": closed.to_str(), "direct": direct.to_str()})
    _emit(args, closed.to_str(), {"e1_poly": closed.to_str()})


def cmd_poincare_z2(args):
    M = _manifold(args, args.manifold)
    G = _graph(args.graph)
    try:
        P = chromatic.poincare_z2(M, G)
    except chromatic.PipelineError as exc:
        raise ValidationFailure(str(exc)) from None
    _emit(args, P.to_str(), {"poincare": P.to_str(), "euler_char": chromatic.euler_char(M, G)})


def cmd_betti(args):
    M = _manifold(args, args.manifold)
    G = _graph(args.graph)
    page = chromatic.betti(M, G, max_elements=args.max_lattice)
    if page.euler_char() != chromatic.euler_char(M, G):
        raise ValidationFailure("Euler characteristic check failed",
                                {"page": page.euler_char(), "chi_G(chi(M))": chromatic.euler_char(M, G)})
    b = ", ".join(map(str, page.betti()))
    text = f"Betti ({b}), collapse: {page.collapse}\n" + page.to_text()
    data = page.to_json()
    data["betti"] = page.betti()
    _emit(args, text, data)


def cmd_presentation(args):
    M = _manifold(args, args.manifold)
    G = _graph(args.graph)
    try:
        pres = chromatic.presentation(M, G)
    except chromatic.PipelineError as exc:
        raise ValidationFailure(str(exc)) from None
    _emit(args, pres.to_text(), pres.to_json())


def cmd_zaslavsky(args):
    A = hyperplane.arrangement_from_json(_load(args.arrangement))
    L = hyperplane.intersection_lattice(A, max_elements=args.max_lattice)
    f = hyperplane.zaslavsky_f(A, L)
    _emit(args, "f = (" + ", ".join(map(str, f)) + ")", {"f": f})


def cmd_complex_poincare(args):
    A = hyperplane.arrangement_from_json(_load(args.arrangement))
    L = hyperplane.intersection_lattice(A, max_elements=args.max_lattice)
    P = hyperplane.complex_poincare(A, L)
    _emit(args, P.to_str(), {"poincare": P.to_str()})


def cmd_e2(args):
    P = poset_from_json(_load(args.poset), args.max_lattice)
    C = presheaf_from_json(_load(args.presheaf), field=args.field, poset=P)
    v = validate(C)
    if not v:
        raise ValidationFailure(f"invalid presheaf: {v.reason}", v.certificate)
    K = OSComplex(P, C)
    page = homology(K)
    if C.monoidal:
        e2_ring(K, page)
    _emit(args, page.to_text(), page.to_json())


def cmd_check(args):
    from .suites import SUITES, run_suite
    names = [args.suite] if args.suite else list(SUITES)
    failed = []
    lines = []
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        v = run_suite(name, seed=args.seed, max_elements=args.max_lattice)
        lines.append(f"{'PASS' if v else 'FAIL'} {name}" + ("" if v else f": {v.reason} {v.certificate}"))
        if not v:
            failed.append(name)
    print("\n".join(lines))
    if failed:
        raise ValidationFailure(f"{len(failed)} suite(s) failed", failed)


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags with suppressed defaults so that a
    # flag given before the subcommand is not reset by the subparser
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common = _Parser(add_help=False)
    common.add_argument("--field", choices=["Q", "GF2"], default=d(None),
                        help="coefficient field (overrides the manifold file)")
    common.add_argument("--format", choices=["text", "json"], default=d("text"))
    common.add_argument("--max-lattice", type=int, default=d(None), dest="max_lattice",
                        help="abort when a lattice grows beyond N elements")
    common.add_argument("--seed", type=int, default=d(0), help="seed for sampled property checks")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orliksolomon", parents=[_common(False)],
                     description="Orlik-Solomon models of chromatic configuration spaces and arrangements")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, func, *positional):
        sp = sub.add_parser(name, parents=[_common(True)])
        for pos in positional:
            sp.add_argument(pos)
        sp.set_defaults(func=func)
        return sp

    add("bond-lattice", cmd_bond_lattice, "graph")
    add("chromatic", cmd_chromatic, "graph")
    add("os-dims", cmd_os_dims, "input")
    add("e1-poly", cmd_e1_poly, "manifold", "graph")
    add("poincare-z2", cmd_poincare_z2, "manifold", "graph")
    add("betti", cmd_betti, "manifold", "graph")
    add("presentation", cmd_presentation, "manifold", "graph")
    add("zaslavsky", cmd_zaslavsky, "arrangement")
    add("complex-poincare", cmd_complex_poincare, "arrangement")
    add("e2", cmd_e2, "poset", "presheaf")
    chk = add("check", cmd_check)
    chk.add_argument("--suite", default=None)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        if exc.certificate is not None:
            print(f"certificate: {json.dumps(exc.certificate, default=str)}", file=sys.stderr)
        return 2
    except (ValueError, ManifoldError, PosetError, KeyError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
