"""``prismlab`` command line.

Exit status: 0 affirmative, 1 negative verdict, 2 undecided or window
saturation, 64 usage error, 65 malformed or inadmissible input.
"""
from __future__ import annotations

import argparse
import json
import sys
from enum import Enum
from typing import List, Optional

from . import __version__
from .arith import fiber_reduce, is_prime
from .cohen import build_presentation, correspondence_automorphism, small_base_check
from .common import UNDECIDED, tri_text
from .delta import check_delta_axioms
from .errors import (CommutationFailed, InputError, MembershipFailed, NoOrientationFound,
                     NotArtinian, NotAUnit, NotDistinguished, NotInMaximalIdeal,
                     NotInvertibleModM, NotLocal, PrecisionExhausted, UnitIdeal,
                     WindowTooSmall)
from .koszul import ht_filtration_table, lci_discreteness_check
from .kunzartin import artin_build, frobenius_flat
from .localring import (LocalPresentation, default_hs_window, hilbert_samuel, regular_pattern,
                        regularity_verdict)
from .pdenv import counterexample_report
from .prism import normalize_orientation, regseq_suite, verify_prism
from .reader import load_ringspec

EXIT_OK, EXIT_NEGATIVE, EXIT_UNDECIDED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 64, 65
REPORT_SCHEMA = "prismlab-report/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- report rendering ---------------------------------------------------------

def _plain(x):
    if x is UNDECIDED:
        return "undecided"
    if hasattr(x, "as_dict"):
        return _plain(x.as_dict())
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_text"):
        return x.to_text()
    if hasattr(x, "item"):             # numpy scalar
        return x.item()
    return x


def _scalar(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "none"
    return str(v)


def render_text(report: dict) -> str:
    lines = []

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, indent + 1)
        elif isinstance(value, list) and any(isinstance(v, (dict, list)) or
                                             (isinstance(v, str) and "," in v) for v in value):
            lines.append(f"{pad}{key}:")
            for v in value:
                item(v, indent + 1)
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: [{', '.join(_scalar(v) for v in value)}]")
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")

    def item(value, indent):
        pad = "  " * indent
        if isinstance(value, dict) and value:
            start = len(lines)
            for k, v in value.items():
                emit(k, v, indent + 1)
            lines[start] = f"{pad}- {lines[start].lstrip()}"
        elif isinstance(value, list):
            if any(isinstance(v, (dict, list)) for v in value):
                lines.append(f"{pad}-")
                for v in value:
                    item(v, indent + 1)
            else:
                lines.append(f"{pad}- [{', '.join(_scalar(v) for v in value)}]")
        else:
            lines.append(f"{pad}- {_scalar(value) if not isinstance(value, dict) else '{}'}")

    for k, v in report.items():
        emit(k, v, 0)
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return render_text(report)


# --- helpers -------------------------------------------------------------------

def _load(args):
    if not args.spec:
        raise UsageError(f"{args.command} requires --spec FILE")
    try:
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.spec}: {exc.strerror}") from None
    return load_ringspec(text, args.precision, args.degree)


def _window(doc) -> dict:
    ring = doc.ring
    return {"prime": ring.prime, "precision": ring.precision, "degree_cap": ring.degree_cap,
            "variables": list(ring.variables)}


def _orientation(doc):
    if doc.orientation is not None:
        return doc.orientation
    if doc.gens:
        return doc.gens[0]
    raise InputError("[ideal] needs an 'orientation' (or at least one 'gen')")


def _presentation(doc) -> LocalPresentation:
    if doc.orientation is not None:
        norm = normalize_orientation(doc.delta, doc.orientation)
        return LocalPresentation(doc.delta, norm.f, tuple(doc.gens))
    if not doc.gens:
        raise InputError("[ideal] declares no generators")
    return build_presentation(doc.delta, doc.gens).to_local_presentation()


def _warnings(doc) -> List[str]:
    items = [doc.orientation, doc.orientation_prime] + doc.gens + doc.x_prime
    return [f"input {x.to_text()} was truncated by the degree cap"
            for x in items if x is not None and x.saturated]


def _report(args, window, verdict, body, warnings=()) -> dict:
    params = dict(window)
    params["seed"] = args.seed
    return {"schema": REPORT_SCHEMA, "command": args.command, "parameters": params,
            "verdict": verdict, **body, "warnings": list(warnings)}


# --- subcommands -------------------------------------------------------------------

def cmd_verify_prism(args):
    doc = _load(args)
    d = _orientation(doc)
    try:
        prism = verify_prism(doc.delta, d)
    except NotDistinguished as exc:
        return EXIT_NEGATIVE, _report(args, _window(doc), "rejected",
                                      {"reason": f"not distinguished: {exc}"}, _warnings(doc))
    except MembershipFailed as exc:
        return EXIT_NEGATIVE, _report(args, _window(doc), "rejected",
                                      {"reason": "p not in I + phi(I)A modulo p^N in the window",
                                       "system": exc.system}, _warnings(doc))
    body = {"orientation": d.to_text(), "kind": prism.kind.value,
            "certificate": [c.as_dict() for c in prism.certificates]}
    return EXIT_OK, _report(args, _window(doc), "valid prism", body, _warnings(doc))


def cmd_normalize(args):
    doc = _load(args)
    d = _orientation(doc)
    try:
        norm = normalize_orientation(doc.delta, d)
    except NotDistinguished as exc:
        return EXIT_NEGATIVE, _report(args, _window(doc), "rejected", {"reason": str(exc)})
    recheck = verify_prism(doc.delta, norm.orientation)
    body = {"d": d.to_text(), "f": norm.f.to_text(), "f_fiber": fiber_reduce(norm.f).to_text(doc.ring.variables),
            "unit": norm.unit.to_text(), "p - f": norm.orientation.to_text(),
            "reverified_kind": recheck.kind.value}
    return EXIT_OK, _report(args, _window(doc), "normalized", body, _warnings(doc))


def cmd_classify(args):
    doc = _load(args)
    try:
        prism = verify_prism(doc.delta, _orientation(doc))
    except NotDistinguished as exc:
        return EXIT_NEGATIVE, _report(args, _window(doc), "rejected", {"reason": str(exc)})
    body = {"f": prism.normalized_f.to_text(),
            "f_fiber": fiber_reduce(prism.normalized_f).to_text(doc.ring.variables)}
    return EXIT_OK, _report(args, _window(doc), prism.kind.value, body, _warnings(doc))


def cmd_regseq(args):
    doc = _load(args)
    prism = verify_prism(doc.delta, _orientation(doc))
    i_max = doc.options.get("i_max", 2) if args.i_max is None else args.i_max
    exponent = doc.options.get("exponent", 1)
    rep = regseq_suite(prism, i_max=i_max, exponent=exponent)
    verdicts = {str(k): tri_text(v) for k, v in rep.verdicts.items()}
    body = {"kind": prism.kind.value, "i_max": rep.i_max, "exponent": rep.exponent,
            "agree": rep.agree, "conditions": verdicts,
            "details": {str(k): v for k, v in rep.details.items()}, "notes": list(rep.notes)}
    value = rep.value
    if value is UNDECIDED or not rep.agree:
        return EXIT_UNDECIDED, _report(args, _window(doc), "undecided", body, _warnings(doc))
    code = EXIT_OK if value else EXIT_NEGATIVE
    verdict = "regular sequence" if value else "not a regular sequence"
    return code, _report(args, _window(doc), verdict, body, _warnings(doc))


def cmd_regularity(args):
    doc = _load(args)
    pres = _presentation(doc)
    v = regularity_verdict(pres, doc.options.get("s_max"))
    body = {"f": pres.orientation_f.to_text(), "extra_gens": [g.to_text() for g in pres.extra_gens],
            "dim": v.dim, "emdim": v.emdim, "certificate": v.certificate, "blockers": v.blockers}
    code = {"ProvenRegular": EXIT_OK, "ProvenSingular": EXIT_NEGATIVE}.get(v.status.value, EXIT_UNDECIDED)
    return code, _report(args, _window(doc), v.status.value, body, _warnings(doc))


def cmd_hilbert_samuel(args):
    doc = _load(args)
    pres = _presentation(doc)
    s_max = args.s_max or doc.options.get("s_max") or default_hs_window(pres)
    lengths = hilbert_samuel(pres, s_max)
    v = regularity_verdict(pres, s_max)
    body = {"s_max": s_max, "lengths": lengths}
    if v.dim is not None:
        pattern = regular_pattern(v.dim, s_max)
        body["regular_pattern"] = pattern
        body["matches_regular_pattern"] = pattern == lengths
    body["status"] = v.status.value
    return EXIT_OK, _report(args, _window(doc), "computed", body, _warnings(doc))


def cmd_kunz(args):
    doc = _load(args)
    if not doc.gens:
        raise InputError("[ideal] must list the fiber ideal as 'gen' entries")
    gens = [fiber_reduce(g) for g in doc.gens]
    alg = artin_build(gens)
    cert = frobenius_flat(alg)
    body = {"fiber_ideal": [g.to_text(doc.ring.variables) for g in gens],
            "algebra_dim": alg.dim,
            "basis": [str(b) for b in alg.labels],
            "generators_needed": cert.generators_needed,
            "length_module": cert.length_module, "length_ring": cert.length_ring,
            "reason": cert.reason}
    code = EXIT_OK if cert.flat else EXIT_NEGATIVE
    return code, _report(args, _window(doc), "flat" if cert.flat else "not flat", body, _warnings(doc))


def cmd_hodge_tate(args):
    if args.spec:
        doc = _load(args)
        window, r = _window(doc), len(doc.gens)
        j_max = doc.options.get("j_max", 6)
    else:
        window, r, j_max = {}, 0, 6
    if args.rank is not None:
        r = args.rank
    if args.j_max is not None:
        j_max = args.j_max
    table = ht_filtration_table(r, j_max)
    body = {"r": r, "j_max": j_max, "ranks": table.ranks, "filtration": table.filtration,
            "twists": table.twists}
    return EXIT_OK, _report(args, window, "computed", body)


def cmd_lci(args):
    doc = _load(args)
    pres = _presentation(doc)
    v = lci_discreteness_check(pres)
    body = {"f": pres.orientation_f.to_text(), "extra_gens": [g.to_text() for g in pres.extra_gens]}
    if v is True:
        body["ht_ranks"] = ht_filtration_table(len(pres.extra_gens), 6).ranks
    code = EXIT_UNDECIDED if v is UNDECIDED else (EXIT_OK if v else EXIT_NEGATIVE)
    verdict = {EXIT_OK: "discrete", EXIT_NEGATIVE: "not discrete", EXIT_UNDECIDED: "undecided"}[code]
    return code, _report(args, _window(doc), verdict, body, _warnings(doc))


def cmd_counterexample(args):
    p = args.prime
    if not is_prime(p):
        raise UsageError(f"--prime {p} is not a prime number")
    M = args.pd_top if args.pd_top is not None else p * p
    N = args.precision if args.precision is not None else 3
    rep = counterexample_report(p, N, M)
    window = {"prime": p, "precision": N, "pd_top": M}
    body = {"T_nonzero": rep.t_nonzero, "T^p_zero": rep.t_p_zero,
            "frobenius_flat": rep.flatness.flat, "flatness_reason": rep.flatness.reason,
            "F_p_regularity": rep.regularity.status.value,
            "small_base": {"dim_A": rep.small_base.dim_A, "emdim_R": rep.small_base.emdim,
                           "small": rep.small_base.small},
            "checks": [c.as_dict() for c in rep.checks]}
    if rep.not_faithfully_flat:
        return EXIT_NEGATIVE, _report(args, window, "not faithfully flat", body)
    return EXIT_OK, _report(args, window, "flat", body)


def cmd_correspond(args):
    doc = _load(args)
    n = doc.ring.nvars
    matrix = doc.matrix if doc.matrix is not None else [
        [1 if i == j else 0 for j in range(n)] for i in range(n)]
    d = _orientation(doc)
    try:
        _, rep = correspondence_automorphism(doc.delta, d, doc.orientation_prime, matrix,
                                             doc.x_prime or None)
    except (NotInvertibleModM, CommutationFailed) as exc:
        return EXIT_NEGATIVE, _report(args, _window(doc), "rejected",
                                      {"reason": f"{type(exc).__name__}: {exc}"})
    body = {"matrix": [[e.to_text() for e in r] for r in rep.matrix],
            "images": [x.to_text() for x in rep.images],
            "checks": [c.as_dict() for c in rep.checks]}
    return EXIT_OK, _report(args, _window(doc), "verified", body, _warnings(doc))


def cmd_axioms(args):
    doc = _load(args)
    samples = args.samples or doc.options.get("samples", 100)
    rep = check_delta_axioms(doc.delta, samples, args.seed, args.jobs)
    body = {"samples": rep.samples, "checked_precision": rep.checked_precision,
            "violations": rep.violations}
    code = EXIT_OK if rep.ok else EXIT_NEGATIVE
    return code, _report(args, _window(doc), "axioms hold" if rep.ok else "violations found", body)


COMMANDS = {
    "verify-prism": (cmd_verify_prism, "check the prism axioms for the orientation"),
    "normalize": (cmd_normalize, "rewrite the orientation as a unit times p - f"),
    "classify": (cmd_classify, "transversal or crystalline"),
    "regseq": (cmd_regseq, "nine-way regular-sequence cross-check"),
    "regularity": (cmd_regularity, "three-valued regularity of the presented local ring"),
    "hilbert-samuel": (cmd_hilbert_samuel, "lengths of R/m^s"),
    "kunz-artinian": (cmd_kunz, "Frobenius flatness of the Artinian fiber algebra"),
    "hodge-tate": (cmd_hodge_tate, "Hodge-Tate graded ranks"),
    "lci-check": (cmd_lci, "whether the extra generators form a regular sequence"),
    "counterexample": (cmd_counterexample, "divided-power envelope with non-flat Frobenius"),
    "correspond": (cmd_correspond, "verify a coordinate-change automorphism"),
    "axioms": (cmd_axioms, "random check of the delta-ring identities"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spec", metavar="FILE")
    common.add_argument("--precision", type=int, metavar="N")
    common.add_argument("--degree", type=int, metavar="D")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    parser = _Parser(prog="prismlab", description="Exact checks for delta-rings and prisms.")
    parser.add_argument("--version", action="version", version=f"prismlab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, helptext) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if name == "regseq":
            sp.add_argument("--i-max", type=int, dest="i_max")
        if name == "hilbert-samuel":
            sp.add_argument("--s-max", type=int, dest="s_max")
        if name == "hodge-tate":
            sp.add_argument("--rank", type=int)
            sp.add_argument("--j-max", type=int, dest="j_max")
        if name == "counterexample":
            sp.add_argument("--prime", type=int, required=True)
            sp.add_argument("--pd-top", type=int, dest="pd_top")
        if name == "axioms":
            sp.add_argument("--samples", type=int)
    return parser


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        handler = COMMANDS[args.command][0]
        code, report = handler(args)
    except UsageError as exc:
        print(f"prismlab: usage error: {exc}", file=err)
        return EXIT_USAGE
    except (InputError, NotInMaximalIdeal, UnitIdeal, NotArtinian, NotLocal, NotAUnit,
            NoOrientationFound) as exc:
        print(f"prismlab: input error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INPUT
    except (NotDistinguished, MembershipFailed) as exc:
        print(f"prismlab: rejected: {type(exc).__name__}: {exc}", file=err)
        return EXIT_NEGATIVE
    except (WindowTooSmall, PrecisionExhausted) as exc:
        print(f"prismlab: window too small: {exc}", file=err)
        return EXIT_UNDECIDED
    except SystemExit as exc:          # --help / --version
        return int(exc.code or 0)
    report["exit"] = code
    out.write(render(_plain(report), args.format))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
