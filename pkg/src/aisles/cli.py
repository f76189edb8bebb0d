"""Command line front end; every command writes one deterministic JSON report.

Exit codes: 0 success, 2 malformed or rejected input, 3 could not compute
(non-termination, unresolved rows), 4 computed and false.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import List, Optional

from . import __version__
from .complexes import (ComplexError, ResolutionError, cancel_contractible, hocolim_bicomplex, hocolim_sequence,
                        is_quasi_iso, shift, soft_truncation_geq)
from .io import (Document, InputError, chain_map_to_json, complex_to_json, dumps, parse_field)
from .linalg import QQ

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_COMPUTED = 3
EXIT_FALSE = 4

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def _resolve_path(path: str) -> str:
    if path.startswith("builtin:"):
        return os.path.join(DATA_DIR, path[len("builtin:"):] + ".json")
    return path


def _header(args, anchor: str, field) -> dict:
    return {"tool": "aisles", "version": __version__, "field": field.name,
            "seed": args.seed, "anchor": anchor, "command": args.command}


def _load(args) -> Document:
    field = parse_field(args.field) if args.field else None
    return Document.load(_resolve_path(args.input), field)


def _emit(args, report: dict, summary: List[str]):
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.summary:
        for line in summary:
            print(line, file=sys.stderr)


# ---------------------------------------------------------------------------
# commands

def cmd_truncate(args) -> int:
    from .tstruct import NonTermination, certificate_to_json, long_exact_sequence_holds, truncate
    doc = _load(args)
    E = doc.complex(args.generator)
    M = doc.complex(args.target)
    En = shift(E, -args.n)
    rep = _header(args, "aisle-truncation-triangle", doc.field)
    rep.update({"generator": args.generator, "target": args.target, "n": args.n})
    try:
        res = truncate(En, M, args.max_iter)
    except NonTermination as exc:
        rep.update({"status": "non-termination", "max_iter": exc.max_iter,
                    "rounds": exc.windows, "partial_B": complex_to_json(exc.partial)})
        _emit(args, rep, ["truncate: no termination within %d iterations" % exc.max_iter])
        return EXIT_NOT_COMPUTED
    tri_ok = long_exact_sequence_holds(res)
    rep.update({
        "status": "ok",
        "iterations": res.iterations,
        "window": list(res.window),
        "N": complex_to_json(res.N),
        "B": complex_to_json(res.B),
        "B_reduced": complex_to_json(cancel_contractible(res.B)[0]),
        "maps": {"N->M": chain_map_to_json(res.n_to_m), "M->B": chain_map_to_json(res.m_to_b),
                 "B->N[1]": chain_map_to_json(res.b_to_n1)},
        "certificate": certificate_to_json(res.certificate),
        "rounds": res.rounds,
        "long_exact_sequence": tri_ok,
    })
    ok = tri_ok
    if args.check_soft:
        # oracle for the standard aisle: B against the soft truncation above n
        soft = soft_truncation_geq(M, args.n + 1)
        match = soft.cohomology_dims() == res.B.cohomology_dims()
        rep["soft_truncation"] = {"cohomology": {str(k): v for k, v in sorted(soft.cohomology_dims().items())},
                                  "matches": match}
        ok = ok and match
    _emit(args, rep, ["truncate: %d iteration(s), B cohomology %s" % (res.iterations, res.B.cohomology_dims())])
    return EXIT_OK if ok else EXIT_FALSE


def cmd_tilt_verify(args) -> int:
    from .tstruct import (CertificateError, is_compact_presentation, is_exceptional,
                          verify_generation, certificate_from_json)
    doc = _load(args)
    E = doc.complex(args.generator)
    rep = _header(args, "tilting-object", doc.field)
    rep["generator"] = args.generator
    compact = is_compact_presentation(E)
    exc, wit = is_exceptional(E) if compact else (False, [])
    rep["compact"] = compact
    rep["exceptional"] = exc
    rep["exceptional_witnesses"] = [{"j": j, "dim": h} for j, h in wit]
    try:
        if args.certificate_file:
            import json
            with open(_resolve_path(args.certificate_file), encoding="utf-8") as fh:
                cert = certificate_from_json(doc.field, json.load(fh))
        else:
            cert = doc.certificate(args.certificate)
        gen = verify_generation(E, cert)
    except CertificateError as err:
        rep["generation"] = False
        rep["certificate_error"] = {"step": err.index, "message": str(err)}
        _emit(args, rep, ["tilt-verify: malformed certificate at step %d" % err.index])
        return EXIT_INPUT
    rep["generation"] = gen
    ok = compact and exc and gen
    rep["tilting"] = ok
    _emit(args, rep, ["tilt-verify: compact=%s exceptional=%s generation=%s" % (compact, exc, gen)])
    return EXIT_OK if ok else EXIT_FALSE


def cmd_equiv(args) -> int:
    from .equivalence import EquivalenceReport, compare_hom_dims
    from .endo import StrictnessError, endomorphism_ring
    from .fixtures import random_complex
    doc = _load(args)
    E = doc.complex(args.generator)
    A = E.algebra
    rep = _header(args, "derived-equivalence", doc.field)
    rep["generator"] = args.generator
    try:
        ring = endomorphism_ring(E)
        report = EquivalenceReport(args.generator, ring)
        rng = random.Random(args.seed)
        ks = range(args.k_range[0], args.k_range[1] + 1)
        for s in range(args.samples):
            M = random_complex(A, rng, -1, 1, perfect=args.perfect_samples)
            N = random_complex(A, rng, -1, 1)
            report.rows.extend(compare_hom_dims(ring, M, N, ks, label="sample-%d" % s))
    except StrictnessError as exc:
        rep.update({"status": "not computed", "reason": str(exc)})
        _emit(args, rep, ["equiv: %s" % exc])
        return EXIT_NOT_COMPUTED
    rep.update(report.to_json())
    not_computed = any(r["verdict"] == "not computed" for r in report.rows)
    false = any(r["verdict"] is False for r in report.rows)
    rep["status"] = "ok"
    _emit(args, rep, ["equiv: %d rows, %s" % (len(report.rows), "verified" if report.verified else "not verified")])
    if false:
        return EXIT_FALSE
    if not_computed:
        return EXIT_NOT_COMPUTED
    return EXIT_OK


def cmd_beilinson(args) -> int:
    from .equivalence import beilinson_pipeline
    if not 0 <= args.d <= 3:
        print("error: d must lie in 0..3", file=sys.stderr)
        return EXIT_INPUT
    report = beilinson_pipeline(args.d, samples=args.samples, seed=args.seed)
    rep = _header(args, "beilinson-correspondence", QQ)
    rep.update(report.to_json())
    _emit(args, rep, ["beilinson: d=%d dim=%d verified=%s" % (args.d, report.extra["algebra_dim"], report.verified)])
    return EXIT_OK if report.verified else EXIT_FALSE


def cmd_hocolim_check(args) -> int:
    doc = _load(args)
    names = [args.system] if args.system else sorted(doc.data.get("systems", {}))
    rep = _header(args, "homotopy-colimit", doc.field)
    results = []
    ok = True
    for name in names:
        try:
            sys_ = doc.system(name)
        except ComplexError as exc:
            raise InputError("system %r rejected: %s" % (name, exc))
        row = {"system": name}
        tot, comp, colim = hocolim_bicomplex(sys_)
        row["colimit"] = complex_to_json(colim)
        row["bicomplex_quasi_iso"] = is_quasi_iso(comp)
        if sys_.eventually_constant:
            tel, tcomp = hocolim_sequence(sys_)
            row["telescope_quasi_iso"] = is_quasi_iso(tcomp)
        ok = ok and row["bicomplex_quasi_iso"] and row.get("telescope_quasi_iso", True)
        results.append(row)
    rep["systems"] = results
    rep["verified"] = ok
    _emit(args, rep, ["hocolim-check: %s %s" % (r["system"], r["bicomplex_quasi_iso"]) for r in results])
    return EXIT_OK if ok else EXIT_FALSE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="QQ or GF(p); overrides the document")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--max-iter", type=int, default=64, dest="max_iter")
    common.add_argument("--out", default=None, help="report path (default: stdout)")
    common.add_argument("--summary", action="store_true", help="plain-text summary on stderr")

    p = argparse.ArgumentParser(prog="aisles", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("truncate", parents=[common], help="truncation triangle of a complex")
    t.add_argument("input")
    t.add_argument("--generator", required=True)
    t.add_argument("--target", required=True)
    t.add_argument("--n", type=int, default=0, help="truncate for the aisle shifted by n")
    t.add_argument("--check-soft", action="store_true", dest="check_soft",
                   help="compare B with the soft truncation (meaningful for E = A)")
    t.set_defaults(func=cmd_truncate)

    v = sub.add_parser("tilt-verify", parents=[common], help="compactness, exceptionality, generation")
    v.add_argument("input")
    v.add_argument("--generator", required=True)
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--certificate", help="certificate name in the document")
    g.add_argument("--certificate-file", dest="certificate_file", help="certificate JSON file")
    v.set_defaults(func=cmd_tilt_verify)

    e = sub.add_parser("equiv", parents=[common], help="Hom-dimension comparison through Hom*(E, -)")
    e.add_argument("input")
    e.add_argument("--generator", required=True)
    e.add_argument("--samples", type=int, default=20)
    e.add_argument("--k-range", type=int, nargs=2, default=[-3, 3], dest="k_range")
    e.add_argument("--perfect-samples", action="store_true", dest="perfect_samples",
                   help="sample perfect sources (needed when resolutions do not terminate)")
    e.set_defaults(func=cmd_equiv)

    b = sub.add_parser("beilinson", parents=[common], help="Beilinson algebra tables and the d = 1 tilt")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--samples", type=int, default=4)
    b.set_defaults(func=cmd_beilinson)

    h = sub.add_parser("hocolim-check", parents=[common], help="homotopy colimits against the colimit")
    h.add_argument("input")
    h.add_argument("--system", default=None)
    h.set_defaults(func=cmd_hocolim_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except ResolutionError as exc:
        print("not computed: %s" % exc, file=sys.stderr)
        return EXIT_NOT_COMPUTED
    except ComplexError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
