"""Command-line interface.

Exit codes: 0 all checks pass, 1 a check failed, 2 input error, 3 Leibniz
identity violation, 4 capability bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .algebra import (
    AlgebraFormatError,
    LeibnizIdentityError,
    LinearMap,
    algebra_to_json,
    annihilator,
    check_leibniz,
    classify_nilpotent,
    derived_algebra,
    is_derivation,
    load_algebra,
    map_from_json,
    nilindex,
    series_dims,
    squares_ideal,
)
from .automorphisms import (
    build_two_local_aut,
    decompose_blocks,
    highest_weight_eigen_machinery,
    is_automorphism,
    nf_aut_suite,
    preserves_squares_ideal,
    sl2_v3_fixed_point_analysis,
    verify_two_local_aut,
)
from .catalog import build, catalog_names, decomposition
from .derivations import compute_der, stabilizer, verify_decomposition
from .linalg import parse_rational
from .local import (
    DEFAULT_SEED,
    MAX_SYMBOLIC_DIM,
    CapabilityError,
    certify_local,
    local_certificate,
    simple_local_certificate,
    structured_samples,
)
from .suite import GoldenFileMissing, Record, Report, check_local_filiform, check_local_simple, load_golden, run_suite
from .twolocal import (
    HypothesisError,
    build_two_local,
    nf_rigidity_check,
    nonlinearity_witness,
    pair_samples,
    verify_two_local_derivation,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IDENTITY, EXIT_CAPABILITY = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


# helpers ------------------------------------------------------------------------

def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer, got {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _point(text: str) -> tuple:
    try:
        return tuple(parse_rational(p.strip()) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(args, required: bool = True):
    """Algebra from a file argument or --name; also returns the decomposition when known."""
    path = getattr(args, "file", None) or getattr(args, "algebra", None)
    name = getattr(args, "name", None)
    if path:
        A = load_algebra(path, check=not args.skip_identity_check)
        return A, None
    if name:
        try:
            A = build(name)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        try:
            dec = decomposition(name)
        except KeyError:
            dec = None
        return A, dec
    if required:
        raise InputError("give an algebra file or --name")
    return None, None


def _load_map(path: str, dim: int):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return map_from_json(text, dim)


def _emit(report: Report, args, text_lines=None) -> int:
    if args.markdown:
        Path(args.markdown).write_text(report.to_markdown(), encoding="utf-8")
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        if text_lines:
            sys.stdout.write("\n".join(text_lines) + "\n")
        sys.stdout.write(report.to_text())
    if not report.passed:
        sys.stderr.write("failing checks: " + ", ".join(report.failing) + "\n")
        return EXIT_FAIL
    return EXIT_OK


# subcommands ----------------------------------------------------------------------

def cmd_check(args) -> int:
    A = load_algebra(args.file, check=False)
    ok, triple = check_leibniz(A)
    if not ok and not args.skip_identity_check:
        i, j, k = triple
        sys.stderr.write(f"leibniz: FAILED on basis triple ({i + 1}, {j + 1}, {k + 1}) "
                         f"= ({A.basis_names[i]}, {A.basis_names[j]}, {A.basis_names[k]})\n")
        return EXIT_IDENTITY
    report = Report(args.seed, title=f"check {A.name}")
    ni = nilindex(A)
    details = {
        "dim": A.dim,
        "leibniz": ok,
        "lower_central_dims": series_dims(A, "lower_central"),
        "derived_dims": series_dims(A, "derived"),
        "nilindex": ni,
        "class": classify_nilpotent(A),
        "dim_squares_ideal": squares_ideal(A).dim,
        "dim_L2": derived_algebra(A).dim,
        "dim_annihilator": annihilator(A).dim,
    }
    # with --skip-identity-check a failing identity is reported but accepted
    report.add(Record("check", "structure-constant table validation", [A.name], ok or args.skip_identity_check, details))
    head = f"leibniz: {'ok' if ok else 'skipped'}, " + (f"nilindex {ni}" if ni is not None else "not nilpotent")
    return _emit(report, args, [head])


def cmd_catalog(args) -> int:
    if args.list or not args.name:
        for n in catalog_names():
            print(n)
        return EXIT_OK
    try:
        A = build(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    text = algebra_to_json(A)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_derivations(args) -> int:
    A, dec = _load(args)
    der = compute_der(A, dec)
    report = Report(args.seed, title=f"derivations of {A.name}")
    details = {"dim_der": der.dim, "dim_inner": der.inner.dim, "basis": der.maps}
    report.add(Record("der", "derivation algebra", [A.name], all(is_derivation(A, D) for D in der.maps), details))
    if dec is not None:
        rep = verify_decomposition(dec, der)
        report.add(Record("decomposition", "Der = inner + canonical derivations", [A.name], rep["ok"], rep))
    if args.point is not None or dec is not None:
        point = args.point
        if point is None:
            point = tuple(a + b for a, b in zip(dec.h0, dec.i0))
        if len(point) != A.dim:
            raise InputError(f"--point needs {A.dim} coordinates")
        st = stabilizer(der, point)
        report.add(Record("stabilizer", "derivations vanishing at the point", [A.name, point], True,
                          {"point": point, "dim": st.dim, "basis": st.basis}))
    return _emit(report, args)


def cmd_localder(args) -> int:
    if args.paper_suite:
        report = Report(args.seed, title="local derivation checks")
        report.add(check_local_simple())
        report.add(check_local_filiform(load_golden(), args.seed))
        return _emit(report, args)
    A, dec = _load(args)
    if A.dim > MAX_SYMBOLIC_DIM:
        raise CapabilityError(f"symbolic certificates are limited to dimension {MAX_SYMBOLIC_DIM}; got {A.dim}")
    report = Report(args.seed, title=f"local derivations of {A.name}")
    der = compute_der(A, dec)
    if args.superspace or not args.certify:
        cert = simple_local_certificate(dec) if dec is not None else local_certificate(A, der)
        report.add(Record("superspace", "certified superspace of local derivations", [A.name],
                          True,
                          dict(cert.dims, verdict=cert.verdict, basis=cert.superspace.basis)))
    if args.certify:
        delta = LinearMap(A, _load_map(args.certify, A.dim))
        samples = structured_samples(A.dim, args.seed)
        ok, log = certify_local(A, delta, samples, der=der)
        bad = [e["point"] for e in log if not e["ok"]]
        report.add(Record("certify", "pointwise membership Delta(x) in Der(L) x", [A.name, args.certify], ok,
                          {"samples": len(samples), "failures": len(bad), "first_failures": bad[:5],
                           "is_derivation": is_derivation(A, delta)}))
    return _emit(report, args)


def cmd_twolocal(args) -> int:
    report = Report(args.seed, title="2-local derivations")
    if args.nf is not None:
        if args.nf < 2:
            raise InputError("--nf needs n >= 2")
        rep = nf_rigidity_check(args.nf)
        report.add(Record("nf", "NF_n derivations determined by e1", [f"nf{args.nf}"], rep["ok"], rep))
    A, _ = _load(args, required=args.nf is None and not args.demo)
    if args.demo and A is None:
        A = build("f1-n5-zero")
    if A is not None:
        T = build_two_local(A)
        rep = verify_two_local_derivation(T, pair_samples(A.dim, args.seed, args.pairs))
        v1, v2 = nonlinearity_witness(T)
        report.add(Record("twolocal", "nonlinear 2-local derivation", [A.name], rep.passed, {
            "map": T.to_dict(), "pairs": rep.pairs_tested, "failures": rep.failures[:5],
            "nonadditive_on": [v1, v2], "value_at_sum": T(tuple(a + b for a, b in zip(v1, v2))),
        }))
    return _emit(report, args)


def cmd_aut(args) -> int:
    report = Report(args.seed, title="automorphisms")
    did = False
    if args.example_6_4:
        did = True
        res = sl2_v3_fixed_point_analysis()
        sols = [{k: v for k, v in s.items() if k != "map"} | {"matrix": s["map"]} for s in res["solutions"]]
        ok = sorted(s["params"] for s in res["solutions"]) == [(-1, 1, -1), (1, 0, 1)]
        report.add(Record("fixed-points", "torus-family automorphisms fixing h + x0 + x1 + x2",
                          ["sl2-v3-printed"], ok, {"solutions": sols, "exponents": res["exponents"]}))
    if args.nf is not None:
        did = True
        if args.nf < 2:
            raise InputError("--nf needs n >= 2")
        rep = nf_aut_suite(args.nf, args.seed)
        report.add(Record("nf-aut", "NF_n automorphisms fixed by e1", [f"nf{args.nf}"], rep["ok"], rep))
    if args.machinery_63 is not None:
        did = True
        if args.machinery_63 < 1:
            raise InputError("--machinery-63 needs n >= 1")
        rep = highest_weight_eigen_machinery(args.machinery_63, args.seed)
        report.add(Record("eigen", "R_(h+e) eigenvector machinery", [f"V_{args.machinery_63 + 1}"], rep["ok"], rep))
    if args.twolocal_demo:
        did = True
        A, _ = _load(args, required=False)
        A = A or build("f1-n5-zero")
        T = build_two_local_aut(A)
        rep = verify_two_local_aut(T, pair_samples(A.dim, args.seed, args.pairs))
        v1, v2 = nonlinearity_witness(T)
        report.add(Record("twolocal-aut", "reconstruction: nonlinear 2-local automorphism", [A.name], rep.passed, {
            "map": T.to_dict(), "pairs": rep.pairs_tested, "failures": rep.failures[:5], "nonadditive_on": [v1, v2]}))
    if args.verify or args.decompose:
        did = True
        A, dec = _load(args)
        if not args.verify:
            raise InputError("--decompose needs --verify <map.json>")
        phi = LinearMap(A, _load_map(args.verify, A.dim))
        ok, why = is_automorphism(A, phi)
        details = {"violation": why}
        if ok:
            details["preserves_squares_ideal"] = preserves_squares_ideal(A, phi)
        report.add(Record("verify", "automorphism check", [A.name, args.verify], ok, details))
        if args.decompose:
            if dec is None:
                raise InputError("--decompose needs a catalog simple algebra via --name")
            if ok:
                blk = decompose_blocks(dec, phi)
                report.add(Record("blocks", "G/I block structure", [A.name], True, {
                    "phi_GG": blk.phi_gg, "phi_GI": blk.phi_gi, "phi_II": blk.phi_ii, "omega": blk.omega}))
    if not did:
        raise InputError("choose one of --verify, --example-6-4, --nf, --twolocal-demo, --machinery-63")
    return _emit(report, args)


def cmd_paper_suite(args) -> int:
    report = run_suite(args.seed, args.golden_dir, args.pairs)
    return _emit(report, args)


# parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--markdown", metavar="PATH", help="also write a markdown report")
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="seed for sampled points (default 0xC0FFEE)")
    common.add_argument("--skip-identity-check", action="store_true", help="accept tables failing the Leibniz identity")

    p = argparse.ArgumentParser(prog="leibnizkit", description="Exact checks on right Leibniz algebras.")
    p.add_argument("--version", action="version", version=f"leibnizkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="validate an algebra file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("catalog", parents=[common], help="write a built-in algebra as JSON")
    s.add_argument("--name")
    s.add_argument("--out")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("derivations", parents=[common], help="derivation algebra and decompositions")
    s.add_argument("file", nargs="?")
    s.add_argument("--name")
    s.add_argument("--point", type=_point, help="comma-separated coordinates for the stabilizer")
    s.set_defaults(func=cmd_derivations)

    s = sub.add_parser("localder", parents=[common], help="local derivations")
    s.add_argument("file", nargs="?")
    s.add_argument("--name")
    s.add_argument("--superspace", action="store_true")
    s.add_argument("--certify", metavar="MAP_JSON")
    s.add_argument("--paper-suite", action="store_true", help="run the built-in local-derivation checks")
    s.set_defaults(func=cmd_localder)

    s = sub.add_parser("twolocal", parents=[common], help="2-local derivations")
    s.add_argument("--algebra")
    s.add_argument("--name")
    s.add_argument("--demo", action="store_true")
    s.add_argument("--nf", type=int)
    s.add_argument("--pairs", type=int, default=0, help="extra random points for the pair sample")
    s.set_defaults(func=cmd_twolocal)

    s = sub.add_parser("aut", parents=[common], help="automorphisms")
    s.add_argument("--algebra")
    s.add_argument("--name")
    s.add_argument("--verify", metavar="MAP_JSON")
    s.add_argument("--decompose", action="store_true")
    s.add_argument("--example-6-4", action="store_true", help="fixed points on the printed 6-dimensional table")
    s.add_argument("--nf", type=int)
    s.add_argument("--twolocal-demo", action="store_true")
    s.add_argument("--machinery-63", type=int, metavar="N", help="R_(h+e) eigenvector machinery on V_(N+1)")
    s.add_argument("--pairs", type=int, default=0)
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("paper-suite", parents=[common], help="run every verification check")
    s.add_argument("--golden-dir", help="directory with golden algebra files")
    s.add_argument("--pairs", type=int, default=0)
    s.set_defaults(func=cmd_paper_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except LeibnizIdentityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IDENTITY
    except CapabilityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAPABILITY
    except (InputError, AlgebraFormatError, GoldenFileMissing, HypothesisError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
