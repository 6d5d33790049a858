"""Command-line interface.

Subcommands: product, analyze, certify-rcp, norm.  Exit codes: 0 ok/RCP,
1 NOT_RCP, 2 parse error, 3 analysis refused or certificate violated,
4 undecided.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .analyzer import (
    AnalyzerConfig,
    Finite,
    Periodic,
    analyze,
    certify_rcp,
    uniform_certificate,
)
from .errors import (
    AnalysisRefusedError,
    CertificateViolationError,
    InvalidCertificateError,
    NoContractingNormError,
    ParseError,
)
from .matrixcore import lyapunov_scaling, norm_value, spectral_certificate
from .product import dense_partial_product, initial_state, step, trace_row
from .seqfile import (
    SequenceDocument,
    fmt_float,
    fmt_matrix,
    format_rcp_verdict,
    format_report,
    norm_by_name,
    parse_matrix_file,
    parse_sequence_file,
    write_trace_csv,
)

EXIT_OK = 0
EXIT_NOT_RCP = 1
EXIT_PARSE = 2
EXIT_REFUSED = 3
EXIT_UNDECIDED = 4


def _load_sequence(path, want_set: bool) -> SequenceDocument:
    doc = parse_sequence_file(path)
    if want_set and doc.kind != "set":
        raise ParseError("this command needs a file of kind 'set'")
    if not want_set and doc.kind == "set":
        raise ParseError("kind 'set' is only valid for certify-rcp")
    return doc


def _sequence_certificate(doc: SequenceDocument, k_max: int = 64):
    cert = doc.declared_certificate()
    if cert is not None:
        return cert
    found = uniform_certificate([a.c for a in doc.members], k_max)
    if found is None:
        raise AnalysisRefusedError(
            "no contraction certificate found for the sequence members"
        )
    return found


def cmd_product(args) -> int:
    doc = _load_sequence(args.input, want_set=False)
    if args.n < 1:
        raise ParseError("--n must be >= 1")
    cert = _sequence_certificate(doc)
    members = doc.members
    seq = [
        members[k % len(members)] if doc.kind == "periodic" else members[min(k, len(members) - 1)]
        for k in range(args.n)
    ]
    state = initial_state(doc.s, doc.d - doc.s)
    rows = []
    for a in seq:
        state = step(state, a, cert)
        rows.append(trace_row(state, cert))
    dense = dense_partial_product(seq, args.n)
    diff = max(
        float(np.abs(dense[: doc.s, doc.s :] - state.x).max()),
        float(np.abs(dense[doc.s :, doc.s :] - state.gamma).max()),
    )
    ok = diff <= 1e-11
    out = [
        f"n = {state.n}",
        f"certificate: {cert.describe()}",
        "X:",
        fmt_matrix(state.x),
        "gamma:",
        fmt_matrix(state.gamma),
        "L:",
        fmt_matrix(state.l),
        f"deviation bound: {fmt_float(state.bound)}",
        f"dense cross-check: {'OK' if ok else 'FAILED'} (|diff| <= 1e-11)",
    ]
    print("\n".join(out))
    if args.trace:
        write_trace_csv(args.trace, rows)
    return EXIT_OK if ok else EXIT_REFUSED


def cmd_analyze(args) -> int:
    doc = _load_sequence(args.input, want_set=False)
    cfg = AnalyzerConfig(
        eps=args.eps, horizon=args.horizon, window=args.window
    )
    seq = Periodic(doc.members) if doc.kind == "periodic" else Finite(doc.members)
    report = analyze(seq, cfg, cert=doc.declared_certificate())
    sys.stdout.write(format_report(report))
    return EXIT_OK


def cmd_certify_rcp(args) -> int:
    doc = _load_sequence(args.input, want_set=True)
    verdict = certify_rcp(list(doc.members), atol=args.atol)
    sys.stdout.write(format_rcp_verdict(verdict))
    return EXIT_OK if verdict.is_rcp else EXIT_NOT_RCP


def cmd_norm(args) -> int:
    m = parse_matrix_file(args.input)
    if args.kind == "lyapunov":
        try:
            norm = lyapunov_scaling(m)
        except NoContractingNormError as exc:
            print(f"undecided: {exc}", file=sys.stderr)
            return EXIT_UNDECIDED
        print("lyapunov scaling P:")
        print(fmt_matrix(norm.scaling))
        print(f"norm value: {fmt_float(norm_value(m, norm))}")
        return EXIT_OK
    if args.kind == "auto":
        cert = spectral_certificate(m)
    else:
        cert = spectral_certificate(m, norms=(norm_by_name(args.kind),), fallback=False)
    if cert is None:
        print(
            "undecided: no contraction certificate found "
            "(spectral radius >= 1 suspected, not proven)",
            file=sys.stderr,
        )
        return EXIT_UNDECIDED
    print(f"certificate: {cert.describe()}")
    if cert.kind == "lyapunov":
        print("lyapunov scaling P:")
        print(fmt_matrix(cert.norm.scaling))
    print(f"norm value: {fmt_float(norm_value(m, cert.norm))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockprod",
        description="Analyze infinite products of block upper-triangular matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", help="compute a partial right product")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trace", default=None, help="write per-step CSV trace here")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("analyze", help="decide convergence of the product")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--horizon", type=int, default=10000)
    p.add_argument("--window", type=int, default=20)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify-rcp", help="certify the RCP property of a set")
    p.add_argument("--input", required=True)
    p.add_argument("--atol", type=float, default=1e-9)
    p.set_defaults(func=cmd_certify_rcp)

    p = sub.add_parser("norm", help="certify contraction of a single matrix")
    p.add_argument("--input", required=True)
    p.add_argument(
        "--kind",
        choices=("auto", "one", "inf", "fro", "lyapunov"),
        default="auto",
    )
    p.set_defaults(func=cmd_norm)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CertificateViolationError as exc:
        print(f"certificate violated: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (AnalysisRefusedError, InvalidCertificateError) as exc:
        print(f"analysis refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
