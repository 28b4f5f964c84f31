"""``pwv validate`` and ``pwv analyze``.

Exit codes: 0 success, 1 I/O or parse failure, 2 schema invalid,
3 precondition failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .algebra import ValidationError
from .filtrations import PreconditionError, SuiteError
from .lefschetz import Sl2CompletionError
from .linalg import LinalgError, format_scalar, scalar
from .report import (DocumentParseError, build_report, emit_report, load_json, run_pipeline,
                     validate_document)

EXIT_OK, EXIT_IO, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3, 4


def _err(msg: str) -> None:
    sys.stderr.write(msg.rstrip("\n") + "\n")


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def parse_vector(text: str) -> List:
    """Accepts a JSON list or comma-separated entries such as ``0,0,1,1,1/2``."""
    text = text.strip()
    if text.startswith("["):
        raw = json.loads(text)
    else:
        raw = [t.strip() for t in text.split(",")]
    return [scalar(x) for x in raw]


def _load(path: str):
    """(bytes, ManifoldDocument) or an exit code."""
    try:
        data = _read(path)
        doc = load_json(data)
    except (OSError, DocumentParseError) as exc:
        _err(f"error: {exc}")
        return EXIT_IO
    try:
        return data, validate_document(doc)
    except ValidationError as exc:
        _err("invalid document:")
        for v in exc.violations:
            _err(f"  - {v}")
        return EXIT_SCHEMA


def run_validate(path: str) -> int:
    loaded = _load(path)
    if isinstance(loaded, int):
        return loaded
    print(f"{path}: valid")
    return EXIT_OK


def run_analyze(path: str, fmt: str = "json", seed_rho: Optional[str] = None,
                swap_eta_beta: bool = False, timing: bool = False,
                skip_llv: bool = False, out=None) -> int:
    loaded = _load(path)
    if isinstance(loaded, int):
        return loaded
    data, mdoc = loaded
    rho = None
    if seed_rho is not None:
        try:
            rho = parse_vector(seed_rho)
        except (ValueError, TypeError) as exc:
            _err(f"error: cannot parse --seed-rho: {exc}")
            return EXIT_IO
    options = {
        "seed_rho": [format_scalar(x) for x in rho] if rho is not None else None,
        "swap_eta_beta": bool(swap_eta_beta),
        "llv": not skip_llv,
    }
    try:
        an = run_pipeline(mdoc, seed_rho=rho, swap_eta_beta=swap_eta_beta,
                          llv=False if skip_llv else None)
    except PreconditionError as exc:
        _err(f"precondition failure: {exc}")
        return EXIT_PRECONDITION
    except (SuiteError, Sl2CompletionError, LinalgError) as exc:
        _err(f"verification failure: {exc}")
        return EXIT_VERIFY
    report = build_report(an, data, options, timing=timing)
    stream = out or sys.stdout.buffer
    stream.write(emit_report(report, fmt))
    stream.flush()
    if not an.ok:
        _err("verification failure: " + ", ".join(v.name for v in an.verdicts if not v.ok))
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwv", description="Exact verification of P = W on a "
                                "hyper-Kähler-type cohomology ring.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="check a manifold document")
    v.add_argument("file")
    a = sub.add_parser("analyze", help="run the full pipeline and print a report")
    a.add_argument("file")
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--seed-rho", metavar="VECTOR", default=None,
                   help="explicit rho, as a JSON list or comma-separated rationals")
    a.add_argument("--swap-eta-beta", action="store_true")
    a.add_argument("--timing", action="store_true",
                   help="include wall times (makes the report non-reproducible)")
    a.add_argument("--skip-llv", action="store_true", help="skip the closure of the full algebra g")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return run_validate(args.file)
    return run_analyze(args.file, fmt=args.format, seed_rho=args.seed_rho,
                       swap_eta_beta=args.swap_eta_beta, timing=args.timing,
                       skip_llv=args.skip_llv)


if __name__ == "__main__":
    sys.exit(main())
