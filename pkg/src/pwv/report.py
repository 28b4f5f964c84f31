"""Manifold documents, the end-to-end pipeline and report emission."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .algebra import GradedAlgebra, ValidationError, parse_and_validate
from .filtrations import (FiltrationTable, HodgeDiamond, OperatorSuite, PerverseDecomposition,
                          PreconditionError, Verdict, build_operator_suite, even_odd_check,
                          monodromy_filtration, multiplicativity_check, nilpotent_consistency,
                          oracle_mismatches, perverse_decomposition, perverse_filtration,
                          perverse_hodge, so5_dictionary_check, type_iii_check, verify_pw,
                          wedge_scalar)
from .lefschetz import Sl2Triple, ad_grading, llv_algebra
from .linalg import Matrix, format_scalar, is_rational, scalar
from .quadratic import (QuadraticError, QuadraticSpace, balance_eta, complement_signature,
                        find_positive_orthogonal, mukai_extend, normalize_eta, signature)

KNOWN_FLAGS = {"llv"}


class DocumentParseError(ValueError):
    pass


@dataclass
class ManifoldDocument:
    name: str
    algebra: GradedAlgebra
    Q: QuadraticSpace
    eta: tuple
    beta: tuple
    rho: Optional[tuple] = None
    hodge: Optional[HodgeDiamond] = None
    flags: Dict[str, object] = field(default_factory=dict)


def load_json(data: bytes) -> dict:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DocumentParseError(f"cannot parse JSON: {exc}") from None
    return doc


def _vector(raw, length: int, what: str, problems: List[str]) -> Optional[tuple]:
    if not isinstance(raw, list) or len(raw) != length:
        problems.append(f"{what} must be a list of {length} rationals")
        return None
    try:
        return tuple(scalar(x) for x in raw)
    except (TypeError, ValueError) as exc:
        problems.append(f"{what}: {exc}")
        return None


def validate_document(doc: dict) -> ManifoldDocument:
    """Schema-level checks of a manifold document (everything short of the
    quadratic-form preconditions, which are checked by the pipeline)."""
    A = parse_and_validate(doc)
    problems: List[str] = []
    b2 = A.betti[2]
    gram_raw = doc.get("bbf_gram")
    Q = None
    if not isinstance(gram_raw, list) or len(gram_raw) != b2 or not all(
            isinstance(r, list) and len(r) == b2 for r in gram_raw):
        problems.append(f"bbf_gram must be a {b2} x {b2} matrix")
    else:
        try:
            G = Matrix(gram_raw, cols=b2)
            if not G.is_rational():
                problems.append("bbf_gram must be rational")
            elif not G.is_symmetric():
                problems.append("bbf_gram must be symmetric")
            else:
                Q = QuadraticSpace(G)
        except (TypeError, ValueError) as exc:
            problems.append(f"bbf_gram: {exc}")
    eta = _vector(doc.get("eta"), b2, "eta", problems)
    beta = _vector(doc.get("beta"), b2, "beta", problems)
    rho = None
    if doc.get("rho") is not None:
        rho = _vector(doc.get("rho"), b2, "rho", problems)
    for name, v in (("eta", eta), ("beta", beta), ("rho", rho)):
        if v is not None and not all(is_rational(x) for x in v):
            problems.append(f"{name} must have rational coordinates")
    hodge = None
    if doc.get("hodge_diamond") is not None:
        rows = doc["hodge_diamond"]
        size = 2 * A.n + 1
        if not (isinstance(rows, list) and len(rows) == size and all(
                isinstance(r, list) and len(r) == size and
                all(isinstance(x, int) and not isinstance(x, bool) for x in r) for r in rows)):
            problems.append(f"hodge_diamond must be a {size} x {size} integer matrix")
        else:
            hodge = HodgeDiamond.from_rows(rows)
            problems.extend(hodge.problems(A.betti))
    flags = doc.get("flags", {}) or {}
    if not isinstance(flags, dict) or not set(flags) <= KNOWN_FLAGS:
        problems.append(f"flags must be an object with keys among {sorted(KNOWN_FLAGS)}")
        flags = {}
    if Q is not None and A.n == 1:
        P = A.pairing_matrix(2)
        if P != Q.gram:
            problems.append("bbf_gram differs from the intersection pairing on H^2 (n = 1)")
    if problems:
        raise ValidationError(problems)
    return ManifoldDocument(str(doc.get("name", "")), A, Q, eta, beta, rho, hodge, dict(flags))


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class Analysis:
    doc: ManifoldDocument
    eta: tuple
    beta: tuple
    rho: tuple
    h: tuple
    eta_shift: object
    eta_scale: object
    signatures: Dict[str, tuple]
    suite: OperatorSuite
    dec: PerverseDecomposition
    P: FiltrationTable
    W: FiltrationTable
    verdicts: List[Verdict]
    lie: Dict[str, dict]
    wedge_scalar: object
    timing: Dict[str, float]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)


def _check_preconditions(Q: QuadraticSpace, eta0, beta, b2: int):
    sig = signature(Q)
    bad = []
    if sig != (3, b2 - 3, 0):
        bad.append(f"signature of q is {sig}, expected (3, {b2 - 3}, 0)")
    if b2 < 4:
        bad.append("b2 >= 4 is required")
    if Q.norm(beta) != 0:
        bad.append("q(beta) != 0")
    if Q.pair(eta0, beta) == 0:
        bad.append("q(eta, beta) = 0")
    if bad:
        raise PreconditionError("; ".join(bad))
    return sig


def oracle_equivalence(suite: OperatorSuite, W: FiltrationTable) -> Verdict:
    bad = oracle_mismatches(suite, W)
    return Verdict("oracle_equivalence", not bad, bad[:5])


def run_pipeline(mdoc: ManifoldDocument, seed_rho: Optional[Sequence] = None,
                 swap_eta_beta: bool = False, llv: Optional[bool] = None) -> Analysis:
    """Normalize eta, choose rho and h, build the operators and run every check.

    Raises PreconditionError when a quadratic-form precondition fails.
    """
    timing: Dict[str, float] = {}
    t0 = time.perf_counter()
    A, Q = mdoc.algebra, mdoc.Q
    b2 = A.betti[2]
    sig = _check_preconditions(Q, mdoc.eta, mdoc.beta, b2)
    eta = normalize_eta(Q, mdoc.eta, mdoc.beta)
    shift = -Q.norm(mdoc.eta) / (2 * Q.pair(mdoc.eta, mdoc.beta))
    beta = mdoc.beta
    if swap_eta_beta:
        eta, beta = beta, eta

    if seed_rho is not None:
        rho = tuple(scalar(x) for x in seed_rho)
        if len(rho) != b2:
            raise PreconditionError(f"rho needs {b2} coordinates")
    elif mdoc.rho is not None:
        rho = mdoc.rho
    else:
        rho = find_positive_orthogonal(Q, [eta, beta])
    if not Q.norm(rho) > 0 or Q.pair(rho, eta) != 0 or Q.pair(rho, beta) != 0:
        raise PreconditionError("rho must satisfy q(rho) > 0 and q(eta, rho) = q(beta, rho) = 0")
    balanced = balance_eta(Q, eta, beta, rho)
    scale = Q.norm(rho) / (2 * Q.pair(eta, beta))
    eta = balanced
    try:
        h = find_positive_orthogonal(Q, [eta, beta, rho])
    except QuadraticError as exc:
        raise PreconditionError(f"no class h: {exc}") from None
    V_rho = Q.restrict([eta, beta, rho])
    signatures = {
        "H2": sig,
        "mukai_H2": signature(mukai_extend(Q)),
        "V_rho": signature(V_rho),
        "mukai_V_rho": signature(mukai_extend(V_rho)),
        "complement_eta_beta": complement_signature(Q, [eta, beta]),
        "complement_eta_beta_rho": complement_signature(Q, [eta, beta, rho]),
    }
    timing["setup"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    suite = build_operator_suite(A, Q, eta, beta, rho)
    dec = perverse_decomposition(suite)
    P = perverse_filtration(dec, A)
    W = monodromy_filtration(suite, dec, check=False)
    timing["filtrations"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    verdicts = [verify_pw(P, W, A.n), even_odd_check(W, A.n), oracle_equivalence(suite, W),
                multiplicativity_check(A, P)]
    if mdoc.hodge is not None:
        verdicts.append(perverse_hodge(dec, mdoc.hodge, A.betti))
    verdicts += [nilpotent_consistency(suite), type_iii_check(suite),
                 so5_dictionary_check(suite, dec)]
    timing["verdicts"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cert = [f"{name}: kernel {k}" for name, k in suite.sl2_kernel_dims.items() if k]
    if not Sl2Triple(suite.N, suite.H_N, suite.Lam_N).is_valid():
        cert.append("(N, H_N, Lam_N) fails the sl2 identities")
    lie = {"g_rho": {"dim": suite.g_rho.dim, "ad_grading": list(ad_grading(suite.g_rho, suite.H))}}
    expected_rho = {"dim": 10, "ad_grading": [3, 4, 3]}
    dims_ok = lie["g_rho"] == expected_rho
    dims_details = [] if dims_ok else [f"g_rho: {lie['g_rho']} expected {expected_rho}"]
    use_llv = mdoc.flags.get("llv", True) if llv is None else llv
    if use_llv:
        g, certificates = llv_algebra(A)
        for label, kdim, valid in certificates:
            if kdim or not valid:
                cert.append(f"{label}: kernel {kdim}, valid {valid}")
        lie["g"] = {"dim": g.dim, "ad_grading": list(ad_grading(g, suite.H)),
                    "generating_classes": len(certificates)}
        expected = {"dim": (b2 + 2) * (b2 + 1) // 2,
                    "ad_grading": [b2, b2 * (b2 - 1) // 2 + 1, b2]}
        got = {"dim": lie["g"]["dim"], "ad_grading": lie["g"]["ad_grading"]}
        if got != expected:
            dims_ok = False
            dims_details.append(f"g: {got} expected {expected}")
    verdicts.append(Verdict("sl2_certification", not cert, cert))
    verdicts.append(Verdict("lie_dimensions", dims_ok, dims_details))
    timing["lie"] = time.perf_counter() - t0

    return Analysis(mdoc, eta, beta, rho, h, shift, scale, signatures, suite, dec, P, W,
                    verdicts, lie, wedge_scalar(suite), timing)


# ---------------------------------------------------------------------------
# reports


def _vec(v) -> List[str]:
    return [format_scalar(x) for x in v]


def build_report(an: Analysis, input_bytes: bytes, options: dict, timing: bool = False) -> dict:
    A = an.doc.algebra
    n = A.n
    top = A.top
    gr_p = {str(d): an.P.graded_dims(d, range(0, 2 * n + 1)) for d in range(top + 1)}
    gr_w = {str(d): an.W.graded_dims(d, range(0, 4 * n + 1)) for d in range(top + 1)}
    report = {
        "schema_version": 1,
        "input": {
            "name": an.doc.name,
            "sha256": hashlib.sha256(input_bytes).hexdigest(),
            "n": n,
            "betti": list(A.betti),
            "eta": _vec(an.doc.eta),
            "beta": _vec(an.doc.beta),
            "rho": _vec(an.doc.rho) if an.doc.rho is not None else None,
            "options": options,
        },
        "classes": {
            "eta": _vec(an.eta),
            "beta": _vec(an.beta),
            "rho": _vec(an.rho),
            "h": _vec(an.h),
            "eta_shift_along_beta": format_scalar(an.eta_shift),
            "eta_balance_scale": format_scalar(an.eta_scale),
        },
        "quadratic": {
            "signatures": {k: list(v) for k, v in sorted(an.signatures.items())},
            "q_eta_beta": format_scalar(an.suite.Q.pair(an.eta, an.beta)),
            "q_rho": format_scalar(an.suite.Q.norm(an.rho)),
            "q_h": format_scalar(an.suite.Q.norm(an.h)),
        },
        "perverse_blocks": [[i, j, S.dim] for (i, j), S in sorted(an.dec.blocks.items())],
        "gr_perverse": gr_p,
        "gr_weight": gr_w,
        "nilpotent": {
            "wedge_scalar": format_scalar(an.wedge_scalar) if an.wedge_scalar is not None else None,
        },
        "lie": an.lie,
        "verdicts": {v.name: v.ok for v in an.verdicts},
        "verdict_details": {v.name: v.details for v in an.verdicts if v.details},
        "all_verdicts_true": an.ok,
    }
    if "perverse_hodge" not in report["verdicts"]:
        report["verdicts"]["perverse_hodge"] = None
    if timing:
        report["timing_seconds"] = {k: round(v, 3) for k, v in sorted(an.timing.items())}
    return report


def emit_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
                + "\n").encode("ascii")
    if fmt == "text":
        return render_text(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def _grade_rows(table: Dict[str, List[int]]) -> List[str]:
    width = max(len(d) for d in table)
    return [f"H^{d.ljust(width)} : " + " ".join(str(x) for x in row)
            for d, row in sorted(table.items(), key=lambda kv: int(kv[0]))]


def render_text(report: dict) -> str:
    inp = report["input"]
    n = inp["n"]
    lines = [f"P = W verification report: {inp['name']}",
             f"input sha256 {inp['sha256']}",
             f"n = {n}, betti = {inp['betti']}",
             ""]
    cl = report["classes"]
    for key in ("eta", "beta", "rho", "h"):
        lines.append(f"{key:<5} = [{', '.join(cl[key])}]")
    lines.append(f"eta shifted by {cl['eta_shift_along_beta']} * beta, "
                 f"then scaled by {cl['eta_balance_scale']}")
    lines.append("")
    lines.append("signatures")
    for k, v in report["quadratic"]["signatures"].items():
        lines.append(f"  {k:<24} {tuple(v)}")
    lines.append("")
    lines.append("perverse blocks dim P^{i,j}")
    size = 2 * n + 1
    grid = {(i, j): d for i, j, d in report["perverse_blocks"]}
    lines.append("  j\\i " + " ".join(f"{i:>3}" for i in range(size)))
    for j in reversed(range(size)):
        lines.append(f"  {j:>3} " + " ".join(f"{grid.get((i, j), 0):>3}" for i in range(size)))
    lines.append("")
    lines.append(f"Gr^P_k dims, k = 0..{2 * n}")
    lines.extend(_grade_rows(report["gr_perverse"]))
    lines.append("")
    lines.append(f"Gr^W_2k dims, k = 0..{2 * n}")
    even = {d: row[0::2] for d, row in report["gr_weight"].items()}
    lines.extend(_grade_rows(even))
    odd_zero = all(not any(row[1::2]) for row in report["gr_weight"].values())
    lines.append("Gr^W odd: " + ("all zero" if odd_zero else "NONZERO"))
    lines.append("")
    lines.append("Lie algebras")
    for name, info in sorted(report["lie"].items()):
        lines.append(f"  {name:<6} dim {info['dim']:>4}   ad(H) grading {tuple(info['ad_grading'])}")
    ws = report["nilpotent"]["wedge_scalar"]
    if ws is not None:
        lines.append(f"  N on H^2 = {ws} * (beta ∧ rho)")
    lines.append("")
    lines.append("verdicts")
    for name, ok in sorted(report["verdicts"].items()):
        mark = "skipped" if ok is None else ("PASS" if ok else "FAIL")
        lines.append(f"  {name:<24} {mark}")
        for det in report.get("verdict_details", {}).get(name, []):
            if not ok and ok is not None:
                lines.append(f"      {det}")
    lines.append("")
    lines.append("ALL VERDICTS TRUE" if report["all_verdicts_true"] else "SOME VERDICTS FAILED")
    if "timing_seconds" in report:
        lines.append("timing " + ", ".join(f"{k} {v}s" for k, v in report["timing_seconds"].items()))
    return "\n".join(lines) + "\n"
