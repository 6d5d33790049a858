"""Convergence verdicts for sequences of block upper-triangular matrices and
RCP certification for finite sets.

The right product A_1 A_2 ... converges exactly when the limit candidates
L_n = B_n (I - C_n)^{-1} converge, provided the C-blocks contract uniformly
in one submultiplicative norm.  Periodic and eventually-constant sequences
admit exact verdicts; streams get numerical verdicts with an Inconclusive
escape hatch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .blockform import BlockUpperTriangular
from .errors import AnalysisRefusedError, CertificateViolationError, ShapeError
from .matrixcore import (
    BUILTIN_NORMS,
    ContractionCertificate,
    FROBENIUS,
    lyapunov_norm,
    norm_value,
    solve_right,
    spectral_certificate,
)
from .product import ProductState, TraceRow, initial_state, step, trace_row

__all__ = [
    "Periodic",
    "Finite",
    "Stream",
    "AnalyzerConfig",
    "Verdict",
    "Witness",
    "AnalysisReport",
    "RcpVerdict",
    "uniform_certificate",
    "analyze",
    "corollary1_analyze",
    "certify_rcp",
    "cycle_accumulation_points",
]


def _check_conforming(members: Sequence[BlockUpperTriangular], what: str):
    if not members:
        raise ShapeError(f"{what} must be nonempty")
    s, m = members[0].s, members[0].csize
    for a in members[1:]:
        if a.s != s or a.csize != m:
            raise ShapeError(f"all members of a {what} must share the same (s, d)")


@dataclass(frozen=True)
class Periodic:
    """The infinite sequence cycling through a fixed finite list."""

    cycle: tuple[BlockUpperTriangular, ...]

    def __post_init__(self):
        object.__setattr__(self, "cycle", tuple(self.cycle))
        _check_conforming(self.cycle, "cycle")


@dataclass(frozen=True)
class Finite:
    """An eventually-constant sequence: the listed members, then the last
    member repeated forever."""

    members: tuple[BlockUpperTriangular, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        _check_conforming(self.members, "finite presentation")


@dataclass
class Stream:
    """An externally fed sequence; consumed up to the analysis horizon."""

    factors: Iterable[BlockUpperTriangular]


@dataclass(frozen=True)
class AnalyzerConfig:
    eps: float = 1e-10
    horizon: int = 10000
    window: int = 20
    k_max: int = 64

    def __post_init__(self):
        if min(self.eps, self.horizon, self.window, self.k_max) <= 0:
            raise ValueError("all configuration values must be positive")
        if self.window > self.horizon:
            raise ValueError("window must not exceed horizon")


class Verdict(enum.Enum):
    CERTIFIED_CONVERGED = "CertifiedConverged"
    CERTIFIED_DIVERGED = "CertifiedDiverged"
    CONVERGED_NUMERICALLY = "ConvergedNumerically"
    DIVERGED_NUMERICALLY = "DivergedNumerically"
    INCONCLUSIVE = "Inconclusive"


_CONVERGED = (Verdict.CERTIFIED_CONVERGED, Verdict.CONVERGED_NUMERICALLY)


@dataclass(frozen=True)
class Witness:
    """Divergence evidence: accumulation points or an unboundedness note."""

    description: str
    points: tuple[np.ndarray, ...] = ()


@dataclass(frozen=True)
class AnalysisReport:
    verdict: Verdict
    limit: np.ndarray | None = None
    certificate: ContractionCertificate | None = None
    witness: Witness | None = None
    trace: tuple[TraceRow, ...] = ()
    deviation_bound: float | None = None

    def __post_init__(self):
        if (self.limit is not None) != (self.verdict in _CONVERGED):
            raise ValueError("limit present iff the verdict is a convergence")


def _limit_dense(s: int, csize: int, l: np.ndarray) -> np.ndarray:
    out = np.zeros((s + csize, s + csize), dtype=np.complex128)
    out[:s, :s] = np.eye(s)
    out[:s, s:] = l
    return out


def _limit_candidate(a: BlockUpperTriangular) -> np.ndarray:
    eye = np.eye(a.csize, dtype=np.complex128)
    return solve_right(a.b, eye - a.c)


def uniform_certificate(
    cs: Sequence[np.ndarray], k_max: int = 64
) -> ContractionCertificate | None:
    """A single norm contracting every matrix in *cs*, or None.

    Tries the built-in norms first (rate = the largest member norm), then a
    common Lyapunov scaling P - sum_i C_i* P C_i = I, whose solution, when
    positive definite, contracts every member simultaneously.
    """
    cs = list(cs)
    if not cs:
        raise ValueError("need at least one matrix")
    for norm in BUILTIN_NORMS:
        r = max(norm_value(c, norm) for c in cs)
        if r < 1.0:
            return ContractionCertificate(norm, r, "declared")
    n = cs[0].shape[0]
    op = np.eye(n * n, dtype=np.complex128)
    for c in cs:
        op -= np.kron(c.T, c.conj().T)
    try:
        vec_p = np.linalg.solve(op, np.eye(n, dtype=np.complex128).flatten("F"))
    except np.linalg.LinAlgError:
        return None
    p = vec_p.reshape((n, n), order="F")
    try:
        norm = lyapunov_norm(p)
    except ShapeError:
        return None
    r = max(norm_value(c, norm) for c in cs)
    if r >= 1.0:
        return None
    return ContractionCertificate(norm, r, "lyapunov")


def cycle_accumulation_points(
    cycle: Sequence[BlockUpperTriangular], dedupe_tol: float = 1e-9
) -> list[np.ndarray]:
    """Exact limits of the phase subsequences X_{kp+j} of a periodic product.

    Over one period the top-right block evolves by the affine map
    x -> x (C_{j+1} ... C_{j+p}) + S_j; each phase limit is the map's fixed
    point, obtained by a linear solve.  Distinct points (beyond *dedupe_tol*
    in Frobenius distance) are returned in first-seen order.
    """
    p = len(cycle)
    points: list[np.ndarray] = []
    for j in range(p):
        s_acc = np.zeros_like(cycle[0].b)
        gamma = np.eye(cycle[0].csize, dtype=np.complex128)
        for t in range(p):
            a = cycle[(j + t) % p]
            s_acc = a.b + s_acc @ a.c
            gamma = gamma @ a.c
        eye = np.eye(cycle[0].csize, dtype=np.complex128)
        fixed = solve_right(s_acc, eye - gamma)
        if all(np.linalg.norm(fixed - q) > dedupe_tol for q in points):
            points.append(fixed)
    return points


def _certificate_for_members(
    members: Sequence[BlockUpperTriangular],
    cfg: AnalyzerConfig,
    cert: ContractionCertificate | None,
) -> ContractionCertificate:
    if cert is not None:
        if cert.kind in ("declared", "lyapunov"):
            for i, a in enumerate(members, start=1):
                val = norm_value(a.c, cert.norm)
                if val > cert.rate * (1 + 1e-12) + 1e-15:
                    raise CertificateViolationError(i, val, cert.rate)
        return cert
    found = uniform_certificate([a.c for a in members], cfg.k_max)
    if found is None:
        raise AnalysisRefusedError(
            "no uniform contraction certificate found for the presentation"
        )
    return found


def _analyze_periodic(
    seq: Periodic, cfg: AnalyzerConfig, cert: ContractionCertificate | None
) -> AnalysisReport:
    cert = _certificate_for_members(seq.cycle, cfg, cert)
    ls = [_limit_candidate(a) for a in seq.cycle]
    spread = max(float(np.linalg.norm(l - ls[0])) for l in ls)
    s, m = seq.cycle[0].s, seq.cycle[0].csize
    if spread <= cfg.eps:
        return AnalysisReport(
            verdict=Verdict.CERTIFIED_CONVERGED,
            limit=_limit_dense(s, m, ls[0]),
            certificate=cert,
        )
    points = cycle_accumulation_points(seq.cycle, dedupe_tol=100 * cfg.eps)
    return AnalysisReport(
        verdict=Verdict.CERTIFIED_DIVERGED,
        certificate=cert,
        witness=Witness(
            "distinct limit candidates across the cycle; the phase "
            "subsequences of the top-right block accumulate at the listed points",
            tuple(points),
        ),
    )


def _analyze_finite(
    seq: Finite, cfg: AnalyzerConfig, cert: ContractionCertificate | None
) -> AnalysisReport:
    last = seq.members[-1]
    if cert is not None:
        cert = _certificate_for_members(seq.members, cfg, cert)
    else:
        cert = spectral_certificate(last.c, cfg.k_max)
        if cert is None:
            raise AnalysisRefusedError(
                "could not certify contraction of the eventual constant factor"
            )
    l = _limit_candidate(last)
    return AnalysisReport(
        verdict=Verdict.CERTIFIED_CONVERGED,
        limit=_limit_dense(last.s, last.csize, l),
        certificate=cert,
    )


def _analyze_stream(
    seq: Stream, cfg: AnalyzerConfig, cert: ContractionCertificate | None
) -> AnalysisReport:
    if cert is None or cert.kind == "gelfand":
        raise AnalysisRefusedError(
            "stream analysis needs a declared (or Lyapunov) contraction "
            "certificate checked at every step"
        )
    state: ProductState | None = None
    trace: list[TraceRow] = []
    small_streak = 0
    osc_streak = 0
    l_hist: list[np.ndarray] = []
    for a in seq.factors:
        if state is None:
            state = initial_state(a.s, a.csize)
        state = step(state, a, cert)
        trace.append(trace_row(state, cert))
        if float(np.linalg.norm(state.l)) > 1.0 / cfg.eps:
            return AnalysisReport(
                verdict=Verdict.DIVERGED_NUMERICALLY,
                certificate=cert,
                witness=Witness("limit candidate left the ball of radius 1/eps"),
                trace=tuple(trace),
            )
        if state.y_prev is not None:
            small_streak = (
                small_streak + 1
                if norm_value(state.y_prev, cert.norm) < cfg.eps
                else 0
            )
            if small_streak >= cfg.window:
                return AnalysisReport(
                    verdict=Verdict.CONVERGED_NUMERICALLY,
                    limit=_limit_dense(a.s, a.csize, state.l),
                    certificate=cert,
                    trace=tuple(trace),
                    deviation_bound=state.bound,
                )
        l_hist.append(state.l)
        if len(l_hist) >= 3:
            near_two_back = np.linalg.norm(l_hist[-1] - l_hist[-3]) < cfg.eps
            far_one_back = np.linalg.norm(l_hist[-1] - l_hist[-2]) > 100 * cfg.eps
            osc_streak = osc_streak + 1 if near_two_back and far_one_back else 0
            if osc_streak >= cfg.window:
                return AnalysisReport(
                    verdict=Verdict.DIVERGED_NUMERICALLY,
                    certificate=cert,
                    witness=Witness(
                        "two persistent accumulation points of the limit candidate",
                        (l_hist[-2].copy(), l_hist[-1].copy()),
                    ),
                    trace=tuple(trace),
                )
        if state.n >= cfg.horizon:
            break
    return AnalysisReport(
        verdict=Verdict.INCONCLUSIVE, certificate=cert, trace=tuple(trace)
    )


def analyze(
    seq: Periodic | Finite | Stream,
    cfg: AnalyzerConfig | None = None,
    cert: ContractionCertificate | None = None,
) -> AnalysisReport:
    """Decide convergence of the right product presented by *seq*.

    Periodic and Finite presentations get exact (Certified) verdicts driven
    by equality of the limit candidates; Streams get numerical verdicts from
    running the product engine up to the horizon.  Raises
    :class:`AnalysisRefusedError` when no contraction certificate can be
    obtained, and :class:`CertificateViolationError` when a declared one is
    contradicted by the data.
    """
    cfg = cfg or AnalyzerConfig()
    if isinstance(seq, Periodic):
        return _analyze_periodic(seq, cfg, cert)
    if isinstance(seq, Finite):
        return _analyze_finite(seq, cfg, cert)
    if isinstance(seq, Stream):
        return _analyze_stream(seq, cfg, cert)
    raise TypeError(f"unsupported presentation {type(seq).__name__}")


def corollary1_analyze(
    seq: Periodic | Finite | Stream,
    c_limit,
    cfg: AnalyzerConfig | None = None,
) -> AnalysisReport:
    """Convergence test when the C-blocks tend to a fixed matrix of spectral
    radius below one: the product converges iff the B-blocks do, and the
    limit uses B (I - C)^{-1} with the limit C."""
    cfg = cfg or AnalyzerConfig()
    c_limit = np.asarray(c_limit, dtype=np.complex128)
    cert = spectral_certificate(c_limit, cfg.k_max)
    if cert is None:
        raise AnalysisRefusedError(
            "could not certify that the limit C-block has spectral radius < 1"
        )
    eye = np.eye(c_limit.shape[0], dtype=np.complex128)

    def candidate(b: np.ndarray) -> np.ndarray:
        return solve_right(b, eye - c_limit)

    if isinstance(seq, (Periodic, Finite)):
        members = seq.cycle if isinstance(seq, Periodic) else seq.members
        s, m = members[0].s, members[0].csize
        bs = [a.b for a in members]
        if isinstance(seq, Finite) or max(
            float(np.linalg.norm(b - bs[0])) for b in bs
        ) <= cfg.eps:
            return AnalysisReport(
                verdict=Verdict.CERTIFIED_CONVERGED,
                limit=_limit_dense(s, m, candidate(bs[-1])),
                certificate=cert,
            )
        points: list[np.ndarray] = []
        for b in bs:
            pt = candidate(b)
            if all(np.linalg.norm(pt - q) > 100 * cfg.eps for q in points):
                points.append(pt)
        return AnalysisReport(
            verdict=Verdict.CERTIFIED_DIVERGED,
            certificate=cert,
            witness=Witness(
                "top-right blocks do not settle; accumulation points listed",
                tuple(points),
            ),
        )

    # stream: Cauchy test on the B-blocks alone
    prev: list[np.ndarray] = []
    small_streak = 0
    osc_streak = 0
    n = 0
    shape: tuple[int, int] | None = None
    for a in seq.factors:
        n += 1
        shape = (a.s, a.csize)
        b = a.b
        if float(np.linalg.norm(b)) > 1.0 / cfg.eps:
            return AnalysisReport(
                verdict=Verdict.DIVERGED_NUMERICALLY,
                certificate=cert,
                witness=Witness("B-blocks left the ball of radius 1/eps"),
            )
        if prev:
            small_streak = (
                small_streak + 1
                if np.linalg.norm(b - prev[-1]) < cfg.eps
                else 0
            )
            if small_streak >= cfg.window:
                return AnalysisReport(
                    verdict=Verdict.CONVERGED_NUMERICALLY,
                    limit=_limit_dense(shape[0], shape[1], candidate(b)),
                    certificate=cert,
                )
        prev.append(b)
        if len(prev) >= 3:
            near = np.linalg.norm(prev[-1] - prev[-3]) < cfg.eps
            far = np.linalg.norm(prev[-1] - prev[-2]) > 100 * cfg.eps
            osc_streak = osc_streak + 1 if near and far else 0
            if osc_streak >= cfg.window:
                return AnalysisReport(
                    verdict=Verdict.DIVERGED_NUMERICALLY,
                    certificate=cert,
                    witness=Witness(
                        "two persistent accumulation points of the B-blocks",
                        (candidate(prev[-2]), candidate(prev[-1])),
                    ),
                )
        if n >= cfg.horizon:
            break
    return AnalysisReport(verdict=Verdict.INCONCLUSIVE, certificate=cert)


@dataclass(frozen=True)
class RcpVerdict:
    """Outcome of the finite-set RCP test."""

    is_rcp: bool
    certificate: ContractionCertificate
    l_values: tuple[np.ndarray, ...]
    limit: np.ndarray | None = None
    violating_pair: tuple[int, int] | None = None
    witness: Witness | None = None


def certify_rcp(
    sigma: Sequence[BlockUpperTriangular],
    atol: float = 1e-9,
    cfg: AnalyzerConfig | None = None,
) -> RcpVerdict:
    """Certify whether every infinite right product from *sigma* converges.

    The set has the property exactly when all members share the same limit
    candidate B (I - C)^{-1}.  On failure, the worst pair is reported with
    the accumulation points of its alternating product as a divergence
    witness.  Requires one common contracting norm over the whole set.
    """
    cfg = cfg or AnalyzerConfig()
    sigma = list(sigma)
    _check_conforming(sigma, "set")
    cert = uniform_certificate([a.c for a in sigma], cfg.k_max)
    if cert is None:
        raise AnalysisRefusedError(
            "no common contracting norm found; the set is not certifiably "
            "uniformly contracting"
        )
    ls = [_limit_candidate(a) for a in sigma]
    worst = 0.0
    pair = (0, 0)
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            gap = float(np.linalg.norm(ls[i] - ls[j]))
            if gap > worst + 1e-15:
                worst, pair = gap, (i, j)
    s, m = sigma[0].s, sigma[0].csize
    if worst <= atol:
        return RcpVerdict(
            is_rcp=True,
            certificate=cert,
            l_values=tuple(ls),
            limit=_limit_dense(s, m, ls[0]),
        )
    i, j = pair
    points = cycle_accumulation_points([sigma[i], sigma[j]], dedupe_tol=atol)
    return RcpVerdict(
        is_rcp=False,
        certificate=cert,
        l_values=tuple(ls),
        violating_pair=pair,
        witness=Witness(
            f"members {i} and {j} have different limit candidates; the "
            "alternating product accumulates at the listed points",
            tuple(points),
        ),
    )
