"""Fixed-point page scoring over link structure or the traffic graph.

Both rankers iterate the same additive-floor recursion

    score(A) = alpha + (1 - alpha) * sum over parents B of score(B) * weight(B, A)

where weight is the uniform 1/out_degree(B) for the structural ranker and
the per-edge traffic probability for the log-weighted ranker.  This is the
non-normalized variant: the fixed point of a two-page cycle is 1.0 per
page, not a probability distribution, and every score is at least alpha.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import SiterankError, ArtifactError
from .graph import LinkInput, NoData, ProbGraph, as_adjacency, validate
from ._util import atomic_write_text, content_checksum

RANK_FORMAT = "siterank-rank/1"


@dataclass(frozen=True)
class RankParams:
    alpha: float = 0.15
    epsilon: float = 1e-5
    max_iterations: int = 1000

    def check(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class RankVector:
    """Converged (or partial) page scores plus iteration diagnostics."""

    scores: dict[str, float]
    iterations_used: int
    final_residual: float
    alpha: float
    residuals: tuple[float, ...] = field(default=(), repr=False)

    def score(self, page: str) -> float:
        # A page the iteration never saw has no parents, so its fixed
        # point is exactly the additive floor.
        return self.scores.get(page, self.alpha)


class NotConverged(SiterankError):
    """Iteration budget exhausted; carries the partial result."""

    def __init__(self, partial: RankVector):
        super().__init__(
            f"no convergence after {partial.iterations_used} iterations "
            f"(residual {partial.final_residual:.3g})")
        self.partial = partial


class InvalidGraph(SiterankError):
    """The traffic graph failed validation."""


def pagerank(links: LinkInput, params: RankParams = RankParams()) -> RankVector:
    """Rank pages by structural links alone, weighting each out-link equally.

    Iterates from the uniform all-ones start until the max absolute
    per-page change drops to epsilon.  Kept deliberately independent of
    the traffic-graph ranker so the two can cross-check each other.
    """
    params.check()
    adjacency = as_adjacency(links)
    if not adjacency:
        raise NoData("empty link list")
    nodes = sorted(adjacency)
    out_degree = {node: len(adjacency[node]) for node in nodes}
    parents: dict[str, list[str]] = {node: [] for node in nodes}
    for src, targets in adjacency.items():
        for dst in targets:
            parents[dst].append(src)

    alpha = params.alpha
    scores = {node: 1.0 for node in nodes}
    residuals: list[float] = []
    for iteration in range(1, params.max_iterations + 1):
        new_scores = {}
        for node in nodes:
            incoming = sum(scores[b] / out_degree[b] for b in parents[node])
            new_scores[node] = alpha + (1.0 - alpha) * incoming
        residual = max(abs(new_scores[n] - scores[n]) for n in nodes)
        residuals.append(residual)
        scores = new_scores
        if residual <= params.epsilon:
            return RankVector(scores, iteration, residual, alpha, tuple(residuals))
    raise NotConverged(RankVector(scores, params.max_iterations,
                                  residuals[-1], alpha, tuple(residuals)))


def lpagerank(g: ProbGraph, params: RankParams = RankParams()) -> RankVector:
    """Rank pages over the traffic graph's per-edge follow probabilities.

    The incoming-edge matrix is applied sparsely per sweep; iteration stops
    when the max absolute per-page difference between consecutive sweeps
    is at most epsilon.
    """
    params.check()
    violations = validate(g)
    if violations:
        raise InvalidGraph("; ".join(str(v) for v in violations[:5]))
    n = len(g.pages)
    if n == 0:
        return RankVector({}, 0, 0.0, params.alpha)
    index = {page: i for i, page in enumerate(g.pages)}

    rows, cols, data = [], [], []
    for src, row in g.edges.items():
        for dst, prob in row.items():
            rows.append(index[dst])   # incoming edge: dst accumulates from src
            cols.append(index[src])
            data.append(prob)
    incoming = sparse.csr_matrix(
        (data, (rows, cols)), shape=(n, n), dtype=np.float64)

    alpha = params.alpha
    x = np.ones(n, dtype=np.float64)
    residuals: list[float] = []
    for iteration in range(1, params.max_iterations + 1):
        x_next = alpha + (1.0 - alpha) * (incoming @ x)
        residual = float(np.max(np.abs(x_next - x)))
        residuals.append(residual)
        x = x_next
        if residual <= params.epsilon:
            scores = {page: float(x[i]) for page, i in index.items()}
            return RankVector(scores, iteration, residual, alpha, tuple(residuals))
    scores = {page: float(x[i]) for page, i in index.items()}
    raise NotConverged(RankVector(scores, params.max_iterations,
                                  residuals[-1], alpha, tuple(residuals)))


def _scores_checksum(scores: dict[str, float]) -> str:
    return content_checksum(json.dumps(scores, sort_keys=True,
                                       separators=(",", ":")))


def write_rank_vector(rv: RankVector, path: Path | str, *,
                      kind: str, params: RankParams,
                      source_checksum: str | None = None) -> None:
    """Persist scores as JSON with the producing config in the metadata."""
    payload = {
        "format": RANK_FORMAT,
        "kind": kind,
        "alpha": params.alpha,
        "epsilon": params.epsilon,
        "iterations_used": rv.iterations_used,
        "final_residual": rv.final_residual,
        "source_checksum": source_checksum,
        "checksum": _scores_checksum(rv.scores),
        "scores": rv.scores,
    }
    atomic_write_text(path, json.dumps(payload, sort_keys=True,
                                       separators=(",", ":")) + "\n")


def read_rank_vector(path: Path | str) -> tuple[RankVector, dict]:
    """Load a rank artifact; returns the vector and its metadata block."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != RANK_FORMAT:
        raise ArtifactError(f"{path}: expected {RANK_FORMAT}, "
                            f"got {payload.get('format')!r}")
    scores = {k: float(v) for k, v in payload["scores"].items()}
    if payload.get("checksum") != _scores_checksum(scores):
        raise ArtifactError(f"{path}: checksum mismatch, artifact corrupt")
    meta = {k: payload[k] for k in
            ("kind", "alpha", "epsilon", "iterations_used",
             "final_residual", "source_checksum")}
    rv = RankVector(scores=scores,
                    iterations_used=int(payload["iterations_used"]),
                    final_residual=float(payload["final_residual"]),
                    alpha=float(payload["alpha"]))
    return rv, meta
