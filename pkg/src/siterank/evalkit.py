"""Rank-position tables and recall curves over pluggable engine configurations.

For each benchmark query the harness records where the first relevant page
lands under every configuration (a weights + static-ranker pair), then
summarizes with recall@k.  Pages that drop out of the result list entirely
are reported as not found rather than silently skipped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import SiterankError
from .engine import EngineState
from .fusion import FusionWeights, QueryResult, search
from ._util import atomic_write_text

RECALL_KS = (1, 5, 10, 20)
NOT_FOUND = "NF"
DEFAULT_DEPTH = 100  # how deep each evaluation search looks


class MissingEngineState(SiterankError):
    """A configuration needs an artifact the engine state does not have."""


@dataclass(frozen=True)
class QueryJudgment:
    query: str
    targets: tuple[str, ...]

    def __post_init__(self):
        if not self.targets:
            raise ValueError(f"judgment for {self.query!r} has no targets")


@dataclass(frozen=True)
class EvalConfig:
    name: str
    weights: FusionWeights
    static: str = "lpr"  # which rank vector supplies the static signal


@dataclass(frozen=True)
class EvalReport:
    config_names: tuple[str, ...]
    queries: tuple[str, ...]
    # keyed by judgment index so repeated query strings stay distinct rows
    positions: dict[tuple[int, str], int | None]  # (query idx, config) -> position
    recall: dict[tuple[str, int], float]          # (config, k) -> recall@k
    mean_position: dict[str, float | None]        # over found queries only
    found: dict[str, int]

    def position(self, query: str, config: str) -> int | None:
        return self.positions[(self.queries.index(query), config)]


def rank_position(results: Sequence[QueryResult],
                  targets: Iterable[str]) -> int | None:
    """1-based rank of the first relevant result, or None when absent."""
    wanted = set(targets)
    for result in results:
        if result.page in wanted:
            return result.position
    return None


def read_judgments(path: Path | str) -> list[QueryJudgment]:
    """Judgments TSV: query <TAB> target[,target...]."""
    judgments = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        query, targets = line.split("\t")
        judgments.append(QueryJudgment(query, tuple(targets.split(","))))
    return judgments


def read_configs(path: Path | str) -> list[EvalConfig]:
    """Configs JSON: list of {name, weights: [text, social, static], static}."""
    configs = []
    for entry in json.loads(Path(path).read_text(encoding="utf-8")):
        w = entry["weights"]
        configs.append(EvalConfig(name=entry["name"],
                                  weights=FusionWeights(w[0], w[1], w[2]),
                                  static=entry.get("static", "lpr")))
    return configs


def compare_configs(judgments: Sequence[QueryJudgment],
                    configs: Sequence[EvalConfig],
                    state: EngineState,
                    depth: int = DEFAULT_DEPTH) -> EvalReport:
    """Run every query under every configuration and tabulate positions."""
    for config in configs:
        vector = state.lpr if config.static == "lpr" else state.pr
        if vector is None:
            raise MissingEngineState(
                f"config {config.name!r} needs the {config.static} rank vector")
    if state.index is None:
        raise MissingEngineState("no text index loaded")

    positions: dict[tuple[int, str], int | None] = {}
    for q_idx, judgment in enumerate(judgments):
        for config in configs:
            results = search(state, judgment.query, k=depth,
                             weights=config.weights, static=config.static)
            positions[(q_idx, config.name)] = rank_position(
                results, judgment.targets)

    recall: dict[tuple[str, int], float] = {}
    mean_position: dict[str, float | None] = {}
    found: dict[str, int] = {}
    n_queries = len(judgments)
    for config in configs:
        hits = [positions[(q_idx, config.name)]
                for q_idx in range(len(judgments))]
        located = [p for p in hits if p is not None]
        found[config.name] = len(located)
        mean_position[config.name] = (sum(located) / len(located)
                                      if located else None)
        for k in RECALL_KS:
            recall[(config.name, k)] = (
                sum(1 for p in located if p <= k) / n_queries
                if n_queries else 0.0)

    return EvalReport(
        config_names=tuple(c.name for c in configs),
        queries=tuple(j.query for j in judgments),
        positions=positions,
        recall=recall,
        mean_position=mean_position,
        found=found,
    )


def format_report_tsv(report: EvalReport) -> str:
    """Render the per-query position table with recall and average rows."""
    lines = ["query\t" + "\t".join(report.config_names)]
    for q_idx, query in enumerate(report.queries):
        cells = []
        for name in report.config_names:
            position = report.positions[(q_idx, name)]
            cells.append(NOT_FOUND if position is None else str(position))
        lines.append(query + "\t" + "\t".join(cells))
    for k in RECALL_KS:
        cells = [f"{report.recall[(name, k)]:.4f}" for name in report.config_names]
        lines.append(f"recall@{k}\t" + "\t".join(cells))
    mean_cells = []
    for name in report.config_names:
        mean = report.mean_position[name]
        mean_cells.append(NOT_FOUND if mean is None else f"{mean:.2f}")
    lines.append("mean_position\t" + "\t".join(mean_cells))
    lines.append("found\t" + "\t".join(str(report.found[name])
                                       for name in report.config_names))
    return "\n".join(lines) + "\n"


def format_recall_csv(report: EvalReport) -> str:
    """Plot-ready long-format recall curve: config,k,recall."""
    lines = ["config,k,recall"]
    for name in report.config_names:
        for k in RECALL_KS:
            lines.append(f"{name},{k},{report.recall[(name, k)]:.4f}")
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, tsv_path: Path | str,
                 csv_path: Path | str | None = None) -> None:
    atomic_write_text(tsv_path, format_report_tsv(report))
    if csv_path is not None:
        atomic_write_text(csv_path, format_recall_csv(report))
