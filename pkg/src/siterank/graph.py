"""Probabilistic page graph: per-edge follow probabilities from traffic and links.

The graph holds one row of outgoing probabilities per page, constrained so
each row sums to at most 1.  Rows come from observed click transitions,
optionally smoothed toward a uniform distribution over the page's
structural out-links.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import SiterankError, ArtifactError
from .logparse import TransitionCounts
from ._util import atomic_write_text, content_checksum

GRAPH_FORMAT = "siterank-graph/1"
ROW_SUM_TOLERANCE = 1e-9


class NoData(SiterankError):
    """Neither transition counts nor structural links were provided."""


class BadSmoothing(SiterankError):
    """Smoothing weight outside [0, 1]."""


@dataclass(frozen=True)
class Violation:
    kind: str  # row_sum_exceeded | negative_probability | probability_above_one | parents_mismatch
    page: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}({self.page}: {self.detail})"


@dataclass(frozen=True)
class ProbGraph:
    """Directed page graph with edge probabilities and its transpose."""

    pages: tuple[str, ...]
    edges: dict[str, dict[str, float]]      # src -> {dst: probability}
    out_degree: dict[str, int]              # distinct structural out-links per page
    parents: dict[str, dict[str, float]]    # dst -> {src: probability}

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.edges.values())

    @property
    def fingerprint(self) -> str:
        return content_checksum(_serialize_body(self))


LinkInput = Mapping[str, Iterable[str]] | Iterable[tuple[str, str]]


def as_adjacency(links: LinkInput) -> dict[str, list[str]]:
    """Normalize link input (mapping or edge pairs) to a sorted adjacency map.

    Every endpoint appears as a key, so isolated pages survive.
    """
    adjacency: dict[str, set[str]] = defaultdict(set)
    if isinstance(links, Mapping):
        items = ((src, dst) for src, targets in links.items()
                 for dst in list(targets) or [None])
    else:
        items = ((src, dst) for src, dst in links)
    for src, dst in items:
        adjacency.setdefault(src, set())
        if dst is not None:
            adjacency[src].add(dst)
            adjacency.setdefault(dst, set())
    return {src: sorted(targets) for src, targets in adjacency.items()}


def _transpose(edges: dict[str, dict[str, float]],
               pages: Iterable[str]) -> dict[str, dict[str, float]]:
    parents: dict[str, dict[str, float]] = {page: {} for page in pages}
    for src, row in edges.items():
        for dst, prob in row.items():
            parents[dst][src] = prob
    return parents


def build_prob_graph(counts: TransitionCounts | None,
                     links: LinkInput | None = None,
                     smoothing: float = 0.1) -> ProbGraph:
    """Build the traffic graph from transition counts and structural links.

    For a page with observed outgoing traffic, each edge gets
    (1 - smoothing) * its traffic share, plus smoothing / N spread over the
    page's N structural links.  Pages with structural links but no traffic
    fall back to the uniform 1/N row.  Log-only edges (absent from the
    structural list) are kept: logs are ground truth for traffic.  Edges
    that come out at exactly zero probability are dropped.
    """
    if not 0.0 <= smoothing <= 1.0:
        raise BadSmoothing(f"smoothing must be in [0, 1], got {smoothing}")
    adjacency = as_adjacency(links) if links is not None else {}
    has_counts = counts is not None and len(counts.counts) > 0
    if not has_counts and not adjacency:
        raise NoData("need transition counts or structural links")

    outgoing: dict[str, dict[str, int]] = defaultdict(dict)
    pages: set[str] = set(adjacency)
    if counts is not None:
        for (src, dst), count in counts.counts.items():
            outgoing[src][dst] = outgoing[src].get(dst, 0) + count
            pages.add(src)
            pages.add(dst)
        pages.update(counts.page_hits)

    edges: dict[str, dict[str, float]] = {}
    out_degree: dict[str, int] = {}
    for page in sorted(pages):
        structural = adjacency.get(page, [])
        n = len(structural)
        out_degree[page] = n
        traffic = outgoing.get(page, {})
        total = sum(traffic.values())
        row: dict[str, float] = {}
        if total > 0:
            for dst, count in traffic.items():
                row[dst] = (1.0 - smoothing) * count / total
            if n:
                for dst in structural:
                    row[dst] = row.get(dst, 0.0) + smoothing / n
        elif n:
            for dst in structural:
                row[dst] = 1.0 / n
        edges[page] = {dst: p for dst, p in row.items() if p > 0.0}

    ordered = tuple(sorted(pages))
    return ProbGraph(pages=ordered, edges=edges, out_degree=out_degree,
                     parents=_transpose(edges, ordered))


def uniform_prob_graph(links: LinkInput) -> ProbGraph:
    """Graph with a uniform probability row over each page's structural links."""
    adjacency = as_adjacency(links)
    if not adjacency:
        raise NoData("empty link list")
    edges: dict[str, dict[str, float]] = {}
    out_degree: dict[str, int] = {}
    for page, targets in adjacency.items():
        out_degree[page] = len(targets)
        edges[page] = {dst: 1.0 / len(targets) for dst in targets} if targets else {}
    pages = tuple(sorted(adjacency))
    return ProbGraph(pages=pages, edges=edges, out_degree=out_degree,
                     parents=_transpose(edges, pages))


def validate(g: ProbGraph) -> list[Violation]:
    """Check the graph invariants; an empty list means all hold.

    Checks per-edge probability bounds, the per-page outgoing sum cap, and
    that parents is the exact transpose of edges.
    """
    violations: list[Violation] = []
    for src in sorted(g.edges):
        row = g.edges[src]
        for dst in sorted(row):
            prob = row[dst]
            if prob < 0.0:
                violations.append(Violation("negative_probability", src,
                                            f"{src}->{dst} = {prob}"))
            elif prob > 1.0 + ROW_SUM_TOLERANCE:
                violations.append(Violation("probability_above_one", src,
                                            f"{src}->{dst} = {prob}"))
        row_sum = sum(row.values())
        if row_sum > 1.0 + ROW_SUM_TOLERANCE:
            violations.append(Violation("row_sum_exceeded", src, f"{row_sum}"))
    expected_parents = _transpose(g.edges, g.pages)
    if dict(g.parents) != expected_parents:
        violations.append(Violation("parents_mismatch", "*",
                                    "parents is not the transpose of edges"))
    return violations


def _serialize_body(g: ProbGraph) -> str:
    lines = [f"#node\t{page}\t{g.out_degree.get(page, 0)}" for page in g.pages]
    for src in sorted(g.edges):
        for dst in sorted(g.edges[src]):
            lines.append(f"{src}\t{dst}\t{g.edges[src][dst]!r}")
    return "\n".join(lines) + "\n"


def write_graph(g: ProbGraph, path: Path | str,
                meta: Mapping[str, object] | None = None) -> None:
    """Persist as TSV with a header carrying the page count, the producing
    config, and a body checksum."""
    body = _serialize_body(g)
    pairs = [f"{key}={value}" for key, value in (meta or {}).items()]
    header = "\t".join([f"#pages={len(g.pages)}"] + pairs
                       + [f"checksum={content_checksum(body)}"]) + "\n"
    atomic_write_text(path, header + body)


def read_graph_meta(path: Path | str) -> dict[str, str]:
    """Header key=value pairs (page count, producing config, checksum)."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first.startswith("#pages="):
        raise ArtifactError(f"{path}: missing graph header")
    return dict(field.split("=", 1) for field in first.lstrip("#").split("\t"))


def read_graph(path: Path | str) -> ProbGraph:
    """Load a graph artifact, failing loudly on checksum or header mismatch."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#pages="):
        raise ArtifactError(f"{path}: missing graph header")
    header = dict(field.split("=", 1) for field in lines[0].lstrip("#").split("\t"))
    body = "\n".join(lines[1:]) + "\n"
    if content_checksum(body) != header.get("checksum"):
        raise ArtifactError(f"{path}: checksum mismatch, artifact corrupt")
    pages: list[str] = []
    out_degree: dict[str, int] = {}
    edges: dict[str, dict[str, float]] = {}
    for line in lines[1:]:
        if not line:
            continue
        if line.startswith("#node\t"):
            _, page, degree = line.split("\t")
            pages.append(page)
            out_degree[page] = int(degree)
            edges.setdefault(page, {})
        else:
            src, dst, prob = line.split("\t")
            edges.setdefault(src, {})[dst] = float(prob)
    if len(pages) != int(header["pages"]):
        raise ArtifactError(f"{path}: page count mismatch")
    ordered = tuple(pages)
    return ProbGraph(pages=ordered, edges=edges, out_degree=out_degree,
                     parents=_transpose(edges, ordered))
