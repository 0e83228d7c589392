"""Annotation-page association store and coupled similarity propagation.

Similarity starts as identity on both sides of the bipartite annotation-page
graph and is propagated back and forth: two annotations grow similar when
they tag similar pages, two pages grow similar when they carry similar
annotations.  Each propagated term is damped and weighted by the ratio of
the smaller to the larger user count on the two associations, so heavily
co-confirmed tags transfer more similarity than incidental ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import SiterankError, ArtifactError
from .logparse import normalize_path
from .textindex import normalize_term
from ._util import atomic_write_text, content_checksum

SIM_FORMAT = "siterank-sim/1"


class EmptyInput(SiterankError):
    """No usable annotation triples."""


class NonPositiveCount(SiterankError):
    """An annotation triple carried a zero or negative user count."""


class EmptyStore(SiterankError):
    """Similarity requested over a store with no annotations or pages."""


@dataclass(frozen=True)
class AnnotationStore:
    """Aggregated user counts for (annotation, page) associations.

    assoc[i, j] is the number of users who assigned annotation i to page j.
    Only annotated pages exist here; pages without annotations interact
    with the engine solely through text and traffic scores.
    """

    annotations: tuple[str, ...]
    pages: tuple[str, ...]
    assoc: np.ndarray  # (NA, NP) non-negative ints
    user_count: int

    @property
    def num_annotations(self) -> int:
        return len(self.annotations)

    @property
    def num_pages(self) -> int:
        return len(self.pages)

    def annotation_index(self, term: str) -> int | None:
        return self._annotation_lookup.get(term)

    def page_index(self, page: str) -> int | None:
        return self._page_lookup.get(page)

    @cached_property
    def _annotation_lookup(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.annotations)}

    @cached_property
    def _page_lookup(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.pages)}

    def pages_of(self, annotation_idx: int) -> np.ndarray:
        return np.flatnonzero(self.assoc[annotation_idx])

    def annotations_of(self, page_idx: int) -> np.ndarray:
        return np.flatnonzero(self.assoc[:, page_idx])

    @property
    def fingerprint(self) -> str:
        lines = [f"{self.annotations[i]}\t{self.pages[j]}\t{int(self.assoc[i, j])}"
                 for i in range(self.num_annotations)
                 for j in range(self.num_pages) if self.assoc[i, j]]
        return content_checksum("\n".join(lines) + "\n")


def load_annotations(triples: Iterable[tuple[str, str, int]],
                     user_count: int | None = None) -> AnnotationStore:
    """Build the association store from (term, page, user count) triples.

    Terms are normalized with the same rules as index tokens, page paths
    with the log normalizer; duplicate pairs sum their counts.
    """
    aggregated: dict[tuple[str, str], int] = {}
    for term, page, count in triples:
        if count <= 0:
            raise NonPositiveCount(f"count for ({term!r}, {page!r}) must be "
                                   f"positive, got {count}")
        key = (normalize_term(term), normalize_path(page))
        if not key[0]:
            continue
        aggregated[key] = aggregated.get(key, 0) + int(count)
    if not aggregated:
        raise EmptyInput("no usable annotation triples")
    annotations = tuple(sorted({term for term, _ in aggregated}))
    pages = tuple(sorted({page for _, page in aggregated}))
    a_idx = {a: i for i, a in enumerate(annotations)}
    p_idx = {p: i for i, p in enumerate(pages)}
    assoc = np.zeros((len(annotations), len(pages)), dtype=np.int64)
    for (term, page), count in aggregated.items():
        assoc[a_idx[term], p_idx[page]] = count
    max_count = int(assoc.max())
    if user_count is None:
        user_count = max_count
    elif user_count < max_count:
        raise NonPositiveCount(f"user_count {user_count} below max association "
                               f"count {max_count}")
    return AnnotationStore(annotations, pages, assoc, user_count)


def read_annotations_tsv(path: Path | str) -> list[tuple[str, str, int]]:
    triples = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        term, page, count = line.split("\t")
        triples.append((term, page, int(count)))
    return triples


def write_annotations_tsv(triples: Sequence[tuple[str, str, int]],
                          path: Path | str) -> None:
    lines = [f"{term}\t{page}\t{count}" for term, page, count in triples]
    atomic_write_text(path, "\n".join(lines) + "\n")


@dataclass(frozen=True)
class SsrParams:
    c_a: float = 0.7   # damping for annotation-side propagation
    c_p: float = 0.7   # damping for page-side propagation
    delta: float = 1e-4
    max_iterations: int = 10

    def check(self) -> None:
        for name, value in (("c_a", self.c_a), ("c_p", self.c_p)):
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {value}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class SimMatrices:
    """Symmetric annotation and page similarity matrices, diagonals 1."""

    annotations: tuple[str, ...]
    pages: tuple[str, ...]
    sa: np.ndarray  # (NA, NA)
    sp: np.ndarray  # (NP, NP)
    iterations_used: int
    final_delta: float


def social_sim_rank(store: AnnotationStore,
                    params: SsrParams = SsrParams()) -> SimMatrices:
    """Run the coupled similarity propagation to (near) fixed point.

    Each sweep recomputes annotation similarity from the previous page
    similarity, pins its diagonal to 1, then recomputes page similarity
    from that fresh annotation matrix and pins again.  Stops when the max
    absolute entry change across both matrices is at most delta; hitting
    the sweep cap is a normal completion, reported via final_delta.
    """
    params.check()
    na, np_pages = store.num_annotations, store.num_pages
    if na == 0 or np_pages == 0:
        raise EmptyStore("annotation store is empty")

    page_lists = [store.pages_of(i) for i in range(na)]
    page_counts = [store.assoc[i, page_lists[i]].astype(np.float64) for i in range(na)]
    ann_lists = [store.annotations_of(j) for j in range(np_pages)]
    ann_counts = [store.assoc[ann_lists[j], j].astype(np.float64)
                  for j in range(np_pages)]

    sa = np.eye(na)
    sp = np.eye(np_pages)
    final_delta = 0.0
    iterations = 0
    for _ in range(params.max_iterations):
        sa_new = np.zeros_like(sa)
        for i in range(na):
            for j in range(i, na):
                ratio = (np.minimum.outer(page_counts[i], page_counts[j])
                         / np.maximum.outer(page_counts[i], page_counts[j]))
                block = sp[np.ix_(page_lists[i], page_lists[j])]
                value = (params.c_a / (len(page_lists[i]) * len(page_lists[j]))
                         * float(np.sum(ratio * block)))
                sa_new[i, j] = value
                sa_new[j, i] = value
        np.fill_diagonal(sa_new, 1.0)

        sp_new = np.zeros_like(sp)
        for i in range(np_pages):
            for j in range(i, np_pages):
                ratio = (np.minimum.outer(ann_counts[i], ann_counts[j])
                         / np.maximum.outer(ann_counts[i], ann_counts[j]))
                block = sa_new[np.ix_(ann_lists[i], ann_lists[j])]
                value = (params.c_p / (len(ann_lists[i]) * len(ann_lists[j]))
                         * float(np.sum(ratio * block)))
                sp_new[i, j] = value
                sp_new[j, i] = value
        np.fill_diagonal(sp_new, 1.0)

        final_delta = max(float(np.max(np.abs(sa_new - sa))),
                          float(np.max(np.abs(sp_new - sp))))
        sa, sp = sa_new, sp_new
        iterations += 1
        if final_delta <= params.delta:
            break
    return SimMatrices(store.annotations, store.pages, sa, sp,
                       iterations, final_delta)


def query_page_similarity(query_terms: Iterable[str], page: str,
                          store: AnnotationStore, sim: SimMatrices) -> float:
    """Score a page against query terms through annotation similarity.

    Each query term found in the annotation vocabulary contributes its
    similarity to every annotation on the page, weighted by that
    annotation's share of the page's user counts.  With an identity
    similarity matrix this degenerates to exact tag lookup, which keeps
    the social signal cleanly ablatable.
    """
    page_idx = store.page_index(normalize_path(page))
    if page_idx is None:
        return 0.0
    page_annotations = store.annotations_of(page_idx)
    if len(page_annotations) == 0:
        return 0.0
    counts = store.assoc[page_annotations, page_idx].astype(np.float64)
    weights = counts / counts.sum()
    lookup = store._annotation_lookup
    score = 0.0
    for term in query_terms:
        q_idx = lookup.get(normalize_term(term))
        if q_idx is None:
            continue
        score += float(np.dot(sim.sa[q_idx, page_annotations], weights))
    return score


def _write_triangle(matrix: np.ndarray, kind: str, params: SsrParams,
                    sim: SimMatrices, store_fingerprint: str,
                    path: Path) -> None:
    n = matrix.shape[0]
    lines = [
        f"#format={SIM_FORMAT}",
        f"#kind={kind}",
        f"#n={n}",
        f"#c_a={params.c_a!r}\tc_p={params.c_p!r}\tdelta={params.delta!r}"
        f"\tmax_iterations={params.max_iterations}",
        f"#iterations_used={sim.iterations_used}\tfinal_delta={sim.final_delta!r}",
        f"#store={store_fingerprint}",
    ]
    for i in range(n):
        for j in range(i, n):
            if matrix[i, j] != 0.0:
                lines.append(f"{i}\t{j}\t{float(matrix[i, j])!r}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_sim_matrices(sim: SimMatrices, directory: Path | str, *,
                       params: SsrParams, store_fingerprint: str) -> None:
    """Persist both matrices as sparse upper-triangle TSV plus vocab sidecars."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _write_triangle(sim.sa, "sa", params, sim, store_fingerprint,
                    directory / "sa.tsv")
    _write_triangle(sim.sp, "sp", params, sim, store_fingerprint,
                    directory / "sp.tsv")
    atomic_write_text(directory / "annotations.tsv",
                      "\n".join(sim.annotations) + "\n")
    atomic_write_text(directory / "pages.tsv", "\n".join(sim.pages) + "\n")


def _read_triangle(path: Path, expected_kind: str) -> tuple[np.ndarray, dict]:
    meta: dict[str, str] = {}
    entries: list[tuple[int, int, float]] = []
    n = None
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            for piece in line.lstrip("#").split("\t"):
                key, _, value = piece.partition("=")
                meta[key] = value
            continue
        i, j, value = line.split("\t")
        entries.append((int(i), int(j), float(value)))
    if meta.get("format") != SIM_FORMAT or meta.get("kind") != expected_kind:
        raise ArtifactError(f"{path}: not a {SIM_FORMAT} {expected_kind} artifact")
    n = int(meta["n"])
    matrix = np.zeros((n, n))
    for i, j, value in entries:
        matrix[i, j] = value
        matrix[j, i] = value
    return matrix, meta


def read_sim_matrices(directory: Path | str) -> tuple[SimMatrices, dict]:
    """Load matrices plus metadata (including the producing store fingerprint)."""
    directory = Path(directory)
    sa, meta_a = _read_triangle(directory / "sa.tsv", "sa")
    sp, _ = _read_triangle(directory / "sp.tsv", "sp")
    annotations = tuple((directory / "annotations.tsv")
                        .read_text(encoding="utf-8").splitlines())
    pages = tuple((directory / "pages.tsv").read_text(encoding="utf-8").splitlines())
    sim = SimMatrices(annotations, pages, sa, sp,
                      int(meta_a["iterations_used"]),
                      float(meta_a["final_delta"]))
    return sim, meta_a
