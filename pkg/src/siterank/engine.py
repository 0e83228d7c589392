"""Engine state: the loaded artifacts a query needs, with consistency checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import StateMismatch
from .fusion import EngineNotLoaded
from .graph import ProbGraph, read_graph, read_graph_meta
from .ranker import RankVector, read_rank_vector
from .social import (AnnotationStore, SimMatrices, load_annotations,
                     read_annotations_tsv, read_sim_matrices)
from .textindex import InvertedIndex, read_index

# Conventional artifact names inside a state directory.
INDEX_FILE = "index.json"
GRAPH_FILE = "graph.tsv"
LPR_FILE = "lpr.json"
PR_FILE = "pr.json"
ANNOTATIONS_FILE = "annotations.tsv"
SIM_DIR = "sim"


@dataclass
class EngineState:
    """Immutable-by-convention bundle of everything a query touches."""

    index: InvertedIndex | None = None
    graph: ProbGraph | None = None
    lpr: RankVector | None = None
    pr: RankVector | None = None
    store: AnnotationStore | None = None
    sim: SimMatrices | None = None
    config: dict = field(default_factory=dict)

    def rank_vector(self, kind: str) -> RankVector:
        if kind not in ("lpr", "pr"):
            raise ValueError(f"unknown rank kind {kind!r}")
        vector = self.lpr if kind == "lpr" else self.pr
        if vector is None:
            raise EngineNotLoaded(f"no {kind} rank vector loaded")
        return vector


def load_state(directory: Path | str) -> EngineState:
    """Load whatever artifacts exist in a state directory.

    Cross-checks content fingerprints where both sides of a dependency are
    present: a rank vector must have been computed from the loaded graph,
    and similarity matrices from the loaded annotations.  A mismatch means
    the directory mixes artifacts from different pipeline runs, which is
    refused rather than silently served.
    """
    directory = Path(directory)
    state = EngineState()

    index_path = directory / INDEX_FILE
    if index_path.exists():
        state.index = read_index(index_path)
        state.config["documents"] = state.index.doc_count

    graph_path = directory / GRAPH_FILE
    if graph_path.exists():
        state.graph = read_graph(graph_path)
        meta = read_graph_meta(graph_path)
        state.config["graph"] = {k: v for k, v in meta.items() if k != "checksum"}

    for name, attr in ((LPR_FILE, "lpr"), (PR_FILE, "pr")):
        rank_path = directory / name
        if rank_path.exists():
            vector, meta = read_rank_vector(rank_path)
            setattr(state, attr, vector)
            state.config[attr] = meta
            expected = meta.get("source_checksum")
            if (attr == "lpr" and expected and state.graph is not None
                    and expected != state.graph.fingerprint):
                raise StateMismatch(
                    f"{name} was computed from graph {expected}, but the "
                    f"loaded graph is {state.graph.fingerprint}")

    ann_path = directory / ANNOTATIONS_FILE
    if ann_path.exists():
        state.store = load_annotations(read_annotations_tsv(ann_path))

    sim_dir = directory / SIM_DIR
    if (sim_dir / "sa.tsv").exists():
        sim, meta = read_sim_matrices(sim_dir)
        state.sim = sim
        state.config["ssr"] = {k: meta[k] for k in
                               ("c_a", "c_p", "delta", "iterations_used",
                                "final_delta", "store")}
        if state.store is not None and meta.get("store") != state.store.fingerprint:
            raise StateMismatch(
                f"similarity matrices were computed from annotations "
                f"{meta.get('store')}, but the loaded annotations are "
                f"{state.store.fingerprint}")
        if state.store is not None and sim.annotations != state.store.annotations:
            raise StateMismatch("similarity vocabulary does not match the "
                                "loaded annotation store")
    return state
