"""siterank: local-website search fusing text, traffic, and annotation signals.

The pipeline: parse server logs into visitor sessions and click
transitions, build a probabilistic page graph, score pages by fixed-point
iteration over either uniform link weights or the observed traffic, run
similarity propagation over annotation-page associations, index the text,
and answer queries with a weighted fusion of the three signals.
"""

from .engine import EngineState, load_state
from .errors import ArtifactError, SiterankError, StateMismatch
from .evalkit import EvalConfig, EvalReport, QueryJudgment, compare_configs, rank_position
from .fusion import FusionWeights, QueryResult, search
from .graph import ProbGraph, build_prob_graph, uniform_prob_graph, validate
from .logparse import (LogRecord, Session, TransitionCounts, extract_transitions,
                       parse_clf_line, sessionize)
from .ranker import RankParams, RankVector, lpagerank, pagerank
from .social import (AnnotationStore, SimMatrices, SsrParams, load_annotations,
                     query_page_similarity, social_sim_rank)
from .synthcorpus import generate_corpus
from .textindex import (Document, InvertedIndex, build_index, extract_text,
                        tfidf_scores, tokenize)

__version__ = "0.1.0"

__all__ = [
    "AnnotationStore", "ArtifactError", "Document", "EngineState", "EvalConfig",
    "EvalReport", "FusionWeights", "InvertedIndex", "LogRecord", "ProbGraph",
    "QueryJudgment", "QueryResult", "RankParams", "RankVector", "Session",
    "SimMatrices", "SiterankError", "SsrParams", "StateMismatch",
    "TransitionCounts", "build_index", "build_prob_graph", "compare_configs",
    "extract_text", "extract_transitions", "generate_corpus", "load_annotations",
    "load_state", "lpagerank", "pagerank", "parse_clf_line",
    "query_page_similarity", "rank_position", "search", "sessionize",
    "social_sim_rank", "tfidf_scores", "tokenize", "uniform_prob_graph",
    "validate",
]
