import random

import numpy as np
import pytest

from siterank.social import (
    AnnotationStore,
    EmptyInput,
    EmptyStore,
    NonPositiveCount,
    SsrParams,
    load_annotations,
    query_page_similarity,
    read_annotations_tsv,
    read_sim_matrices,
    social_sim_rank,
    write_annotations_tsv,
    write_sim_matrices,
)

from oracles import ssr_bruteforce


def store_from_matrix(matrix) -> AnnotationStore:
    matrix = np.asarray(matrix, dtype=np.int64)
    triples = []
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            if matrix[i, j] > 0:
                triples.append((f"a{i}", f"/p{j}", int(matrix[i, j])))
    return load_annotations(triples)


def random_assoc(rng: random.Random, na: int, npg: int) -> np.ndarray | None:
    """Random association matrix with no empty rows or columns."""
    matrix = np.zeros((na, npg), dtype=np.int64)
    for i in range(na):
        matrix[i, rng.randrange(npg)] = rng.randrange(1, 9)
    for j in range(npg):
        if matrix[:, j].sum() == 0:
            matrix[rng.randrange(na), j] = rng.randrange(1, 9)
    extra = rng.randrange(0, na * npg + 1)
    for _ in range(extra):
        matrix[rng.randrange(na), rng.randrange(npg)] = rng.randrange(1, 9)
    return matrix


class TestLoadAnnotations:
    def test_single_triple(self):
        store = load_annotations([("synth", "/p1", 3)])
        assert store.num_annotations == 1
        assert store.num_pages == 1
        assert store.assoc[0, 0] == 3

    def test_duplicates_summed(self):
        store = load_annotations([("synth", "/p1", 2), ("synth", "/p1", 1)])
        assert store.assoc[0, 0] == 3

    def test_terms_normalized(self):
        store = load_annotations([("Synth", "/p1", 1), ("drum", "/p2", 4)])
        assert store.annotations == ("drum", "synth")
        assert store.num_pages == 2

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            load_annotations([])

    def test_non_positive_count(self):
        with pytest.raises(NonPositiveCount):
            load_annotations([("synth", "/p1", 0)])

    def test_user_count_floor(self):
        store = load_annotations([("a", "/p", 7)])
        assert store.user_count >= 7

    def test_tsv_roundtrip(self, tmp_path):
        triples = [("drum", "/p2", 4), ("synth", "/p1", 3)]
        path = tmp_path / "annotations.tsv"
        write_annotations_tsv(triples, path)
        assert read_annotations_tsv(path) == triples


class TestSocialSimRank:
    def test_iteration_zero_is_identity(self):
        store = store_from_matrix([[2, 0], [0, 3]])
        sim = social_sim_rank(store, SsrParams(max_iterations=1))
        # one sweep over a disconnected store: off-diagonals must stay 0
        assert np.array_equal(sim.sa, np.eye(2))
        assert np.array_equal(sim.sp, np.eye(2))

    def test_hand_value_one_shared_page(self):
        store = store_from_matrix([[2], [2]])
        sim = social_sim_rank(store, SsrParams(c_a=0.7, max_iterations=1))
        assert sim.sa[0, 1] == pytest.approx(0.7, abs=0.0)

    def test_disconnected_components_stay_zero(self):
        # annotations a0,a1 on p0; a2 on p1: no path between the components
        store = store_from_matrix([[2, 0], [1, 0], [0, 5]])
        sim = social_sim_rank(store, SsrParams(max_iterations=6))
        assert sim.sa[0, 2] == 0.0
        assert sim.sa[1, 2] == 0.0
        assert sim.sp[0, 1] == 0.0

    def test_empty_store(self):
        store = store_from_matrix([[1]])
        hollow = AnnotationStore((), (), np.zeros((0, 0), dtype=np.int64), 0)
        with pytest.raises(EmptyStore):
            social_sim_rank(hollow)
        social_sim_rank(store)  # sane store is fine

    def test_matches_bruteforce_exhaustive_shapes(self):
        rng = random.Random(99)
        for na in range(1, 5):
            for npg in range(1, 5):
                matrix = random_assoc(rng, na, npg)
                store = store_from_matrix(matrix)
                for sweeps in (1, 3):
                    sim = social_sim_rank(store, SsrParams(
                        c_a=0.7, c_p=0.6, delta=0.0, max_iterations=sweeps))
                    sa_ref, sp_ref = ssr_bruteforce(store.assoc, 0.7, 0.6, sweeps)
                    assert np.max(np.abs(sim.sa - sa_ref)) < 1e-12
                    assert np.max(np.abs(sim.sp - sp_ref)) < 1e-12

    def test_symmetry_exact_and_bounded(self):
        rng = random.Random(4)
        for _ in range(20):
            matrix = random_assoc(rng, rng.randrange(2, 5), rng.randrange(2, 5))
            sim = social_sim_rank(store_from_matrix(matrix),
                                  SsrParams(max_iterations=5))
            assert np.array_equal(sim.sa, sim.sa.T)
            assert np.array_equal(sim.sp, sim.sp.T)
            for m in (sim.sa, sim.sp):
                assert np.all(m >= 0.0)
                assert np.all(m <= 1.0)
                assert np.all(np.diag(m) == 1.0)

    def test_identical_rows_propagate_identically(self):
        # a0 and a1 tag the same pages with the same counts
        matrix = np.array([[3, 1, 0], [3, 1, 0], [0, 2, 4]])
        sim = social_sim_rank(store_from_matrix(matrix),
                              SsrParams(max_iterations=4))
        assert sim.sa[0, 2] == pytest.approx(sim.sa[1, 2], abs=0.0)

    def test_cap_is_normal_completion(self):
        store = store_from_matrix([[2, 1], [1, 2]])
        sim = social_sim_rank(store, SsrParams(delta=0.0, max_iterations=3))
        assert sim.iterations_used == 3
        assert sim.final_delta >= 0.0


class TestQueryPageSimilarity:
    def test_exact_tag_match_scores_one(self):
        store = load_annotations([("synth", "/p1", 3)])
        sim = social_sim_rank(store, SsrParams(max_iterations=1))
        assert query_page_similarity(["synth"], "/p1", store, sim) == 1.0

    def test_unknown_terms_score_zero(self):
        store = load_annotations([("synth", "/p1", 3)])
        sim = social_sim_rank(store, SsrParams(max_iterations=1))
        assert query_page_similarity(["zither"], "/p1", store, sim) == 0.0
        assert query_page_similarity(["synth"], "/p9", store, sim) == 0.0

    def test_count_weighted_mix(self):
        store = load_annotations([("synth", "/p1", 3), ("drum", "/p1", 1),
                                  ("drum", "/p2", 2)])
        sim = social_sim_rank(store, SsrParams(max_iterations=1))
        i_synth = store.annotation_index("synth")
        i_drum = store.annotation_index("drum")
        sa = sim.sa.copy()
        sa[i_synth, i_drum] = sa[i_drum, i_synth] = 0.2
        from siterank.social import SimMatrices
        doctored = SimMatrices(sim.annotations, sim.pages, sa, sim.sp, 1, 0.0)
        score = query_page_similarity(["synth"], "/p1", store, doctored)
        assert score == pytest.approx(1.0 * 0.75 + 0.2 * 0.25, abs=1e-12)

    def test_invariant_under_count_scaling(self):
        base = [("synth", "/p1", 3), ("drum", "/p1", 1), ("drum", "/p2", 5)]
        scaled = [(t, p, c * 4) for t, p, c in base]
        params = SsrParams(max_iterations=3)
        store_a, store_b = load_annotations(base), load_annotations(scaled)
        sim_a = social_sim_rank(store_a, params)
        sim_b = social_sim_rank(store_b, params)
        for terms in (["synth"], ["drum"], ["synth", "drum"]):
            for page in ("/p1", "/p2"):
                a = query_page_similarity(terms, page, store_a, sim_a)
                b = query_page_similarity(terms, page, store_b, sim_b)
                assert a == pytest.approx(b, abs=1e-12)


class TestSimIO:
    def test_roundtrip(self, tmp_path):
        store = load_annotations([("synth", "/p1", 3), ("drum", "/p1", 1),
                                  ("drum", "/p2", 2)])
        params = SsrParams(max_iterations=4)
        sim = social_sim_rank(store, params)
        write_sim_matrices(sim, tmp_path / "sim", params=params,
                           store_fingerprint=store.fingerprint)
        loaded, meta = read_sim_matrices(tmp_path / "sim")
        assert loaded.annotations == sim.annotations
        assert loaded.pages == sim.pages
        assert np.array_equal(loaded.sa, sim.sa)
        assert np.array_equal(loaded.sp, sim.sp)
        assert meta["store"] == store.fingerprint
