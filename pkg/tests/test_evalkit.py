import pytest

from siterank.engine import EngineState
from siterank.evalkit import (
    EvalConfig,
    MissingEngineState,
    QueryJudgment,
    compare_configs,
    format_recall_csv,
    format_report_tsv,
    rank_position,
    read_configs,
    read_judgments,
    write_report,
)
from siterank.fusion import FusionWeights, QueryResult
from siterank.graph import ProbGraph, _transpose, uniform_prob_graph
from siterank.ranker import RankParams, lpagerank, pagerank
from siterank.textindex import Document, build_index


def results_for(pages):
    return [QueryResult(page=p, score=1.0 / (i + 1), text=0, social=0,
                        static=0, position=i + 1)
            for i, p in enumerate(pages)]


class TestRankPosition:
    def test_first_result(self):
        assert rank_position(results_for(["/t", "/x"]), {"/t"}) == 1

    def test_absent_target_not_found(self):
        assert rank_position(results_for(["/a", "/b"]), {"/t"}) is None

    def test_third_position(self):
        assert rank_position(results_for(["/a", "/b", "/t"]), {"/t"}) == 3

    def test_first_relevant_among_many(self):
        assert rank_position(results_for(["/a", "/t2", "/t1"]), {"/t1", "/t2"}) == 2


class TestJudgmentIO:
    def test_read(self, tmp_path):
        path = tmp_path / "judgments.tsv"
        path.write_text("alpha synth\t/a.html\nbeta\t/b.html,/c.html\n")
        judgments = read_judgments(path)
        assert judgments[0] == QueryJudgment("alpha synth", ("/a.html",))
        assert judgments[1].targets == ("/b.html", "/c.html")

    def test_empty_targets_rejected(self):
        with pytest.raises(ValueError):
            QueryJudgment("q", ())

    def test_configs(self, tmp_path):
        path = tmp_path / "configs.json"
        path.write_text('[{"name": "t", "weights": [1, 0, 0], "static": "pr"}]')
        configs = read_configs(path)
        assert configs[0].name == "t"
        assert configs[0].weights == FusionWeights(1, 0, 0)
        assert configs[0].static == "pr"


def tiny_state():
    docs = [Document("/a.html", "A", ("alpha", "synth")),
            Document("/b.html", "B", ("beta", "synth")),
            Document("/c.html", "C", ("gamma", "organ"))]
    idx = build_index(docs, stopwords=frozenset())
    links = {"/a.html": ["/b.html"], "/b.html": ["/a.html"], "/c.html": ["/a.html"]}
    params = RankParams(epsilon=1e-10, max_iterations=2000)
    return EngineState(index=idx,
                       lpr=lpagerank(uniform_prob_graph(links), params),
                       pr=pagerank(links, params))


class TestCompareConfigs:
    def test_single_query_single_config(self):
        state = tiny_state()
        report = compare_configs(
            [QueryJudgment("synth", ("/b.html",))],
            [EvalConfig("text", FusionWeights(1, 0, 0))],
            state)
        position = report.positions[(0, "text")]
        assert position in (1, 2)
        assert report.found["text"] == 1
        tsv = format_report_tsv(report)
        assert tsv.splitlines()[1] == f"synth\t{position}"

    def test_missing_pr_vector(self):
        state = tiny_state()
        state.pr = None
        with pytest.raises(MissingEngineState):
            compare_configs([QueryJudgment("synth", ("/a.html",))],
                            [EvalConfig("pr", FusionWeights(1, 0, 0), static="pr")],
                            state)

    def test_recall_non_decreasing_and_not_found_counted(self):
        state = tiny_state()
        report = compare_configs(
            [QueryJudgment("synth", ("/b.html",)),
             QueryJudgment("organ", ("/c.html",)),
             QueryJudgment("missingword", ("/a.html",))],
            [EvalConfig("text", FusionWeights(1, 0, 0))],
            state)
        series = [report.recall[("text", k)] for k in (1, 5, 10, 20)]
        assert series == sorted(series)
        assert report.found["text"] == 2  # missingword never matches
        assert report.positions[(2, "text")] is None
        assert "NF" in format_report_tsv(report)

    def test_traffic_sensitivity_constructed_fixture(self):
        # Two structurally identical branches; all traffic goes to /x.
        # Alphabetic tie-break puts /x *after* /a under plain structure,
        # so the traffic-weighted config must place it strictly higher.
        docs = [Document("/home.html", "home", ("landing",)),
                Document("/a-branch.html", "a", ("landing", "page")),
                Document("/x-branch.html", "x", ("landing", "page"))]
        idx = build_index(docs, stopwords=frozenset())
        links = {"/home.html": ["/a-branch.html", "/x-branch.html"],
                 "/a-branch.html": [], "/x-branch.html": []}
        params = RankParams(epsilon=1e-12, max_iterations=5000)
        pr = pagerank(links, params)
        # traffic concentrates on the /x branch
        edges = {"/home.html": {"/a-branch.html": 0.05, "/x-branch.html": 0.95},
                 "/a-branch.html": {}, "/x-branch.html": {}}
        pages = tuple(sorted(edges))
        g = ProbGraph(pages=pages, edges=edges,
                      out_degree={p: len(edges[p]) for p in pages},
                      parents=_transpose(edges, pages))
        lpr = lpagerank(g, params)
        state = EngineState(index=idx, lpr=lpr, pr=pr)
        judgments = [QueryJudgment("landing page", ("/x-branch.html",))]
        configs = [EvalConfig("pr_static", FusionWeights(0, 0, 1), static="pr"),
                   EvalConfig("lpr_static", FusionWeights(0, 0, 1), static="lpr")]
        report = compare_configs(judgments, configs, state)
        pos_pr = report.positions[(0, "pr_static")]
        pos_lpr = report.positions[(0, "lpr_static")]
        assert pos_lpr < pos_pr


class TestReportOutput:
    def test_deterministic_bytes(self, tmp_path):
        state = tiny_state()
        judgments = [QueryJudgment("synth", ("/b.html",)),
                     QueryJudgment("organ", ("/c.html",))]
        configs = [EvalConfig("text", FusionWeights(1, 0, 0)),
                   EvalConfig("static", FusionWeights(0, 0, 1))]
        r1 = compare_configs(judgments, configs, state)
        r2 = compare_configs(judgments, configs, state)
        assert format_report_tsv(r1) == format_report_tsv(r2)
        assert format_recall_csv(r1) == format_recall_csv(r2)
        write_report(r1, tmp_path / "report.tsv", tmp_path / "report.csv")
        assert (tmp_path / "report.tsv").read_text().startswith("query\ttext\tstatic")
        csv = (tmp_path / "report.csv").read_text()
        assert csv.splitlines()[0] == "config,k,recall"
        assert len(csv.splitlines()) == 1 + 2 * 4  # two configs x four k values
