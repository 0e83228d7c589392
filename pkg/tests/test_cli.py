import json
import shutil
from pathlib import Path

import pytest

from siterank.cli import main


@pytest.fixture(scope="module")
def pipeline_state(tmp_path_factory) -> Path:
    """Small synthetic site run through every pipeline stage once."""
    root = tmp_path_factory.mktemp("pipeline")
    site = root / "site"
    state = root / "state"
    state.mkdir()
    assert main(["synth", "--seed", "11", "--pages", "40", "--sessions", "80",
                 "--out", str(site)]) == 0
    assert main(["ingest", "--logs", str(site / "logs"),
                 "--out", str(state / "transitions.tsv")]) == 0
    assert main(["scan", "--corpus", str(site / "corpus"),
                 "--out-links", str(state / "links.tsv"),
                 "--out-index", str(state / "index.json")]) == 0
    assert main(["graph", "--transitions", str(state / "transitions.tsv"),
                 "--links", str(state / "links.tsv"),
                 "--out", str(state / "graph.tsv")]) == 0
    assert main(["rank", "--graph", str(state / "graph.tsv"),
                 "--out", str(state / "lpr.json")]) == 0
    assert main(["rank", "--links", str(state / "links.tsv"),
                 "--out", str(state / "pr.json")]) == 0
    shutil.copy(site / "annotations.tsv", state / "annotations.tsv")
    assert main(["ssr", "--annotations", str(state / "annotations.tsv"),
                 "--out", str(state / "sim")]) == 0
    return root


class TestExitCodes:
    def test_usage_error_is_one(self, capsys):
        assert main(["rank"]) == 1  # missing required --out
        assert main(["no-such-command"]) == 1

    def test_data_error_is_two(self, tmp_path, capsys):
        missing = tmp_path / "nope"
        rc = main(["scan", "--corpus", str(missing),
                   "--out-links", str(tmp_path / "l.tsv"),
                   "--out-index", str(tmp_path / "i.json")])
        assert rc == 2
        assert "siterank scan:" in capsys.readouterr().err

    def test_rank_requires_exactly_one_input(self, tmp_path, capsys):
        assert main(["rank", "--out", str(tmp_path / "o.json")]) == 1
        assert main(["rank", "--graph", "g", "--links", "l",
                     "--out", str(tmp_path / "o.json")]) == 1


class TestRankCommand:
    def test_two_node_cycle_scores_one(self, tmp_path):
        links = tmp_path / "links.tsv"
        links.write_text("/a\t/b\n/b\t/a\n")
        out = tmp_path / "pr.json"
        assert main(["rank", "--links", str(links), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["scores"]["/a"] == pytest.approx(1.0, abs=1e-9)
        assert payload["scores"]["/b"] == pytest.approx(1.0, abs=1e-9)
        assert payload["kind"] == "pr"


class TestQueryCommand:
    def test_text_only_weights_give_tfidf_order(self, pipeline_state, capsys):
        state = pipeline_state / "state"
        judgments = (pipeline_state / "site" / "judgments.tsv").read_text()
        query = judgments.splitlines()[0].split("\t")[0]
        assert main(["query", "--state", str(state), "--q", query,
                     "-k", "5", "--weights", "1,0,0"]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[0] == "position\tpage\tscore\ttext\tsocial\tstatic"
        assert len(lines) > 1
        first = lines[1].split("\t")
        assert first[0] == "1"

    def test_env_var_state_dir(self, pipeline_state, capsys, monkeypatch):
        monkeypatch.setenv("SITERANK_STATE", str(pipeline_state / "state"))
        assert main(["query", "--q", "archive", "-k", "3"]) == 0

    def test_missing_state_is_data_error(self, capsys, monkeypatch):
        monkeypatch.delenv("SITERANK_STATE", raising=False)
        assert main(["query", "--q", "archive"]) == 2


class TestEvalCommand:
    def test_full_pipeline_deterministic(self, pipeline_state, tmp_path):
        state = pipeline_state / "state"
        site = pipeline_state / "site"
        out1 = tmp_path / "r1.tsv"
        out2 = tmp_path / "r2.tsv"
        for out in (out1, out2):
            assert main(["eval", "--state", str(state),
                         "--judgments", str(site / "judgments.tsv"),
                         "--configs", str(site / "configs.json"),
                         "--out", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.with_suffix(".csv").read_bytes() == \
               out2.with_suffix(".csv").read_bytes()


class TestServeParity:
    def test_cli_query_matches_http_search(self, pipeline_state, capsys):
        import json as jsonlib
        import threading
        import urllib.request
        from siterank.engine import load_state
        from siterank.service import SearchService, make_server

        state_dir = pipeline_state / "state"
        query = (pipeline_state / "site" / "judgments.tsv") \
            .read_text().splitlines()[1].split("\t")[0]
        assert main(["query", "--state", str(state_dir), "--q", query,
                     "-k", "5", "--weights", "0.6,0.2,0.2"]) == 0
        cli_lines = capsys.readouterr().out.strip().splitlines()[1:]

        service = SearchService(state=load_state(state_dir))
        server = make_server(service, port=0)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            url = (f"http://127.0.0.1:{server.server_address[1]}/search"
                   f"?q={urllib.parse.quote(query)}&k=5&w=0.6,0.2,0.2")
            with urllib.request.urlopen(url, timeout=5) as resp:
                payload = jsonlib.loads(resp.read().decode())
        finally:
            server.shutdown()
            server.server_close()

        assert len(cli_lines) == len(payload["results"])
        for line, result in zip(cli_lines, payload["results"]):
            position, page, score, text, social, static = line.split("\t")
            assert int(position) == result["position"]
            assert page == result["page"]
            # repr round-trip makes the TSV floats exactly the JSON floats
            assert float(score) == result["score"]
            assert float(text) == result["components"]["text"]
            assert float(social) == result["components"]["social"]
            assert float(static) == result["components"]["static"]


class TestArtifactHygiene:
    def test_no_tmp_files_left_behind(self, pipeline_state):
        leftovers = [p for p in (pipeline_state / "state").rglob("*.tmp")]
        assert leftovers == []

    def test_state_loads_cleanly(self, pipeline_state):
        from siterank.engine import load_state
        state = load_state(pipeline_state / "state")
        assert state.index is not None
        assert state.lpr is not None
        assert state.pr is not None
        assert state.store is not None
        assert state.sim is not None

    def test_mismatched_artifacts_refused(self, pipeline_state, tmp_path):
        from siterank.engine import load_state
        from siterank.errors import StateMismatch
        state_dir = pipeline_state / "state"
        clone = tmp_path / "state"
        shutil.copytree(state_dir, clone)
        # regenerate the graph with different smoothing; stale lpr.json now
        # refers to a graph fingerprint that no longer matches
        assert main(["graph", "--transitions", str(clone / "transitions.tsv"),
                     "--links", str(clone / "links.tsv"),
                     "--smoothing", "0.5", "--out", str(clone / "graph.tsv")]) == 0
        with pytest.raises(StateMismatch):
            load_state(clone)
