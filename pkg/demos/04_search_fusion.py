"""Fusing lexical, social, and traffic signals into one ranked answer.

Builds a four-page engine in memory and runs the same query under
different weight settings to show each signal reordering the results.
Run with: python demos/04_search_fusion.py
"""

from siterank import (EngineState, FusionWeights, RankParams, SsrParams,
                      build_index, extract_text, load_annotations, lpagerank,
                      search, social_sim_rank, uniform_prob_graph)

PAGES = {
    "/bass-station.html": (
        "<title>Bass Station</title><p>bass synth with analog bass filter "
        'and bass drive</p><a href="/drum-lab.html">drums</a>'),
    "/drum-lab.html": (
        "<title>Drum Lab</title><p>drum machine with bass drum pads</p>"
        '<a href="/bass-station.html">bass</a>'),
    "/mixer-8.html": (
        "<title>Mixer 8</title><p>eight channel mixer</p>"
        '<a href="/bass-station.html">bass</a>'),
    "/pad-controller.html": (
        "<title>Pad Controller</title><p>performance pads</p>"
        '<a href="/drum-lab.html">drums</a>'),
}

docs = [extract_text(html, path) for path, html in sorted(PAGES.items())]
index = build_index(docs)
links = {d.page_id: list(d.out_links) for d in docs}
lpr = lpagerank(uniform_prob_graph(links),
                RankParams(epsilon=1e-10, max_iterations=1000))
store = load_annotations([
    ("bass", "/bass-station.html", 6),
    ("bass", "/drum-lab.html", 1),
    ("drums", "/drum-lab.html", 5),
    ("drums", "/pad-controller.html", 2),
])
sim = social_sim_rank(store, SsrParams(max_iterations=10))
state = EngineState(index=index, lpr=lpr, store=store, sim=sim)


def show(label, weights):
    print(f"\n{label}  (text={weights.text}, social={weights.social}, "
          f"static={weights.static})")
    for r in search(state, "bass drum", k=4, weights=weights):
        print(f"  #{r.position} {r.page:24s} fused={r.score:.3f} "
              f"text={r.text:.2f} social={r.social:.2f} static={r.static:.2f}")


show("lexical only", FusionWeights(1, 0, 0))
show("social only", FusionWeights(0, 1, 0))
show("traffic only", FusionWeights(0, 0, 1))
show("default blend", FusionWeights(0.6, 0.2, 0.2))
