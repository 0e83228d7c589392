"""Similarity propagation over annotation-page associations.

"606" and "analog" are never assigned to the same kind of query, yet they
tag overlapping pages, so similarity flows between them through those
pages.  Run with: python demos/03_annotation_similarity.py
"""

import numpy as np

from siterank import SsrParams, load_annotations, query_page_similarity, social_sim_rank

TRIPLES = [
    ("drum", "/drums/606.html", 8),
    ("606", "/drums/606.html", 5),
    ("analog", "/drums/606.html", 2),
    ("drum", "/drums/909.html", 6),
    ("analog", "/drums/909.html", 3),
    ("piano", "/keys/grand.html", 7),
    ("acoustic", "/keys/grand.html", 4),
]

store = load_annotations(TRIPLES)
print(f"{store.num_annotations} annotations x {store.num_pages} pages")
print("vocabulary:", store.annotations)

sim = social_sim_rank(store, SsrParams(c_a=0.7, c_p=0.7, max_iterations=10))
print(f"\nconverged after {sim.iterations_used} sweeps "
      f"(last delta {sim.final_delta:.2e})")

np.set_printoptions(precision=3, suppress=True)
print("\nannotation similarity:")
print(sim.sa)
print("\npage similarity:")
print(sim.sp)

i606 = store.annotation_index("606")
idrum = store.annotation_index("drum")
ipiano = store.annotation_index("piano")
print(f"\nsim(606, drum)  = {sim.sa[i606, idrum]:.3f}   (share pages)")
print(f"sim(606, piano) = {sim.sa[i606, ipiano]:.3f}   (disconnected)")

# A query for "drum analog" scores the two drum pages through their tags,
# weighted by how many users confirmed each tag.
for page in store.pages:
    score = query_page_similarity(["drum", "analog"], page, store, sim)
    print(f"query 'drum analog' vs {page}: {score:.3f}")
