"""Deterministic synthetic test site: pages, access log, annotations, judgments.

Generates a small instrument-catalog website (home page, category indexes,
instrument pages with cross-links), a Combined-format access log produced
by seeded random walks over the link structure with configurable traffic
skew toward one category, an annotation file, benchmark queries with their
relevant pages, and a default set of evaluation configurations.  Everything
derives from one seed, so two runs with the same arguments are
byte-identical.
"""

from __future__ import annotations

import gzip
import json
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ._util import atomic_write_bytes, atomic_write_text

CATEGORIES = ("drums", "synths", "pianos", "organs", "samplers",
              "sequencers", "effects", "mixers")
HOT_CATEGORY = "drums"

_MAKERS = ("Volta", "Kestrel", "Nordwin", "Apex", "Lyra", "Halcyon", "Mira",
           "Quasar", "Zephyr", "Raster", "Umbra", "Coda", "Helix", "Sonor",
           "Vega", "Prism")
_MODELS = ("Pulse", "Wave", "Echo", "Drift", "Spark", "Nova", "Flux",
           "Ember", "Orbit", "Ridge", "Strata", "Veil")
_FILLER = ("analog voice circuit with warm detune and a resonant filter "
           "section").split() + (
           "classic pattern generator featuring velocity pads tape delay "
           "spring reverb and modular patch points for studio or stage "
           "performance with sturdy metal chassis wooden side panels and "
           "an unmistakable vintage character prized by collectors").split()
_TAG_POOL = ("analog", "digital", "vintage", "rare", "classic", "portable",
             "studio", "stage")
_USER_AGENTS = (
    "Mozilla/4.0 (compatible; MSIE 6.0; Windows NT 5.1)",
    "Mozilla/5.0 (X11; U; Linux i686) Gecko/20070310 Firefox/2.0",
    "Mozilla/5.0 (Macintosh; PPC Mac OS X) AppleWebKit/418 Safari/419",
    "Opera/9.25 (Windows NT 5.1; U; en)",
    "Lynx/2.8.5rel.1 libwww-FM/2.14",
)
_BASE_EPOCH = 1235865600  # 2009-03-01 00:00:00 UTC
_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")


@dataclass(frozen=True)
class Instrument:
    name: str
    category: str
    path: str
    tags: tuple[str, ...]


def _slugify(name: str) -> str:
    return "".join(c if c.isalnum() else "-" for c in name.lower()).strip("-")


def _clf_time(epoch: int) -> str:
    dt = datetime.fromtimestamp(epoch, tz=timezone.utc)
    return (f"{dt.day:02d}/{_MONTHS[dt.month - 1]}/{dt.year:04d}:"
            f"{dt.hour:02d}:{dt.minute:02d}:{dt.second:02d} +0000")


def _make_instruments(rng: random.Random, count: int) -> list[Instrument]:
    combos = [(maker, model) for maker in _MAKERS for model in _MODELS]
    rng.shuffle(combos)
    instruments = []
    for i in range(count):
        maker, model = combos[i % len(combos)]
        number = rng.randrange(3, 990)
        # Roughly half the names hyphenate model and number, exercising
        # both tokenizer forms in queries.
        if rng.random() < 0.5:
            name = f"{maker} {model}-{number}"
        else:
            name = f"{maker} {model} {number}"
        category = CATEGORIES[i % len(CATEGORIES)]
        path = f"/cat/{category}/{_slugify(name)}.html"
        tags = [category, maker.lower()]
        if rng.random() < 0.8:
            tags.append(model.lower())
        if rng.random() < 0.6:
            tags.append(rng.choice(_TAG_POOL))
        instruments.append(Instrument(name, category, path, tuple(tags)))
    return instruments


def _instrument_html(instrument: Instrument, related: list[Instrument],
                     rng: random.Random) -> str:
    body_words = " ".join(rng.choice(_FILLER) for _ in range(rng.randrange(25, 60)))
    related_links = "\n".join(
        f'<li><a href="{r.path}">{r.name}</a></li>' for r in related)
    return f"""<html><head><title>{instrument.name}</title></head>
<body>
<h1>{instrument.name}</h1>
<p>The {instrument.name} is a {instrument.category[:-1]} machine. {body_words}</p>
<ul>
{related_links}
</ul>
<p><a href="/cat/{instrument.category}/index.html">{instrument.category}</a>
 | <a href="/index.html">home</a></p>
</body></html>
"""


def _category_html(category: str, members: list[Instrument]) -> str:
    items = "\n".join(f'<li><a href="{m.path}">{m.name}</a></li>' for m in members)
    return f"""<html><head><title>{category} archive</title></head>
<body>
<h1>All {category}</h1>
<ul>
{items}
</ul>
<p><a href="/index.html">home</a></p>
</body></html>
"""


def _home_html(instruments: list[Instrument], rng: random.Random) -> str:
    featured = rng.sample(instruments, min(6, len(instruments)))
    category_links = "\n".join(
        f'<li><a href="/cat/{c}/index.html">{c}</a></li>' for c in CATEGORIES)
    featured_links = "\n".join(
        f'<li><a href="{m.path}">{m.name}</a></li>' for m in featured)
    return f"""<html><head><title>Instrument Archive</title></head>
<body>
<h1>Instrument Archive</h1>
<p>A browsable archive of electronic music machines.</p>
<ul>
{category_links}
</ul>
<h2>Featured</h2>
<ul>
{featured_links}
</ul>
<p><a href="/about.txt">about</a></p>
</body></html>
"""


def _simulate_log(instruments: list[Instrument], rng: random.Random,
                  sessions: int, skew: float) -> list[str]:
    """Seeded random-walk sessions over the site's link structure.

    A skew fraction of sessions head for the hot category from the home
    page, concentrating traffic on one branch.  Asset hits, error hits,
    and two garbage lines are mixed in so the parser's filtering is
    exercised by every generated log.
    """
    by_category: dict[str, list[Instrument]] = {c: [] for c in CATEGORIES}
    for instrument in instruments:
        by_category[instrument.category].append(instrument)
    ips = [f"10.{rng.randrange(0, 16)}.{rng.randrange(0, 256)}.{rng.randrange(1, 255)}"
           for _ in range(40)]

    lines: list[tuple[int, str]] = []
    clock = _BASE_EPOCH
    for s in range(sessions):
        clock += rng.randrange(20, 400)
        ip = rng.choice(ips)
        agent = rng.choice(_USER_AGENTS)
        t = clock
        if rng.random() < skew:
            category = HOT_CATEGORY
        else:
            category = rng.choice(CATEGORIES)
        trail = ["/index.html", f"/cat/{category}/index.html"]
        members = by_category[category]
        for _ in range(rng.randrange(1, 6)):
            if members:
                trail.append(rng.choice(members).path)
        referrer = "-"
        for hop, path in enumerate(trail):
            t += rng.randrange(5, 240)
            lines.append((t, f'{ip} - - [{_clf_time(t)}] "GET {path} HTTP/1.0" '
                             f'200 {rng.randrange(500, 9000)} "{referrer}" "{agent}"'))
            if rng.random() < 0.3:
                t += 1
                lines.append((t, f'{ip} - - [{_clf_time(t)}] "GET /static/logo.gif '
                                 f'HTTP/1.0" 200 1024 "{path}" "{agent}"'))
            referrer = path
        if rng.random() < 0.08:
            t += 2
            lines.append((t, f'{ip} - - [{_clf_time(t)}] "GET /missing-{s}.html '
                             f'HTTP/1.0" 404 209 "-" "{agent}"'))
    lines.sort(key=lambda pair: (pair[0], pair[1]))
    rendered = [line for _, line in lines]
    # Two deliberately broken lines; the ingest pipeline must skip them.
    rendered.insert(len(rendered) // 3, "garbage line that is not a log record")
    rendered.append('1.2.3.4 - - [not a timestamp] "GET / HTTP/1.0" 200 1 "-" "-"')
    return rendered


def _annotations(instruments: list[Instrument],
                 rng: random.Random) -> list[tuple[str, str, int]]:
    triples = []
    for instrument in instruments:
        if rng.random() < 0.55:
            for tag in instrument.tags:
                triples.append((tag, instrument.path, rng.randrange(1, 12)))
    triples.sort()
    return triples


def _judgments(instruments: list[Instrument], rng: random.Random,
               count: int = 11) -> list[tuple[str, str]]:
    """Benchmark queries at three difficulties.

    Full instrument names resolve almost uniquely; maker-plus-model drops
    the disambiguating number; bare model words match many pages, so the
    static and social signals decide the ordering there.
    """
    hot = [i for i in instruments if i.category == HOT_CATEGORY]
    cold = [i for i in instruments if i.category != HOT_CATEGORY]
    chosen = rng.sample(hot, min(4, len(hot))) + rng.sample(
        cold, min(count - min(4, len(hot)), len(cold)))
    chosen = chosen[:count]
    queries: list[tuple[str, str]] = []
    seen: set[str] = set()
    for pos, instrument in enumerate(chosen):
        words = instrument.name.split()
        if pos % 3 == 0:
            candidates = [instrument.name]
        elif pos % 3 == 1:
            candidates = [" ".join(words[:-1]) if len(words) > 2 else words[0],
                          instrument.name]
        else:
            candidates = [words[1].split("-")[0],
                          " ".join(words[:-1]) if len(words) > 2 else words[0],
                          instrument.name]
        query = next((c for c in candidates if c not in seen), instrument.name)
        seen.add(query)
        queries.append((query, instrument.path))
    return queries


DEFAULT_CONFIGS = [
    {"name": "tfidf", "weights": [1.0, 0.0, 0.0], "static": "lpr"},
    {"name": "tfidf_pr", "weights": [0.7, 0.0, 0.3], "static": "pr"},
    {"name": "tfidf_lpr", "weights": [0.7, 0.0, 0.3], "static": "lpr"},
    {"name": "fused_lpr", "weights": [0.6, 0.2, 0.2], "static": "lpr"},
]


def generate_corpus(out_dir: Path | str, seed: int = 42, pages: int = 200,
                    skew: float = 0.75, sessions: int = 500) -> dict[str, int]:
    """Write the full synthetic fixture tree under out_dir.

    Layout: corpus/ (HTML + text pages), logs/access.log plus a gzipped
    shard, annotations.tsv, judgments.tsv, configs.json.  Returns a small
    summary of what was generated.
    """
    out_dir = Path(out_dir)
    rng = random.Random(seed)
    n_instruments = max(pages - len(CATEGORIES) - 2, 1)
    instruments = _make_instruments(rng, n_instruments)

    corpus = out_dir / "corpus"
    for instrument in instruments:
        pool = [i for i in instruments if i is not instrument]
        related = rng.sample(pool, min(3, len(pool)))
        atomic_write_text(corpus / instrument.path.lstrip("/"),
                          _instrument_html(instrument, related, rng))
    for category in CATEGORIES:
        members = [i for i in instruments if i.category == category]
        atomic_write_text(corpus / "cat" / category / "index.html",
                          _category_html(category, members))
    atomic_write_text(corpus / "index.html", _home_html(instruments, rng))
    atomic_write_text(corpus / "about.txt",
                      "A synthetic archive of electronic instruments, "
                      "generated for search-engine testing.\n")

    log_lines = _simulate_log(instruments, rng, sessions, skew)
    split = int(len(log_lines) * 0.7)
    atomic_write_text(out_dir / "logs" / "access.log",
                      "\n".join(log_lines[:split]) + "\n")
    shard = "\n".join(log_lines[split:]) + "\n"
    buffer = gzip.compress(shard.encode("utf-8"), mtime=0)
    atomic_write_bytes(out_dir / "logs" / "access.log.2.gz", buffer)

    triples = _annotations(instruments, rng)
    atomic_write_text(out_dir / "annotations.tsv",
                      "\n".join(f"{t}\t{p}\t{c}" for t, p, c in triples) + "\n")

    judgments = _judgments(instruments, rng)
    atomic_write_text(out_dir / "judgments.tsv",
                      "\n".join(f"{q}\t{p}" for q, p in judgments) + "\n")

    atomic_write_text(out_dir / "configs.json",
                      json.dumps(DEFAULT_CONFIGS, indent=2, sort_keys=True) + "\n")

    return {
        "pages": n_instruments + len(CATEGORIES) + 2,
        "instruments": n_instruments,
        "log_lines": len(log_lines),
        "annotations": len(triples),
        "judgments": len(judgments),
    }
