"""HTML/text extraction, TF-IDF inverted index, and lexical query scoring."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable, Mapping
from urllib.parse import urljoin, urlsplit

from .errors import SiterankError
from .logparse import normalize_path
from ._util import atomic_write_text

INDEX_FORMAT = "siterank-index/1"

# Product-name queries break under stemming, so tokens are left unstemmed
# and the stopword list stays tiny.
DEFAULT_STOPWORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "by", "for", "from",
    "in", "is", "it", "of", "on", "or", "the", "to", "with",
})

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:-[a-z0-9]+)*")


class DuplicatePageId(SiterankError):
    """Two documents share a page id."""


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric boundaries.

    Hyphenated runs are emitted both split and joined ("Arp-Sequencer"
    becomes arp, sequencer, arpsequencer) so either query form matches.
    """
    tokens: list[str] = []
    for match in _TOKEN_RE.findall(text.lower()):
        if "-" in match:
            parts = match.split("-")
            tokens.extend(parts)
            tokens.append("".join(parts))
        else:
            tokens.append(match)
    return tokens


def normalize_term(term: str) -> str:
    """Collapse a single term/tag to its joined lowercase alphanumeric form."""
    return re.sub(r"[^a-z0-9]+", "", term.lower())


@dataclass(frozen=True)
class Document:
    page_id: str
    title: str
    tokens: tuple[str, ...]
    out_links: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.tokens)


class _TextExtractor(HTMLParser):
    """Collects visible text, the title, and href targets; drops script/style."""

    _SKIP_TAGS = frozenset({"script", "style"})

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        self.title_chunks: list[str] = []
        self.hrefs: list[str] = []
        self._skip_depth = 0
        self._in_title = False

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP_TAGS:
            self._skip_depth += 1
        elif tag == "title":
            self._in_title = True
        elif tag in ("a", "area"):
            for name, value in attrs:
                if name == "href" and value:
                    self.hrefs.append(value)

    def handle_endtag(self, tag):
        if tag in self._SKIP_TAGS and self._skip_depth:
            self._skip_depth -= 1
        elif tag == "title":
            self._in_title = False

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self.title_chunks.append(data)
        self.chunks.append(data)


def _resolve_link(base_page: str, href: str) -> str | None:
    """Resolve an href against the containing page; None for non-local targets."""
    href = href.strip()
    if not href or href.startswith("#"):
        return None
    parts = urlsplit(href)
    if parts.scheme or parts.netloc:
        return None
    if not parts.path:
        return None
    return normalize_path(urljoin(base_page, parts.path))


def extract_text(html: str, path: str) -> Document:
    """Strip markup from an HTML or plain-text page and tokenize it.

    Malformed HTML degrades to best-effort text.  Local href targets are
    resolved against the page path and returned on the document for the
    structural link graph.
    """
    extractor = _TextExtractor()
    extractor.feed(html)
    extractor.close()
    title = " ".join(" ".join(extractor.title_chunks).split())
    tokens = tokenize(" ".join(extractor.chunks))
    links: list[str] = []
    seen: set[str] = set()
    for href in extractor.hrefs:
        resolved = _resolve_link(path, href)
        if resolved is not None and resolved != path and resolved not in seen:
            seen.add(resolved)
            links.append(resolved)
    return Document(page_id=path, title=title, tokens=tuple(tokens),
                    out_links=tuple(links))


@dataclass(frozen=True)
class InvertedIndex:
    """Term postings with raw term frequencies, plus per-document metadata."""

    postings: dict[str, tuple[tuple[str, int], ...]]
    doc_count: int
    doc_lengths: dict[str, int]
    titles: dict[str, str] = field(default_factory=dict)
    stopwords: frozenset[str] = DEFAULT_STOPWORDS

    def doc_freq(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def __contains__(self, page_id: str) -> bool:
        return page_id in self.doc_lengths


def build_index(docs: Iterable[Document],
                stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> InvertedIndex:
    """Build the inverted index over a document collection.

    Document length keeps the full token count (stopwords included) so the
    length normalization does not depend on the stopword list.
    """
    doc_lengths: dict[str, int] = {}
    titles: dict[str, str] = {}
    term_counts: dict[str, dict[str, int]] = {}
    for doc in docs:
        if doc.page_id in doc_lengths:
            raise DuplicatePageId(f"duplicate page id: {doc.page_id}")
        doc_lengths[doc.page_id] = doc.length
        titles[doc.page_id] = doc.title
        for token in doc.tokens:
            if token in stopwords:
                continue
            term_counts.setdefault(token, {}).setdefault(doc.page_id, 0)
            term_counts[token][doc.page_id] += 1
    postings = {
        term: tuple(sorted(pages.items()))
        for term, pages in sorted(term_counts.items())
    }
    return InvertedIndex(postings=postings, doc_count=len(doc_lengths),
                         doc_lengths=doc_lengths, titles=titles,
                         stopwords=frozenset(stopwords))


def tfidf_scores(query_terms: Iterable[str], idx: InvertedIndex) -> dict[str, float]:
    """Score documents against query terms: sum of tf * ln(N/df) / doc length.

    Terms absent from the index contribute nothing; only documents that
    contain at least one query term appear in the result (possibly with a
    zero score when every matching term occurs in all documents).
    """
    scores: dict[str, float] = {}
    n = idx.doc_count
    for term in query_terms:
        plist = idx.postings.get(term)
        if not plist:
            continue
        idf = math.log(n / len(plist))
        for page, tf in plist:
            scores[page] = scores.get(page, 0.0) + tf * idf / idx.doc_lengths[page]
    return scores


CORPUS_SUFFIXES = (".html", ".htm", ".txt")


def scan_corpus(root: Path | str,
                stopwords: frozenset[str] = DEFAULT_STOPWORDS,
                ) -> tuple[list[Document], dict[str, list[str]]]:
    """Walk a corpus directory; return documents and the structural link map.

    Page ids are root-relative paths with a leading slash.  Every scanned
    page appears as a key in the link map even when it has no out-links,
    so downstream graphs see the full page universe.  One pass produces
    both the index input and the link list.
    """
    root = Path(root)
    docs: list[Document] = []
    links: dict[str, list[str]] = {}
    files = sorted(p for p in root.rglob("*")
                   if p.is_file() and p.suffix.lower() in CORPUS_SUFFIXES)
    for file in files:
        page_id = "/" + file.relative_to(root).as_posix()
        doc = extract_text(file.read_text(encoding="utf-8", errors="replace"), page_id)
        docs.append(doc)
        links[page_id] = sorted(doc.out_links)
    return docs, links


def write_links(links: Mapping[str, list[str]], path: Path | str) -> None:
    """Persist the structural link map as TSV; a source-only row declares
    a page with no out-links."""
    lines = []
    for src in sorted(links):
        targets = links[src]
        if targets:
            lines.extend(f"{src}\t{dst}" for dst in sorted(targets))
        else:
            lines.append(src)
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_links(path: Path | str) -> dict[str, list[str]]:
    links: dict[str, list[str]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        links.setdefault(fields[0], [])
        if len(fields) > 1 and fields[1]:
            links[fields[0]].append(fields[1])
    return links


def _postings_checksum(payload: dict) -> str:
    from ._util import content_checksum

    return content_checksum(json.dumps(
        [payload["doc_lengths"], payload["postings"]],
        sort_keys=True, separators=(",", ":")))


def write_index(idx: InvertedIndex, path: Path | str) -> None:
    """Persist the index as versioned JSON; round-trips bit-exactly."""
    payload = {
        "format": INDEX_FORMAT,
        "doc_count": idx.doc_count,
        "doc_lengths": idx.doc_lengths,
        "titles": idx.titles,
        "stopwords": sorted(idx.stopwords),
        "postings": {term: [[page, tf] for page, tf in plist]
                     for term, plist in idx.postings.items()},
    }
    payload["checksum"] = _postings_checksum(payload)
    atomic_write_text(path, json.dumps(payload, sort_keys=True,
                                       separators=(",", ":")) + "\n")


def read_index(path: Path | str) -> InvertedIndex:
    from .errors import ArtifactError

    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != INDEX_FORMAT:
        raise ArtifactError(f"{path}: expected {INDEX_FORMAT}, "
                            f"got {payload.get('format')!r}")
    if payload.get("checksum") != _postings_checksum(payload):
        raise ArtifactError(f"{path}: checksum mismatch, artifact corrupt")
    postings = {term: tuple((page, int(tf)) for page, tf in plist)
                for term, plist in payload["postings"].items()}
    return InvertedIndex(postings=postings,
                         doc_count=int(payload["doc_count"]),
                         doc_lengths={k: int(v) for k, v in payload["doc_lengths"].items()},
                         titles=dict(payload["titles"]),
                         stopwords=frozenset(payload["stopwords"]))
