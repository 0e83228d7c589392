"""Web-server access-log parsing, sessionization, and click transitions.

Understands Common Log Format and the Combined variant:

    1.2.3.4 - - [10/Oct/2000:13:55:36 -0700] "GET /drums/606 HTTP/1.0" 200 2326
    1.2.3.4 - - [...] "GET / HTTP/1.0" 200 512 "http://example.org/" "Mozilla/4.0"

Records are grouped into per-visitor sessions with an inactivity timeout,
and consecutive page views inside a session become directed transition
counts that later feed the traffic graph.
"""

from __future__ import annotations

import gzip
import hashlib
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping
from urllib.parse import unquote, urlsplit

from .errors import SiterankError
from ._util import atomic_write_text, content_checksum


class MalformedLine(SiterankError):
    """Line does not match CLF/Combined field layout."""


class BadTimestamp(SiterankError):
    """Bracketed date field is not a valid CLF timestamp."""


class BadStatus(SiterankError):
    """Status field is not a three-digit integer."""


# Session and filtering defaults.
DEFAULT_SESSION_TIMEOUT = 1800  # seconds of inactivity that end a visit
PAGE_VIEW_STATUSES = frozenset({200, 304})
DEFAULT_ASSET_EXTENSIONS = frozenset({
    "bmp", "css", "eot", "gif", "ico", "jpeg", "jpg", "js", "mp3", "mp4",
    "otf", "pdf", "png", "svg", "swf", "ttf", "wav", "webp", "woff", "woff2",
    "zip",
})

_LINE_RE = re.compile(
    r'^(?P<host>\S+) (?P<ident>\S+) (?P<user>\S+) '
    r'\[(?P<time>[^\]]*)\] '
    r'"(?P<request>[^"]*)" '
    r'(?P<status>\S+) (?P<size>\S+)'
    r'(?: "(?P<referrer>[^"]*)" "(?P<agent>[^"]*)")?'
    r'\s*$'
)

_MONTHS = {
    "Jan": 1, "Feb": 2, "Mar": 3, "Apr": 4, "May": 5, "Jun": 6,
    "Jul": 7, "Aug": 8, "Sep": 9, "Oct": 10, "Nov": 11, "Dec": 12,
}
_MONTH_NAMES = {v: k for k, v in _MONTHS.items()}

_TIME_RE = re.compile(
    r"^(\d{2})/([A-Za-z]{3})/(\d{4}):(\d{2}):(\d{2}):(\d{2}) ([+-])(\d{2})(\d{2})$"
)


def normalize_path(raw: str, keep_query: bool = False) -> str:
    """Normalize a request target or referrer URL to a canonical site path.

    Full URLs are reduced to their path, percent-escapes are decoded, the
    fragment is dropped, the query string is dropped unless keep_query is
    set, and a trailing slash is stripped everywhere except the root.
    """
    parts = urlsplit(raw.strip())
    path = unquote(parts.path)
    if not path.startswith("/"):
        path = "/" + path
    if len(path) > 1 and path.endswith("/"):
        path = path.rstrip("/")
        if not path:
            path = "/"
    if keep_query and parts.query:
        path = f"{path}?{parts.query}"
    return path


@dataclass(frozen=True, slots=True)
class LogRecord:
    """One parsed access-log hit.

    host and user_agent are retained so a record can be re-serialized; the
    visitor identity used for sessionization is the derived client_key.
    """

    host: str
    timestamp: int  # seconds since epoch
    method: str
    path: str
    status: int
    referrer: str | None = None
    user_agent: str = ""

    @property
    def client_key(self) -> str:
        digest = hashlib.md5(self.user_agent.encode("utf-8")).hexdigest()[:8]
        return f"{self.host}|{digest}"


def _parse_clf_time(field: str) -> int:
    m = _TIME_RE.match(field)
    if m is None:
        raise BadTimestamp(f"bad timestamp field: {field!r}")
    day, mon, year, hh, mm, ss, sign, oh, om = m.groups()
    month = _MONTHS.get(mon.title())
    if month is None:
        raise BadTimestamp(f"bad month in timestamp: {field!r}")
    try:
        moment = datetime(int(year), month, int(day), int(hh), int(mm), int(ss),
                          tzinfo=timezone.utc)
    except ValueError as exc:
        raise BadTimestamp(f"bad timestamp field: {field!r}") from exc
    offset = (int(oh) * 3600 + int(om) * 60) * (1 if sign == "+" else -1)
    return int(moment.timestamp()) - offset


def _format_clf_time(epoch: int) -> str:
    dt = datetime.fromtimestamp(epoch, tz=timezone.utc)
    return (f"{dt.day:02d}/{_MONTH_NAMES[dt.month]}/{dt.year:04d}:"
            f"{dt.hour:02d}:{dt.minute:02d}:{dt.second:02d} +0000")


def parse_clf_line(line: str, keep_query: bool = False) -> LogRecord:
    """Parse one CLF or Combined log line into a LogRecord.

    Raises MalformedLine when the field layout does not match, BadTimestamp
    for an unparseable date, and BadStatus for a non-numeric status.  Any
    syntactically valid status is accepted here; whether a record counts as
    a page view is a separate question (see is_page_view).
    """
    m = _LINE_RE.match(line)
    if m is None:
        raise MalformedLine(f"unparseable log line: {line[:80]!r}")
    request = m.group("request").split()
    if len(request) < 2:
        raise MalformedLine(f"bad request field: {m.group('request')!r}")
    method, target = request[0], request[1]
    try:
        status = int(m.group("status"))
    except ValueError:
        raise BadStatus(f"bad status field: {m.group('status')!r}") from None
    if not 100 <= status <= 599:
        raise BadStatus(f"status out of range: {status}")
    timestamp = _parse_clf_time(m.group("time"))
    referrer = m.group("referrer")
    if referrer in (None, "", "-"):
        referrer = None
    else:
        referrer = normalize_path(referrer)
    agent = m.group("agent") or ""
    if agent == "-":
        agent = ""
    return LogRecord(
        host=m.group("host"),
        timestamp=timestamp,
        method=method,
        path=normalize_path(target, keep_query=keep_query),
        status=status,
        referrer=referrer,
        user_agent=agent,
    )


def format_clf_line(record: LogRecord) -> str:
    """Serialize a record back to a Combined-format line.

    Fields not retained on LogRecord (ident, user, size) come out as "-";
    re-parsing the result yields an identical record.
    """
    referrer = record.referrer if record.referrer is not None else "-"
    agent = record.user_agent if record.user_agent else "-"
    return (f'{record.host} - - [{_format_clf_time(record.timestamp)}] '
            f'"{record.method} {record.path} HTTP/1.0" {record.status} - '
            f'"{referrer}" "{agent}"')


def _path_extension(path: str) -> str:
    leaf = path.rsplit("/", 1)[-1]
    if "." not in leaf:
        return ""
    return leaf.rsplit(".", 1)[-1].lower()


def is_page_view(record: LogRecord,
                 asset_extensions: frozenset[str] = DEFAULT_ASSET_EXTENSIONS) -> bool:
    """True for GET requests answered 200/304 whose path is not a static asset."""
    if record.method != "GET":
        return False
    if record.status not in PAGE_VIEW_STATUSES:
        return False
    return _path_extension(record.path) not in asset_extensions


@dataclass(frozen=True)
class Session:
    """An ordered sequence of page views by one visitor within the timeout."""

    client_key: str
    records: tuple[LogRecord, ...]

    @property
    def hits(self) -> tuple[tuple[str, int], ...]:
        return tuple((r.path, r.timestamp) for r in self.records)

    def transitions(self, use_referrer: bool = False) -> list[tuple[str, str]]:
        """Raw consecutive-hit pairs, one per adjacent record pair.

        With use_referrer on, a hit whose referrer differs from the previous
        hit's path is attached to its referrer instead (a back-button visit
        is not a navigation from the page the visitor backed out of).
        Self-loops are kept here; aggregation drops them.
        """
        pairs: list[tuple[str, str]] = []
        for prev, cur in zip(self.records, self.records[1:]):
            src = prev.path
            if use_referrer and cur.referrer is not None and cur.referrer != prev.path:
                src = cur.referrer
            pairs.append((src, cur.path))
        return pairs


def sessionize(records: Iterable[LogRecord],
               timeout_s: float = DEFAULT_SESSION_TIMEOUT,
               asset_extensions: frozenset[str] = DEFAULT_ASSET_EXTENSIONS,
               ) -> list[Session]:
    """Group page-view records into per-visitor sessions.

    Asset requests and non-page-view records are discarded, the remainder
    is grouped by client_key and time-ordered, and a session splits
    wherever the gap between consecutive hits exceeds timeout_s.
    """
    if timeout_s <= 0:
        raise ValueError(f"timeout_s must be positive, got {timeout_s}")
    by_client: dict[str, list[LogRecord]] = defaultdict(list)
    for record in records:
        if is_page_view(record, asset_extensions):
            by_client[record.client_key].append(record)

    sessions: list[Session] = []
    for client_key in sorted(by_client):
        hits = sorted(by_client[client_key], key=lambda r: r.timestamp)
        start = 0
        for i in range(1, len(hits)):
            if hits[i].timestamp - hits[i - 1].timestamp > timeout_s:
                sessions.append(Session(client_key, tuple(hits[start:i])))
                start = i
        sessions.append(Session(client_key, tuple(hits[start:])))
    sessions.sort(key=lambda s: (s.client_key, s.records[0].timestamp))
    return sessions


@dataclass
class TransitionCounts:
    """Aggregated click transitions plus per-page visit totals."""

    counts: Counter[tuple[str, str]]
    page_hits: Counter[str]

    def merge(self, other: "TransitionCounts") -> "TransitionCounts":
        """Combine counts from independently processed log shards."""
        return TransitionCounts(self.counts + other.counts,
                                self.page_hits + other.page_hits)

    def __add__(self, other: "TransitionCounts") -> "TransitionCounts":
        return self.merge(other)


def extract_transitions(sessions: Iterable[Session],
                        use_referrer: bool = False) -> TransitionCounts:
    """Count page-to-page transitions across sessions, dropping self-loops.

    A reload is not a navigation choice, so (p, p) pairs are discarded
    rather than inflating the page's own transition probability.
    """
    counts: Counter[tuple[str, str]] = Counter()
    page_hits: Counter[str] = Counter()
    for session in sessions:
        for record in session.records:
            page_hits[record.path] += 1
        for src, dst in session.transitions(use_referrer=use_referrer):
            if src != dst:
                counts[(src, dst)] += 1
    return TransitionCounts(counts, page_hits)


def write_transitions(tc: TransitionCounts, path: Path | str,
                      meta: Mapping[str, object] | None = None) -> None:
    """Persist transition counts as TSV: from/to/count rows, then page hits.

    A leading #meta line records the producing config plus a checksum of
    the body, so corrupt or hand-edited artifacts fail loudly on load.
    """
    lines = [f"{src}\t{dst}\t{count}"
             for (src, dst), count in sorted(tc.counts.items())]
    lines.append("#page_hits")
    lines.extend(f"{page}\t{hits}" for page, hits in sorted(tc.page_hits.items()))
    body = "\n".join(lines) + "\n"
    pairs = [f"{key}={value}" for key, value in (meta or {}).items()]
    header = "\t".join(["#meta"] + pairs + [f"checksum={content_checksum(body)}"])
    atomic_write_text(path, header + "\n" + body)


def read_transitions(path: Path | str) -> TransitionCounts:
    from .errors import ArtifactError

    counts: Counter[tuple[str, str]] = Counter()
    page_hits: Counter[str] = Counter()
    section = "transitions"
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body_start = 0
    if lines and lines[0].startswith("#meta"):
        body_start = 1
        fields = dict(piece.split("=", 1) for piece in lines[0].split("\t")[1:])
        body = "\n".join(lines[1:]) + "\n"
        if fields.get("checksum") not in (None, content_checksum(body)):
            raise ArtifactError(f"{path}: checksum mismatch, artifact corrupt")
    for line in lines[body_start:]:
        if not line:
            continue
        if line == "#page_hits":
            section = "page_hits"
            continue
        fields = line.split("\t")
        if section == "transitions":
            src, dst, count = fields
            counts[(src, dst)] += int(count)
        else:
            page, hits = fields
            page_hits[page] += int(hits)
    return TransitionCounts(counts, page_hits)


def iter_log_records(path: Path | str,
                     keep_query: bool = False,
                     on_error: Callable[[str, SiterankError], None] | None = None,
                     ) -> Iterator[LogRecord]:
    """Yield records from a log file, transparently reading gzip by suffix.

    Lines that fail to parse are skipped; on_error, when given, receives
    each offending line and its error.
    """
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8", errors="replace") as fh:  # type: ignore[operator]
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            try:
                yield parse_clf_line(line, keep_query=keep_query)
            except SiterankError as exc:
                if on_error is not None:
                    on_error(line, exc)
