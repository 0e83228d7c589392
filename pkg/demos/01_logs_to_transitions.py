"""From raw access-log lines to click transitions.

Walks through the first pipeline stage by hand: parse Combined-format
lines, group them into per-visitor sessions, and count page-to-page
transitions.  Run with: python demos/01_logs_to_transitions.py
"""

from siterank import extract_transitions, parse_clf_line, sessionize

RAW_LOG = """\
9.8.7.6 - - [01/Mar/2009:10:00:00 +0000] "GET /index.html HTTP/1.0" 200 5120 "-" "demo-browser/1.0"
9.8.7.6 - - [01/Mar/2009:10:00:21 +0000] "GET /cat/drums/index.html HTTP/1.0" 200 2326 "/index.html" "demo-browser/1.0"
9.8.7.6 - - [01/Mar/2009:10:00:22 +0000] "GET /static/logo.gif HTTP/1.0" 200 1024 "/cat/drums/index.html" "demo-browser/1.0"
9.8.7.6 - - [01/Mar/2009:10:01:02 +0000] "GET /cat/drums/kit-99.html HTTP/1.0" 200 4096 "/cat/drums/index.html" "demo-browser/1.0"
9.8.7.6 - - [01/Mar/2009:10:02:30 +0000] "GET /cat/drums/pad-12.html HTTP/1.0" 200 3000 "/cat/drums/index.html" "demo-browser/1.0"
9.8.7.6 - - [01/Mar/2009:14:00:00 +0000] "GET /index.html HTTP/1.0" 200 5120 "-" "demo-browser/1.0"
5.5.5.5 - - [01/Mar/2009:10:00:40 +0000] "GET /index.html HTTP/1.0" 200 5120 "-" "other-browser/2.0"
5.5.5.5 - - [01/Mar/2009:10:01:10 +0000] "GET /about.txt HTTP/1.0" 200 640 "/index.html" "other-browser/2.0"
not a log line at all
"""

records = []
for line in RAW_LOG.splitlines():
    try:
        records.append(parse_clf_line(line))
    except Exception as exc:
        print(f"skipped: {exc}")

print(f"\nparsed {len(records)} records")
for r in records[:3]:
    print(f"  {r.client_key}  {r.timestamp}  {r.method} {r.path} -> {r.status}")

# The gif request is filtered out as an asset; the four-hour gap splits
# the first visitor into two sessions.
sessions = sessionize(records, timeout_s=1800)
print(f"\n{len(sessions)} sessions:")
for s in sessions:
    print(f"  {s.client_key}: {[p for p, _ in s.hits]}")

counts = extract_transitions(sessions)
print("\ntransition counts:")
for (src, dst), n in sorted(counts.counts.items()):
    print(f"  {src} -> {dst}: {n}")
print("\npage hits:", dict(sorted(counts.page_hits.items())))

# The third hit's referrer points back at the category index, so with
# referrer inference on, the pad-12 visit is credited to the index page
# instead of the kit-99 page the visitor happened to be on.
with_referrer = extract_transitions(sessions, use_referrer=True)
print("\nwith referrer inference:")
for (src, dst), n in sorted(with_referrer.counts.items()):
    print(f"  {src} -> {dst}: {n}")
