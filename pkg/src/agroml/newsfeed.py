"""Agriculture news ingestion: RSS 2.0 / Atom feeds with keyword filtering
and a serve-stale cache.

Feed refresh happens at most once at a time; readers never wait on a
refresh in progress, they just see the previous snapshot. Network and
parse failures are recorded on the cache and never propagate to callers.
"""

from __future__ import annotations

import threading
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from urllib.parse import urlparse

import requests

from .errors import AgromlError

USER_AGENT = "agroml-newsfeed/0.1 (+agriculture decision service)"
DEFAULT_KEYWORDS = ("agriculture", "farming", "crop", "farmer")
DEFAULT_TTL_SECONDS = 900.0
_ATOM = "{http://www.w3.org/2005/Atom}"


class FetchFailed(AgromlError):
    code = "fetch_failed"


class ParseFailed(AgromlError):
    code = "parse_failed"


@dataclass(frozen=True)
class Article:
    title: str
    link: str
    source: str
    published: datetime | None = None
    summary: str | None = None

    def __post_init__(self):
        if not self.title.strip():
            raise ValueError("article title must be non-empty")
        parsed = urlparse(self.link)
        if not (parsed.scheme and parsed.netloc):
            raise ValueError(f"article link must be an absolute URL, got {self.link!r}")


def _text(node) -> str:
    return "".join(node.itertext()).strip() if node is not None else ""


def _parse_rss_date(raw: str) -> datetime | None:
    if not raw:
        return None
    try:
        stamp = parsedate_to_datetime(raw)
    except (TypeError, ValueError):
        return None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def _parse_iso_date(raw: str) -> datetime | None:
    if not raw:
        return None
    try:
        stamp = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        return None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def _parse_feed_document(data: bytes) -> list[Article]:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise ParseFailed(f"malformed feed XML: {exc}") from exc

    articles = []
    if root.tag.lower() in ("rss", "rdf") or root.find("channel") is not None:
        channel = root.find("channel")
        source = _text(channel.find("title")) if channel is not None else ""
        items = channel.findall("item") if channel is not None else []
        for item in items:
            title = _text(item.find("title"))
            link = _text(item.find("link"))
            try:
                articles.append(Article(
                    title=title, link=link, source=source or "rss",
                    published=_parse_rss_date(_text(item.find("pubDate"))),
                    summary=_text(item.find("description")) or None))
            except ValueError:
                continue  # missing title/link: skip the item, keep the feed
    elif root.tag == f"{_ATOM}feed":
        source = _text(root.find(f"{_ATOM}title"))
        for entry in root.findall(f"{_ATOM}entry"):
            title = _text(entry.find(f"{_ATOM}title"))
            link = ""
            for link_node in entry.findall(f"{_ATOM}link"):
                if link_node.get("rel") in (None, "alternate"):
                    link = link_node.get("href", "")
                    break
            published = _parse_iso_date(_text(entry.find(f"{_ATOM}published"))
                                        or _text(entry.find(f"{_ATOM}updated")))
            try:
                articles.append(Article(
                    title=title, link=link, source=source or "atom",
                    published=published,
                    summary=_text(entry.find(f"{_ATOM}summary")) or None))
            except ValueError:
                continue
    else:
        raise ParseFailed(f"unrecognized feed root element {root.tag!r}")
    return articles


def _matches(article: Article, keywords) -> bool:
    if not keywords:
        return True
    haystack = article.title.lower()
    if article.summary:
        haystack += " " + article.summary.lower()
    return any(k in haystack for k in keywords)


def _default_fetcher(url: str) -> bytes:
    try:
        response = requests.get(url, headers={"User-Agent": USER_AGENT}, timeout=20)
        response.raise_for_status()
        return response.content
    except requests.RequestException as exc:
        raise FetchFailed(f"cannot fetch {url}: {exc}") from exc


def fetch_feed(url: str, keyword_filter=DEFAULT_KEYWORDS, fetcher=None) -> list[Article]:
    """Fetch and parse one feed, keeping articles whose title or summary
    mentions at least one keyword (case-insensitive); an empty keyword
    list keeps everything."""
    fetcher = fetcher or _default_fetcher
    keywords = [k.lower() for k in keyword_filter]
    data = fetcher(url)
    return [a for a in _parse_feed_document(data) if _matches(a, keywords)]


@dataclass
class FeedCache:
    feed_urls: tuple[str, ...] = ()
    keywords: tuple[str, ...] = DEFAULT_KEYWORDS
    ttl_seconds: float = DEFAULT_TTL_SECONDS
    fetcher: object = None  # callable url -> bytes; None -> HTTP GET

    articles: tuple[Article, ...] = ()
    last_refresh: float | None = None
    last_error: str | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def is_stale(self, now: float) -> bool:
        return self.last_refresh is None or (now - self.last_refresh) > self.ttl_seconds

    def _refresh(self, now: float) -> None:
        merged: dict[str, Article] = {a.link: a for a in self.articles}
        any_success = False
        error = None
        for url in self.feed_urls:
            try:
                for article in fetch_feed(url, self.keywords, self.fetcher):
                    merged[article.link] = article  # dedup by link, newest data wins
                any_success = True
            except AgromlError as exc:
                error = f"{url}: {exc}"
        ordered = sorted(
            merged.values(),
            key=lambda a: (a.published is None,
                           -a.published.timestamp() if a.published else 0.0))
        self.articles = tuple(ordered)
        self.last_error = error
        if any_success:
            self.last_refresh = now


def get_articles(cache: FeedCache, ttl: float | None = None,
                 now: float | None = None) -> tuple[list[Article], bool]:
    """Cached articles plus a staleness flag; refreshes when past the TTL.

    Never raises on feed failure: stale data is served and the error is
    recorded on the cache. Readers arriving during a refresh get the
    pre-refresh snapshot immediately.
    """
    import time as _time

    if ttl is not None:
        cache.ttl_seconds = ttl
    if now is None:
        now = _time.time()
    if cache.is_stale(now) and cache.feed_urls:
        if cache._lock.acquire(blocking=False):
            try:
                cache._refresh(now)
            finally:
                cache._lock.release()
    return list(cache.articles), cache.is_stale(now)
