"""Show the news ingestion path without touching the network.

Feeds a canned RSS document through the parser/filter and then through
the serve-stale cache, including a simulated outage.
"""

from agroml.newsfeed import FeedCache, FetchFailed, fetch_feed, get_articles

RSS = b"""<?xml version="1.0"?>
<rss version="2.0"><channel>
  <title>AgriWire</title>
  <item><title>Monsoon lifts crop outlook</title>
        <link>https://news.example/crop-outlook</link>
        <pubDate>Tue, 10 Jun 2025 08:00:00 GMT</pubDate>
        <description>Rainfall boosts the kharif crop season.</description></item>
  <item><title>City marathon results</title>
        <link>https://news.example/marathon</link>
        <description>Runners brave the heat.</description></item>
  <item><title>Subsidy news for farmers</title>
        <link>https://news.example/subsidy</link>
        <description>New support prices announced for farmers.</description></item>
</channel></rss>"""

print("direct fetch with keyword filter ['crop', 'farmer']:")
for article in fetch_feed("https://news.example/rss", ["crop", "farmer"], lambda url: RSS):
    stamp = article.published.date() if article.published else "undated"
    print(f"  [{stamp}] {article.title} -> {article.link}")

print()
print("cache behavior:")
state = {"up": True}


def flaky(url):
    if not state["up"]:
        raise FetchFailed("upstream down")
    return RSS


cache = FeedCache(feed_urls=("https://news.example/rss",),
                  keywords=("crop", "farmer"), ttl_seconds=900, fetcher=flaky)
articles, stale = get_articles(cache, now=0.0)
print(f"  first read: {len(articles)} articles, stale={stale}")
articles, stale = get_articles(cache, now=100.0)
print(f"  within TTL: served from cache, stale={stale}")
state["up"] = False
articles, stale = get_articles(cache, now=5000.0)
print(f"  after outage: still {len(articles)} articles, stale={stale}, "
      f"last_error={cache.last_error!r}")
