"""What do the news notes say? Ranked term frequencies for word clouds.

Notes are tokenized with deliberately boring rules -- lowercase, split on
non-alphanumerics, drop one-character and purely numeric tokens -- then
stopwords are removed and the remaining terms counted. The (term, count)
ranking is exactly what a word-cloud renderer consumes.
"""

from eventgeo import count_by_location, load_stopwords, term_frequencies, tokenize
from _synthetic import make_events

print("token rules on a sample sentence:")
sample = "On May 25, 2020 a masked demonstrator's tear-gas canister misfired!"
print(f"  {sample!r}")
print(f"  -> {tokenize(sample)}\n")

events = make_events()
stop = load_stopwords()
print(f"shipped stopword list: {len(stop)} words\n")

print("top terms across all notes:")
for term, count in term_frequencies(events, stop)[:10]:
    print(f"  {term:<14} {count:5d}")

# Zoom into the busiest location, the per-figure view.
locs = count_by_location(events)
(hot_lat, hot_lon), hot_count = max(locs.counts.items(), key=lambda kv: kv[1])
subset = [
    ev for ev in events
    if (round(ev.point.lat, 4), round(ev.point.lon, 4)) == (hot_lat, hot_lon)
]
print(f"\ntop terms at the busiest location ({hot_lat}, {hot_lon}; {hot_count} events):")
for term, count in term_frequencies(subset, stop)[:8]:
    print(f"  {term:<14} {count:5d}")
