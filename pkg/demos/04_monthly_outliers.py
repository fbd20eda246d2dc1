"""When did it spike? Monthly aggregation with a sigma threshold.

Events are bucketed by calendar month (quiet months stay in the series with
count zero) and months above mean + 1.96 sample standard deviations are
flagged. A burst of extra incidents is injected into two months of the
synthetic corpus so the flags have something to find.
"""

import datetime as dt

from eventgeo import EventRecord, GeoPoint, flag_outliers, monthly_counts
from _synthetic import make_events

events = make_events()

# Inject a two-month surge (think: one triggering news event).
surge = [
    EventRecord(date=dt.date(2020, 5, 25 + i % 6), point=GeoPoint(42.0, -118.0),
                event_type="Riots", sub_event_type="Violent demonstration",
                notes="surge incident")
    for i in range(120)
] + [
    EventRecord(date=dt.date(2020, 6, 1 + i % 28), point=GeoPoint(42.0, -118.0),
                event_type="Riots", sub_event_type="Violent demonstration",
                notes="surge incident")
    for i in range(90)
]

series = monthly_counts(events + surge)
flagged = set(flag_outliers(series, factor=1.96))

counts = [b.count for b in series]
mean = sum(counts) / len(counts)
print(f"{len(series)} months, mean {mean:.1f} incidents/month")
print("flagged months:", sorted(flagged), "\n")

peak = max(counts)
for b in series:
    bar = "#" * round(40 * b.count / peak)
    mark = "  <-- outlier" if (b.year, b.month) in flagged else ""
    print(f"{b.year}-{b.month:02d} {b.count:4d} {bar}{mark}")
