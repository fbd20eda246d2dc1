"""Parsing of ACLED-schema CSV exports into validated event records.

The parser is schema-mapped rather than hard-coded: a ColumnMap names the CSV
header for each logical field, with defaults matching the ACLED curated-file
layout. Parsing is lenient by default — malformed rows are collected as
RowError values instead of aborting, because real exports contain stray rows.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, fields
from typing import IO, Iterable, Optional

from .errors import SchemaError
from .geo import GeoPoint

_EPOCH_ORDINAL = dt.date(1970, 1, 1).toordinal()

_DATE_FORMATS = (
    "%Y-%m-%d",
    "%d %B %Y",
    "%d-%B-%Y",
    "%d %b %Y",
    "%d-%b-%Y",
    "%m/%d/%Y",
)


@dataclass(frozen=True)
class EventRecord:
    """One dated, located incident."""

    date: dt.date
    point: GeoPoint
    event_type: str = ""
    sub_event_type: str = ""
    fatalities: int = 0
    notes: str = ""
    source: str = ""
    county_hint: Optional[str] = None  # ACLED admin2
    state: Optional[str] = None  # ACLED admin1

    def __post_init__(self):
        if self.fatalities < 0:
            raise ValueError(f"fatalities must be >= 0, got {self.fatalities}")


@dataclass(frozen=True)
class ColumnMap:
    """Logical field -> CSV header mapping. date/latitude/longitude/fatalities are mandatory."""

    date: str = "event_date"
    latitude: str = "latitude"
    longitude: str = "longitude"
    fatalities: str = "fatalities"
    event_type: Optional[str] = "event_type"
    sub_event_type: Optional[str] = "sub_event_type"
    notes: Optional[str] = "notes"
    source: Optional[str] = "source"
    admin2: Optional[str] = "admin2"
    admin1: Optional[str] = "admin1"

    def __post_init__(self):
        for name in ("date", "latitude", "longitude", "fatalities"):
            if not getattr(self, name):
                raise ValueError(f"column mapping for {name!r} is mandatory")

    def mapped_headers(self) -> list[str]:
        return [getattr(self, f.name) for f in fields(self) if getattr(self, f.name)]


@dataclass(frozen=True)
class RowError:
    """A malformed data row; `row` is 1-based over data rows (header excluded)."""

    row: int
    field: str
    message: str


def parse_date(text: str) -> dt.date:
    """Parse a date in ISO or the day-month-year styles ACLED exports use."""
    text = text.strip()
    for fmt in _DATE_FORMATS:
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unparseable date {text!r}")


def _parse_fatalities(text: str) -> int:
    text = text.strip()
    try:
        value = int(text)
    except ValueError:
        f = float(text)  # tolerate "2.0"-style exports
        if f != int(f):
            raise ValueError(f"fatalities {text!r} is not an integer") from None
        value = int(f)
    if value < 0:
        raise ValueError(f"fatalities must be >= 0, got {value}")
    return value


def parse_events(
    stream: IO[str],
    colmap: ColumnMap = ColumnMap(),
    strict: bool = False,
) -> tuple[list[EventRecord], list[RowError]]:
    """Parse an ACLED-schema CSV stream.

    Returns (records, row_errors) with row order preserved. With strict=True
    the first malformed row raises instead of being collected. A header
    missing any mapped column raises SchemaError either way.
    """
    reader = csv.DictReader(stream)
    header = reader.fieldnames
    if header is None:
        raise SchemaError("input has no header row")
    missing = [c for c in colmap.mapped_headers() if c not in header]
    if missing:
        raise SchemaError(f"mapped columns missing from header: {missing}")

    def cell(row, col):
        return (row.get(col) or "").strip() if col else ""

    records: list[EventRecord] = []
    errors: list[RowError] = []
    for i, row in enumerate(reader, start=1):
        try:
            bad_field = colmap.date
            date = parse_date(cell(row, colmap.date))
            bad_field = colmap.latitude
            lat = float(cell(row, colmap.latitude))
            bad_field = colmap.longitude
            lon = float(cell(row, colmap.longitude))
            bad_field = f"{colmap.latitude}/{colmap.longitude}"
            point = GeoPoint(lat, lon)
            bad_field = colmap.fatalities
            fat = _parse_fatalities(cell(row, colmap.fatalities))
        except ValueError as exc:
            if strict:
                raise ValueError(f"row {i}: {bad_field}: {exc}") from exc
            errors.append(RowError(row=i, field=bad_field, message=str(exc)))
            continue
        records.append(
            EventRecord(
                date=date,
                point=point,
                event_type=cell(row, colmap.event_type),
                sub_event_type=cell(row, colmap.sub_event_type),
                fatalities=fat,
                notes=cell(row, colmap.notes),
                source=cell(row, colmap.source),
                county_hint=cell(row, colmap.admin2) or None,
                state=cell(row, colmap.admin1) or None,
            )
        )
    return records, errors


def write_events(events: Iterable[EventRecord], stream: IO[str], colmap: ColumnMap = ColumnMap()):
    """Serialize records back to CSV under the same column mapping (round-trips parse_events)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(colmap.mapped_headers())
    for ev in events:
        row = {
            colmap.date: ev.date.isoformat(),
            colmap.latitude: repr(ev.point.lat),
            colmap.longitude: repr(ev.point.lon),
            colmap.fatalities: str(ev.fatalities),
        }
        if colmap.event_type:
            row[colmap.event_type] = ev.event_type
        if colmap.sub_event_type:
            row[colmap.sub_event_type] = ev.sub_event_type
        if colmap.notes:
            row[colmap.notes] = ev.notes
        if colmap.source:
            row[colmap.source] = ev.source
        if colmap.admin2:
            row[colmap.admin2] = ev.county_hint or ""
        if colmap.admin1:
            row[colmap.admin1] = ev.state or ""
        writer.writerow([row[h] for h in colmap.mapped_headers()])


@dataclass(frozen=True)
class EventFilter:
    """Accept-lists over event_type and sub_event_type; an event matches if either hits.

    The default political-violence predicate (Riots, Violence against
    civilians, plus the Violent demonstration sub-type) is an approximation:
    the upstream category set is configuration, not something this library can
    pin down.
    """

    event_types: frozenset[str] = frozenset()
    sub_event_types: frozenset[str] = frozenset()
    accept_all: bool = False

    @classmethod
    def political_violence(cls) -> "EventFilter":
        return cls(
            event_types=frozenset({"Riots", "Violence against civilians"}),
            sub_event_types=frozenset({"Violent demonstration"}),
        )

    @classmethod
    def everything(cls) -> "EventFilter":
        return cls(accept_all=True)

    def matches(self, event: EventRecord) -> bool:
        if self.accept_all:
            return True
        return event.event_type in self.event_types or event.sub_event_type in self.sub_event_types


def filter_events(events: Iterable[EventRecord], flt: EventFilter) -> list[EventRecord]:
    """Stable-order subsequence of events accepted by the filter."""
    if not flt.accept_all and not flt.event_types and not flt.sub_event_types:
        raise ValueError("filter accepts nothing: configure accept-lists or accept_all")
    return [ev for ev in events if flt.matches(ev)]


def unique_locations(events: Iterable[EventRecord], precision: int = 4) -> list[GeoPoint]:
    """Distinct event coordinates after rounding to `precision` decimals, first-occurrence order."""
    seen: dict[tuple[float, float], GeoPoint] = {}
    for ev in events:
        key = (round(ev.point.lat, precision), round(ev.point.lon, precision))
        if key not in seen:
            seen[key] = GeoPoint(key[0], key[1])
    return list(seen.values())


def to_epoch_day(date: dt.date) -> int:
    """Days since 1970-01-01 (the difference of two values is the calendar day gap)."""
    return date.toordinal() - _EPOCH_ORDINAL
