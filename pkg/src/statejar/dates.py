"""HTTP date parsing and formatting (RFC 1123, RFC 850 and asctime forms)."""

from __future__ import annotations

import calendar
import re
import time

from .errors import InvalidDate

__all__ = ["parse_http_date", "format_http_date"]

_WEEKDAYS = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")
_WEEKDAYS_LONG = ("monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday")
_MONTHS = ("jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec")

# Sun, 06 Nov 1994 08:49:37 GMT
_RFC1123 = re.compile(
    r"(?P<wday>[A-Za-z]{3}),\s+(?P<day>\d{1,2})\s+(?P<mon>[A-Za-z]{3})\s+(?P<year>\d{4})\s+"
    r"(?P<hh>\d{2}):(?P<mm>\d{2}):(?P<ss>\d{2})\s+GMT"
)
# Sunday, 06-Nov-94 08:49:37 GMT; Netscape's "Wdy, DD-Mon-YYYY" variant is accepted too.
_RFC850 = re.compile(
    r"(?P<wday>[A-Za-z]{3,9}),\s+(?P<day>\d{1,2})-(?P<mon>[A-Za-z]{3})-(?P<year>\d{2}|\d{4})\s+"
    r"(?P<hh>\d{2}):(?P<mm>\d{2}):(?P<ss>\d{2})\s+GMT"
)
# Sun Nov  6 08:49:37 1994
_ASCTIME = re.compile(
    r"(?P<wday>[A-Za-z]{3})\s+(?P<mon>[A-Za-z]{3})\s+(?P<day>\d{1,2})\s+"
    r"(?P<hh>\d{2}):(?P<mm>\d{2}):(?P<ss>\d{2})\s+(?P<year>\d{4})"
)


def parse_http_date(text: str) -> int:
    """Return the UTC epoch seconds for an HTTP date string.

    Raises :class:`InvalidDate` for unknown formats and impossible dates.
    """
    text = text.strip()
    for pattern in (_RFC1123, _RFC850, _ASCTIME):
        m = pattern.fullmatch(text)
        if m is not None:
            break
    else:
        raise InvalidDate(f"unrecognized date format {text!r}")

    wday = m.group("wday").lower()
    if wday not in _WEEKDAYS and wday not in _WEEKDAYS_LONG:
        raise InvalidDate(f"unknown weekday {m.group('wday')!r}")
    mon = m.group("mon").lower()
    if mon not in _MONTHS:
        raise InvalidDate(f"unknown month {m.group('mon')!r}")
    month = _MONTHS.index(mon) + 1

    year = int(m.group("year"))
    if len(m.group("year")) == 2:
        year += 1900 if year >= 70 else 2000
    day = int(m.group("day"))
    hh, mm, ss = int(m.group("hh")), int(m.group("mm")), int(m.group("ss"))

    if not 1 <= day <= calendar.monthrange(year, month)[1]:
        raise InvalidDate(f"no day {day} in {year}-{month:02d}")
    # 60 admits a leap second, which timegm folds into the next minute.
    if hh > 23 or mm > 59 or ss > 60:
        raise InvalidDate(f"bad time of day in {text!r}")
    return calendar.timegm((year, month, day, hh, mm, ss, 0, 0, 0))


def format_http_date(ts: int) -> str:
    """Format epoch seconds in the RFC 1123 form used on the wire."""
    t = time.gmtime(ts)
    return "%s, %02d %s %04d %02d:%02d:%02d GMT" % (
        _WEEKDAYS[t.tm_wday].capitalize(),
        t.tm_mday,
        _MONTHS[t.tm_mon - 1].capitalize(),
        t.tm_year,
        t.tm_hour,
        t.tm_min,
        t.tm_sec,
    )
