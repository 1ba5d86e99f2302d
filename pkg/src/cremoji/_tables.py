"""Small CSV helpers shared by the resource loaders."""
import csv
import os
import re
from importlib import resources

from .errors import TableError

_COMMA_ESCAPE = re.compile(r"\\u002c", re.IGNORECASE)


def data_path(name):
    """Absolute path of a file bundled under ``cremoji/data``."""
    return str(resources.files("cremoji").joinpath("data", name))


def unescape(field):
    return _COMMA_ESCAPE.sub(",", field)


def read_rows(path, required, optional=()):
    """Yield ``(line_number, row_dict)`` for each data row of a headed CSV.

    An empty file yields nothing. Missing required columns, wrong field counts
    and empty required fields raise :class:`TableError` with the line number.
    """
    path = os.fspath(path)
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = None
        for fields in reader:
            line = reader.line_num
            if header is None:
                if not fields:
                    continue
                header = [f.strip() for f in fields]
                missing = [c for c in required if c not in header]
                if missing:
                    raise TableError(f"missing column(s) {', '.join(missing)}", path, line)
                unknown = [c for c in header if c not in required and c not in optional]
                if unknown:
                    raise TableError(f"unexpected column(s) {', '.join(unknown)}", path, line)
                continue
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            if len(fields) != len(header):
                raise TableError(
                    f"expected {len(header)} fields, got {len(fields)}", path, line
                )
            row = dict(zip(header, fields))
            for c in required:
                if row[c] == "":
                    raise TableError(f"empty value for {c!r}", path, line)
            yield line, row


def read_terms(path):
    """One term per line; blank lines and ``#`` comments skipped."""
    with open(os.fspath(path), encoding="utf-8-sig") as fh:
        return [t.strip() for t in fh if t.strip() and not t.lstrip().startswith("#")]
