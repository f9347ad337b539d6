"""Plain-text formats.

Signals, operators and spreading tables are written as a one-line header
(``ggf-signal L``, ``ggf-op L``, ``ggf-spread L``) followed by
whitespace-separated ``re,im`` tokens, row-major, one matrix row per line.
Masks and weight tables are CSV grids of reals.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

__all__ = [
    "FormatError",
    "format_complex",
    "dumps",
    "loads",
    "save",
    "load",
    "load_grid",
    "save_grid",
]

KINDS = ("signal", "op", "spread")


class FormatError(ValueError):
    pass


def format_complex(z) -> str:
    """CSV cell for a complex number, ``re+imj`` with round-trip precision."""
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{abs(z.imag)!r}j"


def _token(z) -> str:
    return f"{float(z.real)!r},{float(z.imag)!r}"


def dumps(arr, kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    arr = np.asarray(arr, dtype=complex)
    L = arr.shape[0]
    if kind == "signal":
        if arr.ndim != 1:
            raise FormatError("signal must be 1-D")
        rows = [arr]
    else:
        if arr.shape != (L, L):
            raise FormatError(f"{kind} must be square")
        rows = arr
    lines = [f"ggf-{kind} {L}"]
    lines += [" ".join(_token(z) for z in row) for row in rows]
    return "\n".join(lines) + "\n"


def loads(text: str, kind: str | None = None):
    """Parse a ``ggf-*`` block; returns ``(kind, array)``."""
    toks = text.split()
    if len(toks) < 2 or not toks[0].startswith("ggf-"):
        raise FormatError("missing 'ggf-<kind> L' header")
    found = toks[0][4:]
    if found not in KINDS:
        raise FormatError(f"unknown header {toks[0]!r}")
    if kind is not None and found != kind:
        raise FormatError(f"expected ggf-{kind}, found {toks[0]}")
    try:
        L = int(toks[1])
    except ValueError:
        raise FormatError(f"bad dimension {toks[1]!r}") from None
    n = L if found == "signal" else L * L
    body = toks[2:]
    if len(body) != n:
        raise FormatError(f"expected {n} entries for ggf-{found} {L}, found {len(body)}")
    vals = np.empty(n, dtype=complex)
    for i, tok in enumerate(body):
        try:
            re_, im_ = tok.split(",")
            vals[i] = complex(float(re_), float(im_))
        except ValueError:
            raise FormatError(f"bad entry {tok!r} (want re,im)") from None
    return found, (vals if found == "signal" else vals.reshape(L, L))


def save(path, arr, kind: str) -> None:
    Path(path).write_text(dumps(arr, kind))


def load(path, kind: str | None = None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, kind)


def load_grid(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        rows = [[float(x) for x in row] for row in csv.reader(io.StringIO(text)) if row]
        grid = np.array(rows, dtype=float)
    except ValueError as exc:
        raise FormatError(f"bad CSV grid in {path}: {exc}") from None
    if grid.ndim != 2:
        raise FormatError(f"CSV grid in {path} is ragged")
    return grid


def save_grid(path, grid) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(grid):
        w.writerow([repr(float(x)) for x in row])
    Path(path).write_text(buf.getvalue())
