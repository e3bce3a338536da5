"""Table-driven transliteration between Romanized Toto and Toto script.

Table documents are UTF-8 text, one ``roman<TAB>script`` pair per line.
Script values may be written literally or as ``U+XXXX`` code points
separated by spaces. Lines starting with ``#`` are comments. Directives::

    @name<TAB>toto-provisional
    @range<TAB>U+1E290<TAB>U+1E2BF
    @alias<TAB>ɑ<TAB>a

An alias adds an extra Roman spelling for an existing key. Aliases only
affect the Roman-to-script direction, so they never break invertibility.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

from .errors import DirectionUnsupportedError, TableLoadError

_WS = re.compile(r"\s+")
_CODEPOINT = re.compile(r"^U\+([0-9A-Fa-f]{4,6})$")

TOTO_BLOCK = (0x1E290, 0x1E2BF)


def normalize(text):
    """NFC-compose, collapse whitespace runs to one space, trim the ends."""
    return _WS.sub(" ", unicodedata.normalize("NFC", text)).strip()


class Transliteration(NamedTuple):
    text: str
    unmatched: int


@dataclass(frozen=True)
class TransliterationTable:
    forward: tuple  # ordered (roman, script) pairs
    name: str = ""
    target_range: tuple | None = None
    aliases: tuple = ()  # (alias, roman key) pairs
    _fwd: dict = field(default=None, init=False, repr=False, compare=False)
    _inv: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        fwd = {}
        for key, value in self.forward:
            if not key:
                raise TableLoadError("empty key")
            if key in fwd:
                raise TableLoadError(f"duplicate key {key!r}")
            fwd[key] = value
        for alias, target in self.aliases:
            if not alias or alias in fwd:
                raise TableLoadError(f"alias {alias!r} is empty or shadows a key")
            if target not in fwd:
                raise TableLoadError(f"alias {alias!r} points at unknown key {target!r}")
        lookup = dict(fwd)
        lookup.update((a, fwd[t]) for a, t in self.aliases)
        inv = None
        values = [v for _, v in self.forward]
        if len(set(values)) == len(values) and all(values):
            inv = {v: k for k, v in self.forward}
        object.__setattr__(self, "_fwd", lookup)
        object.__setattr__(self, "_inv", inv)

    @property
    def invertible(self):
        return self._inv is not None

    @property
    def keys(self):
        """Forward keys, longest first (ties in table order)."""
        return tuple(sorted((k for k, _ in self.forward), key=len, reverse=True))

    @property
    def alphabet(self):
        return frozenset("".join(k for k, _ in self.forward))


def _parse_value(raw, lineno):
    parts = raw.split()
    if parts and all(_CODEPOINT.match(p) for p in parts):
        return "".join(chr(int(_CODEPOINT.match(p).group(1), 16)) for p in parts)
    return raw


def load_table(source, name=""):
    lines = source.splitlines() if isinstance(source, str) else [l.rstrip("\n") for l in source]
    forward, aliases = [], []
    keys = set()
    rng = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if cols[0] == "@name":
            name = cols[1].strip() if len(cols) > 1 else name
            continue
        if cols[0] == "@range":
            if len(cols) != 3:
                raise TableLoadError(f"line {lineno}: @range needs two code points")
            lo, hi = (ord(_parse_value(c.strip(), lineno)) for c in cols[1:])
            rng = (lo, hi)
            continue
        if cols[0] == "@alias":
            if len(cols) != 3:
                raise TableLoadError(f"line {lineno}: @alias needs alias and key")
            aliases.append((normalize(cols[1]), normalize(cols[2])))
            continue
        if len(cols) != 2:
            raise TableLoadError(f"line {lineno}: expected roman<TAB>script")
        key = unicodedata.normalize("NFC", cols[0])
        if not key:
            raise TableLoadError(f"line {lineno}: empty key")
        if key in keys:
            raise TableLoadError(f"line {lineno}: duplicate key {key!r}")
        keys.add(key)
        forward.append((key, _parse_value(cols[1].strip(), lineno)))
    try:
        return TransliterationTable(tuple(forward), name, rng, tuple(aliases))
    except TableLoadError as exc:
        raise TableLoadError(str(exc)) from None


def read_table_file(path):
    with open(path, encoding="utf-8") as fh:
        return load_table(fh.read())


def default_table():
    """The shipped provisional Roman-to-Toto-script table."""
    text = resources.files("totokit.data").joinpath("toto_provisional.tsv").read_text("utf-8")
    return load_table(text)


def _greedy(mapping, text):
    if not text:
        return Transliteration("", 0)
    longest = max((len(k) for k in mapping), default=0)
    out = []
    unmatched = 0
    i = 0
    n = len(text)
    while i < n:
        for size in range(min(longest, n - i), 0, -1):
            chunk = text[i:i + size]
            if chunk in mapping:
                out.append(mapping[chunk])
                i += size
                break
        else:
            out.append(text[i])
            unmatched += 1
            i += 1
    return Transliteration("".join(out), unmatched)


def to_script(table, text):
    """Greedy longest-match Roman to script; unknown characters pass through."""
    return _greedy(table._fwd, unicodedata.normalize("NFC", text))


def to_roman(table, text):
    if not table.invertible:
        raise DirectionUnsupportedError(f"table {table.name or '<unnamed>'} is not invertible")
    return _greedy(table._inv, text)
