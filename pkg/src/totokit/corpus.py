"""Trilingual parallel corpus: read/write, validation, splits, augmentation, stats.

Two on-disk shapes are supported. The structured shape is JSON with one
object per entry (``toto``, ``bangla``, ``english`` plus optional
annotations); the tabular shape is one ``toto<TAB>bangla<TAB>english`` row
per line.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources

from .errors import CorpusParseError, CorpusWriteError, StrategyInapplicableError, TotoError
from .gloss import choose, resolve_token
from .lexicon import MorphCategory, WordClass, template_for
from .morphology import FeatureBundle, generate_pieces
from .translit import TOTO_BLOCK

log = logging.getLogger(__name__)

C = MorphCategory
REQUIRED = ("toto", "bangla", "english")
OPTIONAL = ("morphemes", "pos", "boundaries", "id", "augmented", "provenance")
FORMATS = {"json": "json", "structured": "json", "tsv": "tsv", "tabular": "tsv"}
STRATEGIES = ("conjugation", "synonym", "reorder")
TENSE_CYCLE = (C.PRS, C.PST, C.FUT)
TENSE_CYCLE_SET = frozenset(TENSE_CYCLE)


@dataclass(frozen=True)
class TokenAnnotation:
    segments: str  # hyphen-joined surface pieces, e.g. "ha-mi"
    gloss: str  # hyphen-joined labels, e.g. "go-PRS"
    reorderable: bool = False

    @property
    def pieces(self):
        return tuple(self.segments.split("-"))

    @property
    def labels(self):
        return tuple(self.gloss.split("-"))

    def to_json(self):
        d = {"segments": self.segments, "gloss": self.gloss}
        if self.reorderable:
            d["reorderable"] = True
        return d


@dataclass(frozen=True)
class CorpusEntry:
    toto: str
    bangla: str
    english: str
    morphemes: tuple | None = None
    pos: tuple | None = None
    boundaries: tuple | None = None
    id: str = ""
    augmented: bool = False
    provenance: str = ""

    @property
    def tokens(self):
        return self.toto.split()

    @property
    def triple(self):
        return (self.toto, self.bangla, self.english)


@dataclass(frozen=True)
class Corpus:
    entries: tuple = ()
    name: str = ""
    version: str = ""
    created: str = ""

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        ids = [e.id for e in self.entries]
        dupes = sorted(i for i, n in Counter(ids).items() if n > 1)
        if dupes:
            raise ValueError(f"duplicate entry ids: {', '.join(dupes)}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def with_entries(self, entries):
        return replace(self, entries=tuple(entries))


def _format(fmt):
    try:
        return FORMATS[fmt]
    except KeyError:
        raise ValueError(f"unknown corpus format {fmt!r}") from None


# --- structured ---------------------------------------------------------------

def _annotation(obj, where):
    if isinstance(obj, str):
        obj = {"segments": obj, "gloss": ""}
    if not isinstance(obj, dict) or "segments" not in obj or "gloss" not in obj:
        raise CorpusParseError(f"{where}: morpheme annotation needs 'segments' and 'gloss'")
    return TokenAnnotation(str(obj["segments"]), str(obj["gloss"]), bool(obj.get("reorderable", False)))


def _entry_from_obj(obj, index):
    where = f"entry {index + 1}"
    if not isinstance(obj, dict):
        raise CorpusParseError(f"{where}: expected an object")
    for key in REQUIRED:
        if key not in obj:
            raise CorpusParseError(f"{where}: missing required key {key!r}")
        if not isinstance(obj[key], str):
            raise CorpusParseError(f"{where}: {key!r} must be a string")
    for key in obj:
        if key not in REQUIRED and key not in OPTIONAL:
            log.warning("%s: ignoring unknown key %r", where, key)
    morphemes = obj.get("morphemes")
    if morphemes is not None:
        morphemes = tuple(_annotation(a, where) for a in morphemes)
    pos = obj.get("pos")
    boundaries = obj.get("boundaries")
    return CorpusEntry(
        toto=obj["toto"],
        bangla=obj["bangla"],
        english=obj["english"],
        morphemes=morphemes,
        pos=tuple(pos) if pos is not None else None,
        boundaries=tuple(int(b) for b in boundaries) if boundaries is not None else None,
        id=str(obj.get("id") or f"s{index + 1}"),
        augmented=bool(obj.get("augmented", False)),
        provenance=str(obj.get("provenance", "")),
    )


def _entry_to_obj(e):
    d = {"id": e.id, "toto": e.toto, "bangla": e.bangla, "english": e.english}
    if e.morphemes is not None:
        d["morphemes"] = [a.to_json() for a in e.morphemes]
    if e.pos is not None:
        d["pos"] = list(e.pos)
    if e.boundaries is not None:
        d["boundaries"] = list(e.boundaries)
    if e.augmented:
        d["augmented"] = True
    if e.provenance:
        d["provenance"] = e.provenance
    return d


def _read_json(text):
    if not text.strip():
        return Corpus()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        if exc.msg != "Extra data":
            raise CorpusParseError(exc.msg, exc.lineno) from None
        # JSON Lines: one entry object per line
        doc = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                try:
                    doc.append(json.loads(line))
                except json.JSONDecodeError as err:
                    raise CorpusParseError(err.msg, lineno) from None
    meta = {}
    if isinstance(doc, dict):
        if "entries" not in doc:
            doc = {"entries": [doc]}
        meta = doc.get("metadata") or {}
        items = doc["entries"]
    else:
        items = doc
    if not isinstance(items, list):
        raise CorpusParseError("entries must be a list")
    entries = [_entry_from_obj(obj, i) for i, obj in enumerate(items)]
    try:
        return Corpus(entries, str(meta.get("name", "")), str(meta.get("version", "")), str(meta.get("created", "")))
    except ValueError as exc:
        raise CorpusParseError(str(exc)) from None


def _write_json(c):
    meta = {k: v for k, v in (("name", c.name), ("version", c.version), ("created", c.created)) if v}
    doc = {"metadata": meta, "entries": [_entry_to_obj(e) for e in c.entries]}
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# --- tabular ------------------------------------------------------------------

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", "\\": "\\"}


def _unescape(field, lineno):
    if "\\" not in field:
        return field
    out, i = [], 0
    while i < len(field):
        ch = field[i]
        if ch == "\\" and i + 1 < len(field) and field[i + 1] in _ESCAPES:
            out.append(_ESCAPES[field[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _escape(field, strict, entry_id):
    if strict:
        if any(ch in field for ch in "\t\n\r"):
            raise CorpusWriteError(f"entry {entry_id}: tab or newline cannot be written in legacy tabular mode")
        return field
    return field.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _read_tsv(text, strict):
    entries = []
    # only LF (and CRLF) end rows; other Unicode line breaks are field text
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.removesuffix("\r")
        if not line.strip() and "\t" not in line:
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusParseError(f"expected 3 tab-separated columns, found {len(cols)}", lineno)
        if not strict:
            cols = [_unescape(c, lineno) for c in cols]
        entries.append(CorpusEntry(*cols, id=f"s{len(entries) + 1}"))
    return Corpus(entries)


def _write_tsv(c, strict):
    notices = []
    for n, e in enumerate(c.entries, start=1):
        dropped = [k for k in ("morphemes", "pos", "boundaries") if getattr(e, k) is not None]
        if e.augmented:
            dropped.append("augmented")
        if e.provenance:
            dropped.append("provenance")
        if e.id != f"s{n}":
            dropped.append("id")
        if dropped:
            notices.append(f"{e.id}: dropped {', '.join(dropped)}")
    if c.name or c.version or c.created:
        notices.append("corpus metadata dropped")
    lines = ["\t".join(_escape(f, strict, e.id) for f in e.triple) for e in c.entries]
    return "".join(line + "\n" for line in lines), notices


def read_corpus(source, format="json", *, strict=False):
    """Parse a corpus document (text). ``strict`` disables tabular escapes."""
    fmt = _format(format)
    if fmt == "json":
        return _read_json(source)
    try:
        return _read_tsv(source, strict)
    except ValueError as exc:
        raise CorpusParseError(str(exc)) from None


def write_corpus(c, format="json", *, strict=False):
    """Serialize ``c``; returns ``(text, notices)`` where notices list lossy fields."""
    fmt = _format(format)
    if fmt == "json":
        return _write_json(c), []
    return _write_tsv(c, strict)


def read_corpus_file(path, format=None, *, strict=False):
    if format is None:
        format = "tsv" if str(path).endswith((".tsv", ".txt")) else "json"
    with open(path, encoding="utf-8") as fh:
        return read_corpus(fh.read(), format, strict=strict)


def golden_corpus():
    """The packaged corpus of glossed example sentences."""
    text = resources.files("totokit.data").joinpath("golden_corpus.json").read_text("utf-8")
    return read_corpus(text, "json")


# --- validation -----------------------------------------------------------------

ERROR, WARNING = "ERROR", "WARNING"


@dataclass(frozen=True)
class Issue:
    entry_id: str
    code: str
    severity: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple = ()

    @property
    def counts(self):
        return dict(sorted(Counter(i.code for i in self.issues).items()))

    @property
    def passed(self):
        return not any(i.severity == ERROR for i in self.issues)

    def for_entry(self, entry_id):
        return [i for i in self.issues if i.entry_id == entry_id]


def _script_profile(text, block):
    lo, hi = block
    roman = script = False
    for ch in text:
        if lo <= ord(ch) <= hi:
            script = True
        elif ch.isalpha():
            roman = True
    return roman, script


def validate(c, *, script="auto", ratio_band=(0.3, 3.0), block=TOTO_BLOCK):
    """Mechanical checks over every entry.

    ``script`` is "roman", "script" or "auto" (either, but not mixed).
    """
    if script not in ("auto", "roman", "script"):
        raise ValueError(f"unknown script mode {script!r}")
    lo, hi = ratio_band
    issues = []
    seen = {}
    for e in c.entries:
        for name in REQUIRED:
            if not getattr(e, name).strip():
                issues.append(Issue(e.id, "missing-field", ERROR, f"{name} is empty"))
        if e.triple in seen:
            issues.append(Issue(e.id, "duplicate", WARNING, f"same text as {seen[e.triple]}"))
        else:
            seen[e.triple] = e.id
        roman, in_script = _script_profile(e.toto, block)
        if (roman and in_script) or (script == "roman" and in_script) or (script == "script" and roman):
            issues.append(Issue(e.id, "script-inconsistency", ERROR, f"toto field is not all {script}"))
        if e.morphemes is not None:
            if len(e.morphemes) != len(e.tokens):
                issues.append(Issue(
                    e.id, "annotation-mismatch", ERROR,
                    f"{len(e.morphemes)} annotations for {len(e.tokens)} tokens",
                ))
            for a in e.morphemes:
                if a.gloss and len(a.pieces) != len(a.labels):
                    issues.append(Issue(e.id, "annotation-mismatch", ERROR, f"{a.segments!r} vs {a.gloss!r}"))
        n_toto, n_en = len(e.tokens), len(e.english.split())
        if n_toto and n_en and not lo <= n_en / n_toto <= hi:
            issues.append(Issue(e.id, "length-ratio", WARNING, f"english/toto token ratio {n_en / n_toto:.2f}"))
    return ValidationReport(tuple(issues))


# --- split ------------------------------------------------------------------------

def _shuffle_key(seed, entry_id):
    return hashlib.sha256(f"{seed}:{entry_id}".encode("utf-8")).hexdigest()


def split(c, ratios=(0.8, 0.1, 0.1), seed=0):
    """Seeded shuffle then contiguous cut into (train, val, test).

    val and test get floor(n * ratio); the remainder goes to train.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 or math.isnan(r) for r in ratios):
        raise ValueError("ratios must be three non-negative numbers")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios sum to {sum(ratios)!r}, not 1")
    order = sorted(c.entries, key=lambda e: _shuffle_key(seed, e.id))
    n = len(order)
    n_val = math.floor(n * ratios[1] + 1e-9)
    n_test = math.floor(n * ratios[2] + 1e-9)
    n_train = n - n_val - n_test
    parts = (order[:n_train], order[n_train:n_train + n_val], order[n_train + n_val:])
    return tuple(c.with_entries(p) for p in parts)


# --- augmentation -------------------------------------------------------------------

_LABEL_TO_CAT = {
    "PL": C.PL, "DEF": C.DEF, "NOM": C.NOM, "ACC": C.ACC, "GEN": C.GEN, "DAT": C.DAT,
    "LOC": C.LOC, "INS": C.INST, "INST": C.INST, "ABL": C.ABL, "PROG": C.PROG, "PFV": C.PFV,
    "PRS": C.PRS, "PST": C.PST, "FUT": C.FUT, "HAB": C.HAB, "IMP": C.IMP, "EMPH": C.EMPH,
}


def _verb_token(lex, entry):
    """(index, lexical entry, categories) of the annotated finite verb, or None."""
    for i in range(len(entry.morphemes) - 1, -1, -1):
        ann = entry.morphemes[i]
        labels = ann.labels
        cats = [_LABEL_TO_CAT.get(l) for l in labels[1:]]
        if None in cats or not TENSE_CYCLE_SET.intersection(cats):
            continue
        verbs = [e for e in lex.lookup(ann.pieces[0]) if e.word_class is WordClass.VERB]
        if verbs:
            return i, verbs[0], cats
    return None


def _conjugations(lex, entry, templates):
    found = _verb_token(lex, entry)
    if found is None:
        return []
    idx, stem, cats = found
    ann = entry.morphemes[idx]
    tense = next(c for c in cats if c in TENSE_CYCLE_SET)
    tokens = entry.tokens
    hyphenated = "-" in tokens[idx]
    old_exp = ann.pieces[cats.index(tense) + 1]
    out = []
    for new in TENSE_CYCLE:
        if new is tense:
            continue
        new_cats = [new if c is tense else c for c in cats]
        if new is not C.FUT and old_exp in ("mi", "na"):
            exponent = "na" if old_exp == "mi" else "mi"
        else:
            exponent = "mi" if new is C.PRS else "na"
        try:
            bundle = FeatureBundle.from_categories(WordClass.VERB, new_cats)
            pieces = generate_pieces(lex, stem, bundle, tense_exponent=exponent)
        except (TotoError, ValueError, LookupError):
            continue
        pieces[0] = ann.pieces[0]
        labels = list(ann.labels)
        labels[labels.index(tense.value)] = new.value
        if len(pieces) != len(labels):
            continue
        toks = list(tokens)
        toks[idx] = "-".join(pieces) if hyphenated else "".join(pieces)
        morphemes = list(entry.morphemes)
        morphemes[idx] = replace(ann, segments="-".join(pieces), gloss="-".join(labels))
        if templates and new.value in templates:
            english = templates[new.value].format(english=entry.english, toto=entry.toto)
        else:
            english = f"[TENSE:{new.value}] {entry.english}"
        out.append(replace(
            entry, toto=" ".join(toks), english=english, morphemes=tuple(morphemes),
            id=f"{entry.id}+conj:{new.value}", augmented=True,
            provenance=f"conjugation of {entry.id}",
        ))
    return out


def _token_stem(lex, token, annotation):
    if annotation is not None:
        stem = annotation.pieces[0]
        entries = [e for e in lex.lookup(stem) if e.gloss_en == annotation.labels[0]]
        return stem, entries[0] if entries else None
    best = choose(resolve_token(lex, token))
    if best is None or best.hypothesized:
        return None, None
    return best.pieces[0], best.stem


def _synonym(lex, entry, seed):
    rng = random.Random(f"{seed}:{entry.id}:synonym")
    tokens = entry.tokens
    options = []
    for i, tok in enumerate(tokens):
        ann = entry.morphemes[i] if entry.morphemes and len(entry.morphemes) == len(tokens) else None
        stem, lexeme = _token_stem(lex, tok, ann)
        if lexeme is None or not tok.startswith(stem):
            continue
        syns = lex.synonyms(lexeme)
        if syns:
            options.append((i, stem, syns))
    if not options:
        return []
    i, stem, syns = options[rng.randrange(len(options))]
    sub = syns[rng.randrange(len(syns))]
    toks = list(tokens)
    toks[i] = sub.lemma_roman + toks[i][len(stem):]
    morphemes = entry.morphemes
    if morphemes is not None and len(morphemes) == len(tokens):
        ann = morphemes[i]
        morphemes = list(morphemes)
        morphemes[i] = replace(ann, segments=sub.lemma_roman + ann.segments[len(stem):])
        morphemes = tuple(morphemes)
    return [replace(
        entry, toto=" ".join(toks), morphemes=morphemes, id=f"{entry.id}+syn",
        augmented=True, provenance=f"synonym substitution in {entry.id}",
    )]


def _reorder(entry, seed):
    if not entry.morphemes or len(entry.morphemes) != len(entry.tokens):
        return []
    flags = [a.reorderable for a in entry.morphemes]
    pairs = [i for i in range(len(flags) - 1) if flags[i] and flags[i + 1]]
    if not pairs:
        return []
    rng = random.Random(f"{seed}:{entry.id}:reorder")
    i = pairs[rng.randrange(len(pairs))]

    def swap(seq):
        seq = list(seq)
        seq[i], seq[i + 1] = seq[i + 1], seq[i]
        return tuple(seq)

    return [replace(
        entry, toto=" ".join(swap(entry.tokens)), morphemes=swap(entry.morphemes),
        pos=swap(entry.pos) if entry.pos is not None and len(entry.pos) == len(entry.tokens) else entry.pos,
        id=f"{entry.id}+reorder", augmented=True, provenance=f"reordering of {entry.id}",
    )]


def augment(c, lex, strategies, seed=0, *, templates=None):
    """Originals in order, each followed by its generated siblings.

    ``templates`` optionally maps a tense label to an English format string
    (fields ``english`` and ``toto``) used for conjugation siblings.
    """
    strategies = set(strategies)
    if not strategies:
        raise ValueError("at least one augmentation strategy is required")
    unknown = strategies - set(STRATEGIES)
    if unknown:
        raise ValueError(f"unknown strategies: {', '.join(sorted(unknown))}")
    if "conjugation" in strategies and c.entries and not any(e.morphemes for e in c.entries):
        raise StrategyInapplicableError("conjugation needs morpheme annotations marking a verb")
    out = []
    for entry in c.entries:
        out.append(entry)
        if entry.augmented:
            continue
        if "conjugation" in strategies and entry.morphemes:
            out.extend(_conjugations(lex, entry, templates))
        if "synonym" in strategies:
            out.extend(_synonym(lex, entry, seed))
        if "reorder" in strategies:
            out.extend(_reorder(entry, seed))
    return c.with_entries(out)


# --- statistics ---------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusStats:
    entries: int = 0
    tokens: dict = field(default_factory=lambda: {"toto": 0, "bangla": 0, "english": 0})
    type_token_ratio: dict = field(default_factory=lambda: {"toto": 0.0, "bangla": 0.0, "english": 0.0})
    category_freq: dict = field(default_factory=dict)
    morpheme_freq: dict = field(default_factory=dict)  # (slot, surface) -> count
    analyzed_tokens: int = 0
    coverage: float = 0.0

    @property
    def morpheme_tokens(self):
        return sum(self.category_freq.values())

    def as_dict(self):
        return {
            "entries": self.entries,
            "tokens": dict(self.tokens),
            "type_token_ratio": {k: round(v, 6) for k, v in self.type_token_ratio.items()},
            "category_freq": {str(k): v for k, v in self.category_freq.items()},
            "morpheme_freq": {f"{slot}:{surf or '∅'}": v for (slot, surf), v in self.morpheme_freq.items()},
            "analyzed_tokens": self.analyzed_tokens,
            "coverage": round(self.coverage, 6),
        }


def stats(c, lex):
    """Token counts, type-token ratios and suffix frequencies from top analyses."""
    tokens = {k: [] for k in REQUIRED}
    cats, morphs = Counter(), Counter()
    analyzed = 0
    for e in c.entries:
        for key in REQUIRED:
            tokens[key].extend(getattr(e, key).split())
        for tok in e.tokens:
            best = choose(resolve_token(lex, tok))
            if best is None:
                continue
            analyzed += 1
            template = template_for(best.stem.word_class)
            for seg in best.suffixes:
                cats[seg.category] += 1
                morphs[(template.slot_for(seg.category).name, seg.surface)] += 1
    counts = {k: len(v) for k, v in tokens.items()}
    ttr = {k: (len(set(v)) / len(v) if v else 0.0) for k, v in tokens.items()}
    order = list(MorphCategory)
    return CorpusStats(
        entries=len(c.entries),
        tokens=counts,
        type_token_ratio=ttr,
        category_freq=dict(sorted(cats.items(), key=lambda kv: order.index(kv[0]))),
        morpheme_freq=dict(sorted(morphs.items())),
        analyzed_tokens=analyzed,
        coverage=analyzed / counts["toto"] if counts["toto"] else 0.0,
    )
