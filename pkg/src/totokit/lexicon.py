"""Morpheme inventory, slot templates and the stem lexicon.

The grammatical inventory is built in; stems live in a hand-editable
``.lex`` document::

    %lexicon 1
    %version golden-2025
    # kind|lemma|class|gloss_en|gloss_bn|ipa|attributes
    stem|ha|VERB|go|||prog=daŋ
    stem|ʃedaŋ|NOUN|anger|||pair=ADJECTIVE:ʃedaŋva:angry;variant=Sedangwa
    # kind|id|categories|labels|allomorphs|attaches|slot
    morpheme|case-ins-fa|INST|INS|fa|NOUN,PRONOUN|CASE

Lexicon values are immutable; ``add_entry`` returns a new lexicon.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from typing import Iterable

from .errors import DuplicateEntryError, LexiconLoadError, SchemaError
from .translit import normalize

SCHEMA_VERSIONS = ("1",)
DELIMITER = "|"
NULL_MARK = "∅"


class WordClass(str, Enum):
    NOUN = "NOUN"
    PRONOUN = "PRONOUN"
    VERB = "VERB"
    ADJECTIVE = "ADJECTIVE"
    ADVERB = "ADVERB"
    NUMERAL = "NUMERAL"
    PARTICLE = "PARTICLE"

    def __str__(self):
        return self.value


class MorphCategory(str, Enum):
    STEM = "STEM"
    PL = "PL"
    PRS = "PRS"
    PST = "PST"
    FUT = "FUT"
    PROG = "PROG"
    PFV = "PFV"
    HAB = "HAB"
    IMP = "IMP"
    NOM = "NOM"
    ACC = "ACC"
    GEN = "GEN"
    DAT = "DAT"
    LOC = "LOC"
    INST = "INST"
    ABL = "ABL"
    DEF = "DEF"
    EMPH = "EMPH"
    DERIV_ADJ2V = "DERIV_ADJ2V"
    DERIV_V2N = "DERIV_V2N"
    DERIV_N2ADJ = "DERIV_N2ADJ"

    def __str__(self):
        return self.value


C = MorphCategory
PROG_ALLOMORPHS = ("daŋ", "diŋ", "duŋ")


@dataclass(frozen=True)
class Slot:
    name: str
    categories: frozenset
    optional: bool = True


@dataclass(frozen=True)
class SlotTemplate:
    name: str
    word_classes: frozenset
    slots: tuple

    def slot(self, name):
        for s in self.slots:
            if s.name == name:
                return s
        return None

    def index(self, name):
        """1-based position of a slot after the stem; 0 if absent."""
        for i, s in enumerate(self.slots, start=1):
            if s.name == name:
                return i
        return 0

    def slot_for(self, category):
        for s in self.slots:
            if category in s.categories:
                return s
        return None


NOMINAL = SlotTemplate(
    "nominal",
    frozenset({WordClass.NOUN, WordClass.PRONOUN}),
    (
        Slot("NUM", frozenset({C.PL})),
        Slot("DEF", frozenset({C.DEF})),
        Slot("CASE", frozenset({C.NOM, C.ACC, C.GEN, C.DAT, C.LOC, C.INST, C.ABL})),
    ),
)
VERBAL = SlotTemplate(
    "verbal",
    frozenset({WordClass.VERB}),
    (
        Slot("ASPECT", frozenset({C.PROG, C.PFV})),
        Slot("TAM", frozenset({C.PRS, C.PST, C.FUT, C.HAB, C.IMP})),
        Slot("EMPH", frozenset({C.EMPH})),
    ),
)
BARE = SlotTemplate(
    "bare",
    frozenset({WordClass.ADJECTIVE, WordClass.ADVERB, WordClass.NUMERAL, WordClass.PARTICLE}),
    (),
)
TEMPLATES = (NOMINAL, VERBAL, BARE)


def template_for(word_class):
    for t in TEMPLATES:
        if word_class in t.word_classes:
            return t
    raise KeyError(word_class)


def _slot_index(slot_name):
    for t in TEMPLATES:
        i = t.index(slot_name)
        if i:
            return i
    return 0


@dataclass(frozen=True)
class Allomorph:
    surface_roman: str
    surface_ipa: str = ""
    conditioning: str = ""


@dataclass(frozen=True)
class Morpheme:
    id: str
    categories: tuple
    gloss_labels: tuple  # aligned with categories
    allomorphs: tuple
    attaches_to: frozenset
    slot: str
    builtin: bool = field(default=False, compare=False)

    def __post_init__(self):
        if len(self.gloss_labels) != len(self.categories):
            raise SchemaError(f"morpheme {self.id}: one gloss label per category required")
        if not self.categories:
            raise SchemaError(f"morpheme {self.id}: empty category set")

    def label(self, category):
        return self.gloss_labels[self.categories.index(category)]

    @property
    def surfaces(self):
        return tuple(a.surface_roman for a in self.allomorphs)

    @property
    def slot_index(self):
        return _slot_index(self.slot)

    @property
    def is_null(self):
        return self.surfaces == ("",)


def _m(mid, cats, surfaces, attaches, slot, labels=None):
    cats = tuple(MorphCategory(c) for c in cats)
    return Morpheme(
        id=mid,
        categories=cats,
        gloss_labels=tuple(labels or (c.value for c in cats)),
        allomorphs=tuple(Allomorph(s) for s in surfaces),
        attaches_to=frozenset(attaches),
        slot=slot,
        builtin=True,
    )


_NOM = (WordClass.NOUN, WordClass.PRONOUN)
_VERB = (WordClass.VERB,)

# One record per form/meaning pairing as grouped in the grammar description.
BUILTIN_MORPHEMES = (
    _m("num-bi", ["PL"], ["bi"], _NOM, "NUM"),
    _m("def-ha", ["DEF"], ["ha"], _NOM, "DEF"),
    _m("case-nom", ["NOM"], [""], _NOM, "CASE"),
    _m("case-acc", ["ACC"], ["hẽ", "hiŋ", "hi"], _NOM, "CASE"),
    _m("case-gen", ["GEN"], ["ko", "kɔ"], _NOM, "CASE"),
    _m("case-loc-ta", ["LOC"], ["ta"], _NOM, "CASE"),
    _m("case-loc-fo", ["LOC"], ["fo"], _NOM, "CASE"),
    _m("case-dat-hiŋ", ["DAT"], ["hiŋ"], _NOM, "CASE"),
    _m("case-dat-ta", ["DAT"], ["ta"], _NOM, "CASE"),
    _m("case-instabl-fo", ["INST", "ABL"], ["fo"], _NOM, "CASE"),
    _m("asp-prog", ["PROG"], PROG_ALLOMORPHS, _VERB, "ASPECT"),
    _m("asp-pfv-pate", ["PFV"], ["pate"], _VERB, "ASPECT"),
    _m("asp-pfv-pu", ["PFV"], ["pu"], _VERB, "ASPECT"),
    _m("tam-mi", ["PRS", "PST"], ["mi"], _VERB, "TAM"),
    _m("tam-na", ["PRS", "PST"], ["na"], _VERB, "TAM"),
    _m("tam-ro", ["FUT"], ["ro"], _VERB, "TAM"),
    _m("tam-ko", ["HAB", "IMP"], ["ko"], _VERB, "TAM"),
    _m("emph-he", ["EMPH"], ["he"], _VERB, "EMPH"),
)


@dataclass(frozen=True)
class DerivedPair:
    target: WordClass
    surface: str
    gloss: str = ""


@dataclass(frozen=True)
class LexicalEntry:
    lemma_roman: str
    word_class: WordClass
    gloss_en: str
    gloss_bn: str = ""
    lemma_ipa: str = ""
    prog_allomorph: str | None = None
    deriv_suffix: str | None = None
    derived_pairs: tuple = ()
    variants: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lemma_roman", normalize(self.lemma_roman))
        object.__setattr__(self, "word_class", WordClass(self.word_class))
        if not self.lemma_roman:
            raise ValueError("lemma_roman must be non-empty")
        if self.prog_allomorph is not None:
            prog = self.prog_allomorph.lstrip("-")
            if self.word_class is not WordClass.VERB:
                raise ValueError(f"{self.lemma_roman}: prog_allomorph is for verbs only")
            if prog not in PROG_ALLOMORPHS:
                raise ValueError(f"{self.lemma_roman}: unknown progressive allomorph {prog!r}")
            object.__setattr__(self, "prog_allomorph", prog)
        if self.deriv_suffix is not None:
            object.__setattr__(self, "deriv_suffix", self.deriv_suffix.lstrip("-"))
        object.__setattr__(self, "derived_pairs", tuple(self.derived_pairs))
        object.__setattr__(self, "variants", tuple(self.variants))

    @property
    def key(self):
        return (self.lemma_roman, self.word_class)

    @property
    def id(self):
        return f"{self.lemma_roman}.{self.word_class.value}"

    @property
    def prog(self):
        return self.prog_allomorph or PROG_ALLOMORPHS[0]


_CLASS_ORDER = {wc: i for i, wc in enumerate(WordClass)}


def _entry_sort_key(e):
    return (e.lemma_roman, _CLASS_ORDER[e.word_class])


def _morpheme_sort_key(m):
    return (m.slot_index, m.id)


@dataclass(frozen=True)
class Lexicon:
    entries: tuple = ()
    morphemes: tuple = BUILTIN_MORPHEMES
    version: str = ""
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple(sorted(self.entries, key=_entry_sort_key))
        seen = set()
        for e in entries:
            if e.key in seen:
                raise DuplicateEntryError(f"duplicate entry ({e.lemma_roman}, {e.word_class})")
            seen.add(e.key)
        morphemes = tuple(sorted(self.morphemes, key=_morpheme_sort_key))
        ids = [m.id for m in morphemes]
        if len(set(ids)) != len(ids):
            raise DuplicateEntryError("duplicate morpheme id")
        for m in morphemes:
            _check_morpheme(m)
        index = {}
        for e in entries:
            index.setdefault(e.lemma_roman, []).append(e)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "morphemes", morphemes)
        object.__setattr__(self, "_index", {k: tuple(v) for k, v in index.items()})

    def __len__(self):
        return len(self.entries)

    def lookup(self, surface):
        return self._index.get(normalize(surface), ())

    def morpheme(self, morpheme_id):
        for m in self.morphemes:
            if m.id == morpheme_id:
                return m
        raise KeyError(morpheme_id)

    def synonyms(self, entry):
        """Other entries of the same class sharing the English gloss."""
        return tuple(
            e for e in self.entries
            if e.word_class is entry.word_class and e.gloss_en == entry.gloss_en and e.key != entry.key
        )


def _check_morpheme(m):
    if not m.slot_index:
        raise SchemaError(f"morpheme {m.id}: unknown slot {m.slot!r}")
    for wc in m.attaches_to:
        t = template_for(wc)
        s = t.slot(m.slot)
        if s is None:
            raise SchemaError(f"morpheme {m.id}: slot {m.slot} not in the {wc} template")
        bad = [c for c in m.categories if c not in s.categories]
        if bad:
            raise SchemaError(f"morpheme {m.id}: {bad[0]} cannot fill slot {m.slot}")
    nulls = [a for a in m.allomorphs if not a.surface_roman]
    if nulls and m.categories != (C.NOM,):
        raise SchemaError(f"morpheme {m.id}: only NOM may have a null allomorph")


def lookup_stem(lex, surface):
    """All entries whose lemma equals ``surface`` after normalization."""
    return frozenset(lex.lookup(surface))


def morpheme_inventory(lex):
    return list(lex.morphemes)


def add_entry(lex, entry):
    if any(e.key == entry.key for e in lex.lookup(entry.lemma_roman)):
        raise DuplicateEntryError(f"duplicate entry ({entry.lemma_roman}, {entry.word_class})")
    return replace(lex, entries=lex.entries + (entry,))


# --- document reading/writing -------------------------------------------

_HEADER = re.compile(r"^%lexicon\s+(\S+)\s*$")


def _word_class(value, lineno, fieldname):
    try:
        return WordClass(value.strip().upper())
    except ValueError:
        raise SchemaError(f"unknown word class {value!r}", lineno, fieldname) from None


def _category(value, lineno, fieldname):
    try:
        return MorphCategory(value.strip().upper())
    except ValueError:
        raise SchemaError(f"unknown category tag {value!r}", lineno, fieldname) from None


def _split_list(value):
    return [v.strip() for v in value.split(",") if v.strip()]


def _parse_attrs(text, lineno):
    attrs = {"prog": None, "deriv": None, "pair": [], "variant": []}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise LexiconLoadError(f"attribute {item!r} is not key=value", lineno, "attributes")
        if key not in attrs:
            raise SchemaError(f"unknown attribute {key!r}", lineno, "attributes")
        if isinstance(attrs[key], list):
            attrs[key].append(value.strip())
        else:
            attrs[key] = value.strip()
    pairs = []
    for raw in attrs["pair"]:
        parts = raw.split(":")
        if len(parts) not in (2, 3):
            raise LexiconLoadError(f"pair {raw!r} must be TARGET:surface[:gloss]", lineno, "pair")
        target = _word_class(parts[0], lineno, "pair")
        pairs.append(DerivedPair(target, normalize(parts[1]), parts[2].strip() if len(parts) == 3 else ""))
    return attrs["prog"], attrs["deriv"], tuple(pairs), tuple(attrs["variant"])


def _parse_stem(fields, lineno):
    if len(fields) < 4:
        raise LexiconLoadError("stem record needs at least lemma, class and gloss", lineno)
    if len(fields) > 7:
        raise LexiconLoadError("too many fields in stem record", lineno)
    fields = fields + [""] * (7 - len(fields))
    _, lemma, wc, gloss_en, gloss_bn, ipa, attrs = fields
    if not lemma:
        raise LexiconLoadError("empty lemma", lineno, "lemma")
    prog, deriv, pairs, variants = _parse_attrs(attrs, lineno)
    try:
        return LexicalEntry(
            lemma_roman=lemma,
            word_class=_word_class(wc, lineno, "class"),
            gloss_en=gloss_en,
            gloss_bn=gloss_bn,
            lemma_ipa=ipa,
            prog_allomorph=prog,
            deriv_suffix=deriv,
            derived_pairs=pairs,
            variants=variants,
        )
    except ValueError as exc:
        raise LexiconLoadError(str(exc), lineno) from None


def _parse_morpheme(fields, lineno):
    if len(fields) != 7:
        raise LexiconLoadError("morpheme record needs exactly 7 fields", lineno)
    _, mid, cats, labels, allos, attaches, slot = fields
    categories = tuple(_category(c, lineno, "categories") for c in _split_list(cats))
    labels = tuple(_split_list(labels)) or tuple(c.value for c in categories)
    surfaces = ["" if a == NULL_MARK else normalize(a.lstrip("-")) for a in _split_list(allos)]
    if not surfaces:
        raise LexiconLoadError("morpheme needs at least one allomorph", lineno, "allomorphs")
    try:
        return Morpheme(
            id=mid,
            categories=categories,
            gloss_labels=labels,
            allomorphs=tuple(Allomorph(s) for s in surfaces),
            attaches_to=frozenset(_word_class(w, lineno, "attaches") for w in _split_list(attaches)),
            slot=slot.upper(),
        )
    except SchemaError as exc:
        raise SchemaError(str(exc), lineno) from None


def load_lexicon(source, include_builtin=True):
    """Parse a lexicon document (text, or an iterable of lines)."""
    lines = source.splitlines() if isinstance(source, str) else [l.rstrip("\n") for l in source]
    if not lines:
        raise LexiconLoadError("empty document: missing %lexicon header", 1)
    m = _HEADER.match(lines[0].strip().lstrip("﻿"))
    if not m:
        raise LexiconLoadError("line 1 must be the '%lexicon <version>' header", 1)
    if m.group(1) not in SCHEMA_VERSIONS:
        raise SchemaError(f"unrecognized schema version {m.group(1)!r}", 1)

    version = ""
    entries = []
    extra = []
    seen = {}
    for lineno, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if text.startswith("%version"):
            version = text[len("%version"):].strip()
            continue
        fields = [f.strip() for f in text.split(DELIMITER)]
        kind = fields[0]
        if kind == "stem":
            e = _parse_stem(fields, lineno)
            if e.key in seen:
                raise DuplicateEntryError(
                    f"line {lineno}: duplicate entry ({e.lemma_roman}, {e.word_class}),"
                    f" first defined on line {seen[e.key]}"
                )
            seen[e.key] = lineno
            entries.append(e)
        elif kind == "morpheme":
            extra.append(_parse_morpheme(fields, lineno))
        else:
            raise LexiconLoadError(f"unknown record kind {kind!r}", lineno, "kind")

    morphemes = (BUILTIN_MORPHEMES if include_builtin else ()) + tuple(extra)
    return Lexicon(tuple(entries), morphemes, version)


def _format_attrs(e):
    parts = []
    if e.prog_allomorph:
        parts.append(f"prog={e.prog_allomorph}")
    if e.deriv_suffix:
        parts.append(f"deriv={e.deriv_suffix}")
    for p in e.derived_pairs:
        parts.append(f"pair={p.target.value}:{p.surface}:{p.gloss}")
    for v in e.variants:
        parts.append(f"variant={v}")
    return ";".join(parts)


def dump_lexicon(lex):
    """Canonical document form; ``load_lexicon(dump_lexicon(x)) == x``."""
    out = ["%lexicon 1"]
    if lex.version:
        out.append(f"%version {lex.version}")
    for m in lex.morphemes:
        if m.builtin:
            continue
        out.append(DELIMITER.join([
            "morpheme",
            m.id,
            ",".join(c.value for c in m.categories),
            ",".join(m.gloss_labels),
            ",".join(a.surface_roman or NULL_MARK for a in m.allomorphs),
            ",".join(sorted(w.value for w in m.attaches_to)),
            m.slot,
        ]))
    for e in lex.entries:
        out.append(DELIMITER.join([
            "stem", e.lemma_roman, e.word_class.value, e.gloss_en, e.gloss_bn, e.lemma_ipa, _format_attrs(e),
        ]))
    return "\n".join(out) + "\n"


def read_lexicon_file(path):
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh.read())


def builtin_lexicon(entries: Iterable = ()):
    return Lexicon(tuple(entries))


def golden_lexicon():
    """The packaged lexicon of attested stems."""
    text = resources.files("totokit.data").joinpath("golden.lex").read_text("utf-8")
    return load_lexicon(text)
