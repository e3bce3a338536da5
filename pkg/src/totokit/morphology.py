"""Slot-template analysis and generation of inflected Toto word forms.

The model is purely concatenative: a word is a stem followed by at most one
suffix per slot, in template order. Analysis strips suffixes right to left
and expands every category a matched morpheme can realize.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    DerivationUnsupportedError,
    FeatureConflictError,
    WordClassError,
)
from .lexicon import (
    BARE,
    NOMINAL,
    NULL_MARK,
    TEMPLATES,
    VERBAL,
    LexicalEntry,
    MorphCategory,
    WordClass,
    template_for,
)
from .translit import normalize

C = MorphCategory
TENSES = frozenset({C.PRS, C.PST, C.FUT})

# Tie-break order between competing readings of one surface form. Earlier
# entries are the more frequently attested reading in the documented data.
READING_PRIORITY = {
    cat: i for i, cat in enumerate([
        C.PL, C.DEF, C.NOM, C.ACC, C.GEN, C.ABL, C.INST, C.LOC, C.DAT,
        C.PROG, C.PFV, C.PRS, C.PST, C.FUT, C.HAB, C.IMP, C.EMPH,
    ])
}

# Perfect allomorphs are conditioned by tense.
TAM_CONDITIONS = {
    "asp-pfv-pate": frozenset({C.PRS, C.PST}),
    "asp-pfv-pu": frozenset({C.FUT}),
}

UNATTESTED = "unattested-combination"
_CLASS_ORDER = {wc: i for i, wc in enumerate(WordClass)}


class FeatureBundle:
    """Immutable slot -> category mapping for one word form."""

    __slots__ = ("_items",)

    def __init__(self, items=()):
        items = dict(items)
        order = {s.name: i for t in TEMPLATES for i, s in enumerate(t.slots)}
        self._items = tuple(sorted(
            ((slot, MorphCategory(cat)) for slot, cat in items.items()),
            key=lambda kv: order.get(kv[0], 99),
        ))

    @classmethod
    def from_categories(cls, word_class, categories):
        """Place each category in its slot for ``word_class`` and canonicalize."""
        template = template_for(WordClass(word_class))
        items = {}
        for raw in categories:
            cat = MorphCategory(raw)
            slot = template.slot_for(cat)
            if slot is None:
                raise WordClassError(f"{cat} is not available on {word_class}")
            if slot.name in items:
                raise FeatureConflictError(f"{items[slot.name]} and {cat} both fill slot {slot.name}")
            items[slot.name] = cat
        return canonical_bundle(word_class, cls(items))

    def get(self, slot, default=None):
        for name, cat in self._items:
            if name == slot:
                return cat
        return default

    def __getitem__(self, slot):
        cat = self.get(slot)
        if cat is None:
            raise KeyError(slot)
        return cat

    def __contains__(self, slot):
        return self.get(slot) is not None

    def __iter__(self):
        return (name for name, _ in self._items)

    def __len__(self):
        return len(self._items)

    def items(self):
        return self._items

    @property
    def categories(self):
        return frozenset(cat for _, cat in self._items)

    def __eq__(self, other):
        if not isinstance(other, FeatureBundle):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        inner = ", ".join(f"{s}={c.value}" for s, c in self._items)
        return f"FeatureBundle({inner})"

    def as_dict(self):
        return {s: c.value for s, c in self._items}


def canonical_bundle(word_class, bundle):
    """Fill zero-marked defaults and reject illegal combinations.

    Nominals without overt case are NOM; verbs without tense or aspect are
    read as imperative. Aspect needs a tense.
    """
    template = template_for(WordClass(word_class))
    items = dict(bundle.items())
    for slot, cat in items.items():
        s = template.slot(slot)
        if s is None or cat not in s.categories:
            raise WordClassError(f"{cat} is not available on {word_class}")
    if template is NOMINAL:
        items.setdefault("CASE", C.NOM)
    elif template is VERBAL:
        if "ASPECT" in items:
            if items.get("TAM") not in TENSES:
                raise FeatureConflictError(f"{items['ASPECT']} requires one of PRS, PST, FUT")
        else:
            items.setdefault("TAM", C.IMP)
    return FeatureBundle(items)


def legal_bundles(word_class):
    """Every canonical feature bundle ``generate`` accepts for a class."""
    template = template_for(WordClass(word_class))
    choices = [[None] + sorted(s.categories, key=lambda c: READING_PRIORITY.get(c, 99)) for s in template.slots]
    seen = []
    for combo in itertools.product(*choices):
        items = {s.name: c for s, c in zip(template.slots, combo) if c is not None}
        try:
            b = canonical_bundle(word_class, FeatureBundle(items))
        except FeatureConflictError:
            continue
        if b not in seen:
            seen.append(b)
    return seen


@dataclass(frozen=True)
class Segment:
    surface: str
    ident: str
    gloss: str
    category: MorphCategory | None = None  # None for the stem


@dataclass(frozen=True)
class HypothesizedStem:
    lemma_roman: str
    word_class: WordClass

    @property
    def gloss_en(self):
        return self.lemma_roman

    @property
    def id(self):
        return f"?{self.lemma_roman}.{self.word_class.value}"

    @property
    def key(self):
        return (self.lemma_roman, self.word_class)


@dataclass(frozen=True)
class Analysis:
    token: str
    segments: tuple
    features: FeatureBundle
    stem: object  # LexicalEntry or HypothesizedStem
    flags: tuple = ()
    rank_key: tuple = ()

    @property
    def hypothesized(self):
        return isinstance(self.stem, HypothesizedStem)

    @property
    def pieces(self):
        return tuple(s.surface for s in self.segments)

    @property
    def glosses(self):
        return tuple(s.gloss for s in self.segments)

    @property
    def gloss(self):
        return "-".join(self.glosses)

    @property
    def suffixes(self):
        return self.segments[1:]

    def with_null_case(self, morpheme):
        """Copy with an explicit null NOM segment appended."""
        seg = Segment("", morpheme.id, morpheme.label(C.NOM), C.NOM)
        return Analysis(self.token, self.segments + (seg,), self.features, self.stem, self.flags, self.rank_key)


def segment(analysis):
    """Hyphen-joined surface pieces; a null segment shows as ``∅``."""
    return "-".join(s.surface or NULL_MARK for s in analysis.segments)


def _stem_gloss(stem):
    return stem.gloss_en


def _suffix_table(lex, template):
    """slot index -> [(surface, morpheme)], longest surface first."""
    table = {}
    for m in lex.morphemes:
        if not (m.attaches_to & template.word_classes):
            continue
        idx = template.index(m.slot)
        if not idx:
            continue
        for surf in m.surfaces:
            if surf:
                table.setdefault(idx, []).append((surf, m))
    for rows in table.values():
        rows.sort(key=lambda r: (-len(r[0]), r[1].id))
    return table


def _search(lex, template, table, rest, limit, suffixes, hypothesize):
    known = [e for e in lex.lookup(rest) if e.word_class in template.word_classes]
    for e in known:
        yield e, suffixes
    if hypothesize and not known and template is not BARE:
        wc = WordClass.NOUN if template is NOMINAL else WordClass.VERB
        yield HypothesizedStem(rest, wc), suffixes
    for idx in range(limit - 1, 0, -1):
        for surf, m in table.get(idx, ()):
            if len(rest) > len(surf) and rest.endswith(surf):
                yield from _search(
                    lex, template, table, rest[: -len(surf)], idx, ((surf, m),) + suffixes, hypothesize,
                )


def _reading_key(template, features):
    return tuple(READING_PRIORITY.get(features.get(s.name), 99) for s in template.slots if s.name in features)


def _expand(token, stem, suffixes, template):
    if any(stem.word_class not in m.attaches_to for _, m in suffixes):
        return
    for cats in itertools.product(*(m.categories for _, m in suffixes)):
        items = {}
        for (_, m), cat in zip(suffixes, cats):
            items[m.slot] = cat
        try:
            features = canonical_bundle(stem.word_class, FeatureBundle(items))
        except (FeatureConflictError, WordClassError):
            continue
        tam = features.get("TAM")
        if any(m.id in TAM_CONDITIONS and tam not in TAM_CONDITIONS[m.id] for _, m in suffixes):
            continue
        segs = [Segment(stem.lemma_roman, stem.id, _stem_gloss(stem))]
        segs += [Segment(surf, m.id, m.label(cat), cat) for (surf, m), cat in zip(suffixes, cats)]
        flags = ()
        if C.PL in features.categories and C.DEF in features.categories:
            flags = (UNATTESTED,)
        gloss = "-".join(s.gloss for s in segs)
        seg_text = "-".join(s.surface for s in segs)
        rank = (
            isinstance(stem, HypothesizedStem),
            len(suffixes),
            _reading_key(template, features),
            gloss,
            seg_text,
            _CLASS_ORDER[stem.word_class],
        )
        yield Analysis(token, tuple(segs), features, stem, flags, rank)


def analyze(lex, token, hypothesize_stems=False):
    """All slot-legal analyses of ``token``, best first."""
    tok = normalize(token)
    if not tok:
        raise ValueError("cannot analyze an empty token")
    found = []
    for template in TEMPLATES:
        table = _suffix_table(lex, template)
        limit = len(template.slots) + 1
        for stem, suffixes in _search(lex, template, table, tok, limit, (), hypothesize_stems):
            found.extend(_expand(tok, stem, suffixes, template))
    found.sort(key=lambda a: a.rank_key)
    return found


# --- generation --------------------------------------------------------------

_FIXED_EXPONENTS = {
    C.PL: "bi", C.DEF: "ha", C.NOM: "", C.LOC: "ta", C.DAT: "hiŋ",
    C.INST: "fo", C.ABL: "fo", C.FUT: "ro", C.HAB: "ko", C.EMPH: "he",
}


def _realizes(lex, category, surface):
    return any(category in m.categories and surface in m.surfaces for m in lex.morphemes)


def generate_pieces(lex, stem, features, *, tense_exponent="na", acc="hiŋ", gen="ko", imp_marker=False):
    if isinstance(features, FeatureBundle):
        bundle = canonical_bundle(stem.word_class, features)
    else:
        bundle = FeatureBundle.from_categories(stem.word_class, features)
    tense_exponent, acc, gen = (x.lstrip("-") for x in (tense_exponent, acc, gen))
    for cat, surf in ((C.PRS, tense_exponent), (C.ACC, acc), (C.GEN, gen)):
        if not _realizes(lex, cat, surf):
            raise ValueError(f"{surf!r} does not realize {cat}")
    tam = bundle.get("TAM")
    pieces = [stem.lemma_roman]
    for slot in template_for(stem.word_class).slots:
        cat = bundle.get(slot.name)
        if cat is None:
            continue
        if cat is C.PROG:
            surf = stem.prog
        elif cat is C.PFV:
            surf = "pu" if tam is C.FUT else "pate"
        elif cat in (C.PRS, C.PST):
            surf = tense_exponent
        elif cat is C.ACC:
            surf = acc
        elif cat is C.GEN:
            surf = gen
        elif cat is C.IMP:
            surf = "ko" if imp_marker else ""
        else:
            surf = _FIXED_EXPONENTS[cat]
        if surf:
            pieces.append(surf)
    return pieces


def generate(lex, stem, features, **options):
    """Surface form of ``stem`` inflected for ``features``.

    ``features`` is a FeatureBundle or an iterable of category tags. Options:
    ``tense_exponent`` ("na" or "mi"), ``acc`` ("hiŋ", "hẽ", "hi"), ``gen``
    ("ko", "kɔ") and ``imp_marker`` (emit -ko for IMP).
    """
    return "".join(generate_pieces(lex, stem, features, **options))


# --- derivation ----------------------------------------------------------------

@dataclass(frozen=True)
class DerivationRule:
    source_class: WordClass
    target_class: WordClass
    suffixes: tuple
    category: MorphCategory


DERIVATION_RULES = (
    DerivationRule(WordClass.ADJECTIVE, WordClass.VERB, ("paJoa", "Joa", "paʃoa"), C.DERIV_ADJ2V),
    DerivationRule(WordClass.VERB, WordClass.NOUN, ("va", "pəva"), C.DERIV_V2N),
    DerivationRule(WordClass.NOUN, WordClass.ADJECTIVE, (), C.DERIV_N2ADJ),  # lexicalized pairs only
)


@dataclass(frozen=True)
class DerivedEntry:
    surface: str
    word_class: WordClass
    gloss: str
    source: LexicalEntry
    lexicalized: bool
    suffix: str = ""


_VOWELS = set("aeiou")


def _double_final(word):
    return (
        len(word) == 3
        and word[0] not in _VOWELS
        and word[1] in _VOWELS
        and word[2] not in _VOWELS | set("wxy")
    )


def _english_derivative(gloss, rule):
    if rule.category is C.DERIV_V2N:
        ending = "er"
    elif rule.category is C.DERIV_ADJ2V:
        ending = "en"
    else:
        return gloss
    if gloss.endswith("e"):
        return gloss + ending[1:]
    if _double_final(gloss):
        return gloss + gloss[-1] + ending
    return gloss + ending


def derive(lex, entry, target):
    target = WordClass(target)
    for pair in entry.derived_pairs:
        if pair.target is target:
            return DerivedEntry(pair.surface, target, pair.gloss, entry, True)
    for rule in DERIVATION_RULES:
        if rule.source_class is entry.word_class and rule.target_class is target and rule.suffixes:
            suffix = entry.deriv_suffix or rule.suffixes[0]
            if suffix not in rule.suffixes:
                raise DerivationUnsupportedError(
                    f"{entry.lemma_roman}: pinned suffix -{suffix} is not a {rule.category} allomorph"
                )
            gloss = _english_derivative(entry.gloss_en, rule)
            return DerivedEntry(entry.lemma_roman + suffix, target, gloss, entry, False, suffix)
    raise DerivationUnsupportedError(f"no derivation from {entry.word_class} to {target} for {entry.lemma_roman}")
