"""Interlinear glossed text: segmented surface, gloss line, free translation."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .lexicon import NULL_MARK, MorphCategory
from .morphology import analyze
from .translit import normalize

C = MorphCategory
UNKNOWN_GLOSS = "???"

# Temporal adverbs that settle the reading of tense-ambiguous verbs.
TEMPORAL_ADVERBS = {"ainji": C.PST, "neha": C.PRS, "jukuŋ": C.FUT}


@dataclass(frozen=True)
class IGT:
    tokens: tuple = ()
    segments: tuple = ()  # per token: surface pieces ("" = null morpheme)
    glosses: tuple = ()  # per token: one label per piece
    translation: str = ""
    unresolved: tuple = ()
    notes: tuple = ()
    analyses: tuple = field(default=(), compare=False)  # per token, all candidates

    def __post_init__(self):
        if len(self.segments) != len(self.glosses) or len(self.tokens) != len(self.segments):
            raise ValueError("IGT rows differ in token count")
        for pieces, labels in zip(self.segments, self.glosses):
            if len(pieces) != len(labels):
                raise ValueError(f"segment/gloss mismatch in {pieces!r}")

    @property
    def surface_line(self):
        return tuple("-".join(p or NULL_MARK for p in pieces) for pieces in self.segments)

    @property
    def gloss_line(self):
        return tuple("-".join(labels) for labels in self.glosses)

    def __bool__(self):
        return bool(self.tokens) or bool(self.translation)


def _hint(token):
    """Split a pre-hyphenated token into (pieces, explicit-null positions)."""
    pieces = [p for p in token.split("-") if p]
    return pieces


def resolve_token(lex, token, hypothesize=False):
    """Analyses of one sentence token, honouring hyphen segmentation hints."""
    pieces = _hint(token)
    overt = [p for p in pieces if p != NULL_MARK]
    if not overt:
        return []
    surface = "".join(overt)
    candidates = analyze(lex, surface, hypothesize_stems=hypothesize)
    if not candidates and surface != surface.lower():
        candidates = analyze(lex, surface.lower(), hypothesize_stems=hypothesize)
        overt = [p.lower() for p in overt]
    if len(pieces) == 1:
        return candidates
    want = tuple(overt)
    matched = [a for a in candidates if a.pieces == want]
    if NULL_MARK not in pieces:
        return matched
    # ∅ is only licensed as the (final) null NOM case exponent.
    if pieces[-1] != NULL_MARK or pieces.count(NULL_MARK) != 1:
        return []
    out = []
    for a in matched:
        if a.features.get("CASE") is C.NOM and all(s.category is not C.NOM for s in a.suffixes):
            nom = next(m for m in lex.morphemes if m.is_null)
            out.append(a.with_null_case(nom))
    return out


def choose(analyses, prefer=frozenset()):
    """Pick the reading to display.

    Segmentation always follows the top-ranked analysis; ``prefer`` only
    selects among readings that share that segmentation.
    """
    if not analyses:
        return None
    best = analyses[0]
    same = [a for a in analyses if a.pieces == best.pieces]
    return min(same, key=lambda a: (-len(prefer & a.features.categories), a.rank_key))


def _sentence_tense(tokens):
    for tok in tokens:
        cat = TEMPORAL_ADVERBS.get(tok.lower())
        if cat is not None:
            return cat
    return None


def gloss_sentence(lex, sentence, *, translation="", tense=None, force=(), all_analyses=False, hypothesize=False):
    """Gloss each whitespace token with its preferred analysis.

    ``tense`` forces PRS or PST for every tense-ambiguous verb; otherwise a
    temporal adverb in the sentence decides, falling back to PRS. ``force``
    is a set of extra categories to prefer (for example LOC over ABL on -fo).
    """
    tokens = tuple(normalize(sentence).split()) if sentence else ()
    adverb_tense = _sentence_tense(tokens)
    prefer = {MorphCategory(c) for c in force}
    if tense is not None:
        prefer.add(MorphCategory(tense))
    elif adverb_tense is not None:
        prefer.add(adverb_tense)
    prefer = frozenset(prefer)

    segments, glosses, unresolved, notes, alts = [], [], [], [], []
    for i, tok in enumerate(tokens):
        candidates = resolve_token(lex, tok, hypothesize)
        alts.append(tuple(candidates) if all_analyses else ())
        chosen = choose(candidates, prefer)
        if chosen is None:
            segments.append((tok,))
            glosses.append((UNKNOWN_GLOSS,))
            unresolved.append(i)
            continue
        segments.append(chosen.pieces)
        glosses.append(chosen.glosses)
        tam = chosen.features.get("TAM")
        if adverb_tense is C.FUT and tense is None and tam in (C.PRS, C.PST):
            notes.append(f"token {i}: {tam} verb with a future time adverb")
    return IGT(
        tokens=tokens,
        segments=tuple(segments),
        glosses=tuple(glosses),
        translation=translation,
        unresolved=tuple(unresolved),
        notes=tuple(notes),
        analyses=tuple(alts),
    )


def _width(text):
    w = 0
    for ch in text:
        if unicodedata.combining(ch):
            continue
        w += 2 if unicodedata.east_asian_width(ch) in "WF" else 1
    return w


def _pad(text, width):
    return text + " " * (width - _width(text))


def format_igt(igt, min_col_gap=2):
    """Render an IGT as column-aligned monospace text."""
    if min_col_gap < 1:
        raise ValueError("min_col_gap must be at least 1")
    lines = []
    if igt.tokens:
        top, bottom = [], []
        for surf, gl in zip(igt.surface_line, igt.gloss_line):
            width = max(_width(surf), _width(gl)) + min_col_gap
            top.append(_pad(surf, width))
            bottom.append(_pad(gl, width))
        lines.append("".join(top).rstrip())
        lines.append("".join(bottom).rstrip())
    if igt.translation:
        t = igt.translation.strip()
        if not (t.startswith("'") and t.endswith("'")) and not (t.startswith("‘") and t.endswith("’")):
            t = f"'{t}'"
        lines.append(t)
    return "\n".join(lines)


@dataclass(frozen=True)
class GlossReport:
    unresolved: tuple  # (entry id, token indices)
    total_tokens: int
    resolved_tokens: int

    @property
    def resolution_rate(self):
        if not self.total_tokens:
            return 1.0
        return self.resolved_tokens / self.total_tokens


def batch_gloss(lex, corpus, *, force=None, tense=None, hypothesize=False):
    """Gloss every entry's Toto field; the English field is the translation.

    ``force`` optionally maps entry id to a set of preferred categories.
    Per-entry failures go to the report; nothing is raised.
    """
    force = force or {}
    igts, bad = [], []
    total = resolved = 0
    for entry in corpus.entries:
        igt = gloss_sentence(
            lex, entry.toto, translation=entry.english, tense=tense,
            force=force.get(entry.id, ()), hypothesize=hypothesize,
        )
        igts.append(igt)
        total += len(igt.tokens)
        resolved += len(igt.tokens) - len(igt.unresolved)
        if igt.unresolved:
            bad.append((entry.id, igt.unresolved))
    return igts, GlossReport(tuple(bad), total, resolved)
