"""Shared trilingual subword vocabulary and model-ready data preparation.

Byte-pair merges are learned over characters, with spaces folded into a
``▁`` word-boundary marker. Control tags and other specials hold the lowest
ids and are never split or merged.
"""

from __future__ import annotations

import json
import random
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import CorpusValidationError, ModelFormatError
from .corpus import validate

MODEL_FORMAT = "totokit-bpe"
MODEL_VERSION = 1
SPACE = "▁"
IGNORE = -100

PAD, UNK, BOS, EOS, MASK = "<pad>", "<unk>", "<s>", "</s>", "<mask>"
TAG_TO, TAG_BN, TAG_EN = "<2to>", "<2bn>", "<2en>"
SPECIALS = (PAD, UNK, BOS, EOS, MASK, TAG_TO, TAG_BN, TAG_EN)

DIRECTIONS = {
    "to-en": ("toto", "english", TAG_EN),
    "to-bn": ("toto", "bangla", TAG_BN),
    "en-to": ("english", "toto", TAG_TO),
    "bn-to": ("bangla", "toto", TAG_TO),
}

_CHUNK = re.compile(f"{SPACE}*[^{SPACE}]+|{SPACE}+")
_SPECIAL_RE = re.compile("|".join(re.escape(s) for s in SPECIALS))


def _chunks(text):
    return _CHUNK.findall(text.replace(" ", SPACE))


@dataclass(frozen=True)
class SubwordModel:
    vocab: tuple  # unit strings; index is the id
    merges: tuple  # ordered (left, right) pairs
    config: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.vocab[: len(SPECIALS)] != SPECIALS:
            raise ModelFormatError("special tokens must occupy the lowest ids in order")
        if len(set(self.vocab)) != len(self.vocab):
            raise ModelFormatError("vocabulary units must be unique")
        object.__setattr__(self, "_ids", {u: i for i, u in enumerate(self.vocab)})
        object.__setattr__(self, "_ranks", {tuple(p): r for r, p in enumerate(self.merges)})
        object.__setattr__(self, "_cache", {})

    def __len__(self):
        return len(self.vocab)

    def id_of(self, unit):
        return self._ids[unit]

    @property
    def special_ids(self):
        return frozenset(range(len(SPECIALS)))

    @property
    def mask_id(self):
        return SPECIALS.index(MASK)

    def to_json(self):
        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "specials": list(SPECIALS),
            "vocab": list(self.vocab),
            "merges": [list(p) for p in self.merges],
            "config": self.config,
        }
        return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not a model document: {exc.msg}") from None
        if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
            raise ModelFormatError("not a totokit subword model")
        if doc.get("version") != MODEL_VERSION:
            raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
        if tuple(doc.get("specials", ())) != SPECIALS:
            raise ModelFormatError("special token list does not match this version")
        merges = tuple(tuple(p) for p in doc["merges"])
        return cls(tuple(doc["vocab"]), merges, doc.get("config", {}))


def _merge_word(word, pair, joined):
    out, i = [], 0
    while i < len(word):
        if i + 1 < len(word) and word[i] == pair[0] and word[i + 1] == pair[1]:
            out.append(joined)
            i += 2
        else:
            out.append(word[i])
            i += 1
    return tuple(out)


def train_subword(texts, vocab_size, seed=0):
    """Learn merges until the vocabulary holds exactly ``vocab_size`` units.

    Pair frequency ties break on the lexicographically smallest pair, so the
    seed does not change the result; it is kept in the config snapshot.
    """
    texts = [t for t in texts if t]
    if not texts:
        raise ValueError("training needs at least one non-empty text")
    words = Counter()
    for t in texts:
        for piece in _SPECIAL_RE.split(t):
            words.update(_chunks(piece))
    charset = sorted({ch for w in words for ch in w})
    base = len(SPECIALS) + len(charset)
    if vocab_size <= base:
        raise ValueError(f"vocab_size {vocab_size} must exceed specials + characters ({base})")
    vocab = list(SPECIALS) + charset
    corpus = {tuple(w): n for w, n in words.items()}
    merges = []
    while len(vocab) < vocab_size:
        pairs = Counter()
        for word, n in corpus.items():
            for a, b in zip(word, word[1:]):
                pairs[(a, b)] += n
        if not pairs:
            raise ValueError(f"training text supports at most {len(vocab)} units, asked for {vocab_size}")
        best = min(pairs, key=lambda p: (-pairs[p], p))
        joined = best[0] + best[1]
        merges.append(best)
        if joined not in vocab:
            vocab.append(joined)
        corpus = {_merge_word(w, best, joined): n for w, n in corpus.items()}
    config = {"vocab_size": vocab_size, "seed": seed, "algorithm": "bpe", "space_marker": SPACE}
    return SubwordModel(tuple(vocab), tuple(merges), config)


def _segment(m, chunk):
    cached = m._cache.get(chunk)
    if cached is not None:
        return cached
    word = tuple(chunk)
    ranks = m._ranks
    while len(word) > 1:
        best = min(zip(word, word[1:]), key=lambda p: ranks.get(p, float("inf")))
        if best not in ranks:
            break
        word = _merge_word(word, best, best[0] + best[1])
    m._cache[chunk] = word
    return word


def encode(m, text):
    """Ids for ``text``; special tag substrings become their single ids."""
    ids = []
    unk = m.id_of(UNK)
    pos = 0
    for match in _SPECIAL_RE.finditer(text):
        ids.extend(_encode_plain(m, text[pos:match.start()], unk))
        ids.append(m.id_of(match.group()))
        pos = match.end()
    ids.extend(_encode_plain(m, text[pos:], unk))
    return ids


def _encode_plain(m, text, unk):
    out = []
    for chunk in _chunks(text):
        for unit in _segment(m, chunk):
            out.append(m._ids.get(unit, unk))
    return out


def decode(m, ids):
    parts = []
    for i in ids:
        if not isinstance(i, int) or not 0 <= i < len(m.vocab):
            raise ValueError(f"id {i!r} is outside the vocabulary")
        if i == 0:
            continue
        parts.append(m.vocab[i])
    return "".join(parts).replace(SPACE, " ")


@dataclass(frozen=True)
class MaskedBatch:
    input_ids: tuple
    labels: tuple  # original id at masked positions, IGNORE elsewhere
    positions: tuple


def make_mlm_examples(m, ids, mask_rate=0.15, seed=0):
    """Mask each non-special position independently with ``mask_rate``.

    One draw per maskable position in order; if nothing was drawn but some
    position is maskable, one is chosen with the same generator.
    """
    if not 0 < mask_rate < 1:
        raise ValueError("mask_rate must lie strictly between 0 and 1")
    rng = random.Random(seed)
    specials = len(SPECIALS)
    maskable = [i for i, t in enumerate(ids) if t >= specials]
    chosen = [i for i in maskable if rng.random() < mask_rate]
    if not chosen and maskable:
        chosen = [maskable[rng.randrange(len(maskable))]]
    picked = set(chosen)
    inputs = tuple(m.mask_id if i in picked else t for i, t in enumerate(ids))
    labels = tuple(t if i in picked else IGNORE for i, t in enumerate(ids))
    return MaskedBatch(inputs, labels, tuple(chosen))


def _direction(direction):
    key = direction.replace("→", "-").replace(">", "").replace("_", "-")
    if key not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}; expected one of {', '.join(DIRECTIONS)}")
    return DIRECTIONS[key]


def emit_translation_pairs(c, direction):
    """Tagged ``<tag> source<TAB>target`` lines in corpus order."""
    src, tgt, tag = _direction(direction)
    report = validate(c)
    bad = sorted({
        i.entry_id for i in report.issues
        if i.code == "missing-field" and i.message.split()[0] in (src, tgt)
    })
    if bad:
        raise CorpusValidationError(f"entries missing {src} or {tgt}: {', '.join(bad)}", bad)
    lines = []
    for e in c.entries:
        s, t = getattr(e, src), getattr(e, tgt)
        if "\t" in s + t or "\n" in s + t:
            raise CorpusValidationError(f"entry {e.id} contains a tab or newline", [e.id])
        lines.append(f"{tag} {s}\t{t}\n")
    return "".join(lines)
