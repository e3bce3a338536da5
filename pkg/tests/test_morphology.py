import itertools

import pytest
from hypothesis import given, settings, strategies as st

from totokit.errors import DerivationUnsupportedError, FeatureConflictError, WordClassError
from totokit.lexicon import NOMINAL, VERBAL, MorphCategory as C, WordClass, golden_lexicon, lookup_stem
from totokit.morphology import (
    DERIVATION_RULES,
    UNATTESTED,
    FeatureBundle,
    analyze,
    derive,
    generate,
    generate_pieces,
    legal_bundles,
    segment,
)

TENSES = {C.PRS, C.PST, C.FUT}
LEX = golden_lexicon()


def stem(lex, lemma, wc):
    (e,) = [e for e in lookup_stem(lex, lemma) if e.word_class is WordClass(wc)]
    return e


def readings(results):
    return [(segment(a), a.gloss) for a in results]


# --- analyze -------------------------------------------------------------------

def test_plural(lex):
    assert readings(analyze(lex, "ceŋbi")) == [("ceŋ-bi", "child-PL")]


def test_mi_is_tense_ambiguous(lex):
    assert readings(analyze(lex, "hami")) == [("ha-mi", "go-PRS"), ("ha-mi", "go-PST")]


def test_future_is_unambiguous(lex):
    assert readings(analyze(lex, "haro")) == [("ha-ro", "go-FUT")]


def test_progressive_keeps_tense_ambiguity(lex):
    got = readings(analyze(lex, "hadaŋna"))
    assert ("ha-daŋ-na", "go-PROG-PRS") in got and ("ha-daŋ-na", "go-PROG-PST") in got


def test_bare_noun_is_nominative(lex):
    (a,) = analyze(lex, "tebil")
    assert segment(a) == "tebil" and a.gloss == "table"
    assert a.features.get("CASE") is C.NOM


def test_fo_has_three_cases(lex):
    got = analyze(lex, "barafo")
    assert {a.features["CASE"] for a in got} == {C.LOC, C.INST, C.ABL}
    assert len(got) == 3
    assert got[0].gloss == "fence-ABL"


def test_ta_prefers_locative(lex):
    got = analyze(lex, "iskulta")
    assert [a.gloss for a in got] == ["school-LOC", "school-DAT"]


def test_hiŋ_prefers_accusative(lex):
    assert [a.gloss for a in analyze(lex, "kahiŋ")] == ["1SG-ACC", "1SG-DAT"]


def test_pfv_allomorph_conditioning(lex):
    assert readings(analyze(lex, "hapuro")) == [("ha-pu-ro", "go-PFV-FUT")]
    assert analyze(lex, "hapumi") == []
    assert analyze(lex, "hapatero") == []
    assert {a.gloss for a in analyze(lex, "hapatena")} == {"go-PFV-PRS", "go-PFV-PST"}


def test_aspect_needs_tense(lex):
    assert analyze(lex, "hadaŋ") == []
    assert analyze(lex, "hadaŋko") == []


def test_homograph_order(lex):
    got = analyze(lex, "fai")
    assert [a.stem.word_class for a in got] == [WordClass.NOUN, WordClass.VERB]


def test_known_stem_before_more_suffixes(lex):
    # akɔ is a pronoun lemma and also a-kɔ '3-GEN'
    got = analyze(lex, "akɔ")
    assert got[0].gloss == "3SG"
    assert "3-GEN" in [a.gloss for a in got]


def test_unattested_def_pl_flag(lex):
    (a,) = [a for a in analyze(lex, "ceŋbiha") if a.gloss == "child-PL-DEF"]
    assert UNATTESTED in a.flags
    assert all(UNATTESTED not in a.flags for a in analyze(lex, "ceŋbi"))


def test_empty_token_rejected(lex):
    with pytest.raises(ValueError):
        analyze(lex, "   ")


def test_unknown_stem(lex):
    assert analyze(lex, "qqqbi") == []
    hyp = analyze(lex, "qqqbi", hypothesize_stems=True)
    assert hyp and all(a.hypothesized for a in hyp)
    assert ("qqq-bi", "qqq-PL") in readings(hyp)


def test_hypothesized_after_known(lex):
    got = analyze(lex, "ceŋbi", hypothesize_stems=True)
    assert not got[0].hypothesized
    seen_hyp = False
    for a in got:
        seen_hyp = seen_hyp or a.hypothesized
        assert not (seen_hyp and not a.hypothesized)


def test_segment_examples(lex):
    assert segment(analyze(lex, "hadaŋna")[0]) == "ha-daŋ-na"
    assert segment(analyze(lex, "ceŋbi")[0]) == "ceŋ-bi"


# --- generate ------------------------------------------------------------------

def test_generate_examples(lex):
    ha = stem(lex, "ha", "VERB")
    assert generate(lex, ha, {C.FUT}) == "haro"
    assert generate(lex, ha, {C.PFV, C.FUT}) == "hapuro"
    assert generate(lex, ha, set()) == "ha"
    assert generate(lex, stem(lex, "ceŋ", "NOUN"), {C.PL}) == "ceŋbi"


def test_generate_options(lex):
    ha = stem(lex, "ha", "VERB")
    assert generate(lex, ha, {C.PRS}) == "hana"
    assert generate(lex, ha, {C.PST}, tense_exponent="mi") == "hami"
    assert generate(lex, ha, {C.PFV, C.PRS}) == "hapatena"
    assert generate(lex, ha, {C.IMP}) == "ha"
    assert generate(lex, ha, {C.IMP}, imp_marker=True) == "hako"
    assert generate(lex, ha, {C.PROG, C.PRS}) == "hadaŋna"
    ca = stem(lex, "ca:", "VERB")
    assert generate(lex, ca, {C.PROG, C.PST}, tense_exponent="mi") == "ca:diŋmi"
    ka = stem(lex, "ka", "PRONOUN")
    assert generate(lex, ka, {C.ACC}) == "kahiŋ"
    assert generate(lex, ka, {C.ACC}, acc="hẽ") == "kahẽ"
    assert generate(lex, ka, {C.GEN}, gen="-kɔ") == "kakɔ"
    with pytest.raises(ValueError):
        generate(lex, ka, {C.ACC}, acc="ta")


def test_generate_errors(lex):
    ha = stem(lex, "ha", "VERB")
    with pytest.raises(FeatureConflictError):
        generate(lex, ha, {C.PRS, C.PST})
    with pytest.raises(WordClassError):
        generate(lex, ha, {C.PL})
    with pytest.raises(FeatureConflictError):
        generate(lex, ha, {C.PROG})
    with pytest.raises(FeatureConflictError):
        generate(lex, ha, {C.PFV, C.HAB})
    with pytest.raises(WordClassError):
        generate(lex, stem(lex, "ico", "NUMERAL"), {C.PL})


def _bundle_oracle(template, constraint):
    choices = [[None, *slot.categories] for slot in template.slots]
    out = set()
    for combo in itertools.product(*choices):
        items = {s.name: c for s, c in zip(template.slots, combo) if c is not None}
        if constraint(items):
            out.add(frozenset(items.items()))
    return out


def test_legal_bundle_counts():
    nouns = _bundle_oracle(NOMINAL, lambda f: "CASE" in f)
    verbs = _bundle_oracle(
        VERBAL,
        lambda f: "TAM" in f and ("ASPECT" not in f or f["TAM"] in TENSES),
    )
    assert len(nouns) == 28 and len(verbs) == 22
    assert {frozenset(b.items()) for b in legal_bundles(WordClass.NOUN)} == nouns
    assert {frozenset(b.items()) for b in legal_bundles(WordClass.VERB)} == verbs
    assert legal_bundles(WordClass.PRONOUN) == legal_bundles(WordClass.NOUN)
    assert legal_bundles(WordClass.ADVERB) == [FeatureBundle()]


def test_bundle_canonical_defaults():
    assert FeatureBundle.from_categories(WordClass.NOUN, [C.PL])["CASE"] is C.NOM
    assert FeatureBundle.from_categories(WordClass.VERB, [])["TAM"] is C.IMP
    assert FeatureBundle.from_categories(WordClass.VERB, [C.EMPH])["TAM"] is C.IMP


# --- properties ----------------------------------------------------------------

@st.composite
def stem_and_bundle(draw):
    entry = draw(st.sampled_from(LEX.entries))
    bundle = draw(st.sampled_from(legal_bundles(entry.word_class)))
    return entry, bundle


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_round_trip_with_options(data):
    lex = LEX
    entry, bundle = data.draw(stem_and_bundle())
    opts = {
        "tense_exponent": data.draw(st.sampled_from(["mi", "na"])),
        "acc": data.draw(st.sampled_from(["hẽ", "hiŋ", "hi"])),
        "gen": data.draw(st.sampled_from(["ko", "kɔ"])),
        "imp_marker": data.draw(st.booleans()),
    }
    surface = generate(lex, entry, bundle, **opts)
    found = analyze(lex, surface)
    assert any(a.stem == entry and a.features == bundle for a in found)


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_analysis_invariants(data):
    lex = LEX
    entry, bundle = data.draw(stem_and_bundle())
    surface = generate(lex, entry, bundle, tense_exponent=data.draw(st.sampled_from(["mi", "na"])))
    found = analyze(lex, surface)
    assert found == analyze(lex, surface)
    for a in found:
        assert "".join(a.pieces) == surface
        assert segment(a).replace("-", "") == surface
        for s in a.suffixes:
            assert s.gloss == s.gloss.upper()
        cats = [s.category for s in a.suffixes]
        if C.DEF in cats and C.PL in cats:
            assert cats.index(C.PL) < cats.index(C.DEF)
        tam_at = [i for i, c in enumerate(cats) if c in (C.PRS, C.PST, C.FUT, C.HAB, C.IMP)]
        if C.EMPH in cats and tam_at:
            assert tam_at[0] < cats.index(C.EMPH)
        tam = [s for s in a.suffixes if s.category in (C.PRS, C.PST, C.FUT, C.HAB, C.IMP)]
        if tam:
            assert (tam[0].category is C.FUT) == (tam[0].surface == "ro")
            if tam[0].surface in ("mi", "na"):
                twins = [b for b in found if b.pieces == a.pieces and b.stem == a.stem]
                other = {b.features.get("TAM") for b in twins}
                assert other == {C.PRS, C.PST}


@settings(max_examples=200, deadline=None)
@given(text=st.text(alphabet="aeioubdhkmnŋtɔəfrpcl", min_size=1, max_size=10))
def test_pieces_always_concatenate(text):
    for a in analyze(LEX, text, hypothesize_stems=True):
        assert "".join(a.pieces) == text
        assert len(a.segments) == len(a.glosses)


# --- derivation ----------------------------------------------------------------

V2N = [
    ("təi", "təiva", "walker"), ("ca", "cava", "eater"), ("kəlai", "kəlaiva", "player"),
    ("pərai", "pəraiva", "reader"), ("la", "lava", "writer"), ("t^hui", "t^huiva", "runner"),
    ("jɔ", "jɔva", "talker"),
]
ADJ2V = [
    ("hai", "haipaJoa", "brighten"), ("edaŋ", "edaŋpaJoa", "shorten"), ("təbo", "təboJoa", "widen"),
    ("haŋpapa", "haŋpapaJoa", "whiten"), ("daʃi", "daʃipaʃoa", "blacken"), ("ælui", "æluipaʃoa", "redden"),
    ("dilen", "dilenpaʃoa", "darken"), ("peleŋ", "peleŋpaʃoa", "lighten"),
]


@pytest.mark.parametrize("lemma,surface,gloss", V2N)
def test_verb_to_noun(lex, lemma, surface, gloss):
    d = derive(lex, stem(lex, lemma, "VERB"), WordClass.NOUN)
    assert (d.surface, d.gloss, d.word_class, d.lexicalized) == (surface, gloss, WordClass.NOUN, False)


@pytest.mark.parametrize("lemma,surface,gloss", ADJ2V)
def test_adjective_to_verb(lex, lemma, surface, gloss):
    d = derive(lex, stem(lex, lemma, "ADJECTIVE"), "VERB")
    assert (d.surface, d.gloss) == (surface, gloss)


def test_noun_to_adjective_is_lexicalized(lex):
    ʃedaŋ = stem(lex, "ʃedaŋ", "NOUN")
    d = derive(lex, ʃedaŋ, WordClass.ADJECTIVE)
    assert (d.surface, d.gloss, d.lexicalized) == ("ʃedaŋva", "angry", True)
    with pytest.raises(DerivationUnsupportedError):
        derive(lex, stem(lex, "pika", "NOUN"), WordClass.ADJECTIVE)


def test_unsupported_derivation(lex):
    with pytest.raises(DerivationUnsupportedError):
        derive(lex, stem(lex, "pika", "NOUN"), WordClass.VERB)


def test_rule_inventory():
    rules = {(r.source_class, r.target_class): r.suffixes for r in DERIVATION_RULES}
    assert rules[(WordClass.ADJECTIVE, WordClass.VERB)][:2] == ("paJoa", "Joa")
    assert rules[(WordClass.VERB, WordClass.NOUN)][0] == "va"
    assert "pəva" in rules[(WordClass.VERB, WordClass.NOUN)]
    assert rules[(WordClass.NOUN, WordClass.ADJECTIVE)] == ()


def test_generate_pieces_match_segments(lex):
    ha = stem(lex, "ha", "VERB")
    assert generate_pieces(lex, ha, {C.PROG, C.PST, C.EMPH}) == ["ha", "daŋ", "na", "he"]
