import pytest

from totokit.errors import DuplicateEntryError, LexiconLoadError, SchemaError
from totokit.lexicon import (
    BUILTIN_MORPHEMES,
    NULL_MARK,
    LexicalEntry,
    MorphCategory as C,
    WordClass,
    add_entry,
    dump_lexicon,
    load_lexicon,
    lookup_stem,
    morpheme_inventory,
)

EMPTY = "%lexicon 1\n"


def _realizations(lex):
    rel = {}
    for m in lex.morphemes:
        for cat in m.categories:
            rel.setdefault(cat, set()).update(m.surfaces)
    return rel


def test_empty_document_has_builtin_inventory():
    lex = load_lexicon(EMPTY)
    assert len(lex.entries) == 0
    assert len(lex.morphemes) == 18
    pl = [m for m in lex.morphemes if C.PL in m.categories]
    assert [m.surfaces for m in pl] == [("bi",)]


def test_stem_record_is_found():
    lex = load_lexicon(EMPTY + "stem|ha|VERB|go\n")
    (entry,) = lookup_stem(lex, "ha")
    assert entry.word_class is WordClass.VERB and entry.gloss_en == "go"


def test_duplicate_stem_rejected():
    doc = EMPTY + "stem|ha|VERB|go\nstem|ha|VERB|go\n"
    with pytest.raises(DuplicateEntryError, match="line 3"):
        load_lexicon(doc)


def test_same_lemma_in_two_classes_is_fine():
    lex = load_lexicon(EMPTY + "stem|fai|NOUN|house\nstem|fai|VERB|hunt\n")
    assert {e.word_class for e in lookup_stem(lex, "fai")} == {WordClass.NOUN, WordClass.VERB}


def test_unknown_category_is_schema_error():
    doc = EMPTY + "morpheme|x|PLURAL|PL|zz|NOUN|NUM\n"
    with pytest.raises(SchemaError) as info:
        load_lexicon(doc)
    assert info.value.line == 2 and info.value.field == "categories"


def test_unknown_word_class_is_schema_error():
    with pytest.raises(SchemaError) as info:
        load_lexicon(EMPTY + "# comment\nstem|ha|VERBAL|go\n")
    assert info.value.line == 3 and info.value.field == "class"


@pytest.mark.parametrize(
    "doc",
    [
        "",
        "stem|ha|VERB|go\n",
        "%lexicon 9\n",
        EMPTY + "stem|ha\n",
        EMPTY + "word|ha|VERB|go\n",
        EMPTY + "stem|ha|VERB|go|||prog\n",
        EMPTY + "stem|ha|VERB|go|||prog=dəŋ\n",
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(LexiconLoadError):
        load_lexicon(doc)


def test_lookup_examples(lex):
    assert {(e.word_class, e.gloss_en) for e in lookup_stem(lex, "ceŋ")} == {(WordClass.NOUN, "child")}
    assert {(e.word_class, e.gloss_en) for e in lookup_stem(lex, "tui")} == {(WordClass.VERB, "run")}
    assert lookup_stem(lex, "zzz") == frozenset()


def test_lookup_normalizes(lex):
    decomposed = "kũa"  # u + combining tilde
    assert lookup_stem(lex, decomposed) == lookup_stem(lex, "kũa") != frozenset()
    assert lookup_stem(lex, "  ceŋ ") == lookup_stem(lex, "ceŋ")


def test_inventory_contents(lex):
    inv = morpheme_inventory(lex)
    acc = [m for m in inv if C.ACC in m.categories]
    assert [set(m.surfaces) for m in acc] == [{"hẽ", "hiŋ", "hi"}]
    assert all(m.label(C.ACC) == "ACC" for m in acc)
    nom = [m for m in inv if m.is_null]
    assert len(nom) == 1 and nom[0].categories == (C.NOM,) and nom[0].surfaces == ("",)
    assert morpheme_inventory(lex) == inv


def test_inventory_order_is_slot_then_id(lex):
    inv = morpheme_inventory(lex)
    assert [(m.slot_index, m.id) for m in inv] == sorted((m.slot_index, m.id) for m in inv)


def test_builtin_category_surface_relation():
    rel = _realizations(load_lexicon(EMPTY))
    expected = {
        C.PL: {"bi"}, C.FUT: {"ro"}, C.PRS: {"mi", "na"}, C.PST: {"mi", "na"},
        C.PROG: {"daŋ", "diŋ", "duŋ"}, C.PFV: {"pate", "pu"}, C.HAB: {"ko"}, C.IMP: {"ko"},
        C.ACC: {"hẽ", "hiŋ", "hi"}, C.GEN: {"ko", "kɔ"}, C.LOC: {"ta", "fo"},
        C.DAT: {"hiŋ", "ta"}, C.INST: {"fo"}, C.ABL: {"fo"}, C.DEF: {"ha"},
        C.EMPH: {"he"}, C.NOM: {""},
    }
    assert rel == expected


def test_every_label_is_present():
    for m in BUILTIN_MORPHEMES:
        assert len(m.gloss_labels) == len(m.categories)
        assert all(label == label.upper() for label in m.gloss_labels)


def test_declared_morpheme_extends_inventory(lex):
    ins = lex.morpheme("case-ins-fa")
    assert ins.categories == (C.INST,) and ins.label(C.INST) == "INS" and ins.surfaces == ("fa",)


def test_add_entry_is_value_semantics():
    base = load_lexicon(EMPTY)
    cow = LexicalEntry("pika", WordClass.NOUN, "cow")
    grown = add_entry(base, cow)
    assert lookup_stem(grown, "pika") == {cow}
    assert lookup_stem(base, "pika") == frozenset()
    with pytest.raises(DuplicateEntryError):
        add_entry(grown, cow)


def test_entry_invariants():
    with pytest.raises(ValueError):
        LexicalEntry("", WordClass.NOUN, "x")
    with pytest.raises(ValueError):
        LexicalEntry("ceŋ", WordClass.NOUN, "child", prog_allomorph="diŋ")
    assert LexicalEntry("ha", WordClass.VERB, "go").prog == "daŋ"
    assert LexicalEntry("ca:", WordClass.VERB, "eat", prog_allomorph="-diŋ").prog == "diŋ"


def test_golden_lexicon_shape(lex):
    assert len(lex.entries) == 130
    assert lex.version == "golden-1"
    ids = [m.id for m in lex.morphemes]
    assert len(ids) == len(set(ids))
    kua = next(iter(lookup_stem(lex, "kũa")))
    assert kua.gloss_en == "tiger"


def test_lexical_glosses_lowercase_except_person_labels(lex):
    for e in lex.entries:
        if e.word_class is WordClass.PRONOUN:
            continue
        assert e.gloss_en == e.gloss_en.lower(), e


def test_canonical_round_trip(lex):
    doc = dump_lexicon(lex)
    again = load_lexicon(doc)
    assert again == lex
    assert dump_lexicon(again) == doc


def test_null_mark_in_documents():
    lex = load_lexicon(EMPTY + f"morpheme|nom|NOM|NOM|{NULL_MARK}|NOUN|CASE\n", include_builtin=False)
    assert lex.morpheme("nom").is_null
    with pytest.raises(SchemaError, match="only NOM"):
        load_lexicon(EMPTY + f"morpheme|case-zero|ACC|ACC|{NULL_MARK}|NOUN|CASE\n")


def test_synonyms(lex):
    (child,) = [e for e in lookup_stem(lex, "ceŋ")]
    assert [e.lemma_roman for e in lex.synonyms(child)] == ["ape"]
