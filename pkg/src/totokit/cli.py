"""``toto`` command-line entry point.

Exit status is 0 on success, 1 on domain errors (one ``error: <code>: <msg>``
line on stderr) and 2 on usage errors. Randomized commands echo their seed
on stderr as ``seed=<n>``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from . import corpus as corpus_mod
from . import gloss as gloss_mod
from . import tokenizer as tok_mod
from . import translit as translit_mod
from .errors import CorpusValidationError, TotoError, UnknownStemError
from .lexicon import MorphCategory, WordClass, golden_lexicon, read_lexicon_file
from .morphology import analyze, derive, generate_pieces

CONFIG_ENV = "TOTOKIT_CONFIG"


@dataclass
class CliConfig:
    lexicon: str | None = None  # None = packaged golden lexicon
    table: str | None = None  # None = packaged provisional table
    format: str = "json"
    seed: int = 0
    output: str = "text"

    @classmethod
    def load(cls, path):
        if not path:
            return cls()
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ValueError(f"config {path} must be a JSON object")
        known = {k: doc[k] for k in ("lexicon", "table", "format", "seed", "output") if k in doc}
        cfg = cls(**known)
        base = os.path.dirname(os.path.abspath(path))
        for key in ("lexicon", "table"):
            value = getattr(cfg, key)
            if value and not os.path.isabs(value):
                setattr(cfg, key, os.path.join(base, value))
        return cfg


class UsageError(Exception):
    pass


# --- helpers --------------------------------------------------------------------

def _emit(args, text, path=None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def _lexicon(args):
    return read_lexicon_file(args.lexicon) if args.lexicon else golden_lexicon()


def _table(args):
    return translit_mod.read_table_file(args.table) if args.table else translit_mod.default_table()


def _seed(args):
    seed = args.seed if args.seed is not None else args.config.seed
    print(f"seed={seed}", file=sys.stderr)
    return seed


def _corpus_format(args, path):
    fmt = getattr(args, "format", None) or None
    if fmt:
        return fmt
    if str(path).endswith((".tsv", ".txt")):
        return "tsv"
    if str(path).endswith((".json", ".jsonl")):
        return "json"
    return args.config.format


def _read_corpus(args, path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return corpus_mod.read_corpus(text, _corpus_format(args, path), strict=getattr(args, "strict", False))


def _categories(text):
    parts = [p for p in re.split(r"[,+.\-\s]+", text.strip()) if p]
    try:
        return [MorphCategory(p.upper()) for p in parts]
    except ValueError as exc:
        raise UsageError(f"unknown feature in {text!r}") from exc


def _ratios(text):
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"ratios must be three comma-separated numbers, got {text!r}") from None
    if len(values) != 3 or any(v < 0 for v in values):
        raise UsageError("ratios must be three non-negative numbers")
    if abs(sum(values) - 1.0) > 1e-9:
        raise UsageError(f"ratios {text} do not sum to 1")
    return values


def _analysis_obj(a):
    return {
        "segments": "-".join(p or gloss_mod.NULL_MARK for p in a.pieces),
        "gloss": a.gloss,
        "stem": a.stem.lemma_roman,
        "word_class": a.stem.word_class.value,
        "features": {k: str(v) for k, v in a.features.items()},
        "flags": list(a.flags),
        "hypothesized": a.hypothesized,
    }


def _igt_obj(igt, entry_id=None):
    d = {
        "surface": list(igt.surface_line),
        "gloss": list(igt.gloss_line),
        "translation": igt.translation,
        "unresolved": list(igt.unresolved),
    }
    if entry_id is not None:
        d = {"id": entry_id, **d}
    if igt.notes:
        d["notes"] = list(igt.notes)
    if any(igt.analyses):
        d["alternatives"] = [[_analysis_obj(a) for a in alts] for alts in igt.analyses]
    return d


def _igt_text(igt):
    out = gloss_mod.format_igt(igt)
    if any(igt.analyses):
        for i, alts in enumerate(igt.analyses):
            if len(alts) > 1:
                readings = " | ".join(a.gloss for a in alts)
                out += f"\n  {igt.tokens[i]}: {readings}"
    return out


# --- commands -----------------------------------------------------------------------

def cmd_analyze(args):
    lex = _lexicon(args)
    results = analyze(lex, args.token, hypothesize_stems=args.hypothesize)
    if not results:
        raise UnknownStemError(f"no analysis for {args.token!r}")
    if args.output == "json":
        _emit(args, _dumps([_analysis_obj(a) for a in results]))
        return
    lines = []
    for a in results:
        line = f"{'-'.join(p or gloss_mod.NULL_MARK for p in a.pieces)}  {a.gloss}"
        if a.flags:
            line += f"  [{', '.join(a.flags)}]"
        lines.append(line)
    _emit(args, "\n".join(lines) + "\n")


def cmd_generate(args):
    lex = _lexicon(args)
    feats = _categories(args.features) if args.features else []
    stems = [e for e in lex.lookup(args.stem) if args.word_class is None or e.word_class.value == args.word_class]
    if not stems:
        raise UnknownStemError(f"{args.stem!r} is not in the lexicon")
    options = {"tense_exponent": args.tense_exponent, "acc": args.acc, "gen": args.gen, "imp_marker": args.imp_marker}
    error = None
    for stem in stems:
        try:
            pieces = generate_pieces(lex, stem, feats, **options)
            break
        except TotoError as exc:
            error = error or exc
    else:
        raise error
    if args.output == "json":
        _emit(args, _dumps({"stem": stem.lemma_roman, "word_class": stem.word_class.value,
                            "surface": "".join(pieces), "segments": "-".join(pieces)}))
    else:
        _emit(args, ("-".join(pieces) if args.segmented else "".join(pieces)) + "\n")


def cmd_derive(args):
    lex = _lexicon(args)
    target = WordClass(args.target.upper())
    stems = lex.lookup(args.stem)
    if not stems:
        raise UnknownStemError(f"{args.stem!r} is not in the lexicon")
    error = None
    for stem in stems:
        try:
            d = derive(lex, stem, target)
            break
        except TotoError as exc:
            error = error or exc
    else:
        raise error
    if args.output == "json":
        _emit(args, _dumps({"surface": d.surface, "word_class": d.word_class.value, "gloss": d.gloss,
                            "source": d.source.id, "lexicalized": d.lexicalized, "suffix": d.suffix}))
    else:
        kind = "lexicalized" if d.lexicalized else f"-{d.suffix}"
        _emit(args, f"{d.surface}  {d.gloss}  ({kind})\n")


def cmd_gloss(args):
    lex = _lexicon(args)
    force = _categories(args.force) if args.force else ()
    opts = {"tense": args.tense, "force": force, "all_analyses": args.all, "hypothesize": args.hypothesize}
    if args.file:
        fmt = args.format or ("lines" if not args.file.endswith((".json", ".jsonl", ".tsv")) else None)
        if fmt == "lines":
            with open(args.file, encoding="utf-8") as fh:
                items = [(f"s{i}", line.strip(), "") for i, line in enumerate(fh, start=1) if line.strip()]
        else:
            c = _read_corpus(args, args.file)
            items = [(e.id, e.toto, e.english) for e in c.entries]
    elif args.sentence is not None:
        items = [(None, args.sentence, args.translation or "")]
    else:
        raise UsageError("gloss needs a sentence or --file")
    igts = [(i, gloss_mod.gloss_sentence(lex, s, translation=t, **opts)) for i, s, t in items]
    if args.output == "json":
        _emit(args, _dumps([_igt_obj(g, i) for i, g in igts]))
    else:
        blocks = []
        for i, g in igts:
            head = f"# {i}\n" if i is not None and len(igts) > 1 else ""
            blocks.append(head + _igt_text(g))
        _emit(args, "\n\n".join(blocks) + "\n")
    total = sum(len(g.tokens) for _, g in igts)
    bad = sum(len(g.unresolved) for _, g in igts)
    if bad:
        print(f"unresolved tokens: {bad} of {total}", file=sys.stderr)


def cmd_translit(args):
    table = _table(args)
    text = args.text
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    if text is None:
        raise UsageError("translit needs text or --file")
    fn = translit_mod.to_roman if args.reverse else translit_mod.to_script
    lines = [fn(table, line) for line in text.splitlines() or [""]]
    unmatched = sum(r.unmatched for r in lines)
    if args.output == "json":
        _emit(args, _dumps({"text": "\n".join(r.text for r in lines), "unmatched": unmatched}))
    else:
        _emit(args, "\n".join(r.text for r in lines) + "\n")
    if unmatched:
        print(f"unmatched characters: {unmatched}", file=sys.stderr)


def cmd_corpus_validate(args):
    c = _read_corpus(args, args.input)
    report = corpus_mod.validate(c, script=args.script)
    if args.output == "json":
        _emit(args, _dumps({
            "passed": report.passed,
            "counts": report.counts,
            "issues": [vars(i) for i in report.issues],
        }))
    else:
        lines = [f"{i.entry_id}\t{i.severity}\t{i.code}\t{i.message}" for i in report.issues]
        lines.append(f"{'pass' if report.passed else 'fail'}: {len(c)} entries, {len(report.issues)} issues")
        _emit(args, "\n".join(lines) + "\n")
    if not report.passed:
        bad = sorted({i.entry_id for i in report.issues if i.severity == corpus_mod.ERROR})
        raise CorpusValidationError(f"{len(bad)} entries failed validation", bad)


def cmd_corpus_convert(args):
    c = _read_corpus(args, args.input)
    text, notices = corpus_mod.write_corpus(c, args.to, strict=args.strict)
    _emit(args, text, args.out)
    for n in notices:
        print(f"notice: {n}", file=sys.stderr)


def cmd_corpus_split(args):
    ratios = _ratios(args.ratios)
    seed = _seed(args)
    c = _read_corpus(args, args.input)
    parts = corpus_mod.split(c, ratios, seed)
    names = ("train", "val", "test")
    paths = [getattr(args, n) for n in names]
    if args.out_dir:
        ext = "tsv" if corpus_mod.FORMATS[args.to] == "tsv" else "json"
        paths = [p or os.path.join(args.out_dir, f"{n}.{ext}") for p, n in zip(paths, names)]
    for name, part, path in zip(names, parts, paths):
        if path:
            text, _ = corpus_mod.write_corpus(part, args.to)
            _emit(args, text, path)
    if args.output == "json":
        _emit(args, _dumps({n: [e.id for e in p.entries] for n, p in zip(names, parts)}))
    else:
        _emit(args, "".join(f"{n}\t{len(p)}\t{' '.join(e.id for e in p.entries)}\n" for n, p in zip(names, parts)))


def cmd_corpus_augment(args):
    seed = _seed(args)
    lex = _lexicon(args)
    c = _read_corpus(args, args.input)
    strategies = [s for s in args.strategies.split(",") if s]
    templates = None
    if args.templates:
        with open(args.templates, encoding="utf-8") as fh:
            templates = json.load(fh)
    out = corpus_mod.augment(c, lex, strategies, seed, templates=templates)
    text, notices = corpus_mod.write_corpus(out, args.to or _corpus_format(args, args.input))
    _emit(args, text, args.out)
    for n in notices:
        print(f"notice: {n}", file=sys.stderr)


def cmd_corpus_stats(args):
    lex = _lexicon(args)
    c = _read_corpus(args, args.input)
    s = corpus_mod.stats(c, lex).as_dict()
    if args.output == "json":
        _emit(args, _dumps(s))
        return
    lines = [f"entries\t{s['entries']}"]
    for lang in corpus_mod.REQUIRED:
        lines.append(f"tokens.{lang}\t{s['tokens'][lang]}\tttr\t{s['type_token_ratio'][lang]:.4f}")
    lines.append(f"coverage\t{s['coverage']:.4f}")
    for cat, n in s["category_freq"].items():
        lines.append(f"category\t{cat}\t{n}")
    for key, n in s["morpheme_freq"].items():
        lines.append(f"morpheme\t{key}\t{n}")
    _emit(args, "\n".join(lines) + "\n")


def _load_model(path):
    with open(path, encoding="utf-8") as fh:
        return tok_mod.SubwordModel.from_json(fh.read())


def cmd_tok_train(args):
    seed = _seed(args)
    texts = []
    for path in args.inputs:
        c = _read_corpus(args, path)
        texts.extend(f for e in c.entries for f in e.triple)
    model = tok_mod.train_subword(texts, args.vocab_size, seed)
    _emit(args, model.to_json(), args.model)
    print(f"vocab={len(model)}", file=sys.stderr)


def cmd_tok_encode(args):
    m = _load_model(args.model)
    ids = tok_mod.encode(m, args.text)
    if args.output == "json":
        _emit(args, _dumps(ids))
    else:
        _emit(args, " ".join(map(str, ids)) + "\n")


def cmd_tok_decode(args):
    m = _load_model(args.model)
    ids = []
    for raw in args.ids:
        for part in raw.replace(",", " ").split():
            try:
                ids.append(int(part))
            except ValueError:
                raise UsageError(f"not an id: {part!r}") from None
    _emit(args, tok_mod.decode(m, ids) + "\n")


def cmd_tok_mlm(args):
    seed = _seed(args)
    m = _load_model(args.model)
    c = _read_corpus(args, args.input)
    lines = []
    for e in c.entries:
        ids = tok_mod.encode(m, getattr(e, args.field))
        batch = tok_mod.make_mlm_examples(m, ids, args.mask_rate, f"{seed}:{e.id}")
        lines.append(json.dumps({"id": e.id, "input_ids": list(batch.input_ids), "labels": list(batch.labels)}))
    _emit(args, "".join(line + "\n" for line in lines), args.out)


def cmd_tok_pairs(args):
    c = _read_corpus(args, args.input)
    _emit(args, tok_mod.emit_translation_pairs(c, args.direction), args.out)


# --- parser -----------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="toto", description="Toto morphology workbench and corpus toolkit.")
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("--lexicon", help="lexicon document (default: packaged golden lexicon)")
    p.add_argument("--table", help="transliteration table (default: packaged provisional table)")
    p.add_argument("--output", choices=("text", "json"), help="output mode")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    a = sub.add_parser("analyze", help="list analyses of a word form")
    a.add_argument("token")
    a.add_argument("--hypothesize", action="store_true", help="allow unknown stems")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("generate", help="inflect a stem")
    g.add_argument("stem")
    g.add_argument("features", nargs="?", default="", help="e.g. PFV,FUT or PL-ACC")
    g.add_argument("--class", dest="word_class", choices=[w.value for w in WordClass])
    g.add_argument("--tense-exponent", default="na", choices=("na", "mi"))
    g.add_argument("--acc", default="hiŋ", choices=("hiŋ", "hẽ", "hi"))
    g.add_argument("--gen", default="ko", choices=("ko", "kɔ"))
    g.add_argument("--imp-marker", action="store_true", help="write IMP as -ko")
    g.add_argument("--segmented", action="store_true", help="hyphenate the output")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("derive", help="derive a word of another class")
    d.add_argument("stem")
    d.add_argument("target", help="target word class")
    d.set_defaults(func=cmd_derive)

    gl = sub.add_parser("gloss", help="interlinear gloss a sentence or file")
    gl.add_argument("sentence", nargs="?")
    gl.add_argument("--file")
    gl.add_argument("--format", choices=("json", "tsv", "lines"))
    gl.add_argument("--translation")
    gl.add_argument("--tense", choices=("PRS", "PST"))
    gl.add_argument("--force", help="categories to prefer, e.g. LOC,IMP")
    gl.add_argument("--all", action="store_true", help="list every reading of ambiguous tokens")
    gl.add_argument("--hypothesize", action="store_true")
    gl.set_defaults(func=cmd_gloss)

    t = sub.add_parser("translit", help="transliterate between Roman and Toto script")
    t.add_argument("text", nargs="?")
    t.add_argument("--file")
    direction = t.add_mutually_exclusive_group()
    direction.add_argument("--to-script", dest="reverse", action="store_false", help="Roman to script (default)")
    direction.add_argument("--to-roman", "--reverse", dest="reverse", action="store_true", help="script to Roman")
    t.set_defaults(func=cmd_translit, reverse=False)

    c = sub.add_parser("corpus", help="corpus operations")
    csub = c.add_subparsers(dest="corpus_command", metavar="ACTION")
    csub.required = True

    def corpus_cmd(name, func, help):
        sp = csub.add_parser(name, help=help)
        sp.add_argument("input")
        sp.add_argument("--format", choices=sorted(corpus_mod.FORMATS), help="input format")
        sp.add_argument("--strict", action="store_true", help="legacy tabular: no escapes")
        sp.set_defaults(func=func)
        return sp

    v = corpus_cmd("validate", cmd_corpus_validate, "check a corpus")
    v.add_argument("--script", default="auto", choices=("auto", "roman", "script"))
    cv = corpus_cmd("convert", cmd_corpus_convert, "convert between json and tsv")
    cv.add_argument("--to", required=True, choices=sorted(corpus_mod.FORMATS))
    cv.add_argument("-o", "--out")
    sp = corpus_cmd("split", cmd_corpus_split, "seeded train/val/test split")
    sp.add_argument("--ratios", default="0.8,0.1,0.1")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--to", default="json", choices=sorted(corpus_mod.FORMATS))
    sp.add_argument("--out-dir")
    for name in ("train", "val", "test"):
        sp.add_argument(f"--{name}", help=f"path for the {name} part")
    au = corpus_cmd("augment", cmd_corpus_augment, "add augmented siblings")
    au.add_argument("--strategies", default="conjugation")
    au.add_argument("--seed", type=int)
    au.add_argument("--templates", help="JSON object: tense label -> English format string")
    au.add_argument("--to", choices=sorted(corpus_mod.FORMATS))
    au.add_argument("-o", "--out")
    corpus_cmd("stats", cmd_corpus_stats, "token and morpheme statistics")

    k = sub.add_parser("tok", help="subword tokenizer and data preparation")
    ksub = k.add_subparsers(dest="tok_command", metavar="ACTION")
    ksub.required = True
    tr = ksub.add_parser("train", help="train a shared vocabulary on corpus files")
    tr.add_argument("inputs", nargs="+")
    tr.add_argument("--vocab-size", type=int, required=True)
    tr.add_argument("--seed", type=int)
    tr.add_argument("--model", required=True, help="output model path")
    tr.add_argument("--format", choices=sorted(corpus_mod.FORMATS))
    tr.set_defaults(func=cmd_tok_train)
    en = ksub.add_parser("encode")
    en.add_argument("--model", required=True)
    en.add_argument("text")
    en.set_defaults(func=cmd_tok_encode)
    de = ksub.add_parser("decode")
    de.add_argument("--model", required=True)
    de.add_argument("ids", nargs="*")
    de.set_defaults(func=cmd_tok_decode)
    ml = ksub.add_parser("mlm-prep", help="masked-token examples as JSON lines")
    ml.add_argument("input")
    ml.add_argument("--model", required=True)
    ml.add_argument("--mask-rate", type=float, default=0.15)
    ml.add_argument("--seed", type=int)
    ml.add_argument("--field", default="toto", choices=corpus_mod.REQUIRED)
    ml.add_argument("--format", choices=sorted(corpus_mod.FORMATS))
    ml.add_argument("-o", "--out")
    ml.set_defaults(func=cmd_tok_mlm)
    pa = ksub.add_parser("pairs", help="control-tagged translation pairs")
    pa.add_argument("input")
    pa.add_argument("--direction", required=True, choices=sorted(tok_mod.DIRECTIONS))
    pa.add_argument("--format", choices=sorted(corpus_mod.FORMATS))
    pa.add_argument("-o", "--out")
    pa.set_defaults(func=cmd_tok_pairs)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        cfg = CliConfig.load(args.config or os.environ.get(CONFIG_ENV))
    except (OSError, ValueError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 1
    args.config = cfg
    args.lexicon = args.lexicon or cfg.lexicon
    args.table = args.table or cfg.table
    args.output = args.output or cfg.output
    if not hasattr(args, "seed"):
        args.seed = None
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except TotoError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: invalid-argument: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1
    return 0


def console_main():
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(main())


if __name__ == "__main__":
    console_main()
