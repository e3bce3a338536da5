"""Exception hierarchy shared by all totokit modules.

Every domain error carries a short machine-readable ``code`` which the CLI
prints on stderr as ``error: <code>: <message>``.
"""


class TotoError(Exception):
    code = "error"


class LexiconLoadError(TotoError):
    code = "lexicon-load"

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class SchemaError(LexiconLoadError):
    code = "schema"


class DuplicateEntryError(TotoError):
    code = "duplicate-entry"


class FeatureConflictError(TotoError):
    code = "feature-conflict"


class WordClassError(TotoError):
    code = "word-class"


class DerivationUnsupportedError(TotoError):
    code = "derivation-unsupported"


class UnknownStemError(TotoError):
    code = "unknown-stem"


class TableLoadError(TotoError):
    code = "table-load"


class DirectionUnsupportedError(TotoError):
    code = "direction-unsupported"


class CorpusParseError(TotoError):
    code = "corpus-parse"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorpusWriteError(TotoError):
    code = "corpus-write"


class CorpusValidationError(TotoError):
    code = "corpus-invalid"

    def __init__(self, message, entry_ids=()):
        self.entry_ids = tuple(entry_ids)
        super().__init__(message)


class StrategyInapplicableError(TotoError):
    code = "strategy-inapplicable"


class ModelFormatError(TotoError):
    code = "model-format"
