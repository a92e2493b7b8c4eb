"""Exception types shared across the toolkit."""


class TypicError(Exception):
    """Base class for all toolkit errors."""


# --- template DSL ---------------------------------------------------------

class PatternError(TypicError):
    """A template pattern string cannot be parsed."""


class UnbalancedBraces(PatternError):
    pass


class EmptySlotName(PatternError):
    pass


class InvalidSlotName(PatternError):
    pass


class DuplicateSlot(PatternError):
    pass


class NoSlots(PatternError):
    pass


class RenderError(TypicError):
    """A template cannot be rendered with the given fillers."""


class MissingFiller(RenderError):
    def __init__(self, slot: str):
        super().__init__(f"no filler given for slot {slot!r}")
        self.slot = slot


class ExtraFiller(RenderError):
    def __init__(self, slot: str):
        super().__init__(f"filler given for unknown slot {slot!r}")
        self.slot = slot


class UnknownLocale(RenderError):
    def __init__(self, locale: str):
        super().__init__(f"template has no surface form for locale {locale!r}")
        self.locale = locale


# --- structured documents (template sets, corpus files) -------------------

class SchemaError(TypicError):
    """A document does not conform to its file schema."""


class InvariantViolation(TypicError):
    """A parsed object violates a domain invariant."""

    def __init__(self, subject: str, reason: str):
        super().__init__(f"{subject}: {reason}")
        self.subject = subject
        self.reason = reason


# --- corpus ----------------------------------------------------------------

class CorpusError(TypicError):
    pass


class DanglingReference(CorpusError):
    pass


class SpanError(CorpusError):
    pass


class EmptyCorpus(CorpusError):
    pass


class UnknownTokenizer(TypicError):
    def __init__(self, tokenizer_id: str):
        super().__init__(f"unknown tokenizer {tokenizer_id!r}")
        self.tokenizer_id = tokenizer_id


class ValidationFailure(CorpusError):
    """Raised when a corpus fails validation; carries the full issue list."""

    def __init__(self, issues):
        self.issues = list(issues)
        preview = "; ".join(str(i) for i in self.issues[:5])
        more = "" if len(self.issues) <= 5 else f" (+{len(self.issues) - 5} more)"
        super().__init__(f"{len(self.issues)} validation issue(s): {preview}{more}")


# --- metrics ----------------------------------------------------------------

class MetricError(TypicError):
    pass


class EmptyInput(MetricError):
    pass


class MissingRating(MetricError):
    pass


class DegenerateChance(MetricError):
    """Chance agreement is 1 while observed agreement is not."""


class NoVariation(MetricError):
    """Expected disagreement is zero; alpha is undefined."""


class InsufficientData(MetricError):
    pass


class DimensionMismatch(MetricError):
    pass


# --- baselines ---------------------------------------------------------------

class EmptyDev(TypicError):
    pass


class NoCandidates(TypicError):
    pass


# --- annotation service ------------------------------------------------------

class ServiceError(TypicError):
    pass


class UnknownAnnotator(ServiceError):
    pass


class RevisionConflict(ServiceError):
    pass


class SubmissionInvalid(ServiceError):
    """A submitted payload does not validate against the workflow schema."""
