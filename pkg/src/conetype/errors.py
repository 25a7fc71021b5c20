"""Exception hierarchy. Every error carries a stable ``code`` string for the CLI."""


class ConetypeError(Exception):
    code = "ConetypeError"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.code = cls.__name__


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    return value


# graph_core
class DuplicateOutLabel(ConetypeError):
    """Two out-edges of one state carry the same letter."""


class UnknownState(ConetypeError):
    pass


class DuplicateEdgeId(ConetypeError):
    pass


class UnknownLetter(ConetypeError):
    """An edge label is missing from the alphabet."""


class LetterNotInAlphabet(ConetypeError):
    """A word contains a letter outside the alphabet."""


class MissingLabel(ConetypeError):
    pass


# covering
class RootNotPreserved(ConetypeError):
    pass


class EdgeEndpointMismatch(ConetypeError):
    pass


class IncompleteMap(ConetypeError):
    pass


class NotLocallyInjective(ConetypeError):
    pass


class NotLocallySurjective(ConetypeError):
    pass


class TargetNotConnected(ConetypeError):
    pass


class NotAPath(ConetypeError):
    pass


class WrongStartVertex(ConetypeError):
    pass


class DomainMismatch(ConetypeError):
    pass


# minimization
class NotConnected(ConetypeError):
    pass


# automorphism, language action
class NotMinimal(ConetypeError):
    pass


class NotAdmissible(ConetypeError):
    pass


class NotAPermutation(ConetypeError):
    pass


class WordNotAccepted(ConetypeError):
    pass


class BaseMismatch(ConetypeError):
    pass


class FormatError(ConetypeError):
    """Malformed JSON input."""
