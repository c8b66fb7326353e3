"""Exception types shared across the engine.

Every error a caller is expected to handle derives from GameError, so
transports and the admin API can map them to user-facing messages or HTTP
status codes in one place.
"""
from __future__ import annotations


class GameError(Exception):
    """Base class for all expected game-level failures."""

    code = "game_error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)


class EmptyText(GameError):
    """Input text is blank."""

    code = "empty_text"


class DictionaryFormatError(GameError):
    """Lemma dictionary line could not be parsed."""

    code = "dictionary_format"


class PatternSyntax(GameError):
    """Idiom pattern contains an unparsable token."""

    code = "pattern_syntax"


class TooFewConstituents(GameError):
    """Idiom pattern needs at least two constituent words."""

    code = "too_few_constituents"


class BadWildcardPosition(GameError):
    """Wildcards may not open or close an idiom pattern."""

    code = "bad_wildcard_position"


class ConfigInvalid(GameError):
    """Configuration file or simulator config rejected."""

    code = "config_invalid"


class DayAlreadyOpen(GameError):
    """A day is already open for this date and language."""

    code = "day_already_open"


class NoIdiomScheduled(GameError):
    """No idiom with the requested id is scheduled."""

    code = "no_idiom_scheduled"


class DayClosed(GameError):
    """No day is open for the current date."""

    code = "day_closed"


class OutsideWindow(GameError):
    """Action attempted outside the daily play window."""

    code = "outside_window"


class Banned(GameError):
    """Player is banned from the game."""

    code = "banned"


class DuplicateSentence(GameError):
    """A normalized-equal sentence was already submitted today."""

    code = "duplicate_sentence"


class HappyHourActive(GameError):
    """A happy hour is already running."""

    code = "happy_hour_active"


class SelfReview(GameError):
    """Players cannot review their own submissions."""

    code = "self_review"


class AlreadyReviewed(GameError):
    """This reviewer already reviewed this submission."""

    code = "already_reviewed"


class AlreadyBanned(GameError):
    """Player is already banned."""

    code = "already_banned"


class NotBanned(GameError):
    """Player is not banned."""

    code = "not_banned"


class UnknownPlayer(GameError):
    """No such player."""

    code = "unknown_player"


class UnknownSubmission(GameError):
    """No such submission."""

    code = "unknown_submission"


class UnknownDay(GameError):
    """No game day recorded for that date."""

    code = "unknown_day"


class NoPendingSubmission(GameError):
    """No submission is awaiting a label from this player."""

    code = "no_pending_submission"


class ValidationFailed(GameError):
    """Event rejected: payload contradicts the current store state."""

    code = "validation_failed"


class MissingKey(GameError):
    """Message key absent from catalog."""

    code = "missing_key"


class MissingParam(GameError):
    """Render parameters do not cover all placeholders."""

    code = "missing_param"


class CatalogError(GameError):
    """Catalog file malformed or catalogs out of parity."""

    code = "catalog_error"
