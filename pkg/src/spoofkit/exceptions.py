"""Exception hierarchy shared by every spoofkit module."""


class SpoofkitError(Exception):
    """Base class for all toolkit errors."""


# audio I/O
class MissingFile(SpoofkitError, FileNotFoundError):
    pass


class NotWav(SpoofkitError, ValueError):
    pass


class UnsupportedFormat(SpoofkitError, ValueError):
    pass


class EmptyAudio(SpoofkitError, ValueError):
    pass


class RateMismatch(SpoofkitError, ValueError):
    pass


# features
class TooShort(SpoofkitError, ValueError):
    pass


class DegenerateFilter(SpoofkitError, ValueError):
    pass


class BadMagic(SpoofkitError, ValueError):
    pass


class ShapeMismatch(SpoofkitError, ValueError):
    pass


# augmentation
class SilentInput(SpoofkitError, ValueError):
    pass


class EmptyRir(SpoofkitError, ValueError):
    pass


# partial-fake forging
class BadPosition(SpoofkitError, ValueError):
    pass


class CrossfadeTooLong(SpoofkitError, ValueError):
    pass


class GapInLabels(SpoofkitError, ValueError):
    pass


# scoring / evaluation
class EmptyFeature(SpoofkitError, ValueError):
    pass


class MissingClass(SpoofkitError, ValueError):
    pass


class TooFewExamples(SpoofkitError, ValueError):
    pass


class DimMismatch(SpoofkitError, ValueError):
    pass


class MissingScore(SpoofkitError, KeyError):
    pass


class SingleClass(SpoofkitError, ValueError):
    pass


class IdMismatch(SpoofkitError, ValueError):
    pass


class EmptySet(SpoofkitError, ValueError):
    pass


class DegenerateSpread(SpoofkitError, ValueError):
    pass


class ConfigError(SpoofkitError, ValueError):
    pass
