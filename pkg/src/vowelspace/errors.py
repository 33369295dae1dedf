"""Exception hierarchy shared across the package."""


class VowelSpaceError(Exception):
    """Base class for all errors raised by this package."""


# --- audio ---

class MissingFile(VowelSpaceError):
    pass


class UnsupportedFormat(VowelSpaceError):
    pass


class EmptyAudio(VowelSpaceError):
    pass


# --- segmentation ---

class TooShort(VowelSpaceError):
    pass


class NoVoicedSegment(VowelSpaceError):
    pass


# --- formant analysis ---

class DegenerateFrame(VowelSpaceError):
    pass


class InsufficientFormants(VowelSpaceError):
    pass


class GateViolation(VowelSpaceError):
    pass


class EmptyList(VowelSpaceError):
    pass


# --- normalization / metrics ---

class InsufficientData(VowelSpaceError):
    pass


class ZeroVariance(VowelSpaceError):
    pass


class MissingAnchor(VowelSpaceError):
    def __init__(self, missing):
        self.missing = list(missing)
        pairs = ", ".join(f"({lang}, /{v}/)" for lang, v in self.missing)
        super().__init__(f"no anchor observations for: {pairs}")


# --- inventories ---

class UnknownLanguage(VowelSpaceError):
    pass


class VowelNotInPair(VowelSpaceError):
    pass


class InventoryDataError(VowelSpaceError):
    pass


# --- reporting ---

class SchemaMismatch(VowelSpaceError):
    pass


class EmptyPlot(VowelSpaceError):
    pass


# --- CLI ---

class ConfigError(VowelSpaceError):
    pass


class ManifestParseError(VowelSpaceError):
    pass


class UnknownSelector(VowelSpaceError):
    pass
