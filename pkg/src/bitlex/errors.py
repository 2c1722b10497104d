"""Exception hierarchy shared across the package."""


class BitlexError(Exception):
    """Base class for all package-specific failures."""


class InputError(BitlexError):
    """Bad input data: mismatched files, undecodable bytes, empty bitexts."""


class SchemaError(BitlexError):
    """A serialized artifact (model, bundle, judgments) is malformed or has
    an unsupported format version."""


class ConfigError(BitlexError):
    """A configuration file or option set is invalid."""


class EstimationError(BitlexError):
    """Parameter estimation is impossible for a class (no links, degenerate
    rates, or an empty feasible region)."""


class InductionError(BitlexError):
    """The induction loop cannot proceed (no class could be estimated)."""
