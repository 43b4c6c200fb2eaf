"""Exception hierarchy shared by all simulator modules.

The CLI maps these onto process exit codes: scenario problems exit 2,
estimation failures exit 4, and every other simulator error exits 3.
"""


class SilRadarError(Exception):
    """Base class for all simulator errors."""


class ParameterError(SilRadarError, ValueError):
    """An argument is non-finite, out of range, or structurally invalid."""


class ConfigurationError(SilRadarError):
    """A configuration is self-inconsistent (e.g. a sample rate too low
    to represent the requested signal)."""


class DemodulationError(SilRadarError):
    """Demodulation failed at a specific sample.

    Attributes
    ----------
    index : int
        Index of the offending sample.
    """

    def __init__(self, message, index):
        super().__init__(f"{message} (sample index {index})")
        self.index = index


class DegeneratePatternError(SilRadarError):
    """A radiation-pattern cut has no usable main lobe (e.g. isotropic)."""


class EstimationError(SilRadarError):
    """Spectral peak estimation could not produce a vital-rate estimate."""


class ScenarioError(SilRadarError):
    """Base class for scenario-file problems (CLI exit code 2)."""


class ScenarioSyntaxError(ScenarioError):
    """Malformed scenario line.

    Attributes
    ----------
    line : int
        1-based line number.
    column : int
        1-based column number of the offending character.
    """

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ScenarioUnknownKeyError(ScenarioError):
    """A key that the scenario grammar does not define.

    Attributes
    ----------
    line : int
        1-based line number.
    key : str
        The full ``section.key`` string that was rejected.
    """

    def __init__(self, key, line):
        super().__init__(f"line {line}: unknown key '{key}'")
        self.line = line
        self.key = key


class ScenarioValueError(ScenarioError):
    """A key parsed but its value violates the field's invariants.

    Attributes
    ----------
    key : str
        The full ``section.key`` string.
    line : int or None
        1-based line number when the value came from a file.
    """

    def __init__(self, key, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {message}")
        self.key = key
        self.line = line


class ScenarioCrossFieldError(ScenarioError):
    """Two scenario fields that must agree do not.

    Attributes
    ----------
    keys : tuple of str
        The conflicting ``section.key`` strings.
    """

    def __init__(self, message, keys=()):
        super().__init__(message)
        self.keys = tuple(keys)
