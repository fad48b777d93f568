"""Exception hierarchy shared by every module of the package."""


class MirsError(Exception):
    """Base class for operational failures (CLI exit code 3)."""


class DegenerateInput(MirsError, ValueError):
    pass


class SizeOverflow(MirsError, ValueError):
    pass


class DimensionMismatch(MirsError, ValueError):
    pass


class CapacityExceeded(MirsError):
    pass


class InsufficientPrefix(MirsError, ValueError):
    pass


class IndexOutOfRange(MirsError, IndexError):
    pass


class AlphaOutOfRange(MirsError, ValueError):
    pass


class DepthTooShallow(MirsError, ValueError):
    pass


class PrecisionExhausted(MirsError):
    pass


class DegenerateAngle(MirsError, ValueError):
    pass


class NoEligibleDenominators(MirsError, ValueError):
    pass


class WindowTooSmall(MirsError, ValueError):
    pass


class InsufficientExactPrefix(MirsError, ValueError):
    pass


class PreconditionNormExceeded(MirsError, ValueError):
    pass


class HorizonMismatch(MirsError, ValueError):
    pass


class ConfigError(MirsError, ValueError):
    """Malformed user input (CLI exit code 2)."""
