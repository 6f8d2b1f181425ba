"""Exception hierarchy shared by all modules.

Three families matter to callers: configuration problems (bad input data,
exit code 2 at the CLI), precision problems (a certified decision could not
be reached at the precision cap, exit code 3), and mathematical/internal
failures (exit code 1).  Everything derives from OtcohomError.
"""


class OtcohomError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(OtcohomError):
    """Malformed run configuration or unusable input data."""


# --- field construction -----------------------------------------------------

class NotMonic(ConfigError):
    """Defining polynomial has leading coefficient != 1."""


class Reducible(ConfigError):
    """Defining polynomial factors over Q."""


class DegreeTooSmall(ConfigError):
    """Field degree below 3 cannot carry s>0, t>0."""


class SignatureUnsupported(ConfigError):
    """Field signature has s=0 or t=0, outside the supported family."""


# --- algebra ----------------------------------------------------------------

class DivisionByZero(OtcohomError):
    """Inverse or quotient of the zero element requested."""


class NotIntegral(ConfigError):
    """Element has non-integer coordinates in the integral model."""


class NotUnit(ConfigError):
    """Element is not a unit of the integral model."""


# --- lattice data -----------------------------------------------------------

class RankMismatch(ConfigError):
    """Number of proposed units differs from the rank s."""


class NotTotallyPositiveUnit(ConfigError):
    """A proposed generator fails the totally-positive-unit test."""


class DegenerateLattice(OtcohomError):
    """Log-lattice matrix is singular (det enclosure contains 0 and
    refinement certified no escape)."""


class DeltaNotInvariant(ConfigError):
    """Unit action does not preserve the supplied integral model."""


# --- certified decisions ----------------------------------------------------

class PrecisionError(OtcohomError):
    """A certified decision was still undecided at the precision cap."""


class PrecisionExhausted(PrecisionError):
    """Interval refinement hit the cap without deciding."""


class UndecidedCharacter(PrecisionError):
    """An admissibility verdict came back Uncertain while building a table."""


# --- dual-backend checks ----------------------------------------------------

class BackendDisagreement(OtcohomError):
    """Exact-generic and numeric backends produced different dimensions."""


class NotTypeS1(OtcohomError):
    """Closed-form table requested outside its validity range (t must be 1)."""


class UnknownPreset(ConfigError):
    """Preset name not registered."""
