"""Exception hierarchy for mpcost.

Circuit construction, profile validation, cost evaluation and the
optimizers each raise narrowly typed errors so callers (and the CLI)
can map failures to stable exit codes.
"""


class MpcostError(Exception):
    """Base class for all mpcost errors."""


# --- circuit construction / evaluation ---------------------------------

class CircuitError(MpcostError):
    """Invalid circuit structure or evaluation request."""


class ArityMismatch(CircuitError):
    """A node's input count does not match its operation's arity."""


class DanglingInput(CircuitError):
    """A node references an unknown id or a node that appears later."""


class OutAsInput(CircuitError):
    """An output node is used as an input to another node."""


class CycleDetected(CircuitError):
    """The node graph contains a cycle (only reachable through manual
    construction that bypasses ``build``)."""


class InvalidParty(CircuitError):
    """A party label is present on a non-input node or is not a known party."""


class MissingInput(CircuitError):
    """Evaluation was requested without a value for some input node."""


class ValueOutOfRange(CircuitError):
    """An evaluation input does not fit in the circuit's bit width."""


class UnknownNode(MpcostError):
    """A node id does not exist in the circuit (or is of the wrong kind)."""


# --- file formats -------------------------------------------------------

class ParseError(MpcostError):
    """A circuit, profile, measurement or price file is malformed."""


# --- cost profiles ------------------------------------------------------

class ProfileError(MpcostError):
    """Invalid cost profile."""


class NegativeCost(ProfileError):
    """A profile contains a negative cost entry."""


class MissingConversion(ProfileError):
    """A profile lacks a conversion entry for an ordered scheme pair."""


class NoUniversalScheme(ProfileError):
    """No scheme in the profile supports every operation."""


class InfeasibleAssignment(MpcostError):
    """An assignment maps a node to a scheme that does not support its op
    (or leaves a node unassigned)."""


class DuplicateMeasurement(MpcostError):
    """Two raw measurements describe the same operation or conversion."""


class NegativeInput(MpcostError):
    """A raw measurement or price is negative."""


# --- optimizers / generators ---------------------------------------------

class UnsupportedScheme(MpcostError):
    """A requested scheme does not support every operation it must cover."""


class SearchSpaceTooLarge(MpcostError):
    """The exhaustive solver's enumeration space exceeds the configured cap."""

    def __init__(self, space: int, max_space: int):
        shown = str(space) if space < 10**15 else f"about 10^{len(str(space)) - 1}"
        super().__init__(
            f"search space has {shown} assignments, cap is {max_space}"
        )
        self.space = space
        self.max_space = max_space


class NonBinaryOp(MpcostError):
    """Chain generation requires a two-input operation."""
