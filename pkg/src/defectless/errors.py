"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class;
plain ValueError/TypeError are reserved for programming errors.
"""


class DefectlessError(Exception):
    """Base class for all package specific errors."""


class NotASubgroup(DefectlessError):
    """Claimed subgroup relation does not hold."""


class DivisionByZero(DefectlessError):
    pass


class ZeroHasNoValue(DefectlessError):
    """The zero element has no valuation."""


class PrecisionExhausted(DefectlessError):
    """A truncated result cancelled below its certified precision."""


class RootNotRepresentable(DefectlessError):
    """A requested p-th root leaves the configured coefficient model."""


class NegativeValue(DefectlessError):
    """Residue requested for an element outside the valuation ring."""


class NotAOneUnit(DefectlessError):
    pass


class PositiveValueRequired(DefectlessError):
    pass


class LevelTooLow(DefectlessError):
    """1-unit level too low for the requested root or rewrite."""


class RuleNotApplicable(DefectlessError):
    """A one-unit rewrite precondition failed; the message names it."""


class RTModeError(DefectlessError):
    """Operation only defined in the value-transcendental configuration."""


class InverseNotApproximable(DefectlessError):
    """No monomial-times-1-unit factorization; geometric inversion fails."""


class ZeroGenerator(DefectlessError):
    pass


class MalformedNormalForm(DefectlessError):
    pass


class BasisViolation(DefectlessError):
    """A Frobenius-closed basis invariant failed."""


class NonNegativeValue(DefectlessError):
    """Constant descent expects a generator of negative value."""


class NotAPPower(DefectlessError):
    """Defect quotient is not a power of p."""


class NotDivisible(DefectlessError):
    """e*f does not divide n in a defect computation."""


class FundamentalInequalityViolated(DefectlessError):
    pass


class UnsupportedRank(DefectlessError):
    pass


class DslSyntaxError(DefectlessError):
    """Parse error with position and expectation information."""

    def __init__(self, position, expected, found=""):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"syntax error at position {position}: expected {expected}"
            + (f", found {found!r}" if found else "")
        )


class RationalExponentOnX(DslSyntaxError):
    def __init__(self, position):
        super().__init__(position, "an integer exponent on x")


class ConfigMismatch(DefectlessError):
    """Configuration keys inconsistent with each other or with the task."""
