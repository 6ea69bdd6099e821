"""Exception hierarchy shared by all lcfkit modules.

``TypeError`` here deliberately mirrors the logical notion (an ill-typed
term), not Python's builtin; always refer to it qualified as
``errors.TypeError``.
"""


class LcfError(Exception):
    """Base class for everything raised by lcfkit on purpose."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class TypeError(LcfError):
    """A term or formula is ill-typed."""


class KernelError(LcfError):
    """Violation of the kernel abstraction boundary."""


class TheoryError(LcfError):
    """Theorems from incompatible theories were combined."""


class RuleError(LcfError):
    """A premise does not have the shape an inference rule requires."""


class EigenvariableError(LcfError):
    """A variable to be generalized occurs free in a hypothesis."""


class ClassicalRuleError(LcfError):
    """Excluded middle requested in a non-classical theory."""


class SignatureError(LcfError):
    """Name clash when extending a theory signature."""


class DefinitionError(LcfError):
    """Right-hand side of a definition is not closed/type-tight."""


class UnifyError(LcfError):
    """Terms or types are not unifiable."""


class NonPatternError(UnifyError):
    """A flexible subproblem falls outside the higher-order pattern fragment."""


class TacticLoopError(LcfError):
    """A repeat combinator exceeded its iteration cap."""


class ProofIncompleteError(LcfError):
    """qed was requested while goals remain."""


class InternalSoundnessError(LcfError):
    """Kernel replay of a derivation log failed: a tactic produced a bad log.

    This never certifies a wrong theorem; it reports the bug instead.
    """


class NoHistoryError(LcfError):
    """undo was requested at the initial proof state."""


class SimpLoopError(LcfError):
    """The simplifier exceeded its step cap."""


class TautBudgetError(LcfError):
    """Tautology check over too many distinct atoms."""


class FragmentError(LcfError):
    """Formula outside the finite-model-checkable fragment."""


class ParseError(LcfError):
    """Concrete-syntax error with position information."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class CycleError(LcfError):
    """Theory import graph contains a cycle."""


class NotFoundError(LcfError):
    """Lookup of a theorem/constant/theory failed."""


class ProofError(LcfError):
    """A theory-file proof script failed."""


class CancelledError(LcfError):
    """A long-running search was cancelled cooperatively."""
