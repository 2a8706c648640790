"""Shared exception types."""


class RegimeError(ValueError):
    """A closed-form formula was evaluated outside its regime of validity."""


class BudgetExceededError(RuntimeError):
    """A configured resource cap (tree nodes, oracle states, ...) was hit."""


class WindowInvariantError(RuntimeError):
    """The window-tracking adversary could not re-establish its invariant.

    This is surfaced instead of being silently patched: it would mean the
    five-case answer rule failed on a concrete instance, which is worth
    knowing about.
    """
