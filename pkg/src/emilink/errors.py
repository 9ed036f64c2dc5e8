"""Exception types shared across the package.

Invalid arguments raise the built-in ValueError; the classes below cover
failure modes that a caller may want to catch separately.
"""


class InfeasibleError(Exception):
    """The requested rate cannot be met within the allowed power budget."""


class NumericalError(Exception):
    """A numerical routine failed to reach its accuracy target."""
