"""Shared exception types.

``CapExceededError`` marks a resource cap (group order, coset limit,
vertex count) rather than a mathematical failure; the CLI maps it to
exit code 3, while bad input maps to 2.
"""


class CapExceededError(RuntimeError):
    pass
