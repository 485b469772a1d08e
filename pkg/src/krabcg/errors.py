"""Exception hierarchy shared by the frontend, resolvers and builders."""

from __future__ import annotations


class MiniJError(Exception):
    """Base class for every diagnostic raised on bad MiniJ input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class MiniJSyntaxError(MiniJError):
    pass


class UndeclaredClassError(MiniJError):
    """An ``extends`` clause names a class that does not exist."""


class UndeclaredTypeError(MiniJError):
    """A local or ``new`` statement names a class that does not exist."""


class UndeclaredLocalError(MiniJError):
    """A call receiver names a variable the method never declares."""


class DuplicateDeclarationError(MiniJError):
    pass


class InheritanceCycleError(MiniJError):
    pass


class UnknownMethodError(MiniJError):
    pass


class UnknownClassError(MiniJError):
    pass


class UnresolvedTargetError(MiniJError):
    """No definition of the called method exists on the lookup chain."""

    def __init__(self, caller, site_index: int, target: str, detail: str = ""):
        self.caller = caller
        self.site_index = site_index
        self.target = target
        msg = f"cannot resolve call {target}() at site {site_index} of {caller}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NoEntryPointError(MiniJError):
    """Raised when a traversal needs a root method and none exists."""


class SkipFault(Exception):
    """The traversal stack was not empty after the final pop.

    ``residual`` holds the frames left behind, bottom first.
    """

    def __init__(self, residual):
        self.residual = list(residual)
        names = ", ".join(str(f.method) for f in self.residual)
        super().__init__(f"{len(self.residual)} frame(s) never returned: {names}")
