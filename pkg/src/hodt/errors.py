"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised deliberately by hodt."""


class TreeStructureError(ToolkitError):
    """A tree violates a structural invariant (bad yields, heads, classes)."""


class TreebankFormatError(ToolkitError):
    """Malformed treebank input; carries file/line location when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ''
        if path is not None:
            where = f'{path}:'
        if line is not None:
            where += f'{line}:'
        if where:
            message = f'{where} {message}'
        super().__init__(message)


class HeadRuleError(ToolkitError):
    """Bad head-rule file syntax; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class ModelFormatError(ToolkitError):
    """A model file does not match the expected versioned layout."""
