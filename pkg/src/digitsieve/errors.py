"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid argument or configuration.  CLI maps this to exit code 2."""


class ResourceCapError(RuntimeError):
    """A memory or search-size cap was exceeded.  CLI maps this to exit code 1."""
