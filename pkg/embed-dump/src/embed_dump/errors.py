"""Error taxonomy mapped onto CLI exit codes."""


class DumpError(Exception):
    """Base for everything this package raises on purpose."""


class OptionsError(DumpError):
    """Invalid configuration value (exit 3)."""


class ModelError(DumpError):
    """Encoder could not be loaded or run (exit 1)."""
