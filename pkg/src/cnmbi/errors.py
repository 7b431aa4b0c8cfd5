"""Exception types shared across the package."""


class DataError(ValueError):
    """Input data is malformed (parse failure, bad shape, non-finite values)."""


class DegenerateDataError(ValueError):
    """Input is well-formed but carries too little structure to analyse."""


class ConfigError(ValueError):
    """Invalid run configuration (e.g. an empty candidate range)."""
