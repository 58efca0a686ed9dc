"""Error types shared across the package.

The CLI maps these onto exit codes: DataError -> 2, BackendError -> 3.
Argument/precondition misuse raises plain ValueError.
"""


class DataError(Exception):
    """Malformed or inconsistent input data (files, tables, vocabularies)."""


class BackendError(Exception):
    """A model or embedding backend failed."""
