"""Exceptions shared across pinlab modules."""


class DataError(Exception):
    """Input data violates a file-format or content contract.

    Raised for malformed corpus/model files, tampered totals, and empty
    corpora where a non-empty one is required. Maps to CLI exit code 3.
    """
