"""A third truth value for questions the library cannot always decide."""
from __future__ import annotations

__all__ = ["UNKNOWN", "Unknown"]


class Unknown:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("UNKNOWN has no truth value; compare with `is UNKNOWN`")

    def __repr__(self):
        return "UNKNOWN"

    def __reduce__(self):
        return (Unknown, ())


UNKNOWN = Unknown()
