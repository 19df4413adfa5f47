"""DASP10 vulnerability taxonomy shared by rules, normalization and reporting."""

from __future__ import annotations

import enum


class DaspCategory(enum.Enum):
    """The ten DASP categories. Catch-all bucket is named Other."""

    ACCESS_CONTROL = "Access Control"
    ARITHMETIC = "Arithmetic"
    BAD_RANDOMNESS = "Bad Randomness"
    DENIAL_OF_SERVICE = "Denial of Service"
    FRONT_RUNNING = "Front Running"
    REENTRANCY = "Reentrancy"
    SHORT_ADDRESSES = "Short Addresses"
    TIME_MANIPULATION = "Time Manipulation"
    UNCHECKED_LOW_LEVEL_CALLS = "Unchecked Low Level Calls"
    OTHER = "Other"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> "DaspCategory":
        """Resolve a category from a human label, tolerating case and separators.

        Accepts e.g. "Bad Randomness", "bad_randomness", "Denial of service".
        Raises ValueError for anything that is not one of the ten categories.
        """
        key = _canon(label)
        try:
            return _BY_CANON[key]
        except KeyError:
            raise ValueError(f"unknown DASP category: {label!r}") from None


def _canon(label: str) -> str:
    return "".join(ch for ch in label.lower() if ch.isalnum())


_BY_CANON = {_canon(c.value): c for c in DaspCategory}
# Synonym used by some upstream corpora for the catch-all bucket.
_BY_CANON[_canon("unknown unknowns")] = DaspCategory.OTHER

CATEGORY_ORDER = list(DaspCategory)
