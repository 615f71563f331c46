"""Lightweight per-identity outcome shared by the verification modules."""
from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Outcome", "matrix_witness"]


@dataclass(frozen=True)
class Outcome:
    """One checked identity.

    ``ok`` is ``True``/``False`` for asserted identities and ``None`` for
    measured quantities that are recorded but not asserted.
    """

    check: str
    ok: bool | None
    ref: str = ""
    witness: dict | None = None
    metrics: dict = field(default_factory=dict)


def matrix_witness(diff) -> dict | None:
    """First nonzero entry of an exact residual (``None`` if it vanishes)."""
    from .relations import witness_of
    return witness_of(diff)
