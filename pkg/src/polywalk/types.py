"""Problem instances shared by the formula, oracle, and simulation layers."""

from __future__ import annotations

from dataclasses import dataclass


class DomainError(ValueError):
    """An instance or argument lies outside an operation's domain."""


def _check_probability(p: float) -> None:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"step probability must be strictly inside (0, 1), got {p!r}")


@dataclass(frozen=True)
class RuinSpec:
    """A gambler's-ruin game.

    The gambler starts with ``start`` dollars, wagers one dollar per bet,
    wins a bet with probability ``p``, and quits on reaching ``target``
    dollars or going broke.
    """

    start: int
    target: int
    p: float

    def __post_init__(self) -> None:
        if self.target < 1:
            raise DomainError(f"target must be >= 1, got {self.target}")
        if not 0 <= self.start <= self.target:
            raise DomainError(
                f"start must satisfy 0 <= start <= target, got start={self.start}, target={self.target}"
            )
        _check_probability(self.p)


@dataclass(frozen=True)
class PolygonSpec:
    """A cyclic random walk on the ``m + 1`` vertices of a polygon.

    Vertices are labeled 0..m clockwise; the walk starts at 0 and steps
    clockwise with probability ``p``, counterclockwise otherwise.
    """

    m: int
    p: float

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        _check_probability(self.p)
