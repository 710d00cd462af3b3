"""Shared utility functions."""
from typing import Iterator, Sequence, TypeVar

T = TypeVar("T")


def format_ns(ns: float) -> str:
    """Format a duration in nanoseconds as a short human-readable string.

    Args:
        ns: Duration in nanoseconds

    Returns:
        String like "850ns", "12.3µs", "4.56ms", "1.20s"
    """
    if ns < 1_000:
        return f"{ns:.0f}ns"
    elif ns < 1_000_000:
        return f"{ns / 1_000:.1f}µs"
    elif ns < 1_000_000_000:
        return f"{ns / 1_000_000:.2f}ms"
    else:
        return f"{ns / 1_000_000_000:.2f}s"


def chunked(items: Sequence[T], size: int) -> Iterator[Sequence[T]]:
    """Yield consecutive slices of ``items`` of at most ``size`` elements."""
    if size < 1:
        raise ValueError(f"chunk size must be >= 1, got {size}")
    for start in range(0, len(items), size):
        yield items[start:start + size]


def ratio(numerator: float, denominator: float) -> float:
    """``numerator / denominator``, or infinity when the denominator is not positive."""
    if denominator <= 0:
        return float("inf")
    return numerator / denominator
