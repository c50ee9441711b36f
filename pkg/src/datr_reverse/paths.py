"""Attribute paths, suffix sets and the extension constraint test.

A path is a plain tuple of attribute atoms; ``()`` is the empty path.
"""

from __future__ import annotations

from collections.abc import Iterable

Path = tuple[str, ...]
ConstraintSet = frozenset[Path]

EMPTY: Path = ()


def format_path(path: Iterable[str]) -> str:
    return "<" + " ".join(path) + ">"


def format_constraint(constraint: Iterable[Path]) -> str:
    return "{" + ", ".join(format_path(p) for p in sorted(constraint)) + "}"


def is_prefix(prefix: Path, path: Path) -> bool:
    return len(prefix) <= len(path) and path[: len(prefix)] == prefix


def suffix_set(prefix: Path, paths: Iterable[Path]) -> frozenset[Path]:
    """Remainders of every member of ``paths`` that starts with ``prefix``.

    This is the raw definition, so ``()`` is included when ``prefix`` itself
    is a member.
    """
    n = len(prefix)
    return frozenset(p[n:] for p in paths if p[:n] == prefix and len(p) >= n)


def strip_empty(paths: Iterable[Path]) -> ConstraintSet:
    return frozenset(p for p in paths if p)


def satisfies(path: Path, constraint: Iterable[Path]) -> bool:
    """True iff no member of ``constraint`` is a prefix of ``path``."""
    return not any(is_prefix(c, path) for c in constraint if c)


def residual(prefix: Path, constraint: Iterable[Path]) -> ConstraintSet | None:
    """Satisfaction test for ``prefix`` followed by an open tail.

    Returns ``None`` when some constraint member is already a prefix of the
    concrete part; otherwise the obligations left for the tail.
    """
    constraint = tuple(constraint)
    if not satisfies(prefix, constraint):
        return None
    return strip_empty(suffix_set(prefix, constraint))
