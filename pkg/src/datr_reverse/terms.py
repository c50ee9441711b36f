"""Symbolic slots for nonterminals: node variables, path tails, path terms."""

from __future__ import annotations

from dataclasses import dataclass

from .paths import Path, format_path


@dataclass(frozen=True, order=True)
class NodeVar:
    id: int

    def __str__(self) -> str:
        return f"N{self.id}"


@dataclass(frozen=True, order=True)
class TailVar:
    id: int

    def __str__(self) -> str:
        return f"T{self.id}"


@dataclass(frozen=True)
class PathTerm:
    """A concrete prefix, optionally followed by an open tail variable.

    ``PathTerm(("root",))`` is exactly ``<root>``; with a tail it stands for
    every ``<root ...>`` the tail's obligations allow.  A bare path variable
    is a term with an empty prefix and a tail.
    """

    prefix: Path
    tail: TailVar | None = None

    @property
    def closed(self) -> bool:
        return self.tail is None

    def __str__(self) -> str:
        text = format_path(self.prefix)
        if self.tail is None:
            return text
        if not self.prefix:
            return str(self.tail)
        return f"{text}^{self.tail}"


NodeSlot = str | NodeVar


def concrete(*attrs: str) -> PathTerm:
    return PathTerm(tuple(attrs))


def path_var(var_id: int) -> PathTerm:
    return PathTerm((), TailVar(var_id))
