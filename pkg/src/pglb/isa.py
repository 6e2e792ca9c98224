"""Instruction set, concrete syntax and static queries.

A program is a non-empty, 1-indexed sequence of primitive instructions:

    a       basic action (runs, yields a Boolean reply, continues)
    +a      positive test (reply t: next instruction; reply f: skip one)
    -a      negative test (complementary conventions)
    #l      relative forward jump over l instructions
    \\#l     relative backward jump
    !t !f   termination delivering the Boolean value t or f

Actions are either bare symbols or ``focus.method`` requests addressed to a
named service (e.g. ``in:3.get``, ``aux:1.set:f``). The textual form uses
``;`` or newlines between instructions and ``//`` line comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError

# Methods understood by Boolean registers.
GET = "get"
SET_T = "set:t"
SET_F = "set:f"
REGISTER_METHODS = frozenset({GET, SET_T, SET_F})

_IDENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_METHOD_RE = re.compile(r"[A-Za-z0-9_]+(?::[A-Za-z0-9_]+)*\Z")
_NAT_RE = re.compile(r"(?:0|[1-9][0-9]*)\Z")


@dataclass(frozen=True)
class Focus:
    """The name a service is registered under: ``in:n``, ``aux:n`` or a bare identifier.

    Input indices start at 1; auxiliary indices start at 0. Identifiers may
    not contain ``:`` or ``.``, so rendering is injective.
    """

    kind: str  # "in" | "aux" | "named"
    index: int | None = None
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "in":
            if self.index is None or self.index < 1 or self.name is not None:
                raise ValueError(f"input focus needs an index >= 1, got {self.index!r}")
        elif self.kind == "aux":
            if self.index is None or self.index < 0 or self.name is not None:
                raise ValueError(f"auxiliary focus needs an index >= 0, got {self.index!r}")
        elif self.kind == "named":
            if self.index is not None or not self.name or not _IDENT_RE.match(self.name):
                raise ValueError(f"named focus needs an identifier, got {self.name!r}")
        else:
            raise ValueError(f"unknown focus kind {self.kind!r}")

    @staticmethod
    def input(index: int) -> "Focus":
        return Focus("in", index=index)

    @staticmethod
    def aux(index: int) -> "Focus":
        return Focus("aux", index=index)

    @staticmethod
    def named(name: str) -> "Focus":
        return Focus("named", name=name)

    def __str__(self) -> str:
        if self.kind == "named":
            return self.name  # type: ignore[return-value]
        return f"{self.kind}:{self.index}"


@dataclass(frozen=True)
class Action:
    """A basic action: a ``focus.method`` service request or a bare symbol."""

    name: str
    focus: Focus | None = None

    def __post_init__(self) -> None:
        pattern = _METHOD_RE if self.focus is not None else _IDENT_RE
        if not pattern.match(self.name):
            raise ValueError(f"bad action name {self.name!r}")

    def __str__(self) -> str:
        if self.focus is None:
            return self.name
        return f"{self.focus}.{self.name}"


# The internal action produced by the use operator. It has no side effects
# and always replies t; user programs may not spell it.
TAU = Action("tau")


@dataclass(frozen=True)
class Basic:
    action: Action


@dataclass(frozen=True)
class PosTest:
    action: Action


@dataclass(frozen=True)
class NegTest:
    action: Action


@dataclass(frozen=True)
class FwdJump:
    offset: int

    def __post_init__(self) -> None:
        if self.offset < 0:
            raise ValueError("jump offset must be >= 0")


@dataclass(frozen=True)
class BwdJump:
    offset: int

    def __post_init__(self) -> None:
        if self.offset < 0:
            raise ValueError("jump offset must be >= 0")


@dataclass(frozen=True)
class Termination:
    positive: bool


TERM_T = Termination(True)
TERM_F = Termination(False)

Instruction = Basic | PosTest | NegTest | FwdJump | BwdJump | Termination


@dataclass(frozen=True)
class InstructionSequence:
    """Non-empty tuple of instructions; positions are 1-based."""

    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not self.instructions:
            raise ValueError("empty instruction sequence")

    @staticmethod
    def of(*instructions: Instruction) -> "InstructionSequence":
        return InstructionSequence(instructions)

    def at(self, position: int) -> Instruction:
        """Instruction at a 1-based position."""
        if not 1 <= position <= len(self.instructions):
            raise IndexError(f"position {position} out of range 1..{len(self.instructions)}")
        return self.instructions[position - 1]

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    def __add__(self, other: "InstructionSequence") -> "InstructionSequence":
        return InstructionSequence(self.instructions + other.instructions)

    def __str__(self) -> str:
        return render(self)


def render_instruction(instruction: Instruction) -> str:
    if isinstance(instruction, Basic):
        return str(instruction.action)
    if isinstance(instruction, PosTest):
        return f"+{instruction.action}"
    if isinstance(instruction, NegTest):
        return f"-{instruction.action}"
    if isinstance(instruction, FwdJump):
        return f"#{instruction.offset}"
    if isinstance(instruction, BwdJump):
        return f"\\#{instruction.offset}"
    if isinstance(instruction, Termination):
        return "!t" if instruction.positive else "!f"
    raise TypeError(f"not an instruction: {instruction!r}")


def render(sequence: InstructionSequence) -> str:
    """Canonical single-line form; ``parse(render(s)) == s``."""
    return "; ".join(render_instruction(u) for u in sequence)


def length(sequence: InstructionSequence) -> int:
    """Number of primitive instructions."""
    return len(sequence)


def is_loop_free(sequence: InstructionSequence) -> bool:
    """True when the sequence contains no backward jump."""
    return not any(isinstance(u, BwdJump) for u in sequence)


def foci_used(sequence: InstructionSequence) -> set[Focus]:
    """All foci occurring in focused actions of the sequence."""
    found: set[Focus] = set()
    for u in sequence:
        if isinstance(u, (Basic, PosTest, NegTest)) and u.action.focus is not None:
            found.add(u.action.focus)
    return found


def _parse_focus(text: str, line: int, column: int) -> Focus:
    for kind in ("in", "aux"):
        head = kind + ":"
        if text.startswith(head):
            digits = text[len(head):]
            if not _NAT_RE.match(digits):
                raise ParseError(f"bad {kind} focus index {digits!r}", line, column)
            index = int(digits)
            if kind == "in" and index < 1:
                raise ParseError("input focus index must be >= 1", line, column)
            return Focus(kind, index=index)
    if not _IDENT_RE.match(text):
        raise ParseError(f"bad focus {text!r}", line, column)
    return Focus.named(text)


def _parse_action(text: str, line: int, column: int) -> Action:
    if "." in text:
        focus_text, method = text.split(".", 1)
        focus = _parse_focus(focus_text, line, column)
        if not _METHOD_RE.match(method):
            raise ParseError(f"bad method {method!r}", line, column)
        return Action(method, focus)
    if text == "tau":
        raise ParseError("'tau' is reserved for internal steps", line, column)
    if not _IDENT_RE.match(text):
        raise ParseError(f"bad action {text!r}", line, column)
    return Action(text)


def _parse_instruction(token: str, line: int, column: int) -> Instruction:
    if token == "!t":
        return TERM_T
    if token == "!f":
        return TERM_F
    for head, ctor in (("\\#", BwdJump), ("#", FwdJump)):
        if token.startswith(head):
            digits = token[len(head):]
            if not _NAT_RE.match(digits):
                raise ParseError(f"bad jump length {digits!r}", line, column)
            return ctor(int(digits))
    if token[0] in "+-":
        ctor = PosTest if token[0] == "+" else NegTest
        return ctor(_parse_action(token[1:].strip(), line, column))
    return Basic(_parse_action(token, line, column))


def parse(text: str) -> InstructionSequence:
    """Parse program text; instructions separated by ``;`` or newlines.

    ``//`` starts a comment running to the end of the line. Raises
    :class:`ParseError` with a line:column position on malformed input.
    """
    instructions: list[Instruction] = []
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("//", 1)[0]
        offset = 0
        for segment in line.split(";"):
            token = segment.strip()
            if token:
                column = offset + segment.index(token[0]) + 1
                instructions.append(_parse_instruction(token, lineno, column))
            offset += len(segment) + 1
    if not instructions:
        raise ParseError("empty instruction sequence")
    return InstructionSequence(tuple(instructions))
