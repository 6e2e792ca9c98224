"""Loop-free code generators: truth tables and circuits to straight-line programs.

Any partial Boolean function of arity k compiles to a loop-free program of
length exactly 3*2^k - 2 that reads only input registers: split on the
highest input, emit both restrictions, and jump over the first. A circuit
with n gates compiles to at most 4n + 3 instructions by giving every gate an
auxiliary register, initially t, that is forced to f whenever the gate
evaluates to false.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from .errors import InfeasibleArityError, MalformedCircuitError, ParseError
from .isa import (
    Action,
    Basic,
    Focus,
    FwdJump,
    GET,
    InstructionSequence,
    Instruction,
    NegTest,
    PosTest,
    SET_F,
    TERM_F,
    TERM_T,
)
from .sat3 import brute_sat, clause_count, decode


@dataclass(frozen=True)
class PartialBooleanFunction:
    """Total table over B^k with entries t, f or undefined (None).

    Entries are indexed with input 1 as the least significant bit, so fixing
    the last input selects a contiguous half of the table.
    """

    arity: int
    entries: tuple[bool | None, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.arity < 0:
            raise ValueError("arity must be >= 0")
        if len(self.entries) != 2**self.arity:
            raise ValueError(f"table needs {2 ** self.arity} entries, got {len(self.entries)}")

    @staticmethod
    def _index(bits: Sequence[bool]) -> int:
        return sum(1 << i for i, b in enumerate(bits) if b)

    @staticmethod
    def from_callable(arity: int, fn: Callable[[tuple[bool, ...]], bool | None]) -> "PartialBooleanFunction":
        entries = []
        for index in range(2**arity):
            bits = tuple(bool(index >> i & 1) for i in range(arity))
            entries.append(fn(bits))
        return PartialBooleanFunction(arity, tuple(entries))

    @staticmethod
    def from_table(arity: int, table: Mapping[tuple[bool, ...], bool | None]) -> "PartialBooleanFunction":
        if len(table) != 2**arity:
            raise ValueError("table must cover every input vector")
        return PartialBooleanFunction.from_callable(arity, lambda bits: table[bits])

    def value_at(self, bits: Sequence[bool]) -> bool | None:
        if len(bits) != self.arity:
            raise ValueError(f"expected {self.arity} inputs, got {len(bits)}")
        return self.entries[self._index(bits)]

    def inputs(self) -> Iterator[tuple[bool, ...]]:
        """All input vectors in table order."""
        for index in range(2**self.arity):
            yield tuple(bool(index >> i & 1) for i in range(self.arity))

    def restricted(self, last: bool) -> "PartialBooleanFunction":
        """The (k-1)-ary function with the last input fixed."""
        if self.arity == 0:
            raise ValueError("cannot restrict a nullary function")
        half = 2 ** (self.arity - 1)
        return PartialBooleanFunction(
            self.arity - 1, self.entries[half:] if last else self.entries[:half]
        )


def compile_truth_table(fn: PartialBooleanFunction) -> InstructionSequence:
    """Loop-free program of length 3*2^k - 2 computing the table, no aux registers.

    Nullary tables are a single !t, !f or #0 (whose behaviour is deadlock,
    hence reply d, for the undefined entry). Otherwise test the last input
    and jump over the compiled b=t restriction into the b=f restriction.
    """
    if fn.arity == 0:
        value = fn.entries[0]
        if value is None:
            return InstructionSequence.of(FwdJump(0))
        return InstructionSequence.of(TERM_T if value else TERM_F)
    on_true = compile_truth_table(fn.restricted(True))
    on_false = compile_truth_table(fn.restricted(False))
    head: tuple[Instruction, ...] = (
        NegTest(Action(GET, Focus.input(fn.arity))),
        FwdJump(3 * 2 ** (fn.arity - 1) - 1),
    )
    return InstructionSequence(head + on_true.instructions + on_false.instructions)


@dataclass(frozen=True)
class InputRef:
    index: int


@dataclass(frozen=True)
class GateRef:
    index: int


Operand = InputRef | GateRef

NOT, AND, OR = "NOT", "AND", "OR"


@dataclass(frozen=True)
class Gate:
    op: str
    left: Operand
    right: Operand | None = None

    def __post_init__(self) -> None:
        if self.op not in (NOT, AND, OR):
            raise MalformedCircuitError(f"unknown gate op {self.op!r}")
        if (self.right is None) != (self.op == NOT):
            raise MalformedCircuitError(f"{self.op} gate has the wrong operand count")


@dataclass(frozen=True)
class Circuit:
    """NOT/AND/OR netlist; gates in topological order, the last one is the output."""

    input_count: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.input_count < 0:
            raise MalformedCircuitError("negative input count")
        if not self.gates:
            raise MalformedCircuitError("a circuit needs at least one gate")
        for number, gate in enumerate(self.gates, 1):
            for operand in (gate.left, gate.right):
                if operand is None:
                    continue
                if isinstance(operand, InputRef):
                    if not 1 <= operand.index <= self.input_count:
                        raise MalformedCircuitError(f"gate {number} reads input {operand.index}")
                elif not 1 <= operand.index < number:
                    raise MalformedCircuitError(
                        f"gate {number} references gate {operand.index} (forward or self)"
                    )


def _operand_get(operand: Operand) -> Action:
    if isinstance(operand, InputRef):
        return Action(GET, Focus.input(operand.index))
    return Action(GET, Focus.aux(operand.index))


def compile_circuit(circuit: Circuit) -> InstructionSequence:
    """Loop-free program computing the circuit, one aux register per gate.

    Register aux:j starts t and is cleared when gate j is false: NOT clears
    on a true operand, AND on either operand false, OR only when both are.
    The tail reads the output gate's register and terminates.
    """
    instructions: list[Instruction] = []
    for number, gate in enumerate(circuit.gates, 1):
        clear = Basic(Action(SET_F, Focus.aux(number)))
        left = _operand_get(gate.left)
        if gate.op == NOT:
            instructions.extend([PosTest(left), clear])
        elif gate.op == AND:
            instructions.extend([NegTest(left), FwdJump(2), NegTest(_operand_get(gate.right)), clear])
        else:  # OR
            instructions.extend([PosTest(left), FwdJump(3), NegTest(_operand_get(gate.right)), clear])
    instructions.extend([PosTest(Action(GET, Focus.aux(len(circuit.gates)))), TERM_T, TERM_F])
    return InstructionSequence(tuple(instructions))


def compile_3sat_loopfree(k: int) -> InstructionSequence:
    """Loop-free satisfiability decider built from the full truth table.

    Feasible only for k = 1 (arity 8, 256 rows); the table for k = 2 already
    has 2^64 rows.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= 2:
        raise InfeasibleArityError(
            f"truth table for k={k} has 2^{clause_count(k)} rows; only k=1 is materialisable"
        )
    arity = clause_count(k)
    table = PartialBooleanFunction.from_callable(arity, lambda bits: brute_sat(decode(bits, k)))
    return compile_truth_table(table)


def parse_truth_table(text: str) -> PartialBooleanFunction:
    """Table file: line ``k <arity>`` then one ``<pattern> <t|f|u>`` row per input.

    Patterns are read left to right as inputs 1..k; all 2^k rows must appear
    exactly once.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("k"):
        raise ParseError("first line must be 'k <arity>'", 1)
    fields = lines[0].split()
    if len(fields) != 2 or not fields[1].isdigit():
        raise ParseError("first line must be 'k <arity>'", 1)
    arity = int(fields[1])
    rows: dict[tuple[bool, ...], bool | None] = {}
    for lineno, line in enumerate(lines[1:], 2):
        fields = line.split()
        if arity == 0 and len(fields) == 1:
            pattern, value_text = "", fields[0]
        elif len(fields) == 2:
            pattern, value_text = fields
        else:
            raise ParseError("row must be '<pattern> <value>'", lineno)
        if len(pattern) != arity or not set(pattern) <= {"t", "f"}:
            raise ParseError(f"pattern must be {arity} characters over t/f", lineno)
        if value_text not in ("t", "f", "u"):
            raise ParseError("value must be t, f or u", lineno)
        bits = tuple(c == "t" for c in pattern)
        if bits in rows:
            raise ParseError(f"duplicate row {pattern!r}", lineno)
        rows[bits] = None if value_text == "u" else value_text == "t"
    if len(rows) != 2**arity:
        raise ParseError(f"table needs {2 ** arity} rows, found {len(rows)}")
    return PartialBooleanFunction.from_table(arity, rows)


def format_truth_table(fn: PartialBooleanFunction) -> str:
    lines = [f"k {fn.arity}"]
    for bits in sorted(fn.inputs()):
        pattern = "".join("t" if b else "f" for b in bits)
        value = fn.value_at(bits)
        value_text = "u" if value is None else ("t" if value else "f")
        lines.append(f"{pattern} {value_text}".strip())
    return "\n".join(lines) + "\n"


def _parse_operand(token: str, lineno: int) -> Operand:
    if len(token) > 1 and token[0] in "xg" and token[1:].isdigit():
        index = int(token[1:])
        return InputRef(index) if token[0] == "x" else GateRef(index)
    raise ParseError(f"operand must be x<j> or g<j>, got {token!r}", lineno)


def parse_netlist(text: str) -> Circuit:
    """Netlist file: ``inputs <k>`` then ``g<i> = OP <op> [<op>]`` lines in order."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("inputs"):
        raise ParseError("first line must be 'inputs <k>'", 1)
    fields = lines[0].split()
    if len(fields) != 2 or not fields[1].isdigit():
        raise ParseError("first line must be 'inputs <k>'", 1)
    input_count = int(fields[1])
    gates: list[Gate] = []
    for lineno, line in enumerate(lines[1:], 2):
        fields = line.split()
        if len(fields) < 4 or fields[1] != "=" or fields[0] != f"g{len(gates) + 1}":
            raise ParseError(f"expected 'g{len(gates) + 1} = OP <operands>'", lineno)
        op = fields[2]
        operands = [_parse_operand(tok, lineno) for tok in fields[3:]]
        if op == NOT and len(operands) == 1:
            gates.append(Gate(NOT, operands[0]))
        elif op in (AND, OR) and len(operands) == 2:
            gates.append(Gate(op, operands[0], operands[1]))
        else:
            raise ParseError(f"bad gate line {line!r}", lineno)
    if not gates:
        raise ParseError("netlist declares no gates")
    try:
        return Circuit(input_count, tuple(gates))
    except MalformedCircuitError as exc:
        raise ParseError(str(exc)) from None


def format_netlist(circuit: Circuit) -> str:
    def operand_text(operand: Operand | None) -> str:
        if operand is None:
            return ""
        prefix = "x" if isinstance(operand, InputRef) else "g"
        return f" {prefix}{operand.index}"

    lines = [f"inputs {circuit.input_count}"]
    for number, gate in enumerate(circuit.gates, 1):
        lines.append(f"g{number} = {gate.op}{operand_text(gate.left)}{operand_text(gate.right)}")
    return "\n".join(lines) + "\n"
