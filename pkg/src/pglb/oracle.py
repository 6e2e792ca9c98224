"""Independent brute-force evaluators that certify generated programs.

These deliberately avoid the extraction/interaction machinery: a circuit is
evaluated gate by gate, a table is looked up, and a program counts as
correct only when its runs agree with the direct evaluation on every input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InfeasibleArityError
from .extraction import extract
from .interaction import reply, use_apply
from .isa import InstructionSequence
from .services import Reply, register_family
from .synthesis import AND, Circuit, InputRef, NOT, PartialBooleanFunction


def eval_circuit(circuit: Circuit, inputs: Sequence[bool]) -> bool:
    """Evaluate the netlist on the given inputs (last gate is the output)."""
    if len(inputs) != circuit.input_count:
        raise ValueError(f"expected {circuit.input_count} inputs, got {len(inputs)}")
    values: list[bool] = []

    def read(operand) -> bool:
        if isinstance(operand, InputRef):
            return inputs[operand.index - 1]
        return values[operand.index - 1]

    for gate in circuit.gates:
        if gate.op == NOT:
            values.append(not read(gate.left))
        elif gate.op == AND:
            values.append(read(gate.left) and read(gate.right))
        else:
            values.append(read(gate.left) or read(gate.right))
    return values[-1]


@dataclass(frozen=True)
class Mismatch:
    inputs: tuple[bool, ...]
    got: Reply
    expected: Reply

    def __str__(self) -> str:
        pattern = "".join("t" if b else "f" for b in self.inputs)
        return f"input {pattern or '(none)'}: got {self.got}, expected {self.expected}"


@dataclass(frozen=True)
class EquivalenceReport:
    arity: int
    aux_count: int
    mismatches: tuple[Mismatch, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        if self.ok:
            return f"equivalent on all {2 ** self.arity} inputs"
        return f"{len(self.mismatches)} mismatching input(s) out of {2 ** self.arity}"


def equivalence_check(
    sequence: InstructionSequence, fn: PartialBooleanFunction, aux_count: int = 0
) -> EquivalenceReport:
    """Sweep all 2^k inputs; an empty report certifies that the program computes fn.

    Undefined table entries must come out as reply d.
    """
    if fn.arity > 20:
        raise InfeasibleArityError(f"sweep over 2^{fn.arity} inputs refused")
    thread = extract(sequence)
    if aux_count:
        use_fam, _ = register_family((), aux_count)
        thread = use_apply(thread, use_fam)
    mismatches: list[Mismatch] = []
    for bits in fn.inputs():
        _, input_fam = register_family(bits)
        got = reply(thread, input_fam)
        entry = fn.value_at(bits)
        expected = Reply.D if entry is None else Reply.of(entry)
        if got is not expected:
            mismatches.append(Mismatch(bits, got, expected))
    return EquivalenceReport(fn.arity, aux_count, tuple(mismatches))
