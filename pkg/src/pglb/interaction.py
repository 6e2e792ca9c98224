"""Interaction between threads and service families: use, reply, compute, trace.

The use operator feeds every action whose focus names a service in the
family to that service: the action becomes the internal step tau and the
branch is chosen by the service's reply (reply d deadlocks). Actions with
foci outside the family pass through untouched. The reply operator is the
Boolean value such a thread delivers at termination, and d when it
deadlocks, meets an unserved action, or never terminates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import StateSpaceCapExceeded
from .extraction import extract, resolve_jumps
from .isa import (
    Basic,
    InstructionSequence,
    NegTest,
    PosTest,
    TAU,
    Termination,
    render_instruction,
)
from .services import Reply, ServiceFamily, register_family
from .threads import DEADLOCK, Deadlock, PostNode, RegularThread, SMinus, SPlus

DEFAULT_STATE_CAP = 500_000


def use_apply(
    thread: RegularThread, family: ServiceFamily, max_states: int = DEFAULT_STATE_CAP
) -> RegularThread:
    """Product of a thread with a service family (the use operator).

    The result's states are reachable configurations (thread state, family
    state). Raises :class:`StateSpaceCapExceeded` when more than
    ``max_states`` configurations appear, which signals a service with an
    unexpectedly large state space.
    """
    labels_in = thread.states
    index: dict[tuple[int, str], int] = {}
    labels_out: list[object] = []
    queue: deque[tuple[int, int, ServiceFamily]] = deque()

    def config(state: int, fam: ServiceFamily) -> int:
        key = (state, fam.signature())
        known = index.get(key)
        if known is not None:
            return known
        if len(index) >= max_states:
            raise StateSpaceCapExceeded(f"more than {max_states} thread/service configurations")
        cfg = len(index)
        index[key] = cfg
        labels_out.append(DEADLOCK)  # placeholder until processed
        queue.append((cfg, state, fam))
        return cfg

    root = config(thread.root, family)
    while queue:
        cfg, state, fam = queue.popleft()
        label = labels_in[state]
        if not isinstance(label, PostNode):
            labels_out[cfg] = label
            continue
        action = label.action
        if action == TAU or action.focus is None or action.focus not in fam:
            # Internal steps and unserved actions pass through unchanged.
            labels_out[cfg] = PostNode(
                action, config(label.then_state, fam), config(label.else_state, fam)
            )
            continue
        service = fam.get(action.focus)
        answer = service.reply(action.name)
        if answer is Reply.D:
            labels_out[cfg] = DEADLOCK
            continue
        derived = fam.replaced(action.focus, service.derive(action.name))
        branch = label.then_state if answer is Reply.T else label.else_state
        follow = config(branch, derived)
        labels_out[cfg] = PostNode(TAU, follow, follow)
    return RegularThread(tuple(labels_out), root)  # type: ignore[arg-type]


def reply(thread: RegularThread, family: ServiceFamily) -> Reply:
    """The Boolean value the thread delivers under the family, or d.

    Walks the single execution path: tau steps are transparent, service
    replies pick branches, and a revisited configuration means the thread
    never terminates (reply d).
    """
    state = thread.root
    fam = family
    labels = thread.states
    seen: set[tuple[int, str]] = set()
    while True:
        key = (state, fam.signature())
        if key in seen:
            return Reply.D
        seen.add(key)
        label = labels[state]
        if isinstance(label, SPlus):
            return Reply.T
        if isinstance(label, SMinus):
            return Reply.F
        if isinstance(label, Deadlock):
            return Reply.D
        action = label.action
        if action == TAU:
            state = label.then_state
            continue
        if action.focus is None:
            return Reply.D
        service = fam.get(action.focus)
        if service is None:
            return Reply.D
        answer = service.reply(action.name)
        if answer is Reply.D:
            return Reply.D
        fam = fam.replaced(action.focus, service.derive(action.name))
        state = label.then_state if answer is Reply.T else label.else_state


def compute(
    sequence: InstructionSequence,
    inputs: list[bool] | tuple[bool, ...],
    aux_count: int = 0,
    max_states: int = DEFAULT_STATE_CAP,
) -> Reply:
    """Run a program on Boolean inputs.

    The program's thread first uses aux:1..aux_count registers (all starting
    at t), then the reply is taken over input registers in:1..in:k holding
    the given values.
    """
    if not all(isinstance(b, bool) for b in inputs):
        raise ValueError("inputs must be Booleans")
    use_fam, reply_fam = register_family(inputs, aux_count)
    thread = extract(sequence)
    if aux_count:
        thread = use_apply(thread, use_fam, max_states)
    return reply(thread, reply_fam)


@dataclass(frozen=True)
class TraceStep:
    """One record of an execution walk."""

    kind: str  # action | terminate | deadlock | no-service | divergent | truncated
    position: int | None = None
    instruction: str | None = None
    action: str | None = None
    reply: Reply | None = None
    note: str = ""

    def __str__(self) -> str:
        head = f"[{self.position}] " if self.position is not None else ""
        if self.kind == "action":
            return f"{head}{self.instruction}: {self.action} -> {self.reply}"
        if self.kind == "terminate":
            return f"{head}{self.instruction}: terminate {self.reply}"
        body = self.kind if not self.note else f"{self.kind} ({self.note})"
        return f"{head}{body}"


def trace(
    sequence: InstructionSequence,
    inputs: list[bool] | tuple[bool, ...],
    aux_count: int = 0,
    max_steps: int = 10_000,
) -> list[TraceStep]:
    """Deterministic step log of a computation, truncated at ``max_steps``.

    Follows the same semantics as :func:`compute` but at instruction level:
    each executed basic or test instruction becomes one record.
    """
    use_fam, reply_fam = register_family(inputs, aux_count)
    steps: list[TraceStep] = []
    seen: set[tuple[int, str, str]] = set()
    position = resolve_jumps(sequence, 1)
    while True:
        if len(steps) >= max_steps:
            steps.append(TraceStep("truncated", note=f"after {max_steps} steps"))
            return steps
        if position is None:
            steps.append(TraceStep("deadlock", note="infinite jump chain", reply=Reply.D))
            return steps
        if position == 0:
            steps.append(TraceStep("deadlock", note="no instruction to execute", reply=Reply.D))
            return steps
        key = (position, use_fam.signature(), reply_fam.signature())
        if key in seen:
            steps.append(
                TraceStep("divergent", position=position, note="configuration cycle", reply=Reply.D)
            )
            return steps
        seen.add(key)
        instruction = sequence.at(position)
        rendered = render_instruction(instruction)
        if isinstance(instruction, Termination):
            steps.append(
                TraceStep(
                    "terminate",
                    position=position,
                    instruction=rendered,
                    reply=Reply.T if instruction.positive else Reply.F,
                )
            )
            return steps
        assert isinstance(instruction, (Basic, PosTest, NegTest))
        action = instruction.action
        if action.focus is None or (action.focus not in use_fam and action.focus not in reply_fam):
            steps.append(
                TraceStep(
                    "no-service",
                    position=position,
                    instruction=rendered,
                    action=str(action),
                    reply=Reply.D,
                    note="no service under this focus",
                )
            )
            return steps
        fam = use_fam if action.focus in use_fam else reply_fam
        service = fam.get(action.focus)
        answer = service.reply(action.name)
        steps.append(
            TraceStep(
                "action",
                position=position,
                instruction=rendered,
                action=str(action),
                reply=answer,
            )
        )
        if answer is Reply.D:
            return steps
        derived = fam.replaced(action.focus, service.derive(action.name))
        if fam is use_fam:
            use_fam = derived
        else:
            reply_fam = derived
        if isinstance(instruction, Basic):
            offset = 1
        elif isinstance(instruction, PosTest):
            offset = 1 if answer is Reply.T else 2
        else:
            offset = 2 if answer is Reply.T else 1
        position = resolve_jumps(sequence, position + offset)
