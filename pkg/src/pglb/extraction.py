"""Thread extraction: the behaviour of an instruction sequence.

Extraction is positional. Position 0 and positions past the end are
deadlock; a basic action continues at the next position; a positive test
branches to the next position on reply t and skips one on reply f (a
negative test swaps the roles); jumps move the position without observable
behaviour; ``!t``/``!f`` terminate. A cycle consisting solely of jumps is an
infinite jump chain and deadlocks.
"""

from __future__ import annotations

from .isa import Basic, BwdJump, FwdJump, InstructionSequence, PosTest, Termination
from .threads import DEADLOCK, PostNode, RegularThread, S_MINUS, S_PLUS, StateLabel


def _jump_target(position: int, instruction) -> int:
    if isinstance(instruction, FwdJump):
        return position + instruction.offset
    # Backward jump that would leave the program lands on position 0.
    return position - instruction.offset if position > instruction.offset else 0


def resolve_jumps(sequence: InstructionSequence, start: int) -> int | None:
    """Follow jumps from ``start`` to the position where behaviour continues.

    Returns the first non-jump position reached, 0 when the chain leaves the
    program, or None when the jumps form a cycle (infinite jump chain).
    """
    size = len(sequence)
    position = start
    seen: set[int] = set()
    while True:
        if position < 1 or position > size:
            return 0
        instruction = sequence.at(position)
        if not isinstance(instruction, (FwdJump, BwdJump)):
            return position
        if position in seen:
            return None
        seen.add(position)
        position = _jump_target(position, instruction)


def extract_at(sequence: InstructionSequence, start: int) -> RegularThread:
    """Thread extraction beginning at an arbitrary position (0 and >k give D)."""
    size = len(sequence)

    # Memoized jump resolution: one pass over each position.
    resolved: dict[int, int | None] = {}

    def resolve(position: int) -> int | None:
        chain: list[int] = []
        on_chain: set[int] = set()
        result: int | None
        p = position
        while True:
            if p in resolved:
                result = resolved[p]
                break
            if p < 1 or p > size:
                result = 0
                break
            instruction = sequence.at(p)
            if not isinstance(instruction, (FwdJump, BwdJump)):
                result = p
                break
            if p in on_chain:
                result = None
                break
            chain.append(p)
            on_chain.add(p)
            p = _jump_target(p, instruction)
        for q in chain:
            resolved[q] = result
        return result

    # One state per non-jump position, plus a shared deadlock state.
    state_of: dict[int, int] = {}
    concrete: list[tuple[int, object]] = []
    for position in range(1, size + 1):
        instruction = sequence.at(position)
        if not isinstance(instruction, (FwdJump, BwdJump)):
            state_of[position] = len(concrete)
            concrete.append((position, instruction))
    deadlock_state = len(concrete)

    def target_state(position: int) -> int:
        landing = resolve(position)
        if landing is None or landing == 0:
            return deadlock_state
        return state_of[landing]

    labels: list[StateLabel] = []
    for position, instruction in concrete:
        if isinstance(instruction, Termination):
            labels.append(S_PLUS if instruction.positive else S_MINUS)
        elif isinstance(instruction, Basic):
            succ = target_state(position + 1)
            labels.append(PostNode(instruction.action, succ, succ))
        elif isinstance(instruction, PosTest):
            labels.append(
                PostNode(instruction.action, target_state(position + 1), target_state(position + 2))
            )
        else:  # NegTest: complementary branch roles
            labels.append(
                PostNode(instruction.action, target_state(position + 2), target_state(position + 1))
            )
    labels.append(DEADLOCK)
    root = target_state(start)

    # Drop states unreachable from the root, keeping position order.
    keep: set[int] = set()
    stack = [root]
    while stack:
        state = stack.pop()
        if state in keep:
            continue
        keep.add(state)
        label = labels[state]
        if isinstance(label, PostNode):
            stack.append(label.then_state)
            stack.append(label.else_state)
    remap = {old: new for new, old in enumerate(sorted(keep))}
    pruned: list[StateLabel] = []
    for old in sorted(keep):
        label = labels[old]
        if isinstance(label, PostNode):
            label = PostNode(label.action, remap[label.then_state], remap[label.else_state])
        pruned.append(label)
    return RegularThread(tuple(pruned), remap[root])


def extract(sequence: InstructionSequence) -> RegularThread:
    """``|X| = |1, X|``: extraction starting at the first instruction."""
    return extract_at(sequence, 1)
