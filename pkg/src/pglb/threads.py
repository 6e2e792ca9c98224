"""Thread terms and finite-state thread graphs.

A thread describes the behaviour of a sequential program: it terminates with
a Boolean reply (S+ or S-), deadlocks (D), or performs an action and
continues along one of two branches depending on the reply. Finite threads
are trees; regular threads are finite graphs whose infinite unrolling is the
behaviour. ``project`` truncates behaviour after a given number of actions,
and two regular threads are interchangeable exactly when they are bisimilar.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .isa import Action


@dataclass(frozen=True)
class SPlus:
    def __str__(self) -> str:
        return "S+"


@dataclass(frozen=True)
class SMinus:
    def __str__(self) -> str:
        return "S-"


@dataclass(frozen=True)
class Deadlock:
    def __str__(self) -> str:
        return "D"


@dataclass(frozen=True)
class Post:
    """Postconditional composition: run the action, branch on its reply."""

    action: Action
    then_branch: "FiniteThread"
    else_branch: "FiniteThread"


FiniteThread = SPlus | SMinus | Deadlock | Post

S_PLUS = SPlus()
S_MINUS = SMinus()
DEADLOCK = Deadlock()

# Hash-consing cache so structurally equal projection terms share one object;
# keyed by child identity, so only feed it children it produced itself.
_POST_CACHE: dict[tuple[Action, int, int], Post] = {}


def make_post(action: Action, then_branch: FiniteThread, else_branch: FiniteThread) -> Post:
    key = (action, id(then_branch), id(else_branch))
    node = _POST_CACHE.get(key)
    if node is None:
        node = Post(action, then_branch, else_branch)
        _POST_CACHE[key] = node
    return node


def action_prefix(action: Action, thread: FiniteThread) -> Post:
    """``a . T``: both replies continue as ``thread``."""
    return make_post(action, thread, thread)


@dataclass(frozen=True)
class PostNode:
    """Graph form of a postconditional: branch targets are state ids."""

    action: Action
    then_state: int
    else_state: int


StateLabel = SPlus | SMinus | Deadlock | PostNode


@dataclass(frozen=True)
class RegularThread:
    """Finite-state thread: one label per state, a distinguished root.

    Equivalent to a finite guarded recursive specification with one equation
    per state.
    """

    states: tuple[StateLabel, ...]
    root: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise ValueError("a regular thread needs at least one state")
        if not 0 <= self.root < len(self.states):
            raise ValueError(f"root {self.root} out of range")
        for label in self.states:
            if isinstance(label, PostNode):
                for target in (label.then_state, label.else_state):
                    if not 0 <= target < len(self.states):
                        raise ValueError(f"dangling state reference {target}")

    @staticmethod
    def terminated(positive: bool) -> "RegularThread":
        return RegularThread((S_PLUS if positive else S_MINUS,), 0)

    @staticmethod
    def deadlocked() -> "RegularThread":
        return RegularThread((DEADLOCK,), 0)


def thread_from_term(term: FiniteThread) -> RegularThread:
    """Regular-thread form of a finite term (shared subterms become one state)."""
    labels: list[StateLabel] = []
    memo: dict[int, int] = {}
    keepalive: list[FiniteThread] = []

    def build(t: FiniteThread) -> int:
        state = memo.get(id(t))
        if state is not None:
            return state
        if isinstance(t, Post):
            # Reserve the slot first so children index past it.
            slot = len(labels)
            labels.append(DEADLOCK)
            memo[id(t)] = slot
            keepalive.append(t)
            labels[slot] = PostNode(t.action, build(t.then_branch), build(t.else_branch))
            return slot
        memo[id(t)] = len(labels)
        keepalive.append(t)
        labels.append(t)
        return len(labels) - 1

    root = build(term)
    return RegularThread(tuple(labels), root)


def project(thread: RegularThread, depth: int) -> FiniteThread:
    """Approximation up to ``depth``: cut the behaviour after that many actions.

    Depth 0 is always D; a postconditional at depth n+1 keeps its action and
    projects both branches at depth n.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    memo: dict[tuple[int, int], FiniteThread] = {}

    def pi(state: int, n: int) -> FiniteThread:
        key = (state, n)
        done = memo.get(key)
        if done is not None:
            return done
        label = thread.states[state]
        if n == 0 or isinstance(label, Deadlock):
            term: FiniteThread = DEADLOCK
        elif isinstance(label, SPlus):
            term = S_PLUS
        elif isinstance(label, SMinus):
            term = S_MINUS
        else:
            term = make_post(label.action, pi(label.then_state, n - 1), pi(label.else_state, n - 1))
        memo[key] = term
        return term

    return pi(thread.root, depth)


def projective_sequence(thread: RegularThread) -> Iterator[FiniteThread]:
    """The infinite sequence of approximations, starting with depth 0 (always D)."""
    depth = 0
    while True:
        yield project(thread, depth)
        depth += 1


def project_term(term: FiniteThread, depth: int) -> FiniteThread:
    """Projection on finite terms (same clauses as :func:`project`)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    memo: dict[tuple[int, int], FiniteThread] = {}
    keepalive: list[FiniteThread] = []

    def pi(t: FiniteThread, n: int) -> FiniteThread:
        key = (id(t), n)
        done = memo.get(key)
        if done is not None:
            return done
        if n == 0 or isinstance(t, Deadlock):
            out: FiniteThread = DEADLOCK
        elif isinstance(t, (SPlus, SMinus)):
            out = t
        else:
            out = make_post(t.action, pi(t.then_branch, n - 1), pi(t.else_branch, n - 1))
        memo[key] = out
        keepalive.append(t)
        return out

    return pi(term, depth)


def _label_class(label: StateLabel):
    if isinstance(label, PostNode):
        return ("post", label.action)
    return (str(label),)


def bisimilar(left: RegularThread, right: RegularThread) -> bool:
    """Behavioural equality of regular threads, by partition refinement.

    Sound and complete for finite graphs: blocks are refined on (action,
    then-block, else-block) until stable, then the two roots must share a
    block.
    """
    offset = len(left.states)
    labels = list(left.states) + [
        PostNode(l.action, l.then_state + offset, l.else_state + offset)
        if isinstance(l, PostNode)
        else l
        for l in right.states
    ]
    classes: dict[object, int] = {}
    block = [classes.setdefault(_label_class(l), len(classes)) for l in labels]
    while True:
        keys: dict[object, int] = {}
        new_block = []
        for state, label in enumerate(labels):
            if isinstance(label, PostNode):
                key = (block[state], block[label.then_state], block[label.else_state])
            else:
                key = (block[state],)
            new_block.append(keys.setdefault(key, len(keys)))
        if new_block == block:
            return block[left.root] == block[right.root + offset]
        block = new_block


def aip_equal(left: RegularThread, right: RegularThread, depth: int) -> bool:
    """True when all projections up to ``depth`` coincide as terms."""
    return all(project(left, n) == project(right, n) for n in range(depth + 1))


def render_term(term: FiniteThread) -> str:
    """Readable form: ``a . T`` for action prefix, ``T <+ a +> T'`` otherwise."""

    def go(t: FiniteThread, as_argument: bool) -> str:
        if not isinstance(t, Post):
            return str(t)
        if t.then_branch is t.else_branch or t.then_branch == t.else_branch:
            return f"{t.action} ∘ {go(t.then_branch, True)}"
        body = f"{go(t.then_branch, True)} ⊴ {t.action} ⊵ {go(t.else_branch, True)}"
        return f"({body})" if as_argument else body

    return go(term, False)


def _successors(label: StateLabel) -> tuple[int, ...]:
    if not isinstance(label, PostNode):
        return ()
    if label.then_state == label.else_state:
        return (label.then_state,)
    return (label.then_state, label.else_state)


def _reachable_preorder(thread: RegularThread) -> list[int]:
    seen: set[int] = set()
    order: list[int] = []
    stack = [thread.root]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        order.append(state)
        stack.extend(reversed(_successors(thread.states[state])))
    return order


def thread_equations(thread: RegularThread) -> str:
    """Recursive-specification view, one line per named state (root is E0).

    States referenced more than once or closing a cycle get a name; anything
    else is inlined, so simple examples read like hand-written equations.
    """
    order = _reachable_preorder(thread)
    reachable = set(order)
    refs: dict[int, int] = {s: 0 for s in reachable}
    for state in reachable:
        for succ in _successors(thread.states[state]):
            refs[succ] += 1

    # A back edge target must be named or inlining would never bottom out.
    back_targets: set[int] = set()
    on_stack: set[int] = set()
    visited: set[int] = set()
    stack: list[tuple[int, int]] = [(thread.root, 0)]
    visited.add(thread.root)
    on_stack.add(thread.root)
    while stack:
        state, child = stack[-1]
        succs = _successors(thread.states[state])
        if child < len(succs):
            stack[-1] = (state, child + 1)
            nxt = succs[child]
            if nxt in on_stack:
                back_targets.add(nxt)
            elif nxt not in visited:
                visited.add(nxt)
                on_stack.add(nxt)
                stack.append((nxt, 0))
        else:
            stack.pop()
            on_stack.discard(state)

    named: dict[int, str] = {}
    for state in order:
        is_post = isinstance(thread.states[state], PostNode)
        if state == thread.root or (is_post and (refs[state] >= 2 or state in back_targets)):
            named[state] = f"E{len(named)}"

    def go(state: int, as_argument: bool, defining: bool) -> str:
        if not defining and state in named:
            return named[state]
        label = thread.states[state]
        if not isinstance(label, PostNode):
            return str(label)
        if label.then_state == label.else_state:
            return f"{label.action} ∘ {go(label.then_state, True, False)}"
        left = go(label.then_state, True, False)
        right = go(label.else_state, True, False)
        body = f"{left} ⊴ {label.action} ⊵ {right}"
        return f"({body})" if as_argument else body

    lines = [f"{name} = {go(state, False, True)}" for state, name in named.items()]
    return "\n".join(lines)


def thread_to_dot(thread: RegularThread) -> str:
    """Graphviz dot export: one node per state, t/f edges per postconditional."""
    lines = ["digraph thread {", "  start [shape=point];", f"  start -> s{thread.root};"]
    for state, label in enumerate(thread.states):
        if isinstance(label, PostNode):
            lines.append(f'  s{state} [label="{label.action}"];')
            lines.append(f'  s{state} -> s{label.then_state} [label="t"];')
            lines.append(f'  s{state} -> s{label.else_state} [label="f"];')
        else:
            lines.append(f'  s{state} [label="{label}", shape=box];')
    lines.append("}")
    return "\n".join(lines)
