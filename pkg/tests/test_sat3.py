"""Clause numbering, formula encoding, and the backward-jump generator."""

import random

import pytest

from pglb import (
    BwdJump,
    ClauseShape,
    CnfFormula,
    Focus,
    InfeasibleArityError,
    ParseError,
    TERM_F,
    TERM_T,
    brute_sat,
    canonical_clause,
    check_snippet,
    clause_count,
    compute,
    decode,
    encode_cnf,
    encoding_to_text,
    foci_used,
    gen_3sat,
    length,
    next_snippet,
    parse_dimacs,
    parse_encoding,
    phi,
    phi_inv,
    render,
    trace,
)


def random_formula(rng: random.Random, k: int, clauses: int) -> CnfFormula:
    shapes = frozenset(phi(rng.randint(1, clause_count(k)), k) for _ in range(clauses))
    return CnfFormula(k, shapes)


def test_polarity_patterns_follow_the_eight_row_table():
    expected = {
        1: (True, True, True),
        2: (True, True, False),
        3: (True, False, True),
        4: (True, False, False),
        5: (False, True, True),
        6: (False, True, False),
        7: (False, False, True),
        8: (False, False, False),
    }
    for pattern, signs in expected.items():
        shape = ClauseShape(1, 2, 3, pattern)
        assert tuple(positive for _, positive in shape.literals()) == signs
        assert tuple(v for v, _ in shape.literals()) == (1, 2, 3)


def test_clause_numbering_endpoints():
    for k in (1, 2, 5):
        assert phi(1, k) == ClauseShape(1, 1, 1, 1)
        assert phi(clause_count(k), k) == ClauseShape(k, k, k, 8)


def test_clause_numbering_round_trip():
    for k in (1, 2, 3):
        for index in range(1, clause_count(k) + 1):
            assert phi_inv(phi(index, k), k) == index


def test_clause_numbering_bounds():
    with pytest.raises(ValueError):
        phi(0, 2)
    with pytest.raises(ValueError):
        phi(clause_count(2) + 1, 2)
    with pytest.raises(ValueError):
        phi_inv(ClauseShape(3, 1, 1, 1), 2)


def test_encode_empty_formula():
    assert encode_cnf(CnfFormula(1, frozenset())) == (False,) * 8


def test_encode_single_clause():
    bits = encode_cnf(CnfFormula(1, frozenset({ClauseShape(1, 1, 1, 1)})))
    assert bits[0] is True and not any(bits[1:])


def test_encode_decode_round_trip_exhaustive_for_one_variable():
    for raw in range(256):
        bits = tuple(bool(raw >> i & 1) for i in range(8))
        assert encode_cnf(decode(bits, 1)) == bits


def test_encode_decode_round_trip_random_shapes():
    rng = random.Random(51)
    for k in (2, 3):
        for _ in range(50):
            formula = random_formula(rng, k, rng.randint(0, 6))
            assert decode(encode_cnf(formula), k) == formula


def test_encoding_text_round_trip():
    bits = (True, False, False, True)
    assert encoding_to_text(bits) == "tfft"
    assert parse_encoding("tfft") == bits
    with pytest.raises(ParseError):
        parse_encoding("tfx")


def test_canonical_clause_sorts_literals():
    assert canonical_clause([(1, True), (1, False), (1, True)]) == ClauseShape(1, 1, 1, 2)
    assert canonical_clause([(3, False), (1, True), (2, True)]) == ClauseShape(1, 2, 3, 2)
    assert canonical_clause([(2, False), (2, False), (2, False)]) == ClauseShape(2, 2, 2, 8)


def test_dimacs_parsing():
    formula = parse_dimacs("c a comment\np cnf 2 2\n1 -2 1 0\n-1 2 2 0\n")
    assert formula.k == 2
    assert formula.clauses == frozenset(
        {ClauseShape(1, 1, 2, 2), ClauseShape(1, 2, 2, 5)}
    )


def test_dimacs_rejects_short_clauses_and_bad_counts():
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 2 1\n1 -2 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 2 2\n1 1 1 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("p cnf 1 1\n1 1 2 0\n")
    with pytest.raises(ParseError):
        parse_dimacs("1 1 1 0\n")


def test_check_snippet_shapes():
    all_positive = check_snippet(ClauseShape(2, 3, 1, 1))
    assert render(all_positive) == "+aux:2.get; #2; +aux:3.get; #2; +aux:1.get"
    all_negative = check_snippet(ClauseShape(2, 3, 1, 8))
    assert render(all_negative) == "-aux:2.get; #2; -aux:3.get; #2; -aux:1.get"
    for pattern in range(1, 9):
        snippet = check_snippet(ClauseShape(1, 2, 3, pattern))
        assert length(snippet) == 5
        assert all(f.kind == "aux" for f in foci_used(snippet))


def test_next_snippet_shape():
    assert render(next_snippet(1)) == (
        "-aux:1.get; #3; aux:1.set:f; #3; aux:1.set:t; !f"
    )
    two = next_snippet(2)
    assert length(two) == 11
    assert render(two).startswith("-aux:1.get; #3; aux:1.set:f; #5; aux:1.set:t; ")
    assert render(two).endswith("-aux:2.get; #3; aux:2.set:f; #3; aux:2.set:t; !f")
    for k in (1, 2, 3, 7):
        assert length(next_snippet(k)) == 5 * k + 1


def test_trace_shows_both_assignments_for_one_variable_contradiction():
    contradiction = CnfFormula(1, frozenset({ClauseShape(1, 1, 1, 1), ClauseShape(1, 1, 1, 8)}))
    steps = trace(gen_3sat(1), list(encode_cnf(contradiction)), 1, max_steps=10_000)
    passes = sum(1 for s in steps if s.kind == "action" and s.position == 1)
    assert passes == 2
    assert steps[-1].kind == "terminate" and steps[-1].reply.value == "f"


def test_generator_enumerates_all_assignments():
    # Both polarities of v1: unsatisfiable whatever the assignment, so the
    # generator must run through all four assignments over two variables.
    k = 2
    clauses = frozenset({ClauseShape(1, 1, 1, 1), ClauseShape(1, 1, 1, 8)})
    bits = list(encode_cnf(CnfFormula(k, clauses)))
    steps = trace(gen_3sat(k), bits, k, max_steps=100_000)
    assert steps[-1].kind == "terminate" and steps[-1].reply.value == "f"
    passes = sum(1 for s in steps if s.kind == "action" and s.position == 1)
    assert passes == 2**k
    # The first register read of each pass sees the current assignment's v1.
    first_reads = []
    expect_read = False
    for step in steps:
        if step.kind != "action":
            continue
        if step.position == 1:
            expect_read = True
        elif expect_read and step.action == "aux:1.get":
            first_reads.append(step.reply.value)
            expect_read = False
    assert first_reads == ["t", "f", "t", "f"]
    # The advancing section behaves as a binary counter with aux:1 fastest:
    # flip aux:1, and on wrap-around reset it and advance aux:2.
    set_actions = [s.action for s in steps if s.kind == "action" and "set" in s.action]
    assert set_actions == [
        "aux:1.set:f",
        "aux:1.set:t",
        "aux:2.set:f",
        "aux:1.set:f",
        "aux:1.set:t",
        "aux:2.set:t",
    ]


def test_generator_length_formula():
    for k in range(1, 6):
        assert length(gen_3sat(k)) == 72 * k**3 + 5 * k + 1


def test_generator_structure():
    for k in (1, 2, 3):
        prog = gen_3sat(k)
        backward = [u for u in prog if isinstance(u, BwdJump)]
        assert len(backward) == 1
        assert prog.at(len(prog)) == BwdJump(72 * k**3 + 5 * k)
        # The jump lands back on the first instruction.
        assert len(prog) - backward[0].offset == 1
        # Checking section: 9 instructions per clause except 8 for the last.
        check_section = 9 * (clause_count(k) - 1) + 8
        assert check_section == 72 * k**3 - 1
        assert prog.at(check_section) == TERM_T
        assert prog.at(check_section + 5 * k + 1) == TERM_F
        used = foci_used(prog)
        assert {f for f in used if f.kind == "in"} == {
            Focus.input(i) for i in range(1, clause_count(k) + 1)
        }
        assert {f for f in used if f.kind == "aux"} == {
            Focus.aux(i) for i in range(1, k + 1)
        }


def test_generator_rejects_zero_variables():
    with pytest.raises(ValueError):
        gen_3sat(0)


def test_brute_sat_basics():
    assert brute_sat(CnfFormula(1, frozenset()))
    assert not brute_sat(
        CnfFormula(1, frozenset({ClauseShape(1, 1, 1, 1), ClauseShape(1, 1, 1, 8)}))
    )
    assert brute_sat(CnfFormula(2, frozenset({ClauseShape(1, 2, 1, 4)})))
    with pytest.raises(InfeasibleArityError):
        brute_sat(CnfFormula(21, frozenset()))


def test_generator_agrees_with_brute_force_spot_checks():
    rng = random.Random(52)
    prog = gen_3sat(1)
    for _ in range(25):
        formula = random_formula(rng, 1, rng.randint(0, 5))
        expected = "t" if brute_sat(formula) else "f"
        assert compute(prog, list(encode_cnf(formula)), 1).value == expected


def test_satisfiable_and_unsatisfiable_single_variable_instances():
    prog = gen_3sat(1)
    only_positive = CnfFormula(1, frozenset({ClauseShape(1, 1, 1, 1)}))
    assert compute(prog, list(encode_cnf(only_positive)), 1).value == "t"
    contradiction = CnfFormula(
        1, frozenset({ClauseShape(1, 1, 1, 1), ClauseShape(1, 1, 1, 8)})
    )
    assert compute(prog, list(encode_cnf(contradiction)), 1).value == "f"
    assert compute(prog, [False] * 8, 1).value == "t"  # empty formula
