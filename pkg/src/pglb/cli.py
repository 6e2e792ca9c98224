"""Command-line front end.

Exit codes: 0 success (verify: equivalent), 1 verification mismatch,
2 usage or parse error, 3 resource guard tripped (infeasible arity or
configuration cap). Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InfeasibleArityError, ParseError, StateSpaceCapExceeded
from .extraction import extract
from .interaction import compute, trace
from .isa import Basic, InstructionSequence, NegTest, PosTest, parse, render
from .oracle import equivalence_check
from .sat3 import clause_count, encode_cnf, encoding_to_text, gen_3sat, parse_dimacs
from .synthesis import compile_circuit, compile_truth_table, parse_netlist, parse_truth_table
from .threads import project, render_term, thread_equations, thread_to_dot

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_program(path: str) -> InstructionSequence:
    return parse(_read(path))


def _parse_inputs(text: str) -> list[bool]:
    if not set(text) <= {"t", "f"}:
        raise ParseError(f"input vector must be a t/f string, got {text!r}")
    return [c == "t" for c in text]


def _cmd_fmt(args) -> int:
    print(render(_load_program(args.file)))
    return EXIT_OK


def _cmd_extract(args) -> int:
    thread = extract(_load_program(args.file))
    print(thread_to_dot(thread) if args.graph else thread_equations(thread))
    return EXIT_OK


def _cmd_project(args) -> int:
    thread = extract(_load_program(args.file))
    print(render_term(project(thread, args.depth)))
    return EXIT_OK


def _cmd_run(args) -> int:
    program = _load_program(args.file)
    for instruction in program:
        if isinstance(instruction, (Basic, PosTest, NegTest)) and instruction.action.focus is None:
            print(f"non-service action '{instruction.action}'", file=sys.stderr)
            return EXIT_USAGE
    inputs = _parse_inputs(args.inputs)
    if args.trace:
        for step in trace(program, inputs, args.aux):
            print(step)
    print(compute(program, inputs, args.aux))
    return EXIT_OK


def _cmd_compile_tt(args) -> int:
    print(render(compile_truth_table(parse_truth_table(_read(args.file)))))
    return EXIT_OK


def _cmd_compile_circuit(args) -> int:
    print(render(compile_circuit(parse_netlist(_read(args.file)))))
    return EXIT_OK


def _cmd_gen_3sat(args) -> int:
    print(render(gen_3sat(args.k)))
    return EXIT_OK


def _cmd_encode_cnf(args) -> int:
    print(encoding_to_text(encode_cnf(parse_dimacs(_read(args.file)))))
    return EXIT_OK


def _cmd_verify(args) -> int:
    program = _load_program(args.program)
    table = parse_truth_table(_read(args.tt))
    report = equivalence_check(program, table, args.aux)
    print(report)
    for mismatch in report.mismatches:
        print(mismatch)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _cmd_lengths(args) -> int:
    print("k\tloop-free\twith-backward-jumps")
    for k in range(1, args.max_k + 1):
        loop_free = 3 * 2 ** clause_count(k) - 2
        with_jumps = 72 * k**3 + 5 * k + 1
        print(f"{k}\t{loop_free}\t{with_jumps}")
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pglb", description="Instruction-sequence toolkit: parse, run, compile, verify."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    fmt = commands.add_parser("fmt", help="reprint a program in canonical form")
    fmt.add_argument("file")
    fmt.set_defaults(func=_cmd_fmt)

    ext = commands.add_parser("extract", help="print the extracted thread as equations")
    ext.add_argument("file")
    ext.add_argument("--graph", action="store_true", help="emit graphviz dot instead")
    ext.set_defaults(func=_cmd_extract)

    proj = commands.add_parser("project", help="print the depth-n approximation of the thread")
    proj.add_argument("file")
    proj.add_argument("-n", "--depth", type=_nonnegative_int, required=True)
    proj.set_defaults(func=_cmd_project)

    run = commands.add_parser("run", help="run a program against Boolean registers")
    run.add_argument("file")
    run.add_argument("--in", dest="inputs", default="", help="input registers as a t/f string")
    run.add_argument("--aux", type=_nonnegative_int, default=0, help="number of aux registers")
    run.add_argument("--trace", action="store_true", help="print one line per executed step")
    run.set_defaults(func=_cmd_run)

    comp = commands.add_parser("compile", help="generate a loop-free program")
    comp_sub = comp.add_subparsers(dest="what", required=True)
    comp_tt = comp_sub.add_parser("tt", help="from a truth-table file")
    comp_tt.add_argument("file")
    comp_tt.set_defaults(func=_cmd_compile_tt)
    comp_circuit = comp_sub.add_parser("circuit", help="from a netlist file")
    comp_circuit.add_argument("file")
    comp_circuit.set_defaults(func=_cmd_compile_circuit)

    gen = commands.add_parser("gen", help="generate a solver program")
    gen_sub = gen.add_subparsers(dest="what", required=True)
    gen_sat = gen_sub.add_parser("3sat", help="satisfiability decider with one backward jump")
    gen_sat.add_argument("-k", type=_positive_int, required=True, help="number of variables")
    gen_sat.set_defaults(func=_cmd_gen_3sat)

    enc = commands.add_parser("encode", help="encode problem instances")
    enc_sub = enc.add_subparsers(dest="what", required=True)
    enc_cnf = enc_sub.add_parser("cnf", help="DIMACS 3-CNF to t/f input string")
    enc_cnf.add_argument("file")
    enc_cnf.set_defaults(func=_cmd_encode_cnf)

    ver = commands.add_parser("verify", help="check a program against a truth table")
    ver.add_argument("program")
    ver.add_argument("--tt", required=True, help="truth-table file")
    ver.add_argument("--aux", type=_nonnegative_int, default=0)
    ver.set_defaults(func=_cmd_verify)

    lengths = commands.add_parser("lengths", help="loop-free vs backward-jump program sizes")
    lengths.add_argument("--max-k", type=_positive_int, default=4)
    lengths.set_defaults(func=_cmd_lengths)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse exits 0 for --help, 2 for usage errors
        return EXIT_OK if exit_.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleArityError, StateSpaceCapExceeded) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
