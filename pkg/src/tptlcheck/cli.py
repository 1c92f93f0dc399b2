"""Command-line interface: ``tptlcheck check|docm|gen|slp``.

Results are printed as ``key=value`` lines (or one JSON object with
``--json``).  ``check`` and ``docm`` exit with 0 when the formula holds, 1
when it does not and 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, docm
from . import formula as fm
from . import generators as gen
from .checker import ENGINES, Verdict, check
from .slp import DEFAULT_BUDGET, Slp, SlpPeriodicWord, slp_at, slp_expand, slp_length, slp_max, slp_min
from .wordio import format_point, format_word, read_word

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _emit(record: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(record))
    else:
        for k, v in record.items():
            print(f"{k}={v}")


def _formula(args) -> fm.Formula:
    if (args.formula is None) == (args.formula_file is None):
        raise CliError("give exactly one of --formula and --formula-file")
    text = args.formula if args.formula is not None else Path(args.formula_file).read_text()
    return fm.parse(text.strip())


def _verdict_record(v: Verdict, elapsed: float, with_witness: bool) -> dict:
    rec = {"verdict": "SAT" if v.satisfied else "UNSAT"}
    rec.update({k: v.stats[k] for k in sorted(v.stats)})
    rec["elapsed"] = f"{elapsed:.6f}"
    if with_witness and v.witness:
        for n, step in enumerate(v.witness):
            regs = ",".join(f"{r}:{d}" for r, d in step.valuation)
            rec[f"witness.{n}"] = f"pos={step.position} choice={step.choice} regs={{{regs}}} {step.formula}"
    return rec


# -- commands -----------------------------------------------------------------

def cmd_check(args) -> int:
    word = read_word(args.word)
    phi = _formula(args)
    engine = args.engine
    if args.witness and engine == "auto":
        # Only the relative engines record witnesses.
        engine = "slp" if isinstance(word, (Slp, SlpPeriodicWord)) else "periodic"
    t0 = time.perf_counter()
    v = check(word, phi, engine=engine, horizon=args.horizon, budget=args.budget,
              witness=args.witness)
    _emit(_verdict_record(v, time.perf_counter() - t0, args.witness), args.json)
    return EXIT_SAT if v.satisfied else EXIT_UNSAT


def cmd_docm(args) -> int:
    machine = docm.parse_ocm(Path(args.machine).read_text())
    phi = _formula(args)
    if args.show_word:
        w = docm.comp_unary(machine) if machine.encoding == "unary" else docm.comp_binary(machine)
        sys.stdout.write("".join(f"# {line}\n" for line in format_word(w).splitlines()))
    t0 = time.perf_counter()
    v = docm.model_check(machine, phi)
    rec = {"encoding": machine.encoding, **_verdict_record(v, time.perf_counter() - t0, args.witness)}
    _emit(rec, args.json)
    return EXIT_SAT if v.satisfied else EXIT_UNSAT


def _write_instance(args, word, phi: fm.Formula, expected: bool, extra: dict) -> int:
    rec = {
        **extra,
        "formula": fm.to_text(phi),
        "desugared": fm.to_text(fm.desugar(phi)),
        "expected": "true" if expected else "false",
    }
    if args.out:
        word_path, formula_path = Path(args.out + ".dw"), Path(args.out + ".formula")
        word_path.write_text(format_word(word))
        formula_path.write_text(fm.to_text(phi) + "\n")
        rec = {"word": str(word_path), "formula-file": str(formula_path), **rec}
        _emit(rec, args.json)
    else:
        # The record goes into comments, so stdout is itself a word file.
        head = "".join(f"# {k}={v}\n" for k, v in rec.items())
        sys.stdout.write(head + format_word(word))
    return 0


def cmd_gen_circuit(args) -> int:
    c = gen.parse_circuit(Path(args.file).read_text())
    expected = gen.eval_circuit(c)
    if args.variant == "mtl":
        word, phi = gen.gen_circuit_mtl(c)
    elif args.variant == "infinite":
        word, phi = gen.gen_circuit_mtl_infinite(c)
    else:
        word, phi = gen.gen_circuit_smtl(c, guarded=not args.unguarded)
    return _write_instance(args, word, phi, expected, {"variant": args.variant})


def cmd_gen_qbf(args) -> int:
    if args.file:
        q = gen.parse_qbf(Path(args.file).read_text())
    elif args.prefix is not None and args.matrix is not None:
        q = gen.QbfInstance(args.prefix, fm.parse(args.matrix))
    else:
        raise CliError("give --file or both --prefix and --matrix")
    word, phi = gen.gen_qbf(q)
    return _write_instance(args, word, phi, gen.eval_qbf(q), {"variables": len(q.prefix)})


def cmd_gen_pqss(args) -> int:
    if args.file:
        p = gen.parse_pqss(Path(args.file).read_text())
    elif args.a is not None and args.b is not None:
        p = gen.PqssInstance(tuple(int(x) for x in args.a.split(",")), args.b)
    else:
        raise CliError("give --file or both --a and --b")
    if args.variant == "tptl2":
        word, phi = gen.pqss_word(), gen.gen_pqss_tptl2(p)
    else:
        word, phi = gen.gen_pqss_freezeltl(p)
    return _write_instance(args, word, phi, gen.eval_pqss(p), {"variant": args.variant})


def cmd_slp(args) -> int:
    g = read_word(args.path)
    if not isinstance(g, Slp):
        raise CliError("expected a finite SLP ('slp output=...')")
    if args.action == "expand":
        sys.stdout.write(format_word(slp_expand(g, args.budget)))
        return 0
    if args.action == "at":
        if args.index is None:
            raise CliError("'slp at' needs --index")
        print(format_point(slp_at(g, args.index)))
        return 0
    fn = {"min": slp_min, "max": slp_max, "length": slp_length}[args.action]
    print(fn(g))
    return 0


# -- argument parsing ---------------------------------------------------------

def _add_formula_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--formula", help="formula text")
    p.add_argument("--formula-file", help="file holding the formula")
    p.add_argument("--witness", action="store_true", help="print the witness of a satisfied run")
    p.add_argument("--json", action="store_true", help="print one JSON object instead of key=value lines")


def _add_gen_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write OUT.dw and OUT.formula instead of printing the word")
    p.add_argument("--json", action="store_true", help="JSON record (with --out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tptlcheck", description="Path checking for TPTL and MTL over data words.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether a word satisfies a formula")
    p.add_argument("--word", required=True, help="word file (finite, periodic or slp)")
    _add_formula_args(p)
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--horizon", type=int, help="unrolling length for the naive engine")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest SLP expansion allowed")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("docm", help="model check a deterministic one-counter machine")
    p.add_argument("--machine", required=True, help="machine file")
    _add_formula_args(p)
    p.add_argument("--show-word", action="store_true", help="print the extracted computation as comments")
    p.set_defaults(func=cmd_docm)

    p = sub.add_parser("gen", help="generate an instance with its expected verdict")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("circuit", help="from a SAM2 circuit file")
    g.add_argument("--file", required=True)
    g.add_argument("--variant", choices=("mtl", "infinite", "smtl"), default="mtl")
    g.add_argument("--unguarded", action="store_true", help="smtl: omit the second-half guard")
    _add_gen_output(g)
    g.set_defaults(func=cmd_gen_circuit)
    g = gsub.add_parser("qbf", help="from a closed QBF")
    g.add_argument("--file")
    g.add_argument("--prefix", help="quantifier string such as AEA")
    g.add_argument("--matrix", help="propositional matrix over x1..xn")
    _add_gen_output(g)
    g.set_defaults(func=cmd_gen_qbf)
    g = gsub.add_parser("pqss", help="from a positive quantified subset sum instance")
    g.add_argument("--file")
    g.add_argument("--a", help="comma-separated values a1,...,a2n")
    g.add_argument("--b", type=int)
    g.add_argument("--variant", choices=("tptl2", "freezeltl"), default="tptl2")
    _add_gen_output(g)
    g.set_defaults(func=cmd_gen_pqss)

    p = sub.add_parser("slp", help="query an SLP-compressed word")
    p.add_argument("action", choices=("expand", "min", "max", "length", "at"))
    p.add_argument("path")
    p.add_argument("--index", type=int, help="position for 'at'")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest expansion allowed")
    p.set_defaults(func=cmd_slp)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse errors exit with 2 already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, ValueError, IndexError, RuntimeError, CliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
