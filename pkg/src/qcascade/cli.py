"""Command-line driver."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from .ansatz import RyRzSpec, gen_ryrz
from .circuit import metrics
from .layout import CouplingMap, LayoutError, chain
from .oracle import UNITARY_MAX_QUBITS, equivalent, statevector_check
from .pipeline import (CSV_HEADER, PASS_ORDER, PipelineConfig, VerificationError, VerifyMode,
                       compile_circuit)
from .qasm import QasmError, emit_qasm, parse_qasm

EXIT_PARSE = 1
EXIT_LAYOUT = 2
EXIT_VERIFY = 3


def _load_map(spec: str) -> CouplingMap:
    """A map file path, or the name of a bundled map."""
    path = Path(spec)
    if path.exists():
        return CouplingMap.load(path)
    try:
        return CouplingMap.builtin(spec)
    except FileNotFoundError:
        raise SystemExit(f"error: no coupling map file or bundled map named {spec!r}")


def _read_circuit(path: str):
    p = Path(path)
    return parse_qasm(p.read_text(), p.stem)


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cmd_compile(args) -> int:
    c = _read_circuit(args.input)
    G = _load_map(args.map)
    cfg = PipelineConfig(args.map, tuple(args.passes.split(",")), VerifyMode(args.verify),
                         args.report, args.seed, args.all_starts)
    res = compile_circuit(c, G, cfg)
    if args.out:
        Path(args.out).write_text(emit_qasm(res.output))
    if cfg.report_format == "csv":
        sys.stdout.write(_csv_text([res.csv_row()]))
    else:
        print(res.text_report())
    if res.verified is False:
        print("error: compiled circuit is not equivalent to the input", file=sys.stderr)
        return EXIT_VERIFY
    return 0


def cmd_gen_ryrz(args) -> int:
    c = gen_ryrz(RyRzSpec(args.qubits, args.blocks, seed=args.seed, fan_in=args.fan_in))
    text = emit_qasm(c)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_chain(args) -> int:
    G = _load_map(args.map)
    ch = chain(G, args.qubits, try_all_starts=args.all_starts)
    print(" ".join(map(str, ch.order)))
    return 0


def cmd_metrics(args) -> int:
    mt = metrics(_read_circuit(args.input))
    print(f"cnot_count={mt.cnot_count} cnot_depth={mt.cnot_depth}")
    return 0


def cmd_verify(args) -> int:
    a, b = _read_circuit(args.a), _read_circuit(args.b)
    if a.m != b.m:
        print(f"error: qubit counts differ ({a.m} vs {b.m})", file=sys.stderr)
        return EXIT_VERIFY
    perm = [int(t) for t in args.perm.split(",")] if args.perm else None
    if a.m <= UNITARY_MAX_QUBITS:
        ok = equivalent(a, b, perm)
    else:
        ok = statevector_check(a, b, perm, trials=args.trials, seed=args.seed)
    print("equivalent" if ok else "not equivalent")
    return 0 if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    G = _load_map(args.map)
    cfg = PipelineConfig(args.map, verify_mode=VerifyMode(args.verify), seed=args.seed)
    rows = []
    status = 0
    for path in sorted(Path(args.dir).glob("*.qasm")):
        c = parse_qasm(path.read_text(), path.stem)
        try:
            res = compile_circuit(c, G, cfg)
        except LayoutError as e:
            print(f"skip {path.name}: {e}", file=sys.stderr)
            status = status or EXIT_LAYOUT
            continue
        if res.verified is False:
            print(f"{path.name}: verification failed", file=sys.stderr)
            status = EXIT_VERIFY
        rows.append(res.csv_row())
    rows.sort(key=lambda r: r[0])
    if args.report == "csv":
        sys.stdout.write(_csv_text(rows))
    else:
        widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h)
                  for k, h in enumerate(CSV_HEADER)]
        for r in [CSV_HEADER] + rows:
            print("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcascade",
                                 description="Pattern-driven CNOT compiler for chain-like devices.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a QASM file for a coupling map")
    p.add_argument("input")
    p.add_argument("--map", required=True, help="map file or bundled map name (tokyo, almaden)")
    p.add_argument("--out", help="write compiled QASM here")
    p.add_argument("--verify", choices=[v.value for v in VerifyMode], default="off")
    p.add_argument("--report", choices=["text", "csv"], default="text")
    p.add_argument("--passes", default=",".join(PASS_ORDER),
                   help="comma-separated subset of " + ",".join(PASS_ORDER))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--all-starts", action="store_true", help="try every chain start node")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("gen-ryrz", help="emit an RyRz ansatz circuit")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--blocks", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fan-in", action="store_true", help="group entanglers by target")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_ryrz)

    p = sub.add_parser("chain", help="print the chain found on a coupling map")
    p.add_argument("--map", required=True)
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--all-starts", action="store_true")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("metrics", help="print CNOT count and depth")
    p.add_argument("input")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("verify", help="check two circuits for equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--perm", help="comma-separated output permutation applied to b")
    p.add_argument("--trials", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compile every .qasm in a directory")
    p.add_argument("dir")
    p.add_argument("--map", required=True)
    p.add_argument("--report", choices=["text", "csv"], default="csv")
    p.add_argument("--verify", choices=[v.value for v in VerifyMode], default="off")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QasmError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except LayoutError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LAYOUT
    except VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
