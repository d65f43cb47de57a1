"""OpenQASM 2.0 subset reader and writer.

Supported: one ``qreg``, at most one ``creg``, the standard single- and
two-qubit gates, ``barrier`` and ``measure``. Unknown one- and two-qubit gate
names are kept as opaque gates carrying their name. Classical control,
``gate``/``opaque`` declarations and three-qubit gates are rejected.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import Gate, GateKind, QCircuit

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_NAMES = {
    "h": GateKind.H, "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z,
    "s": GateKind.S, "sdg": GateKind.SDG, "t": GateKind.T, "tdg": GateKind.TDG,
    "rx": GateKind.RX, "ry": GateKind.RY, "rz": GateKind.RZ,
    "u1": GateKind.U1, "p": GateKind.U1, "u2": GateKind.U2, "u3": GateKind.U3, "u": GateKind.U3,
    "cx": GateKind.CX, "CX": GateKind.CX, "swap": GateKind.SWAP,
}

_FUNCS = {"sin": math.sin, "cos": math.cos, "tan": math.tan, "exp": math.exp,
          "ln": math.log, "sqrt": math.sqrt}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<op>->|==|[;,()\[\]{}+\-*/^])
""", re.VERBOSE)


class QasmError(ValueError):
    """Raised on malformed or unsupported input; carries a source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = mo.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, mo.group(), line, pos - line_start + 1))
        newlines = mo.group().count("\n")
        if newlines:
            line += newlines
            line_start = pos + mo.group().rfind("\n") + 1
        pos = mo.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.qreg: tuple[str, int] | None = None
        self.creg: tuple[str, int] | None = None
        self.gates: list[Gate] = []

    # token helpers
    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek() or (self.toks[-1] if self.toks else None)
        if tok is None:
            raise QasmError(message)
        raise QasmError(message, tok.line, tok.col)

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            self.error(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.i += 1
            return True
        return False

    # grammar
    def program(self) -> None:
        if self.accept("OPENQASM"):
            ver = self.next()
            if ver.text not in ("2.0", "2"):
                self.error(f"unsupported OpenQASM version {ver.text}", ver)
            self.expect(";")
        while self.peek() is not None:
            self.statement()
        if self.qreg is None:
            raise QasmError("no quantum register declared")

    def statement(self) -> None:
        tok = self.next()
        word = tok.text
        if word == "include":
            if self.next().kind != "str":
                self.error("include expects a file name")
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.register(word, tok)
        elif word in ("gate", "opaque", "if"):
            self.error(f"'{word}' statements are not supported", tok)
        elif word == "barrier":
            qubits = [q for arg in self.arglist() for q in self.resolve(arg)]
            self.expect(";")
            if qubits:
                self.gates.append(Gate(GateKind.BARRIER, tuple(dict.fromkeys(qubits))))
        elif word == "measure":
            self.measure()
        elif tok.kind == "id":
            self.application(tok)
        else:
            self.error(f"unexpected token {word!r}", tok)

    def register(self, word: str, tok: _Tok) -> None:
        name = self.next()
        if name.kind != "id":
            self.error("expected register name", name)
        self.expect("[")
        size = self.next()
        if size.kind != "real" or not size.text.isdigit():
            self.error("register size must be an integer", size)
        self.expect("]")
        self.expect(";")
        slot = "qreg" if word == "qreg" else "creg"
        if getattr(self, slot) is not None:
            self.error(f"only one {word} is supported", tok)
        setattr(self, slot, (name.text, int(size.text)))

    def arg(self) -> tuple[_Tok, int | None]:
        name = self.next()
        if name.kind != "id":
            self.error("expected a register reference", name)
        index = None
        if self.accept("["):
            idx = self.next()
            if idx.kind != "real" or not idx.text.isdigit():
                self.error("index must be an integer", idx)
            index = int(idx.text)
            self.expect("]")
        return name, index

    def arglist(self) -> list[tuple[_Tok, int | None]]:
        args = [self.arg()]
        while self.accept(","):
            args.append(self.arg())
        return args

    def resolve(self, arg: tuple[_Tok, int | None], classical: bool = False) -> list[int]:
        name, index = arg
        reg = self.creg if classical else self.qreg
        if reg is None or reg[0] != name.text:
            self.error(f"undeclared register {name.text!r}", name)
        if index is None:
            return list(range(reg[1]))
        if index >= reg[1]:
            self.error(f"index {index} out of range for {name.text}[{reg[1]}]", name)
        return [index]

    def measure(self) -> None:
        src = self.resolve(self.arg())
        self.expect("->")
        dst = self.resolve(self.arg(), classical=True)
        self.expect(";")
        if len(src) != len(dst):
            self.error("measure register sizes differ")
        for q, b in zip(src, dst):
            self.gates.append(Gate(GateKind.MEASURE, (q,), clbit=b))

    def application(self, name: _Tok) -> None:
        params: list[float] = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expr())
                while self.accept(","):
                    params.append(self.expr())
                self.expect(")")
        args = self.arglist()
        self.expect(";")
        if len(args) > 2:
            self.error(f"gate '{name.text}' acts on {len(args)} qubits; "
                       "only one- and two-qubit gates are supported", name)
        kind = _NAMES.get(name.text)
        label = None
        if kind is None:
            kind = GateKind.OPAQUE1Q if len(args) == 1 else GateKind.OPAQUE2Q
            label = name.text
        if kind.num_qubits != len(args):
            self.error(f"gate '{name.text}' expects {kind.num_qubits} qubit argument(s)", name)
        if kind.num_params is not None and kind.num_params != len(params):
            self.error(f"gate '{name.text}' expects {kind.num_params} parameter(s)", name)
        resolved = [self.resolve(a) for a in args]
        width = max(len(r) for r in resolved)
        if any(len(r) not in (1, width) for r in resolved):
            self.error("register arguments of different sizes", name)
        for k in range(width):
            qubits = tuple(r[k] if len(r) > 1 else r[0] for r in resolved)
            if len(set(qubits)) != len(qubits):
                self.error(f"repeated qubit in '{name.text}'", name)
            self.gates.append(Gate(kind, qubits, tuple(params), label))

    # expressions: sum -> product -> power -> unary -> atom
    def expr(self) -> float:
        value = self.term()
        while True:
            if self.accept("+"):
                value += self.term()
            elif self.accept("-"):
                value -= self.term()
            else:
                return value

    def term(self) -> float:
        value = self.power()
        while True:
            if self.accept("*"):
                value *= self.power()
            elif self.accept("/"):
                tok = self.peek()
                divisor = self.power()
                if divisor == 0:
                    self.error("division by zero", tok)
                value /= divisor
            else:
                return value

    def power(self) -> float:
        base = self.unary()
        if self.accept("^"):
            return base ** self.power()
        return base

    def unary(self) -> float:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.atom()

    def atom(self) -> float:
        tok = self.next()
        if tok.kind == "real":
            return float(tok.text)
        if tok.text == "pi":
            return math.pi
        if tok.text in _FUNCS:
            self.expect("(")
            value = self.expr()
            self.expect(")")
            return _FUNCS[tok.text](value)
        if tok.text == "(":
            value = self.expr()
            self.expect(")")
            return value
        self.error(f"unexpected token {tok.text!r} in expression", tok)


def parse_qasm(text: str, name: str = "") -> QCircuit:
    """Parse OpenQASM 2.0 source into a :class:`QCircuit`.

    Raises :class:`QasmError` with a line/column position on bad input.
    """
    p = _Parser(text)
    p.program()
    clbits = p.creg[1] if p.creg else 0
    return QCircuit(p.qreg[1], tuple(p.gates), name, clbits)


def _fmt(value: float) -> str:
    # repr round-trips exactly through float()
    return repr(float(value))


def emit_qasm(c: QCircuit) -> str:
    """Serialise a circuit as OpenQASM 2.0 with registers ``q`` and ``c``."""
    lines = [HEADER.rstrip("\n"), f"qreg q[{c.m}];"]
    if c.clbits:
        lines.append(f"creg c[{c.clbits}];")
    for g in c.gates:
        operands = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind is GateKind.MEASURE:
            lines.append(f"measure {operands} -> c[{g.clbit}];")
            continue
        if g.kind in (GateKind.OPAQUE1Q, GateKind.OPAQUE2Q):
            if not g.label:
                raise ValueError(f"opaque gate on {g.qubits} has no label")
            name = g.label
        else:
            name = g.kind.value
        args = f"({','.join(_fmt(p) for p in g.params)})" if g.params else ""
        lines.append(f"{name}{args} {operands};")
    return "\n".join(lines) + "\n"
