"""Line-oriented gate-sequence scripts for qubit chains.

One instruction per line, `#` starts a comment:

    RESET q v          reset qubit q to chirality v (+1 or -1)
    GATE q name        named single-qubit gate (I, X, Y, Z, H)
    LINK i j ON|OFF    switch the weak link between adjacent qubits
    XCHG i j theta     exchange pulse of area theta across the (i, j) link
    CNOT c t           composed CNOT, control c active on |+1>
    RF q amp duration  RF pulse addressed to qubit q (needs all links off)
    MEASURE q          Born measurement of qubit q

The register size is inferred from the highest qubit index used (at least
one qubit).  Execution starts from the all-|-1> product state with every
link absent; the RF bias profile is a linear gradient eps_q =
field_step * (q + 1) along the chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics, register
from .register import CouplingLink, FieldProfile, RegisterState

OPS = ("RESET", "GATE", "LINK", "XCHG", "CNOT", "RF", "MEASURE")


class ScriptError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class LinkOffAt(register.LinkOff):
    def __init__(self, i: int, j: int):
        super().__init__(f"link ({i}, {j}) is off or absent")


@dataclass(frozen=True)
class Instruction:
    line_no: int
    op: str
    args: tuple
    text: str


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ScriptError(line_no, f"{what} must be an integer, got {token!r}") from None


def _parse_float(token: str, line_no: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ScriptError(line_no, f"{what} must be a number, got {token!r}") from None
    if not np.isfinite(value):
        raise ScriptError(line_no, f"{what} must be finite, got {token!r}")
    return value


def _parse_chirality(token: str, line_no: int) -> int:
    if token in ("+1", "1"):
        return +1
    if token == "-1":
        return -1
    raise ScriptError(line_no, f"chirality value must be +1 or -1, got {token!r}")


def parse_script(text: str) -> list[Instruction]:
    """Parse script text into instructions; raises ScriptError with line number."""
    instructions = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        op = tokens[0].upper()
        nargs = len(tokens) - 1
        if op == "RESET":
            if nargs != 2:
                raise ScriptError(line_no, "RESET takes: q value")
            args = (_parse_int(tokens[1], line_no, "qubit"), _parse_chirality(tokens[2], line_no))
        elif op == "GATE":
            if nargs != 2:
                raise ScriptError(line_no, "GATE takes: q name")
            name = tokens[2].upper()
            if name not in register.NAMED_GATES:
                known = ", ".join(sorted(register.NAMED_GATES))
                raise ScriptError(line_no, f"unknown gate {tokens[2]!r} (known: {known})")
            args = (_parse_int(tokens[1], line_no, "qubit"), name)
        elif op == "LINK":
            if nargs != 3:
                raise ScriptError(line_no, "LINK takes: i j ON|OFF")
            switch = tokens[3].upper()
            if switch not in ("ON", "OFF"):
                raise ScriptError(line_no, f"link state must be ON or OFF, got {tokens[3]!r}")
            args = (
                _parse_int(tokens[1], line_no, "qubit"),
                _parse_int(tokens[2], line_no, "qubit"),
                switch == "ON",
            )
        elif op == "XCHG":
            if nargs != 3:
                raise ScriptError(line_no, "XCHG takes: i j theta")
            args = (
                _parse_int(tokens[1], line_no, "qubit"),
                _parse_int(tokens[2], line_no, "qubit"),
                _parse_float(tokens[3], line_no, "theta"),
            )
        elif op == "CNOT":
            if nargs != 2:
                raise ScriptError(line_no, "CNOT takes: control target")
            args = (
                _parse_int(tokens[1], line_no, "control"),
                _parse_int(tokens[2], line_no, "target"),
            )
        elif op == "RF":
            if nargs != 3:
                raise ScriptError(line_no, "RF takes: q amp duration")
            args = (
                _parse_int(tokens[1], line_no, "qubit"),
                _parse_float(tokens[2], line_no, "amp"),
                _parse_float(tokens[3], line_no, "duration"),
            )
        elif op == "MEASURE":
            if nargs != 1:
                raise ScriptError(line_no, "MEASURE takes: q")
            args = (_parse_int(tokens[1], line_no, "qubit"),)
        else:
            raise ScriptError(line_no, f"unknown instruction {tokens[0]!r}")
        instructions.append(Instruction(line_no, op, args, line))
    return instructions


def _qubit_indices(instr: Instruction) -> tuple[int, ...]:
    if instr.op in ("RESET", "GATE", "RF", "MEASURE"):
        return (instr.args[0],)
    if instr.op in ("LINK", "XCHG", "CNOT"):
        return (instr.args[0], instr.args[1])
    return ()


def infer_register_size(instructions: list[Instruction]) -> int:
    """Smallest register covering every referenced qubit (at least 1)."""
    top = 0
    for instr in instructions:
        for q in _qubit_indices(instr):
            if q < 0:
                raise ScriptError(instr.line_no, f"negative qubit index {q}")
            top = max(top, q)
    n = top + 1
    if n > register.MAX_QUBITS:
        raise ScriptError(
            instructions[0].line_no if instructions else 0,
            f"script needs {n} qubits, register cap is {register.MAX_QUBITS}",
        )
    return n


@dataclass
class ScriptRun:
    n: int
    instructions: list[Instruction]
    shot_outcomes: list[list[tuple[int, int]]]  # per shot: (qubit, outcome) in order
    final_state: RegisterState

    def outcome_frequencies(self) -> dict[tuple[tuple[int, int], ...], float]:
        counts: dict[tuple[tuple[int, int], ...], int] = {}
        for outcomes in self.shot_outcomes:
            key = tuple(outcomes)
            counts[key] = counts.get(key, 0) + 1
        total = len(self.shot_outcomes)
        return {key: counts[key] / total for key in sorted(counts)}


def run_script(
    instructions: list[Instruction],
    seed,
    shots: int = 1,
    field_step: float = 1.0,
    rf_dt: float = 0.01,
) -> ScriptRun:
    """Execute a parsed script; identical seeds give identical outcomes.

    The measurement generator is seeded once and persists across shots, so a
    run with S shots is reproducible as a whole.  Link switches are classical
    settings replayed identically in every shot.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n = infer_register_size(instructions)
    rng = register._as_rng(seed)
    profile = FieldProfile(tuple(field_step * (q + 1) for q in range(n)))

    shot_outcomes: list[list[tuple[int, int]]] = []
    state = RegisterState.all_minus(n)
    for _ in range(shots):
        state = RegisterState.all_minus(n)
        links: dict[tuple[int, int], CouplingLink] = {}
        outcomes: list[tuple[int, int]] = []
        for instr in instructions:
            try:
                state, links = _execute(instr, state, links, profile, rng, rf_dt, outcomes)
            except (ScriptError, register.LinkOff, dynamics.StepTooLarge):
                raise
            except (register.IndexOutOfRange, ValueError) as exc:
                raise ScriptError(instr.line_no, str(exc)) from exc
        shot_outcomes.append(outcomes)
    return ScriptRun(n, instructions, shot_outcomes, state)


def _link_key(i: int, j: int) -> tuple[int, int]:
    return (min(i, j), max(i, j))


def _get_link(links, i: int, j: int) -> CouplingLink:
    link = links.get(_link_key(i, j))
    if link is None or not link.on:
        raise LinkOffAt(i, j)
    return link


def _execute(instr, state, links, profile, rng, rf_dt, outcomes):
    op, args = instr.op, instr.args
    if op == "RESET":
        state = register.initialize_reset(state, args[0], args[1])
    elif op == "GATE":
        state = register.apply_single_gate(state, args[0], register.NAMED_GATES[args[1]])
    elif op == "LINK":
        i, j, on = args
        if abs(i - j) != 1:
            raise ScriptError(instr.line_no, f"link must join adjacent qubits, got ({i}, {j})")
        links = dict(links)
        links[_link_key(i, j)] = CouplingLink(min(i, j), max(i, j), on=on)
    elif op == "XCHG":
        i, j, theta = args
        state = register.exchange_pulse(state, _get_link(links, i, j), theta)
    elif op == "CNOT":
        c, t = args
        state = register.cnot_composed(state, c, t, _get_link(links, c, t))
    elif op == "RF":
        q, amp, duration = args
        if any(link.on for link in links.values()):
            raise register.LinkOff("RF addressing requires all links off")
        state = register.selective_rf_pulse(state, profile, q, amp, duration, rf_dt)
    elif op == "MEASURE":
        outcome, state = register.measure(state, args[0], rng)
        outcomes.append((args[0], outcome))
    return state, links
