"""Autonomous shift-register networks and their state-transition structure.

An n-variable network holds the last n output samples.  Each tick the
feedback function is applied to the whole register, the result is shifted
in as the newest sample and the oldest sample falls off the end.

Encodings used throughout the package:

* Truth tables list rows in ascending order with ``x_1`` as the most
  significant bit of the row index, so row 1 of a 3-variable table is
  ``(0, 0, 1)``.  As an integer code, bit ``i`` of the code is ``bits[i]``.
* States are integers in ``[0, 2**n)`` with the newest sample as the most
  significant bit.  A state is fed to the function as-is, so the newest
  sample plays the role of ``x_1``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

MAX_VARIABLES = 16


class ContractViolation(ValueError):
    """Raised when arguments break an operation's preconditions."""


class TruthTableParseError(ValueError):
    """Raised for malformed truth-table text; ``position`` is a 0-based index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_VARIABLES:
        raise ContractViolation(f"n must be an integer in [1, {MAX_VARIABLES}], got {n!r}")


@dataclass(frozen=True)
class TruthTable:
    """An n-variable boolean function stored as its 2**n output bits."""

    n: int
    bits: tuple[bool, ...]

    def __post_init__(self):
        _check_n(self.n)
        bits = tuple(bool(b) for b in self.bits)
        if len(bits) != 1 << self.n:
            raise ContractViolation(f"expected {1 << self.n} bits for n={self.n}, got {len(bits)}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_code(cls, n: int, code: int) -> "TruthTable":
        _check_n(n)
        size = 1 << n
        if not 0 <= code < 1 << size:
            raise ContractViolation(f"code {code} does not fit in {size} bits")
        return cls(n, tuple((code >> i) & 1 == 1 for i in range(size)))

    @classmethod
    def from_function(cls, n: int, func: Callable[[tuple[int, ...]], int]) -> "TruthTable":
        """Tabulate ``func`` over input vectors ``(x_1, ..., x_n)`` in row order."""
        _check_n(n)
        rows = ((tuple((i >> (n - 1 - k)) & 1 for k in range(n))) for i in range(1 << n))
        return cls(n, tuple(bool(func(x)) for x in rows))

    @classmethod
    def constant(cls, n: int, value: bool = False) -> "TruthTable":
        _check_n(n)
        return cls(n, (bool(value),) * (1 << n))

    @property
    def code(self) -> int:
        return sum(1 << i for i, b in enumerate(self.bits) if b)

    def to_binary(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def to_hex(self) -> str:
        return f"0x{self.code:0{_hex_width(self.n)}x}"

    def __str__(self) -> str:
        return self.to_binary()


@dataclass(frozen=True)
class StateVector:
    """One register content; ``code`` has the newest sample as its MSB."""

    n: int
    code: int

    def __post_init__(self):
        _check_n(self.n)
        if not 0 <= self.code < 1 << self.n:
            raise ContractViolation(f"state code {self.code} out of range for n={self.n}")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "StateVector":
        """Build from ``(x(z), x(z-1), ..., x(z-n+1))``."""
        code = 0
        for b in bits:
            code = (code << 1) | (1 if b else 0)
        return cls(len(bits), code)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.code >> (self.n - 1 - k)) & 1 for k in range(self.n))

    def __str__(self) -> str:
        return str(self.code)


class StateClass(enum.Enum):
    PERIODIC = "periodic"
    TRANSIENT = "transient"
    GARDEN_OF_EDEN = "garden_of_eden"


@dataclass(frozen=True)
class StateAnalysis:
    """Exact classification of every state of one network.

    ``cycles`` start at their smallest state and follow the transition
    order; they are sorted by that smallest state.
    """

    n: int
    classes: tuple[StateClass, ...]
    cycles: tuple[tuple[int, ...], ...]
    max_cycle_r: int
    goe_count_d: int
    successor: tuple[int, ...]

    @property
    def garden_of_eden(self) -> list[int]:
        return [s for s, c in enumerate(self.classes) if c is StateClass.GARDEN_OF_EDEN]

    @property
    def periodic_states(self) -> list[int]:
        return [s for s, c in enumerate(self.classes) if c is StateClass.PERIODIC]

    @property
    def transient_states(self) -> list[int]:
        """Non-periodic states that do have a predecessor."""
        return [s for s, c in enumerate(self.classes) if c is StateClass.TRANSIENT]


def _check_width(f: TruthTable, state: StateVector) -> None:
    if state.n != f.n:
        raise ContractViolation(f"state width {state.n} does not match function width {f.n}")


def eval_state(f: TruthTable, state: StateVector) -> bool:
    """The next output sample, i.e. f applied to the register."""
    _check_width(f, state)
    return f.bits[state.code]


def _step_code(f: TruthTable, code: int) -> int:
    return (f.bits[code] << (f.n - 1)) | (code >> 1)


def step(f: TruthTable, state: StateVector) -> StateVector:
    _check_width(f, state)
    return StateVector(f.n, _step_code(f, state.code))


def predecessors(f: TruthTable, state: StateVector) -> set[StateVector]:
    """All states that step to ``state`` (at most two).

    Only the two registers whose upper n-1 bits equal the lower n-1 bits of
    ``state`` can shift into it; of those, keep the ones whose output is the
    newest bit of ``state``.
    """
    _check_width(f, state)
    n = f.n
    newest = state.code >> (n - 1)
    base = (state.code << 1) & ((1 << n) - 1)
    return {StateVector(n, p) for p in (base, base | 1) if f.bits[p] == newest}


def orbit(f: TruthTable, start: StateVector, steps: int) -> list[StateVector]:
    if steps < 0:
        raise ContractViolation("steps must be non-negative")
    _check_width(f, start)
    out = [start]
    code = start.code
    for _ in range(steps):
        code = _step_code(f, code)
        out.append(StateVector(f.n, code))
    return out


def successors(f: TruthTable) -> list[int]:
    return [_step_code(f, s) for s in range(1 << f.n)]


def analyze(f: TruthTable) -> StateAnalysis:
    """Classify all states by peeling in-degree-0 states off the functional graph.

    Whatever survives the peeling lies on a cycle.  Garden-of-Eden states are
    those with no predecessor in the original graph.
    """
    size = 1 << f.n
    succ = successors(f)
    indeg = [0] * size
    for t in succ:
        indeg[t] += 1
    goe = [d == 0 for d in indeg]

    remaining = indeg[:]
    on_cycle = [True] * size
    queue = deque(s for s in range(size) if remaining[s] == 0)
    while queue:
        s = queue.popleft()
        on_cycle[s] = False
        t = succ[s]
        remaining[t] -= 1
        if remaining[t] == 0:
            queue.append(t)

    cycles = []
    seen = [False] * size
    for s in range(size):
        if on_cycle[s] and not seen[s]:
            cyc = []
            t = s
            while not seen[t]:
                seen[t] = True
                cyc.append(t)
                t = succ[t]
            cycles.append(tuple(cyc))

    classes = tuple(
        StateClass.PERIODIC if on_cycle[s]
        else StateClass.GARDEN_OF_EDEN if goe[s]
        else StateClass.TRANSIENT
        for s in range(size)
    )
    return StateAnalysis(
        n=f.n,
        classes=classes,
        cycles=tuple(cycles),
        max_cycle_r=max(len(c) for c in cycles),
        goe_count_d=sum(goe),
        successor=tuple(succ),
    )


def _hex_width(n: int) -> int:
    return max(1, (1 << n) // 4)


def parse_truth_table(text: str, n: int) -> TruthTable:
    """Parse a table written as 2**n binary digits in row order, or as ``0x`` hex.

    In the hex form bit ``i`` of the value is row ``i``; the digit count must
    be the canonical width produced by :meth:`TruthTable.to_hex`.
    """
    _check_n(n)
    text = text.strip()
    size = 1 << n
    if text[:2].lower() == "0x":
        digits = text[2:]
        width = _hex_width(n)
        for i, ch in enumerate(digits):
            if ch not in "0123456789abcdefABCDEF":
                raise TruthTableParseError(f"invalid hex digit {ch!r}", i + 2)
        if len(digits) != width:
            raise TruthTableParseError(
                f"expected {width} hex digits for n={n}, got {len(digits)}", 2 + min(len(digits), width))
        value = int(digits, 16)
        if value >> size:
            raise TruthTableParseError(f"hex value exceeds {size} bits", 2)
        return TruthTable.from_code(n, value)
    for i, ch in enumerate(text):
        if ch not in "01":
            raise TruthTableParseError(f"invalid character {ch!r}, expected 0 or 1", i)
    if len(text) != size:
        raise TruthTableParseError(
            f"expected {size} binary digits for n={n}, got {len(text)}", min(len(text), size))
    return TruthTable(n, tuple(ch == "1" for ch in text))


def format_truth_table(f: TruthTable, hex: bool = False) -> str:
    return f.to_hex() if hex else f.to_binary()


# Vectorized statistics ------------------------------------------------------

def bits_matrix(n: int, codes: Iterable[int] | np.ndarray) -> np.ndarray:
    """Expand truth-table codes into a ``(len(codes), 2**n)`` uint8 bit matrix."""
    size = 1 << n
    if size <= 64:
        codes = np.asarray(codes, dtype=np.uint64)
        shifts = np.arange(size, dtype=np.uint64)
        return ((codes[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    codes = list(codes)
    return np.array([[(c >> i) & 1 for i in range(size)] for c in codes], dtype=np.uint8).reshape(-1, size)


def batch_stats(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Max cycle length and Garden-of-Eden count for many tables at once.

    ``bits`` is a ``(P, 2**n)`` 0/1 matrix, one truth table per row.  Cycles
    are labelled by their smallest state via pointer doubling; after n
    doublings the jump map is ``succ**(2**n)`` whose image is exactly the set
    of cyclic states.
    """
    bits = np.asarray(bits)
    count, size = bits.shape
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ContractViolation(f"row length {size} is not a power of two")
    states = np.arange(size, dtype=np.int64)
    succ = (bits.astype(np.int64) << (n - 1)) | (states >> 1)
    offsets = (np.arange(count, dtype=np.int64) * size)[:, None]

    indeg = np.bincount((succ + offsets).ravel(), minlength=count * size).reshape(count, size)
    goe = np.count_nonzero(indeg == 0, axis=1)

    jump = succ
    label = np.broadcast_to(states, (count, size)).copy()
    for _ in range(n):
        label = np.minimum(label, np.take_along_axis(label, jump, axis=1))
        jump = np.take_along_axis(jump, jump, axis=1)
    cyclic = np.zeros(count * size, dtype=bool)
    cyclic[(jump + offsets).ravel()] = True
    cyclic = cyclic.reshape(count, size)
    lengths = np.bincount((label + offsets)[cyclic], minlength=count * size).reshape(count, size)
    return lengths.max(axis=1), goe
