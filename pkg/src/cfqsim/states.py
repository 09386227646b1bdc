"""Sparse pure states over labeled registers.

States live in a tensor product of small named subsystems (polarization
devices, pass/block switches, channel arms, detectors, interferometer
modes).  Amplitudes sit in a sparse mapping from composite symbol tuples
to complex numbers and may be sub-normalized: norm**2 carries the
survival probability left behind by non-unitary maps.

Every operation is a pure function over effectively immutable values;
nothing here mutates its inputs, so independent evaluations can run
concurrently without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

# Amplitudes below this magnitude are numerical dust and are dropped after
# every map application.
PRUNE_TOL = 1e-15

# Unit-norm tolerance for qubits and freshly built product states.
NORM_TOL = 1e-12

# Symbol alphabets per register kind.
ALPHABETS: dict[str, tuple[str, ...]] = {
    "device_a": ("V", "H"),  # sender-side polarization chooser
    "device_b": ("P", "B"),  # receiver-side switch setting
    "bob_detector": ("0", "Y"),  # absorption detector inside the switch module
    "arm_a": ("vac", "V", "H"),  # internal interferometer arm
    "arm_b": ("vac", "V", "H"),  # transmission channel arm
    "alice_detector": ("none", "D1V", "D1H", "D2V", "D2H"),  # output detectors
    "zeno_mode": ("0", "1", "absorbed"),  # chained-interferometer mode
    "pb_device": ("pass", "block"),  # polarization-independent obstacle
    "pb_absorber": ("0", "Y"),  # per-party absorption record
    "plain_arm": ("vac", "phot"),  # unpolarized channel arm
    "plain_detector": ("none", "D1", "D2"),  # unpolarized output detectors
}

Label = tuple[str, ...]
MapRules = Mapping[Label, Sequence[tuple[Label, complex]]]


@dataclass(frozen=True, order=True)
class Register:
    """One labeled subsystem: an ALPHABETS kind plus a party/layer index."""

    kind: str
    index: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ALPHABETS:
            raise ValueError(f"unknown register kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("register index must be nonnegative")

    @property
    def alphabet(self) -> tuple[str, ...]:
        return ALPHABETS[self.kind]

    def __repr__(self) -> str:
        return f"{self.kind}[{self.index}]"


@dataclass(frozen=True)
class Qubit:
    """Normalized amplitude pair over a declared two-symbol basis."""

    basis: tuple[str, str]
    amp0: complex
    amp1: complex

    def __post_init__(self) -> None:
        if len(self.basis) != 2 or self.basis[0] == self.basis[1]:
            raise ValueError("qubit basis must be two distinct symbols")
        n2 = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(n2 - 1.0) > NORM_TOL:
            raise ValueError(f"qubit amplitudes not normalized (norm^2 = {n2!r})")

    @classmethod
    def balanced(cls, basis: Sequence[str]) -> "Qubit":
        r = 1.0 / math.sqrt(2.0)
        return cls(tuple(basis), r, r)

    def amplitudes(self) -> dict[str, complex]:
        return {self.basis[0]: complex(self.amp0), self.basis[1]: complex(self.amp1)}


class PureState:
    """Sub-normalized sparse state over an ordered register tuple."""

    __slots__ = ("registers", "amps")

    def __init__(self, registers: Sequence[Register], amps: Mapping[Label, complex]):
        registers = tuple(registers)
        if len(set(registers)) != len(registers):
            raise ValueError("duplicate registers in state")
        clean: dict[Label, complex] = {}
        for label, amp in amps.items():
            label = tuple(label)
            if len(label) != len(registers):
                raise ValueError(f"label {label} does not match {len(registers)} registers")
            for reg, sym in zip(registers, label):
                if sym not in reg.alphabet:
                    raise ValueError(f"symbol {sym!r} outside alphabet of {reg!r}")
            a = complex(amp)
            if abs(a) >= PRUNE_TOL:
                clean[label] = a
        self.registers = registers
        self.amps = clean

    def norm2(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amps.values()))

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def normalized(self) -> "PureState":
        n = self.norm()
        if n < PRUNE_TOL:
            raise ValueError("cannot normalize a zero state")
        return PureState(self.registers, {l: a / n for l, a in self.amps.items()})

    def tensor(self, other: "PureState") -> "PureState":
        if set(self.registers) & set(other.registers):
            raise ValueError("tensor factors share registers")
        amps = {
            l1 + l2: a1 * a2
            for l1, a1 in self.amps.items()
            for l2, a2 in other.amps.items()
        }
        return PureState(self.registers + other.registers, amps)

    def restrict(self, keep: Sequence[Register]) -> "PureState":
        """Drop registers whose symbol is a function of the kept label.

        This is a coherent uncompute of redundant records (e.g. a detector
        tag perfectly correlated with a device register), not a partial
        trace; it raises if a dropped register carries independent
        information.
        """
        keep = tuple(keep)
        keep_idx = [self.registers.index(r) for r in keep]
        drop_idx = [i for i in range(len(self.registers)) if i not in keep_idx]
        seen: dict[Label, Label] = {}
        out: dict[Label, complex] = {}
        for label, amp in self.amps.items():
            k = tuple(label[i] for i in keep_idx)
            d = tuple(label[i] for i in drop_idx)
            if seen.setdefault(k, d) != d:
                raise ValueError("dropped registers carry independent information")
            out[k] = amp
        return PureState(keep, out)

    def to_text(self) -> str:
        """Deterministic debug form: one 'label : re + im i' line per amplitude."""
        lines = []
        for label in sorted(self.amps):
            a = self.amps[label]
            lines.append(f"{','.join(label)} : {a.real:.12g} + {a.imag:.12g}i")
        return "\n".join(lines)

    def __add__(self, other: "PureState") -> "PureState":
        if self.registers != other.registers:
            raise ValueError("states live over different registers")
        amps = dict(self.amps)
        for label, amp in other.amps.items():
            amps[label] = amps.get(label, 0j) + amp
        return PureState(self.registers, amps)

    def __sub__(self, other: "PureState") -> "PureState":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "PureState":
        return PureState(self.registers, {l: a * scalar for l, a in self.amps.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"PureState({len(self.amps)} labels over {list(self.registers)})"


def product_state(parts: Sequence[tuple[Register, Union[Qubit, str]]]) -> PureState:
    """Tensor product of per-register qubits and fixed symbols."""
    registers = tuple(r for r, _ in parts)
    if len(set(registers)) != len(registers):
        raise ValueError("duplicate register in product")
    amps: dict[Label, complex] = {(): 1.0 + 0j}
    for reg, value in parts:
        if isinstance(value, Qubit):
            for sym in value.basis:
                if sym not in reg.alphabet:
                    raise ValueError(f"qubit symbol {sym!r} outside alphabet of {reg!r}")
            factor = value.amplitudes()
        else:
            if value not in reg.alphabet:
                raise ValueError(f"symbol {value!r} outside alphabet of {reg!r}")
            factor = {value: 1.0 + 0j}
        amps = {
            label + (sym,): amp * a
            for label, amp in amps.items()
            for sym, a in factor.items()
        }
    return PureState(registers, amps)


def apply_map(state: PureState, on: Sequence[Register], rules: MapRules) -> PureState:
    """Apply a sparse linear map given by per-pattern output branches.

    ``rules`` maps an input symbol pattern over the ``on`` registers to the
    list of (output pattern, coefficient) branches it fans out into; input
    patterns not listed act as the identity.  An empty branch list deletes
    the amplitude, so non-unitary (norm-decreasing) maps are expressible.
    """
    on = tuple(on)
    try:
        idx = tuple(state.registers.index(r) for r in on)
    except ValueError:
        raise ValueError("map touches a register absent from the state") from None
    alphabets = [r.alphabet for r in on]
    for pattern, branches in rules.items():
        if len(pattern) != len(on) or any(s not in a for s, a in zip(pattern, alphabets)):
            raise ValueError(f"input pattern {pattern} outside register alphabets")
        for out_pat, _ in branches:
            if len(out_pat) != len(on) or any(
                s not in a for s, a in zip(out_pat, alphabets)
            ):
                raise ValueError(f"output pattern {out_pat} outside register alphabets")
    out: dict[Label, complex] = {}
    for label, amp in state.amps.items():
        key = tuple(label[i] for i in idx)
        branches = rules.get(key)
        if branches is None:
            out[label] = out.get(label, 0j) + amp
            continue
        for out_pat, coeff in branches:
            new = list(label)
            for i, sym in zip(idx, out_pat):
                new[i] = sym
            t = tuple(new)
            out[t] = out.get(t, 0j) + amp * coeff
    return PureState(state.registers, out)


def unitary_rules(register: Register, matrix: np.ndarray) -> MapRules:
    """Rules for a dense single-register operator in the alphabet ordering."""
    symbols = register.alphabet
    n = len(symbols)
    if matrix.shape != (n, n):
        raise ValueError(f"matrix shape {matrix.shape} does not fit {register!r}")
    rules: dict[Label, list[tuple[Label, complex]]] = {}
    for j in range(n):
        rules[(symbols[j],)] = [
            ((symbols[i],), complex(matrix[i, j]))
            for i in range(n)
            if abs(matrix[i, j]) >= PRUNE_TOL
        ]
    return rules


def sector(state: PureState, register: Register, symbols: Sequence[str]) -> PureState:
    """Unnormalized projection onto the labels carrying one of ``symbols``."""
    i = state.registers.index(register)
    allowed = set(symbols)
    return PureState(
        state.registers, {l: a for l, a in state.amps.items() if l[i] in allowed}
    )


def postselect(
    state: PureState, register: Register, symbol: str
) -> tuple[float, PureState]:
    """Condition on one register symbol.

    Returns the outcome probability (relative to the state's own norm**2)
    and the normalized posterior; an empty match yields probability 0 and
    an empty state.
    """
    total = state.norm2()
    if total == 0.0:
        return 0.0, PureState(state.registers, {})
    matched = sector(state, register, (symbol,))
    p = matched.norm2() / total
    if p == 0.0:
        return 0.0, matched
    return p, matched.normalized()


def overlap(s: PureState, t: PureState) -> complex:
    if s.registers != t.registers:
        raise ValueError("states live over mismatched registers")
    small, big = (s.amps, t.amps) if len(s.amps) <= len(t.amps) else (t.amps, s.amps)
    acc = 0j
    for label in small:
        if label in big:
            acc += s.amps[label].conjugate() * t.amps[label]
    return acc


def fidelity_up_to_phase(s: PureState, t: PureState) -> float:
    """|<s|t>|**2 on the normalized states; invariant under global phases."""
    n = s.norm2() * t.norm2()
    if n < PRUNE_TOL:
        return 0.0
    return float(abs(overlap(s, t)) ** 2 / n)


def entanglement_entropy(state: PureState, partition: Sequence[Register]) -> float:
    """Base-2 von Neumann entropy of the reduced state on ``partition``.

    Computed from the singular values of the bipartite amplitude matrix;
    symmetric under complementing the partition.
    """
    part = set(partition)
    regs = set(state.registers)
    if not part or part == regs:
        raise ValueError("partition must be a nonempty proper subset of the registers")
    if not part <= regs:
        raise ValueError("partition contains registers absent from the state")
    if state.norm2() < PRUNE_TOL:
        raise ValueError("entropy of a zero state is undefined")
    row_idx = [i for i, r in enumerate(state.registers) if r in part]
    col_idx = [i for i, r in enumerate(state.registers) if r not in part]
    rows = sorted({tuple(l[i] for i in row_idx) for l in state.amps})
    cols = sorted({tuple(l[i] for i in col_idx) for l in state.amps})
    ri = {r: k for k, r in enumerate(rows)}
    ci = {c: k for k, c in enumerate(cols)}
    m = np.zeros((len(rows), len(cols)), dtype=complex)
    for label, amp in state.amps.items():
        m[ri[tuple(label[i] for i in row_idx)], ci[tuple(label[i] for i in col_idx)]] = amp
    m /= state.norm()
    sv = np.linalg.svd(m, compute_uv=False)
    p = sv**2
    p = p[p > PRUNE_TOL]
    p = p / p.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0  # +0.0 folds -0.0 into 0.0


def states_close(s: PureState, t: PureState, tol: float = 1e-12) -> bool:
    """Label-wise amplitude comparison (no phase freedom)."""
    if s.registers != t.registers:
        return False
    for label in s.amps.keys() | t.amps.keys():
        if abs(s.amps.get(label, 0j) - t.amps.get(label, 0j)) > tol:
            return False
    return True


def format_complex(z: complex) -> str:
    """Amplitude literal: 're' when purely real, else 're,im'."""
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g},{z.imag:.12g}"


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValueError(f"malformed complex literal {text!r}; expected 're' or 're,im'")
