"""Graphviz rendering of a network's state-transition diagram."""

from __future__ import annotations

from dataclasses import dataclass

from .core import ContractViolation, StateAnalysis, StateClass, TruthTable, analyze


@dataclass(frozen=True)
class NodeStyle:
    shape: str
    fillcolor: str


@dataclass(frozen=True)
class DiagramStyle:
    periodic: NodeStyle = NodeStyle("circle", "#e05050")
    transient: NodeStyle = NodeStyle("diamond", "#5070e0")
    garden_of_eden: NodeStyle = NodeStyle("square", "#e0d050")

    def __post_init__(self):
        if len({self.periodic, self.transient, self.garden_of_eden}) != 3:
            raise ContractViolation("state class styles must be pairwise distinct")

    def for_class(self, cls: StateClass) -> NodeStyle:
        return {
            StateClass.PERIODIC: self.periodic,
            StateClass.TRANSIENT: self.transient,
            StateClass.GARDEN_OF_EDEN: self.garden_of_eden,
        }[cls]


DEFAULT_STYLE = DiagramStyle()


def to_dot(f: TruthTable, a: StateAnalysis | None = None, style: DiagramStyle = DEFAULT_STYLE) -> str:
    """DOT text with one node per state and one edge per transition.

    Nodes and edges appear in ascending state order so the output is
    byte-for-byte reproducible.
    """
    fresh = analyze(f)
    if a is None:
        a = fresh
    elif a != fresh:
        raise ContractViolation("analysis does not belong to this truth table")
    lines = [
        f'digraph "f_{f.to_hex()}" {{',
        f'  label="n={f.n} table {f.to_hex()}";',
        '  node [style=filled, color=black, fontname="Helvetica"];',
    ]
    for s, cls in enumerate(a.classes):
        ns = style.for_class(cls)
        lines.append(f'  {s} [label="{s}", shape={ns.shape}, fillcolor="{ns.fillcolor}", class={cls.value}];')
    for s, t in enumerate(a.successor):
        lines.append(f"  {s} -> {t};")
    lines.append("}")
    return "\n".join(lines) + "\n"
