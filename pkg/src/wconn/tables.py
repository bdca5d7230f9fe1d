"""Cover-by-cover analysis tables for a synchronization ``z = x ⊗ y``.

For an interaction ``a`` the table lists every cover ``a = a1 ∪ a2`` with
the weights ``‖x‖({a1})``, ``‖y‖({a2})`` and their product.  The last row
sums the products, which is ``‖z‖({a})``.  Symbolic tables run in the
free semiring and print ``k_p`` expressions.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Any, Mapping

from .algebra import (PortSet, Sync, Union, WaiTerm, coefficient_vector, covers, sync_all,
                      term_ports)
from .dsl import pretty_wai
from .semiring import FREE, FreeValue, Semiring, format_free, format_value


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class TableRow:
    a1: frozenset
    a2: frozenset
    left: Any
    right: Any
    product: Any


@dataclass
class Table:
    term: WaiTerm
    left: WaiTerm
    right: WaiTerm
    interaction: frozenset
    rows: list[TableRow]
    total: Any
    ports: PortSet
    semiring: Semiring
    children: list["Table"] = field(default_factory=list)

    # rendering
    def fmt(self, v) -> str:
        if isinstance(v, FreeValue):
            return format_free(v, self.ports.ports)
        return format_value(self.semiring, v)

    def fmt_set(self, a) -> str:
        return "{" + ",".join(self.ports.sort(a)) + "}" if a else "∅"

    def render(self, a_name: str = "a") -> str:
        n1, n2 = ("a1", "a2") if a_name == "a" else (f"{a_name},1", f"{a_name},2")
        head = [f"{a_name} = {n1} ∪ {n2}", f"‖{pretty_wai(self.left)}‖({{{n1}}})",
                f"‖{pretty_wai(self.right)}‖({{{n2}}})", "⊗"]
        body = [[f"{n1} = {self.fmt_set(r.a1)}, {n2} = {self.fmt_set(r.a2)}",
                 self.fmt(r.left), self.fmt(r.right), self.fmt(r.product)] for r in self.rows]
        foot = ["⊕", "", "", self.fmt(self.total)]
        grid = [head] + body + [foot]
        widths = [max(_width(row[i]) for row in grid) for i in range(4)]
        line = lambda row: " | ".join(c + " " * (w - _width(c)) for c, w in zip(row, widths)).rstrip()
        rule = "-+-".join("-" * w for w in widths)
        title = f"‖{pretty_wai(self.term)}‖({{{a_name}}}), {a_name} = {self.fmt_set(self.interaction)}"
        out = [title, line(head), rule] + [line(r) for r in body] + [rule, line(foot)]
        return "\n".join(out)

    def render_all(self) -> str:
        parts = [self.render()]
        for child in self.children:
            parts.append(child.render("a2"))
        return "\n\n".join(parts)

    def to_json(self) -> dict:
        order = self.ports.ports
        return {
            "term": pretty_wai(self.term),
            "left": pretty_wai(self.left),
            "right": pretty_wai(self.right),
            "interaction": self.ports.sort(self.interaction),
            "rows": [{"a1": self.ports.sort(r.a1), "a2": self.ports.sort(r.a2),
                      "left": self.fmt(r.left), "right": self.fmt(r.right),
                      "product": self.fmt(r.product)} for r in self.rows],
            "total": self.fmt(self.total),
            "nested": [c.to_json() for c in self.children],
            "port_order": list(order),
        }


def _width(text: str) -> int:
    # the hats of 0̂ and 1̂ are combining marks and take no column
    return sum(1 for ch in text if not unicodedata.combining(ch))


def sync_factors(z: WaiTerm) -> list[WaiTerm]:
    """Operands of the top-level chain of synchronizations."""
    if isinstance(z, Sync):
        return sync_factors(z.left) + sync_factors(z.right)
    return [z]


def split(z: WaiTerm, k: int = 1) -> tuple[WaiTerm, WaiTerm]:
    """Left and right parts around the ``k``-th top-level ``⊗`` (1-based)."""
    fs = sync_factors(z)
    if len(fs) < 2:
        raise TableError(f"{pretty_wai(z)} is not a synchronization")
    if not 1 <= k < len(fs):
        raise TableError(f"split position {k} outside 1..{len(fs) - 1}")
    return sync_all(fs[:k]), sync_all(fs[k:])


def _nested_targets(right: WaiTerm) -> list[WaiTerm]:
    if isinstance(right, Sync):
        return [right]
    if isinstance(right, Union):
        return _nested_targets(right.left) + _nested_targets(right.right)
    return []


def row_order(a, P: PortSet) -> list[tuple[frozenset, frozenset]]:
    """The covers of ``a`` in the order used for printed tables.

    Every cover is followed by its mirror image.  Disjoint covers come
    first: ``(∅, a)``, then ``(x, a∖x)`` for each proper ``x`` holding the
    first port of ``a``.  Overlapping covers follow, keyed by the smaller
    part and then by the size and complement of the larger one.
    """
    a = frozenset(a)
    if not a:
        return [(a, a)]
    first = P.sort(a)[0]
    subsets = sorted({a1 for a1, _ in covers(a, P.ports)}, key=P.key)
    out = [(frozenset(), a), (a, frozenset())]
    for x in subsets:
        if first in x and x != a:
            out += [(x, a - x), (a - x, x)]
    overlap = [(x, y) for x in subsets for y in subsets
               if x | y == a and x & y and P.key(x) <= P.key(y)]
    overlap.sort(key=lambda c: (P.key(c[0]), len(c[1]), P.key(a - c[1])))
    for x, y in overlap:
        out += [(x, y)] if x == y else [(x, y), (y, x)]
    return out


def build_table(z: WaiTerm, a, P: PortSet | None = None, s: Semiring | None = None,
                weights: Mapping[str, Any] | None = None, split_at: int = 1,
                nested: bool = False) -> Table:
    """Analysis table of ``z`` at interaction ``a``.

    Without a semiring the table is symbolic.  With ``nested`` it also
    carries tables for the right part (or the synchronizations inside it)
    at every ``a2 ⊆ a``.
    """
    if P is None:
        P = PortSet(tuple(sorted(term_ports(z) | set(a))))
    a = P.check_interaction(a)
    if s is None:
        s = FREE
        weights = {p: FreeValue.generator(p) for p in P.ports}
    else:
        s.require_idempotent()
        weights = weights if weights is not None else P.weights
    left, right = split(z, split_at)
    lv = coefficient_vector(left, P, s, weights)
    rv = coefficient_vector(right, P, s, weights)
    rows = []
    total = s.zero
    for a1, a2 in row_order(a, P):
        x, y = lv[P.mask(a1)], rv[P.mask(a2)]
        prod = s.mul(x, y)
        total = s.add(total, prod)
        rows.append(TableRow(a1, a2, x, y, prod))
    table = Table(z, left, right, a, rows, total, P, s)
    if nested:
        subsets = sorted({a2 for _, a2 in covers(a, P.ports)}, key=P.key)
        for target in _nested_targets(right):
            for a2 in subsets:
                table.children.append(
                    build_table(target, a2, P, None if s is FREE else s, weights, 1, True))
        # flatten grandchildren so the output reads as one list of auxiliary tables
        flat = []
        for c in table.children:
            flat.append(c)
            flat.extend(c.children)
            c.children = []
        table.children = flat
    return table
