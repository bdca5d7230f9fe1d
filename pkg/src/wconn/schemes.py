"""The four sender/receiver coordination schemes and weighted components.

Each constructor returns a connector::

    >>> from wconn.dsl import pretty
    >>> pretty(broadcast("s", ["r1", "r2"]))
    "[s]' * [r1] * [r2]"

:func:`canonical_gamma` gives the interaction set the scheme is meant to
permit, and :class:`WltsComponent` / :class:`WeightedSystem` model the
components a connector coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .algebra import Port
from .connectors import Fusion, Typed, WacTerm, connector_ports
from .semiring import Semiring

SCHEMES = ("rendezvous", "broadcast", "atomic-broadcast", "causality-chain")


class SchemeError(ValueError):
    pass


def _check(sender: str, receivers: Sequence[str]):
    receivers = list(receivers)
    if not receivers:
        raise SchemeError("a scheme needs at least one receiver")
    names = [sender] + receivers
    if len(set(names)) != len(names):
        raise SchemeError(f"ports must be distinct: {names}")
    for p in names:
        if not p or p in ("0", "1"):
            raise SchemeError(f"invalid port name {p!r}")
    return receivers


def _s(p):
    return Typed(False, Port(p))


def _t(p):
    return Typed(True, Port(p))


def rendezvous(sender: str, receivers: Sequence[str]) -> WacTerm:
    """``[s] ⊗ [r1] ⊗ … ⊗ [rn]``: everybody fires together."""
    rs = _check(sender, receivers)
    return Fusion((_s(sender),) + tuple(_s(r) for r in rs))


def broadcast(sender: str, receivers: Sequence[str]) -> WacTerm:
    """``[s]' ⊗ [r1] ⊗ … ⊗ [rn]``: the sender fires with any subset of receivers."""
    rs = _check(sender, receivers)
    return Fusion((_t(sender),) + tuple(_s(r) for r in rs))


def atomic_broadcast(sender: str, receivers: Sequence[str]) -> WacTerm:
    """``[s]' ⊗ [[r1] ⊗ … ⊗ [rn]]``: all receivers or none."""
    rs = _check(sender, receivers)
    inner = _s(rs[0]) if len(rs) == 1 else Fusion(tuple(_s(r) for r in rs))
    return Fusion((_t(sender), Typed(False, inner)))


def causality_chain(sender: str, receivers: Sequence[str]) -> WacTerm:
    """``[s]' ⊗ [[r1]' ⊗ [[r2]' ⊗ … [rn]]]``.

    Receiver ``ri`` may only fire when every ``rj`` with ``j < i`` does.
    Every receiver but the last is a trigger of its nested fusion.
    """
    rs = _check(sender, receivers)
    inner: Typed = _s(rs[-1])
    for r in reversed(rs[:-1]):
        inner = Typed(False, Fusion((_t(r), inner)))
    return Fusion((_t(sender), inner if isinstance(inner.body, Fusion) else Typed(False, inner)))


_CONSTRUCTORS = {"rendezvous": rendezvous, "broadcast": broadcast,
                 "atomic-broadcast": atomic_broadcast, "causality-chain": causality_chain}


def scheme(kind: str, sender: str, receivers: Sequence[str]) -> WacTerm:
    key = kind.replace("_", "-").lower()
    if key not in _CONSTRUCTORS:
        raise SchemeError(f"unknown scheme {kind!r}; expected one of {', '.join(SCHEMES)}")
    return _CONSTRUCTORS[key](sender, receivers)


def canonical_gamma(kind: str, sender: str, receivers: Sequence[str]) -> frozenset:
    """The interactions a scheme is designed to permit.

    Rendezvous allows only the full interaction, Broadcast the sender with
    any set of receivers, Atomic Broadcast the sender alone or with all
    receivers, and Causality Chain the sender with each prefix of the
    receiver list.
    """
    key = kind.replace("_", "-").lower()
    rs = _check(sender, receivers)
    s = frozenset({sender})
    if key == "rendezvous":
        return frozenset({s | set(rs)})
    if key == "broadcast":
        out = set()
        for m in range(1 << len(rs)):
            out.add(s | {r for i, r in enumerate(rs) if m >> i & 1})
        return frozenset(out)
    if key == "atomic-broadcast":
        return frozenset({s, s | set(rs)})
    if key == "causality-chain":
        return frozenset(s | set(rs[:k]) for k in range(len(rs) + 1))
    raise SchemeError(f"unknown scheme {kind!r}; expected one of {', '.join(SCHEMES)}")


# -- weighted components ------------------------------------------------------------

@dataclass(frozen=True)
class WltsComponent:
    """A weighted labelled transition system over its own ports.

    ``transitions`` are ``(q, a, q2)`` triples with ``a`` a non-empty set
    of this component's ports; ``ct`` weighs each port.
    """

    name: str
    states: frozenset
    ports: frozenset
    transitions: tuple
    ct: Mapping[str, Any]

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "ports", frozenset(self.ports))
        object.__setattr__(self, "transitions",
                           tuple((q, frozenset(a), q2) for q, a, q2 in self.transitions))
        for q, a, q2 in self.transitions:
            if not a:
                raise SchemeError(f"{self.name}: transition {q}->{q2} has an empty interaction")
            if not a <= self.ports:
                raise SchemeError(f"{self.name}: transition uses foreign ports {sorted(a - self.ports)}")
            if q not in self.states or q2 not in self.states:
                raise SchemeError(f"{self.name}: transition {q}->{q2} leaves the state set")
        missing = self.ports - set(self.ct)
        if missing:
            raise SchemeError(f"{self.name}: ports without weight {sorted(missing)}")


def transition_weight(c: WltsComponent, t, s: Semiring):
    """Product of the weights of the ports the transition fires."""
    q, a, q2 = t[0], frozenset(t[1]), t[2]
    if (q, a, q2) not in c.transitions:
        raise SchemeError(f"{c.name}: ({q}, {sorted(a)}, {q2}) is not a transition")
    return s.prod(c.ct[p] for p in sorted(a))


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass(frozen=True)
class WeightedSystem:
    components: tuple
    connector: WacTerm


def validate_system(sys: WeightedSystem) -> ValidationReport:
    """Check that components share no state or port and the connector uses only their ports."""
    problems = []
    comps = list(sys.components)
    for i, a in enumerate(comps):
        for b in comps[i + 1:]:
            shared = (a.states | a.ports) & (b.states | b.ports)
            if shared:
                problems.append((a.name, b.name, f"share {sorted(map(str, shared))}"))
    all_ports = set().union(*(c.ports for c in comps)) if comps else set()
    stray = connector_ports(sys.connector) - all_ports
    if stray:
        problems.append(("connector", None, f"uses unknown ports {sorted(stray)}"))
    return ValidationReport(tuple(problems))
