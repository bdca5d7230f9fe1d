"""Weighted connectors: typed terms, their translation, and congruence.

A connector is built from typed operands.  ``[x]`` is a synchron and
``[x]'`` a trigger; fusion ``⊗`` joins typed operands and ``⊕`` is
union.  :func:`translate` maps a connector to the interaction term it
denotes, so equivalence is inherited from :mod:`wconn.algebra`.

Congruence (interchangeability inside any context) is decided by three
checks, see :func:`congruence_report`.  :func:`congruence_oracle`
searches for a distinguishing context by sampling and is meant as an
independent cross-check.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import (ONE, _CachedHash, One, Port, PortSet, Union, WaiTerm, Zero, ZERO, _sync_vectors,
                      coefficient_vector, sync_all, union_all, wai_equiv)
from .semiring import FINGERPRINT, fingerprint_weights

SYNCHRON, TRIGGER = False, True


class ConnectorError(ValueError):
    pass


class WacTerm:
    __slots__ = ()

    def __add__(self, other):
        return UnionC(self, other)

    def __mul__(self, other):
        return fuse(self, other)


@dataclass(frozen=True)
class Typed(_CachedHash, WacTerm):
    """``[body]`` when ``trigger`` is false, ``[body]'`` otherwise.

    ``body`` is ``0``, ``1``, a port, or another connector.
    """

    trigger: bool
    body: object

    def __post_init__(self):
        if not isinstance(self.body, (Zero, One, Port, WacTerm, Hole)):
            raise ConnectorError(f"cannot type {self.body!r}")

    @property
    def is_atom(self) -> bool:
        return isinstance(self.body, (Zero, One, Port))


@dataclass(frozen=True)
class UnionC(_CachedHash, WacTerm):
    left: WacTerm
    right: WacTerm


@dataclass(frozen=True)
class Fusion(_CachedHash, WacTerm):
    """Flat n-ary fusion of typed operands."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ConnectorError("a fusion needs at least one operand")
        for f in self.factors:
            if not isinstance(f, (Typed, Hole)):
                raise ConnectorError(f"fusion operands must be typed, got {f!r}")


@dataclass(frozen=True)
class Hole(WacTerm):
    """The single placeholder of a context."""

    name: str = "r"


Typed.__hash__ = UnionC.__hash__ = Fusion.__hash__ = _CachedHash.__hash__


def syn(x) -> Typed:
    return Typed(SYNCHRON, _atom(x))


def trig(x) -> Typed:
    return Typed(TRIGGER, _atom(x))


def _atom(x):
    if isinstance(x, str):
        if x == "0":
            return ZERO
        if x == "1":
            return ONE
        return Port(x)
    if isinstance(x, int) and x in (0, 1):
        return ONE if x else ZERO
    return x


def fusion(*factors) -> WacTerm:
    """Fuse typed operands; a single operand is returned unchanged."""
    if len(factors) == 1:
        return factors[0]
    return Fusion(tuple(factors))


def factors_of(z: WacTerm) -> tuple:
    if isinstance(z, Fusion):
        return z.factors
    if isinstance(z, (Typed, Hole)):
        return (z,)
    raise ConnectorError(f"{z!r} is not a fusion operand")


def fuse(z1: WacTerm, z2: WacTerm) -> WacTerm:
    """Fusion of two connectors.

    Operand lists are concatenated (typing brackets are never opened) and
    fusion distributes over unions on either side.
    """
    if isinstance(z1, UnionC):
        return UnionC(fuse(z1.left, z2), fuse(z1.right, z2))
    if isinstance(z2, UnionC):
        return UnionC(fuse(z1, z2.left), fuse(z1, z2.right))
    return Fusion(factors_of(z1) + factors_of(z2))


# -- structure -------------------------------------------------------------------

@dataclass(frozen=True)
class Degrees:
    triggers: int
    synchrons: int
    strictly_positive: bool


def degree(z: WacTerm) -> Degrees:
    """Trigger and synchron counts of the top-level fusion.

    For a union both counts are maxima over the summands, and the degree is
    strictly positive when every summand has a trigger.
    """
    if isinstance(z, UnionC):
        a, b = degree(z.left), degree(z.right)
        return Degrees(max(a.triggers, b.triggers), max(a.synchrons, b.synchrons),
                       a.strictly_positive and b.strictly_positive)
    if isinstance(z, Hole):
        raise ConnectorError("the degree of a context is undefined")
    fs = factors_of(z)
    t = sum(1 for f in fs if f.trigger)
    return Degrees(t, len(fs) - t, t > 0)


def connector_ports(z) -> set[str]:
    if isinstance(z, Typed):
        return connector_ports(z.body)
    if isinstance(z, UnionC):
        return connector_ports(z.left) | connector_ports(z.right)
    if isinstance(z, Fusion):
        out = set()
        for f in z.factors:
            out |= connector_ports(f)
        return out
    if isinstance(z, Port):
        return {z.name}
    return set()


def connector_size(z) -> int:
    if isinstance(z, Typed):
        return 1 + connector_size(z.body)
    if isinstance(z, UnionC):
        return 1 + connector_size(z.left) + connector_size(z.right)
    if isinstance(z, Fusion):
        return 1 + sum(connector_size(f) for f in z.factors)
    return 1


def _brackets(z):
    if isinstance(z, Typed):
        yield z.trigger
        yield from _brackets(z.body)
    elif isinstance(z, UnionC):
        yield from _brackets(z.left)
        yield from _brackets(z.right)
    elif isinstance(z, Fusion):
        for f in z.factors:
            yield from _brackets(f)


def is_was(z: WacTerm) -> bool:
    """Every typing bracket is a synchron."""
    return not any(_brackets(z))


def is_wat(z: WacTerm) -> bool:
    """Every typing bracket is a trigger."""
    return all(_brackets(z))


# -- translation ----------------------------------------------------------------------

def translate(z: WacTerm) -> WaiTerm:
    """The interaction term denoted by a connector.

    Typing is transparent on a lone operand and union maps to union.  A
    fusion of synchrons is the plain synchronization of its operands.  A
    fusion with triggers is a union with one summand per trigger: that
    trigger's term, synchronized with ``1 ⊕ x`` for every other operand
    ``x``, kept in operand order.
    """
    if isinstance(z, Typed):
        return z.body if z.is_atom else translate(z.body)
    if isinstance(z, UnionC):
        return Union(translate(z.left), translate(z.right))
    if isinstance(z, Fusion):
        if len(z.factors) == 1:
            return translate(z.factors[0])
        parts = [translate(f) for f in z.factors]
        trig_idx = [i for i, f in enumerate(z.factors) if f.trigger]
        if not trig_idx:
            return sync_all(parts)
        summands = []
        for i in trig_idx:
            summands.append(sync_all([x if j == i else Union(ONE, x) for j, x in enumerate(parts)]))
        return union_all(summands)
    if isinstance(z, Hole):
        raise ConnectorError("cannot translate a context with a hole")
    raise TypeError(f"not a connector: {z!r}")


def _ports_for(P, *terms) -> PortSet:
    if P is None:
        found = set()
        for t in terms:
            found |= connector_ports(t)
        return PortSet(tuple(sorted(found)))
    return P if isinstance(P, PortSet) else PortSet(tuple(P))


def wac_equiv(z1: WacTerm, z2: WacTerm, P=None, mode: str = "universal", s=None, weights=None) -> bool:
    """``z1 ≡ z2``: equivalence of the translations."""
    P = _ports_for(P, z1, z2)
    return wai_equiv(translate(z1), translate(z2), P, mode, s, weights)


# -- congruence -----------------------------------------------------------------------

def with_trigger_one(z: WacTerm) -> WacTerm:
    """``z ⊗ [1]'``: one more trigger operand, distributed over unions."""
    return fuse(z, trig(ONE))


@dataclass(frozen=True)
class CongruenceReport:
    equivalent: bool
    trigger_one_equivalent: bool
    degree_parity: bool

    @property
    def congruent(self) -> bool:
        return self.equivalent and self.trigger_one_equivalent and self.degree_parity

    def failed(self) -> list[str]:
        names = []
        if not self.equivalent:
            names.append("condition 1: equivalence")
        if not self.trigger_one_equivalent:
            names.append("condition 2: equivalence after fusing [1]'")
        if not self.degree_parity:
            names.append("condition 3: degree parity")
        return names


def congruence_report(z1: WacTerm, z2: WacTerm, P=None) -> CongruenceReport:
    """The three congruence conditions for ``z1`` and ``z2``.

    1. ``z1 ≡ z2``;
    2. ``z1 ⊗ [1]' ≡ z2 ⊗ [1]'``;
    3. ``z1`` has a trigger iff ``z2`` has one.
    """
    P = _ports_for(P, z1, z2)
    c1 = wac_equiv(z1, z2, P)
    c2 = wac_equiv(with_trigger_one(z1), with_trigger_one(z2), P)
    c3 = (degree(z1).triggers > 0) == (degree(z2).triggers > 0)
    return CongruenceReport(c1, c2, c3)


def congruent(z1: WacTerm, z2: WacTerm, P=None) -> bool:
    return congruence_report(z1, z2, P).congruent


# -- contexts -------------------------------------------------------------------------

def count_holes(e) -> int:
    if isinstance(e, Hole):
        return 1
    if isinstance(e, Typed):
        return count_holes(e.body)
    if isinstance(e, UnionC):
        return count_holes(e.left) + count_holes(e.right)
    if isinstance(e, Fusion):
        return sum(count_holes(f) for f in e.factors)
    return 0


def substitute(e: WacTerm, z: WacTerm) -> WacTerm:
    """Put ``z`` in place of the hole of the context ``e``.

    A bare hole becomes ``z``.  A typed hole ``[r]^α`` keeps its bracket:
    ``z`` is retyped with ``α`` when it is typed already and wrapped
    otherwise.  A hole used as a fusion operand splices the operands of
    ``z`` into the fusion.
    """
    n = count_holes(e)
    if n != 1:
        raise ConnectorError("context has no hole" if n == 0 else f"context has {n} holes")

    def go(t):
        # rebuilt subtree, or None when the hole is not below t
        if isinstance(t, Hole):
            return z
        if isinstance(t, Typed):
            if isinstance(t.body, Hole):
                return Typed(t.trigger, z.body if isinstance(z, Typed) else z)
            b = go(t.body)
            return None if b is None else Typed(t.trigger, b)
        if isinstance(t, UnionC):
            l = go(t.left)
            if l is not None:
                return UnionC(l, t.right)
            r = go(t.right)
            return None if r is None else UnionC(t.left, r)
        if isinstance(t, Fusion):
            for i, f in enumerate(t.factors):
                piece = go(f)
                if piece is not None:
                    out = piece
                    if i:
                        out = fuse(Fusion(t.factors[:i]) if i > 1 else t.factors[0], out)
                    if i + 1 < len(t.factors):
                        rest = t.factors[i + 1:]
                        out = fuse(out, Fusion(rest) if len(rest) > 1 else rest[0])
                    return out
        return None

    return go(e)


def canonical_contexts(z1: WacTerm, z2: WacTerm, extra: str = "q") -> list[WacTerm]:
    """Contexts that the congruence conditions are built from.

    ``extra`` names a port foreign to both terms.
    """
    h = Hole()
    out = [h, syn(h), trig(h), UnionC(h, z1), UnionC(h, z2)]
    for z in (z1, z2):
        out += [Fusion((h, syn(z))), Fusion((h, trig(z)))]
    q = Port(extra)
    out += [
        Fusion((h, trig(ONE))), Fusion((h, syn(ONE))), Fusion((h, syn(ZERO))),
        Fusion((h, trig(ZERO))), Fusion((h, syn(q))), Fusion((h, trig(q))),
        Fusion((trig(h), syn(q))), Fusion((syn(h), trig(q))),
        Fusion((h, syn(q), trig(ONE))), Fusion((h, trig(q), syn(ONE))),
        syn(Fusion((h, syn(q)))), trig(Fusion((h, trig(q)))),
    ]
    return out


def random_context(rng: random.Random, port_names: Sequence[str], depth: int) -> WacTerm:
    """A random context with one hole, nested at most ``depth`` levels."""
    from .generate import random_connector
    h = Hole()
    e: WacTerm = h
    for _ in range(rng.randint(1, depth)):
        kind = rng.random()
        if kind < 0.2:
            e = Typed(rng.random() < 0.5, e)
        elif kind < 0.35:
            other = random_connector(rng, port_names, 2)
            e = UnionC(e, other) if rng.random() < 0.5 else UnionC(other, e)
        else:
            # a fusion operand: the hole splices, anything else gets typed
            op = e if isinstance(e, (Typed, Hole)) else Typed(rng.random() < 0.5, e)
            others = [Typed(rng.random() < 0.5, random_connector(rng, port_names, 1, atoms_only=rng.random() < 0.6))
                      for _ in range(rng.randint(1, 2))]
            pos = rng.randint(0, len(others))
            e = Fusion(tuple(others[:pos]) + (op,) + tuple(others[pos:]))
    return e


@dataclass(frozen=True)
class OracleReport:
    counterexample: WacTerm | None
    checked: int
    lhs: WacTerm | None = None
    rhs: WacTerm | None = None

    @property
    def found(self) -> bool:
        return self.counterexample is not None


def _fresh(used: Iterable[str], stem: str) -> str:
    used = set(used)
    if stem not in used:
        return stem
    i = 1
    while f"{stem}{i}" in used:
        i += 1
    return f"{stem}{i}"


def congruence_oracle(z1: WacTerm, z2: WacTerm, P=None, depth: int = 3, n: int = 500,
                      seed: int = 0) -> OracleReport:
    """Search for a context that tells ``z1`` and ``z2`` apart.

    Tries the canonical contexts and then ``n`` random ones built over
    the terms' ports plus one fresh port.  Candidates are screened with a
    hashed normal form and confirmed with exact universal equivalence, so
    a reported counterexample is always genuine.
    """
    if depth > 3 or n > 10_000:
        raise ConnectorError("the oracle is limited to depth 3 and 10^4 contexts")
    base = _ports_for(P, z1, z2).ports
    extra = _fresh(base, "q")
    hole = _fresh(base + (extra,), "r")
    names = list(base) + [extra]
    P_all = PortSet(tuple(names))
    rng = random.Random(seed)
    contexts = canonical_contexts(z1, z2, extra)
    contexts += [random_context(rng, names, depth) for _ in range(n)]
    weights = fingerprint_weights(P_all.ports, seed)
    cache: dict = {}
    for k, e in enumerate(contexts, 1):
        a, b = substitute(e, z1), substitute(e, z2)
        va = connector_vector(a, P_all, FINGERPRINT, weights, cache)
        vb = connector_vector(b, P_all, FINGERPRINT, weights, cache)
        if va != vb and not wac_equiv(a, b, P_all):
            return OracleReport(_rename_hole(e, hole), k, a, b)
    return OracleReport(None, len(contexts))


def connector_vector(z: WacTerm, P: PortSet, s, weights, cache: dict | None = None) -> list:
    """Coefficient vector of ``translate(z)`` computed straight from the connector.

    Subterm vectors are memoized in ``cache`` (keyed by structure), which
    pays off when many connectors share parts, as the oracle's do.
    """
    cache = {} if cache is None else cache
    n = 1 << len(P)
    one_vec = [s.one] + [s.zero] * (n - 1)

    def go(t):
        hit = cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Typed):
            v = coefficient_vector(t.body, P, s, weights) if t.is_atom else go(t.body)
        elif isinstance(t, UnionC):
            v = [s.add(x, y) for x, y in zip(go(t.left), go(t.right))]
        elif isinstance(t, Fusion):
            parts = [go(f) for f in t.factors]
            trig_idx = [i for i, f in enumerate(t.factors) if f.trigger]
            if len(parts) == 1:
                v = parts[0]
            elif not trig_idx:
                v = parts[0]
                for x in parts[1:]:
                    v = _sync_vectors(v, x, s)
            else:
                opt = [[s.add(a, b) for a, b in zip(one_vec, x)] for x in parts]
                # prefix and suffix products of the (1 + x) factors
                pre = [one_vec]
                for x in opt:
                    pre.append(_sync_vectors(pre[-1], x, s))
                suf = [one_vec]
                for x in reversed(opt):
                    suf.append(_sync_vectors(x, suf[-1], s))
                suf.reverse()
                v = [s.zero] * n
                for i in trig_idx:
                    term = _sync_vectors(_sync_vectors(pre[i], parts[i], s), suf[i + 1], s)
                    v = [s.add(a, b) for a, b in zip(v, term)]
        else:
            raise ConnectorError(f"cannot evaluate {t!r}")
        cache[t] = v
        return v

    return go(z)


def _rename_hole(e, name):
    if isinstance(e, Hole):
        return Hole(name)
    if isinstance(e, Typed):
        return Typed(e.trigger, _rename_hole(e.body, name))
    if isinstance(e, UnionC):
        return UnionC(_rename_hole(e.left, name), _rename_hole(e.right, name))
    if isinstance(e, Fusion):
        return Fusion(tuple(_rename_hole(f, name) for f in e.factors))
    return e


__all__ = [
    "CongruenceReport", "ConnectorError", "Degrees", "Fusion", "Hole", "OracleReport",
    "SYNCHRON", "TRIGGER", "Typed", "UnionC", "WacTerm", "canonical_contexts",
    "congruence_oracle", "congruence_report", "congruent", "connector_ports",
    "connector_vector", "degree",
    "factors_of", "fuse", "fusion", "is_was", "is_wat", "random_context", "substitute",
    "syn", "translate", "trig", "wac_equiv", "with_trigger_one",
]
