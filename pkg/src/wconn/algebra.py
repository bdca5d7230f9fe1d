"""Ports, interactions and the weighted algebra of interactions.

Terms are immutable trees built from :data:`ZERO`, :data:`ONE`,
:class:`Port`, :class:`Union` (weighted union) and :class:`Sync`
(weighted synchronization).  Python operators build them too::

    >>> s, r1 = Port("s"), Port("r1")
    >>> s * (ONE + r1)
    Sync(left=Port(name='s'), right=Union(left=One(), right=Port(name='r1')))

:func:`evaluate` follows the semantic clauses literally.  :func:`normalize`
computes the free-semiring coefficient of every singleton ``{a}``, which
decides equivalence over all commutative idempotent semirings at once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .semiring import (FINGERPRINT, FREE, FREE_ONE, FREE_ZERO, FreeValue, MissingWeightError,
                       Semiring, _MOD, eval_free, fingerprint_weights, format_free)

MAX_PORTS = 12
RESERVED = frozenset({"0", "1"})

Interaction = frozenset  # of port names; the empty interaction is allowed here
InteractionSet = frozenset  # of Interactions


class AlgebraError(ValueError):
    pass


class UnknownPortError(AlgebraError):
    def __init__(self, port, where="port set"):
        super().__init__(f"unknown port {port!r} (not in the {where})")
        self.port = port


class PortSetTooLarge(AlgebraError):
    pass


def interaction(*ports: str) -> Interaction:
    return frozenset(ports)


def gamma(*interactions: Iterable[str]) -> InteractionSet:
    """Build an interaction set, e.g. ``gamma({"s"}, {"s", "r1"})``."""
    return frozenset(frozenset(a) for a in interactions)


@dataclass(frozen=True)
class PortSet:
    """An ordered set of ports with optional weights ``k_p``."""

    ports: tuple[str, ...]
    weights: Mapping[str, Any] | None = None

    def __post_init__(self):
        ports = tuple(self.ports)
        object.__setattr__(self, "ports", ports)
        if len(set(ports)) != len(ports):
            raise AlgebraError(f"duplicate port in {ports}")
        for p in ports:
            if not isinstance(p, str) or not p:
                raise AlgebraError(f"port names must be non-empty strings, got {p!r}")
            if p in RESERVED:
                raise AlgebraError(f"{p!r} is reserved and cannot name a port")
        if self.weights is not None:
            object.__setattr__(self, "weights", dict(self.weights))
            for p in self.weights:
                if p not in ports:
                    raise UnknownPortError(p)

    def __hash__(self):
        return hash(self.ports)

    def __eq__(self, other):
        return isinstance(other, PortSet) and self.ports == other.ports and self.weights == other.weights

    def __len__(self):
        return len(self.ports)

    def __iter__(self):
        return iter(self.ports)

    def __contains__(self, p):
        return p in self.ports

    def weight(self, p: str):
        if self.weights is None or p not in self.weights:
            raise MissingWeightError(p)
        return self.weights[p]

    def key(self, a: Iterable[str]) -> tuple:
        """Ordering key of an interaction: size first, then port positions."""
        idx = sorted(self.index(p) for p in a)
        return (len(idx), idx)

    def index(self, p: str) -> int:
        try:
            return self.ports.index(p)
        except ValueError:
            raise UnknownPortError(p) from None

    def sort(self, a: Iterable[str]) -> list[str]:
        return sorted(a, key=self.index)

    def interactions(self) -> list[Interaction]:
        """All subsets of the ports, ordered by :meth:`key`."""
        return [frozenset(c) for r in range(len(self.ports) + 1)
                for c in itertools.combinations(self.ports, r)]

    def check_interaction(self, a: Iterable[str]) -> Interaction:
        a = frozenset(a)
        for p in a:
            if p not in self.ports:
                raise UnknownPortError(p)
        return a

    def mask(self, a: Iterable[str]) -> int:
        m = 0
        for p in a:
            m |= 1 << self.index(p)
        return m

    def unmask(self, m: int) -> Interaction:
        return frozenset(p for i, p in enumerate(self.ports) if m >> i & 1)

    def format(self, a: Iterable[str]) -> str:
        return "{" + ",".join(self.sort(a)) + "}"


def covers(a: Iterable[str], order: Sequence[str] | None = None) -> list[tuple[Interaction, Interaction]]:
    """All ordered pairs ``(a1, a2)`` with ``a1 | a2 == a``.

    There are ``3**len(a)`` of them.  Pairs are sorted by ``(a1, a2)``
    where interactions compare by size and then by position in ``order``
    (alphabetical when no order is given).
    """
    a = frozenset(a)
    order = list(order) if order is not None else sorted(a)
    rank = {p: i for i, p in enumerate(order)}
    members = sorted(a, key=lambda p: (rank.get(p, len(rank)), p))
    key = lambda x: (len(x), sorted(rank.get(p, len(rank)) for p in x), sorted(x))
    pairs = []
    for choice in itertools.product((0, 1, 2), repeat=len(members)):
        a1 = frozenset(p for p, c in zip(members, choice) if c != 1)
        a2 = frozenset(p for p, c in zip(members, choice) if c != 0)
        pairs.append((a1, a2))
    pairs.sort(key=lambda pr: (key(pr[0]), key(pr[1])))
    return pairs


# -- terms ----------------------------------------------------------------------

class _CachedHash:
    """Mixin for frozen dataclass nodes: compute the structural hash once."""

    __slots__ = ()

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_hash", h)
            return h


class WaiTerm:
    """Base class of weighted-interaction terms."""

    __slots__ = ()

    def __add__(self, other):
        return Union(self, other)

    def __mul__(self, other):
        return Sync(self, other)


@dataclass(frozen=True)
class Zero(WaiTerm):
    pass


@dataclass(frozen=True)
class One(WaiTerm):
    pass


@dataclass(frozen=True)
class Port(WaiTerm):
    name: str

    def __post_init__(self):
        if self.name in RESERVED or not self.name:
            raise AlgebraError(f"{self.name!r} cannot name a port")


@dataclass(frozen=True)
class Union(_CachedHash, WaiTerm):
    left: WaiTerm
    right: WaiTerm


@dataclass(frozen=True)
class Sync(_CachedHash, WaiTerm):
    left: WaiTerm
    right: WaiTerm


# dataclass() installs its own __hash__, so put the cached one back
Union.__hash__ = Sync.__hash__ = _CachedHash.__hash__

ZERO = Zero()
ONE = One()


def ports(*names: str) -> list[Port]:
    return [Port(n) for n in names]


def union_all(terms: Sequence[WaiTerm]) -> WaiTerm:
    """Left-nested union; the empty union is ``0``."""
    if not terms:
        return ZERO
    out = terms[0]
    for t in terms[1:]:
        out = Union(out, t)
    return out


def sync_all(terms: Sequence[WaiTerm]) -> WaiTerm:
    """Left-nested synchronization; the empty product is ``1``."""
    if not terms:
        return ONE
    out = terms[0]
    for t in terms[1:]:
        out = Sync(out, t)
    return out


def term_ports(z: WaiTerm) -> set[str]:
    out: set[str] = set()
    stack = [z]
    while stack:
        t = stack.pop()
        if isinstance(t, Port):
            out.add(t.name)
        elif isinstance(t, (Union, Sync)):
            stack += (t.left, t.right)
    return out


def term_size(z: WaiTerm) -> int:
    if isinstance(z, (Union, Sync)):
        return 1 + term_size(z.left) + term_size(z.right)
    return 1


def _resolve_ports(P, *terms) -> PortSet:
    if P is None:
        found = set()
        for t in terms:
            found |= term_ports(t)
        return PortSet(tuple(sorted(found)))
    if not isinstance(P, PortSet):
        P = PortSet(tuple(P))
    for t in terms:
        for p in term_ports(t):
            if p not in P:
                raise UnknownPortError(p)
    return P


def _weights(P: PortSet, weights, needed: Iterable[str]):
    w = weights if weights is not None else (P.weights or {})
    for p in needed:
        if p not in w:
            raise MissingWeightError(p)
    return w


# -- direct semantics -------------------------------------------------------------

def evaluate(z: WaiTerm, gamma_: Iterable[Iterable[str]], P: PortSet | Iterable[str] | None,
             s: Semiring, weights: Mapping[str, Any] | None = None):
    """Weight of ``z`` on the interaction set ``gamma_``.

    This is the clause-by-clause definition: ``0`` is zero, ``1`` is one
    exactly when the empty interaction is present, a port ``p`` weighs
    ``k_p`` when some interaction contains it, and union and
    synchronization sum over the members of ``gamma_`` (the latter also
    over every cover ``a = a1 | a2``).
    """
    s.require_idempotent()
    P = _resolve_ports(P, z)
    w = _weights(P, weights, term_ports(z))
    g = frozenset(P.check_interaction(a) for a in gamma_)
    memo: dict = {}
    order = P.ports

    def single(t, a):
        key = (id(t), a)
        if key not in memo:
            memo[key] = at(t, (a,))
        return memo[key]

    def at(t, g):
        if isinstance(t, Zero):
            return s.zero
        if isinstance(t, One):
            return s.one if frozenset() in g else s.zero
        if isinstance(t, Port):
            return w[t.name] if any(t.name in a for a in g) else s.zero
        if isinstance(t, Union):
            return s.sum(s.add(single(t.left, a), single(t.right, a)) for a in g)
        if isinstance(t, Sync):
            total = s.zero
            for a in g:
                for a1, a2 in covers(a, order):
                    total = s.add(total, s.mul(single(t.left, a1), single(t.right, a2)))
            return total
        raise TypeError(f"not a wAI term: {t!r}")

    return at(z, g)


# -- coefficient vectors ------------------------------------------------------------

def _sync_vectors(c1: list, c2: list, s: Semiring) -> list:
    if s is FINGERPRINT:
        return _sync_fingerprints(c1, c2)
    out = [s.zero] * len(c1)
    nz2 = [(m, v) for m, v in enumerate(c2) if not s.is_zero(v)]
    for m1, v1 in enumerate(c1):
        if s.is_zero(v1):
            continue
        for m2, v2 in nz2:
            m = m1 | m2
            out[m] = s.add(out[m], s.mul(v1, v2))
    return out


def _sync_fingerprints(c1: list, c2: list) -> list:
    # same as the generic loop, minus the per-element call overhead
    out = [set() for _ in c1]
    nz2 = [(m, v) for m, v in enumerate(c2) if v]
    for m1, v1 in enumerate(c1):
        if not v1:
            continue
        for m2, v2 in nz2:
            out[m1 | m2].update([(a + b) % _MOD for a in v1 for b in v2])
    return [frozenset(x) for x in out]


def coefficient_vector(z: WaiTerm, P: PortSet, s: Semiring, weights: Mapping[str, Any]) -> list:
    """Values ``‖z‖({a})`` for every ``a`` indexed by its bitmask over ``P``."""
    if len(P) > MAX_PORTS:
        raise PortSetTooLarge(f"{len(P)} ports exceeds the limit of {MAX_PORTS}")
    n = 1 << len(P)
    memo: dict = {}

    def go(t):
        k = id(t)
        if k in memo:
            return memo[k]
        if isinstance(t, Zero):
            v = [s.zero] * n
        elif isinstance(t, One):
            v = [s.one] + [s.zero] * (n - 1)
        elif isinstance(t, Port):
            bit = 1 << P.index(t.name)
            kp = weights[t.name]
            v = [kp if m & bit else s.zero for m in range(n)]
        elif isinstance(t, Union):
            v = [s.add(x, y) for x, y in zip(go(t.left), go(t.right))]
        elif isinstance(t, Sync):
            v = _sync_vectors(go(t.left), go(t.right), s)
        else:
            raise TypeError(f"not a wAI term: {t!r}")
        memo[k] = v
        return v

    return go(z)


@dataclass(frozen=True)
class WaiPolynomial:
    """Free-semiring coefficient of ``‖z‖({a})`` for every ``a`` over the ports."""

    ports: PortSet
    vector: tuple[FreeValue, ...]

    def __getitem__(self, a: Iterable[str]) -> FreeValue:
        return self.vector[self.ports.mask(a)]

    @property
    def coeffs(self) -> dict[Interaction, FreeValue]:
        return {self.ports.unmask(m): v for m, v in enumerate(self.vector)}

    def support(self) -> list[Interaction]:
        """Interactions with a nonzero coefficient, in port order."""
        return sorted((self.ports.unmask(m) for m, v in enumerate(self.vector) if v),
                      key=self.ports.key)

    def exact_support(self) -> list[Interaction]:
        """Interactions ``a`` whose coefficient has the monomial of ``a`` itself.

        That monomial is ``∏_{p∈a} k_p`` with each port once, i.e. the
        weight of firing exactly the ports in ``a``.
        """
        out = []
        for m, v in enumerate(self.vector):
            a = self.ports.unmask(m)
            if tuple(sorted(a)) in v.monomials:
                out.append(a)
        return sorted(out, key=self.ports.key)

    def is_zero(self) -> bool:
        return not any(self.vector)

    def format(self) -> str:
        order = self.ports.ports
        lines = []
        for a in sorted((self.ports.unmask(m) for m in range(len(self.vector))), key=self.ports.key):
            v = self[a]
            if v:
                lines.append(f"{self.ports.format(a)}: {format_free(v, order)}")
        return "\n".join(lines) if lines else "0̂ everywhere"


def normalize(z: WaiTerm, P: PortSet | Iterable[str] | None = None) -> WaiPolynomial:
    """Normal form of ``z``: its free coefficient on every singleton.

    Raises :class:`PortSetTooLarge` beyond :data:`MAX_PORTS` ports.
    """
    P = _resolve_ports(P, z)
    return _normalize(z, PortSet(P.ports))


@lru_cache(maxsize=4096)
def _normalize(z: WaiTerm, P: PortSet) -> WaiPolynomial:
    gens = {p: FreeValue.generator(p) for p in P.ports}
    return WaiPolynomial(P, tuple(coefficient_vector(z, P, FREE, gens)))


def eval_via_polynomial(poly: WaiPolynomial, gamma_: Iterable[Iterable[str]], s: Semiring,
                        weights: Mapping[str, Any]):
    """Sum over ``a`` in ``gamma_`` of the evaluated coefficient of ``a``."""
    total = s.zero
    for a in gamma_:
        total = s.add(total, eval_free(poly[a], s, weights))
    return total


def wai_equiv(z1: WaiTerm, z2: WaiTerm, P: PortSet | Iterable[str] | None = None,
              mode: str = "universal", s: Semiring | None = None,
              weights: Mapping[str, Any] | None = None) -> bool:
    """Decide ``z1 ≡ z2``.

    ``universal`` compares normal forms, so the answer holds in every
    commutative idempotent semiring.  ``concrete`` compares the weights in
    ``s`` under ``weights`` on each singleton ``{a}``; by the singleton
    lemma this covers every interaction set.
    """
    P = _resolve_ports(P, z1, z2)
    if mode == "universal":
        return normalize(z1, P) == normalize(z2, P)
    if mode != "concrete":
        raise AlgebraError(f"unknown equivalence mode {mode!r}")
    if s is None:
        raise AlgebraError("concrete mode needs a semiring")
    s.require_idempotent()
    w = _weights(P, weights, term_ports(z1) | term_ports(z2))
    v1 = coefficient_vector(z1, P, s, w)
    v2 = coefficient_vector(z2, P, s, w)
    return all(s.eq(x, y) for x, y in zip(v1, v2))


def fingerprint(z: WaiTerm, P: PortSet, seed: int = 0) -> tuple:
    """Hashed normal form; equal for equivalent terms, distinct otherwise w.h.p."""
    return tuple(coefficient_vector(z, P, FINGERPRINT, fingerprint_weights(P.ports, seed)))


__all__ = [
    "AlgebraError", "Interaction", "InteractionSet", "MAX_PORTS", "ONE", "One", "Port",
    "PortSet", "PortSetTooLarge", "Sync", "Union", "UnknownPortError", "WaiPolynomial",
    "WaiTerm", "ZERO", "Zero", "covers", "coefficient_vector", "eval_via_polynomial",
    "evaluate", "fingerprint", "gamma", "interaction", "normalize", "ports", "sync_all",
    "term_ports", "term_size", "union_all", "wai_equiv", "FREE_ONE", "FREE_ZERO",
]
