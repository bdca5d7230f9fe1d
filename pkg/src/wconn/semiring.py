"""Commutative idempotent semirings, the free one, and a law checker.

A semiring is a plain bundle of operations (:class:`Semiring`).  The
bundled instances are the usual ones for weighting connectors::

    >>> MIN_PLUS.add(2.0, 3.0), MIN_PLUS.mul(2.0, 3.0)
    (2.0, 5.0)

:class:`FreeValue` is the free commutative idempotent semiring over port
generators.  Two terms agree in every commutative idempotent semiring
exactly when their free values coincide, which is what the equivalence
checks in :mod:`wconn.algebra` rely on.
"""
from __future__ import annotations

import itertools
import math
import random
import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

DEFAULT_TOL = 1e-9


class SemiringError(ValueError):
    """Raised for values outside a carrier or unusable semirings."""


class NotIdempotentError(SemiringError):
    pass


class MissingWeightError(SemiringError, KeyError):
    def __init__(self, port):
        super().__init__(f"no weight for port {port!r}")
        self.port = port

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class Semiring:
    """Operations of a commutative semiring ``(K, add, mul, zero, one)``.

    ``check`` validates a single carrier value and raises
    :class:`SemiringError` when it falls outside the carrier.
    """

    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    eq: Callable[[Any, Any], bool] = lambda x, y: x == y
    check: Callable[[Any], Any] = lambda x: x
    idempotent: bool = True
    params: tuple = ()

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero)

    def sum(self, xs: Iterable) -> Any:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def prod(self, xs: Iterable) -> Any:
        acc = self.one
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def require_idempotent(self):
        if not self.idempotent:
            raise NotIdempotentError(
                f"semiring {self.name!r} is not additively idempotent; "
                "the connector algebras need a commutative idempotent semiring")

    def __repr__(self):
        return f"Semiring({self.name})"


def sr_add(s: Semiring, x, y):
    return s.add(s.check(x), s.check(y))


def sr_mul(s: Semiring, x, y):
    return s.mul(s.check(x), s.check(y))


# -- concrete carriers ------------------------------------------------------

def close(x: float, y: float, tol: float = DEFAULT_TOL) -> bool:
    if x == y:
        return True
    if math.isinf(x) or math.isinf(y):
        return False
    return abs(x - y) <= tol


def _real_checker(name, lo, hi, extra=()):
    def check(x):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise SemiringError(f"{name}: expected a number, got {x!r}")
        x = float(x)
        if x in extra:
            return x
        if math.isnan(x) or not (lo <= x <= hi):
            raise SemiringError(f"{name}: {x!r} is outside the carrier")
        return x
    return check


def _bool_check(x):
    if x in (0, 1) or isinstance(x, bool):
        return bool(x)
    raise SemiringError(f"boolean: expected true/false, got {x!r}")


def _nat_check(x):
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise SemiringError(f"natural: expected a non-negative integer, got {x!r}")
    return x


def float_eq(tol):
    return lambda x, y: close(x, y, tol)


BOOLEAN = Semiring("boolean", lambda x, y: x or y, lambda x, y: x and y,
                   False, True, check=_bool_check)
MIN_PLUS = Semiring("min-plus", min, lambda x, y: x + y, math.inf, 0.0,
                    eq=float_eq(DEFAULT_TOL),
                    check=_real_checker("min-plus", 0.0, math.inf))
# -inf + x never meets +inf here, the carrier stops at finite reals
MAX_PLUS = Semiring("max-plus", max, lambda x, y: x + y, -math.inf, 0.0,
                    eq=float_eq(DEFAULT_TOL),
                    check=_real_checker("max-plus", 0.0, math.inf, extra=(-math.inf,)))
VITERBI = Semiring("viterbi", max, lambda x, y: x * y, 0.0, 1.0,
                   eq=float_eq(DEFAULT_TOL), check=_real_checker("viterbi", 0.0, 1.0))
FUZZY = Semiring("fuzzy", max, min, 0.0, 1.0,
                 eq=float_eq(DEFAULT_TOL), check=_real_checker("fuzzy", 0.0, 1.0))
NATURAL = Semiring("natural", lambda x, y: x + y, lambda x, y: x * y, 0, 1,
                   check=_nat_check, idempotent=False)


def powerset(universe: Iterable[str]) -> Semiring:
    """Subsets of ``universe`` under union and intersection."""
    top = frozenset(universe)

    def check(x):
        try:
            x = frozenset(x)
        except TypeError:
            raise SemiringError(f"powerset: expected a set, got {x!r}") from None
        if not x <= top:
            raise SemiringError(f"powerset: {sorted(x - top)} not in the universe")
        return x

    return Semiring("powerset", frozenset.union, frozenset.intersection,
                    frozenset(), top, check=check, params=tuple(sorted(top)))


def with_tolerance(s: Semiring, tol: float) -> Semiring:
    """Copy of a floating semiring with a different equality tolerance."""
    if s.name not in FLOATING:
        return s
    return Semiring(s.name, s.add, s.mul, s.zero, s.one, eq=float_eq(tol),
                    check=s.check, idempotent=s.idempotent, params=s.params)


FLOATING = ("min-plus", "max-plus", "viterbi", "fuzzy")
_BY_NAME = {s.name: s for s in (BOOLEAN, MIN_PLUS, MAX_PLUS, VITERBI, FUZZY, NATURAL)}
SEMIRING_NAMES = ("boolean", "min-plus", "max-plus", "viterbi", "fuzzy", "powerset", "natural")


def get_semiring(name: str, universe: Iterable[str] | None = None) -> Semiring:
    """Look up a bundled semiring by its canonical name.

    Underscores are accepted in place of dashes.  ``powerset`` needs a
    universe.
    """
    key = name.strip().lower().replace("_", "-")
    if key == "powerset":
        if universe is None:
            raise SemiringError("powerset needs a universe")
        return powerset(universe)
    try:
        return _BY_NAME[key]
    except KeyError:
        raise SemiringError(f"unknown semiring {name!r}; expected one of "
                            + ", ".join(SEMIRING_NAMES)) from None


def random_value(s: Semiring, rng: random.Random, special: float = 0.1):
    """Draw a carrier value; constants and infinities come up now and then."""
    if rng.random() < special:
        return rng.choice([s.zero, s.one])
    if s.name == "boolean":
        return rng.random() < 0.5
    if s.name in ("min-plus", "max-plus"):
        return round(rng.uniform(0, 10), 3)
    if s.name in ("viterbi", "fuzzy"):
        return round(rng.random(), 3)
    if s.name == "natural":
        return rng.randrange(6)
    if s.name == "powerset":
        return frozenset(u for u in s.params if rng.random() < 0.5)
    if s.name == "free":
        return FreeValue.generator(rng.choice("pqr"))
    raise SemiringError(f"cannot sample values of {s.name}")


def default_samples(s: Semiring) -> list:
    if s.name == "boolean":
        return [False, True]
    if s.name == "min-plus":
        return [0.0, 1.0, 2.0, math.inf]
    if s.name == "max-plus":
        return [-math.inf, 0.0, 1.0, 2.5]
    if s.name in ("viterbi", "fuzzy"):
        return [0.0, 0.4, 0.7, 1.0]
    if s.name == "natural":
        return [0, 1, 2]
    if s.name == "powerset":
        u = list(s.params)
        return [frozenset(c) for r in range(len(u) + 1) for c in itertools.combinations(u, r)][:8]
    raise SemiringError(f"no default samples for {s.name}")


def format_value(s: Semiring, x) -> str:
    if s.name == "boolean":
        return "true" if x else "false"
    if s.name == "powerset":
        order = {u: i for i, u in enumerate(s.params)}
        return "{" + ",".join(sorted(x, key=order.get)) + "}"
    if isinstance(x, FreeValue):
        return format_free(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if x.is_integer() and abs(x) < 1e15:
            return str(int(x))
        return repr(x)
    return str(x)


# -- law checking -------------------------------------------------------------

@dataclass(frozen=True)
class LawResult:
    law: str
    passed: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class LawReport:
    semiring: str
    results: tuple[LawResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, law: str) -> LawResult:
        for r in self.results:
            if r.law == law:
                return r
        raise KeyError(law)


def _laws(s: Semiring):
    a, m, z, o, eq = s.add, s.mul, s.zero, s.one, s.eq
    return [
        ("add-associativity", 3, lambda x, y, w: eq(a(x, a(y, w)), a(a(x, y), w))),
        ("add-commutativity", 2, lambda x, y: eq(a(x, y), a(y, x))),
        ("mul-associativity", 3, lambda x, y, w: eq(m(x, m(y, w)), m(m(x, y), w))),
        ("mul-commutativity", 2, lambda x, y: eq(m(x, y), m(y, x))),
        ("left-distributivity", 3, lambda x, y, w: eq(m(x, a(y, w)), a(m(x, y), m(x, w)))),
        ("right-distributivity", 3, lambda x, y, w: eq(m(a(y, w), x), a(m(y, x), m(w, x)))),
        ("add-neutrality", 1, lambda x: eq(a(x, z), x) and eq(a(z, x), x)),
        ("mul-neutrality", 1, lambda x: eq(m(x, o), x) and eq(m(o, x), x)),
        ("zero-absorption", 1, lambda x: eq(m(x, z), z) and eq(m(z, x), z)),
        ("add-idempotence", 1, lambda x: eq(a(x, x), x)),
    ]


def check_laws(s: Semiring, samples: Sequence | None = None) -> LawReport:
    """Check every semiring axiom plus idempotence on all sample tuples.

    The check is exhaustive over ``samples``; on failure the first
    offending tuple is kept as the witness.
    """
    samples = list(default_samples(s) if samples is None else samples)
    if not samples:
        raise SemiringError("check_laws needs at least one sample")
    samples = [s.check(x) for x in samples]
    out = []
    for name, arity, law in _laws(s):
        witness = None
        for args in itertools.product(samples, repeat=arity):
            if not law(*args):
                witness = args
                break
        out.append(LawResult(name, witness is None, witness))
    return LawReport(s.name, tuple(out))


# -- the free commutative idempotent semiring ---------------------------------

Monomial = tuple  # sorted port names, repeated by multiplicity


@dataclass(frozen=True)
class FreeValue:
    """A finite set of monomials; each monomial a sorted multiset of ports.

    Sum is set union and product the pairwise multiset sum, so ``p*p``
    stays distinct from ``p`` while ``p+p`` collapses to ``p``.
    """

    monomials: frozenset = field(default_factory=frozenset)

    @staticmethod
    def generator(port: str) -> FreeValue:
        return FreeValue(frozenset({(port,)}))

    @staticmethod
    def of(*monomials: Iterable[str]) -> FreeValue:
        return FreeValue(frozenset(tuple(sorted(m)) for m in monomials))

    def __add__(self, other: FreeValue) -> FreeValue:
        return FreeValue(self.monomials | other.monomials)

    def __mul__(self, other: FreeValue) -> FreeValue:
        return FreeValue(frozenset(tuple(sorted(x + y))
                                   for x in self.monomials for y in other.monomials))

    def __bool__(self):
        return bool(self.monomials)

    def ports(self) -> set[str]:
        return {p for m in self.monomials for p in m}

    def sorted_monomials(self, order: Sequence[str] | None = None) -> list[Monomial]:
        rank = {p: i for i, p in enumerate(order or ())}
        key = lambda p: (rank.get(p, len(rank)), p)
        return sorted((tuple(sorted(m, key=key)) for m in self.monomials),
                      key=lambda m: (len(m), [key(p) for p in m]))

    def __repr__(self):
        return "FreeValue(" + format_free(self) + ")"


FREE_ZERO = FreeValue()
FREE_ONE = FreeValue(frozenset({()}))


def free_generator(p: str) -> FreeValue:
    return FreeValue.generator(p)


def free_add(x: FreeValue, y: FreeValue) -> FreeValue:
    return x + y


def free_mul(x: FreeValue, y: FreeValue) -> FreeValue:
    return x * y


FREE = Semiring("free", free_add, free_mul, FREE_ZERO, FREE_ONE)


def eval_free(v: FreeValue, s: Semiring, weights: Mapping[str, Any]):
    """Image of ``v`` under the homomorphism sending ``k_p`` to ``weights[p]``."""
    total = s.zero
    for mono in v.monomials:
        term = s.one
        for p in mono:
            try:
                w = weights[p]
            except KeyError:
                raise MissingWeightError(p) from None
            term = s.mul(term, w)
        total = s.add(total, term)
    return total


def format_free(v: FreeValue, order: Sequence[str] | None = None, ascii: bool = False) -> str:
    """Render in ``k_p`` notation, e.g. ``k_s ⊕ (k_s⊗k_r1)``.

    Monomials are listed by degree and then by port ``order``.
    """
    zero, one, plus, times = ("0", "1", " + ", "*") if ascii else ("0̂", "1̂", " ⊕ ", "⊗")
    monos = v.sorted_monomials(order)
    if not monos:
        return zero
    parts = []
    for m in monos:
        text = times.join("k_" + p for p in m) if m else one
        parts.append(f"({text})" if len(m) > 1 and len(monos) > 1 else text)
    return plus.join(parts)


_FREE_TOKEN = re.compile(r"\s*(?:(k_[A-Za-z_][\w\-]*)|(0̂|1̂|0|1)|([⊕+])|([⊗*])|([()]))")


def parse_free(text: str) -> FreeValue:
    """Parse ``k_p`` notation (``⊕``/``⊗`` or ``+``/``*``) into a FreeValue."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _FREE_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SemiringError(f"cannot parse free value at {text[pos:]!r}")
        pos = m.end()
        gen, const, plus, times, paren = m.groups()
        if gen:
            toks.append(("gen", gen[2:]))
        elif const:
            toks.append(("const", FREE_ONE if const[0] == "1" else FREE_ZERO))
        elif plus:
            toks.append(("+", None))
        elif times:
            toks.append(("*", None))
        elif paren:
            toks.append((paren, None))
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else None

    def atom():
        nonlocal i
        kind, val = toks[i] if i < len(toks) else (None, None)
        i += 1
        if kind == "gen":
            return FreeValue.generator(val)
        if kind == "const":
            return val
        if kind == "(":
            v = expr()
            if peek() != ")":
                raise SemiringError(f"unbalanced parentheses in {text!r}")
            i += 1
            return v
        raise SemiringError(f"unexpected token in {text!r}")

    def product():
        nonlocal i
        v = atom()
        while peek() == "*":
            i += 1
            v = v * atom()
        return v

    def expr():
        nonlocal i
        v = product()
        while peek() == "+":
            i += 1
            v = v + product()
        return v

    v = expr()
    if i != len(toks):
        raise SemiringError(f"trailing input in {text!r}")
    return v


# -- fingerprints -------------------------------------------------------------

_MOD = (1 << 61) - 1


def fingerprint_semiring() -> Semiring:
    """Sets of residues under union and Minkowski sum mod a large prime.

    With random generator images this is a hashed copy of the free
    semiring: distinct free values collide only with negligible
    probability, and ints are much cheaper than monomial tuples.
    """
    return Semiring(
        "fingerprint",
        frozenset.union,
        lambda x, y: frozenset((a + b) % _MOD for a in x for b in y),
        frozenset(), frozenset({0}))


FINGERPRINT = fingerprint_semiring()


def fingerprint_weights(ports: Iterable[str], seed: int = 0) -> dict[str, frozenset]:
    return {p: _fingerprint_image(p, seed) for p in ports}


@lru_cache(maxsize=None)
def _fingerprint_image(port: str, seed: int) -> frozenset:
    # seeded per port, so a port keeps its image whatever else is present
    return frozenset({random.Random(f"{seed}:{port}").randrange(1, _MOD)})
