"""Seeded random terms, interaction sets and equivalence-preserving rewrites.

Used by the property tests and the congruence oracle.  Everything takes an
explicit :class:`random.Random` so failures replay from a seed.
"""
from __future__ import annotations

import random
from typing import Sequence

from .algebra import ONE, ZERO, Port, Sync, Union, WaiTerm
from .connectors import Fusion, Typed, UnionC, WacTerm


def random_wai(rng: random.Random, ports: Sequence[str], depth: int = 4) -> WaiTerm:
    """A random interaction term of at most ``depth`` levels."""
    if depth <= 0 or rng.random() < 0.25:
        x = rng.random()
        if x < 0.1:
            return ZERO
        if x < 0.25:
            return ONE
        return Port(rng.choice(ports))
    op = Union if rng.random() < 0.5 else Sync
    return op(random_wai(rng, ports, depth - 1), random_wai(rng, ports, depth - 1))


def random_gamma(rng: random.Random, ports: Sequence[str], max_size: int = 4) -> frozenset:
    """A random interaction set; may be empty or contain the empty interaction."""
    out = set()
    for _ in range(rng.randint(0, max_size)):
        out.add(frozenset(p for p in ports if rng.random() < 0.5))
    return frozenset(out)


def _atom(rng, ports):
    x = rng.random()
    if x < 0.08:
        return ZERO
    if x < 0.2:
        return ONE
    return Port(rng.choice(ports))


def random_typed(rng: random.Random, ports: Sequence[str], depth: int = 2) -> Typed:
    body = _atom(rng, ports) if depth <= 0 or rng.random() < 0.55 else random_connector(rng, ports, depth - 1)
    return Typed(rng.random() < 0.5, body)


def random_connector(rng: random.Random, ports: Sequence[str], depth: int = 2,
                     atoms_only: bool = False, unions: bool = True) -> WacTerm:
    """A random connector of at most ``depth`` bracket levels.

    With ``unions=False`` the top level is a typed operand or a fusion.
    """
    if atoms_only or depth <= 0:
        return Typed(rng.random() < 0.5, _atom(rng, ports))
    x = rng.random()
    if x < 0.25:
        return random_typed(rng, ports, depth)
    if x < 0.8 or not unions:
        return Fusion(tuple(random_typed(rng, ports, depth - 1) for _ in range(rng.randint(2, 3))))
    return UnionC(random_connector(rng, ports, depth - 1), random_connector(rng, ports, depth - 1))


def random_monomial(rng: random.Random, ports: Sequence[str], depth: int = 2) -> WacTerm:
    """A connector whose top level is a typed operand or a fusion."""
    return random_connector(rng, ports, depth, unions=False)


# -- rewrites --------------------------------------------------------------------

def _rewrite_body(rng, body):
    if isinstance(body, (Typed, UnionC, Fusion)):
        return congruent_variant(rng, body)
    return body


def congruent_variant(rng: random.Random, z: WacTerm, steps: int = 2) -> WacTerm:
    """Apply sound rewrites that keep the connector congruent.

    The rewrites are commutativity of fusion and union, idempotence of union
    under a bracket, collapsing or adding a redundant bracket level under
    another bracket, and fusing in a synchron ``[1]``.
    """
    for _ in range(steps):
        z = _one_rewrite(rng, z)
    return z


def _one_rewrite(rng, z):
    if isinstance(z, UnionC):
        if rng.random() < 0.3:
            return UnionC(z.right, z.left)
        return UnionC(_one_rewrite(rng, z.left), _one_rewrite(rng, z.right))
    if isinstance(z, Typed):
        x = rng.random()
        body = z.body
        if isinstance(body, Typed) and x < 0.3:
            return Typed(z.trigger, body.body)  # [[x]^b]^a -> [x]^a
        if x < 0.45:
            return Typed(z.trigger, Typed(rng.random() < 0.5, body))
        if x < 0.6 and not isinstance(body, Typed):
            return Typed(z.trigger, UnionC(body, body) if isinstance(body, WacTerm) else body)
        return Typed(z.trigger, _rewrite_body(rng, body))
    if isinstance(z, Fusion):
        fs = list(z.factors)
        x = rng.random()
        if x < 0.35:
            rng.shuffle(fs)
        elif x < 0.5:
            fs.insert(rng.randint(0, len(fs)), Typed(False, ONE))
        else:
            i = rng.randrange(len(fs))
            fs[i] = _one_rewrite(rng, fs[i])
        return Fusion(tuple(fs))
    return z


def retype_top(rng: random.Random, z: WacTerm) -> WacTerm:
    """Flip the type of one top-level operand; equivalence may survive, congruence often not."""
    if isinstance(z, Typed):
        return Typed(not z.trigger, z.body)
    if isinstance(z, Fusion):
        fs = list(z.factors)
        i = rng.randrange(len(fs))
        fs[i] = Typed(not fs[i].trigger, fs[i].body)
        return Fusion(tuple(fs))
    if isinstance(z, UnionC):
        return UnionC(retype_top(rng, z.left), z.right)
    return z


def retype_all(z: WacTerm, trigger: bool) -> WacTerm:
    """Give every typing bracket in ``z`` the same type."""
    if isinstance(z, Typed):
        body = retype_all(z.body, trigger) if isinstance(z.body, WacTerm) else z.body
        return Typed(trigger, body)
    if isinstance(z, UnionC):
        return UnionC(retype_all(z.left, trigger), retype_all(z.right, trigger))
    if isinstance(z, Fusion):
        return Fusion(tuple(retype_all(f, trigger) for f in z.factors))
    return z
