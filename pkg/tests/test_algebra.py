import random

import pytest

from wconn.algebra import (ONE, ZERO, AlgebraError, Port, PortSet, PortSetTooLarge, Sync,
                           Union, UnknownPortError, covers, eval_via_polynomial, evaluate, gamma,
                           interaction, normalize, wai_equiv)
from wconn.generate import random_gamma, random_wai
from wconn.semiring import (BOOLEAN, FUZZY, MAX_PLUS, MIN_PLUS, NATURAL, VITERBI, FreeValue,
                            NotIdempotentError, free_generator, powerset, random_value)

s, r1, r2 = Port("s"), Port("r1"), Port("r2")
P3 = PortSet(("s", "r1", "r2"), {"s": 2, "r1": 3, "r2": 5})
SEMIRINGS = [BOOLEAN, MIN_PLUS, MAX_PLUS, VITERBI, FUZZY, powerset("xyz")]


def test_portset_rejects_reserved_and_duplicates():
    for bad in (("0",), ("p", "1"), ("p", "p"), ("",)):
        with pytest.raises(AlgebraError):
            PortSet(bad)


def test_covers_small():
    assert covers(()) == [(frozenset(), frozenset())]
    assert covers({"s"}) == [(frozenset(), frozenset({"s"})), (frozenset({"s"}), frozenset()),
                             (frozenset({"s"}), frozenset({"s"}))]


@pytest.mark.parametrize("n", range(5))
def test_covers_count_and_union(n):
    a = frozenset(f"p{i}" for i in range(n))
    cs = covers(a)
    assert len(cs) == 3 ** n
    assert len(set(cs)) == len(cs)
    assert all(a1 | a2 == a for a1, a2 in cs)


def test_eval_rendezvous_min_plus():
    assert evaluate(s * r1 * r2, gamma({"s", "r1", "r2"}), P3, MIN_PLUS) == 10


def test_eval_broadcast_max_plus():
    z = s * (ONE + r1) * (ONE + r2)
    g = gamma({"s"}, {"s", "r1"}, {"s", "r2"}, {"s", "r1", "r2"})
    assert evaluate(z, g, P3, MAX_PLUS) == 10


def test_eval_constants():
    for sr in SEMIRINGS:
        w = {p: random_value(sr, random.Random(0)) for p in P3.ports}
        assert evaluate(ONE, gamma(()), P3, sr, w) == sr.one
        assert evaluate(ONE, gamma({"s"}), P3, sr, w) == sr.zero
        assert evaluate(ZERO, gamma((), {"s"}), P3, sr, w) == sr.zero
        assert evaluate(s, gamma({"s", "r1"}), P3, sr, w) == w["s"]
        assert evaluate(s, gamma({"r1"}), P3, sr, w) == sr.zero


def test_eval_empty_gamma_is_zero():
    rng = random.Random(1)
    for _ in range(50):
        z = random_wai(rng, ["s", "r1", "r2"])
        assert evaluate(z, frozenset(), P3, MIN_PLUS) == MIN_PLUS.zero


def test_eval_rejects_unknown_port_and_natural():
    with pytest.raises(UnknownPortError):
        evaluate(Port("x"), gamma({"s"}), P3, MIN_PLUS)
    with pytest.raises(UnknownPortError):
        evaluate(s, gamma({"x"}), P3, MIN_PLUS)
    with pytest.raises(NotIdempotentError):
        evaluate(s, gamma({"s"}), P3, NATURAL)


@pytest.mark.parametrize("sr", [MIN_PLUS, VITERBI, BOOLEAN], ids=lambda x: x.name)
def test_singleton_fold(sr):
    rng = random.Random(11)
    names = ["a", "b", "c", "d"]
    for _ in range(200):
        ps = names[:rng.randint(1, 4)]
        P = PortSet(tuple(ps))
        w = {p: random_value(sr, rng) for p in ps}
        z = random_wai(rng, ps)
        g = random_gamma(rng, ps)
        direct = evaluate(z, g, P, sr, w)
        fold = sr.sum(evaluate(z, [a], P, sr, w) for a in g)
        assert sr.eq(direct, fold)
        assert sr.eq(direct, eval_via_polynomial(normalize(z, P), g, sr, w))


def test_normalize_examples():
    poly = normalize(s * r1 * r2, P3)
    assert poly[{"s", "r1", "r2"}] == FreeValue.of(("r1", "r2", "s"))
    assert normalize(ZERO, P3).is_zero()
    assert normalize(s * (ONE + r1 * r2), P3)[{"s"}] == free_generator("s")


def test_normalize_size_cap():
    big = PortSet(tuple(f"p{i}" for i in range(13)))
    with pytest.raises(PortSetTooLarge):
        normalize(Port("p0"), big)


def test_eval_via_polynomial_edges():
    poly = normalize(s * (ONE + r1), P3)
    assert eval_via_polynomial(poly, frozenset(), MIN_PLUS, P3.weights) == MIN_PLUS.zero
    assert eval_via_polynomial(poly, gamma({"s", "r1"}), MIN_PLUS, P3.weights) == 2


def test_equiv_examples():
    p, q = Port("p"), Port("q")
    assert wai_equiv(p + p, p)
    assert not wai_equiv(p * (ONE + q), p * q)
    # the witness of the difference: weight at {p}
    P = PortSet(("p", "q"), {"p": 1, "q": 1})
    assert evaluate(p * (ONE + q), gamma({"p"}), P, MIN_PLUS) == 1
    assert evaluate(p * q, gamma({"p"}), P, MIN_PLUS) == MIN_PLUS.zero


def test_z_times_one():
    rng = random.Random(4)
    for _ in range(50):
        z = random_wai(rng, ["a", "b", "c"])
        assert wai_equiv(z * ONE, z)


def test_concrete_coarser_than_universal():
    p, q = Port("p"), Port("q")
    # p ⊗ p and p differ symbolically but agree in the boolean semiring
    assert not wai_equiv(p * p, p)
    assert wai_equiv(p * p, p, mode="concrete", s=BOOLEAN, weights={"p": True})
    assert not wai_equiv(p * p, p, mode="concrete", s=MIN_PLUS, weights={"p": 2})
    assert wai_equiv(p + q, q + p, mode="concrete", s=MIN_PLUS, weights={"p": 1, "q": 2})


def test_universal_implies_concrete():
    rng = random.Random(9)
    ps = ["a", "b", "c"]
    for _ in range(100):
        z1 = random_wai(rng, ps)
        z2 = Union(z1, ZERO) if rng.random() < 0.5 else random_wai(rng, ps)
        if wai_equiv(z1, z2, ps):
            w = {p: random_value(MIN_PLUS, rng) for p in ps}
            assert wai_equiv(z1, z2, ps, mode="concrete", s=MIN_PLUS, weights=w)


LAWS = {
    "add-assoc": lambda a, b, c: ((a + b) + c, a + (b + c)),
    "add-comm": lambda a, b, c: (a + b, b + a),
    "add-idem": lambda a, b, c: (a + a, a),
    "add-zero": lambda a, b, c: (a + ZERO, a),
    "mul-assoc": lambda a, b, c: ((a * b) * c, a * (b * c)),
    "mul-comm": lambda a, b, c: (a * b, b * a),
    "mul-one": lambda a, b, c: (a * ONE, a),
    "mul-zero": lambda a, b, c: (a * ZERO, ZERO),
    "left-dist": lambda a, b, c: (a * (b + c), a * b + a * c),
    "right-dist": lambda a, b, c: ((a + b) * c, a * c + b * c),
}


@pytest.mark.parametrize("law", LAWS)
def test_wai_laws(law):
    rng = random.Random(list(LAWS).index(law))
    ps = ["a", "b", "c", "d"]
    for _ in range(50):
        lhs, rhs = LAWS[law](*(random_wai(rng, ps, 3) for _ in range(3)))
        assert wai_equiv(lhs, rhs, ps)


def test_non_laws_are_detected():
    a, b = Port("a"), Port("b")
    assert not wai_equiv(a * a, a)
    assert not wai_equiv(a + ONE, a)
    assert not wai_equiv(a * (a + b), a)


def test_terms_structural():
    assert isinstance(s * r1, Sync) and isinstance(s + r1, Union)
    assert interaction("s", "r1") == frozenset({"s", "r1"})
    assert hash(s * (r1 + r2)) == hash(Sync(s, Union(r1, r2)))
