import math
import random

import pytest

from wconn.semiring import (BOOLEAN, FREE, FREE_ONE, FREE_ZERO, FUZZY, MAX_PLUS, MIN_PLUS,
                            NATURAL, VITERBI, FreeValue, MissingWeightError, NotIdempotentError,
                            SemiringError, check_laws, default_samples, eval_free, format_free,
                            free_add, free_generator, free_mul, get_semiring, parse_free, powerset,
                            random_value, sr_add, sr_mul)

IDEMPOTENT = [BOOLEAN, MIN_PLUS, MAX_PLUS, VITERBI, FUZZY, powerset("abc")]


def test_min_plus_examples():
    assert sr_add(MIN_PLUS, 2, 3) == 2
    assert sr_mul(MIN_PLUS, 2, 3) == 5
    assert sr_mul(MIN_PLUS, 2, math.inf) == math.inf


def test_fuzzy_pairwise_table():
    vals = [0, 0.4, 0.7, 1]
    for x in vals:
        for y in vals:
            assert sr_add(FUZZY, x, y) == max(x, y)
            assert sr_mul(FUZZY, x, y) == min(x, y)
    assert sr_add(FUZZY, 0.4, 0.7) == 0.7
    assert sr_mul(FUZZY, 0.4, 0.7) == 0.4


def test_min_plus_mul_table():
    vals = [0, 1, 2, 3, math.inf]
    for x in vals:
        for y in vals:
            assert sr_mul(MIN_PLUS, x, y) == x + y


@pytest.mark.parametrize("s", IDEMPOTENT, ids=lambda s: s.name)
def test_neutral_and_absorbing(s):
    rng = random.Random(3)
    for _ in range(20):
        k = random_value(s, rng)
        assert s.eq(sr_add(s, s.zero, k), k)
        assert s.eq(sr_mul(s, s.one, k), k)
        assert s.eq(sr_mul(s, s.zero, k), s.zero)


@pytest.mark.parametrize("s", IDEMPOTENT, ids=lambda s: s.name)
def test_laws_hold_on_default_samples(s):
    report = check_laws(s)
    assert report.ok, report.failed()


def test_laws_min_plus_sample():
    assert check_laws(MIN_PLUS, [0, 1, 2, math.inf]).ok


def test_laws_boolean_sample():
    assert check_laws(BOOLEAN, [False, True]).ok


def test_natural_fails_idempotence_with_witness():
    report = check_laws(NATURAL, [0, 1, 2])
    assert not report.ok
    assert [r.law for r in report.failed()] == ["add-idempotence"]
    assert report["add-idempotence"].witness == (1,)


def test_natural_rejected_by_require_idempotent():
    with pytest.raises(NotIdempotentError):
        NATURAL.require_idempotent()


@pytest.mark.parametrize("bad", [(MIN_PLUS, -1), (VITERBI, 1.5), (FUZZY, -0.1),
                                 (BOOLEAN, 2), (MAX_PLUS, -3)])
def test_domain_violations(bad):
    s, x = bad
    with pytest.raises(SemiringError):
        sr_add(s, x, s.zero)


def test_powerset_carrier():
    s = powerset({"a", "b"})
    assert sr_add(s, frozenset("a"), frozenset("b")) == frozenset("ab")
    assert sr_mul(s, frozenset("ab"), frozenset("b")) == frozenset("b")
    with pytest.raises(SemiringError):
        sr_add(s, frozenset("z"), s.zero)


def test_get_semiring_names():
    assert get_semiring("min_plus") is MIN_PLUS
    assert get_semiring("max-plus") is MAX_PLUS
    assert get_semiring("powerset", ["x", "y"]).params == ("x", "y")
    with pytest.raises(SemiringError):
        get_semiring("tropical")


def test_free_examples():
    p, q = free_generator("p"), free_generator("q")
    assert free_add(p, p) == p
    assert free_mul(p, q) == FreeValue.of(("p", "q"))
    assert free_mul(p, free_add(FREE_ONE, q)) == FreeValue.of(("p",), ("p", "q"))


def test_free_distributivity_cross_checked_in_min_plus():
    p, q = free_generator("p"), free_generator("q")
    lhs = free_mul(p, free_add(FREE_ONE, q))
    rng = random.Random(10)
    for _ in range(10):
        w = {"p": rng.uniform(0, 10), "q": rng.uniform(0, 10)}
        direct = sr_mul(MIN_PLUS, w["p"], sr_add(MIN_PLUS, MIN_PLUS.one, w["q"]))
        assert math.isclose(eval_free(lhs, MIN_PLUS, w), direct)


def test_eval_free_examples():
    v = FreeValue.of(("p",), ("p", "q"))
    assert eval_free(v, MIN_PLUS, {"p": 2, "q": 3}) == 2
    for s in IDEMPOTENT:
        assert eval_free(FREE_ZERO, s, {}) == s.zero
        assert eval_free(FREE_ONE, s, {}) == s.one


def test_eval_free_missing_weight_names_port():
    with pytest.raises(MissingWeightError, match="q"):
        eval_free(FreeValue.of(("q",)), MIN_PLUS, {"p": 1})


def test_multiset_multiplicity_kept():
    p = free_generator("p")
    assert free_mul(p, p) == FreeValue.of(("p", "p"))
    assert free_mul(p, p) != p
    assert eval_free(free_mul(p, p), MIN_PLUS, {"p": 2}) == 4


def _random_free(rng, gens=("p", "q", "r")):
    mons = set()
    for _ in range(rng.randint(0, 3)):
        mons.add(tuple(sorted(rng.choice(gens) for _ in range(rng.randint(0, 3)))))
    return FreeValue(frozenset(mons))


@pytest.mark.parametrize("s", IDEMPOTENT, ids=lambda s: s.name)
def test_eval_free_is_a_homomorphism(s):
    rng = random.Random(42)
    for _ in range(100):
        u, v = _random_free(rng), _random_free(rng)
        w = {g: random_value(s, rng) for g in "pqr"}
        assert s.eq(eval_free(free_add(u, v), s, w), s.add(eval_free(u, s, w), eval_free(v, s, w)))
        assert s.eq(eval_free(free_mul(u, v), s, w), s.mul(eval_free(u, s, w), eval_free(v, s, w)))


def test_free_semiring_laws():
    rng = random.Random(5)
    assert check_laws(FREE, [_random_free(rng) for _ in range(6)] + [FREE_ZERO, FREE_ONE]).ok


def test_format_and_parse_free_round_trip():
    v = FreeValue.of(("s",), ("r1", "s"))
    text = format_free(v, ("s", "r1", "r2"))
    assert text == "k_s ⊕ (k_s⊗k_r1)"
    assert parse_free(text) == v
    assert parse_free("0̂⊕k_r1") == free_generator("r1")
    assert parse_free("1̂⊕0̂") == FREE_ONE
    assert format_free(FREE_ZERO) == "0̂"
    rng = random.Random(8)
    for _ in range(200):
        u = _random_free(rng)
        assert parse_free(format_free(u)) == u
        assert parse_free(format_free(u, ascii=True)) == u


def test_default_samples_are_in_carrier():
    for s in IDEMPOTENT:
        for x in default_samples(s):
            s.check(x)
