"""The eight acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the pytest summary
(and directly when this file is run as a script).
"""
import io
import json
import math
import random
from contextlib import redirect_stdout
from pathlib import Path

from wconn.algebra import ONE, ZERO, PortSet, Union, eval_via_polynomial, evaluate, normalize, \
    sync_all, term_size, wai_equiv
from wconn.cli import main as cli_main
from wconn.connectors import (Fusion, Typed, UnionC, congruence_oracle, congruence_report, congruent,
                              degree, fuse, is_wat, syn, translate, trig, wac_equiv)
from wconn.dsl import parse, parse_wac, parse_wai, pretty_wac, pretty_wai
from wconn.generate import (congruent_variant, random_connector, random_gamma, random_monomial,
                            random_wai, retype_all, retype_top)
from wconn.schemes import SCHEMES, canonical_gamma, scheme
from wconn.semiring import (BOOLEAN, FREE, FUZZY, MAX_PLUS, MIN_PLUS, VITERBI, eval_free,
                            format_value, get_semiring, parse_free, random_value)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = {}

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden" / "tables"
MODELS = ROOT / "demos" / "models"
TOL = 1e-9
RS = ["r1", "r2"]
P3 = PortSet(("s", "r1", "r2"))
CLOSED_FORMS = {
    "rendezvous": "k_s⊗k_r1⊗k_r2",
    "broadcast": "k_s⊕(k_s⊗k_r1)⊕(k_s⊗k_r2)⊕(k_s⊗k_r1⊗k_r2)",
    "atomic-broadcast": "k_s⊕(k_s⊗k_r1⊗k_r2)",
    "causality-chain": "k_s⊕(k_s⊗k_r1)⊕(k_s⊗k_r1⊗k_r2)",
}


def report(n, title, failures, detail=""):
    line = f"criterion {n}: {'PASS' if not failures else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    if failures:
        line += f"  first failure: {failures[0]}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert not failures, line


def close(s, x, y):
    if isinstance(x, float) or isinstance(y, float):
        return math.isclose(x, y, rel_tol=TOL, abs_tol=TOL)
    return x == y


def test_1_scheme_closed_forms():
    failures, checks = [], 0
    rng = random.Random(1)
    for kind in SCHEMES:
        poly = normalize(translate(scheme(kind, "s", RS)), P3)
        g = canonical_gamma(kind, "s", RS)
        form = parse_free(CLOSED_FORMS[kind])
        gens = {p: parse_free(f"k_{p}") for p in P3.ports}
        if eval_via_polynomial(poly, g, FREE, gens) != form:
            failures.append((kind, "free"))
        checks += 1
        for s in (MIN_PLUS, MAX_PLUS, VITERBI, FUZZY, BOOLEAN):
            for _ in range(20):
                w = {p: random_value(s, rng) for p in P3.ports}
                got, want = eval_via_polynomial(poly, g, s, w), eval_free(form, s, w)
                checks += 1
                if not close(s, got, want):
                    failures.append((kind, s.name, w, got, want))
    report(1, "scheme closed forms", failures, f"{checks} checks")


def _cli_json(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main([str(a) for a in argv] + ["--json"])
    assert code == 0
    return json.loads(buf.getvalue())["result"]


def test_2_golden_tables():
    cases = [("rendezvous", "{s,r1,r2}", "re1"), ("broadcast", "{s}", "bra"),
             ("atomic-broadcast", "{s,r1,r2}", "atb"), ("causality-chain", "{s,r1}", "caub")]
    failures, rows = [], 0
    for name, a, label in cases:
        got = _cli_json("table", MODELS / f"{name}.wconn", "z", a)
        want = json.loads((GOLDEN / f"{label}.json").read_text(encoding="utf-8"))
        if len(got["rows"]) != len(want["rows"]):
            failures.append((label, "row count", len(got["rows"]), len(want["rows"])))
            continue
        for g, w in zip(got["rows"], want["rows"]):
            rows += 1
            if (set(g["a1"]), set(g["a2"])) != (set(w["a1"]), set(w["a2"])):
                failures.append((label, "cover order", g["a1"], g["a2"]))
            elif any(parse_free(g[k]) != parse_free(w[k]) for k in ("left", "right", "product")):
                failures.append((label, g, w))
        if parse_free(got["total"]) != parse_free(want["total"]):
            failures.append((label, "total", got["total"], want["total"]))
    report(2, "golden table reproduction", failures, f"{rows} rows in 4 tables")


def test_3_singleton_fold():
    rng = random.Random(3)
    failures, n = [], 0
    names = ["a", "b", "c", "d"]
    while n < 500:
        ps = names[:rng.randint(1, 4)]
        z = random_wai(rng, ps)
        if term_size(z) > 20:
            continue
        n += 1
        g = random_gamma(rng, ps)
        P = PortSet(tuple(ps))
        for s in (MIN_PLUS, VITERBI):
            w = {p: random_value(s, rng) for p in ps}
            direct = evaluate(z, g, P, s, w)
            fold = s.sum(evaluate(z, [a], P, s, w) for a in g)
            if not s.eq(direct, fold):
                failures.append((pretty_wai(z), g, s.name, direct, fold))
    report(3, "singleton fold", failures, "500 pairs x 2 semirings")


LAWS = [
    lambda a, b, c: ((a + b) + c, a + (b + c)),
    lambda a, b, c: (a + b, b + a),
    lambda a, b, c: (a + a, a),
    lambda a, b, c: (a + ZERO, a),
    lambda a, b, c: ((a * b) * c, a * (b * c)),
    lambda a, b, c: (a * b, b * a),
    lambda a, b, c: (a * ONE, a),
    lambda a, b, c: (a * ZERO, ZERO),
    lambda a, b, c: (a * (b + c), a * b + a * c),
    lambda a, b, c: ((a + b) * c, a * c + b * c),
]


def test_4_wai_laws():
    rng = random.Random(4)
    ps = ["a", "b", "c", "d"]
    failures = []
    for _ in range(200):
        triple = [random_wai(rng, ps, 3) for _ in range(3)]
        for i, law in enumerate(LAWS):
            lhs, rhs = law(*triple)
            if not wai_equiv(lhs, rhs, ps):
                failures.append((i, [pretty_wai(t) for t in triple]))
    report(4, "ten semiring laws of interaction terms", failures, "200 triples")


def test_5_translation_identities():
    cases = [("[s] * [r1] * [r2]", "s * r1 * r2"),
             ("[s]' * [r1] * [r2]", "s * (1 + r1) * (1 + r2)"),
             ("[s]' * [[r1]' * [r2]]", "s * (1 + r1 * (1 + r2))")]
    failures = [(c, w) for c, w in cases if not wai_equiv(translate(parse_wac(c)), parse_wai(w))]
    report(5, "translation identities", failures, "3 connectors")


def _equivalent_pair(rng, ps):
    z1 = random_connector(rng, ps, 2)
    k = rng.randrange(3)
    if k == 0:
        return z1, congruent_variant(rng, z1)
    if k == 1:
        return z1, UnionC(z1, z1)
    # retyping the top operands keeps equivalence when it happens to
    for _ in range(10):
        z2 = retype_top(rng, z1)
        if wac_equiv(z1, z2):
            return z1, z2
    return z1, congruent_variant(rng, z1)


def _positive(rng, ps):
    while True:
        z = random_connector(rng, ps, 2)
        if degree(z).strictly_positive:
            return z


def _props(rng, ps):
    """Name -> (ok, instance) generators for the seven propositions."""
    def assoc():
        a, b, c = (random_connector(rng, ps, 2) for _ in range(3))
        ok = wac_equiv(Fusion((syn(Fusion((syn(a), syn(b)))), syn(c))),
                       Fusion((syn(a), syn(Fusion((syn(b), syn(c)))))))
        ok &= wac_equiv(Fusion((trig(Fusion((trig(a), trig(b)))), trig(c))),
                        Fusion((trig(a), trig(Fusion((trig(b), trig(c)))))))
        return ok, (a, b, c)

    def propos3():
        z, y = random_connector(rng, ps, 2), random_connector(rng, ps, 2)
        a, b = rng.random() < 0.5, rng.random() < 0.5
        x1, x2 = Typed(a, z), Typed(b, y)
        ok = wac_equiv(Typed(b, Typed(a, z)), Typed(b, z))
        ok &= wac_equiv(Typed(a, UnionC(z, y)), UnionC(Typed(a, z), Typed(a, y)))
        ok &= wac_equiv(Fusion((x1, x2)), Fusion((x2, x1)))
        ok &= wac_equiv(UnionC(x1, x2), UnionC(x2, x1))
        return ok, (z, y)

    def induct():
        fs = tuple(Typed(rng.random() < 0.5, random_connector(rng, ps, 2))
                   for _ in range(rng.randint(1, 4)))
        bound = sync_all([Union(ONE, translate(f.body)) for f in fs])
        return wai_equiv(Union(translate(Fusion(fs)), bound), bound), fs

    def one_neutral():
        x = Typed(rng.random() < 0.5, random_connector(rng, ps, 2))
        ok = wac_equiv(Fusion((x, syn(ONE))), x) and wac_equiv(Fusion((syn(ONE), x)), x)
        return ok, x

    def zero_trigger_neutral():
        z = retype_all(random_connector(rng, ps, 2), True)
        return is_wat(z) and congruent(fuse(z, trig(trig(ZERO))), z), z

    def new_neutral():
        z = _positive(rng, ps)
        return congruent(fuse(z, trig(trig(ZERO))), z), z

    def ext():
        a, b, c = (random_connector(rng, ps, 2) for _ in range(3))
        ok = congruent(Fusion((trig(a), syn(b), syn(c))), Fusion((trig(a), syn(Fusion((trig(b), trig(c)))))))
        ok &= congruent(Fusion((trig(a), trig(b))), trig(Fusion((trig(a), trig(b)))))
        return ok, (a, b, c)

    return {"assoc": assoc, "propos3": propos3, "induct": induct, "[1]-neutrality": one_neutral,
            "[0']'-neutrality": zero_trigger_neutral, "new_neutral": new_neutral, "ext": ext}


def test_6_congruence_theory():
    rng = random.Random(6)
    ps = ["a", "b", "c"]
    failures = []

    # bracketing turns equivalence into congruence
    for i in range(200):
        z1, z2 = _equivalent_pair(rng, ps)
        a = i % 2 == 1
        if not (wac_equiv(z1, z2) and congruent(Typed(a, z1), Typed(a, z2))):
            failures.append(("bracketing", pretty_wac(z1), pretty_wac(z2), a))

    # the three-condition decision against the sampling oracle
    pairs = [(trig("p"), syn("p"))]
    while len(pairs) < 200:
        z1 = random_monomial(rng, ["p", "q"], 2)
        k = len(pairs) % 3
        z2 = (congruent_variant(rng, z1) if k == 0 else retype_top(rng, z1) if k == 1
              else random_monomial(rng, ["p", "q"], 2))
        pairs.append((z1, z2))
    yes = confirmed = unconfirmed = 0
    for z1, z2 in pairs:
        rep = congruence_report(z1, z2)
        found = congruence_oracle(z1, z2, depth=3, n=500, seed=2026).found
        if rep.congruent:
            yes += 1
            if found:
                failures.append(("oracle", pretty_wac(z1), pretty_wac(z2)))
        elif found:
            confirmed += 1
        elif rep.failed():
            unconfirmed += 1
    if congruence_report(*pairs[0]).congruent or not congruence_oracle(*pairs[0], n=500, seed=2026).found:
        failures.append(("([p]', [p]) not separated",))

    # propositions
    for name, gen in _props(rng, ps).items():
        for _ in range(100):
            ok, inst = gen()
            if not ok:
                failures.append((name, inst))
                break
    detail = (f"200 bracketing pairs; oracle on 200 pairs: {yes} congruent, {confirmed} separated, "
              f"{unconfirmed} rejected by a failed condition only; 7 propositions x 100")
    report(6, "congruence theory", failures, detail)


def test_7_non_associativity():
    terms = ["[[p]' * [q]'] * [r]", "[p]' * [q]' * [r]", "[p]' * [[q]' * [r]]"]
    zs = [parse_wac(t) for t in terms]
    failures = [(terms[i], terms[j]) for i in range(3) for j in range(i + 1, 3) if wac_equiv(zs[i], zs[j])]
    report(7, "non-associativity of mixed fusion", failures, "3 bracketings pairwise")


def test_8_round_trip_and_models():
    rng = random.Random(8)
    failures = []
    for i in range(1000):
        if i % 2:
            z = random_wai(rng, ["a", "b", "c", "d"], 5)
            back = parse_wai(pretty_wai(z))
        else:
            z = random_connector(rng, ["a", "b", "c", "d"], 3)
            back = parse_wac(pretty_wac(z))
        if back != z:
            failures.append(z)
    for kind in SCHEMES:
        path = MODELS / f"{kind}.wconn"
        m = parse(path.read_text(encoding="utf-8"))
        s = get_semiring(m.semiring_name, m.universe)
        want = format_value(s, eval_free(parse_free(CLOSED_FORMS[kind]), s, m.ports.weights))
        got = _cli_json("run", path)[0]["result"]
        if got != want:
            failures.append((kind, got, want))
    report(8, "parser round trip and scheme model files", failures, "1000 terms, 4 files")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
