"""The four sender/receiver schemes: connector, interaction term, weights.

For each scheme we print the connector, its translation, the symbolic
weight on the scheme's interaction set, and that weight in three concrete
semirings with the same port weights.
"""
from wconn.algebra import PortSet, evaluate, normalize
from wconn.connectors import translate
from wconn.dsl import pretty_gamma, pretty_wac, pretty_wai
from wconn.schemes import SCHEMES, canonical_gamma, scheme
from wconn.semiring import FREE, MAX_PLUS, MIN_PLUS, VITERBI, format_free, format_value

P = PortSet(("s", "r1", "r2"))
numeric = {MIN_PLUS: {"s": 2, "r1": 3, "r2": 5},
           MAX_PLUS: {"s": 2, "r1": 3, "r2": 5},
           VITERBI: {"s": 0.5, "r1": 0.8, "r2": 0.5}}

for kind in SCHEMES:
    c = scheme(kind, "s", ["r1", "r2"])
    z = translate(c)
    g = canonical_gamma(kind, "s", ["r1", "r2"])
    poly = normalize(z, P)
    total = FREE.sum(poly[a] for a in g)
    print(kind)
    print("  connector   ", pretty_wac(c))
    print("  translation ", pretty_wai(z))
    print("  gamma       ", pretty_gamma(g, P.ports))
    print("  weight      ", format_free(total, P.ports))
    for s, w in numeric.items():
        print(f"  {s.name:11}  {format_value(s, evaluate(z, g, P, s, w))}")
    print()
