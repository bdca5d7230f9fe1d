"""Equivalence is not congruence.

``[p]'`` and ``[p]`` denote the same interaction term, yet a context such
as ``r * [q]`` tells them apart because one of them can trigger and the
other cannot.  The three-condition check sees this through the degree
test, and the sampling oracle finds a concrete context.
"""
from wconn.connectors import (congruence_oracle, congruence_report, substitute, syn, translate,
                              trig, wac_equiv)
from wconn.dsl import parse_wac, pretty_wac, pretty_wai


def show(a, b):
    z1, z2 = parse_wac(a), parse_wac(b)
    rep = congruence_report(z1, z2)
    print(f"{a}  vs  {b}")
    print("  equivalent:", wac_equiv(z1, z2))
    print("  congruent: ", rep.congruent, rep.failed() or "")
    oracle = congruence_oracle(z1, z2, n=500, seed=0)
    if oracle.found:
        e = oracle.counterexample
        print("  context:   ", pretty_wac(e))
        print("    gives    ", pretty_wai(translate(oracle.lhs)))
        print("    and      ", pretty_wai(translate(oracle.rhs)))
    else:
        print(f"  no separating context among {oracle.checked}")
    print()


show("[p]'", "[p]")
show("[p]' * [q]'", "[[p]' * [q]']'")
show("[p]' * [q] * [r]", "[p]' * [[q]' * [r]']")

# a trigger lets p fire alone, a synchron waits for q
print("[p]' * [q] ->", pretty_wai(translate(trig("p") * syn("q"))))
print("[p]  * [q] ->", pretty_wai(translate(syn("p") * syn("q"))))
