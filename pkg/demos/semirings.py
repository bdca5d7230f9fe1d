"""Check the semiring axioms on the bundled carriers.

The natural numbers are included on purpose: they are a semiring but not
an idempotent one, and the report shows the failing law with a witness.
"""
from wconn.semiring import (BOOLEAN, FUZZY, MAX_PLUS, MIN_PLUS, NATURAL, VITERBI, check_laws,
                            powerset)

for s in (BOOLEAN, MIN_PLUS, MAX_PLUS, VITERBI, FUZZY, powerset("abc"), NATURAL):
    report = check_laws(s)
    status = "all laws hold" if report.ok else "fails " + ", ".join(
        f"{r.law} (witness {r.witness})" for r in report.failed())
    print(f"{s.name:10} {status}")
