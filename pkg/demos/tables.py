"""Cover-by-cover tables for weighted Broadcast at a = {s, r1, r2}.

The primary table splits ``s * (1 + r1) * (1 + r2)`` at the first
synchronization.  The auxiliary tables break down the right part at
every sub-interaction, which is where the primary table's second column
comes from.
"""
from wconn.algebra import PortSet
from wconn.dsl import parse_wai
from wconn.tables import build_table

P = PortSet(("s", "r1", "r2"))
table = build_table(parse_wai("s * (1 + r1) * (1 + r2)"), {"s", "r1", "r2"}, P, nested=True)
print(table.render_all())
