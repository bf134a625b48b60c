#!/usr/bin/env python3
"""Tour of the query language: parsing, validation, canonical text.

Patterns are typed paths (V_P player, V_G game, V_D developer, V_R genre;
E_F friendship, E_O ownership, E_D developed-by, E_R has-genre). A query
keeps bindings for which every pattern embeds, every antipattern fails to
embed, and all conditions hold; ORDERBY AVG ranks rows by the mean of a
tapped edge attribute over the aggregate pattern's embeddings.
"""
from attainrec.querylang import QuerySyntaxError, parse, unparse, validate

TEXT = """
SELECT V_G(b).name, V_G(b).cost
PATTERNS V_P(a)-E_F-V_P-E_O-V_G(b)
         V_P(a)-E_O-V_G-E_D-V_D-E_D-V_G(b)
WHERE V_P(a).steamid=76561197960653976
ORDERBY AVG(V_P(a)-E_F-V_P-E_O.attainmentRating-V_G(b))
LIMIT 5
"""

ast = parse(TEXT)
typed = validate(ast)
print("variables:", {v: k.value for v, k in typed.var_kinds.items()})
print("patterns:", len(ast.patterns))
print("canonical:", unparse(ast))

# refinements are plain clauses
new_game = unparse(ast).replace("WHERE", "ANTIPATTERNS V_P(a)-E_O-V_G(b) WHERE")
print("\nexclude owned:", new_game)

strategy = new_game.replace(
    "PATTERNS", "PATTERNS V_G(b)-E_R-V_R", 1
).replace("WHERE", 'WHERE V_R.description="Strategy" AND', 1)
validate(parse(strategy))
print("genre filter:", strategy)

# errors carry positions
try:
    parse("SELECT b.name")
except QuerySyntaxError as err:
    print(f"\nsyntax error at {err.line}:{err.column}: expected {err.expected}")
