"""Canned recommendation queries and their one-click refinements.

The base query recommends games owned by a player's friends and made by
developers the player already buys from, ranked by the friends' average
attainment. Refinements: exclude games the player already owns
(an antipattern), or restrict results to one genre (extra pattern plus a
genre condition).
"""
from __future__ import annotations

BASE_PATTERNS = "V_P(a)-E_F-V_P-E_O-V_G(b) V_P(a)-E_O-V_G-E_D-V_D-E_D-V_G(b)"
EXCLUDE_OWNED_ANTIPATTERN = "V_P(a)-E_O-V_G(b)"
GENRE_PATTERN = "V_G(b)-E_R-V_R"
AGGREGATE = "AVG(V_P(a)-E_F-V_P-E_O.attainmentRating-V_G(b))"


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def recommendation_query(
    steamid: str,
    limit: int = 5,
    exclude_owned: bool = False,
    genre: str | None = None,
) -> str:
    """Build the parameterized recommendation query text."""
    patterns = BASE_PATTERNS + (f" {GENRE_PATTERN}" if genre else "")
    clauses = [
        "SELECT b.name, b.cost",
        f"PATTERNS {patterns}",
    ]
    if exclude_owned:
        clauses.append(f"ANTIPATTERNS {EXCLUDE_OWNED_ANTIPATTERN}")
    where = [f"a.steamid={_quote(str(steamid))}"]
    if genre:
        where.append(f"V_R.description={_quote(genre)}")
    clauses.append("WHERE " + " AND ".join(where))
    clauses.append(f"ORDERBY {AGGREGATE}")
    clauses.append(f"LIMIT {limit}")
    return " ".join(clauses)


def sample_query(steamid: str, limit: int = 5) -> str:
    return recommendation_query(steamid, limit)


def new_game_query(steamid: str, limit: int = 5) -> str:
    return recommendation_query(steamid, limit, exclude_owned=True)


def genre_query(steamid: str, genre: str, limit: int = 5) -> str:
    return recommendation_query(steamid, limit, exclude_owned=True, genre=genre)
