"""Dataset directory load/save.

A dataset is a directory of line-delimited JSON record files plus a
manifest. The loader builds a :class:`PropertyGraph` and one achievement
table per game; the saver writes the same format back deterministically
(identical graphs produce byte-identical files).

Files:
  manifest.json      {"version": 1, "files": {...}}
  players.jsonl      {"steamid": str, "name"?: str}
  games.jsonl        {"appid": int, "name": str, "cost"?: float, "tags"?: [str],
                      "developers": [str], "genres": [str], "achievement_names": [str],
                      "global_completion"?: [float] per achievement}
  developers.jsonl   {"name": str}
  genres.jsonl       {"description": str}
  friendships.jsonl  {"a": steamid, "b": steamid}  with a < b
  ownership.jsonl    {"steamid": str, "appid": int, "playtime_minutes"?: int}
  achievements.jsonl {"steamid": str, "appid": int, "unlocked": [0/1] * N_g}

Unknown record fields (scalars or flat string lists) are preserved as
vertex/edge attributes and written back on save.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .attainment import AchievementTable
from .graph import EdgeKind, GraphError, PropertyGraph, VertexKind

MANIFEST_NAME = "manifest.json"
FILE_KEYS = (
    "players",
    "games",
    "developers",
    "genres",
    "friendships",
    "ownership",
    "achievements",
)
DEFAULT_FILES = {key: f"{key}.jsonl" for key in FILE_KEYS}


class DatasetError(Exception):
    """Base class for dataset load errors, carrying file/line context."""

    def __init__(self, message: str, file: str | None = None, line: int | None = None):
        loc = ""
        if file is not None:
            loc = f" [{file}" + (f":{line}" if line is not None else "") + "]"
        super().__init__(message + loc)
        self.file = file
        self.line = line


class ParseError(DatasetError):
    pass


class SchemaViolation(DatasetError):
    pass


class DanglingReference(DatasetError):
    pass


def _iter_records(path: Path, name: str):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {name}: {exc}", file=name) from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", file=name, line=lineno) from exc
        if not isinstance(record, dict):
            raise ParseError("record must be a JSON object", file=name, line=lineno)
        yield lineno, record


def _field(record: dict, name: str, types, required: bool, file: str, line: int):
    if name not in record:
        if required:
            raise SchemaViolation(f"missing field {name!r}", file=file, line=line)
        return None
    value = record[name]
    if isinstance(value, bool) or not isinstance(value, types):
        raise SchemaViolation(f"field {name!r} has wrong type", file=file, line=line)
    return value


def _string_list(record: dict, name: str, required: bool, file: str, line: int):
    if name not in record:
        if required:
            raise SchemaViolation(f"missing field {name!r}", file=file, line=line)
        return None
    value = record[name]
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise SchemaViolation(f"field {name!r} must be a list of strings", file=file, line=line)
    return value


def _extra_attrs(record: dict, known: tuple[str, ...], file: str, line: int) -> dict:
    attrs = {}
    for key, value in record.items():
        if key in known:
            continue
        if isinstance(value, bool) or isinstance(value, (int, float, str)):
            attrs[key] = value
        elif isinstance(value, list) and all(
            isinstance(x, (str, int, float)) and not isinstance(x, bool) for x in value
        ):
            attrs[key] = tuple(value)
        else:
            raise SchemaViolation(
                f"unsupported value for extra field {key!r}", file=file, line=line
            )
    return attrs


def load_dataset(path: str | os.PathLike) -> tuple[PropertyGraph, dict[int, AchievementTable]]:
    """Load a dataset directory into a graph and per-game achievement tables.

    The returned graph is not frozen; callers annotate ratings and then
    freeze it. Every referential violation raises :class:`DanglingReference`.
    """
    root = Path(path)
    mpath = root / MANIFEST_NAME
    try:
        manifest = json.loads(mpath.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read manifest: {exc}", file=MANIFEST_NAME) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", file=MANIFEST_NAME) from exc
    if manifest.get("version") != 1:
        raise SchemaViolation("unsupported manifest version", file=MANIFEST_NAME)
    files = manifest.get("files")
    if not isinstance(files, dict) or set(files) != set(FILE_KEYS):
        raise SchemaViolation(
            f"manifest must list files {', '.join(FILE_KEYS)}", file=MANIFEST_NAME
        )

    graph = PropertyGraph()
    players: dict[str, int] = {}
    games: dict[int, int] = {}
    developers: dict[str, int] = {}
    genres: dict[str, int] = {}
    ach_names: dict[int, tuple[str, ...]] = {}

    def wrap(exc: GraphError, file: str, line: int) -> SchemaViolation:
        return SchemaViolation(str(exc), file=file, line=line)

    name = files["players"]
    for line, rec in _iter_records(root / name, name):
        steamid = _field(rec, "steamid", str, True, name, line)
        if steamid in players:
            raise SchemaViolation(f"duplicate steamid {steamid!r}", file=name, line=line)
        attrs = {"steamid": steamid}
        display = _field(rec, "name", str, False, name, line)
        if display is not None:
            attrs["name"] = display
        attrs.update(_extra_attrs(rec, ("steamid", "name"), name, line))
        players[steamid] = graph.add_vertex(VertexKind.PLAYER, attrs)

    name = files["developers"]
    for line, rec in _iter_records(root / name, name):
        dev = _field(rec, "name", str, True, name, line)
        if dev in developers:
            raise SchemaViolation(f"duplicate developer {dev!r}", file=name, line=line)
        attrs = {"name": dev}
        attrs.update(_extra_attrs(rec, ("name",), name, line))
        developers[dev] = graph.add_vertex(VertexKind.DEVELOPER, attrs)

    name = files["genres"]
    for line, rec in _iter_records(root / name, name):
        desc = _field(rec, "description", str, True, name, line)
        if desc in genres:
            raise SchemaViolation(f"duplicate genre {desc!r}", file=name, line=line)
        attrs = {"description": desc}
        attrs.update(_extra_attrs(rec, ("description",), name, line))
        genres[desc] = graph.add_vertex(VertexKind.GENRE, attrs)

    name = files["games"]
    known_game = (
        "appid",
        "name",
        "cost",
        "tags",
        "developers",
        "genres",
        "achievement_names",
        "global_completion",
    )
    global_rates: dict[int, tuple] = {}
    for line, rec in _iter_records(root / name, name):
        appid = _field(rec, "appid", int, True, name, line)
        if appid in games:
            raise SchemaViolation(f"duplicate appid {appid}", file=name, line=line)
        attrs = {"appid": appid, "name": _field(rec, "name", str, True, name, line)}
        cost = _field(rec, "cost", (int, float), False, name, line)
        if cost is not None:
            attrs["cost"] = float(cost)
        tags = _string_list(rec, "tags", False, name, line)
        if tags is not None:
            attrs["tags"] = tuple(tags)
        names = _string_list(rec, "achievement_names", True, name, line)
        attrs["achievement_names"] = tuple(names)
        if "global_completion" in rec:
            rates = rec["global_completion"]
            if (
                not isinstance(rates, list)
                or len(rates) != len(names)
                or not all(
                    isinstance(r, (int, float))
                    and not isinstance(r, bool)
                    and 0.0 <= r <= 1.0
                    for r in rates
                )
            ):
                raise SchemaViolation(
                    "field 'global_completion' must list one rate in [0, 1] per achievement",
                    file=name,
                    line=line,
                )
            attrs["global_completion"] = tuple(float(r) for r in rates)
        attrs.update(_extra_attrs(rec, known_game, name, line))
        gid = graph.add_vertex(VertexKind.GAME, attrs)
        games[appid] = gid
        ach_names[gid] = tuple(names)
        if "global_completion" in attrs:
            global_rates[gid] = attrs["global_completion"]
        for dev in _string_list(rec, "developers", True, name, line):
            if dev not in developers:
                raise DanglingReference(f"unknown developer {dev!r}", file=name, line=line)
            try:
                graph.add_edge(EdgeKind.DEVELOPED_BY, gid, developers[dev])
            except GraphError as exc:
                raise wrap(exc, name, line) from exc
        for desc in _string_list(rec, "genres", True, name, line):
            if desc not in genres:
                raise DanglingReference(f"unknown genre {desc!r}", file=name, line=line)
            try:
                graph.add_edge(EdgeKind.HAS_GENRE, gid, genres[desc])
            except GraphError as exc:
                raise wrap(exc, name, line) from exc

    name = files["friendships"]
    for line, rec in _iter_records(root / name, name):
        a = _field(rec, "a", str, True, name, line)
        b = _field(rec, "b", str, True, name, line)
        if not a < b:
            raise SchemaViolation("friendship endpoints must satisfy a < b", file=name, line=line)
        for sid in (a, b):
            if sid not in players:
                raise DanglingReference(f"unknown player {sid!r}", file=name, line=line)
        try:
            graph.add_edge(
                EdgeKind.FRIEND, players[a], players[b], _extra_attrs(rec, ("a", "b"), name, line)
            )
        except GraphError as exc:
            raise wrap(exc, name, line) from exc

    name = files["ownership"]
    owners_by_game: dict[int, list[int]] = {gid: [] for gid in games.values()}
    for line, rec in _iter_records(root / name, name):
        sid = _field(rec, "steamid", str, True, name, line)
        appid = _field(rec, "appid", int, True, name, line)
        if sid not in players:
            raise DanglingReference(f"unknown player {sid!r}", file=name, line=line)
        if appid not in games:
            raise DanglingReference(f"unknown appid {appid}", file=name, line=line)
        attrs = {}
        minutes = _field(rec, "playtime_minutes", int, False, name, line)
        if minutes is not None:
            attrs["playtime_minutes"] = minutes
        attrs.update(_extra_attrs(rec, ("steamid", "appid", "playtime_minutes"), name, line))
        try:
            graph.add_edge(EdgeKind.OWNS, players[sid], games[appid], attrs)
        except GraphError as exc:
            raise wrap(exc, name, line) from exc
        owners_by_game[games[appid]].append(players[sid])

    tables: dict[int, AchievementTable] = {}
    row_of: dict[tuple[int, int], int] = {}
    for gid, owner_list in owners_by_game.items():
        owners = tuple(sorted(owner_list))
        n = len(ach_names[gid])
        tables[gid] = AchievementTable(
            game=gid,
            names=ach_names[gid],
            owners=owners,
            bits=np.zeros((len(owners), n), dtype=np.uint8),
            global_rates=np.asarray(global_rates[gid]) if gid in global_rates else None,
        )
        for row, pid in enumerate(owners):
            row_of[(pid, gid)] = row

    name = files["achievements"]
    seen: set[tuple[int, int]] = set()
    for line, rec in _iter_records(root / name, name):
        sid = _field(rec, "steamid", str, True, name, line)
        appid = _field(rec, "appid", int, True, name, line)
        if sid not in players:
            raise DanglingReference(f"unknown player {sid!r}", file=name, line=line)
        if appid not in games:
            raise DanglingReference(f"unknown appid {appid}", file=name, line=line)
        pid, gid = players[sid], games[appid]
        if (pid, gid) not in row_of:
            raise SchemaViolation(
                f"achievement record for non-owned game {appid} by {sid!r}", file=name, line=line
            )
        if (pid, gid) in seen:
            raise SchemaViolation(
                f"duplicate achievement record for {sid!r}/{appid}", file=name, line=line
            )
        seen.add((pid, gid))
        unlocked = rec.get("unlocked")
        if not isinstance(unlocked, list) or not all(u in (0, 1) for u in unlocked):
            raise SchemaViolation("field 'unlocked' must be a list of 0/1", file=name, line=line)
        if len(unlocked) != len(ach_names[gid]):
            raise SchemaViolation(
                f"'unlocked' length {len(unlocked)} != {len(ach_names[gid])} achievements",
                file=name,
                line=line,
            )
        tables[gid].bits[row_of[(pid, gid)], :] = unlocked

    return graph, tables


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def _with_extras(record: dict, attrs: dict, known: tuple[str, ...]) -> dict:
    for key in sorted(attrs):
        if key in known:
            continue
        value = attrs[key]
        record[key] = list(value) if isinstance(value, tuple) else value
    return record


def save_dataset(
    graph: PropertyGraph,
    tables: dict[int, AchievementTable],
    path: str | os.PathLike,
) -> None:
    """Write the dataset directory format; inverse of :func:`load_dataset`."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    manifest = {"version": 1, "files": dict(DEFAULT_FILES)}
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    def write(key: str, lines):
        (root / DEFAULT_FILES[key]).write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8"
        )

    lines = []
    for vid in graph.vertices_of_kind(VertexKind.PLAYER):
        attrs = graph.vertex(vid).attrs
        rec = {"steamid": attrs["steamid"]}
        if "name" in attrs:
            rec["name"] = attrs["name"]
        lines.append(_dump(_with_extras(rec, attrs, ("steamid", "name"))))
    write("players", lines)

    lines = []
    for vid in graph.vertices_of_kind(VertexKind.DEVELOPER):
        attrs = graph.vertex(vid).attrs
        lines.append(_dump(_with_extras({"name": attrs["name"]}, attrs, ("name",))))
    write("developers", lines)

    lines = []
    for vid in graph.vertices_of_kind(VertexKind.GENRE):
        attrs = graph.vertex(vid).attrs
        lines.append(_dump(_with_extras({"description": attrs["description"]}, attrs, ("description",))))
    write("genres", lines)

    known_game = (
        "appid",
        "name",
        "cost",
        "tags",
        "developers",
        "genres",
        "achievement_names",
        "global_completion",
    )
    lines = []
    for vid in graph.vertices_of_kind(VertexKind.GAME):
        attrs = graph.vertex(vid).attrs
        rec = {"appid": attrs["appid"], "name": attrs["name"]}
        if "cost" in attrs:
            rec["cost"] = attrs["cost"]
        if "tags" in attrs:
            rec["tags"] = list(attrs["tags"])
        rec["developers"] = [
            graph.vertex_attr(nbr, "name")
            for _, nbr in graph.neighbors(vid, EdgeKind.DEVELOPED_BY, "out")
        ]
        rec["genres"] = [
            graph.vertex_attr(nbr, "description")
            for _, nbr in graph.neighbors(vid, EdgeKind.HAS_GENRE, "out")
        ]
        rec["achievement_names"] = list(attrs.get("achievement_names", ()))
        if "global_completion" in attrs:
            rec["global_completion"] = list(attrs["global_completion"])
        lines.append(_dump(_with_extras(rec, attrs, known_game)))
    write("games", lines)

    lines = []
    for edge in graph.edges():
        if edge.kind is not EdgeKind.FRIEND:
            continue
        a = graph.vertex_attr(edge.src, "steamid")
        b = graph.vertex_attr(edge.dst, "steamid")
        if b < a:
            a, b = b, a
        lines.append(_dump(_with_extras({"a": a, "b": b}, edge.attrs, ())))
    write("friendships", lines)

    lines = []
    for edge in graph.edges():
        if edge.kind is not EdgeKind.OWNS:
            continue
        rec = {
            "steamid": graph.vertex_attr(edge.src, "steamid"),
            "appid": graph.vertex_attr(edge.dst, "appid"),
        }
        if "playtime_minutes" in edge.attrs:
            rec["playtime_minutes"] = edge.attrs["playtime_minutes"]
        lines.append(_dump(_with_extras(rec, edge.attrs, ("playtime_minutes",))))
    write("ownership", lines)

    lines = []
    for gid in graph.vertices_of_kind(VertexKind.GAME):
        table = tables.get(gid)
        if table is None:
            continue
        appid = graph.vertex_attr(gid, "appid")
        for row, pid in enumerate(table.owners):
            rec = {
                "steamid": graph.vertex_attr(pid, "steamid"),
                "appid": appid,
                "unlocked": [int(b) for b in table.bits[row]],
            }
            lines.append(_dump(rec))
    write("achievements", lines)
