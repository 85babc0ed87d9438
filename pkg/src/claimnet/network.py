"""Time-sliced bipartite actor-concept networks.

For each period, dyads aggregate into signed edges whose weight counts the
distinct dates the dyad occurred. The concept-restricted n-core deletes only
concept nodes (degree below n in the full period network) and then actors
left without edges; actors are never deleted by degree, so a single pass and
the iterative definition coincide.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, InputError

# edge key: (actor, code, polarity) -> weight (number of distinct dates)
EdgeDict = dict[tuple[str, int, int], int]


@dataclass(frozen=True)
class PeriodSpec:
    index: int
    start: dt.date
    end: dt.date  # inclusive
    core_n: int

    def __post_init__(self):
        if self.start > self.end:
            raise ConfigError(f"period {self.index}: start after end")
        if self.core_n < 0:
            raise ConfigError(f"period {self.index}: negative core level")

    def contains(self, date: dt.date) -> bool:
        return self.start <= date <= self.end


def load_periods(path: str | Path) -> list[PeriodSpec]:
    """Read period definitions from CSV (index,start,end,core_n)."""
    periods: list[PeriodSpec] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"index", "start", "end", "core_n"}
        if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
            raise InputError(f"periods file must have columns {sorted(required)}")
        for row in reader:
            periods.append(
                PeriodSpec(
                    index=int(row["index"]),
                    start=dt.date.fromisoformat(row["start"]),
                    end=dt.date.fromisoformat(row["end"]),
                    core_n=int(row["core_n"]),
                )
            )
    periods.sort(key=lambda p: p.index)
    for a, b in zip(periods, periods[1:]):
        if b.start <= a.end:
            raise InputError(f"periods {a.index} and {b.index} overlap")
    return periods


def default_periods() -> list[PeriodSpec]:
    """The eight observation-window periods shipped with the package."""
    with resources.as_file(resources.files("claimnet") / "data" / "periods.csv") as p:
        return load_periods(p)


@dataclass
class CoreConfig:
    degree_mode: str = "distinct_actors"  # or "mention_count"

    def validate(self) -> None:
        if self.degree_mode not in ("distinct_actors", "mention_count"):
            raise ConfigError(f"unknown degree mode: {self.degree_mode!r}")


@dataclass
class DiscourseNetwork:
    """Bipartite actor-concept graph; nodes are derived from edges, so
    isolated nodes cannot exist by construction."""

    edges: EdgeDict = field(default_factory=dict)
    name: str = ""
    config_hash: str = ""

    @property
    def actors(self) -> list[str]:
        return sorted({actor for actor, _, _ in self.edges})

    @property
    def concepts(self) -> list[int]:
        return sorted({code for _, code, _ in self.edges})

    def dyad_pairs(self) -> set[tuple[str, int]]:
        """(actor, code) pairs, polarity ignored."""
        return {(actor, code) for actor, code, _ in self.edges}

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscourseNetwork) and self.edges == other.edges


def build(dyads: Iterable, period: PeriodSpec) -> DiscourseNetwork:
    """Aggregate deduplicated dyads falling inside the period window.

    Accepts anything exposing .actor/.code/.polarity/.date (predicted and
    gold dyads alike).
    """
    dates: dict[tuple[str, int, int], set[dt.date]] = {}
    for d in dyads:
        if period.contains(d.date):
            dates.setdefault((d.actor, d.code, d.polarity), set()).add(d.date)
    edges = {key: len(ds) for key, ds in dates.items()}
    return DiscourseNetwork(edges=edges, name=f"p{period.index}_core{period.core_n}")


def concept_degrees(net: DiscourseNetwork, cfg: CoreConfig | None = None) -> dict[int, int]:
    cfg = cfg or CoreConfig()
    cfg.validate()
    if cfg.degree_mode == "distinct_actors":
        adjacent: dict[int, set[str]] = {}
        for actor, code, _ in net.edges:
            adjacent.setdefault(code, set()).add(actor)
        return {code: len(actors) for code, actors in adjacent.items()}
    totals: dict[int, int] = {}
    for (_, code, _), weight in net.edges.items():
        totals[code] = totals.get(code, 0) + weight
    return totals


def concept_core(net: DiscourseNetwork, n: int, cfg: CoreConfig | None = None) -> DiscourseNetwork:
    """Remove concepts with degree < n (measured in the input network), then
    actors left without edges. Idempotent; core(n2) is a subgraph of core(n1)
    for n1 <= n2."""
    if n < 0:
        raise InputError("core level must be non-negative")
    degrees = concept_degrees(net, cfg)
    keep = {code for code, deg in degrees.items() if deg >= n}
    edges = {key: w for key, w in net.edges.items() if key[1] in keep}
    return DiscourseNetwork(edges=edges, name=net.name, config_hash=net.config_hash)


# ---------------------------------------------------------------------------
# Export. Node ordering is deterministic: actors lexicographic, then codes
# ascending; edges sorted by (actor, code, sign). Two runs over the same
# network produce byte-identical files.
# ---------------------------------------------------------------------------

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _xml_escape(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def graphml_string(net: DiscourseNetwork) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{_GRAPHML_NS}">',
        '  <key id="partition" for="node" attr.name="partition" attr.type="string"/>',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <key id="sign" for="edge" attr.name="sign" attr.type="int"/>',
        '  <key id="config_hash" for="graph" attr.name="config_hash" attr.type="string"/>',
        f'  <graph id="{_xml_escape(net.name or "discourse")}" edgedefault="directed">',
        f'    <data key="config_hash">{_xml_escape(net.config_hash)}</data>',
    ]
    for actor in net.actors:
        aid = _xml_escape(f"a:{actor}")
        lines.append(
            f'    <node id="{aid}"><data key="partition">actor</data>'
            f'<data key="label">{_xml_escape(actor)}</data></node>'
        )
    for code in net.concepts:
        lines.append(
            f'    <node id="c:{code}"><data key="partition">concept</data>'
            f'<data key="label">{code}</data></node>'
        )
    for actor, code, sign in sorted(net.edges):
        weight = net.edges[(actor, code, sign)]
        aid = _xml_escape(f"a:{actor}")
        lines.append(
            f'    <edge source="{aid}" target="c:{code}">'
            f'<data key="weight">{weight}</data><data key="sign">{sign}</data></edge>'
        )
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def load_graphml(path: str | Path) -> DiscourseNetwork:
    """Re-import a GraphML export (round-trip inverse of graphml_string)."""
    tree = ET.parse(path)
    ns = {"g": _GRAPHML_NS}
    graph = tree.getroot().find("g:graph", ns)
    if graph is None:
        raise InputError(f"{path}: no <graph> element")
    config_hash = ""
    for data in graph.findall("g:data", ns):
        if data.get("key") == "config_hash":
            config_hash = data.text or ""
    edges: EdgeDict = {}
    for edge in graph.findall("g:edge", ns):
        source = edge.get("source", "")
        target = edge.get("target", "")
        if not source.startswith("a:") or not target.startswith("c:"):
            raise InputError(f"{path}: unexpected edge {source!r} -> {target!r}")
        weight = sign = None
        for data in edge.findall("g:data", ns):
            if data.get("key") == "weight":
                weight = int(data.text)
            elif data.get("key") == "sign":
                sign = int(data.text)
        if weight is None or sign is None:
            raise InputError(f"{path}: edge missing weight or sign")
        edges[(source[2:], int(target[2:]), sign)] = weight
    return DiscourseNetwork(edges=edges, name=graph.get("id", ""), config_hash=config_hash)


def dot_string(net: DiscourseNetwork) -> str:
    out = io.StringIO()
    out.write("digraph discourse {\n")
    out.write('  node [fontname="Helvetica"];\n')
    for actor in net.actors:
        out.write(f'  "a:{actor}" [shape=box label="{actor}"];\n')
    for code in net.concepts:
        out.write(f'  "c:{code}" [shape=ellipse label="{code}"];\n')
    for actor, code, sign in sorted(net.edges):
        weight = net.edges[(actor, code, sign)]
        style = "solid" if sign > 0 else "dashed"
        out.write(
            f'  "a:{actor}" -> "c:{code}" [label="{"+" if sign > 0 else "-"}{weight}" style={style}];\n'
        )
    out.write("}\n")
    return out.getvalue()


def edge_csv_string(net: DiscourseNetwork) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["actor", "code", "sign", "weight"])
    for actor, code, sign in sorted(net.edges):
        writer.writerow([actor, code, sign, net.edges[(actor, code, sign)]])
    return out.getvalue()


_EXPORTERS = {"graphml": graphml_string, "dot": dot_string, "edge_csv": edge_csv_string}
EXPORT_FORMATS = tuple(_EXPORTERS)
_EXTENSIONS = {"graphml": "graphml", "dot": "dot", "edge_csv": "csv"}


def export(net: DiscourseNetwork, fmt: str, path: str | Path) -> Path:
    """Write the network to ``path`` in the requested format."""
    if fmt not in _EXPORTERS:
        raise ConfigError(f"unknown export format: {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_EXPORTERS[fmt](net), encoding="utf-8")
    return path


def export_filename(period: PeriodSpec, fmt: str) -> str:
    return f"network_p{period.index}_core{period.core_n}.{_EXTENSIONS[fmt]}"
