"""Emit visualization artifacts: KML placemarks, Graphviz DOT, and minimal
SVG histograms. Everything is deterministic and offline; geocoding is a
gazetteer lookup, never a service call.
"""

from __future__ import annotations

import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .analyze import FrequencyTable, MeetingNetwork
from .enrich import PLACE_PATH
from .grammar import CodedEvent

KML_NS = "http://www.opengis.net/kml/2.2"
SVG_NS = "http://www.w3.org/2000/svg"


class ExportError(ValueError):
    pass


@dataclass(frozen=True)
class UnlocatedEvent:
    record_id: int
    ordinal: int
    place: str


def to_kml(
    events: list[CodedEvent],
    gazetteer: dict[str, tuple[float, float]],
) -> tuple[str, list[UnlocatedEvent]]:
    """One Placemark per located event; events whose place is not in the
    gazetteer are skipped and reported. located + unlocated = total.

    KML wants "lon,lat" coordinate order. The description element carries
    the diary text byte-exact (XML-escaped by the serializer).
    """
    ET.register_namespace("", KML_NS)
    kml = ET.Element(f"{{{KML_NS}}}kml")
    doc = ET.SubElement(kml, f"{{{KML_NS}}}Document")
    unlocated: list[UnlocatedEvent] = []
    for e in events:
        place = e.first_value(PLACE_PATH) or ""
        coords = gazetteer.get(unicodedata.normalize("NFC", place))
        if coords is None:
            unlocated.append(UnlocatedEvent(e.record_id, e.ordinal, place))
            continue
        lat, lon = coords
        pm = ET.SubElement(doc, f"{{{KML_NS}}}Placemark")
        ET.SubElement(pm, f"{{{KML_NS}}}name").text = place
        ET.SubElement(pm, f"{{{KML_NS}}}description").text = e.description
        point = ET.SubElement(pm, f"{{{KML_NS}}}Point")
        ET.SubElement(point, f"{{{KML_NS}}}coordinates").text = f"{lon},{lat}"
    body = ET.tostring(kml, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n", unlocated


def _dot_quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(network: MeetingNetwork, name: str = "meetings") -> str:
    """Undirected star graph; node order lexicographic, penwidth scaled
    proportionally to edge weight."""
    lines = [f"graph {_dot_quote(name)} {{"]
    for label in sorted(network.nodes):
        lines.append(f"  {_dot_quote(label)};")
    max_w = max((w for _, w in network.edges), default=1)
    for label, weight in sorted(network.edges):
        penwidth = 4.0 * weight / max_w
        lines.append(
            f"  {_dot_quote(network.ego)} -- {_dot_quote(label)} "
            f"[weight={weight}, penwidth={penwidth:.2f}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_histogram_svg(
    table: FrequencyTable,
    width: int = 640,
    height: int = 400,
    bar_gap: int = 10,
) -> str:
    """One bar per row, height proportional to the normalized value when
    present, else to the count. Raises on an empty table."""
    if not table.rows:
        raise ExportError("cannot draw a histogram of an empty table")
    values = [r.normalized if r.normalized is not None else float(r.count) for r in table.rows]
    labels = [" / ".join(r.key) if r.key else "all" for r in table.rows]
    vmax = max(values)
    if vmax <= 0:
        raise ExportError("all values are zero")

    margin = 40
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    n = len(values)
    bar_w = (plot_w - bar_gap * (n - 1)) / n

    ET.register_namespace("", SVG_NS)
    svg = ET.Element(
        f"{{{SVG_NS}}}svg",
        {"width": str(width), "height": str(height), "viewBox": f"0 0 {width} {height}"},
    )
    for i, (value, label) in enumerate(zip(values, labels)):
        bar_h = plot_h * value / vmax
        x = margin + i * (bar_w + bar_gap)
        y = margin + plot_h - bar_h
        ET.SubElement(
            svg,
            f"{{{SVG_NS}}}rect",
            {
                "x": f"{x:.2f}",
                "y": f"{y:.4f}",
                "width": f"{bar_w:.2f}",
                "height": f"{bar_h:.4f}",
                "fill": "#4a6fa5",
            },
        )
        text = ET.SubElement(
            svg,
            f"{{{SVG_NS}}}text",
            {"x": f"{x + bar_w / 2:.2f}", "y": str(height - margin + 16), "text-anchor": "middle",
             "font-size": "11"},
        )
        text.text = label
        value_text = ET.SubElement(
            svg,
            f"{{{SVG_NS}}}text",
            {"x": f"{x + bar_w / 2:.2f}", "y": f"{y - 4:.4f}", "text-anchor": "middle",
             "font-size": "11"},
        )
        value_text.text = repr(value) if isinstance(value, float) else str(value)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
