"""GraphML serialization for networks, communities, and report graphs.

The writer emits schema-conforming GraphML with declared attribute keys and
supports multiple <graph> elements per document, which community exports
use to carry one graph per detected community.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContractError
from .extract import HCC
from .lcn import LCN, CollapsedGraph
from .validate import CooccurrenceGraph, ReasonNetwork

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
_XSI_NS = "http://www.w3.org/2001/XMLSchema-instance"
_SCHEMA = "http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd"


@dataclass
class GraphSpec:
    """One <graph> element: nodes and edges with scalar attributes."""

    graph_id: str
    nodes: list[tuple[str, dict]] = field(default_factory=list)
    edges: list[tuple[str, str, dict]] = field(default_factory=list)
    attrs: dict = field(default_factory=dict)


def _attr_type(value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "long"
    if isinstance(value, float):
        return "double"
    if isinstance(value, str):
        return "string"
    raise ContractError(f"unsupported attribute value {value!r}")


def _attr_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_graphml(path: str, graphs: Sequence[GraphSpec]) -> None:
    """Write one GraphML document holding the given graphs.

    Attribute keys are declared per (scope, name) with types inferred from
    the values; mixing incompatible types under one name is an error, except
    int/float which widen to double. Output bytes are deterministic.
    """
    # scope -> name -> graphml type
    key_types: dict[tuple[str, str], str] = {}

    def register(scope: str, attrs: dict) -> None:
        for name, value in attrs.items():
            kind = _attr_type(value)
            existing = key_types.get((scope, name))
            if existing is None:
                key_types[(scope, name)] = kind
            elif existing != kind:
                if {existing, kind} == {"long", "double"}:
                    key_types[(scope, name)] = "double"
                else:
                    raise ContractError(
                        f"attribute {name!r} used with conflicting types "
                        f"{existing} and {kind}"
                    )

    for spec in graphs:
        register("graph", spec.attrs)
        for _, attrs in spec.nodes:
            register("node", attrs)
        for _, _, attrs in spec.edges:
            register("edge", attrs)

    root = ET.Element("graphml")
    root.set("xmlns", _GRAPHML_NS)
    root.set("xmlns:xsi", _XSI_NS)
    root.set("xsi:schemaLocation", _SCHEMA)

    key_ids: dict[tuple[str, str], str] = {}
    for index, (scope, name) in enumerate(sorted(key_types)):
        key_id = f"d{index}"
        key_ids[(scope, name)] = key_id
        key = ET.SubElement(root, "key")
        key.set("id", key_id)
        key.set("for", scope)
        key.set("attr.name", name)
        key.set("attr.type", key_types[(scope, name)])

    def add_data(parent: ET.Element, scope: str, attrs: dict) -> None:
        for name in sorted(attrs):
            data = ET.SubElement(parent, "data")
            data.set("key", key_ids[(scope, name)])
            value = attrs[name]
            if key_types[(scope, name)] == "double" and isinstance(value, int):
                value = float(value)
            data.text = _attr_text(value)

    for spec in graphs:
        graph = ET.SubElement(root, "graph")
        graph.set("id", spec.graph_id)
        graph.set("edgedefault", "undirected")
        add_data(graph, "graph", spec.attrs)
        for node_id, attrs in spec.nodes:
            node = ET.SubElement(graph, "node")
            node.set("id", node_id)
            add_data(node, "node", attrs)
        for index, (source, target, attrs) in enumerate(spec.edges):
            edge = ET.SubElement(graph, "edge")
            edge.set("id", f"{spec.graph_id}e{index}")
            edge.set("source", source)
            edge.set("target", target)
            add_data(edge, "edge", attrs)

    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(path, encoding="utf-8", xml_declaration=True)


def graphspec_for_collapsed(graph: CollapsedGraph, graph_id: str) -> GraphSpec:
    spec = GraphSpec(graph_id=graph_id)
    spec.nodes = [(node, {}) for node in sorted(graph.nodes)]
    spec.edges = [
        (a, b, {"weight": graph.edges[(a, b)]}) for a, b in sorted(graph.edges)
    ]
    return spec


def graphspec_for_lcn(lcn: LCN, graph_id: str) -> GraphSpec:
    """Aggregated network with combined and per-criterion edge weights."""
    spec = GraphSpec(graph_id=graph_id)
    spec.nodes = [(node, {}) for node in sorted(lcn.nodes)]
    for a, b in sorted(lcn.edges):
        crits = lcn.edges[(a, b)]
        attrs: dict = {"weight": sum(crits[c] for c in sorted(crits))}
        for crit in sorted(crits):
            attrs[f"weight_{crit.replace('-', '_')}"] = crits[crit]
        spec.edges.append((a, b, attrs))
    return spec


def graphspecs_for_hccs(hccs: Sequence[HCC]) -> list[GraphSpec]:
    """One graph per community; mean edge weight rides as a graph attribute."""
    specs: list[GraphSpec] = []
    for hcc in hccs:
        spec = GraphSpec(graph_id=f"hcc_{hcc.id}", attrs={"mew": hcc.mew})
        spec.nodes = [(member, {}) for member in hcc.members]
        spec.edges = [
            (a, b, {"weight": hcc.edges[(a, b)]}) for a, b in sorted(hcc.edges)
        ]
        specs.append(spec)
    return specs


def read_hccs_graphml(path: str) -> list[HCC]:
    """Rebuild communities from a document written by graphspecs_for_hccs.

    Expects graph ids of the form hcc_<n> carrying a mew graph attribute
    and weighted edges; anything else (such as per-window extraction
    output) is rejected.
    """
    ns = {"g": _GRAPHML_NS}
    try:
        root = ET.parse(path).getroot()
    except (OSError, ET.ParseError) as exc:
        raise ContractError(f"cannot read communities from {path}: {exc}") from exc
    key_names = {
        key.get("id"): key.get("attr.name") for key in root.findall("g:key", ns)
    }
    hccs: list[HCC] = []
    for graph in root.findall("g:graph", ns):
        graph_id = graph.get("id", "")
        if not graph_id.startswith("hcc_") or not graph_id[4:].isdigit():
            raise ContractError(
                f"graph id {graph_id!r} is not an aggregate-mode community; "
                "re-run extraction without per-window output"
            )
        mew = 0.0
        for data in graph.findall("g:data", ns):
            if key_names.get(data.get("key")) == "mew":
                mew = float(data.text or 0.0)
        members = tuple(
            sorted(node.get("id", "") for node in graph.findall("g:node", ns))
        )
        edges: dict[tuple[str, str], float] = {}
        for edge in graph.findall("g:edge", ns):
            weight = 0.0
            for data in edge.findall("g:data", ns):
                if key_names.get(data.get("key")) == "weight":
                    weight = float(data.text or 0.0)
            edges[(edge.get("source", ""), edge.get("target", ""))] = weight
        hccs.append(HCC(id=int(graph_id[4:]), members=members, edges=edges, mew=mew))
    hccs.sort(key=lambda h: h.id)
    return hccs


def graphspec_for_reason_network(network: ReasonNetwork) -> GraphSpec:
    spec = GraphSpec(graph_id="account_reason_network")
    spec.nodes = [(node_id, dict(attrs)) for node_id, attrs in sorted(network.nodes.items())]
    spec.edges = [(s, t, dict(attrs)) for s, t, attrs in network.edges]
    return spec


def graphspec_for_cooccurrence(graph: CooccurrenceGraph) -> GraphSpec:
    spec = GraphSpec(graph_id="hashtag_cooccurrence")
    spec.nodes = [(tag, {}) for tag in sorted(graph.nodes)]
    spec.edges = [
        (a, b, {"weight": graph.edges[(a, b)]}) for a, b in sorted(graph.edges)
    ]
    return spec
