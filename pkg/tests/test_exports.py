"""GraphML serialization tests."""

from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from find_hccs.errors import ContractError
from find_hccs.exports import (
    GraphSpec,
    graphspec_for_collapsed,
    graphspecs_for_hccs,
    write_graphml,
)
from find_hccs.extract import extract_fsa_v
from find_hccs.lcn import CollapsedGraph

NS = {"g": "http://graphml.graphdrawing.org/xmlns"}


def parse(path):
    return ET.parse(path).getroot()


def collapsed(edges):
    g = CollapsedGraph()
    for a, b, w in edges:
        key = (min(a, b), max(a, b))
        g.nodes.update(key)
        g.edges[key] = w
    return g


class TestWriteGraphml:
    def test_single_graph_structure(self, tmp_path):
        g = collapsed([("a", "b", 2.0), ("b", "c", 1.5)])
        path = tmp_path / "net.graphml"
        write_graphml(str(path), [graphspec_for_collapsed(g, "lcn")])
        root = parse(path)
        assert root.tag.endswith("graphml")
        graphs = root.findall("g:graph", NS)
        assert len(graphs) == 1
        assert graphs[0].get("edgedefault") == "undirected"
        nodes = graphs[0].findall("g:node", NS)
        edges = graphs[0].findall("g:edge", NS)
        assert [n.get("id") for n in nodes] == ["a", "b", "c"]
        assert len(edges) == 2

    def test_every_data_key_is_declared(self, tmp_path):
        g = collapsed([("a", "b", 2.0)])
        path = tmp_path / "net.graphml"
        write_graphml(str(path), [graphspec_for_collapsed(g, "lcn")])
        root = parse(path)
        declared = {k.get("id") for k in root.findall("g:key", NS)}
        used = {d.get("key") for d in root.iter(f"{{{NS['g']}}}data")}
        assert used <= declared

    def test_edge_endpoints_reference_nodes(self, tmp_path):
        g = collapsed([("a", "b", 2.0), ("c", "d", 3.0)])
        path = tmp_path / "net.graphml"
        write_graphml(str(path), [graphspec_for_collapsed(g, "lcn")])
        root = parse(path)
        for graph in root.findall("g:graph", NS):
            node_ids = {n.get("id") for n in graph.findall("g:node", NS)}
            for edge in graph.findall("g:edge", NS):
                assert edge.get("source") in node_ids
                assert edge.get("target") in node_ids

    def test_one_graph_per_community_with_mew(self, tmp_path):
        g = collapsed(
            [("a", "b", 10.0), ("b", "c", 9.0), ("c", "d", 1.0), ("e", "f", 2.0)]
        )
        hccs = extract_fsa_v(g, theta=0.3, seed=1)
        path = tmp_path / "hccs.graphml"
        write_graphml(str(path), graphspecs_for_hccs(hccs))
        root = parse(path)
        graphs = root.findall("g:graph", NS)
        assert len(graphs) == 1
        key_ids = {
            k.get("attr.name"): k.get("id")
            for k in root.findall("g:key", NS)
            if k.get("for") == "graph"
        }
        mew_key = key_ids["mew"]
        (data,) = [
            d for d in graphs[0].findall("g:data", NS) if d.get("key") == mew_key
        ]
        assert abs(float(data.text) - 20.0 / 3.0) < 1e-9

    def test_empty_document_is_valid(self, tmp_path):
        path = tmp_path / "empty.graphml"
        write_graphml(str(path), [GraphSpec(graph_id="empty")])
        root = parse(path)
        graph = root.find("g:graph", NS)
        assert graph is not None
        assert list(graph.findall("g:node", NS)) == []

    def test_deterministic_bytes(self, tmp_path):
        g = collapsed([("a", "b", 2.0), ("b", "c", 1.0)])
        p1, p2 = tmp_path / "a.graphml", tmp_path / "b.graphml"
        write_graphml(str(p1), [graphspec_for_collapsed(g, "lcn")])
        write_graphml(str(p2), [graphspec_for_collapsed(g, "lcn")])
        assert p1.read_bytes() == p2.read_bytes()

    def test_conflicting_attr_types_rejected(self, tmp_path):
        spec = GraphSpec(
            graph_id="g",
            nodes=[("a", {"rank": 1}), ("b", {"rank": "high"})],
        )
        with pytest.raises(ContractError):
            write_graphml(str(tmp_path / "bad.graphml"), [spec])
