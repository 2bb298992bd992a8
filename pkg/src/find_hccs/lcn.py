"""Latent coordination networks: build, collapse, aggregate, decay.

An LCN is an undirected multi-edged graph over accounts: each edge carries a
weight per coordination criterion. Collapsing merges those into one combined
weight per edge; aggregation sums networks across windows; a sliding frame
discounts earlier windows geometrically to favor recent coordination.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, MalformedInputError
from .evidence import EvidencePair

COMBINED = "combined"  # criterion column value for collapsed edges in CSV


@dataclass
class LCN:
    """Account graph with per-criterion edge weights.

    Edge keys are (account_a, account_b) with account_a < account_b; values
    map criterion name to a positive real weight. window_index is None for
    aggregated or frame networks.
    """

    window_index: int | None = None
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)


@dataclass
class CollapsedGraph:
    """LCN with multi-edges merged into a single weight per edge."""

    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], float] = field(default_factory=dict)


def build_lcn(pairs: Sequence[EvidencePair]) -> LCN:
    """Network for the evidence of a single window.

    All pairs must share one window index; an empty pair list yields an
    empty network with no window.
    """
    windows = {p.window_index for p in pairs}
    if len(windows) > 1:
        raise ContractError(
            f"build_lcn expects evidence from one window, got {sorted(windows)}"
        )
    lcn = LCN(window_index=windows.pop() if windows else None)
    for p in pairs:
        key = (p.account_a, p.account_b)
        if p.account_a >= p.account_b:
            raise ContractError(f"evidence pair {key} is not in canonical order")
        lcn.nodes.add(p.account_a)
        lcn.nodes.add(p.account_b)
        crits = lcn.edges.setdefault(key, {})
        crits[p.criterion] = crits.get(p.criterion, 0.0) + float(p.weight)
    return lcn


def build_windowed_lcns(pairs: Sequence[EvidencePair]) -> dict[int, LCN]:
    """One LCN per window index present in the evidence."""
    by_window: dict[int, list[EvidencePair]] = {}
    for p in pairs:
        by_window.setdefault(p.window_index, []).append(p)
    return {w: build_lcn(group) for w, group in sorted(by_window.items())}


def collapse_edges(
    lcn: LCN, multipliers: Mapping[str, float] | None = None
) -> CollapsedGraph:
    """Merge multi-edges: combined weight = sum of per-criterion weights.

    Optional multipliers scale individual criteria before summing; criteria
    without an entry keep factor 1.0. Summation runs in sorted criterion
    order so results are bit-reproducible.
    """
    if multipliers:
        for name, factor in multipliers.items():
            if factor < 0:
                raise ContractError(f"multiplier for {name!r} must be >= 0")
    collapsed = CollapsedGraph(nodes=set(lcn.nodes))
    for key, crits in lcn.edges.items():
        total = 0.0
        for crit in sorted(crits):
            factor = multipliers.get(crit, 1.0) if multipliers else 1.0
            total += crits[crit] * factor
        collapsed.edges[key] = total
    return collapsed


def aggregate_lcns(lcns: Iterable[LCN]) -> LCN:
    """Sum per-criterion edge weights across networks; union of nodes.

    Inputs are processed in ascending window order (unwindowed inputs last,
    in given order) so floating-point sums are deterministic.
    """
    indexed = list(lcns)
    indexed.sort(key=lambda l: (l.window_index is None, l.window_index or 0))
    total = LCN(window_index=None)
    for lcn in indexed:
        total.nodes.update(lcn.nodes)
        for key, crits in lcn.edges.items():
            merged = total.edges.setdefault(key, {})
            for crit in sorted(crits):
                merged[crit] = merged.get(crit, 0.0) + crits[crit]
    return total


def decayed_weight(history: Sequence[float], alpha: float) -> float:
    """Geometrically discounted sum of a per-window weight history.

    ``history[0]`` is the current window's weight and ``history[x]`` the
    weight x windows back; the result is sum(history[x] * alpha**x).
    """
    if not 0 < alpha <= 1:
        raise ContractError(f"alpha must be in (0, 1], got {alpha}")
    if len(history) == 0:
        raise ContractError("decayed_weight needs at least one window of history")
    total = 0.0
    for x in range(len(history)):
        total += history[x] * alpha**x
    return total


def sliding_frame_lcns(
    lcns_by_window: Mapping[int, LCN], frame_windows: int, alpha: float
) -> dict[int, LCN]:
    """Per-window networks where each edge weight is decayed over a frame.

    For every window t between the first and last observed, the frame at t
    sums each (edge, criterion) weight over windows t, t-1, ... t-F+1
    discounted by alpha per step back. Frames with no edges are omitted.
    With frame_windows=1 the observed networks are returned unchanged.
    """
    if frame_windows < 1:
        raise ContractError(f"frame_windows must be >= 1, got {frame_windows}")
    if frame_windows > 1 and not 0 < alpha <= 1:
        raise ContractError(f"alpha must be in (0, 1], got {alpha}")
    if not lcns_by_window:
        return {}
    if frame_windows == 1:
        return {w: lcns_by_window[w] for w in sorted(lcns_by_window)}

    frames: dict[int, LCN] = {}
    first, last = min(lcns_by_window), max(lcns_by_window)
    for t in range(first, last + 1):
        frame = LCN(window_index=t)
        for x in range(frame_windows):
            source = lcns_by_window.get(t - x)
            if source is None:
                continue
            factor = alpha**x
            for key, crits in source.edges.items():
                merged = frame.edges.setdefault(key, {})
                for crit in sorted(crits):
                    merged[crit] = merged.get(crit, 0.0) + crits[crit] * factor
        if frame.edges:
            for a, b in frame.edges:
                frame.nodes.add(a)
                frame.nodes.add(b)
            frames[t] = frame
    return frames


def write_lcn_csv(lcn: LCN, path: str) -> None:
    """Edge CSV with one row per (edge, criterion), sorted."""
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["node_a", "node_b", "criterion", "weight"])
        for (a, b) in sorted(lcn.edges):
            for crit in sorted(lcn.edges[(a, b)]):
                writer.writerow([a, b, crit, repr(lcn.edges[(a, b)][crit])])


def read_lcn_csv(path: str) -> LCN:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read network: {exc}") from exc
    lcn = LCN(window_index=None)
    with stream:
        for row in csv.DictReader(stream):
            a, b = row["node_a"], row["node_b"]
            key = (a, b)
            lcn.nodes.add(a)
            lcn.nodes.add(b)
            crits = lcn.edges.setdefault(key, {})
            crit = row["criterion"]
            crits[crit] = crits.get(crit, 0.0) + float(row["weight"])
    return lcn


def write_collapsed_csv(graph: CollapsedGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["node_a", "node_b", "criterion", "weight"])
        for (a, b) in sorted(graph.edges):
            writer.writerow([a, b, COMBINED, repr(graph.edges[(a, b)])])


def read_collapsed_csv(path: str) -> CollapsedGraph:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read network: {exc}") from exc
    graph = CollapsedGraph()
    with stream:
        for row in csv.DictReader(stream):
            a, b = row["node_a"], row["node_b"]
            graph.nodes.add(a)
            graph.nodes.add(b)
            graph.edges[(a, b)] = graph.edges.get((a, b), 0.0) + float(row["weight"])
    return graph
