"""Extraction of highly coordinating communities from a collapsed network.

Three methods: focal-structure growth seeded by Louvain communities, a
k-nearest-neighbour edge filter, and a normalized weight threshold. All are
deterministic; the Louvain pass visits nodes in an order derived from an
explicit seed.
"""

from __future__ import annotations

import csv
import heapq
import math
import random
from dataclasses import dataclass

from .errors import ContractError, MalformedInputError
from .lcn import CollapsedGraph

EXTRACTION_METHODS = ("fsa_v", "knn", "threshold")


@dataclass
class ExtractionParams:
    """Validated knobs for the extraction stage."""

    method: str = "fsa_v"
    theta: float = 0.3
    threshold: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.method not in EXTRACTION_METHODS:
            raise ContractError(
                f"unknown extraction method {self.method!r}; "
                f"expected one of {EXTRACTION_METHODS}"
            )
        if not 0 < self.theta <= 1:
            raise ContractError(f"theta must be in (0, 1], got {self.theta}")
        if not 0 < self.threshold <= 1:
            raise ContractError(f"threshold must be in (0, 1], got {self.threshold}")


@dataclass
class HCC:
    """A highly coordinating community: members, selected edges, mean weight."""

    id: int
    members: tuple[str, ...]
    edges: dict[tuple[str, str], float]
    mew: float


def _hcc(hcc_id: int, edges: dict[tuple[str, str], float]) -> HCC:
    members = sorted({node for key in edges for node in key})
    mew = math.fsum(edges[key] for key in sorted(edges)) / len(edges)
    return HCC(id=hcc_id, members=tuple(members), edges=dict(edges), mew=mew)


def modularity(graph: CollapsedGraph, partition: list[set[str]]) -> float:
    """Weighted modularity of a partition; 0.0 for an edgeless graph."""
    m = math.fsum(graph.edges[key] for key in sorted(graph.edges))
    if m == 0:
        return 0.0
    community_of: dict[str, int] = {}
    for idx, comm in enumerate(partition):
        for node in comm:
            community_of[node] = idx
    degree: dict[str, float] = {}
    internal: dict[int, float] = {}
    for (a, b), w in graph.edges.items():
        degree[a] = degree.get(a, 0.0) + w
        degree[b] = degree.get(b, 0.0) + w
        if community_of.get(a) == community_of.get(b):
            idx = community_of[a]
            internal[idx] = internal.get(idx, 0.0) + w
    q = 0.0
    for idx, comm in enumerate(partition):
        deg = math.fsum(degree.get(node, 0.0) for node in sorted(comm))
        q += internal.get(idx, 0.0) / m - (deg / (2 * m)) ** 2
    return q


def louvain_communities(graph: CollapsedGraph, seed: int = 0) -> list[set[str]]:
    """Two-phase modularity maximization with a seeded node visiting order.

    Returns disjoint communities covering every node (isolated nodes stay
    singletons), ordered by smallest member. Deterministic for a given seed.
    """
    names = sorted(graph.nodes)
    if not names:
        return []
    index_of = {name: i for i, name in enumerate(names)}
    n = len(names)

    # Symmetric adjacency; self-loop slots hold twice the internal weight so
    # row sums are degrees throughout aggregation.
    adjacency: list[dict[int, float]] = [dict() for _ in range(n)]
    for (a, b), w in graph.edges.items():
        i, j = index_of[a], index_of[b]
        if i == j:
            raise ContractError(f"self edge on {a!r} is not allowed")
        adjacency[i][j] = adjacency[i].get(j, 0.0) + w
        adjacency[j][i] = adjacency[j].get(i, 0.0) + w

    m2 = sum(sum(row.values()) for row in adjacency)
    if m2 == 0:
        return [{name} for name in names]

    rng = random.Random(seed)
    # membership[i] = original node indices currently inside supernode i
    membership: list[list[int]] = [[i] for i in range(n)]

    while True:
        size = len(adjacency)
        degree = [sum(row.values()) for row in adjacency]
        community = list(range(size))
        community_total = degree[:]

        order = list(range(size))
        rng.shuffle(order)

        moved_any = False
        improved = True
        while improved:
            improved = False
            for node in order:
                current = community[node]
                k_node = degree[node]
                community_total[current] -= k_node

                weight_to: dict[int, float] = {}
                for neighbor, w in adjacency[node].items():
                    if neighbor == node:
                        continue
                    comm = community[neighbor]
                    weight_to[comm] = weight_to.get(comm, 0.0) + w
                weight_to.setdefault(current, 0.0)

                best_comm = current
                best_gain = weight_to[current] - community_total[current] * k_node / m2
                for comm in sorted(weight_to):
                    gain = weight_to[comm] - community_total[comm] * k_node / m2
                    if gain > best_gain + 1e-12 or (
                        abs(gain - best_gain) <= 1e-12 and comm < best_comm
                    ):
                        best_gain = gain
                        best_comm = comm

                community[node] = best_comm
                community_total[best_comm] += k_node
                if best_comm != current:
                    improved = True
                    moved_any = True

        if not moved_any:
            break

        # Aggregate communities into supernodes.
        labels = sorted(set(community))
        relabel = {label: i for i, label in enumerate(labels)}
        new_size = len(labels)
        new_adjacency: list[dict[int, float]] = [dict() for _ in range(new_size)]
        new_membership: list[list[int]] = [[] for _ in range(new_size)]
        for node, comm in enumerate(community):
            new_membership[relabel[comm]].extend(membership[node])
        for node, row in enumerate(adjacency):
            ci = relabel[community[node]]
            for neighbor, w in row.items():
                cj = relabel[community[neighbor]]
                new_adjacency[ci][cj] = new_adjacency[ci].get(cj, 0.0) + w
        adjacency = new_adjacency
        membership = new_membership
        if new_size == size:
            break

    communities = [
        {names[i] for i in group} for group in membership if group
    ]
    communities.sort(key=lambda c: min(c))
    return communities


def extract_fsa_v(
    graph: CollapsedGraph, theta: float, seed: int = 0
) -> list[HCC]:
    """Grow one candidate community per Louvain community.

    Growth starts from the community's heaviest edge and repeatedly adds the
    heaviest edge adjacent to the candidate (within the same community),
    stopping when the candidate's mean edge weight would fall below the
    global mean or below theta times its current mean. Candidates survive
    only with a mean strictly above the global mean.
    """
    if not 0 < theta <= 1:
        raise ContractError(f"theta must be in (0, 1], got {theta}")
    if not graph.edges:
        return []

    ordered_keys = sorted(graph.edges)
    g_mean = math.fsum(graph.edges[key] for key in ordered_keys) / len(ordered_keys)
    communities = louvain_communities(graph, seed=seed)

    hccs: list[HCC] = []
    for comm in communities:
        if len(comm) < 2:
            continue
        comm_edges = {
            key: graph.edges[key]
            for key in ordered_keys
            if key[0] in comm and key[1] in comm
        }
        if not comm_edges:
            continue
        incident: dict[str, list[tuple[str, str]]] = {}
        for key in comm_edges:
            incident.setdefault(key[0], []).append(key)
            incident.setdefault(key[1], []).append(key)

        start = min(comm_edges, key=lambda key: (-comm_edges[key], key))
        in_candidate = {start}
        members = set(start)
        total = comm_edges[start]

        frontier: list[tuple[float, tuple[str, str]]] = []
        for node in sorted(members):
            for key in incident[node]:
                heapq.heappush(frontier, (-comm_edges[key], key))

        while frontier:
            negative_weight, key = heapq.heappop(frontier)
            if key in in_candidate:
                continue
            weight = -negative_weight
            old_mean = total / len(in_candidate)
            new_mean = (total + weight) / (len(in_candidate) + 1)
            if new_mean < g_mean or new_mean < old_mean * theta:
                break
            in_candidate.add(key)
            total += weight
            for node in key:
                if node not in members:
                    members.add(node)
                    for adjacent in incident[node]:
                        if adjacent not in in_candidate:
                            heapq.heappush(frontier, (-comm_edges[adjacent], adjacent))

        candidate = _hcc(len(hccs), {key: comm_edges[key] for key in in_candidate})
        if candidate.mew > g_mean:
            hccs.append(candidate)
    return hccs


def _components_of(retained: dict[tuple[str, str], float]) -> list[HCC]:
    """Connected components (>= 2 nodes) of the retained edge set."""
    adjacency: dict[str, set[str]] = {}
    for a, b in retained:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
    seen: set[str] = set()
    hccs: list[HCC] = []
    for node in sorted(adjacency):
        if node in seen:
            continue
        component = {node}
        queue = [node]
        while queue:
            current = queue.pop()
            for neighbor in adjacency[current]:
                if neighbor not in component:
                    component.add(neighbor)
                    queue.append(neighbor)
        seen.update(component)
        edges = {
            key: w
            for key, w in retained.items()
            if key[0] in component and key[1] in component
        }
        hccs.append(_hcc(len(hccs), edges))
    return hccs


def extract_knn(graph: CollapsedGraph) -> list[HCC]:
    """Keep edges ranking among the k heaviest of either endpoint.

    k = ceil(ln |V|). Communities are the connected components (>= 2 nodes)
    of the retained graph.
    """
    n = len(graph.nodes)
    if n == 0 or not graph.edges:
        return []
    k = math.ceil(math.log(n))
    if k <= 0:
        return []
    incident: dict[str, list[tuple[str, str]]] = {}
    for key in graph.edges:
        incident.setdefault(key[0], []).append(key)
        incident.setdefault(key[1], []).append(key)
    retained: dict[tuple[str, str], float] = {}
    for node in sorted(incident):
        ranked = sorted(incident[node], key=lambda key: (-graph.edges[key], key))
        for key in ranked[:k]:
            retained[key] = graph.edges[key]
    return _components_of(retained)


def extract_threshold(graph: CollapsedGraph, threshold: float = 0.1) -> list[HCC]:
    """Drop edges whose weight, normalized by the maximum, falls below
    the threshold (strictly); components of what remains are communities."""
    if not 0 < threshold <= 1:
        raise ContractError(f"threshold must be in (0, 1], got {threshold}")
    if not graph.edges:
        return []
    max_weight = max(graph.edges.values())
    retained = {
        key: w for key, w in graph.edges.items() if w / max_weight >= threshold
    }
    return _components_of(retained)


def run_extraction(graph: CollapsedGraph, params: ExtractionParams) -> list[HCC]:
    if params.method == "fsa_v":
        return extract_fsa_v(graph, theta=params.theta, seed=params.seed)
    if params.method == "knn":
        return extract_knn(graph)
    return extract_threshold(graph, threshold=params.threshold)


def write_hccs_csv(hccs: list[HCC], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["hcc_id", "account_id"])
        for hcc in hccs:
            for member in hcc.members:
                writer.writerow([hcc.id, member])


def read_hcc_members_csv(path: str) -> dict[int, set[str]]:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read communities: {exc}") from exc
    members: dict[int, set[str]] = {}
    with stream:
        for row in csv.DictReader(stream):
            members.setdefault(int(row["hcc_id"]), set()).add(row["account_id"])
    return members
