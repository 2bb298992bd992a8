"""Descriptive metrics for judging detected communities.

Nothing here changes detection results; these measures describe membership
stability across runs, how inward-facing a group's interactions are, how
narrow its content is, and what it acted on, plus a seeded random control
group sampler for comparisons.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError
from .evidence import EvidenceDetail
from .extract import HCC
from .ingest import Post

ENTROPY_KINDS = (
    "hashtag",
    "url-domain",
    "mentioned-account",
    "retweeted-account",
    "retweeted-tweet",
)


def jaccard(x: set[str], y: set[str]) -> float:
    """|X n Y| / |X u Y|; two empty sets count as identical (1.0)."""
    union = len(x | y)
    if union == 0:
        return 1.0
    return len(x & y) / union


def overlap(x: set[str], y: set[str]) -> float:
    """|X n Y| / min(|X|, |Y|); undefined when either set is empty."""
    smaller = min(len(x), len(y))
    if smaller == 0:
        raise ContractError("overlap is undefined when either set is empty")
    return len(x & y) / smaller


@dataclass
class SimilarityMatrix:
    labels: list[str]
    values: list[list[float]]


def membership_similarity_matrix(
    runs: Sequence[tuple[str, set[str]]], measure: str = "jaccard"
) -> tuple[SimilarityMatrix, list[list[int]]]:
    """Pairwise account-set similarity across runs, plus raw common counts."""
    if measure == "jaccard":
        fn = jaccard
    elif measure == "overlap":
        fn = overlap
    else:
        raise ContractError(f"unknown similarity measure {measure!r}")
    labels = [label for label, _ in runs]
    sets = [members for _, members in runs]
    size = len(runs)
    values = [[0.0] * size for _ in range(size)]
    common = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            values[i][j] = fn(sets[i], sets[j])
            common[i][j] = len(sets[i] & sets[j])
    return SimilarityMatrix(labels=labels, values=values), common


def internal_ratio(members: set[str], posts: Sequence[Post], kind: str) -> float:
    """Fraction of members' reposts (or mentions) that target members.

    Reposts lacking a reposted author id cannot be attributed and are left
    out of both numerator and denominator. Returns 0.0 when members produced
    no interactions of the kind.
    """
    if kind not in ("repost", "mention"):
        raise ContractError(f"unknown internal-ratio kind {kind!r}")
    internal = 0
    total = 0
    for post in posts:
        if post.author_id not in members:
            continue
        if kind == "repost":
            if post.reposted_post_id is None or post.reposted_author_id is None:
                continue
            total += 1
            if post.reposted_author_id in members:
                internal += 1
        else:
            for mentioned in post.mentioned_ids:
                total += 1
                if mentioned in members:
                    internal += 1
    if total == 0:
        return 0.0
    return internal / total


def _entropy_values(members: set[str], posts: Sequence[Post], kind: str) -> list[str]:
    values: list[str] = []
    for post in posts:
        if post.author_id not in members:
            continue
        if kind == "hashtag":
            values.extend(post.hashtags)
        elif kind == "url-domain":
            values.extend(post.domains)
        elif kind == "mentioned-account":
            values.extend(post.mentioned_ids)
        elif kind == "retweeted-account":
            if post.reposted_author_id is not None:
                values.append(post.reposted_author_id)
        elif kind == "retweeted-tweet":
            if post.reposted_post_id is not None:
                values.append(post.reposted_post_id)
    return values


def feature_entropy(members: set[str], posts: Sequence[Post], kind: str) -> float | None:
    """Shannon entropy (bits) of a feature's usage distribution.

    None when the members never used the feature, so callers can omit the
    row rather than fake a zero.
    """
    if kind not in ENTROPY_KINDS:
        raise ContractError(f"unknown entropy kind {kind!r}; expected one of {ENTROPY_KINDS}")
    values = _entropy_values(members, posts, kind)
    if not values:
        return None
    counts = Counter(values)
    total = sum(counts.values())
    bits = 0.0
    for value in sorted(counts):
        p = counts[value] / total
        bits -= p * math.log2(p)
    return bits


def entropy_report(hccs: Sequence[HCC], posts: Sequence[Post]) -> list[dict]:
    rows: list[dict] = []
    for hcc in hccs:
        members = set(hcc.members)
        for kind in ENTROPY_KINDS:
            bits = feature_entropy(members, posts, kind)
            if bits is not None:
                rows.append({"hcc_id": hcc.id, "kind": kind, "entropy_bits": bits})
    return rows


def _ngram_counts(text: str, n: int) -> Counter:
    if len(text) < n:
        return Counter()
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def _cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = 0.0
    for gram in sorted(a.keys() & b.keys()):
        dot += a[gram] * b[gram]
    norm_a = math.sqrt(math.fsum(v * v for _, v in sorted(a.items())))
    norm_b = math.sqrt(math.fsum(v * v for _, v in sorted(b.items())))
    return dot / (norm_a * norm_b)


def content_similarity_matrix(
    hccs: Sequence[HCC], posts: Sequence[Post], ngram: int = 5
) -> SimilarityMatrix:
    """Pairwise character n-gram cosine similarity of members' writing.

    Each account's document is its posts' text joined by newlines in
    timestamp order. Accounts are ordered so each community's members sit
    together: communities by descending size then id, members sorted.
    Documents shorter than the n-gram width become zero vectors: similarity
    0 against everything, 1 with themselves.
    """
    ordered = sorted(hccs, key=lambda h: (-len(h.members), h.id))
    labels: list[str] = []
    for hcc in ordered:
        labels.extend(sorted(hcc.members))

    wanted = set(labels)
    texts: dict[str, list[tuple[int, str]]] = {label: [] for label in labels}
    for post in posts:
        if post.author_id in wanted:
            texts[post.author_id].append((post.timestamp, post.text))
    vectors: dict[str, Counter] = {}
    for label in labels:
        parts = [text for _, text in sorted(texts[label], key=lambda item: item[0])]
        vectors[label] = _ngram_counts("\n".join(parts), ngram)

    size = len(labels)
    values = [[0.0] * size for _ in range(size)]
    for i in range(size):
        values[i][i] = 1.0
        for j in range(i + 1, size):
            sim = _cosine(vectors[labels[i]], vectors[labels[j]])
            values[i][j] = sim
            values[j][i] = sim
    return SimilarityMatrix(labels=labels, values=values)


def random_baseline(
    hccs: Sequence[HCC], all_accounts: set[str], seed: int
) -> list[tuple[str, set[str]]]:
    """Random control groups matching the communities' size profile.

    Sampled without replacement from accounts outside every community, so
    the groups are disjoint from members and from each other. Deterministic
    for a given seed.
    """
    import random as _random

    members: set[str] = set()
    for hcc in hccs:
        members.update(hcc.members)
    pool = sorted(all_accounts - members)
    need = sum(len(hcc.members) for hcc in hccs)
    if need > len(pool):
        raise ContractError(
            f"baseline needs {need} non-member accounts but only {len(pool)} exist"
        )
    rng = _random.Random(seed)
    rng.shuffle(pool)
    groups: list[tuple[str, set[str]]] = []
    cursor = 0
    for hcc in hccs:
        size = len(hcc.members)
        groups.append((f"r{hcc.id}", set(pool[cursor : cursor + size])))
        cursor += size
    return groups


@dataclass
class CooccurrenceGraph:
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)


def hashtag_cooccurrence(
    posts: Sequence[Post],
    min_edge_weight: int = 1,
    excluded: Iterable[str] = (),
) -> CooccurrenceGraph:
    """Hashtag pairs weighted by the number of posts using both.

    A pair counts once per post however often the tags repeat inside it.
    Excluded tags (e.g. the tags a dataset was collected with) disappear
    from nodes and edges; edges lighter than min_edge_weight are dropped.
    """
    excluded_set = set(excluded)
    graph = CooccurrenceGraph()
    weights: dict[tuple[str, str], int] = {}
    for post in posts:
        tags = sorted(set(post.hashtags) - excluded_set)
        graph.nodes.update(tags)
        for i in range(len(tags)):
            for j in range(i + 1, len(tags)):
                key = (tags[i], tags[j])
                weights[key] = weights.get(key, 0) + 1
    graph.edges = {
        key: count for key, count in weights.items() if count >= min_edge_weight
    }
    return graph


def activity_timeline(
    members: set[str], posts: Sequence[Post], bin_seconds: int
) -> list[tuple[int, int]]:
    """Member post counts per fixed-width bin across the whole corpus span.

    Bins run from the corpus' earliest to latest timestamp; bins with no
    member activity appear explicitly with count zero.
    """
    if bin_seconds <= 0:
        raise ContractError(f"bin_seconds must be positive, got {bin_seconds}")
    if not posts:
        raise ContractError("activity timeline needs a nonempty corpus")
    start = min(p.timestamp for p in posts)
    end = max(p.timestamp for p in posts)
    bins = (end - start) // bin_seconds + 1
    counts = [0] * bins
    for post in posts:
        if post.author_id in members:
            counts[(post.timestamp - start) // bin_seconds] += 1
    return [(start + i * bin_seconds, counts[i]) for i in range(bins)]


@dataclass
class ReasonNetwork:
    """Two-level view: accounts tied by coordination, and what caused it."""

    nodes: dict[str, dict] = field(default_factory=dict)
    edges: list[tuple[str, str, dict]] = field(default_factory=list)


def account_reason_network(
    hccs: Sequence[HCC], details: Sequence[EvidenceDetail] | None
) -> ReasonNetwork:
    """Graph of community members, their coordination ties, and the targets
    (reasons) that produced the evidence.

    Requires per-target evidence detail rows; raises a ContractError telling
    the caller to re-run the evidence stage with detail output when absent.
    Detail rows whose account pair does not sit inside a single community
    are ignored.
    """
    if details is None:
        raise ContractError(
            "account-reason network needs per-target evidence detail; "
            "re-run the evidence stage with detail output enabled"
        )
    network = ReasonNetwork()
    hcc_of: dict[str, int] = {}
    for hcc in hccs:
        for member in hcc.members:
            hcc_of[member] = hcc.id
            network.nodes[f"account:{member}"] = {
                "node_type": "account",
                "label": member,
                "hcc_id": hcc.id,
            }
    for hcc in hccs:
        for (a, b) in sorted(hcc.edges):
            network.edges.append(
                (
                    f"account:{a}",
                    f"account:{b}",
                    {"edge_type": "coordinates-with", "weight": hcc.edges[(a, b)]},
                )
            )

    caused: dict[tuple[str, str], float] = {}
    reasons: dict[str, dict] = {}
    for row in sorted(
        details, key=lambda d: (d.criterion, d.target, d.account_a, d.account_b)
    ):
        hcc_a = hcc_of.get(row.account_a)
        if hcc_a is None or hcc_a != hcc_of.get(row.account_b):
            continue
        reason_id = f"reason:{row.criterion}:{row.target}"
        reasons[reason_id] = {
            "node_type": "reason",
            "criterion": row.criterion,
            "label": row.target,
        }
        for account in (row.account_a, row.account_b):
            key = (f"account:{account}", reason_id)
            caused[key] = caused.get(key, 0.0) + row.weight
    for reason_id in sorted(reasons):
        network.nodes[reason_id] = reasons[reason_id]
    for (source, target) in sorted(caused):
        network.edges.append(
            (source, target, {"edge_type": "caused-by", "weight": caused[(source, target)]})
        )
    return network
