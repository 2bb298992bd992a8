"""Feature vectors describing accounts and the groups they belong to.

Thirteen features characterize an account's own behavior; seventeen more
describe a group's collective footprint, including an activity network of
the group's posts and three proportions normalized by corpus-wide totals.
The exported CSV feeds one-class and PU classification downstream.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError
from .ingest import Post, resolve_conversations

ACCOUNT_FEATURE_COLUMNS = (
    "post_count",
    "repost_count",
    "reply_count",
    "posting_rate",
    "unique_mentions",
    "mention_count",
    "unique_hashtags",
    "hashtag_uses",
    "unique_urls",
    "url_uses",
    "default_profile_image",
    "profile_description_length",
    "profile_url_length",
)

GROUP_FEATURE_COLUMNS = (
    "group_post_count",
    "group_member_count",
    "group_interaction_count",
    "group_user_count",
    "group_author_count",
    "group_unique_hashtags",
    "group_hashtag_uses",
    "group_unique_urls",
    "group_url_uses",
    "group_repost_count",
    "group_quote_count",
    "group_mention_count",
    "group_reply_count",
    "group_in_conversation_count",
    "group_repost_proportion",
    "group_mention_proportion",
    "group_reply_proportion",
)

LABELS = ("coordinating", "unlabeled")


@dataclass
class ActivityNetwork:
    """Multigraph of a group's activity.

    Nodes map namespaced ids ("account:x", "hashtag:t", "url:u") to their
    type; edges are (source, target, edge_type, timestamp, source_post_id)
    tuples, one per interaction event.
    """

    nodes: dict[str, str] = field(default_factory=dict)
    edges: list[tuple[str, str, str, int, str]] = field(default_factory=list)


@dataclass
class CorpusTotals:
    """Corpus-wide denominators and per-account targeted-interaction counts."""

    span_minutes: float
    total_reposts: int
    total_mentions: int
    total_replies: int
    reposts_of: Counter
    mentions_of: Counter
    replies_to: Counter


@dataclass
class FeatureVector:
    account_id: str
    group_id: str
    label: str
    account_features: dict[str, float]
    group_features: dict[str, float]


def corpus_activity_profile(posts: Sequence[Post]) -> CorpusTotals:
    """One pass over the corpus collecting global totals.

    The collection span is floored at one second so posting rates stay
    finite on degenerate single-instant corpora.
    """
    reposts_of: Counter = Counter()
    mentions_of: Counter = Counter()
    replies_to: Counter = Counter()
    total_reposts = total_mentions = total_replies = 0
    for post in posts:
        if post.reposted_post_id is not None:
            total_reposts += 1
            if post.reposted_author_id is not None:
                reposts_of[post.reposted_author_id] += 1
        for mentioned in post.mentioned_ids:
            total_mentions += 1
            mentions_of[mentioned] += 1
        if post.replied_post_id is not None:
            total_replies += 1
            if post.replied_author_id is not None:
                replies_to[post.replied_author_id] += 1
    if posts:
        span_seconds = max(
            max(p.timestamp for p in posts) - min(p.timestamp for p in posts), 1
        )
    else:
        span_seconds = 1
    return CorpusTotals(
        span_minutes=span_seconds / 60.0,
        total_reposts=total_reposts,
        total_mentions=total_mentions,
        total_replies=total_replies,
        reposts_of=reposts_of,
        mentions_of=mentions_of,
        replies_to=replies_to,
    )


def build_activity_network(
    members: set[str],
    posts: Sequence[Post],
    conversation_roots: dict[str, str] | None = None,
) -> ActivityNetwork:
    """Activity multigraph derived from the members' posts.

    Account targets (mentioned, reposted, replied-to, quoted authors) are
    added as nodes even when outside the group. Quote and in-conversation
    edges need the quoted post or conversation root present in the corpus
    to name an author; otherwise the edge is skipped.
    """
    if conversation_roots is None:
        conversation_roots = resolve_conversations(list(posts))
    post_index = {p.post_id: p for p in posts}

    network = ActivityNetwork()
    for member in sorted(members):
        network.nodes[f"account:{member}"] = "account"

    def account_node(account: str) -> str:
        node = f"account:{account}"
        network.nodes.setdefault(node, "account")
        return node

    for post in posts:
        if post.author_id not in members:
            continue
        source = account_node(post.author_id)
        ts, pid = post.timestamp, post.post_id
        for tag in post.hashtags:
            node = f"hashtag:{tag}"
            network.nodes.setdefault(node, "hashtag")
            network.edges.append((source, node, "hashtag-use", ts, pid))
        for url in post.urls:
            node = f"url:{url}"
            network.nodes.setdefault(node, "url")
            network.edges.append((source, node, "url-use", ts, pid))
        for mentioned in post.mentioned_ids:
            network.edges.append((source, account_node(mentioned), "mention", ts, pid))
        if post.reposted_post_id is not None and post.reposted_author_id is not None:
            network.edges.append(
                (source, account_node(post.reposted_author_id), "repost", ts, pid)
            )
        if post.quoted_post_id is not None:
            quoted = post_index.get(post.quoted_post_id)
            if quoted is not None:
                network.edges.append(
                    (source, account_node(quoted.author_id), "quote", ts, pid)
                )
        if post.replied_post_id is not None:
            if post.replied_author_id is not None:
                network.edges.append(
                    (source, account_node(post.replied_author_id), "reply", ts, pid)
                )
            root = conversation_roots.get(pid)
            if root is not None:
                root_post = post_index.get(root)
                if root_post is not None:
                    network.edges.append(
                        (
                            source,
                            account_node(root_post.author_id),
                            "in-conversation",
                            ts,
                            pid,
                        )
                    )
    return network


def account_features(posts_of_account: Sequence[Post], span_minutes: float) -> dict[str, float]:
    """The thirteen per-account features.

    Profile fields come from the account's earliest post; an account with no
    posts scores zero everywhere.
    """
    if not posts_of_account:
        return {name: 0.0 for name in ACCOUNT_FEATURE_COLUMNS}
    ordered = sorted(posts_of_account, key=lambda p: p.timestamp)
    first = ordered[0]
    mentions = [m for p in ordered for m in p.mentioned_ids]
    hashtags = [t for p in ordered for t in p.hashtags]
    urls = [u for p in ordered for u in p.urls]
    return {
        "post_count": float(len(ordered)),
        "repost_count": float(sum(1 for p in ordered if p.reposted_post_id is not None)),
        "reply_count": float(sum(1 for p in ordered if p.replied_post_id is not None)),
        "posting_rate": len(ordered) / span_minutes,
        "unique_mentions": float(len(set(mentions))),
        "mention_count": float(len(mentions)),
        "unique_hashtags": float(len(set(hashtags))),
        "hashtag_uses": float(len(hashtags)),
        "unique_urls": float(len(set(urls))),
        "url_uses": float(len(urls)),
        "default_profile_image": 1.0 if first.profile_default_image else 0.0,
        "profile_description_length": float(len(first.profile_description or "")),
        "profile_url_length": float(len(first.profile_url or "")),
    }


def group_features(
    members: set[str],
    member_posts: Sequence[Post],
    network: ActivityNetwork,
    totals: CorpusTotals,
) -> dict[str, float]:
    """The seventeen per-group features.

    Proportions divide member-targeted interaction counts by corpus-wide
    totals; a zero denominator yields 0.0.
    """
    hashtags = [t for p in member_posts for t in p.hashtags]
    urls = [u for p in member_posts for u in p.urls]
    edge_kinds = Counter(edge[2] for edge in network.edges)
    authors = {p.author_id for p in member_posts}

    def proportion(counter: Counter, denominator: int) -> float:
        if denominator == 0:
            return 0.0
        return sum(counter[m] for m in members) / denominator

    return {
        "group_post_count": float(len(member_posts)),
        "group_member_count": float(len(members)),
        "group_interaction_count": float(len(network.edges)),
        "group_user_count": float(
            sum(1 for t in network.nodes.values() if t == "account")
        ),
        "group_author_count": float(len(authors & members)),
        "group_unique_hashtags": float(len(set(hashtags))),
        "group_hashtag_uses": float(len(hashtags)),
        "group_unique_urls": float(len(set(urls))),
        "group_url_uses": float(len(urls)),
        "group_repost_count": float(
            sum(1 for p in member_posts if p.reposted_post_id is not None)
        ),
        "group_quote_count": float(
            sum(1 for p in member_posts if p.quoted_post_id is not None)
        ),
        "group_mention_count": float(edge_kinds.get("mention", 0)),
        "group_reply_count": float(
            sum(1 for p in member_posts if p.replied_post_id is not None)
        ),
        "group_in_conversation_count": float(edge_kinds.get("in-conversation", 0)),
        "group_repost_proportion": proportion(totals.reposts_of, totals.total_reposts),
        "group_mention_proportion": proportion(totals.mentions_of, totals.total_mentions),
        "group_reply_proportion": proportion(totals.replies_to, totals.total_replies),
    }


def compute_feature_vectors(
    groups: Sequence[tuple[str, str, set[str]]], posts: Sequence[Post]
) -> list[FeatureVector]:
    """Feature rows for every (group, member) pair.

    ``groups`` holds (group_id, label, members) with label one of
    "coordinating" or "unlabeled". Rows come back sorted by
    (group_id, account_id).
    """
    totals = corpus_activity_profile(posts)
    conversation_roots = resolve_conversations(list(posts))
    by_author: dict[str, list[Post]] = {}
    for post in posts:
        by_author.setdefault(post.author_id, []).append(post)

    vectors: list[FeatureVector] = []
    for group_id, label, members in sorted(groups, key=lambda g: g[0]):
        if label not in LABELS:
            raise ContractError(f"unknown label {label!r}; expected one of {LABELS}")
        member_posts = [p for m in sorted(members) for p in by_author.get(m, [])]
        network = build_activity_network(members, posts, conversation_roots)
        shared_group_features = group_features(members, member_posts, network, totals)
        for account in sorted(members):
            vectors.append(
                FeatureVector(
                    account_id=account,
                    group_id=group_id,
                    label=label,
                    account_features=account_features(
                        by_author.get(account, []), totals.span_minutes
                    ),
                    group_features=dict(shared_group_features),
                )
            )
    return vectors


def _format_value(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def export_feature_vectors(vectors: Iterable[FeatureVector], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(
            ["account_id", "group_id", "label"]
            + list(ACCOUNT_FEATURE_COLUMNS)
            + list(GROUP_FEATURE_COLUMNS)
        )
        for vector in vectors:
            row = [vector.account_id, vector.group_id, vector.label]
            row += [_format_value(vector.account_features[c]) for c in ACCOUNT_FEATURE_COLUMNS]
            row += [_format_value(vector.group_features[c]) for c in GROUP_FEATURE_COLUMNS]
            writer.writerow(row)
