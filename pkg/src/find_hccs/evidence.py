"""Coordination evidence: discrete time windows and pairwise co-activity.

Interactions are bucketed into half-open windows of fixed length. Within a
window, two accounts acting on the same target earn evidence weight equal to
the smaller of their action counts on that target; weights sum over targets.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .errors import ContractError, MalformedInputError
from .ingest import (
    CONV,
    DOMAIN,
    HASHTAG,
    MENTION,
    QUOTE,
    REPOST,
    URL,
    Interaction,
)

# Criterion name -> the interaction kind it pairs on.
CRITERION_KINDS = {
    "co-retweet": REPOST,
    "co-hashtag": HASHTAG,
    "co-url": URL,
    "co-domain": DOMAIN,
    "co-mention": MENTION,
    "co-conv": CONV,
}


@dataclass(frozen=True)
class WindowConfig:
    """Discrete windowing: index = floor((t - origin) / window_seconds).

    ``gamma_seconds`` overrides the minute-based length for sub-minute
    analyses; otherwise the window is gamma_minutes * 60 seconds long.
    """

    gamma_minutes: int
    origin: int = 0
    gamma_seconds: int | None = None

    def __post_init__(self) -> None:
        if self.gamma_seconds is not None:
            if self.gamma_seconds <= 0:
                raise ContractError("gamma_seconds must be positive")
        elif self.gamma_minutes <= 0:
            raise ContractError("gamma_minutes must be positive")

    @property
    def window_seconds(self) -> int:
        if self.gamma_seconds is not None:
            return self.gamma_seconds
        return self.gamma_minutes * 60


@dataclass(frozen=True)
class CriterionSpec:
    """A coordination criterion; quotes may fold into co-retweet."""

    name: str
    include_quotes_as_reposts: bool = False

    def __post_init__(self) -> None:
        if self.name not in CRITERION_KINDS:
            raise ContractError(
                f"unknown criterion {self.name!r}; expected one of "
                f"{sorted(CRITERION_KINDS)}"
            )
        if self.include_quotes_as_reposts and self.name != "co-retweet":
            raise ContractError("include_quotes_as_reposts applies to co-retweet only")

    @property
    def kind(self) -> str:
        return CRITERION_KINDS[self.name]


class EvidencePair(NamedTuple):
    """Co-activity weight for one account pair in one window.

    account_a < account_b lexicographically; weight is a positive integer.
    Tuple-based because evidence lists run to millions of rows.
    """

    window_index: int
    criterion: str
    account_a: str
    account_b: str
    weight: int


class EvidenceDetail(NamedTuple):
    """One (pair, target) contribution to an EvidencePair's weight."""

    window_index: int
    criterion: str
    account_a: str
    account_b: str
    target: str
    weight: int


def assign_window(timestamp: int, config: WindowConfig) -> int:
    if timestamp < config.origin:
        raise ContractError(
            f"timestamp {timestamp} precedes window origin {config.origin}"
        )
    return (timestamp - config.origin) // config.window_seconds


def filter_interactions(
    interactions: Iterable[Interaction], criterion: CriterionSpec
) -> list[Interaction]:
    """Keep interactions the criterion pairs on, preserving order.

    With include_quotes_as_reposts, QUOTE rows are rewritten as REPOST rows
    targeting the quoted post.
    """
    kind = criterion.kind
    out: list[Interaction] = []
    for row in interactions:
        if row.kind == kind:
            out.append(row)
        elif (
            criterion.include_quotes_as_reposts
            and kind == REPOST
            and row.kind == QUOTE
        ):
            out.append(
                Interaction(REPOST, row.actor, row.target, row.timestamp, row.source_post_id)
            )
    return out


def find_coordination(
    interactions: Sequence[Interaction],
    criterion: CriterionSpec,
    window_config: WindowConfig,
    details: bool = False,
):
    """Pairwise co-activity per window for one criterion.

    Returns EvidencePairs sorted by (window, account_a, account_b); with
    ``details`` also returns per-target EvidenceDetail rows in the same
    order. Interactions of other kinds are ignored.
    """
    rows = filter_interactions(interactions, criterion)

    # (window, target) -> actor -> action count
    buckets: dict[tuple[int, str], dict[str, int]] = {}
    for row in rows:
        window = assign_window(row.timestamp, window_config)
        counts = buckets.setdefault((window, row.target), {})
        counts[row.actor] = counts.get(row.actor, 0) + 1

    pair_weights: dict[tuple[int, str, str], int] = {}
    detail_rows: list[EvidenceDetail] = []
    for (window, target), counts in buckets.items():
        if len(counts) < 2:
            continue
        for a, b in combinations(sorted(counts), 2):
            weight = min(counts[a], counts[b])
            key = (window, a, b)
            pair_weights[key] = pair_weights.get(key, 0) + weight
            if details:
                detail_rows.append(
                    EvidenceDetail(window, criterion.name, a, b, target, weight)
                )

    pairs = [
        EvidencePair(window, criterion.name, a, b, weight)
        for (window, a, b), weight in sorted(pair_weights.items())
    ]
    if details:
        detail_rows.sort(
            key=lambda d: (d.window_index, d.account_a, d.account_b, d.target)
        )
        return pairs, detail_rows
    return pairs


def write_evidence_csv(pairs: Iterable[EvidencePair], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["window_index", "criterion", "account_a", "account_b", "weight"])
        for p in pairs:
            writer.writerow([p.window_index, p.criterion, p.account_a, p.account_b, p.weight])


def read_evidence_csv(path: str) -> list[EvidencePair]:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read evidence: {exc}") from exc
    out: list[EvidencePair] = []
    with stream:
        for row in csv.DictReader(stream):
            out.append(
                EvidencePair(
                    window_index=int(row["window_index"]),
                    criterion=row["criterion"],
                    account_a=row["account_a"],
                    account_b=row["account_b"],
                    weight=int(row["weight"]),
                )
            )
    return out


def write_evidence_details_csv(rows: Iterable[EvidenceDetail], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(
            ["window_index", "criterion", "account_a", "account_b", "target", "weight"]
        )
        for d in rows:
            writer.writerow(
                [d.window_index, d.criterion, d.account_a, d.account_b, d.target, d.weight]
            )


def read_evidence_details_csv(path: str) -> list[EvidenceDetail]:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read evidence details: {exc}") from exc
    out: list[EvidenceDetail] = []
    with stream:
        for row in csv.DictReader(stream):
            out.append(
                EvidenceDetail(
                    window_index=int(row["window_index"]),
                    criterion=row["criterion"],
                    account_a=row["account_a"],
                    account_b=row["account_b"],
                    target=row["target"],
                    weight=int(row["weight"]),
                )
            )
    return out
