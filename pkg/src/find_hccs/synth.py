"""Synthetic corpora with planted coordinating groups, and recovery scoring.

Background accounts post independently at a configurable daily rate, with
retweet targets and hashtags drawn from heavy-tailed pools so ordinary
co-activity occurs by chance, as it does in real data. Planted groups act
in lockstep: in every window each participating member acts on the group's
shared target for that window.
"""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass, field
from random import Random
from typing import Mapping, Sequence

from .errors import ContractError, MalformedInputError
from .extract import HCC
from .ingest import Post

STRATEGIES = ("boost", "pollute", "bully")

# Background behavior mix, loosely matching observed corpora where roughly
# half of all traffic is retweets.
_RETWEET_SHARE = 0.55
_HASHTAG_SHARE = 0.5
_URL_SHARE = 0.2
_ZIPF_EXPONENT = 1.2


@dataclass(frozen=True)
class PlantedGroup:
    """A coordinating group to inject.

    Strategies: boost (co-retweet a fresh target each window), pollute
    (co-use a fresh hashtag each window), bully (reply into one shared
    conversation). Each member independently joins a window's actions with
    probability ``adherence``.
    """

    size: int
    strategy: str
    actions_per_window: int = 1
    adherence: float = 1.0

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ContractError(f"planted group size must be >= 2, got {self.size}")
        if self.strategy not in STRATEGIES:
            raise ContractError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )
        if self.actions_per_window < 1:
            raise ContractError("actions_per_window must be >= 1")
        if not 0.0 <= self.adherence <= 1.0:
            raise ContractError(f"adherence must be in [0, 1], got {self.adherence}")


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic corpus.

    ``background_post_rate`` is posts per account per day. Planted groups
    act once per ``gamma_minutes`` window, aligned to ``start_timestamp``,
    so their co-actions always share a window.
    """

    seed: int
    duration_minutes: int
    background_accounts: int
    background_post_rate: float
    planted: tuple[PlantedGroup, ...] = ()
    gamma_minutes: int = 15
    start_timestamp: int = 1_600_000_000

    def __init__(
        self,
        seed: int,
        duration_minutes: int,
        background_accounts: int,
        background_post_rate: float,
        planted: Sequence[PlantedGroup] = (),
        gamma_minutes: int = 15,
        start_timestamp: int = 1_600_000_000,
    ) -> None:
        if duration_minutes <= 0:
            raise ContractError("duration_minutes must be positive")
        if background_accounts < 0:
            raise ContractError("background_accounts must be >= 0")
        if background_post_rate < 0:
            raise ContractError("background_post_rate must be >= 0")
        if gamma_minutes <= 0:
            raise ContractError("gamma_minutes must be positive")
        if duration_minutes < gamma_minutes and planted:
            raise ContractError("duration shorter than one window cannot hold planted activity")
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "duration_minutes", duration_minutes)
        object.__setattr__(self, "background_accounts", background_accounts)
        object.__setattr__(self, "background_post_rate", background_post_rate)
        object.__setattr__(self, "planted", tuple(planted))
        object.__setattr__(self, "gamma_minutes", gamma_minutes)
        object.__setattr__(self, "start_timestamp", start_timestamp)


class _ZipfPool:
    """Heavy-tailed sampler over ranked items."""

    def __init__(self, size: int, exponent: float = _ZIPF_EXPONENT) -> None:
        cumulative: list[float] = []
        total = 0.0
        for rank in range(1, size + 1):
            total += 1.0 / rank**exponent
            cumulative.append(total)
        self._cumulative = cumulative
        self._total = total

    def sample(self, rng: Random) -> int:
        return bisect.bisect_left(self._cumulative, rng.random() * self._total)


def generate_corpus(spec: SynthSpec) -> tuple[list[Post], dict[str, set[str]]]:
    """Build (posts, truth) where truth maps group id to planted members.

    Deterministic for a given spec. Planted members perform only their
    group's coordinated actions; background accounts never act on planted
    targets, so ground truth stays unambiguous while background co-activity
    still produces a realistic evidence network.
    """
    rng = Random(spec.seed)
    posts: list[Post] = []
    counter = 0

    def next_post_id() -> str:
        nonlocal counter
        counter += 1
        return f"s{counter:08d}"

    duration_seconds = spec.duration_minutes * 60
    rate_per_second = spec.background_post_rate / 86400.0
    target_pool = _ZipfPool(max(20, spec.background_accounts // 4))
    hashtag_pool = _ZipfPool(max(20, spec.background_accounts // 10))

    for i in range(spec.background_accounts):
        account = f"bg{i:05d}"
        elapsed = 0.0
        while rate_per_second > 0:
            elapsed += rng.expovariate(rate_per_second)
            if elapsed >= duration_seconds:
                break
            ts = spec.start_timestamp + int(elapsed)
            if rng.random() < _RETWEET_SHARE:
                target = target_pool.sample(rng)
                posts.append(
                    Post(
                        post_id=next_post_id(),
                        author_id=account,
                        timestamp=ts,
                        text=f"sharing pop{target}",
                        reposted_post_id=f"pop{target:05d}",
                        reposted_author_id=f"src{target:05d}",
                    )
                )
            else:
                hashtags = []
                if rng.random() < _HASHTAG_SHARE:
                    hashtags = [
                        f"tag{hashtag_pool.sample(rng):04d}"
                        for _ in range(rng.randrange(1, 4))
                    ]
                urls = []
                if rng.random() < _URL_SHARE:
                    site = rng.randrange(25)
                    urls = [f"https://site{site:02d}.example/p/{counter}"]
                posts.append(
                    Post(
                        post_id=next_post_id(),
                        author_id=account,
                        timestamp=ts,
                        text=f"update {counter} from {account}",
                        hashtags=hashtags,
                        urls=urls,
                        domains=[f"site{site:02d}.example"] if urls else [],
                    )
                )

    truth: dict[str, set[str]] = {}
    window_seconds = spec.gamma_minutes * 60
    window_count = spec.duration_minutes // spec.gamma_minutes
    for gi, group in enumerate(spec.planted):
        group_id = f"g{gi}"
        members = [f"{group_id}m{j:02d}" for j in range(group.size)]
        truth[group_id] = set(members)
        for window in range(window_count):
            window_start = spec.start_timestamp + window * window_seconds
            for action in range(group.actions_per_window):
                token = f"{group_id}w{window}a{action}"
                for member in members:
                    if rng.random() >= group.adherence:
                        continue
                    ts = window_start + rng.randrange(window_seconds)
                    if group.strategy == "boost":
                        posts.append(
                            Post(
                                post_id=next_post_id(),
                                author_id=member,
                                timestamp=ts,
                                text=f"amplify {token}",
                                reposted_post_id=f"boost-{token}",
                                reposted_author_id=f"seed-{group_id}",
                            )
                        )
                    elif group.strategy == "pollute":
                        posts.append(
                            Post(
                                post_id=next_post_id(),
                                author_id=member,
                                timestamp=ts,
                                text=f"join the wave {token}",
                                hashtags=[f"ptag-{token}"],
                            )
                        )
                    else:  # bully
                        posts.append(
                            Post(
                                post_id=next_post_id(),
                                author_id=member,
                                timestamp=ts,
                                text=f"pile on {token}",
                                replied_post_id=f"victim-thread-{group_id}",
                                replied_author_id=f"victim-{group_id}",
                            )
                        )

    posts.sort(key=lambda p: p.timestamp)
    return posts, truth


@dataclass
class GroupScore:
    group_id: str
    size: int
    best_hcc_id: int | None
    jaccard: float
    precision: float
    recall: float


@dataclass
class RecoveryReport:
    groups: list[GroupScore] = field(default_factory=list)
    overall: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "groups": [
                {
                    "group_id": g.group_id,
                    "size": g.size,
                    "best_hcc_id": g.best_hcc_id,
                    "jaccard": g.jaccard,
                    "precision": g.precision,
                    "recall": g.recall,
                }
                for g in self.groups
            ],
            "overall": dict(self.overall),
        }


def score_recovery(
    detected: Mapping[int, set[str]] | Sequence[HCC],
    truth: Mapping[str, set[str]],
) -> RecoveryReport:
    """Match each planted group to its best-Jaccard detected community.

    Per group: Jaccard, member precision, and member recall against the
    best match. Overall: precision/recall over the unions of detected and
    planted members; an empty detection is flagged and reported as zero
    precision rather than a division error.
    """
    if isinstance(detected, Mapping):
        communities = {int(k): set(v) for k, v in detected.items()}
    else:
        communities = {h.id: set(h.members) for h in detected}

    report = RecoveryReport()
    for group_id in sorted(truth):
        members = set(truth[group_id])
        best_id = None
        best_jaccard = -1.0
        for hcc_id in sorted(communities):
            union = len(members | communities[hcc_id])
            score = len(members & communities[hcc_id]) / union if union else 1.0
            if score > best_jaccard:
                best_jaccard = score
                best_id = hcc_id
        if best_id is None:
            report.groups.append(
                GroupScore(group_id, len(members), None, 0.0, 0.0, 0.0)
            )
            continue
        matched = communities[best_id]
        common = len(members & matched)
        report.groups.append(
            GroupScore(
                group_id=group_id,
                size=len(members),
                best_hcc_id=best_id,
                jaccard=best_jaccard,
                precision=common / len(matched) if matched else 0.0,
                recall=common / len(members) if members else 0.0,
            )
        )

    detected_union: set[str] = set()
    for members in communities.values():
        detected_union.update(members)
    truth_union: set[str] = set()
    for members in truth.values():
        truth_union.update(members)
    common = len(detected_union & truth_union)
    report.overall = {
        "precision": common / len(detected_union) if detected_union else 0.0,
        "recall": common / len(truth_union) if truth_union else 0.0,
        "no_detected_members": not detected_union,
    }
    return report


def write_truth_csv(truth: Mapping[str, set[str]], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["group_id", "account_id"])
        for group_id in sorted(truth):
            for account in sorted(truth[group_id]):
                writer.writerow([group_id, account])


def read_truth_csv(path: str) -> dict[str, set[str]]:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read truth file: {exc}") from exc
    truth: dict[str, set[str]] = {}
    with stream:
        for row in csv.DictReader(stream):
            truth.setdefault(row["group_id"], set()).add(row["account_id"])
    return truth
