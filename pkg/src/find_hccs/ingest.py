"""Corpus ingestion: canonical post schema, parsing, and interaction extraction.

A corpus is a set of posts by accounts. Each post may carry several kinds of
interaction evidence (reposting, quoting, replying, mentioning, hashtags,
URLs). Parsing normalizes heterogeneous inputs into the canonical ``Post``
record; ``extract_interactions`` then flattens each post into zero or more
``Interaction`` rows that downstream stages consume.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, fields
from datetime import datetime
from typing import Iterable, Iterator
from urllib.parse import urlparse

from .errors import ContractError, EmptyCorpusError, MalformedInputError

# Interaction kinds. REPOST/QUOTE/REPLY/MENTION target accounts or posts the
# author engaged with; HASHTAG/URL/DOMAIN target tokens the author used; CONV
# targets the root of the reply tree the post belongs to.
REPOST = "REPOST"
QUOTE = "QUOTE"
REPLY = "REPLY"
MENTION = "MENTION"
HASHTAG = "HASHTAG"
URL = "URL"
DOMAIN = "DOMAIN"
CONV = "CONV"

INTERACTION_KINDS = frozenset(
    {REPOST, QUOTE, REPLY, MENTION, HASHTAG, URL, DOMAIN, CONV}
)

PARSE_FORMATS = ("canonical-jsonl", "canonical-csv", "twitter-v1.1-jsonl")

_LIST_FIELDS = ("hashtags", "mentioned_ids", "urls")
_OPTIONAL_ID_FIELDS = (
    "reposted_post_id",
    "reposted_author_id",
    "quoted_post_id",
    "replied_post_id",
    "replied_author_id",
)


@dataclass
class Post:
    """One post in canonical form.

    ``domains`` is always derived from ``urls`` and never read from input.
    The profile fields describe the author at posting time and only feed
    account-level features; absent values stay None.
    """

    post_id: str
    author_id: str
    timestamp: int
    text: str = ""
    hashtags: list[str] = field(default_factory=list)
    mentioned_ids: list[str] = field(default_factory=list)
    urls: list[str] = field(default_factory=list)
    domains: list[str] = field(default_factory=list)
    reposted_post_id: str | None = None
    reposted_author_id: str | None = None
    quoted_post_id: str | None = None
    replied_post_id: str | None = None
    replied_author_id: str | None = None
    profile_default_image: bool | None = None
    profile_description: str | None = None
    profile_url: str | None = None


@dataclass(frozen=True)
class Interaction:
    """A single (actor, target) event extracted from one post."""

    kind: str
    actor: str
    target: str
    timestamp: int
    source_post_id: str


@dataclass
class ParseResult:
    """Parsed corpus plus the count of records that were skipped."""

    posts: list[Post]
    skipped: int


def domain_of(url: str) -> str | None:
    """Hostname of a URL, lowercased, with any leading 'www.' removed."""
    try:
        host = urlparse(url.strip()).netloc
    except ValueError:
        return None
    host = host.lower().rstrip(".")
    if host.startswith("www.") and len(host) > 4:
        host = host[4:]
    return host or None


def _normalize_hashtag(tag: str) -> str:
    return tag.lstrip("#").lower()


def _coerce_id(value: object) -> str | None:
    if value is None:
        return None
    if isinstance(value, bool):
        return None
    if isinstance(value, (str, int)):
        text = str(value).strip()
        return text or None
    return None


def _coerce_timestamp(value: object) -> int | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            return None
    return None


def _coerce_str_list(value: object) -> list[str] | None:
    if value is None:
        return []
    if not isinstance(value, list):
        return None
    out: list[str] = []
    for item in value:
        coerced = _coerce_id(item)
        if coerced is None:
            return None
        out.append(coerced)
    return out


def post_from_record(record: dict) -> Post | None:
    """Build a canonical Post from a decoded record, or None if malformed."""
    if not isinstance(record, dict):
        return None
    post_id = _coerce_id(record.get("post_id"))
    author_id = _coerce_id(record.get("author_id"))
    timestamp = _coerce_timestamp(record.get("timestamp"))
    if post_id is None or author_id is None or timestamp is None:
        return None

    text = record.get("text", "")
    if text is None:
        text = ""
    if not isinstance(text, str):
        return None

    lists: dict[str, list[str]] = {}
    for name in _LIST_FIELDS:
        coerced = _coerce_str_list(record.get(name))
        if coerced is None:
            return None
        lists[name] = coerced

    hashtags = [t for t in (_normalize_hashtag(t) for t in lists["hashtags"]) if t]
    urls = lists["urls"]
    domains = [d for d in (domain_of(u) for u in urls) if d]

    optional: dict[str, str | None] = {}
    for name in _OPTIONAL_ID_FIELDS:
        optional[name] = _coerce_id(record.get(name))

    profile_default_image = record.get("profile_default_image")
    if profile_default_image is not None and not isinstance(profile_default_image, bool):
        profile_default_image = bool(profile_default_image in (1, "1", "true", "True"))
    profile_description = record.get("profile_description")
    if profile_description is not None and not isinstance(profile_description, str):
        profile_description = None
    profile_url = record.get("profile_url")
    if profile_url is not None and not isinstance(profile_url, str):
        profile_url = None

    return Post(
        post_id=post_id,
        author_id=author_id,
        timestamp=timestamp,
        text=text,
        hashtags=hashtags,
        mentioned_ids=lists["mentioned_ids"],
        urls=urls,
        domains=domains,
        profile_default_image=profile_default_image,
        profile_description=profile_description,
        profile_url=profile_url,
        **optional,
    )


def post_to_record(post: Post) -> dict:
    """Canonical JSON record for a Post.

    Empty lists, None optionals, and the derived ``domains`` field are
    omitted; re-parsing the record yields a field-equal Post.
    """
    record: dict = {
        "post_id": post.post_id,
        "author_id": post.author_id,
        "timestamp": post.timestamp,
    }
    if post.text:
        record["text"] = post.text
    for name in _LIST_FIELDS:
        value = getattr(post, name)
        if value:
            record[name] = value
    for name in _OPTIONAL_ID_FIELDS:
        value = getattr(post, name)
        if value is not None:
            record[name] = value
    if post.profile_default_image is not None:
        record["profile_default_image"] = post.profile_default_image
    if post.profile_description is not None:
        record["profile_description"] = post.profile_description
    if post.profile_url is not None:
        record["profile_url"] = post.profile_url
    return record


_TWITTER_TIME_FORMAT = "%a %b %d %H:%M:%S %z %Y"


def _twitter_record_to_canonical(record: dict) -> dict | None:
    """Map one Twitter v1.1 status object onto the canonical record shape."""
    if not isinstance(record, dict):
        return None
    user = record.get("user") or {}
    if not isinstance(user, dict):
        return None

    timestamp: int | None = None
    if "timestamp_ms" in record:
        try:
            timestamp = int(int(record["timestamp_ms"]) / 1000)
        except (TypeError, ValueError):
            timestamp = None
    if timestamp is None and isinstance(record.get("created_at"), str):
        try:
            parsed = datetime.strptime(record["created_at"], _TWITTER_TIME_FORMAT)
            timestamp = int(parsed.timestamp())
        except ValueError:
            timestamp = None
    if timestamp is None:
        return None

    extended = record.get("extended_tweet") or {}
    entities = extended.get("entities") or record.get("entities") or {}
    if not isinstance(entities, dict):
        entities = {}

    hashtags = [
        h.get("text", "")
        for h in entities.get("hashtags", [])
        if isinstance(h, dict)
    ]
    mentioned = [
        m.get("id_str") or m.get("id")
        for m in entities.get("user_mentions", [])
        if isinstance(m, dict)
    ]
    urls = [
        u.get("expanded_url") or u.get("url")
        for u in entities.get("urls", [])
        if isinstance(u, dict)
    ]

    canonical: dict = {
        "post_id": record.get("id_str") or record.get("id"),
        "author_id": user.get("id_str") or user.get("id"),
        "timestamp": timestamp,
        "text": extended.get("full_text")
        or record.get("full_text")
        or record.get("text")
        or "",
        "hashtags": [h for h in hashtags if h],
        "mentioned_ids": [m for m in mentioned if m],
        "urls": [u for u in urls if u],
    }

    retweeted = record.get("retweeted_status")
    if isinstance(retweeted, dict):
        canonical["reposted_post_id"] = retweeted.get("id_str") or retweeted.get("id")
        rt_user = retweeted.get("user") or {}
        if isinstance(rt_user, dict):
            canonical["reposted_author_id"] = rt_user.get("id_str") or rt_user.get("id")

    quoted_id = record.get("quoted_status_id_str")
    if quoted_id is None and isinstance(record.get("quoted_status"), dict):
        quoted_id = record["quoted_status"].get("id_str")
    if quoted_id is not None:
        canonical["quoted_post_id"] = quoted_id

    if record.get("in_reply_to_status_id_str"):
        canonical["replied_post_id"] = record["in_reply_to_status_id_str"]
    if record.get("in_reply_to_user_id_str"):
        canonical["replied_author_id"] = record["in_reply_to_user_id_str"]

    if "default_profile_image" in user:
        canonical["profile_default_image"] = bool(user.get("default_profile_image"))
    if isinstance(user.get("description"), str):
        canonical["profile_description"] = user["description"]
    if isinstance(user.get("url"), str):
        canonical["profile_url"] = user["url"]
    return canonical


def _iter_json_lines(path: str) -> Iterator[dict | None]:
    """Decoded objects per nonblank line; None marks an undecodable line."""
    try:
        stream = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot read input: {exc}") from exc
    with stream:
        for line in stream:
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                yield None


_CSV_FIELD_NAMES = [f.name for f in fields(Post) if f.name != "domains"]


def _csv_row_to_record(row: dict) -> dict:
    record: dict = {}
    for name, raw in row.items():
        if name is None or raw is None or raw == "":
            continue
        if name in _LIST_FIELDS:
            record[name] = raw.split("|")
        elif name == "profile_default_image":
            record[name] = raw in ("1", "true", "True")
        else:
            record[name] = raw
    return record


def parse_posts(path: str, fmt: str = "canonical-jsonl") -> ParseResult:
    """Parse a corpus file into timestamp-ordered canonical posts.

    Malformed records are counted and skipped. Raises MalformedInputError if
    the stream cannot be read and EmptyCorpusError if no record survives.
    """
    if fmt not in PARSE_FORMATS:
        raise ContractError(f"unknown input format {fmt!r}; expected one of {PARSE_FORMATS}")

    posts: list[Post] = []
    skipped = 0

    if fmt in ("canonical-jsonl", "twitter-v1.1-jsonl"):
        for record in _iter_json_lines(path):
            if fmt == "twitter-v1.1-jsonl" and record is not None:
                record = _twitter_record_to_canonical(record)
            post = post_from_record(record) if record is not None else None
            if post is None:
                skipped += 1
            else:
                posts.append(post)
    else:
        try:
            stream = open(path, "r", encoding="utf-8", newline="")
        except OSError as exc:
            raise MalformedInputError(f"cannot read input: {exc}") from exc
        with stream:
            reader = csv.DictReader(stream)
            for row in reader:
                post = post_from_record(_csv_row_to_record(row))
                if post is None:
                    skipped += 1
                else:
                    posts.append(post)

    if not posts:
        raise EmptyCorpusError(f"no valid posts in {path} ({skipped} records skipped)")
    posts.sort(key=lambda p: p.timestamp)
    return ParseResult(posts=posts, skipped=skipped)


def write_posts_jsonl(posts: Iterable[Post], path: str) -> None:
    with open(path, "w", encoding="utf-8") as out:
        for post in posts:
            out.write(json.dumps(post_to_record(post), sort_keys=True))
            out.write("\n")


def write_posts_csv(posts: Iterable[Post], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.DictWriter(out, fieldnames=_CSV_FIELD_NAMES)
        writer.writeheader()
        for post in posts:
            row: dict = {}
            for name in _CSV_FIELD_NAMES:
                value = getattr(post, name)
                if value is None or value == [] or value == "":
                    row[name] = ""
                elif name in _LIST_FIELDS:
                    row[name] = "|".join(value)
                elif name == "profile_default_image":
                    row[name] = "1" if value else "0"
                else:
                    row[name] = value
            writer.writerow(row)


def resolve_conversations(posts: list[Post]) -> dict[str, str]:
    """Map every post id to the root of its reply chain.

    A post with no parent maps to itself. A parent missing from the corpus is
    used as the root key for its chain. Reply cycles are broken at the first
    node revisited during the walk, which becomes the root.
    """
    parents = {p.post_id: p.replied_post_id for p in posts}
    roots: dict[str, str] = {}
    for post in posts:
        if post.post_id in roots:
            continue
        path: list[str] = []
        on_path: set[str] = set()
        node = post.post_id
        while True:
            if node in roots:
                root = roots[node]
                break
            if node in on_path:
                root = node  # cycle: first revisited node becomes the root
                break
            if node not in parents:
                root = node  # dangling parent id used as the chain's root key
                break
            path.append(node)
            on_path.add(node)
            parent = parents[node]
            if parent is None:
                root = node
                break
            node = parent
        for seen in path:
            roots[seen] = root
    return roots


def extract_interactions(
    posts: list[Post], conversation_roots: dict[str, str] | None = None
) -> list[Interaction]:
    """Flatten posts into interaction rows, in post order.

    Each post yields one row per hashtag, URL, derived domain, and mention,
    plus REPOST/QUOTE/REPLY rows when the corresponding ids are set and a
    CONV row targeting the resolved conversation root of replies. Authoring
    a conversation root yields no CONV row.
    """
    if conversation_roots is None:
        conversation_roots = resolve_conversations(posts)
    out: list[Interaction] = []
    for post in posts:
        ts = post.timestamp
        actor = post.author_id
        pid = post.post_id
        if post.reposted_post_id is not None:
            out.append(Interaction(REPOST, actor, post.reposted_post_id, ts, pid))
        if post.quoted_post_id is not None:
            out.append(Interaction(QUOTE, actor, post.quoted_post_id, ts, pid))
        if post.replied_post_id is not None:
            out.append(Interaction(REPLY, actor, post.replied_post_id, ts, pid))
            root = conversation_roots.get(pid, post.replied_post_id)
            out.append(Interaction(CONV, actor, root, ts, pid))
        for tag in post.hashtags:
            out.append(Interaction(HASHTAG, actor, tag, ts, pid))
        for url in post.urls:
            out.append(Interaction(URL, actor, url, ts, pid))
        for domain in post.domains:
            out.append(Interaction(DOMAIN, actor, domain, ts, pid))
        for mentioned in post.mentioned_ids:
            out.append(Interaction(MENTION, actor, mentioned, ts, pid))
    return out


def write_interactions_csv(interactions: Iterable[Interaction], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["kind", "actor", "target", "timestamp", "source_post_id"])
        for item in interactions:
            writer.writerow(
                [item.kind, item.actor, item.target, item.timestamp, item.source_post_id]
            )


def read_interactions_csv(path: str) -> list[Interaction]:
    try:
        stream = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read interactions: {exc}") from exc
    out: list[Interaction] = []
    with stream:
        reader = csv.DictReader(stream)
        for row in reader:
            kind = row.get("kind", "")
            if kind not in INTERACTION_KINDS:
                raise MalformedInputError(f"unknown interaction kind {kind!r} in {path}")
            out.append(
                Interaction(
                    kind=kind,
                    actor=row["actor"],
                    target=row["target"],
                    timestamp=int(row["timestamp"]),
                    source_post_id=row["source_post_id"],
                )
            )
    return out
