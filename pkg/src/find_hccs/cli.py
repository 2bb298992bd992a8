"""Command-line pipeline driver.

Subcommands cover the full run plus each stage standalone (parse, evidence,
lcn, extract), the validation reports, feature export, synthetic corpus
generation, and recovery scoring. Configuration lives in a TOML or JSON
file; FINDHCCS_SEED in the environment overrides the configured seed.

Exit codes: 0 success, 1 runtime failure, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .errors import ConfigError, ContractError, PipelineError
from .evidence import (
    CRITERION_KINDS,
    CriterionSpec,
    WindowConfig,
    find_coordination,
    read_evidence_csv,
    read_evidence_details_csv,
    write_evidence_csv,
    write_evidence_details_csv,
)
from .exports import (
    GraphSpec,
    graphspec_for_collapsed,
    graphspec_for_cooccurrence,
    graphspec_for_reason_network,
    graphspecs_for_hccs,
    read_hccs_graphml,
    write_graphml,
)
from .extract import (
    HCC,
    ExtractionParams,
    read_hcc_members_csv,
    run_extraction,
    write_hccs_csv,
)
from .features import compute_feature_vectors, export_feature_vectors
from .ingest import (
    PARSE_FORMATS,
    extract_interactions,
    parse_posts,
    read_interactions_csv,
    write_interactions_csv,
    write_posts_jsonl,
)
from .lcn import (
    LCN,
    aggregate_lcns,
    build_windowed_lcns,
    collapse_edges,
    read_lcn_csv,
    sliding_frame_lcns,
    write_lcn_csv,
)
from .synth import (
    PlantedGroup,
    SynthSpec,
    generate_corpus,
    read_truth_csv,
    score_recovery,
    write_truth_csv,
)
from .validate import (
    account_reason_network,
    activity_timeline,
    content_similarity_matrix,
    entropy_report,
    hashtag_cooccurrence,
    internal_ratio,
    membership_similarity_matrix,
    random_baseline,
)

REPORT_METRICS = (
    "membership",
    "irr-imr",
    "entropy",
    "content-sim",
    "cooccurrence",
    "timeline",
    "reason-net",
)
_DEFAULT_REPORTS = "membership,irr-imr,entropy,content-sim,cooccurrence,timeline"


@dataclass
class PipelineConfig:
    """Validated run parameters, resolved from the config file."""

    input_path: str
    input_format: str
    window: WindowConfig
    criteria: list[CriterionSpec]
    details: bool
    frame_windows: int
    alpha: float
    extraction: ExtractionParams
    per_window: bool
    multipliers: dict[str, float]
    output_dir: str
    seed: int
    workers: int

    def echo(self) -> dict:
        """Config as resolved, for the manifest. Worker count is machine
        dependent and deliberately left out."""
        return {
            "input": {"path": self.input_path, "format": self.input_format},
            "window": {
                "gamma_minutes": self.window.gamma_minutes,
                "origin": self.window.origin,
                "gamma_seconds": self.window.gamma_seconds,
            },
            "evidence": {
                "criteria": [c.name for c in self.criteria],
                "include_quotes_as_reposts": any(
                    c.include_quotes_as_reposts for c in self.criteria
                ),
                "details": self.details,
            },
            "frame": {"windows": self.frame_windows, "alpha": self.alpha},
            "extraction": {
                "method": self.extraction.method,
                "theta": self.extraction.theta,
                "threshold": self.extraction.threshold,
                "per_window": self.per_window,
            },
            "multipliers": dict(sorted(self.multipliers.items())),
            "output": {"directory": self.output_dir},
            "seed": self.seed,
        }


def load_config(path: str) -> dict:
    if path.endswith(".toml"):
        try:
            with open(path, "rb") as stream:
                return tomllib.load(stream)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    if path.endswith(".json"):
        try:
            with open(path, "r", encoding="utf-8") as stream:
                return json.load(stream)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    raise ConfigError(f"config file must end in .toml or .json, got {path!r}")


def resolve_seed(configured) -> int:
    value = os.environ.get("FINDHCCS_SEED")
    if value is not None:
        try:
            return int(value)
        except ValueError as exc:
            raise ConfigError(f"FINDHCCS_SEED must be an integer, got {value!r}") from exc
    if not isinstance(configured, int) or isinstance(configured, bool):
        raise ConfigError(f"seed must be an integer, got {configured!r}")
    return configured


def _section(raw: dict, name: str) -> dict:
    value = raw.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"[{name}] must be a table/object")
    return value


def _get_int(table: dict, section: str, key: str, default: int) -> int:
    value = table.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"[{section}] {key} must be an integer, got {value!r}")
    return value


def _get_float(table: dict, section: str, key: str, default: float) -> float:
    value = table.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {value!r}")
    return float(value)


def _get_bool(table: dict, section: str, key: str, default: bool) -> bool:
    value = table.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"[{section}] {key} must be true or false, got {value!r}")
    return value


def validate_config(raw: dict, require_input: bool = True) -> PipelineConfig:
    """Resolve and check every pipeline parameter before any work starts."""
    input_table = _section(raw, "input")
    input_path = input_table.get("path")
    if not isinstance(input_path, str) or not input_path:
        raise ConfigError("[input] path is required")
    input_format = input_table.get("format", "canonical-jsonl")
    if input_format not in PARSE_FORMATS:
        raise ConfigError(
            f"[input] format must be one of {PARSE_FORMATS}, got {input_format!r}"
        )
    if require_input and not os.path.exists(input_path):
        raise ConfigError(f"[input] path does not exist: {input_path}")

    window_table = _section(raw, "window")
    try:
        window = WindowConfig(
            gamma_minutes=_get_int(window_table, "window", "gamma_minutes", 15),
            origin=_get_int(window_table, "window", "origin", 0),
            gamma_seconds=(
                _get_int(window_table, "window", "gamma_seconds", 0) or None
                if "gamma_seconds" in window_table
                else None
            ),
        )
    except ContractError as exc:
        raise ConfigError(f"[window] {exc}") from exc

    evidence_table = _section(raw, "evidence")
    names = evidence_table.get("criteria", ["co-retweet"])
    if not isinstance(names, list) or not names:
        raise ConfigError("[evidence] criteria must be a nonempty list")
    fold_quotes = _get_bool(evidence_table, "evidence", "include_quotes_as_reposts", False)
    criteria = []
    for name in names:
        try:
            criteria.append(
                CriterionSpec(
                    name=name,
                    include_quotes_as_reposts=fold_quotes and name == "co-retweet",
                )
            )
        except ContractError as exc:
            raise ConfigError(f"[evidence] {exc}") from exc
    details = _get_bool(evidence_table, "evidence", "details", False)

    frame_table = _section(raw, "frame")
    frame_windows = _get_int(frame_table, "frame", "windows", 1)
    alpha = _get_float(frame_table, "frame", "alpha", 0.0)
    if frame_windows < 1:
        raise ConfigError(f"[frame] windows must be >= 1, got {frame_windows}")
    if frame_windows == 1:
        if not (alpha == 0.0 or 0.0 < alpha <= 1.0):
            raise ConfigError(f"[frame] alpha must be 0.0 (off) or in (0, 1], got {alpha}")
    elif not 0.0 < alpha <= 1.0:
        raise ConfigError(
            f"[frame] alpha must be in (0, 1] when windows > 1, got {alpha}"
        )

    seed = resolve_seed(raw.get("seed", 0))

    extraction_table = _section(raw, "extraction")
    method = extraction_table.get("method", "fsa_v")
    try:
        extraction = ExtractionParams(
            method=method,
            theta=_get_float(extraction_table, "extraction", "theta", 0.3),
            threshold=_get_float(extraction_table, "extraction", "threshold", 0.1),
            seed=seed,
        )
    except ContractError as exc:
        raise ConfigError(f"[extraction] {exc}") from exc
    per_window = _get_bool(extraction_table, "extraction", "per_window", False)

    multipliers_table = _section(raw, "multipliers")
    multipliers: dict[str, float] = {}
    for name, factor in multipliers_table.items():
        if name not in CRITERION_KINDS:
            raise ConfigError(f"[multipliers] unknown criterion {name!r}")
        if isinstance(factor, bool) or not isinstance(factor, (int, float)) or factor < 0:
            raise ConfigError(f"[multipliers] {name} must be a number >= 0, got {factor!r}")
        multipliers[name] = float(factor)

    output_table = _section(raw, "output")
    output_dir = output_table.get("directory", "findhccs-out")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("[output] directory must be a nonempty string")

    workers = raw.get("workers", 0)
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 0:
        raise ConfigError(f"workers must be an integer >= 0, got {workers!r}")
    if workers == 0:
        workers = os.cpu_count() or 1

    return PipelineConfig(
        input_path=input_path,
        input_format=input_format,
        window=window,
        criteria=criteria,
        details=details,
        frame_windows=frame_windows,
        alpha=alpha,
        extraction=extraction,
        per_window=per_window,
        multipliers=multipliers,
        output_dir=output_dir,
        seed=seed,
        workers=workers,
    )


class Artifacts:
    """Output directory with rollback: files written in this invocation are
    removed if the run fails partway."""

    def __init__(self, directory: str) -> None:
        self.directory = directory
        self.written: list[str] = []

    def path(self, name: str) -> str:
        return os.path.join(self.directory, name)

    def track(self, name: str) -> str:
        full = self.path(name)
        self.written.append(full)
        return full

    def require(self, name: str, stage: str) -> str:
        full = self.path(name)
        if not os.path.exists(full):
            raise ContractError(
                f"missing {name} in {self.directory}; run the {stage} stage first"
            )
        return full

    def discard(self) -> None:
        for full in self.written:
            try:
                os.unlink(full)
            except OSError:
                pass


def _prepare_output(directory: str) -> Artifacts:
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {directory!r}: {exc}") from exc
    return Artifacts(directory)


def stage_parse(cfg: PipelineConfig, art: Artifacts) -> dict:
    result = parse_posts(cfg.input_path, cfg.input_format)
    write_posts_jsonl(result.posts, art.track("posts.jsonl"))
    interactions = extract_interactions(result.posts)
    write_interactions_csv(interactions, art.track("interactions.csv"))
    return {
        "posts": len(result.posts),
        "skipped": result.skipped,
        "interactions": len(interactions),
    }


def stage_evidence(cfg: PipelineConfig, art: Artifacts) -> dict:
    interactions = read_interactions_csv(art.require("interactions.csv", "parse"))

    def one(spec: CriterionSpec):
        return find_coordination(interactions, spec, cfg.window, details=cfg.details)

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(one, cfg.criteria))

    pairs = []
    details = []
    for result in results:
        if cfg.details:
            found, rows = result
            details.extend(rows)
        else:
            found = result
        pairs.extend(found)
    write_evidence_csv(pairs, art.track("evidence.csv"))
    if cfg.details:
        write_evidence_details_csv(details, art.track("evidence_details.csv"))
    return {
        "interactions": len(interactions),
        "pairs": len(pairs),
        "windows": len({p.window_index for p in pairs}),
    }


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_windows_csv(windowed: dict[int, LCN], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["window_index", "nodes", "edges", "total_weight"])
        for index in sorted(windowed):
            lcn = windowed[index]
            total = 0.0
            for key in sorted(lcn.edges):
                for crit in sorted(lcn.edges[key]):
                    total += lcn.edges[key][crit]
            writer.writerow([index, len(lcn.nodes), len(lcn.edges), _fmt(total)])


def _frame_networks(cfg: PipelineConfig, windowed: dict[int, LCN]) -> dict[int, LCN]:
    if cfg.frame_windows == 1:
        return windowed
    return sliding_frame_lcns(windowed, cfg.frame_windows, cfg.alpha)


def stage_lcn(cfg: PipelineConfig, art: Artifacts) -> dict:
    pairs = read_evidence_csv(art.require("evidence.csv", "evidence"))
    windowed = build_windowed_lcns(pairs)
    networks = _frame_networks(cfg, windowed)
    aggregate = aggregate_lcns(networks.values())
    _write_windows_csv(windowed, art.track("windows.csv"))
    write_lcn_csv(aggregate, art.track("lcn.csv"))
    collapsed = collapse_edges(aggregate, cfg.multipliers or None)
    write_graphml(art.track("lcn.graphml"), [graphspec_for_collapsed(collapsed, "lcn")])
    return {
        "windows": len(windowed),
        "frames": len(networks),
        "nodes": len(aggregate.nodes),
        "edges": len(aggregate.edges),
    }


def stage_extract(cfg: PipelineConfig, art: Artifacts) -> dict:
    if cfg.per_window:
        return _extract_per_window(cfg, art)
    network = read_lcn_csv(art.require("lcn.csv", "lcn"))
    collapsed = collapse_edges(network, cfg.multipliers or None)
    hccs = run_extraction(collapsed, cfg.extraction)
    write_hccs_csv(hccs, art.track("hccs.csv"))
    write_graphml(art.track("hccs.graphml"), graphspecs_for_hccs(hccs))
    return {"hccs": len(hccs), "members": sum(len(h.members) for h in hccs)}


def _extract_per_window(cfg: PipelineConfig, art: Artifacts) -> dict:
    pairs = read_evidence_csv(art.require("evidence.csv", "evidence"))
    networks = _frame_networks(cfg, build_windowed_lcns(pairs))
    items = sorted(networks.items())

    def one(item: tuple[int, LCN]) -> tuple[int, list[HCC]]:
        index, lcn = item
        collapsed = collapse_edges(lcn, cfg.multipliers or None)
        return index, run_extraction(collapsed, cfg.extraction)

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(one, items))

    total_hccs = 0
    total_members = 0
    specs: list[GraphSpec] = []
    with open(art.track("hccs.csv"), "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow(["window_index", "hcc_id", "account_id"])
        for index, hccs in results:
            for hcc in hccs:
                total_hccs += 1
                total_members += len(hcc.members)
                for member in hcc.members:
                    writer.writerow([index, hcc.id, member])
                spec = GraphSpec(
                    graph_id=f"w{index}_hcc_{hcc.id}",
                    attrs={"mew": hcc.mew, "window_index": index},
                )
                spec.nodes = [(member, {}) for member in hcc.members]
                spec.edges = [
                    (a, b, {"weight": hcc.edges[(a, b)]}) for a, b in sorted(hcc.edges)
                ]
                specs.append(spec)
    write_graphml(art.track("hccs.graphml"), specs)
    return {"frames": len(items), "hccs": total_hccs, "members": total_members}


_STAGES = (
    ("parse", stage_parse),
    ("evidence", stage_evidence),
    ("aggregate", stage_lcn),
    ("extract", stage_extract),
)


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Execute every stage and write the run manifest. Returns the manifest."""
    art = _prepare_output(cfg.output_dir)
    stages: list[dict] = []
    timings: dict[str, float] = {}
    try:
        start = time.perf_counter()
        last = start
        for name, stage in _STAGES:
            counts = stage(cfg, art)
            now = time.perf_counter()
            timings[name] = now - last
            last = now
            stages.append({"name": name, "counts": counts})
            summary = ", ".join(f"{k}={v}" for k, v in counts.items())
            print(f"{name}: {summary}")
        timings["total"] = last - start

        parse_counts = stages[0]["counts"]
        manifest = {
            "config": cfg.echo(),
            "input": {
                "path": cfg.input_path,
                "format": cfg.input_format,
                "posts": parse_counts["posts"],
                "skipped": parse_counts["skipped"],
            },
            "seed": cfg.seed,
            "stages": stages,
            "timings_s": timings,
        }
        with open(art.track("manifest.json"), "w", encoding="utf-8") as out:
            json.dump(manifest, out, indent=2, sort_keys=True)
            out.write("\n")
    except BaseException:
        art.discard()
        raise
    print(f"wrote {len(art.written)} artifacts to {cfg.output_dir}")
    return manifest


def _run_single_stage(cfg: PipelineConfig, stage) -> int:
    art = _prepare_output(cfg.output_dir)
    try:
        counts = stage(cfg, art)
    except BaseException:
        art.discard()
        raise
    summary = ", ".join(f"{k}={v}" for k, v in counts.items())
    print(summary)
    return 0


def _load_pipeline_config(args, require_input: bool) -> PipelineConfig:
    cfg = validate_config(load_config(args.config), require_input=require_input)
    workers = getattr(args, "workers", None)
    if workers is not None:
        if workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {workers}")
        cfg.workers = workers
    return cfg


def _load_run_hccs(directory: str) -> list[HCC]:
    graph_path = os.path.join(directory, "hccs.graphml")
    if os.path.exists(graph_path):
        return read_hccs_graphml(graph_path)
    csv_path = os.path.join(directory, "hccs.csv")
    if not os.path.exists(csv_path):
        raise ContractError(
            f"no communities found in {directory}; run the extract stage first"
        )
    members = read_hcc_members_csv(csv_path)
    return [
        HCC(id=hcc_id, members=tuple(sorted(found)), edges={}, mew=0.0)
        for hcc_id, found in sorted(members.items())
    ]


def _load_run_posts(directory: str):
    path = os.path.join(directory, "posts.jsonl")
    if not os.path.exists(path):
        raise ContractError(f"missing posts.jsonl in {directory}; run the parse stage first")
    return parse_posts(path, "canonical-jsonl").posts


def _write_matrix_csv(matrix, path: str, formatter=_fmt) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out:
        writer = csv.writer(out)
        writer.writerow([""] + list(matrix.labels))
        for label, row in zip(matrix.labels, matrix.values):
            writer.writerow([label] + [formatter(v) for v in row])


def cmd_report(args) -> int:
    which = [w.strip() for w in args.which.split(",") if w.strip()]
    for name in which:
        if name not in REPORT_METRICS:
            raise ConfigError(
                f"unknown report metric {name!r}; expected a subset of {REPORT_METRICS}"
            )
    dirs = args.artifacts
    out = _prepare_output(args.out or dirs[0])

    primary = dirs[0]
    needs_hccs = [name for name in which if name != "membership"]
    hccs = _load_run_hccs(primary) if needs_hccs else []
    needs_posts = set(which) & {"irr-imr", "entropy", "content-sim", "cooccurrence", "timeline"}
    posts = _load_run_posts(primary) if needs_posts else []
    written: list[str] = []
    try:
        _report_metrics(args, which, dirs, out, hccs, posts, written)
    except BaseException:
        out.discard()
        raise
    print(f"wrote {', '.join(written)} to {out.directory}")
    return 0


def _report_metrics(args, which, dirs, out, hccs, posts, written) -> None:
    primary = dirs[0]
    if "membership" in which:
        runs = []
        for directory in dirs:
            members: set[str] = set()
            for hcc in _load_run_hccs(directory):
                members.update(hcc.members)
            runs.append((directory, members))
        jac, common = membership_similarity_matrix(runs, measure="jaccard")
        over, _ = membership_similarity_matrix(runs, measure="overlap")
        _write_matrix_csv(jac, out.track("membership_jaccard.csv"))
        _write_matrix_csv(over, out.track("membership_overlap.csv"))
        with open(out.track("membership_common.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([""] + [label for label, _ in runs])
            for (label, _), row in zip(runs, common):
                writer.writerow([label] + row)
        written += ["membership_jaccard.csv", "membership_overlap.csv", "membership_common.csv"]

    if "irr-imr" in which:
        with open(out.track("irr_imr.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["hcc_id", "internal_repost_ratio", "internal_mention_ratio"])
            for hcc in hccs:
                members = set(hcc.members)
                writer.writerow(
                    [
                        hcc.id,
                        _fmt(internal_ratio(members, posts, "repost")),
                        _fmt(internal_ratio(members, posts, "mention")),
                    ]
                )
        written.append("irr_imr.csv")

    if "entropy" in which:
        with open(out.track("entropy.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["hcc_id", "kind", "entropy_bits"])
            for row in entropy_report(hccs, posts):
                writer.writerow([row["hcc_id"], row["kind"], _fmt(row["entropy_bits"])])
        written.append("entropy.csv")

    if "content-sim" in which:
        matrix = content_similarity_matrix(hccs, posts)
        _write_matrix_csv(matrix, out.track("content_similarity.csv"))
        written.append("content_similarity.csv")

    if "cooccurrence" in which:
        members = set()
        for hcc in hccs:
            members.update(hcc.members)
        member_posts = [p for p in posts if p.author_id in members]
        excluded = [tag.strip().lstrip("#").lower() for tag in args.exclude.split(",") if tag.strip()]
        graph = hashtag_cooccurrence(
            member_posts, min_edge_weight=args.min_edge_weight, excluded=excluded
        )
        write_graphml(out.track("cooccurrence.graphml"), [graphspec_for_cooccurrence(graph)])
        written.append("cooccurrence.graphml")

    if "timeline" in which:
        if args.bin_minutes < 1:
            raise ConfigError(f"--bin-minutes must be >= 1, got {args.bin_minutes}")
        with open(out.track("timeline.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["hcc_id", "bin_start", "post_count"])
            for hcc in hccs:
                bins = activity_timeline(set(hcc.members), posts, args.bin_minutes * 60)
                for bin_start, count in bins:
                    writer.writerow([hcc.id, bin_start, count])
        written.append("timeline.csv")

    if "reason-net" in which:
        details_path = os.path.join(primary, "evidence_details.csv")
        details = (
            read_evidence_details_csv(details_path)
            if os.path.exists(details_path)
            else None
        )
        network = account_reason_network(hccs, details)
        write_graphml(
            out.track("reason_network.graphml"), [graphspec_for_reason_network(network)]
        )
        written.append("reason_network.graphml")


def cmd_features(args) -> int:
    hccs = _load_run_hccs(args.artifacts)
    posts = _load_run_posts(args.artifacts)
    seed = resolve_seed(args.seed)
    groups = [(f"h{hcc.id}", "coordinating", set(hcc.members)) for hcc in hccs]
    accounts = {post.author_id for post in posts}
    for group_id, members in random_baseline(hccs, accounts, seed):
        groups.append((group_id, "unlabeled", members))
    vectors = compute_feature_vectors(groups, posts)
    out_path = args.out or os.path.join(args.artifacts, "features.csv")
    export_feature_vectors(vectors, out_path)
    print(f"wrote {len(vectors)} feature rows to {out_path}")
    return 0


def cmd_synth(args) -> int:
    raw = load_config(args.config)
    table = _section(raw, "synth")
    if not table:
        raise ConfigError("config needs a [synth] section")
    seed = resolve_seed(raw.get("seed", 0))
    groups_raw = table.get("groups", [])
    if not isinstance(groups_raw, list):
        raise ConfigError("[synth] groups must be a list of tables")
    try:
        planted = [
            PlantedGroup(
                size=_get_int(g, "synth.groups", "size", 0),
                strategy=g.get("strategy", "boost"),
                actions_per_window=_get_int(g, "synth.groups", "actions_per_window", 1),
                adherence=_get_float(g, "synth.groups", "adherence", 1.0),
            )
            for g in groups_raw
        ]
        spec = SynthSpec(
            seed=seed,
            duration_minutes=_get_int(table, "synth", "duration_minutes", 1440),
            background_accounts=_get_int(table, "synth", "background_accounts", 100),
            background_post_rate=_get_float(table, "synth", "background_post_rate", 1.0),
            planted=planted,
            gamma_minutes=_get_int(table, "synth", "gamma_minutes", 15),
            start_timestamp=_get_int(table, "synth", "start_timestamp", 1_600_000_000),
        )
    except ContractError as exc:
        raise ConfigError(f"[synth] {exc}") from exc

    posts, truth = generate_corpus(spec)
    output_dir = _section(raw, "output").get("directory", "findhccs-out")
    art = _prepare_output(output_dir)
    try:
        write_posts_jsonl(posts, art.track("posts.jsonl"))
        write_truth_csv(truth, art.track("truth.csv"))
    except BaseException:
        art.discard()
        raise
    print(f"wrote {len(posts)} posts and {len(truth)} planted groups to {output_dir}")
    return 0


def cmd_score(args) -> int:
    detected = read_hcc_members_csv(args.detected)
    truth = read_truth_csv(args.truth)
    report = score_recovery(detected, truth)
    payload = json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as out:
            out.write(payload + "\n")
        print(f"wrote {args.out}")
    else:
        print(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="find-hccs",
        description="Detect highly coordinating account communities in social media posts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_command(name: str, help_text: str):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="TOML or JSON config file")
        cmd.add_argument(
            "--workers",
            type=int,
            default=None,
            help="bound on parallel workers (default: all cores)",
        )
        return cmd

    add_config_command("run", "full pipeline: parse, evidence, networks, extraction")
    add_config_command("parse", "normalize raw posts and emit interaction rows")
    add_config_command("evidence", "pairwise co-activity from interactions.csv")
    add_config_command("lcn", "windowed and aggregated coordination networks")
    add_config_command("extract", "community extraction from the aggregated network")

    report = sub.add_parser("report", help="validation metrics over run artifacts")
    report.add_argument(
        "--artifacts",
        action="append",
        required=True,
        help="artifact directory of a prior run; repeat to compare runs",
    )
    report.add_argument(
        "--which",
        default=_DEFAULT_REPORTS,
        help=f"comma-separated subset of {','.join(REPORT_METRICS)}",
    )
    report.add_argument("--out", default=None, help="output directory (default: first artifacts dir)")
    report.add_argument("--bin-minutes", type=int, default=60, help="timeline bin width")
    report.add_argument("--min-edge-weight", type=int, default=1)
    report.add_argument("--exclude", default="", help="comma-separated hashtags to drop")

    features = sub.add_parser("features", help="labelled feature vectors for classification")
    features.add_argument("--artifacts", required=True, help="artifact directory of a prior run")
    features.add_argument("--out", default=None, help="output CSV (default: <artifacts>/features.csv)")
    features.add_argument("--seed", type=int, default=0, help="baseline sampling seed")

    synth = sub.add_parser("synth", help="generate a synthetic corpus with planted groups")
    synth.add_argument("--config", required=True, help="config file with a [synth] section")

    score = sub.add_parser("score", help="recovery of planted groups by detected communities")
    score.add_argument("--detected", required=True, help="hccs.csv from a run")
    score.add_argument("--truth", required=True, help="truth.csv from synth")
    score.add_argument("--out", default=None, help="write the JSON report here instead of stdout")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            run_pipeline(_load_pipeline_config(args, require_input=True))
            return 0
        if args.command == "parse":
            return _run_single_stage(_load_pipeline_config(args, require_input=True), stage_parse)
        if args.command == "evidence":
            return _run_single_stage(_load_pipeline_config(args, require_input=False), stage_evidence)
        if args.command == "lcn":
            return _run_single_stage(_load_pipeline_config(args, require_input=False), stage_lcn)
        if args.command == "extract":
            return _run_single_stage(_load_pipeline_config(args, require_input=False), stage_extract)
        if args.command == "report":
            return cmd_report(args)
        if args.command == "features":
            return cmd_features(args)
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "score":
            return cmd_score(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
