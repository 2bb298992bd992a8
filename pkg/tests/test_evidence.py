"""Windowing and coordination-evidence tests, including a brute-force oracle.

The oracle recomputes pair weights by direct enumeration over every account
pair, target, and window, independently of the bucketed implementation.
"""

from __future__ import annotations

import itertools
import random

import pytest

from find_hccs.errors import ContractError
from find_hccs.evidence import (
    CRITERION_KINDS,
    CriterionSpec,
    EvidencePair,
    WindowConfig,
    assign_window,
    filter_interactions,
    find_coordination,
)
from find_hccs.ingest import HASHTAG, QUOTE, REPOST, Interaction


def brute_force_pairs(interactions, criterion, window_config):
    """Oracle: enumerate all (pair, target, window) coincidences directly.

    For accounts u and v acting on the same target in the same window, the
    pair earns min(count_u, count_v) for that target, summed over targets.
    """
    rows = filter_interactions(interactions, criterion)
    accounts = sorted({r.actor for r in rows})
    windows = sorted({assign_window(r.timestamp, window_config) for r in rows})
    targets = sorted({r.target for r in rows})
    weights = {}
    for window in windows:
        for u, v in itertools.combinations(accounts, 2):
            total = 0
            for target in targets:
                count_u = sum(
                    1
                    for r in rows
                    if r.actor == u
                    and r.target == target
                    and assign_window(r.timestamp, window_config) == window
                )
                count_v = sum(
                    1
                    for r in rows
                    if r.actor == v
                    and r.target == target
                    and assign_window(r.timestamp, window_config) == window
                )
                total += min(count_u, count_v)
            if total > 0:
                weights[(window, u, v)] = total
    return weights


def pairs_to_dict(pairs):
    return {(p.window_index, p.account_a, p.account_b): p.weight for p in pairs}


class TestAssignWindow:
    def test_window_boundaries_15_minutes(self):
        config = WindowConfig(gamma_minutes=15, origin=0)
        assert assign_window(899, config) == 0
        assert assign_window(900, config) == 1

    def test_day_windows(self):
        config = WindowConfig(gamma_minutes=1440, origin=0)
        assert assign_window(86400, config) == 1
        assert assign_window(86399, config) == 0

    def test_origin_shift(self):
        config = WindowConfig(gamma_minutes=15, origin=1000)
        assert assign_window(1000, config) == 0
        assert assign_window(1899, config) == 0
        assert assign_window(1900, config) == 1

    def test_timestamp_before_origin_rejected(self):
        config = WindowConfig(gamma_minutes=15, origin=1000)
        with pytest.raises(ContractError):
            assign_window(999, config)

    def test_seconds_override(self):
        config = WindowConfig(gamma_minutes=15, origin=0, gamma_seconds=10)
        assert assign_window(9, config) == 0
        assert assign_window(10, config) == 1
        assert config.window_seconds == 10

    def test_nonpositive_gamma_rejected(self):
        with pytest.raises(ContractError):
            WindowConfig(gamma_minutes=0, origin=0)
        with pytest.raises(ContractError):
            WindowConfig(gamma_minutes=15, origin=0, gamma_seconds=-1)


class TestFilterInteractions:
    def test_quotes_folded_into_reposts_only_when_asked(self):
        rows = [
            Interaction(REPOST, "u", "t1", 0, "p1"),
            Interaction(QUOTE, "v", "t1", 1, "p2"),
            Interaction(HASHTAG, "w", "tag", 2, "p3"),
        ]
        plain = filter_interactions(rows, CriterionSpec("co-retweet"))
        assert [r.actor for r in plain] == ["u"]
        folded = filter_interactions(
            rows, CriterionSpec("co-retweet", include_quotes_as_reposts=True)
        )
        assert [r.actor for r in folded] == ["u", "v"]
        assert all(r.kind == REPOST for r in folded)

    def test_unknown_criterion_rejected(self):
        with pytest.raises(ContractError):
            CriterionSpec("co-laughing")

    def test_all_criteria_map_to_kinds(self):
        assert set(CRITERION_KINDS) == {
            "co-retweet",
            "co-hashtag",
            "co-url",
            "co-domain",
            "co-mention",
            "co-conv",
        }


class TestFindCoordination:
    def test_two_shared_targets_in_one_window(self):
        # Window 0: u, v, w each repost T1; u and v also repost T2.
        rows = [
            Interaction(REPOST, "u", "T1", 10, "p1"),
            Interaction(REPOST, "v", "T1", 20, "p2"),
            Interaction(REPOST, "w", "T1", 30, "p3"),
            Interaction(REPOST, "u", "T2", 40, "p4"),
            Interaction(REPOST, "v", "T2", 50, "p5"),
        ]
        config = WindowConfig(gamma_minutes=15, origin=0)
        pairs = find_coordination(rows, CriterionSpec("co-retweet"), config)
        assert pairs_to_dict(pairs) == {
            (0, "u", "v"): 2,
            (0, "u", "w"): 1,
            (0, "v", "w"): 1,
        }

    def test_repeat_actions_pair_by_min_count(self):
        # u reposts T 3 times, v reposts T twice in the same window.
        rows = [Interaction(REPOST, "u", "T", i, f"p{i}") for i in range(3)]
        rows += [Interaction(REPOST, "v", "T", 10 + i, f"q{i}") for i in range(2)]
        config = WindowConfig(gamma_minutes=15, origin=0)
        pairs = find_coordination(rows, CriterionSpec("co-retweet"), config)
        assert pairs_to_dict(pairs) == {(0, "u", "v"): 2}

    def test_window_split_prevents_pairing(self):
        rows = [
            Interaction(REPOST, "u", "T", 899, "p1"),
            Interaction(REPOST, "v", "T", 900, "p2"),
        ]
        config = WindowConfig(gamma_minutes=15, origin=0)
        assert find_coordination(rows, CriterionSpec("co-retweet"), config) == []

    def test_output_ordering_and_canonical_pairs(self):
        rows = [
            Interaction(REPOST, "z", "T", 901, "p1"),
            Interaction(REPOST, "a", "T", 902, "p2"),
            Interaction(REPOST, "b", "X", 10, "p3"),
            Interaction(REPOST, "a", "X", 11, "p4"),
        ]
        config = WindowConfig(gamma_minutes=15, origin=0)
        pairs = find_coordination(rows, CriterionSpec("co-retweet"), config)
        assert [(p.window_index, p.account_a, p.account_b) for p in pairs] == [
            (0, "a", "b"),
            (1, "a", "z"),
        ]
        assert all(p.account_a < p.account_b for p in pairs)

    def test_detail_rows_sum_to_pair_weights(self):
        rows = [
            Interaction(REPOST, "u", "T1", 10, "p1"),
            Interaction(REPOST, "v", "T1", 20, "p2"),
            Interaction(REPOST, "u", "T2", 40, "p4"),
            Interaction(REPOST, "v", "T2", 50, "p5"),
        ]
        config = WindowConfig(gamma_minutes=15, origin=0)
        pairs, details = find_coordination(
            rows, CriterionSpec("co-retweet"), config, details=True
        )
        assert pairs_to_dict(pairs) == {(0, "u", "v"): 2}
        assert {(d.target, d.weight) for d in details} == {("T1", 1), ("T2", 1)}
        by_pair = {}
        for d in details:
            key = (d.window_index, d.account_a, d.account_b)
            by_pair[key] = by_pair.get(key, 0) + d.weight
        assert by_pair == pairs_to_dict(pairs)

    def test_monotonicity_adding_interactions(self):
        rng = random.Random(7)
        config = WindowConfig(gamma_minutes=15, origin=0)
        spec = CriterionSpec("co-hashtag")
        rows = []
        previous = {}
        for i in range(60):
            rows.append(
                Interaction(
                    HASHTAG,
                    f"a{rng.randrange(5)}",
                    f"t{rng.randrange(3)}",
                    rng.randrange(3000),
                    f"p{i}",
                )
            )
            current = pairs_to_dict(find_coordination(rows, spec, config))
            for key, weight in previous.items():
                assert current.get(key, 0) >= weight
            previous = current


class TestBruteForceOracle:
    def test_matches_oracle_on_random_micro_corpora(self):
        rng = random.Random(20260817)
        config = WindowConfig(gamma_minutes=15, origin=0)
        spec = CriterionSpec("co-retweet")
        for _ in range(200):
            n = rng.randrange(1, 21)
            rows = [
                Interaction(
                    REPOST,
                    f"a{rng.randrange(6)}",
                    f"t{rng.randrange(4)}",
                    rng.randrange(4 * 900),
                    f"p{i}",
                )
                for i in range(n)
            ]
            expected = brute_force_pairs(rows, spec, config)
            actual = pairs_to_dict(find_coordination(rows, spec, config))
            assert actual == expected


def test_evidence_pair_is_value_object():
    pair = EvidencePair(0, "co-retweet", "a", "b", 2)
    assert pair.weight == 2
    assert pair == EvidencePair(0, "co-retweet", "a", "b", 2)
