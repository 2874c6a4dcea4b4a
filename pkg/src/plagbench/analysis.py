"""Effectiveness analytics over collected survey responses.

Three mechanisms feed the report:

* aspect-oriented: Pearson correlation between a detector's per-variant
  similarity degrees on the artificial cases and the negated averaged
  human ranks, pooled across cases, plus the qualitative flag that the
  verbatim (identity) variant always holds the best average rank;
* empirical: how often each detector's favoring code in a contradicting
  pair is the one respondents preferred, plus correlations against negated
  averaged ranks, overall and per plagiarism level;
* think-aloud: a tally of coded aspects from respondents' descriptions
  (the qualitative coding itself is an analyst step; this module only
  counts coded annotations).

A detector whose series has no variability is reported as immeasurable
with its reason - that is a finding, not a failure. The final verdict goes
to the detector winning at least two of the three mechanisms.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .attribute import aba_similarity
from .casegen import ArtificialCase
from .lexer import LexerConfig, TokenSequence, tokenize
from .pairsel import ContradictingPair
from .stats import NoVariability, negate_average_ranks, pearson
from .structure import DEFAULT_MIN_MATCH, sba_similarity

REPORT_SCHEMA_VERSION = 1
TIE = "Tie"
UNMAPPED = "UNMAPPED"


class MissingRankings(ValueError):
    pass


class MissingPreferences(ValueError):
    pass


class FewerThanTwo(ValueError):
    pass


@dataclass(frozen=True)
class DetectorProvider:
    name: str
    similarity: Callable[[TokenSequence, TokenSequence], float]


def default_detectors(config: LexerConfig | None = None,
                      min_match: int = DEFAULT_MIN_MATCH
                      ) -> tuple[DetectorProvider, DetectorProvider]:
    del config  # sequences carry their abstraction; kept for symmetry
    return (
        DetectorProvider("ABA", lambda a, b: aba_similarity(a, b).value),
        DetectorProvider("SBA", lambda a, b: sba_similarity(a, b, min_match).value),
    )


@dataclass
class Correlation:
    value: float | None
    immeasurable_reason: str | None = None

    @classmethod
    def of(cls, x: list[float], y: list[float]) -> "Correlation":
        try:
            return cls(pearson(x, y))
        except NoVariability as exc:
            return cls(None, str(exc))

    def to_json(self):
        if self.value is not None:
            return self.value
        return {"immeasurable": self.immeasurable_reason}


@dataclass
class AspectSection:
    correlations: dict[str, Correlation]
    verbatim_top_rank_holds: bool
    variant_count: int


@dataclass
class EmpiricalDetectorResult:
    preference_pct_majority: float | None
    preference_pct_responses: float | None
    pairs_won: int
    correlation_overall: Correlation
    correlation_per_level: dict[int, Correlation]


@dataclass
class EmpiricalSection:
    detectors: dict[str, EmpiricalDetectorResult]
    answered_pairs: int
    decided_pairs: int
    tied_pairs: list[str]
    unanswered_pairs: list[str]


@dataclass
class AspectTally:
    entries: list[tuple[str, int, str]]  # (aspect, occurrences, mapped detector)

    def weighted_sum(self, detector: str) -> int:
        return sum(count for _, count, mapped in self.entries if mapped == detector)


@dataclass
class EffectivenessReport:
    aspect: AspectSection
    empirical: EmpiricalSection
    think_aloud: AspectTally
    mechanism_winners: dict[str, str | None]
    verdict: str


def aspect_report(
    cases: list[ArtificialCase],
    case_rankings: dict[str, list[dict[str, int]]],
    detectors: tuple[DetectorProvider, DetectorProvider],
    config: LexerConfig | None = None,
) -> AspectSection:
    """Aspect-oriented section: pooled correlations plus the verbatim flag.

    ``case_rankings`` maps case id to one rank dict per respondent, keyed
    by variant id. Every case needs at least one ranking.
    """
    pooled_sims: dict[str, list[float]] = {d.name: [] for d in detectors}
    pooled_negated: list[float] = []
    verbatim_holds = True
    variant_count = 0
    for case in cases:
        rankings = case_rankings.get(case.case_id, [])
        if not rankings:
            raise MissingRankings(f"case {case.case_id} has no rankings")
        order = [v.variant_id for v in case.variants]
        rows = []
        for ranking in rankings:
            if set(ranking) != set(order):
                raise MissingRankings(
                    f"ranking for case {case.case_id} does not cover its variants"
                )
            rows.append([float(ranking[v]) for v in order])
        negated = negate_average_ranks(rows)
        pooled_negated.extend(negated)
        variant_count += len(order)

        identity_index = order.index(case.identity_variant.variant_id)
        best = max(negated)  # negated: larger = better average rank
        if negated[identity_index] != best:
            verbatim_holds = False

        original = tokenize(case.original, config, source_id=f"{case.case_id}/original")
        for detector in detectors:
            for variant in case.variants:
                tokens = tokenize(variant.source, config,
                                  source_id=f"{case.case_id}/{variant.variant_id}")
                pooled_sims[detector.name].append(detector.similarity(original, tokens))

    correlations = {
        name: Correlation.of(sims, pooled_negated)
        for name, sims in pooled_sims.items()
    }
    return AspectSection(correlations, verbatim_holds, variant_count)


def empirical_report(
    pairs: list[ContradictingPair],
    preferences: dict[str, list[str]],
    detector_names: tuple[str, str] = ("ABA", "SBA"),
) -> EmpiricalSection:
    """Empirical section from preferences over contradicting pairs.

    ``preferences`` maps pair id to the member id each respondent chose.
    Pairs nobody answered are listed and excluded from every figure; pairs
    whose vote is tied are excluded from the majority percentages only.
    With no pairs at all the mechanism is vacuous and the section is empty.
    """
    name_p1, name_p2 = detector_names
    if not pairs:
        return EmpiricalSection(
            {name: EmpiricalDetectorResult(None, None, 0,
                                           Correlation(None, "no pairs"), {})
             for name in detector_names},
            0, 0, [], [])
    if not any(preferences.get(p.pair_id) for p in pairs):
        raise MissingPreferences("no pair has any recorded preference")

    answered: list[ContradictingPair] = []
    unanswered: list[str] = []
    for pair in pairs:
        if preferences.get(pair.pair_id):
            answered.append(pair)
        else:
            unanswered.append(pair.pair_id)

    favoring = {name_p1: {}, name_p2: {}}
    for pair in answered:
        favoring[name_p1][pair.pair_id] = (
            pair.code_a if pair.sim_a_p1 > pair.sim_b_p1 else pair.code_b
        )
        favoring[name_p2][pair.pair_id] = (
            pair.code_a if pair.sim_a_p2 > pair.sim_b_p2 else pair.code_b
        )

    tied: list[str] = []
    majority: dict[str, str] = {}
    votes_per_member: dict[str, dict[str, int]] = {}
    for pair in answered:
        votes = preferences[pair.pair_id]
        counts = {pair.code_a: 0, pair.code_b: 0}
        for choice in votes:
            if choice not in counts:
                raise MissingPreferences(
                    f"preference for {pair.pair_id} names unknown member {choice!r}"
                )
            counts[choice] += 1
        votes_per_member[pair.pair_id] = counts
        if counts[pair.code_a] == counts[pair.code_b]:
            tied.append(pair.pair_id)
        else:
            majority[pair.pair_id] = max(counts, key=counts.get)

    decided = len(majority)
    total_votes = sum(sum(c.values()) for c in votes_per_member.values())

    results: dict[str, EmpiricalDetectorResult] = {}
    for name in detector_names:
        pairs_won = sum(
            1 for pair_id, winner in majority.items()
            if favoring[name][pair_id] == winner
        )
        votes_won = sum(
            votes_per_member[pair.pair_id][favoring[name][pair.pair_id]]
            for pair in answered
        )
        sims: list[float] = []
        negated: list[float] = []
        by_level: dict[int, tuple[list[float], list[float]]] = {}
        for pair in answered:
            counts = votes_per_member[pair.pair_id]
            n_votes = counts[pair.code_a] + counts[pair.code_b]
            for code, sim_p1, sim_p2 in (
                (pair.code_a, pair.sim_a_p1, pair.sim_a_p2),
                (pair.code_b, pair.sim_b_p1, pair.sim_b_p2),
            ):
                sim = sim_p1 if name == name_p1 else sim_p2
                # chosen code ranks 1st, the other 2nd; average over votes
                avg_rank = (1 * counts[code] + 2 * (n_votes - counts[code])) / n_votes
                sims.append(sim)
                negated.append(-avg_rank)
                level_x, level_y = by_level.setdefault(pair.level, ([], []))
                level_x.append(sim)
                level_y.append(-avg_rank)
        results[name] = EmpiricalDetectorResult(
            preference_pct_majority=(100.0 * pairs_won / decided) if decided else None,
            preference_pct_responses=(100.0 * votes_won / total_votes) if total_votes else None,
            pairs_won=pairs_won,
            correlation_overall=Correlation.of(sims, negated),
            correlation_per_level={
                level: Correlation.of(x, y) for level, (x, y) in sorted(by_level.items())
            },
        )
    return EmpiricalSection(results, len(answered), decided, tied, unanswered)


def aspect_tally(
    annotations: dict[str, list[str]],
    codebook: dict[str, str],
) -> AspectTally:
    """Tally coded think-aloud aspects per respondent.

    A respondent mentioning an aspect several times counts once. Entries
    sort by occurrences descending, then by first appearance in the input.
    """
    respondents_per_aspect: dict[str, set[str]] = {}
    first_seen: dict[str, int] = {}
    order = 0
    for respondent, aspects in annotations.items():
        for aspect in aspects:
            if aspect not in first_seen:
                first_seen[aspect] = order
                order += 1
            respondents_per_aspect.setdefault(aspect, set()).add(respondent)
    entries = [
        (aspect, len(mentioned), codebook.get(aspect, UNMAPPED))
        for aspect, mentioned in respondents_per_aspect.items()
    ]
    entries.sort(key=lambda e: (-e[1], first_seen[e[0]]))
    return AspectTally(entries)


def run_tournament(
    approaches: list[str],
    compare: Callable[[str, str], str | None],
) -> tuple[str, list[dict]]:
    """Single-elimination bracket over the list order.

    ``compare(a, b)`` returns the more effective approach id, or None/TIE
    for a draw, in which case the earlier entrant advances. Odd entrants
    get a bye. Returns the winner and the full comparison trace.
    """
    if len(approaches) < 2:
        raise FewerThanTwo("a tournament needs at least two approaches")
    trace: list[dict] = []
    round_index = 0
    contenders = list(approaches)
    while len(contenders) > 1:
        next_round: list[str] = []
        for i in range(0, len(contenders) - 1, 2):
            a, b = contenders[i], contenders[i + 1]
            outcome = compare(a, b)
            winner = a if outcome in (None, TIE) else outcome
            if winner not in (a, b):
                raise ValueError(f"compare returned {outcome!r}, expected {a!r} or {b!r}")
            trace.append({
                "round": round_index,
                "a": a,
                "b": b,
                "outcome": TIE if outcome in (None, TIE) else outcome,
                "advanced": winner,
            })
            next_round.append(winner)
        if len(contenders) % 2 == 1:
            trace.append({
                "round": round_index,
                "a": contenders[-1],
                "b": None,
                "outcome": "bye",
                "advanced": contenders[-1],
            })
            next_round.append(contenders[-1])
        contenders = next_round
        round_index += 1
    return contenders[0], trace


def build_effectiveness_report(
    aspect: AspectSection,
    empirical: EmpiricalSection,
    think_aloud: AspectTally,
    detector_names: tuple[str, str] = ("ABA", "SBA"),
) -> EffectivenessReport:
    """Combine the three mechanisms into a verdict.

    Winner per mechanism: measurable beats immeasurable and higher beats
    lower for the aspect correlation; higher majority preference wins the
    empirical mechanism; the larger occurrence-weighted aspect sum wins
    think-aloud. The verdict needs two of three.
    """
    first, second = detector_names

    def _aspect_winner() -> str | None:
        a = aspect.correlations[first]
        b = aspect.correlations[second]
        if a.value is None and b.value is None:
            return None
        if a.value is None:
            return second
        if b.value is None:
            return first
        if a.value == b.value:
            return None
        return first if a.value > b.value else second

    def _empirical_winner() -> str | None:
        a = empirical.detectors[first].preference_pct_majority
        b = empirical.detectors[second].preference_pct_majority
        if a is None or b is None or a == b:
            return None
        return first if a > b else second

    def _think_aloud_winner() -> str | None:
        a = think_aloud.weighted_sum(first)
        b = think_aloud.weighted_sum(second)
        if a == b:
            return None
        return first if a > b else second

    winners = {
        "aspect": _aspect_winner(),
        "empirical": _empirical_winner(),
        "thinkAloud": _think_aloud_winner(),
    }
    wins = {name: sum(1 for w in winners.values() if w == name) for name in detector_names}
    verdict = TIE
    for name in detector_names:
        if wins[name] >= 2:
            verdict = name
    return EffectivenessReport(aspect, empirical, think_aloud, winners, verdict)


# -- adapters from the survey export bundle --------------------------------

def case_rankings_from_export(bundle: dict) -> dict[str, list[dict[str, int]]]:
    rankings: dict[str, list[dict[str, int]]] = {}
    for record in bundle.get("responses", []):
        if record.get("kind") != "CASE_RANKING":
            continue
        case_id = record["taskId"].removeprefix("case:")
        rankings.setdefault(case_id, []).append(dict(record["payload"]["ranks"]))
    return rankings


def pair_preferences_from_export(bundle: dict) -> dict[str, list[str]]:
    preferences: dict[str, list[str]] = {}
    for record in bundle.get("responses", []):
        if record.get("kind") != "PAIR_PREFERENCE":
            continue
        pair_id = record["taskId"].removeprefix("pair:")
        preferences.setdefault(pair_id, []).append(record["payload"]["chosen"])
    return preferences


def think_aloud_from_export(bundle: dict) -> dict[str, str]:
    return {
        record["sessionId"]: record["payload"]["text"]
        for record in bundle.get("responses", [])
        if record.get("kind") == "THINK_ALOUD"
    }


# -- serialization ----------------------------------------------------------

def report_to_dict(report: EffectivenessReport) -> dict:
    return {
        "schemaVersion": REPORT_SCHEMA_VERSION,
        "aspectOriented": {
            "correlations": {
                name: corr.to_json() for name, corr in report.aspect.correlations.items()
            },
            "verbatimTopRankHolds": report.aspect.verbatim_top_rank_holds,
            "variantCount": report.aspect.variant_count,
        },
        "empirical": {
            "answeredPairs": report.empirical.answered_pairs,
            "decidedPairs": report.empirical.decided_pairs,
            "tiedPairs": report.empirical.tied_pairs,
            "unansweredPairs": report.empirical.unanswered_pairs,
            "detectors": {
                name: {
                    "preferencePctMajority": res.preference_pct_majority,
                    "preferencePctResponses": res.preference_pct_responses,
                    "pairsWon": res.pairs_won,
                    "correlationOverall": res.correlation_overall.to_json(),
                    "correlationPerLevel": {
                        str(level): corr.to_json()
                        for level, corr in res.correlation_per_level.items()
                    },
                }
                for name, res in report.empirical.detectors.items()
            },
        },
        "thinkAloud": {
            "entries": [
                {"aspect": aspect, "occurrences": count, "detector": mapped}
                for aspect, count, mapped in report.think_aloud.entries
            ],
        },
        "mechanismWinners": report.mechanism_winners,
        "verdict": report.verdict,
    }


def write_report_artifacts(report: EffectivenessReport, out_dir) -> dict[str, Path]:
    """Write report.json plus flat tables and plot-data series.

    Everything is derived deterministically from the report, so re-running
    on the same inputs yields byte-identical artifacts.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": out / "report.json",
        "per_level": out / "per_level_correlations.csv",
        "preferences": out / "preference_counts.csv",
        "plot_data": out / "plot_data.json",
    }
    paths["report"].write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True), encoding="utf-8"
    )

    with open(paths["per_level"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "detector", "correlation", "immeasurable_reason"])
        for name, res in sorted(report.empirical.detectors.items()):
            for level, corr in sorted(res.correlation_per_level.items()):
                writer.writerow([
                    level, name,
                    "" if corr.value is None else corr.value,
                    corr.immeasurable_reason or "",
                ])

    with open(paths["preferences"], "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["detector", "pairs_won", "pct_majority", "pct_responses"])
        for name, res in sorted(report.empirical.detectors.items()):
            writer.writerow([
                name, res.pairs_won,
                "" if res.preference_pct_majority is None else res.preference_pct_majority,
                "" if res.preference_pct_responses is None else res.preference_pct_responses,
            ])

    series = []
    for name, res in sorted(report.empirical.detectors.items()):
        levels = sorted(res.correlation_per_level)
        series.append({
            "name": f"{name} correlation by level",
            "x": levels,
            "y": [res.correlation_per_level[level].value for level in levels],
        })
    series.append({
        "name": "majority preference pct",
        "x": sorted(report.empirical.detectors),
        "y": [
            report.empirical.detectors[name].preference_pct_majority
            for name in sorted(report.empirical.detectors)
        ],
    })
    series.append({
        "name": "think-aloud occurrences",
        "x": [aspect for aspect, _, _ in report.think_aloud.entries],
        "y": [count for _, count, _ in report.think_aloud.entries],
    })
    paths["plot_data"].write_text(
        json.dumps({"schemaVersion": REPORT_SCHEMA_VERSION, "series": series},
                   indent=2, sort_keys=True),
        encoding="utf-8",
    )
    return paths
