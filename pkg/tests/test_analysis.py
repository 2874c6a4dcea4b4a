import json
from importlib import resources

import pytest

from plagbench import analysis, casegen, tokenize
from plagbench.analysis import (
    FewerThanTwo,
    MissingPreferences,
    MissingRankings,
    aspect_report,
    aspect_tally,
    build_effectiveness_report,
    default_detectors,
    empirical_report,
    run_tournament,
)
from plagbench.pairsel import pair_from_dict
from plagbench.stats import rank_descending
from plagbench.structure import sba_similarity


def load_fixture(name):
    root = resources.files("plagbench") / "fixtures"
    return json.loads((root / name).read_text(encoding="utf-8"))


def load_campaign():
    root = resources.files("plagbench") / "fixtures" / "aspect_campaign"
    cases = [
        casegen.case_from_dict(json.loads((root / f"{cid}.case.json").read_text()))
        for cid in ("si", "mi", "me", "cl")
    ]
    rankings = json.loads((root / "rankings.json").read_text())["caseRankings"]
    return cases, rankings


# -- think-aloud tally -------------------------------------------------------

def test_table_replay_aspect_tally():
    coding = load_fixture("think_aloud_coding.json")
    tally = aspect_tally(coding["annotations"], coding["codebook"])
    assert [(a, n) for a, n, _ in tally.entries] == [
        ("Statement order", 11),
        ("Semantic", 5),
        ("Identifier name", 3),
        ("Structure", 2),
        ("Output", 1),
        ("Line of code", 1),
    ]
    mapping = {a: d for a, _, d in tally.entries}
    assert mapping["Statement order"] == "SBA"
    assert mapping["Identifier name"] == "ABA"
    assert mapping["Line of code"] == "ABA"
    assert tally.weighted_sum("SBA") == 19
    assert tally.weighted_sum("ABA") == 4


def test_tally_counts_each_respondent_once():
    tally = aspect_tally({"r1": ["Order", "Order", "Order"]}, {"Order": "SBA"})
    assert tally.entries == [("Order", 1, "SBA")]


def test_tally_unmapped_aspect():
    tally = aspect_tally({"r1": ["Mystery"]}, {})
    assert tally.entries == [("Mystery", 1, "UNMAPPED")]


def test_empty_descriptions_empty_tally():
    assert aspect_tally({}, {}).entries == []


# -- aspect-oriented section --------------------------------------------------

def test_campaign_fixture_replay():
    cases, rankings = load_campaign()
    section = aspect_report(cases, rankings, default_detectors())
    aba = section.correlations["ABA"]
    sba = section.correlations["SBA"]
    assert aba.value is None
    assert "no variability" in aba.immeasurable_reason
    assert sba.value == pytest.approx(0.8929835903865655, abs=1e-9)
    assert sba.value > 0.7
    assert section.verbatim_top_rank_holds


def test_perfect_agreement_gives_exact_correlation_one():
    # single-token blocks: similarity values are affine in the ranks, so
    # respondents who rank exactly by similarity yield r = 1.0 exactly
    case = casegen.generate_block_permutations(
        "int\nwhile\nfor\n", [(1, 1), (2, 2), (3, 3)],
        casegen.CaseScope.MULTIPLE_INSTRUCTIONS, case_id="kw")
    original = tokenize(case.original)
    sims = [sba_similarity(original, tokenize(v.source)).value for v in case.variants]
    ranks = [int(r) for r in rank_descending(sims).ranks]
    ranking = dict(zip((v.variant_id for v in case.variants), ranks))
    section = aspect_report([case], {"kw": [ranking, ranking]}, default_detectors())
    assert section.correlations["SBA"].value == pytest.approx(1.0, abs=1e-9)
    assert section.correlations["ABA"].value is None


def test_missing_rankings_raises():
    cases, rankings = load_campaign()
    with pytest.raises(MissingRankings):
        aspect_report(cases, {}, default_detectors())
    incomplete = {k: v for k, v in rankings.items() if k != "cl"}
    with pytest.raises(MissingRankings):
        aspect_report(cases, incomplete, default_detectors())


def test_negation_antitone_flips_correlation_sign():
    cases, rankings = load_campaign()
    section = aspect_report(cases, rankings, default_detectors())
    # one global flip constant keeps the transform affine across the pool
    max_rank = max(rank for rows in rankings.values() for r in rows
                   for rank in r.values())
    flipped = {
        case_id: [
            {v: (max_rank + 1 - rank) for v, rank in r.items()}
            for r in rows
        ]
        for case_id, rows in rankings.items()
    }
    flipped_section = aspect_report(cases, flipped, default_detectors())
    original = section.correlations["SBA"].value
    mirrored = flipped_section.correlations["SBA"].value
    assert mirrored == pytest.approx(-original, abs=1e-9)


def test_verbatim_flag_false_when_identity_not_best():
    cases, rankings = load_campaign()
    bad = {k: [dict(r) for r in v] for k, v in rankings.items()}
    for row in bad["mi"]:
        worst = max(row.values()) + 1
        row["perm123"] = worst
    section = aspect_report(cases, bad, default_detectors())
    assert not section.verbatim_top_rank_holds


# -- empirical section ---------------------------------------------------------

def _pair(tag, level=2, sims_p1=(0.9, 0.5), sims_p2=(0.3, 0.8)):
    return pair_from_dict({
        "clusterId": f"c/{level}", "level": level,
        "codeA": f"{tag}-a", "codeB": f"{tag}-b",
        "pathA": "a.java", "pathB": "b.java",
        "ranksP1": [1, 2], "ranksP2": [2, 1],
        "simsP1": list(sims_p1), "simsP2": list(sims_p2),
        "delta": abs(sims_p1[0] - sims_p1[1]) + abs(sims_p2[0] - sims_p2[1]),
        "condition": "Con1",
    })


def test_preference_percentages_by_majority():
    pairs = [_pair(f"p{i}") for i in range(4)]
    # SBA favors the b member (sims_p2 higher на b); three pairs prefer b
    preferences = {
        "p0": ["p0-b"], "p1": ["p1-b"], "p2": ["p2-b"], "p3": ["p3-a"],
    }
    preferences = {p.pair_id: preferences[p.code_a.rsplit("-", 1)[0]] for p in pairs}
    section = empirical_report(pairs, preferences)
    assert section.detectors["SBA"].preference_pct_majority == pytest.approx(75.0)
    assert section.detectors["ABA"].preference_pct_majority == pytest.approx(25.0)
    assert section.detectors["SBA"].pairs_won == 3
    total = (section.detectors["SBA"].preference_pct_majority
             + section.detectors["ABA"].preference_pct_majority)
    assert total <= 100.0 + 1e-9


def test_unanimous_preferences_give_100_percent():
    pairs = [_pair(f"p{i}") for i in range(5)]
    preferences = {p.pair_id: [p.code_b, p.code_b, p.code_b] for p in pairs}
    section = empirical_report(pairs, preferences)
    assert section.detectors["SBA"].preference_pct_majority == 100.0
    assert section.detectors["ABA"].preference_pct_majority == 0.0
    assert section.detectors["SBA"].preference_pct_responses == 100.0


def test_tied_votes_excluded_from_majority():
    pairs = [_pair("p0"), _pair("p1")]
    preferences = {
        pairs[0].pair_id: [pairs[0].code_a, pairs[0].code_b],  # tie
        pairs[1].pair_id: [pairs[1].code_b],
    }
    section = empirical_report(pairs, preferences)
    assert section.tied_pairs == [pairs[0].pair_id]
    assert section.decided_pairs == 1
    assert section.detectors["SBA"].preference_pct_majority == 100.0


def test_unanswered_pairs_listed_and_excluded():
    pairs = [_pair("p0"), _pair("p1")]
    preferences = {pairs[0].pair_id: [pairs[0].code_b]}
    section = empirical_report(pairs, preferences)
    assert section.unanswered_pairs == [pairs[1].pair_id]
    assert section.answered_pairs == 1


def test_no_preferences_at_all_raises():
    with pytest.raises(MissingPreferences):
        empirical_report([_pair("p0")], {})


def test_no_pairs_gives_vacuous_section():
    section = empirical_report([], {})
    assert section.answered_pairs == 0
    assert section.detectors["SBA"].preference_pct_majority is None
    assert section.detectors["ABA"].correlation_overall.value is None


def test_per_level_correlations_keyed_by_level():
    pairs = [
        _pair("p0", level=2, sims_p1=(0.9, 0.5), sims_p2=(0.3, 0.8)),
        _pair("p1", level=2, sims_p1=(0.7, 0.4), sims_p2=(0.2, 0.6)),
        _pair("p2", level=3, sims_p1=(0.8, 0.3), sims_p2=(0.1, 0.9)),
        _pair("p3", level=3, sims_p1=(0.6, 0.2), sims_p2=(0.4, 0.7)),
    ]
    preferences = {p.pair_id: [p.code_b] for p in pairs}
    section = empirical_report(pairs, preferences)
    assert set(section.detectors["SBA"].correlation_per_level) == {2, 3}
    # respondents always prefer the second member, which is SBA's favoring
    # code, so SBA correlates positively and ABA negatively
    assert section.detectors["SBA"].correlation_overall.value > 0
    assert section.detectors["ABA"].correlation_overall.value < 0


# -- tournament ----------------------------------------------------------------

def test_tournament_two_entrants():
    winner, trace = run_tournament(["P1", "P2"], lambda a, b: "P2")
    assert winner == "P2"
    assert len(trace) == 1


def test_tournament_lower_index_always_wins():
    winner, trace = run_tournament(
        ["P1", "P2", "P3", "P4"], lambda a, b: a)
    assert winner == "P1"
    assert len([t for t in trace if t["outcome"] != "bye"]) == 3


def test_tournament_odd_count_gives_bye():
    calls = []

    def compare(a, b):
        calls.append((a, b))
        return a

    winner, trace = run_tournament(["P1", "P2", "P3"], compare)
    assert calls[0] == ("P1", "P2")
    byes = [t for t in trace if t["outcome"] == "bye"]
    assert byes and byes[0]["advanced"] == "P3"
    assert winner == "P1"


def test_tournament_tie_advances_earlier_entrant():
    winner, trace = run_tournament(["P1", "P2"], lambda a, b: None)
    assert winner == "P1"
    assert trace[0]["outcome"] == "Tie"


def test_tournament_needs_two():
    with pytest.raises(FewerThanTwo):
        run_tournament(["P1"], lambda a, b: a)


# -- verdict --------------------------------------------------------------------

def build_report(preferences_winner="SBA"):
    cases, rankings = load_campaign()
    aspect = aspect_report(cases, rankings, default_detectors())
    pairs = [_pair(f"p{i}") for i in range(4)]
    chosen = (lambda p: p.code_b) if preferences_winner == "SBA" else (lambda p: p.code_a)
    preferences = {p.pair_id: [chosen(p)] for p in pairs}
    empirical = empirical_report(pairs, preferences)
    coding = load_fixture("think_aloud_coding.json")
    tally = aspect_tally(coding["annotations"], coding["codebook"])
    return build_effectiveness_report(aspect, empirical, tally)


def test_verdict_goes_to_structure_detector():
    report = build_report()
    assert report.mechanism_winners == {
        "aspect": "SBA", "empirical": "SBA", "thinkAloud": "SBA",
    }
    assert report.verdict == "SBA"


def test_verdict_majority_of_mechanisms():
    report = build_report(preferences_winner="ABA")
    assert report.mechanism_winners["empirical"] == "ABA"
    assert report.verdict == "SBA"  # still 2 of 3


def test_report_serialization_and_artifacts(tmp_path):
    report = build_report()
    data = analysis.report_to_dict(report)
    assert data["verdict"] == "SBA"
    assert data["aspectOriented"]["correlations"]["ABA"].get("immeasurable")
    paths = analysis.write_report_artifacts(report, tmp_path / "out")
    for path in paths.values():
        assert path.exists()
    first = paths["report"].read_bytes()
    analysis.write_report_artifacts(report, tmp_path / "out")
    assert paths["report"].read_bytes() == first
