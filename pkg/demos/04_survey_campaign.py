#!/usr/bin/env python3
"""A complete in-process survey campaign with simulated respondents.

Builds cases and contradicting pairs, runs the survey service against a
temporary record log, lets nine simulated respondents (three per group)
answer every task while judging codes by structural similarity, and turns
the export into the final effectiveness report.
"""

import tempfile
from importlib import resources
from pathlib import Path

from plagbench import analysis, casegen, pairsel, tokenize
from plagbench.attribute import aba_similarity
from plagbench.stats import rank_descending
from plagbench.structure import sba_similarity
from plagbench.survey import EventLog, PairItem, SurveyService

# -- campaign inputs ---------------------------------------------------------

campaign_root = resources.files("plagbench") / "fixtures" / "aspect_campaign"
cases = [
    casegen.load_case_bundle(str(campaign_root / f"{cid}.case.json"))
    for cid in ("si", "mi", "me", "cl")
]

manifest = resources.files("plagbench") / "fixtures" / "table_i" / "manifest.json"
dataset = pairsel.ingest_dataset(str(manifest))
candidates = []
for cluster in dataset.clusters:
    sims_aba = pairsel.cluster_similarities(cluster, lambda a, b: aba_similarity(a, b).value)
    sims_sba = pairsel.cluster_similarities(cluster, lambda a, b: sba_similarity(a, b).value)
    candidates.extend(pairsel.contradicting_pairs(cluster, sims_aba, sims_sba))
selection = pairsel.select_survey_pairs(candidates)
clusters = {c.cluster_id: c for c in dataset.clusters}
pair_items = [
    PairItem(
        pair_id=p.pair_id,
        original_source=Path(clusters[p.cluster_id].original_path).read_text(),
        member_ids=(p.code_a, p.code_b),
        member_sources=(Path(p.path_a).read_text(), Path(p.path_b).read_text()),
    )
    for p in selection.selected
]

# -- run the service with simulated respondents --------------------------------


def structural_judgement(task):
    if task["kind"] == "THINK_ALOUD":
        return {"text": "I mostly compared the order of the statements."}
    original = tokenize(task["original"])
    scored = [
        (sba_similarity(original, tokenize(item["source"])).value, item["label"])
        for item in task["items"]
    ]
    if task["kind"] == "PAIR_PREFERENCE":
        return {"chosen": max(scored)[1]}
    ranks = rank_descending([s for s, _ in scored]).ranks
    return {"ranks": {label: int(rank) for (_, label), rank in zip(scored, ranks)}}


with tempfile.TemporaryDirectory() as tmp:
    service = SurveyService(EventLog(Path(tmp) / "campaign.log"), cases=cases,
                            pairs=pair_items, group_count=3, seed=2024)
    annotations = {}
    for i in range(9):
        session = service.create_session(f"sim-{i}")
        answered = 0
        while True:
            task = service.next_task(session.session_id)
            if task.get("done"):
                break
            service.submit_response(session.session_id, task["taskId"],
                                    task["kind"], structural_judgement(task))
            answered += 1
        annotations[session.session_id] = ["Statement order"]
        print(f"respondent {i} (group {session.group_index}) answered {answered} tasks")

    bundle = service.export_responses()

# -- analysis -------------------------------------------------------------------

detectors = analysis.default_detectors()
aspect = analysis.aspect_report(cases, analysis.case_rankings_from_export(bundle),
                                detectors)
empirical = analysis.empirical_report(selection.selected,
                                      analysis.pair_preferences_from_export(bundle))
tally = analysis.aspect_tally(annotations, {"Statement order": "SBA"})
report = analysis.build_effectiveness_report(aspect, empirical, tally)

print("\n== effectiveness report ==")
for name, corr in report.aspect.correlations.items():
    shown = f"{corr.value:.4f}" if corr.value is not None else \
        f"immeasurable ({corr.immeasurable_reason})"
    print(f"  aspect correlation {name}: {shown}")
print(f"  verbatim copy always ranked best: {report.aspect.verbatim_top_rank_holds}")
for name, res in report.empirical.detectors.items():
    print(f"  empirical {name}: majority {res.preference_pct_majority}% "
          f"({res.pairs_won} pair(s) won)")
print(f"  think-aloud weighted sums: "
      f"SBA={tally.weighted_sum('SBA')} ABA={tally.weighted_sum('ABA')}")
print(f"  mechanism winners: {report.mechanism_winners}")
print(f"  verdict: {report.verdict}")
