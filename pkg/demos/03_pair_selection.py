#!/usr/bin/env python3
"""Select contradicting plagiarism pairs from the bundled reference corpus.

A pair is contradicting when the two detectors rank its members in
opposite order; those are exactly the cases where a human tiebreak is
informative. The bundled corpus is engineered so one member is a pure
token permutation (attribute detector loves it) and another is a verbatim
copy with an appended stub (structure detector loves it).
"""

from importlib import resources

from plagbench import pairsel
from plagbench.attribute import aba_similarity
from plagbench.structure import sba_similarity

manifest = resources.files("plagbench") / "fixtures" / "table_i" / "manifest.json"
dataset = pairsel.ingest_dataset(str(manifest))
print(f"ingested {len(dataset.clusters)} cluster(s)")

candidates = []
for cluster in dataset.clusters:
    sims_aba = pairsel.cluster_similarities(
        cluster, lambda a, b: aba_similarity(a, b).value)
    sims_sba = pairsel.cluster_similarities(
        cluster, lambda a, b: sba_similarity(a, b).value)
    print(f"\ncluster {cluster.cluster_id}:")
    for member in cluster.members:
        print(f"  {member.member_id}: ABA {sims_aba[member.member_id]:.4f}  "
              f"SBA {sims_sba[member.member_id]:.4f}")
    candidates.extend(pairsel.contradicting_pairs(cluster, sims_aba, sims_sba))

print(f"\ncontradicting candidates: {len(candidates)}")
for pair in candidates:
    print(f"  {pair.pair_id}  delta={pair.delta:.4f}  ({pair.condition})")

report = pairsel.select_survey_pairs(candidates, min_delta=0.0)
print(f"\nselected for the survey: {[p.pair_id for p in report.selected]}")
print(f"significance gate: passed={report.gate_passed}"
      + (f" ({report.gate_reason})" if report.gate_reason else ""))
