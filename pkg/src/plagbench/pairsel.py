"""Plagiarism-corpus ingestion and contradicting-pair selection.

A dataset manifest lists original files and, per original, the plagiarized
member files with their attack level (2 = identifier renaming up to
6 = logic changes). Members cluster by (original, level). Within a
cluster, a pair of members is *contradicting* when the two detectors rank
them in opposite order. With rank 1 as the best ("highest") rank:

    Con1(A, B): A outranks B under the first detector, B outranks A
                under the second;
    Con2(A, B): the mirror image.

Ranks are descending competition ranks over similarity degrees, and both
inequalities are strict, so a rank tie under either detector disqualifies
the pair. Survey selection keeps the highest-delta pairs per level up to a
quota and gates the whole selection on a paired t-test between the two
detectors' similarity values across all selected member codes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .lexer import LexerConfig, TokenSequence, tokenize_file
from .stats import TTestResult, ZeroVariance, paired_t_test, rank_descending

MANIFEST_SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1

# Survey quota used in the reference study: levels 2..6 contribute
# 5, 9, 11, 10 and 10 pairs respectively.
DEFAULT_LEVEL_QUOTAS = {2: 5, 3: 9, 4: 11, 5: 10, 6: 10}


class MissingFile(FileNotFoundError):
    pass


class DuplicateMember(ValueError):
    pass


class IncompleteSimilarityMap(ValueError):
    pass


class ManifestError(ValueError):
    pass


@dataclass
class MemberRef:
    member_id: str
    path: str
    tokens: TokenSequence


@dataclass
class Cluster:
    original_id: str
    level: int
    original_path: str
    original_tokens: TokenSequence
    members: list[MemberRef]

    @property
    def cluster_id(self) -> str:
        return f"{self.original_id}/L{self.level}"


@dataclass
class PlagiarismDataset:
    clusters: list[Cluster]
    manifest_version: int = MANIFEST_SCHEMA_VERSION


@dataclass(frozen=True)
class ContradictingPair:
    cluster_id: str
    level: int
    code_a: str
    code_b: str
    path_a: str
    path_b: str
    rank_a_p1: float
    rank_b_p1: float
    rank_a_p2: float
    rank_b_p2: float
    sim_a_p1: float
    sim_b_p1: float
    sim_a_p2: float
    sim_b_p2: float
    delta: float
    condition: str  # "Con1" or "Con2"

    @property
    def pair_id(self) -> str:
        return f"{self.cluster_id}:{self.code_a}+{self.code_b}"


@dataclass
class SelectionReport:
    selected: list[ContradictingPair]
    t_test: TTestResult | None
    gate_passed: bool
    gate_reason: str | None
    shortfalls: dict[int, int]
    min_delta: float
    alpha: float
    quota: dict[int, int] = field(default_factory=dict)


def ingest_dataset(manifest_path, config: LexerConfig | None = None) -> PlagiarismDataset:
    """Load a dataset manifest and lex every referenced file eagerly.

    Eager lexing makes a broken corpus fail at ingest time with the file
    identity in the error, not deep inside a later pipeline stage.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise MissingFile(str(manifest_path))
    data = json.loads(manifest_path.read_text(encoding="utf-8"))
    if data.get("schemaVersion") != MANIFEST_SCHEMA_VERSION:
        raise ManifestError(f"unsupported manifest schema: {data.get('schemaVersion')}")
    root = manifest_path.parent / data.get("root", ".")

    def lex(rel_path: str) -> tuple[str, TokenSequence]:
        path = root / rel_path
        if not path.is_file():
            raise MissingFile(str(path))
        return str(path), tokenize_file(path, config)

    clusters: dict[tuple[str, int], Cluster] = {}
    for original in data.get("originals", []):
        original_id = original["id"]
        original_path, original_tokens = lex(original["path"])
        for member in original.get("members", []):
            level = int(member["level"])
            key = (original_id, level)
            if key not in clusters:
                clusters[key] = Cluster(original_id, level, original_path,
                                        original_tokens, [])
            cluster = clusters[key]
            if any(m.member_id == member["id"] for m in cluster.members):
                raise DuplicateMember(
                    f"member {member['id']!r} listed twice in cluster {cluster.cluster_id}"
                )
            member_path, member_tokens = lex(member["path"])
            cluster.members.append(MemberRef(member["id"], member_path, member_tokens))
    ordered = [clusters[key] for key in sorted(clusters)]
    return PlagiarismDataset(ordered)


def cluster_similarities(cluster: Cluster, similarity) -> dict[str, float]:
    """Similarity of each member against the cluster's original."""
    return {
        m.member_id: similarity(cluster.original_tokens, m.tokens)
        for m in cluster.members
    }


def contradicting_pairs(
    cluster: Cluster,
    sims_p1: dict[str, float],
    sims_p2: dict[str, float],
) -> list[ContradictingPair]:
    """Every member pair the two detectors order oppositely.

    Result is deterministic: sorted by delta descending, then member ids.
    ``delta = |sim1(A)-sim1(B)| + |sim2(A)-sim2(B)|`` rewards pairs that
    look clearly different under both lenses.
    """
    member_ids = [m.member_id for m in cluster.members]
    for name, sims in (("P1", sims_p1), ("P2", sims_p2)):
        missing = set(member_ids) - set(sims)
        if missing:
            raise IncompleteSimilarityMap(f"{name} lacks members: {sorted(missing)}")
    paths = {m.member_id: m.path for m in cluster.members}
    ranks_p1 = dict(zip(member_ids, rank_descending([sims_p1[m] for m in member_ids]).ranks))
    ranks_p2 = dict(zip(member_ids, rank_descending([sims_p2[m] for m in member_ids]).ranks))

    pairs = []
    for i, a in enumerate(member_ids):
        for b in member_ids[i + 1:]:
            # rank 1 is best: Con1 means A outranks B under P1 only
            con1 = ranks_p1[a] < ranks_p1[b] and ranks_p2[a] > ranks_p2[b]
            con2 = ranks_p1[a] > ranks_p1[b] and ranks_p2[a] < ranks_p2[b]
            if not (con1 or con2):
                continue
            delta = abs(sims_p1[a] - sims_p1[b]) + abs(sims_p2[a] - sims_p2[b])
            pairs.append(ContradictingPair(
                cluster_id=cluster.cluster_id,
                level=cluster.level,
                code_a=a,
                code_b=b,
                path_a=paths[a],
                path_b=paths[b],
                rank_a_p1=ranks_p1[a],
                rank_b_p1=ranks_p1[b],
                rank_a_p2=ranks_p2[a],
                rank_b_p2=ranks_p2[b],
                sim_a_p1=sims_p1[a],
                sim_b_p1=sims_p1[b],
                sim_a_p2=sims_p2[a],
                sim_b_p2=sims_p2[b],
                delta=delta,
                condition="Con1" if con1 else "Con2",
            ))
    pairs.sort(key=lambda p: (-p.delta, p.code_a, p.code_b))
    return pairs


def select_survey_pairs(
    candidates: list[ContradictingPair],
    quota_per_level: dict[int, int] | None = None,
    min_delta: float = 0.0,
    alpha: float = 0.05,
) -> SelectionReport:
    """Pick the survey pairs and gate the selection on significance.

    Per level, up to ``quota`` candidates with delta >= ``min_delta`` are
    taken, highest delta first. The t-test then compares the two
    detectors' similarity values across all selected pairs' member codes;
    the gate passes when p < alpha. An unmeetable quota is recorded as a
    shortfall, never an error.
    """
    quota = dict(DEFAULT_LEVEL_QUOTAS if quota_per_level is None else quota_per_level)
    if any(v < 0 for v in quota.values()):
        raise ValueError("quotas must be non-negative")
    selected: list[ContradictingPair] = []
    shortfalls: dict[int, int] = {}
    for level in sorted(quota):
        eligible = [p for p in candidates if p.level == level and p.delta >= min_delta]
        eligible.sort(key=lambda p: (-p.delta, p.code_a, p.code_b))
        take = eligible[:quota[level]]
        selected.extend(take)
        if len(take) < quota[level]:
            shortfalls[level] = quota[level] - len(take)

    values_p1: list[float] = []
    values_p2: list[float] = []
    for pair in selected:
        values_p1.extend([pair.sim_a_p1, pair.sim_b_p1])
        values_p2.extend([pair.sim_a_p2, pair.sim_b_p2])
    t_test = None
    reason = None
    if len(values_p1) < 2:
        reason = "fewer than two member codes selected"
    else:
        try:
            t_test = paired_t_test(values_p1, values_p2)
        except ZeroVariance as exc:
            reason = str(exc)
    gate_passed = t_test is not None and t_test.p < alpha
    if t_test is not None and not gate_passed:
        reason = f"p={t_test.p:.4g} >= alpha={alpha}"
    return SelectionReport(selected, t_test, gate_passed, reason, shortfalls,
                           min_delta, alpha, quota)


def pair_to_dict(pair: ContradictingPair) -> dict:
    return {
        "pairId": pair.pair_id,
        "clusterId": pair.cluster_id,
        "level": pair.level,
        "codeA": pair.code_a,
        "codeB": pair.code_b,
        "pathA": pair.path_a,
        "pathB": pair.path_b,
        "ranksP1": [pair.rank_a_p1, pair.rank_b_p1],
        "ranksP2": [pair.rank_a_p2, pair.rank_b_p2],
        "simsP1": [pair.sim_a_p1, pair.sim_b_p1],
        "simsP2": [pair.sim_a_p2, pair.sim_b_p2],
        "delta": pair.delta,
        "condition": pair.condition,
    }


def pair_from_dict(data: dict) -> ContradictingPair:
    return ContradictingPair(
        cluster_id=data["clusterId"],
        level=int(data["level"]),
        code_a=data["codeA"],
        code_b=data["codeB"],
        path_a=data["pathA"],
        path_b=data["pathB"],
        rank_a_p1=data["ranksP1"][0],
        rank_b_p1=data["ranksP1"][1],
        rank_a_p2=data["ranksP2"][0],
        rank_b_p2=data["ranksP2"][1],
        sim_a_p1=data["simsP1"][0],
        sim_b_p1=data["simsP1"][1],
        sim_a_p2=data["simsP2"][0],
        sim_b_p2=data["simsP2"][1],
        delta=data["delta"],
        condition=data["condition"],
    )


def report_to_dict(report: SelectionReport) -> dict:
    return {
        "schemaVersion": REPORT_SCHEMA_VERSION,
        "minDelta": report.min_delta,
        "alpha": report.alpha,
        "quota": {str(k): v for k, v in report.quota.items()},
        "gatePassed": report.gate_passed,
        "gateReason": report.gate_reason,
        "tTest": None if report.t_test is None else {
            "t": report.t_test.t, "df": report.t_test.df, "p": report.t_test.p,
        },
        "shortfalls": {str(k): v for k, v in report.shortfalls.items()},
        "selected": [pair_to_dict(p) for p in report.selected],
    }


def report_from_dict(data: dict) -> SelectionReport:
    if data.get("schemaVersion") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema: {data.get('schemaVersion')}")
    t_test = None
    if data.get("tTest"):
        t_test = TTestResult(data["tTest"]["t"], data["tTest"]["df"], data["tTest"]["p"])
    return SelectionReport(
        selected=[pair_from_dict(p) for p in data["selected"]],
        t_test=t_test,
        gate_passed=data["gatePassed"],
        gate_reason=data.get("gateReason"),
        shortfalls={int(k): v for k, v in data.get("shortfalls", {}).items()},
        min_delta=data["minDelta"],
        alpha=data["alpha"],
        quota={int(k): v for k, v in data.get("quota", {}).items()},
    )


def save_report(report: SelectionReport, json_path, csv_path=None) -> None:
    Path(json_path).write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True), encoding="utf-8"
    )
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([
                "pair_id", "level", "path_a", "path_b",
                "sim_a_p1", "sim_b_p1", "sim_a_p2", "sim_b_p2", "delta",
            ])
            for p in report.selected:
                writer.writerow([
                    p.pair_id, p.level, p.path_a, p.path_b,
                    p.sim_a_p1, p.sim_b_p1, p.sim_a_p2, p.sim_b_p2, p.delta,
                ])


def load_report(json_path) -> SelectionReport:
    return report_from_dict(json.loads(Path(json_path).read_text(encoding="utf-8")))
