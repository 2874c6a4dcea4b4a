"""Artificial survey-case generation for the order-change aspect.

A case is an original source plus a family of variants whose only
modification is statement/block order, so every variant keeps the exact
token multiset of the original (the attribute detector cannot distinguish
them) while the structural detector reacts to the reordering.

Two generators are provided:

* ``generate_swap_variants`` swaps N adjacent whole statements for
  N in (0, 1, 3, 5); the N=0 variant is byte-identical to the original.
* ``generate_block_permutations`` reorders exactly three blocks through
  all six permutations, in lexicographic permutation order.

Statement spans and blocks are author-supplied 1-based inclusive line
ranges; the tool does not try to discover statement boundaries and it does
not prove behavior preservation - generated cases are meant to be reviewed
by a human before use.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path

from . import attribute, structure
from .lexer import LexerConfig, tokenize
from .stats import TTestResult, ZeroVariance, paired_t_test

BUNDLE_SCHEMA_VERSION = 1
DEFAULT_SWAP_COUNTS = (0, 1, 3, 5)


class CaseScope(enum.Enum):
    SINGLE_INSTRUCTION = "SINGLE_INSTRUCTION"
    MULTIPLE_INSTRUCTIONS = "MULTIPLE_INSTRUCTIONS"
    METHOD = "METHOD"
    CLASS = "CLASS"


_VARIANTS_PER_SCOPE = {
    CaseScope.SINGLE_INSTRUCTION: 4,
    CaseScope.MULTIPLE_INSTRUCTIONS: 6,
    CaseScope.METHOD: 6,
    CaseScope.CLASS: 6,
}


class InsufficientStatements(ValueError):
    pass


class OverlappingSpans(ValueError):
    pass


class OverlappingBlocks(ValueError):
    pass


class BlockCountNot3(ValueError):
    pass


@dataclass(frozen=True)
class Variant:
    variant_id: str
    source: str
    transform: dict

    @property
    def is_identity(self) -> bool:
        return bool(self.transform.get("identity"))


@dataclass
class ArtificialCase:
    case_id: str
    scope: CaseScope
    original: str
    variants: list[Variant]
    seed: int | None = None

    def __post_init__(self):
        expected = _VARIANTS_PER_SCOPE[self.scope]
        if len(self.variants) != expected:
            raise ValueError(
                f"{self.scope.value} case must have {expected} variants, "
                f"got {len(self.variants)}"
            )

    @property
    def identity_variant(self) -> Variant:
        return next(v for v in self.variants if v.is_identity)


@dataclass
class CaseValidation:
    per_variant_aba: list[float]
    per_variant_sba: list[float]
    t_test: TTestResult | None
    valid: bool
    reason: str | None = None


def _split_segments(source: str, ranges: list[tuple[int, int]], error_cls):
    """Decompose source into [gap, span, gap, span, ..., gap] line chunks.

    ``ranges`` are 1-based inclusive line ranges. Reordering permutes span
    contents among span slots while every gap chunk stays in place, which
    keeps the reassembled text byte-exact for the identity arrangement.
    """
    lines = source.splitlines(keepends=True)
    n_lines = len(lines)
    ordered = sorted(ranges)
    previous_end = 0
    for start, end in ordered:
        if start < 1 or end > n_lines or start > end:
            raise error_cls(f"line range {start}-{end} outside source of {n_lines} lines")
        if start <= previous_end:
            raise error_cls(f"line range {start}-{end} overlaps an earlier range")
        previous_end = end
    gaps: list[str] = []
    spans: list[str] = []
    cursor = 0
    for start, end in ordered:
        gaps.append("".join(lines[cursor:start - 1]))
        spans.append("".join(lines[start - 1:end]))
        cursor = end
    gaps.append("".join(lines[cursor:]))
    return gaps, spans


def _reassemble(gaps: list[str], spans: list[str], order: list[int]) -> str:
    pieces = [gaps[0]]
    for slot, span_index in enumerate(order):
        pieces.append(spans[span_index])
        pieces.append(gaps[slot + 1])
    return "".join(pieces)


def generate_swap_variants(
    original: str,
    statement_spans: list[tuple[int, int]],
    swap_counts: tuple[int, ...] = DEFAULT_SWAP_COUNTS,
    *,
    case_id: str = "case",
    seed: int = 0,
) -> ArtificialCase:
    """Single-instruction scope case: one variant per swap count.

    Variant k applies ``swap_counts[k]`` distinct adjacent-statement swaps,
    chosen by a seeded RNG and applied in ascending position order. The
    zero-swap variant is a verbatim copy of the original.
    """
    if len(swap_counts) != _VARIANTS_PER_SCOPE[CaseScope.SINGLE_INSTRUCTION]:
        raise ValueError("single-instruction cases take exactly four swap counts")
    gaps, spans = _split_segments(original, list(statement_spans), OverlappingSpans)
    n_statements = len(spans)
    max_swaps = max(swap_counts)
    if max_swaps > n_statements - 1:
        raise InsufficientStatements(
            f"{max_swaps} distinct adjacent swaps need at least {max_swaps + 1} "
            f"statements, got {n_statements}"
        )
    variants = []
    for count in swap_counts:
        # string seeding is stable across platforms and Python versions
        rng = random.Random(f"{seed}:{count}")
        positions = sorted(rng.sample(range(n_statements - 1), count)) if count else []
        order = list(range(n_statements))
        for p in positions:
            order[p], order[p + 1] = order[p + 1], order[p]
        source = _reassemble(gaps, spans, order) if count else original
        variants.append(
            Variant(
                variant_id=f"swap{count}",
                source=source,
                transform={
                    "kind": "adjacent-swaps",
                    "count": count,
                    "positions": positions,
                    "identity": count == 0,
                },
            )
        )
    return ArtificialCase(case_id, CaseScope.SINGLE_INSTRUCTION, original, variants, seed)


def generate_block_permutations(
    original: str,
    blocks: list[tuple[int, int]],
    scope: CaseScope = CaseScope.MULTIPLE_INSTRUCTIONS,
    *,
    case_id: str = "case",
) -> ArtificialCase:
    """Six variants, one per permutation of three blocks.

    Permutations come out in lexicographic order (123, 132, 213, 231, 312,
    321); the identity permutation reproduces the original byte-for-byte.
    """
    if scope is CaseScope.SINGLE_INSTRUCTION:
        raise ValueError("block permutation cases use the larger scopes")
    if len(blocks) != 3:
        raise BlockCountNot3(f"exactly 3 blocks required, got {len(blocks)}")
    gaps, spans = _split_segments(original, list(blocks), OverlappingBlocks)
    variants = []
    for perm in itertools.permutations(range(3)):
        label = "".join(str(i + 1) for i in perm)
        identity = perm == (0, 1, 2)
        source = original if identity else _reassemble(gaps, spans, list(perm))
        variants.append(
            Variant(
                variant_id=f"perm{label}",
                source=source,
                transform={
                    "kind": "block-permutation",
                    "order": [i + 1 for i in perm],
                    "identity": identity,
                },
            )
        )
    return ArtificialCase(case_id, scope, original, variants)


def validate_case_set(
    cases: list[ArtificialCase],
    config: LexerConfig | None = None,
    min_match: int = structure.DEFAULT_MIN_MATCH,
    alpha: float = 0.05,
) -> CaseValidation:
    """Check that the two detectors disagree significantly on the cases.

    Computes both similarities of every variant against its original and
    runs a two-tailed paired t-test over the aligned lists; the case set is
    valid when p < alpha. Zero variance between the lists is reported as an
    invalid verdict with a reason instead of an exception.
    """
    aba_values: list[float] = []
    sba_values: list[float] = []
    for case in cases:
        original = tokenize(case.original, config, source_id=f"{case.case_id}/original")
        for variant in case.variants:
            tokens = tokenize(variant.source, config,
                              source_id=f"{case.case_id}/{variant.variant_id}")
            aba_values.append(attribute.aba_similarity(original, tokens).value)
            sba_values.append(structure.sba_similarity(original, tokens, min_match).value)
    if len(aba_values) < 2:
        raise ValueError("need at least two variants across the case set")
    try:
        result = paired_t_test(aba_values, sba_values)
    except ZeroVariance as exc:
        return CaseValidation(aba_values, sba_values, None, False, str(exc))
    return CaseValidation(aba_values, sba_values, result, result.p < alpha)


def case_to_dict(case: ArtificialCase) -> dict:
    return {
        "schemaVersion": BUNDLE_SCHEMA_VERSION,
        "caseId": case.case_id,
        "scope": case.scope.value,
        "seed": case.seed,
        "original": case.original,
        "variants": [
            {"id": v.variant_id, "source": v.source, "transform": v.transform}
            for v in case.variants
        ],
    }


def case_from_dict(data: dict) -> ArtificialCase:
    if data.get("schemaVersion") != BUNDLE_SCHEMA_VERSION:
        raise ValueError(f"unsupported case bundle schema: {data.get('schemaVersion')}")
    return ArtificialCase(
        case_id=data["caseId"],
        scope=CaseScope(data["scope"]),
        original=data["original"],
        variants=[
            Variant(v["id"], v["source"], v["transform"]) for v in data["variants"]
        ],
        seed=data.get("seed"),
    )


def save_case_bundle(case: ArtificialCase, path) -> None:
    Path(path).write_text(json.dumps(case_to_dict(case), indent=2, sort_keys=True),
                          encoding="utf-8")


def load_case_bundle(path) -> ArtificialCase:
    return case_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
