#!/usr/bin/env python3
"""Generate the artificial survey cases where token order is the only change.

A swap case reorders N adjacent statements (N = 0, 1, 3, 5); a block case
enumerates all six permutations of three blocks. Every variant keeps the
original's exact token multiset, so the attribute detector stays pinned at
1.0 while the structural detector reacts to the separator tokens stranded
by the reorder.
"""

from plagbench import casegen, tokenize
from plagbench.attribute import aba_similarity
from plagbench.structure import sba_similarity

swap_source = (
    "int a = f(1);\n;\n"
    "while (a < 9) a = a + 1;\n;\n"
    "if (a > 2) trim(a);\n;\n"
    "String s = fmt(a);\n;\n"
    "boolean done = true;\n;\n"
    "long mark = stamp();\n"
)
swap_case = casegen.generate_swap_variants(
    swap_source, [(1, 1), (3, 3), (5, 5), (7, 7), (9, 9), (11, 11)],
    case_id="demo-swaps", seed=7,
)

block_source = (
    "int a = f(1);\nint b = g(a);\n"
    ";\n"
    "while (b < 9) b = b + 1;\nif (b > a) b = a;\n"
    ";\n"
    "double r = 1.5;\nchar c = 'x';\n"
)
block_case = casegen.generate_block_permutations(
    block_source, [(1, 2), (4, 5), (7, 8)],
    casegen.CaseScope.MULTIPLE_INSTRUCTIONS, case_id="demo-blocks",
)

for case in (swap_case, block_case):
    print(f"== case {case.case_id} ({case.scope.value}) ==")
    original = tokenize(case.original)
    for variant in case.variants:
        tokens = tokenize(variant.source)
        aba = aba_similarity(original, tokens).value
        sba = sba_similarity(original, tokens).value
        marker = "  <- identity" if variant.is_identity else ""
        print(f"  {variant.variant_id:<8} ABA {aba:.4f}  SBA {sba:.4f}{marker}")
    print()

validation = casegen.validate_case_set([swap_case, block_case])
print("case-set validation (paired t-test between the two detectors):")
print(f"  t = {validation.t_test.t:.4f}, df = {validation.t_test.df}, "
      f"p = {validation.t_test.p:.2e}")
print(f"  valid for a survey: {validation.valid}")
