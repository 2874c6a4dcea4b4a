"""Source-code plagiarism detectors with a human-oriented evaluation workbench.

Library surface:

* :mod:`plagbench.lexer` - Java-subset tokenizer feeding both detectors.
* :mod:`plagbench.attribute` / :mod:`plagbench.structure` - the two
  detectors (token-frequency cosine, greedy string tiling).
* :mod:`plagbench.stats` - Pearson, paired t-test, competition ranking.
* :mod:`plagbench.casegen` - artificial survey cases varying token order.
* :mod:`plagbench.pairsel` - corpus ingestion and contradicting-pair selection.
* :mod:`plagbench.survey` - session/task/response service with an HTTP API.
* :mod:`plagbench.analysis` - effectiveness report over collected responses.
"""

from .attribute import aba_similarity, cosine_similarity, frequency_vector
from .lexer import Abstraction, LexerConfig, Token, TokenKind, TokenSequence, tokenize, tokenize_file
from .similarity import Detector, SimilarityDegree
from .stats import negate_average_ranks, paired_t_test, pearson, rank_descending
from .structure import rkr_gst_tiles, sba_similarity

__version__ = "0.1.0"

__all__ = [
    "Abstraction",
    "Detector",
    "LexerConfig",
    "SimilarityDegree",
    "Token",
    "TokenKind",
    "TokenSequence",
    "aba_similarity",
    "cosine_similarity",
    "frequency_vector",
    "negate_average_ranks",
    "paired_t_test",
    "pearson",
    "rank_descending",
    "rkr_gst_tiles",
    "sba_similarity",
    "tokenize",
    "tokenize_file",
]
