"""Method-level decomposition, token budgeting and bottom-up translation of Java-like projects."""

from progdecomp.source_model import (
    FileSkeleton,
    MethodFragment,
    SourceFile,
    UnbalancedBraces,
    UnknownFragmentId,
    extract_fragments,
    scan_corpus,
    splice,
)
from progdecomp.tokenizer import (
    ContextBudget,
    FallbackTokenizer,
    TokenModel,
    count_tokens,
    count_tokens_fallback,
    fits,
    load_token_model,
)

__all__ = [
    "ContextBudget",
    "FallbackTokenizer",
    "FileSkeleton",
    "MethodFragment",
    "SourceFile",
    "TokenModel",
    "UnbalancedBraces",
    "UnknownFragmentId",
    "count_tokens",
    "count_tokens_fallback",
    "extract_fragments",
    "fits",
    "load_token_model",
    "scan_corpus",
    "splice",
]

__version__ = "0.1.0"
