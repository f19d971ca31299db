"""Text-to-CoNLL-U adapter for the polmet metaphor pipeline.

Converts a raw post corpus (CSV or JSONL with post_id and text columns)
into dependency parses in the 10-column CoNLL-U format that the polmet
pair extractor reads. The parser is a deterministic rule-based English
tagger/parser built for short social-media posts; it is intentionally
self-contained so the adapter has no runtime dependency on polmet or on
any third-party parsing library.
"""

from parse_adapter.adapter import (AdapterConfig, AdapterError,
                                   available_parsers, text_to_conllu)
from parse_adapter.rules import RuleParser, parse_text

__version__ = "1.0.0"

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "RuleParser",
    "available_parsers",
    "parse_text",
    "text_to_conllu",
    "__version__",
]
