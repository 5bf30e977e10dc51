"""Shim configuration, read from the environment.

QA_MODEL and EMBED_MODEL accept any Hugging Face model id or local path;
swapping the QA model (BERT-base, BERT-large, DistilBERT, RoBERTa,
Tiny-RoBERTa, ...) is configuration, not code.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_QA_MODEL = "distilbert-base-cased-distilled-squad"
DEFAULT_EMBED_MODEL = "sentence-transformers/all-MiniLM-L6-v2"


@dataclass(frozen=True)
class ShimConfig:
    qa_model_id: str
    embed_model_id: str
    port: int = 8901
    max_seq_tokens: int = 512

    def __post_init__(self):
        if not self.qa_model_id or not self.embed_model_id:
            raise ValueError("model identifiers must be non-empty")
        if not (1024 <= self.port <= 65535):
            raise ValueError(f"port {self.port} outside 1024..65535")
        if self.max_seq_tokens < 32:
            raise ValueError("max_seq_tokens too small")


def from_env() -> ShimConfig:
    return ShimConfig(
        qa_model_id=os.environ.get("QA_MODEL", DEFAULT_QA_MODEL),
        embed_model_id=os.environ.get("EMBED_MODEL", DEFAULT_EMBED_MODEL),
        port=int(os.environ.get("PORT", "8901")),
        max_seq_tokens=int(os.environ.get("MAX_SEQ_TOKENS", "512")),
    )
