"""Sentence embeddings via mean pooling over a transformer encoder."""

from __future__ import annotations

import torch
from transformers import AutoModel, AutoTokenizer


class EmbedRunner:
    def __init__(self, model_id: str, max_seq_tokens: int = 512):
        self.model_id = model_id
        self.max_seq_tokens = max_seq_tokens
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModel.from_pretrained(model_id)
        self.model.eval()

    @torch.no_grad()
    def embed(self, texts: list[str]) -> list[list[float]]:
        enc = self.tokenizer(texts, truncation=True,
                             max_length=self.max_seq_tokens,
                             padding=True, return_tensors="pt")
        out = self.model(**{k: v for k, v in enc.items()
                            if k in ("input_ids", "attention_mask",
                                     "token_type_ids")})
        hidden = out.last_hidden_state
        mask = enc["attention_mask"].unsqueeze(-1).to(hidden.dtype)
        summed = (hidden * mask).sum(dim=1)
        counts = mask.sum(dim=1).clamp(min=1)
        vectors = summed / counts
        return [[float(x) for x in row] for row in vectors]
