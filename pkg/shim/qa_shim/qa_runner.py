"""Extractive question answering over a transformer checkpoint.

Long contexts are handled with the tokenizer's stride-window convention;
the best-scoring span across windows wins. The returned answer text is
always sliced from the supplied context at the returned offsets, so
context[start:end] == answer holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from transformers import AutoModelForQuestionAnswering, AutoTokenizer

MAX_ANSWER_TOKENS = 64


@dataclass(frozen=True)
class QaResult:
    answer: str
    score: float
    start: int
    end: int


class QaRunner:
    def __init__(self, model_id: str, max_seq_tokens: int = 512):
        self.model_id = model_id
        self.max_seq_tokens = max_seq_tokens
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModelForQuestionAnswering.from_pretrained(model_id)
        self.model.eval()

    @torch.no_grad()
    def answer(self, question: str, context: str) -> QaResult:
        enc = self.tokenizer(
            question,
            context,
            truncation="only_second",
            max_length=self.max_seq_tokens,
            stride=min(128, self.max_seq_tokens // 4),
            return_overflowing_tokens=True,
            return_offsets_mapping=True,
            padding=True,
            return_tensors="pt",
        )
        model_inputs = {k: v for k, v in enc.items()
                        if k in ("input_ids", "attention_mask", "token_type_ids")}
        out = self.model(**model_inputs)

        best: tuple[float, int, int] | None = None  # (score, char_start, char_end)
        n_windows = enc["input_ids"].shape[0]
        for w in range(n_windows):
            sequence_ids = enc.sequence_ids(w)
            offsets = enc["offset_mapping"][w]
            # restrict both distributions to real context tokens
            valid = torch.tensor(
                [sequence_ids[i] == 1 and offsets[i][1] > offsets[i][0]
                 for i in range(len(sequence_ids))])
            if not bool(valid.any()):
                continue
            masked_start = out.start_logits[w].masked_fill(~valid, float("-inf"))
            masked_end = out.end_logits[w].masked_fill(~valid, float("-inf"))
            p_start = torch.softmax(masked_start, dim=-1)
            p_end = torch.softmax(masked_end, dim=-1)
            # joint span probabilities, constrained to i <= j <= i + max len
            joint = p_start.unsqueeze(1) * p_end.unsqueeze(0)
            span_ok = torch.triu(torch.ones_like(joint, dtype=torch.bool))
            span_ok &= ~torch.triu(torch.ones_like(joint, dtype=torch.bool),
                                   diagonal=MAX_ANSWER_TOKENS + 1)
            joint = joint.masked_fill(~span_ok, 0.0)
            flat = int(joint.argmax())
            i, j = divmod(flat, joint.shape[1])
            score = joint[i, j].item()
            if score <= 0.0:
                continue
            if best is None or score > best[0]:
                best = (score, int(offsets[i][0]), int(offsets[j][1]))

        if best is None:
            return QaResult(answer="", score=0.0, start=0, end=0)
        score, char_start, char_end = best
        return QaResult(
            answer=context[char_start:char_end],
            score=max(0.0, min(1.0, score)),
            start=char_start,
            end=char_end,
        )
