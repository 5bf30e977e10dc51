"""Inference shim: real extractive-QA and embedding models behind the
/v1/answer, /v1/embed and /healthz wire protocol."""

__version__ = "0.1.0"
