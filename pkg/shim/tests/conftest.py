import socket
import threading
import time

import pytest
import torch
import uvicorn
from transformers import (BertConfig, BertForQuestionAnswering, BertModel,
                          BertTokenizerFast)

from qa_shim.app import create_app
from qa_shim.config import ShimConfig

VOCAB = (["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
         + [chr(c) for c in range(ord("a"), ord("z") + 1)]
         + ["##" + chr(c) for c in range(ord("a"), ord("z") + 1)]
         + ["the", "a", "is", "what", "layer", "hidden", "input", "output",
            "between", "layers", "and", "weight", "losing", "sugar", "effect",
            "training", "index", "database", "loss"])


def _write_tiny_models(root) -> tuple[str, str]:
    """Save a small random-weight QA model and encoder; config-compatible
    stand-ins for real checkpoints when the hub is unreachable."""
    qa_dir = root / "tiny-qa"
    embed_dir = root / "tiny-embed"
    qa_dir.mkdir()
    embed_dir.mkdir()
    (qa_dir / "vocab.txt").write_text("\n".join(VOCAB))
    (embed_dir / "vocab.txt").write_text("\n".join(VOCAB))
    tok = BertTokenizerFast(vocab_file=str(qa_dir / "vocab.txt"),
                            do_lower_case=True)
    cfg = BertConfig(vocab_size=len(VOCAB) + 8, hidden_size=32,
                     num_hidden_layers=2, num_attention_heads=2,
                     intermediate_size=64, max_position_embeddings=512)
    torch.manual_seed(0)
    BertForQuestionAnswering(cfg).save_pretrained(qa_dir)
    tok.save_pretrained(qa_dir)
    torch.manual_seed(1)
    BertModel(cfg).save_pretrained(embed_dir)
    tok.save_pretrained(embed_dir)
    return str(qa_dir), str(embed_dir)


@pytest.fixture(scope="session")
def shim_config(tmp_path_factory):
    qa_dir, embed_dir = _write_tiny_models(tmp_path_factory.mktemp("models"))
    return ShimConfig(qa_model_id=qa_dir, embed_model_id=embed_dir,
                      port=8901, max_seq_tokens=128)


@pytest.fixture(scope="session")
def shim_url(shim_config):
    """The shim served over real HTTP on a free port."""
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    app = create_app(shim_config)
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port,
                                           log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 30
    import requests
    url = f"http://127.0.0.1:{port}"
    while time.monotonic() < deadline:
        try:
            if requests.get(url + "/healthz", timeout=1).status_code == 200:
                break
        except requests.RequestException:
            time.sleep(0.1)
    else:
        raise RuntimeError("shim server did not come up")
    yield url
    server.should_exit = True
    thread.join(timeout=10)
