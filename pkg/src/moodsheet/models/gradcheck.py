"""Analytic-vs-numeric gradient comparison on tiny double-precision blocks."""

from __future__ import annotations

import torch
from torch import Tensor, nn

__all__ = [
    "max_relative_error",
    "central_difference_gradients",
    "check_lstm_cell_gradients",
    "check_attention_gradients",
    "unused_embedding_grad_norm",
]


def max_relative_error(analytic: list[Tensor], numeric: list[Tensor]) -> float:
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = torch.maximum(
            a.abs() + n.abs(), torch.tensor(1.0, dtype=a.dtype)
        )
        worst = max(worst, float(((a - n).abs() / denom).max()))
    return worst


def central_difference_gradients(loss_fn, params: list[Tensor], eps: float = 1e-5) -> list[Tensor]:
    """d loss / d p by (f(p+e) - f(p-e)) / 2e, one scalar at a time."""
    grads = []
    with torch.no_grad():
        for param in params:
            grad = torch.zeros_like(param)
            flat = param.view(-1)
            gflat = grad.view(-1)
            for i in range(flat.numel()):
                original = flat[i].item()
                flat[i] = original + eps
                plus = loss_fn().item()
                flat[i] = original - eps
                minus = loss_fn().item()
                flat[i] = original
                gflat[i] = (plus - minus) / (2 * eps)
            grads.append(grad)
    return grads


def _compare(loss_fn, params: list[Tensor]) -> float:
    loss = loss_fn()
    analytic = torch.autograd.grad(loss, params)
    numeric = central_difference_gradients(loss_fn, params)
    return max_relative_error(list(analytic), numeric)


def check_lstm_cell_gradients(input_size: int = 6, hidden_size: int = 8, seed: int = 0) -> float:
    """Max relative error across all LSTM cell parameters and inputs."""
    torch.manual_seed(seed)
    cell = nn.LSTMCell(input_size, hidden_size).double()
    x = torch.randn(3, input_size, dtype=torch.float64, requires_grad=True)
    h0 = torch.randn(3, hidden_size, dtype=torch.float64, requires_grad=True)
    c0 = torch.randn(3, hidden_size, dtype=torch.float64, requires_grad=True)
    params = list(cell.parameters()) + [x, h0, c0]

    def loss_fn() -> Tensor:
        h1, c1 = cell(x, (h0, c0))
        return h1.pow(2).sum() + c1.pow(2).sum()

    return _compare(loss_fn, params)


def check_attention_gradients(width: int = 8, heads: int = 2, seed: int = 0) -> float:
    """Max relative error across multi-head attention parameters and input."""
    torch.manual_seed(seed)
    attention = nn.MultiheadAttention(width, heads, batch_first=True).double()
    x = torch.randn(1, 5, width, dtype=torch.float64, requires_grad=True)
    params = list(attention.parameters()) + [x]

    def loss_fn() -> Tensor:
        out, _ = attention(x, x, x, need_weights=False)
        return out.pow(2).sum()

    return _compare(loss_fn, params)


def unused_embedding_grad_norm(rows: int = 10, width: int = 4, seed: int = 0) -> float:
    """Gradient mass landing on an embedding row absent from the batch."""
    torch.manual_seed(seed)
    table = nn.Embedding(rows, width).double()
    ids = torch.tensor([[1, 2, 3]])  # row `rows - 1` never referenced
    loss = table(ids).pow(2).sum()
    loss.backward()
    return float(table.weight.grad[rows - 1].abs().sum())
