"""Structure-aware encoder-decoder over token ids.

The encoder input sums three embeddings per source position: the token
itself, its position, and the mean of its leaf-path kind embeddings.
Data-flow edges enter encoder self-attention as an additive logit bias
scaled by a learned gain; switching the bias off zeroes the adjacency
before it reaches the layers, so the ablated model is bit-identical to
one that never saw the edges.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from .config import NeuralConfig
from .encode import EncodedExample, PAD, BOS, EOS


class BiasedAttention(nn.Module):
    """Multi-head attention accepting an additive bias on the logits."""

    def __init__(self, d: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = d // heads
        self.q = nn.Linear(d, d)
        self.k = nn.Linear(d, d)
        self.v = nn.Linear(d, d)
        self.out = nn.Linear(d, d)

    def forward(self, query, keyval, bias=None, key_pad_mask=None):
        b, qn, d = query.shape
        kn = keyval.shape[1]
        shape = (b, -1, self.heads, self.head_dim)
        q = self.q(query).view(b, qn, self.heads, self.head_dim)
        k = self.k(keyval).view(*shape)
        v = self.v(keyval).view(*shape)
        logits = torch.einsum("bqhd,bkhd->bhqk", q, k) / math.sqrt(
            self.head_dim)
        if bias is not None:
            logits = logits + bias.unsqueeze(1)
        if key_pad_mask is not None:
            logits = logits.masked_fill(
                key_pad_mask[:, None, None, :], float("-inf"))
        attn = torch.softmax(logits, dim=-1)
        mixed = torch.einsum("bhqk,bkhd->bqhd", attn, v)
        return self.out(mixed.reshape(b, qn, d))


class FeedForward(nn.Module):
    def __init__(self, d: int):
        super().__init__()
        self.net = nn.Sequential(nn.Linear(d, 4 * d), nn.GELU(),
                                 nn.Linear(4 * d, d))

    def forward(self, x):
        return self.net(x)


class EncoderLayer(nn.Module):
    def __init__(self, d: int, heads: int):
        super().__init__()
        self.attn = BiasedAttention(d, heads)
        self.ff = FeedForward(d)
        self.norm1 = nn.LayerNorm(d)
        self.norm2 = nn.LayerNorm(d)

    def forward(self, x, bias, pad_mask):
        x = x + self.attn(self.norm1(x), self.norm1(x), bias=bias,
                          key_pad_mask=pad_mask)
        return x + self.ff(self.norm2(x))


class DecoderLayer(nn.Module):
    def __init__(self, d: int, heads: int):
        super().__init__()
        self.self_attn = BiasedAttention(d, heads)
        self.cross_attn = BiasedAttention(d, heads)
        self.ff = FeedForward(d)
        self.norm1 = nn.LayerNorm(d)
        self.norm2 = nn.LayerNorm(d)
        self.norm3 = nn.LayerNorm(d)

    def forward(self, x, memory, causal_bias, self_pad_mask, mem_pad_mask):
        y = self.norm1(x)
        x = x + self.self_attn(y, y, bias=causal_bias,
                               key_pad_mask=self_pad_mask)
        x = x + self.cross_attn(self.norm2(x), memory,
                                key_pad_mask=mem_pad_mask)
        return x + self.ff(self.norm3(x))


class Seq2Seq(nn.Module):
    """Token transformer with leaf-path and data-flow conditioning."""

    def __init__(self, config: NeuralConfig, vocab_size: int,
                 kind_count: int):
        super().__init__()
        config.validate()
        self.config = config
        d = config.d
        # no padding_idx anywhere: masking alone must keep padded
        # positions out of the loss, and tests probe exactly that
        self.tok_emb = nn.Embedding(vocab_size, d)
        self.pos_emb = nn.Embedding(config.max_io_len + 2, d)
        self.kind_emb = nn.Embedding(kind_count, d)
        self.dfg_gain = nn.Parameter(torch.tensor(1.0))
        self.enc_layers = nn.ModuleList(
            EncoderLayer(d, config.heads) for _ in range(config.layers))
        self.dec_layers = nn.ModuleList(
            DecoderLayer(d, config.heads) for _ in range(config.layers))
        self.enc_norm = nn.LayerNorm(d)
        self.dec_norm = nn.LayerNorm(d)
        self.proj = nn.Linear(d, vocab_size)

    def encode(self, src, path_kinds, path_mask, adjacency):
        """src (b, s); path_kinds (b, s, p); adjacency (b, s, s) float."""
        b, s = src.shape
        pos = torch.arange(s, device=src.device)
        x = self.tok_emb(src) + self.pos_emb(pos)[None, :, :]
        kinds = self.kind_emb(path_kinds)
        counts = path_mask.sum(-1, keepdim=True).clamp(min=1)
        x = x + (kinds * path_mask.unsqueeze(-1)).sum(2) / counts
        if self.config.use_dfg_bias:
            bias = self.dfg_gain * adjacency
        else:
            bias = torch.zeros_like(adjacency)
        pad_mask = src.eq(PAD)
        # padded key columns are masked; keep their bias finite
        bias = bias.masked_fill(pad_mask[:, None, :], 0.0)
        for layer in self.enc_layers:
            x = layer(x, bias, pad_mask)
        return self.enc_norm(x), pad_mask

    def decode(self, tgt_in, memory, mem_pad_mask):
        b, t = tgt_in.shape
        pos = torch.arange(t, device=tgt_in.device)
        x = self.tok_emb(tgt_in) + self.pos_emb(pos)[None, :, :]
        causal = torch.full((t, t), float("-inf"), device=tgt_in.device)
        causal = torch.triu(causal, diagonal=1)[None, :, :]
        self_pad = tgt_in.eq(PAD)
        for layer in self.dec_layers:
            x = layer(x, memory, causal, self_pad, mem_pad_mask)
        return self.proj(self.dec_norm(x))

    def forward(self, batch):
        memory, mem_pad = self.encode(batch["src"], batch["path_kinds"],
                                      batch["path_mask"],
                                      batch["adjacency"])
        return self.decode(batch["tgt_in"], memory, mem_pad)


def make_batch(examples, config: NeuralConfig,
               device=None) -> dict:
    """Pads a list of EncodedExample into one tensor batch.

    Targets get BOS/EOS framing; tgt_out is the shifted copy used as the
    cross-entropy label, PAD everywhere outside real tokens.
    """
    device = device or torch.device("cpu")
    b = len(examples)
    s = max(len(e.src_ids) for e in examples)
    t = max(len(e.tgt_ids) for e in examples) + 1
    p = max((len(k) for e in examples for k in e.path_kinds), default=0)
    p = max(p, 1)
    src = torch.full((b, s), PAD, dtype=torch.long)
    tgt_in = torch.full((b, t), PAD, dtype=torch.long)
    tgt_out = torch.full((b, t), PAD, dtype=torch.long)
    path_kinds = torch.zeros((b, s, p), dtype=torch.long)
    path_mask = torch.zeros((b, s, p))
    adjacency = torch.zeros((b, s, s))
    for i, e in enumerate(examples):
        n = len(e.src_ids)
        src[i, :n] = torch.tensor(e.src_ids, dtype=torch.long)
        framed = [BOS] + list(e.tgt_ids) + [EOS]
        tgt_in[i, :len(framed) - 1] = torch.tensor(framed[:-1],
                                                   dtype=torch.long)
        tgt_out[i, :len(framed) - 1] = torch.tensor(framed[1:],
                                                    dtype=torch.long)
        for j, kinds in enumerate(e.path_kinds):
            if kinds:
                path_kinds[i, j, :len(kinds)] = torch.tensor(
                    kinds, dtype=torch.long)
                path_mask[i, j, :len(kinds)] = 1.0
        for a, c in e.dfg_edges:
            adjacency[i, a, c] = 1.0
            adjacency[i, c, a] = 1.0
    return {"src": src.to(device), "tgt_in": tgt_in.to(device),
            "tgt_out": tgt_out.to(device),
            "path_kinds": path_kinds.to(device),
            "path_mask": path_mask.to(device),
            "adjacency": adjacency.to(device)}
