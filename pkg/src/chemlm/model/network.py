"""Decoder-only transformer in plain numpy with hand-written gradients.

Pre-norm blocks, causal self-attention, GELU feed-forward, learned
positional embeddings, optional weight tying between the input embedding
and the output projection. Everything runs in float64; forward keeps a
cache that backward consumes, and the gradients are exact (they are
checked against central finite differences in the tests).
"""

from __future__ import annotations

import math

import numpy as np

from .config import ModelConfig

LN_EPS = 1e-5
INIT_STD = 0.02
NEG_INF = -1e9


def init_params(cfg: ModelConfig, seed: int) -> dict:
    """Normal(0, 0.02^2) weights, zero biases, unit layer-norm scales."""
    rng = np.random.default_rng(seed)

    def w(*shape):
        return rng.normal(0.0, INIT_STD, shape)

    params = {
        "tok_emb": w(cfg.vocab_size, cfg.d_model),
        "pos_emb": w(cfg.max_seq_len, cfg.d_model),
    }
    for i in range(cfg.n_layers):
        p = f"h{i}."
        params[p + "ln1.g"] = np.ones(cfg.d_model)
        params[p + "ln1.b"] = np.zeros(cfg.d_model)
        for name in ("wq", "wk", "wv", "wo"):
            params[p + "attn." + name] = w(cfg.d_model, cfg.d_model)
        for name in ("bq", "bk", "bv", "bo"):
            params[p + "attn." + name] = np.zeros(cfg.d_model)
        params[p + "ln2.g"] = np.ones(cfg.d_model)
        params[p + "ln2.b"] = np.zeros(cfg.d_model)
        params[p + "mlp.w1"] = w(cfg.d_model, cfg.d_ff)
        params[p + "mlp.b1"] = np.zeros(cfg.d_ff)
        params[p + "mlp.w2"] = w(cfg.d_ff, cfg.d_model)
        params[p + "mlp.b2"] = np.zeros(cfg.d_model)
    params["lnf.g"] = np.ones(cfg.d_model)
    params["lnf.b"] = np.zeros(cfg.d_model)
    if not cfg.tie_embeddings:
        params["head.w"] = w(cfg.d_model, cfg.vocab_size)
    return params


def param_count(params: dict) -> int:
    return sum(int(t.size) for t in params.values())


def _layernorm_fwd(x, g, b):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    var = (xc * xc).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    xhat = xc * inv
    return g * xhat + b, (xhat, inv, g)


def _layernorm_bwd(dy, cache):
    xhat, inv, g = cache
    dg = (dy * xhat).sum(axis=(0, 1))
    db = dy.sum(axis=(0, 1))
    dxhat = dy * g
    m1 = dxhat.mean(axis=-1, keepdims=True)
    m2 = (dxhat * xhat).mean(axis=-1, keepdims=True)
    dx = inv * (dxhat - m1 - xhat * m2)
    return dx, dg, db


def _linear_fwd(x, w, b):
    return x @ w + b, (x, w)


def _linear_bwd(dy, cache):
    x, w = cache
    dx = dy @ w.T
    dw = x.reshape(-1, x.shape[-1]).T @ dy.reshape(-1, dy.shape[-1])
    db = dy.sum(axis=(0, 1))
    return dx, dw, db


_GELU_C = math.sqrt(2.0 / math.pi)


def _gelu_fwd(x):
    u = _GELU_C * (x + 0.044715 * x * x * x)
    t = np.tanh(u)
    return 0.5 * x * (1.0 + t), (x, t)


def _gelu_bwd(dy, cache):
    x, t = cache
    du = _GELU_C * (1.0 + 3.0 * 0.044715 * x * x)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du)


def _dropout_fwd(x, rate, train_mode, rng):
    if not train_mode or rate == 0.0:
        return x, None
    keep = rng.random(x.shape) >= rate
    scale = 1.0 / (1.0 - rate)
    return x * keep * scale, (keep, scale)


def _dropout_bwd(dy, cache):
    if cache is None:
        return dy
    keep, scale = cache
    return dy * keep * scale


def _softmax(x):
    z = x - x.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


_MASK_CACHE = {}


def _causal_mask(t: int) -> np.ndarray:
    if t not in _MASK_CACHE:
        _MASK_CACHE[t] = np.triu(np.full((t, t), NEG_INF), k=1)
    return _MASK_CACHE[t]


def _attention_fwd(x, params, prefix, cfg, rate, train_mode, rng):
    b, t, d = x.shape
    h, dh = cfg.n_heads, cfg.d_head
    q, cq = _linear_fwd(x, params[prefix + "wq"], params[prefix + "bq"])
    k, ck = _linear_fwd(x, params[prefix + "wk"], params[prefix + "bk"])
    v, cv = _linear_fwd(x, params[prefix + "wv"], params[prefix + "bv"])

    def split(y):
        return y.reshape(b, t, h, dh).transpose(0, 2, 1, 3)

    qs, ks, vs = split(q), split(k), split(v)
    scores = qs @ ks.transpose(0, 1, 3, 2) / math.sqrt(dh)
    scores = scores + _causal_mask(t)
    att = _softmax(scores)
    att_d, catt_drop = _dropout_fwd(att, rate, train_mode, rng)
    ctx = att_d @ vs
    merged = ctx.transpose(0, 2, 1, 3).reshape(b, t, d)
    out, co = _linear_fwd(merged, params[prefix + "wo"], params[prefix + "bo"])
    out_d, cout_drop = _dropout_fwd(out, rate, train_mode, rng)
    cache = (cq, ck, cv, qs, ks, vs, att, att_d, catt_drop, co, cout_drop, (b, t, d, h, dh))
    return out_d, cache


def _attention_bwd(dout, cache, grads, prefix):
    cq, ck, cv, qs, ks, vs, att, att_d, catt_drop, co, cout_drop, shape = cache
    b, t, d, h, dh = shape
    dout = _dropout_bwd(dout, cout_drop)
    dmerged, dwo, dbo = _linear_bwd(dout, co)
    grads[prefix + "wo"] = dwo
    grads[prefix + "bo"] = dbo
    dctx = dmerged.reshape(b, t, h, dh).transpose(0, 2, 1, 3)
    datt_d = dctx @ vs.transpose(0, 1, 3, 2)
    dvs = att_d.transpose(0, 1, 3, 2) @ dctx
    datt = _dropout_bwd(datt_d, catt_drop)
    dscores = att * (datt - (datt * att).sum(axis=-1, keepdims=True))
    dscores /= math.sqrt(dh)
    dqs = dscores @ ks
    dks = dscores.transpose(0, 1, 3, 2) @ qs

    def merge(y):
        return y.transpose(0, 2, 1, 3).reshape(b, t, d)

    dq, dwq, dbq = _linear_bwd(merge(dqs), cq)
    dk, dwk, dbk = _linear_bwd(merge(dks), ck)
    dv, dwv, dbv = _linear_bwd(merge(dvs), cv)
    grads[prefix + "wq"] = dwq
    grads[prefix + "bq"] = dbq
    grads[prefix + "wk"] = dwk
    grads[prefix + "bk"] = dbk
    grads[prefix + "wv"] = dwv
    grads[prefix + "bv"] = dbv
    return dq + dk + dv


def forward(params, cfg: ModelConfig, ids, train_mode: bool = False, rng=None):
    """Logits [batch, seq, vocab] plus the cache backward needs.

    In train mode dropout draws from `rng`; eval mode is deterministic.
    """
    ids = np.asarray(ids)
    if ids.ndim == 1:
        ids = ids[None, :]
    b, t = ids.shape
    if t > cfg.max_seq_len:
        raise ValueError(f"sequence length {t} exceeds max_seq_len {cfg.max_seq_len}")
    if train_mode and cfg.dropout_rate > 0.0 and rng is None:
        raise ValueError("train-mode forward with dropout needs an rng")
    rate = cfg.dropout_rate

    x = params["tok_emb"][ids] + params["pos_emb"][:t][None, :, :]
    x, demb = _dropout_fwd(x, rate, train_mode, rng)
    blocks = []
    for i in range(cfg.n_layers):
        p = f"h{i}."
        a, cln1 = _layernorm_fwd(x, params[p + "ln1.g"], params[p + "ln1.b"])
        attn_out, cattn = _attention_fwd(a, params, p + "attn.", cfg, rate, train_mode, rng)
        x = x + attn_out
        m, cln2 = _layernorm_fwd(x, params[p + "ln2.g"], params[p + "ln2.b"])
        f1, cf1 = _linear_fwd(m, params[p + "mlp.w1"], params[p + "mlp.b1"])
        g1, cg = _gelu_fwd(f1)
        f2, cf2 = _linear_fwd(g1, params[p + "mlp.w2"], params[p + "mlp.b2"])
        f2, cmlp_drop = _dropout_fwd(f2, rate, train_mode, rng)
        x = x + f2
        blocks.append((cln1, cattn, cln2, cf1, cg, cf2, cmlp_drop))
    hf, clnf = _layernorm_fwd(x, params["lnf.g"], params["lnf.b"])
    if cfg.tie_embeddings:
        logits = hf @ params["tok_emb"].T
    else:
        logits = hf @ params["head.w"]
    cache = (ids, demb, blocks, clnf, hf)
    return logits, cache


def backward(params, cfg: ModelConfig, cache, dlogits) -> dict:
    """Gradients of whatever scalar produced `dlogits`, keyed like params."""
    ids, demb, blocks, clnf, hf = cache
    grads = {name: None for name in params}

    v = dlogits.shape[-1]
    d = hf.shape[-1]
    if cfg.tie_embeddings:
        dhf = dlogits @ params["tok_emb"]
        dtok_head = dlogits.reshape(-1, v).T @ hf.reshape(-1, d)
    else:
        dhf = dlogits @ params["head.w"].T
        grads["head.w"] = hf.reshape(-1, d).T @ dlogits.reshape(-1, v)

    dx, grads["lnf.g"], grads["lnf.b"] = _layernorm_bwd(dhf, clnf)

    for i in range(cfg.n_layers - 1, -1, -1):
        p = f"h{i}."
        cln1, cattn, cln2, cf1, cg, cf2, cmlp_drop = blocks[i]
        df2 = _dropout_bwd(dx, cmlp_drop)
        dg1, grads[p + "mlp.w2"], grads[p + "mlp.b2"] = _linear_bwd(df2, cf2)
        df1 = _gelu_bwd(dg1, cg)
        dm, grads[p + "mlp.w1"], grads[p + "mlp.b1"] = _linear_bwd(df1, cf1)
        dx_ln2, grads[p + "ln2.g"], grads[p + "ln2.b"] = _layernorm_bwd(dm, cln2)
        dx = dx + dx_ln2
        da = _attention_bwd(dx, cattn, grads, p + "attn.")
        dx_ln1, grads[p + "ln1.g"], grads[p + "ln1.b"] = _layernorm_bwd(da, cln1)
        dx = dx + dx_ln1

    dx = _dropout_bwd(dx, demb)
    dtok = np.zeros_like(params["tok_emb"])
    np.add.at(dtok, ids, dx)
    if cfg.tie_embeddings:
        dtok += dtok_head
    grads["tok_emb"] = dtok
    dpos = np.zeros_like(params["pos_emb"])
    dpos[: ids.shape[1]] = dx.sum(axis=0)
    grads["pos_emb"] = dpos
    return grads


def cross_entropy(logits, targets, mask):
    """Mean masked cross-entropy and its gradient wrt the logits.

    targets are the input ids shifted left by one; mask is 1 where the
    target is a real token and 0 at padding.
    """
    targets = np.asarray(targets)
    mask = np.asarray(mask, dtype=float)
    m = mask.sum()
    if m == 0:
        raise ValueError("all target positions are masked")
    z = logits - logits.max(axis=-1, keepdims=True)
    logsumexp = np.log(np.exp(z).sum(axis=-1, keepdims=True))
    logp = z - logsumexp
    b, t = targets.shape
    picked = logp[np.arange(b)[:, None], np.arange(t)[None, :], targets]
    loss = -(picked * mask).sum() / m
    dlogits = np.exp(logp)
    dlogits[np.arange(b)[:, None], np.arange(t)[None, :], targets] -= 1.0
    dlogits *= (mask / m)[:, :, None]
    return loss, dlogits


def loss_and_grads(
    params,
    cfg: ModelConfig,
    inputs,
    targets,
    mask,
    train_mode: bool = True,
    rng=None,
    check_finite: bool = True,
):
    """One training step's loss and exact parameter gradients."""
    logits, cache = forward(params, cfg, inputs, train_mode=train_mode, rng=rng)
    loss, dlogits = cross_entropy(logits, targets, mask)
    grads = backward(params, cfg, cache, dlogits)
    if check_finite:
        for name, g in grads.items():
            if g is not None and not np.isfinite(g).all():
                raise FloatingPointError(f"non-finite gradient in {name}")
    return loss, grads
