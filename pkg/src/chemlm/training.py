"""Training loop: Adam on next-token cross-entropy with a linear
learning-rate decay, length-bucketed batches, optional per-epoch
rotation augmentation, and periodic checkpoints.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .augment import augment_structure
from .errors import TrainingDiverged
from .model import ModelConfig, init_params, loss_and_grads, save_checkpoint
from .tokenize import Scheme, Vocabulary, encode

LR_END_DEFAULT = 9e-6


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int
    lr_start: float
    total_steps: int
    seed: int
    lr_end: float = LR_END_DEFAULT
    augment: bool = False
    augment_attempts: int = 8
    crystal_shift: bool = False
    grad_clip: float = 1.0
    checkpoint_interval: int = 0
    scheme: Optional[Scheme] = None

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not (self.lr_start >= self.lr_end > 0):
            raise ValueError("need lr_start >= lr_end > 0")
        if self.total_steps < 1:
            raise ValueError("total_steps must be >= 1")
        if self.augment_attempts < 1:
            raise ValueError("augment_attempts must be >= 1")
        if self.grad_clip < 0:
            raise ValueError("grad_clip must be >= 0")

    @property
    def precision(self) -> Optional[int]:
        return self.scheme.precision if self.scheme is not None else None


def lr_schedule(step: int, cfg: TrainConfig) -> float:
    """Linear from lr_start at step 0 to lr_end at total_steps, then flat."""
    if step >= cfg.total_steps:
        return cfg.lr_end
    frac = step / cfg.total_steps
    return cfg.lr_start + (cfg.lr_end - cfg.lr_start) * frac


class Adam:
    def __init__(self, params: dict, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict, grads: dict, lr: float) -> None:
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for k, g in grads.items():
            self.m[k] = self.beta1 * self.m[k] + (1.0 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1.0 - self.beta2) * g * g
            params[k] -= lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + self.eps)


def clip_global_norm(grads: dict, max_norm: float) -> float:
    """Scales all gradients in place so the global 2-norm is <= max_norm."""
    total = math.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        for g in grads.values():
            g *= scale
    return total


@dataclass
class TrainResult:
    params: dict
    model_config: ModelConfig
    losses: list = field(default_factory=list)
    lrs: list = field(default_factory=list)
    checkpoint_path: Optional[str] = None
    step: int = 0


def pad_batch(sequences, pad_id: int):
    """Input/target/mask arrays for a batch of encoded id lists.

    Targets are inputs shifted left by one; mask is 0 wherever the
    target is padding, so padded tails never contribute to the loss.
    """
    width = max(len(s) for s in sequences)
    ids = np.full((len(sequences), width), pad_id, dtype=np.int64)
    for i, s in enumerate(sequences):
        ids[i, : len(s)] = s
    inputs = ids[:, :-1]
    targets = ids[:, 1:]
    mask = (targets != pad_id).astype(float)
    return inputs, targets, mask


def _epoch_batches(n: int, lengths, batch_size: int, rng: np.random.Generator):
    """Shuffle, stable-sort by length, chunk, then shuffle chunk order."""
    order = rng.permutation(n)
    order = order[np.argsort([lengths[i] for i in order], kind="stable")]
    batches = [order[i : i + batch_size] for i in range(0, n, batch_size)]
    rng.shuffle(batches)
    return batches


def train(
    corpus,
    vocab: Vocabulary,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    out_dir: Optional[str] = None,
    log: Optional[Callable[[int, float, float], None]] = None,
) -> TrainResult:
    """Runs the full optimization and returns final params plus the
    per-step loss trajectory. Writes checkpoints under `out_dir` every
    `checkpoint_interval` steps and always at the end; a non-finite
    loss or gradient aborts with the last good checkpoint.
    """
    if not corpus:
        raise ValueError("empty training corpus")
    if train_cfg.scheme is not None and train_cfg.scheme != vocab.scheme:
        raise ValueError("train_cfg.scheme disagrees with the vocabulary's scheme")
    if model_cfg.vocab_size != len(vocab.tokens):
        raise ValueError(
            f"model vocab_size {model_cfg.vocab_size} != vocabulary size {len(vocab.tokens)}"
        )

    root = np.random.SeedSequence(train_cfg.seed)
    init_seed, shuffle_seed, augment_seed, dropout_seed = root.spawn(4)
    params = init_params(model_cfg, seed=init_seed.generate_state(1)[0])
    shuffle_rng = np.random.default_rng(shuffle_seed)
    augment_rng = np.random.default_rng(augment_seed)
    dropout_rng = np.random.default_rng(dropout_seed)

    base_sequences = [encode(s, vocab).ids for s in corpus]
    lengths = [len(s) for s in base_sequences]
    longest = max(lengths)
    if longest - 1 > model_cfg.max_seq_len:
        raise ValueError(
            f"longest encoded sequence ({longest} tokens) exceeds model context "
            f"({model_cfg.max_seq_len} + 1)"
        )

    optimizer = Adam(params)
    result = TrainResult(params=params, model_config=model_cfg)
    vocab_hash = vocab.content_hash()

    def rng_snapshot():
        return {
            "shuffle": shuffle_rng.bit_generator.state,
            "augment": augment_rng.bit_generator.state,
            "dropout": dropout_rng.bit_generator.state,
        }

    def write_checkpoint(step):
        if out_dir is None:
            return None
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, f"checkpoint_{step:07d}.bin")
        save_checkpoint(path, params, model_cfg, vocab_hash, rng_snapshot(), step)
        return path

    step = 0
    while step < train_cfg.total_steps:
        batches = _epoch_batches(len(corpus), lengths, train_cfg.batch_size, shuffle_rng)
        for batch_idx in batches:
            if step >= train_cfg.total_steps:
                break
            if train_cfg.augment:
                seqs = []
                for i in batch_idx:
                    aug = augment_structure(
                        corpus[i],
                        vocab,
                        augment_rng,
                        attempts=train_cfg.augment_attempts,
                        crystal_shift=train_cfg.crystal_shift,
                    )
                    seqs.append(encode(aug, vocab).ids)
            else:
                seqs = [base_sequences[i] for i in batch_idx]
            inputs, targets, mask = pad_batch(seqs, vocab.pad_id)
            lr = lr_schedule(step, train_cfg)
            try:
                loss, grads = loss_and_grads(
                    params, model_cfg, inputs, targets, mask,
                    train_mode=True, rng=dropout_rng,
                )
            except FloatingPointError as exc:
                raise TrainingDiverged(step, result.checkpoint_path) from exc
            if not math.isfinite(loss):
                raise TrainingDiverged(step, result.checkpoint_path)
            clip_global_norm(grads, train_cfg.grad_clip)
            optimizer.step(params, grads, lr)
            result.losses.append(float(loss))
            result.lrs.append(lr)
            step += 1
            if log is not None:
                log(step, float(loss), lr)
            if train_cfg.checkpoint_interval > 0 and step % train_cfg.checkpoint_interval == 0:
                path = write_checkpoint(step)
                if path is not None:
                    result.checkpoint_path = path

    result.step = step
    path = write_checkpoint(step)
    if path is not None:
        result.checkpoint_path = path
    return result
