import numpy as np
import pytest

import chemlm.sampling as sampling_module
from chemlm.model import Checkpoint, ModelConfig, init_params
from chemlm.sampling import (
    SampleConfig,
    sample,
    sample_from_checkpoint,
    truncation_rate,
)
from chemlm.structures import Atom, Molecule
from chemlm.tokenize import Scheme, build_vocab


@pytest.fixture(scope="module")
def setup():
    corpus = [
        Molecule([Atom("C", 0.0, 0.0, 0.0), Atom("O", 1.2, 0.0, 0.0)]),
        Molecule([Atom("N", 0.0, 0.0, 0.0), Atom("N", 1.1, 0.0, 0.0)]),
    ]
    vocab = build_vocab(corpus, Scheme("atom_coord", 2))
    cfg = ModelConfig(
        n_layers=1,
        d_model=16,
        n_heads=2,
        d_ff=32,
        max_seq_len=24,
        vocab_size=len(vocab.tokens),
        dropout_rate=0.0,
    )
    params = init_params(cfg, seed=7)
    return params, cfg, vocab


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SampleConfig(n_samples=0, max_len=10)
        with pytest.raises(ValueError):
            SampleConfig(n_samples=1, max_len=1)
        with pytest.raises(ValueError):
            SampleConfig(n_samples=1, max_len=10, temperature=-0.5)


class TestSample:
    def test_shape_of_output(self, setup):
        params, cfg, vocab = setup
        seqs = sample(params, cfg, vocab, SampleConfig(n_samples=5, max_len=12, seed=1))
        assert len(seqs) == 5
        for s in seqs:
            assert s.ids[0] == vocab.bos_id
            assert len(s.ids) <= 12

    def test_terminates_at_eos_or_cap(self, setup):
        params, cfg, vocab = setup
        seqs = sample(params, cfg, vocab, SampleConfig(n_samples=8, max_len=10, seed=2))
        for s in seqs:
            content = s.ids[1:]
            if s.truncated:
                assert vocab.eos_id not in content
                assert len(s.ids) == 10
            else:
                assert content[-1] == vocab.eos_id
                assert content.count(vocab.eos_id) == 1

    def test_fixed_seed_reproducible(self, setup):
        params, cfg, vocab = setup
        c = SampleConfig(n_samples=6, max_len=12, seed=3)
        a = sample(params, cfg, vocab, c)
        b = sample(params, cfg, vocab, c)
        assert [s.ids for s in a] == [s.ids for s in b]
        assert [s.truncated for s in a] == [s.truncated for s in b]

    def test_seed_matters(self, setup):
        params, cfg, vocab = setup
        a = sample(params, cfg, vocab, SampleConfig(n_samples=6, max_len=12, seed=3))
        b = sample(params, cfg, vocab, SampleConfig(n_samples=6, max_len=12, seed=4))
        assert [s.ids for s in a] != [s.ids for s in b]

    def test_greedy_is_deterministic_and_identical_across_sequences(self, setup):
        params, cfg, vocab = setup
        seqs = sample(
            params, cfg, vocab,
            SampleConfig(n_samples=4, max_len=12, temperature=0.0, seed=9),
        )
        assert len({s.ids for s in seqs}) == 1

    def test_chunking_does_not_change_results(self, setup, monkeypatch):
        params, cfg, vocab = setup
        c = SampleConfig(n_samples=7, max_len=12, seed=5)
        whole = sample(params, cfg, vocab, c)
        monkeypatch.setattr(sampling_module, "CHUNK", 3)
        chunked = sample(params, cfg, vocab, c)
        assert [s.ids for s in whole] == [s.ids for s in chunked]

    def test_low_temperature_limit_is_greedy(self, setup):
        params, cfg, vocab = setup
        greedy = sample(params, cfg, vocab, SampleConfig(n_samples=1, max_len=12, temperature=0.0, seed=6))
        cold = sample(params, cfg, vocab, SampleConfig(n_samples=5, max_len=12, temperature=1e-4, seed=6))
        for s in cold:
            assert s.ids == greedy[0].ids

    def test_max_len_beyond_context_rejected(self, setup):
        params, cfg, vocab = setup
        with pytest.raises(ValueError, match="max_seq_len"):
            sample(params, cfg, vocab, SampleConfig(n_samples=1, max_len=cfg.max_seq_len + 1))

    def test_vocab_size_mismatch_rejected(self, setup):
        params, cfg, vocab = setup
        wrong = ModelConfig(**{**cfg.to_dict(), "vocab_size": len(vocab.tokens) + 3})
        with pytest.raises(ValueError, match="vocab"):
            sample(params, wrong, vocab, SampleConfig(n_samples=1, max_len=8))


class TestFromCheckpoint:
    def test_hash_checked(self, setup):
        params, cfg, vocab = setup
        ck = Checkpoint(params, cfg, vocab.content_hash(), {}, 0)
        seqs = sample_from_checkpoint(ck, vocab, SampleConfig(n_samples=2, max_len=10, seed=1))
        assert len(seqs) == 2

        stale = Checkpoint(params, cfg, "0" * 64, {}, 0)
        with pytest.raises(ValueError, match="hash"):
            sample_from_checkpoint(stale, vocab, SampleConfig(n_samples=2, max_len=10))


class TestTruncationRate:
    def test_rate(self, setup):
        params, cfg, vocab = setup
        seqs = sample(params, cfg, vocab, SampleConfig(n_samples=10, max_len=10, seed=0))
        rate = truncation_rate(seqs)
        assert rate == sum(1 for s in seqs if s.truncated) / 10
        assert truncation_rate([]) == 0.0
