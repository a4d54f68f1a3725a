"""Command-line pipeline: synth, prepare, train, sample, evaluate, report.

Every command creates its output directory, writes its artifacts, and
finishes with a manifest (deterministic content) plus a timing sidecar
(wall clock, excluded from determinism). Exit codes: 0 success, 1 user
error, 2 internal error. A flat key=value config file can supply any
flag's value; command-line flags win over the file, the file wins over
defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from .errors import ChemlmError, ParseError
from .formats import (
    EXTENSIONS,
    FORMAT_FOR_KIND,
    KIND_FOR_FORMAT,
    FileDocument,
    parse_document,
    prune_pocket,
    write_structure,
)
from .geometry import centroid, kabsch_rmsd, pairwise_distances
from .manifest import (
    file_sha256,
    hash_outputs,
    tree_hash,
    write_manifest,
    write_timing,
)
from .metrics import MetricsReport, evaluate_sequences, evaluate_structures, property_functions
from .model import ModelConfig, load_checkpoint
from .rounding import round_coords
from .sampling import SampleConfig, sample_from_checkpoint, truncation_rate
from .structures import Pocket, structure_kind
from .synth import synth_corpus
from .tokenize import ATOM_COORD, CHAR, Scheme, TokenSequence, Vocabulary, build_vocab, encode
from .training import TrainConfig, train

OUTPUT_ROOT_ENV = "CHEMLM_OUTPUT_ROOT"

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2


class CliError(Exception):
    """A user-facing problem: bad flags, bad files, impossible request."""


class _Parser(argparse.ArgumentParser):
    # user errors exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USER, f"{self.prog}: error: {message}\n")


def _onoff(value: str) -> bool:
    if value == "on":
        return True
    if value == "off":
        return False
    raise argparse.ArgumentTypeError(f"expected on|off, got {value!r}")


def load_config_file(path) -> list:
    """key=value lines -> ["--key", "value", ...] argparse prefix."""
    args = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{line_no}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                args.extend([f"--{key.strip()}", value.strip()])
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc
    return args


def _scheme_from(args) -> Scheme:
    kind = ATOM_COORD if args.scheme == "atom_coord" else CHAR
    return Scheme(kind=kind, precision=args.precision)


def _read_structure_files(directory):
    """Sorted (name, structure-or-None, error) triples for one directory.

    All files must share one extension; unknown extensions are rejected.
    """
    if not os.path.isdir(directory):
        raise CliError(f"not a directory: {directory}")
    by_ext = {}
    for name in sorted(os.listdir(directory)):
        full = os.path.join(directory, name)
        if not os.path.isfile(full):
            continue
        ext = os.path.splitext(name)[1].lower()
        by_ext.setdefault(ext, []).append(name)
    known = {ext: names for ext, names in by_ext.items() if ext in EXTENSIONS.values()}
    if len(known) > 1:
        raise CliError(f"mixed structure formats in {directory}: {sorted(known)}")
    if not known:
        raise CliError(f"no structure files (.xyz/.cif/.pdb) in {directory}")
    ext, names = next(iter(known.items()))
    fmt = {v: k for k, v in EXTENSIONS.items()}[ext]
    out = []
    for name in names:
        with open(os.path.join(directory, name), encoding="utf-8") as fh:
            text = fh.read()
        try:
            out.append((name, parse_document(FileDocument(fmt, text, name)), ""))
        except (ChemlmError, ValueError) as exc:
            out.append((name, None, str(exc)))
    return out


def _load_bundle(bundle_dir):
    """(structures, vocab) from a prepare output directory."""
    vocab_path = os.path.join(bundle_dir, "vocab.txt")
    if not os.path.isfile(vocab_path):
        raise CliError(f"no vocab.txt in bundle {bundle_dir}")
    vocab = Vocabulary.load(vocab_path)
    structures_dir = os.path.join(bundle_dir, "structures")
    triples = _read_structure_files(structures_dir)
    bad = [(n, e) for n, s, e in triples if s is None]
    if bad:
        raise CliError(f"unparseable bundle file {bad[0][0]}: {bad[0][1]}")
    return [s for _, s, _ in triples], vocab


# ---------------------------------------------------------------- synth

def build_synth_parser():
    p = _Parser(prog="chemlm synth")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--kind", required=True, choices=["molecule", "perovskite", "pocket"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=3, choices=[1, 2, 3])
    p.add_argument("--residues", type=int, default=0,
                   help="pocket kind only: fixed residue count (0 = random 6-10)")
    p.add_argument("--out")
    return p


def cmd_synth(args, out_dir, phases):
    if args.n < 1:
        raise CliError("--n must be >= 1")
    t0 = time.time()
    kwargs = {}
    if args.kind == "pocket" and args.residues > 0:
        kwargs["n_residues"] = args.residues
    corpus = synth_corpus(args.kind, args.n, args.seed, **kwargs)
    phases["generate"] = time.time() - t0

    t0 = time.time()
    structures_dir = os.path.join(out_dir, "structures")
    os.makedirs(structures_dir, exist_ok=True)
    ext = EXTENSIONS[FORMAT_FOR_KIND[structure_kind(corpus[0])]]
    for i, s in enumerate(corpus):
        doc = write_structure(s, args.precision)
        with open(os.path.join(structures_dir, f"{i:06d}{ext}"), "w", encoding="utf-8") as fh:
            fh.write(doc.text)
    phases["write"] = time.time() - t0
    return {
        "kind": args.kind,
        "n": args.n,
        "seed": args.seed,
        "precision": args.precision,
    }


# -------------------------------------------------------------- prepare

def build_prepare_parser():
    p = _Parser(prog="chemlm prepare")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--input", required=True, help="directory of structure files")
    p.add_argument("--scheme", required=True, choices=["char", "atom_coord"])
    p.add_argument("--precision", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--dense-coords", type=_onoff, default=False,
                   help="atom_coord: cover the whole min..max coordinate grid")
    p.add_argument("--prune", type=_onoff, default=True,
                   help="pockets: prune to the target atom range")
    p.add_argument("--prune-lo", type=int, default=200)
    p.add_argument("--prune-hi", type=int, default=250)
    p.add_argument("--out")
    return p


def cmd_prepare(args, out_dir, phases):
    t0 = time.time()
    triples = _read_structure_files(args.input)
    failures = [(n, e) for n, s, e in triples if s is None]
    parsed = [(n, s) for n, s, _ in triples if s is not None]
    if not parsed:
        raise CliError(f"no parseable structure files in {args.input}")
    phases["parse"] = time.time() - t0

    t0 = time.time()
    prune_stats = []
    prepared = []
    for name, s in parsed:
        if isinstance(s, Pocket) and args.prune:
            center = centroid([(a.x, a.y, a.z) for a in s.atoms])
            result = prune_pocket(s, tuple(center), (args.prune_lo, args.prune_hi))
            prune_stats.append(
                {
                    "file": name,
                    "atoms": len(result.pocket.atoms),
                    "removed_residues": result.removed_residues,
                    "below_min": result.below_min,
                }
            )
            s = result.pocket
        prepared.append((name, round_coords(s, args.precision)))
    phases["prune"] = time.time() - t0

    t0 = time.time()
    scheme = _scheme_from(args)
    structures = [s for _, s in prepared]
    vocab = build_vocab(structures, scheme, dense_coordinate_range=args.dense_coords)
    vocab.save(os.path.join(out_dir, "vocab.txt"))

    structures_dir = os.path.join(out_dir, "structures")
    os.makedirs(structures_dir, exist_ok=True)
    for name, s in prepared:
        doc = write_structure(s, args.precision)
        with open(os.path.join(structures_dir, name), "w", encoding="utf-8") as fh:
            fh.write(doc.text)

    with open(os.path.join(out_dir, "corpus.txt"), "w", encoding="utf-8") as fh:
        for _, s in prepared:
            fh.write(" ".join(str(i) for i in encode(s, vocab).ids))
            fh.write("\n")
    phases["encode"] = time.time() - t0

    atom_counts = {}
    element_counts = {}
    for _, s in prepared:
        particles = s.sites if hasattr(s, "sites") else s.atoms
        atom_counts[len(particles)] = atom_counts.get(len(particles), 0) + 1
        for p in particles:
            sym = p.symbol if hasattr(p, "symbol") else p.element
            element_counts[sym] = element_counts.get(sym, 0) + 1
    stats = {
        "n_structures": len(prepared),
        "n_failures": len(failures),
        "structure_kind": structure_kind(structures[0]),
        "scheme": scheme.kind,
        "precision": scheme.precision,
        "vocab_size": len(vocab.tokens),
        "atom_count_histogram": {str(k): v for k, v in sorted(atom_counts.items())},
        "element_frequencies": dict(sorted(element_counts.items())),
    }
    if prune_stats:
        in_range = sum(1 for r in prune_stats if args.prune_lo <= r["atoms"] <= args.prune_hi)
        stats["prune"] = {
            "target": [args.prune_lo, args.prune_hi],
            "in_range": in_range,
            "per_file": prune_stats,
        }
    with open(os.path.join(out_dir, "stats.json"), "w", encoding="utf-8") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "failures.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["file", "error"])
        writer.writerows(failures)
    return {
        "scheme": scheme.kind,
        "precision": scheme.precision,
        "n_structures": len(prepared),
        "n_failures": len(failures),
        "vocab_hash": vocab.content_hash(),
        "input_hash": tree_hash(args.input),
    }


# ---------------------------------------------------------------- train

def build_train_parser():
    p = _Parser(prog="chemlm train")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--corpus", required=True, help="prepare output directory")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr-start", type=float, default=1e-3)
    p.add_argument("--lr-end", type=float, default=9e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--augment", type=_onoff, default=False)
    p.add_argument("--augment-attempts", type=int, default=8)
    p.add_argument("--crystal-shift", type=_onoff, default=False)
    p.add_argument("--grad-clip", type=float, default=1.0)
    p.add_argument("--checkpoint-interval", type=int, default=0)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--d-model", type=int, default=64)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--d-ff", type=int, default=0, help="0 = 4 * d_model")
    p.add_argument("--max-seq-len", type=int, default=0, help="0 = longest corpus sequence")
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--tie-embeddings", type=_onoff, default=True)
    p.add_argument("--out")
    return p


def cmd_train(args, out_dir, phases):
    t0 = time.time()
    corpus, vocab = _load_bundle(args.corpus)
    lengths = [len(encode(s, vocab).ids) for s in corpus]
    phases["load"] = time.time() - t0

    max_seq_len = args.max_seq_len or max(lengths)
    model_cfg = ModelConfig(
        n_layers=args.layers,
        d_model=args.d_model,
        n_heads=args.heads,
        d_ff=args.d_ff or 4 * args.d_model,
        max_seq_len=max_seq_len,
        vocab_size=len(vocab.tokens),
        dropout_rate=args.dropout,
        tie_embeddings=args.tie_embeddings,
    )
    train_cfg = TrainConfig(
        batch_size=args.batch_size,
        lr_start=args.lr_start,
        lr_end=args.lr_end,
        total_steps=args.steps,
        seed=args.seed,
        augment=args.augment,
        augment_attempts=args.augment_attempts,
        crystal_shift=args.crystal_shift,
        grad_clip=args.grad_clip,
        checkpoint_interval=args.checkpoint_interval,
        scheme=vocab.scheme,
    )

    t0 = time.time()
    result = train(corpus, vocab, model_cfg, train_cfg, out_dir=out_dir)
    phases["train"] = time.time() - t0

    with open(os.path.join(out_dir, "losses.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "loss", "lr"])
        for i, (loss, lr) in enumerate(zip(result.losses, result.lrs), start=1):
            writer.writerow([i, repr(loss), repr(lr)])
    return {
        "model_config": model_cfg.to_dict(),
        "train_config": {
            "batch_size": train_cfg.batch_size,
            "lr_start": train_cfg.lr_start,
            "lr_end": train_cfg.lr_end,
            "total_steps": train_cfg.total_steps,
            "seed": train_cfg.seed,
            "augment": train_cfg.augment,
            "augment_attempts": train_cfg.augment_attempts,
            "crystal_shift": train_cfg.crystal_shift,
            "grad_clip": train_cfg.grad_clip,
            "checkpoint_interval": train_cfg.checkpoint_interval,
            "scheme": vocab.scheme.kind,
            "precision": vocab.scheme.precision,
        },
        "vocab_hash": vocab.content_hash(),
        "corpus_hash": tree_hash(args.corpus),
        "final_loss": result.losses[-1],
        "checkpoint": os.path.basename(result.checkpoint_path),
    }


# --------------------------------------------------------------- sample

def build_sample_parser():
    p = _Parser(prog="chemlm sample")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--vocab", required=True, help="vocab.txt from the training bundle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--max-len", type=int, default=0, help="0 = model context length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return p


def cmd_sample(args, out_dir, phases):
    t0 = time.time()
    ck = load_checkpoint(args.checkpoint)
    vocab = Vocabulary.load(args.vocab)
    phases["load"] = time.time() - t0

    cfg = SampleConfig(
        n_samples=args.n,
        max_len=args.max_len or ck.config.max_seq_len,
        temperature=args.temperature,
        seed=args.seed,
    )
    t0 = time.time()
    sequences = sample_from_checkpoint(ck, vocab, cfg)
    sample_seconds = time.time() - t0
    phases["sample"] = sample_seconds

    with open(os.path.join(out_dir, "samples.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "truncated", "ids"])
        for i, seq in enumerate(sequences):
            writer.writerow([i, int(seq.truncated), " ".join(str(t) for t in seq.ids)])

    total_tokens = sum(len(s.ids) for s in sequences)
    phases["tokens_per_second"] = total_tokens / sample_seconds if sample_seconds > 0 else 0.0
    return {
        "n_samples": cfg.n_samples,
        "temperature": cfg.temperature,
        "max_len": cfg.max_len,
        "seed": cfg.seed,
        "truncation_rate": truncation_rate(sequences),
        "vocab_hash": vocab.content_hash(),
        "checkpoint_hash": file_sha256(args.checkpoint),
        "checkpoint_step": ck.step,
    }


def read_samples_csv(path):
    sequences = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "truncated", "ids"]:
            raise CliError(f"{path} is not a samples.csv (bad header {header!r})")
        for row in reader:
            ids = tuple(int(t) for t in row[2].split())
            sequences.append(TokenSequence(ids=ids, truncated=bool(int(row[1]))))
    if not sequences:
        raise CliError(f"no sequences in {path}")
    return sequences


# ------------------------------------------------------------- evaluate

def build_evaluate_parser():
    p = _Parser(prog="chemlm evaluate")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--samples", required=True,
                   help="samples.csv from `sample`, or a directory of structure files")
    p.add_argument("--train", required=True, help="prepare output directory (training corpus)")
    p.add_argument("--eval-seed", type=int, default=0)
    p.add_argument("--overlap-threshold", type=float, default=1.1)
    p.add_argument("--out")
    return p


def cmd_evaluate(args, out_dir, phases):
    t0 = time.time()
    train_structures, vocab = _load_bundle(args.train)
    phases["load"] = time.time() - t0

    t0 = time.time()
    if os.path.isdir(args.samples):
        triples = _read_structure_files(args.samples)
        structures = [s for _, s, _ in triples]
        failures = {i: f"unparseable file: {e}" for i, (_, s, e) in enumerate(triples) if s is None}
        result = evaluate_structures(
            structures,
            train_structures,
            decode_failures=failures,
            overlap_threshold=args.overlap_threshold,
            eval_seed=args.eval_seed,
        )
    else:
        sequences = read_samples_csv(args.samples)
        result = evaluate_sequences(
            sequences,
            vocab,
            train_structures,
            overlap_threshold=args.overlap_threshold,
            eval_seed=args.eval_seed,
        )
    phases["evaluate"] = time.time() - t0

    t0 = time.time()
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(result.report.to_json())
    with open(os.path.join(out_dir, "failures.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "bucket", "reason"])
        for row in result.rows:
            writer.writerow([row.index, row.bucket, row.reason])
    for name in sorted(result.train_values):
        path = os.path.join(out_dir, f"values_{name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["source", "value"])
            for v in result.train_values[name]:
                writer.writerow(["train", repr(v)])
            for v in result.sample_values[name]:
                writer.writerow(["sample", repr(v)])

    # decoded structures, for the report command's distribution CSVs
    structures_dir = os.path.join(out_dir, "structures")
    os.makedirs(structures_dir, exist_ok=True)
    kind = result.report.structure_kind
    ext = EXTENSIONS[FORMAT_FOR_KIND[kind]]
    precision = vocab.scheme.precision
    for i, s in enumerate(result.structures):
        if s is None or structure_kind(s) != kind:
            continue
        doc = write_structure(s, precision)
        with open(os.path.join(structures_dir, f"{i:06d}{ext}"), "w", encoding="utf-8") as fh:
            fh.write(doc.text)
    phases["write"] = time.time() - t0

    r = result.report
    return {
        "eval_seed": args.eval_seed,
        "overlap_threshold": args.overlap_threshold,
        "structure_kind": r.structure_kind,
        "n_samples": r.n_samples,
        "n_decode_failed": r.n_decode_failed,
        "n_valid": r.n_valid,
        "valid_pct": r.valid_pct,
        "train_hash": tree_hash(args.train),
    }


# --------------------------------------------------------------- report

def _fmt_cell(value) -> str:
    if value is None:
        return "—"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def render_table(labels, reports) -> str:
    rows = [("", list(labels))]
    keys = [
        ("kind", lambda r: r.structure_kind),
        ("samples", lambda r: r.n_samples),
        ("decode failed", lambda r: r.n_decode_failed),
        ("valid %", lambda r: r.valid_pct),
        ("unique %", lambda r: r.unique_pct),
        ("novel %", lambda r: r.novel_pct),
    ]
    extra_names = sorted({k for r in reports for k in r.extra_validity_pct})
    for name in extra_names:
        keys.append((f"{name} valid %", lambda r, n=name: r.extra_validity_pct.get(n)))
    emd_names = sorted({k for r in reports for k in r.emd} | {k for r in reports for k in r.emd_oracle})
    for name in emd_names:
        keys.append((f"EMD {name}", lambda r, n=name: r.emd.get(n)))
        keys.append((f"EMD {name} (train oracle)", lambda r, n=name: r.emd_oracle.get(n)))
    for label, attr in (("QED EMD", "qed_emd"), ("SA EMD", "sa_emd"),
                        ("COV-R", "cov_r"), ("COV-P", "cov_p")):
        keys.append((label, lambda r, a=attr: getattr(r, a)))
    for label, fn in keys:
        rows.append((label, [_fmt_cell(fn(r)) for r in reports]))

    label_w = max(len(r[0]) for r in rows)
    col_ws = [
        max(len(str(rows[i][1][j])) for i in range(len(rows)))
        for j in range(len(reports))
    ]
    lines = []
    for label, cells in rows:
        parts = [label.ljust(label_w)]
        parts.extend(str(c).rjust(col_ws[j]) for j, c in enumerate(cells))
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def _histogram_csv(path, values, bins=20):
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        hi = lo + 1.0
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for i, c in enumerate(counts):
            writer.writerow([repr(float(edges[i])), repr(float(edges[i + 1])), int(c)])


def _positions_of(structure):
    if hasattr(structure, "sites"):
        return None  # fractional coordinates, no direct Cartesian histogram
    return [(a.x, a.y, a.z) for a in structure.atoms]


def build_report_parser():
    p = _Parser(prog="chemlm report")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--reports", required=True, nargs="+", help="report.json files")
    p.add_argument("--structures", help="evaluate output structures/ directory")
    p.add_argument("--reference", help="reference conformer directory for RMSD CSV")
    p.add_argument("--out")
    return p


def cmd_report(args, out_dir, phases):
    t0 = time.time()
    labels = []
    reports = []
    for path in args.reports:
        try:
            with open(path, encoding="utf-8") as fh:
                reports.append(MetricsReport.from_json(fh.read()))
        except OSError as exc:
            raise CliError(f"cannot read report {path}: {exc}") from exc
        except ValueError as exc:
            raise CliError(f"{path}: {exc}") from exc
        labels.append(os.path.basename(os.path.dirname(os.path.abspath(path))) or path)
    table = render_table(labels, reports)
    with open(os.path.join(out_dir, "table.txt"), "w", encoding="utf-8") as fh:
        fh.write(table)
    sys.stdout.write(table)
    phases["table"] = time.time() - t0

    extras = {"n_reports": len(reports)}
    if args.structures:
        t0 = time.time()
        triples = _read_structure_files(args.structures)
        structures = [s for _, s, _ in triples if s is not None]
        if structures:
            kind = structure_kind(structures[0])
            for name, fn in property_functions(kind).items():
                _histogram_csv(
                    os.path.join(out_dir, f"hist_{name}.csv"),
                    [fn(s) for s in structures],
                )
            with open(os.path.join(out_dir, "neighbors.csv"), "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["file", "nearest", "farthest"])
                for name, s, _ in triples:
                    if s is None:
                        continue
                    pos = _positions_of(s)
                    if pos is None or len(pos) < 2:
                        continue
                    d = pairwise_distances(pos)
                    off = d[np.triu_indices(len(pos), k=1)]
                    writer.writerow([name, repr(float(off.min())), repr(float(off.max()))])
        extras["n_structures"] = len(structures)
        phases["distributions"] = time.time() - t0

    if args.reference:
        if not args.structures:
            raise CliError("--reference needs --structures")
        t0 = time.time()
        ref = {n: s for n, s, _ in _read_structure_files(args.reference) if s is not None}
        with open(os.path.join(out_dir, "rmsd.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["file", "rmsd", "note"])
            for name, s, _ in _read_structure_files(args.structures):
                if s is None or name not in ref:
                    continue
                pos_a = _positions_of(s)
                pos_b = _positions_of(ref[name])
                if pos_a is None or pos_b is None:
                    writer.writerow([name, "", "fractional coordinates"])
                elif len(pos_a) != len(pos_b):
                    writer.writerow([name, "", "atom count mismatch"])
                else:
                    writer.writerow([name, repr(kabsch_rmsd(pos_a, pos_b)), ""])
        phases["rmsd"] = time.time() - t0
    return extras


# ----------------------------------------------------------------- main

COMMANDS = {
    "synth": (build_synth_parser, cmd_synth),
    "prepare": (build_prepare_parser, cmd_prepare),
    "train": (build_train_parser, cmd_train),
    "sample": (build_sample_parser, cmd_sample),
    "evaluate": (build_evaluate_parser, cmd_evaluate),
    "report": (build_report_parser, cmd_report),
}

USAGE = """usage: chemlm COMMAND [options]

commands:
  synth      generate a synthetic structure corpus
  prepare    parse + round + tokenize a corpus into a training bundle
  train      fit a model on a prepared bundle
  sample     draw sequences from a trained checkpoint
  evaluate   score samples against the training corpus
  report     render evaluation reports as a table + distribution CSVs

Run `chemlm COMMAND --help` for per-command flags. Set $CHEMLM_OUTPUT_ROOT
to default --out to $CHEMLM_OUTPUT_ROOT/<command>.
"""

_PATH_ARGS = {"out", "config", "input", "corpus", "checkpoint", "vocab",
              "samples", "train", "reports", "structures", "reference"}


def _resolve_out(args, command) -> str:
    if args.out:
        return args.out
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root:
        return os.path.join(root, command)
    raise CliError(f"no --out given and ${OUTPUT_ROOT_ENV} is not set")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(USAGE)
        return EXIT_OK
    command = argv[0]
    if command not in COMMANDS:
        sys.stderr.write(f"chemlm: unknown command {command!r}\n{USAGE}")
        return EXIT_USER
    build, run = COMMANDS[command]
    parser = build()

    rest = argv[1:]
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(rest)
        file_args = load_config_file(known.config) if known.config else []
        args = parser.parse_args(file_args + rest)
        out_dir = _resolve_out(args, command)
    except CliError as exc:
        sys.stderr.write(f"chemlm {command}: {exc}\n")
        return EXIT_USER

    os.makedirs(out_dir, exist_ok=True)
    phases = {}
    status = "ok"
    error = ""
    extras = {}
    code = EXIT_OK
    started = time.time()
    try:
        extras = run(args, out_dir, phases)
    except (CliError, ChemlmError, OSError) as exc:
        status = "error"
        error = str(exc)
        code = EXIT_USER
        sys.stderr.write(f"chemlm {command}: {error}\n")
    except Exception as exc:  # internal bug: still record it, exit 2
        status = "error"
        error = f"{type(exc).__name__}: {exc}"
        code = EXIT_INTERNAL
        sys.stderr.write(f"chemlm {command}: internal error: {error}\n")
    phases["total"] = time.time() - started

    config_record = {
        k: v for k, v in sorted(vars(args).items()) if k not in _PATH_ARGS
    }
    manifest = {
        "command": command,
        "status": status,
        "config": config_record,
        "outputs": hash_outputs(out_dir),
    }
    if error:
        manifest["error"] = error
    manifest.update(extras or {})
    write_manifest(out_dir, manifest)
    write_timing(out_dir, phases)
    return code


if __name__ == "__main__":
    sys.exit(main())
