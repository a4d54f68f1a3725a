"""Token vocabulary: ordered token table with special markers.

Ids are dense 0..|V|-1 with the three specials first (BOS, EOS, PAD),
then content tokens in lexicographic order. A vocabulary knows its
scheme, its precision, and which structure kind it was built over, and
it can be persisted as a small text file whose sha256 identifies it in
checkpoints and manifests.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..errors import EncodeError
from .scheme import Scheme

BOS_TOKEN = "<BOS>"
EOS_TOKEN = "<EOS>"
PAD_TOKEN = "<PAD>"
SPECIALS = (BOS_TOKEN, EOS_TOKEN, PAD_TOKEN)

STRUCTURE_KINDS = ("molecule", "crystal", "pocket")

#: Space is written escaped in vocabulary files so every token stays a
#: visible one-per-line entry.
_SPACE_ESCAPE = "<SP>"


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    scheme: Scheme
    structure_kind: str
    _ids: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.structure_kind not in STRUCTURE_KINDS:
            raise ValueError(f"unknown structure kind {self.structure_kind!r}")
        if tuple(self.tokens[:3]) != SPECIALS:
            raise ValueError("tokens must begin with <BOS>, <EOS>, <PAD>")
        ids = {}
        for i, tok in enumerate(self.tokens):
            if tok in ids:
                raise ValueError(f"duplicate token {tok!r}")
            if i >= 3 and tok in SPECIALS:
                raise ValueError(f"special token {tok!r} repeated as content")
            ids[tok] = i
        object.__setattr__(self, "_ids", ids)

    @property
    def bos_id(self) -> int:
        return 0

    @property
    def eos_id(self) -> int:
        return 1

    @property
    def pad_id(self) -> int:
        return 2

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def content_tokens(self) -> tuple[str, ...]:
        return self.tokens[3:]

    def id_of(self, token: str) -> int:
        try:
            return self._ids[token]
        except KeyError:
            raise EncodeError("token not in vocabulary", token=token) from None

    def token_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.tokens):
            raise IndexError(f"token id {token_id} outside vocabulary of {len(self.tokens)}")
        return self.tokens[token_id]

    def content_hash(self) -> str:
        """sha256 over the persisted form; identifies the vocabulary."""
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()

    def dumps(self) -> str:
        lines = [
            "chemlm-vocabulary v1",
            f"scheme {self.scheme.kind}",
            f"precision {self.scheme.precision}",
            f"lattice_param_mode {self.scheme.lattice_param_mode}",
            f"structure_kind {self.structure_kind}",
            f"tokens {len(self.tokens)}",
        ]
        for tok in self.tokens:
            lines.append(tok.replace(" ", _SPACE_ESCAPE))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Vocabulary":
        lines = text.splitlines()
        if not lines or lines[0] != "chemlm-vocabulary v1":
            raise ValueError("not a chemlm vocabulary file")
        header = {}
        for line in lines[1:6]:
            key, _, value = line.partition(" ")
            header[key] = value
        try:
            scheme = Scheme(
                kind=header["scheme"],
                precision=int(header["precision"]),
                lattice_param_mode=header["lattice_param_mode"],
            )
            kind = header["structure_kind"]
            count = int(header["tokens"])
        except KeyError as exc:
            raise ValueError(f"vocabulary header missing {exc}") from None
        body = lines[6 : 6 + count]
        if len(body) != count:
            raise ValueError(f"expected {count} token lines, found {len(body)}")
        tokens = tuple(tok.replace(_SPACE_ESCAPE, " ") for tok in body)
        return cls(tokens, scheme, kind)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.loads(fh.read())


def make_vocabulary(content_tokens, scheme: Scheme, structure_kind: str) -> Vocabulary:
    """Assemble a vocabulary from a set of content tokens."""
    ordered = tuple(sorted(set(content_tokens)))
    if not ordered:
        raise ValueError("no content tokens")
    return Vocabulary(SPECIALS + ordered, scheme, structure_kind)
