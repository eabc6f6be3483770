"""Caption vocabulary with fixed reserved ids."""

from __future__ import annotations

from dataclasses import dataclass, field

from sentact.errors import DataError

PAD, BOS, EOS, UNK = 0, 1, 2, 3
RESERVED = ("<pad>", "<bos>", "<eos>", "<unk>")


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if tuple(self.tokens[:4]) != RESERVED:
            raise DataError("vocabulary must start with the reserved tokens "
                            f"{RESERVED}")
        object.__setattr__(
            self, "index", {tok: i for i, tok in enumerate(self.tokens)}
        )
        if len(self.index) != len(self.tokens):
            raise DataError("vocabulary contains duplicate tokens")

    @classmethod
    def from_texts(cls, texts: list[str]) -> "Vocabulary":
        words = sorted(
            {tok for text in texts for tok in str(text).split()} - set(RESERVED)
        )
        return cls(RESERVED + tuple(words))

    @property
    def size(self) -> int:
        return len(self.tokens)

    def encode(self, text: str, strict: bool = False) -> list[int]:
        ids = []
        for tok in str(text).split():
            if tok in self.index:
                ids.append(self.index[tok])
            elif strict:
                raise DataError(f"token {tok!r} not in vocabulary")
            else:
                ids.append(UNK)
        return ids

    def decode(self, ids: list[int]) -> str:
        words = []
        for i in ids:
            if i < 0 or i >= self.size:
                raise DataError(f"token id {i} outside vocabulary of size {self.size}")
            if i in (PAD, BOS, EOS):
                continue
            words.append(self.tokens[i])
        return " ".join(words)
