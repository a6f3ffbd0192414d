"""Word embedding tables in word2vec text format.

The file starts with a "count dim" header line; each following line is a
token and `dim` floats, space separated.  Gzip-compressed files are detected
by magic bytes.  Lookups are exact; nearest() is a full scan, which is fine
for the vocabulary sizes this toolkit works with.
"""
from __future__ import annotations

import gzip
from pathlib import Path

import numpy as np


class EmbeddingError(ValueError):
    """Malformed embedding file.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OutOfVocabulary(KeyError):
    pass


class EmbeddingTable:
    def __init__(self, tokens: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or len(tokens) != matrix.shape[0]:
            raise ValueError("token list and matrix rows must match")
        self.tokens: tuple[str, ...] = tuple(tokens)
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self._index = {tok: i for i, tok in enumerate(tokens)}
        norms = np.linalg.norm(self.matrix, axis=1)
        safe = np.where(norms == 0.0, 1.0, norms)
        # zero vectors stay zero, so their cosine against anything is 0
        self._unit = self.matrix / safe[:, None]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.matrix[self._index[token]]
        except KeyError:
            raise OutOfVocabulary(token) from None

    def cosine(self, a: str, b: str) -> float:
        ua = self._unit[self._index_of(a)]
        ub = self._unit[self._index_of(b)]
        return float(ua @ ub)

    def _index_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise OutOfVocabulary(token) from None

    def nearest(self, token: str, k: int) -> list[tuple[str, float]]:
        """Top-k neighbours by cosine, excluding the query itself.

        Ties break lexicographically on the token so results are stable.
        """
        if k < 0:
            raise ValueError("k must be non-negative")
        idx = self._index_of(token)
        sims = self._unit @ self._unit[idx]
        order = sorted(
            (i for i in range(len(self.tokens)) if i != idx),
            key=lambda i: (-sims[i], self.tokens[i]),
        )
        return [(self.tokens[i], float(sims[i])) for i in order[:k]]


def _open_maybe_gzip(path: Path):
    with open(path, "rb") as probe:
        magic = probe.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def load_embeddings(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    with _open_maybe_gzip(path) as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingError("header must be 'count dim'", 1)
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise EmbeddingError("header must be two integers", 1) from None
        if count < 0 or dim <= 0:
            raise EmbeddingError("header counts must be positive", 1)

        tokens: list[str] = []
        rows: list[np.ndarray] = []
        seen: dict[str, int] = {}
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split(" ")
            fields = [f for f in fields if f]
            if len(fields) != dim + 1:
                raise EmbeddingError(
                    f"expected 1 token + {dim} components, got {len(fields)} fields", line_no
                )
            token = fields[0]
            if token in seen:
                raise EmbeddingError(
                    f"duplicate token {token!r} (first seen on line {seen[token]})", line_no
                )
            seen[token] = line_no
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError:
                raise EmbeddingError("vector component is not a number", line_no) from None
            if not np.all(np.isfinite(vec)):
                raise EmbeddingError("vector component is not finite", line_no)
            tokens.append(token)
            rows.append(vec)

    if len(tokens) != count:
        raise EmbeddingError(f"header promised {count} entries, file has {len(tokens)}")
    matrix = np.vstack(rows) if rows else np.zeros((0, dim))
    return EmbeddingTable(tokens, matrix)


def save_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    """Write word2vec text format (used for fixtures and round-trip tests)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table)} {table.dim}\n")
        for i, token in enumerate(table.tokens):
            comps = " ".join(repr(float(x)) for x in table.matrix[i])
            fh.write(f"{token} {comps}\n")
