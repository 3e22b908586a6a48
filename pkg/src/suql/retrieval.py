"""Embedding index over free-text columns, similarity scoring and pruning.

The default embedder is a deterministic hashed bag-of-words scheme so the
whole optimization path runs without model weights; dense retrievers plug in
through the same EmbedderBackend interface.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
import struct
from dataclasses import dataclass
from typing import Iterable, Optional, Protocol

import numpy as np

from .catalog import Table
from .types import TypeKind, render_value


class RetrievalError(Exception):
    pass


class EmbedderBackend(Protocol):
    dimension: int
    version: str

    def embed(self, text: str) -> np.ndarray: ...


_TOKEN_RE = re.compile(r"[a-z0-9]+")


class HashedBagEmbedder:
    """Hashed term-frequency embedder: pure function of the token multiset.

    Buckets come from a stable digest of each token; term frequency is
    weighted sublinearly (1 + log tf) and the vector is L2-normalized.
    """

    def __init__(self, dimension: int = 256):
        self.dimension = dimension
        self.version = f"hashed-bow-v1-d{dimension}"

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float32)
        counts: dict[int, int] = {}
        for token in _TOKEN_RE.findall(text.lower()):
            digest = hashlib.md5(token.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:8], "little") % self.dimension
            counts[bucket] = counts.get(bucket, 0) + 1
        for bucket, tf in counts.items():
            vec[bucket] = 1.0 + math.log(tf)
        norm = float(np.linalg.norm(vec))
        if norm > 0:
            vec /= norm
        return vec


def sim(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; callers pass unit vectors so this is a dot product."""
    if a.shape != b.shape:
        raise RetrievalError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a, b))


def _cell_texts(value) -> list[str]:
    if value is None:
        return []
    if isinstance(value, list):
        return [render_value(v) for v in value if v is not None]
    return [render_value(value)]


@dataclass
class ColumnIndex:
    table: str
    column: str
    dimension: int
    backend_version: str
    # vectors[row_id] holds one unit vector per text element of that cell
    vectors: list[np.ndarray]  # each (n_elements, dimension), possibly empty

    def row_count(self) -> int:
        return len(self.vectors)

    # -- scoring ------------------------------------------------------------

    def max_sim(self, row_id: int, query_vec: np.ndarray) -> Optional[float]:
        block = self.vectors[row_id]
        if block.shape[0] == 0:
            return None
        return float(np.max(block @ query_vec))

    # -- persistence --------------------------------------------------------
    # Byte layout: magic, then a JSON header line (dimension, backend tag,
    # row count), then one uint32 element count per row, then the packed
    # little-endian float32 vectors in row order.

    MAGIC = b"SUQLIDX1"

    def save(self, path: str) -> None:
        header = json.dumps(
            {
                "table": self.table,
                "column": self.column,
                "dimension": self.dimension,
                "backend_version": self.backend_version,
                "rows": len(self.vectors),
            },
            sort_keys=True,
        ).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(self.MAGIC)
            fh.write(struct.pack("<I", len(header)))
            fh.write(header)
            for block in self.vectors:
                fh.write(struct.pack("<I", block.shape[0]))
            for block in self.vectors:
                fh.write(block.astype("<f4").tobytes())

    @classmethod
    def load(cls, path: str) -> "ColumnIndex":
        with open(path, "rb") as fh:
            magic = fh.read(len(cls.MAGIC))
            if magic != cls.MAGIC:
                raise RetrievalError(f"{path}: not an index file")
            (hlen,) = struct.unpack("<I", fh.read(4))
            header = json.loads(fh.read(hlen).decode("utf-8"))
            counts = [
                struct.unpack("<I", fh.read(4))[0] for _ in range(header["rows"])
            ]
            dim = header["dimension"]
            vectors = []
            for n in counts:
                raw = fh.read(4 * dim * n)
                block = np.frombuffer(raw, dtype="<f4").reshape(n, dim).copy()
                vectors.append(block)
        return cls(
            header["table"], header["column"], dim, header["backend_version"], vectors
        )


def build_index(table: Table, column: str, embedder: EmbedderBackend) -> ColumnIndex:
    """Embed every text element of a free-text column, one block per row."""
    ctype = table.schema.column_type(column)
    if not ctype.is_free_text:
        raise RetrievalError(
            f"column {column!r} is {ctype.render()}, not a free-text column"
        )
    col_idx = table.schema.column_index(column)
    vectors = []
    for row in table.rows:
        texts = _cell_texts(row[col_idx])
        if texts:
            block = np.stack([embedder.embed(t) for t in texts])
        else:
            block = np.zeros((0, embedder.dimension), dtype=np.float32)
        vectors.append(block)
    return ColumnIndex(
        table.schema.name, column, embedder.dimension, embedder.version, vectors
    )


class IndexSet:
    """All column indexes of one database, keyed by (table, column)."""

    def __init__(self, embedder: Optional[EmbedderBackend] = None):
        self.embedder = embedder or HashedBagEmbedder()
        self.indexes: dict[tuple[str, str], ColumnIndex] = {}
        self._query_cache: dict[str, np.ndarray] = {}

    def add(self, index: ColumnIndex) -> None:
        self.indexes[(index.table, index.column)] = index

    def get(self, table: str, column: str) -> Optional[ColumnIndex]:
        return self.indexes.get((table, column))

    def build_all(self, table: Table) -> None:
        for column in table.schema.free_text_columns():
            self.add(build_index(table, column, self.embedder))

    def embed_query(self, text: str) -> np.ndarray:
        if text not in self._query_cache:
            self._query_cache[text] = self.embedder.embed(text)
        return self._query_cache[text]

    def aggregate_score(
        self, table: str, columns: Iterable[str], row_id: int, constraints: list[str]
    ) -> float:
        """Sum over constraints of the best element similarity in the row.

        Rows with no text elements in any referenced column take the worst
        possible score (-1 per constraint).
        """
        columns = list(dict.fromkeys(columns))
        total = 0.0
        for constraint in constraints:
            qvec = self.embed_query(constraint)
            best: Optional[float] = None
            for column in columns:
                index = self.get(table, column)
                if index is None:
                    raise RetrievalError(f"no index for {table}.{column}")
                s = index.max_sim(row_id, qvec)
                if s is not None and (best is None or s > best):
                    best = s
            total += best if best is not None else -1.0
        return total

    def top_k(
        self,
        table: str,
        columns: Iterable[str],
        constraints: list[str],
        k: int,
        candidate_rows: Iterable[int],
    ) -> list[int]:
        """Candidate rows ranked by aggregate score, ties by ascending row id."""
        if k < 1:
            raise RetrievalError("k must be at least 1")
        columns = list(columns)
        scored = [
            (self.aggregate_score(table, columns, r, constraints), r)
            for r in candidate_rows
        ]
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        return [r for _, r in scored[:k]]

    def save(self, directory: str) -> None:
        for (table, column), index in sorted(self.indexes.items()):
            index.save(os.path.join(directory, _index_filename(table, column)))

    def load_for(self, directory: str, table: Table) -> None:
        for column in table.schema.free_text_columns():
            path = os.path.join(directory, _index_filename(table.schema.name, column))
            if os.path.exists(path):
                index = ColumnIndex.load(path)
                if index.backend_version != self.embedder.version:
                    index = build_index(table, column, self.embedder)
                self.add(index)


def _index_filename(table: str, column: str) -> str:
    safe = re.sub(r"[^A-Za-z0-9_.-]", "_", f"{table}.{column}")
    return f"{safe}.idx"


def linearize_row(row: list, schema) -> str:
    """Flatten a row to "col: value" fragments, comma-joined in schema order.

    Null cells are omitted; array elements join with "; ".
    """
    parts = []
    for (name, _), value in zip(schema.columns, row):
        if value is None:
            continue
        parts.append(f"{name}: {render_value(value)}")
    return ", ".join(parts)
