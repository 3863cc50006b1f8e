"""Binary generator matrices, erasure patterns, and ternary codeword algebra.

An unreliable encoder drops 1-entries of its generator matrix G before
multiplying: the message is encoded as m(G+E) over GF(2), where the
erasure pattern E is 1 only where G is 1.  Whether a dropped entry
matters depends on the message, so codeword bits carry more structure
than plain GF(2) values: a zero produced by an all-zero column sum can
never flip ("hard zero"), while a zero produced by an even positive sum
flips whenever an odd number of its contributing entries are dropped
("soft zero").  `TernaryCodeword` keeps the integer column sums so later
stages can read off per-bit fault exposure directly.
"""

from __future__ import annotations

import itertools
from enum import IntEnum
from fractions import Fraction
from importlib import resources
from typing import Iterable, Iterator, Sequence

import numpy as np

# Exhaustive enumerations refuse to run above these sizes; override per call.
DEFAULT_MESSAGE_LIMIT = 20  # codebook enumeration caps at 2^20 messages
DEFAULT_ERASURE_LIMIT = 24  # erasure power sets cap at 2^24 patterns


class CapacityError(RuntimeError):
    """An exhaustive enumeration would exceed its configured limit."""


class SupportError(ValueError):
    """An erasure pattern has a 1 where the generator matrix has a 0."""


class MatrixFormatError(ValueError):
    """Malformed matrix text; carries the 1-based line/column of the offense."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class Symbol(IntEnum):
    """Ternary codeword alphabet."""

    HARD0 = 0  # column sum 0: can never become 1
    ONE = 1    # odd column sum
    SOFT0 = 2  # even positive column sum: flips under an odd number of drops


_SYMBOL_CHAR = {Symbol.HARD0: "0", Symbol.ONE: "1", Symbol.SOFT0: "~"}


def _as_bit_matrix(bits, name: str = "bits") -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} entries must be 0 or 1")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _as_bit_vector(bits, length: int | None = None, name: str = "bits") -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d array, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} entries must be 0 or 1")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} must have length {length}, got {arr.shape[0]}")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


class GeneratorMatrix:
    """Immutable k-by-n binary generator matrix with cached column degrees."""

    __slots__ = ("bits", "k", "n", "_degrees")

    def __init__(self, bits):
        self.bits = _as_bit_matrix(bits, "generator matrix")
        self.k, self.n = self.bits.shape
        if self.k < 1 or self.n < 1:
            raise ValueError("generator matrix needs at least one row and one column")
        if self.k > self.n:
            raise ValueError(f"rate k/n = {self.k}/{self.n} exceeds 1; k <= n is required")
        self._degrees = None

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def degrees(self) -> np.ndarray:
        """Number of 1s in each column."""
        if self._degrees is None:
            d = self.bits.sum(axis=0, dtype=np.int64)
            d.setflags(write=False)
            self._degrees = d
        return self._degrees

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    @property
    def num_ones(self) -> int:
        return int(self.bits.sum())

    def one_positions(self) -> list[tuple[int, int]]:
        """Coordinates of the 1-entries in row-major order."""
        rows, cols = np.nonzero(self.bits)
        return list(zip(rows.tolist(), cols.tolist()))

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorMatrix) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.k, self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        rows = ";".join("".join(str(b) for b in row) for row in self.bits)
        return f"GeneratorMatrix({self.k}x{self.n}: {rows})"


class ErasureMatrix:
    """Erasure pattern: 1-entries mark dropped 1s of an associated generator."""

    __slots__ = ("bits", "weight")

    def __init__(self, bits, generator: GeneratorMatrix):
        arr = _as_bit_matrix(bits, "erasure matrix")
        if arr.shape != generator.bits.shape:
            raise ValueError(
                f"erasure matrix shape {arr.shape} does not match generator "
                f"{generator.bits.shape}"
            )
        if np.any(arr & ~generator.bits & 1):
            raise SupportError("erasure matrix has a 1 where the generator matrix has a 0")
        self.bits = arr
        self.weight = int(arr.sum())

    @classmethod
    def zero(cls, generator: GeneratorMatrix) -> "ErasureMatrix":
        return cls(np.zeros_like(generator.bits), generator)

    @classmethod
    def from_positions(
        cls, generator: GeneratorMatrix, positions: Iterable[tuple[int, int]]
    ) -> "ErasureMatrix":
        bits = np.zeros_like(generator.bits)
        for i, j in positions:
            bits[i, j] = 1
        return cls(bits, generator)

    def __eq__(self, other) -> bool:
        return isinstance(other, ErasureMatrix) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        pos = ",".join(f"({i},{j})" for i, j in zip(*np.nonzero(self.bits)))
        return f"ErasureMatrix(weight={self.weight}: {pos or 'empty'})"


class BinaryWord:
    """A received word: plain bits of length n."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        self.bits = _as_bit_vector(bits, name="word")

    def __len__(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryWord) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def to01(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from01(cls, text: str) -> "BinaryWord":
        return cls([int(ch) for ch in text])

    def __repr__(self) -> str:
        return f"BinaryWord({self.to01()})"


class TernaryCodeword:
    """Codeword over {hard 0, soft 0, 1}, with the integer column sums behind it."""

    __slots__ = ("sums", "symbols", "message")

    def __init__(self, sums, message):
        s = np.asarray(sums, dtype=np.int64)
        if s.ndim != 1 or (s < 0).any():
            raise ValueError("column sums must be a 1-d array of non-negative integers")
        s = np.ascontiguousarray(s)
        s.setflags(write=False)
        self.sums = s
        self.message = _as_bit_vector(message, name="message")
        sym = np.where(s % 2 == 1, np.uint8(Symbol.ONE),
                       np.where(s == 0, np.uint8(Symbol.HARD0), np.uint8(Symbol.SOFT0)))
        sym = np.ascontiguousarray(sym)
        sym.setflags(write=False)
        self.symbols = sym

    @property
    def n(self) -> int:
        return self.sums.shape[0]

    def effective(self) -> BinaryWord:
        """The word actually produced by a fault-free encoder (soft zeros read 0)."""
        return BinaryWord((self.symbols == Symbol.ONE).astype(np.uint8))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TernaryCodeword)
            and np.array_equal(self.sums, other.sums)
            and np.array_equal(self.message, other.message)
        )

    def __hash__(self) -> int:
        return hash((self.sums.tobytes(), self.message.tobytes()))

    def to_text(self) -> str:
        return "".join(_SYMBOL_CHAR[Symbol(v)] for v in self.symbols)

    def __repr__(self) -> str:
        msg = "".join(str(b) for b in self.message)
        return f"TernaryCodeword({self.to_text()}, message={msg})"


def encode(m, G: GeneratorMatrix) -> TernaryCodeword:
    """Encode a message fault-free, keeping the integer column sums."""
    m = _as_bit_vector(m, G.k, "message")
    sums = m.astype(np.int64) @ G.bits.astype(np.int64)
    return TernaryCodeword(sums, m)


def encode_faulty(m, G: GeneratorMatrix, E: ErasureMatrix) -> BinaryWord:
    """Encode through a faulty encoder: m(G+E) over GF(2).

    Since E only cancels 1s of G, G+E and G-E agree; both equal G XOR E.
    """
    m = _as_bit_vector(m, G.k, "message")
    bits = E.bits if isinstance(E, ErasureMatrix) else _as_bit_matrix(E, "erasure matrix")
    if bits.shape != G.bits.shape:
        raise ValueError(f"erasure matrix shape {bits.shape} does not match generator")
    if np.any(bits & ~G.bits & 1):
        raise SupportError("erasure matrix has a 1 where the generator matrix has a 0")
    word = (m.astype(np.int64) @ (G.bits ^ bits).astype(np.int64)) % 2
    return BinaryWord(word.astype(np.uint8))


def column_degrees(G: GeneratorMatrix) -> np.ndarray:
    """d_j: number of 1s in column j."""
    return G.degrees


def relative_degrees(G: GeneratorMatrix, m) -> np.ndarray:
    """d_j^(m): number of 1s in column j lying in rows selected by the message."""
    m = _as_bit_vector(m, G.k, "message")
    return m.astype(np.int64) @ G.bits.astype(np.int64)


def max_degree(G: GeneratorMatrix) -> int:
    return G.max_degree


def all_messages(k: int) -> np.ndarray:
    """All 2^k messages as rows, in lexicographic order (m[0] most significant)."""
    count = 1 << k
    idx = np.arange(count, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def enumerate_codebook(G: GeneratorMatrix, limit: int | None = None) -> list[TernaryCodeword]:
    """One codeword per message, in lexicographic message order."""
    limit = DEFAULT_MESSAGE_LIMIT if limit is None else limit
    if G.k > limit:
        raise CapacityError(
            f"codebook enumeration needs 2^{G.k} messages; limit is k <= {limit}"
        )
    msgs = all_messages(G.k)
    sums = msgs.astype(np.int64) @ G.bits.astype(np.int64)
    return [TernaryCodeword(sums[i], msgs[i]) for i in range(msgs.shape[0])]


def enumerate_erasure_matrices(
    G: GeneratorMatrix, max_weight: int | None = None, limit: int | None = None
) -> Iterator[ErasureMatrix]:
    """Every erasure pattern of weight <= max_weight, exactly once.

    Order: increasing weight, then lexicographic in the row-major positions of
    the dropped entries.  Weight defaults to #ones(G), i.e. the full power set.
    """
    limit = DEFAULT_ERASURE_LIMIT if limit is None else limit
    ones = G.one_positions()
    if len(ones) > limit:
        raise CapacityError(
            f"erasure enumeration needs 2^{len(ones)} patterns; limit is {limit} ones"
        )
    top = len(ones) if max_weight is None else min(int(max_weight), len(ones))
    for w in range(top + 1):
        for subset in itertools.combinations(ones, w):
            yield ErasureMatrix.from_positions(G, subset)


# -- matrix text format -------------------------------------------------------
#
# line 1:        "k n" (ASCII decimals, single space)
# lines 2..k+1:  exactly n characters from {'0', '1'}
# trailing newline optional; anything else is a parse error with line/column.


def parse_matrix(text: str) -> GeneratorMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].strip() == "":
        raise MatrixFormatError("missing header 'k n'", 1)
    header = lines[0]
    parts = header.split(" ")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MatrixFormatError(f"header must be 'k n', got {header!r}", 1)
    k, n = int(parts[0]), int(parts[1])
    if len(lines) - 1 != k:
        raise MatrixFormatError(f"expected {k} matrix rows, found {len(lines) - 1}", len(lines))
    rows = np.zeros((k, n), dtype=np.uint8)
    for i, line in enumerate(lines[1:], start=2):
        if len(line) != n:
            raise MatrixFormatError(
                f"row must have exactly {n} characters, got {len(line)}", i, len(line) + 1
            )
        for j, ch in enumerate(line, start=1):
            if ch == "1":
                rows[i - 2, j - 1] = 1
            elif ch != "0":
                raise MatrixFormatError(f"invalid character {ch!r}", i, j)
    try:
        return GeneratorMatrix(rows)
    except ValueError as exc:
        raise MatrixFormatError(str(exc), 1) from exc


def format_matrix(G: GeneratorMatrix) -> str:
    body = "\n".join("".join(str(b) for b in row) for row in G.bits)
    return f"{G.k} {G.n}\n{body}\n"


def load_matrix(path) -> GeneratorMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read())


def save_matrix(G: GeneratorMatrix, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(G))


# -- bundled example matrices -------------------------------------------------


def bundled_matrix_names() -> list[str]:
    """Names of the example matrices shipped with the package."""
    root = resources.files("faultenc").joinpath("data")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt"))


def bundled_matrix(name: str) -> GeneratorMatrix:
    path = resources.files("faultenc").joinpath("data").joinpath(f"{name}.txt")
    return parse_matrix(path.read_text(encoding="ascii"))
