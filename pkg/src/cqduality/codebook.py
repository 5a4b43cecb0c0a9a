"""Codeword enumeration, coset tables, leaders, and named codes."""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionMismatch, SizeLimit
from .gf2core import BitMatrix, CodePair, bits_to_int, nullspace, span, vec_mat

DEFAULT_ENUM_CAP = 20


def as_message(m: int | str | Sequence[int], length: int) -> int:
    """Normalize a message given as an int, bit string, or 0/1 sequence."""
    if isinstance(m, (int, np.integer)):
        value = int(m)
        if value < 0 or value >> length:
            raise DimensionMismatch(f"message {value} does not fit in {length} bits")
        return value
    if len(m) != length:
        raise DimensionMismatch(f"message has length {len(m)}, expected {length}")
    return bits_to_int(m)


def encode(pair: CodePair, m: int | str | Sequence[int], which: str = "C") -> int:
    """Return m times the selected generator ('C', 'Ct', 'Cperp', 'Ctperp')."""
    G = pair.block(which)
    return vec_mat(as_message(m, G.rows), G)


def codewords(pair: CodePair, which: str = "C") -> np.ndarray:
    """All codewords of the selected code, indexed by message."""
    return span(pair.block(which))


def weights(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(values, dtype=np.int64)).astype(np.int64)


def syndromes(H: BitMatrix) -> np.ndarray:
    """v H^T for every v in Z_2^n, as an array of length 2^n."""
    n = H.cols
    out = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        col = 0
        for i, r in enumerate(H.data):
            col |= ((r >> j) & 1) << i
        half = 1 << j
        out[half : 2 * half] = out[:half] ^ col
    return out


def dual_coset_index(pair: CodePair) -> np.ndarray:
    """Index of the coset of C-perp containing each v, namely v G_C^T."""
    return syndromes(pair.G)


def primal_coset_index(pair: CodePair) -> np.ndarray:
    """Index of the coset of C containing each v, namely v G_Cperp^T."""
    return syndromes(pair.G_dual)


def coset_leader(members: Sequence[int] | np.ndarray) -> int:
    """Minimum-weight member; ties go to the smallest integer."""
    arr = np.asarray(members, dtype=np.int64)
    if arr.size == 0:
        raise DimensionMismatch("empty coset has no leader")
    order = np.lexsort((arr, weights(arr)))
    return int(arr[order[0]])


@dataclass(frozen=True)
class CosetTable:
    """Cosets of C-perp (base 'Cperp') or of C (base 'C').

    Row m of ``members`` lists representative[m] XOR every codeword of the
    base code, in codeword-message order.
    """

    base_code: str
    n: int
    index_bits: int
    representatives: np.ndarray
    leaders: np.ndarray
    weight_enums: np.ndarray
    members: np.ndarray

    @property
    def count(self) -> int:
        return 1 << self.index_bits


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise SizeLimit(f"2^{n} vectors exceeds the enumeration cap 2^{cap}")


def _build_table(base: str, n: int, reps: np.ndarray, base_words: np.ndarray) -> CosetTable:
    members = reps[:, None] ^ base_words[None, :]
    w = weights(members)
    # argmin over (weight, value): weight dominates since value < 2^n
    key = (w << n) | members
    leaders = members[np.arange(members.shape[0]), np.argmin(key, axis=1)]
    enums = np.zeros((members.shape[0], n + 1), dtype=np.int64)
    np.add.at(enums, (np.repeat(np.arange(members.shape[0]), members.shape[1]), w.ravel()), 1)
    index_bits = int(reps.size).bit_length() - 1
    return CosetTable(base, n, index_bits, reps, leaders, enums, members)


def cosets_of_dual(pair: CodePair, cap: int = DEFAULT_ENUM_CAP) -> CosetTable:
    """The 2^k cosets y_h + C-perp with y_h = h G_Ctperp."""
    _check_cap(pair.n, cap)
    return _build_table("Cperp", pair.n, codewords(pair, "Ctperp"), codewords(pair, "Cperp"))


def cosets_of_primal(pair: CodePair, cap: int = DEFAULT_ENUM_CAP) -> CosetTable:
    """The 2^(n-k) cosets y_h + C with y_h = h G_Ct."""
    _check_cap(pair.n, cap)
    return _build_table("C", pair.n, codewords(pair, "Ct"), codewords(pair, "C"))


# Named codes -----------------------------------------------------------------


def repetition(n: int) -> BitMatrix:
    return BitMatrix(1, n, ((1 << n) - 1,))


def even_weight(n: int) -> BitMatrix:
    """Rows e_j + e_n for j < n."""
    top = 1 << (n - 1)
    return BitMatrix.from_rows(((1 << j) | top for j in range(n - 1)), n)


def hamming(r: int) -> BitMatrix:
    """[2^r - 1, 2^r - 1 - r] Hamming code; column j of H is the binary form of j."""
    n = (1 << r) - 1
    H = BitMatrix.from_rows(
        (sum((((j + 1) >> i) & 1) << j for j in range(n)) for i in range(r)), n
    )
    return nullspace(H)


def extended_hamming8() -> BitMatrix:
    """[8, 4, 4] code: the [7, 4] Hamming code with an overall parity bit."""
    G = hamming(3)
    return BitMatrix.from_rows((r | ((r.bit_count() & 1) << 7) for r in G.data), 8)


def _positive(text: str, what: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"{what} must be an integer, got {text!r}") from None
    if v < 1:
        raise ConfigError(f"{what} must be positive, got {v}")
    return v


def named_code(name: str) -> BitMatrix:
    """Resolve 'rep:n', 'even:n', 'hamming:n,k', 'e8', 'full:n' or 'zero:n'."""
    kind, _, arg = name.strip().partition(":")
    kind = kind.lower()
    if kind == "e8" and not arg:
        return extended_hamming8()
    if kind == "rep":
        return repetition(_positive(arg, "block length"))
    if kind == "even":
        n = _positive(arg, "block length")
        if n < 2:
            raise ConfigError("even:n needs n >= 2")
        return even_weight(n)
    if kind == "full":
        return BitMatrix.identity(_positive(arg, "block length"))
    if kind == "zero":
        return BitMatrix.zeros(0, _positive(arg, "block length"))
    if kind == "hamming":
        m = re.fullmatch(r"\s*(\d+)\s*,\s*(\d+)\s*", arg)
        if not m:
            raise ConfigError(f"expected hamming:n,k, got {name!r}")
        n, k = int(m.group(1)), int(m.group(2))
        r = n - k
        if r < 2 or n != (1 << r) - 1:
            raise ConfigError(f"no Hamming code with parameters [{n},{k}]")
        return hamming(r)
    raise ConfigError(f"unknown code {name!r}")


def parse_code_text(text: str) -> BitMatrix:
    """Parse the plain-text generator format ('#' comments, optional 'n k' header)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    header = None
    if lines and re.fullmatch(r"\d+\s+\d+", lines[0]):
        n, k = (int(t) for t in lines[0].split())
        header = (n, k)
        lines = lines[1:]
    for ln in lines:
        if not re.fullmatch(r"[01]+", ln):
            raise ConfigError(f"generator row {ln!r} is not a 0/1 string")
    if header is None:
        if not lines:
            raise ConfigError("code file has no rows and no 'n k' header")
        n = len(lines[0])
    else:
        n, k = header
        if len(lines) != k:
            raise DimensionMismatch(f"header declares k={k} but file has {len(lines)} rows")
    return BitMatrix.from_strings(lines, n)


def load_code(spec: str) -> BitMatrix:
    """A named code, or a path to a code file."""
    path = Path(spec)
    if path.is_file():
        return parse_code_text(path.read_text())
    return named_code(spec)
