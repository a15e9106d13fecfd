"""Token counting: loadable byte-level BPE merge tables, a lexeme fallback, and budget arithmetic.

Merge-table file format (UTF-8, LF line endings)::

    bpe-merges v1 <name>
    LEFT RIGHT
    ...

Symbols are written byte by byte; bytes outside printable ASCII, space and
backslash are written as ``\\xNN``. Rank is line order (first merge = rank 0).
"""

from __future__ import annotations

import hashlib
import heapq
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Union

HEADER = "bpe-merges v1"


class TokenizerError(Exception):
    pass


class FormatError(TokenizerError):
    def __init__(self, line: int, reason: str = "malformed line") -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line


class EmptyModel(TokenizerError):
    pass


class Counter(Protocol):
    name: str

    @property
    def hash(self) -> str: ...

    def count(self, text: bytes) -> int: ...


def escape_symbol(sym: bytes) -> str:
    return "".join(chr(b) if 0x21 <= b <= 0x7E and b != 0x5C else f"\\x{b:02x}" for b in sym)


_ESC_RE = re.compile(r"\\x([0-9a-fA-F]{2})|([\x21-\x5b\x5d-\x7e])")


def unescape_symbol(text: str) -> bytes:
    out = bytearray()
    pos = 0
    while pos < len(text):
        m = _ESC_RE.match(text, pos)
        if m is None:
            raise ValueError(f"bad symbol text at {pos}: {text!r}")
        out.append(int(m.group(1), 16) if m.group(1) else ord(m.group(2)))
        pos = m.end()
    if not out:
        raise ValueError("empty symbol")
    return bytes(out)


@dataclass(frozen=True)
class TokenModel:
    name: str
    merges: tuple[tuple[bytes, bytes], ...]
    _ranks: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        known = {bytes([b]) for b in range(256)}
        ranks: dict[tuple[bytes, bytes], int] = {}
        for rank, (left, right) in enumerate(self.merges):
            if left not in known or right not in known:
                raise ValueError(f"merge {rank} uses an unknown symbol")
            if (left, right) in ranks:
                raise ValueError(f"merge {rank} duplicates merge {ranks[(left, right)]}")
            ranks[(left, right)] = rank
            known.add(left + right)
        object.__setattr__(self, "_ranks", ranks)

    @property
    def vocab_size(self) -> int:
        return 256 + len(self.merges)

    def serialize(self) -> str:
        lines = [f"{HEADER} {self.name}"]
        lines += [f"{escape_symbol(a)} {escape_symbol(b)}" for a, b in self.merges]
        return "\n".join(lines) + "\n"

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()

    def rank(self, left: bytes, right: bytes) -> int | None:
        return self._ranks.get((left, right))

    def tokens(self, text: bytes) -> list[bytes]:
        """Whole-text BPE: repeatedly merge the lowest-rank adjacent pair, leftmost first."""
        n = len(text)
        if n < 2 or not self._ranks:
            return [text[i : i + 1] for i in range(n)]
        sym = [text[i : i + 1] for i in range(n)]
        nxt = list(range(1, n + 1))
        prv = list(range(-1, n - 1))
        ranks = self._ranks
        heap = []
        for i in range(n - 1):
            r = ranks.get((sym[i], sym[i + 1]))
            if r is not None:
                heap.append((r, i, sym[i], sym[i + 1]))
        heapq.heapify(heap)
        while heap:
            r, i, left, right = heapq.heappop(heap)
            j = nxt[i] if sym[i] is not None else n
            # stale entry: a neighbour changed since this pair was queued
            if sym[i] != left or j >= n or sym[j] != right:
                continue
            sym[i] = left + right
            sym[j] = None
            nxt[i] = nxt[j]
            if nxt[j] < n:
                prv[nxt[j]] = i
            p = prv[i]
            if p >= 0:
                pr = ranks.get((sym[p], sym[i]))
                if pr is not None:
                    heapq.heappush(heap, (pr, p, sym[p], sym[i]))
            q = nxt[i]
            if q < n:
                qr = ranks.get((sym[i], sym[q]))
                if qr is not None:
                    heapq.heappush(heap, (qr, i, sym[i], sym[q]))
        return [s for s in sym if s is not None]

    def count(self, text: bytes) -> int:
        return len(self.tokens(text))


def parse_token_model(text: str) -> TokenModel:
    if not text:
        raise EmptyModel("merge table file is empty")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header = lines[0]
    if not header.startswith(HEADER + " ") or not header[len(HEADER) + 1 :].strip() or header != header.rstrip():
        raise FormatError(1, "expected header 'bpe-merges v1 <name>'")
    name = header[len(HEADER) + 1 :]
    merges = []
    known = {bytes([b]) for b in range(256)}
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2:
            raise FormatError(lineno)
        try:
            left, right = unescape_symbol(parts[0]), unescape_symbol(parts[1])
        except ValueError as exc:
            raise FormatError(lineno, str(exc)) from None
        if left not in known or right not in known:
            raise FormatError(lineno, "merge uses a symbol not produced by an earlier merge")
        if (left, right) in seen:
            raise FormatError(lineno, "duplicate merge")
        seen.add((left, right))
        known.add(left + right)
        merges.append((left, right))
    return TokenModel(name=name, merges=tuple(merges))


def load_token_model(path: Union[str, Path]) -> TokenModel:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise FormatError(1, "file is not UTF-8") from None
    return parse_token_model(text)


def count_tokens(model: TokenModel, text: bytes) -> int:
    return model.count(text)


_IDENT_RUN = re.compile(rb"[A-Za-z0-9_$]+")
_WS = frozenset(b" \t\n\r\f\v")


def count_tokens_fallback(text: bytes) -> int:
    """Identifier runs cost ceil(len/8); any other non-whitespace byte costs 1."""
    total = 0
    covered = 0
    for m in _IDENT_RUN.finditer(text):
        total += -(-(m.end() - m.start()) // 8)
        covered += m.end() - m.start()
    ws = sum(1 for b in text if b in _WS)
    return total + len(text) - covered - ws


class FallbackTokenizer:
    name = "fallback-lexeme-v1"

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.name.encode()).hexdigest()

    def count(self, text: bytes) -> int:
        return count_tokens_fallback(text)


@dataclass(frozen=True)
class ContextBudget:
    window: int = 2048
    reserved_output: int = 0
    prompt_overhead: int = 0

    def __post_init__(self) -> None:
        if self.window <= 0:
            raise ValueError("window must be positive")
        if self.reserved_output < 0 or self.prompt_overhead < 0:
            raise ValueError("reserved_output and prompt_overhead must be non-negative")
        if self.reserved_output >= self.window:
            raise ValueError("reserved_output must be smaller than the window")


def fits(budget: ContextBudget, input_tokens: int) -> bool:
    if input_tokens < 0:
        raise ValueError("input_tokens must be non-negative")
    return input_tokens + budget.prompt_overhead + budget.reserved_output <= budget.window
