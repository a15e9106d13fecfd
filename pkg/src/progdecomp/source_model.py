"""Structural decomposition of Java-like source files into method fragments.

Parsing is lexical: braces are matched over the token stream from
:mod:`progdecomp.lexer` (so literals and comments are opaque) and each ``{`` is
classified by looking backwards at the tokens that precede it. A ``{`` opens
one of three scopes:

* a type body (named class/interface/enum/record/@interface, anonymous class,
  or enum constant body),
* a method or constructor body, recognised only directly inside a type body,
* any other block (initialisers, statements, lambdas, array initialisers).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Union

from progdecomp.lexer import BLOCK_COMMENT, IDENT, LINE_COMMENT, PUNCT, Token, tokenize

Span = tuple[int, int]


class Role(str, Enum):
    SOURCE = "source"
    TEST = "test"


class FragmentKind(str, Enum):
    METHOD = "method"
    CONSTRUCTOR = "constructor"


class SourceModelError(Exception):
    pass


class UnbalancedBraces(SourceModelError):
    def __init__(self, path: str, offset: int) -> None:
        super().__init__(f"{path}: unbalanced braces at byte offset {offset}")
        self.path = path
        self.offset = offset


class UnknownFragmentId(SourceModelError, KeyError):
    def __init__(self, fragment_id: str) -> None:
        super().__init__(fragment_id)
        self.fragment_id = fragment_id

    def __str__(self) -> str:
        return f"unknown fragment id: {self.fragment_id}"


@dataclass(frozen=True)
class SourceFile:
    path: Path
    rel: str
    content: bytes

    @property
    def role(self) -> Role:
        parts = self.rel.split("/")[:-1]
        return Role.TEST if any(p in ("test", "tests") for p in parts) else Role.SOURCE

    @classmethod
    def load(cls, path: Union[str, Path], root: Union[str, Path, None] = None) -> "SourceFile":
        path = Path(path)
        rel = path.relative_to(root).as_posix() if root is not None else path.name
        return cls(path=path, rel=rel, content=path.read_bytes())

    def save(self, path: Union[str, Path, None] = None) -> None:
        Path(path or self.path).write_bytes(self.content)


@dataclass(frozen=True)
class MethodFragment:
    id: str
    path: str
    owner: str
    name: str
    arity: int
    kind: FragmentKind
    signature_text: bytes
    doc_span: Optional[Span]
    body_span: Span
    full_span: Span
    varargs: bool = False
    token_count: Optional[int] = None

    @property
    def simple_owner(self) -> str:
        return self.owner.rsplit(".", 1)[-1]

    def text(self, content: bytes) -> bytes:
        return content[self.full_span[0] : self.full_span[1]]

    def contains(self, other: "MethodFragment") -> bool:
        return (
            other is not self
            and self.full_span[0] <= other.full_span[0]
            and other.full_span[1] <= self.full_span[1]
        )

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "owner": self.owner,
            "name": self.name,
            "arity": self.arity,
            "kind": self.kind.value,
            "full_span": list(self.full_span),
            "body_span": list(self.body_span),
            "token_count": self.token_count,
        }


@dataclass(frozen=True)
class Literal:
    data: bytes


@dataclass(frozen=True)
class FragmentRef:
    """Reference to a fragment; ``parts`` reproduce its original bytes and may
    themselves contain references to lexically nested fragments."""

    id: str
    span: Span
    parts: tuple["Segment", ...]


Segment = Union[Literal, FragmentRef]


@dataclass(frozen=True)
class FileSkeleton:
    file: str
    segments: tuple[Segment, ...]

    def fragment_ids(self) -> list[str]:
        out: list[str] = []

        def walk(segs: Iterable[Segment]) -> None:
            for seg in segs:
                if isinstance(seg, FragmentRef):
                    out.append(seg.id)
                    walk(seg.parts)

        walk(self.segments)
        return out

    def top_level_ids(self) -> list[str]:
        return [s.id for s in self.segments if isinstance(s, FragmentRef)]


def scan_corpus(root: Union[str, Path], include_tests: bool = True) -> list[SourceFile]:
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(str(root))
    files = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in filenames:
            if not name.endswith(".java"):
                continue
            path = Path(dirpath) / name
            if not path.is_file():
                continue
            try:
                sf = SourceFile.load(path, root)
            except OSError as exc:
                raise OSError(f"cannot read {path}: {exc}") from exc
            if include_tests or sf.role is Role.SOURCE:
                files.append(sf)
    files.sort(key=lambda f: f.rel)
    return files


# ---------------------------------------------------------------------------
# parsing

MODIFIERS = frozenset(
    b"public private protected static final abstract synchronized native "
    b"strictfp default transient volatile sealed non-sealed".split()
)
# Identifiers that can sit before `name(` without being a return type.
NOT_A_TYPE = frozenset(
    b"return throw new else case do try catch finally if for while switch "
    b"assert yield throws extends implements package import goto".split()
)
CONTROL_KEYWORDS = frozenset(
    b"if for while switch catch synchronized try return new super this else do "
    b"throw assert case yield".split()
)
TYPE_KEYWORDS = frozenset((b"class", b"interface", b"enum"))
BOUNDARY = frozenset((b";", b"{", b"}"))


@dataclass
class _Scope:
    kind: str  # "type" | "method" | "block"
    chain: tuple[str, ...] = ()
    is_enum: bool = False
    in_constants: bool = False
    anon_count: int = 0
    fragment: Optional[dict] = None


class _Parser:
    def __init__(self, rel: str, content: bytes) -> None:
        self.rel = rel
        self.content = content
        self.toks, self.comments = tokenize(content)
        self.match: dict[int, int] = {}

    # token helpers -------------------------------------------------------

    def t(self, i: int) -> bytes:
        return self.toks[i].text if 0 <= i < len(self.toks) else b""

    def is_ident(self, i: int) -> bool:
        return 0 <= i < len(self.toks) and self.toks[i].kind == IDENT

    def back_match(self, close: int, opener: bytes, closer: bytes) -> Optional[int]:
        depth = 0
        for i in range(close, -1, -1):
            tx = self.t(i)
            if tx == closer:
                depth += 1
            elif tx == opener:
                depth -= 1
                if depth == 0:
                    return i
            elif tx in BOUNDARY and opener != b"{":
                return None
        return None

    def is_annotation_name(self, i: int) -> bool:
        while self.t(i - 1) == b"." and self.is_ident(i - 2):
            i -= 2
        return self.t(i - 1) == b"@"

    def skip_type_back(self, i: int) -> Optional[int]:
        """Index of the first token of a (possibly generic, dotted) type ending at ``i``."""
        while True:
            if self.t(i) == b">":
                i = self.back_match(i, b"<", b">")
                if i is None:
                    return None
                i -= 1
            if not self.is_ident(i):
                return None
            if self.t(i - 1) == b"." and (self.is_ident(i - 2) or self.t(i - 2) == b">"):
                i -= 2
                continue
            return i

    # brace balance ----------------------------------------------------------

    def check_balance(self) -> None:
        stack: list[int] = []
        for i, tok in enumerate(self.toks):
            if tok.text == b"{":
                stack.append(i)
            elif tok.text == b"}":
                if not stack:
                    raise UnbalancedBraces(self.rel, tok.start)
                self.match[stack.pop()] = i
        if stack:
            raise UnbalancedBraces(self.rel, self.toks[stack[-1]].start)

    # classification -------------------------------------------------------

    def named_type(self, k: int) -> Optional[str]:
        i = k - 1
        while i >= 0:
            tx = self.t(i)
            if tx in BOUNDARY or tx in (b"=", b"(", b"->"):
                return None
            if tx == b")":
                j = self.back_match(i, b"(", b")")
                if j is None:
                    return None
                i = j - 1
                continue
            tok = self.toks[i]
            if tok.kind == IDENT and self.t(i - 1) != b".":
                if tx in TYPE_KEYWORDS and self.is_ident(i + 1):
                    return self.t(i + 1).decode("utf-8", "replace")
                if tx == b"record" and self.is_ident(i + 1) and self.t(i + 2) in (b"(", b"<"):
                    return self.t(i + 1).decode("utf-8", "replace")
            i -= 1
        return None

    def is_anonymous(self, k: int) -> bool:
        if self.t(k - 1) != b")":
            return False
        p = self.back_match(k - 1, b"(", b")")
        if p is None:
            return False
        start = self.skip_type_back(p - 1)
        return start is not None and self.t(start - 1) == b"new"

    def enum_constant(self, k: int, scope: _Scope) -> Optional[str]:
        if not (scope.kind == "type" and scope.is_enum and scope.in_constants):
            return None
        i = k - 1
        if self.t(i) == b")":
            p = self.back_match(i, b"(", b")")
            if p is None:
                return None
            i = p - 1
        if self.is_ident(i):
            return self.t(i).decode("utf-8", "replace")
        return None

    def method_at(self, k: int, scope: _Scope) -> Optional[dict]:
        j = k - 1
        if self.t(j) != b")":
            # optional throws clause
            i = j
            while i >= 0 and (self.is_ident(i) or self.t(i) in (b".", b",", b"<", b">", b"?", b"&", b"[", b"]", b"@")):
                if self.t(i) == b"throws":
                    break
                i -= 1
            if self.t(i) != b"throws" or self.t(i - 1) != b")":
                return None
            j = i - 1
        p = self.back_match(j, b"(", b")")
        if p is None:
            return None
        n = p - 1
        if not self.is_ident(n) or self.t(n) in CONTROL_KEYWORDS or self.t(n) in MODIFIERS:
            return None
        name = self.t(n).decode("utf-8", "replace")
        owner_simple = scope.chain[-1] if scope.chain else ""

        q = n - 1
        tq = self.t(q)
        has_type: Optional[bool]
        if q < 0 or tq in BOUNDARY:
            has_type = False
        elif tq in (b".", b"new", b"@"):
            return None
        elif self.is_ident(q):
            if tq in MODIFIERS or self.is_annotation_name(q):
                has_type = False
            elif tq in NOT_A_TYPE:
                return None
            else:
                has_type = True
        elif tq == b"]":
            has_type = True
        elif tq == b">":
            lt = self.back_match(q, b"<", b">")
            if lt is None:
                return None
            before = lt - 1
            type_params = (
                before < 0
                or self.t(before) in BOUNDARY
                or self.t(before) in MODIFIERS
                or self.t(before) == b")"
                or (self.is_ident(before) and self.is_annotation_name(before))
            )
            has_type = not type_params
        elif tq == b")":
            ap = self.back_match(q, b"(", b")")
            if ap is None or not (self.is_ident(ap - 1) and self.is_annotation_name(ap - 1)):
                return None
            has_type = False
        else:
            return None

        if has_type:
            kind = FragmentKind.METHOD
        elif name == owner_simple:
            kind = FragmentKind.CONSTRUCTOR
        else:
            return None

        arity, varargs = self.params(p, j)
        decl = self.decl_start(n)
        return {
            "name": name,
            "arity": arity,
            "varargs": varargs,
            "kind": kind,
            "decl_index": decl,
        }

    def params(self, lo: int, hi: int) -> tuple[int, bool]:
        """Arity and varargs flag for the parameter list between tokens lo..hi (the parens)."""
        if hi == lo + 1:
            return 0, False
        commas = self._top_level_commas(lo, hi, angles=True)
        if commas is None:
            commas = self._top_level_commas(lo, hi, angles=False)
        last = commas[-1] if commas else lo
        varargs = any(self.t(i) == b"..." for i in range(last + 1, hi))
        return len(commas) + 1, varargs

    def _top_level_commas(self, lo: int, hi: int, angles: bool) -> Optional[list[int]]:
        depth = 0
        out = []
        for i in range(lo + 1, hi):
            tx = self.t(i)
            if tx in (b"(", b"[", b"{") or (angles and tx == b"<"):
                depth += 1
            elif tx in (b")", b"]", b"}") or (angles and tx == b">"):
                depth -= 1
                if depth < 0:
                    return None
            elif tx == b"," and depth == 0:
                out.append(i)
        if depth != 0:
            return None
        return out

    def decl_start(self, name_idx: int) -> int:
        depth = 0
        i = name_idx - 1
        while i >= 0:
            tx = self.t(i)
            if tx == b")":
                depth += 1
            elif tx == b"(":
                depth -= 1
            elif depth == 0 and tx in BOUNDARY:
                break
            i -= 1
        return i + 1

    def doc_span(self, boundary_end: int, decl_pos: int) -> Optional[Span]:
        content = self.content
        cands = [c for c in self.comments if c.start >= boundary_end and c.end <= decl_pos]
        if not cands:
            return None
        last = cands[-1]

        def gap_ok(a: int, b: int, newlines_max: int) -> bool:
            gap = content[a:b]
            return gap.strip() == b"" and gap.count(b"\n") <= newlines_max

        def first_on_line(c: Token) -> bool:
            line_start = content.rfind(b"\n", 0, c.start) + 1
            return content[line_start : c.start].strip() == b""

        if not gap_ok(last.end, decl_pos, 1):
            return None
        if last.kind == BLOCK_COMMENT:
            if last.text.startswith(b"/**") and last.text != b"/**/":
                return (last.start, last.end)
            return None
        if last.kind == LINE_COMMENT and first_on_line(last):
            start = last.start
            idx = len(cands) - 1
            while idx > 0:
                prev = cands[idx - 1]
                if prev.kind != LINE_COMMENT or not first_on_line(prev):
                    break
                if content[prev.end : start].count(b"\n") != 1:
                    break
                start = prev.start
                idx -= 1
            return (start, last.end)
        return None

    # main loop ------------------------------------------------------------

    def parse(self) -> list[MethodFragment]:
        self.check_balance()
        stack: list[_Scope] = [_Scope("file")]
        raw: list[dict] = []
        for k, tok in enumerate(self.toks):
            tx = tok.text
            if tok.kind != PUNCT:
                continue
            top = stack[-1]
            if tx == b";":
                if top.kind == "type" and top.is_enum:
                    top.in_constants = False
                continue
            if tx == b"}":
                done = stack.pop()
                if done.fragment is not None:
                    done.fragment["close"] = tok.end
                    raw.append(done.fragment)
                continue
            if tx != b"{":
                continue
            enclosing = next((s for s in reversed(stack) if s.kind == "type"), None)
            parent_chain = enclosing.chain if enclosing else ()

            name = self.named_type(k)
            if name is not None:
                kw = self._type_keyword(k)
                stack.append(_Scope("type", parent_chain + (name,), is_enum=kw == b"enum", in_constants=kw == b"enum"))
                continue
            const = self.enum_constant(k, top)
            if const is not None:
                stack.append(_Scope("type", parent_chain + (const,)))
                continue
            if self.is_anonymous(k):
                host = enclosing if enclosing is not None else top
                host.anon_count += 1
                stack.append(_Scope("type", parent_chain + (f"${host.anon_count}",)))
                continue
            if top.kind == "type":
                info = self.method_at(k, top)
                if info is not None:
                    info["owner"] = ".".join(top.chain)
                    info["open"] = tok.start
                    info["sig_end"] = tok.start
                    stack.append(_Scope("method", fragment=info))
                    continue
            stack.append(_Scope("block"))
        return self._build(raw)

    def _type_keyword(self, k: int) -> bytes:
        i = k - 1
        while i >= 0:
            tx = self.t(i)
            if tx == b")":
                i = (self.back_match(i, b"(", b")") or 0) - 1
                continue
            if self.toks[i].kind == IDENT and self.t(i - 1) != b"." and (tx in TYPE_KEYWORDS or tx == b"record"):
                return tx
            i -= 1
        return b""

    def _build(self, raw: list[dict]) -> list[MethodFragment]:
        content = self.content
        raw.sort(key=lambda r: r["open"])
        seen: dict[str, int] = {}
        frags = []
        for r in raw:
            d = r["decl_index"]
            decl_pos = self.toks[d].start
            boundary_end = self.toks[d - 1].end if d > 0 else 0
            doc = self.doc_span(boundary_end, decl_pos)
            start = doc[0] if doc else decl_pos
            base = f"{self.rel}#{r['owner']}.{r['name']}/{r['arity']}"
            seen[base] = seen.get(base, 0) + 1
            fid = base if seen[base] == 1 else f"{base}~{seen[base]}"
            frags.append(
                MethodFragment(
                    id=fid,
                    path=self.rel,
                    owner=r["owner"],
                    name=r["name"],
                    arity=r["arity"],
                    kind=r["kind"],
                    signature_text=content[decl_pos : r["sig_end"]].rstrip(),
                    doc_span=doc,
                    body_span=(r["open"], r["close"]),
                    full_span=(start, r["close"]),
                    varargs=r["varargs"],
                )
            )
        frags.sort(key=lambda f: (f.full_span[0], -f.full_span[1]))
        return frags


def _build_segments(content: bytes, lo: int, hi: int, frags: list[MethodFragment]) -> tuple[Segment, ...]:
    segs: list[Segment] = []
    pos = lo
    i = 0
    while i < len(frags):
        f = frags[i]
        s, e = f.full_span
        inner = []
        j = i + 1
        while j < len(frags) and frags[j].full_span[1] <= e:
            inner.append(frags[j])
            j += 1
        if s > pos:
            segs.append(Literal(content[pos:s]))
        segs.append(FragmentRef(f.id, f.full_span, _build_segments(content, s, e, inner)))
        pos = e
        i = j
    if hi > pos or not segs:
        segs.append(Literal(content[pos:hi]))
    return tuple(segs)


def extract_fragments(file: SourceFile) -> tuple[list[MethodFragment], FileSkeleton]:
    """Decompose ``file`` into method/constructor fragments and a covering skeleton.

    Raises :class:`UnbalancedBraces` when brace depth is not net zero once
    literals and comments are ignored.
    """
    parser = _Parser(file.rel, file.content)
    frags = parser.parse()
    skeleton = FileSkeleton(file.rel, _build_segments(file.content, 0, len(file.content), frags))
    return frags, skeleton


def splice(skeleton: FileSkeleton, replacements: dict[str, bytes]) -> bytes:
    known = set(skeleton.fragment_ids())
    for key in replacements:
        if key not in known:
            raise UnknownFragmentId(key)
    out: list[bytes] = []

    def render(segs: Iterable[Segment]) -> None:
        for seg in segs:
            if isinstance(seg, Literal):
                out.append(seg.data)
            elif seg.id in replacements:
                out.append(replacements[seg.id])
            else:
                render(seg.parts)

    render(skeleton.segments)
    return b"".join(out)


def accounting_text(frag: MethodFragment, content: bytes, fragments: Iterable[MethodFragment]) -> bytes:
    """Fragment bytes with any lexically nested fragments cut out."""
    s, e = frag.full_span
    holes = sorted(f.full_span for f in fragments if frag.contains(f))
    pieces = []
    pos = s
    for hs, he in holes:
        if hs >= pos:
            pieces.append(content[pos:hs])
            pos = he
        elif he > pos:
            pos = he
    pieces.append(content[pos:e])
    return b"".join(pieces)


def body_text(frag: MethodFragment, content: bytes, fragments: Iterable[MethodFragment]) -> tuple[bytes, int]:
    """Body bytes (nested fragments blanked out) and the body's start offset.

    Nested fragments are replaced by spaces so offsets stay aligned.
    """
    s, e = frag.body_span
    buf = bytearray(content[s:e])
    for f in fragments:
        if frag.contains(f):
            hs, he = max(f.full_span[0], s), min(f.full_span[1], e)
            if hs < he:
                buf[hs - s : he - s] = b" " * (he - hs)
    return bytes(buf), s


@dataclass
class Decomposition:
    """Fragments and skeletons for a set of files, plus files that failed to parse."""

    files: list[SourceFile]
    fragments: list[MethodFragment] = field(default_factory=list)
    skeletons: dict[str, FileSkeleton] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def skipped_files(self) -> int:
        return len(self.diagnostics)

    @property
    def parsed_files(self) -> list[SourceFile]:
        return [f for f in self.files if f.rel in self.skeletons]

    def file(self, rel: str) -> SourceFile:
        return self._by_rel[rel]

    def by_id(self) -> dict[str, MethodFragment]:
        return {f.id: f for f in self.fragments}

    def fragments_of(self, rel: str) -> list[MethodFragment]:
        return [f for f in self.fragments if f.path == rel]

    def __post_init__(self) -> None:
        self._by_rel = {f.rel: f for f in self.files}


def decompose(files: list[SourceFile]) -> Decomposition:
    """Extract every file; unparsable ones are recorded, never silently dropped."""
    result = Decomposition(files=list(files))
    for sf in sorted(files, key=lambda f: f.rel):
        try:
            frags, skel = extract_fragments(sf)
        except UnbalancedBraces as exc:
            result.diagnostics.append(str(exc))
            continue
        result.fragments.extend(frags)
        result.skeletons[sf.rel] = skel
    return result


def with_token_counts(decomp: Decomposition, count) -> Decomposition:
    """Return fragments with ``token_count`` filled in using ``count(bytes) -> int``."""
    filled = []
    for rel in sorted(decomp.skeletons):
        content = decomp.file(rel).content
        frags = decomp.fragments_of(rel)
        for f in frags:
            filled.append(replace(f, token_count=count(accounting_text(f, content, frags))))
    out = Decomposition(files=decomp.files, fragments=filled, skeletons=decomp.skeletons, diagnostics=decomp.diagnostics)
    return out


def fragments_to_json(fragments: Iterable[MethodFragment]) -> str:
    return json.dumps([f.to_json() for f in fragments], indent=2) + "\n"
