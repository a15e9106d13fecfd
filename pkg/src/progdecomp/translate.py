"""Bottom-up, budget-aware translation of a project through a pluggable backend.

Two modes are supported. ``whole_file`` sends every file as one input.
``method_decomposition`` sends one input per call-graph SCC, callees first, and
packs already-translated callees into the prompt as context while the token
budget allows.
"""

from __future__ import annotations

import json
import logging
import re
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from progdecomp.backend import Backend, BackendError, MalformedResponse
from progdecomp.callgraph import CallGraph, SccDag
from progdecomp.source_model import Decomposition, SourceFile, splice
from progdecomp.tokenizer import ContextBudget

log = logging.getLogger(__name__)

DEFAULT_TEMPLATE = (
    "Translate this {SOURCE_LANG} code to {TARGET_LANG}. Keep @@fragment lines.\n"
    "Dependencies:\n{CONTEXT}\n"
    "Code:\n{SOURCE}\n"
)

_HOLE = re.compile(rb"\{(SOURCE_LANG|TARGET_LANG|CONTEXT|SOURCE)\}")
_MARKER = re.compile(rb"@@fragment (\S+)@@")

_EXTENSIONS = {
    "python": ".py", "java": ".java", "c": ".c", "c++": ".cpp", "cpp": ".cpp", "c#": ".cs",
    "csharp": ".cs", "go": ".go", "rust": ".rs", "javascript": ".js", "typescript": ".ts",
    "kotlin": ".kt", "scala": ".scala", "ruby": ".rb", "swift": ".swift",
}
_HASH_COMMENT = {"python", "ruby", "shell", "bash", "perl", "r"}


class Mode(str, Enum):
    WHOLE_FILE = "whole_file"
    METHOD_DECOMPOSITION = "method_decomposition"


class Status(str, Enum):
    TRANSLATED = "translated"
    OUT_OF_CONTEXT = "out_of_context"
    BACKEND_ERROR = "backend_error"


class OutOfContext(Exception):
    def __init__(self, input_tokens: int, budget: ContextBudget) -> None:
        super().__init__(
            f"mandatory prompt needs {input_tokens} tokens + {budget.reserved_output} reserved "
            f"> window {budget.window}"
        )
        self.input_tokens = input_tokens


class TranslationAborted(Exception):
    pass


@dataclass(frozen=True)
class Template:
    text: bytes = DEFAULT_TEMPLATE.encode("utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Template":
        return cls(Path(path).read_bytes())

    def render(self, source_lang: str, target_lang: str, context: bytes, source: bytes) -> bytes:
        values = {
            b"SOURCE_LANG": source_lang.encode("utf-8"),
            b"TARGET_LANG": target_lang.encode("utf-8"),
            b"CONTEXT": context,
            b"SOURCE": source,
        }
        return _HOLE.sub(lambda m: values[m.group(1)], self.text)


@dataclass(frozen=True)
class Unit:
    """Something that can be translated: a fragment, or a whole file."""

    id: str
    path: str
    source: bytes
    signature: bytes


@dataclass
class TranslationPlan:
    batches: list[list[str]]
    mode: Mode
    source_lang: str = "java"
    target_lang: str = "python"


@dataclass
class PromptPacket:
    fragment_ids: list[str]
    instruction_text: bytes
    source_text: bytes
    dependency_context: list[tuple[str, str]]
    total_input_tokens: int
    budget: ContextBudget
    prompt: bytes = b""


@dataclass
class TranslationResult:
    id: str
    status: Status
    output_text: bytes
    input_tokens: int

    def __post_init__(self) -> None:
        if (self.status is Status.TRANSLATED) != bool(self.output_text):
            raise ValueError(f"{self.id}: translated status requires non-empty output")


@dataclass
class RunSummary:
    mode: Mode
    n_inputs: int
    n_out_of_context: int
    pct_context_occupied: float
    n_source_files: int = 0
    n_backend_errors: int = 0

    def to_json(self) -> dict:
        return {
            "n_inputs": self.n_inputs,
            "n_out_of_context": self.n_out_of_context,
            "pct_context_occupied": self.pct_context_occupied,
        }


@dataclass
class RunOutcome:
    results: list[TranslationResult]
    summary: RunSummary
    packets: list[PromptPacket] = field(default_factory=list)

    def __iter__(self):
        return iter((self.results, self.summary))


def units_for(decomp: Decomposition, mode: Mode) -> dict[str, Unit]:
    if mode is Mode.WHOLE_FILE:
        return {f.rel: Unit(f.rel, f.rel, f.content, f.rel.encode()) for f in decomp.files}
    units = {}
    for frag in decomp.fragments:
        content = decomp.file(frag.path).content
        units[frag.id] = Unit(frag.id, frag.path, frag.text(content), frag.signature_text)
    return units


def make_plan(
    mode: Union[Mode, str],
    dag: Optional[SccDag] = None,
    files: Optional[Sequence[Union[SourceFile, str]]] = None,
    source_lang: str = "java",
    target_lang: str = "python",
) -> TranslationPlan:
    mode = Mode(mode)
    if mode is Mode.WHOLE_FILE:
        if files is None:
            raise ValueError("whole_file mode needs the file list")
        rels = sorted(f.rel if isinstance(f, SourceFile) else str(f) for f in files)
        return TranslationPlan([[r] for r in rels], mode, source_lang, target_lang)
    if dag is None:
        raise ValueError("method_decomposition mode needs an SCC DAG")
    return TranslationPlan(dag.batches(), mode, source_lang, target_lang)


def default_reserved_output(window: int, source_counts: Sequence[int]) -> int:
    return min(window // 2, 2 * max(source_counts, default=0))


def batch_source(batch: Sequence[str], units: dict[str, Unit]) -> bytes:
    if len(batch) == 1:
        return units[batch[0]].source
    return b"".join(b"@@fragment " + i.encode() + b"@@\n" + units[i].source + b"\n" for i in batch)


def split_output(batch: Sequence[str], output: bytes) -> dict[str, bytes]:
    """Per-member outputs for a multi-member batch, separated by marker lines."""
    if len(batch) == 1:
        return {batch[0]: output}
    lines = output.split(b"\n")
    sections: dict[str, list[bytes]] = {}
    current = None
    for line in lines:
        m = _MARKER.search(line)
        if m:
            current = m.group(1).decode("utf-8", "replace")
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    if set(sections) != set(batch):
        raise MalformedResponse("batch output is missing fragment markers")
    out = {}
    for k, ls in sections.items():
        if ls and ls[-1] == b"":
            ls = ls[:-1]
        out[k] = b"\n".join(ls)
    return out


def _context_entry(fid: str, rep: str, text: bytes) -> bytes:
    return b"### " + fid.encode() + b" [" + rep.encode() + b"]\n" + text + b"\n"


def pack_prompt(
    batch: Sequence[str],
    completed: dict[str, TranslationResult],
    graph: Optional[CallGraph],
    budget: ContextBudget,
    template: Template,
    units: dict[str, Unit],
    count: Callable[[bytes], int],
    source_lang: str = "java",
    target_lang: str = "python",
) -> PromptPacket:
    """Fill the prompt with instruction + batch source, then as much callee context as fits.

    Raises :class:`OutOfContext` when instruction and source alone leave no
    room for the reserved output.
    """
    source = batch_source(batch, units)
    instruction = template.render(source_lang, target_lang, b"", b"")
    prompt = template.render(source_lang, target_lang, b"", source)
    total = count(prompt)
    limit = budget.window - budget.reserved_output
    if total > limit:
        raise OutOfContext(total, budget)

    members = set(batch)
    weight: dict[str, int] = defaultdict(int)
    if graph is not None:
        for (u, v), c in graph.edges.items():
            if u in members and v not in members:
                weight[v] += c
    candidates = sorted(weight, key=lambda v: (-weight[v], v))

    context: list[tuple[str, str]] = []
    parts: list[bytes] = []
    for dep in candidates:
        if dep not in completed:
            raise RuntimeError(f"callee {dep} of {batch} has no final status yet")
        options = []
        done = completed[dep]
        if done.status is Status.TRANSLATED:
            options.append(("translated_body", done.output_text))
        options.append(("signature_only", units[dep].signature))
        for rep, text in options:
            trial = template.render(source_lang, target_lang, b"".join(parts + [_context_entry(dep, rep, text)]), source)
            n = count(trial)
            if n <= limit:
                parts.append(_context_entry(dep, rep, text))
                context.append((dep, rep))
                prompt, total = trial, n
                break

    packet = PromptPacket(
        fragment_ids=list(batch),
        instruction_text=instruction,
        source_text=source,
        dependency_context=context,
        total_input_tokens=total,
        budget=budget,
        prompt=prompt,
    )
    assert packet.total_input_tokens + budget.reserved_output <= budget.window
    return packet


def _batch_levels(plan: TranslationPlan, graph: Optional[CallGraph]) -> list[int]:
    """Dependency depth per batch; batches at equal depth never call each other."""
    where = {i: b for b, batch in enumerate(plan.batches) for i in batch}
    levels: list[int] = []
    deps: dict[int, set[int]] = defaultdict(set)
    if graph is not None and plan.mode is Mode.METHOD_DECOMPOSITION:
        for u, v in graph.edges:
            bu, bv = where.get(u), where.get(v)
            if bu is not None and bv is not None and bu != bv:
                deps[bu].add(bv)
    for b in range(len(plan.batches)):
        if any(d >= b for d in deps[b]):
            raise ValueError("plan is not in bottom-up order")
        levels.append(1 + max((levels[d] for d in deps[b]), default=-1))
    return levels


def run_translation(
    plan: TranslationPlan,
    units: dict[str, Unit],
    graph: Optional[CallGraph],
    backend: Backend,
    count: Callable[[bytes], int],
    window: int = 2048,
    reserved_output: Optional[int] = None,
    template: Template = Template(),
    max_workers: int = 1,
    fail_fast: bool = False,
    n_source_files: Optional[int] = None,
) -> RunOutcome:
    """Execute the plan callees-first and summarise token usage.

    Batches at the same dependency depth are dispatched concurrently; prompts
    only read results of strictly shallower batches, so output does not
    depend on scheduling.
    """
    levels = _batch_levels(plan, graph)
    by_level: dict[int, list[int]] = defaultdict(list)
    for b, lvl in enumerate(levels):
        by_level[lvl].append(b)

    completed: dict[str, TranslationResult] = {}
    batch_status: dict[int, tuple[int, Status]] = {}
    packets: dict[int, PromptPacket] = {}

    def run_batch(b: int):
        batch = plan.batches[b]
        counts = [count(units[i].source) for i in batch]
        reserved = reserved_output if reserved_output is not None else default_reserved_output(window, counts)
        budget = ContextBudget(window=window, reserved_output=reserved)
        try:
            packet = pack_prompt(
                batch, completed, graph, budget, template, units, count, plan.source_lang, plan.target_lang
            )
        except OutOfContext as exc:
            log.info("out of context: %s (%d tokens)", batch, exc.input_tokens)
            return b, None, exc.input_tokens, None
        try:
            outputs = split_output(batch, backend.complete(packet))
            if not all(outputs.values()):
                raise MalformedResponse("empty translation")
        except BackendError as exc:
            if fail_fast:
                raise TranslationAborted(f"{batch}: {exc}") from exc
            log.warning("backend error for %s: %s", batch, exc)
            return b, packet, packet.total_input_tokens, exc
        return b, packet, packet.total_input_tokens, outputs

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        for lvl in sorted(by_level):
            for b, packet, tokens, outcome in list(pool.map(run_batch, by_level[lvl])):
                if packet is None:
                    status = Status.OUT_OF_CONTEXT
                elif isinstance(outcome, Exception):
                    status = Status.BACKEND_ERROR
                else:
                    status = Status.TRANSLATED
                if packet is not None:
                    packets[b] = packet
                batch_status[b] = (tokens, status)
                for i in plan.batches[b]:
                    text = outcome[i] if status is Status.TRANSLATED else b""
                    completed[i] = TranslationResult(i, status, text, tokens)

    n_inputs = len(plan.batches)
    statuses = [batch_status[b][1] for b in range(n_inputs)]
    results = [completed[i] for batch in plan.batches for i in batch]
    summary = RunSummary(
        mode=plan.mode,
        n_inputs=n_inputs,
        n_out_of_context=statuses.count(Status.OUT_OF_CONTEXT),
        pct_context_occupied=(
            sum(batch_status[b][0] * 100 / window for b in range(n_inputs)) / n_inputs if n_inputs else 0.0
        ),
        n_source_files=n_source_files if n_source_files is not None else len({u.path for u in units.values()}),
        n_backend_errors=statuses.count(Status.BACKEND_ERROR),
    )
    return RunOutcome(results=results, summary=summary, packets=[packets[b] for b in sorted(packets)])


def target_extension(lang: str) -> str:
    return _EXTENSIONS.get(lang.lower(), "." + re.sub(r"[^a-z0-9]+", "", lang.lower()) or ".txt")


def line_comment(lang: str) -> bytes:
    return b"#" if lang.lower() in _HASH_COMMENT else b"//"


def stub(status: Status, signature: bytes, lang: str) -> bytes:
    flat = b" ".join(signature.split())
    return line_comment(lang) + b" TRANSLATION-STUB (" + status.value.encode() + b"): " + flat + b"\n"


def assemble_outputs(
    outcome: RunOutcome,
    decomp: Decomposition,
    target_dir: Union[str, Path],
    target_lang: str = "python",
) -> dict:
    """Write translated files plus ``manifest.json`` under ``target_dir``; return the manifest."""
    target_dir = Path(target_dir)
    target_dir.mkdir(parents=True, exist_ok=True)
    results = {r.id: r for r in outcome.results}
    mode = outcome.summary.mode
    ext = target_extension(target_lang)
    c = line_comment(target_lang)
    inputs = []
    for sf in sorted(decomp.files, key=lambda f: f.rel):
        out_rel = str(Path(sf.rel).with_suffix(ext).as_posix())
        if mode is Mode.WHOLE_FILE:
            r = results.get(sf.rel)
            if r is None:
                continue
            data = r.output_text if r.status is Status.TRANSLATED else stub(r.status, sf.rel.encode(), target_lang)
            inputs.append({"id": r.id, "status": r.status.value, "input_tokens": r.input_tokens, "output_path": out_rel})
        else:
            skeleton = decomp.skeletons.get(sf.rel)
            if skeleton is None or not skeleton.fragment_ids():
                reason = b"no method fragments" if skeleton is not None else b"unparsable file"
                data = c + b" TRANSLATION-SCAFFOLD: " + reason + b"; copied verbatim from " + sf.rel.encode() + b"\n" + sf.content
            else:
                by_id = decomp.by_id()
                repl = {}
                for fid in skeleton.top_level_ids():
                    r = results.get(fid)
                    if r is None:
                        continue
                    if r.status is Status.TRANSLATED:
                        repl[fid] = r.output_text
                    else:
                        repl[fid] = stub(r.status, by_id[fid].signature_text, target_lang)
                data = splice(skeleton, repl)
                for fid in skeleton.fragment_ids():
                    r = results.get(fid)
                    if r is not None:
                        inputs.append(
                            {"id": fid, "status": r.status.value, "input_tokens": r.input_tokens, "output_path": out_rel}
                        )
        dest = target_dir / out_rel
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_bytes(data)
    inputs.sort(key=lambda e: e["id"])
    manifest = {"mode": mode.value, "inputs": inputs, "summary": outcome.summary.to_json()}
    (target_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest
