"""Per-project decomposition statistics and corpus-level report rendering."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Union

from progdecomp.source_model import accounting_text, decompose, scan_corpus
from progdecomp.tokenizer import ContextBudget, Counter, FallbackTokenizer


class EmptyCorpus(Exception):
    def __init__(self, project: str) -> None:
        super().__init__(f"{project}: no parsable source files")
        self.project = project


@dataclass(frozen=True)
class ProjectReport:
    project: str
    n_files: int
    skipped_files: int
    pct_files_over: float
    n_methods: int
    avg_tokens_per_method: float
    pct_methods_over: float
    pct_context: float
    window: int
    tokenizer_name: str
    tokenizer_hash: str


FIELDS = [f.name for f in fields(ProjectReport)]
NUMERIC_COLUMNS = ("pct_files_over", "n_methods", "avg_tokens_per_method", "pct_methods_over", "pct_context")


@dataclass
class CorpusSummary:
    rows: list[ProjectReport] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.rows = sorted(self.rows, key=lambda r: r.project)

    @property
    def averages(self) -> dict[str, float]:
        if not self.rows:
            return {}
        return {col: sum(getattr(r, col) for r in self.rows) / len(self.rows) for col in NUMERIC_COLUMNS}


def _pct(part: int, whole: int) -> float:
    return float(Fraction(100 * part, whole)) if whole else 0.0


def compute_project_report(
    project: Union[str, Path],
    budget: ContextBudget = ContextBudget(),
    model: Optional[Counter] = None,
    include_tests: bool = True,
    count: Optional[Callable[[bytes], int]] = None,
    max_workers: int = 1,
    name: Optional[str] = None,
) -> ProjectReport:
    """Token statistics for one project directory.

    ``count`` overrides ``model.count`` (used to route through a token cache).
    "Over" means strictly more tokens than the raw window.
    """
    model = model or FallbackTokenizer()
    count = count or model.count
    project = Path(project)
    files = scan_corpus(project, include_tests=include_tests)
    decomp = decompose(files)
    if not decomp.skeletons:
        raise EmptyCorpus(name or project.name)
    window = budget.window

    texts = [f.content for f in files]
    for rel in sorted(decomp.skeletons):
        content = decomp.file(rel).content
        frags = decomp.fragments_of(rel)
        texts.extend(accounting_text(f, content, frags) for f in frags)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            counts = list(pool.map(count, texts))
    else:
        counts = [count(t) for t in texts]
    file_counts, method_counts = counts[: len(files)], counts[len(files) :]

    n_methods = len(method_counts)
    total = sum(method_counts)
    avg = float(Fraction(total, n_methods)) if n_methods else 0.0
    return ProjectReport(
        project=name or project.name,
        n_files=len(files),
        skipped_files=decomp.skipped_files,
        pct_files_over=_pct(sum(c > window for c in file_counts), len(files)),
        n_methods=n_methods,
        avg_tokens_per_method=avg,
        pct_methods_over=_pct(sum(c > window for c in method_counts), n_methods),
        pct_context=avg * 100 / window,
        window=window,
        tokenizer_name=model.name,
        tokenizer_hash=model.hash,
    )


class DivisionByZero(ZeroDivisionError):
    pass


def reduction_ratio(before_pct: float, after_pct: float) -> float:
    """Percentage of the ``before`` rate eliminated by going to ``after``."""
    if before_pct == 0:
        raise DivisionByZero("before_pct must be positive")
    return (1 - after_pct / before_pct) * 100


def improvement_factor(before_pct_context: float, after_pct_context: float) -> float:
    if after_pct_context == 0:
        raise DivisionByZero("after_pct_context must be positive")
    return before_pct_context / after_pct_context


def _window_label(window: int) -> str:
    return f"{window // 1024}K" if window % 1024 == 0 else str(window)


def render_report(summary: CorpusSummary, fmt: str = "markdown") -> bytes:
    rows = summary.rows
    if fmt == "json":
        return (json.dumps([asdict(r) for r in rows], indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for r in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in asdict(r).values()])
        return buf.getvalue().encode("utf-8")
    if fmt != "markdown":
        raise ValueError(f"unknown report format: {fmt}")

    label = _window_label(rows[0].window) if rows else "2K"
    header = [
        "Project",
        f"% Files >{label} Tokens",
        "# Methods",
        "Avg. Tokens / Method",
        f"% Methods >{label} Tokens",
        f"% {label} Context",
    ]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r in rows:
        lines.append(
            f"| {r.project} | {r.pct_files_over:.2f}% | {r.n_methods} | {r.avg_tokens_per_method:.2f} "
            f"| {r.pct_methods_over:.2f}% | {r.pct_context:.2f}% |"
        )
    if rows:
        a = summary.averages
        lines.append(
            f"| **Average** | **{a['pct_files_over']:.2f}%** | **{a['n_methods']:.2f}** "
            f"| **{a['avg_tokens_per_method']:.2f}** | **{a['pct_methods_over']:.2f}%** | **{a['pct_context']:.2f}%** |"
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def summary_from_json(data: Union[bytes, str]) -> CorpusSummary:
    return CorpusSummary([ProjectReport(**row) for row in json.loads(data)])
