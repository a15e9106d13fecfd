"""Command-line entry point: ``progdecomp analyze|decompose|graph|translate``.

Exit codes: 0 success, 1 I/O or format error, 2 empty corpus.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import sys
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from progdecomp.backend import HttpBackend, MockBackend
from progdecomp.callgraph import build_call_graph, condense, export_graph
from progdecomp.metrics import CorpusSummary, EmptyCorpus, compute_project_report, render_report
from progdecomp.source_model import decompose, scan_corpus, with_token_counts
from progdecomp.tokenizer import ContextBudget, FallbackTokenizer, TokenizerError, load_token_model
from progdecomp.translate import (
    Mode,
    Template,
    TranslationAborted,
    assemble_outputs,
    make_plan,
    run_translation,
    units_for,
)

log = logging.getLogger("progdecomp")

EXIT_OK, EXIT_ERROR, EXIT_EMPTY = 0, 1, 2


@dataclass
class RunConfig:
    corpus_root: Optional[Path] = None
    window: int = 2048
    reserved_output: Optional[int] = None
    tokenizer_path: Optional[Path] = None
    include_tests: Optional[bool] = None
    mode: str = Mode.METHOD_DECOMPOSITION.value
    backend: str = "mock"
    backend_url: Optional[str] = None
    model: Optional[str] = None
    api_key_env: str = "OPENAI_API_KEY"
    template_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    format: Optional[str] = None
    max_in_flight: int = 4
    rps_limit: Optional[float] = None
    retries: int = 3
    fail_fast: bool = False
    compare: bool = False
    cache_path: Optional[Path] = None
    verify_cache: bool = False
    source_lang: str = "java"
    target_lang: str = "python"
    mock_transform: str = "identity"

    def validate(self) -> None:
        if self.window <= 0:
            raise ValueError("window must be positive")
        if self.reserved_output is not None and not 0 <= self.reserved_output < self.window:
            raise ValueError("need window > reserved_output >= 0")
        if self.backend not in ("mock", "http"):
            raise ValueError(f"unknown backend: {self.backend}")
        if self.backend == "http" and not (self.backend_url and self.model):
            raise ValueError("http backend requires backend_url and model")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _coerce(name: str, raw: str):
    ftype = {f.name: f.type for f in dataclasses.fields(RunConfig)}[name]
    raw = raw.strip()
    if "bool" in ftype:
        if raw.lower() not in _BOOL:
            raise ValueError(f"{name}: expected a boolean, got {raw!r}")
        return _BOOL[raw.lower()]
    if "Path" in ftype:
        return Path(raw)
    if "float" in ftype:
        return float(raw)
    if "int" in ftype:
        return int(raw)
    return raw


def read_config_file(path: Path) -> dict:
    """``key = value`` lines; ``#`` starts a comment line."""
    known = {f.name for f in dataclasses.fields(RunConfig)}
    out = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


# ---------------------------------------------------------------------------
# token-count cache


class CacheMismatch(Exception):
    pass


class TokenCountCache:
    """On-disk map (tokenizer hash, content hash) -> token count, saved atomically."""

    def __init__(self, path: Optional[Path] = None) -> None:
        self.path = path
        self.entries: dict[str, int] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.verified = 0
        if path is not None and path.exists():
            data = json.loads(path.read_text(encoding="utf-8"))
            self.entries = {k: int(v) for k, v in data.get("entries", {}).items()}

    @staticmethod
    def key(tokenizer_hash: str, content: bytes) -> str:
        return f"{tokenizer_hash}:{hashlib.sha256(content).hexdigest()}"

    def counter(self, tokenizer, verify: bool = False) -> Callable[[bytes], int]:
        def count(content: bytes) -> int:
            key = self.key(tokenizer.hash, content)
            with self._lock:
                cached = self.entries.get(key)
                if cached is not None:
                    self.hits += 1
                    check = verify and (self.hits == 1 or int(key[-8:], 16) % 100 == 0)
            if cached is not None:
                if check:
                    fresh = tokenizer.count(content)
                    with self._lock:
                        self.verified += 1
                    if fresh != cached:
                        raise CacheMismatch(f"cached count {cached} != fresh count {fresh} for {key}")
                return cached
            n = tokenizer.count(content)
            with self._lock:
                self.entries[key] = n
            return n

        return count

    def save(self) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"version": 1, "entries": dict(sorted(self.entries.items()))}, indent=0)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, self.path)


# ---------------------------------------------------------------------------
# helpers


def discover_projects(root: Path) -> list[tuple[str, Path]]:
    """One project per immediate subdirectory, unless the root itself looks like a project."""
    looks_like_project = (
        any(p.suffix == ".java" and p.is_file() for p in root.iterdir())
        or (root / "src").is_dir()
        or (root / "pom.xml").exists()
        or (root / "build.gradle").exists()
    )
    if looks_like_project:
        return [(root.resolve().name, root)]
    subdirs = sorted(p for p in root.iterdir() if p.is_dir() and not p.name.startswith("."))
    if not subdirs:
        return [(root.resolve().name, root)]
    return [(p.name, p) for p in subdirs]


def _write(data: bytes, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(data)


class _Env:
    def __init__(self, cfg: RunConfig) -> None:
        self.cfg = cfg
        self.tokenizer = load_token_model(cfg.tokenizer_path) if cfg.tokenizer_path else FallbackTokenizer()
        self.cache = TokenCountCache(cfg.cache_path)
        self.count = self.cache.counter(self.tokenizer, verify=cfg.verify_cache)

    def close(self) -> None:
        self.cache.save()
        if self.cfg.verify_cache:
            log.info("cache: %d hits, %d verified", self.cache.hits, self.cache.verified)


def _include_tests(cfg: RunConfig, default: bool) -> bool:
    return default if cfg.include_tests is None else cfg.include_tests


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: RunConfig) -> int:
    env = _Env(cfg)
    budget = ContextBudget(window=cfg.window)
    include_tests = _include_tests(cfg, True)
    rows = []
    for name, path in discover_projects(cfg.corpus_root):
        try:
            rows.append(
                compute_project_report(
                    path, budget, env.tokenizer, include_tests, count=env.count, max_workers=cfg.max_in_flight, name=name
                )
            )
        except EmptyCorpus as exc:
            log.warning("%s", exc)
    env.close()
    if not rows:
        log.error("no parsable source files under %s", cfg.corpus_root)
        return EXIT_EMPTY
    for r in rows:
        if r.skipped_files:
            log.warning("%s: %d file(s) skipped as unparsable", r.project, r.skipped_files)
    fmt = cfg.format or "markdown"
    _write(render_report(CorpusSummary(rows), fmt), cfg.output_dir)
    if cfg.output_dir is not None:
        meta = {
            "tokenizer_name": env.tokenizer.name,
            "tokenizer_hash": env.tokenizer.hash,
            "window": cfg.window,
            "include_tests": include_tests,
            "fragments": "methods and constructors with bodies; leading doc comment included; nested fragments excluded",
        }
        meta_path = cfg.output_dir.with_name(cfg.output_dir.name + ".meta.json")
        meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_decompose(cfg: RunConfig) -> int:
    env = _Env(cfg)
    files = scan_corpus(cfg.corpus_root, include_tests=_include_tests(cfg, True))
    if not files:
        log.error("no source files under %s", cfg.corpus_root)
        return EXIT_EMPTY
    decomp = with_token_counts(decompose(files), env.count)
    env.close()
    for d in decomp.diagnostics:
        log.warning("skipped: %s", d)
    listing = {
        "files": [
            {"path": rel, "fragments": [f.to_json() for f in decomp.fragments_of(rel)]}
            for rel in sorted(decomp.skeletons)
        ],
        "diagnostics": decomp.diagnostics,
        "skipped_files": decomp.skipped_files,
    }
    if cfg.output_dir is None:
        _write((json.dumps(listing, indent=2) + "\n").encode(), None)
        return EXIT_OK
    for entry in listing["files"]:
        dest = cfg.output_dir / (entry["path"] + ".fragments.json")
        _write((json.dumps(entry["fragments"], indent=2) + "\n").encode(), dest)
    diag = {"diagnostics": decomp.diagnostics, "skipped_files": decomp.skipped_files}
    _write((json.dumps(diag, indent=2) + "\n").encode(), cfg.output_dir / "diagnostics.json")
    return EXIT_OK


def cmd_graph(cfg: RunConfig) -> int:
    files = scan_corpus(cfg.corpus_root, include_tests=_include_tests(cfg, True))
    decomp = decompose(files)
    if not decomp.skeletons:
        log.error("no parsable source files under %s", cfg.corpus_root)
        return EXIT_EMPTY
    graph = build_call_graph(decomp.fragments, decomp.parsed_files)
    dag = condense(graph)
    fmt = cfg.format or "dot"
    export = export_graph(graph, fmt)
    batches = dag.batches()
    if cfg.output_dir is None:
        _write(export, None)
        for i, batch in enumerate(batches):
            print(f"batch {i}: {' '.join(batch)}", file=sys.stderr)
    else:
        _write(export, cfg.output_dir / f"callgraph.{fmt}")
        _write((json.dumps(batches, indent=2) + "\n").encode(), cfg.output_dir / "batches.json")
    return EXIT_OK


_ROW_LABEL = {Mode.WHOLE_FILE: "No Decomposition", Mode.METHOD_DECOMPOSITION: "Method Decomposition"}


def render_run_table(summaries) -> str:
    lines = [
        "| Decomposition Technique | # Source Files | # Out-of-Context Inputs | % Context Occupied |",
        "|---|---|---|---|",
    ]
    for s in summaries:
        lines.append(f"| {_ROW_LABEL[s.mode]} | {s.n_source_files} | {s.n_out_of_context} | {s.pct_context_occupied:.2f}% |")
    return "\n".join(lines) + "\n"


def _backend(cfg: RunConfig):
    if cfg.backend == "mock":
        return MockBackend(cfg.mock_transform)
    return HttpBackend(
        cfg.backend_url,
        cfg.model,
        api_key_env=cfg.api_key_env,
        retries=cfg.retries,
        max_in_flight=cfg.max_in_flight,
        rps=cfg.rps_limit,
    )


def cmd_translate(cfg: RunConfig) -> int:
    env = _Env(cfg)
    files = scan_corpus(cfg.corpus_root, include_tests=_include_tests(cfg, False))
    decomp = decompose(files)
    if not decomp.skeletons:
        log.error("no parsable source files under %s", cfg.corpus_root)
        return EXIT_EMPTY
    for d in decomp.diagnostics:
        log.warning("skipped: %s", d)
    template = Template.load(cfg.template_path) if cfg.template_path else Template()
    backend = _backend(cfg)
    modes = [Mode.WHOLE_FILE, Mode.METHOD_DECOMPOSITION] if cfg.compare else [Mode(cfg.mode)]
    out_root = cfg.output_dir or Path("translated")
    summaries = []
    try:
        for mode in modes:
            if mode is Mode.WHOLE_FILE:
                graph = None
                plan = make_plan(mode, files=decomp.files, source_lang=cfg.source_lang, target_lang=cfg.target_lang)
            else:
                graph = build_call_graph(decomp.fragments, decomp.parsed_files)
                plan = make_plan(mode, dag=condense(graph), source_lang=cfg.source_lang, target_lang=cfg.target_lang)
            outcome = run_translation(
                plan,
                units_for(decomp, mode),
                graph,
                backend,
                env.count,
                window=cfg.window,
                reserved_output=cfg.reserved_output,
                template=template,
                max_workers=cfg.max_in_flight,
                fail_fast=cfg.fail_fast,
                n_source_files=len(decomp.files),
            )
            target = out_root / mode.value if cfg.compare else out_root
            assemble_outputs(outcome, decomp, target, cfg.target_lang)
            summaries.append(outcome.summary)
    except TranslationAborted as exc:
        log.error("aborted: %s", exc)
        return EXIT_ERROR
    finally:
        env.close()
    sys.stdout.write(render_run_table(summaries))
    sys.stdout.flush()
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "decompose": cmd_decompose, "graph": cmd_graph, "translate": cmd_translate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="progdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("corpus_root", type=Path, nargs="?")
        p.add_argument("--config", type=Path, help="key=value file; flags override it")
        p.add_argument("--window", type=int)
        p.add_argument("--reserved-output", type=int, dest="reserved_output")
        p.add_argument("--tokenizer", type=Path, dest="tokenizer_path", help="bpe-merges v1 file")
        p.add_argument("--include-tests", action=argparse.BooleanOptionalAction, dest="include_tests")
        p.add_argument("--format", choices=["markdown", "json", "csv", "dot"])
        p.add_argument("--out", type=Path, dest="output_dir")
        p.add_argument("--cache", type=Path, dest="cache_path")
        p.add_argument("--verify-cache", action="store_true", default=None, dest="verify_cache")
        p.add_argument("--max-in-flight", type=int, dest="max_in_flight")
        if name == "translate":
            p.add_argument("--mode", choices=[m.value for m in Mode])
            p.add_argument("--compare", action="store_true", default=None)
            p.add_argument("--backend", choices=["mock", "http"])
            p.add_argument("--backend-url", dest="backend_url")
            p.add_argument("--model")
            p.add_argument("--api-key-env", dest="api_key_env")
            p.add_argument("--template", type=Path, dest="template_path")
            p.add_argument("--rps", type=float, dest="rps_limit")
            p.add_argument("--retries", type=int)
            p.add_argument("--fail-fast", action="store_true", default=None, dest="fail_fast")
            p.add_argument("--source-lang", dest="source_lang")
            p.add_argument("--target-lang", dest="target_lang")
            p.add_argument("--mock-transform", choices=["identity", "prefix"], dest="mock_transform")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    known = {f.name for f in dataclasses.fields(RunConfig)}
    for key, value in vars(args).items():
        if key in known and value is not None:
            values[key] = value
    cfg = RunConfig(**values)
    if cfg.corpus_root is None:
        raise ValueError("corpus_root is required (argument or config file)")
    cfg.validate()
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if not cfg.corpus_root.is_dir():
            log.error("corpus root is not a directory: %s", cfg.corpus_root)
            return EXIT_ERROR
        if args.command == "graph" and cfg.format not in (None, "dot", "json"):
            raise ValueError("graph supports --format dot or json")
        if args.command == "analyze" and cfg.format == "dot":
            raise ValueError("analyze supports --format markdown, json or csv")
        return COMMANDS[args.command](cfg)
    except (ValueError, OSError, TokenizerError, CacheMismatch) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
