"""Name/arity call graph over method fragments and its SCC condensation.

Call sites are resolved without type information. Candidates are looked up
by name and arity in widening tiers (same owner type, same file, same
directory, whole corpus) and the first non-empty tier wins, with an edge to
every candidate in it.
"""

from __future__ import annotations

import heapq
import json
import posixpath
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from progdecomp.lexer import IDENT, tokenize
from progdecomp.source_model import FragmentKind, MethodFragment, SourceFile, body_text

NOT_CALLS = frozenset(
    b"if for while switch catch synchronized try return new super this else do "
    b"throw assert case yield record class interface enum".split()
)


class CallSite(NamedTuple):
    kind: str  # "method" | "new" | "this" | "super"
    name: str
    arity: int


class Unresolved(NamedTuple):
    caller: str
    name: str
    arity: int


@dataclass
class CallGraph:
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    unresolved: list[Unresolved] = field(default_factory=list)

    def callees(self, node: str) -> list[str]:
        return sorted(v for (u, v) in self.edges if u == node)

    def successors(self) -> dict[str, list[str]]:
        succ: dict[str, list[str]] = {n: [] for n in self.nodes}
        for u, v in sorted(self.edges):
            succ[u].append(v)
        return succ

    def to_json(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "edges": [{"from": u, "to": v, "count": c} for (u, v), c in sorted(self.edges.items())],
            "unresolved": [{"from": u.caller, "name": u.name, "arity": u.arity} for u in sorted(self.unresolved)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CallGraph":
        return cls(
            nodes=set(data["nodes"]),
            edges={(e["from"], e["to"]): int(e["count"]) for e in data["edges"]},
            unresolved=[Unresolved(u["from"], u["name"], int(u["arity"])) for u in data["unresolved"]],
        )


def _arity(toks, open_idx: int) -> tuple[int, int]:
    """(arity, index of matching close paren) for the argument list opening at ``open_idx``."""
    depth = 0
    commas = 0
    for i in range(open_idx, len(toks)):
        tx = toks[i].text
        if tx in (b"(", b"[", b"{"):
            depth += 1
        elif tx in (b")", b"]", b"}"):
            depth -= 1
            if depth == 0:
                return (0 if i == open_idx + 1 else commas + 1), i
        elif tx == b"," and depth == 1:
            commas += 1
    return (0 if open_idx + 1 >= len(toks) else commas + 1), len(toks)


def _skip_generic(toks, i: int) -> int:
    """Index just past a ``<...>`` group starting at ``i`` (or ``i`` if none)."""
    if i >= len(toks) or toks[i].text != b"<":
        return i
    depth = 0
    for j in range(i, len(toks)):
        tx = toks[j].text
        if tx == b"<":
            depth += 1
        elif tx == b">":
            depth -= 1
            if depth == 0:
                return j + 1
        elif tx in (b";", b"{", b"}", b"("):
            return i
    return i


def scan_call_sites(body: bytes) -> list[CallSite]:
    """Call-shaped occurrences in ``body``; literals and comments are ignored by the lexer."""
    toks, _ = tokenize(body)
    sites: list[CallSite] = []
    consumed: set[int] = set()
    n = len(toks)
    for i, tok in enumerate(toks):
        if tok.kind != IDENT or i in consumed:
            continue
        tx = tok.text
        prev = toks[i - 1].text if i > 0 else b""
        if tx == b"new":
            j = i + 1
            last = None
            while j < n and toks[j].kind == IDENT:
                last = j
                consumed.add(j)
                j = _skip_generic(toks, j + 1)
                if j < n and toks[j].text == b".":
                    j += 1
                    continue
                break
            if last is not None and j < n and toks[j].text == b"(":
                arity, _ = _arity(toks, j)
                sites.append(CallSite("new", toks[last].text.decode("utf-8", "replace"), arity))
            continue
        if i + 1 >= n or toks[i + 1].text != b"(":
            continue
        if prev == b"@":
            continue
        if tx in (b"this", b"super"):
            if prev != b".":
                arity, _ = _arity(toks, i + 1)
                sites.append(CallSite(tx.decode(), tx.decode(), arity))
            continue
        if tx in NOT_CALLS:
            continue
        arity, _ = _arity(toks, i + 1)
        sites.append(CallSite("method", tx.decode("utf-8", "replace"), arity))
    return sites


def _arity_ok(frag: MethodFragment, arity: int) -> bool:
    if frag.arity == arity:
        return True
    return frag.varargs and arity >= frag.arity - 1


def _tiers(caller: MethodFragment):
    caller_dir = posixpath.dirname(caller.path)
    yield lambda f: f.path == caller.path and f.owner == caller.owner
    yield lambda f: f.path == caller.path
    yield lambda f: posixpath.dirname(f.path) == caller_dir
    yield lambda f: True


def resolve(caller: MethodFragment, site: CallSite, by_name: dict, ctors: list[MethodFragment]) -> list[MethodFragment]:
    if site.kind == "method":
        pool = [f for f in by_name.get(site.name, ()) if f.kind is FragmentKind.METHOD]
    elif site.kind == "new":
        pool = [f for f in by_name.get(site.name, ()) if f.kind is FragmentKind.CONSTRUCTOR]
    elif site.kind == "this":
        pool = [f for f in ctors if f.path == caller.path and f.owner == caller.owner]
    else:  # super: any owner but the caller's own
        pool = [f for f in ctors if not (f.path == caller.path and f.owner == caller.owner)]
    pool = [f for f in pool if _arity_ok(f, site.arity)]
    if not pool:
        return []
    for tier in _tiers(caller):
        hit = [f for f in pool if tier(f)]
        if hit:
            return hit
    return []


def build_call_graph(fragments: Iterable[MethodFragment], files: Iterable[SourceFile]) -> CallGraph:
    frags = sorted(fragments, key=lambda f: f.id)
    content = {f.rel: f.content for f in files}
    per_file: dict[str, list[MethodFragment]] = defaultdict(list)
    by_name: dict[str, list[MethodFragment]] = defaultdict(list)
    for f in frags:
        per_file[f.path].append(f)
        by_name[f.name].append(f)
    ctors = [f for f in frags if f.kind is FragmentKind.CONSTRUCTOR]

    graph = CallGraph(nodes={f.id for f in frags})
    for caller in frags:
        body, _ = body_text(caller, content[caller.path], per_file[caller.path])
        for site in scan_call_sites(body):
            if site.kind in ("this", "super"):
                name = caller.simple_owner if site.kind == "this" else "super"
            else:
                name = site.name
            targets = resolve(caller, site, by_name, ctors)
            if not targets:
                graph.unresolved.append(Unresolved(caller.id, name, site.arity))
                continue
            for t in targets:
                key = (caller.id, t.id)
                graph.edges[key] = graph.edges.get(key, 0) + 1
    graph.unresolved.sort()
    return graph


# ---------------------------------------------------------------------------
# condensation


@dataclass
class SccDag:
    components: list[frozenset[str]]
    order: list[int]
    component_of: dict[str, int]

    def batches(self) -> list[list[str]]:
        return [sorted(self.components[c]) for c in self.order]


def strongly_connected_components(nodes: Iterable[str], succ: dict[str, list[str]]) -> list[frozenset[str]]:
    """Iterative Tarjan."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[frozenset[str]] = []
    counter = 0
    for root in sorted(nodes):
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    return out


def condense(graph: CallGraph) -> SccDag:
    """SCCs ordered callees-first; ready components are taken smallest-id first."""
    succ = graph.successors()
    comps = sorted(strongly_connected_components(graph.nodes, succ), key=min)
    component_of = {n: ci for ci, comp in enumerate(comps) for n in comp}
    waiting_on: list[set[int]] = [set() for _ in comps]
    dependents: list[set[int]] = [set() for _ in comps]
    for u, v in graph.edges:
        cu, cv = component_of[u], component_of[v]
        if cu != cv:
            waiting_on[cu].add(cv)
            dependents[cv].add(cu)
    ready = [(min(comps[c]), c) for c in range(len(comps)) if not waiting_on[c]]
    heapq.heapify(ready)
    order = []
    while ready:
        _, c = heapq.heappop(ready)
        order.append(c)
        for d in sorted(dependents[c]):
            waiting_on[d].discard(c)
            if not waiting_on[d]:
                heapq.heappush(ready, (min(comps[d]), d))
    return SccDag(components=comps, order=order, component_of=component_of)


def waves(dag: SccDag, graph: CallGraph) -> dict[int, int]:
    """Component index -> dependency depth (0 = calls nothing outside itself)."""
    level: dict[int, int] = {}
    callee_comps: dict[int, set[int]] = defaultdict(set)
    for u, v in graph.edges:
        cu, cv = dag.component_of[u], dag.component_of[v]
        if cu != cv:
            callee_comps[cu].add(cv)
    for c in dag.order:
        level[c] = 1 + max((level[d] for d in callee_comps[c]), default=-1)
    return level


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(graph: CallGraph, fmt: str = "dot") -> bytes:
    if fmt == "json":
        return (json.dumps(graph.to_json(), indent=2) + "\n").encode("utf-8")
    if fmt != "dot":
        raise ValueError(f"unknown graph format: {fmt}")
    lines = ["digraph cg {"]
    for n in sorted(graph.nodes):
        lines.append(f"  {_dot_quote(n)};")
    for (u, v), c in sorted(graph.edges.items()):
        lines.append(f'  {_dot_quote(u)} -> {_dot_quote(v)} [label="{c}"];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def import_graph(data: bytes) -> CallGraph:
    return CallGraph.from_json(json.loads(data))
