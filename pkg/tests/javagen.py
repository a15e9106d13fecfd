"""Random Java-like class files with a record of the fragments they contain.

The generator is the oracle for extraction tests: every method/constructor
with a body that it writes is logged as (owner chain, name, arity, kind), so
tests can compare ``extract_fragments`` output against it without reusing any
parsing code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

TYPES = ["int", "long", "String", "boolean", "List<String>", "Map<String, Integer>", "int[]", "Object"]
PARAM_TYPES = TYPES + ["Map<K, List<V>>", "final int", "@Deprecated String", "Class<?>"]
NAMES = ["run", "compute", "apply", "visit", "merge", "parse", "emit", "load", "get", "put"]


@dataclass
class Expected:
    owner: str
    name: str
    arity: int
    kind: str
    varargs: bool = False


@dataclass
class _Gen:
    rng: random.Random
    out: list[str] = field(default_factory=list)
    expected: list[Expected] = field(default_factory=list)
    anon: dict = field(default_factory=dict)
    uid: int = 0

    def fresh(self, base: str) -> str:
        self.uid += 1
        return f"{base}{self.uid}"

    # literals that must stay opaque ----------------------------------------

    def noisy_string(self) -> str:
        return self.rng.choice(['"}"', '"{"', '"a { b } c"', '"\\"}"', '""', '"/* not a comment */"', '"// nor this"'])

    def noisy_comment(self) -> str:
        return self.rng.choice(["// stray } brace", "/* { unbalanced */", "/* } */", "// {{{"])

    # statements ---------------------------------------------------------------

    def statement(self, chain: tuple[str, ...], depth: int) -> str:
        r = self.rng.random()
        if r < 0.15:
            return f"String s{self.uid} = {self.noisy_string()};"
        if r < 0.25:
            return self.noisy_comment()
        if r < 0.32:
            return "char c = '}';"
        if r < 0.42:
            return f"if (x > {self.rng.randint(0, 9)}) {{ x = {self.rng.choice(NAMES)}(x, 1); }}"
        if r < 0.50:
            return "for (int i = 0; i < 3; i++) { x += i; }"
        if r < 0.58:
            return "Runnable r = () -> { helper(); };"
        if r < 0.62:
            return 'String tb = """\n    } text { block\n    """;'
        if r < 0.72 and depth < 2:
            return self.anonymous(chain, depth)
        if r < 0.78:
            return "synchronized (this) { x++; }"
        if r < 0.84:
            return "int[] arr = new int[] {1, 2, 3};"
        return f"x = {self.rng.choice(NAMES)}({', '.join('x' for _ in range(self.rng.randint(0, 3)))});"

    def anonymous(self, chain: tuple[str, ...], depth: int) -> str:
        self.anon[chain] = self.anon.get(chain, 0) + 1
        inner = chain + (f"${self.anon[chain]}",)
        body = self.method(inner, depth + 1, name="run", params=[], ret="void", mods="public")
        return f"Runnable a = new Runnable() {{\n{body}\n}};"

    # members ------------------------------------------------------------------

    def doc(self) -> str:
        r = self.rng.random()
        if r < 0.3:
            return "/** Documented { member }. */\n    "
        if r < 0.45:
            return "// first line\n    // second line\n    "
        return ""

    def method(self, chain, depth, name=None, params=None, ret=None, mods=None, ctor=False) -> str:
        rng = self.rng
        name = name or rng.choice(NAMES)
        if params is None:
            params = [f"{rng.choice(PARAM_TYPES)} p{i}" for i in range(rng.randint(0, 3))]
            if params and rng.random() < 0.2:
                params[-1] = f"int... rest"
        varargs = bool(params) and params[-1].startswith("int...")
        if mods is None:
            mods = rng.choice(["", "public", "private static", "protected final", "@Override public", "synchronized"])
        generic = "<T> " if rng.random() < 0.15 else ""
        throws = " throws IOException, IllegalStateException" if rng.random() < 0.2 else ""
        stmts = "\n        ".join(self.statement(chain, depth) for _ in range(rng.randint(0, 4)))
        if ctor:
            head = f"{mods} {generic}{name}({', '.join(params)}){throws}".strip()
        else:
            head = f"{mods} {generic}{ret or rng.choice(TYPES)} {name}({', '.join(params)}){throws}".strip()
        self.expected.append(
            Expected(".".join(chain), name, len(params), "constructor" if ctor else "method", varargs)
        )
        return f"    {self.doc()}{head} {{\n        {stmts}\n    }}"

    def type_decl(self, chain: tuple[str, ...], depth: int) -> str:
        rng = self.rng
        name = self.fresh("T")
        chain = chain + (name,)
        kind = rng.choice(["class", "class", "class", "interface", "enum", "abstract class"])
        members = []
        if kind == "enum":
            consts = []
            for _ in range(rng.randint(1, 3)):
                cname = self.fresh("C")
                if rng.random() < 0.4:
                    inner = self.method(chain + (cname,), depth, name="label", params=[], ret="String", mods="")
                    consts.append(f"{cname}(1) {{\n{inner}\n    }}")
                else:
                    consts.append(f"{cname}(2)")
            members.append("    " + ",\n    ".join(consts) + ";")
            members.append(self.method(chain, depth, name=name, params=["int v"], mods="", ctor=True))
        for _ in range(rng.randint(0, 5)):
            r = rng.random()
            if kind == "interface":
                if r < 0.5:
                    members.append(f"    int {rng.choice(NAMES)}(int a);")
                else:
                    members.append(self.method(chain, depth, mods="default"))
                continue
            if r < 0.45:
                members.append(self.method(chain, depth))
            elif r < 0.55 and kind != "enum":
                members.append(self.method(chain, depth, name=name, mods=rng.choice(["", "public"]), ctor=True))
            elif r < 0.62:
                members.append(f"    private String f{self.uid} = {self.noisy_string()};")
            elif r < 0.68:
                members.append("    static { init(); }")
            elif r < 0.72:
                members.append("    { count++; }")
            elif r < 0.76:
                members.append("    int[] table = {1, 2, 3};")
            elif r < 0.82 and kind == "abstract class":
                members.append(f"    abstract void {rng.choice(NAMES)}(int a);")
            elif r < 0.86:
                members.append(f"    native int {rng.choice(NAMES)}();")
            elif depth < 2:
                members.append(self.type_decl(chain, depth + 1))
            else:
                members.append("    " + self.noisy_comment())
        mods = "public " if depth == 0 else rng.choice(["", "static ", "private "])
        header = f"{mods}{kind} {name}" + ("<K, V>" if kind == "class" and rng.random() < 0.3 else "")
        return f"{header} {{\n" + "\n\n".join(members) + "\n}"


def generate(seed_or_rng) -> tuple[bytes, list[Expected]]:
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)
    g = _Gen(rng)
    parts = ["package gen.pkg;", "import java.util.*;"]
    for _ in range(rng.randint(1, 2)):
        parts.append(g.type_decl((), 0))
    text = "\n\n".join(parts) + "\n"
    return text.encode("utf-8"), g.expected
