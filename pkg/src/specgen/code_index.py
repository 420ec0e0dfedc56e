"""Signature-only class skeletons for Java source trees, with lexical TF-IDF retrieval."""

from __future__ import annotations

import fnmatch
import json
import logging
import math
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from specgen import java

log = logging.getLogger(__name__)

CORPUS_MAGIC = "specgen-skeleton-corpus"
CORPUS_VERSION = 1
DEFAULT_CHAR_BUDGET = 12_000


@dataclass
class MethodSig:
    name: str
    modifiers: list[str] = field(default_factory=list)
    type_params: str = ""
    return_type: str | None = None  # None for constructors
    params: list[tuple[str, str]] = field(default_factory=list)
    throws: list[str] = field(default_factory=list)
    doc: str | None = None
    body_span: tuple[int, int] | None = None

    @property
    def is_constructor(self) -> bool:
        return self.return_type is None

    def signature(self) -> str:
        """Declaration header text without doc or body."""
        head = list(self.modifiers)
        if self.type_params:
            head.append(self.type_params)
        if self.return_type is not None:
            head.append(self.return_type)
        params = ", ".join(f"{t} {n}" for t, n in self.params)
        out = " ".join(head + [f"{self.name}({params})"])
        if self.throws:
            out += " throws " + ", ".join(self.throws)
        return out


@dataclass
class FieldSig:
    modifiers: list[str]
    type: str
    name: str
    doc: str | None = None


@dataclass
class ClassSkeleton:
    qualified_name: str
    kind: str  # class | interface | enum
    source_path: str
    modifiers: list[str] = field(default_factory=list)
    type_params: str = ""
    superclass: str | None = None
    interfaces: list[str] = field(default_factory=list)
    constants: list[str] = field(default_factory=list)
    fields: list[FieldSig] = field(default_factory=list)
    methods: list[MethodSig] = field(default_factory=list)
    doc: str | None = None

    @property
    def simple_name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]

    @property
    def supertypes(self) -> list[str]:
        return ([self.superclass] if self.superclass else []) + list(self.interfaces)

    def find_methods(self, name: str) -> list[MethodSig]:
        return [m for m in self.methods if m.name == name]

    @classmethod
    def from_dict(cls, d: dict) -> "ClassSkeleton":
        d = dict(d)
        d["fields"] = [FieldSig(**f) for f in d.get("fields", [])]
        methods = []
        for m in d.get("methods", []):
            m = dict(m)
            m["params"] = [tuple(p) for p in m.get("params", [])]
            if m.get("body_span") is not None:
                m["body_span"] = tuple(m["body_span"])
            methods.append(MethodSig(**m))
        d["methods"] = methods
        return cls(**d)


@dataclass
class BuildReport:
    root: str
    files_seen: int = 0
    files_parsed: int = 0
    skipped: list[tuple[str, str]] = field(default_factory=list)
    duplicates: list[tuple[str, str]] = field(default_factory=list)

    def render(self) -> str:
        lines = [
            f"root: {self.root}",
            f"files seen: {self.files_seen}",
            f"files parsed: {self.files_parsed}",
            f"files skipped: {len(self.skipped)}",
        ]
        lines += [f"WARN skipped {path}: {reason}" for path, reason in self.skipped]
        lines += [f"WARN duplicate {fqn} in {path} (kept first)" for fqn, path in self.duplicates]
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------- terms

_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_CAMEL = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")


def subtokens(text: str) -> list[str]:
    """Identifier subtokens: camelCase and snake_case pieces, lowercased.

    >>> subtokens("getLegendItems HTML_escape")
    ['get', 'legend', 'items', 'html', 'escape']
    """
    out = []
    for ident in _IDENT.findall(text):
        for part in re.split(r"[_$]+", ident):
            out.extend(p.lower() for p in _CAMEL.findall(part))
    return out


class SkeletonCorpus:
    """Immutable collection of skeletons plus an inverted TF-IDF index."""

    def __init__(self, skeletons: Iterable[ClassSkeleton], report: BuildReport | None = None):
        ordered = sorted(skeletons, key=lambda s: (s.source_path, s.qualified_name))
        self.report = report or BuildReport(root="")
        kept: list[ClassSkeleton] = []
        seen: set[str] = set()
        for s in ordered:
            if s.qualified_name in seen:
                self.report.duplicates.append((s.qualified_name, s.source_path))
                continue
            seen.add(s.qualified_name)
            kept.append(s)
        self.skeletons: tuple[ClassSkeleton, ...] = tuple(kept)
        self._by_name = {s.qualified_name: i for i, s in enumerate(self.skeletons)}
        self.rendered: tuple[str, ...] = tuple(render_skeleton(s) for s in self.skeletons)

        self.term_index: dict[str, list[tuple[int, int]]] = {}
        self.doc_freq: dict[str, int] = {}
        counts = [Counter(subtokens(r)) for r in self.rendered]
        for i, c in enumerate(counts):
            for term in sorted(c):
                self.term_index.setdefault(term, []).append((i, c[term]))
        for term, postings in self.term_index.items():
            self.doc_freq[term] = len(postings)
        self._weights = [self._weigh(c) for c in counts]
        self._norms = [math.sqrt(sum(w * w for w in v.values())) for v in self._weights]

    def __len__(self) -> int:
        return len(self.skeletons)

    def __iter__(self):
        return iter(self.skeletons)

    def __contains__(self, qualified_name: object) -> bool:
        return qualified_name in self._by_name

    def get(self, qualified_name: str) -> ClassSkeleton | None:
        i = self._by_name.get(qualified_name)
        return None if i is None else self.skeletons[i]

    def index_of(self, qualified_name: str) -> int:
        return self._by_name[qualified_name]

    def lookup(self, class_name: str) -> ClassSkeleton | None:
        """Find by FQN, falling back to a unique dotted-suffix match."""
        hit = self.get(class_name)
        if hit is not None:
            return hit
        matches = [s for s in self.skeletons if s.qualified_name.endswith("." + class_name)]
        return matches[0] if len(matches) == 1 else None

    def idf(self, term: str) -> float:
        n = len(self.skeletons)
        return math.log((1 + n) / (1 + self.doc_freq.get(term, 0))) + 1.0

    def _weigh(self, counts: Counter) -> dict[str, float]:
        return {t: tf * self.idf(t) for t, tf in counts.items()}

    def scores(self, query: str) -> list[float]:
        """Cosine similarity of the query against every skeleton, in corpus order."""
        q = self._weigh(Counter(t for t in subtokens(query) if t in self.doc_freq))
        qnorm = math.sqrt(sum(w * w for w in q.values()))
        dots = [0.0] * len(self.skeletons)
        if qnorm == 0:
            return dots
        for term, qw in q.items():
            idf = self.idf(term)
            for i, tf in self.term_index[term]:
                dots[i] += qw * tf * idf
        return [d / (qnorm * n) if n else 0.0 for d, n in zip(dots, self._norms)]

    # ------------------------------------------------------------------ cache

    def to_json(self) -> str:
        payload = {
            "magic": CORPUS_MAGIC,
            "version": CORPUS_VERSION,
            "report": asdict(self.report),
            "skeletons": [asdict(s) for s in self.skeletons],
        }
        return json.dumps(payload, indent=1, sort_keys=True)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SkeletonCorpus":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("magic") != CORPUS_MAGIC:
            raise ValueError(f"{path}: not a skeleton corpus file")
        if payload.get("version") != CORPUS_VERSION:
            raise ValueError(f"{path}: unsupported corpus version {payload.get('version')}")
        rep = payload["report"]
        report = BuildReport(
            root=rep["root"],
            files_seen=rep["files_seen"],
            files_parsed=rep["files_parsed"],
            skipped=[tuple(x) for x in rep["skipped"]],
        )
        return cls((ClassSkeleton.from_dict(d) for d in payload["skeletons"]), report)


# --------------------------------------------------------------------------- extraction


def skeletons_from_source(source: bytes, source_path: str) -> list[ClassSkeleton]:
    """Skeletons for every top-level and member type in one compilation unit.

    Raises ValueError when the file does not parse cleanly.
    """
    tree = java.parse(source)
    err = java.first_error(tree)
    if err is not None:
        line = err.start_point[0] + 1
        raise ValueError(f"syntax error near line {line}")
    out = []
    for decl in java.iter_type_decls(tree, source):
        out.append(_skeleton(decl, source, source_path))
    return out


def _skeleton(decl: java.TypeDecl, source: bytes, source_path: str) -> ClassSkeleton:
    node = decl.node
    doc, _ = java.doc_comment(node, source)
    sk = ClassSkeleton(
        qualified_name=decl.qualified_name,
        kind=decl.kind,
        source_path=source_path,
        modifiers=java.modifier_tokens(node, source),
        type_params=java.squash(java.text(node.child_by_field_name("type_parameters"), source)),
        doc=doc,
    )
    for child in node.named_children:
        if child.type == "superclass":
            sk.superclass = java.squash(java.text(child.named_children[-1], source))
        elif child.type in ("super_interfaces", "extends_interfaces"):
            type_list = child.named_children[-1]
            sk.interfaces = [java.squash(java.text(t, source)) for t in type_list.named_children]
    if node.type == "record_declaration":
        for ptype, pname in java.parameters(node, source):
            sk.fields.append(FieldSig(["private", "final"], ptype, pname))

    for member in java.member_nodes(node):
        mdoc, _ = java.doc_comment(member, source)
        if member.type == "enum_constant":
            sk.constants.append(java.declared_name(member, source))
        elif member.type in ("field_declaration", "constant_declaration"):
            mods = java.modifier_tokens(member, source)
            ftype = java.squash(java.text(member.child_by_field_name("type"), source))
            for d in member.children_by_field_name("declarator"):
                dims = java.text(d.child_by_field_name("dimensions"), source).replace(" ", "")
                sk.fields.append(FieldSig(mods, ftype + dims, java.declared_name(d, source), mdoc))
        elif member.type in ("method_declaration", "constructor_declaration", "compact_constructor_declaration",
                             "annotation_type_element_declaration"):
            sk.methods.append(_method_sig(member, source, mdoc))
    return sk


def _method_sig(node, source: bytes, doc: str | None) -> MethodSig:
    body = node.child_by_field_name("body")
    if node.type in ("constructor_declaration", "compact_constructor_declaration"):
        ret = None
    else:
        ret = java.squash(java.text(node.child_by_field_name("type"), source))
        dims = node.child_by_field_name("dimensions")
        if dims is not None:
            ret += java.text(dims, source).replace(" ", "")
    return MethodSig(
        name=java.declared_name(node, source),
        modifiers=java.modifier_tokens(node, source),
        type_params=java.squash(java.text(node.child_by_field_name("type_parameters"), source)),
        return_type=ret,
        params=java.parameters(node, source),
        throws=java.throws_types(node, source),
        doc=doc,
        body_span=(body.start_byte, body.end_byte) if body is not None else None,
    )


def _matches(rel: str, patterns: Sequence[str]) -> bool:
    return any(fnmatch.fnmatch(rel, p) for p in patterns)


def extract_skeletons(
    repo_root: str | Path,
    include: Sequence[str] = ("*.java",),
    exclude: Sequence[str] = (),
    jobs: int = 1,
) -> SkeletonCorpus:
    """Parse every matching Java file under ``repo_root`` into a corpus.

    Files that fail to read or parse are listed in the corpus report and skipped.
    """
    root = Path(repo_root)
    if not root.is_dir():
        raise NotADirectoryError(f"repository root not readable: {root}")
    files = sorted(
        p for p in root.rglob("*")
        if p.is_file() and _matches(p.relative_to(root).as_posix(), include)
        and not _matches(p.relative_to(root).as_posix(), exclude)
    )
    report = BuildReport(root=root.as_posix(), files_seen=len(files))

    def work(path: Path):
        rel = path.relative_to(root).as_posix()
        try:
            return rel, skeletons_from_source(path.read_bytes(), rel), None
        except (OSError, ValueError) as exc:
            return rel, [], str(exc)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, files))
    else:
        results = [work(p) for p in files]

    skeletons = []
    for rel, sks, err in results:
        if err is not None:
            log.warning("skipping %s: %s", rel, err)
            report.skipped.append((rel, err))
            continue
        report.files_parsed += 1
        skeletons.extend(sks)
    return SkeletonCorpus(skeletons, report)


# --------------------------------------------------------------------------- rendering

INDENT = "    "


def _format_doc(doc: str, indent: str) -> list[str]:
    lines = [ln.strip() for ln in doc.strip().splitlines()]
    out = [indent + lines[0]]
    for ln in lines[1:]:
        out.append(indent + (" " + ln if ln.startswith("*") else ln))
    return out


def _header(s: ClassSkeleton) -> str:
    head = " ".join(s.modifiers + [s.kind, s.simple_name + s.type_params])
    if s.kind == "interface":
        if s.interfaces:
            head += " extends " + ", ".join(s.interfaces)
    else:
        if s.superclass:
            head += " extends " + s.superclass
        if s.interfaces:
            head += " implements " + ", ".join(s.interfaces)
    return head + " {"


def render_skeleton(s: ClassSkeleton, include_docs: bool = True) -> str:
    """Class-like text with declarations and signatures only; bodies never appear."""
    lines: list[str] = []
    if include_docs and s.doc:
        lines += _format_doc(s.doc, "")
    lines.append(_header(s))
    if s.constants:
        lines.append(INDENT + ", ".join(s.constants) + ";")
    for f in s.fields:
        if include_docs and f.doc:
            lines += _format_doc(f.doc, INDENT)
        lines.append(INDENT + " ".join(f.modifiers + [f.type, f.name]) + ";")
    for m in s.methods:
        if include_docs and m.doc:
            lines += _format_doc(m.doc, INDENT)
        lines.append(INDENT + m.signature() + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------- retrieval


def build_query(class_fqn: str, method_signature: str, corpus: SkeletonCorpus) -> str:
    """Target method signature followed by its class's signature-only rendering."""
    owner = corpus.lookup(class_fqn)
    if owner is None:
        log.warning("class %s not in corpus; query uses the method signature only", class_fqn)
        return method_signature.strip()
    return method_signature.strip() + "\n" + render_skeleton(owner, include_docs=False)


def rank(corpus: SkeletonCorpus, query: str, pin: str | None = None) -> list[int]:
    """Corpus indices by descending cosine score, ties by qualified name; ``pin`` goes first."""
    scores = corpus.scores(query)
    order = sorted(range(len(corpus)), key=lambda i: (-scores[i], corpus.skeletons[i].qualified_name))
    if pin is not None:
        owner = corpus.lookup(pin)
        if owner is not None:
            idx = corpus.index_of(owner.qualified_name)
            order.remove(idx)
            order.insert(0, idx)
    return order


def truncate(corpus: SkeletonCorpus, order: Sequence[int], top_m: int, char_budget: int) -> list[ClassSkeleton]:
    """Keep the first ``top_m`` entries, then greedily those that fit the character budget."""
    out, used = [], 0
    for i in order[:top_m]:
        size = len(corpus.rendered[i])
        if used + size > char_budget:
            continue
        out.append(corpus.skeletons[i])
        used += size
    return out


def retrieve(
    corpus: SkeletonCorpus,
    query: str,
    top_m: int,
    char_budget: int = DEFAULT_CHAR_BUDGET,
    pin: str | None = None,
) -> list[ClassSkeleton]:
    if top_m < 0:
        raise ValueError("top_m must be >= 0")
    return truncate(corpus, rank(corpus, query, pin), top_m, char_budget)
