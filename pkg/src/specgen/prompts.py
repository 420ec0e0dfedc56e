"""Generation tasks, task manifests, and the four-section YAML prompt."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from specgen import code_index, java, resource_text, yamlio
from specgen.code_index import SkeletonCorpus

log = logging.getLogger(__name__)

SECTION_KEYS = ("repository_context", "class_context", "target", "instruction")

# scheme name -> instruction resource; "doc-only" drops both context sections
SCHEMES = {
    "full": "instruction_v1.txt",
    "doc-only": "instruction_doc_only_v1.txt",
}
DEFAULT_TOP_M = 5


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class GenerationTask:
    task_id: str
    project: str
    class_fqn: str
    method_signature: str
    nl_doc: str
    source_path: str
    bug_id: str | None = None

    @property
    def method_name(self) -> str:
        return java.parse_signature(self.method_signature).name

    @property
    def bug_key(self) -> tuple[str, str]:
        return (self.project, self.bug_id or "")


def make_task_id(project: str, bug_id: str | None, class_fqn: str, method_signature: str) -> str:
    key = java.parse_signature(method_signature)
    digest = hashlib.sha1(
        f"{class_fqn}#{key.name}({','.join(java.normalize_type(t) for t in key.param_types)})".encode()
    ).hexdigest()[:6]
    simple = class_fqn.rsplit(".", 1)[-1]
    parts = [project] + ([str(bug_id)] if bug_id not in (None, "") else []) + [f"{simple}.{key.name}", digest]
    return "-".join(parts)


# --------------------------------------------------------------------------- manifests

_REQUIRED = ("project", "class_fqn", "method_signature", "source_path")


class TaskLoad(NamedTuple):
    tasks: list[GenerationTask]
    n_undocumented: int


def task_from_record(rec: dict) -> GenerationTask:
    bug_id = rec.get("bug_id")
    bug_id = None if bug_id in (None, "") else str(bug_id)
    return GenerationTask(
        task_id=rec.get("task_id") or make_task_id(rec["project"], bug_id, rec["class_fqn"], rec["method_signature"]),
        project=rec["project"],
        bug_id=bug_id,
        class_fqn=rec["class_fqn"],
        method_signature=rec["method_signature"],
        source_path=rec["source_path"],
        nl_doc=rec.get("doc") or "",
    )


def task_to_record(task: GenerationTask) -> dict:
    return {
        "task_id": task.task_id,
        "project": task.project,
        "bug_id": task.bug_id,
        "class_fqn": task.class_fqn,
        "method_signature": task.method_signature,
        "source_path": task.source_path,
        "doc": task.nl_doc,
    }


def load_tasks(path: str | Path) -> TaskLoad:
    """Read a line-delimited JSON manifest, one record per (bug, modified method).

    Records without documentation are dropped and counted.
    """
    tasks: list[GenerationTask] = []
    seen: set[str] = set()
    undocumented = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: {exc.msg}") from exc
            if not isinstance(rec, dict):
                raise ManifestError(f"{path}:{lineno}: record is not an object")
            missing = [k for k in _REQUIRED if not rec.get(k)]
            if missing:
                raise ManifestError(f"{path}:{lineno}: missing {', '.join(missing)}")
            try:
                task = task_from_record(rec)
            except ValueError as exc:
                raise ManifestError(f"{path}:{lineno}: {exc}") from exc
            if not task.nl_doc.strip():
                undocumented += 1
                continue
            if task.task_id in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate task id {task.task_id}")
            seen.add(task.task_id)
            tasks.append(task)
    if undocumented:
        log.info("%s: skipped %d undocumented methods", path, undocumented)
    return TaskLoad(tasks, undocumented)


def save_tasks(tasks: Iterable[GenerationTask], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for t in tasks:
            fh.write(json.dumps(task_to_record(t), sort_keys=True) + "\n")


class DerivedTasks(NamedTuple):
    tasks: list[GenerationTask]
    n_undocumented: int
    n_unsupported: int


def derive_tasks(
    fixed_root: str | Path,
    buggy_root: str | Path,
    project: str,
    bug_id: str | None,
    exclude: Sequence[str] = ("*Test.java", "*/test/*", "*/tests/*"),
) -> DerivedTasks:
    """Tasks for every method whose body differs between the fixed and buggy trees."""
    fixed_root, buggy_root = Path(fixed_root), Path(buggy_root)
    tasks, undocumented, unsupported = [], 0, 0
    for path in sorted(fixed_root.rglob("*.java")):
        rel = path.relative_to(fixed_root).as_posix()
        if code_index._matches(rel, exclude):
            continue
        other = buggy_root / rel
        if not other.is_file():
            continue
        fixed_src, buggy_src = path.read_bytes(), other.read_bytes()
        if fixed_src == buggy_src:
            continue
        try:
            fixed_sks = code_index.skeletons_from_source(fixed_src, rel)
            buggy_sks = {s.qualified_name: s for s in code_index.skeletons_from_source(buggy_src, rel)}
        except ValueError as exc:
            log.warning("cannot compare %s: %s", rel, exc)
            continue
        for sk in fixed_sks:
            old = buggy_sks.get(sk.qualified_name)
            if old is None:
                continue
            old_bodies = {_method_key(m): _body(m, buggy_src) for m in old.methods}
            for m in sk.methods:
                key = _method_key(m)
                if key not in old_bodies or old_bodies[key] == _body(m, fixed_src):
                    continue
                if m.is_constructor or m.body_span is None:
                    unsupported += 1
                    continue
                if not m.doc:
                    undocumented += 1
                    continue
                sig = " ".join(
                    [t for t in m.modifiers if not t.startswith("@")]
                    + ([m.type_params] if m.type_params else [])
                    + [m.return_type or ""]
                ) + f" {m.name}(" + ", ".join(f"{t} {n}" for t, n in m.params) + ")"
                if m.throws:
                    sig += " throws " + ", ".join(m.throws)
                sig = sig.strip()
                tasks.append(GenerationTask(
                    task_id=make_task_id(project, bug_id, sk.qualified_name, sig),
                    project=project,
                    bug_id=bug_id,
                    class_fqn=sk.qualified_name,
                    method_signature=sig,
                    source_path=rel,
                    nl_doc=java.doc_text(m.doc),
                ))
    return DerivedTasks(tasks, undocumented, unsupported)


def _method_key(m: code_index.MethodSig) -> tuple:
    return (m.name, tuple(java.normalize_type(t) for t, _ in m.params))


def _body(m: code_index.MethodSig, source: bytes) -> str:
    if m.body_span is None:
        return ""
    return java.squash(source[m.body_span[0]:m.body_span[1]].decode("utf-8", "replace"))


# --------------------------------------------------------------------------- prompts


def instruction_template(scheme: str = "full") -> str:
    try:
        name = SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown prompt scheme {scheme!r}; choose from {sorted(SCHEMES)}") from None
    return resource_text(name)


def template_hash(scheme: str = "full") -> str:
    return hashlib.sha256(instruction_template(scheme).encode("utf-8")).hexdigest()[:16]


@dataclass
class PromptDoc:
    repo_context: list[str]
    class_context: str
    target: dict[str, str]
    instruction: str
    scheme: str = "full"
    warnings: list[str] = field(default_factory=list)

    def as_mapping(self) -> dict:
        return {
            "repository_context": list(self.repo_context),
            "class_context": self.class_context,
            "target": dict(self.target),
            "instruction": self.instruction,
        }

    @property
    def serialized(self) -> str:
        return yamlio.dump(self.as_mapping())

    @property
    def template_hash(self) -> str:
        return hashlib.sha256(self.instruction.encode("utf-8")).hexdigest()[:16]


def build_prompt(
    task: GenerationTask,
    corpus: SkeletonCorpus,
    top_m: int = DEFAULT_TOP_M,
    char_budget: int = code_index.DEFAULT_CHAR_BUDGET,
    scheme: str = "full",
) -> PromptDoc:
    """Assemble repository context, class context, target and instruction, in that order."""
    instruction = instruction_template(scheme)
    target = {"signature": task.method_signature.strip(), "documentation": task.nl_doc}
    doc = PromptDoc([], "", target, instruction, scheme=scheme)
    if scheme == "doc-only":
        return doc

    owner = corpus.lookup(task.class_fqn)
    if owner is None:
        doc.warnings.append(f"class {task.class_fqn} not found in corpus")
        log.warning("%s: class %s not found in corpus", task.task_id, task.class_fqn)
    else:
        doc.class_context = code_index.render_skeleton(owner)
    query = code_index.build_query(task.class_fqn, task.method_signature, corpus)
    order = code_index.rank(corpus, query)
    if owner is not None:
        order = [i for i in order if corpus.skeletons[i].qualified_name != owner.qualified_name]
    for sk in code_index.truncate(corpus, order, top_m, char_budget):
        doc.repo_context.append(code_index.render_skeleton(sk))
    return doc


def prompt_messages(prompt: PromptDoc) -> list[dict[str, str]]:
    return [{"role": "user", "content": prompt.serialized}]


def read_prompt(path: str | Path) -> dict:
    data = yamlio.load(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or tuple(data) != SECTION_KEYS:
        raise ValueError(f"{path}: expected sections {SECTION_KEYS}")
    return data

