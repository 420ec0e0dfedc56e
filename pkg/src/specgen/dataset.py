"""Fine-tuning data: repository filtering, curation, review queue and SFT export."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from specgen import code_index, model_client, yamlio
from specgen.prompts import GenerationTask, task_from_record, task_to_record
from specgen.spec_io import ParseFailure, SpecCandidate, parse_model_output, serialize_spec

log = logging.getLogger(__name__)

TEST_EXCLUDE = ("*Test.java", "*Tests.java", "*/test/*", "*/tests/*", "test/*", "tests/*")
TEST_DIRS = {"test", "tests", "src/test"}
EXPORTABLE = {"passed", "approved"}

REASON_NO_TESTS = "no tests"
REASON_DOCS = "insufficient documentation"
REASON_BUILD = "build not clean"


@dataclass
class Thresholds:
    min_doc_coverage: float = 0.6
    require_tests: bool = True
    require_build: bool = True


@dataclass
class QualityReport:
    repo: str
    doc_coverage: float
    n_public: int
    n_documented: int
    has_tests: bool
    builds_clean: bool | None  # None: not probed
    accepted: bool
    reasons: list[str] = field(default_factory=list)


def _is_public(sk: code_index.ClassSkeleton, m: code_index.MethodSig) -> bool:
    if "private" in m.modifiers:
        return False
    return "public" in m.modifiers or sk.kind == "interface"


def _has_test_dir(root: Path) -> bool:
    for p in root.rglob("*"):
        if not p.is_dir():
            continue
        rel = p.relative_to(root).as_posix()
        if p.name in ("test", "tests") or rel in TEST_DIRS:
            if any(q.suffix == ".java" for q in p.rglob("*.java")):
                return True
    return any(root.rglob("*Test.java"))


def quality_filter(
    repo_root: str | Path,
    thresholds: Thresholds | None = None,
    build_probe: Callable[[Path], bool] | None = None,
    test_probe: Callable[[Path], bool] | None = None,
) -> QualityReport:
    """Accept a repository when its public API is documented, it has tests and it builds.

    ``test_probe`` (e.g. an adapter listing its tests) can only confirm tests
    the directory heuristic missed; without ``build_probe`` the build is not checked.
    """
    th = thresholds or Thresholds()
    root = Path(repo_root)
    corpus = code_index.extract_skeletons(root, exclude=TEST_EXCLUDE)
    public = [m for sk in corpus for m in sk.methods if _is_public(sk, m)]
    documented = sum(1 for m in public if m.doc)
    coverage = documented / len(public) if public else 0.0
    has_tests = _has_test_dir(root) or bool(test_probe and test_probe(root))
    builds = build_probe(root) if build_probe is not None else None

    reasons = []
    if coverage < th.min_doc_coverage:
        reasons.append(f"{REASON_DOCS}: {documented}/{len(public)} public methods documented "
                       f"({coverage:.2f} < {th.min_doc_coverage:.2f})")
    if th.require_tests and not has_tests:
        reasons.append(REASON_NO_TESTS)
    if th.require_build and builds is False:
        reasons.append(REASON_BUILD)
    return QualityReport(root.name, coverage, len(public), documented, has_tests, builds, not reasons, reasons)


# --------------------------------------------------------------------------- curation


@dataclass
class Curated:
    task: GenerationTask
    candidate: SpecCandidate | None
    flag: str | None = None  # generation or parse failure


def curate(
    task: GenerationTask,
    messages: list[dict],
    backend: model_client.Backend,
    raw_dir: str | Path | None = None,
) -> Curated:
    """One reasoning+spec sample for ``task``; failures are flagged, never raised."""
    try:
        sset = model_client.generate(backend, task.task_id, messages, n_samples=1, out_dir=raw_dir)
    except model_client.GenerationError as exc:
        log.warning("curation skipped %s: %s", task.task_id, exc)
        return Curated(task, None, f"generation: {exc}")
    parsed = parse_model_output(sset.outputs[0]).with_id(task.task_id, 0)
    if isinstance(parsed, ParseFailure):
        return Curated(task, None, f"parse: {parsed.reason}")
    return Curated(task, parsed)


# --------------------------------------------------------------------------- triples


@dataclass
class TrainingTriple:
    prompt: str
    reasoning: str
    postcondition: str
    repo: str
    method: str
    status: str  # passed | approved | failed | pending
    reviewer_note: str = ""
    task_id: str = ""

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.repo, self.method, self.task_id)


def triple_from(task: GenerationTask, prompt: str, cand: SpecCandidate, status: str, note: str = "") -> TrainingTriple:
    return TrainingTriple(
        prompt=prompt,
        reasoning=cand.reasoning,
        postcondition=serialize_spec(cand),
        repo=task.project,
        method=f"{task.class_fqn}#{task.method_signature}",
        status=status,
        reviewer_note=note,
        task_id=task.task_id,
    )


class UnvalidatedTriple(ValueError):
    pass


def completion_text(t: TrainingTriple, include_reasoning: bool) -> str:
    if include_reasoning:
        return f"<think>\n{t.reasoning}\n</think>\n{t.postcondition}"
    return t.postcondition


def export_sft(triples: Iterable[TrainingTriple], path: str | Path, include_reasoning: bool = True) -> int:
    """Write ``{prompt, completion, meta}`` lines sorted by (repo, method); returns the count."""
    triples = list(triples)
    for t in triples:
        if t.status not in EXPORTABLE:
            raise UnvalidatedTriple(f"refusing to export {t.task_id or t.method}: status {t.status!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for t in sorted(triples, key=lambda t: t.key):
            rec = {
                "prompt": t.prompt,
                "completion": completion_text(t, include_reasoning),
                "meta": {"repo": t.repo, "method": t.method, "task_id": t.task_id,
                         "status": t.status, "reviewer_note": t.reviewer_note},
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return len(triples)


def read_sft(path: str | Path) -> list[TrainingTriple]:
    out = []
    # split on "\n" only: records may hold U+2028 and similar raw characters
    for line in Path(path).read_text(encoding="utf-8").split("\n"):
        if not line.strip():
            continue
        rec = json.loads(line)
        completion, reasoning = rec["completion"], ""
        if completion.startswith("<think>\n"):
            head, _, completion = completion.partition("\n</think>\n")
            reasoning = head[len("<think>\n"):]
        meta = rec["meta"]
        out.append(TrainingTriple(rec["prompt"], reasoning, completion, meta["repo"], meta["method"],
                                  meta["status"], meta.get("reviewer_note", ""), meta.get("task_id", "")))
    return out


# --------------------------------------------------------------------------- review queue


def review_signature(reviewer: str, spec_text: str) -> str:
    """Approval signature tying a reviewer to the exact spec text they approved."""
    return hashlib.sha256(f"{reviewer}\n{spec_text}".encode("utf-8")).hexdigest()


def _spec_fields(c: SpecCandidate) -> dict:
    return {"import": "\n".join(c.imports), "pre-ghost": c.pre_ghost, "post-ghost": c.post_ghost,
            "condition": c.condition}


def build_review_queue(
    items: Sequence[tuple[GenerationTask, str, SpecCandidate, object]],
    queue_dir: str | Path,
) -> list[Path]:
    """One editable YAML file per failed candidate; ``items`` are (task, prompt, candidate, outcome)."""
    queue = Path(queue_dir)
    queue.mkdir(parents=True, exist_ok=True)
    written = []
    for task, prompt, cand, outcome in items:
        if outcome.semantic_ok and not outcome.harness_error:
            continue
        path = queue / f"{task.task_id}.{cand.sample}.yaml"
        doc = {
            "task": task_to_record(task),
            "sample": cand.sample,
            "prompt": prompt,
            "reasoning": cand.reasoning,
            "spec": _spec_fields(cand),
            "automated_testing": {
                "syntax_ok": outcome.syntax_ok,
                "semantic_ok": outcome.semantic_ok,
                "harness_error": outcome.harness_error,
                "failing_tests": outcome.failing_tests,
                "logs": outcome.logs,
            },
            "expert_refinement": {"approved": False, "reviewer": "", "note": "", "signature": ""},
        }
        path.write_text(yamlio.dump(doc), encoding="utf-8")
        written.append(path)
    return written


@dataclass
class ReviewEntry:
    path: Path
    task: GenerationTask
    prompt: str
    candidate: SpecCandidate
    approved: bool
    reviewer: str
    note: str
    signature_ok: bool

    def triple(self) -> TrainingTriple:
        status = "approved" if self.approved and self.signature_ok else "pending"
        return triple_from(self.task, self.prompt, self.candidate, status, self.note)


def load_review(path: str | Path) -> ReviewEntry:
    path = Path(path)
    doc = yamlio.load(path.read_text(encoding="utf-8"))
    spec = doc["spec"]
    imports = tuple(ln.strip() for ln in str(spec.get("import") or "").splitlines() if ln.strip())
    task = task_from_record(doc["task"])
    cand = SpecCandidate(imports, str(spec.get("pre-ghost") or ""), str(spec.get("post-ghost") or ""),
                         str(spec["condition"]), str(doc.get("reasoning") or ""), "", task.task_id,
                         int(doc.get("sample", 0)))
    rev = doc.get("expert_refinement") or {}
    reviewer = str(rev.get("reviewer") or "")
    approved = bool(rev.get("approved"))
    sig_ok = bool(reviewer) and rev.get("signature") == review_signature(reviewer, serialize_spec(cand))
    if approved and not sig_ok:
        log.warning("%s: approval ignored, signature does not match reviewer and spec", path.name)
    return ReviewEntry(path, task, str(doc.get("prompt") or ""), cand, approved, reviewer,
                       str(rev.get("note") or ""), sig_ok)


def sign_review(path: str | Path, reviewer: str, note: str = "") -> ReviewEntry:
    """Mark a queue file approved by ``reviewer`` for its current spec text."""
    path = Path(path)
    doc = yamlio.load(path.read_text(encoding="utf-8"))
    entry = load_review(path)
    doc["expert_refinement"] = {
        "approved": True,
        "reviewer": reviewer,
        "note": note,
        "signature": review_signature(reviewer, serialize_spec(entry.candidate)),
    }
    path.write_text(yamlio.dump(doc), encoding="utf-8")
    return load_review(path)


def load_queue(queue_dir: str | Path) -> list[ReviewEntry]:
    queue = Path(queue_dir)
    if not queue.is_dir():
        return []
    return [load_review(p) for p in sorted(queue.glob("*.yaml"))]
