"""Parse raw model output into a reasoning trace plus the four-key postcondition."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import yaml

from specgen import yamlio

SPEC_KEYS = ("import", "pre-ghost", "post-ghost", "condition")

_KEY_ALIASES = {
    "import": "import",
    "imports": "import",
    "pre-ghost": "pre-ghost",
    "preghost": "pre-ghost",
    "post-ghost": "post-ghost",
    "postghost": "post-ghost",
    "condition": "condition",
    "postcondition": "condition",
}

_IMPORT = re.compile(r"import\s+(static\s+)?[A-Za-z_$][\w$]*(\s*\.\s*([A-Za-z_$][\w$]*|\*))*\s*;")
_BARE_NAME = re.compile(r"(static\s+)?[A-Za-z_$][\w$]*(\.([A-Za-z_$][\w$]*|\*))+")
_FENCE = re.compile(r"^[ \t]*```[ \t]*([A-Za-z0-9_-]*)[ \t]*\n(.*?)^[ \t]*```", re.S | re.M)
_THINK = re.compile(r"</?think>", re.I)
_KEY_LINE = re.compile(r"^(imports?|pre[-_]?ghost|post[-_]?ghost|(post)?condition)\s*:", re.I)
_COND_LINE = r"^(post)?condition\s*:"


@dataclass(frozen=True)
class SpecCandidate:
    imports: tuple[str, ...]
    pre_ghost: str
    post_ghost: str
    condition: str
    reasoning: str = ""
    raw: str = ""
    task_id: str = ""
    sample: int = 0

    @property
    def candidate_id(self) -> tuple[str, int]:
        return (self.task_id, self.sample)

    def components(self) -> tuple:
        """Everything the parser extracts; excludes raw text and identity."""
        return (self.imports, self.pre_ghost, self.post_ghost, self.condition, self.reasoning)

    def with_id(self, task_id: str, sample: int) -> "SpecCandidate":
        return SpecCandidate(self.imports, self.pre_ghost, self.post_ghost, self.condition,
                             self.reasoning, self.raw, task_id, sample)


@dataclass(frozen=True)
class ParseFailure:
    reason: str  # no-yaml-block | missing-condition | yaml-syntax | bad-import
    detail: str = ""
    raw: str = ""
    reasoning: str = ""
    task_id: str = ""
    sample: int = 0

    @property
    def candidate_id(self) -> tuple[str, int]:
        return (self.task_id, self.sample)

    def with_id(self, task_id: str, sample: int) -> "ParseFailure":
        return ParseFailure(self.reason, self.detail, self.raw, self.reasoning, task_id, sample)


def _strip_think(text: str) -> str:
    return _THINK.sub("", text).strip()


def _locate_unfenced(text: str) -> tuple[int, int] | None:
    """Character span of the last run of spec-key lines that contains ``condition``."""
    lines = text.splitlines(keepends=True)
    offsets, pos = [], 0
    for ln in lines:
        offsets.append(pos)
        pos += len(ln)
    cond_rows = [i for i, ln in enumerate(lines) if re.match(_COND_LINE, ln, re.I)]
    if not cond_rows:
        return None
    row = cond_rows[-1]

    def continues(i: int) -> bool:
        ln = lines[i]
        return not ln.strip() or ln[0] in " \t" or bool(_KEY_LINE.match(ln))

    start = row
    i = row - 1
    while i >= 0 and continues(i):
        if _KEY_LINE.match(lines[i]):
            start = i
        i -= 1
    end = row + 1
    while end < len(lines) and continues(end):
        end += 1
    while end > row + 1 and not lines[end - 1].strip():
        end -= 1
    return offsets[start], offsets[end - 1] + len(lines[end - 1])


def _locate_block(raw: str) -> tuple[str, int] | None:
    """The YAML answer text and the offset where it starts."""
    fences = [m for m in _FENCE.finditer(raw) if re.search(_COND_LINE, m.group(2), re.M | re.I)]
    base = fences[-1].end() if fences else 0
    # an unfenced answer after the last fenced one wins
    span = _locate_unfenced(raw[base:])
    if span is not None:
        return raw[base + span[0]:base + span[1]], base + span[0]
    if fences:
        return fences[-1].group(2), fences[-1].start()
    return None


def _as_block(value) -> str:
    if value is None:
        return ""
    if isinstance(value, list):
        return "\n".join(str(v).rstrip() for v in value if str(v).strip())
    return "\n".join(ln.rstrip() for ln in str(value).strip("\n").splitlines()).strip()


def _imports(value) -> list[str] | None:
    if value is None:
        return []
    items = value if isinstance(value, list) else str(value).splitlines()
    out = []
    for item in items:
        for stmt in str(item).replace(";", ";\n").splitlines():
            stmt = stmt.strip()
            if not stmt:
                continue
            if not stmt.startswith("import"):
                if not _BARE_NAME.fullmatch(stmt.rstrip(";")):
                    return None
                stmt = "import " + stmt.rstrip(";") + ";"
            stmt = " ".join(stmt.split())
            if not _IMPORT.fullmatch(stmt):
                return None
            out.append(stmt)
    return out


def parse_model_output(raw: str) -> SpecCandidate | ParseFailure:
    """Split ``raw`` into reasoning and a structured candidate; never raises."""
    try:
        return _parse(raw if isinstance(raw, str) else str(raw))
    except Exception as exc:  # parse must stay total
        return ParseFailure("yaml-syntax", f"unexpected: {exc!r}", raw=str(raw))


def _parse(raw: str) -> SpecCandidate | ParseFailure:
    found = _locate_block(raw)
    if found is None:
        return ParseFailure("no-yaml-block", "no block with a condition key", raw=raw,
                            reasoning=_strip_think(raw))
    block, start = found
    reasoning = _strip_think(raw[:start])
    try:
        data = yamlio.load_strings(block)
    except yaml.YAMLError as exc:
        return ParseFailure("yaml-syntax", str(exc).splitlines()[0], raw=raw, reasoning=reasoning)
    if not isinstance(data, dict):
        return ParseFailure("yaml-syntax", "answer block is not a mapping", raw=raw, reasoning=reasoning)

    fields: dict[str, object] = {}
    for key, value in data.items():
        norm = _KEY_ALIASES.get(str(key).strip().lower().replace("_", "-"))
        if norm is None:
            norm = _KEY_ALIASES.get(str(key).strip().lower().replace("_", "").replace("-", ""))
        if norm is not None:
            fields[norm] = value
    condition = _as_block(fields.get("condition"))
    if not condition:
        return ParseFailure("missing-condition", "condition absent or empty", raw=raw, reasoning=reasoning)
    imports = _imports(fields.get("import"))
    if imports is None:
        return ParseFailure("bad-import", f"cannot read imports: {fields.get('import')!r}", raw=raw,
                            reasoning=reasoning)
    return SpecCandidate(
        imports=tuple(imports),
        pre_ghost=_as_block(fields.get("pre-ghost")),
        post_ghost=_as_block(fields.get("post-ghost")),
        condition=condition,
        reasoning=reasoning,
        raw=raw,
    )


def serialize_spec(c: SpecCandidate) -> str:
    """The four-key YAML answer block for a candidate."""
    return yamlio.dump({
        "import": "\n".join(c.imports) + ("\n" if c.imports else ""),
        "pre-ghost": c.pre_ghost + ("\n" if c.pre_ghost else ""),
        "post-ghost": c.post_ghost + ("\n" if c.post_ghost else ""),
        "condition": c.condition + "\n",
    })


def format_output(c: SpecCandidate) -> str:
    """Render a candidate as a model would emit it: reasoning, then a fenced answer."""
    head = f"<think>\n{c.reasoning}\n</think>\n" if c.reasoning else ""
    return f"{head}```yaml\n{serialize_spec(c)}```\n"


def reasoning_length(c: SpecCandidate | ParseFailure | str) -> int:
    """Number of whitespace-delimited tokens in the reasoning trace."""
    text = c if isinstance(c, str) else c.reasoning
    return len(text.split())


# --------------------------------------------------------------------------- files


def write_candidate(c: SpecCandidate | ParseFailure, path: str | Path) -> None:
    if isinstance(c, ParseFailure):
        doc = {"task_id": c.task_id, "sample": c.sample, "parse_failure": c.reason,
               "detail": c.detail, "reasoning": c.reasoning, "raw": c.raw}
    else:
        doc = {
            "task_id": c.task_id,
            "sample": c.sample,
            "import": list(c.imports),
            "pre-ghost": c.pre_ghost,
            "post-ghost": c.post_ghost,
            "condition": c.condition,
            "reasoning": c.reasoning,
            "raw": c.raw,
        }
    Path(path).write_text(yamlio.dump(doc), encoding="utf-8")


def read_candidate(path: str | Path) -> SpecCandidate | ParseFailure:
    doc = yamlio.load_strings(Path(path).read_text(encoding="utf-8"))
    sample = int(doc.get("sample", 0))
    if "parse_failure" in doc:
        return ParseFailure(doc["parse_failure"], doc.get("detail", ""), doc.get("raw", ""),
                            doc.get("reasoning", ""), doc.get("task_id", ""), sample)
    return SpecCandidate(
        imports=tuple(doc.get("import") or ()),
        pre_ghost=doc.get("pre-ghost", ""),
        post_ghost=doc.get("post-ghost", ""),
        condition=doc["condition"],
        reasoning=doc.get("reasoning", ""),
        raw=doc.get("raw", ""),
        task_id=doc.get("task_id", ""),
        sample=sample,
    )
