"""Syn@k, Sem@k, bug-distinguishing rate and the reasoning-length rank analysis."""

from __future__ import annotations

import csv
import io
import json
import logging
import statistics
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable, NamedTuple, Sequence

log = logging.getLogger(__name__)

DEFAULT_KS = (1, 5, 10)


class Triple(NamedTuple):
    syntax_ok: bool
    semantic_ok: bool
    bug_distinguishing: bool


@dataclass(frozen=True)
class TaskOutcomes:
    task_id: str
    bug_key: tuple[str, str]
    samples: tuple[Triple, ...]
    tokens: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(Triple(*map(bool, s)) for s in self.samples))
        if not self.tokens:
            object.__setattr__(self, "tokens", (0,) * len(self.samples))
        if len(self.tokens) != len(self.samples):
            raise ValueError(f"{self.task_id}: {len(self.tokens)} token counts for {len(self.samples)} samples")
        for i, (syn, sem, bug) in enumerate(self.samples):
            if (sem and not syn) or (bug and not sem):
                raise ValueError(f"{self.task_id}#{i}: flags break the syntax/semantic/bug implication chain")

    @property
    def n(self) -> int:
        return len(self.samples)


def from_outcomes(outcomes: Iterable, exclude_harness_errors: bool = False) -> list[TaskOutcomes]:
    """Group per-sample validation outcomes into per-task rows ordered by sample index.

    Samples with a harness error count as all-false unless excluded.
    """
    groups: dict[str, list] = defaultdict(list)
    for o in outcomes:
        groups[o.task_id].append(o)
    rows = []
    for task_id in sorted(groups):
        items = sorted(groups[task_id], key=lambda o: o.sample)
        samples, tokens = [], []
        for o in items:
            if o.harness_error:
                if exclude_harness_errors:
                    continue
                samples.append(Triple(False, False, False))
            else:
                samples.append(Triple(o.syntax_ok, o.semantic_ok, o.bug_distinguishing))
            tokens.append(o.reasoning_tokens)
        if not samples:
            log.warning("%s: every sample is a harness error; task dropped", task_id)
            continue
        first = items[0]
        rows.append(TaskOutcomes(task_id, (first.project, first.bug_id or ""), tuple(samples), tuple(tokens)))
    return rows


def _check_k(outcomes: Sequence[TaskOutcomes], k: int, clamp: bool) -> None:
    if not outcomes:
        raise ValueError("no task outcomes")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    short = [t.task_id for t in outcomes if t.n < k]
    if short and not clamp:
        raise ValueError(f"k={k} exceeds the sample count of {len(short)} task(s), e.g. {short[0]}")
    if short:
        log.warning("k=%d clamped for %d task(s) with fewer samples", k, len(short))


def _at_k(outcomes: Sequence[TaskOutcomes], k: int, idx: int, clamp: bool) -> float:
    _check_k(outcomes, k, clamp)
    hits = sum(any(s[idx] for s in t.samples[:k]) for t in outcomes)
    return hits / len(outcomes)


def syn_at_k(outcomes: Sequence[TaskOutcomes], k: int, clamp: bool = False) -> float:
    """Fraction of tasks where at least one of the first ``k`` samples compiles."""
    return _at_k(outcomes, k, 0, clamp)


def sem_at_k(outcomes: Sequence[TaskOutcomes], k: int, clamp: bool = False) -> float:
    """Fraction of tasks where at least one of the first ``k`` samples passes every test."""
    return _at_k(outcomes, k, 1, clamp)


class BugRate(NamedTuple):
    rate: float
    distinguished: int
    total: int

    def fraction(self) -> str:
        return f"{self.distinguished}/{self.total}"


def bug_distinguish_rate(outcomes: Sequence[TaskOutcomes]) -> BugRate:
    """Pool samples by bug; a bug counts once if any pooled sample distinguishes it."""
    if not outcomes:
        raise ValueError("no task outcomes")
    found: dict[tuple[str, str], bool] = {}
    for t in outcomes:
        found[t.bug_key] = found.get(t.bug_key, False) or any(s.bug_distinguishing for s in t.samples)
    hit = sum(found.values())
    return BugRate(hit / len(found), hit, len(found))


@dataclass(frozen=True)
class RankPoint:
    rank: int
    mean_tokens: float
    sem_at_1: float
    n_tasks: int


def reasoning_rank_analysis(outcomes: Sequence[TaskOutcomes]) -> list[RankPoint]:
    """Rank each task's samples by reasoning length (ties by index) and average per rank."""
    if not outcomes:
        raise ValueError("no task outcomes")
    sizes = {t.n for t in outcomes}
    if len(sizes) != 1:
        raise ValueError(f"ragged sample counts: {sorted(sizes)}")
    n = sizes.pop()
    by_rank: list[list[tuple[int, bool]]] = [[] for _ in range(n)]
    for t in outcomes:
        order = sorted(range(n), key=lambda i: (t.tokens[i], i))
        for r, i in enumerate(order):
            by_rank[r].append((t.tokens[i], t.samples[i].semantic_ok))
    return [
        RankPoint(r + 1, statistics.fmean(tok for tok, _ in pts), sum(ok for _, ok in pts) / len(pts), len(pts))
        for r, pts in enumerate(by_rank)
    ]


# --------------------------------------------------------------------------- report


@dataclass
class MetricsReport:
    syn: dict[int, float]
    sem: dict[int, float]
    bug: BugRate
    n_tasks: int
    n_samples: int
    ranks: list[RankPoint] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    label: str = "run"

    def __post_init__(self):
        for name, table in (("Syn", self.syn), ("Sem", self.sem)):
            for k, v in table.items():
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"{name}@{k}={v} outside [0, 1]")
        if self.bug.distinguished > self.bug.total:
            raise ValueError("distinguished bugs exceed the bug count")

    @property
    def ks(self) -> list[int]:
        return sorted(self.syn)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n_tasks": self.n_tasks,
            "n_samples": self.n_samples,
            "syn_at_k": {str(k): self.syn[k] for k in self.ks},
            "sem_at_k": {str(k): self.sem[k] for k in self.ks},
            "bug_distinguish": {"rate": self.bug.rate, "distinguished": self.bug.distinguished,
                                "bugs": self.bug.total},
            "rank_series": [asdict(p) for p in self.ranks],
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        b = d["bug_distinguish"]
        return cls(
            syn={int(k): v for k, v in d["syn_at_k"].items()},
            sem={int(k): v for k, v in d["sem_at_k"].items()},
            bug=BugRate(b["rate"], b["distinguished"], b["bugs"]),
            n_tasks=d["n_tasks"],
            n_samples=d["n_samples"],
            ranks=[RankPoint(**p) for p in d.get("rank_series", [])],
            metadata=d.get("metadata", {}),
            label=d.get("label", "run"),
        )

    def render_table(self) -> str:
        return render_table([self])

    def ranks_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "mean_tokens", "sem_at_1", "n_tasks"])
        for p in self.ranks:
            w.writerow([p.rank, f"{p.mean_tokens:.4f}", f"{p.sem_at_1:.4f}", p.n_tasks])
        return buf.getvalue()


def _pct(x: float) -> str:
    return f"{100 * x:.1f}%"


def render_table(reports: Sequence[MetricsReport], label_header: str = "Run") -> str:
    """Plain-text table: one row per report, Sem@k then Syn@k then bug rate with counts."""
    ks = sorted({k for r in reports for k in r.ks})
    head = [label_header, "#Tasks"] + [f"Sem@{k}" for k in ks] + [f"Syn@{k}" for k in ks] + ["r_BugD"]
    rows = []
    for r in reports:
        rows.append(
            [r.label, str(r.n_tasks)]
            + [_pct(r.sem[k]) if k in r.sem else "-" for k in ks]
            + [_pct(r.syn[k]) if k in r.syn else "-" for k in ks]
            + [f"{_pct(r.bug.rate)} ({r.bug.fraction()})"]
        )
    widths = [max(len(head[i]), *(len(row[i]) for row in rows)) for i in range(len(head))]

    def line(cells):
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths))).rstrip()

    out = [line(head), "  ".join("-" * w for w in widths)]
    out += [line(row) for row in rows]
    return "\n".join(out) + "\n"


def compute_report(
    outcomes: Sequence[TaskOutcomes],
    ks: Iterable[int] = DEFAULT_KS,
    metadata: dict | None = None,
    label: str = "run",
    clamp: bool = False,
) -> MetricsReport:
    ks = sorted(set(ks))
    sizes = {t.n for t in outcomes}
    ranks = reasoning_rank_analysis(outcomes) if len(sizes) == 1 else []
    if len(sizes) > 1:
        log.warning("ragged sample counts; rank analysis skipped")
    return MetricsReport(
        syn={k: syn_at_k(outcomes, k, clamp) for k in ks},
        sem={k: sem_at_k(outcomes, k, clamp) for k in ks},
        bug=bug_distinguish_rate(outcomes),
        n_tasks=len(outcomes),
        n_samples=max(sizes) if sizes else 0,
        ranks=ranks,
        metadata=dict(metadata or {}),
        label=label,
    )
