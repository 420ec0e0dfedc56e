"""Check out project versions, build and test instrumented copies, classify candidates."""

from __future__ import annotations

import json
import logging
import os
import re
import shlex
import shutil
import signal
import subprocess
import sys
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from specgen import injector, java
from specgen.prompts import GenerationTask
from specgen.spec_io import ParseFailure, SpecCandidate, reasoning_length

log = logging.getLogger(__name__)

VERSIONS = ("fixed", "buggy")


class HarnessError(Exception):
    """Infrastructure failure, as opposed to a candidate's own failure."""


class CheckoutError(HarnessError):
    pass


@dataclass
class Timeouts:
    compile: float = 300.0
    test: float = 1200.0
    checkout: float = 600.0


@dataclass
class CommandResult:
    ok: bool
    exit_code: int | None
    output: str
    timed_out: bool = False
    log_path: str | None = None


@dataclass
class TestFailure:
    test_id: str
    message: str
    stack: str

    def mentions(self, marker: str) -> bool:
        return marker in self.message or marker in self.stack


@dataclass
class TestOutcome:
    ran: int
    failures: list[TestFailure]
    timed_out: bool = False
    log_path: str | None = None
    exit_code: int | None = 0

    @property
    def passed(self) -> bool:
        return not self.failures and not self.timed_out


@dataclass
class WorkingCopy:
    project: str
    bug_id: str | None
    version: str
    path: Path


def parse_failing_tests(text: str) -> list[TestFailure]:
    """Parse the Defects4J ``failing_tests`` format (``--- Class::method`` headers)."""
    failures: list[TestFailure] = []
    current: list[str] | None = None
    test_id = ""
    for line in text.splitlines():
        if line.startswith("--- "):
            if current is not None:
                failures.append(_failure(test_id, current))
            test_id, current = line[4:].strip(), []
        elif current is not None:
            current.append(line)
    if current is not None:
        failures.append(_failure(test_id, current))
    return failures


def _failure(test_id: str, lines: list[str]) -> TestFailure:
    message = lines[0] if lines else ""
    return TestFailure(test_id, message, "\n".join(lines[1:]))


def _format_argv(template: str | Sequence[str], **values) -> list[str]:
    if isinstance(template, str):
        return [part.format(**values) for part in shlex.split(template)]
    return [part.format(**values) for part in template]


def run_command(argv: list[str], cwd: Path, timeout: float, log_path: Path | None = None) -> CommandResult:
    """Run ``argv`` in its own process group; the whole group is killed on timeout."""
    try:
        proc = subprocess.Popen(
            argv, cwd=cwd, stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
            start_new_session=True, text=True, errors="replace",
        )
    except OSError as exc:
        out = f"cannot start {argv[0]}: {exc}"
        if log_path:
            log_path.write_text(out, encoding="utf-8")
        return CommandResult(False, None, out, log_path=str(log_path) if log_path else None)
    try:
        out, _ = proc.communicate(timeout=timeout)
        timed_out = False
    except subprocess.TimeoutExpired:
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except ProcessLookupError:
            pass
        out, _ = proc.communicate()
        timed_out = True
    if log_path is not None:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        log_path.write_text(f"$ {shlex.join(argv)}\n{out}", encoding="utf-8")
    return CommandResult(
        ok=proc.returncode == 0 and not timed_out,
        exit_code=proc.returncode,
        output=out,
        timed_out=timed_out,
        log_path=str(log_path) if log_path else None,
    )


def _ensure_empty(workdir: Path) -> None:
    if workdir.exists() and any(workdir.iterdir()):
        raise CheckoutError(f"workdir not empty: {workdir}")


# --------------------------------------------------------------------------- adapters


class ProjectAdapter:
    """Materializes project versions and runs their build and tests."""

    kind = "abstract"
    supports_relevant_tests = False

    def checkout(self, project: str, bug_id: str | None, version: str, workdir: Path,
                 timeout: float = 600.0) -> WorkingCopy:
        raise NotImplementedError

    def compile(self, wc: WorkingCopy, timeout: float, log_path: Path | None = None) -> CommandResult:
        raise NotImplementedError

    def run_tests(self, wc: WorkingCopy, timeout: float, relevant: bool = True,
                  log_path: Path | None = None) -> TestOutcome:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}

    def _read_outcome(self, wc: WorkingCopy, result: CommandResult) -> TestOutcome:
        if result.timed_out:
            return TestOutcome(0, [], timed_out=True, log_path=result.log_path, exit_code=result.exit_code)
        failing = wc.path / "failing_tests"
        failures = parse_failing_tests(failing.read_text(encoding="utf-8", errors="replace")) if failing.exists() else []
        all_tests = wc.path / "all_tests"
        if all_tests.exists():
            ran = sum(1 for ln in all_tests.read_text(encoding="utf-8").splitlines() if ln.strip())
        else:
            m = re.search(r"Tests run:\s*(\d+)", result.output)
            ran = int(m.group(1)) if m else len(failures)
        if not result.ok and not failures:
            raise HarnessError(f"test command exited {result.exit_code} without reporting failures")
        return TestOutcome(ran, failures, log_path=result.log_path, exit_code=result.exit_code)


def _copy_tree(src: Path, workdir: Path) -> None:
    _ensure_empty(workdir)
    if workdir.exists():
        workdir.rmdir()
    shutil.copytree(src, workdir, ignore=shutil.ignore_patterns("build", "failing_tests", "all_tests"))


def _tree_for(tree: Path, project: str, bug_id: str | None, version: str) -> Path:
    """``tree/<project>/<bug>/<version>`` if present, else ``tree/<version>``."""
    candidates = []
    if bug_id:
        candidates.append(tree / project / str(bug_id) / version)
    candidates += [tree / project / version, tree / version]
    for c in candidates:
        if c.is_dir():
            return c
    raise CheckoutError(f"no {version} tree for {project}-{bug_id} under {tree}")


@dataclass
class GenericAdapter(ProjectAdapter):
    """Command templates over ``{project}``, ``{bug_id}``, ``{version}``, ``{vflag}``, ``{workdir}``.

    Without a checkout template the version is copied from ``tree``.
    """

    compile_cmd: str | Sequence[str] = ""
    test_cmd: str | Sequence[str] = ""
    checkout_cmd: str | Sequence[str] | None = None
    relevant_tests_opt: str | None = None
    tree: Path | None = None
    kind: str = "generic"

    @property
    def supports_relevant_tests(self) -> bool:  # type: ignore[override]
        return bool(self.relevant_tests_opt)

    def _values(self, wc_or_args) -> dict:
        project, bug_id, version, workdir = wc_or_args
        return {
            "project": project,
            "bug_id": bug_id or "",
            "version": version,
            "vflag": "f" if version == "fixed" else "b",
            "workdir": str(workdir),
        }

    def checkout(self, project, bug_id, version, workdir, timeout=600.0):
        if version not in VERSIONS:
            raise ValueError(f"version must be one of {VERSIONS}")
        workdir = Path(workdir)
        if self.checkout_cmd is None:
            if self.tree is None:
                raise CheckoutError("adapter has neither a checkout command nor a source tree")
            _copy_tree(_tree_for(Path(self.tree), project, bug_id, version), workdir)
        else:
            _ensure_empty(workdir)
            workdir.mkdir(parents=True, exist_ok=True)
            argv = _format_argv(self.checkout_cmd, **self._values((project, bug_id, version, workdir)))
            res = run_command(argv, workdir, timeout)
            if not res.ok:
                raise CheckoutError(f"checkout failed ({res.exit_code}): {res.output[-2000:]}")
        return WorkingCopy(project, bug_id, version, workdir)

    def compile(self, wc, timeout, log_path=None):
        argv = _format_argv(self.compile_cmd, **self._values((wc.project, wc.bug_id, wc.version, wc.path)))
        return run_command(argv, wc.path, timeout, log_path)

    def run_tests(self, wc, timeout, relevant=True, log_path=None):
        for name in ("failing_tests", "all_tests"):
            (wc.path / name).unlink(missing_ok=True)
        argv = _format_argv(self.test_cmd, **self._values((wc.project, wc.bug_id, wc.version, wc.path)))
        if relevant and self.relevant_tests_opt:
            argv += shlex.split(self.relevant_tests_opt)
        return self._read_outcome(wc, run_command(argv, wc.path, timeout, log_path))

    def describe(self):
        return {
            "kind": self.kind,
            "checkout_cmd": self.checkout_cmd if self.checkout_cmd is None or isinstance(self.checkout_cmd, str)
            else list(self.checkout_cmd),
            "compile_cmd": self.compile_cmd if isinstance(self.compile_cmd, str) else list(self.compile_cmd),
            "test_cmd": self.test_cmd if isinstance(self.test_cmd, str) else list(self.test_cmd),
            "relevant_tests_opt": self.relevant_tests_opt,
            "tree": str(self.tree) if self.tree else None,
        }


def defects4j_adapter(executable: str = "defects4j") -> GenericAdapter:
    """Defects4J CLI: ``checkout -v <id>f|b``, ``compile``, ``test [-r]``."""
    return GenericAdapter(
        kind="defects4j",
        checkout_cmd=f"{executable} checkout -p {{project}} -v {{bug_id}}{{vflag}} -w {{workdir}}",
        compile_cmd=f"{executable} compile -w {{workdir}}",
        test_cmd=f"{executable} test -w {{workdir}}",
        relevant_tests_opt="-r",
    )


def toy_java_adapter(tree: Path | None = None) -> GenericAdapter:
    """Real compile/test of a ``src/main/java`` + ``src/test/java`` tree via :mod:`specgen.javatool`."""
    from specgen import data_path

    tree = Path(tree) if tree else Path(str(data_path("toy_abs")))
    return GenericAdapter(
        kind="generic",
        tree=tree,
        compile_cmd=[sys.executable, "-m", "specgen.javatool", "compile", "{workdir}"],
        test_cmd=[sys.executable, "-m", "specgen.javatool", "test", "{workdir}"],
    )


# --------------------------------------------------------------------------- mock adapter

_GUARD = re.compile(
    r"^[ \t]*if \(!\((?P<cond>.*)\)\) \{\n[ \t]*throw new IllegalStateException\(\"(?P<marker>(?:[^\"\\]|\\.)*)\"\);",
    re.M,
)


@dataclass
class MockRule:
    condition: str
    compile: str = "ok"  # ok | fail
    fixed: str | None = None  # pass | marker_fail | plain_fail
    buggy: str | None = None
    method: str | None = None


@dataclass
class MockScript:
    rules: list[MockRule] = field(default_factory=list)
    default: dict = field(default_factory=lambda: {"fixed": "pass", "buggy": "plain_fail"})
    tests: list[str] = field(default_factory=lambda: ["Mock::testMethod"])
    bug_test: str = "Mock::testBugRevealing"

    @classmethod
    def load(cls, path: str | Path) -> "MockScript":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        rules = [MockRule(**r) for r in data.get("rules", [])]
        kwargs = {k: data[k] for k in ("default", "tests", "bug_test") if k in data}
        return cls(rules=rules, **kwargs)

    def rule_for(self, condition: str, method: str | None) -> MockRule | None:
        cond = java.squash(condition)
        for r in self.rules:
            if java.squash(r.condition) == cond and (r.method is None or r.method == method):
                return r
        return None


@dataclass
class MockAdapter(ProjectAdapter):
    """Copies a bundled tree; compile is a syntax check, test outcomes come from a script.

    The script is looked up by the guarded condition found in the working
    copy, so the mock sees exactly what a real build would see.
    """

    tree: Path
    script: MockScript = field(default_factory=MockScript)
    kind: str = "mock"

    def checkout(self, project, bug_id, version, workdir, timeout=600.0):
        if version not in VERSIONS:
            raise ValueError(f"version must be one of {VERSIONS}")
        workdir = Path(workdir)
        _copy_tree(_tree_for(Path(self.tree), project, bug_id, version), workdir)
        return WorkingCopy(project, bug_id, version, workdir)

    def _guards(self, wc: WorkingCopy) -> list[tuple[str, str, str]]:
        found = []
        for path in sorted(wc.path.rglob("*.java")):
            text = path.read_text(encoding="utf-8", errors="replace")
            for m in _GUARD.finditer(text):
                # the wrapper's forwarding call is the nearest one above the guard
                calls = re.findall(r"(\w+)" + injector.SUFFIX + r"\(", text[:m.start()])
                found.append((m.group("cond"), m.group("marker"), calls[-1] if calls else None))
        return found

    def compile(self, wc, timeout, log_path=None):
        problems = []
        for path in sorted(wc.path.rglob("*.java")):
            tree = java.parse(path.read_bytes())
            err = java.first_error(tree)
            if err is not None:
                rel = path.relative_to(wc.path).as_posix()
                problems.append(f"{rel}:{err.start_point[0] + 1}: error: syntax error")
        for cond, _, method in self._guards(wc):
            rule = self.script.rule_for(cond, method)
            if rule is not None and rule.compile == "fail":
                problems.append(f"scripted compile failure for condition `{cond}`")
        out = "\n".join(problems) if problems else "BUILD OK"
        if log_path is not None:
            log_path.parent.mkdir(parents=True, exist_ok=True)
            log_path.write_text(out + "\n", encoding="utf-8")
        return CommandResult(not problems, 0 if not problems else 1, out,
                             log_path=str(log_path) if log_path else None)

    def run_tests(self, wc, timeout, relevant=True, log_path=None):
        verdict = self.script.default.get(wc.version, "pass")
        marker = ""
        for cond, mk, method in self._guards(wc):
            rule = self.script.rule_for(cond, method)
            scripted = getattr(rule, wc.version) if rule is not None else None
            if scripted is not None:
                verdict = scripted
            marker = mk.replace('\\"', '"').replace("\\\\", "\\")
        tests = list(self.script.tests) + [self.script.bug_test]
        failing = []
        if verdict == "marker_fail":
            victim = self.script.bug_test if wc.version == "buggy" else tests[0]
            failing.append(f"--- {victim}\njava.lang.IllegalStateException: {marker}\n"
                           f"\tat Mock.wrapper(Mock.java:1)")
        elif verdict == "plain_fail":
            failing.append(f"--- {self.script.bug_test}\njava.lang.AssertionError: scripted failure\n"
                           f"\tat Mock.test(Mock.java:1)")
        (wc.path / "failing_tests").write_text("\n".join(failing) + ("\n" if failing else ""), encoding="utf-8")
        (wc.path / "all_tests").write_text("\n".join(tests) + "\n", encoding="utf-8")
        out = f"Tests run: {len(tests)}\nFailing tests: {len(failing)}\n"
        if log_path is not None:
            log_path.parent.mkdir(parents=True, exist_ok=True)
            log_path.write_text(out, encoding="utf-8")
        return self._read_outcome(wc, CommandResult(True, 0, out, log_path=str(log_path) if log_path else None))

    def describe(self):
        return {"kind": self.kind, "tree": str(self.tree), "rules": len(self.script.rules)}


def toy_mock_adapter() -> MockAdapter:
    from specgen import data_path

    tree = Path(str(data_path("toy_abs")))
    return MockAdapter(tree=tree, script=MockScript.load(tree / "mock_script.json"))


# --------------------------------------------------------------------------- validation


@dataclass
class ValidationOutcome:
    task_id: str
    sample: int
    project: str
    bug_id: str | None
    syntax_ok: bool = False
    semantic_ok: bool = False
    bug_distinguishing: bool = False
    failure_attributed: bool = False
    harness_error: str | None = None
    parse_failure: str | None = None
    notes: list[str] = field(default_factory=list)
    failing_tests: dict[str, list[str]] = field(default_factory=dict)
    logs: dict[str, str] = field(default_factory=dict)
    reasoning_tokens: int = 0

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        if self.semantic_ok and not self.syntax_ok:
            raise ValueError(f"{self.key}: semantic_ok without syntax_ok")
        if self.bug_distinguishing and not self.semantic_ok:
            raise ValueError(f"{self.key}: bug_distinguishing without semantic_ok")
        if self.parse_failure and (self.syntax_ok or self.semantic_ok or self.bug_distinguishing):
            raise ValueError(f"{self.key}: parse failure with a positive flag")

    @property
    def key(self) -> tuple[str, int]:
        return (self.task_id, self.sample)

    def to_record(self) -> dict:
        return asdict(self)

    @classmethod
    def from_record(cls, rec: dict) -> "ValidationOutcome":
        known = {k: rec[k] for k in cls.__dataclass_fields__ if k in rec}
        return cls(**known)


class Validator:
    """Runs the fixed-then-buggy pipeline for candidates, one private workdir each.

    Pristine checkouts are cached per (project, bug, version) under
    ``workroot/pristine`` and copied for every candidate.
    """

    def __init__(
        self,
        adapter: ProjectAdapter,
        workroot: str | Path,
        timeouts: Timeouts | None = None,
        relevant_tests: bool = True,
        check_buggy: bool = True,
        retry_failed_tests: bool = False,
        keep_workdirs: bool = False,
    ):
        self.adapter = adapter
        self.workroot = Path(workroot).resolve()
        self.timeouts = timeouts or Timeouts()
        self.relevant_tests = relevant_tests
        self.check_buggy = check_buggy
        self.retry_failed_tests = retry_failed_tests
        self.keep_workdirs = keep_workdirs
        self._lock = threading.Lock()
        self._pristine_locks: dict[tuple, threading.Lock] = {}
        self._active: set[Path] = set()
        self.workdirs_used: list[Path] = []

    @property
    def log_root(self) -> Path:
        return self.workroot / "logs"

    def _pristine(self, project: str, bug_id: str | None, version: str) -> Path:
        key = (project, bug_id, version)
        with self._lock:
            lock = self._pristine_locks.setdefault(key, threading.Lock())
        target = self.workroot / "pristine" / f"{project}-{bug_id or 'na'}-{version}"
        with lock:
            done = target.with_name(target.name + ".ok")
            if not done.exists():
                if target.exists():
                    shutil.rmtree(target)
                target.parent.mkdir(parents=True, exist_ok=True)
                self.adapter.checkout(project, bug_id, version, target, self.timeouts.checkout)
                done.touch()
        return target

    def _acquire(self, workdir: Path) -> None:
        with self._lock:
            if workdir in self._active:
                raise HarnessError(f"workdir already in use: {workdir}")
            self._active.add(workdir)
            self.workdirs_used.append(workdir)

    def _release(self, workdir: Path) -> None:
        with self._lock:
            self._active.discard(workdir)
        if not self.keep_workdirs:
            shutil.rmtree(workdir, ignore_errors=True)

    def _copy(self, task: GenerationTask, sample: int, version: str) -> WorkingCopy:
        src = self._pristine(task.project, task.bug_id, version)
        workdir = self.workroot / "runs" / task.task_id / f"{sample}-{version}"
        self._acquire(workdir)
        if workdir.exists():
            shutil.rmtree(workdir)
        workdir.parent.mkdir(parents=True, exist_ok=True)
        shutil.copytree(src, workdir, symlinks=True)
        return WorkingCopy(task.project, task.bug_id, version, workdir)

    def validate(self, task: GenerationTask, spec: SpecCandidate | ParseFailure, sample: int | None = None
                 ) -> ValidationOutcome:
        sample = spec.sample if sample is None else sample
        out = ValidationOutcome(task.task_id, sample, task.project, task.bug_id,
                                reasoning_tokens=reasoning_length(spec))
        if isinstance(spec, ParseFailure):
            out.parse_failure = spec.reason
            return out
        marker = injector.make_marker(task.task_id, sample)
        logs = self.log_root / task.task_id
        logs.mkdir(parents=True, exist_ok=True)
        try:
            self._stage(task, spec, sample, marker, "fixed", out, logs)
            if out.semantic_ok and self.check_buggy:
                self._stage(task, spec, sample, marker, "buggy", out, logs)
        except injector.InjectionError as exc:
            out.harness_error = f"injection: {exc}"
        except HarnessError as exc:
            out.harness_error = str(exc)
        out.check()
        return out

    def _stage(self, task, spec, sample, marker, version, out: ValidationOutcome, logs: Path) -> None:
        prefix = f"{sample}.{version}"
        try:
            wc = self._copy(task, sample, version)
        except CheckoutError as exc:
            raise HarnessError(f"checkout: {exc}") from exc
        try:
            target = wc.path / task.source_path
            if not target.is_file():
                raise HarnessError(f"{version}: source file missing: {task.source_path}")
            try:
                inst = injector.instrument_file(target, task.class_fqn, task.method_signature, spec, marker)
            except injector.InjectionError as exc:
                if version == "buggy":
                    out.notes.append(f"buggy version cannot be instrumented: {exc}")
                    return
                raise
            (logs / f"{prefix}.diff").write_text(inst.diff(), encoding="utf-8")
            out.logs[f"{version}.diff"] = self._rel(logs / f"{prefix}.diff")

            build = self.adapter.compile(wc, self.timeouts.compile, logs / f"{prefix}.compile.log")
            out.logs[f"{version}.compile"] = self._rel(build.log_path)
            if build.timed_out:
                out.harness_error = "timeout"
                return
            if not build.ok:
                if version == "buggy":
                    out.notes.append("buggy version does not compile with this spec")
                return
            if version == "fixed":
                out.syntax_ok = True

            tests = self._tests(wc, logs / f"{prefix}.test.log")
            if version == "fixed" and not tests.passed and not tests.timed_out and self.retry_failed_tests:
                tests = self._tests(wc, logs / f"{prefix}.test.retry.log")
            out.logs[f"{version}.test"] = self._rel(tests.log_path)
            if tests.timed_out:
                out.harness_error = "timeout"
                return
            out.failing_tests[version] = [f.test_id for f in tests.failures]
            if version == "fixed":
                out.semantic_ok = tests.passed
            else:
                attributed = any(f.mentions(marker) for f in tests.failures)
                out.failure_attributed = attributed
                out.bug_distinguishing = attributed
        finally:
            self._release(wc.path)

    def _rel(self, path: str | Path | None) -> str:
        """Log locations relative to the work root, so result logs compare across workspaces."""
        if not path:
            return ""
        try:
            return Path(path).resolve().relative_to(self.workroot).as_posix()
        except ValueError:
            return str(path)

    def _tests(self, wc: WorkingCopy, log_path: Path) -> TestOutcome:
        relevant = self.relevant_tests and self.adapter.supports_relevant_tests
        return self.adapter.run_tests(wc, self.timeouts.test, relevant=relevant, log_path=log_path)


def validate_candidate(
    task: GenerationTask,
    spec: SpecCandidate | ParseFailure,
    adapter: ProjectAdapter,
    workroot: str | Path,
    timeouts: Timeouts | None = None,
    **kwargs,
) -> ValidationOutcome:
    return Validator(adapter, workroot, timeouts, **kwargs).validate(task, spec)


# --------------------------------------------------------------------------- results log


class ResultsLog:
    """Append-only line-delimited outcome records; safe for concurrent appends."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def _drop_torn_tail(self) -> None:
        """Cut a partial last record left by a crash so new records start on a fresh line."""
        if not self.path.exists() or self.path.stat().st_size == 0:
            return
        with open(self.path, "rb+") as fh:
            fh.seek(-1, os.SEEK_END)
            if fh.read(1) == b"\n":
                return
            fh.seek(0)
            data = fh.read()
            log.warning("%s: dropping truncated last record", self.path)
            fh.truncate(data.rfind(b"\n") + 1)

    def append(self, outcome: ValidationOutcome) -> None:
        line = json.dumps(outcome.to_record(), sort_keys=True)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._drop_torn_tail()
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def records(self) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        lines = self.path.read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    log.warning("%s: ignoring truncated last record", self.path)
                    continue
                raise
        return out

    def outcomes(self) -> list[ValidationOutcome]:
        return [ValidationOutcome.from_record(r) for r in self.records()]

    def completed(self) -> set[tuple[str, int]]:
        return {(r["task_id"], r["sample"]) for r in self.records()}


def validate_batch(
    jobs: Iterable[tuple[GenerationTask, SpecCandidate | ParseFailure]],
    validator: Validator,
    results: ResultsLog,
    workers: int = 1,
    on_done: Callable[[ValidationOutcome], None] | None = None,
) -> list[ValidationOutcome]:
    """Validate every job not already in ``results``; outcomes are appended as they finish."""
    done = results.completed()
    todo = [(t, s) for t, s in jobs if (t.task_id, s.sample) not in done]
    outcomes: list[ValidationOutcome] = []

    def finish(o: ValidationOutcome) -> None:
        results.append(o)
        outcomes.append(o)
        if on_done is not None:
            on_done(o)

    if workers <= 1:
        for task, spec in todo:
            finish(validator.validate(task, spec))
        return outcomes
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(validator.validate, t, s) for t, s in todo]
        try:
            for fut in as_completed(futures):
                finish(fut.result())
        except BaseException:
            for f in futures:
                f.cancel()
            raise
    return outcomes
