"""``specgen`` command line: index, tasks, prompt, generate, validate, score, analyze, dataset."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from specgen import __version__, data_path, yamlio
from specgen import code_index, dataset, metrics, model_client, prompts, runner, spec_io

log = logging.getLogger("specgen")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONFIG, EXIT_INPUT, EXIT_HARNESS = 0, 1, 2, 3, 4, 5


class CliError(Exception):
    category = "error"
    code = EXIT_FAIL


class ConfigError(CliError):
    category, code = "config", EXIT_CONFIG


class InputError(CliError):
    category, code = "input", EXIT_INPUT


@dataclass
class RunConfig:
    workspace: str = "specgen-run"
    adapter: str = "mock"  # mock | toy | generic | defects4j
    adapter_options: dict = field(default_factory=dict)
    backend: str = "stub"  # stub | openai
    stub_outputs: str = "toy"
    seed: int = 0
    endpoint: model_client.EndpointConfig = field(default_factory=model_client.EndpointConfig)
    scheme: str = "full"
    top_m: int = prompts.DEFAULT_TOP_M
    char_budget: int = code_index.DEFAULT_CHAR_BUDGET
    ks: list[int] = field(default_factory=lambda: list(metrics.DEFAULT_KS))
    timeouts: runner.Timeouts = field(default_factory=runner.Timeouts)
    jobs: int = 1
    include_reasoning: bool = True
    exclude_harness_errors: bool = False
    relevant_tests: bool = True
    check_buggy: bool = True
    retry_failed_tests: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        d = dict(d)
        try:
            if "endpoint" in d:
                d["endpoint"] = model_client.EndpointConfig.from_dict(d["endpoint"] or {})
            if "timeouts" in d:
                d["timeouts"] = runner.Timeouts(**(d["timeouts"] or {}))
        except (TypeError, model_client.ConfigurationError) as exc:
            raise ConfigError(str(exc)) from exc
        return cls(**d)

    def echo(self) -> dict:
        return asdict(self)

    # workspace layout
    @property
    def ws(self) -> Path:
        return Path(self.workspace)

    def path(self, *parts: str) -> Path:
        return self.ws.joinpath(*parts)


# --------------------------------------------------------------------------- helpers


def _bundled(value: str, name: str) -> Path:
    """``toy`` names the bundled toy project file ``name``; anything else is a path."""
    return Path(str(data_path("toy_abs", name))) if value == "toy" else Path(value)


def make_adapter(cfg: RunConfig) -> runner.ProjectAdapter:
    opts = dict(cfg.adapter_options)
    if cfg.adapter == "mock":
        tree = Path(opts.get("tree") or str(data_path("toy_abs")))
        script_file = opts.get("script") or tree / "mock_script.json"
        script = runner.MockScript.load(script_file) if Path(script_file).exists() else runner.MockScript()
        return runner.MockAdapter(tree=tree, script=script)
    if cfg.adapter == "toy":
        return runner.toy_java_adapter(opts.get("tree"))
    if cfg.adapter == "defects4j":
        return runner.defects4j_adapter(opts.get("executable", "defects4j"))
    if cfg.adapter == "generic":
        if not opts.get("compile_cmd") or not opts.get("test_cmd"):
            raise ConfigError("generic adapter needs adapter_options.compile_cmd and test_cmd")
        if opts.get("tree"):
            opts["tree"] = Path(opts["tree"])
        allowed = {"compile_cmd", "test_cmd", "checkout_cmd", "relevant_tests_opt", "tree"}
        return runner.GenericAdapter(**{k: v for k, v in opts.items() if k in allowed})
    raise ConfigError(f"unknown adapter {cfg.adapter!r} (mock, toy, generic, defects4j)")


def make_backend(cfg: RunConfig):
    if cfg.backend == "stub":
        path = _bundled(cfg.stub_outputs, "stub_outputs.json")
        if not path.exists():
            raise ConfigError(f"stub outputs file not found: {path}")
        return model_client.StubBackend.from_file(path, seed=cfg.seed)
    if cfg.backend == "openai":
        try:
            return model_client.ChatBackend(cfg.endpoint)
        except model_client.ConfigurationError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown backend {cfg.backend!r} (stub, openai)")


def load_tasks(cfg: RunConfig) -> list[prompts.GenerationTask]:
    path = cfg.path("tasks.jsonl")
    if not path.exists():
        raise InputError(f"{path} missing; run `specgen tasks` first")
    try:
        return prompts.load_tasks(path).tasks
    except prompts.ManifestError as exc:
        raise InputError(str(exc)) from exc


def load_corpus(cfg: RunConfig) -> code_index.SkeletonCorpus:
    path = cfg.path("corpus.json")
    if not path.exists():
        raise InputError(f"{path} missing; run `specgen index` first")
    return code_index.SkeletonCorpus.load(path)


def candidate_path(cfg: RunConfig, task_id: str, sample: int) -> Path:
    return cfg.path("candidates", task_id, f"{sample}.yaml")


def load_candidates(cfg: RunConfig, tasks) -> list[tuple[prompts.GenerationTask, object]]:
    jobs = []
    for task in tasks:
        folder = cfg.path("candidates", task.task_id)
        if not folder.is_dir():
            log.warning("%s: no candidates", task.task_id)
            continue
        for p in sorted(folder.glob("*.yaml"), key=lambda p: int(p.stem)):
            jobs.append((task, spec_io.read_candidate(p)))
    return jobs


def results_log(cfg: RunConfig) -> runner.ResultsLog:
    return runner.ResultsLog(cfg.path("validation", "results.jsonl"))


def run_metadata(cfg: RunConfig) -> dict:
    meta = {"specgen_version": __version__, "config": cfg.echo(),
            "template_hash": prompts.template_hash(cfg.scheme)}
    try:
        meta["adapter"] = make_adapter(cfg).describe()
    except CliError:
        meta["adapter"] = {"kind": cfg.adapter}
    run_file = cfg.path("run.json")
    if run_file.exists():
        meta["generation"] = json.loads(run_file.read_text(encoding="utf-8"))
    return meta


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# --------------------------------------------------------------------------- subcommands


def cmd_index(cfg: RunConfig, args) -> int:
    repo = args.repo
    if repo is None:
        if cfg.adapter not in ("mock", "toy"):
            raise ConfigError("--repo is required for this adapter")
        repo = Path(cfg.adapter_options.get("tree") or str(data_path("toy_abs"))) / "fixed"
    exclude = tuple(args.exclude or ())
    try:
        corpus = code_index.extract_skeletons(repo, exclude=exclude, jobs=cfg.jobs)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    corpus.save(cfg.path("corpus.json"))
    print(corpus.report.render(), end="")
    print(f"indexed {len(corpus)} classes -> {cfg.path('corpus.json')}")
    return EXIT_OK


def _read_bugs(path: Path) -> list[tuple[str, str]]:
    bugs = []
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise InputError(f"{path}:{n}: expected `project bug_id`")
        bugs.append((parts[0], parts[1]))
    return bugs


def cmd_tasks(cfg: RunConfig, args) -> int:
    if args.manifest:
        path = _bundled(args.manifest, "tasks.jsonl")
        try:
            loaded = prompts.load_tasks(path)
        except (OSError, prompts.ManifestError) as exc:
            raise InputError(str(exc)) from exc
        tasks, skipped = loaded.tasks, loaded.n_undocumented
    elif args.bugs:
        adapter = make_adapter(cfg)
        tasks, skipped = [], 0
        for project, bug in _read_bugs(Path(args.bugs)):
            roots = {}
            for version in runner.VERSIONS:
                wd = cfg.path("checkouts", f"{project}-{bug}-{version}")
                if not wd.exists():
                    adapter.checkout(project, bug, version, wd, cfg.timeouts.checkout)
                roots[version] = wd
            derived = prompts.derive_tasks(roots["fixed"], roots["buggy"], project, bug)
            tasks += derived.tasks
            skipped += derived.n_undocumented + derived.n_unsupported
    else:
        raise ConfigError("give --manifest FILE or --bugs FILE")
    prompts.save_tasks(tasks, cfg.path("tasks.jsonl"))
    print(f"{len(tasks)} tasks ({skipped} skipped) -> {cfg.path('tasks.jsonl')}")
    return EXIT_OK


def cmd_prompt(cfg: RunConfig, args) -> int:
    tasks = load_tasks(cfg)
    corpus = load_corpus(cfg) if cfg.scheme != "doc-only" else code_index.SkeletonCorpus([])
    for task in tasks:
        doc = prompts.build_prompt(task, corpus, cfg.top_m, cfg.char_budget, cfg.scheme)
        _write(cfg.path("prompts", f"{task.task_id}.yaml"), doc.serialized)
    print(f"{len(tasks)} prompts ({cfg.scheme}, template {prompts.template_hash(cfg.scheme)}) "
          f"-> {cfg.path('prompts')}")
    return EXIT_OK


def cmd_generate(cfg: RunConfig, args) -> int:
    tasks = load_tasks(cfg)
    backend = make_backend(cfg)
    n = cfg.endpoint.n_samples
    requests = []
    for task in tasks:
        prompt_file = cfg.path("prompts", f"{task.task_id}.yaml")
        if not prompt_file.exists():
            raise InputError(f"{prompt_file} missing; run `specgen prompt` first")
        requests.append((task.task_id, [{"role": "user", "content": prompt_file.read_text(encoding="utf-8")}]))
    sets, errors = model_client.generate_many(backend, requests, n, cfg.path("samples"), max_in_flight=cfg.jobs)
    parsed = failed = 0
    for task_id, sset in sorted(sets.items()):
        for i, raw in enumerate(sset.outputs):
            cand = spec_io.parse_model_output(raw).with_id(task_id, i)
            failed += isinstance(cand, spec_io.ParseFailure)
            parsed += 1
            target = candidate_path(cfg, task_id, i)
            target.parent.mkdir(parents=True, exist_ok=True)
            spec_io.write_candidate(cand, target)
    _write(cfg.path("run.json"), json.dumps({
        "backend": backend.describe(), "n_samples": n, "scheme": cfg.scheme,
        "template_hash": prompts.template_hash(cfg.scheme),
    }, indent=2))
    print(f"{parsed} samples for {len(sets)} tasks ({failed} unparseable, {len(errors)} tasks failed)")
    for task_id, err in sorted(errors.items()):
        print(f"error[generation]: {task_id}: {err}", file=sys.stderr)
    return EXIT_OK if not errors else EXIT_FAIL


def cmd_validate(cfg: RunConfig, args) -> int:
    tasks = load_tasks(cfg)
    jobs = load_candidates(cfg, tasks)
    if not jobs:
        raise InputError("no candidates; run `specgen generate` first")
    validator = runner.Validator(
        make_adapter(cfg), cfg.path("validation", "work"), cfg.timeouts,
        relevant_tests=cfg.relevant_tests, check_buggy=cfg.check_buggy,
        retry_failed_tests=cfg.retry_failed_tests,
    )
    results = results_log(cfg)
    before = len(results.completed())

    def show(o: runner.ValidationOutcome) -> None:
        status = "harness-error" if o.harness_error else (
            "bug-distinguishing" if o.bug_distinguishing else
            "semantic" if o.semantic_ok else "syntax" if o.syntax_ok else
            f"parse-failure:{o.parse_failure}" if o.parse_failure else "compile-failure")
        print(f"{o.task_id}#{o.sample}: {status}" + (f" ({o.harness_error})" if o.harness_error else ""))

    done = runner.validate_batch(jobs, validator, results, workers=cfg.jobs, on_done=show)
    print(f"validated {len(done)} candidates ({before} already done) -> {results.path}")
    return EXIT_OK


def _report(cfg: RunConfig, ks, label: str | None = None) -> metrics.MetricsReport:
    outcomes = results_log(cfg).outcomes()
    if not outcomes:
        raise InputError(f"no results in {results_log(cfg).path}; run `specgen validate` first")
    rows = metrics.from_outcomes(outcomes, exclude_harness_errors=cfg.exclude_harness_errors)
    try:
        return metrics.compute_report(rows, ks, run_metadata(cfg), label=label or cfg.ws.name,
                                      clamp=cfg.exclude_harness_errors)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_score(cfg: RunConfig, args) -> int:
    report = _report(cfg, cfg.ks)
    _write(cfg.path("reports", "report.txt"), report.render_table())
    _write(cfg.path("reports", "report.json"), report.to_json())
    print(report.render_table(), end="")
    return EXIT_OK


def cmd_analyze(cfg: RunConfig, args) -> int:
    if args.compare:
        labels = args.labels.split(",") if args.labels else []
        reports = []
        for i, ws in enumerate(args.compare):
            other = RunConfig(**{**cfg.__dict__, "workspace": ws})
            label = labels[i] if i < len(labels) else Path(ws).name
            reports.append(_report(other, cfg.ks, label))
        text = metrics.render_table(reports, label_header="Prompt scheme")
        _write(cfg.path("reports", "comparison.txt"), text)
        print(text, end="")
        return EXIT_OK
    outcomes = metrics.from_outcomes(results_log(cfg).outcomes(), cfg.exclude_harness_errors)
    if not outcomes:
        raise InputError("no results to analyze")
    try:
        ranks = metrics.reasoning_rank_analysis(outcomes)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = metrics.MetricsReport({}, {}, metrics.bug_distinguish_rate(outcomes), len(outcomes),
                                   outcomes[0].n, ranks)
    _write(cfg.path("reports", "ranks.csv"), report.ranks_csv())
    print(report.ranks_csv(), end="")
    return EXIT_OK


# --------------------------------------------------------------------------- dataset


def cmd_dataset(cfg: RunConfig, args) -> int:
    return {"filter": ds_filter, "curate": ds_curate, "review": ds_review, "export": ds_export}[args.ds_cmd](cfg, args)


def ds_filter(cfg: RunConfig, args) -> int:
    th = dataset.Thresholds(min_doc_coverage=args.min_doc_coverage, require_build=not args.skip_build)
    probe = None
    if not args.skip_build and args.build_cmd:
        def probe(root: Path) -> bool:
            argv = runner._format_argv(args.build_cmd, workdir=str(root))
            return runner.run_command(argv, root, cfg.timeouts.compile).ok
    rows = []
    for repo in args.repos:
        try:
            rep = dataset.quality_filter(repo, th, build_probe=probe)
        except OSError as exc:
            raise InputError(str(exc)) from exc
        rows.append(asdict(rep))
        verdict = "accepted" if rep.accepted else "rejected: " + "; ".join(rep.reasons)
        print(f"{rep.repo}: doc_coverage={rep.doc_coverage:.2f} tests={rep.has_tests} {verdict}")
    _write(cfg.path("dataset", "quality.json"), json.dumps(rows, indent=2))
    return EXIT_OK


def _curated_path(cfg: RunConfig) -> Path:
    return cfg.path("dataset", "triples.jsonl")


def ds_curate(cfg: RunConfig, args) -> int:
    tasks = load_tasks(cfg)
    backend = make_backend(cfg)
    validator = runner.Validator(make_adapter(cfg), cfg.path("dataset", "work"), cfg.timeouts,
                                 relevant_tests=cfg.relevant_tests, check_buggy=False)
    passed, queued, flagged = [], [], 0
    for task in tasks:
        prompt_file = cfg.path("prompts", f"{task.task_id}.yaml")
        if not prompt_file.exists():
            raise InputError(f"{prompt_file} missing; run `specgen prompt` first")
        prompt = prompt_file.read_text(encoding="utf-8")
        cur = dataset.curate(task, [{"role": "user", "content": prompt}], backend, cfg.path("dataset", "raw"))
        if cur.candidate is None:
            flagged += 1
            print(f"{task.task_id}: flagged ({cur.flag})")
            continue
        outcome = validator.validate(task, cur.candidate)
        if outcome.semantic_ok and not outcome.harness_error:
            passed.append(dataset.triple_from(task, prompt, cur.candidate, "passed"))
        else:
            queued.append((task, prompt, cur.candidate, outcome))
    with open(_curated_path(cfg), "w", encoding="utf-8") as fh:
        for t in passed:
            fh.write(json.dumps(asdict(t)) + "\n")
    dataset.build_review_queue(queued, cfg.path("dataset", "review"))
    print(f"{len(passed)} passed, {len(queued)} queued for review, {flagged} flagged")
    return EXIT_OK


def ds_review(cfg: RunConfig, args) -> int:
    queue = cfg.path("dataset", "review")
    if args.sign:
        entry = dataset.sign_review(args.sign, args.reviewer or "", args.note or "")
        print(f"{entry.path.name}: approved by {entry.reviewer}")
        return EXIT_OK
    entries = dataset.load_queue(queue)
    if args.revalidate:
        validator = runner.Validator(make_adapter(cfg), cfg.path("dataset", "work"), cfg.timeouts,
                                     relevant_tests=cfg.relevant_tests, check_buggy=False)
        promoted = []
        for e in entries:
            outcome = validator.validate(e.task, e.candidate)
            if outcome.semantic_ok and not outcome.harness_error:
                promoted.append(dataset.triple_from(e.task, e.prompt, e.candidate, "passed", e.note))
                e.path.unlink()
        with open(_curated_path(cfg), "a", encoding="utf-8") as fh:
            for t in promoted:
                fh.write(json.dumps(asdict(t)) + "\n")
        print(f"{len(promoted)} of {len(entries)} edited candidates now pass")
        return EXIT_OK
    for e in entries:
        state = "approved" if e.approved and e.signature_ok else "pending"
        print(f"{e.path.name}: {state}")
    print(f"{len(entries)} entries in {queue}")
    return EXIT_OK


def ds_export(cfg: RunConfig, args) -> int:
    triples = []
    path = _curated_path(cfg)
    if path.exists():
        triples = [dataset.TrainingTriple(**json.loads(ln))
                   for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    triples += [e.triple() for e in dataset.load_queue(cfg.path("dataset", "review"))
                if e.approved and e.signature_ok]
    out = Path(args.out) if args.out else cfg.path("dataset", "sft.jsonl")
    try:
        n = dataset.export_sft(triples, out, cfg.include_reasoning)
    except dataset.UnvalidatedTriple as exc:
        raise InputError(str(exc)) from exc
    print(f"{n} triples -> {out} (reasoning {'included' if cfg.include_reasoning else 'excluded'})")
    return EXIT_OK


# --------------------------------------------------------------------------- parser


def _ks(text: str) -> list[int]:
    try:
        ks = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k list {text!r}; use e.g. 1,5,10") from None
    if not ks or ks[0] < 1:
        raise argparse.ArgumentTypeError("k values must be positive")
    return ks


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--workspace", "-w", help="workspace directory")
    common.add_argument("--adapter", choices=["mock", "toy", "generic", "defects4j"])
    common.add_argument("--bugs", help="file of `project bug_id` lines")
    common.add_argument("--k", type=_ks, help="comma-separated k values, e.g. 1,5,10")
    common.add_argument("--samples", type=int, help="samples per task")
    common.add_argument("--jobs", type=int, help="parallel workers")
    common.add_argument("--timeout-compile", type=float)
    common.add_argument("--timeout-test", type=float)
    common.add_argument("--exclude-harness-errors", action="store_true", default=None)
    common.add_argument("--include-reasoning", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--all-tests", action="store_true", default=None, help="run the full test suite")
    common.add_argument("--backend", choices=["stub", "openai"])
    common.add_argument("--seed", type=int)
    common.add_argument("--scheme", choices=sorted(prompts.SCHEMES))
    common.add_argument("--top-m", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="specgen", description=__doc__)
    ap.add_argument("--version", action="version", version=f"specgen {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("index", parents=[common], help="extract class skeletons into corpus.json")
    p.add_argument("--repo", help="source tree to index (default: the toy project for mock/toy)")
    p.add_argument("--exclude", action="append", help="glob of files to skip (repeatable)")
    p = sub.add_parser("tasks", parents=[common], help="write tasks.jsonl from a manifest or bug list")
    p.add_argument("--manifest", help="task manifest (JSONL), or `toy` for the bundled one")
    sub.add_parser("prompt", parents=[common], help="build one prompt per task")
    sub.add_parser("generate", parents=[common], help="sample and parse model outputs")
    sub.add_parser("validate", parents=[common], help="inject and test every candidate (resumable)")
    sub.add_parser("score", parents=[common], help="Syn@k, Sem@k and bug-distinguishing rate")
    p = sub.add_parser("analyze", parents=[common], help="reasoning-length ranks or workspace comparison")
    p.add_argument("--compare", nargs="+", metavar="WORKSPACE", help="tabulate several workspaces")
    p.add_argument("--labels", help="comma-separated row labels for --compare")

    p = sub.add_parser("dataset", help="fine-tuning data subcommands")
    dsub = p.add_subparsers(dest="ds_cmd", metavar="STEP", required=True)
    q = dsub.add_parser("filter", parents=[common], help="repository quality filter")
    q.add_argument("repos", nargs="+")
    q.add_argument("--min-doc-coverage", type=float, default=0.6)
    q.add_argument("--build-cmd", help="build probe command; {workdir} is substituted")
    q.add_argument("--skip-build", action="store_true")
    dsub.add_parser("curate", parents=[common], help="one sample per task, validated, failures queued")
    q = dsub.add_parser("review", parents=[common], help="list, sign or revalidate review entries")
    q.add_argument("--sign", metavar="FILE")
    q.add_argument("--reviewer")
    q.add_argument("--note")
    q.add_argument("--revalidate", action="store_true")
    q = dsub.add_parser("export", parents=[common], help="write SFT records")
    q.add_argument("--out")
    return ap


def resolve_config(args) -> RunConfig:
    data: dict = {}
    if getattr(args, "config", None):
        try:
            data = yamlio.load(Path(args.config).read_text(encoding="utf-8")) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must be a mapping")
    cfg = RunConfig.from_dict(data)
    overrides = {
        "workspace": args.workspace, "adapter": args.adapter, "ks": args.k, "jobs": args.jobs,
        "exclude_harness_errors": args.exclude_harness_errors, "include_reasoning": args.include_reasoning,
        "backend": args.backend, "seed": args.seed, "scheme": args.scheme, "top_m": args.top_m,
    }
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    if args.all_tests:
        cfg.relevant_tests = False
    if args.timeout_compile is not None:
        cfg.timeouts.compile = args.timeout_compile
    if args.timeout_test is not None:
        cfg.timeouts.test = args.timeout_test
    if args.samples is not None:
        try:
            cfg.endpoint = model_client.EndpointConfig.from_dict({**asdict(cfg.endpoint), "n_samples": args.samples})
        except model_client.ConfigurationError as exc:
            raise ConfigError(str(exc)) from exc
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    return cfg


COMMANDS = {
    "index": cmd_index, "tasks": cmd_tasks, "prompt": cmd_prompt, "generate": cmd_generate,
    "validate": cmd_validate, "score": cmd_score, "analyze": cmd_analyze, "dataset": cmd_dataset,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except CliError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return exc.code
    except model_client.ConfigurationError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except runner.HarnessError as exc:
        print(f"error[harness]: {exc}", file=sys.stderr)
        return EXIT_HARNESS
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
