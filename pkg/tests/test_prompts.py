import json

import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from conftest import GOLDENS
from specgen import code_index, prompts
from specgen.code_index import SkeletonCorpus
from specgen.prompts import GenerationTask, ManifestError


def toy_task(toy_root):
    return prompts.load_tasks(toy_root / "tasks.jsonl").tasks[0]


def test_toy_prompt_golden(toy_root):
    corpus = code_index.extract_skeletons(toy_root / "fixed")
    doc = prompts.build_prompt(toy_task(toy_root), corpus)
    assert doc.serialized == (GOLDENS / "toy_abs.prompt.yaml").read_text()
    assert doc.warnings == []


def test_four_sections_in_order(toy_root):
    corpus = code_index.extract_skeletons(toy_root / "fixed")
    data = yaml.safe_load(prompts.build_prompt(toy_task(toy_root), corpus).serialized)
    assert tuple(data) == prompts.SECTION_KEYS
    assert "class MathUtil" in data["class_context"]
    assert all("class MathUtil " not in c for c in data["repository_context"])
    assert "@return" in data["target"]["documentation"]
    for key in ("import", "pre-ghost", "post-ghost", "condition", "`ret`"):
        assert key in data["instruction"]


def test_empty_corpus_keeps_sections(toy_root):
    doc = prompts.build_prompt(toy_task(toy_root), SkeletonCorpus([]))
    data = yaml.safe_load(doc.serialized)
    assert data["repository_context"] == [] and data["class_context"] == ""
    assert doc.warnings and "not found" in doc.warnings[0]


def test_prompt_has_no_bodies(toy_root):
    corpus = code_index.extract_skeletons(toy_root / "fixed")
    text = prompts.build_prompt(toy_task(toy_root), corpus).serialized
    assert "calls++" not in text and "return -x" not in text


def test_prompt_deterministic(toy_root):
    corpus = code_index.extract_skeletons(toy_root / "fixed")
    task = toy_task(toy_root)
    assert prompts.build_prompt(task, corpus).serialized == prompts.build_prompt(task, corpus).serialized


def test_doc_only_scheme(toy_root):
    corpus = code_index.extract_skeletons(toy_root / "fixed")
    doc = prompts.build_prompt(toy_task(toy_root), corpus, scheme="doc-only")
    data = yaml.safe_load(doc.serialized)
    assert data["repository_context"] == [] and data["class_context"] == ""
    assert doc.template_hash == prompts.template_hash("doc-only") != prompts.template_hash("full")
    with pytest.raises(ValueError):
        prompts.instruction_template("nope")


def test_read_prompt_checks_sections(tmp_path, toy_root):
    corpus = code_index.extract_skeletons(toy_root / "fixed")
    p = tmp_path / "p.yaml"
    p.write_text(prompts.build_prompt(toy_task(toy_root), corpus).serialized)
    assert tuple(prompts.read_prompt(p)) == prompts.SECTION_KEYS
    p.write_text("target: {}\n")
    with pytest.raises(ValueError):
        prompts.read_prompt(p)


def _row(bug, cls, sig, doc="Does things."):
    return {"project": "Chart", "bug_id": bug, "class_fqn": cls, "method_signature": sig,
            "source_path": cls.replace(".", "/") + ".java", "doc": doc}


def test_manifest_two_bugs_three_tasks(tmp_path):
    rows = [_row("1", "a.B", "int f(int x)"), _row("2", "a.C", "void g()"), _row("2", "a.C", "int h(String s)")]
    path = tmp_path / "m.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
    loaded = prompts.load_tasks(path)
    assert len(loaded.tasks) == 3 and loaded.n_undocumented == 0
    assert len({t.task_id for t in loaded.tasks}) == 3


def test_manifest_empty(tmp_path):
    (tmp_path / "m.jsonl").write_text("")
    assert prompts.load_tasks(tmp_path / "m.jsonl").tasks == []


def test_manifest_undocumented_counted(tmp_path):
    rows = [_row("1", "a.B", "int f(int x)"), _row("1", "a.B", "int g(int x)", doc="")]
    (tmp_path / "m.jsonl").write_text("".join(json.dumps(r) + "\n" for r in rows))
    loaded = prompts.load_tasks(tmp_path / "m.jsonl")
    assert len(loaded.tasks) == 1 and loaded.n_undocumented == 1


def test_manifest_errors_carry_line_number(tmp_path):
    path = tmp_path / "m.jsonl"
    path.write_text(json.dumps(_row("1", "a.B", "int f(int x)")) + "\n{oops\n")
    with pytest.raises(ManifestError, match=r"m.jsonl:2"):
        prompts.load_tasks(path)
    path.write_text(json.dumps({"project": "x"}) + "\n")
    with pytest.raises(ManifestError, match=r":1: missing"):
        prompts.load_tasks(path)


def test_manifest_roundtrip(tmp_path):
    rows = [_row("7", "org.jfree.chart.plot.CategoryPlot", "public LegendItemCollection getLegendItems()")]
    (tmp_path / "a.jsonl").write_text(json.dumps(rows[0]) + "\n")
    tasks = prompts.load_tasks(tmp_path / "a.jsonl").tasks
    prompts.save_tasks(tasks, tmp_path / "b.jsonl")
    assert prompts.load_tasks(tmp_path / "b.jsonl").tasks == tasks


def test_derive_tasks_from_toy(toy_root):
    derived = prompts.derive_tasks(toy_root / "fixed", toy_root / "buggy", "toy", "1")
    assert [t.method_name for t in derived.tasks] == ["abs"]
    task = derived.tasks[0]
    assert task.class_fqn == "toy.MathUtil" and task.source_path == "src/main/java/toy/MathUtil.java"
    assert task.nl_doc.startswith("Returns the absolute value")


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=8),
       st.lists(st.sampled_from(["int", "String", "List<T>", "int[]", "Map<K, V>"]), max_size=3))
def test_task_id_stable_under_spelling(name, params):
    sig_a = f"int {name}(" + ", ".join(f"{p} a{i}" for i, p in enumerate(params)) + ")"
    sig_b = f"public int {name}(" + ", ".join(f"{p}  b{i}" for i, p in enumerate(params)) + ")"
    assert prompts.make_task_id("P", "1", "x.Y", sig_a) == prompts.make_task_id("P", "1", "x.Y", sig_b)


def test_generation_task_bug_key():
    t = GenerationTask("id", "Lang", "a.B", "int f()", "doc", "a/B.java", "3")
    assert t.bug_key == ("Lang", "3") and t.method_name == "f"
