import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, GOLDENS
from specgen import code_index
from specgen.code_index import ClassSkeleton, SkeletonCorpus


def write_synthetic(root, n=20, seed=0):
    """n classes with distinct domain words plus shared boilerplate."""
    rng = random.Random(seed)
    words = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet",
             "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo", "sierra", "tango",
             "uniform", "victor", "whiskey", "xray", "yankee", "zulu"]
    rng.shuffle(words)
    for i in range(n):
        w, v = words[i].capitalize(), words[(i + 7) % len(words)].capitalize()
        pkg = root / "src" / f"p{i % 4}"
        pkg.mkdir(parents=True, exist_ok=True)
        (pkg / f"{w}Service.java").write_text(
            f"package p{i % 4};\n\n"
            f"/** Handles {w.lower()} records. */\n"
            f"public class {w}Service {{\n"
            f"    private int {w.lower()}Count;\n"
            f"    public String get{w}Name(int id) {{ return null; }}\n"
            f"    public void update{w}{v}(String value) {{ }}\n"
            f"    public int size() {{ return 0; }}\n"
            f"}}\n"
        )
    return root


def test_empty_directory(tmp_path):
    corpus = code_index.extract_skeletons(tmp_path)
    assert len(corpus) == 0
    assert corpus.term_index == {} and corpus.doc_freq == {}


def test_unreadable_root(tmp_path):
    with pytest.raises(OSError):
        code_index.extract_skeletons(tmp_path / "missing")


def test_tooltip_class_has_signature_without_body():
    corpus = code_index.extract_skeletons(FIXTURES / "skeleton")
    sk = corpus.get("org.jfree.chart.imagemap.StandardToolTipTagFragmentGenerator")
    assert sk is not None
    sigs = [m.signature() for m in sk.methods]
    assert any("generateToolTipFragment(String toolTipText)" in s for s in sigs)
    rendered = code_index.render_skeleton(sk)
    assert "ImageMapUtils" not in rendered and "title=" not in rendered
    assert "public String generateToolTipFragment(String toolTipText);" in rendered


def test_render_golden():
    corpus = code_index.extract_skeletons(FIXTURES / "skeleton")
    sk = corpus.get("demo.Counter")
    names = [m.name for m in sk.methods]
    assert names == ["add", "reset", "compareTo"]
    assert code_index.render_skeleton(sk) == (GOLDENS / "Counter.skeleton.txt").read_text()


def test_render_empty_class():
    assert code_index.render_skeleton(ClassSkeleton("Foo", "class", "Foo.java")) == "class Foo {\n}\n"


def test_nested_and_enum_types(tmp_path):
    (tmp_path / "Outer.java").write_text(
        "package q;\npublic class Outer {\n  static class Inner { void f() {} }\n"
        "  enum Mode { ON, OFF; boolean on() { return this == ON; } }\n"
        "  interface Cb { int call(int x); }\n}\n"
    )
    corpus = code_index.extract_skeletons(tmp_path)
    names = [s.qualified_name for s in corpus]
    assert {"q.Outer", "q.Outer.Inner", "q.Outer.Mode", "q.Outer.Cb"} == set(names)
    mode = corpus.get("q.Outer.Mode")
    assert mode.kind == "enum" and mode.constants == ["ON", "OFF"]
    cb = corpus.get("q.Outer.Cb")
    assert cb.kind == "interface" and cb.methods[0].body_span is None
    assert corpus.get("q.Outer.Inner").methods[0].body_span is not None


def test_parse_failure_is_reported_not_fatal(tmp_path):
    (tmp_path / "Good.java").write_text("class Good { int x() { return 1; } }\n")
    (tmp_path / "Bad.java").write_text("class Bad { int x( { }\n")
    corpus = code_index.extract_skeletons(tmp_path)
    assert [s.qualified_name for s in corpus] == ["Good"]
    assert [p for p, _ in corpus.report.skipped] == ["Bad.java"]
    assert "WARN skipped Bad.java" in corpus.report.render()


def test_subtokens():
    assert code_index.subtokens("getLegendItems HTML_escape parseURL2x") == [
        "get", "legend", "items", "html", "escape", "parse", "url", "2", "x"]


def test_scores_match_sklearn_tfidf(tmp_path):
    sklearn = pytest.importorskip("sklearn.feature_extraction.text")
    from sklearn.metrics.pairwise import cosine_similarity

    corpus = code_index.extract_skeletons(write_synthetic(tmp_path, 12, seed=4))
    query = "public String getAlphaName(int id) alpha records update"
    vec = sklearn.TfidfVectorizer(tokenizer=code_index.subtokens, lowercase=False, token_pattern=None,
                                  smooth_idf=True, norm="l2")
    docs = vec.fit_transform(corpus.rendered)
    expected = cosine_similarity(vec.transform([query]), docs)[0]
    assert corpus.scores(query) == pytest.approx(list(expected), abs=1e-12)


def test_self_retrieval_rank_one(tmp_path):
    corpus = code_index.extract_skeletons(write_synthetic(tmp_path, 20))
    assert len(corpus) == 20
    for sk in corpus:
        m = sk.methods[0]
        query = code_index.build_query(sk.qualified_name, m.signature(), corpus)
        order = code_index.rank(corpus, query)
        assert corpus.skeletons[order[0]].qualified_name == sk.qualified_name


def test_rank_deterministic_across_rebuilds(tmp_path):
    corpus = code_index.extract_skeletons(write_synthetic(tmp_path, 20))
    shuffled = list(corpus.skeletons)
    random.Random(1).shuffle(shuffled)
    again = SkeletonCorpus(shuffled)
    q = "update records name size"
    a = [corpus.skeletons[i].qualified_name for i in code_index.rank(corpus, q)]
    b = [again.skeletons[i].qualified_name for i in code_index.rank(again, q)]
    assert a == b


def test_rank_ties_break_by_name():
    sks = [ClassSkeleton(f"z.C{i}", "class", f"C{i}.java") for i in (3, 1, 2)]
    corpus = SkeletonCorpus(sks)
    order = code_index.rank(corpus, "nothing matches")
    assert [corpus.skeletons[i].qualified_name for i in order] == ["z.C1", "z.C2", "z.C3"]


def test_pin_puts_owner_first(tmp_path):
    corpus = code_index.extract_skeletons(write_synthetic(tmp_path, 10))
    last = corpus.skeletons[code_index.rank(corpus, "alpha")[-1]].qualified_name
    assert corpus.skeletons[code_index.rank(corpus, "alpha", pin=last)[0]].qualified_name == last


def test_retrieve_budget_and_top_m(tmp_path):
    corpus = code_index.extract_skeletons(write_synthetic(tmp_path, 10))
    q = "name update"
    assert len(code_index.retrieve(corpus, q, top_m=3)) == 3
    assert code_index.retrieve(corpus, q, top_m=0) == []
    small = min(len(r) for r in corpus.rendered)
    got = code_index.retrieve(corpus, q, top_m=10, char_budget=small)
    assert len(got) <= 1
    with pytest.raises(ValueError):
        code_index.retrieve(corpus, q, top_m=-1)


def test_build_query_fallback(caplog):
    corpus = SkeletonCorpus([])
    assert code_index.build_query("a.Missing", "int f(int x)", corpus) == "int f(int x)"
    assert "not in corpus" in caplog.text


def test_cache_roundtrip(tmp_path):
    corpus = code_index.extract_skeletons(FIXTURES / "skeleton")
    corpus.save(tmp_path / "c.json")
    back = SkeletonCorpus.load(tmp_path / "c.json")
    assert back.rendered == corpus.rendered
    assert back.term_index == corpus.term_index
    (tmp_path / "bad.json").write_text('{"magic": "other"}')
    with pytest.raises(ValueError):
        SkeletonCorpus.load(tmp_path / "bad.json")


@given(st.lists(st.from_regex(r"[A-Z][a-z]{2,6}", fullmatch=True), min_size=1, max_size=8, unique=True))
def test_every_skeleton_is_indexed(names):
    sks = [ClassSkeleton(f"g.{n}", "class", f"{n}.java") for n in names]
    corpus = SkeletonCorpus(sks)
    indexed = {i for postings in corpus.term_index.values() for i, _ in postings}
    assert indexed == set(range(len(corpus)))
