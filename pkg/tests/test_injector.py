import re
import subprocess

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, GOLDENS
from specgen import injector, java, javatool, yamlio
from specgen.spec_io import SpecCandidate

CASES = ["instance", "static", "void", "overloaded", "generic", "throws"]


def load_case(name):
    d = yamlio.load_strings((FIXTURES / "inject" / f"{name}.yaml").read_text())
    spec = SpecCandidate(
        imports=tuple(ln.strip() for ln in d["import"].splitlines() if ln.strip()),
        pre_ghost=d["pre-ghost"].strip(),
        post_ghost=d["post-ghost"].strip(),
        condition=d["condition"].strip(),
        task_id=f"golden-{name}",
    )
    return (FIXTURES / "inject" / f"{name}.java").read_bytes(), d["class"], d["signature"], spec


def inject(name):
    src, cls, sig, spec = load_case(name)
    site = injector.locate_method(src, cls, sig)
    return injector.instrument(src, site, spec, injector.make_marker(f"golden-{name}", 0))


@pytest.mark.parametrize("name", CASES + ["legend"])
def test_golden(name):
    out = inject(name)
    assert out.text == (GOLDENS / f"{name}.java").read_text()
    assert java.first_error(java.parse(out.text.encode())) is None


def test_legend_layout_order():
    lines = inject("legend").text.splitlines()

    def at(pattern):
        hits = [i for i, ln in enumerate(lines) if re.search(pattern, ln)]
        assert len(hits) == 1, pattern
        return hits[0]

    assert at(r"^import java\.util\.Arrays;$") == 1
    renamed = at(r"public LegendItemCollection getLegendItems_ToBeValidated\(\) \{")
    wrapper = at(r"public LegendItemCollection getLegendItems\(\) \{")
    pre = at(r"List oldItems = this\.items\(\);")
    call = at(r"LegendItemCollection ret = getLegendItems_ToBeValidated\(\);")
    post = at(r"List retItems = ret\.items\(\);")
    guard = at(r"if \(!\(Arrays\.deepEquals")
    throw = at(r'throw new IllegalStateException\("SPEC_VIOLATION::golden-legend::0"\);')
    ret = at(r"^\s+return ret;$")
    assert renamed < wrapper < pre < call < post < guard < throw < ret
    assert lines[wrapper - 1].strip() == "@Override"
    assert "@Override" not in lines[renamed - 1]


def test_void_wrapper_has_no_ret():
    text = inject("void").text
    assert "push_ToBeValidated(s);" in text and " ret " not in text


def test_overload_resolution_picks_string():
    src, cls, _, _ = load_case("overloaded")
    site = injector.locate_method(src, cls, "format(String)")
    assert site.param_types == ("String",)
    assert injector.locate_method(src, cls, "String format(int n)").param_types == ("int",)


def test_errors():
    src = b"""package e;
abstract class E {
    E(int x) {}
    abstract int abs();
    native int nat();
    void f(java.util.List<String> a) {}
    void f(List<Integer> b) {}
    int g() { return 1; }
}
"""
    with pytest.raises(injector.NotFound):
        injector.locate_method(src, "e.E", "missing()")
    with pytest.raises(injector.NotFound):
        injector.locate_method(src, "e.Other", "g()")
    with pytest.raises(injector.AmbiguousOverload):
        injector.locate_method(src, "e.E", "f(List)")
    for sig in ("E(int)", "abs()", "nat()"):
        with pytest.raises(injector.UnsupportedMember):
            injector.locate_method(src, "e.E", sig)


def test_already_instrumented_rejected():
    out = inject("static")
    spec = load_case("static")[3]
    with pytest.raises(injector.AlreadyInstrumented):
        site = injector.locate_method(out.text, "util.Ranges", "clamp(int, int, int)")
        injector.instrument(out.text, site, spec, "OTHER")


def test_imports_deduplicated():
    src, cls, sig, spec = load_case("generic")
    # java.util.List is already imported, only Collections is added
    text = inject("generic").text
    assert text.count("import java.util.List;") == 1
    assert text.count("import java.util.Collections;") == 1


def test_malformed_condition_copied_through():
    src, cls, sig, spec = load_case("static")
    bad = SpecCandidate((), "", "", "ret >=", task_id="t")
    out = injector.instrument(src, injector.locate_method(src, cls, sig), bad, "SPEC_MARK")
    assert "if (!(ret >=)) {" in out.text
    assert java.first_error(java.parse(out.text.encode())) is not None


def test_marker_escaped():
    src, cls, sig, spec = load_case("static")
    out = injector.instrument(src, injector.locate_method(src, cls, sig), spec, 'a"b\\c')
    assert 'new IllegalStateException("a\\"b\\\\c")' in out.text


def test_instrument_file_writes_and_diffs(tmp_path):
    src, cls, sig, spec = load_case("instance")
    path = tmp_path / "Account.java"
    path.write_bytes(src)
    res = injector.instrument_file(path, cls, sig, spec, "MARK")
    assert path.read_text() == res.text
    assert res.diff().startswith("--- a/Account.java")


BODY_EXPR = st.sampled_from(["x + 1", "x * 2", "-x", "x", "Math.abs(x)"])
COND = st.sampled_from(["ret >= 0", "ret == x + 1", "ret != x", "true", "ret > x || ret <= x"])


@given(BODY_EXPR, COND, st.booleans(), st.integers(0, 3))
def test_instrumented_output_parses_and_keeps_body(expr, cond, static, n_other):
    others = "".join(f"    int other{i}(int x) {{ return x; }}\n" for i in range(n_other))
    mod = "public static" if static else "public"
    src = f"package p;\nclass K {{\n{others}    {mod} int f(int x) {{\n        return {expr};\n    }}\n}}\n"
    site = injector.locate_method(src, "p.K", "f(int)")
    out = injector.instrument(src, site, SpecCandidate((), "", "", cond), "MARK")
    assert java.first_error(java.parse(out.text.encode())) is None
    assert f"{mod} int f_ToBeValidated(int x) {{\n        return {expr};" in out.text
    assert out.text.count("MARK") == 1
    assert out.text.count(f"if (!({cond}))") == 1


def _compiles(tool, path, out):
    r = subprocess.run(tool.compile_argv(out, [path]), capture_output=True, text=True)
    return r.returncode == 0, r.stdout + r.stderr


@pytest.mark.jdk
@pytest.mark.parametrize("name", ["instance", "static", "overloaded", "void", "generic"])
def test_goldens_compile(name, tmp_path):
    tool = javatool.find_toolchain()
    if tool is None:
        pytest.skip("no Java toolchain")
    if tool.javac is None and name in ("void", "generic"):
        pytest.skip("janino does not infer generic call-site types")
    ok, log = _compiles(tool, GOLDENS / f"{name}.java", tmp_path)
    assert ok, log
