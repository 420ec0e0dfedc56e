import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from specgen import spec_io
from specgen.spec_io import ParseFailure, SpecCandidate


def legend_output():
    return (FIXTURES / "legend_output.txt").read_text()


def test_legend_output_fixture():
    c = spec_io.parse_model_output(legend_output())
    assert isinstance(c, SpecCandidate)
    assert c.condition == "Arrays.deepEquals(oldItems, retItems)"
    assert c.imports == ("import java.util.Arrays;",)
    assert c.pre_ghost == "List oldItems = this.items();"
    assert c.post_ghost == "List retItems = ret.items();"
    assert c.reasoning.startswith("The method returns a legend item collection")
    assert "<think>" not in c.reasoning
    assert c.raw == legend_output()


def test_unfenced_answer_equals_fenced():
    raw = legend_output().replace("```yaml\n", "").replace("```\n", "")
    assert spec_io.parse_model_output(raw).components() == spec_io.parse_model_output(legend_output()).components()


def test_last_block_wins():
    raw = ("Draft:\n```yaml\ncondition: |\n  ret > 0\n```\nOn reflection zero is allowed.\n"
           "```yaml\ncondition: |\n  ret >= 0\n```\n")
    c = spec_io.parse_model_output(raw)
    assert c.condition == "ret >= 0"
    assert "On reflection" in c.reasoning


@pytest.mark.parametrize("raw,reason", [
    ("I am not sure what to write.", "no-yaml-block"),
    ("```yaml\nimport: |\n  import java.util.List;\ncondition: |\n```\n", "missing-condition"),
    ("```yaml\ncondition: [unclosed\n```\n", "yaml-syntax"),
    ("```yaml\nimport: |\n  not an import at all\ncondition: |\n  true\n```\n", "bad-import"),
    ("", "no-yaml-block"),
])
def test_failures(raw, reason):
    r = spec_io.parse_model_output(raw)
    assert isinstance(r, ParseFailure) and r.reason == reason
    assert r.raw == raw


def test_bare_import_names_normalized():
    raw = "```yaml\nimport: |\n  java.util.Arrays\n  java.util.List;\ncondition: |\n  true\n```\n"
    assert spec_io.parse_model_output(raw).imports == ("import java.util.Arrays;", "import java.util.List;")


def test_key_aliases():
    raw = "```yaml\nimports: |\npre_ghost: |\n  int a = 1;\npostcondition: |\n  ret == a\n```\n"
    c = spec_io.parse_model_output(raw)
    assert c.pre_ghost == "int a = 1;" and c.condition == "ret == a"


@given(st.text(max_size=300))
def test_parser_is_total(raw):
    r = spec_io.parse_model_output(raw)
    assert isinstance(r, (SpecCandidate, ParseFailure))


def test_reasoning_length():
    assert spec_io.reasoning_length("ret != null && ret.contains(x)") == 5
    assert spec_io.reasoning_length("") == 0
    assert spec_io.reasoning_length(spec_io.parse_model_output(legend_output())) == 61  # wc -w over the think block


# generated candidates for the round trip
IDENT = st.from_regex(r"[a-z][A-Za-z0-9]{0,8}", fullmatch=True)
EXPR = st.builds(lambda a, op, b: f"{a} {op} {b}", IDENT, st.sampled_from(["==", "!=", ">=", "<", "&&"]),
                 st.one_of(IDENT, st.integers(0, 99).map(str)))
STMT = st.builds(lambda t, n, e: f"{t} {n} = {e};", st.sampled_from(["int", "List", "String[]"]), IDENT, EXPR)
IMPORT = st.builds(lambda a, b: f"import java.{a}.{b.capitalize()};", IDENT, IDENT)
WORDS = st.lists(st.from_regex(r"[A-Za-z,.()]{1,10}", fullmatch=True), max_size=40).map(" ".join)


@st.composite
def candidates(draw):
    return SpecCandidate(
        imports=tuple(draw(st.lists(IMPORT, max_size=3, unique=True))),
        pre_ghost="\n".join(draw(st.lists(STMT, max_size=3))),
        post_ghost="\n".join(draw(st.lists(STMT, max_size=2))),
        condition="\n".join(draw(st.lists(EXPR, min_size=1, max_size=2))),
        reasoning=draw(WORDS),
    )


@settings(max_examples=50)
@given(candidates())
def test_format_parse_roundtrip(c):
    back = spec_io.parse_model_output(spec_io.format_output(c))
    assert isinstance(back, SpecCandidate)
    assert back.components() == c.components()


def test_candidate_file_roundtrip(tmp_path):
    c = spec_io.parse_model_output(legend_output()).with_id("Chart-1-x", 3)
    spec_io.write_candidate(c, tmp_path / "c.yaml")
    assert spec_io.read_candidate(tmp_path / "c.yaml") == c
    f = spec_io.parse_model_output("nothing").with_id("Chart-1-x", 4)
    spec_io.write_candidate(f, tmp_path / "f.yaml")
    assert spec_io.read_candidate(tmp_path / "f.yaml") == f
