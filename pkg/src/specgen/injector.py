"""Source-to-source injection of a postcondition around one Java method.

The target method keeps its body and is renamed ``<name>_ToBeValidated``; a
wrapper with the original signature runs the pre-ghost code, forwards the
call, runs the post-ghost code and throws ``IllegalStateException`` when the
condition is false.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass, field
from pathlib import Path

from specgen import java
from specgen.spec_io import ParseFailure, SpecCandidate

SUFFIX = "_ToBeValidated"
INDENT = "    "


class InjectionError(Exception):
    """Harness-side failure: the target cannot be instrumented at all."""


class NotFound(InjectionError):
    pass


class AmbiguousOverload(InjectionError):
    pass


class UnsupportedMember(InjectionError):
    pass


class AlreadyInstrumented(InjectionError):
    pass


def make_marker(task_id: str, sample: int) -> str:
    return f"SPEC_VIOLATION::{task_id}::{sample}"


@dataclass
class MethodSite:
    class_fqn: str
    name: str
    param_types: tuple[str, ...]
    params: list[tuple[str, str]]
    params_text: str
    modifiers: list[str]
    type_params: str
    return_type: str
    throws: list[str]
    decl_span: tuple[int, int]
    name_span: tuple[int, int]
    body_span: tuple[int, int]
    doc_span: tuple[int, int] | None
    override_spans: list[tuple[int, int]] = field(default_factory=list)
    indent: str = ""
    path: str | None = None

    @property
    def is_static(self) -> bool:
        return "static" in self.modifiers

    @property
    def is_void(self) -> bool:
        return self.return_type == "void"

    @property
    def header_span(self) -> tuple[int, int]:
        return (self.decl_span[0], self.body_span[0])


@dataclass
class InstrumentedFile:
    path: str | None
    original: str
    text: str
    marker: str
    candidate_id: tuple[str, int]

    def diff(self) -> str:
        name = self.path or "source.java"
        return "".join(difflib.unified_diff(
            self.original.splitlines(keepends=True),
            self.text.splitlines(keepends=True),
            fromfile=f"a/{name}",
            tofile=f"b/{name}",
        ))


def _as_bytes(source: str | bytes) -> bytes:
    return source.encode("utf-8") if isinstance(source, str) else source


def _find_class(tree, src: bytes, class_fqn: str) -> java.TypeDecl:
    wanted = class_fqn.replace("$", ".")
    decls = list(java.iter_type_decls(tree, src))
    exact = [d for d in decls if d.qualified_name == wanted]
    if exact:
        return exact[0]
    suffix = [d for d in decls if d.qualified_name.endswith("." + wanted) or wanted.endswith("." + d.qualified_name)]
    if len(suffix) == 1:
        return suffix[0]
    raise NotFound(f"class {class_fqn} not declared in source")


def locate_method(source: str | bytes, class_fqn: str, method_signature: str, path: str | None = None) -> MethodSite:
    """Resolve a signature to exactly one method declaration in ``class_fqn``.

    Parameter types are compared after erasing generics and package
    qualifiers, so ``f(java.util.List<String>)`` matches ``f(List<T> xs)``.
    """
    src = _as_bytes(source)
    tree = java.parse(src)
    key = java.parse_signature(method_signature)
    wanted = tuple(java.normalize_type(t) for t in key.param_types)
    decl = _find_class(tree, src, class_fqn)

    hits = []
    for member in java.member_nodes(decl.node):
        if member.type not in ("method_declaration", "constructor_declaration"):
            continue
        if java.declared_name(member, src) != key.name:
            continue
        params = java.parameters(member, src)
        if tuple(java.normalize_type(t) for t, _ in params) == wanted:
            hits.append((member, params))
    label = f"{decl.qualified_name}.{key.name}({', '.join(key.param_types)})"
    if not hits:
        raise NotFound(f"no method {label}")
    if len(hits) > 1:
        raise AmbiguousOverload(f"{len(hits)} declarations match {label}")
    node, params = hits[0]
    if node.type == "constructor_declaration":
        raise UnsupportedMember(f"{label} is a constructor")
    mods = java.modifier_tokens(node, src)
    body = node.child_by_field_name("body")
    if "native" in mods:
        raise UnsupportedMember(f"{label} is native")
    if body is None:
        raise UnsupportedMember(f"{label} is abstract")

    ret = java.squash(java.text(node.child_by_field_name("type"), src))
    dims = node.child_by_field_name("dimensions")
    if dims is not None:
        ret += java.text(dims, src).replace(" ", "")
    name_node = node.child_by_field_name("name")
    _, doc_span = java.doc_comment(node, src)

    overrides = []
    mods_node = next((c for c in node.children if c.type == "modifiers"), None)
    if mods_node is not None:
        for c in mods_node.children:
            if c.type == "marker_annotation" and java.text(c, src) in ("@Override", "@java.lang.Override"):
                end = c.end_byte
                while end < len(src) and src[end:end + 1] in (b" ", b"\t", b"\n", b"\r"):
                    end += 1
                overrides.append((c.start_byte, end))

    line_start = src.rfind(b"\n", 0, node.start_byte) + 1
    lead = src[line_start:node.start_byte].decode("utf-8", "replace")
    return MethodSite(
        class_fqn=decl.qualified_name,
        name=key.name,
        param_types=tuple(t for t, _ in params),
        params=params,
        params_text=java.squash(java.text(node.child_by_field_name("parameters"), src)),
        modifiers=mods,
        type_params=java.squash(java.text(node.child_by_field_name("type_parameters"), src)),
        return_type=ret,
        throws=java.throws_types(node, src),
        decl_span=(node.start_byte, node.end_byte),
        name_span=(name_node.start_byte, name_node.end_byte),
        body_span=(body.start_byte, body.end_byte),
        doc_span=doc_span,
        override_spans=overrides,
        indent=lead if not lead.strip() else "",
        path=path,
    )


def _java_string(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _statements(block: str, indent: str) -> list[str]:
    lines = block.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        return []
    margin = min(len(ln) - len(ln.lstrip()) for ln in lines if ln.strip())
    return [indent + ln[margin:].rstrip() if ln.strip() else "" for ln in lines]


def render_wrapper(site: MethodSite, spec: SpecCandidate, marker: str) -> str:
    """Wrapper method text (no leading indentation on the first line, no trailing newline)."""
    outer = site.indent
    inner = outer + INDENT
    annotations = [m for m in site.modifiers if m.startswith("@")]
    head = [m for m in site.modifiers if not m.startswith("@")]
    if site.type_params:
        head.append(site.type_params)
    head.append(site.return_type)
    header = " ".join(head) + f" {site.name}{site.params_text}"
    if site.throws:
        header += " throws " + ", ".join(site.throws)
    args = ", ".join(n for _, n in site.params)
    call = f"{site.name}{SUFFIX}({args});"
    condition = " ".join(ln.strip() for ln in spec.condition.splitlines() if ln.strip())

    lines = [a + "\n" + outer for a in annotations]
    lines = ["".join(lines) + header + " {"]
    lines += _statements(spec.pre_ghost, inner)
    lines.append(inner + (call if site.is_void else f"{site.return_type} ret = {call}"))
    lines += _statements(spec.post_ghost, inner)
    lines.append(f"{inner}if (!({condition})) {{")
    lines.append(f'{inner}{INDENT}throw new IllegalStateException("{_java_string(marker)}");')
    lines.append(f"{inner}}}")
    if not site.is_void:
        lines.append(f"{inner}return ret;")
    lines.append(f"{outer}}}")
    return "\n".join(lines)


def _import_edit(src: bytes, tree, imports: tuple[str, ...]) -> tuple[int, bytes] | None:
    present = set()
    package_end = None
    first_decl = None
    for child in tree.root_node.named_children:
        if child.type == "package_declaration":
            package_end = child.end_byte
        elif child.type == "import_declaration":
            present.add(java.squash(java.text(child, src)))
            if first_decl is None:
                first_decl = child.start_byte
        elif child.type in java.TYPE_DECLS and first_decl is None:
            first_decl = child.start_byte
    new = []
    for stmt in imports:
        norm = java.squash(stmt)
        if norm not in present and norm not in new:
            new.append(norm)
    if not new:
        return None
    if package_end is not None:
        return package_end, ("\n" + "\n".join(new)).encode("utf-8")
    return first_decl or 0, ("\n".join(new) + "\n").encode("utf-8")


def instrument(
    source: str | bytes,
    site: MethodSite,
    spec: SpecCandidate,
    marker: str,
) -> InstrumentedFile:
    """Rename the target, append the checking wrapper after it and add missing imports.

    Purely syntactic: a malformed condition is copied through for the compiler to reject.
    """
    if isinstance(spec, ParseFailure):
        raise TypeError("cannot instrument a candidate that failed to parse")
    src = _as_bytes(source)
    original = src.decode("utf-8", "replace")
    if site.name.endswith(SUFFIX) or re.search(rf"\b{re.escape(site.name + SUFFIX)}\s*\(", original):
        raise AlreadyInstrumented(f"{site.class_fqn}.{site.name} is already instrumented")
    if _java_string(marker) in original:
        raise InjectionError(f"marker {marker!r} already occurs in the source")

    tree = java.parse(src)
    edits: list[tuple[int, int, bytes]] = []
    wrapper = render_wrapper(site, spec, marker)
    edits.append((site.decl_span[1], site.decl_span[1], ("\n\n" + site.indent + wrapper).encode("utf-8")))
    edits.append((site.name_span[0], site.name_span[1], (site.name + SUFFIX).encode("utf-8")))
    for start, end in site.override_spans:
        edits.append((start, end, b""))
    imp = _import_edit(src, tree, spec.imports)
    if imp is not None:
        edits.append((imp[0], imp[0], imp[1]))

    out = src
    for start, end, repl in sorted(edits, key=lambda e: (e[0], e[1]), reverse=True):
        out = out[:start] + repl + out[end:]
    text = out.decode("utf-8")
    assert text.count(_java_string(marker)) == 1
    return InstrumentedFile(site.path, original, text, marker, spec.candidate_id)


def instrument_file(
    path: str | Path,
    class_fqn: str,
    method_signature: str,
    spec: SpecCandidate,
    marker: str,
    write: bool = True,
) -> InstrumentedFile:
    """Locate, instrument and (by default) rewrite ``path`` in place, leaving a ``.diff`` beside it."""
    path = Path(path)
    src = path.read_bytes()
    site = locate_method(src, class_fqn, method_signature, path=path.name)
    result = instrument(src, site, spec, marker)
    if write:
        path.write_text(result.text, encoding="utf-8")
    return result
