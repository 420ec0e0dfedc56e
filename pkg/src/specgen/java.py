"""Thin helpers over the tree-sitter Java grammar shared by the indexer and injector."""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterator

import tree_sitter_java
from tree_sitter import Language, Node, Parser, Tree

JAVA = Language(tree_sitter_java.language())

_local = threading.local()

TYPE_DECLS = {
    "class_declaration": "class",
    "interface_declaration": "interface",
    "enum_declaration": "enum",
    "record_declaration": "class",
    "annotation_type_declaration": "interface",
}


def parser() -> Parser:
    # Parser objects are not shareable between threads.
    p = getattr(_local, "parser", None)
    if p is None:
        p = _local.parser = Parser(JAVA)
    return p


def parse(source: bytes) -> Tree:
    return parser().parse(source)


def text(node: Node | None, source: bytes) -> str:
    if node is None:
        return ""
    return source[node.start_byte:node.end_byte].decode("utf-8", errors="replace")


def squash(s: str) -> str:
    """Collapse runs of whitespace to a single space."""
    return " ".join(s.split())


def first_error(tree: Tree) -> Node | None:
    """Return the first ERROR or MISSING node in document order, if any."""
    if not tree.root_node.has_error:
        return None
    stack = [tree.root_node]
    while stack:
        node = stack.pop()
        if node.type == "ERROR" or node.is_missing:
            return node
        stack.extend(c for c in reversed(node.children) if c.has_error or c.is_missing)
    return tree.root_node


def package_name(tree: Tree, source: bytes) -> str:
    for child in tree.root_node.named_children:
        if child.type == "package_declaration":
            for c in child.named_children:
                if c.type in ("scoped_identifier", "identifier"):
                    return text(c, source)
    return ""


def doc_comment(node: Node, source: bytes) -> tuple[str | None, tuple[int, int] | None]:
    """Javadoc comment that immediately precedes ``node`` (only whitespace between)."""
    prev = node.prev_sibling
    if prev is None or prev.type != "block_comment":
        return None, None
    body = text(prev, source)
    if not body.startswith("/**"):
        return None, None
    gap = source[prev.end_byte:node.start_byte]
    if gap.strip():
        return None, None
    return body, (prev.start_byte, prev.end_byte)


def doc_text(comment: str) -> str:
    """Comment text without ``/**``, ``*/`` and leading asterisks; tags are kept."""
    body = comment.strip()
    body = body[3:] if body.startswith("/**") else body
    body = body[:-2] if body.endswith("*/") else body
    lines = []
    for ln in body.splitlines():
        ln = ln.strip()
        if ln.startswith("*"):
            ln = ln[1:]
            ln = ln[1:] if ln.startswith(" ") else ln
        lines.append(ln.rstrip())
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def modifier_tokens(node: Node, source: bytes) -> list[str]:
    mods = next((c for c in node.children if c.type == "modifiers"), None)
    if mods is None:
        return []
    return [squash(text(c, source)) for c in mods.children]


def declared_name(node: Node, source: bytes) -> str:
    return text(node.child_by_field_name("name"), source)


@dataclass
class TypeDecl:
    node: Node
    kind: str
    qualified_name: str
    simple_name: str
    depth: int


def iter_type_decls(tree: Tree, source: bytes) -> Iterator[TypeDecl]:
    """Yield top-level and member type declarations, outer before inner.

    Types declared inside method bodies or anonymous classes are not visited.
    """
    pkg = package_name(tree, source)

    def walk(container: Node, prefix: str, depth: int) -> Iterator[TypeDecl]:
        for child in container.named_children:
            kind = TYPE_DECLS.get(child.type)
            if kind is None:
                if child.type == "enum_body_declarations":
                    yield from walk(child, prefix, depth)
                continue
            name = declared_name(child, source)
            fqn = f"{prefix}.{name}" if prefix else name
            yield TypeDecl(child, kind, fqn, name, depth)
            body = child.child_by_field_name("body")
            if body is not None:
                yield from walk(body, fqn, depth + 1)

    yield from walk(tree.root_node, pkg, 0)


def member_nodes(decl: Node) -> list[Node]:
    """Direct member declarations of a type body (enum body declarations flattened)."""
    body = decl.child_by_field_name("body")
    if body is None:
        return []
    out = []
    for child in body.named_children:
        if child.type == "enum_body_declarations":
            out.extend(child.named_children)
        else:
            out.append(child)
    return out


def throws_types(node: Node, source: bytes) -> list[str]:
    t = next((c for c in node.children if c.type == "throws"), None)
    if t is None:
        return []
    return [squash(text(c, source)) for c in t.named_children]


def parameters(node: Node, source: bytes) -> list[tuple[str, str]]:
    """(type text, name) pairs in source order; varargs types end in ``...``."""
    params = node.child_by_field_name("parameters")
    out: list[tuple[str, str]] = []
    if params is None:
        return out
    for p in params.named_children:
        if p.type == "formal_parameter":
            ptype = squash(text(p.child_by_field_name("type"), source))
            dims = p.child_by_field_name("dimensions")
            if dims is not None:
                ptype += squash(text(dims, source)).replace(" ", "")
            out.append((ptype, text(p.child_by_field_name("name"), source)))
        elif p.type == "spread_parameter":
            ptype = ""
            name = ""
            for c in p.named_children:
                if c.type == "modifiers":
                    continue
                if c.type == "variable_declarator":
                    name = text(c.child_by_field_name("name"), source)
                elif not ptype:
                    ptype = squash(text(c, source))
            out.append((ptype + "...", name))
        elif p.type == "receiver_parameter":
            continue
    return out


# Signature strings from manifests, e.g. "public static int abs(int x)" or "f(String)".
_ANNOTATION = re.compile(r"@[\w.]+(\([^)]*\))?\s*")


def split_top_level(s: str, sep: str = ",") -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch in "<([":
            depth += 1
        elif ch in ">)]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur))
    return [p.strip() for p in parts]


@dataclass(frozen=True)
class SignatureKey:
    name: str
    param_types: tuple[str, ...]


def parse_signature(signature: str) -> SignatureKey:
    """Pull the method name and parameter types out of a free-form signature string.

    Accepts full declarations (modifiers, return type, parameter names, throws)
    as well as the bare ``name(Type, Type)`` form.
    """
    sig = signature.strip().rstrip(";{").strip()
    open_paren = sig.find("(")
    close_paren = sig.rfind(")")
    if open_paren < 0 or close_paren < open_paren:
        raise ValueError(f"not a method signature: {signature!r}")
    head = sig[:open_paren].split()
    if not head:
        raise ValueError(f"missing method name: {signature!r}")
    name = head[-1]
    types = []
    for param in split_top_level(sig[open_paren + 1:close_paren]):
        param = _ANNOTATION.sub("", param)
        tokens = [t for t in _tokenize_param(param) if t != "final"]
        if not tokens:
            continue
        if len(tokens) >= 2 and re.fullmatch(r"[A-Za-z_$][\w$]*(\[\])*", tokens[-1]):
            ptype, pname = " ".join(tokens[:-1]), tokens[-1]
            ptype += "[]" * pname.count("[]")
        else:
            ptype = " ".join(tokens)
        types.append(ptype)
    return SignatureKey(name, tuple(types))


def _tokenize_param(param: str) -> list[str]:
    # Split on whitespace that is not inside generic brackets.
    tokens, depth, cur = [], 0, []
    for ch in param:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                tokens.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if cur:
        tokens.append("".join(cur))
    # "String ..." or "String... args" variants
    merged: list[str] = []
    for t in tokens:
        if t.startswith("...") and merged:
            merged[-1] += "..."
            t = t[3:]
            if not t:
                continue
        merged.append(t)
    return merged


def normalize_type(t: str) -> str:
    """Erase generics and package qualifiers; varargs become arrays."""
    t = re.sub(r"\s+", "", t)
    while True:
        stripped = re.sub(r"<[^<>]*>", "", t)
        if stripped == t:
            break
        t = stripped
    t = t.replace("...", "[]")
    base, _, dims = t.partition("[")
    base = base.rsplit(".", 1)[-1]
    return base + ("[" + dims if dims else "")
