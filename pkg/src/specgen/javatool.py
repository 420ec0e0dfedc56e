"""Compile and test small Java projects laid out as ``src/main/java`` + ``src/test/java``.

Used by the bundled toy project. Prefers ``javac`` when present; otherwise
falls back to a JRE plus the janino compiler jars (``SPECGEN_JANINO_CP`` or
``~/.cache/specgen/janino/*.jar``). The JRE is taken from ``JAVA_HOME``,
``PATH`` or the ``jdk4py`` package.

    python -m specgen.javatool compile WORKDIR
    python -m specgen.javatool test WORKDIR
"""

from __future__ import annotations

import argparse
import os
import shutil
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

from specgen import resource_text

RUNNER = "SpecgenTestRunner"
BUILD_DIR = "build/classes"


@dataclass
class Toolchain:
    java: str
    javac: str | None = None
    janino_cp: str | None = None

    def compile_argv(self, out_dir: Path, sources: list[Path]) -> list[str]:
        if self.javac:
            return [self.javac, "-nowarn", "-encoding", "UTF-8", "-d", str(out_dir)] + [str(s) for s in sources]
        return [self.java, "-cp", self.janino_cp, "org.codehaus.commons.compiler.samples.CompilerDemo",
                "-d", str(out_dir), "-encoding", "UTF-8", "-rebuild"] + [str(s) for s in sources]


def _java_binary() -> str | None:
    home = os.environ.get("JAVA_HOME")
    if home and (Path(home) / "bin" / "java").exists():
        return str(Path(home) / "bin" / "java")
    found = shutil.which("java")
    if found:
        return found
    try:
        import jdk4py
    except ImportError:
        return None
    return str(jdk4py.JAVA)


def _janino_cp() -> str | None:
    env = os.environ.get("SPECGEN_JANINO_CP")
    if env:
        return env
    cache = Path.home() / ".cache" / "specgen" / "janino"
    jars = sorted(cache.glob("*.jar"))
    names = " ".join(j.name for j in jars)
    if "janino" in names and "commons-compiler" in names:
        return os.pathsep.join(str(j) for j in jars)
    return None


def find_toolchain() -> Toolchain | None:
    java = _java_binary()
    if java is None:
        return None
    javac = os.environ.get("SPECGEN_JAVAC") or shutil.which("javac")
    if javac:
        return Toolchain(java, javac=javac)
    cp = _janino_cp()
    if cp:
        return Toolchain(java, janino_cp=cp)
    return None


def _sources(workdir: Path) -> list[Path]:
    return sorted(p for d in ("src/main/java", "src/test/java") for p in (workdir / d).rglob("*.java"))


def test_classes(workdir: Path) -> list[str]:
    root = workdir / "src/test/java"
    return [
        ".".join(p.relative_to(root).with_suffix("").parts)
        for p in sorted(root.rglob("*Test.java"))
    ]


def compile_project(workdir: Path, tool: Toolchain) -> int:
    out = workdir / BUILD_DIR
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)
    runner_src = out.parent / f"{RUNNER}.java"
    runner_src.write_text(
        resource_text(f"{RUNNER}.java"),
        encoding="utf-8",
    )
    argv = tool.compile_argv(out, _sources(workdir) + [runner_src])
    return subprocess.call(argv, cwd=workdir)


def run_tests(workdir: Path, tool: Toolchain) -> int:
    for name in ("failing_tests", "all_tests"):
        (workdir / name).unlink(missing_ok=True)
    argv = [tool.java, "-cp", str(workdir / BUILD_DIR), RUNNER, str(workdir)] + test_classes(workdir)
    return subprocess.call(argv, cwd=workdir)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="specgen.javatool")
    ap.add_argument("action", choices=["compile", "test", "probe"])
    ap.add_argument("workdir", nargs="?", default=".")
    args = ap.parse_args(argv)
    tool = find_toolchain()
    if tool is None:
        print("no Java toolchain found (javac, or a JRE with janino jars)", file=sys.stderr)
        return 3
    if args.action == "probe":
        print(tool)
        return 0
    workdir = Path(args.workdir).resolve()
    if args.action == "compile":
        return compile_project(workdir, tool)
    return run_tests(workdir, tool)


if __name__ == "__main__":
    sys.exit(main())
