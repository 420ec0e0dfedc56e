"""Deterministic YAML output: insertion-ordered keys, multi-line strings as ``|`` blocks."""

from __future__ import annotations

from typing import Any

import yaml


class _Dumper(yaml.SafeDumper):
    pass


def _str(dumper: yaml.SafeDumper, value: str):
    style = "|" if "\n" in value else None
    return dumper.represent_scalar("tag:yaml.org,2002:str", value, style=style)


_Dumper.add_representer(str, _str)


def dump(data: Any) -> str:
    return yaml.dump(
        data,
        Dumper=_Dumper,
        sort_keys=False,
        allow_unicode=True,
        default_flow_style=False,
        width=1 << 30,
    )


def load(text: str) -> Any:
    return yaml.safe_load(text)


def load_strings(text: str) -> Any:
    """Parse with every scalar kept as a string (``true`` stays ``"true"``)."""
    return yaml.load(text, Loader=yaml.BaseLoader)
