"""Repository-aware postcondition generation and test-based validation for Java."""

from importlib import resources

__version__ = "0.1.0"


def resource_text(name: str) -> str:
    return resources.files(__name__).joinpath("resources").joinpath(name).read_text(encoding="utf-8")


def data_path(*parts: str):
    """Filesystem path of bundled data (the toy project and its fixtures)."""
    p = resources.files(__name__).joinpath("data")
    for part in parts:
        p = p.joinpath(part)
    return p
