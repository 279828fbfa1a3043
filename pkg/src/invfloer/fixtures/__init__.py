"""Access to the fixtures shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .. import io

_PACKAGE = __name__


def names() -> list[str]:
    return sorted(p.name for p in resources.files(_PACKAGE).iterdir()
                  if p.is_file() and not p.name.startswith(("_", ".")))


def text(name: str) -> str:
    return resources.files(_PACKAGE).joinpath(name).read_text(encoding="utf-8")


def load(name: str):
    return io.loads(text(name))


def resolve(path: str) -> tuple[str, str]:
    """Return (label, text) for a file path or, failing that, a shipped fixture name."""
    p = Path(path)
    if p.is_file():
        return str(p), p.read_text(encoding="utf-8")
    if path in names():
        return f"<fixture {path}>", text(path)
    raise FileNotFoundError(path)
