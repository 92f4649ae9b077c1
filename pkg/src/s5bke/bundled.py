"""Access to the proof corpus and model files shipped with the package."""

from __future__ import annotations

from importlib import resources


def _read_dir(subdir: str, suffix: str) -> dict[str, str]:
    root = resources.files("s5bke").joinpath("data", subdir)
    out = {}
    for entry in root.iterdir():
        if entry.name.endswith(suffix):
            out[entry.name] = entry.read_text(encoding="utf-8")
    return dict(sorted(out.items()))


def proof_corpus() -> dict[str, str]:
    """Bundled derivation files, name to file text."""
    return _read_dir("proofs", ".prf")


def model_files() -> dict[str, str]:
    """Bundled model files, name to file text."""
    return _read_dir("models", ".json")
