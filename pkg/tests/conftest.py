import json
from pathlib import Path

import pytest

from bunchkit.frames import Frame
from bunchkit.models import sample_library
from bunchkit.syntax import Logic, LogicName


@pytest.fixture(scope="session")
def library():
    return sample_library()


@pytest.fixture
def bbi():
    return Logic(LogicName.BBI)


@pytest.fixture
def two_point(library) -> Frame:
    """e∘e = {e}, e∘a = a∘e = {a}, a∘a = ∅ with E = {e}"""
    return library["bbi-2pt"]


@pytest.fixture
def write_json(tmp_path: Path):
    def write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return write
