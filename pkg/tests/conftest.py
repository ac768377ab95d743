import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bitt.oracle import GenConfig, generate


@pytest.fixture(scope="session")
def judgments():
    """A mixed corpus of generated well-typed judgments for property tests."""
    return [
        generate(GenConfig(max_depth=5, universe_cap=2, seed=s, cumul_insert_prob=0.3))
        for s in range(200)
    ]
