import sys
from pathlib import Path

import hypothesis
import pytest

# Add src and the project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root / "src"))
sys.path.insert(0, str(project_root))

from utils.logger import configure_logging  # noqa: E402

hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("ci")


@pytest.fixture(autouse=True)
def log_to_captured_stderr(capsys):
    # Log into this test's captured stderr, then back to the process stderr
    configure_logging()
    yield
    configure_logging(stream=sys.__stderr__)
