"""Suite-wide pytest/hypothesis configuration."""

from hypothesis import settings

# Deterministic, load-tolerant property runs: no wall-clock deadline and a
# fixed example stream so failures reproduce exactly.
settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")
