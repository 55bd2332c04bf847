"""cardroom: a deterministic, script-driven poker engine and its data tooling."""

__version__ = "0.1.0"
