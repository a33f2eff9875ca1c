"""Agricultural decision toolkit: crop recommendation, fertilizer rules,
leaf-disease prediction with local surrogate explanations, and a news feed,
served over an HTTP API and a CLI."""

__version__ = "0.1.0"
