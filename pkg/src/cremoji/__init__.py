"""Emoji-aware sentiment and usefulness analysis for code review comments."""

__version__ = "0.1.0"
