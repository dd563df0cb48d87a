"""fixscout: represent git commits as static-analysis embeddings and learn to spot security fixes."""

__version__ = "0.1.0"
