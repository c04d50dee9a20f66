from qcat.cli.main import cli

__all__ = ["cli"]
