"""
CLI Module

Command-line interface of the VRJP potential lab.
"""

from src.cli.cli import cli

__all__ = ["cli"]
