"""Command-line interface and pipeline orchestration."""

from .runconfig import RunConfig, load_run_config

__all__ = ["RunConfig", "load_run_config"]
