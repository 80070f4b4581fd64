"""Bundled reference scenario (calibrated against the storm targets)."""

import os

_HERE = os.path.dirname(os.path.abspath(__file__))


def reference_dir():
    return os.path.join(_HERE, "reference")


def reference_scenario_path():
    return os.path.join(reference_dir(), "scenario.yaml")


def reference_run_path():
    return os.path.join(reference_dir(), "run.yaml")
