"""Experiment orchestration: configs, runs, manifests and reports."""
