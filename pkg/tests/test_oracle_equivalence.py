"""Covariance-matrix engine vs independent number-basis simulation."""
import numpy as np
import pytest

from squint import equivalence_grid


@pytest.fixture(scope="module")
def report():
    return equivalence_grid()


def test_grid_passes(report):
    assert report.passed, report.failures
    assert report.max_deviation <= 1e-8


def test_grid_shape(report):
    # 3 gains x 2 prep losses x 3 imbalances x 5 phases x 3 recombiner settings
    assert report.n_cases == 270
    assert not report.cutoff_errors
    assert report.worst is not None
    assert report.worst.deviation == report.max_deviation
