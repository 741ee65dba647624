import numpy as np
import pytest

from nlsasym.data import InitialData
from nlsasym.grid import ComplexGrid1D, GridError


def test_families_and_round_trip():
    for fam in ("sech", "gaussian", "zero"):
        d = InitialData(fam, 0.4, center=1.0, phase_slope=0.2)
        assert InitialData.from_dict(d.to_dict()) == d
    with pytest.raises(ValueError):
        InitialData("soliton")


def test_default_half_width_decays():
    for fam in ("sech", "gaussian"):
        g = InitialData(fam, 0.5, center=2.0).sample()
        assert g.edge_ratio() < 1e-10


def test_grid_validation():
    with pytest.raises(GridError):
        ComplexGrid1D(np.array([0.0, 1.0, 3.0]), np.zeros(3))
    with pytest.raises(GridError):
        ComplexGrid1D(np.array([0.0, 1.0]), np.zeros(3))
    g = ComplexGrid1D.periodic(lambda x: np.exp(-x * x), 5.0, 100)
    assert g.xs[0] == -5.0 and g.xs[-1] < 5.0 and g.dx == pytest.approx(0.1)
    assert g.with_values(np.ones(100)).max_abs == 1.0


def test_spline_interpolates():
    g = ComplexGrid1D.from_function(lambda x: np.sin(x) + 1j * x, 0, 3, 301)
    assert abs(g.spline()(1.234) - (np.sin(1.234) + 1.234j)) < 1e-8
