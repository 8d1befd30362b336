"""
Tests for the adaptive Fock cutoff.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from qee_witness.errors import ConvergenceError
from qee_witness.physics.cutoff import choose_cutoff, probe_observables, select_cutoff
from qee_witness.physics.model import thermal_tail_mass
from qee_witness.schemas import CutoffPolicy, PDParams, ThermalSpec


class TestCutoffPolicy:
    """Policy model and its doubling schedule."""

    def test_defaults(self):
        policy = CutoffPolicy()
        assert policy.epsilon == 1e-10
        assert policy.n_max == 512

    def test_schedule(self):
        assert CutoffPolicy(n_max=100).candidate_dims() == [8, 16, 32, 64]

    @pytest.mark.parametrize("kwargs", [{"epsilon": 0.0}, {"epsilon": 1e-3}, {"n_max": 4}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            CutoffPolicy(**kwargs)


class TestChooseCutoff:
    """Doubling search over the observables a run reports."""

    def test_unit_coupling_full_period(self):
        coupling = PDParams(alpha=1 / math.sqrt(2))
        choice = select_cutoff(coupling, coupling, ThermalSpec(theta=0.0), 2 * math.pi, CutoffPolicy())
        assert choice.dim >= 16
        assert choice.residual < 1e-10

    def test_hotter_state_needs_larger_dim(self):
        weak = PDParams(alpha=0.1)
        policy = CutoffPolicy()
        cold = choose_cutoff(weak, weak, ThermalSpec(theta=0.0), 2.0, policy)
        hot = choose_cutoff(weak, weak, ThermalSpec(theta=2.0), 2.0, policy)
        assert hot > cold

    def test_no_coupling_accepts_smallest_dim(self):
        free = PDParams(alpha=0.0)
        assert choose_cutoff(free, free, ThermalSpec(theta=0.0), 2 * math.pi, CutoffPolicy()) == 8

    def test_doubling_changes_observables_below_tolerance(self, entangling_prep, coupled_meas):
        spec = ThermalSpec(theta=0.5)
        t_values = (0.5, 2.0)
        tau_grid = tuple(np.linspace(0.0, 2 * math.pi, 25))
        dim = choose_cutoff(entangling_prep, coupled_meas, spec, 2.0, CutoffPolicy(), t_values=t_values, tau_grid=tau_grid)
        here = probe_observables(entangling_prep, coupled_meas, spec, dim, t_values, tau_grid)
        doubled = probe_observables(entangling_prep, coupled_meas, spec, 2 * dim, t_values, tau_grid)
        assert np.max(np.abs(doubled - here)) < 1e-8

    def test_probe_layout(self, entangling_prep, coupled_meas):
        values = probe_observables(entangling_prep, coupled_meas, ThermalSpec(), 16, (0.0, 1.0), (0.0, 0.5, 1.0))
        # per t: two coherence curves and one trace distance
        assert values.shape == (2 * (2 * 3 + 1),)

    def test_ceiling_reached(self):
        strong = PDParams(alpha=2.0)
        with pytest.raises(ConvergenceError) as excinfo:
            select_cutoff(strong, strong, ThermalSpec(theta=0.0), math.pi, CutoffPolicy(n_max=16))
        err = excinfo.value
        assert err.achieved_residual is not None
        assert err.achieved_residual > 1e-10
        assert "n_max=16" in str(err)

    def test_thermal_tail_beyond_ceiling(self):
        free = PDParams()
        with pytest.raises(ConvergenceError):
            choose_cutoff(free, free, ThermalSpec(theta=20.0), 1.0, CutoffPolicy(n_max=64))

    def test_residual_counts_thermal_tail(self):
        free = PDParams(alpha=0.0)
        spec = ThermalSpec(theta=1.0)
        choice = select_cutoff(free, free, spec, 2.0, CutoffPolicy())
        tail = thermal_tail_mass(spec, choice.dim)
        assert tail > 0
        assert tail <= choice.residual < 1e-10
