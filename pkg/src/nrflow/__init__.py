"""Newton-Raphson flow trajectory tracking for quadrotors, with integral
control barrier rate limits, a nonlinear plant and a benchmark harness."""

from nrflow.baseline_pid import BaselineController, PidGains, baseline_step
from nrflow.harness import (
    RunMetrics,
    SimConfig,
    SimulationFault,
    TrajectoryLog,
    read_csv,
    rmse,
    run_closed_loop,
    run_scenario,
    run_suite,
    sweep_alpha,
    tail_metrics,
    write_csv,
)
from nrflow.icbf import BarrierEval, IcbfConfig, clamp_rate_axis, eta_general, evaluate_barrier
from nrflow.nr_controller import (
    ControllerState,
    NewtonRaphsonController,
    NrConfig,
    memoryless_nr_rate,
    nominal_rate,
    step,
)
from nrflow.predictor import (
    PredictorMatrices,
    SystemMatrices,
    build_system_matrices,
    discretize,
    make_predictor,
    output_jacobian,
    predict_output,
)
from nrflow.quad_model import QuadParams, hover_input, make_state, plant_derivative, rk4_step
from nrflow.trajectories import (
    TrajectorySpec,
    benchmark_suite,
    default_spec,
    reference,
    reference_derivative,
    sup_ref_speed,
)

__version__ = "0.1.0"
