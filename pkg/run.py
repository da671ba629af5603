# ======================================================================
#                               run.py
# ----------------------------------------------------------------------
#      This file contains the routines that set up a problem, solve it
#         and record the results of the numerical experiments.
# ----------------------------------------------------------------------

import os
import time
import json
import logging
import statistics

import joblib
import numpy as np
from tqdm import tqdm

from lib import (
    Field,
    PhysicalConstants,
    OperatorParameters,
    SystemOperator,
    SmootherConfig,
    TimingModel,
    build_icosahedral_hierarchy,
    build_vertical_grid,
    grid_summary,
    balanced_flow_profiles,
    factorize_balanced_flow,
    scale_profile,
    level_statistics,
    load_profiles,
    assemble_hatted,
    build_hierarchy_coefficients,
    make_preconditioner,
    solve,
    theory
)
from lib.errors import ConfigurationError
from lib.config import (
    FORMAT_VERSION,
    STATUS_EXIT_CODES,
    EXIT_OK,
    EXIT_FAILED,
    SOLVERS,
    TIMING_NR,
    TIMING_REPETITIONS,
    TIMING_WARMUP,
    DECOUPLING_TOL,
    DECOUPLING_VIOLATION
)

THEORY_EPSILONS = [0.0, 0.1, 0.25]
NEGATIVE_CONTROL_EPSILON = 1.23
COMPARED_PRECONDITIONERS = ["tpmg_full", "tpmg_factorized", "tpmg_partial"]


def load_grids(
    levels, # Finest refinement level
    cache_dir=None # Directory holding cached hierarchies
):

    if cache_dir is None:
        return build_icosahedral_hierarchy(levels)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"icosahedral_L{levels}.joblib")
    if os.path.isfile(path):
        logging.info(f"GRID HIERARCHY LOADED FROM CACHE -> {path}")
        return joblib.load(path)
    grids = build_icosahedral_hierarchy(levels)
    joblib.dump(grids, path)
    logging.info(f"GRID HIERARCHY CACHED -> {path}")
    return grids


def buoyancy_frequency(
    constants, # PhysicalConstants
    epsilon # Separability parameter
):

    return constants.n_star * np.sqrt(1.0 + epsilon)


def operator_parameters(
    config, # RunConfig
    grid, # Finest HorizontalGrid
    constants # PhysicalConstants
):

    if config.omega is None:
        return OperatorParameters.from_courant(config.courant, grid, constants)
    return OperatorParameters(config.omega, constants)


def build_problem(
    config, # RunConfig
    grids=None # GridHierarchy, loaded when omitted
):

    """
    Grids, profiles and the operator of one run.

    Returns (dict)
    --------------
    Keys grids, vertical, constants, params, N, epsilon, full, factorized,
    prec_full, prec_factorized and operator.

    """

    grids = grids or load_grids(config.levels, config.cache_dir)
    constants = PhysicalConstants()
    vertical = build_vertical_grid(
        config.n_r,
        constants.depth(config.depth),
        grading=config.grading,
        ratio=config.ratio
    )
    params = operator_parameters(config, grids.finest, constants)
    N = constants.n_star if config.N is None else config.N

    if config.test_case == "balanced_flow":
        full = balanced_flow_profiles(grids.finest, vertical, N, params, constants)
        factorized = factorize_balanced_flow(
            N, grids.finest, vertical, params, constants
        )
    else:
        full = load_profiles(config.profiles, grids.finest, vertical)
        factorized = full if full.kind == "factorized" else None
        if config.prec_profiles is not None:
            factorized = load_profiles(config.prec_profiles, grids.finest, vertical)
            if factorized.kind != "factorized":
                raise ConfigurationError(
                    f"Preconditioner profiles must be factorized, got {factorized.kind}"
                )

    prec_full, prec_factorized = full, factorized
    if config.perturb_alpha_r != 1.0:
        prec_full = scale_profile(full, "alpha_r", config.perturb_alpha_r)
        if factorized is not None:
            prec_factorized = scale_profile(
                factorized, "alpha_r", config.perturb_alpha_r
            )

    hatted = assemble_hatted(full, grids.finest, vertical, params.omega)
    return {
        "grids": grids,
        "vertical": vertical,
        "constants": constants,
        "params": params,
        "N": N,
        "epsilon": constants.epsilon(N),
        "full": full,
        "factorized": factorized,
        "prec_full": prec_full,
        "prec_factorized": prec_factorized,
        "operator": SystemOperator(hatted)
    }


def build_preconditioner(
    config, # RunConfig
    problem, # Output of build_problem
    prec=None # Overrides config.prec
):

    return make_preconditioner(
        prec or config.prec,
        full=problem["prec_full"],
        factorized=problem["prec_factorized"],
        grids=problem["grids"],
        vertical=problem["vertical"],
        omega=problem["params"].omega,
        mu=config.mu_cycles,
        **config.multigrid_options()
    )


def right_hand_side(
    operator, # SystemOperator
    seed # Seed of the generator
):

    return Field.random(operator.shape, operator.level_index, seed)


def _write_json(path, document):

    with open(path, "w") as results_file:
        results_file.write(json.dumps(document))
    logging.info(f"RESULTS WRITTEN -> {path}")


def _artifact(config, **entries):

    document = {"format_version": FORMAT_VERSION, "config": config.to_dict()}
    document.update(entries)
    return document


def run_solve(
    config, # RunConfig
    name="solve", # Prefix of the artifact files
    problem=None # Reused output of build_problem
):

    """
    Solve one configuration and write `<name>_history.csv` and
    `<name>.json` into config.out.

    Returns (tuple)
    ---------------
    (exit code, summary dict).

    """

    logging.info(
        "**********************************************************\n"
        "********************* SOLVE STARTED **********************\n"
        "**********************************************************\n"
    )
    start = time.perf_counter()
    problem = problem or build_problem(config)
    assembly_seconds = time.perf_counter() - start

    start = time.perf_counter()
    preconditioner = build_preconditioner(config, problem)
    hierarchy_seconds = time.perf_counter() - start

    operator = problem["operator"]
    f = right_hand_side(operator, config.seed)
    start = time.perf_counter()
    _, history = solve(operator, preconditioner, f, config.solver_config())
    solve_seconds = time.perf_counter() - start

    hierarchy = preconditioner.hierarchy
    summary = _artifact(
        config,
        status=history.status,
        iterations=history.n_iterations,
        final_rel_res=history.final_rel_res,
        true_res_norm=history.true_res_norm,
        initial_res_norm=history.initial_norm,
        rate=history.rate(),
        time_per_iteration=history.time_per_iteration(),
        operator_applications=history.operator_applications,
        preconditioner_applications=history.preconditioner_applications,
        omega=problem["params"].omega,
        N=problem["N"],
        epsilon=problem["epsilon"],
        seconds={
            "assembly": assembly_seconds,
            "hierarchy": hierarchy_seconds,
            "solve": solve_seconds
        },
        storage={
            "operator": operator.hatted.storage_size(),
            "preconditioner": hierarchy.storage_size() if hierarchy else 0
        },
        conditioning_ratios=hierarchy.conditioning_ratios() if hierarchy else []
    )
    os.makedirs(config.out, exist_ok=True)
    history.save_csv(os.path.join(config.out, f"{name}_history.csv"))
    _write_json(os.path.join(config.out, f"{name}.json"), summary)

    logging.info(
        "\n================================================\n"
        "              SOLVE COMPLETED              \n"
        "------------------------------------------------\n"
        f"Status = {history.status}\n"
        f"Iterations = {history.n_iterations}\n"
        f"Relative residual = {history.final_rel_res:.3e}\n"
        f"Rate = {history.rate():.4f}\n"
        "================================================\n"
    )
    return STATUS_EXIT_CODES[history.status], summary


def _time_iteration(operator, preconditioner, f, solver):

    # One outer iteration: one product each for Richardson, two for BiCGStab
    applications = 2 if solver == "bicgstab" else 1
    start = time.perf_counter()
    for _ in range(applications):
        correction = preconditioner.apply(f)
        operator.apply(correction)
    return time.perf_counter() - start


def run_timing_sweep(
    config, # RunConfig
    n_r_values=TIMING_NR, # Numbers of vertical levels to sample
    repetitions=TIMING_REPETITIONS, # Timed iterations per sample
    warmup=TIMING_WARMUP # Untimed iterations per sample
):

    """
    Time per iteration against n_r on the horizontal grid of config.

    Every sample is the median of `repetitions` timed iterations after
    `warmup` untimed ones. Writes `timing.json` into config.out.

    Returns (TimingModel)
    ---------------------

    """

    logging.info(
        "**********************************************************\n"
        "********************* TIMING STARTED *********************\n"
        "**********************************************************\n"
    )
    grids = load_grids(config.levels, config.cache_dir)
    seconds = []
    for n_r in tqdm(n_r_values, desc="n_r"):
        sample_config = config.with_changes(n_r=n_r)
        problem = build_problem(sample_config, grids)
        preconditioner = build_preconditioner(sample_config, problem)
        operator = problem["operator"]
        f = right_hand_side(operator, config.seed)
        for _ in range(warmup):
            _time_iteration(operator, preconditioner, f, config.solver)
        times = [
            _time_iteration(operator, preconditioner, f, config.solver)
            for _ in range(repetitions)
        ]
        seconds.append(statistics.median(times))
        logging.info(f"TIMING n_r = {n_r} -> {seconds[-1]:.6f} s per iteration")

    model = TimingModel(n_r_values, seconds)
    os.makedirs(config.out, exist_ok=True)
    _write_json(
        os.path.join(config.out, "timing.json"),
        _artifact(config, timing=model.to_dict())
    )
    logging.info(
        f"TIMING MODEL -> t_iter = {model.intercept:.3e} + {model.slope:.3e} n_r, "
        f"R^2 = {model.r_squared:.4f}, "
        f"intercept share = {model.intercept_share():.3f}"
    )
    return model


def _check(name, value, threshold, passed, status=None):

    status = status or ("pass" if passed else "fail")
    logging.info(f"CHECK {name} -> {value:.3e} (threshold {threshold:.1e}), {status}")
    return {
        "name": name,
        "value": float(value),
        "threshold": float(threshold),
        "passed": bool(passed),
        "status": status
    }


def _theory_operators(config, grids, epsilon):

    constants = PhysicalConstants()
    vertical = build_vertical_grid(
        config.n_r,
        constants.depth(config.depth),
        grading=config.grading,
        ratio=config.ratio
    )
    params = operator_parameters(config, grids.finest, constants)
    N = buoyancy_frequency(constants, epsilon)
    args = (grids.finest, vertical)
    full = scale_profile(
        balanced_flow_profiles(*args, N, params, constants), "xi_r", 0.0
    )
    factorized = scale_profile(
        factorize_balanced_flow(N, *args, params, constants), "xi_r", 0.0
    )
    omega = params.omega
    return {
        "full": assemble_hatted(full, *args, omega),
        "factorized": assemble_hatted(factorized, *args, omega),
        "hierarchy": build_hierarchy_coefficients(
            factorized, grids, vertical, omega, **config.multigrid_options()
        )
    }


def run_theory_checks(
    config, # RunConfig of the desk instance
    epsilons=THEORY_EPSILONS # Separability parameters of the bound checks
):

    """
    Dense checks of the convergence theory on a small instance: vertical
    eigen-decoupling, its violation for non-separable profiles, the
    perturbation bound and the smoothing property.

    Writes `theory.json` into config.out.

    Returns (tuple)
    ---------------
    (exit code, report dict).

    """

    logging.info(
        "**********************************************************\n"
        "***************** THEORY CHECKS STARTED ******************\n"
        "**********************************************************\n"
    )
    grids = load_grids(config.levels, config.cache_dir)
    checks = []
    warnings = []

    separable = _theory_operators(config, grids, 0.0)
    vertical_matrices = theory.factorized_vertical_matrices(separable["factorized"])
    lambdas, vectors = theory.vertical_eigendecomposition(vertical_matrices)
    fac_matrix = theory.theory_matrix(separable["factorized"])
    M_S, A_S = theory.horizontal_matrices(separable["factorized"])
    kron_error = np.abs(
        theory.kron_operator(vertical_matrices, M_S, A_S) - fac_matrix
    ).max() / np.abs(fac_matrix).max()
    checks.append(_check("kron_identity", kron_error, 1e-12, kron_error <= 1e-12))
    coupling = theory.check_subspace_decoupling(fac_matrix, vectors, seed=config.seed)
    checks.append(
        _check("decoupling", coupling, DECOUPLING_TOL, coupling <= DECOUPLING_TOL)
    )

    control = _theory_operators(config, grids, NEGATIVE_CONTROL_EPSILON)
    control_matrices = theory.factorized_vertical_matrices(control["factorized"])
    _, control_vectors = theory.vertical_eigendecomposition(control_matrices)
    violation = theory.check_subspace_decoupling(
        theory.theory_matrix(control["full"]), control_vectors, seed=config.seed
    )
    violated = violation > DECOUPLING_VIOLATION
    checks.append(
        _check(
            "decoupling_negative_control",
            violation,
            DECOUPLING_VIOLATION,
            violated,
            "expected_violation" if violated else "fail"
        )
    )

    perturbations = []
    for epsilon in tqdm(epsilons, desc="perturbation"):
        operators = separable if epsilon == 0.0 else _theory_operators(
            config, grids, epsilon
        )
        report = theory.measure_perturbation(
            operators["full"], operators["hierarchy"], config.mu_cycles
        )
        entry = report.to_dict()
        entry["epsilon"] = epsilon
        perturbations.append(entry)
        if report.status == "out_of_theory":
            warnings.append(f"perturbation at epsilon = {epsilon} is out of theory")
            logging.warning(f"PERTURBATION OUT OF THEORY -> epsilon = {epsilon}")
        checks.append(
            _check(
                f"perturbation_bound_eps_{epsilon}",
                report.rho_full,
                report.bound + report.slack,
                report.status != "fail",
                report.status
            )
        )

    level_matrix = theory.theory_matrix(
        _theory_operators(config, grids, epsilons[-1])["full"]
    )
    scale = np.linalg.norm(level_matrix, 2)
    n_r = config.n_r
    rho_bound = theory.jacobi_relaxation_bound(level_matrix, n_r)
    smoothers = [
        SmootherConfig("block_jacobi", rho_relax=min(rho_bound, 1.0)),
        SmootherConfig("block_sor", rho_relax=config.relax)
    ]
    for smoother in smoothers:
        minimum = theory.check_smoothing_property(level_matrix, n_r, smoother)
        checks.append(
            _check(
                f"smoothing_{smoother.kind}",
                minimum,
                -1e-10 * scale,
                minimum >= -1e-10 * scale
            )
        )

    passed = all(check["passed"] for check in checks)
    report = _artifact(
        config,
        checks=checks,
        perturbations=perturbations,
        vertical_eigenvalues=lambdas.tolist(),
        eigenvalue_spread=float(lambdas.max() / lambdas.min()),
        vertical_normalization=vertical_matrices.normalization,
        jacobi_relaxation_bound=rho_bound,
        warnings=warnings,
        failed=[check["name"] for check in checks if not check["passed"]],
        **{"pass": passed}
    )
    os.makedirs(config.out, exist_ok=True)
    _write_json(os.path.join(config.out, "theory.json"), report)
    logging.info(
        "\n================================================\n"
        "          THEORY CHECKS COMPLETED          \n"
        "------------------------------------------------\n"
        f"Passed = {passed}\n"
        f"Failed checks = {report['failed']}\n"
        "================================================\n"
    )
    return (EXIT_OK if passed else EXIT_FAILED), report


def run_comparison(
    config, # RunConfig
    preconditioners=COMPARED_PRECONDITIONERS # Preconditioners to compare
):

    """
    Both solvers with every preconditioner on one configuration.

    Reports iterations, final relative residual, time per iteration, total
    time and the speedup of the time per iteration relative to TPMG(full).
    Writes `compare.json` into config.out.

    Returns (list)
    --------------
    One row per (solver, preconditioner).

    """

    problem = build_problem(config)
    rows = []
    runs = [(solver, prec) for solver in SOLVERS for prec in preconditioners]
    for solver, prec in tqdm(runs, desc="runs"):
        run_config = config.with_changes(solver=solver, prec=prec)
        preconditioner = build_preconditioner(run_config, problem)
        operator = problem["operator"]
        f = right_hand_side(operator, config.seed)
        start = time.perf_counter()
        _, history = solve(operator, preconditioner, f, run_config.solver_config())
        rows.append({
            "solver": solver,
            "preconditioner": prec,
            "status": history.status,
            "iterations": history.n_iterations,
            "final_rel_res": history.final_rel_res,
            "time_per_iteration": history.time_per_iteration(),
            "total_seconds": time.perf_counter() - start
        })
        logging.info(
            f"COMPARISON {solver} + {prec} -> {history.status}, "
            f"{history.n_iterations} iterations"
        )
    for row in rows:
        reference = next(
            other for other in rows
            if other["solver"] == row["solver"]
            and other["preconditioner"] == preconditioners[0]
        )
        row["speedup"] = (
            reference["time_per_iteration"] / row["time_per_iteration"]
            if row["time_per_iteration"] > 0.0 else None
        )
    os.makedirs(config.out, exist_ok=True)
    _write_json(
        os.path.join(config.out, "compare.json"),
        _artifact(config, epsilon=problem["epsilon"], runs=rows)
    )
    return rows


def run_grid_info(
    config # RunConfig
):

    """Grid statistics and profile summaries, written to `grid_info.json`."""

    problem = build_problem(config)
    hatted = problem["operator"].hatted
    info = _artifact(
        config,
        levels=grid_summary(problem["grids"]),
        vertical=problem["vertical"].to_dict(),
        omega=problem["params"].omega,
        epsilon=problem["epsilon"],
        storage={
            "full": problem["full"].storage_size(),
            "factorized": (
                problem["factorized"].storage_size()
                if problem["factorized"] is not None else None
            ),
            "hatted": hatted.storage_size()
        },
        coarse_conditioning_ratio=hatted.coarse_conditioning_ratio(),
        profile_statistics=level_statistics(problem["full"])
    )
    os.makedirs(config.out, exist_ok=True)
    _write_json(os.path.join(config.out, "grid_info.json"), info)
    return info
