"""
Command-line front end of the tensor-product multigrid solver.

Subcommands
-----------
solve       Solve one configuration, write the residual history and summary.
timing      Time per iteration against the number of vertical levels.
verify      Dense checks of the convergence theory on a small instance.
grid-info   Grid statistics and profile summaries.
compare     Both solvers with the three multigrid preconditioners.

Exit codes: 0 converged/pass, 2 not converged, 3 breakdown, divergence or
failed check, 4 configuration error.
"""

import os
import sys
import logging
import argparse

import numba

from lib import RunConfig
from lib.errors import ConfigurationError, TPMGError
from lib.config import (
    DEFAULT_LEVELS,
    DEFAULT_NR,
    COURANT,
    ATMOSPHERE_DEPTH,
    GRADINGS,
    SOLVERS,
    PRECONDITIONERS,
    PREC_ALIASES,
    SMOOTHERS,
    SWEEP_ORDERS,
    COARSE_SOLVERS,
    COARSE_SOLVER,
    TRANSFERS,
    RESTRICTIONS,
    NU_PRE,
    NU_POST,
    RHO_RELAX,
    MU_CYCLES,
    TOL,
    MAX_ITER,
    TIMING_NR,
    RESULTS_DIR,
    CACHE_DIR,
    LOG_DIR,
    EXIT_OK,
    EXIT_NOT_CONVERGED,
    EXIT_FAILED,
    EXIT_CONFIG
)
from run import (
    run_solve,
    run_timing_sweep,
    run_theory_checks,
    run_comparison,
    run_grid_info
)

THEORY_LEVELS = 1
THEORY_NR = 8


def _common_arguments(levels, n_r):

    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--levels", type=int, default=levels, help="Finest icosahedral level L")
    parser.add_argument("--nr", type=int, default=n_r, help="Number of vertical cells")
    parser.add_argument("--N", type=float, default=None, help="Buoyancy frequency (1/s), N* if omitted")
    parser.add_argument("--test-case", default="balanced-flow", choices=["balanced-flow", "external-profiles"])
    parser.add_argument("--profiles", default=None, help="Profile file of the external test case")
    parser.add_argument("--prec-profiles", default=None, help="Factorized profile file of the preconditioner")
    parser.add_argument("--solver", default="richardson", choices=SOLVERS)
    parser.add_argument("--prec", default="full", choices=sorted(set(PRECONDITIONERS) | set(PREC_ALIASES)))
    parser.add_argument("--nu-pre", type=int, default=NU_PRE, help="Presmoothing steps")
    parser.add_argument("--nu-post", type=int, default=NU_POST, help="Postsmoothing steps")
    parser.add_argument("--relax", type=float, default=RHO_RELAX, help="Relaxation factor of the smoother")
    parser.add_argument("--smoother", default="block_sor", choices=SMOOTHERS)
    parser.add_argument("--sweep-order", default="natural", choices=SWEEP_ORDERS)
    parser.add_argument("--coarse-solver", default=COARSE_SOLVER, choices=COARSE_SOLVERS, help="Solve of the coarsest level")
    parser.add_argument("--mu-cycles", type=int, default=MU_CYCLES, help="V-cycles per preconditioner application")
    parser.add_argument("--tol", type=float, default=TOL, help="Target relative residual")
    parser.add_argument("--max-iter", type=int, default=MAX_ITER)
    parser.add_argument("--transfer", default="linear", choices=TRANSFERS)
    parser.add_argument("--restriction", default="sum", choices=RESTRICTIONS)
    parser.add_argument("--omega", type=float, default=None, help="Explicit omega")
    parser.add_argument("--courant", type=float, default=COURANT, help="omega / h_L when --omega is omitted")
    parser.add_argument("--depth", type=float, default=ATMOSPHERE_DEPTH, help="Shell depth (m)")
    parser.add_argument("--grading", default="uniform", choices=GRADINGS)
    parser.add_argument("--ratio", type=float, default=1.0, help="Spacing ratio of the geometric grading")
    parser.add_argument("--perturb-alpha-r", type=float, default=1.0, help="Factor on alpha_r of the preconditioner")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the random right-hand side")
    parser.add_argument("--threads", type=int, default=1, help="Width of the parallel kernels")
    parser.add_argument("--out", default=RESULTS_DIR, help="Output directory")
    parser.add_argument("--cache-dir", default=CACHE_DIR, help="Grid cache directory")
    parser.add_argument("--no-cache", action="store_true", help="Do not cache grid hierarchies")
    return parser


def build_parser():

    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", required=True)
    defaults = _common_arguments(DEFAULT_LEVELS, DEFAULT_NR)
    subparsers.add_parser("solve", parents=[defaults], help="Solve one configuration")
    timing = subparsers.add_parser("timing", parents=[defaults], help="Timing sweep over n_r")
    timing.add_argument("--nr-list", type=int, nargs="+", default=TIMING_NR, help="Sampled n_r values")
    subparsers.add_parser(
        "verify",
        parents=[_common_arguments(THEORY_LEVELS, THEORY_NR)],
        help="Theory checks on a small instance"
    )
    subparsers.add_parser("grid-info", parents=[defaults], help="Grid statistics")
    subparsers.add_parser("compare", parents=[defaults], help="Preconditioner comparison")
    return parser


def config_from_arguments(args):

    return RunConfig(
        levels=args.levels,
        n_r=args.nr,
        N=args.N,
        test_case=args.test_case,
        profiles=args.profiles,
        prec_profiles=args.prec_profiles,
        solver=args.solver,
        prec=args.prec,
        mu_cycles=args.mu_cycles,
        tol=args.tol,
        max_iter=args.max_iter,
        smoother=args.smoother,
        relax=args.relax,
        sweep_order=args.sweep_order,
        nu_pre=args.nu_pre,
        nu_post=args.nu_post,
        coarse_solver=args.coarse_solver,
        transfer=args.transfer,
        restriction=args.restriction,
        omega=args.omega,
        courant=args.courant,
        depth=args.depth,
        grading=args.grading,
        ratio=args.ratio,
        perturb_alpha_r=args.perturb_alpha_r,
        seed=args.seed,
        threads=args.threads,
        out=args.out,
        cache_dir=None if args.no_cache else args.cache_dir
    )


def set_threads(threads):

    if threads > numba.config.NUMBA_NUM_THREADS:
        raise ConfigurationError(
            f"At most {numba.config.NUMBA_NUM_THREADS} threads are available"
        )
    numba.set_num_threads(threads)


def execute(args):

    config = config_from_arguments(args)
    set_threads(config.threads)
    if args.command == "solve":
        code, _ = run_solve(config)
        return code
    if args.command == "timing":
        run_timing_sweep(config, args.nr_list)
        return EXIT_OK
    if args.command == "verify":
        code, _ = run_theory_checks(config)
        return code
    if args.command == "grid-info":
        run_grid_info(config)
        return EXIT_OK
    rows = run_comparison(config)
    converged = all(row["status"] == "converged" for row in rows)
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def main(argv=None):

    args = build_parser().parse_args(argv)
    os.makedirs(LOG_DIR, exist_ok=True)
    logging.basicConfig(
        filename=os.path.join(LOG_DIR, f"{args.command}.log"),
        filemode="w",
        level=logging.DEBUG,
        format="%(message)s",
        force=True
    )
    try:
        return execute(args)
    except ConfigurationError as error:
        logging.error(f"CONFIGURATION ERROR -> {error}")
        print(f"Configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except TPMGError as error:
        logging.error(f"RUN FAILED -> {type(error).__name__}: {error}")
        print(f"{type(error).__name__}: {error}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":

    sys.exit(main())
