# -----------------------------------------------
# Generates external profile files.
#
# Writes the balanced-flow profiles of one grid
# in the profile file format read by
# `cli.py solve --test-case external-profiles`:
# {
#     "format_version": "...",
#     "kind": "full" | "factorized" | "mixed",
#     "grid": {"type", "level", "n_r", "n_cells",
#              "n_edges", "fingerprint"},
#     "layout": "...",
#     "encoding": "decimal" | "base64-f64le",
#     "arrays": {"beta": ..., "alpha_s": ...,
#                "alpha_r": ..., "xi_r": ...}
# }
# The "partial" kind takes alpha_r from the full
# profiles and everything else from the
# factorized ones.
# -----------------------------------------------

import os
import sys
import argparse

sys.path.append(os.path.join(os.path.dirname(__file__), ".."))

from lib import (
    PhysicalConstants,
    OperatorParameters,
    build_icosahedral_hierarchy,
    build_vertical_grid,
    balanced_flow_profiles,
    factorize_balanced_flow,
    build_partial_factorization,
    save_profiles
)
from lib.config import DEFAULT_LEVELS, DEFAULT_NR, COURANT, ATMOSPHERE_DEPTH, ENCODINGS


if __name__ == "__main__":

    parser = argparse.ArgumentParser(description="Write balanced-flow profiles to a file")
    parser.add_argument("path", help="Output file")
    parser.add_argument("--levels", type=int, default=DEFAULT_LEVELS)
    parser.add_argument("--nr", type=int, default=DEFAULT_NR)
    parser.add_argument("--N", type=float, default=None, help="Buoyancy frequency, N* if omitted")
    parser.add_argument("--omega", type=float, default=None)
    parser.add_argument("--courant", type=float, default=COURANT)
    parser.add_argument("--kind", default="full", choices=["full", "factorized", "partial"])
    parser.add_argument("--encoding", default="decimal", choices=ENCODINGS)
    args = parser.parse_args()

    constants = PhysicalConstants()
    grid = build_icosahedral_hierarchy(args.levels).finest
    vertical = build_vertical_grid(args.nr, constants.depth(ATMOSPHERE_DEPTH))
    if args.omega is None:
        params = OperatorParameters.from_courant(args.courant, grid, constants)
    else:
        params = OperatorParameters(args.omega, constants)
    N = constants.n_star if args.N is None else args.N

    if args.kind == "full":
        profiles = balanced_flow_profiles(grid, vertical, N, params, constants)
    elif args.kind == "factorized":
        profiles = factorize_balanced_flow(N, grid, vertical, params, constants)
    else:
        profiles = build_partial_factorization(
            balanced_flow_profiles(grid, vertical, N, params, constants),
            factorize_balanced_flow(N, grid, vertical, params, constants)
        )
    save_profiles(profiles, args.path, encoding=args.encoding)
