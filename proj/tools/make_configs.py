#!/usr/bin/env python3
"""Regenerate the experiment configs shipped in configs/.

Each file is a JSON experiment description consumed by the `qpsolve` CLI
(see README.md for the schema). The configs pair a sparse diffusion
coefficient with a manufactured exact solution and list the (N, tau) sweep
axes for the convergence studies.
"""

import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT_DIR = os.path.normpath(os.path.join(HERE, os.pardir, "configs"))

# Time factor of the manufactured solutions: e^{-2*pi*i*t}.
CARRIER = {"re": "0", "im": "-2*pi"}


def blob_modes_1d():
    """Smooth two-frequency wave packet: e^{-(|m|+|n|)} on m, n in [-16, 15]."""
    return [
        ([m, n], math.exp(-(abs(m) + abs(n))), 0.0)
        for m in range(-16, 16)
        for n in range(-16, 16)
    ]


def blob_modes_2d():
    """The 1D wave packet embedded in the first physical axis, plus one
    transverse mode so the second axis participates."""
    modes = [
        ([m, n, 0], math.exp(-(abs(m) + abs(n))), 0.0)
        for m in range(-16, 16)
        for n in range(-16, 16)
    ]
    modes.append(([0, 0, 1], 1.0, 0.0))
    return modes


def three_unit_modes():
    return [([1, 0, 0], 1.0, 0.0), ([0, 1, 0], 1.0, 0.0), ([0, 0, 1], 1.0, 0.0)]


def alpha_1d():
    """6 + cos(y1) + cos(y2) as parent-torus modes (g = 5)."""
    return [
        ([0, 0], 6.0, 0.0),
        ([1, 0], 0.5, 0.0),
        ([-1, 0], 0.5, 0.0),
        ([0, 1], 0.5, 0.0),
        ([0, -1], 0.5, 0.0),
    ]


def alpha_2d():
    """12 + cos(y1) + cos(y2) + cos(y3) as parent-torus modes (g = 7)."""
    modes = [([0, 0, 0], 12.0, 0.0)]
    for axis in range(3):
        for sign in (1, -1):
            k = [0, 0, 0]
            k[axis] = sign
            modes.append((k, 0.5, 0.0))
    return modes


def render_modes(modes, indent):
    lines = []
    for i, (k, re, im) in enumerate(modes):
        sep = "," if i + 1 < len(modes) else ""
        ks = ", ".join(str(c) for c in k)
        lines.append(
            "%s[[%s], %s, %s]%s" % (indent, ks, json.dumps(re), json.dumps(im), sep)
        )
    return lines


def render(cfg):
    lines = ["{"]
    lines.append('  "d": %d,' % cfg["d"])
    lines.append('  "n": %d,' % cfg["n"])
    lines.append('  "projection": %s,' % json.dumps(cfg["projection"]))
    lines.append('  "alpha": [')
    lines.extend(render_modes(cfg["alpha"], "    "))
    lines.append("  ],")
    lines.append('  "exact_solution": {')
    lines.append('    "carrier": %s,' % json.dumps(CARRIER))
    lines.append('    "modes": [')
    lines.extend(render_modes(cfg["modes"], "      "))
    lines.append("    ]")
    lines.append("  },")
    lines.append('  "N_list": %s,' % json.dumps(cfg["N_list"]))
    lines.append('  "tau_list": %s,' % json.dumps(cfg["tau_list"]))
    lines.append('  "T": %s,' % json.dumps(cfg["T"]))
    lines.append('  "solver": {"method": "iterative", "rel_tol": 1e-13},')
    lines.append('  "first_step": "paper_explicit",')
    lines.append('  "sampling": "collocation2x",')
    lines.append('  "convolution": "dealiased"')
    lines.append("}")
    return "\n".join(lines) + "\n"


P_1D = [["1", "sqrt(5)"]]
P_2D_UNSCALED = [["1", "sqrt(5)", "0"], ["0", "0", "1"]]
P_2D_SCALED = [["2*pi", "2*pi*sqrt(5)", "0"], ["0", "0", "2*pi"]]

CONFIGS = {
    "table1_space_1d.json": {
        "d": 1,
        "n": 2,
        "projection": P_1D,
        "alpha": alpha_1d(),
        "modes": blob_modes_1d(),
        "N_list": [4, 8, 16, 32, 64],
        "tau_list": [1e-7],
        "T": 1e-4,
    },
    "table2_time_1d.json": {
        "d": 1,
        "n": 2,
        "projection": P_1D,
        "alpha": alpha_1d(),
        "modes": blob_modes_1d(),
        "N_list": [32],
        "tau_list": [1e-5, 5e-6, 2.5e-6, 1.25e-6],
        "T": 1e-4,
    },
    "table3_space_2d.json": {
        "d": 2,
        "n": 3,
        "projection": P_2D_UNSCALED,
        "alpha": alpha_2d(),
        "modes": blob_modes_2d(),
        "N_list": [4, 8, 16, 32],
        "tau_list": [1e-7],
        "T": 1e-5,
    },
    "table4_time_2d.json": {
        "d": 2,
        "n": 3,
        "projection": P_2D_UNSCALED,
        "alpha": alpha_2d(),
        "modes": blob_modes_2d(),
        "N_list": [32],
        "tau_list": [1e-6, 5e-7, 2.5e-7, 1.25e-7],
        "T": 1e-5,
    },
    "fig1a_tau1e-06.json": {
        "d": 2,
        "n": 3,
        "projection": P_2D_SCALED,
        "alpha": alpha_2d(),
        "modes": three_unit_modes(),
        "N_list": [4, 8, 16, 32],
        "tau_list": [1e-6],
        "T": 1e-2,
    },
    "fig1a_tau1e-12.json": {
        "d": 2,
        "n": 3,
        "projection": P_2D_SCALED,
        "alpha": alpha_2d(),
        "modes": three_unit_modes(),
        "N_list": [4, 8, 16, 32],
        "tau_list": [1e-12],
        "T": 1e-8,
    },
}


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    for name, cfg in sorted(CONFIGS.items()):
        path = os.path.join(OUT_DIR, name)
        with open(path, "w") as fh:
            fh.write(render(cfg))
        print("wrote %s" % path)


if __name__ == "__main__":
    main()
