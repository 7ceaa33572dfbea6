"""Richardson-extrapolated central differences.

Each estimator has an even error series in the step, so one extrapolation
stage per halving of the step cancels the leading h^2 term.  The returned
disagreement (gap between the last two diagonal entries of the table) is the
accuracy guard used to flag untrusted stencil points.
"""

from __future__ import annotations

import numpy as np


def richardson(estimates):
    """Extrapolate a list of same-shaped estimates at steps h, h/2, h/4, ...

    Returns (value, disagreement); disagreement is elementwise |last - prev|
    over the final two diagonal entries (zero if only one estimate given).
    """
    diag = []
    row = [np.asarray(estimates[0], dtype=float)]
    diag.append(row[0])
    for i in range(1, len(estimates)):
        new_row = [np.asarray(estimates[i], dtype=float)]
        for j in range(1, i + 1):
            factor = 4.0 ** j
            new_row.append((factor * new_row[j - 1] - row[j - 1]) / (factor - 1.0))
        row = new_row
        diag.append(row[-1])
    if len(diag) == 1:
        return diag[0], np.zeros_like(diag[0])
    return diag[-1], np.abs(diag[-1] - diag[-2])


def first_derivative(sample, step: float, refinements: int = 2):
    """d/dx at 0 from sample(offset) -> array, via central differences."""
    steps = [step / 2 ** k for k in range(refinements + 1)]
    estimates = [(sample(h) - sample(-h)) / (2 * h) for h in steps]
    return richardson(estimates)


def second_derivative(sample, step: float, refinements: int = 2):
    """d^2/dx^2 at 0; sample(0.0) is evaluated once and reused."""
    center = sample(0.0)
    steps = [step / 2 ** k for k in range(refinements + 1)]
    estimates = [(sample(h) - 2 * center + sample(-h)) / h ** 2 for h in steps]
    return richardson(estimates)


def mixed_derivative(sample2, step: float, refinements: int = 2):
    """d^2/dxdy at (0,0) from sample2(hx, hy) via the four-corner stencil."""
    steps = [step / 2 ** k for k in range(refinements + 1)]
    estimates = [
        (sample2(h, h) - sample2(h, -h) - sample2(-h, h) + sample2(-h, -h))
        / (4 * h * h)
        for h in steps
    ]
    return richardson(estimates)
