"""Shared helpers: splittable seeding, batch statistics, CSV formatting."""

from __future__ import annotations

import numpy as np

N_BATCHES = 32


def path_rng(seed, index):
    """Independent generator for one path, derived from (master seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def batch_stderr(samples, n_batches=N_BATCHES):
    """Standard error of the mean by disjoint batch means.

    Falls back to the plain iid formula when there are too few samples to
    fill the batches.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2 * n_batches:
        return float(np.std(x, ddof=1) / np.sqrt(n))
    m = (n // n_batches) * n_batches
    means = x[:m].reshape(n_batches, -1).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(n_batches))


def fmt(x):
    """Full-precision text for one float (17 significant digits)."""
    return format(float(x), ".17g")


def write_csv(path, header, rows):
    """Write a delimited table with full double precision, deterministic bytes."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(c if isinstance(c, str) else fmt(c) for c in row) + "\n")


def loglog_fit(x, y):
    """Least-squares slope/intercept/R^2 of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - float(np.sum(resid**2) / ss_tot) if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2
