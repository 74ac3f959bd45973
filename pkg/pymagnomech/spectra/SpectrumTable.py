import asyncio
import concurrent.futures
import functools
import logging
import time

import numpy as np

from pymagnomech.response import (
    ResponseMismatchError, SingularSystemError, convention_sign, probe_spectrum
)


COLUMNS = ("delta", "lambda", "absorption", "dispersion", "transmission", "phase", "tau_eq8", "tau_phase")

# grid points per executor job
CHUNK_SIZE = 512


class SweepError(RuntimeError):
    def __init__(self, message, delta=None):
        super(SweepError, self).__init__(message)
        self.delta = delta


class SpectrumTable:
    def __init__(self, config, grid, columns):
        """
        columns: dict of equal-length arrays keyed by the names in COLUMNS
        (plus optionally "eps_out" and "t_p").
        """
        for name in COLUMNS:
            if name not in columns:
                raise ValueError("missing column %s" % name)
            if len(columns[name]) != len(grid):
                raise ValueError("column %s has %d rows for %d grid points" % (
                    name, len(columns[name]), len(grid)))
        self.config = config
        self.grid = grid
        self.columns = columns

    def __getitem__(self, name):
        return self.columns[name]

    def __len__(self):
        return len(self.grid)

    def delta_over_omega_b(self):
        return self.grid.delta_over_omega_b()

    def rows(self):
        for i in range(len(self)):
            yield tuple(self.columns[name][i] for name in COLUMNS)

    def __repr__(self):
        return "<SpectrumTable %d rows %r>" % (len(self), self.config)


def _evaluate_chunk(config, lam):
    try:
        return probe_spectrum(config, lam)
    except (SingularSystemError, ResponseMismatchError, ValueError) as ex:
        # find the offending point
        for v in lam:
            try:
                probe_spectrum(config, np.array([v]))
            except (SingularSystemError, ResponseMismatchError, ValueError) as point_ex:
                delta = float(config.omega_b + v)
                raise SweepError("sweep failed at delta = %r rad/s: %s" % (delta, point_ex), delta)
        raise SweepError("sweep failed: %s" % ex)


def evaluate_chunks(function, chunks, workers=1):
    """
    Apply function(chunk) to each chunk, in executor threads when
    workers > 1. Results come back in chunk order.
    """
    if workers <= 1 or len(chunks) <= 1:
        return [function(chunk) for chunk in chunks]

    async def run():
        loop = asyncio.get_running_loop()
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [loop.run_in_executor(executor, function, chunk) for chunk in chunks]
            return await asyncio.gather(*futures)
    logging.debug("fanning %d chunks out to %d workers", len(chunks), workers)
    return asyncio.run(run())


def sweep_spectrum(config, grid, workers=1, chunk_size=CHUNK_SIZE):
    start = time.time()
    lam = grid.lambda_values
    chunks = [lam[i:i + chunk_size] for i in range(0, len(lam), chunk_size)]
    logging.info("sweeping %d points (%s grid) for %r", len(lam), grid.refinement, config)
    results = evaluate_chunks(functools.partial(_evaluate_chunk, config), chunks, workers)

    def joined(name):
        return np.concatenate([r[name] for r in results])

    columns = dict(
        delta=grid.delta_values,
        absorption=joined("absorption"),
        dispersion=joined("dispersion"),
        transmission=joined("transmission"),
        phase=joined("phase"),
        tau_eq8=joined("tau_eq8"),
        tau_phase=joined("tau_phase"),
        eps_out=joined("eps_out"),
        t_p=joined("t_p"),
    )
    columns["lambda"] = lam
    logging.info("swept %d points in %.3f s", len(lam), time.time() - start)
    return SpectrumTable(config, grid, columns)


def phase_delay_from_sweep(table):
    """
    Delay from the phase column alone: unwrap by minimal 2 pi jumps, then
    differentiate along the grid.
    """
    if len(table) < 2:
        raise ValueError("need at least two rows to differentiate the phase")
    phase = np.unwrap(table["phase"])
    return convention_sign(table.config) * np.gradient(phase, table["lambda"])
