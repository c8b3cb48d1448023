import numpy as np

from .errors import ContractViolation
from .hyper import Identity


def check_layout(system, decoder, x_ref, weighting, residual_rows):
    """Validate shapes shared by Galerkin and LSPG problems.

    Returns ``(x_ref, weighting, rows)`` where `rows` maps velocity rows to
    positions in the (possibly gathered) state; ``None`` means one-to-one.
    """
    x_ref = np.asarray(x_ref, dtype=float)
    if decoder.full_size != system.state_size or x_ref.shape != (system.state_size,):
        raise ContractViolation(
            f"decoder ({decoder.full_size}), reference ({x_ref.shape[0]}) and system "
            f"({system.state_size}) state sizes differ"
        )
    if residual_rows is None:
        if system.velocity_size != system.state_size:
            raise ContractViolation("a sample-mesh system needs residual_rows")
        rows = None
    else:
        rows = np.asarray(residual_rows, dtype=np.intp)
        if rows.shape != (system.velocity_size,):
            raise ContractViolation("residual_rows must have one entry per velocity row")
    if weighting is None:
        weighting = Identity(system.velocity_size)
    if weighting.input_size != system.velocity_size:
        raise ContractViolation(
            f"weighting expects {weighting.input_size} rows, system produces {system.velocity_size}"
        )
    if weighting.output_size < decoder.reduced_size:
        raise ContractViolation(
            f"weighting keeps {weighting.output_size} rows, fewer than {decoder.reduced_size} unknowns"
        )
    return x_ref, weighting, rows


def select_rows(M, rows):
    return M if rows is None else M[rows]
