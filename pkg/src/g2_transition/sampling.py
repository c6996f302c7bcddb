"""Seeded samples of the transition function and their CSV, JSON and text forms."""

import csv
import io
import json
import logging
from dataclasses import dataclass

import numpy as np

from .config import OutputFormat
from .transition import EquatorPoint, random_equator_points, theta_closed_array

logger = logging.getLogger(__name__)

POINT_COLUMNS = ("u_re", "u_im", "v_re", "v_im", "w_re", "w_im")
MATRIX_COLUMNS = tuple(f"t{row}{column}_{part}" for row in (1, 2, 3) for column in (1, 2, 3) for part in ("re", "im"))


@dataclass(frozen=True)
class TransitionSamples:
    """Equator points in sample order and the transition matrix at each one."""

    seed: int
    points: np.ndarray
    matrices: np.ndarray

    def __len__(self: "TransitionSamples") -> int:
        """Return the number of samples."""
        return int(self.points.shape[0])

    def rows(self: "TransitionSamples") -> np.ndarray:
        """Return one row of 24 reals per sample: the point, then the matrix row-major as re, im pairs."""
        point_reals = np.stack([self.points.real, self.points.imag], axis=-1).reshape(len(self), 6)
        matrix_reals = np.stack([self.matrices.real, self.matrices.imag], axis=-1).reshape(len(self), 18)
        return np.concatenate([point_reals, matrix_reals], axis=-1)


def sample_transition(n: int, seed: int) -> TransitionSamples:
    """Draw n points of S5 and evaluate the closed-form transition at each."""
    rng = np.random.default_rng(seed)
    points = random_equator_points(rng, n)
    logger.debug(f"Sampled {n} equator points with seed {seed}")
    return TransitionSamples(seed, points, theta_closed_array(points))


def to_csv(samples: TransitionSamples) -> str:
    """Render the samples as CSV with a header row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*POINT_COLUMNS, *MATRIX_COLUMNS])
    writer.writerows([repr(float(value)) for value in row] for row in samples.rows())
    return buffer.getvalue()


def to_json(samples: TransitionSamples) -> str:
    """Render the samples as a JSON document."""
    payload = {
        "seed": samples.seed,
        "samples": [
            {
                "z": EquatorPoint.from_vector(point).to_json(),
                "theta": {"rows": [[[entry.real, entry.imag] for entry in row] for row in matrix.tolist()]},
            }
            for point, matrix in zip(samples.points, samples.matrices, strict=True)
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def to_text(samples: TransitionSamples) -> str:
    """Render the samples as aligned text, one point and matrix per block."""
    lines = []
    for index, (point, matrix) in enumerate(zip(samples.points, samples.matrices, strict=True)):
        lines.append(f"[{index}] z = ({', '.join(f'{value:.6f}' for value in point)})")
        lines.extend(f"    {'  '.join(f'{entry:+.6f}' for entry in row)}" for row in matrix)
    return "\n".join(lines) + "\n"


def render(samples: TransitionSamples, output_format: OutputFormat) -> str:
    """Render the samples in the requested format."""
    match output_format:
        case OutputFormat.Csv:
            return to_csv(samples)
        case OutputFormat.Json:
            return to_json(samples)
        case _:
            return to_text(samples)
