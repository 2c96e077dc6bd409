"""JSON encoding for complex arrays: every complex number is a [re, im] pair."""

import json
from typing import Any

import numpy as np


def complex_to_json(array) -> Any:
    """Nested lists of [re, im] pairs, row-major."""
    array = np.asarray(array, dtype=complex)
    pairs = np.stack([array.real, array.imag], axis=-1)
    return pairs.tolist()


def complex_from_json(data) -> np.ndarray:
    pairs = np.asarray(data, dtype=float)
    if pairs.shape[-1:] != (2,):
        raise ValueError(f"complex data must end in [re, im] pairs, got shape {pairs.shape}")
    return pairs[..., 0] + 1j * pairs[..., 1]


class ArrayEncoder(json.JSONEncoder):
    """Encode numpy scalars and arrays; complex values become [re, im]."""

    def default(self, o):
        if isinstance(o, np.ndarray):
            if np.iscomplexobj(o):
                return complex_to_json(o)
            return o.tolist()
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        return super().default(o)
