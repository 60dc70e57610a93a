"""Utility functions for zerosum_forests package"""

import numpy as np


def convert_numpy_to_python(value):
    """Convert numpy scalars to Python native types

    Args:
        value: The value to convert (potentially numpy type)

    Returns:
        The value converted to appropriate Python native type
    """
    if isinstance(value, np.ndarray):
        return [convert_numpy_to_python(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    elif isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, np.floating):
        return float(value)
    elif isinstance(value, np.str_):
        return str(value)

    return value


def convert_numpy_list_to_python(values) -> list:
    """Convert a sequence of potentially numpy values to Python native types"""
    return [convert_numpy_to_python(value) for value in values]
