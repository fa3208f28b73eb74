from dataclasses import fields
from pathlib import Path
from typing import Any, Dict

import numpy as np


class BaseModel:
    """Mixin for the frozen dataclasses of the simulator."""

    def to_dict(self) -> Dict[str, Any]:
        """Convert model to a JSON-friendly dictionary."""
        result: Dict[str, Any] = {}
        for field in fields(self):  # type: ignore[arg-type]
            value = getattr(self, field.name)
            if isinstance(value, np.ndarray):
                value = value.tolist()
            elif isinstance(value, complex):
                value = [value.real, value.imag]
            elif isinstance(value, Path):
                value = str(value)
            elif isinstance(value, BaseModel):
                value = value.to_dict()
            elif hasattr(value, "value") and isinstance(getattr(value, "value"), str):
                value = value.value
            result[field.name] = value
        return result


def frozen_array(values: Any, dtype: Any) -> np.ndarray:
    """Copy `values` into a read-only array so model snapshots stay immutable."""
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array
