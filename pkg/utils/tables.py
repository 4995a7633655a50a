import json
import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.17g"


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    """Deterministic CSV: comma separated, header row, LF endings, 17 significant digits."""
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """Write text through a temporary file in the same directory and rename it into place."""
    path = Path(path)
    if not path.parent.exists():
        path.parent.mkdir(parents=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def write_frame(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    return write_text_atomic(path, frame_to_csv_text(frame))


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def json_text(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, default=_plain) + "\n"


def write_json(data, path: Union[str, Path]) -> Path:
    return write_text_atomic(path, json_text(data))
