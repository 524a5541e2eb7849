import os
import sys
import tempfile
from pathlib import Path


# Write to a temporary file next to the target, then rename over it
def write_atomic(path, text):
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)

    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.remove(temp_name)
        raise
    return path


def frame_to_csv(frame, float_format=None):
    return frame.to_csv(index=False, lineterminator="\n", float_format=float_format, na_rep="")


# CSV to the given path, or to stdout when path is None
def emit_frame(frame, path=None, float_format=None):
    text = frame_to_csv(frame, float_format)
    if path is None:
        sys.stdout.write(text)
        return None
    return write_atomic(path, text)
