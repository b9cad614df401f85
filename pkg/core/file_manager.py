"""
Reading and writing the artifacts of the command-line tools.

Every output goes through a temporary file in the destination folder that
is renamed over the target, so a failed command never leaves a truncated
file behind.

Main functions:
- write_text_atomic: Writes a text file atomically.
- write_json: Writes a JSON document with indent=4.
- write_csv: Writes rows with a header line.
- read_json: Reads a JSON document, from a path or an inline literal.
"""

import csv
import io
import json
import os
import tempfile

from core.log import get_logger

logger = get_logger(__name__)


def write_text_atomic(path: str, text: str) -> None:
    """Writes `text` to `path` through a temporary file and a rename.

    Args:
        path (str): Destination file.
        text (str): Content.
    """
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    handle, temp_path = tempfile.mkstemp(dir=folder, prefix='.motionkit-', suffix='.tmp')
    try:
        with os.fdopen(handle, 'w', encoding='utf-8', newline='') as file:
            file.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise
    logger.info('[OUTPUT] wrote %s', path)


def write_json(path: str, data: dict) -> None:
    write_text_atomic(path, json.dumps(data, indent=4) + '\n')


def write_csv(path: str, header: list[str], rows: list[list[float]]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(value)) for value in row])
    write_text_atomic(path, buffer.getvalue())


def read_json(source: str) -> dict:
    """Loads a JSON document from a file, or parses `source` itself when
    it starts with '{'.

    Raises:
        FileNotFoundError: If the file does not exist.
        json.JSONDecodeError: If the content is not JSON.
    """
    if source.lstrip().startswith('{'):
        return json.loads(source)
    if not os.path.exists(source):
        raise FileNotFoundError(f'Input file {source} not found.')
    with open(source, 'r', encoding='utf-8') as file:
        return json.load(file)
