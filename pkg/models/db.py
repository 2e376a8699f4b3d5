import os
import sqlite3

CACHE_ENV = "ERDOS_CACHE_DIR"
CACHE_FILE = "constants.db"


def cache_path():
    """Path of the result cache, or None when ERDOS_CACHE_DIR is unset."""
    directory = os.environ.get(CACHE_ENV)
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, CACHE_FILE)


def connect(path):
    connection = sqlite3.connect(path, check_same_thread=False)
    connection.row_factory = sqlite3.Row
    return connection
