"""Cache completed runs as compressed pickles."""

import logging
from pathlib import Path
from typing import Any, Optional, Union

import compress_pickle

logger = logging.getLogger(__name__)

COMPRESSION = "lzma"


def run_cache_path(out_dir: Union[str, Path], index: int) -> Path:
    return Path(out_dir) / f"run_{index}.pkl.{COMPRESSION}"


def write_cache(obj: Any, path: Union[str, Path]) -> Path:
    """Pickle ``obj`` to ``path`` with lzma compression.

    Parameters
    ----------
    obj : Any
        Object to cache
    path : Union[str, Path]
        Destination file

    Returns
    -------
    Path
        Destination file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    compress_pickle.dump(obj, path, compression=COMPRESSION)
    return path


def read_cache(path: Union[str, Path]) -> Optional[Any]:
    """Load a cached object, ``None`` if the file is missing or unreadable.

    Parameters
    ----------
    path : Union[str, Path]
        Cache file

    Returns
    -------
    Optional[Any]
        Cached object
    """
    path = Path(path)
    if not path.exists():
        logger.debug(f"{str(path)} not found in cache...")
        return None
    try:
        return compress_pickle.load(path, compression=COMPRESSION)
    except Exception as e:
        logger.error(f"Error reading cache::{type(e).__name__}: {e}...")
        return None
