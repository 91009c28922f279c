"""On-disk cache of per-n enumerations.

File layout: one line of JSON header ``{"format_version", "n", "count"}``
followed by ``count`` little-endian unsigned 64-bit masks in ascending order.
"""

from __future__ import annotations

import json
import os
import sys
from array import array
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

FORMAT_VERSION = 1


def default_cache_dir() -> Path:
    env = os.environ.get("ESSREL_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "essrel"


def cache_path(cache_dir, n: int) -> Path:
    return Path(cache_dir) / f"essential_n{n}.bin"


def write_masks(path, n: int, masks: Sequence[int]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = array("Q", masks)
    if sys.byteorder != "little":
        data.byteswap()
    header = {"format_version": FORMAT_VERSION, "n": n, "count": len(data)}
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        data.tofile(fh)
    os.replace(tmp, path)


def read_masks(path) -> Tuple[dict, List[int]]:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline())
        if header.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported cache format {header.get('format_version')!r}")
        data = array("Q")
        data.frombytes(fh.read())
    if sys.byteorder != "little":
        data.byteswap()
    if len(data) != header["count"]:
        raise ValueError(f"{path}: header says {header['count']} masks, found {len(data)}")
    masks = data.tolist()
    if any(a >= b for a, b in zip(masks, masks[1:])):
        raise ValueError(f"{path}: masks are not strictly ascending")
    return header, masks


def load_cached(cache_dir, n: int) -> Optional[List[int]]:
    if cache_dir is None:
        return None
    path = cache_path(cache_dir, n)
    if not path.exists():
        return None
    header, masks = read_masks(path)
    if header["n"] != n:
        raise ValueError(f"{path}: cache is for n={header['n']}, wanted n={n}")
    return masks
