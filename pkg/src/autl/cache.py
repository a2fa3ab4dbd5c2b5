"""On-disk cache of automorphism groups keyed by the Cayley-table hash."""
from __future__ import annotations

import hashlib
import logging
import os
import tempfile
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .automorphisms import AutomorphismSet
from .core import Group

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _checksum(images: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(images, dtype="<i4").tobytes()).hexdigest()


class AutCache:
    def __init__(self, cache_dir: Optional[str | os.PathLike]):
        self.root = Path(cache_dir) if cache_dir else None
        self.hits = 0
        self.misses = 0

    def path_for(self, G: Group) -> Optional[Path]:
        if self.root is None:
            return None
        return self.root / f"aut-{G.digest}.npz"

    def load(self, G: Group) -> Optional[AutomorphismSet]:
        path = self.path_for(G)
        if path is None or not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as data:
                version = int(data["version"])
                images = np.array(data["images"], dtype=np.int32)
                checksum = str(data["checksum"])
            if version != FORMAT_VERSION or images.ndim != 2 or images.shape[1] != G.order:
                raise ValueError("shape or version mismatch")
            if checksum != _checksum(images):
                raise ValueError("checksum mismatch")
            A = AutomorphismSet(G, images, "Aut")
            if not np.array_equal(A.images, images):
                raise ValueError("rows not in canonical order")
        except Exception as exc:
            log.warning("discarding corrupt cache entry %s: %s", path, exc)
            path.unlink(missing_ok=True)
            return None
        return A

    def store(self, A: AutomorphismSet) -> None:
        path = self.path_for(A.parent)
        if path is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        os.close(fd)
        with open(tmp, "wb") as fh:
            np.savez(fh, version=np.int64(FORMAT_VERSION), images=A.images,
                     checksum=np.array(_checksum(A.images)))
        os.replace(tmp, path)

    def get_or_compute(self, G: Group, compute: Callable[[Group], AutomorphismSet]) -> AutomorphismSet:
        A = self.load(G)
        if A is not None:
            self.hits += 1
            return A
        self.misses += 1
        A = compute(G)
        self.store(A)
        return A
