"""Result stores."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from nucleus_vqe.stores.base import OutputStore
from nucleus_vqe.stores.directory import DirectoryStore
from nucleus_vqe.stores.stdout import StdoutStore


def store_for(out: Optional[Path]) -> OutputStore:
    """Directory store for `out`, stdout when it is not given."""
    return StdoutStore() if out is None else DirectoryStore(out)
