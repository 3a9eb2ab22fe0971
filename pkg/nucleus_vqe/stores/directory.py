"""Result store that writes files into a directory."""

from __future__ import annotations

from pathlib import Path

import structlog

from nucleus_vqe import APP_NAME
from nucleus_vqe.errors import OutputError
from nucleus_vqe.stores.base import OutputStore

log = structlog.get_logger(APP_NAME)


class DirectoryStore(OutputStore):
    """Result store backed by a directory, created on first write."""

    is_persistent = True

    def __init__(self, root: Path) -> None:
        """Initialize the directory store.

        Args:
            root: Output directory.
        """
        super().__init__()
        self.root = Path(root)

    def write(self, name: str, content: str) -> None:
        """Write `content` to `root/name`.

        Raises:
            OutputError: The directory or file could not be written.
        """
        path = self.root / name
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            path.write_text(content)
        except OSError as ex:
            raise OutputError(f"Unable to write {path}: {ex}") from ex
        log.info("Wrote result", path=str(path))
