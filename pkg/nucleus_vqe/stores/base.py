"""Base implementation of a result store."""

from __future__ import annotations

import csv
import io
import json
from abc import ABCMeta, abstractmethod
from typing import Any, Iterable, Sequence


def json_text(document: Any) -> str:
    """JSON with sorted keys and a trailing newline."""
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


class OutputStore(metaclass=ABCMeta):
    """Abstract base class for result stores."""

    @property
    @abstractmethod
    def is_persistent(self) -> bool:
        """Whether written results outlive the process."""
        ...

    @abstractmethod
    def write(self, name: str, content: str) -> None:
        """Store `content` under the file name `name`."""
        ...

    def write_json(self, name: str, document: Any) -> None:
        """Store a JSON document with sorted keys."""
        self.write(name, json_text(document))

    def write_csv(
        self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> None:
        """Store rows as CSV under a header line."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        self.write(name, buffer.getvalue())
