"""Result store that "stores" by printing results to stdout."""

from __future__ import annotations

import typer

from nucleus_vqe.stores.base import OutputStore


class StdoutStore(OutputStore):
    """Result store which echoes every result to stdout for custom handling."""

    is_persistent = False

    def write(self, name: str, content: str) -> None:
        """Print `content`; the name is not used."""
        typer.echo(content, nl=not content.endswith("\n"))
