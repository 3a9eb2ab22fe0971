"""nucleus-vqe CLI entrypoint."""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import astuple
from enum import Enum
from pathlib import Path
from typing import Iterator, Optional

import structlog
import typer
from meltano.edk.logging import default_logging_config, parse_log_level

from nucleus_vqe import APP_NAME
from nucleus_vqe.config import (
    CountsSection,
    EncodeSection,
    GroupsSection,
    RunConfig,
    TablesSection,
    load_config,
)
from nucleus_vqe.counts import count_grid
from nucleus_vqe.encodings import encode
from nucleus_vqe.errors import ConfigError, ContractViolation, OutputError
from nucleus_vqe.grouping import check_groups, group_terms
from nucleus_vqe.hamiltonian import assemble, lowest_eigenvalue
from nucleus_vqe.pauli import MAX_DENSE_QUBITS
from nucleus_vqe.stores import store_for
from nucleus_vqe.stores.base import json_text
from nucleus_vqe.tables import render_tables, tables_json
from nucleus_vqe.vqe import run_schedule, summarize

log = structlog.get_logger(APP_NAME)

typer.core.rich = None  # remove to enable stylized help output when `rich` is installed
app = typer.Typer(
    name=APP_NAME,
    pretty_exceptions_enable=False,
)

EXIT_CODES = {ConfigError: 2, ContractViolation: 3, OutputError: 4}

ConfigOption = typer.Option(
    None, "--config", "-c", dir_okay=False, help="YAML run configuration"
)
SeedOption = typer.Option(None, "--seed", help="Seed overriding the config file")
OutOption = typer.Option(
    None, "--out", file_okay=False, help="Output directory; results go to stdout if omitted"
)
PrecisionOption = typer.Option(
    False, "--full-precision", help="Print energies with 17 significant digits"
)


class TableFormat(str, Enum):
    """Enum of `tables` output formats."""

    text = "text"
    json = "json"


@contextmanager
def _exit_on_error(command: str) -> Iterator[None]:
    try:
        yield
    except (ConfigError, ContractViolation, OutputError) as ex:
        log.error(str(ex), command=command)
        sys.exit(next(code for kind, code in EXIT_CODES.items() if isinstance(ex, kind)))
    except Exception:
        log.exception(
            f"{command} failed with uncaught exception, please report to maintainer"
        )
        sys.exit(1)


def format_energy(value: float, full_precision: bool = False) -> str:
    """MeV with 4 decimals, or 17 significant digits."""
    return f"{value:.17g}" if full_precision else f"{value:.4f}"


def _load(config: Optional[Path], *sections: str) -> RunConfig:
    run_config = load_config(config)
    run_config.require(*sections)
    return run_config


@app.command()
def eigensolve(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    full_precision: bool = PrecisionOption,
) -> None:
    """Lowest eigenvalue of H_{N,K} over the configured (N, K) sweep.

    Sweep points are solved one after another, in config order.
    """
    with _exit_on_error("eigensolve"):
        run_config = _load(config, "hamiltonian")
        section = run_config.hamiltonian
        assert section is not None
        if run_config.sweep is not None:
            sizes, truncations = run_config.sweep.basis_sizes, run_config.sweep.truncations
        else:
            sizes, truncations = [section.basis_size], [section.truncation]
        rows = []
        for size in sizes:
            for truncation in truncations:
                energy = lowest_eigenvalue(assemble(section.spec(size, truncation)))
                log.info("Solved", N=size, K=truncation, energy=energy)
                rows.append((size, truncation, format_energy(energy, full_precision)))
        store_for(out).write_csv("eigensolve.csv", ("N", "K", "energy"), rows)


@app.command(name="encode")
def encode_command(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Encode H_{N,K} as a Pauli sum (JSON plus a rounded listing)."""
    with _exit_on_error("encode"):
        run_config = _load(config, "hamiltonian")
        assert run_config.hamiltonian is not None
        options = run_config.encode or EncodeSection()
        spec = run_config.hamiltonian.spec()
        encoded = encode(assemble(spec), options.encoding, spec.truncation)
        printed = encoded.reverse_qubits() if options.qubit_order == "right" else encoded
        store = store_for(out)
        store.write_json(
            "hamiltonian.json",
            {
                "encoding": options.encoding.value,
                "N": spec.basis_size,
                "K": spec.truncation,
                "pauli": encoded.to_json(),
            },
        )
        store.write("listing.txt", "\n".join(printed.listing(options.decimals)) + "\n")
        log.info("Encoded", encoding=options.encoding.value, terms=len(encoded))


@app.command()
def counts(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Closed-form resource counts next to enumerated ones.

    Grid rows are computed one after another from a single seeded generator.
    """
    with _exit_on_error("counts"):
        run_config = _load(config)
        options = run_config.counts or CountsSection()
        rows = count_grid(
            options.encodings,
            options.sizes,
            options.truncations,
            seed if seed is not None else run_config.seed,
        )
        store_for(out).write_csv(
            "counts.csv",
            (
                "encoding",
                "N",
                "K",
                "terms",
                "qc_sets",
                "dgc_sets",
                "two_qubit_gates",
                "enumerated_terms",
                "enumerated_qc_sets",
                "enumerated_dgc_sets",
                "enumerated_two_qubit_gates",
                "match",
            ),
            (
                (
                    row.encoding.value,
                    row.size,
                    row.truncation,
                    *astuple(row.formula),
                    *astuple(row.enumerated),
                    row.matches,
                )
                for row in rows
            ),
        )
        mismatches = sum(not row.matches for row in rows)
        if mismatches:
            raise ContractViolation(
                f"{mismatches} of {len(rows)} count rows disagree with enumeration"
            )


@app.command()
def groups(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
) -> None:
    """Commuting groups of the encoded Hamiltonian with their rotations."""
    with _exit_on_error("groups"):
        run_config = _load(config, "hamiltonian")
        assert run_config.hamiltonian is not None
        options = run_config.groups or GroupsSection()
        spec = run_config.hamiltonian.spec()
        encoded = encode(assemble(spec), options.encoding, spec.truncation)
        found = group_terms(encoded, options.scheme, options.encoding)
        check_groups(found)
        if encoded.n <= MAX_DENSE_QUBITS:
            for group in found:
                group.sign_table  # raises if the rotation fails to diagonalize
        store_for(out).write_json(
            "groups.json",
            {
                "encoding": options.encoding.value,
                "scheme": options.scheme.value,
                "N": spec.basis_size,
                "K": spec.truncation,
                "terms": len(encoded),
                "two_qubit_gates": sum(g.two_qubit_gate_count for g in found),
                "groups": [group.to_json() for group in found],
            },
        )
        log.info("Grouped", scheme=options.scheme.value, groups=len(found))


@app.command()
def vqe(
    config: Optional[Path] = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    full_precision: bool = PrecisionOption,
) -> None:
    """Run a staged VQE schedule and record its trace."""
    with _exit_on_error("vqe"):
        run_config = _load(config, "hamiltonian", "vqe")
        assert run_config.hamiltonian is not None and run_config.vqe is not None
        options = run_config.vqe
        trace = run_schedule(
            run_config.hamiltonian.spec(),
            options.encoding,
            [stage.model() for stage in options.stages],
            layers=options.layers,
            noise=options.noise.model(),
            seed=seed if seed is not None else run_config.seed,
            spsa=options.spsa.model(),
            gd=options.gd.model(),
            initial_parameters=options.initial_parameters,
        )
        last = min(options.summary_last, len(trace))
        mean, std = summarize(trace, last)
        # everything is serialized before the first file is written
        payloads = {"trace.csv": trace.to_csv(), "run.json": json_text(trace.to_json(last))}
        store = store_for(out)
        for name, content in payloads.items():
            store.write(name, content)
        log.info(
            "VQE finished",
            mean=format_energy(mean, full_precision),
            std=format_energy(std, full_precision),
            last=last,
            exact=format_energy(trace.exact_energy, full_precision),
            nr_value=format_energy(trace.nr_value, full_precision),
        )


@app.command()
def tables(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    output_format: TableFormat = typer.Option(
        TableFormat.text, "--format", help="Output format"
    ),
) -> None:
    """Code tables, flip sequences, flip strings and encoded operators."""
    with _exit_on_error("tables"):
        options = load_config(config).tables or TablesSection()
        store = store_for(out)
        if output_format is TableFormat.json:
            store.write_json("tables.json", tables_json(options.encoding, options.size))
        else:
            store.write("tables.txt", render_tables(options.encoding, options.size) + "\n")


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    log_level: str = typer.Option("INFO", envvar="LOG_LEVEL"),
    log_timestamps: bool = typer.Option(
        False, envvar="LOG_TIMESTAMPS", help="Show timestamp in logs"
    ),
    log_levels: bool = typer.Option(
        False, "--log-levels", envvar="LOG_LEVELS", help="Show log levels"
    ),
    log_json: bool = typer.Option(
        False,
        "--log-json",
        envvar="NUCLEUS_VQE_LOG_JSON",
        help="Log in JSON format",
    ),
) -> None:
    """Neutron-nucleus Hamiltonians on qubits: encodings, grouping and VQE."""
    default_logging_config(
        level=parse_log_level(log_level),
        timestamps=log_timestamps,
        levels=log_levels,
        json_format=log_json,
    )
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
