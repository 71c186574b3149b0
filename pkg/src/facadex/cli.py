"""Command-line surface: triplify, query, and bench subcommands.

Flag names mirror the service-URI option keys exactly, so the CLI and
the SERVICE IRIs share one mental model. Payload goes to stdout,
diagnostics to stderr; exit codes: 0 success, 1 runtime errors, 2 usage
errors.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .assembly import assemble
from .bench import rows_to_csv, scale_harness, token_stats
from .errors import FacadeError
from .query import ExecutionContext, execute_query
from .serialize import (
    GRAPH_FORMATS,
    RESULT_FORMATS,
    serialize_facade_dataset,
    serialize_graph,
    serialize_results,
)
from .service_uri import ServiceSpec
from .triplifiers import TriplifierOptions

_BOOL = click.Choice(["true", "false"])


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Query non-RDF resources with standard SPARQL 1.1."""


@main.command()
@click.argument("location")
@click.option("--csv.headers", "csv_headers", type=_BOOL, default="false",
              help="Use the first CSV row as headers.")
@click.option("--mime-type", "mime_type", default=None,
              help="Override the guessed media type.")
@click.option("--metadata", type=_BOOL, default="false",
              help="Also extract image metadata into a named graph.")
@click.option("--root", "root_iri", default=None,
              help="IRI for the root resource instead of a blank node.")
@click.option("--namespace", default=None,
              help="Namespace for minted properties.")
@click.option("--charset", default=None, help="Text encoding of the resource.")
@click.option("--txt.regex", "txt_regex", default=None,
              help="Tokenizer pattern for plain-text resources.")
@click.option("--format", "fmt", default="turtle",
              type=click.Choice(sorted(GRAPH_FORMATS)),
              help="Output serialization (default: turtle).")
def triplify(location, csv_headers, mime_type, metadata, root_iri, namespace,
             charset, txt_regex, fmt):
    """Print the RDF produced for LOCATION."""
    spec = ServiceSpec(
        location=location,
        media_type_override=mime_type,
        charset=charset,
        namespace=namespace,
        root_iri=root_iri,
        metadata=metadata == "true",
        triplifier_options=TriplifierOptions(
            charset=charset or "utf-8",
            csv_headers=csv_headers == "true",
            text_tokenizer_pattern=txt_regex if txt_regex is not None else " ",
        ),
    )
    try:
        fd = assemble(spec)
        if spec.metadata:
            click.echo(serialize_facade_dataset(fd, fmt), nl=False)
        else:
            click.echo(serialize_graph(fd.data_graph, fmt), nl=False)
    except FacadeError as exc:
        _fail(str(exc))


@main.command()
@click.option("--query", "query_file", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="File holding the SPARQL query.")
@click.option("--output", "fmt", default=None,
              help="Output format: a results format for SELECT/ASK"
                   " (default sparql-results-json), a graph format for"
                   " CONSTRUCT/DESCRIBE (default turtle).")
@click.option("--no-federation", is_flag=True,
              help="Reject SERVICE clauses with non-facade endpoints.")
@click.option("--base", "base_dir", default=".",
              help="Directory for resolving relative locations.")
def query(query_file, fmt, no_federation, base_dir):
    """Execute a SPARQL query, resolving x-sparql-anything: SERVICEs."""
    ctx = ExecutionContext(
        base_directory=base_dir, allow_federation=not no_federation
    )
    try:
        result = execute_query(query_file.read_text(), ctx)
        if result.kind == "graph":
            click.echo(serialize_graph(result.graph, fmt or "turtle"), nl=False)
        else:
            fmt = fmt or "sparql-results-json"
            if fmt not in RESULT_FORMATS:
                raise click.UsageError(f"not a results format: {fmt}")
            click.echo(serialize_results(result, fmt), nl=False)
    except FacadeError as exc:
        _fail(str(exc))


@main.group()
def bench():
    """Token-count and scaling measurements."""


@bench.command()
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False, path_type=Path))
def tokens(files):
    """Per-file and average total/distinct token counts."""
    try:
        stats = token_stats([(f.name, f.read_text()) for f in files])
    except (OSError, FacadeError) as exc:
        _fail(str(exc))
    click.echo("file,total,distinct")
    for name, total, distinct in stats.per_file:
        click.echo(f"{name},{total},{distinct}")
    click.echo(f"average,{stats.avg_total},{stats.avg_distinct}")


@bench.command()
@click.option("--template", "template_file", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON object replicated into the test arrays.")
@click.option("--sizes", required=True,
              help="Comma-separated ascending array sizes, e.g. 10,100,1000.")
@click.option("--query", "query_file", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Query with a %LOCATION% placeholder.")
@click.option("--runs", default=3, show_default=True,
              help="Timed runs per size.")
def scale(template_file, sizes, query_file, runs):
    """Wall-clock triplify+query time per input size, as CSV."""
    import json as json_mod

    try:
        size_list = [int(s) for s in sizes.split(",")]
    except ValueError:
        raise click.UsageError(f"bad size list: {sizes!r}")
    if size_list != sorted(size_list):
        raise click.UsageError("sizes must be ascending")
    try:
        template = json_mod.loads(template_file.read_text())
        rows = scale_harness(template, size_list, query_file.read_text(), runs=runs)
    except (OSError, ValueError, FacadeError) as exc:
        _fail(str(exc))
    click.echo(rows_to_csv(rows), nl=False)


if __name__ == "__main__":
    main()
