"""Output serializations: RDF graphs/datasets and SPARQL results.

Graph output delegates to rdflib's conformant writers; the W3C results
formats (JSON, CSV, TSV) are written directly from QueryResult rows.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Optional

from rdflib import BNode, Dataset, Graph, Literal, URIRef
from rdflib.namespace import XSD

from .assembly import METADATA_GRAPH_NAME, FacadeDataset
from .errors import ConfigError
from .query import QueryResult

GRAPH_FORMATS = {"ntriples": "nt", "turtle": "turtle", "trig": "trig"}
RESULT_FORMATS = ("sparql-results-json", "sparql-results-csv", "sparql-results-tsv")


def serialize_graph(graph: Graph, fmt: str) -> str:
    try:
        rdflib_fmt = GRAPH_FORMATS[fmt]
    except KeyError:
        raise ConfigError(f"not a graph format: {fmt!r}")
    if fmt == "trig":
        ds = Dataset(default_union=False)
        for triple in graph:
            ds.default_graph.add(triple)
        return ds.serialize(format="trig")
    return graph.serialize(format=rdflib_fmt)


def serialize_facade_dataset(fd: FacadeDataset, fmt: str) -> str:
    """TriG rendering of data graph + metadata graph."""
    if fmt != "trig":
        raise ConfigError("dataset output (with metadata) requires --format trig")
    ds = Dataset(default_union=False)
    named = ds.graph(URIRef(fd.data_graph_name))
    for triple in fd.data_graph:
        named.add(triple)
    if fd.metadata_graph is not None:
        meta = ds.graph(URIRef(METADATA_GRAPH_NAME))
        for triple in fd.metadata_graph:
            meta.add(triple)
    return ds.serialize(format="trig")


# ---------------------------------------------------------------------------
# SPARQL results


def _json_term(term) -> dict:
    if isinstance(term, URIRef):
        return {"type": "uri", "value": str(term)}
    if isinstance(term, BNode):
        return {"type": "bnode", "value": str(term)}
    if isinstance(term, Literal):
        out = {"type": "literal", "value": str(term)}
        if term.language:
            out["xml:lang"] = term.language
        elif term.datatype:
            out["datatype"] = str(term.datatype)
        return out
    raise ConfigError(f"cannot serialize term {term!r}")


def _tsv_term(term) -> str:
    if isinstance(term, URIRef):
        return f"<{term}>"
    if isinstance(term, BNode):
        return f"_:{term}"
    escaped = (
        str(term)
        .replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )
    out = f'"{escaped}"'
    if term.language:
        return f"{out}@{term.language}"
    if term.datatype and term.datatype != XSD.string:
        return f"{out}^^<{term.datatype}>"
    return out


def serialize_results(result: QueryResult, fmt: str) -> str:
    if fmt == "sparql-results-json":
        if result.kind == "boolean":
            return json.dumps({"head": {}, "boolean": result.boolean}) + "\n"
        doc = {
            "head": {"vars": [str(v) for v in result.vars]},
            "results": {
                "bindings": [
                    {str(v): _json_term(t) for v, t in row.items()}
                    for row in result.solutions
                ]
            },
        }
        return json.dumps(doc, indent=2) + "\n"

    if fmt == "sparql-results-csv":
        if result.kind == "boolean":
            return ("true" if result.boolean else "false") + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow([str(v) for v in result.vars])
        for row in result.solutions:
            writer.writerow(
                [
                    f"_:{t}" if isinstance(t, BNode) else str(t) if t is not None else ""
                    for t in (row.get(v) for v in result.vars)
                ]
            )
        return buf.getvalue()

    if fmt == "sparql-results-tsv":
        if result.kind == "boolean":
            return ("true" if result.boolean else "false") + "\n"
        lines = ["\t".join(f"?{v}" for v in result.vars)]
        for row in result.solutions:
            lines.append(
                "\t".join(
                    _tsv_term(t) if (t := row.get(v)) is not None else ""
                    for v in result.vars
                )
            )
        return "\n".join(lines) + "\n"

    raise ConfigError(f"not a results format: {fmt!r}")
