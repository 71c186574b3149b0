"""Resource fetching and facade dataset assembly.

``assemble`` is the operational pipeline: fetch the bytes, pick a
triplifier, build the facade tree, map it to RDF, and name the
resulting graphs. The whole resource is materialized before query
evaluation; no query-dependent pruning happens here.
"""

from __future__ import annotations

import logging
import os
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from rdflib import BNode, Dataset, Graph, URIRef

from .errors import FacadeError, FetchError, MetadataError
from .model import MintingConfig, tree_to_graph
from .service_uri import ServiceSpec, render_service_uri
from .triplifiers import (
    DEFAULT_REGISTRY,
    IMAGE_MEDIA_TYPES,
    TriplifierRegistry,
    extract_image_metadata,
    guess_media_type,
)

log = logging.getLogger(__name__)

METADATA_GRAPH_NAME = "http://sparql.xyz/facade-x/data/metadata"
DEFAULT_HTTP_TIMEOUT_MS = 30_000


def http_timeout_seconds() -> float:
    raw = os.environ.get("SA_HTTP_TIMEOUT_MS")
    if not raw:
        return DEFAULT_HTTP_TIMEOUT_MS / 1000.0
    return int(raw) / 1000.0


@dataclass(frozen=True)
class FetchedResource:
    data: bytes
    effective_location: str
    declared_media_type: Optional[str] = None
    fetch_time: float = 0.0


def _file_path(location: str, base_dir: Optional[str]) -> Path:
    if location.startswith("file://"):
        path = location[len("file://"):]
    elif location.startswith("file:"):
        path = location[len("file:"):]
    else:
        path = location
    p = Path(path)
    if not p.is_absolute() and base_dir:
        p = Path(base_dir) / p
    return p


def fetch(location: str, base_dir: Optional[str] = None) -> FetchedResource:
    """Retrieve the complete bytes of a file or HTTP(S) resource."""
    now = time.time()
    if location.startswith(("http://", "https://")):
        try:
            req = urllib.request.Request(location)
            with urllib.request.urlopen(req, timeout=http_timeout_seconds()) as resp:
                data = resp.read()
                declared = resp.headers.get("Content-Type")
                return FetchedResource(data, resp.url, declared, now)
        except urllib.error.HTTPError as exc:
            raise FetchError(location, f"HTTP status {exc.code}") from exc
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise FetchError(location, str(exc)) from exc
    path = _file_path(location, base_dir)
    try:
        return FetchedResource(path.read_bytes(), location, None, now)
    except OSError as exc:
        raise FetchError(location, str(exc)) from exc


@dataclass
class FacadeDataset:
    """The named graphs produced for one resource."""

    data_graph_name: str
    data_graph: Graph
    metadata_graph: Optional[Graph] = None

    def to_dataset(self) -> Dataset:
        """An rdflib dataset whose default graph is the data graph and
        whose named graphs are the data graph (under the location name)
        and the metadata graph when present."""
        ds = Dataset(default_union=False)
        default = ds.default_graph
        named = ds.graph(URIRef(self.data_graph_name))
        for triple in self.data_graph:
            default.add(triple)
            named.add(triple)
        if self.metadata_graph is not None:
            meta = ds.graph(URIRef(METADATA_GRAPH_NAME))
            for triple in self.metadata_graph:
                meta.add(triple)
        return ds


def _relabel(graph: Graph) -> Graph:
    mapping: dict = {}

    def fresh(term):
        if isinstance(term, BNode):
            return mapping.setdefault(term, BNode())
        return term

    out = Graph()
    for s, p, o in graph:
        out.add((fresh(s), p, fresh(o)))
    return out


def with_fresh_bnodes(fd: FacadeDataset) -> FacadeDataset:
    """Copy with relabeled blank nodes, so two SERVICE evaluations of
    the same cached resource never co-identify their nodes."""
    meta = _relabel(fd.metadata_graph) if fd.metadata_graph is not None else None
    return FacadeDataset(fd.data_graph_name, _relabel(fd.data_graph), meta)


def assemble(
    spec: ServiceSpec,
    base_dir: Optional[str] = None,
    registry: TriplifierRegistry = DEFAULT_REGISTRY,
    fetch_fn: Callable[..., FetchedResource] = fetch,
) -> FacadeDataset:
    """Fetch, triplify, and map one resource into its named graphs."""
    resource = fetch_fn(spec.location, base_dir)
    media_type = guess_media_type(
        spec.location,
        spec.media_type_override or resource.declared_media_type,
        registry,
    )
    triplifier = registry.triplifier_for(media_type)
    tree = triplifier(
        resource.data, spec.triplifier_options, source_name=spec.location
    )
    config = MintingConfig(
        data_namespace=spec.namespace or MintingConfig.data_namespace,
        root_iri=spec.root_iri,
    )
    data_graph = tree_to_graph(tree, config)

    metadata_graph = None
    if spec.metadata and media_type in IMAGE_MEDIA_TYPES:
        try:
            meta_tree = extract_image_metadata(resource.data, spec.location)
            metadata_graph = tree_to_graph(meta_tree, MintingConfig())
        except MetadataError as exc:
            log.warning("metadata extraction failed for %s: %s", spec.location, exc)
    return FacadeDataset(spec.location, data_graph, metadata_graph)


class DatasetCache:
    """Per-execution cache keyed by the canonical spec rendering.

    Single-flight: concurrent requests for the same key share one
    assembly; later requests for an already-cached key get a
    blank-node-relabeled copy.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._done: dict = {}       # key -> FacadeDataset or FacadeError
        self._inflight: dict = {}   # key -> threading.Event

    def get_or_assemble(
        self, spec: ServiceSpec, producer: Callable[[], FacadeDataset]
    ) -> FacadeDataset:
        key = render_service_uri(spec)
        while True:
            with self._lock:
                if key in self._done:
                    result = self._done[key]
                    if isinstance(result, FacadeError):
                        raise result
                    return with_fresh_bnodes(result)
                event = self._inflight.get(key)
                if event is None:
                    event = threading.Event()
                    self._inflight[key] = event
                    break
            event.wait()
        try:
            result = producer()
        except FacadeError as exc:
            result = exc
        with self._lock:
            self._done[key] = result
            del self._inflight[key]
            event.set()
        if isinstance(result, FacadeError):
            raise result
        return result
