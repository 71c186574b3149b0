"""facadex: query CSV, JSON, XML, text, and binary resources with
standard SPARQL 1.1 through an overloaded SERVICE operator."""

from .assembly import (
    METADATA_GRAPH_NAME,
    DatasetCache,
    FacadeDataset,
    FetchedResource,
    assemble,
    fetch,
)
from .errors import (
    ConfigError,
    FacadeError,
    FetchError,
    MetadataError,
    QueryError,
    ResourceLimitError,
    ServiceUriError,
    SourceParseError,
    TreeValidationError,
)
from .model import (
    DEFAULT_DATA_NS,
    FX_NS,
    FacadeContainer,
    FacadeTree,
    FacadeValue,
    MintingConfig,
    NumberKey,
    StringKey,
    ValidationReport,
    Violation,
    membership_property,
    mint_key_property,
    tree_to_graph,
    validate_tree,
)
from .query import ExecutionContext, QueryResult, execute_query
from .service_uri import (
    SCHEME,
    ServiceSpec,
    parse_service_uri,
    render_service_uri,
)
from .triplifiers import (
    DEFAULT_REGISTRY,
    TriplifierOptions,
    TriplifierRegistry,
    extract_image_metadata,
    guess_media_type,
    triplify_binary,
    triplify_csv,
    triplify_json,
    triplify_text,
    triplify_xml,
)

__version__ = "0.1.0"
