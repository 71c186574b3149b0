"""Facade meta-model: containers with uniquely keyed slots holding
containers or values, plus the deterministic mapping to RDF.

The types here are the format-neutral intermediate representation every
triplifier produces. They are immutable; all operations are pure.
"""

from __future__ import annotations

import base64
import binascii
import decimal
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from rdflib import BNode, Graph, Literal, URIRef
from rdflib.namespace import RDF, XSD

from .errors import TreeValidationError

FX_NS = "http://sparql.xyz/facade-x/ns/"
DEFAULT_DATA_NS = "http://sparql.xyz/facade-x/data/"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
ROOT_TYPE = URIRef(FX_NS + "Root")

#: datatype tag -> XSD datatype IRI (plain literal for strings)
DATATYPES = {
    "string": None,
    "integer": XSD.integer,
    "decimal": XSD.decimal,
    "double": XSD.double,
    "boolean": XSD.boolean,
    "base64Binary": XSD.base64Binary,
}


@dataclass(frozen=True)
class StringKey:
    text: str


@dataclass(frozen=True)
class NumberKey:
    index: int


FacadeKey = Union[StringKey, NumberKey]


@dataclass(frozen=True)
class FacadeValue:
    lexical: str
    datatype: str = "string"


@dataclass(frozen=True)
class FacadeContainer:
    """A set of uniquely keyed slots; each slot holds one container or
    one value. Slot order is the source order of the data."""

    slots: tuple = ()  # tuple of (FacadeKey, FacadeContainer | FacadeValue)
    types: frozenset = frozenset()


SlotContent = Union[FacadeContainer, FacadeValue]


@dataclass(frozen=True)
class FacadeTree:
    root: FacadeContainer
    source_name: str = "urn:facade-x:data-source"


@dataclass(frozen=True)
class MintingConfig:
    data_namespace: str = DEFAULT_DATA_NS
    ontology_namespace: str = FX_NS
    root_iri: Optional[str] = None


# ---------------------------------------------------------------------------
# Validation

AXIOM_KEY_UNIQUE = "key-uniqueness"
AXIOM_KEY_VARIANT = "key-variant"
AXIOM_NUMBER_KEY_RANGE = "number-key-range"
AXIOM_STRING_KEY_NONEMPTY = "string-key-nonempty"
AXIOM_SINGLE_PARENT = "slot-single-parent"
AXIOM_SLOT_CONTENT = "slot-content"
AXIOM_VALUE_LEXICAL = "value-lexical-form"


@dataclass(frozen=True)
class Violation:
    axiom: str
    path: str
    message: str

    def __str__(self):
        return f"[{self.axiom}] {self.path}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    def __bool__(self):
        return not self.violations

    @property
    def ok(self):
        return not self.violations


def _key_path(key: FacadeKey) -> str:
    if isinstance(key, StringKey):
        return key.text
    return str(key.index)


def _lexical_ok(value: FacadeValue) -> bool:
    lex, dt = value.lexical, value.datatype
    if dt == "string":
        return True
    if dt == "boolean":
        return lex in ("true", "false", "1", "0")
    try:
        if dt == "integer":
            int(lex)
        elif dt == "decimal":
            decimal.Decimal(lex)
        elif dt == "double":
            float(lex)
        elif dt == "base64Binary":
            base64.b64decode(lex, validate=True)
        else:
            return False
    except (ValueError, ArithmeticError, binascii.Error):
        return False
    return True


def validate_tree(tree: FacadeTree) -> ValidationReport:
    """Check every meta-model axiom; violations are data, not failures."""
    violations = []
    seen_parents = {}  # id(container) -> path of first parent slot

    def visit(container: FacadeContainer, path: str):
        keys_seen = {}
        for key, content in container.slots:
            kp = f"{path}/{_key_path(key)}"
            if isinstance(key, StringKey):
                if not key.text:
                    violations.append(
                        Violation(AXIOM_STRING_KEY_NONEMPTY, kp, "empty string key")
                    )
            elif isinstance(key, NumberKey):
                if key.index < 1:
                    violations.append(
                        Violation(
                            AXIOM_NUMBER_KEY_RANGE,
                            kp,
                            f"number key {key.index} < 1",
                        )
                    )
            else:
                violations.append(
                    Violation(AXIOM_KEY_VARIANT, kp, f"not a key: {key!r}")
                )
            if key in keys_seen:
                violations.append(
                    Violation(
                        AXIOM_KEY_UNIQUE,
                        kp,
                        f"key {_key_path(key)!r} already used at {keys_seen[key]}",
                    )
                )
            else:
                keys_seen[key] = kp
            if isinstance(content, FacadeContainer):
                prev = seen_parents.get(id(content))
                if prev is not None:
                    violations.append(
                        Violation(
                            AXIOM_SINGLE_PARENT,
                            kp,
                            f"container already held by slot {prev}",
                        )
                    )
                    continue  # do not re-walk a shared subtree
                seen_parents[id(content)] = kp
                visit(content, kp)
            elif isinstance(content, FacadeValue):
                if not _lexical_ok(content):
                    violations.append(
                        Violation(
                            AXIOM_VALUE_LEXICAL,
                            kp,
                            f"lexical {content.lexical!r} invalid for"
                            f" {content.datatype}",
                        )
                    )
            else:
                violations.append(
                    Violation(AXIOM_SLOT_CONTENT, kp, f"not a slot content: {content!r}")
                )

    visit(tree.root, "")
    return ValidationReport(tuple(violations))


# ---------------------------------------------------------------------------
# IRI minting

_UNRESERVED = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_."
)


def encode_local_name(text: str) -> str:
    """Percent-encode everything outside letters, digits, ``-``, ``_``,
    ``.`` as UTF-8 octets. Injective and reversible."""
    out = []
    for ch in text:
        if ch in _UNRESERVED:
            out.append(ch)
        else:
            out.extend(f"%{b:02X}" for b in ch.encode("utf-8"))
    return "".join(out)


def mint_key_property(key, config: MintingConfig = MintingConfig()) -> URIRef:
    """IRI for a string-keyed slot's predicate."""
    text = key.text if isinstance(key, StringKey) else str(key)
    return URIRef(config.data_namespace + encode_local_name(text))


def membership_property(index: int) -> URIRef:
    """``rdf:_n`` predicate for a number-keyed slot."""
    if index < 1:
        raise ValueError(f"membership index must be >= 1, got {index}")
    return URIRef(f"{RDF_NS}_{index}")


# ---------------------------------------------------------------------------
# Mapping to RDF


def _literal(value: FacadeValue) -> Literal:
    dt = DATATYPES.get(value.datatype)
    if dt is None:
        return Literal(value.lexical)
    return Literal(value.lexical, datatype=dt)


def tree_to_graph(tree: FacadeTree, config: MintingConfig = MintingConfig()) -> Graph:
    """Apply the mapping rules and return the resulting RDF graph.

    Containers become blank nodes, except the root when
    ``config.root_iri`` is set. Deterministic up to blank-node
    relabeling.
    """
    report = validate_tree(tree)
    if not report.ok:
        raise TreeValidationError(report)

    graph = Graph()
    root_term = URIRef(config.root_iri) if config.root_iri else BNode()
    graph.add((root_term, RDF.type, ROOT_TYPE))

    def emit(container: FacadeContainer, term):
        for label in container.types:
            graph.add(
                (term, RDF.type, URIRef(config.ontology_namespace + encode_local_name(label)))
            )
        for key, content in container.slots:
            if isinstance(key, StringKey):
                pred = mint_key_property(key, config)
            else:
                pred = membership_property(key.index)
            if isinstance(content, FacadeContainer):
                child = BNode()
                graph.add((term, pred, child))
                emit(content, child)
            else:
                graph.add((term, pred, _literal(content)))

    emit(tree.root, root_term)
    return graph


def iter_containers(tree: FacadeTree) -> Iterator[FacadeContainer]:
    """All containers of a tree, root first, depth first."""
    stack = [tree.root]
    while stack:
        c = stack.pop()
        yield c
        for _, content in reversed(c.slots):
            if isinstance(content, FacadeContainer):
                stack.append(content)
