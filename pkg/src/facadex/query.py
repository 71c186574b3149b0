"""SPARQL 1.1 evaluation with the SERVICE operator overloaded for
``x-sparql-anything:`` endpoints.

Parsing and all non-SERVICE algebra are delegated to rdflib's
conformant SPARQL 1.1 engine; this module only registers a custom
evaluator that resolves facade SERVICE patterns against assembled
datasets. No syntax extension is involved: every accepted query is
plain SPARQL 1.1.
"""

from __future__ import annotations

import threading
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import pyparsing
from rdflib import Graph, URIRef
from rdflib.plugins.sparql import CUSTOM_EVALS
from rdflib.plugins.sparql.algebra import translateGroupGraphPattern
from rdflib.plugins.sparql.evaluate import evalPart
from rdflib.plugins.sparql.sparql import FrozenBindings, QueryContext
from rdflib.term import Variable

from .assembly import DatasetCache, assemble, fetch
from .errors import FacadeError, QueryError, ResourceLimitError
from .service_uri import is_facade_iri, parse_service_uri

DEFAULT_FETCH_BUDGET = 1000


@dataclass
class ExecutionContext:
    """State scoped to a single query execution."""

    base_directory: str = "."
    fetch_budget: int = DEFAULT_FETCH_BUDGET
    allow_federation: bool = True
    cache: DatasetCache = field(default_factory=DatasetCache)
    fetch_count: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def counted_fetch(self, location, base_dir=None):
        with self._lock:
            self.fetch_count += 1
            if self.fetch_count > self.fetch_budget:
                raise ResourceLimitError(
                    f"fetch budget of {self.fetch_budget} resources exceeded"
                )
        return fetch(location, base_dir)


_current_context: ContextVar[Optional[ExecutionContext]] = ContextVar(
    "facadex_execution_context", default=None
)


@dataclass
class QueryResult:
    """Solutions, a constructed graph, or a boolean."""

    kind: str  # 'solutions' | 'graph' | 'boolean'
    vars: List[Variable] = field(default_factory=list)
    solutions: list = field(default_factory=list)
    graph: Optional[Graph] = None
    boolean: Optional[bool] = None


# ---------------------------------------------------------------------------
# SERVICE resolution


def _inner_algebra(service_part):
    # Translate the inner group pattern once per query; prefixed names
    # inside it were already resolved at parse time.
    if "_fx_algebra" not in service_part.__dict__:
        service_part.__dict__["_fx_algebra"] = translateGroupGraphPattern(
            service_part.graph
        )
    return service_part.__dict__["_fx_algebra"]


def _facade_solutions(ctx, exec_ctx, iri, service_part):
    """Evaluate the inner pattern of one SERVICE clause over the
    assembled dataset for `iri`, as plain binding dicts."""
    spec = parse_service_uri(iri)
    dataset = exec_ctx.cache.get_or_assemble(
        spec,
        lambda: assemble(
            spec, exec_ctx.base_directory, fetch_fn=exec_ctx.counted_fetch
        ),
    ).to_dataset()
    inner_ctx = QueryContext(dataset, initBindings={})
    inner_ctx.prologue = ctx.prologue
    return [dict(sol) for sol in evalPart(inner_ctx, _inner_algebra(service_part))]


def _merge(binding: FrozenBindings, solution: dict):
    for var, term in solution.items():
        bound = binding._d.get(var)
        if bound is not None and bound != term:
            return None
    return binding.merge(solution)


def _empty_binding(ctx) -> FrozenBindings:
    return FrozenBindings(ctx, {})


def _resolve_endpoint(ctx, exec_ctx, iri, part) -> Iterable[FrozenBindings]:
    """Solutions of one SERVICE clause, joined with the variable bindings
    already pushed into `ctx` (rdflib's lazy joins thaw the current row
    into the context before evaluating the right-hand side)."""
    try:
        solutions = _facade_solutions(ctx, exec_ctx, iri, part)
    except FacadeError as exc:
        if part.silent:
            return iter([ctx.solution()])
        raise QueryError(f"SERVICE <{iri}> failed: {exc}") from exc
    current = ctx.solution()
    out = []
    for solution in solutions:
        merged = _merge(current, solution)
        if merged is not None:
            out.append(merged)
    return iter(out)


def _resolve_variable(ctx, exec_ctx, join_part) -> Iterable[FrozenBindings]:
    service = join_part.p2
    endpoint_var = service.term
    incoming = list(evalPart(ctx, join_part.p1))
    per_endpoint: dict = {}
    out = []
    for binding in incoming:
        endpoint = binding._d.get(endpoint_var)
        if endpoint is None:
            raise QueryError(
                f"SERVICE endpoint variable ?{endpoint_var} is unbound"
            )
        iri = str(endpoint)
        if not (isinstance(endpoint, URIRef) and is_facade_iri(iri)):
            if service.silent:
                out.append(binding)
                continue
            raise QueryError(
                f"SERVICE endpoint <{iri}> is not an x-sparql-anything: IRI"
            )
        if iri not in per_endpoint:
            try:
                per_endpoint[iri] = _facade_solutions(ctx, exec_ctx, iri, service)
            except FacadeError as exc:
                if service.silent:
                    per_endpoint[iri] = [{}]
                else:
                    raise QueryError(f"SERVICE <{iri}> failed: {exc}") from exc
        for solution in per_endpoint[iri]:
            merged = _merge(binding, solution)
            if merged is not None:
                out.append(merged)
    return iter(out)


def _is_facade_service(part) -> bool:
    return (
        getattr(part, "name", None) == "ServiceGraphPattern"
        and isinstance(part.term, URIRef)
        and is_facade_iri(str(part.term))
    )


def _is_variable_service(part) -> bool:
    return getattr(part, "name", None) == "ServiceGraphPattern" and isinstance(
        part.term, Variable
    )


def eval_facade_parts(ctx, part):
    """CUSTOM_EVALS hook: facade SERVICE patterns, joins whose right side
    is a variable-endpoint SERVICE, and the no-federation guard."""
    exec_ctx = _current_context.get()
    if exec_ctx is None:
        raise NotImplementedError
    if _is_facade_service(part):
        return _resolve_endpoint(ctx, exec_ctx, str(part.term), part)
    if part.name == "Join" and _is_variable_service(part.p2):
        return _resolve_variable(ctx, exec_ctx, part)
    if _is_variable_service(part):
        # reached directly (lazy join or lone pattern): the endpoint must
        # already be bound in the pushed context
        endpoint = ctx[part.term]
        if endpoint is None:
            raise QueryError(
                f"SERVICE endpoint variable ?{part.term} is unbound"
            )
        iri = str(endpoint)
        if not (isinstance(endpoint, URIRef) and is_facade_iri(iri)):
            if part.silent:
                return iter([ctx.solution()])
            raise QueryError(
                f"SERVICE endpoint <{iri}> is not an x-sparql-anything: IRI"
            )
        return _resolve_endpoint(ctx, exec_ctx, iri, part)
    if (
        part.name == "ServiceGraphPattern"
        and isinstance(part.term, URIRef)
        and not exec_ctx.allow_federation
    ):
        raise QueryError(
            f"federated SERVICE <{part.term}> rejected: federation is disabled"
        )
    raise NotImplementedError


CUSTOM_EVALS["facadex"] = eval_facade_parts


# ---------------------------------------------------------------------------
# Entry point


def execute_query(
    query_text: str, ctx: Optional[ExecutionContext] = None
) -> QueryResult:
    """Run a SPARQL 1.1 query (SELECT/CONSTRUCT/ASK/DESCRIBE) over an
    empty default dataset, resolving facade SERVICE clauses."""
    exec_ctx = ctx or ExecutionContext()
    token = _current_context.set(exec_ctx)
    try:
        try:
            result = Graph().query(query_text)
        except pyparsing.ParseException as exc:
            raise QueryError(
                f"syntax error at line {exc.lineno}, column {exc.column}: {exc.msg}"
            ) from exc
        if result.type == "SELECT":
            return QueryResult(
                kind="solutions",
                vars=list(result.vars or []),
                solutions=[dict(b) for b in result.bindings],
            )
        if result.type == "ASK":
            return QueryResult(kind="boolean", boolean=bool(result.askAnswer))
        graph = Graph()
        for triple in result.graph or ():
            graph.add(triple)
        return QueryResult(kind="graph", graph=graph)
    finally:
        _current_context.reset(token)
