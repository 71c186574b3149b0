import pytest
from hypothesis import given, strategies as st

from facadex.errors import ServiceUriError
from facadex.service_uri import (
    ServiceSpec,
    is_facade_iri,
    parse_service_uri,
    render_service_uri,
)
from facadex.triplifiers import TriplifierOptions


class TestParse:
    def test_csv_headers_and_location(self):
        spec = parse_service_uri(
            "x-sparql-anything:csv.headers=true,location=file:./artwork_data.csv"
        )
        assert spec.location == "file:./artwork_data.csv"
        assert spec.triplifier_options.csv_headers is True

    def test_mime_type_with_charset_parameter(self):
        spec = parse_service_uri(
            "x-sparql-anything:mime-type=application/json; charset=UTF-8,location=f.x"
        )
        assert spec.media_type_override == "application/json"
        assert spec.charset == "UTF-8"
        assert spec.location == "f.x"

    def test_bare_location(self):
        spec = parse_service_uri("x-sparql-anything:file:./artworks/A00001")
        assert spec == ServiceSpec(location="file:./artworks/A00001")

    def test_bare_location_may_contain_commas_and_equals(self):
        spec = parse_service_uri("x-sparql-anything:http://h/p?a=1,b=2")
        assert spec.location == "http://h/p?a=1,b=2"

    def test_locator_is_a_synonym(self):
        spec = parse_service_uri("x-sparql-anything:locator=f.csv")
        assert spec.location == "f.csv"

    def test_all_documented_options(self):
        spec = parse_service_uri(
            "x-sparql-anything:metadata=true,namespace=http://ex/ns/,"
            "root=http://ex/r,charset=latin-1,txt.regex=[,location=f.txt"
        )
        assert spec.metadata is True
        assert spec.namespace == "http://ex/ns/"
        assert spec.root_iri == "http://ex/r"
        assert spec.charset == "latin-1"
        # values are verbatim; a broken regex surfaces later, in the triplifier
        assert spec.triplifier_options.text_tokenizer_pattern == "["

    def test_unknown_keys_preserved_in_extras(self):
        spec = parse_service_uri("x-sparql-anything:xls.sheet=2,location=f")
        assert spec.triplifier_options.format_extras == (("xls.sheet", "2"),)

    def test_empty_remainder_rejected(self):
        with pytest.raises(ServiceUriError):
            parse_service_uri("x-sparql-anything:")

    @pytest.mark.parametrize("value", ["yes", "1", "TRUE", ""])
    def test_strict_booleans(self, value):
        with pytest.raises(ServiceUriError):
            parse_service_uri(f"x-sparql-anything:metadata={value},location=f")
        with pytest.raises(ServiceUriError):
            parse_service_uri(f"x-sparql-anything:csv.headers={value},location=f")

    def test_missing_location_rejected(self):
        with pytest.raises(ServiceUriError):
            parse_service_uri("x-sparql-anything:csv.headers=true")

    def test_wrong_scheme_rejected(self):
        with pytest.raises(ServiceUriError):
            parse_service_uri("http://example.org/sparql")

    def test_is_facade_iri(self):
        assert is_facade_iri("x-sparql-anything:location=f")
        assert not is_facade_iri("http://example.org/sparql")


class TestRender:
    def test_single_field(self):
        assert (
            render_service_uri(ServiceSpec(location="f.csv"))
            == "x-sparql-anything:location=f.csv"
        )

    def test_canonical_order_alphabetical_location_last(self):
        spec = ServiceSpec(
            location="f.csv",
            triplifier_options=TriplifierOptions(csv_headers=True),
        )
        assert (
            render_service_uri(spec)
            == "x-sparql-anything:csv.headers=true,location=f.csv"
        )

    def test_bare_and_keyed_forms_parse_alike(self):
        bare = parse_service_uri("x-sparql-anything:file:./a")
        keyed = parse_service_uri("x-sparql-anything:location=file:./a")
        assert bare == keyed


# comma- and equals-free texts: the v1 grammar has no escaping
_value = st.text(
    alphabet=st.characters(blacklist_characters=",=", blacklist_categories=("Cs",)),
    min_size=1,
)


@st.composite
def service_specs(draw):
    extras_keys = st.text(
        alphabet="abcdefghijklmnopqrstuvwxyz.", min_size=1, max_size=8
    ).filter(
        lambda k: k
        not in {
            "location",
            "locator",
            "mime-type",
            "charset",
            "namespace",
            "root",
            "metadata",
            "csv.headers",
            "txt.regex",
        }
    )
    charset = draw(st.sampled_from([None, "UTF-8", "latin-1", "utf-16"]))
    return ServiceSpec(
        location=draw(_value),
        media_type_override=draw(
            st.sampled_from([None, "text/csv", "application/json"])
        ),
        charset=charset,
        namespace=draw(st.sampled_from([None, "http://ex/ns/"])),
        root_iri=draw(st.sampled_from([None, "http://ex/root"])),
        metadata=draw(st.booleans()),
        triplifier_options=TriplifierOptions(
            charset=charset or "utf-8",
            csv_headers=draw(st.booleans()),
            text_tokenizer_pattern=draw(st.sampled_from([" ", "\\s+", ";"])),
            format_extras=tuple(
                sorted(
                    draw(
                        st.dictionaries(extras_keys, _value, max_size=2)
                    ).items()
                )
            ),
        ),
    )


class TestRoundTrip:
    @given(service_specs())
    def test_parse_render_identity(self, spec):
        assert parse_service_uri(render_service_uri(spec)) == spec

    @given(st.text(min_size=1).filter(lambda s: not s.startswith(" ")))
    def test_parsing_is_total(self, remainder):
        # every scheme-correct input yields a spec or a ServiceUriError
        try:
            parse_service_uri("x-sparql-anything:" + remainder)
        except ServiceUriError:
            pass
