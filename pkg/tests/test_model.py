from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from phishtriage.model import UnparseableUrl, normalize, registrable_domain


class TestNormalize:
    def test_case_port_fragment(self):
        assert normalize("HTTPS://Example.COM:443/a/#frag").normalized == "https://example.com/a"

    def test_scheme_default(self):
        assert normalize("example.com").normalized == "https://example.com"

    def test_identity(self):
        assert normalize("https://a.co/p?q=1").normalized == "https://a.co/p?q=1"

    def test_http_default_port_stripped(self):
        assert normalize("http://a.co:80/x").normalized == "http://a.co/x"

    def test_non_default_port_kept(self):
        assert normalize("https://a.co:8443/x").normalized == "https://a.co:8443/x"

    def test_query_significant(self):
        a = normalize("https://a.co/p?q=1").normalized
        b = normalize("https://a.co/p?q=2").normalized
        assert a != b

    def test_trailing_slash_removed(self):
        assert normalize("https://a.co/").normalized == "https://a.co"

    def test_host_fields(self):
        rec = normalize("https://Login.PayPal.com/signin")
        assert rec.host == "login.paypal.com"
        assert rec.registrable_domain == "paypal.com"
        assert rec.host in rec.normalized

    @pytest.mark.parametrize("raw", ["", "   ", "https://", "ftp://a.co/x", "mailto:x@y.z", "###"])
    def test_unparseable(self, raw):
        with pytest.raises(UnparseableUrl):
            normalize(raw)


class TestRegistrableDomain:
    def test_last_two_labels(self):
        assert registrable_domain("login.paypal.com") == "paypal.com"

    def test_public_suffix_snapshot(self):
        # hand-checked against the bundled suffix snapshot: co.uk is listed
        assert registrable_domain("a.b.co.uk") == "b.co.uk"

    def test_single_label(self):
        assert registrable_domain("localhost") == "localhost"

    def test_bare_suffix(self):
        assert registrable_domain("co.uk") == "co.uk"

    def test_unknown_tld_fallback(self):
        assert registrable_domain("x.y.veryunknown") == "y.veryunknown"


url_strings = st.builds(
    lambda scheme, host, path, query: f"{scheme}{host}{path}{query}",
    st.sampled_from(["", "http://", "https://", "HTTPS://"]),
    st.from_regex(r"[a-zA-Z0-9]([a-zA-Z0-9.-]{0,20}[a-zA-Z0-9])?", fullmatch=True),
    st.sampled_from(["", "/", "/a", "/a/b/", "/Login"]),
    st.sampled_from(["", "?q=1", "?a=B&c=d"]),
)


@given(url_strings)
def test_normalize_idempotent(raw):
    try:
        first = normalize(raw)
    except UnparseableUrl:
        return
    again = normalize(first.normalized)
    assert again.normalized == first.normalized
    assert again.host == first.host


@given(url_strings)
def test_host_suffix_invariants(raw):
    try:
        rec = normalize(raw)
    except UnparseableUrl:
        return
    assert rec.host.endswith(rec.registrable_domain) or rec.host == rec.registrable_domain
