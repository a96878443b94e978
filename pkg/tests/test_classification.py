import os
import random

import pytest
from hypothesis import given, strategies as st

from supergc import classification as C
from supergc.gauss import gq
from supergc.grassmann import SuperNumber
from supergc.scenarios import random_numeric_pair


def test_catalog_size_and_nonstandard():
    cat = C.load_catalog()
    assert len(cat) == 199
    assert C.nonstandard_ids() == ["g3", "g7", "g19", "g25", "g46", "g74", "g158"]


def test_catalog_entries():
    assert C.catalog("g124").text == "P+ + eps*P- + a*K0"
    assert C.catalog("g35").text == "K1 + a*K0 + b*C0"
    assert "repaired" in C.catalog("g84").flags
    with pytest.raises(C.UnknownId):
        C.catalog("g200")


def test_catalog_hash_enforced(tmp_path, monkeypatch):
    data = C._catalog_text()[0].replace(b"g124\tP+ + eps*P- + a*K0", b"g124\tP+ + a*K0")
    p = tmp_path / "t.tsv"
    p.write_bytes(data)
    with pytest.raises(C.CatalogIntegrityError):
        C.load_catalog(str(p), verify_hash=True)
    monkeypatch.setenv(C.CATALOG_ENV, str(p))
    assert C.catalog("g124").text == "P+ + a*K0"


def test_presentation_is_graded_antisymmetric():
    pres = C.presentation()
    assert pres.labels == C.BASIS


def test_twisted_example_matches():
    X, Y = C.twisted_example()
    assert C.bch_closed(X, Y) == C.stated_twisted_result()


def test_translation_example_convention():
    # exp(ad X) Y gives e^{+2 alpha}; the stated e^{-2 alpha} form is exp(-ad X) Y
    X, Y = C.translation_example()
    got = C.bch_closed(X, Y)
    assert got != C.stated_translation_result()
    assert C.bch_closed(X.scale(gq(-1)), Y) == C.stated_translation_result()


@given(st.integers(0, 10_000))
def test_series_matches_closed_form(seed):
    X, Y = random_numeric_pair(seed)
    assert C.bch_series(X, Y, 12) == C.bch_closed(X, Y)


def test_not_closed_form():
    ex = C.example_symbols()
    # W has eigenvalue rho - sigma, which is not a monomial
    X = C.parse_element("rho*K0 + sigma*C0 + tau_*W", ex)
    Y = C.parse_element("K0", ex)
    with pytest.raises(C.NotClosedForm):
        C.bch_closed(X, Y)


def test_normalize_rep():
    one = SuperNumber.scalar(1)
    rec, vals = C.normalize_rep(C.AlgebraElement({"P+": one, "P-": SuperNumber.scalar(-5)}))
    assert rec.id == "g14" and vals["eps"] == -1
    z = SuperNumber.generator("z1")
    rec, vals = C.normalize_rep(C.AlgebraElement({"K1": one, "W": z}))
    assert rec.id == "g32"


def test_element_parity_checked():
    with pytest.raises(C.ClassificationError):
        C.AlgebraElement({"J+": SuperNumber.scalar(1)})
