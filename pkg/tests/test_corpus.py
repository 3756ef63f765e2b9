import json
from collections import Counter

import pytest

from pcflab.corpus import (by_tag, check_limit, entry_from_json, get, load_corpus, load_tables,
                           poly_from_json, poly_to_json)
from pcflab.family_search import table3_universe
from pcflab.pcf_core import Pcf
from pcflab.polyring import discriminant_is_rational_square, parse_poly as P


def test_names_unique_and_lookup():
    names = [e.name for e in load_corpus()]
    assert len(names) == len(set(names))
    assert get("apery_zeta3").pcf == Pcf(P("34n^3+51n^2+27n+5"), P("-n^6"))
    with pytest.raises(KeyError):
        get("no_such_entry")


def test_required_groups_present():
    tags = Counter(t for e in load_corpus() for t in e.tags)
    assert tags["table1"] == 5 and tags["table2"] == 3
    assert tags["table5"] >= 28 and tags["table4"] >= 20 and tags["ln2_family"] >= 3
    assert tags["family1"] and tags["family2"]


def test_json_round_trip():
    for e in load_corpus():
        back = entry_from_json(json.loads(json.dumps(e.to_json())))
        assert back == e and back.extra == e.extra


def test_poly_json_forms():
    p = P("34n^3+51n^2+27n+5")
    assert poly_to_json(p) == [5, 27, 51, 34]
    assert poly_from_json([5, 27, 51, 34]) == p
    assert poly_from_json("34n^3+51n^2+27n+5") == p
    assert poly_to_json(P("[0, 1/2]")) == [0, "1/2"]


def test_tables_data_consistent():
    t3 = load_tables()["table3"]
    universe = table3_universe()
    assert len(universe) == 64
    listed_fr = {P(s) for s in t3["fr"]}
    assert listed_fr == {b for b in universe if discriminant_is_rational_square(b)}
    for b in t3["no_fr_listed"]:
        assert not discriminant_is_rational_square(P(b))


@pytest.mark.parametrize("entry", [e for e in load_corpus() if e.expected_limit], ids=lambda e: e.name)
def test_limits(entry):
    res = check_limit(entry, depth=500)
    assert res.contains
    if "unbalanced_high" not in entry.tags:
        assert res.digits > 50 and res.agreement > 50


def test_table1_published_columns():
    rows = by_tag("table1")
    assert {r.extra["published"]["fr"] for r in rows} == {True, False}
