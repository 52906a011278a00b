import io
import json

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from prokit import pfaff, protower, series, towers
from prokit.algebra import PolyRing, field_from_name
from prokit.cli import (
    EXIT_ERROR,
    EXIT_NEGATIVE,
    EXIT_POSITIVE,
    EXIT_UNDETERMINED,
    GALLERY,
    OUTCOME_CLASS,
    REPORT_SCHEMA,
    run,
)

from helpers import random_poly, rng_for


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def cli_json(*argv):
    code, out, _ = cli("--json", *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verdict"]["exit"] == code
    return code, doc


def ring_of(w):
    return PolyRing(w["ring"]["vars"], field_from_name(w["ring"]["field"]), laurent=w["ring"]["laurent"])


def assert_round_trip(doc):
    for w in doc["witnesses"]:
        if "ring" not in w:
            continue
        R = ring_of(w)
        texts = w.get("polys", []) + [t["num"] for t in w.get("terms", [])]
        if w.get("unit"):
            texts.append(w["unit"])
        for text in texts:
            assert R(text).format() == text


@pytest.fixture
def identity_tower(tmp_path):
    p = tmp_path / "identity.json"
    p.write_text(json.dumps({"type": "linear-tower", "field": "QQ", "dims": [2, 2, 2],
                             "bondings": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]}))
    return str(p)


def test_gallery_kxy_nonadic():
    code, doc = cli_json("gallery", "kxy-nonadic")
    assert code == EXIT_NEGATIVE
    assert doc["verdict"]["outcome"] == "NotAdic"
    assert doc["witnesses"][0]["polys"] == ["x^2*y^2"]
    assert doc["metadata"]["window"] == 8
    assert doc["regression"]["matches"] is True


def test_gallery_adic_vs_chain():
    code, doc = cli_json("gallery", "kxy-adic-vs-chain")
    assert doc["verdict"]["label"] == "StrictRefinement(adic finer)"
    assert doc["witnesses"][0]["polys"] == ["x^2*y^2"] and code == EXIT_NEGATIVE


def test_gallery_embedded_points():
    code, doc = cli_json("gallery", "embedded-points", "--S", "0,1,2")
    assert doc["verdict"]["label"] == "AdmissibleWithin(2)" and code == EXIT_POSITIVE
    assert doc["regression"]["matches"] is True
    # the stage ideals: (t^2, x t) intersected over the prefixes of S
    chain = doc["input"]["tower"]["chain"]
    assert chain[0] == ["t"] and "t^2" in chain[3]


def test_gallery_thm527_small_box():
    code, doc = cli_json("gallery", "thm527", "--P", "3", "--N", "10")
    assert doc["verdict"]["outcome"] == "EmptyWithinBounds" and code == EXIT_POSITIVE
    assert doc["metadata"]["box"] == [3, 3, 3]


def test_gallery_contrast_and_sweep():
    code, doc = cli_json("gallery", "thm527-contrast")
    assert code == EXIT_UNDETERMINED
    assert doc["witnesses"][0]["terms"] == [{"i": 0, "num": "x", "k": 0}]
    assert doc["witnesses"][1]["terms"] == [{"i": 0, "num": "x*y", "k": 0}, {"i": 1, "num": "1", "k": 0}]
    _, doc = cli_json("gallery", "pole-sweep")
    assert doc["details"]["least_empty_horizon"] == {"0": 1, "1": 4, "2": 7, "3": 10, "4": 12}


def test_gallery_jouanolou():
    code, doc = cli_json("gallery", "jouanolou")
    assert code == EXIT_NEGATIVE and doc["witnesses"] == []
    assert doc["details"]["integrability_residual"] == "0"
    assert [1, 1, 1] in doc["details"]["singular_points_mod_7"]


def test_gallery_unknown_parameters_have_no_expectation():
    code, doc = cli_json("gallery", "thm527", "--P", "1", "--N", "2")
    assert doc["regression"] == {"expected": None, "matches": None}


@pytest.mark.parametrize("name", sorted(GALLERY))
def test_gallery_json_stable_and_round_trips(name):
    _, a, _ = cli("gallery", name, "--json")
    _, b, _ = cli("gallery", name, "--json")
    assert a == b
    doc = json.loads(a)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert "timing" not in doc
    assert_round_trip(doc)


def test_human_output_matches_json_verdict():
    for argv in (["gallery", "kxy-nonadic"], ["pfaff", "jouanolou", "--m", "3"], ["ideal", "member", "--gens", "x", "--poly", "y"]):
        _, human, _ = cli(*argv)
        _, doc = cli_json(*argv)
        assert human.splitlines()[0] == f"{doc['command']}: {doc['verdict']['label']}"


def test_run_examples(identity_tower):
    code, doc = cli_json("pfaff", "jouanolou", "--m", "3", "--check", "integrability")
    assert code == EXIT_POSITIVE and doc["details"]["integrability_residual"] == "0"
    code, doc = cli_json("ml", "--tower", identity_tower, "--op", "epi-part")
    assert code == EXIT_POSITIVE and doc["details"]["equals_input"] is True
    assert doc["details"]["epi_part"] == doc["input"]["tower"]


def test_exit_code_mapping_is_total():
    outcomes = {
        towers.COFINAL, towers.STRICT_REFINEMENT, towers.INCOMPARABLE, towers.ADIC_WITHIN_WINDOW,
        towers.NOT_ADIC, towers.ADMISSIBLE_WITHIN, towers.NOT_ADMISSIBLE_WITNESS, towers.INCONCLUSIVE,
        protower.HOLDS, protower.FAILS, protower.STABILIZED, protower.UNDETERMINED, protower.ZERO,
        protower.NONZERO_WITNESS, series.EmptyWithinBounds.outcome, series.SolutionWithinHorizon.outcome,
        pfaff.Divides.outcome, "LeadingFormIsSolution", "Discrepancy", "PreconditionViolated",
    }
    assert outcomes <= set(OUTCOME_CLASS)
    assert set(OUTCOME_CLASS.values()) == {0, 1, 2, 3}


@pytest.mark.parametrize(
    "argv, code",
    [
        (["tower", "adic", "--powers", "x,y", "--ideal", "x,y", "--window", "3"], EXIT_POSITIVE),
        (["tower", "cofinal", "--chain", "x", "--chain2", "y"], EXIT_NEGATIVE),
        (["tower", "admissible", "--chain", "x;x^5", "--kmax", "2"], EXIT_UNDETERMINED),
        (["tower", "admissible", "--chain", "x,y;x"], EXIT_NEGATIVE),
        (["ml", "ml", "--dims", "2,1,1", "--bondings", "1;0|0"], EXIT_UNDETERMINED),
        (["ml", "zero", "--dims", "0,0", "--bondings", ""], EXIT_POSITIVE),
        (["ml", "zero", "--constant", "1", "--window", "3"], EXIT_NEGATIVE),
        (["ml", "epi", "--dims", "2,2", "--bondings", "1 0;0 0"], EXIT_NEGATIVE),
        (["ml", "mildness", "--constant", "1 0;0 1", "--window", "3"], EXIT_POSITIVE),
        (["ideal", "nilpotent", "--gens", "x^5", "--poly", "x", "--kmax", "2"], EXIT_UNDETERMINED),
        (["ideal", "contains", "--gens", "x", "--other", "y"], EXIT_NEGATIVE),
        (["poly", "divide", "x^2-1", "x-1"], EXIT_POSITIVE),
        (["pfaff", "new", "--form", "z;x;y"], EXIT_NEGATIVE),
        (["pfaff", "solution", "--form", "y;-x;0", "--poly", "z"], EXIT_NEGATIVE),
        (["pfaff", "leading", "--form", "y;-x;0", "--poly", "x+x^2", "--horizon", "0"], EXIT_UNDETERMINED),
        (["pfaff", "separatrix", "--form", "y;x;0", "--poly", "x+y"], EXIT_NEGATIVE),
        (["series", "unit-equiv", "--series", "1: 1+x; 2: y", "--laurent", "x"], EXIT_POSITIVE),
        (["series", "certify", "--series", "0: y; 1: x^-1", "--laurent", "x", "--P", "1"], EXIT_UNDETERMINED),
        (["gallery", "nope"], EXIT_ERROR),
        (["poly"], EXIT_ERROR),
        (["tower", "adic", "--chain", "x", "--ideal", "("], EXIT_ERROR),
        (["--bogus"], EXIT_ERROR),
        (["ml", "epi", "--dims", "2,2", "--bondings", "1 0"], EXIT_ERROR),
        (["pfaff", "search", "--m", "3", "--degree", "3", "--budget", "10"], EXIT_ERROR),
    ],
)
def test_exit_codes_per_class(argv, code):
    c, out, err = cli(*argv)
    assert c == code, (out, err)
    c2, doc = cli_json(*argv)
    assert c2 == code
    if code == EXIT_ERROR:
        assert doc["verdict"]["outcome"] == "Error" and doc["error"]
        assert err.startswith("prokit:")


def test_file_inputs(tmp_path):
    tower = tmp_path / "t.json"
    tower.write_text(json.dumps({"type": "ring-tower", "field": "QQ", "vars": ["x", "y"],
                                 "chain": [["x*y"], ["x*y^2"], "x*y^3"]}))
    code, doc = cli_json("tower", "adic", "--tower", str(tower), "--ideal", "x*y")
    assert doc["verdict"]["outcome"] == "NotAdic"
    ser = tmp_path / "s.json"
    ser.write_text(json.dumps({"type": "series", "field": "GF(7)", "vars": ["x"], "laurent": ["x"],
                               "horizon": 5, "terms": [[1, "x"], [2, "3"]]}))
    code, doc = cli_json("series", "invert", "--series-file", str(ser))
    g = doc["witnesses"][0]
    assert g["horizon"] == 4 and g["terms"][0] == {"i": 0, "num": "x^-1", "k": 0}
    assert_round_trip(doc)
    mor = tmp_path / "m.json"
    src = {"type": "linear-tower", "field": "QQ", "dims": [2, 2], "bondings": [[[1, 0], [0, 1]]]}
    tgt = {"type": "linear-tower", "field": "QQ", "dims": [1, 1], "bondings": [[[1]]]}
    mor.write_text(json.dumps({"type": "level-morphism", "source": src, "target": tgt, "maps": [[[1, 0]], [[1, 0]]]}))
    _, doc = cli_json("ml", "kernel", "--morphism", str(mor))
    assert doc["details"]["kernel"]["dims"] == [1, 1]
    code, doc = cli_json("ml", "epi", "--tower", str(mor))
    assert code == EXIT_ERROR and "linear-tower" in doc["error"]


def test_timing_only_on_request():
    _, doc = cli_json("poly", "parse", "x+1", "--timing")
    assert isinstance(doc["timing"], float)
    _, doc = cli_json("poly", "parse", "x+1")
    assert "timing" not in doc


def test_fp_flag_and_search():
    _, doc = cli_json("poly", "arith", "3*x", "4*x", "--fp", "5")
    assert doc["witnesses"][0]["polys"] == ["2*x"] and doc["input"]["ring"]["field"] == "GF(5)"
    code, doc = cli_json("pfaff", "search", "--form", "y;-x;0", "--degree", "1", "--fp", "3")
    assert code == EXIT_POSITIVE and len(doc["witnesses"]) == 4
    assert_round_trip(doc)


def test_tower_tensor_inline():
    _, doc = cli_json("tower", "tensor", "--chain", "x;x^2", "--chain2", "y;y^2")
    assert doc["details"]["result"]["chain"] == [["x", "y"], ["x^2", "y^2"]]
    _, doc = cli_json("tower", "tensor", "--chain", "x", "--chain2", "y", "--base-chain", "0",
                      "--base-vars", "s", "--map-b", "s=x", "--map-c", "s=y")
    assert doc["details"]["result"]["ring"]["vars"] == ["x", "y"]


def test_round_trip_random_reports():
    rng = rng_for(71)
    R = PolyRing("x y z")
    for _ in range(30):
        p = random_poly(R, rng, terms=5, max_deg=4)
        _, doc = cli_json("poly", "parse", "--vars", "x y z", "--", p.format())
        assert_round_trip(doc)
        assert R(doc["witnesses"][0]["polys"][0]) == p


coeffs = st.fractions(min_value=-50, max_value=50, max_denominator=12)
monos = st.tuples(st.integers(-3, 3), st.integers(0, 3))


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(monos, coeffs, max_size=6))
def test_parse_format_round_trip_laurent(terms):
    R = PolyRing("x y", laurent=["x"])
    p = R.from_dict(terms)
    assert R(p.format()) == p
    assert R(p.format()).format() == p.format()


def test_poly_expressions_after_options():
    code, doc = cli_json("poly", "arith", "--operation", "mul", "x + x^-1", "x - 1", "--laurent", "x")
    assert code == 0
    assert doc["input"]["exprs"] == ["x + x^-1", "x - 1"]
    assert doc["witnesses"][0]["polys"] == ["x^2 - x + 1 - x^-1"]
    code, _, err = cli("tower", "adic", "stray")
    assert code == 3 and "unrecognized" in err
