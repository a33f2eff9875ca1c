import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agroml.errors import (
    DuplicateCrop,
    HeaderMismatch,
    MissingFile,
    NegativeInput,
    UnknownCrop,
)
from agroml.fertilizer import (
    CLASSES,
    load_advice_catalog,
    load_ideal_table,
    recommend_fertilizer,
)
from tests.conftest import ADVICE_JSON, FERTILIZER_CSV


@pytest.fixture(scope="module")
def table():
    return load_ideal_table(FERTILIZER_CSV)


@pytest.fixture(scope="module")
def advice():
    return load_advice_catalog(ADVICE_JSON)


class TestLoadIdealTable:
    def test_bundled_table(self, table):
        assert len(table) == 22
        assert "rice" in table.crops
        rice = table.lookup("rice")
        assert (rice.n, rice.p, rice.k) == (80.0, 40.0, 40.0)

    def test_lookup_case_insensitive(self, table):
        assert table.lookup("RiCe").name == "rice"

    def test_duplicate_crop(self, tmp_path):
        path = tmp_path / "dup.csv"
        path.write_text("Crop,N,P,K\nrice,1,2,3\nRice,4,5,6\n")
        with pytest.raises(DuplicateCrop):
            load_ideal_table(path)

    def test_single_row_echo(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("Crop,N,P,K,pH,soil_moisture\nmaize,80,40,20,6.0,35\n")
        t = load_ideal_table(path)
        assert len(t) == 1
        entry = t.lookup("maize")
        assert (entry.n, entry.p, entry.k, entry.ph, entry.soil_moisture) == \
            (80.0, 40.0, 20.0, 6.0, 35.0)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MissingFile):
            load_ideal_table(tmp_path / "absent.csv")

    def test_header_mismatch(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(HeaderMismatch):
            load_ideal_table(path)


class TestRecommend:
    def test_ideal_soil_is_balanced(self, table, advice):
        rec = recommend_fertilizer(table, "rice", 80, 40, 40, advice)
        assert rec.klass == "BALANCED"
        assert rec.deviation == 0.0
        assert rec.advice == advice["BALANCED"]

    def test_nitrogen_deficit(self, table, advice):
        rec = recommend_fertilizer(table, "rice", 50, 40, 40, advice)
        assert rec.klass == "N_LOW"
        assert rec.nutrient == "N"
        assert rec.deviation == 30.0

    def test_potassium_excess(self, table, advice):
        rec = recommend_fertilizer(table, "rice", 80, 40, 90, advice)
        assert rec.klass == "K_HIGH"
        assert rec.deviation == -50.0

    def test_unknown_crop_suggestions(self, table):
        with pytest.raises(UnknownCrop) as err:
            recommend_fertilizer(table, "dragonfruit", 1, 1, 1)
        assert len(err.value.suggestions) == 3
        assert all(s in table.crops for s in err.value.suggestions)

    def test_negative_input(self, table):
        with pytest.raises(NegativeInput):
            recommend_fertilizer(table, "rice", -1, 40, 40)

    def test_all_seven_outcomes_reachable_per_crop(self, table, advice):
        for name, ideal in table.crops.items():
            soils = {
                "BALANCED": (ideal.n, ideal.p, ideal.k),
                "N_LOW": (max(ideal.n - 10, 0), ideal.p, ideal.k),
                "N_HIGH": (ideal.n + 10, ideal.p, ideal.k),
                "P_LOW": (ideal.n, max(ideal.p - 10, 0), ideal.k),
                "P_HIGH": (ideal.n, ideal.p + 10, ideal.k),
                "K_LOW": (ideal.n, ideal.p, max(ideal.k - 10, 0)),
                "K_HIGH": (ideal.n, ideal.p, ideal.k + 10),
            }
            for expected, (n, p, k) in soils.items():
                if expected in ("N_LOW", "P_LOW", "K_LOW"):
                    nutrient = expected[0]
                    current = {"N": n, "P": p, "K": k}[nutrient]
                    target = {"N": ideal.n, "P": ideal.p, "K": ideal.k}[nutrient]
                    if target == 0:  # cannot go below an ideal of zero
                        continue
                rec = recommend_fertilizer(table, name, n, p, k, advice)
                assert rec.klass == expected, (name, expected, rec)

    def test_tie_break_priority(self, table, advice):
        ideal = table.lookup("rice")  # (80, 40, 40)
        # equal absolute deviations on all three: N wins
        rec = recommend_fertilizer(table, "rice", ideal.n - 5, ideal.p - 5,
                                   ideal.k - 5, advice)
        assert rec.klass == "N_LOW"
        # equal |deviation| on P and K only: P wins
        rec = recommend_fertilizer(table, "rice", ideal.n, ideal.p + 5,
                                   ideal.k - 5, advice)
        assert rec.klass == "P_HIGH"

    def test_exactly_one_class(self, table, advice):
        rec = recommend_fertilizer(table, "coffee", 10, 10, 10, advice)
        assert rec.klass in CLASSES

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0, 200), st.floats(0.1, 49.9))
    def test_shift_invariance_of_deviation(self, shift, drop):
        # adding the same constant to soil and ideal N leaves the N deviation
        # unchanged: emulate by comparing two synthetic tables
        from agroml.fertilizer import CropIdeal, IdealNpkTable

        base = IdealNpkTable({"x": CropIdeal("x", 50.0, 40.0, 40.0)})
        shifted = IdealNpkTable({"x": CropIdeal("x", 50.0 + shift, 40.0, 40.0)})
        r1 = recommend_fertilizer(base, "x", 50.0 - drop, 40.0, 40.0)
        r2 = recommend_fertilizer(shifted, "x", 50.0 + shift - drop, 40.0, 40.0)
        assert r1.klass == r2.klass
        assert r1.deviation == pytest.approx(r2.deviation)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.01, 79.9))
    def test_monotonic_nitrogen_rule(self, drop):
        # P and K at ideal, soil N strictly below ideal: always N_LOW
        from agroml.fertilizer import CropIdeal, IdealNpkTable

        t = IdealNpkTable({"x": CropIdeal("x", 80.0, 40.0, 40.0)})
        rec = recommend_fertilizer(t, "x", 80.0 - drop, 40.0, 40.0)
        assert rec.klass == "N_LOW"


class TestAdviceCatalog:
    def test_bundled_catalog_complete(self, advice):
        assert set(advice) == set(CLASSES)
        assert all(advice[c].strip() for c in CLASSES)

    def test_incomplete_catalog_rejected(self, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text('{"N_LOW": "text"}')
        with pytest.raises(HeaderMismatch):
            load_advice_catalog(path)
