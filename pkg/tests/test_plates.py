import io

import pytest

from assayqc import (
    DuplicateWell,
    MalformedRow,
    NonFiniteValue,
    Plate,
    UnknownRole,
    Well,
    WellRole,
    load_plate_csv,
)

HEADER = "plate_id,row,col,role,value\n"


def load(text):
    return load_plate_csv(io.StringIO(text))


class TestLoadPlateCsv:
    def test_minimal_plate(self):
        plates = load(HEADER + "p1,1,1,pos,10.5\np1,1,2,neg,0.25\n")
        assert len(plates) == 1
        assert plates[0].plate_id == "p1"
        assert len(plates[0].wells) == 2
        assert plates[0].wells[0].role is WellRole.POSITIVE
        assert plates[0].wells[1].value == 0.25

    def test_roles_case_insensitive(self):
        plates = load(HEADER + "p1,1,1,POS,1\np1,1,2,Neg,2\np1,1,3,SAMPLE,3\np1,1,4,empty,\n")
        roles = [w.role for w in plates[0].wells]
        assert roles == [WellRole.POSITIVE, WellRole.NEGATIVE, WellRole.SAMPLE, WellRole.EMPTY]
        assert plates[0].wells[-1].value is None

    def test_multiple_plates_in_first_seen_order(self):
        plates = load(
            HEADER
            + "p2,1,1,pos,1\np1,1,1,neg,2\np2,1,2,neg,3\n"
        )
        assert [p.plate_id for p in plates] == ["p2", "p1"]
        assert len(plates[0].wells) == 2

    def test_duplicate_well_reports_line(self):
        with pytest.raises(DuplicateWell, match="line 3"):
            load(HEADER + "p1,1,1,pos,1\np1,1,1,neg,2\n")

    def test_same_address_ok_on_different_plates(self):
        plates = load(HEADER + "p1,1,1,pos,1\np2,1,1,pos,2\n")
        assert len(plates) == 2

    def test_nan_value_rejected(self):
        with pytest.raises(NonFiniteValue, match="line 2"):
            load(HEADER + "p1,1,1,pos,NaN\n")

    def test_inf_value_rejected(self):
        with pytest.raises(NonFiniteValue):
            load(HEADER + "p1,1,1,sample,inf\n")

    def test_unknown_role(self):
        with pytest.raises(UnknownRole, match="line 2"):
            load(HEADER + "p1,1,1,control,1\n")

    def test_missing_header(self):
        with pytest.raises(MalformedRow, match="expected header plate_id,row,col,role,value"):
            load("p1,1,1,pos,1\n")

    def test_wrong_field_count(self):
        with pytest.raises(MalformedRow, match="line 2"):
            load(HEADER + "p1,1,1,pos\n")

    def test_non_integer_address(self):
        with pytest.raises(MalformedRow, match="line 2"):
            load(HEADER + "p1,one,1,pos,1\n")

    def test_missing_value_for_control(self):
        with pytest.raises(MalformedRow, match="line 2"):
            load(HEADER + "p1,1,1,pos,\n")

    def test_value_on_empty_well(self):
        with pytest.raises(MalformedRow, match="line 2"):
            load(HEADER + "p1,1,1,empty,3\n")

    def test_blank_lines_skipped(self):
        plates = load(HEADER + "p1,1,1,pos,1\n\np1,1,2,neg,2\n")
        assert len(plates[0].wells) == 2

    def test_from_path(self, tmp_path):
        path = tmp_path / "plate.csv"
        path.write_text(HEADER + "p1,1,1,pos,1\np1,1,2,neg,2\n")
        plates = load_plate_csv(path)
        assert len(plates) == 1


class TestPlateHelpers:
    def make(self):
        return Plate("p", [
            Well(1, 1, WellRole.NEGATIVE, 0.0),
            Well(2, 1, WellRole.NEGATIVE, 1.0),
            Well(1, 2, WellRole.POSITIVE, 10.0),
            Well(2, 2, WellRole.POSITIVE, 11.0),
            Well(1, 3, WellRole.SAMPLE, 5.0),
            Well(2, 3, WellRole.EMPTY),
        ])

    def test_control_sets(self):
        neg, pos = self.make().control_sets()
        assert neg.values.tolist() == [0.0, 1.0]
        assert pos.values.tolist() == [10.0, 11.0]

    def test_counts_and_samples(self):
        plate = self.make()
        assert plate.count(WellRole.NEGATIVE) == 2
        assert plate.count(WellRole.EMPTY) == 1
        assert [w.address for w in plate.sample_wells()] == ["R1C3"]

    def test_transformed_applies_only_to_values(self):
        plate = self.make().transformed(lambda v: v * 2)
        assert plate.wells[2].value == 20.0
        assert plate.wells[-1].value is None

    def test_duplicate_addresses_rejected_at_construction(self):
        with pytest.raises(DuplicateWell):
            Plate("p", [Well(1, 1, WellRole.SAMPLE, 1.0), Well(1, 1, WellRole.SAMPLE, 2.0)])

    def test_well_validation(self):
        with pytest.raises(MalformedRow):
            Well(0, 1, WellRole.SAMPLE, 1.0)
        with pytest.raises(NonFiniteValue):
            Well(1, 1, WellRole.SAMPLE, float("nan"))
        with pytest.raises(NonFiniteValue):
            Well(1, 1, WellRole.SAMPLE, None)
