from fractions import Fraction

import pytest

from sft_lab.enumerator import (Building, CASE_CYLINDER, CASE_TORUS,
                                check_constraints, classification_document,
                                classify_case, component_menu,
                                enumerate_buildings, expand_flavors,
                                is_sporadic, model_count_table_entries,
                                obstruction_data, pair_cancellation,
                                sporadic_signature, twin)
from sft_lab.errors import ConfigurationError, NoTwinError
from sft_lab.model import paper_model

CFG = paper_model()
CASE1 = enumerate_buildings(CFG, 0, 1)
CASE2 = enumerate_buildings(CFG, 0, 2)
CASE3 = enumerate_buildings(CFG, 1, 1)


class TestCounts:
    def test_plane_case_is_empty(self):
        assert CASE1 == []

    def test_cylinder_case_has_six(self):
        assert len(CASE2) == 6

    def test_cylinder_split_one_left_five_right(self):
        left = [b for b in CASE2 if b.components[0].side == "left"]
        assert len(left) == 1
        assert len(CASE2) - len(left) == 5

    def test_torus_case_has_twenty_nine(self):
        assert len(CASE3) == 29

    def test_total_is_thirty_five(self):
        assert len(CASE1) + len(CASE2) + len(CASE3) == 35

    def test_case_labels(self):
        assert all(classify_case(b) == CASE_CYLINDER for b in CASE2)
        assert all(classify_case(b) == CASE_TORUS for b in CASE3)


class TestAudits:
    def test_total_index_recomputed_is_one(self):
        for b in CASE2 + CASE3:
            assert b.total_index == 1

    def test_constraints_clean(self):
        for b in CASE2 + CASE3:
            ok, violation = check_constraints(CFG, b)
            assert ok, violation

    def test_action_budget(self):
        for b in CASE2 + CASE3:
            total = sum((o.action(CFG) for o in b.top_ends), Fraction(0))
            assert total <= CFG.action_threshold

    def test_left_configuration_matches_flow_line_picture(self):
        (left,) = [b for b in CASE2 if b.components[0].side == "left"]
        assert len(left.levels) == 2
        kinds = sorted(c.leaf.kind for c in left.levels[1])
        assert kinds == ["cyl", "flow1"]

    def test_main_components_have_rank_one_obstruction(self):
        for b in CASE2:
            audits = obstruction_data(b)
            mains = [a for a in audits if "page(" in a.component]
            assert len(mains) == 1
            assert mains[0].rank == 1 and mains[0].normal_index == 0

    def test_genus_audit(self):
        assert all(b.arithmetic_genus == 0 for b in CASE2)
        assert all(b.arithmetic_genus == 1 for b in CASE3)


class TestTwin:
    def test_involution(self):
        for b in CASE2 + [b for b in CASE3 if b.twistable]:
            assert twin(CFG, twin(CFG, b)).key() == b.key()

    def test_twin_flips_every_twistable_leaf(self):
        b = CASE2[0]
        flipped = twin(CFG, b)
        for lv_a, lv_b in zip(b.levels, flipped.levels):
            for c_a, c_b in zip(lv_a, lv_b):
                if c_a.leaf.twistable:
                    assert c_b.leaf.flavor == 1 - c_a.leaf.flavor
                else:
                    assert c_b.leaf == c_a.leaf

    def test_sporadic_has_no_twin(self):
        with pytest.raises(NoTwinError):
            twin(CFG, sporadic_signature(CFG))


class TestPairing:
    def test_all_thirty_five_leave_one_unpaired(self):
        pairing = pair_cancellation(CFG, CASE2 + CASE3)
        assert len(pairing.unpaired) == 1
        assert is_sporadic(CFG, pairing.unpaired[0])

    def test_unpaired_matches_signature(self):
        pairing = pair_cancellation(CFG, CASE3)
        (lone,) = pairing.unpaired
        assert lone.key() == sporadic_signature(CFG).key()

    def test_cylinders_fully_paired(self):
        pairing = pair_cancellation(CFG, CASE2)
        assert pairing.unpaired == ()
        assert len(pairing.pairs) == len(CASE2)

    def test_sporadic_alone(self):
        pairing = pair_cancellation(CFG, [sporadic_signature(CFG)])
        assert pairing.pairs == () and len(pairing.unpaired) == 1

    def test_twins_distinct_convention(self):
        expanded = expand_flavors(CFG, CASE2)
        pairing = pair_cancellation(CFG, expanded,
                                    convention="twins-distinct")
        assert len(pairing.pairs) == 6 and pairing.unpaired == ()

    def test_twins_distinct_requires_closure(self):
        with pytest.raises(ConfigurationError):
            pair_cancellation(CFG, CASE2, convention="twins-distinct")


class TestSporadicSignature:
    def test_shape(self):
        lone = sporadic_signature(CFG)
        assert lone.arithmetic_genus == 1
        assert lone.positive_end_count == 1
        (comp,) = lone.components
        assert comp.leaf.kind == "cyl" and comp.leaf.name == "min"
        assert comp.profile.pos == (1, 0, 0)

    def test_normal_index_vanishes(self):
        from sft_lab.indexcalc import normal_index
        (comp,) = sporadic_signature(CFG).components
        assert normal_index(comp.profile) == 0

    def test_enumerated(self):
        assert any(is_sporadic(CFG, b) for b in CASE3)


class TestDeterminism:
    def test_two_runs_identical(self):
        again = enumerate_buildings(CFG, 0, 2)
        assert [b.key() for b in again] == [b.key() for b in CASE2]

    def test_document_stable(self):
        doc1 = classification_document(CFG, 0, 2)
        doc2 = classification_document(CFG, 0, 2)
        assert doc1 == doc2
        assert doc1["summary"] == {"configurations": 6, "pairs": 6,
                                   "unpaired": 0, "sporadic": 0}


class TestMenuFacts:
    def test_no_planes_in_menu(self):
        for comp in component_menu(CFG):
            assert comp.genus > 0 or len(comp.pos) + len(comp.neg) > 1

    def test_no_crossing_components(self):
        for comp in component_menu(CFG):
            assert len({o.side for o in comp.pos + comp.neg}) == 1

    def test_right_symplectization_components_are_covers(self):
        for comp in component_menu(CFG):
            if comp.side == "right" and comp.leaf.kind != "page":
                assert comp.cover_base is not None


class TestModelCountTable:
    def test_twin_rows_cancel_to_sporadic_only(self):
        rows = model_count_table_entries(CFG, Fraction(3))
        totals = {}
        for row in rows:
            key = (row["genus"], tuple(row["positive"]),
                   tuple(row["negative"]))
            totals[key] = totals.get(key, Fraction(0)) + row["value"]
        nonzero = {k: v for k, v in totals.items() if v}
        assert nonzero == {(1, ("q_min",), ()): Fraction(3)}
