import itertools

import pytest

from sft_lab.errors import (ConfigurationError, CoverThresholdError,
                            InternalError)
from sft_lab.indexcalc import (CriticalPoint, CurveIndexData, PunctureProfile,
                               automatic_transversality, cz_in_model,
                               cz_resolved, cz_right, fredholm_index,
                               fredholm_index_from_cz, gluing_base_dim,
                               kernel_bound, left_orbit, normal_index,
                               obstruction_rank, regularity_transfer,
                               right_orbit)


def brute_kernel_bound(c, G, limit=20):
    """Independent minimization over the full (k, l) grid."""
    best = None
    for k in range(0, limit + 1):
        for l in range(0, limit + 1):
            if k > G or l % 2 != 0:
                continue
            if 2 * k + l > 2 * c:
                if best is None or k + l < best:
                    best = k + l
    return best


class TestCzShifts:
    def test_hyperbolic_no_shift(self):
        o = left_orbit("g", 1)
        assert cz_in_model(o) == 0

    def test_minimum_shifts_up(self):
        o = left_orbit("g", 0)
        assert cz_in_model(o) == 1

    def test_shift_is_additive_on_base(self):
        o = right_orbit("f", 2, 2)
        assert o.cz_base == 1
        # base 3 with a maximum: constructed directly
        o2 = right_orbit("f", 2, 2)
        assert cz_in_model(o2) == o2.cz_base + 1

    @pytest.mark.parametrize("base", range(-5, 6))
    @pytest.mark.parametrize("cover", [1, 2, 3])
    def test_shift_rule_full_grid(self, base, cover):
        from sft_lab.indexcalc import OrbitSymbol
        for idx, shift in ((0, 1), (1, 0), (2, 1)):
            o = OrbitSymbol(id="x", side="right",
                            crit_sigma=CriticalPoint("p", idx),
                            crit_base=CriticalPoint("q", 1),
                            cover=cover, cz_base=base)
            assert cz_in_model(o, cover_threshold=3) == base + shift

    def test_cover_threshold_violation(self):
        o = left_orbit("g", 1, cover=4)
        with pytest.raises(CoverThresholdError):
            cz_in_model(o, cover_threshold=3)


class TestCzRight:
    def test_hyperbolic_base_one(self):
        o = right_orbit("f", 1, 1)
        assert cz_right(o) == (0, 0)

    def test_maximum_base_two(self):
        o = right_orbit("f", 2, 2)
        assert cz_right(o) == (2, 1)

    def test_hyperbolic_base_zero(self):
        o = right_orbit("f", 1, 0)
        assert cz_right(o) == (-1, -1)

    def test_left_orbit_rejected(self):
        with pytest.raises(ConfigurationError):
            cz_right(left_orbit("g", 1))


class TestFredholmIndex:
    def test_cylinder_two_right_hyperbolic_ends(self):
        ends = (right_orbit("f1", 1, 1), right_orbit("f2", 1, 1))
        c = CurveIndexData(half_dim=2, euler_char=0, rel_chern=0,
                           positive=ends)
        assert fredholm_index(c, ambient="M") == 0

    def test_flow_line_cylinder_index_one(self):
        c = CurveIndexData(half_dim=2, euler_char=0, rel_chern=0,
                           positive=(left_orbit("g", 0),),
                           negative=(left_orbit("g", 1),))
        assert fredholm_index(c, ambient="M") == 1

    def test_half_dim_one_cylinder(self):
        assert fredholm_index_from_cz(1, 0, 0, [0, 0], []) == 0

    def test_sign_flips_when_ends_swap(self):
        pos = [3, -1]
        neg = [2]
        plus = fredholm_index_from_cz(2, 0, 0, pos, neg)
        minus = fredholm_index_from_cz(2, 0, 0, neg, pos)
        assert plus == -minus

    def test_additive_under_concatenation(self):
        a = fredholm_index_from_cz(2, 0, 0, [1, 2], [0])
        b = fredholm_index_from_cz(2, 0, 0, [4], [1])
        both = fredholm_index_from_cz(2, 0, 0, [1, 2, 4], [0, 1])
        assert both == a + b

    def test_euler_consistency_check(self):
        c = CurveIndexData(half_dim=2, euler_char=0, rel_chern=0,
                           positive=(left_orbit("g", 0),))
        with pytest.raises(ConfigurationError):
            c.check_euler(genus=0)   # plane would need chi = 1


class TestNormalIndex:
    def test_sporadic_profile(self):
        p = PunctureProfile(genus=1, pos=(1, 0, 0))
        assert normal_index(p) == 0

    def test_two_saddle_positive_ends(self):
        p = PunctureProfile(genus=0, pos=(0, 2, 0))
        assert normal_index(p) == 0

    def test_min_up_max_down(self):
        # both Riemann-Roch expressions evaluate to 0 here
        p = PunctureProfile(genus=0, pos=(1, 0, 0), neg=(0, 0, 1))
        assert normal_index(p) == 0

    def test_both_lines_agree_exhaustively(self):
        # ~1.7e4 profiles; agreement is enforced inside normal_index
        for g in range(4):
            for counts in itertools.product(range(4), repeat=6):
                p = PunctureProfile(genus=g, pos=counts[:3], neg=counts[3:])
                normal_index(p)


class TestAutomaticTransversality:
    def test_genus_zero_no_even_ends(self):
        p = PunctureProfile(genus=0, pos=(1, 0, 0))
        assert automatic_transversality(p, 0)

    def test_two_even_ends_fail(self):
        p = PunctureProfile(genus=0, pos=(0, 2, 0))
        assert not automatic_transversality(p, 0)

    def test_positive_genus_always_fails_at_index_zero(self):
        p = PunctureProfile(genus=1, pos=(1, 0, 0))
        assert not automatic_transversality(p, 0)

    def test_positive_genus_profiles_with_true_normal_index(self):
        for g in range(1, 4):
            for counts in itertools.product(range(5), repeat=6):
                p = PunctureProfile(genus=g, pos=counts[:3], neg=counts[3:])
                assert not automatic_transversality(p, normal_index(p))


class TestRegularityTransfer:
    def test_flow_line_cylinder(self):
        p = PunctureProfile(genus=0, pos=(1, 0, 0), neg=(0, 1, 0))
        assert regularity_transfer(p, True)

    def test_two_positive_saddle_ends(self):
        p = PunctureProfile(genus=0, pos=(0, 2, 0))
        assert not regularity_transfer(p, True)

    def test_genus_one_never_transfers(self):
        p = PunctureProfile(genus=1, pos=(1, 0, 0))
        assert not regularity_transfer(p, True)

    def test_irregular_in_leaf_never_transfers(self):
        p = PunctureProfile(genus=0, pos=(1, 0, 0))
        assert not regularity_transfer(p, False)


class TestKernelBound:
    def test_frozen_examples(self):
        assert kernel_bound(0, 0) == 2
        assert kernel_bound(-1, 0) == 0
        assert kernel_bound(0, 2) == 1

    def test_matches_brute_force_grid(self):
        for c in range(-3, 4):
            for G in range(0, 5):
                assert kernel_bound(c, G) == brute_kernel_bound(c, G)


class TestObstructionRank:
    def test_rank_one_flow_line_case(self):
        assert obstruction_rank(0, 0, 1) == 1

    def test_regular_case(self):
        assert obstruction_rank(0, 0, 0) == 0

    def test_formula(self):
        assert obstruction_rank(1, -2, 2) == 5

    def test_negative_is_an_error(self):
        with pytest.raises(ConfigurationError):
            obstruction_rank(0, 2, 1)

    def test_kernel_dim_validated(self):
        with pytest.raises(ConfigurationError):
            obstruction_rank(0, 0, 3)


class TestGluingBaseDim:
    def test_values(self):
        assert gluing_base_dim(1, 1) == 2
        assert gluing_base_dim(0, 0) == 0
        assert gluing_base_dim(1, 0) == 1

    def test_negative_rank_rejected(self):
        with pytest.raises(ConfigurationError):
            gluing_base_dim(1, -1)


class TestOrbitSymbolInvariants:
    def test_left_orbits_noncontractible_and_base_zero(self):
        o = left_orbit("g", 0)
        assert not o.contractible and o.cz_base == 0

    def test_cover_action_scaling_helper(self):
        from fractions import Fraction
        o = left_orbit("g", 0, cover=3, action=Fraction(3))
        assert o.action == 3 * Fraction(1)

    def test_right_orbit_base_index(self):
        assert right_orbit("f", 1, 2).cz_base == 1

    def test_resolved_ambient_values(self):
        o = right_orbit("f", 2, 2)
        assert cz_resolved(o, "M") == 2
        assert cz_resolved(o, "W0") == 1
        g = left_orbit("g", 0)
        assert cz_resolved(g, "M") == 1
        assert cz_resolved(g, "W0") == 0
