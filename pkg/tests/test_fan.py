import pytest

from toricount.errors import (
    InvalidParams,
    NonEffectiveGrading,
    NonPrimitiveRay,
    NonSimplicialFan,
    TorsionClassGroup,
)
from toricount.fan import (
    BUILTIN_TEMPLATES,
    GradingData,
    blowup_p2_fan,
    blowup_p4_line_fan,
    builtin,
    count_exceptional,
    exceptional_set,
    fan_to_text,
    grading_from_fan,
    make_fan,
    parse_fan_text,
    primitive_collections,
    projective_fan,
    space_from_fan,
    unimodular_column_equivalent,
    weighted_space,
)


# ---------------------------------------------------------------------------
# builtin fans: frozen combinatorics and gradings
# ---------------------------------------------------------------------------

def test_projective_fan_structure():
    for d in (1, 2, 3, 4):
        fan = projective_fan(d)
        assert fan.rho == d + 1
        assert fan.rays[0] == tuple([-1] * d)
        assert len(fan.max_cones) == d + 1
        assert primitive_collections(fan) == (tuple(range(d + 1)),)
        G = grading_from_fan(fan)
        assert G.r == 1 and G.weights == ((1,),) * (d + 1)
        assert G.torsion == ()


def test_blowup_p2_frozen():
    fan = blowup_p2_fan()
    assert fan.rays == ((-1, -1), (1, 0), (0, 1), (1, 1))
    assert fan.max_cones == ((0, 1), (0, 2), (1, 3), (2, 3))
    assert primitive_collections(fan) == ((0, 3), (1, 2))
    G = grading_from_fan(fan)
    assert G.weights == ((1, 1), (1, 0), (1, 0), (0, 1))


def test_blowup_p4_line_frozen():
    fan = blowup_p4_line_fan()
    assert fan.rho == 6 and fan.dim == 4
    assert len(fan.max_cones) == 9
    assert primitive_collections(fan) == ((0, 4, 5), (1, 2, 3))
    G = grading_from_fan(fan)
    assert G.weights == ((1, 1), (1, 0), (1, 0), (1, 0), (1, 1), (0, 1))
    assert G.r == 2 and G.torsion == ()


def test_weighted_space():
    sp = weighted_space(1, 1, 2)
    assert sp.fan is None
    assert sp.grading.weights == ((1,), (1,), (2,))
    assert sp.exceptional.strata == ((0, 1, 2),)
    with pytest.raises(InvalidParams):
        weighted_space()
    with pytest.raises(InvalidParams):
        weighted_space(1, 0, 2)


def test_builtin_parsing():
    assert builtin("projective(3)").grading.rho == 4
    assert builtin("blowup_p2").name == "blowup_p2"
    assert builtin("weighted(1,1,1,1,1,2)").grading.weights[-1] == (2,)
    for bad in ("projective", "projective()", "nosuch", "weighted(1,-1)"):
        with pytest.raises(InvalidParams):
            builtin(bad)
    assert len(BUILTIN_TEMPLATES) == 4


# ---------------------------------------------------------------------------
# exceptional sets and counts
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_exceptional_counts(q):
    assert count_exceptional(projective_fan(2), q) == 1
    assert count_exceptional(blowup_p2_fan(), q) == 2 * q * q - 1
    assert count_exceptional(blowup_p4_line_fan(), q) == 2 * q ** 3 - 1
    assert count_exceptional(weighted_space(1, 1, 2), q) == 1


def test_exceptional_strata_from_primitive_collections():
    exc = exceptional_set(blowup_p4_line_fan())
    assert set(exc.strata) == {(0, 4, 5), (1, 2, 3)}


# ---------------------------------------------------------------------------
# validation errors
# ---------------------------------------------------------------------------

def test_non_primitive_ray():
    with pytest.raises(NonPrimitiveRay):
        make_fan(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(NonPrimitiveRay):
        make_fan(2, [(0, 0), (0, 1), (1, 0)], [(0, 1)])


def test_duplicate_ray():
    with pytest.raises(InvalidParams):
        make_fan(2, [(1, 0), (1, 0), (0, 1)], [(0, 2)])


def test_non_simplicial():
    with pytest.raises(NonSimplicialFan):
        make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1, 2)])


def test_bad_cone_indices():
    with pytest.raises(InvalidParams):
        make_fan(2, [(1, 0), (0, 1)], [(0, 5)])


def test_nested_cones_rejected():
    with pytest.raises(InvalidParams):
        make_fan(2, [(1, 0), (0, 1)], [(0, 1), (0,)])


def test_torsion_class_group():
    fan = make_fan(2, [(1, 1), (1, -1)], [(0,), (1,)])
    with pytest.raises(TorsionClassGroup):
        grading_from_fan(fan)
    G = grading_from_fan(fan, require_free=False)
    assert G.torsion == (2,)


def test_non_effective_grading():
    # blowup of the affine plane at the origin: the only relation among the
    # rays is n0 + n1 - n2 = 0, which no sign change makes nonnegative
    fan = make_fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 2), (1, 2)])
    with pytest.raises(NonEffectiveGrading):
        grading_from_fan(fan)


# ---------------------------------------------------------------------------
# weight normalization
# ---------------------------------------------------------------------------

def test_unimodular_column_equivalence():
    A = [(1, 1), (1, 0), (1, 0), (0, 1)]
    B = [(2, 1), (1, 0), (1, 0), (1, 1)]  # columns transformed by [[1,0],[1,1]]
    assert unimodular_column_equivalent(A, B)
    C = [(2, 2), (2, 0), (2, 0), (0, 2)]  # index-4 sublattice
    assert not unimodular_column_equivalent(A, C)


def test_weights_canonical_up_to_column_basis():
    # the normalized weights must generate the same column lattice as raw SNF output
    for mk in (projective_fan(4), blowup_p2_fan(), blowup_p4_line_fan()):
        G = grading_from_fan(mk)
        assert all(w >= 0 for row in G.weights for w in row)
        assert G.is_effective


# ---------------------------------------------------------------------------
# fan file format
# ---------------------------------------------------------------------------

def test_fan_text_round_trip():
    for fan in (projective_fan(2), blowup_p2_fan(), blowup_p4_line_fan()):
        text = fan_to_text(fan)
        back = parse_fan_text(text)
        assert back == fan


def test_parse_fan_text_comments_and_errors():
    fan = parse_fan_text(
        """
        # a projective line
        dim 1
        ray -1
        ray 1
        cone 0
        cone 1
        """
    )
    assert fan == projective_fan(1)
    with pytest.raises(InvalidParams):
        parse_fan_text("ray 1 0\ncone 0")  # missing dim
    with pytest.raises(InvalidParams):
        parse_fan_text("dim 1\nray x\ncone 0")


def test_space_from_fan_names():
    sp = space_from_fan(blowup_p2_fan(), name="bp2")
    assert sp.name == "bp2"
    assert sp.grading == grading_from_fan(blowup_p2_fan())


def test_grading_data_effectiveness():
    assert GradingData(rho=2, r=1, weights=((1,), (2,))).is_effective
    assert not GradingData(rho=2, r=1, weights=((1,), (-2,))).is_effective
