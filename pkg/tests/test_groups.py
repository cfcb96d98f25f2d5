from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from medtk.groups import (
    DinftyWitness,
    LimitExceeded,
    Presentation,
    abelian_invariants,
    build_affine_coxeter,
    dinfty_witness,
    free_reduce,
    fw_plus_cyclic,
    fwn_virtually_abelian,
    invert_word,
    lambda0_d4_presentation,
    low_index_subgroups,
    reidemeister_schreier,
    todd_coxeter,
    verify_d4_quotients,
    verify_dinfty_witness,
)

Z4 = Presentation(1, (((1,) * 4),))
S3 = Presentation(2, ((1, 1), (2, 2), (1, 2, 1, 2, 1, 2)))
DINF = Presentation(2, ((1, 1), (2, 2)))
ZSQ = Presentation(2, ((1, 2, -1, -2),))
A1_TILDE = build_affine_coxeter(1)
A2_TILDE = build_affine_coxeter(2)


def test_free_reduce():
    assert free_reduce((1, -1)) == ()
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert free_reduce(()) == ()
    with pytest.raises(ValueError):
        free_reduce((0,))
    assert invert_word((1, -2, 3)) == (-3, 2, -1)


def test_presentation_json():
    assert Presentation.from_json(S3.to_json()) == S3
    with pytest.raises(ValueError):
        Presentation(1, ((2,),))


def test_todd_coxeter_orders():
    assert todd_coxeter(Z4).coset_count == 4
    assert todd_coxeter(S3).coset_count == 6
    # icosahedral rotation group from a triangle presentation
    a5 = Presentation(2, ((1, 1, 1, 1, 1), (2, 2), (1, 2) * 3))
    assert todd_coxeter(a5).coset_count == 60
    # collapsing presentation of the trivial group
    triv = Presentation(2, ((1, 2, -1, -2, -2), (2, 1, -2, -1, -1)))
    assert todd_coxeter(triv).coset_count == 1


def test_todd_coxeter_relative():
    # index of <x^2> in Z/4 is 2
    assert todd_coxeter(Z4, subgroup_gens=((1, 1),)).coset_count == 2
    # coset table rows are closed under every relator
    t = todd_coxeter(S3)
    assert t.is_closed_under(S3.relators)


def test_todd_coxeter_limit():
    with pytest.raises(LimitExceeded):
        todd_coxeter(ZSQ, coset_limit=100)


def test_low_index_counts():
    # Z^2: index <= 2 means the whole group plus three index-2 sublattices
    assert len(low_index_subgroups(ZSQ, 2)) == 4
    # the 60-element simple group has no proper subgroup of index < 5
    a5 = Presentation(2, ((1, 1, 1, 1, 1), (2, 2), (1, 2) * 3))
    assert len(low_index_subgroups(a5, 4)) == 1
    assert len(low_index_subgroups(a5, 5)) == 2
    # S3 up to conjugacy: whole, index 2, index 3
    tables = low_index_subgroups(S3, 3)
    assert sorted(t.coset_count for t in tables) == [1, 2, 3]


def test_reidemeister_schreier_z4():
    t = todd_coxeter(Z4, subgroup_gens=((1, 1),))
    data = reidemeister_schreier(Z4, t)
    assert abelian_invariants(data.presentation) == (2,)


def test_reidemeister_schreier_dinfty():
    # translation subgroup of the infinite dihedral group is Z
    tables = [t for t in low_index_subgroups(DINF, 2) if t.coset_count == 2]
    invs = {abelian_invariants(reidemeister_schreier(DINF, t).presentation) for t in tables}
    assert (0,) in invs


def test_abelian_invariants():
    assert abelian_invariants(ZSQ) == (0, 0)
    assert abelian_invariants(Z4) == (4,)
    assert abelian_invariants(S3) == (2,)
    assert abelian_invariants(DINF) == (2, 2)
    assert abelian_invariants(Presentation(2, ())) == (0, 0)


def test_dinfty_witness_positive():
    w = dinfty_witness(DINF)
    assert w is not None
    verify_dinfty_witness(DINF, w)
    assert w.value != 0
    z = Presentation(1, ())
    wz = dinfty_witness(z)
    assert wz is not None and wz.sigma == (1,) and wz.value != 0


def test_dinfty_witness_negative():
    assert dinfty_witness(S3) is None
    assert dinfty_witness(Z4) is None
    assert dinfty_witness(Presentation(1, ((1, 1),))) is None


def test_witness_verification_rejects_garbage():
    bad = DinftyWitness(sigma=(1, 1), lam=(Fraction(1), Fraction(0)), word=(1,), value=Fraction(1))
    with pytest.raises(AssertionError):
        verify_dinfty_witness(DINF, bad)


def test_fw_plus_cyclic():
    assert fw_plus_cyclic(5, 1) and fw_plus_cyclic(5, 2)
    assert fw_plus_cyclic(5, 4) and not fw_plus_cyclic(5, 5)
    assert not fw_plus_cyclic(4, 2)
    assert fw_plus_cyclic(3, 2) and not fw_plus_cyclic(3, 3)
    with pytest.raises(ValueError):
        fw_plus_cyclic(1, 2)


def test_fwn_negative_controls():
    v = fwn_virtually_abelian(A1_TILDE, 1)
    assert not v.holds and v.subgroup_index == 1
    v = fwn_virtually_abelian(ZSQ, 1)
    assert not v.holds
    v = fwn_virtually_abelian(A2_TILDE, 3)
    assert not v.holds and v.witness is not None
    verify_dinfty_witness(
        reidemeister_schreier(A2_TILDE, v.subgroup_table).presentation, v.witness
    )


def test_fwn_positive_small():
    assert fwn_virtually_abelian(A2_TILDE, 2).holds
    assert fwn_virtually_abelian(S3, 3).holds


def test_affine_coxeter_shape():
    assert A2_TILDE.generator_count == 4
    assert abelian_invariants(A2_TILDE) == (2,)
    with pytest.raises(ValueError):
        build_affine_coxeter(0)
    with pytest.raises(ValueError):
        build_affine_coxeter(6)


def test_lattice_extension_quotients():
    pres = lambda0_d4_presentation()
    assert pres.generator_count == 6
    out = verify_d4_quotients()
    assert set(out) == {"x=y=1", "z=1", "x=yz"}
    assert out["x=y=1"] == {"finite": True, "order": 8, "witness": None}
    # the other two quotients retain an infinite dihedral image
    for case in ("z=1", "x=yz"):
        assert out[case]["finite"] is False
        assert out[case]["witness"] is not None


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(lambda s: s != 0), max_size=12))
def test_free_reduce_properties(word):
    w = free_reduce(word)
    assert free_reduce(w) == w  # idempotent
    assert free_reduce(tuple(word) + invert_word(word)) == ()
    assert invert_word(invert_word(tuple(word))) == tuple(word)
