import random
from fractions import Fraction

import pytest

from affine_descent import affine as af
from affine_descent import descent as ds
from affine_descent.poly import Poly


@pytest.fixture
def s2(data):
    return ds.finite_weyl_group(data("A1"))


def _free(grp, sign_of, name=""):
    acts = {g: ds.pm_const([[sign_of(g)]], grp.rank) for g in grp.elements}
    return ds.EquivariantModule(grp, [0], acts, name=name)


def test_molien_examples(data, s2):
    assert ds.molien_series(s2, 6) == [1, 0, 1, 0, 1, 0, 1]
    w = ds.finite_weyl_group(data("A2"))
    assert ds.molien_series(w, 6) == [1, 0, 1, 1, 1, 1, 2]
    triv = ds.group_at_point(data("A2"), (Fraction(1, 4), Fraction(1, 3)))
    assert ds.molien_series(triv, 4) == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("label,degrees", [("A1", (2,)), ("A2", (2, 3)), ("B2", (2, 4)), ("G2", (2, 6))])
def test_molien_matches_free_algebra_and_reynolds(data, label, degrees):
    w = ds.finite_weyl_group(data(label))
    assert ds.molien_series(w, 8) == ds.free_algebra_series(degrees, 8)
    assert ds.molien_series(w, 6) == ds.invariant_dimensions(w, 6)
    rep = ds.cst_check(w)
    assert rep.ok and rep.coinvariant_dim == w.order
    assert rep.fundamental_degrees == list(degrees)


def test_cst_small(data, s2):
    triv = ds.group_at_point(data("A1"), (Fraction(1, 3),))
    rep = ds.cst_check(triv)
    assert rep.coinvariant_dim == 1 and rep.ok
    rep = ds.cst_check(s2)
    assert rep.coinvariant_hilbert == [1, 1] and rep.coinvariant_dim == 2


def test_isotropy_examples(s2):
    assert ds.isotropy_trivial(_free(s2, lambda g: 1)).ok
    bad = ds.isotropy_trivial(_free(s2, lambda g: g.finite.determinant()))
    assert not bad.ok
    assert bad.witness["degree"] == 0 and bad.witness["element"] == "t[0] w[1]"


def test_isotropy_trivial_action(data):
    grp = ds.finite_weyl_group(data("A2"))
    ident = {g: ds.pm_identity(2, 2) for g in grp.elements}
    assert ds.isotropy_trivial(ds.EquivariantModule(grp, [0, 1], ident)).ok


def test_cocycle_validation_rejects_perturbation(data):
    grp = ds.finite_weyl_group(data("A2"))
    m = ds.regular_representation().restrict(grp)
    assert m.cocycle_failure() is None
    rnd = random.Random(0)
    for _ in range(5):
        g = rnd.choice([h for h in grp.elements if not h.is_identity])
        i, j = rnd.randrange(6), rnd.randrange(6)
        acts = {h: [row[:] for row in a] for h, a in m.actions.items()}
        acts[g][i][j] = acts[g][i][j] + Poly.var(2, 0)
        assert ds.EquivariantModule(grp, m.degrees, acts).cocycle_failure() is not None


def test_structure_sheaf_descends(data):
    for label in ("A1", "A2", "B2"):
        grp = ds.finite_weyl_group(data(label))
        m = ds.structure_sheaf().restrict(grp)
        assert ds.descends(m).ok and ds.isotropy_trivial(m).ok


def test_skyscraper_resolution(s2):
    for ch in ("trivial", "sign"):
        m = ds.skyscraper(ch).restrict(s2)
        assert m.resolution_failure() is None
        v = ds.descends(m)
        assert not v.ok
        assert v.witness["term"] == ("F1" if ch == "trivial" else "F0")
        assert not ds.derived_isotropy_trivial(m).ok
        assert ds.naive_isotropy_trivial(m).ok == (ch == "trivial")
    with pytest.raises(ds.DescentError):
        ds.isotropy_trivial(ds.skyscraper().restrict(s2))


def test_skyscraper_rank_two_koszul(data):
    grp = ds.finite_weyl_group(data("A2"))
    m = ds.skyscraper().restrict(grp)
    assert [t.rank for t in m.resolution.terms] == [1, 2, 1]
    assert m.resolution_failure() is None


def test_lift_recovers_sign_twist(s2):
    f0 = _free(s2, lambda g: 1)
    u = Poly.var(1, 0)
    lifted = ds.lift_action(s2, f0, [[u]], [1])
    for g, a in lifted.items():
        assert a == ds.pm_const([[g.finite.determinant()]], 1)


def test_regular_representation_at_fixed_point(s2):
    # the swap minus the identity has constant entries, so the fibre at 0 carries the
    # regular representation and neither check passes; both columns still agree
    m = ds.regular_representation().restrict(s2)
    assert not ds.descends(m).ok
    assert not ds.isotropy_trivial(m).ok


def test_extension_module(data):
    for label, x in (("A1", (0,)), ("A2", (0, 0)), ("A2", (Fraction(1, 2), Fraction(1, 2)))):
        grp = ds.group_at_point(data(label), x)
        m = ds.extension().restrict(grp)
        assert m.cocycle_failure() is None
        assert ds.descends(m).ok and ds.isotropy_trivial(m).ok


def test_equivalence_report(data):
    rep = ds.equivalence_witness(data("A1"), ds.corpus(), ds.default_points(data("A1")))
    assert rep.all_agree
    sky = [r for r in rep.rows if r.module == "skyscraper_trivial" and not any(r.point)][0]
    assert sky.naive_isotropy.ok and not sky.derived_isotropy.ok
    for r in rep.rows:
        if r.group_order == 1:
            assert r.descends.ok and r.derived_isotropy.ok
    assert rep.to_csv().splitlines()[0].startswith("module,point")


@pytest.mark.parametrize("label,iso,factor", [("A1", "adjoint", 1), ("A1", "sc", 2), ("A2", "sc", 3)])
def test_coinduction(data, label, iso, factor):
    d = data(label, iso)
    samples = list(af.affine_simple_reflections(d)) + list(af.length_zero_elements(d).values())
    for name in ("structure_sheaf", "sign_twist", "extension"):
        rule, rank = ds.recipe_rule(name, d)
        rep = ds.verify_coinduction(rule, rank, d, samples)
        assert rep.ok and rep.rank == factor * rank


def test_module_spec_round_trip(data, tmp_path):
    import json
    d = data("A1")
    for name in ("structure_sheaf", "sign_twist", "skyscraper_trivial", "extension"):
        spec = ds.recipe_to_json(d, name)
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(spec))
        d2, rec = ds.load_module_spec(path)
        for x in ((0,), (1,)):
            grp = ds.group_at_point(d2, x)
            if name.startswith("skyscraper") and x == (1,):
                continue
            m = rec.restrict(grp)
            ref = {r.name: r for r in ds.corpus()}[name].restrict(grp)
            assert m.cocycle_failure() is None
            assert ds.descends(m).ok == ds.descends(ref).ok


def test_module_spec_diagnostics(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "A1",\n "generator_degrees": [0],\n "actions": {"s1": [[ [[[0, 1], "1"]] ]]}\n}')
    with pytest.raises(ds.DescentError, match=r"actions\.s1"):
        ds.load_module_spec(bad)
    broken = tmp_path / "broken.json"
    broken.write_text('{"type": "A1",\n "generator_degrees": [0,\n}')
    with pytest.raises(ds.DescentError, match="line 3"):
        ds.load_module_spec(broken)
