import random

import pytest

from hamloc import instances as inst
from hamloc.errors import InputError
from hamloc.fincat import find_equivalence, is_isomorphism, validate_category
from hamloc.hammock import (
    Hammock,
    compose_hammocks,
    embed,
    embed_morphism,
    embed_relscat,
    hammock_localization,
    hammock_localization_relscat,
    homotopy_category_of_localization,
    mapping_space,
    reduce_hammock,
    validate_hammock,
    width_zero,
)
from hamloc.relcat import RelativeCategory, oracle_localized_homset
from hamloc.scat import (
    RelativeSimplicialCategory,
    homotopy_category,
    promote,
    sub_from_morphisms,
    validate_simplicial_functor,
)
from hamloc.simplicial import pi0, validate_sset


class TestReduce:
    def test_width_zero_fixed(self):
        r = inst.walking_weq()
        h = width_zero("X", 1)
        assert reduce_hammock(r, h) == h

    def test_forward_forward_merges(self):
        r = RelativeCategory(inst.chain3(), ["idX", "idY", "idZ"])
        h = Hammock("X", "Z", ("f", "f"), ((("f", "g")),), ())
        h = Hammock("X", "Z", ("f", "f"), (("f", "g"),), ())
        got = reduce_hammock(r, h)
        assert got.directions == ("f",)
        assert got.rows == (("gf",),)

    def test_identity_column_flanked_by_forwards(self):
        r = RelativeCategory(inst.chain3(), ["idX", "idY", "idZ"])
        h = Hammock("X", "Z", ("f", "f", "f"), (("f", "idY", "g"),), ())
        left = reduce_hammock(r, h, "leftmost")
        right = reduce_hammock(r, h, "rightmost")
        assert left == right
        assert left.rows == (("gf",),)

    def test_backward_backward_merges(self):
        r = inst.chain_weq()
        h = Hammock("Z", "X", ("b", "b"), (("g", "f"),), ())
        got = reduce_hammock(r, h)
        assert got.rows == (("gf",),)
        assert got.directions == ("b",)

    def test_identity_row_all_collapses(self):
        r = inst.walking_weq()
        h = Hammock("X", "X", ("f", "b"), (("idX", "idX"),), ())
        got = reduce_hammock(r, h)
        assert got.width == 0

    def test_unknown_strategy_rejected(self):
        with pytest.raises(InputError):
            reduce_hammock(inst.walking_weq(), width_zero("X"), "middle")


class TestValidate:
    def test_good_hammock(self):
        r = inst.walking_weq()
        h = Hammock("X", "X", ("f", "b"), (("idX", "idX"), ("w", "w")), (("w",),))
        assert validate_hammock(r, h) == []

    def test_backward_outside_weq_flagged(self):
        r = inst.walking_arrow_relative()
        h = Hammock("Y", "X", ("b",), (("f",),), ())
        assert any("not a weq" in v for v in validate_hammock(r, h))

    def test_non_commuting_square_flagged(self):
        r = inst.walking_weq()
        h = Hammock("X", "Y", ("f",), (("idX",), ("w",)), ((),))
        report = validate_hammock(r, h)
        assert report  # rows end at different objects or squares broken


class TestCompose:
    def test_unit_laws_strict(self):
        r = inst.walking_weq()
        f = embed_morphism(r, "w")
        assert compose_hammocks(r, f, width_zero("X")) == f
        assert compose_hammocks(r, width_zero("Y"), f) == f

    def test_embedding_is_strictly_functorial(self):
        r = RelativeCategory(inst.chain3(), ["idX", "idY", "idZ"])
        got = compose_hammocks(r, embed_morphism(r, "g"), embed_morphism(r, "f"))
        assert got == embed_morphism(r, "gf")

    def test_mismatch_rejected(self):
        r = inst.walking_weq()
        with pytest.raises(InputError):
            compose_hammocks(r, embed_morphism(r, "w"), embed_morphism(r, "w"))

    def test_zigzag_roundtrip_identity_at_component_level(self):
        r = inst.walking_weq()
        forward = embed_morphism(r, "w")
        backward = Hammock("Y", "X", ("b",), (("w",),), ())
        loop = compose_hammocks(r, backward, forward)
        ms = mapping_space(r, "X", "X", 1, 4)
        assert ms.partition.same(loop.name, width_zero("X").name)


class TestMappingSpace:
    def test_identity_weq_is_discrete(self):
        for r in inst.discrete_localization_suite(count=4):
            c = r.cat
            for x in c.objects:
                for y in c.objects:
                    ms = mapping_space(r, x, y, 2, 3)
                    assert ms.verdict == "stable"
                    assert len(ms.vertices) == len(c.hom(x, y))
                    for level in range(1, 3):
                        assert ms.sset.nondegenerate(level) == ()

    def test_walking_weq_backward_hom_nonempty(self):
        ms = mapping_space(inst.walking_weq(), "Y", "X", 1, 4)
        names = {h.name for h in ms.vertices}
        assert Hammock("Y", "X", ("b",), (("w",),), ()).name in names

    def test_walking_weq_endos_single_component(self):
        ms = mapping_space(inst.walking_weq(), "X", "X", 1, 4)
        assert ms.verdict == "stable"
        assert len(ms.partition.classes) == 1
        assert len(ms.vertices) == 3

    def test_simplicial_identities_hold(self):
        for r in (inst.walking_weq(), inst.span_one_leg_inverted(), inst.chain_weq()):
            for x in r.cat.objects:
                for y in r.cat.objects:
                    ms = mapping_space(r, x, y, 2, 3)
                    assert validate_sset(ms.sset) == [], (x, y)

    def test_pi0_matches_sset_pi0(self):
        ms = mapping_space(inst.walking_weq(), "X", "X", 2, 3)
        assert len(pi0(ms.sset).classes) == len(ms.partition.classes)

    def test_pi0_detail_agrees_with_full(self):
        for r in (inst.walking_weq(), inst.span_one_leg_inverted(), inst.retract_weq()):
            for x in r.cat.objects:
                for y in r.cat.objects:
                    full = mapping_space(r, x, y, 1, 4, "full")
                    slim = mapping_space(r, x, y, 1, 4, "pi0")
                    assert [h.name for h in full.vertices] == [h.name for h in slim.vertices]
                    assert len(full.partition.classes) == len(slim.partition.classes)
                    assert full.verdict == slim.verdict

    def test_oracle_cross_check(self):
        """Component classes of stable mapping spaces match the word
        oracle wherever it is determined: the vertex rows, read as words,
        pull the oracle partition back onto the hammock partition."""
        for name, r in inst.oracle_suite():
            for x in r.cat.objects:
                for y in r.cat.objects:
                    ms = mapping_space(r, x, y, 1, 4)
                    hs = oracle_localized_homset(r, x, y, 8)
                    if not (ms.verdict == "stable" and hs.determined):
                        continue
                    assert len(ms.partition.classes) == hs.class_count(), (name, x, y)
                    for h in ms.vertices:
                        word = tuple(
                            (d, m) for d, m in zip(h.directions, h.rows[0])
                        )
                        for other in ms.vertices:
                            word2 = tuple(
                                (d, m) for d, m in zip(other.directions, other.rows[0])
                            )
                            assert ms.partition.same(h.name, other.name) == \
                                (hs.class_index(word) == hs.class_index(word2))

    def test_bounds_validated(self):
        r = inst.walking_weq()
        with pytest.raises(InputError):
            mapping_space(r, "X", "X", 0, 4)
        with pytest.raises(InputError):
            mapping_space(r, "X", "X", 1, 0)


class TestLocalization:
    def test_identity_weq_matches_promote(self):
        r = inst.walking_arrow_relative()
        loc = hammock_localization(r, 2, 3)
        p = promote(r.cat, 2)
        for x in r.cat.objects:
            for y in r.cat.objects:
                for level in range(3):
                    assert len(loc.pair(x, y).sset.level(level)) == \
                        len(p.homs[(x, y)].level(level))
        # composition agrees under the embedding bijection
        fun = embed(r, loc)
        assert validate_simplicial_functor(fun) == []
        for (g, f), h in r.cat.table.items():
            x, y, z = r.cat.dom[f], r.cat.cod[f], r.cat.cod[g]
            got = loc.compose_simplices(
                x, y, z, 0,
                fun.simplex_map[(y, z, 0, g)], fun.simplex_map[(x, y, 0, f)],
            )
            assert got == fun.simplex_map[(x, z, 0, h)]
        assert loc.overflows == 0

    def test_terminal_localization_terminal(self):
        loc = hammock_localization(inst.terminal_relative(), 2, 3)
        assert loc.verdict == "stable"
        ho, _ = homotopy_category_of_localization(loc)
        assert len(ho.objects) == 1 and len(ho.morphisms) == 1

    def test_walking_weq_ho_is_walking_iso(self):
        loc = hammock_localization(inst.walking_weq(), 1, 4)
        assert loc.verdict == "stable"
        ho, _ = homotopy_category_of_localization(loc)
        assert validate_category(ho) == []
        out = find_equivalence(ho, inst.walking_iso(), 100_000)
        assert out.found

    def test_localization_inverts_weq(self):
        for name, r in inst.oracle_suite():
            loc = hammock_localization(r, 1, 4)
            if loc.verdict != "stable":
                continue
            ho, classmap = homotopy_category_of_localization(loc)
            for w in r.weq:
                image = embed_morphism(r, w)
                cls = classmap[(r.cat.dom[w], r.cat.cod[w], image.name)]
                assert is_isomorphism(ho, cls), (name, w)

    def test_embed_injective_for_identity_weq(self):
        # injectivity is per hom-set; simplex names are scoped likewise
        r = inst.walking_arrow_relative()
        loc = hammock_localization(r, 1, 3)
        fun = embed(r, loc)
        for x in r.cat.objects:
            for y in r.cat.objects:
                images = [fun.simplex_map[(x, y, 0, m)] for m in r.cat.hom(x, y)]
                assert len(set(images)) == len(images)

    def test_identity_maps_to_width_zero(self):
        r = inst.walking_weq()
        assert embed_morphism(r, "idX") == width_zero("X")

    def test_serialization_carries_bounds(self):
        loc = hammock_localization(inst.walking_weq(), 1, 4)
        data = loc.to_json()
        assert data["bounds"]["verdict"] == "stable"
        assert data["bounds"]["truncation"] == 1
        assert data["bounds"]["width"] == 4


class TestConfluence:
    def test_reduction_strategy_independent(self):
        suite = [r for _, r in inst.oracle_suite()]
        rng = random.Random(424242)
        for _ in range(200):
            r = rng.choice(suite)
            h = inst.random_hammock(rng, r, w_max=5, h_max=2)
            assert validate_hammock(r, h) == []
            left = reduce_hammock(r, h, "leftmost")
            right = reduce_hammock(r, h, "rightmost")
            assert left == right
            assert validate_hammock(r, left) == []


class TestRelscatLocalization:
    def test_discrete_identities_returns_promote_shape(self):
        c = inst.walking_arrow()
        p = promote(c, 1)
        rs = RelativeSimplicialCategory(p, sub_from_morphisms(p, c, ["idX", "idY"]))
        rl = hammock_localization_relscat(rs, 1, 4)
        assert rl.verdict == "stable"
        for x in c.objects:
            for y in c.objects:
                for level in range(2):
                    assert len(rl.diag_homs[(x, y)].level(level)) == len(c.hom(x, y))
        fun = embed_relscat(rs, rl)
        assert validate_simplicial_functor(fun) == []

    def test_promoted_relative_category_agrees_with_direct_localization(self):
        r = inst.walking_weq()
        p = promote(r.cat, 1)
        rs = RelativeSimplicialCategory(p, sub_from_morphisms(p, r.cat, sorted(r.weq)))
        rl = hammock_localization_relscat(rs, 1, 4)
        direct = hammock_localization(r, 1, 4)
        for x in r.cat.objects:
            for y in r.cat.objects:
                for level in range(2):
                    assert len(rl.diag_homs[(x, y)].level(level)) == \
                        len(direct.pair(x, y).sset.level(level)), (x, y, level)
        ho_rl = homotopy_category(rl.scat())
        ho_direct, _ = homotopy_category_of_localization(direct)
        assert find_equivalence(ho_rl, ho_direct, 100_000).found

    def test_terminal_input_terminal_output(self):
        p = promote(inst.terminal(), 1)
        rs = RelativeSimplicialCategory(p, sub_from_morphisms(p, inst.terminal(), ["id*"]))
        rl = hammock_localization_relscat(rs, 1, 4)
        assert [len(level) for level in rl.diag_homs[("*", "*")].levels] == [1, 1]

    def test_diagonal_simplicial_identities(self):
        iso = inst.walking_iso()
        p = promote(iso, 1)
        rs = RelativeSimplicialCategory(
            p, sub_from_morphisms(p, iso, ["idX", "idY", "u", "v"])
        )
        rl = hammock_localization_relscat(rs, 1, 4)
        for pair, sset in rl.diag_homs.items():
            assert validate_sset(sset) == [], pair
