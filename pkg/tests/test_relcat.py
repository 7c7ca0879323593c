import pytest

from hamloc import instances as inst
from hamloc.errors import InputError
from hamloc.fincat import CatFunctor, validate_category
from hamloc.relcat import (
    OracleHomSet,
    RelativeCategory,
    RelativeFunctor,
    oracle_ho_category,
    oracle_localized_homset,
    union_weq,
    validate_relative,
    validate_relative_functor,
    word_endpoints,
)


class TestValidation:
    def test_identities_only_is_valid(self):
        for c in (inst.terminal(), inst.chain3(), inst.poset_square()):
            r = RelativeCategory(c, c.identity.values())
            assert validate_relative(r) == []

    def test_walking_arrow_with_marked_arrow(self):
        r = RelativeCategory(inst.walking_arrow(), ["idX", "idY", "f"])
        assert validate_relative(r) == []

    def test_closure_violation_named(self):
        r = RelativeCategory(inst.chain3(), ["idX", "idY", "idZ", "f", "g"])
        report = validate_relative(r)
        assert any("not closed" in v and "gf" in v for v in report)

    def test_missing_identity_reported(self):
        r = RelativeCategory(inst.walking_arrow(), ["idX"])
        assert any("missing identity" in v for v in validate_relative(r))


class TestUnionWeq:
    def test_union_with_nothing_is_identity(self):
        r = inst.walking_weq()
        assert union_weq(r, []).weq == r.weq

    def test_walking_arrow_everything(self):
        r = inst.walking_arrow_relative()
        got = union_weq(r, ["f"])
        assert got.weq == frozenset(r.cat.morphisms)

    def test_chain_closure_adds_composite(self):
        r = RelativeCategory(inst.chain3(), ["idX", "idY", "idZ", "g"])
        got = union_weq(r, ["f"])
        assert "gf" in got.weq

    def test_union_commutative_up_to_span(self):
        c = inst.chain3()
        r = RelativeCategory(c, c.identity.values())
        assert union_weq(union_weq(r, ["f"]), ["g"]).weq == \
            union_weq(union_weq(r, ["g"]), ["f"]).weq

    def test_union_idempotent(self):
        r = inst.walking_weq()
        once = union_weq(r, ["w"])
        assert union_weq(once, ["w"]).weq == once.weq

    def test_unknown_extra_rejected(self):
        with pytest.raises(InputError):
            union_weq(inst.walking_weq(), ["ghost"])


class TestRelativeFunctor:
    def test_weq_preservation_checked(self):
        ww = inst.walking_weq()
        wa = inst.walking_arrow_relative()
        fun = CatFunctor(ww.cat, wa.cat, {"X": "X", "Y": "Y"},
                         {"idX": "idX", "idY": "idY", "w": "f"})
        rf = RelativeFunctor(fun, ww, wa)
        assert any("not preserved" in v for v in validate_relative_functor(rf))

    def test_valid_relative_functor(self):
        ww = inst.walking_weq()
        target = RelativeCategory(inst.walking_arrow(), ["idX", "idY", "f"])
        fun = CatFunctor(ww.cat, target.cat, {"X": "X", "Y": "Y"},
                         {"idX": "idX", "idY": "idY", "w": "f"})
        assert validate_relative_functor(RelativeFunctor(fun, ww, target)) == []


class TestWordEndpoints:
    def test_forward_word(self):
        c = inst.chain3()
        assert word_endpoints(c, (("f", "f"), ("f", "g"))) == ("X", "Z")

    def test_backward_word(self):
        c = inst.walking_weq().cat
        assert word_endpoints(c, (("b", "w"),)) == ("Y", "X")

    def test_mismatch_rejected(self):
        c = inst.chain3()
        with pytest.raises(InputError):
            word_endpoints(c, (("f", "g"), ("f", "f")))


class TestOracle:
    def test_identity_weq_reproduces_hom_sets(self):
        """With nothing inverted, classes correspond to morphisms exactly."""
        for c in (inst.walking_arrow(), inst.chain3(), inst.parallel_pair(),
                  inst.poset_square()):
            r = RelativeCategory(c, c.identity.values())
            for x in c.objects:
                for y in c.objects:
                    hs = oracle_localized_homset(r, x, y, 6)
                    assert hs.determined
                    assert hs.class_count() == len(c.hom(x, y)), (x, y)
                    for m in c.hom(x, y):
                        word = () if c.is_identity(m) and x == y else (("f", m),)
                        assert hs.class_index(word) is not None

    def test_walking_weq_endomorphisms_collapse(self):
        """Exhausting words to length 4 shows w-backwards cancels w."""
        r = inst.walking_weq()
        hs = oracle_localized_homset(r, "X", "X", 4)
        assert hs.determined
        assert hs.class_count() == 1
        assert hs.class_index(()) == hs.class_index((("f", "w"), ("b", "w")))

    def test_empty_hom_gives_no_classes(self):
        r = RelativeCategory(inst.discrete(2), ["idX0", "idX1"])
        hs = oracle_localized_homset(r, "X0", "X1", 5)
        assert hs.determined
        assert hs.class_count() == 0

    def test_span_needs_length_two(self):
        r = inst.span_one_leg_inverted()
        short = oracle_localized_homset(r, "X", "Y", 1)
        assert not short.determined
        longer = oracle_localized_homset(r, "X", "Y", 4)
        assert longer.determined
        assert longer.class_count() == 1

    def test_chain_weq_inverts_everything(self):
        r = inst.chain_weq()
        for x in r.cat.objects:
            for y in r.cat.objects:
                hs = oracle_localized_homset(r, x, y, 8)
                assert hs.determined
                assert hs.class_count() == 1, (x, y)

    def test_classes_compose(self):
        """Concatenating representatives lands in a single class,
        independent of which representatives are chosen."""
        r = inst.walking_weq()
        pair = {}
        for x in r.cat.objects:
            for y in r.cat.objects:
                pair[(x, y)] = oracle_localized_homset(r, x, y, 6)
        for x in r.cat.objects:
            for y in r.cat.objects:
                for z in r.cat.objects:
                    for cls1 in pair[(x, y)].classes:
                        for cls2 in pair[(y, z)].classes:
                            targets = {
                                pair[(x, z)].class_index(w1 + w2)
                                for w1 in cls1 for w2 in cls2
                                if pair[(x, z)].class_index(w1 + w2) is not None
                            }
                            assert len(targets) == 1

    def test_unknown_object_rejected(self):
        with pytest.raises(InputError):
            oracle_localized_homset(inst.walking_weq(), "ghost", "X", 3)


class TestOracleHoCategory:
    def test_walking_weq_gives_walking_iso_shape(self):
        result = oracle_ho_category(inst.walking_weq(), 6)
        assert result.status == "ok"
        cat = result.category
        assert validate_category(cat) == []
        assert all(len(cat.hom(x, y)) == 1 for x in cat.objects for y in cat.objects)

    def test_identity_weq_reproduces_category_shape(self):
        c = inst.chain3()
        r = RelativeCategory(c, c.identity.values())
        result = oracle_ho_category(r, 6)
        assert result.status == "ok"
        for x in c.objects:
            for y in c.objects:
                assert len(result.category.hom(x, y)) == len(c.hom(x, y))

    def test_undetermined_at_tiny_bound(self):
        result = oracle_ho_category(inst.span_one_leg_inverted(), 1)
        assert result.status == "undetermined"
