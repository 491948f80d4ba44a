# pylint: disable=missing-module-docstring

import unittest
from itertools import combinations

from boxlogic.algebra import (
    CellSpace,
    EffectStructure,
    Proposition,
    StructureKind,
    even_subsets_logic,
    pairwise_disjoint,
)
from boxlogic.axioms import (
    check_atomistic,
    check_compatible,
    check_lattice_and_boolean,
    check_orthoposet,
    classify,
    find_atoms,
)
from boxlogic.box_product import localized_elements
from boxlogic.errors import DomainError, StructuralError
from ._test_utils import effect_algebra, one_box, orthoposet


class TestEffectStructure(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_oplus(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = one_box()
        self.assertEqual(logic.oplus(0b0011, 0b1100), 0b1111)
        self.assertEqual(logic.oplus(0b0011, 0), 0b0011)
        self.assertIsNone(logic.oplus(0b0011, 0b0101))
        self.assertTrue(logic.oplus_defined(0b0101, 0b1010))
        self.assertEqual(logic.complement(0b0011), 0b1100)

    def test_sum(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = one_box()
        self.assertEqual(logic.sum([0b0011, 0b1100]), 0b1111)
        self.assertEqual(logic.sum([]), 0)
        self.assertIsNone(logic.sum([0b0011, 0b0101]))
        self.assertIsNone(logic.sum([0b0001]))
        self.assertFalse(logic.sum_defined([0b0011, 0b1100, 0b0101]))

    def test_membership(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = one_box()
        self.assertIn(0b0011, logic)
        self.assertNotIn(0b0001, logic)
        self.assertIn(Proposition(0b0011, "gamma(2,2)"), logic)
        self.assertNotIn(Proposition(0b0011, "omega4"), logic)
        self.assertEqual(logic.proposition(1), Proposition(0b0011, "gamma(2,2)"))
        self.assertEqual(logic.index_of(0b1111), 5)
        self.assertRaises(DomainError, logic.mask_of, 0b0001)
        self.assertRaises(DomainError, logic.mask_of, Proposition(0b0011, "omega4"))

    def test_invalid_structures(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertRaises(StructuralError, CellSpace, 0, "empty")
        space = CellSpace(2, "two")
        self.assertRaises(StructuralError, EffectStructure, space, [0, 0b111],
                          kind=StructureKind.CONCRETE)

    def test_atoms_from_order(self) -> None:
        # pylint: disable=missing-function-docstring
        space = CellSpace(3, "three")
        logic = EffectStructure(space, [0, 1, 2, 4, 3, 5, 6, 7], kind=StructureKind.CONCRETE)
        self.assertEqual(logic.atoms, (1, 2, 4))
        self.assertEqual(logic.zero, 0)
        self.assertEqual(logic.one, 7)


class TestOrderRelation(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_leq(self) -> None:
        # pylint: disable=missing-function-docstring
        order = one_box().order
        self.assertTrue(order.leq(0, 0b0011))
        self.assertTrue(order.leq(0b0011, 0b1111))
        self.assertFalse(order.leq(0b0011, 0b0101))

    def test_up_and_down_sets(self) -> None:
        # pylint: disable=missing-function-docstring
        order = one_box().order
        self.assertEqual(order.up_set(1), [1, 5])
        self.assertEqual(order.down_set(5), [0, 1, 2, 3, 4, 5])
        self.assertEqual(order.minimal_nonzero(), [1, 2, 3, 4])
        self.assertEqual(len(order.pairs), 15)

    def test_join_and_meet(self) -> None:
        # pylint: disable=missing-function-docstring
        order = one_box().order
        self.assertEqual(order.join(1, 2), 5)
        self.assertEqual(order.join(1, 4), 5)
        self.assertEqual(order.join(1, 1), 1)
        self.assertEqual(order.meet(1, 2), 0)
        self.assertEqual(order.meet(1, 5), 1)

    def test_no_join_in_effect_algebra(self) -> None:
        # pylint: disable=missing-function-docstring
        space = CellSpace(4, "four")
        # {0} and {1} have no common upper bound in the derived order
        masks = [0, 1, 2, 4, 8, 0b0111, 0b1011, 0b1000, 0b0100, 0b1111]
        logic = EffectStructure(space, masks, kind=StructureKind.CONCRETE,
                                atoms=[1, 2, 4, 8])
        a, b = logic.index[1], logic.index[2]
        self.assertIsNone(logic.order.join(a, b))

    def test_pairs_limit(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = even_subsets_logic(6)
        self.assertEqual(len(logic), 2048)
        with self.assertRaises(DomainError):
            _ = logic.order.pairs


class TestConcreteLogics(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_even_subsets_n1_is_boolean(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = even_subsets_logic(1)
        self.assertEqual(logic.elements, (0, 3))
        self.assertTrue(check_lattice_and_boolean(logic).is_boolean)

    def test_even_subsets_n2_is_oml_not_boolean(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = even_subsets_logic(2)
        self.assertEqual(len(logic), 8)
        self.assertEqual(len(logic.atoms), 6)
        self.assertTrue(all(r.passed for r in check_orthoposet(logic)))
        lattice = check_lattice_and_boolean(logic)
        self.assertTrue(lattice.is_lattice)
        self.assertFalse(lattice.is_boolean)
        self.assertTrue(lattice.exhaustive)

        flags = classify(logic)
        self.assertTrue(flags.is_oml)
        self.assertFalse(flags.is_boolean)

    def test_even_subsets_rejects_empty(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertRaises(ValueError, even_subsets_logic, 0)

    def test_one_box_classification(self) -> None:
        # pylint: disable=missing-function-docstring
        flags = classify(one_box())
        self.assertEqual(flags.to_json(), {
            "is_effect_algebra": True,
            "satisfies_coherence": True,
            "is_omp": True,
            "is_oml": True,
            "is_boolean": False,
        })

    def test_compatibility(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = one_box()
        witness = check_compatible(logic, 0b0011, 0b1100)
        self.assertIsNotNone(witness)
        assert witness is not None
        self.assertEqual(witness.r.mask, 0)
        self.assertEqual(witness.p1.mask, 0b0011)
        self.assertIsNone(check_compatible(logic, 0b0011, 0b0101))
        self.assertIsNotNone(check_compatible(logic, 0b0011, 0b1111))
        self.assertRaises(DomainError, check_compatible, logic, 0b0001, 0b0011)

    def test_atoms_and_atomisticity(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = one_box()
        self.assertEqual([p.mask for p in find_atoms(logic)], [3, 5, 10, 12])
        self.assertTrue(check_atomistic(logic).passed)

    def test_generated_structures_are_atomistic(self) -> None:
        # pylint: disable=missing-function-docstring
        for name, structure in (("effect-2", effect_algebra(2)), ("omp-2", orthoposet(2)),
                                ("effect-3", effect_algebra(3)), ("omp-3", orthoposet(3))):
            with self.subTest(structure=name):
                report = check_atomistic(structure)
                self.assertTrue(report.passed)
                self.assertEqual(report.witness, ())

    def test_localized_elements_are_compatible(self) -> None:
        # pylint: disable=missing-function-docstring
        structure = effect_algebra(2)
        first = localized_elements(structure, [0])
        second = localized_elements(structure, [1])
        for p in first:
            for q in second:
                witness = check_compatible(structure, p, q)
                self.assertIsNotNone(witness)
                assert witness is not None
                self.assertEqual(witness.r.mask, p.mask & q.mask)
        same_box = [check_compatible(structure, p, q) for p, q in combinations(first, 2)]
        self.assertIn(None, same_box)

    def test_pairwise_disjoint(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertTrue(pairwise_disjoint([1, 2, 4]))
        self.assertFalse(pairwise_disjoint([1, 3]))
        self.assertTrue(pairwise_disjoint([]))


if __name__ == "__main__":
    unittest.main()
