# pylint: disable=missing-module-docstring

import json
import unittest
from math import prod

from pathlib import Path
from boxlogic.algebra import StructureKind
from boxlogic.axioms import check_atomistic, check_lattice_and_boolean, check_orthoposet
from boxlogic.box_model import (
    BoxInput,
    BoxProposition,
    BoxSpec,
    PhaseSpace,
    binary_spec,
    build_one_box_logic,
    load_box_spec,
    proposition_order,
)
from boxlogic.box_product import enumerate_by_characterization
from boxlogic.errors import DomainError, MissingInputError, StructuralError
from ._test_utils import FakeFileSystemTestCase, ternary_spec


class TestBoxSpec(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_binary_spec(self) -> None:
        # pylint: disable=missing-function-docstring
        spec = binary_spec()
        self.assertEqual(spec.num_inputs, 2)
        self.assertEqual(spec.outcome_counts, (2, 2))
        self.assertEqual(spec.atom_count, 4)
        self.assertEqual(spec.atom_pairs(), [(0, 0), (0, 1), (1, 0), (1, 1)])
        self.assertEqual(spec.label(1, 0), "y0")

    def test_json_round_trip(self) -> None:
        # pylint: disable=missing-function-docstring
        spec = BoxSpec((BoxInput("a", ("+", "-")), BoxInput("b", ("0", "1", "2"))))
        self.assertEqual(spec, BoxSpec.from_json(json.loads(json.dumps(spec.to_json()))))

    def test_invalid_specs(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertRaises(StructuralError, BoxSpec, ())
        self.assertRaises(StructuralError, BoxSpec,
                          (BoxInput("x", ("0", "1")), BoxInput("x", ("0", "1"))))
        self.assertRaises(StructuralError, BoxSpec, (BoxInput("x", ("0", "0")),))
        self.assertRaises(StructuralError, BoxSpec, (BoxInput("x", ()),))
        self.assertRaises(StructuralError, BoxSpec.from_json, {"inputs": [{"name": "x"}]})

    def test_single_outcome_input(self) -> None:
        # pylint: disable=missing-function-docstring
        trivial = BoxSpec((BoxInput("t", ("0",)),))
        self.assertEqual(trivial.atom_count, 1)
        logic = build_one_box_logic(trivial)
        self.assertEqual(logic.elements, (0, 1))
        self.assertRaises(StructuralError, BoxSpec,
                          (BoxInput("t", ("0",)), BoxInput("x", ("0", "1"))))


class TestPhaseSpace(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_cell_order(self) -> None:
        # pylint: disable=missing-function-docstring
        space = PhaseSpace(binary_spec())
        self.assertEqual(space.size, 4)
        self.assertEqual(space.space_id, "gamma(2,2)")
        self.assertEqual(space.cells(), [(0, 0), (0, 1), (1, 0), (1, 1)])
        self.assertEqual(space.index((1, 0)), 2)

    def test_cylinders(self) -> None:
        # pylint: disable=missing-function-docstring
        space = PhaseSpace(binary_spec())
        self.assertEqual(space.cylinder(0, [0]), 0b0011)
        self.assertEqual(space.cylinder(0, [1]), 0b1100)
        self.assertEqual(space.cylinder(1, [0]), 0b0101)
        self.assertEqual(space.cylinder(1, [1]), 0b1010)
        self.assertEqual(space.cylinder(1, [0, 1]), space.full)
        self.assertEqual(space.cylinder(0, []), 0)

    def test_box_propositions(self) -> None:
        # pylint: disable=missing-function-docstring
        spec = binary_spec()
        space = PhaseSpace(spec)
        x0 = BoxProposition.of(space, 0, [0])
        x_any = BoxProposition.of(space, 0, [0, 1])
        y0 = BoxProposition.of(space, 1, [0])
        nothing = BoxProposition.of(space, 1, [])

        self.assertTrue(proposition_order(x0, x_any, spec))
        self.assertTrue(proposition_order(y0, x_any, spec))
        self.assertTrue(proposition_order(nothing, x0, spec))
        self.assertFalse(proposition_order(x0, y0, spec))
        self.assertFalse(proposition_order(x_any, x0, spec))
        self.assertEqual(x0.realization.mask, 0b0011)

        self.assertRaises(DomainError, BoxProposition.of, space, 2, [0])
        self.assertRaises(DomainError, BoxProposition.of, space, 0, [2])


class TestOneBoxLogic(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_binary_logic(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = build_one_box_logic(binary_spec())
        self.assertEqual(logic.kind, StructureKind.ONE_BOX)
        self.assertEqual(len(logic), 6)
        self.assertEqual(logic.elements, (0, 3, 5, 10, 12, 15))
        self.assertEqual(logic.atoms, (3, 5, 10, 12))
        self.assertEqual(len(logic.box_atoms), 4)

    def test_binary_logic_is_oml(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = build_one_box_logic(binary_spec())
        self.assertTrue(all(r.passed for r in check_orthoposet(logic)))
        lattice = check_lattice_and_boolean(logic)
        self.assertTrue(lattice.is_lattice)
        self.assertFalse(lattice.is_boolean)

    def test_ternary_logic_is_boolean(self) -> None:
        # pylint: disable=missing-function-docstring
        logic = build_one_box_logic(ternary_spec())
        self.assertEqual(len(logic), 8)
        self.assertEqual(len(logic.atoms), 3)
        self.assertTrue(check_lattice_and_boolean(logic).is_boolean)

    def test_element_count_formula(self) -> None:
        # pylint: disable=missing-function-docstring
        spec = BoxSpec((BoxInput("a", ("0", "1", "2")), BoxInput("b", ("0", "1"))))
        logic = build_one_box_logic(spec)
        # 2 + (2^3 - 2) + (2^2 - 2) propositions
        self.assertEqual(len(logic), 10)

    def test_logics_up_to_four_inputs(self) -> None:
        # pylint: disable=missing-function-docstring
        for counts in ((2,), (4,), (2, 3), (3, 3, 3), (4, 2, 3), (4, 4, 4, 4)):
            with self.subTest(outcomes=counts):
                spec = BoxSpec(tuple(BoxInput(f"i{a}", tuple(str(o) for o in range(m)))
                                     for a, m in enumerate(counts)))
                logic = build_one_box_logic(spec)
                self.assertEqual(len(logic), 2 + sum(2 ** m - 2 for m in counts))
                self.assertEqual(len(logic.atoms), sum(counts))
                self.assertEqual(logic.space.size, prod(counts))
                self.assertEqual(enumerate_by_characterization(logic.atoms, logic.space.size),
                                 set(logic.elements))
                self.assertTrue(check_atomistic(logic).passed)
                self.assertTrue(all(r.passed for r in check_orthoposet(logic)))
                lattice = check_lattice_and_boolean(logic)
                self.assertTrue(lattice.is_lattice)
                self.assertEqual(lattice.is_boolean, len(counts) == 1)


class TestLoadSpec(FakeFileSystemTestCase):
    # pylint: disable=missing-class-docstring

    def create_file_structure(self) -> None:
        # pylint: disable=missing-function-docstring
        self.json_file(Path("specs", "binary.json"), binary_spec().to_json())

    def test_load(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertEqual(binary_spec(), load_box_spec(Path("specs", "binary.json")))

    def test_load_missing(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertRaises(MissingInputError, load_box_spec, Path("specs", "missing.json"))


if __name__ == "__main__":
    unittest.main()
