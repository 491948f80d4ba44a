# pylint: disable=missing-module-docstring

import unittest
from concurrent.futures import ThreadPoolExecutor

from boxlogic.exact_cover import DecompositionOracle, decompose_into_atoms

# the four 1-box atoms of the binary box: x0, y0, y1, x1
BINARY_ATOMS = (0b0011, 0b0101, 0b1010, 0b1100)


class TestDecompositionOracle(unittest.TestCase):
    # pylint: disable=missing-class-docstring

    def test_decomposable(self) -> None:
        # pylint: disable=missing-function-docstring
        oracle = DecompositionOracle(BINARY_ATOMS, 4)
        self.assertTrue(oracle.decomposable(0))
        self.assertTrue(oracle.decomposable(0b1111))
        self.assertTrue(oracle.decomposable(0b0011))
        self.assertFalse(oracle.decomposable(0b0001))
        self.assertFalse(oracle.decomposable(0b0111))

    def test_first_cover_in_canonical_order(self) -> None:
        # pylint: disable=missing-function-docstring
        oracle = DecompositionOracle(BINARY_ATOMS, 4)
        self.assertEqual(oracle.decompose(0b1111), [0, 3])
        self.assertEqual(oracle.decompose(0), [])
        self.assertIsNone(oracle.decompose(0b1000))

    def test_all_covers(self) -> None:
        # pylint: disable=missing-function-docstring
        oracle = DecompositionOracle(BINARY_ATOMS, 4)
        covers = sorted(sorted(c) for c in oracle.all_covers(0b1111))
        self.assertEqual(covers, [[0, 3], [1, 2]])
        self.assertEqual(oracle.all_covers(0b0110), [])
        self.assertEqual(len(oracle.all_covers(0b1111, limit=1)), 1)

    def test_is_certificate(self) -> None:
        # pylint: disable=missing-function-docstring
        oracle = DecompositionOracle(BINARY_ATOMS, 4)
        self.assertTrue(oracle.is_certificate(0b1111, [1, 2]))
        self.assertFalse(oracle.is_certificate(0b1111, [0, 1]))
        self.assertFalse(oracle.is_certificate(0b1111, [0]))

    def test_memo_grows_and_is_shared(self) -> None:
        # pylint: disable=missing-function-docstring
        oracle = DecompositionOracle(BINARY_ATOMS, 4)
        self.assertEqual(len(oracle), 1)
        oracle.decomposable(0b1111)
        self.assertGreater(len(oracle), 1)

        masks = list(range(16)) * 8
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(oracle.decomposable, masks))
        self.assertEqual(results, [oracle.decomposable(m) for m in masks])
        self.assertEqual(sum(results[:16]), 6)

    def test_decompose_into_atoms(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertEqual(decompose_into_atoms(0b1111, BINARY_ATOMS, 4), [0b0011, 0b1100])
        self.assertIsNone(decompose_into_atoms(0b0001, BINARY_ATOMS, 4))


if __name__ == "__main__":
    unittest.main()
