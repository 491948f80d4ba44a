# pylint: disable=missing-module-docstring

import unittest

from pathlib import Path
from boxlogic.hashing import (
    hash_directory,
    hash_document,
    read_cached_dirhash,
    cache_dirhash,
    check_dirhash,
    seal_directory,
)
from ._test_utils import FakeFileSystemTestCase


class TestHashing(FakeFileSystemTestCase):
    # pylint: disable=missing-class-docstring
    def create_file_structure(self) -> None:
        # pylint: disable=missing-function-docstring
        testdir = Path("testdir")
        entry1 = testdir.joinpath("0123-k1-effect")
        entry2 = testdir.joinpath("0123-k2-omp")
        nested = entry1.joinpath("nested")

        nested.mkdir(parents=True)
        entry2.mkdir(parents=True)

        self.file(testdir.joinpath("spec.json"), "foo")
        self.file(entry1.joinpath("structure.txt"), "bar")
        self.file(entry1.joinpath("report.json"), "baz")
        self.file(entry2.joinpath("structure.txt"), "___")
        self.file(nested.joinpath("generation.log"), "asdfasdf")

    def test_hash_deterministic(self) -> None:
        # pylint: disable=missing-function-docstring
        h = hash_directory(Path("testdir"))
        self.assertEqual(h, hash_directory(Path("testdir")))
        self.assertNotEqual(h, hash_directory(Path("testdir", "0123-k1-effect")))

    def test_hash_skips_ignored_files(self) -> None:
        # pylint: disable=missing-function-docstring
        old_hash = hash_directory(Path("testdir"), ignore=[".checksum"])
        ignored_hash = hash_directory(Path("testdir"), ignore=["*.log"])
        file_to_remove = Path("testdir", "0123-k1-effect", "nested", "generation.log")

        file_to_remove.unlink()

        removed_file_hash = hash_directory(Path("testdir"), ignore=[".checksum"])
        self.assertNotEqual(old_hash, ignored_hash)
        self.assertEqual(ignored_hash, removed_file_hash)

    def test_default_patterns_ignore_logs(self) -> None:
        # pylint: disable=missing-function-docstring
        old_hash = hash_directory(Path("testdir"))
        self.file(Path("testdir", "run.log"), "noise")
        self.assertEqual(old_hash, hash_directory(Path("testdir")))

    def test_hash_detect_changes(self) -> None:
        # pylint: disable=missing-function-docstring
        old_hash = hash_directory(Path("testdir"))

        with open(Path("testdir", "spec.json"), "w+", encoding="UTF-8") as f:
            f.write("some other content")

        self.assertNotEqual(old_hash, hash_directory(Path("testdir")))

    def test_read_cached_dirhash_exists(self) -> None:
        # pylint: disable=missing-function-docstring
        self.file(Path("testdir", ".checksum"), "somehash")
        self.assertEqual("somehash", read_cached_dirhash(Path("testdir")))

    def test_read_cached_dirhash_no_file(self) -> None:
        # pylint: disable=missing-function-docstring
        self.assertIsNone(read_cached_dirhash(Path("testdir")))

    def test_cache_dirhash(self) -> None:
        # pylint: disable=missing-function-docstring

        self.assertFalse(Path("testdir", ".checksum").exists())
        cache_dirhash(Path("testdir"), "my-custom-hash")
        self.assertTrue(Path("testdir", ".checksum").is_file())
        with open(Path("testdir", ".checksum"), "r", encoding="UTF-8") as f:
            self.assertEqual(f.read(), "my-custom-hash")

    def test_check_dirhash_existing_hash(self) -> None:
        # pylint: disable=missing-function-docstring
        existing_hash = hash_directory(Path("testdir"))
        self.file(Path("testdir", ".checksum"), existing_hash)

        same_hash, new_hash = check_dirhash(Path("testdir"))

        self.assertTrue(same_hash)
        self.assertEqual(existing_hash, new_hash)

    def test_check_dirhash_wrong_hash(self) -> None:
        # pylint: disable=missing-function-docstring
        existing_hash = hash_directory(Path("testdir"))
        self.file(Path("testdir", ".checksum"), "asdfasdfs")

        same_hash, new_hash = check_dirhash(Path("testdir"))

        self.assertFalse(same_hash)
        self.assertEqual(existing_hash, new_hash)

    def test_check_dirhash_no_hash_file(self) -> None:
        # pylint: disable=missing-function-docstring
        existing_hash = hash_directory(Path("testdir"))

        self.assertFalse(Path("testdir", ".checksum").exists())

        same_hash, new_hash = check_dirhash(Path("testdir"))

        self.assertFalse(same_hash)
        self.assertEqual(existing_hash, new_hash)

    def test_seal_directory(self) -> None:
        # pylint: disable=missing-function-docstring
        entry = Path("testdir", "0123-k2-omp")
        h = seal_directory(entry)

        self.assertEqual(h, read_cached_dirhash(entry))
        self.assertTrue(check_dirhash(entry)[0])

        self.file(entry.joinpath("structure.txt"), "tampered")
        self.assertFalse(check_dirhash(entry)[0])

    def test_hash_document_canonical(self) -> None:
        # pylint: disable=missing-function-docstring
        a = hash_document({"inputs": [1, 2], "name": "x"})
        b = hash_document({"name": "x", "inputs": [1, 2]})
        self.assertEqual(a, b)
        self.assertEqual(16, len(a))
        self.assertNotEqual(a, hash_document({"name": "x", "inputs": [2, 1]}))


if __name__ == "__main__":
    unittest.main()
