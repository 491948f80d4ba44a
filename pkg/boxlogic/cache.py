"""
The on-disk structure cache. Every generated structure lives in its own
directory `<cache_dir>/<spec-hash>-k<k>-<kind>/` next to the box specs it was
built from. The directory is sealed with a `.checksum` file (see `hashing`)
so that regeneration can be skipped and tampered entries are rejected.
"""

import json
import logging as log
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence, TextIO

from .algebra import EffectStructure, StructureKind
from .bitsets import from_hex, to_hex
from .box_model import BoxSpec, build_one_box_logic
from .box_product import GenerationReport, product_atoms, product_space
from .errors import CacheError, MissingInputError, StructuralError
from .hashing import check_dirhash, hash_document, seal_directory

STRUCTURE_FILE = 'structure.txt'
SPEC_FILE = 'spec.json'
REPORT_FILE = 'report.json'

FORMAT_TAG = 'boxlogic-structure'
FORMAT_VERSION = 1

KINDS = ('effect', 'omp')

Generator = Callable[[], tuple[EffectStructure, GenerationReport]]


def spec_document(boxes: Sequence[BoxSpec]) -> list[dict[str, Any]]:
    # pylint: disable=missing-function-docstring
    return [b.to_json() for b in boxes]


def entry_name(boxes: Sequence[BoxSpec], kind: str) -> str:
    """
    The directory name of a cache entry, e.g. `3f2a...-k3-omp`.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown structure kind {kind}")
    return f"{hash_document(spec_document(boxes))}-k{len(boxes)}-{kind}"


@dataclass(frozen=True)
class CacheEntry:
    """
    A (possibly not yet existing) cache directory.
    """

    path: Path

    @staticmethod
    def of(cache_dir: Path, boxes: Sequence[BoxSpec], kind: str) -> "CacheEntry":
        # pylint: disable=missing-function-docstring
        return CacheEntry(cache_dir.joinpath(entry_name(boxes, kind)))

    @property
    def structure_file(self) -> Path:
        # pylint: disable=missing-function-docstring
        return self.path.joinpath(STRUCTURE_FILE)

    def exists(self) -> bool:
        # pylint: disable=missing-function-docstring
        return self.structure_file.is_file()

    def is_valid(self) -> bool:
        """
        Returns True if the entry exists and its checksum matches.
        """
        if not self.exists():
            return False
        matches, _ = check_dirhash(self.path)
        return matches


def _write_structure(f: TextIO, structure: EffectStructure, spec_hash: str,
                     report: GenerationReport) -> None:
    f.write(f"{FORMAT_TAG} {FORMAT_VERSION}\n")
    f.write(f"spec-hash {spec_hash}\n")
    f.write(f"k {len(structure.boxes)}\n")
    f.write(f"kind {structure.kind.value}\n")
    f.write(f"cells {structure.space.size}\n")
    f.write(f"elements {len(structure)}\n")
    f.write(f"atoms {len(structure.atoms)}\n")
    f.write(f"rounds {report.closure_rounds}\n")
    f.write("[masks]\n")
    for m in structure.elements:
        f.write(to_hex(m) + "\n")
    f.write("[atoms]\n")
    for a in structure.atoms:
        f.write(f"{structure.index[a]}\n")
    # one line per new atom: `<atom index>: <cover>; <cover>` with covers
    # given as comma separated atom indices
    f.write("[certificates]\n")
    for atom, covers in sorted(structure.certificates.items()):
        rendered = "; ".join(",".join(map(str, c)) for c in covers)
        f.write(f"{structure.atom_index[atom]}: {rendered}\n")
    f.write("[end]\n")


def save_structure(entry: CacheEntry,
                   structure: EffectStructure,
                   report: GenerationReport) -> str:
    """
    Writes a structure with its box specs and generation report into the entry
    directory and seals it.

    Args:
        entry (CacheEntry) : The target entry.
        structure (EffectStructure) : A generated structure.
        report (GenerationReport) : The report of the generation run.

    Returns:
        (str) The directory hash stored in `.checksum`.
    """
    entry.path.mkdir(parents=True, exist_ok=True)
    document = spec_document(structure.boxes)
    with open(entry.path.joinpath(SPEC_FILE), 'w', encoding='UTF-8') as f:
        json.dump(document, f, indent=2)
    with open(entry.structure_file, 'w', encoding='UTF-8') as f:
        _write_structure(f, structure, hash_document(document), report)
    with open(entry.path.joinpath(REPORT_FILE), 'w', encoding='UTF-8') as f:
        json.dump(report.to_json(), f, indent=2)
    h = seal_directory(entry.path)
    log.info('Cached %r in %s', structure, entry.path)
    return h


def _parse_header(lines: list[str]) -> tuple[dict[str, str], int]:
    if not lines or lines[0].strip() != f"{FORMAT_TAG} {FORMAT_VERSION}":
        raise CacheError(f"not a {FORMAT_TAG} v{FORMAT_VERSION} file")
    header: dict[str, str] = {}
    pos = 1
    while pos < len(lines) and not lines[pos].startswith('['):
        key, _, value = lines[pos].strip().partition(' ')
        header[key] = value
        pos += 1
    missing = {'spec-hash', 'k', 'kind', 'cells', 'elements', 'atoms'} - set(header)
    if missing:
        raise CacheError(f"cache header lacks {sorted(missing)}")
    return header, pos


def _sections(lines: list[str], start: int) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {}
    current = None
    for line in lines[start:]:
        line = line.strip()
        if line.startswith('[') and line.endswith(']'):
            current = line[1:-1]
            sections[current] = []
        elif line and current is not None:
            sections[current].append(line)
    if 'end' not in sections:
        raise CacheError("truncated structure file")
    return sections


def _parse_certificates(rows: list[str],
                        atoms: Sequence[int]) -> dict[int, list[tuple[int, ...]]]:
    certificates: dict[int, list[tuple[int, ...]]] = {}
    for row in rows:
        head, _, rest = row.partition(':')
        covers = [tuple(int(i) for i in c.split(',')) for c in rest.split(';') if c.strip()]
        certificates[atoms[int(head)]] = covers
    return certificates


def load_structure(path: Path, *, verify: bool = True) -> EffectStructure:
    """
    Loads a cached structure.

    Args:
        path (Path) : The entry directory.
        verify (bool, default: True) : Verify the directory checksum first.

    Returns:
        (EffectStructure) The structure, with its 1-box factors rebuilt from
        the stored box specs.

    Raises:
        MissingInputError : If the entry does not exist.
        CacheError : If the checksum or the header counts do not match.
    """
    entry = CacheEntry(path)
    if not entry.exists():
        raise MissingInputError(f"no cached structure at {path}")
    if verify and not entry.is_valid():
        raise CacheError(f"checksum mismatch for cache entry {path}")

    with open(path.joinpath(SPEC_FILE), 'r', encoding='UTF-8') as f:
        document = json.load(f)
    with open(entry.structure_file, 'r', encoding='UTF-8') as f:
        lines = f.readlines()

    header, pos = _parse_header(lines)
    sections = _sections(lines, pos)
    if header['spec-hash'] != hash_document(document):
        raise CacheError(f"{SPEC_FILE} does not match the structure header in {path}")
    try:
        boxes = [BoxSpec.from_json(d) for d in document]
        masks = [from_hex(m) for m in sections.get('masks', [])]
        atom_positions = [int(i) for i in sections.get('atoms', [])]
        kind = StructureKind(header['kind'])
        counts = (int(header['k']), int(header['cells']),
                  int(header['elements']), int(header['atoms']))
    except (ValueError, KeyError, StructuralError) as e:
        raise CacheError(f"malformed cache entry {path}: {e}") from e
    if counts[:1] != (len(boxes),) or counts[2:] != (len(masks), len(atom_positions)):
        raise CacheError(f"header counts of {path} do not match its contents")

    factors = [build_one_box_logic(b) for b in boxes]
    space = product_space(factors)
    if space.size != counts[1]:
        raise CacheError(f"{path} declares {counts[1]} cells, the specs give {space.size}")
    atoms = sorted(masks[i] for i in atom_positions)
    structure = EffectStructure(
        space, masks, kind=kind, atoms=atoms, boxes=boxes, factors=factors,
        box_atoms=product_atoms(factors),
        certificates=_parse_certificates(sections.get('certificates', []), atoms))
    log.debug('Loaded %r from %s', structure, path)
    return structure


def load_report(path: Path) -> dict[str, Any]:
    # pylint: disable=missing-function-docstring
    with open(path.joinpath(REPORT_FILE), 'r', encoding='UTF-8') as f:
        report: dict[str, Any] = json.load(f)
    return report


def generate_cached(entry: CacheEntry,
                    generate: Generator,
                    *,
                    force: bool = False) -> tuple[dict[str, Any], bool]:
    """
    Runs `generate` and stores its result unless the entry already holds a
    valid structure.

    Args:
        entry (CacheEntry) : The target entry.
        generate (Callable) : Builds the structure and its report.
        force (bool, default: False) : Regenerate even if the entry is valid.

    Returns:
        (tuple[dict, bool]) The generation report JSON and whether the cached
        entry was reused.
    """
    if not force and entry.is_valid():
        log.info('Cache entry %s is up to date, skipping generation', entry.path)
        return load_report(entry.path), True
    if entry.exists():
        log.info('Cache entry %s is stale or forced, regenerating', entry.path)
    structure, report = generate()
    save_structure(entry, structure, report)
    return report.to_json(), False
