"""
Checkers for the axioms of effect algebras and orthomodular posets, the
coherence law, lattice properties, compatibility and atomisticity.

All checkers are pure functions of an immutable structure. Exhaustive checks
report the lexicographically least witness in canonical element order; above
the size limits, seeded samples are drawn and the report says so.
"""

import logging as log
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterator, Optional

import networkx as nx  # type: ignore

from .algebra import (PAIRS_LIMIT, CompatibilityWitness, EffectStructure, Proposition,
                      PropositionLike)
from .bitsets import iter_bits
from .errors import StructuralError

# exhaustive triple checks are only run below this element count
TRIPLE_LIMIT = 300

# all triples are checked for distributivity below this element count
DISTRIBUTIVITY_LIMIT = 5000

# default cardinality bound of the coherence search
COHERENCE_BOUND = 4

# cap on the number of atom families visited by the coherence sweep
SWEEP_CAP = 200000

# number of random orthogonal element pairs checked for L4 in large structures
L4_SAMPLES = 200

# number of random samples drawn per sampled check
SAMPLES = 2000

Witness = tuple[int, ...]


@dataclass(frozen=True)
class AxiomReport:
    """
    Outcome of one axiom check. Witnesses are element indices. `clauses` maps
    the parts of a composite check to their outcome.
    """

    axiom: str
    passed: bool
    witness: Witness = ()
    exhaustive: bool = True
    clauses: dict[str, bool] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        document = {"axiom": self.axiom, "pass": self.passed, "witness": list(self.witness),
                    "exhaustive": self.exhaustive}
        if self.clauses:
            document["clauses"] = dict(self.clauses)
        return document


def _first(candidates: Iterator[Witness]) -> Optional[Witness]:
    return next(candidates, None)


def _check(name: str, exhaustive: bool, candidates: Iterator[Witness]) -> AxiomReport:
    witness = _first(candidates)
    if witness is not None:
        log.debug('%s fails with witness %s', name, witness)
    return AxiomReport(name, witness is None, witness or (), exhaustive)


def check_structure(s: EffectStructure) -> None:
    """
    Verifies the representation before any axiom is checked: `0` and `𝟙` are
    elements and the complement is an involution on the elements.

    Raises:
        StructuralError : If the structure is malformed.
    """
    if not s.elements:
        raise StructuralError("structure has no elements")
    if 0 not in s.index or s.one not in s.index:
        raise StructuralError("0 and 1 must be elements")
    for i, p in enumerate(s.elements):
        c = s.complement(p)
        if c not in s.index or s.complement(c) != p:
            raise StructuralError(f"complement of element {i} is not an element")


def check_effect_algebra(s: EffectStructure, *, seed: int = 0) -> list[AxiomReport]:
    """
    Checks E1 (commutativity), E2 (associativity), E3 (unique complement) and
    E4 (`p ⊕ 𝟙` defined only for `p = 0`).

    Args:
        s (EffectStructure) : The structure.
        seed (int) : Seed for sampled checks of large structures.

    Returns:
        (list[AxiomReport]) One report per axiom.

    Raises:
        StructuralError : If the complement is not an involution on elements.
    """
    check_structure(s)
    n = len(s)
    e = s.elements
    rng = random.Random(seed)
    order = s.order

    def e1_pairs() -> Iterator[Witness]:
        if n <= PAIRS_LIMIT:
            yield from ((i, j) for i in range(n) for j in range(n))
            return
        for _ in range(SAMPLES):
            t = rng.randrange(n)
            i = rng.choice(order.down_set(t))
            yield (i, s.index[e[t] ^ e[i]])
            yield (rng.randrange(n), rng.randrange(n))

    def e1() -> Iterator[Witness]:
        for i, j in e1_pairs():
            if s.oplus(e[i], e[j]) != s.oplus(e[j], e[i]):
                yield (i, j)

    def e2_triples() -> Iterator[Witness]:
        if n <= TRIPLE_LIMIT:
            for i in range(n):
                for j in range(n):
                    pq = s.oplus(e[i], e[j])
                    if pq is None:
                        continue
                    for k in range(n):
                        if s.oplus(pq, e[k]) is not None:
                            yield (i, j, k)
            return
        for _ in range(SAMPLES):
            t = rng.randrange(n)
            u = rng.choice(order.down_set(t))
            i = rng.choice(order.down_set(u))
            yield (i, s.index[e[u] ^ e[i]], s.index[e[t] ^ e[u]])

    def e2() -> Iterator[Witness]:
        for i, j, k in e2_triples():
            left = s.sum([e[i], e[j], e[k]])
            qr = s.oplus(e[j], e[k])
            right = None if qr is None else s.oplus(e[i], qr)
            if left != right:
                yield (i, j, k)

    def e3() -> Iterator[Witness]:
        for i, p in enumerate(e):
            c = s.complement(p)
            # 𝟙 \ p is the only mask q with p ⊕ q = 𝟙
            if s.oplus(p, c) != s.one:
                yield (i,)

    def e4() -> Iterator[Witness]:
        for i, p in enumerate(e):
            if p and s.oplus(p, s.one) is not None:
                yield (i,)

    return [
        _check("E1", n <= PAIRS_LIMIT, e1()),
        _check("E2", n <= TRIPLE_LIMIT, e2()),
        _check("E3", True, e3()),
        _check("E4", True, e4()),
    ]


@dataclass(frozen=True)
class CoherenceReport:
    """
    Outcome of the coherence-law search: a failing family is a set of pairwise
    ⊕-orthogonal elements whose ⊕-sum is undefined.
    """

    passed: bool
    witness: Witness
    bound: int
    families: int
    sweep_complete: bool

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {"axiom": "coherence", "pass": self.passed, "witness": list(self.witness),
                "bound": self.bound, "families": self.families,
                "sweep_complete": self.sweep_complete}


def _atom_graph(s: EffectStructure) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(s.atoms)))
    for i, j in combinations(range(len(s.atoms)), 2):
        if s.oplus_defined(s.atoms[i], s.atoms[j]):
            graph.add_edge(i, j)
    return graph


def check_coherence_law(s: EffectStructure,
                        *,
                        bound: int = COHERENCE_BOUND,
                        sweep_cap: int = SWEEP_CAP) -> CoherenceReport:
    """
    Searches for pairwise ⊕-orthogonal families whose ⊕-sum is undefined:
    families of atoms by increasing size (smallest failing size,
    lexicographically least), continuing past `bound` as a sweep over all
    larger atom families until `sweep_cap` families were visited, then element
    triples for small structures.

    Returns:
        (CoherenceReport) The outcome and the bound used.
    """
    graph = _atom_graph(s)
    atom_elements = [s.index[a] for a in s.atoms]
    families = 0
    failing: list[Witness] = []
    sweep_complete = True
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) < 3:
            continue
        if failing and len(clique) > len(failing[0]):
            break
        if len(clique) > bound:
            if families >= sweep_cap:
                sweep_complete = False
                break
        families += 1
        if not s.sum_defined(s.atoms[i] for i in clique):
            failing.append(tuple(sorted(atom_elements[i] for i in clique)))
    if not failing and len(s) <= TRIPLE_LIMIT:
        e = s.elements
        for i, j, k in combinations(range(1, len(e)), 3):
            if (s.oplus_defined(e[i], e[j]) and s.oplus_defined(e[i], e[k])
                    and s.oplus_defined(e[j], e[k])):
                families += 1
                if not s.sum_defined([e[i], e[j], e[k]]):
                    failing.append((i, j, k))
                    break
    witness = min(failing) if failing else ()
    report = CoherenceReport(not failing, witness, bound, families, sweep_complete)
    log.info('Coherence law: %s after %d families (bound %d, sweep complete: %s)',
             'pass' if report.passed else f'fail {witness}', families, bound, sweep_complete)
    return report


def _orthogonal(s: EffectStructure, p: int, q: int) -> bool:
    return s.order.leq(p, s.complement(q))


def _l4_failure(s: EffectStructure, i: int, j: int) -> Optional[Witness]:
    """
    For an orthogonal pair, returns `(i, j, u)` with `u` an upper bound of both
    that is not above their least candidate bound, or `(i, j)` if they have no
    upper bound at all; None if the supremum exists.
    """
    e = s.elements
    order = s.order
    bounds = order.up_bits(i) & order.up_bits(j)
    c = s.oplus(e[i], e[j])
    if c is not None:
        extra = bounds & ~order.up_bits(s.index[c])
        return None if not extra else (i, j, next(iter_bits(extra)))
    if order.join(i, j) is not None:
        return None
    return (i, j, next(iter_bits(bounds))) if bounds else (i, j)


def check_orthoposet(s: EffectStructure, *, seed: int = 0) -> list[AxiomReport]:
    """
    Checks L1 (bounds), L2 (order reversal), L3 (involution), L4 (orthogonal
    pairs have suprema) and L5 (orthomodular law).

    L4 has two clauses, both reported in `clauses`: suprema of orthogonal
    pairs (all element pairs of small structures; all atom pairs plus
    `L4_SAMPLES` seeded element pairs otherwise) and ⊕-sums of pairwise
    orthogonal atom families up to the coherence bound.
    """
    n = len(s)
    check_structure(s)
    e = s.elements
    order = s.order
    rng = random.Random(seed)
    small = n <= PAIRS_LIMIT
    zero, one = s.index.get(0), s.index.get(s.one)

    def l1() -> Iterator[Witness]:
        if zero is None or one is None:
            yield ()
            return
        for i, p in enumerate(e):
            if not (order.leq(0, p) and order.leq(p, s.one)):
                yield (i,)

    def comparable() -> Iterator[tuple[int, int]]:
        if small:
            for i in range(n):
                yield from ((i, j) for j in iter_bits(order.up_bits(i)))
            return
        for _ in range(SAMPLES):
            j = rng.randrange(n)
            yield (rng.choice(order.down_set(j)), j)

    def l2() -> Iterator[Witness]:
        for i, j in comparable():
            if not order.leq(s.complement(e[j]), s.complement(e[i])):
                yield (i, j)

    def l3() -> Iterator[Witness]:
        for i, p in enumerate(e):
            c = s.complement(p)
            if c not in s.index or s.complement(c) != p:
                yield (i,)

    def l4_pairs() -> Iterator[Witness]:
        candidates = range(n) if small else [s.index[a] for a in s.atoms]
        for i, j in combinations(candidates, 2):
            if _orthogonal(s, e[i], e[j]):
                failure = _l4_failure(s, i, j)
                if failure is not None:
                    yield failure
        if small:
            return
        for _ in range(L4_SAMPLES):
            i = rng.randrange(n)
            j = rng.choice(order.down_set(s.index[s.complement(e[i])]))
            if i != j and e[j]:
                failure = _l4_failure(s, min(i, j), max(i, j))
                if failure is not None:
                    yield failure

    def l4_families() -> Iterator[Witness]:
        atoms = [s.index[a] for a in s.atoms]
        graph = nx.Graph()
        graph.add_nodes_from(atoms)
        graph.add_edges_from((i, j) for i, j in combinations(atoms, 2)
                             if _orthogonal(s, e[i], e[j]))
        for visited, clique in enumerate(nx.enumerate_all_cliques(graph)):
            if len(clique) > COHERENCE_BOUND or visited >= SWEEP_CAP:
                break
            if len(clique) < 3:
                continue
            if not s.sum_defined(e[i] for i in clique) or (small and order.join(*clique) is None):
                yield tuple(sorted(clique))

    def l4() -> AxiomReport:
        pair = _first(l4_pairs())
        family = _first(l4_families())
        witness = pair if pair is not None else family
        if witness is not None:
            log.debug('L4 fails with witness %s', witness)
        clauses = {"orthogonal-pair-suprema": pair is None,
                   "orthogonal-atom-family-sums": family is None}
        return AxiomReport("L4", witness is None, witness or (), small, clauses)

    def l5() -> Iterator[Witness]:
        for i, j in comparable():
            m = order.meet(j, s.index[s.complement(e[i])])
            if m is None or order.join(i, m) != j:
                yield (i, j)

    return [
        _check("L1", True, l1()),
        _check("L2", small, l2()),
        _check("L3", True, l3()),
        l4(),
        _check("L5", small, l5()),
    ]


@dataclass(frozen=True)
class LatticeReport:
    """
    Whether all pairs have suprema and whether the lattice is distributive.
    """

    is_lattice: bool
    is_boolean: bool
    lattice_witness: Witness = ()
    boolean_witness: Witness = ()
    exhaustive: bool = True

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {"is_lattice": self.is_lattice, "is_boolean": self.is_boolean,
                "lattice_witness": list(self.lattice_witness),
                "boolean_witness": list(self.boolean_witness),
                "exhaustive": self.exhaustive}


def check_lattice_and_boolean(s: EffectStructure, *, seed: int = 0) -> LatticeReport:
    """
    Checks that every pair has a least upper bound and, for lattices, that the
    distributive law `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` holds on all triples.
    Large structures are checked on all atom pairs and seeded samples.
    """
    n = len(s)
    order = s.order
    rng = random.Random(seed)
    exhaustive = n <= PAIRS_LIMIT

    def pairs() -> Iterator[tuple[int, int]]:
        if exhaustive:
            yield from combinations(range(n), 2)
            return
        yield from combinations(sorted(s.index[a] for a in s.atoms), 2)
        for _ in range(SAMPLES):
            i, j = rng.randrange(n), rng.randrange(n)
            yield (min(i, j), max(i, j))

    lattice_witness = next(((i, j) for i, j in pairs() if order.join(i, j) is None), None)
    if lattice_witness is not None:
        log.debug('No supremum for elements %s', lattice_witness)
        return LatticeReport(False, False, lattice_witness, (), exhaustive)

    joins: dict[tuple[int, int], int] = {}
    meets: dict[tuple[int, int], int] = {}

    def join(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in joins:
            r = order.join(i, j)
            assert r is not None
            joins[key] = r
        return joins[key]

    def meet(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in meets:
            r = order.meet(i, j)
            if r is None:
                raise StructuralError(f"elements {key} have no infimum in a lattice")
            meets[key] = r
        return meets[key]

    triple_exhaustive = n <= DISTRIBUTIVITY_LIMIT
    if triple_exhaustive:
        triples: Iterator[tuple[int, int, int]] = (
            (a, b, c) for a in range(n) for b in range(n) for c in range(n))
    else:
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(SAMPLES))
    boolean_witness = next(((a, b, c) for a, b, c in triples
                            if meet(a, join(b, c)) != join(meet(a, b), meet(a, c))), None)
    return LatticeReport(True, boolean_witness is None, (), boolean_witness or (),
                         exhaustive and triple_exhaustive)


def check_compatible(s: EffectStructure, p: PropositionLike,
                     q: PropositionLike) -> Optional[CompatibilityWitness]:
    """
    Searches `p1, q1, r` with `p = p1 ⊕ r`, `q = q1 ⊕ r` and `p1 ⊕ q1 ⊕ r`
    defined. The candidate `r = p ∩ q` is tried first, then every common
    lower bound in canonical order.

    Raises:
        DomainError : If `p` or `q` is not an element.
    """
    pm, qm = s.mask_of(p), s.mask_of(q)
    order = s.order
    ip, iq = s.index[pm], s.index[qm]
    candidates = [pm & qm] if pm & qm in s.index else []
    candidates += [s.elements[r] for r in iter_bits(order.down_bits(ip) & order.down_bits(iq))]
    for r in candidates:
        if not (order.leq(r, pm) and order.leq(r, qm)):
            continue
        p1, q1 = pm ^ r, qm ^ r
        if s.sum([p1, q1, r]) is not None:
            space = s.space.space_id
            return CompatibilityWitness(Proposition(p1, space), Proposition(q1, space),
                                        Proposition(r, space))
    return None


def find_atoms(s: EffectStructure) -> list[Proposition]:
    """
    The minimal nonzero elements under the order derived from ⊕.
    """
    return [s.proposition(i) for i in s.order.minimal_nonzero()]


def check_atomistic(s: EffectStructure) -> AxiomReport:
    """
    Checks that every element is a ⊕-sum of atoms.
    """
    def failures() -> Iterator[Witness]:
        for i, p in enumerate(s.elements):
            cover = s.oracle.decompose(p)
            if cover is None or s.sum(s.atoms[a] for a in cover) != p:
                yield (i,)

    return _check("atomistic", True, failures())


@dataclass(frozen=True)
class KindFlags:
    """
    The classification of a structure.
    """

    is_effect_algebra: bool
    satisfies_coherence: bool
    is_omp: bool
    is_oml: bool
    is_boolean: bool
    reports: dict[str, Any] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {
            "is_effect_algebra": self.is_effect_algebra,
            "satisfies_coherence": self.satisfies_coherence,
            "is_omp": self.is_omp,
            "is_oml": self.is_oml,
            "is_boolean": self.is_boolean,
        }


def classify(s: EffectStructure, *, seed: int = 0) -> KindFlags:
    """
    Runs the checkers in dependency order and computes the kind flags.
    """
    reports: dict[str, Any] = {}
    ea = check_effect_algebra(s, seed=seed)
    reports["effect_algebra"] = [r.to_json() for r in ea]
    is_ea = all(r.passed for r in ea)
    coherence = check_coherence_law(s) if is_ea else None
    if coherence is not None:
        reports["coherence"] = coherence.to_json()
    omp = check_orthoposet(s, seed=seed)
    reports["orthoposet"] = [r.to_json() for r in omp]
    is_omp = all(r.passed for r in omp)
    lattice = check_lattice_and_boolean(s, seed=seed) if is_omp else None
    if lattice is not None:
        reports["lattice"] = lattice.to_json()
    return KindFlags(is_ea, coherence is not None and coherence.passed, is_omp,
                     lattice is not None and lattice.is_lattice,
                     lattice is not None and lattice.is_boolean, reports)
