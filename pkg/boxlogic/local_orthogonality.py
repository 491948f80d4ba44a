"""
Local orthogonality: events (joint inputs with joint outcomes), their
orthogonality graph and the inequalities given by its cliques.
"""

import logging as log
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from typing import Any, Iterable, Iterator, Optional, Sequence

import networkx as nx  # type: ignore

from .algebra import EffectStructure
from .box_model import BoxSpec, ProductAtom
from .errors import ConsistencyError, DomainError, ResourceError
from .states import PRState, StatePolytope, contexts, format_fraction, is_classical, outcome_tuples

# default cap on enumerated cliques
MAX_CLIQUES = 10 ** 5

# exact max-weight clique search is used up to this many supported events
MAX_SUPPORT = 512


@dataclass(frozen=True)
class Event:
    """
    A joint input `(a_1, …, a_k)` together with a joint outcome
    `(α_1, …, α_k)`; `index` is the position of its atom in the structure.
    """

    atom: ProductAtom
    index: int
    label: str


def orthogonal(e: Sequence[tuple[int, int]], f: Sequence[tuple[int, int]]) -> bool:
    """
    Two events are orthogonal iff some box has the same input and different
    outcomes in both.
    """
    return any(a == b and alpha != beta for (a, alpha), (b, beta) in zip(e, f))


class OrthogonalityGraph:
    """
    Events as vertices, orthogonal pairs as edges. Vertices of the underlying
    `networkx` graph are event positions in `events`.
    """

    def __init__(self, events: Sequence[Event]) -> None:
        self.events = tuple(events)
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(len(self.events)))

    def __len__(self) -> int:
        return len(self.events)

    def orthogonal(self, i: int, j: int) -> bool:
        # pylint: disable=missing-function-docstring
        return bool(self.graph.has_edge(i, j))

    def labels(self, vertices: Iterable[int]) -> list[str]:
        # pylint: disable=missing-function-docstring
        return [self.events[v].label for v in vertices]

    def find(self, label: str) -> int:
        """
        The vertex of the event with the given label.

        Raises:
            DomainError : If there is no such event.
        """
        for v, e in enumerate(self.events):
            if e.label == label:
                return v
        raise DomainError(f"unknown event {label}")


def build_orthogonality_graph(structure: EffectStructure) -> OrthogonalityGraph:
    """
    Builds the orthogonality graph over the product atoms of a generated
    structure. Orthogonality is evaluated by the input/outcome rule and by
    disjointness of the atom masks.

    Raises:
        DomainError : If the structure was not generated from boxes.
        ConsistencyError : If both characterizations disagree on some pair.
    """
    if not structure.box_atoms:
        raise DomainError(f"{structure!r} was not generated from boxes")
    atoms = sorted(structure.box_atoms, key=lambda a: structure.atom_index[a.mask])
    events = [Event(a, structure.atom_index[a.mask], a.label(structure.boxes)) for a in atoms]
    labels = [e.label for e in events]
    if len(set(labels)) != len(labels):
        raise ConsistencyError("event labels are ambiguous for these boxes")
    graph = OrthogonalityGraph(events)
    for i, j in combinations(range(len(events)), 2):
        by_rule = orthogonal(events[i].atom.per_box, events[j].atom.per_box)
        by_mask = not events[i].atom.mask & events[j].atom.mask
        if by_rule != by_mask:
            raise ConsistencyError(
                f"events {labels[i]} and {labels[j]}: input rule says {by_rule}, "
                f"masks say {by_mask}")
        if by_rule:
            graph.graph.add_edge(i, j)
    log.debug('Orthogonality graph: %d events, %d edges',
              len(graph), graph.graph.number_of_edges())
    return graph


def graph_from_boxes(boxes: Sequence[BoxSpec],
                     per_box_events: Optional[Iterable[tuple[tuple[int, int], ...]]] = None
                     ) -> OrthogonalityGraph:
    """
    Builds the orthogonality graph directly from the input/outcome rule,
    without a generated structure (masks are not needed). `per_box_events`
    restricts the vertices.
    """
    if per_box_events is None:
        per_box_events = [tuple(zip(inputs, outcomes)) for inputs in contexts(boxes)
                          for outcomes in outcome_tuples(boxes, inputs)]
    events = [Event(ProductAtom(pb, 0), v, ProductAtom(pb, 0).label(boxes))
              for v, pb in enumerate(per_box_events)]
    graph = OrthogonalityGraph(events)
    for i, j in combinations(range(len(events)), 2):
        if orthogonal(events[i].atom.per_box, events[j].atom.per_box):
            graph.graph.add_edge(i, j)
    return graph


@dataclass
class LOInequality:
    """
    `Σ_{e ∈ events} P(e) ≤ 1` for a set of mutually orthogonal events (graph
    vertices).
    """

    events: tuple[int, ...]
    lp_max: Optional[Fraction] = None
    sum_defined: Optional[bool] = None

    @property
    def violated(self) -> bool:
        # pylint: disable=missing-function-docstring
        return self.lp_max is not None and self.lp_max > 1

    def to_json(self, graph: OrthogonalityGraph) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {
            "events": [graph.events[v].index for v in self.events],
            "labels": graph.labels(self.events),
            "lp_max": None if self.lp_max is None else format_fraction(self.lp_max),
            "violated": self.violated,
            "sum_defined": self.sum_defined,
        }


def enumerate_lo_inequalities(graph: OrthogonalityGraph,
                              max_size: Optional[int] = None,
                              maximal_only: bool = True,
                              *,
                              max_cliques: int = MAX_CLIQUES) -> Iterator[LOInequality]:
    """
    Enumerates the cliques with at least two events: the maximal cliques
    (pivoting Bron–Kerbosch) or all cliques up to `max_size`. The output is
    ordered by size, then lexicographically by vertex tuple.

    Raises:
        DomainError : If `max_size < 2`, or it is missing in all-cliques mode.
        ResourceError : If more than `max_cliques` cliques are found.
    """
    if max_size is not None and max_size < 2:
        raise DomainError("max_size must be at least 2")
    if not maximal_only and max_size is None:
        raise DomainError("enumerating all cliques requires max_size")
    source = (nx.find_cliques(graph.graph) if maximal_only
              else nx.enumerate_all_cliques(graph.graph))
    found = []
    for clique in source:
        if len(clique) < 2:
            continue
        if max_size is not None and len(clique) > max_size:
            if maximal_only:
                continue
            break
        found.append(tuple(sorted(clique)))
        if len(found) > max_cliques:
            raise ResourceError("cliques", max_cliques, len(found))
    found.sort(key=lambda c: (len(c), c))
    log.debug('Enumerated %d cliques (maximal only: %s)', len(found), maximal_only)
    for clique in found:
        yield LOInequality(clique)


@dataclass
class LOReport:
    """
    LP-certified LO inequalities and the largest value found.
    """

    inequalities: list[LOInequality]
    max_value: Fraction
    violations: int

    def to_json(self, graph: OrthogonalityGraph) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {
            "inequalities": [i.to_json(graph) for i in self.inequalities],
            "max_lp": format_fraction(self.max_value),
            "violations": self.violations,
        }


def certify_inequality(structure: EffectStructure,
                       polytope: StatePolytope,
                       graph: OrthogonalityGraph,
                       inequality: LOInequality,
                       *,
                       certify_defined: bool = False) -> LOInequality:
    """
    Computes the maximum of the event sum over the state polytope.

    The LP is always solved unless `certify_defined` is set. If the ⊕-sum of
    the events is defined, the additivity row `Σ events + Σ cover(1 ⊖ sum) = 1`
    is added, which bounds the maximum by one on any polytope that contains
    the point masses. With `certify_defined` that value is used without a
    solve.
    """
    atoms = [graph.events[v].index for v in inequality.events]
    masks = [structure.atoms[i] for i in atoms]
    total = structure.sum(masks)
    inequality.sum_defined = total is not None
    if total is not None and certify_defined:
        inequality.lp_max = Fraction(1)
        return inequality
    objective = {i: Fraction(1) for i in atoms}
    extra = []
    if total is not None:
        row = dict.fromkeys(atoms, 1)
        cover = structure.oracle.decompose(structure.one ^ total)
        assert cover is not None
        for j in cover:
            row[j] = row.get(j, 0) + 1
        extra.append((row, 1))
    inequality.lp_max = polytope.solve(objective, extra).value
    return inequality


def check_lo_violations(structure: EffectStructure,
                        polytope: StatePolytope,
                        inequalities: Iterable[LOInequality],
                        *,
                        graph: Optional[OrthogonalityGraph] = None,
                        certify_defined: bool = False,
                        workers: int = 1) -> LOReport:
    """
    Certifies every inequality with its exact maximum over the state polytope.

    Args:
        structure (EffectStructure) : The structure the events live in.
        polytope (StatePolytope) : Its state polytope.
        inequalities (Iterable[LOInequality]) : The inequalities to check.
        graph (OrthogonalityGraph, optional) : The graph the inequalities were
                                               enumerated from.
        certify_defined (bool, default: False) : Skip the LP for defined ⊕-sums.
        workers (int) : Number of threads solving LPs.

    Returns:
        (LOReport) The certified inequalities in input order.
    """
    graph = graph or build_orthogonality_graph(structure)
    items = list(inequalities)
    polytope.tableau()

    def certify(inequality: LOInequality) -> LOInequality:
        return certify_inequality(structure, polytope, graph, inequality,
                                  certify_defined=certify_defined)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(certify, items))
    else:
        done = [certify(i) for i in items]
    values = [i.lp_max for i in done if i.lp_max is not None]
    report = LOReport(done, max(values, default=Fraction(0)), sum(1 for i in done if i.violated))
    log.info('Checked %d LO inequalities: %d violated, maximum %s',
             len(done), report.violations, report.max_value)
    return report


@dataclass
class CopiesReport:
    """
    Result of testing `P^{⊗n}` against the LO inequalities of the `nk`-box
    model.
    """

    copies: int
    boxes: int
    classical: bool
    method: str
    support: int
    max_value: Fraction
    violated: bool
    witness: list[str]

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {
            "copies": self.copies,
            "boxes": self.boxes,
            "classical": self.classical,
            "method": self.method,
            "support": self.support,
            "max_value": format_fraction(self.max_value),
            "violated": self.violated,
            "witness": self.witness,
        }


def _max_weight_clique(graph: OrthogonalityGraph,
                       weights: Sequence[Fraction]) -> tuple[Fraction, list[int]]:
    scale = lcm(*(w.denominator for w in weights)) if weights else 1
    for v, w in enumerate(weights):
        graph.graph.nodes[v]["weight"] = int(w * scale)
    clique, total = nx.max_weight_clique(graph.graph, weight="weight")
    return Fraction(total, scale), sorted(clique)


def _joint_events(single: Sequence[tuple[tuple[tuple[int, int], ...], Fraction]],
                  n: int) -> list[tuple[tuple[tuple[int, int], ...], Fraction]]:
    joint = []
    for combo in product(single, repeat=n):
        weight = Fraction(1)
        for _, p in combo:
            weight *= p
        joint.append((sum((pb for pb, _ in combo), ()), weight))
    return joint


def check_lo_copies(state: PRState,
                    n: int,
                    *,
                    max_support: int = MAX_SUPPORT) -> CopiesReport:
    """
    Tests the product of `n` copies of `state` against all LO inequalities of
    the `nk`-box model, using the orthogonality rule on joint events only.

    The maximum event sum over cliques is computed exactly with a maximum
    weight clique search over the joint events with positive probability as
    long as there are at most `max_support` of them. Above that, products of
    optimal single-copy cliques (which are cliques again) give a lower bound;
    it settles the test if it exceeds one or if the state is classical
    (classical states never violate LO inequalities).

    Raises:
        DomainError : If `n < 1`.
        ResourceError : If the support exceeds `max_support` and the lower
                        bound does not decide the test.
    """
    if n < 1:
        raise DomainError("the number of copies must be positive")
    state.validate()
    classical = is_classical(state)
    boxes = state.boxes * n
    single = [(tuple(zip(i, o)), p) for (i, o), p in sorted(state.probs.items()) if p]
    support = len(single) ** n
    if support <= max_support:
        joint = _joint_events(single, n)
        graph = graph_from_boxes(boxes, [pb for pb, _ in joint])
        value, clique = _max_weight_clique(graph, [w for _, w in joint])
        method = "max-weight-clique"
    else:
        graph = graph_from_boxes(state.boxes, [pb for pb, _ in single])
        base, clique = _max_weight_clique(graph, [w for _, w in single])
        value = base ** n
        method = "product-clique-bound"
        if value <= 1 and not classical:
            raise ResourceError("support", max_support, support)
    violated = value > 1
    if classical and violated:
        raise ConsistencyError("a classical state violates an LO inequality")
    report = CopiesReport(n, len(boxes), classical, method, support, value, violated,
                          graph.labels(clique))
    log.info('LO test of %d copies on %d boxes (%s): maximum %s, violated: %s',
             n, len(boxes), method, value, violated)
    return report
