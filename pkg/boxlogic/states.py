"""
States of box models: PR-states (conditional probability tables), states on
generated structures (values on atoms extended additively), the state
polytope and the checks built on top of it.
"""

import logging as log
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Iterator, Mapping, Optional, Sequence

from .algebra import PAIRS_LIMIT, EffectStructure
from .box_model import BoxSpec, PhaseSpace
from .errors import (ConsistencyError, DomainError, LPError, NoSignalingViolation,
                     NormalizationError, StructuralError)
from .lp import LinearProgram, LPResult, SimplexTableau, feasible_tableau, maximize, rank

Context = tuple[tuple[int, ...], tuple[int, ...]]

# number of random pairs inspected when exhaustive pair checks are too large
ORDER_SAMPLES = 20000


def contexts(boxes: Sequence[BoxSpec]) -> Iterator[tuple[int, ...]]:
    """
    All joint inputs `(a_1, …, a_k)` in canonical order.
    """
    return product(*(range(b.num_inputs) for b in boxes))


def outcome_tuples(boxes: Sequence[BoxSpec], inputs: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """
    All joint outcomes for the given joint input.
    """
    return product(*(range(b.outcome_counts[a]) for b, a in zip(boxes, inputs)))


def events(boxes: Sequence[BoxSpec]) -> list[Context]:
    """
    All (inputs, outcomes) pairs, grouped by context.
    """
    return [(inputs, outcomes) for inputs in contexts(boxes)
            for outcomes in outcome_tuples(boxes, inputs)]


def _per_box(inputs: Sequence[int], outcomes: Sequence[int]) -> tuple[tuple[int, int], ...]:
    return tuple(zip(inputs, outcomes))


@dataclass
class PRState:
    """
    A conditional probability table `P(α_1…α_k | a_1…a_k)` on k boxes.
    """

    boxes: tuple[BoxSpec, ...]
    probs: dict[Context, Fraction] = field(default_factory=dict)

    def value(self, inputs: Sequence[int], outcomes: Sequence[int]) -> Fraction:
        # pylint: disable=missing-function-docstring
        return self.probs.get((tuple(inputs), tuple(outcomes)), Fraction(0))

    def validate(self) -> None:
        """
        Checks ranges, normalization and no-signaling.

        Raises:
            NormalizationError : If a probability is outside of [0, 1] or a
                                 context does not sum to one.
            NoSignalingViolation : If a marginal depends on a remote input.
        """
        for key, p in self.probs.items():
            if not 0 <= p <= 1:
                raise NormalizationError(f"probability {p} of {key} is outside of [0, 1]")
        for inputs in contexts(self.boxes):
            total = sum((self.value(inputs, o) for o in outcome_tuples(self.boxes, inputs)),
                        Fraction(0))
            if total != 1:
                raise NormalizationError(f"context {inputs} sums to {total}")
        check_no_signaling(self)

    def tensor(self, other: "PRState") -> "PRState":
        """
        The product state on the boxes of `self` followed by those of `other`.
        """
        probs = {}
        for (i1, o1), p in self.probs.items():
            if not p:
                continue
            for (i2, o2), q in other.probs.items():
                if q:
                    probs[(i1 + i2, o1 + o2)] = p * q
        return PRState(self.boxes + other.boxes, probs)

    def to_json(self) -> dict[str, Any]:
        """
        Serializes to `{"contexts": [{"inputs": [...], "probs": {"0,1": "1/2"}}]}`
        with input names and outcome labels.
        """
        document = []
        for inputs in contexts(self.boxes):
            probs = {}
            for outcomes in outcome_tuples(self.boxes, inputs):
                labels = [b.inputs[a].outcomes[o] for b, a, o in zip(self.boxes, inputs, outcomes)]
                probs[",".join(labels)] = format_fraction(self.value(inputs, outcomes))
            document.append({"inputs": [b.inputs[a].name for b, a in zip(self.boxes, inputs)],
                             "probs": probs})
        return {"contexts": document}

    @staticmethod
    def from_json(document: Any, boxes: Sequence[BoxSpec]) -> "PRState":
        """
        Parses the format written by `to_json`. Missing outcomes are zero.
        """
        boxes = tuple(boxes)
        state = PRState(boxes)
        try:
            for entry in document["contexts"]:
                names = entry["inputs"]
                if len(names) != len(boxes):
                    raise StructuralError(f"context {names} does not have {len(boxes)} inputs")
                inputs = tuple(_input_index(b, n) for b, n in zip(boxes, names))
                for key, text in entry["probs"].items():
                    labels = key.split(",")
                    if len(labels) != len(boxes):
                        raise StructuralError(f"outcome tuple {key} does not have "
                                              f"{len(boxes)} entries")
                    outcomes = tuple(b.inputs[a].outcomes.index(label)
                                     for b, a, label in zip(boxes, inputs, labels))
                    state.probs[(inputs, outcomes)] = Fraction(text)
        except (KeyError, TypeError, ValueError) as e:
            raise StructuralError(f"malformed PR-state document: {e}") from e
        return state


def _input_index(box: BoxSpec, name: str) -> int:
    for a, i in enumerate(box.inputs):
        if i.name == name:
            return a
    raise StructuralError(f"unknown input {name}")


def format_fraction(value: Fraction) -> str:
    """
    Formats a rational as `num/den` (also for integers, e.g. `1/1`).
    """
    return f"{value.numerator}/{value.denominator}"


def check_no_signaling(state: PRState) -> None:
    """
    Checks that for every box `i`, every pair of its inputs and every fixing
    of the other boxes' inputs and outcomes, the marginal obtained by summing
    over the outcomes of box `i` does not depend on the input of box `i`.

    Raises:
        NoSignalingViolation : For the first violated equality.
    """
    boxes = state.boxes
    for i, box in enumerate(boxes):
        others = boxes[:i] + boxes[i + 1:]
        for a, b in combinations(range(box.num_inputs), 2):
            for rest_inputs in contexts(others):
                for rest_outcomes in outcome_tuples(others, rest_inputs):
                    marginals = []
                    for x in (a, b):
                        inputs = rest_inputs[:i] + (x,) + rest_inputs[i:]
                        marginals.append(sum(
                            (state.value(inputs, rest_outcomes[:i] + (alpha,) + rest_outcomes[i:])
                             for alpha in range(box.outcome_counts[x])), Fraction(0)))
                    if marginals[0] != marginals[1]:
                        raise NoSignalingViolation(
                            i, (a, b), list(zip(rest_inputs, rest_outcomes)),
                            (marginals[0], marginals[1]))


def uniform_state(boxes: Sequence[BoxSpec]) -> PRState:
    """
    The state that makes all joint outcomes of a context equally likely.
    """
    boxes = tuple(boxes)
    state = PRState(boxes)
    for inputs in contexts(boxes):
        outcomes = list(outcome_tuples(boxes, inputs))
        for o in outcomes:
            state.probs[(inputs, o)] = Fraction(1, len(outcomes))
    return state


def deterministic_state(boxes: Sequence[BoxSpec], cells: Sequence[Sequence[int]]) -> PRState:
    """
    The state of fixed per-box assignments: `cells[i][a]` is the outcome of
    box `i` on input `a`.
    """
    boxes = tuple(boxes)
    state = PRState(boxes)
    for inputs in contexts(boxes):
        outcomes = tuple(cells[i][a] for i, a in enumerate(inputs))
        state.probs[(inputs, outcomes)] = Fraction(1)
    return state


def random_no_signaling_state(boxes: Sequence[BoxSpec],
                              rng: random.Random,
                              *,
                              terms: int = 3,
                              extremal: Optional[PRState] = None) -> PRState:
    """
    A random rational no-signaling state: a mixture of `terms` deterministic
    states with random integer weights, optionally mixed with `extremal`.
    """
    boxes = tuple(boxes)
    spaces = [PhaseSpace(b).cells() for b in boxes]
    weights = [rng.randint(1, 9) for _ in range(terms)]
    extra = rng.randint(0, 9) if extremal is not None else 0
    total = sum(weights) + extra
    mixture = PRState(boxes)
    for w in weights:
        cells = [rng.choice(s) for s in spaces]
        for key, p in deterministic_state(boxes, cells).probs.items():
            mixture.probs[key] = mixture.probs.get(key, Fraction(0)) + Fraction(w, total) * p
    if extremal is not None and extra:
        for key, p in extremal.probs.items():
            mixture.probs[key] = mixture.probs.get(key, Fraction(0)) + Fraction(extra, total) * p
    return mixture


@dataclass
class LogicState:
    """
    A state on a generated structure, given by its values on the atoms
    (aligned with `structure.atoms`). The value of an element is the sum over
    any disjoint atom cover.
    """

    structure: EffectStructure
    atom_values: tuple[Fraction, ...]
    point: Optional[int] = None

    def value(self, mask: int) -> Fraction:
        """
        The value of an element mask.

        Raises:
            DomainError : If the mask has no atom cover.
        """
        if self.point is not None:
            return Fraction(mask >> self.point & 1)
        cover = self.structure.oracle.decompose(mask)
        if cover is None:
            raise DomainError(f"mask {mask:x} is not a disjoint union of atoms")
        return sum((self.atom_values[i] for i in cover), Fraction(0))

    def check_well_defined(self) -> None:
        """
        Verifies that all atom covers of every element give the same value and
        that the unit has value one. Every cover of an element `p` starts with
        some atom `a ≤ p`, so comparing `ρ(p)` with `ρ(a) + ρ(p \\ a)` for all
        such pairs covers all certificates.

        Raises:
            ConsistencyError : If two covers disagree.
            NormalizationError : If the unit does not have value one.
        """
        s = self.structure
        if self.value(s.one) != 1:
            raise NormalizationError(f"state has value {self.value(s.one)} on the unit")
        values = {m: self.value(m) for m in s.elements}
        for p in s.elements:
            for i, a in enumerate(s.atoms):
                rest = p ^ a
                if a & p != a or rest not in values:
                    continue
                if values[p] != self.atom_values[i] + values[rest]:
                    raise ConsistencyError(
                        f"element {p:x} has value {values[p]} but the cover through atom {a:x} "
                        f"gives {self.atom_values[i] + values[rest]}")


def _box_atom_vars(structure: EffectStructure) -> dict[tuple[tuple[int, int], ...], int]:
    if not structure.box_atoms or not structure.boxes:
        raise DomainError(f"{structure!r} was not generated from boxes")
    return structure.box_atom_lookup()


def pr_to_logic_state(state: PRState,
                      structure: EffectStructure,
                      *,
                      verify: bool = True) -> LogicState:
    """
    The state on a generated effect algebra whose atom values are the entries
    of `state`.

    Args:
        state (PRState) : A PR-state on the boxes of `structure`.
        structure (EffectStructure) : A 1-box logic or generated effect algebra.
        verify (bool) : Whether to verify well-definedness on all elements.

    Raises:
        NoSignalingViolation : If the PR-state is signaling.
        NormalizationError : If the PR-state is not normalized.
        DomainError : If the structure has atoms that are not product atoms.
    """
    if tuple(state.boxes) != structure.boxes:
        raise DomainError("state and structure are defined on different boxes")
    lookup = _box_atom_vars(structure)
    if len(lookup) != len(structure.atoms):
        raise DomainError(f"{structure!r} has atoms that are not product atoms")
    state.validate()
    values = [Fraction(0)] * len(structure.atoms)
    for per_box, i in lookup.items():
        values[i] = state.value(*zip(*per_box))
    logic_state = LogicState(structure, tuple(values))
    if verify:
        logic_state.check_well_defined()
    return logic_state


def logic_state_to_pr(state: LogicState) -> PRState:
    """
    Reads the PR-state off the values of the product atoms.
    """
    structure = state.structure
    lookup = _box_atom_vars(structure)
    result = PRState(structure.boxes)
    for per_box, i in lookup.items():
        inputs, outcomes = zip(*per_box)
        result.probs[(tuple(inputs), tuple(outcomes))] = (
            state.atom_values[i] if state.point is None
            else Fraction(structure.atoms[i] >> state.point & 1))
    return result


@dataclass
class StatePolytope:
    """
    The states of a generated structure as `{x ≥ 0 : A x = b}` with one
    variable per atom.
    """

    structure: EffectStructure
    program: LinearProgram
    normalization_rows: int
    no_signaling_rows: int
    certificate_rows: int
    _tableau: Optional[SimplexTableau] = None

    @property
    def num_vars(self) -> int:
        # pylint: disable=missing-function-docstring
        return self.program.num_vars

    @property
    def rank(self) -> int:
        # pylint: disable=missing-function-docstring
        return rank(self.program)

    def tableau(self) -> SimplexTableau:
        """
        A feasible tableau shared by all solves over this polytope.
        """
        if self._tableau is None:
            self._tableau = feasible_tableau(self.program)
        return self._tableau

    def solve(self, objective: Mapping[int, Fraction | int],
              extra_rows: Sequence[tuple[Mapping[int, Fraction | int], Fraction | int]] = ()
              ) -> LPResult:
        """
        Maximizes a linear objective over atom values, optionally subject to
        additional equalities.
        """
        if not extra_rows:
            return maximize(self.program, objective, self.tableau())
        program = self.program.copy()
        for row, value in extra_rows:
            program.add_equality(row, value)
        return maximize(program, objective)


def _no_signaling_rows(boxes: Sequence[BoxSpec],
                       lookup: Mapping[tuple[tuple[int, int], ...], int]) -> list[dict[int, int]]:
    rows: dict[tuple[tuple[int, int], ...], dict[int, int]] = {}
    for i, box in enumerate(boxes):
        others = tuple(boxes[:i]) + tuple(boxes[i + 1:])
        for a, b in combinations(range(box.num_inputs), 2):
            for rest_inputs in contexts(others):
                for rest_outcomes in outcome_tuples(others, rest_inputs):
                    row: dict[int, int] = {}
                    for x, sign in ((a, 1), (b, -1)):
                        inputs = rest_inputs[:i] + (x,) + rest_inputs[i:]
                        for alpha in range(box.outcome_counts[x]):
                            outcomes = rest_outcomes[:i] + (alpha,) + rest_outcomes[i:]
                            var = lookup[_per_box(inputs, outcomes)]
                            row[var] = row.get(var, 0) + sign
                    row = {v: c for v, c in row.items() if c}
                    if not row:
                        continue
                    key = tuple(sorted(row.items()))
                    if key[0][1] < 0:
                        row = {v: -c for v, c in row.items()}
                        key = tuple(sorted(row.items()))
                    rows.setdefault(key, row)
    return list(rows.values())


def build_state_polytope(structure: EffectStructure) -> StatePolytope:
    """
    Builds the state polytope: one normalization per joint input, the
    no-signaling equalities for every box, input pair and fixing of the other
    boxes (deduplicated), and for orthoposets one row `x_n + Σ cover = 1` per
    recorded certificate of a new atom `n`.
    """
    lookup = _box_atom_vars(structure)
    boxes = structure.boxes
    program = LinearProgram(len(structure.atoms))
    normalizations = 0
    for inputs in contexts(boxes):
        program.add_equality({lookup[_per_box(inputs, o)]: 1
                              for o in outcome_tuples(boxes, inputs)}, 1)
        normalizations += 1
    signaling = _no_signaling_rows(boxes, lookup) if len(boxes) > 1 else []
    for row in signaling:
        program.add_equality(row, 0)
    certificates = 0
    for atom, covers in sorted(structure.certificates.items()):
        n = structure.atom_index[atom]
        for cover in covers:
            row = {n: 1}
            for j in cover:
                row[j] = row.get(j, 0) + 1
            program.add_equality(row, 1)
            certificates += 1
    log.debug('State polytope: %d variables, %d normalizations, %d no-signaling rows, '
              '%d certificate rows', program.num_vars, normalizations, len(signaling), certificates)
    return StatePolytope(structure, program, normalizations, len(signaling), certificates)


def objective_of(structure: EffectStructure, masks: Sequence[int]) -> dict[int, Fraction]:
    """
    The objective `Σ ρ(p)` over the given element masks in atom coordinates.

    Raises:
        DomainError : If a mask has no atom cover.
    """
    objective: dict[int, Fraction] = {}
    for m in masks:
        cover = structure.oracle.decompose(m)
        if cover is None:
            raise DomainError(f"mask {m:x} is not a disjoint union of atoms")
        for i in cover:
            objective[i] = objective.get(i, Fraction(0)) + 1
    return objective


def maximize_linear(polytope: StatePolytope,
                    objective: Mapping[int, Fraction | int]) -> tuple[Fraction, LogicState]:
    """
    Maximizes an objective given by atom coefficients.

    Returns:
        (tuple[Fraction, LogicState]) The exact optimum and a maximizing vertex.

    Raises:
        LPError : If the program is unbounded (impossible for a state polytope).
    """
    result = polytope.solve(objective)
    return result.value, LogicState(polytope.structure, result.solution)


def classical_states(structure: EffectStructure) -> list[LogicState]:
    """
    The point-mass states `ρ_γ(p) = [γ ∈ p]`, one per cell.
    """
    states = []
    for cell in range(structure.space.size):
        values = tuple(Fraction(a >> cell & 1) for a in structure.atoms)
        states.append(LogicState(structure, values, point=cell))
    return states


ORDERS = ('inclusion', 'sum')


@dataclass(frozen=True)
class OrderDeterminationReport:
    """
    Whether the states determine the order (`∀ρ: ρ(p) ≤ ρ(q)` iff `p ≤ q`) and
    whether they distinguish elements. Witnesses are element index pairs.

    `sum_order_gap` is a pair `p ⊆ q` whose difference is not an element (so
    `p ≤ q` holds for inclusion but not for the ⊕-order), None if the two
    orders agree. It is only computed when all point-mass states are given.
    """

    order_determining: bool
    order_witness: Optional[tuple[int, int]]
    state_distinguishing: bool
    distinguishing_witness: Optional[tuple[int, int]]
    exhaustive: bool
    order: str = 'inclusion'
    sum_order_gap: Optional[tuple[int, int]] = None

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {
            "order": self.order,
            "order_determining": self.order_determining,
            "order_witness": list(self.order_witness or ()),
            "state_distinguishing": self.state_distinguishing,
            "distinguishing_witness": list(self.distinguishing_witness or ()),
            "exhaustive": self.exhaustive,
            "sum_order_gap": list(self.sum_order_gap or ()),
        }


def _covers_all_points(structure: EffectStructure, states: Sequence[LogicState]) -> bool:
    points = {s.point for s in states}
    return None not in points and points == set(range(structure.space.size))


def _included(p: int, q: int) -> bool:
    return p & q == p


def sum_order_gap(structure: EffectStructure) -> Optional[tuple[int, int]]:
    """
    Finds the first pair `(i, j)` with `p_i ⊂ p_j` and `p_j \\ p_i` not an
    element, by subset scans. None if inclusion and the ⊕-order coincide.
    """
    elements = structure.elements
    for i, p in enumerate(elements):
        for j in structure.table.supersets_of(p):
            if j != i and (elements[j] ^ p) not in structure.index:
                return i, j
    return None


def check_order_determining(structure: EffectStructure,
                            states: Sequence[LogicState],
                            *,
                            order: str = 'inclusion',
                            seed: int = 0) -> OrderDeterminationReport:
    """
    Checks whether the given states determine the order of the structure.

    The structures are concrete, so the default order is mask inclusion;
    `order='sum'` uses `p ≤ q` iff `q = p ⊕ r` instead. With all point-mass
    states the state order is mask inclusion, so the check reduces to the
    subset scan of `sum_order_gap`. Other state sets are compared pair by pair
    (exhaustively up to a size limit, by seeded sampling above it).

    Raises:
        DomainError : If no states are given or the order is unknown.
    """
    if not states:
        raise DomainError("at least one state is required")
    if order not in ORDERS:
        raise DomainError(f"unknown order '{order}', expected one of {', '.join(ORDERS)}")
    n = len(structure)
    elements = structure.elements
    if _covers_all_points(structure, states):
        gap = sum_order_gap(structure)
        log.debug('Inclusion and sum order %s', 'differ' if gap else 'agree')
        if order == 'sum' and gap is not None:
            return OrderDeterminationReport(False, gap, True, None, True, order, gap)
        return OrderDeterminationReport(True, None, True, None, True, order, gap)

    leq = structure.order.leq if order == 'sum' else _included

    signatures = [tuple(s.value(m) for s in states) for m in elements]
    seen: dict[tuple[Fraction, ...], int] = {}
    distinguishing: Optional[tuple[int, int]] = None
    for i, sig in enumerate(signatures):
        if sig in seen:
            distinguishing = (seen[sig], i)
            break
        seen[sig] = i

    def fails(i: int, j: int) -> bool:
        below = all(x <= y for x, y in zip(signatures[i], signatures[j]))
        return below != leq(elements[i], elements[j])

    exhaustive = n <= PAIRS_LIMIT
    witness: Optional[tuple[int, int]] = None
    if exhaustive:
        witness = next(((i, j) for i in range(n) for j in range(n) if fails(i, j)), None)
    else:
        rng = random.Random(seed)
        failing = [(i, j) for i, j in ((rng.randrange(n), rng.randrange(n))
                                       for _ in range(ORDER_SAMPLES)) if fails(i, j)]
        witness = min(failing) if failing else None
    return OrderDeterminationReport(witness is None, witness, distinguishing is None,
                                    distinguishing, exhaustive, order)


def is_classical(state: PRState) -> bool:
    """
    Decides whether the PR-state is a mixture of deterministic assignments
    (a probability measure on the product phase space), by exact LP
    feasibility.
    """
    boxes = state.boxes
    spaces = [PhaseSpace(b).cells() for b in boxes]
    points = list(product(*spaces))
    program = LinearProgram(len(points))
    for inputs in contexts(boxes):
        for outcomes in outcome_tuples(boxes, inputs):
            row = {k: 1 for k, point in enumerate(points)
                   if all(g[a] == o for g, a, o in zip(point, inputs, outcomes))}
            program.add_equality(row, state.value(inputs, outcomes))
    try:
        feasible_tableau(program)
    except LPError:
        log.debug('PR-state on %d boxes is not classical', len(boxes))
        return False
    return True


def product_state_extends(structure: EffectStructure, local_states: Sequence[PRState]) -> bool:
    """
    Whether the product of the given 1-box states extends to a state on the
    structure (e.g. an orthoposet with extra atoms): the box atoms are fixed to
    the product values and feasibility of the state polytope is tested.
    """
    if len(local_states) != len(structure.boxes):
        raise DomainError(f"expected {len(structure.boxes)} local states")
    joint = local_states[0]
    for s in local_states[1:]:
        joint = joint.tensor(s)
    polytope = build_state_polytope(structure)
    program = polytope.program.copy()
    for per_box, var in _box_atom_vars(structure).items():
        inputs, outcomes = zip(*per_box)
        program.add_equality({var: 1}, joint.value(inputs, outcomes))
    try:
        feasible_tableau(program)
    except LPError:
        return False
    return True


@dataclass(frozen=True)
class DefinednessReport:
    """
    Agreement of the decomposability rule for ⊕ with the operational rule
    (`ρ(p) + ρ(q) ≤ 1` for all states) on disjoint element pairs.
    """

    pairs: int
    agree: int
    disagree: int
    first_disagreement: Optional[tuple[int, int]]

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {"pairs": self.pairs, "agree": self.agree, "disagree": self.disagree,
                "first_disagreement": list(self.first_disagreement or ())}


def compare_definedness(structure: EffectStructure,
                        polytope: StatePolytope,
                        *,
                        max_pairs: int = 500) -> DefinednessReport:
    """
    Compares both definedness rules on the first `max_pairs` disjoint pairs of
    nonzero elements (in canonical order). Pairs with a defined sum agree
    without a solve, since states are additive.
    """
    elements = structure.elements
    pairs = agree = 0
    first: Optional[tuple[int, int]] = None
    for i, j in combinations(range(len(elements)), 2):
        p, q = elements[i], elements[j]
        if not p or not q or p & q:
            continue
        if pairs >= max_pairs:
            break
        pairs += 1
        defined = structure.oplus_defined(p, q)
        if defined:
            operational = True
        else:
            operational = polytope.solve(objective_of(structure, [p, q])).value <= 1
        if defined == operational:
            agree += 1
        elif first is None:
            first = (i, j)
    log.info('Definedness rules agree on %d of %d pairs', agree, pairs)
    return DefinednessReport(pairs, agree, pairs - agree, first)


def atom_support(state: LogicState) -> list[int]:
    """
    The indices of atoms with nonzero value.
    """
    return [i for i, v in enumerate(state.atom_values) if v]

