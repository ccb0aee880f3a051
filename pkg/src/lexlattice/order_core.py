"""Finite posets, valuations, and the photon-polarisation reference model.

This module provides the generic order algebra the rest of the package is
validated against: finite partially ordered sets with join/meet, two
definitions of a complement (order-based and valuation-based), monotone
valuation checks, and the weighted-orthogonal-set probability measure over
projectors.  The six-element polarisation lattice serves as the worked
reference example; its checks back the ``qcheck`` CLI subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_DIMENSION = 8


class FinitePoset:
    """A finite partially ordered set with optional designated bounds.

    The relation must be reflexive, antisymmetric, and transitive; all three
    are checked at construction time.  Use `from_covers` to build the
    reflexive-transitive closure from cover pairs.
    """

    def __init__(
        self,
        elements: Iterable,
        relation: Iterable[tuple],
        supremum=None,
        infimum=None,
    ):
        self.elements = tuple(elements)
        element_set = set(self.elements)
        if len(element_set) != len(self.elements):
            raise ValueError("duplicate elements")
        pairs = frozenset(tuple(p) for p in relation)
        for x, y in pairs:
            if x not in element_set or y not in element_set:
                raise ValueError(f"relation pair ({x!r}, {y!r}) outside the element set")
        for x in self.elements:
            if (x, x) not in pairs:
                raise ValueError(f"relation is not reflexive at {x!r}")
        for x, y in pairs:
            if x != y and (y, x) in pairs:
                raise ValueError(f"relation is not antisymmetric on ({x!r}, {y!r})")
        for x, y in pairs:
            for z in self.elements:
                if (y, z) in pairs and (x, z) not in pairs:
                    raise ValueError(f"relation is not transitive through ({x!r}, {y!r}, {z!r})")
        self._pairs = pairs
        if supremum is not None:
            if any((x, supremum) not in pairs for x in self.elements):
                raise ValueError("designated supremum does not bound all elements")
        if infimum is not None:
            if any((infimum, x) not in pairs for x in self.elements):
                raise ValueError("designated infimum is not below all elements")
        self.supremum = supremum
        self.infimum = infimum

    @classmethod
    def from_covers(
        cls,
        elements: Iterable,
        covers: Iterable[tuple],
        supremum=None,
        infimum=None,
    ) -> "FinitePoset":
        """Build from cover pairs (x, y) meaning x is below y."""
        elements = tuple(elements)
        reach = {x: {x} for x in elements}
        for x, y in covers:
            if x not in reach or y not in reach:
                raise ValueError(f"cover pair ({x!r}, {y!r}) outside the element set")
            reach[x].add(y)
        changed = True
        while changed:
            changed = False
            for x in elements:
                extra = set()
                for y in reach[x]:
                    extra |= reach[y]
                if not extra <= reach[x]:
                    reach[x] |= extra
                    changed = True
        pairs = [(x, y) for x in elements for y in reach[x]]
        return cls(elements, pairs, supremum=supremum, infimum=infimum)

    def leq(self, x, y) -> bool:
        return (x, y) in self._pairs

    def _check_member(self, x) -> None:
        if x not in self.elements:
            raise ValueError(f"{x!r} is not an element of the poset")

    def upper_bounds(self, x, y) -> list:
        return [u for u in self.elements if self.leq(x, u) and self.leq(y, u)]

    def lower_bounds(self, x, y) -> list:
        return [l for l in self.elements if self.leq(l, x) and self.leq(l, y)]

    def join(self, x, y):
        """Least upper bound, or None when absent or not unique."""
        self._check_member(x)
        self._check_member(y)
        ubs = self.upper_bounds(x, y)
        least = [u for u in ubs if all(self.leq(u, v) for v in ubs)]
        return least[0] if len(least) == 1 else None

    def meet(self, x, y):
        """Greatest lower bound, or None when absent or not unique."""
        self._check_member(x)
        self._check_member(y)
        lbs = self.lower_bounds(x, y)
        greatest = [l for l in lbs if all(self.leq(v, l) for v in lbs)]
        return greatest[0] if len(greatest) == 1 else None

    def covers(self) -> list[tuple]:
        """Transitive reduction of the strict order, deterministic order."""
        out = []
        for x in self.elements:
            for y in self.elements:
                if x == y or not self.leq(x, y):
                    continue
                if any(z != x and z != y and self.leq(x, z) and self.leq(z, y) for z in self.elements):
                    continue
                out.append((x, y))
        return out

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "covers": [list(pair) for pair in self.covers()],
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "FinitePoset":
        return cls.from_covers(payload["elements"], [tuple(p) for p in payload["covers"]])

    def __repr__(self) -> str:
        return f"FinitePoset({len(self.elements)} elements)"


def is_complement_order(p: FinitePoset, x, y) -> bool:
    """Order-based complement test: join is the supremum, meet the infimum."""
    if p.supremum is None or p.infimum is None:
        raise ValueError("poset must have designated supremum and infimum")
    return p.join(x, y) == p.supremum and p.meet(x, y) == p.infimum


def check_valuation_monotone(src: FinitePoset, dst: FinitePoset, mapping: Mapping) -> bool:
    """True iff the total map preserves order: x below y implies map(x) below map(y)."""
    missing = [x for x in src.elements if x not in mapping]
    if missing:
        raise ValueError(f"mapping is not total; missing {missing!r}")
    for x in src.elements:
        for y in src.elements:
            if src.leq(x, y) and not dst.leq(mapping[x], mapping[y]):
                return False
    return True


@dataclass(frozen=True)
class Valuation:
    """A map from poset elements into a target poset with designated bounds."""

    target: FinitePoset
    mapping: Mapping

    def __call__(self, x):
        return self.mapping[x]


def is_complement_valuation(p: FinitePoset, valuations: Sequence[Valuation], x, y) -> bool:
    """Valuation-based complement test.

    In every provided valuation, x maps to the supremum iff y maps to the
    infimum, and vice versa.
    """
    if not valuations:
        raise ValueError("at least one valuation is required")
    for v in valuations:
        sup, inf = v.target.supremum, v.target.infimum
        if sup is None or inf is None:
            raise ValueError("valuation targets must have designated supremum and infimum")
        if (v(x) == sup) != (v(y) == inf):
            return False
        if (v(y) == sup) != (v(x) == inf):
            return False
    return True


class ThreeValued(IntEnum):
    """Totally ordered truth set: false below non-determined below true."""

    FALSE = 0
    NON_DETERMINED = 1
    TRUE = 2


def three_valued_poset() -> FinitePoset:
    members = tuple(ThreeValued)
    pairs = [(a, b) for a in members for b in members if a <= b]
    return FinitePoset(members, pairs, supremum=ThreeValued.TRUE, infimum=ThreeValued.FALSE)


def three_valued_of(p: float, tol: float = 1e-9) -> ThreeValued:
    """Collapse a probability to the three-valued set: 1 is true, 0 is false."""
    if p < -tol or p > 1 + tol:
        raise ValueError("probability must lie in [0, 1]")
    if abs(p - 1.0) <= tol:
        return ThreeValued.TRUE
    if abs(p) <= tol:
        return ThreeValued.FALSE
    return ThreeValued.NON_DETERMINED


class WeightedOrthogonalSet:
    """Weights plus pairwise-orthogonal vectors: the reference probability state.

    Equivalent to a density operator over a real vector space of dimension
    at most ``MAX_DIMENSION``.
    """

    def __init__(self, vectors: Sequence[Sequence[float]], weights: Sequence[float], tol: float = 1e-9):
        self.vectors = np.asarray(vectors, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must form a 2-D array")
        if self.vectors.shape[1] > MAX_DIMENSION:
            raise ValueError(f"dimension above {MAX_DIMENSION} is not supported")
        if self.weights.shape != (self.vectors.shape[0],):
            raise ValueError("one weight per vector required")
        norms = np.linalg.norm(self.vectors, axis=1)
        if np.any(norms <= tol):
            raise ValueError("vectors must be nonzero")
        gram = self.vectors @ self.vectors.T
        off = gram - np.diag(np.diag(gram))
        if np.max(np.abs(off)) > tol * np.max(norms) ** 2:
            raise ValueError("vectors must be pairwise orthogonal")
        if np.any(self.weights < -tol):
            raise ValueError("weights must be nonnegative")
        if abs(float(self.weights.sum()) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")

    @classmethod
    def pure(cls, vector: Sequence[float]) -> "WeightedOrthogonalSet":
        return cls([vector], [1.0])

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]


class Projector:
    """Orthogonal projector given by an orthonormal basis of a subspace."""

    def __init__(self, basis: Sequence[Sequence[float]], dimension: int | None = None, tol: float = 1e-9):
        basis = np.asarray(basis, dtype=float)
        if basis.size == 0:
            if dimension is None:
                raise ValueError("zero projector requires an explicit dimension")
            basis = basis.reshape(0, dimension)
        if basis.ndim != 2:
            raise ValueError("basis must form a 2-D array")
        if basis.shape[0]:
            gram = basis @ basis.T
            if np.max(np.abs(gram - np.eye(basis.shape[0]))) > tol:
                raise ValueError("basis vectors must be orthonormal")
        self.basis = basis

    @classmethod
    def zero(cls, dimension: int) -> "Projector":
        return cls(np.zeros((0, dimension)), dimension=dimension)

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def project(self, vector: np.ndarray) -> np.ndarray:
        if self.basis.shape[0] == 0:
            return np.zeros(self.dimension)
        return self.basis.T @ (self.basis @ vector)


def projector_valuation(
    state: WeightedOrthogonalSet,
    projector: Projector,
    variant: str = "trace",
) -> float:
    """Probability the state assigns to the projector.

    The ``trace`` variant uses squared norm fractions and equals
    Tr(projector * density); the ``linear`` variant uses plain norm fractions.
    The two differ on oblique projectors, which is the reason both are kept.
    """
    if variant not in ("trace", "linear"):
        raise ValueError(f"unknown variant {variant!r}")
    if state.dimension != projector.dimension:
        raise ValueError("state and projector dimensions differ")
    total = 0.0
    for weight, vector in zip(state.weights, state.vectors):
        fraction = np.linalg.norm(projector.project(vector)) / np.linalg.norm(vector)
        total += weight * (fraction**2 if variant == "trace" else fraction)
    return float(total)


# The six-element polarisation lattice: one point, four lines, one plane.

POLARISATION_ELEMENTS = ("point", "H", "V", "L", "R", "plane")
POLARISATION_LINES = ("H", "V", "L", "R")
ORTHOGONAL_LINE_PAIRS = (("H", "V"), ("L", "R"))

_SQRT2 = math.sqrt(2.0)
_POLARISATION_VECTORS = {
    "H": (1.0, 0.0),
    "V": (0.0, 1.0),
    "L": (1.0 / _SQRT2, 1.0 / _SQRT2),
    "R": (1.0 / _SQRT2, -1.0 / _SQRT2),
}


def build_polarisation_lattice() -> FinitePoset:
    """Point below every line, every line below the plane."""
    covers = [("point", line) for line in POLARISATION_LINES]
    covers += [(line, "plane") for line in POLARISATION_LINES]
    return FinitePoset.from_covers(
        POLARISATION_ELEMENTS, covers, supremum="plane", infimum="point"
    )


def polarisation_vector(name: str) -> np.ndarray:
    return np.asarray(_POLARISATION_VECTORS[name])


def polarisation_projector(name: str) -> Projector:
    if name == "point":
        return Projector.zero(2)
    if name == "plane":
        return Projector(np.eye(2))
    return Projector([polarisation_vector(name)])


def _orthogonal_line(name: str) -> str:
    for a, b in ORTHOGONAL_LINE_PAIRS:
        if name == a:
            return b
        if name == b:
            return a
    raise ValueError(f"{name!r} is not a polarisation line")


def polarisation_state_valuation(state: str) -> Valuation:
    """Three-valued valuation induced by a pure polarisation state.

    The state's own line is true, the orthogonal line false, the two lines
    of the incompatible basis non-determined; the plane is always true and
    the point always false.
    """
    if state not in POLARISATION_LINES:
        raise ValueError(f"{state!r} is not a polarisation line")
    mapping = {"point": ThreeValued.FALSE, "plane": ThreeValued.TRUE}
    for line in POLARISATION_LINES:
        if line == state:
            mapping[line] = ThreeValued.TRUE
        elif line == _orthogonal_line(state):
            mapping[line] = ThreeValued.FALSE
        else:
            mapping[line] = ThreeValued.NON_DETERMINED
    return Valuation(three_valued_poset(), mapping)


def polarisation_state_probabilities(state: str, variant: str = "trace") -> dict[str, float]:
    """Valuation of every lattice element under a pure state."""
    pure = WeightedOrthogonalSet.pure(polarisation_vector(state))
    return {
        name: projector_valuation(pure, polarisation_projector(name), variant)
        for name in POLARISATION_ELEMENTS
    }


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def run_reference_checks() -> list[CheckResult]:
    """Validation suite over the polarisation model; backs the qcheck command."""
    results: list[CheckResult] = []

    def record(name: str, passed: bool, detail: str) -> None:
        results.append(CheckResult(name, bool(passed), detail))

    lattice = build_polarisation_lattice()
    record(
        "lattice-shape",
        len(lattice.elements) == 6
        and lattice.leq("H", "plane")
        and not lattice.leq("H", "L")
        and not lattice.leq("L", "H"),
        "6 elements; lines below the plane; H and L incomparable",
    )
    record(
        "complement-order",
        is_complement_order(lattice, "H", "V")
        and is_complement_order(lattice, "L", "R")
        and not is_complement_order(lattice, "H", "H")
        and not is_complement_order(lattice, "H", "plane"),
        "join/meet complement law for (H,V) and (L,R)",
    )

    valuations = [polarisation_state_valuation(s) for s in POLARISATION_LINES]
    record(
        "complement-valuation",
        is_complement_valuation(lattice, valuations, "H", "V")
        and is_complement_valuation(lattice, valuations, "L", "R")
        and not is_complement_valuation(lattice, valuations, "H", "L"),
        "valuation complement law for (H,V) and (L,R); fails for (H,L)",
    )

    tv = three_valued_poset()
    monotone = all(
        check_valuation_monotone(lattice, tv, v.mapping) for v in valuations
    )
    record("valuation-monotone", monotone, "pure-state valuations preserve the order")

    probabilities = polarisation_state_probabilities("H")
    record(
        "pure-state-probabilities",
        abs(probabilities["H"] - 1.0) <= 1e-12
        and abs(probabilities["V"]) <= 1e-12
        and abs(probabilities["L"] - 0.5) <= 1e-12
        and abs(probabilities["R"] - 0.5) <= 1e-12,
        "pure H state: V(H)=1, V(V)=0, V(L)=V(R)=0.5 under the trace variant",
    )

    values = [three_valued_of(probabilities[line]) for line in POLARISATION_LINES]
    record(
        "three-valued-rules",
        values.count(ThreeValued.TRUE) == 1
        and values.count(ThreeValued.FALSE) == 1
        and values.count(ThreeValued.NON_DETERMINED) == 2,
        "exactly one line true, one false, two non-determined",
    )

    mixed = WeightedOrthogonalSet([(1.0, 0.0), (0.0, 1.0)], [0.3, 0.7])
    basis_sum = sum(
        projector_valuation(mixed, polarisation_projector(line)) for line in ("H", "V")
    )
    record(
        "trace-basis-sum",
        abs(basis_sum - 1.0) <= 1e-12,
        "trace valuation sums to 1 over a complete orthogonal basis",
    )

    rank1_sum = projector_valuation(mixed, polarisation_projector("L")) + projector_valuation(
        mixed, polarisation_projector("R")
    )
    record(
        "orthocomplement-sum",
        abs(rank1_sum - 1.0) <= 1e-12,
        "V(P) + V(P-orthogonal) = 1 for a rank-1 projector",
    )

    pure_h = WeightedOrthogonalSet.pure(polarisation_vector("H"))
    diagonal = polarisation_projector("L")
    linear = projector_valuation(pure_h, diagonal, variant="linear")
    trace = projector_valuation(pure_h, diagonal, variant="trace")
    record(
        "linear-variant-differs",
        abs(linear - 1.0 / _SQRT2) <= 1e-9 and abs(trace - 0.5) <= 1e-12,
        f"45-degree projector: linear={linear:.6f} vs trace={trace:.6f} (inequivalent)",
    )

    return results
