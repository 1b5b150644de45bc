"""Neighborhood tilings of a tile whose vertices all have degree 3.

The neighborhood is a fixed combinatorial disc: a center pentagon P1 with
corners A0..A4 and five neighbors N0..N4, Ni lying across the center edge
(Ai, A(i+1)).  Edge-congruent labelings are enumerated by backtracking,
angle assignments are solved as exact linear systems over the (r + s/f)pi
angle space, and the propagation table is derived by overlaying candidate
neighborhoods onto the known tiles around each neighbor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .exact import FAngle, FULL_TURN, PENTAGON_SUM, fangle
from .combinatorics import AngleSystem, angle_system

# ---------------------------------------------------------------------------
# tile shapes (corner angle names and edge kinds, both CCW)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TileShape:
    """A pentagon with named corners; edges[j] joins corners[j], corners[j+1]."""

    name: str
    corners: tuple[str, ...]
    edges: tuple[str, ...]

    def corner_at(self, orient: int, rot: int, j: int) -> str:
        return self.corners[(j + rot) % 5 if orient > 0 else (rot - j) % 5]

    def edge_at(self, orient: int, rot: int, j: int) -> str:
        return self.edges[(j + rot) % 5 if orient > 0 else (rot - j - 1) % 5]


SHAPES = {
    "a3b2": TileShape(
        "a3b2",
        corners=("alpha", "theta1", "phi1", "phi2", "theta2"),
        edges=("b", "a", "a", "a", "b"),
    ),
    "a2b2c": TileShape(
        "a2b2c",
        corners=("alpha", "delta", "epsilon", "beta", "gamma"),
        edges=("a", "c", "b", "b", "a"),
    ),
    "a3bc": TileShape(
        "a3bc",
        corners=("alpha", "beta", "phi1", "phi2", "gamma"),
        edges=("b", "a", "a", "a", "c"),
    ),
}

# center placements chosen so that tile/position indices line up with the
# customary P2..P6 numbering of the neighbors (N_i hosts P_{i+2})
CENTER_PLACEMENT = {"a3b2": (1, 4), "a2b2c": (1, 3), "a3bc": (1, 4)}

# ---------------------------------------------------------------------------
# the fixed layout
# ---------------------------------------------------------------------------

CENTER = "P1"
NEIGHBORS = tuple(f"N{i}" for i in range(5))
TILES = (CENTER,) + NEIGHBORS


def _A(i):
    return ("A", i % 5)


def _B(i):
    return ("B", i % 5)


def _C(i):
    return ("C", i % 5)


def tile_corners(tile: str) -> tuple:
    """CCW corner vertices of a tile in the layout."""
    if tile == CENTER:
        return tuple(_A(j) for j in range(5))
    i = int(tile[1])
    return (_A(i + 1), _A(i), _B(i), _C(i), _B(i + 1))


def tile_edges(tile: str) -> tuple:
    """CCW edge ids; edge j joins corners j and j+1."""
    if tile == CENTER:
        return tuple(("c", j) for j in range(5))
    i = int(tile[1])
    return (("c", i), ("r", i), ("o1", i), ("o2", i), ("r", (i + 1) % 5))


ALL_EDGES = tuple(
    (kind, i) for kind in ("c", "r", "o1", "o2") for i in range(5)
)

INNER_VERTICES = tuple(_A(j) for j in range(5))


def tiles_at_inner_vertex(j: int) -> tuple[str, str, str]:
    """Tiles meeting at A_j: the center and the two adjacent neighbors."""
    return (CENTER, f"N{(j - 1) % 5}", f"N{j % 5}")


# the reflection of the layout fixing corner A1 (used for symmetry quotients)
def _reflect_vertex(v):
    kind, i = v
    if kind in ("A", "B"):
        return (kind, (2 - i) % 5)
    return ("C", (1 - i) % 5)


def _reflect_edge(e):
    kind, i = e
    if kind == "c":
        return ("c", (1 - i) % 5)
    if kind == "r":
        return ("r", (2 - i) % 5)
    if kind == "o1":
        return ("o2", (1 - i) % 5)
    return ("o1", (1 - i) % 5)


def _reflect_tile(t):
    if t == CENTER:
        return CENTER
    return f"N{(1 - int(t[1])) % 5}"


SWAP_NAMES = {
    "theta1": "theta2",
    "theta2": "theta1",
    "phi1": "phi2",
    "phi2": "phi1",
}


# ---------------------------------------------------------------------------
# edge-congruent labelings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeLabeling:
    """One class of edge labelings of the neighborhood.

    ``labels`` maps every edge to a kind, or to None where distinct
    completions of the outer boundary remain; ``completions`` holds the
    full labelings of the class.
    """

    combo: str
    labels: tuple
    completions: tuple

    def label(self, edge) -> Optional[str]:
        return dict(self.labels)[edge]

    def as_dict(self) -> dict:
        return dict(self.labels)

    @property
    def undetermined_edges(self) -> tuple:
        return tuple(e for e, k in self.labels if k is None)


def _tile_placements(shape: TileShape, word: Sequence[Optional[str]]):
    """Placements (orient, rot) whose edge kinds agree with the known word."""
    out = []
    for orient in (1, -1):
        for rot in range(5):
            if all(
                w is None or shape.edge_at(orient, rot, j) == w
                for j, w in enumerate(word)
            ):
                out.append((orient, rot))
    return out


def enumerate_edge_congruent(combo: str) -> list[EdgeLabeling]:
    """All edge labelings of the neighborhood consistent with the tile's
    edge multiset, up to the symmetry of the disc.

    Completions that differ only on edges of the outer boundary (edges not
    incident to any inner vertex) are merged into one class.
    """
    shape = SHAPES[combo]
    orient0, rot0 = CENTER_PLACEMENT[combo]
    labels: dict = {e: None for e in ALL_EDGES}
    for j in range(5):
        labels[("c", j)] = shape.edge_at(orient0, rot0, j)

    full: list[dict] = []

    def place(i: int):
        if i == 5:
            full.append(dict(labels))
            return
        tile = f"N{i}"
        edges = tile_edges(tile)
        word = [labels[e] for e in edges]
        for orient, rot in _tile_placements(shape, word):
            new = {
                e: shape.edge_at(orient, rot, j)
                for j, e in enumerate(edges)
                if labels[e] is None
            }
            for e, k in new.items():
                labels[e] = k
            place(i + 1)
            for e in new:
                labels[e] = None

    place(0)

    # quotient by the layout reflection when it fixes the center labeling
    center_fixed = all(
        labels[("c", j)] == labels[_reflect_edge(("c", j))] for j in range(5)
    )
    seen = set()
    kept = []
    for lab in full:
        key = tuple(sorted(lab.items()))
        if key in seen:
            continue
        seen.add(key)
        if center_fixed:
            refl = {_reflect_edge(e): k for e, k in lab.items()}
            seen.add(tuple(sorted(refl.items())))
        kept.append(lab)

    # merge classes agreeing on all edges incident to inner vertices
    inner_edges = [e for e in ALL_EDGES if e[0] in ("c", "r")]
    groups: dict[tuple, list[dict]] = {}
    for lab in kept:
        key = tuple((e, lab[e]) for e in inner_edges)
        groups.setdefault(key, []).append(lab)

    out = []
    for _, labs in sorted(groups.items()):
        merged = {}
        for e in ALL_EDGES:
            kinds = {lab[e] for lab in labs}
            merged[e] = kinds.pop() if len(kinds) == 1 else None
        out.append(
            EdgeLabeling(
                combo=combo,
                labels=tuple(sorted(merged.items())),
                completions=tuple(tuple(sorted(lab.items())) for lab in labs),
            )
        )
    return out


# ---------------------------------------------------------------------------
# angle assignment over a labeling
# ---------------------------------------------------------------------------


class LinearSystem:
    """Exact linear system in angle unknowns with (r + s/f)pi right sides."""

    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        self.rows: list[tuple[list[Fraction], FAngle]] = []

    def add(self, coeffs: Mapping[str, int], rhs: FAngle):
        row = [Fraction(coeffs.get(n, 0)) for n in self.names]
        self.rows.append((row, rhs))

    def _rref(self):
        rows = [(r[:], rhs) for r, rhs in self.rows]
        n = len(self.names)
        pivots = []
        rank = 0
        for col in range(n):
            piv = next(
                (k for k in range(rank, len(rows)) if rows[k][0][col] != 0), None
            )
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            coeffs, rhs = rows[rank]
            inv = Fraction(1) / coeffs[col]
            coeffs = [c * inv for c in coeffs]
            rhs = rhs * inv
            rows[rank] = (coeffs, rhs)
            for k in range(len(rows)):
                if k != rank and rows[k][0][col] != 0:
                    factor = rows[k][0][col]
                    rows[k] = (
                        [a - factor * b for a, b in zip(rows[k][0], coeffs)],
                        rows[k][1] - rhs * factor,
                    )
            pivots.append(col)
            rank += 1
        return rows, pivots, rank

    def consistent(self) -> bool:
        rows, _, _ = self._rref()
        return not any(
            not any(coeffs) and not rhs.is_zero() for coeffs, rhs in rows
        )

    def value_of(self, coeffs: Mapping[str, int]) -> Optional[FAngle]:
        """The pinned value of a linear functional, or None if undetermined."""
        rows, pivots, rank = self._rref()
        target = [Fraction(coeffs.get(n, 0)) for n in self.names]
        acc = fangle(0)
        for (row, rhs), col in zip(rows[:rank], pivots):
            factor = target[col]
            if factor == 0:
                continue
            target = [a - factor * b for a, b in zip(target, row)]
            acc = acc + rhs * factor
        if any(target):
            return None
        return acc

    def forces_zero(self, coeffs: Mapping[str, int]) -> bool:
        v = self.value_of(coeffs)
        return v is not None and v.is_zero()


@dataclass(frozen=True)
class Contradiction:
    kind: str  # angle-equation-forces-equal-angles | pcombo-violation | edge-mismatch | f-equals-12
    detail: str


@dataclass(frozen=True)
class NeighborhoodTiling:
    """A solved neighborhood: full angle placement plus the angle values."""

    combo: str
    type_name: str
    labels: tuple  # ((edge, kind), ...)
    corner_names: tuple  # ((tile, ((vertex, angle-name), ...)), ...)
    orientations: tuple  # orient of N0..N4 (+1 / -1)
    system: AngleSystem

    def label(self, edge) -> str:
        return dict(self.labels)[edge]

    def names_of(self, tile: str) -> dict:
        return dict(dict(self.corner_names)[tile])

    def corner_tuple(self, tile: str) -> tuple[str, ...]:
        names = self.names_of(tile)
        return tuple(names[v] for v in tile_corners(tile))

    def inner_vertex_names(self, j: int) -> tuple[str, str, str]:
        return tuple(
            self.names_of(t)[_A(j)] for t in tiles_at_inner_vertex(j)
        )

    def boundary_pair(self, i: int) -> tuple[str, str, str]:
        """Angles of N_{i-1} and N_i at the outer end of radial edge i,
        plus the kind of that shared edge."""
        left = self.names_of(f"N{(i - 1) % 5}")[_B(i)]
        right = self.names_of(f"N{i}")[_B(i)]
        return (left, right, self.label(("r", i)))


def _complex_from_placements(combo, labels, placements):
    """Corner-name maps for center+neighbor placements (orient, rot)."""
    shape = SHAPES[combo]
    corner_names = {}
    for tile, (orient, rot) in placements.items():
        corners = tile_corners(tile)
        corner_names[tile] = {
            v: shape.corner_at(orient, rot, j) for j, v in enumerate(corners)
        }
    return corner_names


def _equations(corner_names, names, include_pentagon_sum: bool = True):
    sys_ = LinearSystem(names)
    for j in range(5):
        coeffs: dict[str, int] = {}
        for t in tiles_at_inner_vertex(j):
            nm = corner_names[t][_A(j)]
            coeffs[nm] = coeffs.get(nm, 0) + 1
        sys_.add(coeffs, FULL_TURN)
    if include_pentagon_sum:
        sys_.add({n: 1 for n in names}, PENTAGON_SUM)
    return sys_


def _freeze_corner_names(corner_names):
    return tuple(
        (t, tuple(sorted(m.items()))) for t, m in sorted(corner_names.items())
    )


def _transform_corner_names(corner_names, reflect=False, rename=False):
    out = {}
    for t, m in corner_names.items():
        new_m = {}
        for v, nm in m.items():
            if rename:
                nm = SWAP_NAMES.get(nm, nm)
            new_m[_reflect_vertex(v) if reflect else v] = nm
        out[_reflect_tile(t) if reflect else t] = new_m
    return out


def _transform_labels(labels, reflect=False):
    if not reflect:
        return dict(labels)
    return {_reflect_edge(e): k for e, k in dict(labels).items()}


_A3B2_NAMES = ("alpha", "theta1", "theta2", "phi1", "phi2")


def _classify_solution(sys_: LinearSystem, f_probe=range(14, 121, 2)):
    """Solve a branch system; returns (kind, payload)."""
    if not sys_.consistent():
        return ("contradiction", Contradiction(
            "angle-equation-forces-equal-angles", "vertex equations are inconsistent"
        ))
    d_theta = sys_.value_of({"theta1": 1, "theta2": -1})
    d_phi = sys_.value_of({"phi1": 1, "phi2": -1})
    if (d_theta is not None and d_theta.is_zero()) or (
        d_phi is not None and d_phi.is_zero()
    ):
        which = "theta1 = theta2" if d_theta is not None and d_theta.is_zero() else "phi1 = phi2"
        return ("contradiction", Contradiction(
            "angle-equation-forces-equal-angles", f"angle sums force {which}"
        ))

    values = {n: sys_.value_of({n: 1}) for n in _A3B2_NAMES}
    if d_theta is not None and d_phi is not None and all(
        values[n] is not None for n in ("alpha", "phi1", "phi2")
    ):
        # a pinned solution: Lemma-1 ordering requires theta and phi pairs
        # to be ordered oppositely at every admissible tile count
        admissible = [
            f
            for f in f_probe
            if all(values[n].eval_at(f) > 0 for n in _A3B2_NAMES if values[n])
        ]
        if admissible and all(
            d_theta.sign_at(f) * d_phi.sign_at(f) > 0 for f in admissible
        ):
            return ("contradiction", Contradiction(
                "pcombo-violation",
                f"theta1-theta2 = {d_theta} and phi1-phi2 = {d_phi} "
                "have equal signs at every admissible f",
            ))
    return ("solved", values)


@dataclass(frozen=True)
class AssignmentOutcome:
    branch: tuple  # orientations of N0..N4
    result: object  # NeighborhoodTiling or Contradiction


def solve_angle_assignment(labeling: EdgeLabeling) -> list[AssignmentOutcome]:
    """Solve the angle placement over one a3b2 edge labeling.

    Branches over the two chiralities of each neighbor (the center is
    fixed positive; the remaining naming symmetry is the 1<->2 relabel
    composed with the disc reflection, used to deduplicate survivors).
    """
    if labeling.combo != "a3b2":
        raise ValueError("angle assignment branching applies to a3b2 labelings")
    shape = SHAPES["a3b2"]
    labels = labeling.as_dict()
    if any(k is None for k in labels.values()):
        raise ValueError("labeling must be fully determined for a3b2")

    options = {}
    for i in range(5):
        tile = f"N{i}"
        word = [labels[e] for e in tile_edges(tile)]
        placements = _tile_placements(shape, word)
        if len(placements) != 2:
            raise ValueError(f"expected 2 chiralities for {tile}, got {placements}")
        options[tile] = placements

    outcomes = []
    for combo_choice in itertools.product(*(options[f"N{i}"] for i in range(5))):
        placements = {CENTER: CENTER_PLACEMENT["a3b2"]}
        for i, pl in enumerate(combo_choice):
            placements[f"N{i}"] = pl
        corner_names = _complex_from_placements("a3b2", labels, placements)
        sys_ = _equations(corner_names, _A3B2_NAMES)
        kind, payload = _classify_solution(sys_)
        branch = tuple(pl[0] for pl in combo_choice)
        if kind == "contradiction":
            outcomes.append(AssignmentOutcome(branch, payload))
            continue
        values = payload
        theta1, theta2 = values["theta1"], values["theta2"]
        sum_only = theta1 is None or theta2 is None
        system = AngleSystem(
            name="?",
            alpha=values["alpha"],
            theta1=theta1,
            theta2=theta2,
            phi1=values["phi1"],
            phi2=values["phi2"],
            theta_sum=sys_.value_of({"theta1": 1, "theta2": 1}),
            sum_only=sum_only,
        )
        tiling = NeighborhoodTiling(
            combo="a3b2",
            type_name="?",
            labels=tuple(sorted(labels.items())),
            corner_names=_freeze_corner_names(corner_names),
            orientations=branch,
            system=system,
        )
        outcomes.append(AssignmentOutcome(branch, tiling))
    return outcomes


def _systems_equal(a: AngleSystem, b: AngleSystem) -> bool:
    if a.sum_only != b.sum_only:
        return False
    pairs = [(a.alpha, b.alpha), (a.phi1, b.phi1), (a.phi2, b.phi2), (a.theta_sum, b.theta_sum)]
    if not a.sum_only:
        pairs += [(a.theta1, b.theta1), (a.theta2, b.theta2)]
    return all((x - y).is_zero() for x, y in pairs)


def identify_type(system: AngleSystem) -> Optional[str]:
    for name in ("II", "III1", "III2", "III3"):
        if _systems_equal(system, angle_system(name)):
            return name
    return None


@dataclass(frozen=True)
class NeighborhoodClassification:
    survivors: dict  # type name -> NeighborhoodTiling
    contradictions: list  # (labeling index, branch, Contradiction)
    branch_counts: dict  # labeling index -> number of branches examined
    raw_survivor_count: int


def classify_neighborhoods() -> NeighborhoodClassification:
    """Classify all a3b2 neighborhood tilings: solve every labeling/branch,
    deduplicate survivors under the relabel+reflection symmetry, and name
    them by their angle tables."""
    labelings = enumerate_edge_congruent("a3b2")
    survivors: dict[str, NeighborhoodTiling] = {}
    contradictions = []
    branch_counts = {}
    raw = 0
    seen_keys = set()
    for idx, labeling in enumerate(labelings):
        outcomes = solve_angle_assignment(labeling)
        branch_counts[idx] = len(outcomes)
        for oc in outcomes:
            if isinstance(oc.result, Contradiction):
                contradictions.append((idx, oc.branch, oc.result))
                continue
            raw += 1
            tiling = oc.result
            key = tiling.corner_names
            mirror = _freeze_corner_names(
                _transform_corner_names(
                    {t: dict(m) for t, m in tiling.corner_names}, reflect=True, rename=True
                )
            )
            if key in seen_keys or mirror in seen_keys:
                continue
            seen_keys.add(key)
            seen_keys.add(mirror)
            name = identify_type(tiling.system)
            if name is None:
                raise RuntimeError(f"survivor does not match any known angle table: {tiling.system}")
            survivors[name] = NeighborhoodTiling(
                combo=tiling.combo,
                type_name=name,
                labels=tiling.labels,
                corner_names=tiling.corner_names,
                orientations=tiling.orientations,
                system=tiling.system,
            )
    return NeighborhoodClassification(
        survivors=survivors,
        contradictions=contradictions,
        branch_counts=branch_counts,
        raw_survivor_count=raw,
    )


# ---------------------------------------------------------------------------
# minimal cases: a2b2c and a3bc
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinimalCaseResult:
    combo: str
    equations: tuple  # human-readable angle sum equations per branch
    forced: tuple  # ((name or expression, FAngle value), ...)
    f: int


def minimal_case_proof(combo: str) -> MinimalCaseResult:
    """Replay the angle-sum derivation for a2b2c or a3bc: the unique edge
    labeling forces enough vertex equations to pin the pentagon's angle sum,
    and the pentagon angle sum equation then gives f = 12 exactly."""
    if combo not in ("a2b2c", "a3bc"):
        raise ValueError("minimal case proofs exist for a2b2c and a3bc only")
    shape = SHAPES[combo]
    names = sorted(set(shape.corners))
    labelings = enumerate_edge_congruent(combo)
    if len(labelings) != 1:
        raise RuntimeError(f"{combo}: expected a unique labeling class, got {len(labelings)}")
    labeling = labelings[0]

    eq_strs = []
    forced = None
    f_solved = None
    for completion in labeling.completions:
        labels = dict(completion)
        placements = {CENTER: CENTER_PLACEMENT[combo]}
        for i in range(5):
            tile = f"N{i}"
            word = [labels[e] for e in tile_edges(tile)]
            pls = _tile_placements(shape, word)
            if len(pls) != 1:
                raise RuntimeError(f"{combo}: placement of {tile} not forced: {pls}")
            placements[tile] = pls[0]
        corner_names = _complex_from_placements(combo, labels, placements)
        sys_ = _equations(corner_names, names, include_pentagon_sum=False)
        if not sys_.consistent():
            raise RuntimeError(f"{combo}: vertex equations inconsistent")
        for j in range(5):
            eq_strs.append(
                " + ".join(sorted(corner_names[t][_A(j)] for t in tiles_at_inner_vertex(j)))
                + " = 2pi"
            )
        branch_forced = []
        for n in names:
            v = sys_.value_of({n: 1})
            if v is not None:
                branch_forced.append((n, v))
        total = sys_.value_of({n: 1 for n in names})
        if total is None:
            raise RuntimeError(f"{combo}: five-angle sum not pinned")
        # alpha+...+last = 3pi + 4pi/f
        diff = total - fangle(3)
        f = Fraction(4) / diff.r if diff.s == 0 and diff.r != 0 else None
        if f is None or f.denominator != 1 or int(f) % 2 != 0:
            raise RuntimeError(f"{combo}: angle sum {total} does not give an even f")
        branch_f = int(f)
        if f_solved is None:
            forced, f_solved = tuple(branch_forced), branch_f
        elif branch_f != f_solved:
            raise RuntimeError(f"{combo}: branches disagree on f")
    return MinimalCaseResult(
        combo=combo, equations=tuple(dict.fromkeys(eq_strs)), forced=forced, f=f_solved
    )


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


def _anchored_tuple(corner_names, tile, start_vertex):
    corners = tile_corners(tile)
    k = corners.index(start_vertex)
    names = corner_names[tile]
    return tuple(names[corners[(k + j) % 5]] for j in range(5))


def _candidate_variants(survivors: Mapping[str, NeighborhoodTiling]):
    """All relabel/reflection variants of the classified neighborhoods."""
    variants = []
    for name, tiling in survivors.items():
        base = {t: dict(m) for t, m in tiling.corner_names}
        for reflect in (False, True):
            for rename in (False, True):
                cn = _transform_corner_names(base, reflect=reflect, rename=rename)
                variants.append((name, cn))
    return variants


def _merged_system_ok(source: NeighborhoodTiling, cand_corner_names) -> bool:
    sys_ = _equations({t: dict(m) for t, m in source.corner_names}, _A3B2_NAMES)
    cand_sys = _equations(cand_corner_names, _A3B2_NAMES)
    for row, rhs in cand_sys.rows:
        sys_.rows.append((row, rhs))
    if not sys_.consistent():
        return False
    for diff in ({"theta1": 1, "theta2": -1}, {"phi1": 1, "phi2": -1}):
        if sys_.forces_zero(diff):
            return False
    return True


@dataclass(frozen=True)
class PropagationTable:
    """Admissible neighborhood types of each neighbor position (1..5 for
    the tiles customarily labeled P2..P6)."""

    entries: tuple  # ((type, position), frozenset of type names)

    def entry(self, type_name: str, position: int) -> frozenset:
        return dict(self.entries)[(type_name, position)]

    def admissible_positions(self, type_name: str) -> tuple[int, ...]:
        return tuple(
            pos for (t, pos), v in self.entries if t == type_name and v
        )


def propagation_table(
    survivors: Optional[Mapping[str, NeighborhoodTiling]] = None,
) -> PropagationTable:
    """Which neighbors of each neighborhood type can themselves be centers
    of all-degree-3 neighborhoods, and of which types.

    A neighbor Q is tested by aligning each candidate neighborhood (any
    relabel/reflection variant of the four types) onto Q's corners and
    comparing the three tiles already known around Q; candidates whose
    angle tables cannot coexist with the source's at the same tile count
    are rejected first.
    """
    if survivors is None:
        survivors = classify_neighborhoods().survivors
    variants = _candidate_variants(survivors)
    entries = {}
    for src_name, src in survivors.items():
        src_cn = {t: dict(m) for t, m in src.corner_names}
        compat = [
            (name, cn) for name, cn in variants if _merged_system_ok(src, cn)
        ]
        for i in range(5):
            q = f"N{i}"
            cq = _anchored_tuple(src_cn, q, tile_corners(q)[0])
            matches = set()
            for cand_name, cand_cn in compat:
                cv = _anchored_tuple(cand_cn, CENTER, _A(0))
                offsets = [
                    k
                    for k in range(5)
                    if all(cq[j] == cv[(j + k) % 5] for j in range(5))
                ]
                for k in offsets:
                    # known tiles across Q's edges 0 (center), 1, 4 (radials)
                    ok = True
                    for e_idx, known in (
                        (0, CENTER),
                        (1, f"N{(i - 1) % 5}"),
                        (4, f"N{(i + 1) % 5}"),
                    ):
                        share_end = tile_corners(q)[(e_idx + 1) % 5]
                        got = _anchored_tuple(src_cn, known, share_end)
                        m = (e_idx + k) % 5
                        cand_tile = f"N{m}"
                        cand_end = _A(m + 1)
                        want = _anchored_tuple(cand_cn, cand_tile, cand_end)
                        if got != want:
                            ok = False
                            break
                    if ok:
                        matches.add(cand_name)
            entries[(src_name, i + 1)] = frozenset(matches)
    return PropagationTable(entries=tuple(sorted(entries.items())))


# ---------------------------------------------------------------------------
# earth map compatibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EarthMapVerdict:
    distance: int
    compatible: bool
    reason: str


def earth_map_compatible(
    distance: int, table: Optional[PropagationTable] = None
) -> EarthMapVerdict:
    """Can an earth map tiling (two poles at the given distance) carry a
    geometrically congruent a3b2 tiling?

    Distances 1-4 have a tile with all vertices of degree 3 whose three
    consecutive neighbors share that property; distance 5 needs two such
    neighbors two positions apart.  Both facts are structural features of
    the five earth map families, imported as assumptions.
    """
    if distance not in (1, 2, 3, 4, 5):
        raise ValueError(f"unsupported distance {distance}")
    if table is None:
        table = propagation_table()
    type_names = sorted({t for (t, _), _ in table.entries})

    def max_consecutive(name: str) -> int:
        ok = [bool(table.entry(name, pos)) for pos in range(1, 6)]
        if all(ok):
            return 5
        best = run = 0
        for v in ok + ok:  # cyclic
            run = run + 1 if v else 0
            best = max(best, run)
        return min(best, 5)

    if distance <= 4:
        best = max((max_consecutive(n) for n in type_names), default=0)
        return EarthMapVerdict(
            distance,
            compatible=False,
            reason=f"max consecutive admissible positions = {best} < 3",
        )

    def fits_gap2(name: str) -> bool:
        pos = table.admissible_positions(name)
        return any(
            (abs(p - q) % 5) in (2, 3) for p in pos for q in pos if p < q
        ) and len(pos) >= 2

    fitting = [n for n in type_names if fits_gap2(n)]
    if fitting != ["III3"]:
        return EarthMapVerdict(
            5, compatible=False, reason=f"types fitting the distance-5 pattern: {fitting}"
        )
    forced = set().union(*(table.entry("III3", p) for p in table.admissible_positions("III3")))
    bad = [n for n in forced if not fits_gap2(n)]
    if bad:
        return EarthMapVerdict(
            5, compatible=False, reason=f"III3 forces {', '.join(sorted(bad))}"
        )
    return EarthMapVerdict(5, compatible=True, reason="no obstruction found")
