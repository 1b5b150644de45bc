"""Vertex-level combinatorics for the a3b2 pentagon.

Covers the vertex counting equation, the degree-3 tile guarantee, the
four neighborhood angle systems, exhaustive enumeration of angle
combinations at vertices, cyclic edge-consistent arrangements, and the
two combinatorial filters (ab-parity and the theta2-phi1-run exclusion)
that cut the enumeration down to the admissible vertex lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .exact import FULL_TURN, FAngle, PENTAGON_SUM, TilingParameters, fangle

# ---------------------------------------------------------------------------
# the pentagon's angles and their bordering edge kinds
# ---------------------------------------------------------------------------

ANGLE_NAMES = ("alpha", "theta1", "theta2", "phi1", "phi2")

# edge kinds on the two sides of each angle, as an unordered pair
EDGE_CLASS = {
    "alpha": ("b", "b"),
    "theta1": ("a", "b"),
    "theta2": ("a", "b"),
    "phi1": ("a", "a"),
    "phi2": ("a", "a"),
}

PRETTY = {
    "alpha": "α",
    "theta1": "θ₁",
    "theta2": "θ₂",
    "phi1": "φ₁",
    "phi2": "φ₂",
}


class AngleSystemError(ValueError):
    pass


@dataclass(frozen=True)
class AngleSystem:
    """Exact angle values of one neighborhood type (one row of the angle table).

    For type II only the sum theta1 + theta2 is determined; such a system
    carries ``sum_only=True`` and `theta1`/`theta2` of ``None`` until pinned.
    """

    name: str
    alpha: FAngle
    theta1: Optional[FAngle]
    theta2: Optional[FAngle]
    phi1: FAngle
    phi2: FAngle
    theta_sum: FAngle = None  # type: ignore[assignment]
    sum_only: bool = False

    def __post_init__(self):
        if self.theta_sum is None:
            if self.sum_only:
                raise AngleSystemError("sum-only system needs theta_sum")
            object.__setattr__(self, "theta_sum", self.theta1 + self.theta2)

    def angles(self) -> dict[str, FAngle]:
        if self.sum_only:
            raise AngleSystemError(f"{self.name}: theta1/theta2 not pinned")
        return {
            "alpha": self.alpha,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "phi1": self.phi1,
            "phi2": self.phi2,
        }

    def values_at(self, f: int) -> dict[str, Fraction]:
        return {k: v.eval_at(f) for k, v in self.angles().items()}

    def pinned(self, theta1: FAngle) -> "AngleSystem":
        """Pin theta1 (and hence theta2) of a sum-only system."""
        if not self.sum_only:
            raise AngleSystemError(f"{self.name} is already pinned")
        return AngleSystem(
            name=self.name,
            alpha=self.alpha,
            theta1=theta1,
            theta2=self.theta_sum - theta1,
            phi1=self.phi1,
            phi2=self.phi2,
            theta_sum=self.theta_sum,
        )

    def swapped(self) -> "AngleSystem":
        """Relabel theta1<->theta2 and phi1<->phi2 (the mirror naming)."""
        return AngleSystem(
            name=self.name + "'",
            alpha=self.alpha,
            theta1=self.theta2,
            theta2=self.theta1,
            phi1=self.phi2,
            phi2=self.phi1,
            theta_sum=self.theta_sum,
            sum_only=self.sum_only,
        )

    def pentagon_sum_ok(self) -> bool:
        total = self.alpha + self.phi1 + self.phi2 + self.theta_sum
        return (total - PENTAGON_SUM).is_zero()

    def all_positive_at(self, f: int) -> bool:
        return all(v > 0 for v in self.values_at(f).values())

    def positive_f_values(self, f_range: Iterable[int] = range(18, 101, 2)) -> list[int]:
        return [f for f in f_range if self.all_positive_at(f)]


_TABLE1 = {
    "II": AngleSystem(
        name="II",
        alpha=fangle("2/3"),
        theta1=None,
        theta2=None,
        phi1=fangle("1/3", 4),
        phi2=fangle("4/3", -8),
        theta_sum=fangle("2/3", 8),
        sum_only=True,
    ),
    "III1": AngleSystem(
        name="III1",
        alpha=fangle("2/3"),
        theta1=fangle("1/3", 4),
        theta2=fangle("4/3", -8),
        phi1=fangle("4/3", -8),
        phi2=fangle("-2/3", 16),
    ),
    "III2": AngleSystem(
        name="III2",
        alpha=fangle("2/3"),
        theta1=fangle("5/6", -2),
        theta2=fangle("-1/6", 10),
        phi1=fangle("1/3", 4),
        phi2=fangle("4/3", -8),
    ),
    "III3": AngleSystem(
        name="III3",
        alpha=fangle("2/3"),
        theta1=fangle("-1/6", 10),
        theta2=fangle("5/6", -2),
        phi1=fangle("4/3", -8),
        phi2=fangle("1/3", 4),
    ),
}


def angle_system(name: str) -> AngleSystem:
    """Exact angles of a geometrically congruent neighborhood type."""
    key = name.replace("_", "").upper().replace("III", "III")
    if key not in _TABLE1:
        raise AngleSystemError(f"unknown neighborhood type {name!r}")
    return _TABLE1[key]


# ---------------------------------------------------------------------------
# vertex counting
# ---------------------------------------------------------------------------


def vertex_count_residual(p: TilingParameters, degree_counts: Mapping[int, int]) -> Fraction:
    """f/2 - 6 - sum_{k>=4} (k-3) v_k; zero iff the counts fit the tile count."""
    total = Fraction(p.f, 2) - 6
    for k, v in degree_counts.items():
        if k < 3 or v < 0:
            raise ValueError(f"bad degree count {k}: {v}")
        if k >= 4:
            total -= (k - 3) * v
    return total


def ldeg_guarantee(degree_counts: Mapping[int, int], p: TilingParameters) -> bool:
    """True iff the counting argument certifies a tile whose vertices all have
    degree 3 except possibly one of degree at most 5.

    Requires a consistent degree vector (zero residual)."""
    if vertex_count_residual(p, degree_counts) != 0:
        raise ValueError("inconsistent degree vector")
    bound = Fraction(0)
    for k, v in degree_counts.items():
        if k in (4, 5):
            bound += Fraction(k * v, 2)
        elif k >= 6:
            bound += k * v
    return p.f > bound


# ---------------------------------------------------------------------------
# vertex signatures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class VertexSignature:
    """Multiplicities of (alpha, theta1, theta2, phi1, phi2) at a vertex."""

    a: int
    b1: int
    b2: int
    c1: int
    c2: int

    def degree(self) -> int:
        return self.a + self.b1 + self.b2 + self.c1 + self.c2

    def counts(self) -> dict[str, int]:
        return {
            "alpha": self.a,
            "theta1": self.b1,
            "theta2": self.b2,
            "phi1": self.c1,
            "phi2": self.c2,
        }

    def angle_sum(self, sys: AngleSystem) -> FAngle:
        total = fangle(0)
        for name, mult in self.counts().items():
            total = total + sys.angles()[name] * mult
        return total

    def pretty(self) -> str:
        parts = []
        sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
        for name, mult in self.counts().items():
            if mult == 0:
                continue
            parts.append(PRETTY[name] + (str(mult).translate(sup) if mult > 1 else ""))
        return "".join(parts) or "(empty)"


def sig_from_counts(counts: Mapping[str, int]) -> VertexSignature:
    return VertexSignature(
        counts.get("alpha", 0),
        counts.get("theta1", 0),
        counts.get("theta2", 0),
        counts.get("phi1", 0),
        counts.get("phi2", 0),
    )


def ab_parity_ok(sig: VertexSignature) -> bool:
    """The number of ab-angles at a vertex is even."""
    return (sig.b1 + sig.b2) % 2 == 0


class AnglePositivityError(ValueError):
    pass


def enumerate_vertex_signatures(sys: AngleSystem, p: TilingParameters) -> frozenset[VertexSignature]:
    """All vertices with exact angle sum 2*pi and degree >= 3.

    No combinatorial filters are applied; this is the raw angle-sum
    enumeration.  Requires every angle to evaluate positive at ``p.f``.
    """
    values = sys.values_at(p.f)
    bad = [name for name, v in values.items() if v <= 0]
    if bad:
        raise AnglePositivityError(f"{sys.name}: angle nonpositive at f={p.f}: {bad}")

    # recurse over angles in decreasing value, solving the smallest exactly
    order = sorted(ANGLE_NAMES, key=lambda n: values[n], reverse=True)
    target = Fraction(2)
    out = []

    def rec(idx: int, remaining: Fraction, counts: dict[str, int]):
        name = order[idx]
        v = values[name]
        if idx == len(order) - 1:
            mult = remaining / v
            if mult.denominator == 1 and mult >= 0:
                counts[name] = int(mult)
                sig = sig_from_counts(counts)
                if sig.degree() >= 3:
                    out.append(sig)
                del counts[name]
            return
        max_mult = int(remaining / v)
        for mult in range(max_mult + 1):
            counts[name] = mult
            rec(idx + 1, remaining - mult * v, counts)
        del counts[name]

    rec(0, target, {})
    return frozenset(out)


# ---------------------------------------------------------------------------
# the F-parameterized vertex families of type III2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexFamily:
    """A vertex family alpha^a theta1^b1 theta2^b2 phi1^c1 phi2^c2 whose
    theta2-multiplicity is affine in F = 48/(60-f)."""

    a: int
    b1: int
    c1: int
    c2: int
    slope: int
    intercept: int

    def b2_at(self, f: int) -> Fraction:
        F = Fraction(48, 60 - f)
        return self.slope * F + self.intercept

    def instantiate(self, f: int) -> Optional[VertexSignature]:
        b2 = self.b2_at(f)
        if b2.denominator != 1 or b2 < 0:
            return None
        sig = VertexSignature(self.a, self.b1, int(b2), self.c1, self.c2)
        return sig if sig.degree() >= 3 else None

    def b2_str(self) -> str:
        if self.slope == 0:
            return str(self.intercept)
        head = "F" if self.slope == 1 else f"{self.slope}F"
        if self.intercept == 0:
            return head
        sign = "+" if self.intercept > 0 else "-"
        return f"{head}{sign}{abs(self.intercept)}"


def vertex_family_table(sys: AngleSystem) -> list[VertexFamily]:
    """The 24 type III2 vertex families, in canonical (table) order.

    The angle sum equation rewritten for the theta2 count gives
    b2 = -(5a+6b1+3c1+9c2-15) F + (4a+5b1+2c1+8c2-12),  F = 48/(60-f).
    A family is kept iff some even f in [18, 58] makes b2 a nonnegative
    integer with vertex degree >= 3.
    """
    if sys.name != "III2":
        raise AngleSystemError("the F-parameterization is specific to type III2")
    # f-independent lower bounds of the angles on 18 <= f < 60
    lo = {
        "alpha": Fraction(2, 3),
        "theta1": Fraction(13, 18),
        "phi1": Fraction(1, 3),
        "phi2": Fraction(8, 9),
    }
    families = []
    for a in range(4):
        for b1 in range(3):
            for c1 in range(7):
                for c2 in range(3):
                    if a * lo["alpha"] + b1 * lo["theta1"] + c1 * lo["phi1"] + c2 * lo["phi2"] > 2:
                        continue
                    slope = -(5 * a + 6 * b1 + 3 * c1 + 9 * c2 - 15)
                    intercept = 4 * a + 5 * b1 + 2 * c1 + 8 * c2 - 12
                    fam = VertexFamily(a, b1, c1, c2, slope, intercept)
                    if any(fam.instantiate(f) for f in range(18, 59, 2)):
                        families.append(fam)
    families.sort(key=lambda fam: (fam.slope, fam.c1, -fam.a, -fam.b1))
    return families


# ---------------------------------------------------------------------------
# cyclic arrangements of the angles around a vertex
# ---------------------------------------------------------------------------

# An arrangement is a cyclic sequence of (angle name, kind of the edge that
# follows it), canonicalized to the lexicographically least rotation or
# reflection.
Arrangement = tuple[tuple[str, str], ...]

_MAX_EXACT_DEGREE = 24


def _rotations(seq: Arrangement):
    n = len(seq)
    for k in range(n):
        yield seq[k:] + seq[:k]


def _reflect(seq: Arrangement) -> Arrangement:
    n = len(seq)
    return tuple((seq[(n - j) % n][0], seq[(n - j - 1) % n][1]) for j in range(n))


def canonical_arrangement(seq: Arrangement) -> Arrangement:
    refl = _reflect(seq)
    return min(min(_rotations(seq)), min(_rotations(refl)))


def _edge_assignments(names: tuple[str, ...]):
    """All consistent kinds for the edges e_i between names[i], names[i+1]."""
    n = len(names)
    edges: list[Optional[str]] = [None] * n

    def needs(i: int) -> tuple[str, str]:
        return EDGE_CLASS[names[i]]

    def ok_local(i: int) -> bool:
        # check angle i once both incident edges are set
        before, after = edges[(i - 1) % n], edges[i]
        if before is None or after is None:
            return True
        return tuple(sorted((before, after))) == needs(i)

    def rec(i: int):
        if i == n:
            if all(ok_local(j) for j in range(n)):
                yield tuple(edges)
            return
        for kind in ("a", "b"):
            edges[i] = kind
            if ok_local(i):
                yield from rec(i + 1)
        edges[i] = None

    yield from rec(0)


def feasible_arrangements(sig: VertexSignature, sys: AngleSystem = None) -> frozenset[Arrangement]:
    """All canonical cyclic arrangements of the signature's angles in which
    consecutive angles agree on the kind of their shared edge.

    An empty set means the signature is combinatorially impossible even
    though its angle sum is correct.  Exact enumeration; degrees beyond
    a small bound are rejected (the scan pipeline decides those
    analytically instead).
    """
    d = sig.degree()
    if d < 3:
        return frozenset()
    if d > _MAX_EXACT_DEGREE and len([m for m in sig.counts().values() if m]) > 2:
        raise ValueError(f"degree {d} too large for exact arrangement enumeration")

    counts = {k: v for k, v in sig.counts().items() if v}
    found: set[Arrangement] = set()
    seq: list[str] = []

    def rec():
        if len(seq) == d:
            names = tuple(seq)
            for edges in _edge_assignments(names):
                found.add(canonical_arrangement(tuple(zip(names, edges))))
            return
        for name in sorted(counts):
            if counts[name] == 0:
                continue
            counts[name] -= 1
            seq.append(name)
            rec()
            seq.pop()
            counts[name] += 1

    rec()
    return frozenset(found)


def contains_adjacent(arr: Arrangement, x: str, y: str, edge: str) -> bool:
    """Does the arrangement contain angles x, y adjacent across an ``edge``-edge?"""
    n = len(arr)
    for i in range(n):
        name_i, edge_i = arr[i]
        name_j = arr[(i + 1) % n][0]
        if edge_i != edge:
            continue
        if (name_i == x and name_j == y) or (name_i == y and name_j == x):
            return True
    return False


def klem_pattern_present(arr: Arrangement, t: str = "theta2", mid: str = "phi1") -> bool:
    """Is there a contiguous run t mid^k t (k >= 0) with a-edges throughout?

    With the default roles this is the configuration excluded when phi2
    appears at most once at any vertex; for k = 0 it means two theta2
    sharing an a-edge.
    """
    n = len(arr)
    names = [x for x, _ in arr]
    edges = [e for _, e in arr]
    for i in range(n):
        if names[i] != t or edges[i] != "a":
            continue
        j = (i + 1) % n
        while names[j] == mid and j != i:
            j = (j + 1) % n
        if j != i and names[j] == t:
            return True
    return False


class KlemHypothesisError(ValueError):
    pass


def check_klem_hypothesis(
    sigs: Iterable[VertexSignature], sys: AngleSystem, f: int, mirrored: bool = False
) -> None:
    """The run exclusion requires distinct angles and that the chain angle's
    partner (phi2, or phi1 for the mirrored roles) appears at most once at
    any vertex of the enumeration."""
    values = sys.values_at(f)
    core = [values[n] for n in ("theta1", "theta2", "phi1", "phi2")]
    if len(set(core)) != 4:
        raise KlemHypothesisError(f"angles coincide at f={f}: {values}")
    for sig in sigs:
        m = sig.c1 if mirrored else sig.c2
        if m >= 2:
            which = "phi1" if mirrored else "phi2"
            raise KlemHypothesisError(f"{which} appears twice: {sig.pretty()} at f={f}")


def klem_filter(
    arrangements_by_sig: Mapping[VertexSignature, frozenset[Arrangement]],
    sys: AngleSystem,
    f: int,
    mirrored: bool = False,
) -> dict[VertexSignature, frozenset[Arrangement]]:
    """Drop every arrangement containing the excluded run; drop signatures
    left with no arrangement.  Checks the proposition's hypothesis first."""
    check_klem_hypothesis(arrangements_by_sig.keys(), sys, f, mirrored=mirrored)
    t, mid = ("theta1", "phi2") if mirrored else ("theta2", "phi1")
    out = {}
    for sig, arrs in arrangements_by_sig.items():
        kept = frozenset(a for a in arrs if not klem_pattern_present(a, t, mid))
        if kept:
            out[sig] = kept
    return out


# -- analytic decisions (sound for any degree; cross-checked in tests) --


def arrangement_exists(sig: VertexSignature) -> bool:
    if sig.degree() < 3:
        return False
    nab = sig.b1 + sig.b2
    if nab % 2 != 0:
        return False
    if nab == 0:
        # a single all-b cycle of alphas, or an all-a cycle of phis
        return (sig.a >= 3 and sig.c1 + sig.c2 == 0) or (
            sig.a == 0 and sig.c1 + sig.c2 >= 3
        )
    return True


def min_tt_chains(sig: VertexSignature, mirrored: bool = False) -> int:
    """Least possible number of a-edge chains joining two theta2 (or two
    theta1, mirrored) across a2-angles only, over all pairings."""
    b_focus, b_other = (sig.b1, sig.b2) if mirrored else (sig.b2, sig.b1)
    return max(0, (b_focus - b_other) // 2)


def klem_survivable(sig: VertexSignature, mirrored: bool = False) -> bool:
    """Can the signature be arranged without the excluded run?

    Every theta2 must either pair with a theta1 through its a-side chain
    or sit in a chain interrupted by a phi2; hence the count bound."""
    budget = sig.c1 if mirrored else sig.c2
    return min_tt_chains(sig, mirrored=mirrored) <= budget


# ---------------------------------------------------------------------------
# the admissible vertex combinations
# ---------------------------------------------------------------------------


def compute_avc(
    sys: AngleSystem,
    p: TilingParameters,
    *,
    use_klem: Optional[bool] = None,
    mirror_klem: bool = False,
    max_degree: Optional[int] = None,
) -> frozenset[VertexSignature]:
    """Admissible vertex combinations at tile count ``p.f``:
    angle-sum enumeration, then parity, arrangement feasibility and
    (when its hypothesis holds) the theta2-run exclusion.

    ``use_klem=None`` applies the run filter exactly when its hypothesis
    is satisfied; ``True`` demands it (error otherwise); ``False`` skips it.
    """
    sigs = enumerate_vertex_signatures(sys, p)
    if max_degree is not None:
        sigs = frozenset(s for s in sigs if s.degree() <= max_degree)

    klem_on = False
    if use_klem is None:
        try:
            check_klem_hypothesis(sigs, sys, p.f)
            klem_on = True
        except KlemHypothesisError:
            klem_on = False
    elif use_klem:
        check_klem_hypothesis(sigs, sys, p.f)
        klem_on = True

    out = []
    for sig in sigs:
        if not ab_parity_ok(sig):
            continue
        if not arrangement_exists(sig):
            continue
        if klem_on and not klem_survivable(sig):
            continue
        if mirror_klem and not klem_survivable(sig, mirrored=True):
            continue
        # decisions above are counting arguments; confirm exactly when cheap
        if sig.degree() <= 10:
            arrs = feasible_arrangements(sig)
            if not arrs:
                continue
            if klem_on:
                arrs = frozenset(a for a in arrs if not klem_pattern_present(a))
            if mirror_klem:
                arrs = frozenset(
                    a for a in arrs if not klem_pattern_present(a, "theta1", "phi2")
                )
            if not arrs:
                continue
        out.append(sig)
    return frozenset(out)
