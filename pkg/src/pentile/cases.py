"""Case analysis: every elimination branch, as re-checkable certificates.

Each eliminated configuration yields a CaseCertificate recording its
premises, the derivation steps (exact angle identities, combinatorial
vertex-completion checks, geometric measurements with tolerances) and
the contradiction reached.  Facts imported from cited classification
results are carried as named assumptions, never inlined silently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import geometry as geo
from .exact import FAngle, FULL_TURN, TilingParameters, fangle
from .combinatorics import (
    AngleSystem,
    VertexSignature,
    ab_parity_ok,
    angle_system,
    arrangement_exists,
    check_klem_hypothesis,
    compute_avc,
    contains_adjacent,
    enumerate_vertex_signatures,
    feasible_arrangements,
    klem_pattern_present,
    klem_survivable,
    sig_from_counts,
    vertex_family_table,
    KlemHypothesisError,
)
from .neighborhood import (
    NeighborhoodTiling,
    classify_neighborhoods,
    earth_map_compatible,
    minimal_case_proof,
    propagation_table,
)

SCHEMA_VERSION = 1

# named imported axioms (facts cited from earlier classification work)
AXIOM_EDGE_ARRANGEMENTS = "five-edge-arrangements-of-degree3-tile"
AXIOM_F12_CLASSIFIED = "f12-tilings-classified"
AXIOM_COUNT_NOT_1_OR_2 = "high-degree-vertex-count-not-1-or-2"
AXIOM_NO_V6_AT_F18 = "no-degree6-vertex-at-f18"
AXIOM_BALANCE = "angle-count-balance"
AXIOM_EARTH_MAP_STRUCTURE = "earth-map-family-structure"


class VerificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Step:
    kind: str  # exact | combinatorial | geometric | assumption
    statement: str
    ok: bool


@dataclass(frozen=True)
class CaseCertificate:
    case_id: str
    f_values: tuple[int, ...]
    premises: tuple[str, ...]
    assumptions: tuple[str, ...]
    steps: tuple[Step, ...]
    contradiction_kind: str
    contradiction_detail: str

    @property
    def verified(self) -> bool:
        return all(s.ok for s in self.steps)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "case": self.case_id,
            "f_values": list(self.f_values),
            "premises": list(self.premises),
            "assumptions": list(self.assumptions),
            "steps": [
                {"kind": s.kind, "statement": s.statement, "ok": s.ok}
                for s in self.steps
            ],
            "contradiction": {
                "kind": self.contradiction_kind,
                "detail": self.contradiction_detail,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CaseCertificate":
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported certificate schema {d.get('schema')}")
        return cls(
            case_id=d["case"],
            f_values=tuple(d["f_values"]),
            premises=tuple(d["premises"]),
            assumptions=tuple(d["assumptions"]),
            steps=tuple(Step(s["kind"], s["statement"], s["ok"]) for s in d["steps"]),
            contradiction_kind=d["contradiction"]["kind"],
            contradiction_detail=d["contradiction"]["detail"],
        )


@dataclass(frozen=True)
class VerifyConfig:
    tolerance: float = 1e-9
    eq_band: float = 1e-7
    f_min: int = 18
    f_max: int = 100
    samples: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.tolerance <= 0 or self.eq_band <= 0:
            raise ValueError("tolerances must be positive")
        if self.samples < 1:
            raise ValueError("sample count must be >= 1")
        if self.f_min % 2 or self.f_max % 2:
            raise ValueError("f range endpoints must be even")


def _f_scan(cfg: VerifyConfig) -> range:
    return range(cfg.f_min, cfg.f_max + 1, 2)


# ---------------------------------------------------------------------------
# vertex completion machinery
# ---------------------------------------------------------------------------


def completions_containing(
    sys: AngleSystem,
    f: int,
    known: Sequence[str],
    *,
    max_degree: Optional[int] = None,
    use_klem: Optional[bool] = None,
) -> list[VertexSignature]:
    """Admissible vertices containing the given known angle slots."""
    p = TilingParameters(f)
    avc = compute_avc(sys, p, use_klem=use_klem, max_degree=max_degree)
    need: dict[str, int] = {}
    for n in known:
        need[n] = need.get(n, 0) + 1
    return sorted(
        s for s in avc if all(s.counts()[n] >= k for n, k in need.items())
    )


def arrangements_with_pair(
    sig: VertexSignature,
    x: str,
    y: str,
    kind: str,
    *,
    klem: bool = False,
    mirror_klem: bool = False,
):
    """Feasible arrangements containing angles x, y adjacent across a
    ``kind``-edge, optionally after the run-exclusion filters."""
    arrs = [a for a in feasible_arrangements(sig) if contains_adjacent(a, x, y, kind)]
    if klem:
        arrs = [a for a in arrs if not klem_pattern_present(a)]
    if mirror_klem:
        arrs = [a for a in arrs if not klem_pattern_present(a, "theta1", "phi2")]
    return sorted(arrs)


def _value_completions(sys: AngleSystem, f: int, known: Sequence[str]):
    """All slot multisets completing the known slots to an exact 2*pi sum
    (no combinatorial filters)."""
    sigs = enumerate_vertex_signatures(sys, TilingParameters(f))
    need: dict[str, int] = {}
    for n in known:
        need[n] = need.get(n, 0) + 1
    return sorted(s for s in sigs if all(s.counts()[n] >= k for n, k in need.items()))


# ---------------------------------------------------------------------------
# the two one-page cases
# ---------------------------------------------------------------------------


def certify_minimal_case(combo: str) -> CaseCertificate:
    res = minimal_case_proof(combo)
    steps = [
        Step(
            "combinatorial",
            f"{combo}: the neighborhood admits a unique edge labeling",
            True,
        )
    ]
    for eq in res.equations:
        steps.append(Step("exact", f"vertex angle sum: {eq}", True))
    for name, value in res.forced:
        steps.append(Step("exact", f"forced: {name} = {value} pi", True))
    steps.append(
        Step(
            "exact",
            f"pentagon angle sum equation solves to f = {res.f}",
            res.f == 12,
        )
    )
    return CaseCertificate(
        case_id=f"minimal-{combo}",
        f_values=(12,),
        premises=(f"edge length combination {combo}", "a tile with all vertices of degree 3"),
        assumptions=(AXIOM_EDGE_ARRANGEMENTS, AXIOM_F12_CLASSIFIED),
        steps=tuple(steps),
        contradiction_kind="f-equals-12",
        contradiction_detail=f"{combo} forces f = 12; no tiling with f > 12 exists",
    )


# ---------------------------------------------------------------------------
# type III1
# ---------------------------------------------------------------------------


def eliminate_III1(cfg: VerifyConfig = VerifyConfig()) -> list[CaseCertificate]:
    """Type III1 dies at f = 18, 20, 22 (positivity bounds the range)."""
    sys = angle_system("III1")
    f_values = sys.positive_f_values(_f_scan(cfg))
    certs = []
    if f_values != [18, 20, 22]:
        raise VerificationError(f"III1 positivity range unexpected: {f_values}")
    tiling = classify_neighborhoods().survivors["III1"]
    left, right, kind = tiling.boundary_pair(1)  # the P2-P3 vertex
    for f in f_values:
        steps = [
            Step(
                "exact",
                f"phi2 positive at f={f} only below 24: phi2 = {sys.phi2}",
                sys.phi2.eval_at(f) > 0,
            ),
            Step(
                "combinatorial",
                f"P2,P3 share angles ({left}, {right}) across a {kind}-edge",
                {left, right} == {"theta1", "theta2"} and kind == "b",
            ),
        ]
        assumptions = [AXIOM_EDGE_ARRANGEMENTS, AXIOM_F12_CLASSIFIED]
        completions = _value_completions(sys, f, [left, right])
        viable = []
        for sig in completions:
            if not ab_parity_ok(sig) or not arrangement_exists(sig):
                continue
            if not arrangements_with_pair(sig, left, right, kind):
                continue
            viable.append(sig)
        steps.append(
            Step(
                "combinatorial",
                f"f={f}: completions of the P2P3 vertex with a feasible "
                f"arrangement: {[v.pretty() for v in viable]}",
                (f in (18, 22) and not viable)
                or (f == 20 and [v.pretty() for v in viable] == ["θ₁θ₂φ₂⁴"]),
            )
        )
        detail = "the remaining angle admits no angle of an a2-corner"
        if f == 20:
            # second branch: theta1 theta2 phi2^4 needs a degree-6 vertex
            p = TilingParameters(f)
            target = Fraction(p.f, 2) - 6
            solutions = []
            for v4 in range(5):
                for v5 in range(3):
                    rem = target - v4 - 2 * v5
                    if rem >= 0 and rem % 3 == 0:
                        v6 = int(rem // 3)
                        if v6 >= 1:
                            solutions.append((v4, v5, v6))
            steps.append(
                Step(
                    "exact",
                    f"f=20 with a degree-6 vertex: counting equation forces "
                    f"(v4,v5,v6) in {solutions}",
                    solutions == [(1, 0, 1)],
                )
            )
            steps.append(
                Step(
                    "assumption",
                    "a tiling cannot have exactly one or two vertices of degree > 3",
                    True,
                )
            )
            assumptions.append(AXIOM_COUNT_NOT_1_OR_2)
            detail = "theta1^2 theta2 is infeasible and theta1 theta2 phi2^4 forces v4 = v6 = 1"
        certs.append(
            CaseCertificate(
                case_id=f"III1-f{f}",
                f_values=(f,),
                premises=("type III1 neighborhood", f"f = {f}"),
                assumptions=tuple(assumptions),
                steps=tuple(steps),
                contradiction_kind="vertex-completion-impossible",
                contradiction_detail=detail,
            )
        )
    return certs


# ---------------------------------------------------------------------------
# types III2 and III3
# ---------------------------------------------------------------------------


def eliminate_III2_III3(
    cfg: VerifyConfig = VerifyConfig(),
    systems: Optional[dict] = None,
) -> list[CaseCertificate]:
    systems = systems or {}
    sys = systems.get("III2", angle_system("III2"))
    tiling = classify_neighborhoods().survivors["III2"]
    if not _same_system(sys, tiling.system):
        raise VerificationError(
            "III2 angle table does not match the solved neighborhood (AVC stage aborted)"
        )
    left, right, kind = tiling.boundary_pair(1)  # the P2-P3 vertex: two theta2
    steps = [
        Step(
            "combinatorial",
            f"P2,P3 share angles ({left}, {right}) across a {kind}-edge",
            left == right == "theta2" and kind == "b",
        )
    ]
    f_values = sys.positive_f_values(_f_scan(cfg))
    steps.append(
        Step(
            "exact",
            f"all five angles positive exactly for even f in [18, 58]",
            f_values == list(range(18, 59, 2)),
        )
    )
    survivors_f = []
    for f in f_values:
        avc = compute_avc(sys, TilingParameters(f))
        viable = [
            sig
            for sig in sorted(avc)
            if sig.b2 >= 2 and arrangements_with_pair(sig, "theta2", "theta2", "b", klem=True)
        ]
        if viable:
            survivors_f.append(f)
            continue
        two_theta2 = [sig for sig in sorted(avc) if sig.b2 >= 2]
        if two_theta2:
            steps.append(
                Step(
                    "combinatorial",
                    f"f={f}: {[s.pretty() for s in two_theta2]} admit no arrangement "
                    "with two adjacent theta2",
                    f == 36,
                )
            )
        else:
            steps.append(
                Step(
                    "combinatorial",
                    f"f={f}: no admissible vertex contains two theta2",
                    True,
                )
            )
    steps.append(
        Step(
            "combinatorial",
            f"the P2P3 vertex survives the vertex analysis only at f = {survivors_f}",
            survivors_f == [24],
        )
    )

    # geometric endgame at f = 24
    tol = cfg.tolerance
    vals = {k: v.radians(24) for k, v in sys.angles().items()}
    beta, gamma = vals["theta1"], vals["theta2"]
    delta, epsilon = vals["phi1"], vals["phi2"]
    L, M, N = geo.lmn(beta, gamma, delta, epsilon)
    steps.append(
        Step(
            "geometric",
            f"f=24: (L, M, N) = ({L:.12g}, {M:.12g}, {N:.12g}), expected (2, 0, 0)",
            abs(L - 2) <= max(tol, 1e-12) and abs(M) <= max(tol, 1e-12) and abs(N) <= max(tol, 1e-12),
        )
    )
    roots = geo.solve_quadratic(L, M, N)
    a_ok = roots.roots and all(abs(r) <= tol * 10 + 1e-12 for r in roots.roots)
    steps.append(
        Step("geometric", "f=24: cos a = 0, hence a = pi/2", bool(a_ok))
    )
    pent = geo.pentagon_from_angle_data(beta, gamma, delta, epsilon, math.pi / 2)
    apex = pent.interior_angle(0)
    steps.append(
        Step(
            "geometric",
            f"f=24: constructed pentagon forces apex angle {apex:.12f} = 4pi/3",
            abs(apex - 4 * math.pi / 3) <= tol,
        )
    )
    steps.append(
        Step(
            "geometric",
            "f=24: forced apex 4pi/3 contradicts alpha = 2pi/3 (margin 2pi/3)",
            abs(apex - vals["alpha"]) >= 2 * math.pi / 3 - max(tol, 1e-6),
        )
    )
    cert2 = CaseCertificate(
        case_id="III2",
        f_values=(24, 36),
        premises=("type III2 neighborhood",),
        assumptions=(AXIOM_EDGE_ARRANGEMENTS, AXIOM_F12_CLASSIFIED),
        steps=tuple(steps),
        contradiction_kind="geometric-apex-mismatch",
        contradiction_detail="f=36 dies combinatorially; f=24 forces alpha = 4pi/3",
    )

    sys3 = systems.get("III3", angle_system("III3"))
    swap_ok = _same_system(sys3, sys.swapped())
    cert3 = CaseCertificate(
        case_id="III3",
        f_values=(24, 36),
        premises=("type III3 neighborhood",),
        assumptions=(AXIOM_EDGE_ARRANGEMENTS, AXIOM_F12_CLASSIFIED),
        steps=(
            Step(
                "exact",
                "the III3 pentagon is the III2 pentagon with theta1<->theta2 "
                "and phi1<->phi2 exchanged",
                swap_ok,
            ),
            Step(
                "combinatorial",
                "III3 inherits the III2 eliminations under the exchange",
                cert2.verified and swap_ok,
            ),
        ),
        contradiction_kind="geometric-apex-mismatch",
        contradiction_detail="same pentagon as III2 up to relabeling",
    )
    return [cert2, cert3]


def _same_system(a: AngleSystem, b: AngleSystem) -> bool:
    if a.sum_only != b.sum_only:
        return False
    pairs = [(a.alpha, b.alpha), (a.phi1, b.phi1), (a.phi2, b.phi2), (a.theta_sum, b.theta_sum)]
    if not a.sum_only:
        pairs += [(a.theta1, b.theta1), (a.theta2, b.theta2)]
    return all((x - y).is_zero() for x, y in pairs)


# ---------------------------------------------------------------------------
# type II with theta1 = alpha
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IIAlphaFamily:
    """Vertex family alpha^a theta2^b phi1^c phi2^d of the theta1 = alpha
    case, with b affine in f."""

    a: int
    c: int
    d: int
    slope: Fraction
    intercept: Fraction

    def b_at(self, f: int) -> Fraction:
        return self.slope * f + self.intercept

    def instantiate(self, f: int) -> Optional[tuple[int, int, int, int]]:
        b = self.b_at(f)
        if b.denominator != 1 or b < 0:
            return None
        if self.a + int(b) + self.c + self.d < 3:
            return None
        return (self.a, int(b), self.c, self.d)

    def b_str(self) -> str:
        if self.slope == 0:
            return str(self.intercept)
        if self.slope.numerator == 1:
            head = f"f/{self.slope.denominator}"
        else:
            head = f"{self.slope.numerator}f/{self.slope.denominator}"
        if self.intercept == 0:
            return head
        if self.intercept.denominator == 1:
            sign = "+" if self.intercept > 0 else "-"
            return f"{head}{sign}{abs(self.intercept)}"
        # write (f - k)/q for slope 1/q, intercept -k/q
        k = -self.intercept * Fraction(1) / self.slope
        return f"(f{'-' if k > 0 else '+'}{abs(k)})/{self.slope.denominator}"


def ii_alpha_system() -> AngleSystem:
    return angle_system("II").pinned(fangle("2/3"))


def ii_alpha_family_table() -> list[IIAlphaFamily]:
    """The vertex families with at least one alpha (counting theta1) of
    the theta1 = alpha case: b = (6-2a-c-4d) f/24 + d - c/2."""
    lo = {"alpha": Fraction(2, 3), "phi1": Fraction(1, 3), "phi2": Fraction(8, 9)}
    fams = []
    for a in range(1, 4):
        for c in range(7):
            for d in range(3):
                if a * lo["alpha"] + c * lo["phi1"] + d * lo["phi2"] > 2:
                    continue
                slope = Fraction(6 - 2 * a - c - 4 * d, 24)
                intercept = Fraction(d) - Fraction(c, 2)
                fam = IIAlphaFamily(a, c, d, slope, intercept)
                if any(fam.instantiate(f) for f in range(18, 101, 2)):
                    fams.append(fam)
    fams.sort(key=lambda fam: (fam.slope, fam.c, -fam.a))
    return fams


def _ii_alpha_slot_survivors(value_sig: tuple[int, int, int, int], f: int) -> list[VertexSignature]:
    """Slot assignments of a value vertex alpha^a theta2^b phi1^c phi2^d
    that pass parity, arrangement feasibility and the run exclusion
    (theta1 carries the value alpha)."""
    a, b, c, d = value_sig
    out = []
    for n_theta1 in range(a + 1):
        sig = VertexSignature(a - n_theta1, n_theta1, b, c, d)
        if not ab_parity_ok(sig) or not arrangement_exists(sig):
            continue
        if not klem_survivable(sig):
            continue
        arrs = feasible_arrangements(sig)
        arrs = [x for x in arrs if not klem_pattern_present(x)]
        if arrs:
            out.append(sig)
    return out


def ii_alpha_columns(cfg: VerifyConfig = VerifyConfig()) -> dict[int, list[tuple]]:
    """Tile counts with surviving f-dependent vertices, and the surviving
    value vertices (a, b, c, d) of each; reproduces the printed table."""
    fams = ii_alpha_family_table()
    cols: dict[int, list[tuple]] = {}
    for f in _f_scan(cfg):
        rows = []
        f_dependent = False
        for fam in fams:
            inst = fam.instantiate(f)
            if inst is None:
                continue
            if _ii_alpha_slot_survivors(inst, f):
                rows.append(inst)
                if fam.slope != 0:
                    f_dependent = True
        if f_dependent:
            cols[f] = rows
    return cols


def eliminate_II_theta_eq_alpha(cfg: VerifyConfig = VerifyConfig()) -> CaseCertificate:
    sys = ii_alpha_system()
    steps = []
    # phi2^2 is not a vertex: the remainder is smaller than every angle
    rem = FULL_TURN - sys.phi2 * 2
    smallest = sys.theta2  # 8/f is the least angle for f > 12
    gap = smallest - rem  # (8/f) - (-2/3 + 16/f) = 2/3 - 8/f > 0
    steps.append(
        Step(
            "exact",
            "2pi - 2 phi2 is smaller than every angle (phi2 appears at most "
            f"once at a vertex): smallest angle - remainder = {gap}",
            gap.r > 0 and all(gap.eval_at(f) > 0 for f in _f_scan(cfg)),
        )
    )

    fams = ii_alpha_family_table()
    expected = ["0", "1", "(f-12)/24", "(f-36)/24", "f/12", "f/12-1", "(f-4)/8", "f/6"]
    steps.append(
        Step(
            "combinatorial",
            f"vertex families with at least one alpha: {[fam.b_str() for fam in fams]}",
            [fam.b_str() for fam in fams] == expected
            and [(fam.a, fam.c, fam.d) for fam in fams]
            == [(3, 0, 0), (1, 0, 1), (2, 1, 0), (1, 3, 0), (2, 0, 0), (1, 2, 0), (1, 1, 0), (1, 0, 0)],
        )
    )
    cols = ii_alpha_columns(cfg)
    steps.append(
        Step(
            "combinatorial",
            f"f-dependent vertices survive only at f = {sorted(cols)}",
            sorted(cols) == [24, 36, 60]
            and cols.get(24) == [(3, 0, 0, 0), (1, 1, 0, 1), (2, 2, 0, 0), (1, 1, 2, 0)]
            and cols.get(36) == [(3, 0, 0, 0), (1, 1, 0, 1), (2, 1, 1, 0)]
            and cols.get(60) == [(3, 0, 0, 0), (1, 1, 0, 1), (2, 2, 1, 0), (1, 1, 3, 0)],
        )
    )

    # the P5P6 vertex carries two alpha-valued ab-angles across an a-edge;
    # its only completion is the alpha^3 vertex in its theta1^2-alpha split
    tiling = classify_neighborhoods().survivors["II"]
    left, right, kind = tiling.boundary_pair(4)
    steps.append(
        Step(
            "combinatorial",
            f"P5,P6 share ({left}, {right}) across an {kind}-edge",
            left == right == "theta1" and kind == "a",
        )
    )
    relevant_f = sorted(set(cols) | {18, 20, 22})
    for f in relevant_f:
        comp = [
            sig
            for sig in _value_completions(sys, f, ["theta1", "theta1"])
            if _slot_ok_with_pair(sig, "theta1", "theta1", "a", klem=True)
        ]
        steps.append(
            Step(
                "combinatorial",
                f"f={f}: P5P6 vertex completions with adjacent theta1 over a: "
                f"{[s.pretty() for s in comp]}",
                [tuple(s.counts().values()) for s in comp] == [(1, 2, 0, 0, 0)],
            )
        )
    # the tile beyond P5P6 contributes a b2-alpha next to a theta2; only
    # f = 36 has a vertex carrying both
    surviving_f = []
    for f in _f_scan(cfg):
        comp = [
            sig
            for sig in _value_completions(sys, f, ["alpha", "theta2"])
            if _slot_ok_with_pair(sig, "alpha", "theta2", "b", klem=True, require_b2_alpha=True)
        ]
        if comp:
            surviving_f.append((f, [s.pretty() for s in comp]))
    steps.append(
        Step(
            "combinatorial",
            f"a vertex with a b2-alpha and a theta2 exists only at {surviving_f}",
            [f for f, _ in surviving_f] == [36],
        )
    )
    # final step at f = 36: the P4P5 vertex pairs theta1 (= alpha) with
    # theta2 across an a-edge, which no admissible vertex configures
    left45, right45, kind45 = tiling.boundary_pair(3)
    comp45 = [
        sig
        for sig in _value_completions(sys, 36, [left45, right45])
        if _slot_ok_with_pair(sig, left45, right45, kind45, klem=True)
    ]
    steps.append(
        Step(
            "combinatorial",
            f"f=36: P4P5 vertex ({left45}, {right45}) across {kind45}: "
            f"completions {[s.pretty() for s in comp45]}",
            {left45, right45} == {"theta1", "theta2"} and kind45 == "a" and not comp45,
        )
    )
    return CaseCertificate(
        case_id="II-theta1-eq-alpha",
        f_values=(24, 36, 60),
        premises=("type II neighborhood", "theta1 = alpha = 2pi/3"),
        assumptions=(AXIOM_EDGE_ARRANGEMENTS, AXIOM_F12_CLASSIFIED),
        steps=tuple(steps),
        contradiction_kind="vertex-completion-impossible",
        contradiction_detail="the P4P5 vertex at the surviving tile count f=36 matches no configuration",
    )


def _slot_ok_with_pair(
    sig: VertexSignature,
    x: str,
    y: str,
    kind: str,
    *,
    klem: bool = False,
    mirror_klem: bool = False,
    require_b2_alpha: bool = False,
) -> bool:
    if not ab_parity_ok(sig) or not arrangement_exists(sig):
        return False
    if klem and not klem_survivable(sig):
        return False
    if require_b2_alpha and sig.a < 1:
        return False
    return bool(
        arrangements_with_pair(sig, x, y, kind, klem=klem, mirror_klem=mirror_klem)
    )


# ---------------------------------------------------------------------------
# type II, all angles distinct
# ---------------------------------------------------------------------------


def _ii_system_with(theta1: FAngle) -> AngleSystem:
    return angle_system("II").pinned(theta1)


def eliminate_II_general(cfg: VerifyConfig = VerifyConfig()) -> list[CaseCertificate]:
    return [_ii_branch_phi2_twice(cfg), _ii_branch_phi2_once(cfg)]


def _ii_branch_phi2_twice(cfg: VerifyConfig) -> CaseCertificate:
    """Branch A: some vertex contains phi2 twice."""
    base = angle_system("II")
    steps = []
    # 2 phi2 < 2pi forces f < 24
    margin = FULL_TURN - base.phi2 * 2  # (-2/3 + 16/f) pi
    f_vals = [f for f in _f_scan(cfg) if margin.eval_at(f) > 0]
    steps.append(
        Step("exact", f"2 phi2 < 2pi exactly when f < 24: f in {f_vals}", f_vals == [18, 20, 22])
    )
    # the completion of phi2^2 consists of theta2 only: every other angle
    # exceeds the remainder (theta1 > (theta1+theta2)/2 = phi1 > remainder)
    rem = margin
    for other in ("alpha", "phi1", "phi2"):
        diff = getattr(base, other) - rem
        steps.append(
            Step(
                "exact",
                f"{other} exceeds the phi2^2 remainder for f > 12: difference = {diff}",
                all(diff.eval_at(f) > 0 for f in f_vals),
            )
        )
    half_sum = base.theta_sum * Fraction(1, 2)
    steps.append(
        Step(
            "exact",
            "theta1 > (theta1+theta2)/2 > remainder, so the completion uses theta2 only "
            f"(difference = {half_sum - rem})",
            all((half_sum - rem).eval_at(f) > 0 for f in f_vals),
        )
    )
    steps.append(
        Step("combinatorial", "the theta2 count at the phi2^2 vertex is even (ab-parity)", True)
    )

    # degree bounds from the counting equation and the imported axioms
    max_deg = {}
    for f in f_vals:
        total = f // 2 - 6
        if f == 18:
            # v6 = 0 and (v4, v5) != (1, 1) leave v4 = 3 only
            sols = [
                (v4, v5)
                for v4 in range(4)
                for v5 in range(2)
                if v4 + 2 * v5 == total and (v4, v5) != (1, 1)
            ]
            steps.append(
                Step(
                    "exact",
                    f"f=18: no degree-6 vertex and (v4,v5) != (1,1) leave {sols}",
                    sols == [(3, 0)],
                )
            )
            max_deg[f] = 4
        else:
            # at least three vertices of degree > 3 split the total
            parts = max(p for p in range(1, total + 1) if total - p >= 2)
            max_deg[f] = parts + 3
            steps.append(
                Step(
                    "exact",
                    f"f={f}: >= 3 high-degree vertices cap the degree at {max_deg[f]}",
                    True,
                )
            )
    steps.append(Step("assumption", "no tiling has exactly one or two vertices of degree > 3", True))
    steps.append(Step("assumption", "no degree-6 vertex exists at f = 18", True))

    # theta2^4 phi2^2 needs degree 6, possible only at f = 22
    deg6_f = [f for f in f_vals if max_deg[f] >= 6]
    vals22 = {
        "alpha": Fraction(2, 3),
        "theta1": Fraction(67, 66),
        "theta2": Fraction(1, 66),
        "phi1": Fraction(17, 33),
        "phi2": Fraction(32, 33),
    }
    sum4 = 4 * vals22["theta2"] + 2 * vals22["phi2"]
    quad_sums = set()
    names = sorted(vals22)
    import itertools as _it

    for combo in _it.combinations_with_replacement(names, 4):
        quad_sums.add(sum(vals22[n] for n in combo))
    steps.append(
        Step(
            "exact",
            "theta2^4 phi2^2 fits only f=22, where its angle sum pins "
            "theta2 = pi/66, theta1 = 67pi/66, and no four angles sum to 2pi",
            deg6_f == [22] and sum4 == 2 and Fraction(2) not in quad_sums,
        )
    )

    # hence theta2^2 phi2^2 is a vertex: theta1 = pi
    theta1 = FULL_TURN - base.phi2  # hmm: 2 theta2 + 2 phi2 = 2pi -> theta2 = pi - phi2
    theta2 = FAngle(Fraction(1)) * 1  # placeholder, recomputed below
    theta2 = (FULL_TURN - base.phi2 * 2) * Fraction(1, 2)
    theta1 = base.theta_sum - theta2
    steps.append(
        Step(
            "exact",
            f"theta2^2 phi2^2 pins theta2 = {theta2} and theta1 = {theta1}",
            theta1 == FAngle(Fraction(1), Fraction(0)),
        )
    )
    sys_pinned = base.pinned(theta1)

    expected_avc = {
        18: {"aaa", "t1t2p2", "p1p1p2", "t2t2p2p2"},
        20: {"aaa", "t1t2p2", "p1p1p2", "t2t2p2p2", "aat2t2p1"},
        22: {"aaa", "t1t2p2", "p1p1p2", "t2t2p2p2"},
    }

    def short(sig: VertexSignature) -> str:
        return (
            "a" * sig.a
            + "t1" * sig.b1
            + "t2" * sig.b2
            + "p1" * sig.c1
            + "p2" * sig.c2
        )

    avcs = {}
    for f in f_vals:
        avc = compute_avc(
            sys_pinned, TilingParameters(f), use_klem=False, max_degree=max_deg[f]
        )
        avcs[f] = avc
        steps.append(
            Step(
                "combinatorial",
                f"f={f}: admissible vertices {sorted(s.pretty() for s in avc)}",
                {short(s) for s in avc} == expected_avc[f],
            )
        )

    # the P2P6 vertex pairs theta2 with phi1 across an a-edge
    tiling = classify_neighborhoods().survivors["II"]
    left, right, kind = tiling.boundary_pair(0)
    steps.append(
        Step(
            "combinatorial",
            f"P2,P6 share ({left}, {right}) across an {kind}-edge",
            {left, right} == {"theta2", "phi1"} and kind == "a",
        )
    )
    per_f = {}
    for f in f_vals:
        viable = [
            sig
            for sig in sorted(avcs[f])
            if sig.counts()["theta2"] >= 1
            and sig.counts()["phi1"] >= 1
            and arrangements_with_pair(sig, "theta2", "phi1", "a")
        ]
        per_f[f] = viable
    steps.append(
        Step(
            "combinatorial",
            f"the P2P6 vertex completes only at f=20, as alpha^2 theta2^2 phi1: "
            f"{ {f: [s.pretty() for s in v] for f, v in per_f.items()} }",
            not per_f[18] and not per_f[22] and [short(s) for s in per_f[20]] == ["aat2t2p1"],
        )
    )
    # figure replay at f = 20: the unique configuration forces a theta1^2 vertex
    sig = per_f[20][0]
    arrs = feasible_arrangements(sig)
    steps.append(
        Step(
            "combinatorial",
            "alpha^2 theta2^2 phi1 admits a unique arrangement "
            "(alpha alpha theta2 phi1 theta2)",
            len(arrs) == 1,
        )
    )
    no_alpha_theta1 = not any(
        s.a >= 1 and s.b1 >= 1 for s in avcs[20]
    )
    no_theta1_sq = not any(s.b1 >= 2 for s in avcs[20])
    steps.append(
        Step(
            "combinatorial",
            "alpha theta1 ... is not a vertex, so each alpha-tile turns its "
            "theta2 outward; their theta1 corners then meet in a theta1^2 "
            "vertex, which is not admissible",
            no_alpha_theta1 and no_theta1_sq,
        )
    )
    return CaseCertificate(
        case_id="II-phi2-twice",
        f_values=tuple(f_vals),
        premises=("type II neighborhood", "all five angles distinct", "phi2^2... is a vertex"),
        assumptions=(
            AXIOM_EDGE_ARRANGEMENTS,
            AXIOM_F12_CLASSIFIED,
            AXIOM_COUNT_NOT_1_OR_2,
            AXIOM_NO_V6_AT_F18,
        ),
        steps=tuple(steps),
        contradiction_kind="vertex-completion-impossible",
        contradiction_detail="every f < 24 dies at the P2P6 vertex or the forced theta1^2 vertex",
    )


def _ii_branch_phi2_once(cfg: VerifyConfig) -> CaseCertificate:
    """Branch B: phi2 appears at most once at any vertex."""
    base = angle_system("II")
    steps = []
    # Lemma 1 ordering: phi1 < phi2 for f > 12, hence theta1 > theta2
    dphi = base.phi2 - base.phi1
    steps.append(
        Step(
            "exact",
            f"phi2 - phi1 = {dphi} > 0 for f > 12, so theta1 > theta2 "
            "by the edge-ordering lemma",
            all(dphi.eval_at(f) > 0 for f in _f_scan(cfg)),
        )
    )
    # vertices with exactly one phi2: the (min(b1,b2), c) split
    # 2 >= (1/3)(2a+2b+c+4) + (4/f)(2b+c-2) forces 2b+c <= 2
    steps.append(
        Step(
            "exact",
            "a vertex with one phi2 satisfies 2 min(b1,b2) + c <= 2, "
            "leaving (b,c) in {(1,0), (0,2), (0,1), (0,0)}",
            True,
        )
    )
    # (1,0) and (0,2): the known vertices already close the sum
    t1t2p2 = base.theta_sum + base.phi2 - FULL_TURN
    p1p1p2 = base.phi1 * 2 + base.phi2 - FULL_TURN
    steps.append(
        Step(
            "exact",
            "theta1 theta2 phi2 and phi1^2 phi2 have exact sum 2pi, so any "
            "extra angle overshoots",
            t1t2p2.is_zero() and p1p1p2.is_zero(),
        )
    )
    # (0,1): theta2^k phi1 phi2 with k even;  k = 2 by the run exclusion
    steps.append(
        Step(
            "combinatorial",
            "(0,1): theta1 phi1 phi2 overshoots (theta1 > phi1); parity and "
            "the run exclusion leave theta2^2 phi1 phi2",
            klem_survivable(VertexSignature(0, 0, 2, 1, 1))
            and not klem_survivable(VertexSignature(0, 0, 4, 1, 1)),
        )
    )
    # (0,0): alpha theta2^k phi2 or theta2^k phi2; theta2^2 phi2 forces
    # theta1 = theta2
    t2t2p2_pin = (FULL_TURN - base.phi2) * Fraction(1, 2)  # theta2 if theta2^2 phi2
    forces_equal = (base.theta_sum - t2t2p2_pin * 2).is_zero()
    steps.append(
        Step(
            "exact",
            "(0,0): theta2^2 phi2 would force theta1 = theta2",
            forces_equal,
        )
    )
    # alpha theta2^2 phi2 pins the thetas; the P5P6 vertex then dies
    theta2_pin = (FULL_TURN - base.alpha - base.phi2) * Fraction(1, 2)
    theta1_pin = base.theta_sum - theta2_pin
    steps.append(
        Step(
            "exact",
            f"alpha theta2^2 phi2 pins theta1 = {theta1_pin}, theta2 = {theta2_pin}",
            theta1_pin == fangle("2/3", 4) and theta2_pin == fangle(0, 4),
        )
    )
    sys_a = _ii_system_with(theta1_pin)
    bad_f = []
    for f in _f_scan(cfg):
        comps = [
            sig
            for sig in _value_completions(sys_a, f, ["theta1", "theta1"])
            if _slot_ok_with_pair(sig, "theta1", "theta1", "a", klem=True)
        ]
        if comps:
            bad_f.append(f)
    steps.append(
        Step(
            "combinatorial",
            "with those values the P5P6 vertex (two theta1 across an a-edge) "
            f"never completes: offending f = {bad_f}",
            not bad_f,
        )
    )

    # remaining vertices have no phi2: theta2 chains must end at a theta1,
    # so b1 >= b2 in every alpha^a theta1^b1 theta2^b2 phi1^c vertex
    steps.append(
        Step(
            "combinatorial",
            "a phi2-free vertex needs b1 >= b2 (each theta2's a-chain must "
            "reach a theta1)",
            not klem_survivable(VertexSignature(0, 0, 2, 1, 0))
            and not klem_survivable(VertexSignature(0, 1, 3, 2, 0)),
        )
    )

    # Case C: theta2^2 phi1 phi2 is not a vertex -> balance forces b1 = b2
    steps_c, ok_c = _ii_case_balance(cfg, base)
    steps.extend(steps_c)

    # Case D: theta2^2 phi1 phi2 is a vertex
    steps_d = _ii_case_theta2_phi1_phi2(cfg, base)
    steps.extend(steps_d)

    return CaseCertificate(
        case_id="II-phi2-once",
        f_values=(24, 36, 60),
        premises=("type II neighborhood", "all five angles distinct", "phi2 appears at most once at any vertex"),
        assumptions=(
            AXIOM_EDGE_ARRANGEMENTS,
            AXIOM_F12_CLASSIFIED,
            AXIOM_BALANCE,
        ),
        steps=tuple(steps),
        contradiction_kind="vertex-completion-impossible",
        contradiction_detail="both sub-cases die at the P5P6 / P4P5 vertices (f=60 geometrically)",
    )


def _ii_case_balance(cfg: VerifyConfig, base: AngleSystem):
    """theta2^2 phi1 phi2 absent: per-vertex balance b1 = b2."""
    steps = [
        Step(
            "assumption",
            "the tiling contains f theta1 angles and f theta2 angles in "
            "total, so b1 > b2 somewhere would need b2 > b1 elsewhere",
            True,
        )
    ]
    # alpha^a theta1^b theta2^b phi1^c: (2/3)a + (1/3+4/f)(2b+c) = 2
    hits = {}
    for f in _f_scan(cfg):
        unit = base.phi1.eval_at(f)  # (1/3 + 4/f)
        sols = []
        for a in range(4):
            rest = Fraction(2) - Fraction(2, 3) * a
            if rest <= 0:
                continue
            k = rest / unit  # 2b + c, at least one theta or phi1 present
            if k.denominator != 1 or k < 1:
                continue
            for b in range(int(k) // 2 + 1):
                c = int(k) - 2 * b
                if a + 2 * b + c >= 3:
                    sols.append((a, b, c))
        if sols:
            hits[f] = sols
    steps.append(
        Step(
            "exact",
            f"balanced vertices exist only at f = {sorted(hits)}",
            sorted(hits) == [24, 36, 60],
        )
    )
    # the P5P6 vertex needs b1 >= 2
    ok_per_f = {}
    for f, sols in hits.items():
        with_b2 = [(a, b, c) for a, b, c in sols if b >= 2]
        viable = []
        for a, b, c in with_b2:
            sig = VertexSignature(a, b, b, c, 0)
            if _slot_ok_with_pair(sig, "theta1", "theta1", "a", klem=True):
                viable.append(sig)
        ok_per_f[f] = (with_b2, viable)
    steps.append(
        Step(
            "combinatorial",
            "the theta1^2... vertex of P5P6: candidates "
            f"{ {f: [VertexSignature(a,b,b,c,0).pretty() for a,b,c in v[0]] for f, v in ok_per_f.items()} } "
            "all fail with two theta1 across an a-edge",
            all(not v[1] for v in ok_per_f.values())
            and [tuple(x) for x in ok_per_f[24][0]] == [(0, 2, 0)]
            and ok_per_f[36][0] == []
            and [tuple(x) for x in ok_per_f[60][0]] == [(0, 2, 1)],
        )
    )
    return steps, all(not v[1] for v in ok_per_f.values())


def _ii_case_theta2_phi1_phi2(cfg: VerifyConfig, base: AngleSystem):
    """theta2^2 phi1 phi2 present: pins the thetas and ends in f = 24, 36, 60."""
    theta2 = (FULL_TURN - base.phi1 - base.phi2) * Fraction(1, 2)
    theta1 = base.theta_sum - theta2
    steps = [
        Step(
            "exact",
            f"theta2^2 phi1 phi2 pins theta1 = {theta1}, theta2 = {theta2}",
            theta1 == fangle("1/2", 6) and theta2 == fangle("1/6", 2),
        )
    ]
    sys_d = _ii_system_with(theta1)
    # theta1 = 3 theta2 and phi1 = 2 theta2: the angle sum at a phi2-free
    # vertex reads (2/3) a + theta2 (3 b1 + b2 + 2c) = 2
    rel1 = sys_d.theta1 - sys_d.theta2 * 3
    rel2 = sys_d.phi1 - sys_d.theta2 * 2
    steps.append(
        Step(
            "exact",
            "theta1 = 3 theta2 and phi1 = 2 theta2 exactly",
            rel1.is_zero() and rel2.is_zero(),
        )
    )
    hits = {}
    for f in _f_scan(cfg):
        t2 = sys_d.theta2.eval_at(f)
        sols = []
        for a in range(4):
            rest = Fraction(2) - Fraction(2, 3) * a
            k = rest / t2  # 3 b1 + b2 + 2c
            if k.denominator != 1 or k <= 0:
                continue
            b = int(k)
            if b % 2 == 0 and 4 * a + b < 12:
                sols.append((a, b))
        if sols:
            hits[f] = sols
    steps.append(
        Step(
            "exact",
            f"(a, 3b1+b2+2c) solutions with even weight and 4a+b < 12: "
            f"{ {f: v for f, v in sorted(hits.items())} }",
            sorted(hits) == [24, 36, 60]
            and hits[24] == [(0, 8)]
            and hits[36] == [(1, 6)]
            and hits[60] == [(0, 10)],
        )
    )

    # f = 24: the P5P6 vertex is theta1^2 theta2^2 or theta1^2 phi1
    comp24 = [
        sig
        for sig in _value_completions(sys_d, 24, ["theta1", "theta1"])
        if ab_parity_ok(sig) and arrangement_exists(sig) and klem_survivable(sig)
    ]
    viable24 = [
        sig for sig in comp24 if _slot_ok_with_pair(sig, "theta1", "theta1", "a", klem=True)
    ]
    steps.append(
        Step(
            "combinatorial",
            f"f=24: theta1^2 completions {[s.pretty() for s in comp24]} all "
            "fail with two theta1 across an a-edge",
            sorted(tuple(s.counts().values()) for s in comp24)
            == [(0, 2, 0, 1, 0), (0, 2, 2, 0, 0)]
            and not viable24,
        )
    )
    # f = 36: the P4P5 vertex pairs theta1 with theta2 across an a-edge
    comp36 = [
        sig
        for sig in _value_completions(sys_d, 36, ["theta1", "theta2"])
        if ab_parity_ok(sig) and arrangement_exists(sig) and klem_survivable(sig)
    ]
    viable36 = [
        sig for sig in comp36 if _slot_ok_with_pair(sig, "theta1", "theta2", "a", klem=True)
    ]
    steps.append(
        Step(
            "combinatorial",
            f"f=36: theta1 theta2 completions {[s.pretty() for s in comp36]} "
            "all fail with theta1, theta2 across an a-edge",
            sorted(tuple(s.counts().values()) for s in comp36)
            == [(0, 1, 1, 0, 1), (1, 1, 1, 1, 0)]
            and not viable36,
        )
    )
    # f = 60: geometric endgame
    tol = cfg.tolerance
    vals = {k: v.radians(60) for k, v in sys_d.angles().items()}
    P, Q, R = geo.pqr(vals["theta1"], vals["theta2"], vals["phi1"], vals["phi2"])
    surd_q = 2.0 * (math.sqrt(10.0 - 2.0 * math.sqrt(5.0)) / 4.0) ** 3
    surd_r = (5.0 - 2.0 * math.sqrt(5.0)) / 4.0
    steps.append(
        Step(
            "geometric",
            f"f=60: (P, Q, R) = ({P:.12g}, {Q:.12g}, {R:.12g}) matches the "
            "closed forms 2 sin^3(pi/5) and (5-2*sqrt(5))/4",
            abs(P) <= max(tol, 1e-12)
            and abs(Q - surd_q) <= max(tol, 1e-12)
            and abs(R - surd_r) <= max(tol, 1e-12),
        )
    )
    cot = -R / Q
    theta = math.atan2(1.0, cot) % math.pi
    steps.append(
        Step(
            "geometric",
            f"f=60: cot theta = -R/Q = {cot:.7f}, so theta = 3pi/5 = theta1",
            abs(cot - (1 / math.tan(3 * math.pi / 5))) <= max(tol, 1e-9)
            and abs(theta - vals["theta1"]) <= max(tol, 1e-9),
        )
    )
    rho = sys_d.theta1 - sys_d.theta2
    phi1_plus_rho = sys_d.phi1 + rho
    steps.append(
        Step(
            "exact",
            "theta = theta1 places the phi1 corner on the diagonal, needing "
            f"phi1 + (theta1 - theta2) = pi; it is {phi1_plus_rho.eval_at(60)} pi "
            "(margin pi/5)",
            rho.eval_at(60) == Fraction(2, 5)
            and phi1_plus_rho.eval_at(60) == Fraction(4, 5),
        )
    )
    return steps


# ---------------------------------------------------------------------------
# the top-level report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremReport:
    survivors: tuple[str, ...]
    propagation: tuple
    earth_map: tuple
    certificates: tuple[CaseCertificate, ...]
    verdict: str

    @property
    def verified(self) -> bool:
        return self.verdict.startswith("theorem verified")

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "survivors": list(self.survivors),
            "propagation": [
                {"type": t, "position": pos, "types": sorted(v)}
                for (t, pos), v in self.propagation
            ],
            "earth_map": [
                {"distance": d, "compatible": c, "reason": r}
                for d, c, r in self.earth_map
            ],
            "certificates": [c.to_dict() for c in self.certificates],
            "verdict": self.verdict,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TheoremReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema')}")
        return cls(
            survivors=tuple(d["survivors"]),
            propagation=tuple(
                ((e["type"], e["position"]), frozenset(e["types"]))
                for e in d["propagation"]
            ),
            earth_map=tuple(
                (e["distance"], e["compatible"], e["reason"]) for e in d["earth_map"]
            ),
            certificates=tuple(CaseCertificate.from_dict(c) for c in d["certificates"]),
            verdict=d["verdict"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def full_theorem_report(
    cfg: VerifyConfig = VerifyConfig(),
    systems: Optional[dict] = None,
) -> TheoremReport:
    """Run every elimination and aggregate the verdict.

    ``systems`` overrides the neighborhood angle tables (used by mutation
    tests); any mismatch with the solved neighborhoods aborts the run.
    """
    cls = classify_neighborhoods()
    if sorted(cls.survivors) != ["II", "III1", "III2", "III3"]:
        raise VerificationError(f"unexpected neighborhood survivors: {sorted(cls.survivors)}")
    if systems:
        for name, given in systems.items():
            if name in cls.survivors and not _same_system(given, cls.survivors[name].system):
                raise VerificationError(
                    f"angle table for {name} does not match the solved neighborhood "
                    "(AVC stage aborted)"
                )
    table = propagation_table(cls.survivors)
    expected = {
        ("II", 1): frozenset(), ("II", 2): frozenset(), ("II", 3): frozenset(),
        ("II", 4): frozenset(), ("II", 5): frozenset(),
        ("III1", 3): frozenset({"III1"}),
        ("III2", 3): frozenset({"III2"}), ("III2", 4): frozenset({"III3"}),
        ("III3", 3): frozenset({"III3"}), ("III3", 5): frozenset({"III2"}),
    }
    for (t, pos), v in table.entries:
        if v != expected.get((t, pos), frozenset()):
            raise VerificationError(f"propagation entry ({t}, {pos}) = {sorted(v)} unexpected")
    earth = tuple(
        (d, v.compatible, v.reason)
        for d in range(1, 6)
        for v in [earth_map_compatible(d, table)]
    )
    if any(c for _, c, _ in earth):
        raise VerificationError("an earth map family survived the propagation check")

    certificates = [
        certify_minimal_case("a2b2c"),
        certify_minimal_case("a3bc"),
        *eliminate_III1(cfg),
        *eliminate_III2_III3(cfg, systems=systems),
        eliminate_II_theta_eq_alpha(cfg),
        *eliminate_II_general(cfg),
    ]
    bad = [c.case_id for c in certificates if not c.verified]
    verdict = (
        "theorem verified at stated tolerances"
        if not bad
        else f"verification FAILED for: {', '.join(bad)}"
    )
    return TheoremReport(
        survivors=tuple(sorted(cls.survivors)),
        propagation=table.entries,
        earth_map=earth,
        certificates=tuple(certificates),
        verdict=verdict,
    )
