"""Mamdani fuzzy controller mapping residual energy and distance to the
base station onto a communication range (ComR).

Membership functions are piecewise linear: interior terms are triangles,
the first and last term of each variable saturate as shoulders.  Rule
activation uses min, clipped consequents are aggregated with max, and the
crisp output is the center of area of the aggregated set, computed
exactly from its piecewise-linear segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Triangular:
    """Rises from zero at `a` to one at `b`, falls back to zero at `c`."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not (self.a < self.b < self.c):
            raise ValueError(
                f"triangular breakpoints must satisfy a < b < c, got "
                f"({self.a}, {self.b}, {self.c})"
            )

    def grade(self, m: float) -> float:
        if m < self.a or m > self.c:
            return 0.0
        if m <= self.b:
            return (m - self.a) / (self.b - self.a)
        return (self.c - m) / (self.c - self.b)

    def breakpoints(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c)

    def clip_crossings(self, level: float) -> tuple[float, ...]:
        if not 0.0 < level < 1.0:
            return ()
        return (
            self.a + level * (self.b - self.a),
            self.c - level * (self.c - self.b),
        )

    def support(self) -> tuple[float, float]:
        return (self.a, self.c)


@dataclass(frozen=True)
class LeftShoulder:
    """Saturated at one below `a`, falls linearly to zero at `b`."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(
                f"left shoulder breakpoints must satisfy a < b, got "
                f"({self.a}, {self.b})"
            )

    def grade(self, m: float) -> float:
        if m <= self.a:
            return 1.0
        if m >= self.b:
            return 0.0
        return (self.b - m) / (self.b - self.a)

    def breakpoints(self) -> tuple[float, ...]:
        return (self.a, self.b)

    def clip_crossings(self, level: float) -> tuple[float, ...]:
        if not 0.0 < level < 1.0:
            return ()
        return (self.b - level * (self.b - self.a),)

    def support(self) -> tuple[float, float]:
        return (float("-inf"), self.b)


@dataclass(frozen=True)
class RightShoulder:
    """Zero below `a`, rises linearly to saturate at one from `b` upward."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(
                f"right shoulder breakpoints must satisfy a < b, got "
                f"({self.a}, {self.b})"
            )

    def grade(self, m: float) -> float:
        if m <= self.a:
            return 0.0
        if m >= self.b:
            return 1.0
        return (m - self.a) / (self.b - self.a)

    def breakpoints(self) -> tuple[float, ...]:
        return (self.a, self.b)

    def clip_crossings(self, level: float) -> tuple[float, ...]:
        if not 0.0 < level < 1.0:
            return ()
        return (self.a + level * (self.b - self.a),)

    def support(self) -> tuple[float, float]:
        return (self.a, float("inf"))


MembershipFunction = Union[Triangular, LeftShoulder, RightShoulder]


def eval_membership(mf: MembershipFunction, m: float) -> float:
    """Membership grade of crisp value `m`, always in [0, 1]."""
    return mf.grade(m)


@dataclass(frozen=True)
class FuzzyVariable:
    """A named universe [lo, hi] with an ordered list of labeled terms.

    Every point of the universe must be covered by at least one term with
    a positive grade, so that fuzzification always fires something.
    """

    name: str
    lo: float
    hi: float
    terms: tuple[tuple[str, MembershipFunction], ...]

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"variable {self.name!r}: universe lo must be < hi")
        labels = [label for label, _ in self.terms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"variable {self.name!r}: duplicate term labels")
        if not self.terms:
            raise ValueError(f"variable {self.name!r}: needs at least one term")
        self._check_coverage()

    def _check_coverage(self) -> None:
        # grade > 0 exactly on the open support interval, so sweep with
        # strict overlap: a support starting exactly at the current reach
        # would leave that single point uncovered.
        supports = sorted(mf.support() for _, mf in self.terms)
        reach = self.lo
        for s_lo, s_hi in supports:
            if s_lo < reach:
                reach = max(reach, s_hi)
        if reach < self.hi:
            raise ValueError(
                f"variable {self.name!r}: universe not covered near {reach}"
            )

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.terms)

    def clamp(self, crisp: float) -> float:
        return min(max(crisp, self.lo), self.hi)

    def fuzzify(self, crisp: float) -> list[tuple[str, float]]:
        """Grades of every term at `crisp`, clamped into the universe."""
        x = self.clamp(crisp)
        return [(label, mf.grade(x)) for label, mf in self.terms]


def fuzzify(v: FuzzyVariable, crisp: float) -> list[tuple[str, float]]:
    return v.fuzzify(crisp)


@dataclass(frozen=True)
class RuleBase:
    """If-then rules (energy_label, distance_label) -> comr_label.

    The nine antecedent pairs must be exhaustive and distinct over the
    3x3 label grid, and each consequent label must be used exactly once.
    """

    rules: tuple[tuple[str, str, str], ...]

    def __post_init__(self) -> None:
        antecedents = [(e, d) for e, d, _ in self.rules]
        if len(set(antecedents)) != len(antecedents):
            raise ValueError("rule base has duplicate antecedent pairs")
        energy_labels = {e for e, _, _ in self.rules}
        distance_labels = {d for _, d, _ in self.rules}
        expected = {(e, d) for e in energy_labels for d in distance_labels}
        if set(antecedents) != expected:
            raise ValueError("rule base antecedents are not exhaustive")
        consequents = [c for _, _, c in self.rules]
        if len(set(consequents)) != len(consequents):
            raise ValueError("rule base reuses a consequent label")

    def validate_against(
        self,
        energy: FuzzyVariable,
        distance: FuzzyVariable,
        comr: FuzzyVariable,
    ) -> None:
        if {e for e, _, _ in self.rules} != set(energy.labels()):
            raise ValueError("rule base energy labels do not match the variable")
        if {d for _, d, _ in self.rules} != set(distance.labels()):
            raise ValueError("rule base distance labels do not match the variable")
        if {c for _, _, c in self.rules} != set(comr.labels()):
            raise ValueError("rule base consequents do not match the output terms")


@dataclass(frozen=True)
class AggregatedOutput:
    """Clipped output set: per-term activation levels over the ComR variable.

    The pointwise membership is max over terms of min(clip, term grade).
    """

    variable: FuzzyVariable
    clip_levels: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.clip_levels) != len(self.variable.terms):
            raise ValueError("one clip level per output term required")

    def membership(self, x: float) -> float:
        return max(
            min(clip, mf.grade(x))
            for (_, mf), clip in zip(self.variable.terms, self.clip_levels)
        )


@dataclass(frozen=True)
class FuzzyConfig:
    """The two input variables, the output variable and the rule base."""

    energy: FuzzyVariable
    distance: FuzzyVariable
    comr: FuzzyVariable
    rules: RuleBase

    def __post_init__(self) -> None:
        self.rules.validate_against(self.energy, self.distance, self.comr)


def infer(
    cfg: FuzzyConfig,
    energy_grades: dict[str, float],
    distance_grades: dict[str, float],
) -> AggregatedOutput:
    """Min-activation of each rule, max-aggregated per consequent term."""
    clips = {label: 0.0 for label in cfg.comr.labels()}
    for e_label, d_label, out_label in cfg.rules.rules:
        activation = min(energy_grades[e_label], distance_grades[d_label])
        if activation > clips[out_label]:
            clips[out_label] = activation
    return AggregatedOutput(
        cfg.comr, tuple(clips[label] for label in cfg.comr.labels())
    )


def defuzzify_coa(agg: AggregatedOutput) -> float:
    """Center of area of the aggregated output set.

    The set is piecewise linear, so the centroid is computed exactly:
    the universe is cut at every term breakpoint, clip crossing and
    pairwise intersection of clipped terms, and each resulting segment
    is integrated in closed form.
    """
    var = agg.variable
    active = [
        (mf, clip)
        for (_, mf), clip in zip(var.terms, agg.clip_levels)
        if clip > 0.0
    ]
    if not active:
        raise ValueError("no rule fired")
    lo, hi = var.lo, var.hi
    cuts = {lo, hi}
    for mf, clip in active:
        for x in mf.breakpoints():
            if lo < x < hi:
                cuts.add(x)
        for x in mf.clip_crossings(clip):
            if lo < x < hi:
                cuts.add(x)
    base = sorted(cuts)
    n = len(active)
    values = [
        [min(clip, mf.grade(x)) for mf, clip in active] for x in base
    ]

    area = 0.0
    moment = 0.0
    for s in range(len(base) - 1):
        p, q = base[s], base[s + 1]
        vp, vq = values[s], values[s + 1]
        # every clipped term is linear on [p, q]; cutting at pairwise
        # intersections makes the max linear on each sub-segment
        ts = {0.0, 1.0}
        for i in range(n):
            for j in range(i + 1, n):
                dp = vp[i] - vp[j]
                dq = vq[i] - vq[j]
                if dp * dq < 0.0:
                    ts.add(dp / (dp - dq))
        order = sorted(ts)
        span = q - p
        prev_t = order[0]
        prev_y = max(vp)
        for t in order[1:]:
            y = max(vp[k] + t * (vq[k] - vp[k]) for k in range(n))
            x0 = p + prev_t * span
            x1 = p + t * span
            h = x1 - x0
            area += h * (prev_y + y) / 2.0
            moment += h * (prev_y * (2.0 * x0 + x1) + y * (x0 + 2.0 * x1)) / 6.0
            prev_t, prev_y = t, y
    if area <= 0.0:
        raise ValueError("no rule fired")
    return moment / area


def compute_comr(
    residual_energy: float, distance_to_bs: float, cfg: FuzzyConfig
) -> float:
    """Fuzzify both inputs, infer and defuzzify into a range in meters."""
    energy_grades = dict(cfg.energy.fuzzify(residual_energy))
    distance_grades = dict(cfg.distance.fuzzify(distance_to_bs))
    return defuzzify_coa(infer(cfg, energy_grades, distance_grades))


ENERGY_LABELS = ("low", "med", "high")
DISTANCE_LABELS = ("close", "med", "far")
COMR_LABELS = (
    "very_small",
    "small",
    "rather_small",
    "med_small",
    "med",
    "med_large",
    "rather_large",
    "large",
    "very_large",
)

DEFAULT_RULES = RuleBase(
    (
        ("low", "close", "very_small"),
        ("med", "close", "small"),
        ("high", "close", "rather_small"),
        ("low", "med", "med_small"),
        ("med", "med", "med"),
        ("high", "med", "med_large"),
        ("low", "far", "rather_large"),
        ("med", "far", "large"),
        ("high", "far", "very_large"),
    )
)


def three_term_partition(
    name: str, lo: float, hi: float, labels: tuple[str, str, str]
) -> FuzzyVariable:
    """Shoulder / triangle / shoulder partition at 0.2, 0.5 and 0.8 of span."""
    span = hi - lo
    return FuzzyVariable(
        name,
        lo,
        hi,
        (
            (labels[0], LeftShoulder(lo + 0.2 * span, lo + 0.4 * span)),
            (labels[1], Triangular(lo + 0.2 * span, lo + 0.5 * span, lo + 0.8 * span)),
            (labels[2], RightShoulder(lo + 0.6 * span, lo + 0.8 * span)),
        ),
    )


def nine_term_partition(name: str, lo: float, hi: float) -> FuzzyVariable:
    """Even nine-term partition with shoulders at both ends and seven
    triangles whose peaks sit at i/8 of the span."""
    step = (hi - lo) / 8.0
    terms: list[tuple[str, MembershipFunction]] = [
        (COMR_LABELS[0], LeftShoulder(lo, lo + step))
    ]
    for i in range(1, 8):
        terms.append(
            (
                COMR_LABELS[i],
                Triangular(lo + (i - 1) * step, lo + i * step, lo + (i + 1) * step),
            )
        )
    terms.append((COMR_LABELS[8], RightShoulder(hi - step, hi)))
    return FuzzyVariable(name, lo, hi, tuple(terms))


def default_fuzzy_config(
    max_distance: float,
    initial_energy: float,
    comr_max: float | None = None,
) -> FuzzyConfig:
    """Default controller for a field whose farthest node sits
    `max_distance` meters from the base station."""
    if comr_max is None:
        comr_max = 0.5 * max_distance
    return FuzzyConfig(
        energy=three_term_partition("energy", 0.0, initial_energy, ENERGY_LABELS),
        distance=three_term_partition("distance", 0.0, max_distance, DISTANCE_LABELS),
        comr=nine_term_partition("comr", 0.0, comr_max),
        rules=DEFAULT_RULES,
    )
