"""Behaviors of the bipartite dichotomic scenario.

A behavior is the table P(A,B|a,b) of joint outcome probabilities, one
distribution per setting pair.  Tables are stored flat with the index
``((a*mb + b)*mA + A)*mB + B``; outcome index 0 is the value +1 and index 1
is -1, setting index 0 is the unprimed observable and 1 the primed one.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

# outcome index -> outcome value, setting index -> label
OUTCOME_VALUES = (1, -1)
PARTY1_SETTINGS = ("a", "a'")
PARTY2_SETTINGS = ("b", "b'")

DEFAULT_TOLERANCE = Fraction(1, 10**9)


class DimensionError(ValueError):
    """Table shape does not match the scenario."""


def default_tolerance() -> Fraction:
    env = os.environ.get("BELLSCOPE_TOLERANCE")
    if env:
        return Fraction(env)
    return DEFAULT_TOLERANCE


@dataclass(frozen=True)
class Scenario:
    settings: tuple[int, int] = (2, 2)
    outcomes: tuple[int, int] = (2, 2)

    def __post_init__(self):
        if len(self.settings) != 2 or len(self.outcomes) != 2:
            raise DimensionError("bipartite scenario needs two setting and two outcome counts")
        if min(self.settings) < 1 or min(self.outcomes) < 1:
            raise DimensionError("setting and outcome counts must be >= 1")

    @property
    def dimension(self) -> int:
        ma, mb = self.settings
        mA, mB = self.outcomes
        return ma * mA * mb * mB

    @property
    def is_canonical(self) -> bool:
        return self.settings == (2, 2) and self.outcomes == (2, 2)

    def index(self, a: int, b: int, A: int, B: int) -> int:
        ma, mb = self.settings
        mA, mB = self.outcomes
        if not (0 <= a < ma and 0 <= b < mb and 0 <= A < mA and 0 <= B < mB):
            raise IndexError(f"index ({a},{b},{A},{B}) out of range for {self}")
        return ((a * mb + b) * mA + A) * mB + B

    def keys(self):
        """All (a, b, A, B) in flattening order."""
        ma, mb = self.settings
        mA, mB = self.outcomes
        return itertools.product(range(ma), range(mb), range(mA), range(mB))

    def setting_pairs(self):
        return itertools.product(range(self.settings[0]), range(self.settings[1]))


CHSH = Scenario()


def flat_index(a: int, b: int, A: int, B: int) -> int:
    """Flat position in the canonical 16-vector."""
    return ((a * 2 + b) * 2 + A) * 2 + B


@dataclass(frozen=True)
class Behavior:
    """Conditional outcome table.

    ``p`` is the flat table.  ``tolerance`` is ``None`` for exact mode
    (entries are Fractions); in approximate mode entries are floats and
    constraint checks accept deviations up to the tolerance.
    """

    p: tuple
    scenario: Scenario = CHSH
    tolerance: Fraction | None = None

    def __post_init__(self):
        if len(self.p) != self.scenario.dimension:
            raise DimensionError(
                f"table has {len(self.p)} entries, scenario needs {self.scenario.dimension}"
            )
        if self.tolerance is None:
            object.__setattr__(self, "p", tuple(Fraction(x) for x in self.p))
        else:
            object.__setattr__(self, "p", tuple(float(x) for x in self.p))

    @property
    def exact(self) -> bool:
        return self.tolerance is None

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "approx"

    def __getitem__(self, key):
        a, b, A, B = key
        return self.p[self.scenario.index(a, b, A, B)]

    def table(self) -> list:
        """Nested [a][b][A][B] lists."""
        ma, mb = self.scenario.settings
        mA, mB = self.scenario.outcomes
        return [
            [
                [[self[a, b, A, B] for B in range(mB)] for A in range(mA)]
                for b in range(mb)
            ]
            for a in range(ma)
        ]

    @classmethod
    def from_table(cls, table, scenario: Scenario = CHSH, tolerance=None) -> "Behavior":
        ma, mb = scenario.settings
        mA, mB = scenario.outcomes
        try:
            if len(table) != ma or any(len(row) != mb for row in table):
                raise DimensionError("setting dimensions do not match scenario")
            flat = []
            for a, b in itertools.product(range(ma), range(mb)):
                block = table[a][b]
                if len(block) != mA or any(len(r) != mB for r in block):
                    raise DimensionError(f"outcome block ({a},{b}) has wrong shape")
                for A in range(mA):
                    flat.extend(block[A])
        except TypeError as exc:
            raise DimensionError(f"table is not a nested list: {exc}") from None
        return cls(tuple(flat), scenario, tolerance)

    @classmethod
    def from_function(cls, f: Callable[[int, int, int, int], object],
                      scenario: Scenario = CHSH, tolerance=None) -> "Behavior":
        return cls(tuple(f(*k) for k in scenario.keys()), scenario, tolerance)

    def mix(self, other: "Behavior", weight) -> "Behavior":
        """weight * self + (1 - weight) * other"""
        w = Fraction(weight) if self.exact else float(weight)
        return Behavior(tuple(w * x + (1 - w) * y for x, y in zip(self.p, other.p)),
                        self.scenario, self.tolerance)


def uniform_behavior(scenario: Scenario = CHSH) -> Behavior:
    mA, mB = scenario.outcomes
    return Behavior((Fraction(1, mA * mB),) * scenario.dimension, scenario)


def deterministic_behavior(outA, outB) -> Behavior:
    """Point-mass behavior of the canonical scenario.

    ``outA[a][b]`` and ``outB[a][b]`` are outcome indices (0 for +1, 1 for -1);
    a local strategy has rows independent of the far setting.
    """
    return Behavior.from_function(
        lambda a, b, A, B: int(A == outA[a][b] and B == outB[a][b])
    )


def convex_combination(behaviors: Sequence[Behavior], weights) -> Behavior:
    ws = [Fraction(w) for w in weights]
    if len(ws) != len(behaviors) or not behaviors:
        raise ValueError("need one weight per behavior")
    n = len(behaviors[0].p)
    return Behavior(
        tuple(sum(w * bh.p[i] for w, bh in zip(ws, behaviors)) for i in range(n)),
        behaviors[0].scenario,
    )


# --- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "negative" or "normalization"
    where: tuple
    value: object

    def describe(self) -> str:
        if self.kind == "negative":
            a, b, A, B = self.where
            return f"P({A},{B}|{a},{b}) = {self.value} < 0"
        a, b = self.where
        return f"sum of P(.,.|{a},{b}) = {self.value} != 1"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _close(x, y, tol) -> bool:
    if tol is None:
        return x == y
    return abs(x - y) <= tol


def validate_behavior(b: Behavior) -> ValidationReport:
    """Report negative entries and setting pairs whose total is not 1."""
    sc = b.scenario
    if len(b.p) != sc.dimension:
        raise DimensionError("table length does not match scenario")
    tol = b.tolerance
    found = []
    for key in sc.keys():
        v = b[key]
        if (v < 0) if tol is None else (v < -tol):
            found.append(Violation("negative", key, v))
    mA, mB = sc.outcomes
    for a, c in sc.setting_pairs():
        total = sum(b[a, c, A, B] for A in range(mA) for B in range(mB))
        if not _close(total, 1, tol):
            found.append(Violation("normalization", (a, c), total))
    return ValidationReport(tuple(found))


# --- marginals and expectations ----------------------------------------------


def marginal(b: Behavior, party: int, setting: int, far_setting: int) -> list:
    """P(.|setting)^far_setting for party 1 or 2, indexed by outcome."""
    sc = b.scenario
    mA, mB = sc.outcomes
    if party == 1:
        return [sum(b[setting, far_setting, A, B] for B in range(mB)) for A in range(mA)]
    if party == 2:
        return [sum(b[far_setting, setting, A, B] for A in range(mA)) for B in range(mB)]
    raise ValueError(f"party must be 1 or 2, got {party}")


def _require_dichotomic(b: Behavior):
    if b.scenario.outcomes != (2, 2):
        raise DimensionError("expectations need dichotomic (+1/-1) outcomes")


def marginal_expectation(b: Behavior, party: int, setting: int, far_setting: int):
    _require_dichotomic(b)
    m = marginal(b, party, setting, far_setting)
    return m[0] - m[1]


def product_expectation(b: Behavior, a_setting: int, b_setting: int):
    """<xy> = P(A=B) - P(A!=B) for the setting pair."""
    _require_dichotomic(b)
    return sum(
        OUTCOME_VALUES[A] * OUTCOME_VALUES[B] * b[a_setting, b_setting, A, B]
        for A in range(2) for B in range(2)
    )


@dataclass(frozen=True)
class ExpectationSummary:
    products: tuple   # <ab>, <ab'>, <a'b>, <a'b'>
    marginals_party1: tuple  # <a>^b, <a>^b', <a'>^b, <a'>^b'
    marginals_party2: tuple  # <b>^a, <b>^a', <b'>^a, <b'>^a'

    def components(self) -> tuple:
        return self.products + self.marginals_party1 + self.marginals_party2

    def as_dict(self) -> dict:
        names = {}
        for (x, y), v in zip(itertools.product(range(2), range(2)), self.products):
            names[f"<{PARTY1_SETTINGS[x]}{PARTY2_SETTINGS[y]}>"] = v
        for (x, y), v in zip(itertools.product(range(2), range(2)), self.marginals_party1):
            names[f"<{PARTY1_SETTINGS[x]}>^{PARTY2_SETTINGS[y]}"] = v
        for (y, x), v in zip(itertools.product(range(2), range(2)), self.marginals_party2):
            names[f"<{PARTY2_SETTINGS[y]}>^{PARTY1_SETTINGS[x]}"] = v
        return names


def project_expectations(b: Behavior) -> ExpectationSummary:
    _require_dichotomic(b)
    pairs = list(itertools.product(range(2), range(2)))
    return ExpectationSummary(
        tuple(product_expectation(b, x, y) for x, y in pairs),
        tuple(marginal_expectation(b, 1, x, y) for x, y in pairs),
        tuple(marginal_expectation(b, 2, y, x) for y, x in pairs),
    )


# --- no-signaling -------------------------------------------------------------


@dataclass(frozen=True)
class NoSignalingReport:
    violated: tuple = ()  # human-readable equalities that fail

    @property
    def ok(self) -> bool:
        return not self.violated

    def __bool__(self):
        return self.ok


def _marginal_pairs(sc: Scenario):
    """Yield (party, setting, outcome, far1, far2) for every equality that no-signaling imposes."""
    ma, mb = sc.settings
    mA, mB = sc.outcomes
    for x in range(ma):
        for A in range(mA):
            for y1, y2 in itertools.combinations(range(mb), 2):
                yield 1, x, A, y1, y2
    for y in range(mb):
        for B in range(mB):
            for x1, x2 in itertools.combinations(range(ma), 2):
                yield 2, y, B, x1, x2


def _setting_name(party: int, s: int) -> str:
    names = PARTY1_SETTINGS if party == 1 else PARTY2_SETTINGS
    return names[s] if s < len(names) else f"{names[0]}{s}"


def is_no_signaling(b: Behavior) -> NoSignalingReport:
    """Check that every marginal is independent of the far setting."""
    tol = b.tolerance
    bad = []
    for party, s, o, f1, f2 in _marginal_pairs(b.scenario):
        m1 = marginal(b, party, s, f1)[o]
        m2 = marginal(b, party, s, f2)[o]
        if not _close(m1, m2, tol):
            me, far = (1, 2) if party == 1 else (2, 1)
            sym = "A" if party == 1 else "B"
            val = OUTCOME_VALUES[o] if o < 2 else o
            sname = _setting_name(me, s)
            bad.append(
                f"P({sym}={val:+d}|{sname})^{_setting_name(far, f1)} = {m1} "
                f"!= P({sym}={val:+d}|{sname})^{_setting_name(far, f2)} = {m2}"
            )
    return NoSignalingReport(tuple(bad))


def signaling_gap(b: Behavior):
    """Largest difference between marginals that no-signaling requires equal."""
    gap = 0
    for party, s, o, f1, f2 in _marginal_pairs(b.scenario):
        d = abs(marginal(b, party, s, f1)[o] - marginal(b, party, s, f2)[o])
        gap = max(gap, d)
    return gap if b.exact else float(gap)


# --- serialization ------------------------------------------------------------


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("boolean is not a number")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"cannot read {x!r} as a rational")


def behavior_to_json(b: Behavior) -> dict:
    fmt = format_rational if b.exact else float
    table = b.table()
    out = {
        "scenario": {"settings": list(b.scenario.settings), "outcomes": list(b.scenario.outcomes)},
        "mode": b.mode,
        "p": [[[[fmt(v) for v in row] for row in blk] for blk in rows] for rows in table],
    }
    if not b.exact:
        out["tolerance"] = format_rational(b.tolerance)
    return out


def behavior_from_json(d: dict) -> Behavior:
    try:
        sc = d.get("scenario", {"settings": [2, 2], "outcomes": [2, 2]})
        scenario = Scenario(tuple(sc["settings"]), tuple(sc["outcomes"]))
        mode = d.get("mode", "exact")
        table = d["p"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise DimensionError(f"malformed behavior object: {exc}") from None
    if mode == "exact":
        conv, tol = parse_rational, None
    elif mode == "approx":
        conv = lambda x: float(parse_rational(x))  # noqa: E731
        tol = parse_rational(d["tolerance"]) if "tolerance" in d else default_tolerance()
    else:
        raise DimensionError(f"unknown mode {mode!r}")

    def walk(t, depth):
        if depth == 4:
            return conv(t)
        if not isinstance(t, list):
            raise DimensionError("table nesting is shallower than [a][b][A][B]")
        return [walk(x, depth + 1) for x in t]

    return Behavior.from_table(walk(table, 0), scenario, tol)


# --- linear constraint rows (canonical scenario) ----------------------------------


def marginal_row(party: int, setting: int, far_setting: int, outcome: int) -> list:
    """Coefficients of P(outcome|setting)^far_setting over the flat table."""
    row = [0] * 16
    for o in range(2):
        if party == 1:
            row[flat_index(setting, far_setting, outcome, o)] = 1
        else:
            row[flat_index(far_setting, setting, o, outcome)] = 1
    return row


def expectation_row(party: int, setting: int, far_setting: int) -> list:
    """Coefficients of the marginal expectation <setting>^far_setting."""
    return [p - m for p, m in zip(marginal_row(party, setting, far_setting, 0),
                                  marginal_row(party, setting, far_setting, 1))]


def product_row(x: int, y: int) -> list:
    row = [0] * 16
    for A, B in itertools.product(range(2), repeat=2):
        row[flat_index(x, y, A, B)] = OUTCOME_VALUES[A] * OUTCOME_VALUES[B]
    return row


def normalization_rows() -> list:
    rows = []
    for x, y in itertools.product(range(2), repeat=2):
        row = [0] * 16
        for A, B in itertools.product(range(2), repeat=2):
            row[flat_index(x, y, A, B)] = 1
        rows.append(row)
    return rows


def no_signaling_rows() -> list:
    """The eight equalities, as rows r with r . p = 0."""
    rows = []
    for party, s, o, f1, f2 in _marginal_pairs(CHSH):
        r1, r2 = marginal_row(party, s, f1, o), marginal_row(party, s, f2, o)
        rows.append([u - v for u, v in zip(r1, r2)])
    return rows
