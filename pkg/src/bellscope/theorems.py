"""Certificates for the claims about the inequality catalog and perfect correlations.

Each verifier recomputes its claim from scratch with exact arithmetic and
returns a TheoremCertificate.  LP sub-results carry the optimal witness (a
behavior table) so the numbers can be re-checked without the solver.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .catalog import (
    chsh_family,
    evaluate,
    family,
    max_over,
    polytope_lp_max,
    roy_singh_family,
)
from .core import (
    Behavior,
    deterministic_behavior,
    expectation_row,
    flat_index,
    format_rational,
    marginal_row,
    no_signaling_rows,
    normalization_rows,
    product_row,
)
from .lp import EQ, LPProblem, LPResult, check_witness, simplex_solve
from .polytopes import (
    facet_saturation_rank,
    general_vertices,
    local_vertices,
    ns_vertices,
    signaling_protocol_4,
    signaling_protocol_6,
)

CLAIMS = ("roy_singh_trivial", "ns_families_bound", "facet_ranks", "randomness_theorem", "gisin_variant")


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return format_rational(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class SubResult:
    description: str
    expected: object
    actual: object
    claim: str | None = None
    lp: LPResult | None = None
    rank: dict | None = None

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        out = {"description": self.description}
        if self.claim:
            out["claim"] = self.claim
        out["expected"] = _jsonable(self.expected)
        out["actual"] = _jsonable(self.actual)
        out["ok"] = self.ok
        if self.lp is not None:
            out["lp"] = self.lp.to_json()
        if self.rank is not None:
            out["rank"] = _jsonable(self.rank)
        return out


@dataclass
class TheoremCertificate:
    claim_id: str
    sub_results: list
    wall_time: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return all(s.ok for s in self.sub_results)

    @property
    def verdict(self) -> str:
        return "confirmed" if self.confirmed else "refuted"

    def failures(self):
        return [s for s in self.sub_results if not s.ok]

    def to_json(self, timing: bool = False) -> dict:
        out = {"claim_id": self.claim_id, "verdict": self.verdict}
        if not self.confirmed:
            out["witness"] = [s.to_json() for s in self.failures()]
        out["sub_results"] = [s.to_json() for s in self.sub_results]
        if self.notes:
            out["notes"] = list(self.notes)
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def _timed(claim_id, build):
    t0 = time.perf_counter()
    subs, notes = build()
    return TheoremCertificate(claim_id, subs, time.perf_counter() - t0, notes)


# --- inequality claims ----------------------------------------------------------


def verify_roy_singh_trivial() -> TheoremCertificate:
    """Every Roy-Singh inequality holds on all 256 general vertices and is attained."""

    def build():
        subs = []
        for q in roy_singh_family():
            opt, argmax = max_over(q, "general")
            subs.append(SubResult(
                f"max over general vertices of {q.expectation_form} <= {q.bound}",
                q.bound, opt,
                rank={"saturating_vertices": len(argmax)},
            ))
        # spot check: <ab> + <a>^b <= 1 + <b>^a at A = B = +1 for (a, b)
        q = roy_singh_family()[0]
        v = deterministic_behavior([[0, 0], [0, 0]], [[0, 0], [0, 0]])
        subs.append(SubResult(f"{q.expectation_form} at A=B=+1 everywhere", q.bound,
                              evaluate(q, v).value))
        return subs, []

    return _timed("roy_singh_trivial", build)


def verify_ns_families() -> TheoremCertificate:
    """ns4 and ns6 are bounded by 2 on no-signaling behaviors but not on signaling ones."""

    def build():
        subs = []
        gv = general_vertices()
        sig = {"ns4": signaling_protocol_4(), "ns6": signaling_protocol_6()}
        gen_max = {"ns4": Fraction(4), "ns6": Fraction(6)}
        for name in ("ns4", "ns6"):
            for q in family(name):
                opt, _ = max_over(q, "no_signaling")
                subs.append(SubResult(f"{name}[{q.variant_id}] max over no-signaling vertices",
                                      Fraction(2), opt))
                lp = polytope_lp_max(q.prob_coeffs, "no_signaling")
                subs.append(SubResult(f"{name}[{q.variant_id}] max over the no-signaling "
                                      "inequality description", Fraction(2), lp.optimum, lp=lp))
            opts = [max_over(q, "general") for q in family(name)]
            subs.append(SubResult(f"{name} max over general vertices", gen_max[name],
                                  max(o for o, _ in opts)))
            # the signaling protocol is among the maximizers of the base member
            base = family(name)[0] if name == "ns4" else next(
                q for q in family(name) if evaluate(q, sig[name]).value == gen_max[name])
            idx = gv.vertices.index(sig[name])
            _, argmax = max_over(base, "general")
            subs.append(SubResult(f"signaling protocol value on {base.expectation_form}",
                                  gen_max[name], evaluate(base, sig[name]).value))
            subs.append(SubResult("signaling protocol is a maximizing general vertex",
                                  True, idx in argmax))
        return subs, []

    return _timed("ns_families_bound", build)


def verify_facet_ranks() -> TheoremCertificate:
    """CHSH variants are local facets; ns4 and ns6 fall one rank short on the ns polytope."""

    def build():
        subs = []
        lv, nv = local_vertices(), ns_vertices()
        for q in chsh_family():
            rep = facet_saturation_rank(q, lv)
            subs.append(SubResult(f"chsh[{q.variant_id}] saturation rank over local vertices",
                                  8, rep.affine_rank, claim="chsh_are_facets",
                                  rank=_rank_json(rep)))
        for name in ("ns4", "ns6"):
            for q in family(name):
                rep = facet_saturation_rank(q, nv)
                subs.append(SubResult(f"{name}[{q.variant_id}] saturation rank over "
                                      "no-signaling vertices", 7, rep.affine_rank,
                                      claim="ns_families_not_facets", rank=_rank_json(rep)))
        q = family("trivial")[0]
        opt, _ = max_over(q, "general")
        subs.append(SubResult(f"{q.expectation_form} <= 1 never exceeded on general vertices",
                              True, opt <= q.bound))
        return subs, []

    return _timed("facet_ranks", build)


def _rank_json(rep) -> dict:
    return {"max_value": rep.max_value, "saturating": rep.saturating_count,
            "affine_rank": rep.affine_rank, "dimension": rep.dimension}


# --- perfect correlations ---------------------------------------------------------

TAGS = ("u", "-u")


def negate_tag(t: str) -> str:
    return t[1:] if t.startswith("-") else "-" + t


@dataclass(frozen=True)
class PerfectCorrelationConstraints:
    """Direction tags of the four settings and which correlation constraints to impose.

    A setting pair is anticorrelated (<xy> = -1) when both tags are equal and
    correlated (<xy> = +1) when they are opposite.
    """

    party1_tags: tuple = ("u", "-u")  # a, a'
    party2_tags: tuple = ("u", "-u")  # b, b'
    symmetry_enabled: bool = False
    no_signaling: bool = True
    use_anticorrelation: bool = True
    use_correlation: bool = True
    flip_identification: bool = False

    def __post_init__(self):
        tags = set(self.party1_tags) | set(self.party2_tags)
        if any(negate_tag(t) not in tags for t in tags):
            raise ValueError(f"tag set {sorted(tags)} is not closed under negation")
        for tags_ in (self.party1_tags, self.party2_tags):
            if len(tags_) != 2 or tags_[0] == tags_[1]:
                raise ValueError("each party needs two settings with distinct tags")

    @property
    def anticorrelated_pairs(self) -> tuple:
        return tuple((x, y) for x, y in itertools.product(range(2), repeat=2)
                     if self.party1_tags[x] == self.party2_tags[y])

    @property
    def correlated_pairs(self) -> tuple:
        return tuple((x, y) for x, y in itertools.product(range(2), repeat=2)
                     if self.party1_tags[x] == negate_tag(self.party2_tags[y]))

    def setting(self, party: int, tag: str) -> int:
        tags = self.party1_tags if party == 1 else self.party2_tags
        if tag not in tags:
            raise ValueError(f"party {party} has no setting with tag {tag!r}")
        return tags.index(tag)

    def relabeled(self) -> "PerfectCorrelationConstraints":
        """Same constraints with u and -u exchanged."""
        return replace(self,
                       party1_tags=tuple(negate_tag(t) for t in self.party1_tags),
                       party2_tags=tuple(negate_tag(t) for t in self.party2_tags))


def marginal_selector(c: PerfectCorrelationConstraints, party: int, tag: str) -> list:
    """Expectation <tag> of one party, read off where the other party measures the same tag."""
    s = c.setting(party, tag)
    far = c.setting(3 - party, tag)
    return expectation_row(party, s, far)


def build_randomness_lp(c: PerfectCorrelationConstraints, objective, sense: str = "max") -> LPProblem:
    """LP over the 16 table entries with the perfect-correlation constraints.

    ``objective`` is a 16-vector, usually a sum of marginal_selector rows.
    """
    rows, rhs = [], []

    def add(row, value):
        rows.append(list(row))
        rhs.append(value)

    for row in normalization_rows():
        add(row, 1)
    if c.no_signaling:
        for row in no_signaling_rows():
            add(row, 0)
    if c.use_anticorrelation:
        for x, y in c.anticorrelated_pairs:
            add(product_row(x, y), -1)
    if c.use_correlation:
        for x, y in c.correlated_pairs:
            add(product_row(x, y), 1)
    if c.symmetry_enabled:
        # P(A=+|t) = P(B=+|t), both read at the equal-tag setting pair
        for t in sorted(set(c.party1_tags) & set(c.party2_tags)):
            x, y = c.setting(1, t), c.setting(2, t)
            add([p - q for p, q in zip(marginal_row(1, x, y, 0), marginal_row(2, y, x, 0))], 0)
    if c.flip_identification:
        # P(-|t) = P(+|-t) for each party and each far setting
        for party in (1, 2):
            tags = c.party1_tags if party == 1 else c.party2_tags
            for far in range(2):
                s, sn = 0, tags.index(negate_tag(tags[0]))
                add([p - q for p, q in zip(marginal_row(party, s, far, 1),
                                           marginal_row(party, sn, far, 0))], 0)
    return LPProblem(list(objective), rows, [EQ] * len(rows), rhs, sense=sense)


def _solve(c, objective, sense):
    return simplex_solve(build_randomness_lp(c, objective, sense))


def _sum_rows(*rows):
    return [sum(col) for col in zip(*rows)]


def _extremes(c, objective, label, expected_max, expected_min=None, claim=None):
    out = []
    for sense, exp in (("max", expected_max), ("min", expected_min)):
        if exp is None:
            continue
        res = _solve(c, objective, sense)
        out.append(SubResult(f"{sense} {label}", exp, res.optimum, claim=claim, lp=res))
    return out


# Non-negativity identity: 4P(++|xy) + 4P(++|x'y') equals
# <xy> + <x'y'> + <x> + <y> + <x'> + <y'> + 2 with marginals read in their own blocks.
def positivity_identity_rows(x, y):
    lhs = [0] * 16
    lhs[flat_index(x, y, 0, 0)] += 4
    lhs[flat_index(1 - x, 1 - y, 0, 0)] += 4
    rhs = _sum_rows(product_row(x, y), product_row(1 - x, 1 - y),
                    expectation_row(1, x, y), expectation_row(2, y, x),
                    expectation_row(1, 1 - x, 1 - y), expectation_row(2, 1 - y, 1 - x))
    return lhs, rhs


def _positivity_value(w, x, y):
    lhs, rhs = positivity_identity_rows(x, y)
    a = sum(c * v for c, v in zip(lhs, w))
    b = sum(c * v for c, v in zip(rhs, w)) + 2
    return a, b


def _randomness_subresults(c: PerfectCorrelationConstraints, tag_label=""):
    subs = []
    loose = PerfectCorrelationConstraints(c.party1_tags, c.party2_tags)
    u, mu = c.party1_tags[0], negate_tag(c.party1_tags[0])
    sfx = f" [{tag_label}]" if tag_label else ""

    # (i) marginals of the two parties cancel at equal directions
    for t in (u, mu):
        obj = _sum_rows(marginal_selector(loose, 1, t), marginal_selector(loose, 2, t))
        subs += _extremes(loose, obj, f"<{t}>_I + <{t}>_II without symmetry{sfx}",
                          Fraction(0), Fraction(0))
    # (ii) oddness
    for party, name in ((1, "I"), (2, "II")):
        obj = _sum_rows(marginal_selector(loose, party, u), marginal_selector(loose, party, mu))
        subs += _extremes(loose, obj, f"<{mu}>_{name} + <{u}>_{name} without symmetry{sfx}",
                          Fraction(0), Fraction(0))
    # (iii) the non-negativity identity at every witness found so far
    witnesses = [s.lp.witness for s in subs if s.lp is not None and s.lp.witness]
    ok = True
    for w in witnesses:
        for x, y in loose.anticorrelated_pairs:
            a, b = _positivity_value(w, x, y)
            ok = ok and a == b and a >= 0
    subs.append(SubResult(f"4P(++|xy) + 4P(++|x'y') identity and non-negativity at "
                          f"{len(witnesses)} LP witnesses{sfx}", True, ok))
    # (iv) with identical devices every marginal vanishes
    sym = PerfectCorrelationConstraints(c.party1_tags, c.party2_tags, symmetry_enabled=True)
    for party, name in ((1, "I"), (2, "II")):
        for t in (u, mu):
            subs += _extremes(sym, marginal_selector(sym, party, t),
                              f"<{t}>_{name} with symmetry{sfx}", Fraction(0), Fraction(0))
    res = _solve(sym, marginal_selector(sym, 1, u), "max")
    w = Behavior(tuple(res.witness))
    halves = [sum(w.p[i] for i, r in enumerate(marginal_row(party, s, f, 0)) if r)
              for party in (1, 2) for s in range(2) for f in range(2)]
    subs.append(SubResult(f"P(+|x) at the symmetric witness, every setting and far setting{sfx}",
                          [Fraction(1, 2)] * 8, halves))
    return subs


def verify_randomness_theorem() -> TheoremCertificate:
    """Perfect (anti-)correlations plus no-signaling force zero marginal expectations."""

    def build():
        c = PerfectCorrelationConstraints()
        subs = _randomness_subresults(c)
        u = c.party1_tags[0]
        # without symmetry a marginal can be fully biased
        res = _solve(c, marginal_selector(c, 1, u), "max")
        subs.append(SubResult(f"max <{u}>_I without symmetry", Fraction(1), res.optimum, lp=res))
        hand = deterministic_behavior([[0, 0], [1, 1]], [[1, 0], [1, 0]])
        prob = build_randomness_lp(c, marginal_selector(c, 1, u))
        subs.append(SubResult("deterministic witness A=+ at u, B=- at u, A=- at -u, B=+ at -u "
                              "is feasible", True, check_witness(prob, hand.p)))
        subs.append(SubResult("its value of <u>_I", Fraction(1),
                              sum(a * b for a, b in zip(prob.objective, hand.p))))
        # stability under u <-> -u
        flipped = _randomness_subresults(c.relabeled(), "u <-> -u")
        subs += flipped
        # equal-direction cancellation needs only perfect anticorrelation
        bare = PerfectCorrelationConstraints(no_signaling=False, use_correlation=False)
        for t in ("u", "-u"):
            obj = _sum_rows(marginal_selector(bare, 1, t), marginal_selector(bare, 2, t))
            subs += _extremes(bare, obj, f"<{t}>_I + <{t}>_II with anticorrelation only, "
                              "no no-signaling", Fraction(0), Fraction(0))
        obj = _sum_rows(marginal_selector(bare, 1, "u"), marginal_selector(bare, 1, "-u"))
        nons = PerfectCorrelationConstraints(no_signaling=False)
        res = _solve(nons, obj, "max")
        subs.append(SubResult("max <-u>_I + <u>_I with perfect correlations but signaling allowed",
                              Fraction(2), res.optimum, lp=res))
        notes = ["equal-direction cancellation follows from perfect anticorrelation alone; "
                 "oddness of the marginals needs the no-signaling equalities"]
        return subs, notes

    return _timed("randomness_theorem", build)


def verify_gisin_variant() -> TheoremCertificate:
    """Outcome-flip identification plus correlation at opposite directions suffices."""

    def build():
        subs = []
        c = PerfectCorrelationConstraints(use_anticorrelation=False, flip_identification=True,
                                          symmetry_enabled=True)
        for party, name in ((1, "I"), (2, "II")):
            for t in TAGS:
                subs += _extremes(c, marginal_selector(c, party, t),
                                  f"<{t}>_{name} with flip identification and symmetry",
                                  Fraction(0), Fraction(0))
        bare = PerfectCorrelationConstraints(use_anticorrelation=False, symmetry_enabled=True)
        res = _solve(bare, marginal_selector(bare, 1, "u"), "max")
        subs.append(SubResult("max <u>_I without flip identification and without "
                              "anticorrelation", Fraction(1), res.optimum, lp=res))
        flip_only = PerfectCorrelationConstraints(use_anticorrelation=False, use_correlation=False,
                                                  flip_identification=True)
        obj = _sum_rows(marginal_selector(flip_only, 1, "u"), marginal_selector(flip_only, 1, "-u"))
        subs += _extremes(flip_only, obj, "<-u>_I + <u>_I under the flip identification alone",
                          Fraction(0), Fraction(0))
        return subs, []

    return _timed("gisin_variant", build)


VERIFIERS = {
    "roy-singh": verify_roy_singh_trivial,
    "ns-bounds": verify_ns_families,
    "facet-ranks": verify_facet_ranks,
    "randomness": verify_randomness_theorem,
    "gisin": verify_gisin_variant,
}


def verify_all() -> list:
    return [f() for f in VERIFIERS.values()]
