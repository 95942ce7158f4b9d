"""Linear inequalities over the 16-dimensional behavior space.

Every inequality keeps two descriptions: a symbolic expectation form (a
signed sum of correlators <xy>, far-setting-tagged marginals <x>^y and a
constant) and the coefficient vector over P(A,B|a,b).  Each family checks at
construction that both descriptions agree on all 256 deterministic vertices
of the general polytope.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    OUTCOME_VALUES,
    PARTY1_SETTINGS,
    PARTY2_SETTINGS,
    Behavior,
    flat_index,
    format_rational,
    no_signaling_rows,
    normalization_rows,
    project_expectations,
)
from .lp import EQ, LPProblem, maximize_over_vertices, simplex_solve
from .polytopes import PR_PROJECTIONS, general_vertices, vertex_set

FAMILIES = ("trivial", "chsh", "chsh_prob_form", "roy_singh", "leggett_form", "ns4", "ns6")
FAMILY_SIZES = {"trivial": 8, "chsh": 8, "chsh_prob_form": 2, "roy_singh": 16,
                "leggett_form": 8, "ns4": 32, "ns6": 14}


class CatalogError(AssertionError):
    pass


# --- symbols ---------------------------------------------------------------------
# ("prod", x, y)  <xy>
# ("m1", x, y)    <x>^y   party-1 marginal at setting x, party 2 measuring y
# ("m2", y, x)    <y>^x   party-2 marginal at setting y, party 1 measuring x
# ("one",)        constant 1

ONE = ("one",)


def prod(x, y):
    return ("prod", x, y)


def m1(x, y):
    return ("m1", x, y)


def m2(y, x):
    return ("m2", y, x)


def symbol_str(sym) -> str:
    kind = sym[0]
    if kind == "prod":
        return f"<{PARTY1_SETTINGS[sym[1]]}{PARTY2_SETTINGS[sym[2]]}>"
    if kind == "m1":
        return f"<{PARTY1_SETTINGS[sym[1]]}>^{PARTY2_SETTINGS[sym[2]]}"
    if kind == "m2":
        return f"<{PARTY2_SETTINGS[sym[1]]}>^{PARTY1_SETTINGS[sym[2]]}"
    return ""


def form_str(terms) -> str:
    out = []
    for c, sym in terms:
        sign = "+" if c > 0 else "-"
        mag = abs(c)
        if sym == ONE:
            out.append(f"{sign}{mag}")
        else:
            out.append(f"{sign}{'' if mag == 1 else str(mag)}{symbol_str(sym)}")
    return " ".join(out)


_TERM_RE = re.compile(r"([+-])(\d+(?:/\d+)?)?(<[ab]'?[ab]?'?>(?:\^[ab]'?)?)?")


def parse_form(s: str):
    """Inverse of form_str."""
    p1 = {n: i for i, n in enumerate(PARTY1_SETTINGS)}
    p2 = {n: i for i, n in enumerate(PARTY2_SETTINGS)}
    terms = []
    for tok in s.split():
        m = _TERM_RE.fullmatch(tok)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse term {tok!r}")
        c = Fraction(m.group(2) or 1) * (1 if m.group(1) == "+" else -1)
        body = m.group(3)
        if body is None:
            terms.append((c, ONE))
            continue
        pm = re.fullmatch(r"<(a'?)(b'?)>", body)
        if pm:
            terms.append((c, prod(p1[pm.group(1)], p2[pm.group(2)])))
            continue
        mm = re.fullmatch(r"<([ab]'?)>\^([ab]'?)", body)
        if not mm:
            raise ValueError(f"cannot parse term {tok!r}")
        s1, s2 = mm.groups()
        if s1 in p1 and s2 in p2:
            terms.append((c, m1(p1[s1], p2[s2])))
        elif s1 in p2 and s2 in p1:
            terms.append((c, m2(p2[s1], p1[s2])))
        else:
            raise ValueError(f"marginal {body} must be tagged with the other party's setting")
    return tuple(terms)


def _symbol_vector(sym):
    v = [Fraction(0)] * 16
    kind = sym[0]
    for A, B in itertools.product(range(2), range(2)):
        if kind == "prod":
            v[flat_index(sym[1], sym[2], A, B)] = Fraction(OUTCOME_VALUES[A] * OUTCOME_VALUES[B])
        elif kind == "m1":
            v[flat_index(sym[1], sym[2], A, B)] = Fraction(OUTCOME_VALUES[A])
        elif kind == "m2":
            v[flat_index(sym[2], sym[1], A, B)] = Fraction(OUTCOME_VALUES[B])
        else:
            raise ValueError("constants have no coefficient vector")
    return v


def terms_to_prob(terms) -> tuple:
    v = [Fraction(0)] * 16
    for c, sym in terms:
        for i, x in enumerate(_symbol_vector(sym)):
            if x:
                v[i] += c * x
    return tuple(v)


def evaluate_form(terms, b: Behavior, summary=None):
    """Value of an expectation form on a behavior, computed from its correlators."""
    s = project_expectations(b) if summary is None else summary
    total = 0
    for c, sym in terms:
        kind = sym[0]
        if kind == "one":
            val = 1
        elif kind == "prod":
            val = s.products[2 * sym[1] + sym[2]]
        elif kind == "m1":
            val = s.marginals_party1[2 * sym[1] + sym[2]]
        else:
            val = s.marginals_party2[2 * sym[1] + sym[2]]
        total += c * val
    return total


def reduced_form(terms) -> dict:
    """Expectation form with far-setting tags dropped (the no-signaling reading)."""
    out: dict = {}
    for c, sym in terms:
        if sym[0] == "m1":
            key = ("A", sym[1])
        elif sym[0] == "m2":
            key = ("B", sym[1])
        else:
            key = sym
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


# --- relabelings -------------------------------------------------------------------


def flip_outcome(terms, party: int, setting: int):
    """Exchange +1 and -1 for one observable."""
    out = []
    for c, sym in terms:
        k = sym[0]
        hit = (
            (k == "prod" and sym[1 if party == 1 else 2] == setting)
            or (k == "m1" and party == 1 and sym[1] == setting)
            or (k == "m2" and party == 2 and sym[1] == setting)
        )
        out.append((-c if hit else c, sym))
    return tuple(out)


def swap_settings(terms, party: int):
    """Exchange the unprimed and primed observable of one party."""
    out = []
    for c, sym in terms:
        k = sym[0]
        if k == "prod":
            x, y = sym[1], sym[2]
            sym = prod(1 - x, y) if party == 1 else prod(x, 1 - y)
        elif k == "m1":
            x, y = sym[1], sym[2]
            sym = m1(1 - x, y) if party == 1 else m1(x, 1 - y)
        elif k == "m2":
            y, x = sym[1], sym[2]
            sym = m2(y, 1 - x) if party == 1 else m2(1 - y, x)
        out.append((c, sym))
    return tuple(out)


def permute_vector(v, mapping):
    """Coefficients of the relabeled inequality: out[mapping(k)] = v[k]."""
    out = [Fraction(0)] * 16
    for (a, b, A, B) in itertools.product(range(2), repeat=4):
        out[flat_index(*mapping(a, b, A, B))] = v[flat_index(a, b, A, B)]
    return tuple(out)


# --- the inequality type ---------------------------------------------------------


@dataclass(frozen=True)
class LinearInequality:
    """prob_coeffs . P <= bound, with its expectation-form description."""

    family: str
    variant_id: str
    terms: tuple
    prob_coeffs: tuple
    bound: Fraction
    parameters: dict = field(default_factory=dict, compare=False, hash=False)
    member: int = 0  # index of the printed inequality this piece belongs to

    @property
    def expectation_form(self) -> str:
        return form_str(self.terms)

    def __str__(self):
        return f"{self.family}[{self.variant_id}]: {self.expectation_form} <= {self.bound}"

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "variant_id": self.variant_id,
            "parameters": self.parameters,
            "expectation_form": self.expectation_form,
            "prob_coeffs": [format_rational(c) for c in self.prob_coeffs],
            "bound": format_rational(self.bound),
        }


def _make(family, variant_id, terms, bound, parameters=None, member=None, prob_coeffs=None):
    terms = tuple((Fraction(c), s) for c, s in terms if c)
    if prob_coeffs is None:
        if any(s == ONE for _, s in terms):
            raise CatalogError("forms with a constant need explicit prob_coeffs")
        prob_coeffs = terms_to_prob(terms)
    return LinearInequality(
        family, str(variant_id), terms, tuple(Fraction(c) for c in prob_coeffs),
        Fraction(bound), parameters or {},
        int(variant_id) if member is None else member,
    )


@functools.lru_cache(maxsize=None)
def _general_projections():
    return tuple((v, project_expectations(v)) for v in general_vertices().vertices)


def check_dual_forms(ineqs) -> None:
    """Both descriptions must agree on every general vertex."""
    for v, summary in _general_projections():
        for q in ineqs:
            lhs = sum(c * x for c, x in zip(q.prob_coeffs, v.p) if c and x)
            if lhs != evaluate_form(q.terms, v, summary):
                raise CatalogError(f"{q}: coefficient vector and expectation form disagree")


def _check_size(family, ineqs):
    members = {q.member for q in ineqs}
    if len(members) != FAMILY_SIZES[family]:
        raise CatalogError(f"{family}: {len(members)} members, expected {FAMILY_SIZES[family]}")
    if len({q.prob_coeffs for q in ineqs}) != len(ineqs):
        raise CatalogError(f"{family}: duplicate coefficient vectors")


PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _pair_name(x, y):
    return PARTY1_SETTINGS[x] + PARTY2_SETTINGS[y]


# --- families --------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def trivial_family() -> tuple:
    """+-<xy> <= 1 for the four setting pairs."""
    out = []
    for k, (x, y) in enumerate(PAIRS):
        for s, sign in enumerate((1, -1)):
            out.append(_make("trivial", 2 * k + s, [(sign, prod(x, y))], 1,
                             {"pair": _pair_name(x, y), "sign": sign}))
    _check_size("trivial", out)
    check_dual_forms(out)
    return tuple(out)


def chsh_signs(alpha, beta, gamma):
    return ((-1) ** gamma, (-1) ** (beta + gamma), (-1) ** (alpha + gamma),
            (-1) ** (alpha + beta + gamma + 1))


@functools.lru_cache(maxsize=None)
def chsh_family() -> tuple:
    """The eight CHSH facets, bound 2.

    Variant k is the facet on which pr_box(k) reaches 4, so the ordering of
    the two lists lines up one-to-one.
    """
    by_signs = {}
    for alpha, beta, gamma in itertools.product(range(2), repeat=3):
        by_signs[chsh_signs(alpha, beta, gamma)] = (alpha, beta, gamma)
    if set(by_signs) != set(PR_PROJECTIONS):
        raise CatalogError("CHSH sign patterns do not match the PR-box correlators")
    out = []
    for k, signs in enumerate(PR_PROJECTIONS):
        alpha, beta, gamma = by_signs[signs]
        terms = [(s, prod(x, y)) for s, (x, y) in zip(signs, PAIRS)]
        out.append(_make("chsh", k, terms, 2, {"alpha": alpha, "beta": beta, "gamma": gamma}))
    _check_size("chsh", out)
    check_dual_forms(out)
    return tuple(out)


def canonical_chsh() -> LinearInequality:
    """<ab> + <ab'> + <a'b> - <a'b'> <= 2"""
    return next(q for q in chsh_family() if q.parameters == {"alpha": 0, "beta": 0, "gamma": 0})


@functools.lru_cache(maxsize=None)
def chsh_prob_form() -> tuple:
    """(lower, upper) for P(A=B) + P(A=B') + P(A'=B) + P(A'!=B') in [1, 3]."""
    indicator = [Fraction(0)] * 16
    corr_signs = (1, 1, 1, -1)
    for (x, y), s in zip(PAIRS, corr_signs):
        for A, B in itertools.product(range(2), repeat=2):
            same = A == B
            if same == (s > 0):
                indicator[flat_index(x, y, A, B)] = Fraction(1)
    half = Fraction(1, 2)
    upper_terms = [(2, ONE)] + [(half * s, prod(x, y)) for (x, y), s in zip(PAIRS, corr_signs)]
    lower_terms = [(-c, sym) for c, sym in upper_terms]
    lower = _make("chsh_prob_form", 0, lower_terms, -1, {"side": "lower", "printed_bound": 1},
                  prob_coeffs=[-c for c in indicator])
    upper = _make("chsh_prob_form", 1, upper_terms, 3, {"side": "upper", "printed_bound": 3},
                  prob_coeffs=indicator)
    out = (lower, upper)
    _check_size("chsh_prob_form", out)
    check_dual_forms(out)
    chsh = canonical_chsh()
    for v in general_vertices().vertices:
        total = sum(c * x for c, x in zip(indicator, v.p))
        s_val = sum(c * x for c, x in zip(chsh.prob_coeffs, v.p))
        if total != (4 + s_val) / 2:
            raise CatalogError("probability-form sum differs from (4 + CHSH)/2")
    return out


@functools.lru_cache(maxsize=None)
def roy_singh_family() -> tuple:
    """|<xy> +- <x>^y| <= 1 +- <y>^x, each absolute value split in two.

    The companion inequalities with the parties' roles exchanged produce the
    same sixteen coefficient vectors, so they are not listed again.
    """
    out = []
    k = 0
    for x, y in PAIRS:
        E, M, N = prod(x, y), m1(x, y), m2(y, x)
        for sigma in (1, -1):
            pieces = (
                ("plus", [(1, E), (sigma, M), (-sigma, N)]),
                ("minus", [(-1, E), (-sigma, M), (-sigma, N)]),
            )
            for half, terms in pieces:
                out.append(_make("roy_singh", k, terms, 1,
                                 {"pair": _pair_name(x, y), "sign": sigma, "half": half}))
                k += 1
    _check_size("roy_singh", out)
    check_dual_forms(out)
    # the party-exchanged forms |<xy> +- <y>^x| <= 1 +- <x>^y give the same vectors
    swapped = set()
    for x, y in PAIRS:
        E, M, N = prod(x, y), m1(x, y), m2(y, x)
        for sigma in (1, -1):
            swapped.add(terms_to_prob([(1, E), (sigma, N), (-sigma, M)]))
            swapped.add(terms_to_prob([(-1, E), (-sigma, N), (-sigma, M)]))
    if swapped != {q.prob_coeffs for q in out}:
        raise CatalogError("party-exchanged Roy-Singh forms are not the same set")
    return tuple(out)


@functools.lru_cache(maxsize=None)
def leggett_form() -> tuple:
    """-1 + |<x>^y + <y>^x| <= <xy> <= 1 - |<x>^y - <y>^x|.

    Eight members (two sides for each setting pair); each is stored as its two
    linear pieces, with variant ids ``"<member>.1"`` and ``"<member>.2"``.
    """
    out = []
    for k, (x, y) in enumerate(PAIRS):
        E, M, N = prod(x, y), m1(x, y), m2(y, x)
        sides = (
            ("upper", [[(1, E), (1, M), (-1, N)], [(1, E), (-1, M), (1, N)]]),
            ("lower", [[(-1, E), (1, M), (1, N)], [(-1, E), (-1, M), (-1, N)]]),
        )
        for s, (side, pieces) in enumerate(sides):
            member = 2 * k + s
            for j, terms in enumerate(pieces, start=1):
                out.append(_make("leggett_form", f"{member}.{j}", terms, 1,
                                 {"pair": _pair_name(x, y), "side": side}, member=member))
    _check_size("leggett_form", out)
    check_dual_forms(out)
    rs = roy_singh_family()
    if {q.prob_coeffs for q in out} != {q.prob_coeffs for q in rs}:
        raise CatalogError("Leggett form is not equivalent to the Roy-Singh family")
    return tuple(out)


# ns4: two correlators sharing one setting, plus the marginals of the other
# party's two settings tagged with that shared setting.
NS4_SUBFAMILIES = (
    # (shared party, shared setting)
    (2, 0),  # <ab>, <a'b>, <a>^b, <a'>^b
    (1, 0),  # <ab>, <ab'>, <b>^a, <b'>^a
    (1, 1),  # <a'b'>, <a'b>, <b>^a', <b'>^a'
    (2, 1),  # <a'b'>, <ab'>, <a>^b', <a'>^b'
)


def _ns4_symbols(party, s):
    if party == 2 and s == 0:
        return prod(0, 0), prod(1, 0), m1(0, 0), m1(1, 0)
    if party == 1 and s == 0:
        return prod(0, 0), prod(0, 1), m2(0, 0), m2(1, 0)
    if party == 1 and s == 1:
        return prod(1, 1), prod(1, 0), m2(0, 1), m2(1, 1)
    return prod(1, 1), prod(0, 1), m1(0, 1), m1(1, 1)


@functools.lru_cache(maxsize=None)
def ns4_family() -> tuple:
    """Four-term no-signaling inequalities, bound 2."""
    out = []
    k = 0
    for party, s in NS4_SUBFAMILIES:
        syms = _ns4_symbols(party, s)
        for alpha, beta, gamma in itertools.product(range(2), repeat=3):
            signs = chsh_signs(alpha, beta, gamma)
            # the same sign pattern as CHSH, on (product, product, marginal, marginal)
            terms = [(signs[0], syms[0]), (signs[1], syms[1]), (signs[2], syms[2]), (signs[3], syms[3])]
            shared = (PARTY2_SETTINGS if party == 2 else PARTY1_SETTINGS)[s]
            out.append(_make("ns4", k, terms, 2,
                             {"shared_setting": shared, "alpha": alpha, "beta": beta, "gamma": gamma}))
            k += 1
    _check_size("ns4", out)
    check_dual_forms(out)
    return tuple(out)


def ns4_base() -> LinearInequality:
    """<ab> + <a'b> + <a>^b - <a'>^b <= 2"""
    return ns4_family()[0]


# --- the six-term family ------------------------------------------------------------

NS6_TEMPLATE = (
    (-1, prod(0, 0)), (-1, prod(1, 1)),
    (1, m1(0, 1)), (1, m2(0, 1)), (1, m1(1, 0)), (1, m2(1, 0)),
)


def _outcome_generators():
    # outcome exchange on the template's unprimed observables: party 1, party 2, both
    return (
        lambda t: flip_outcome(t, 1, 0),
        lambda t: flip_outcome(t, 2, 0),
        lambda t: flip_outcome(flip_outcome(t, 1, 0), 2, 0),
    )


def _setting_generators():
    return (
        lambda t: swap_settings(t, 1),
        lambda t: swap_settings(t, 2),
        lambda t: swap_settings(swap_settings(t, 1), 2),
    )


def positivity_reduced_forms():
    """Untagged forms of 4P(++|ab) + 4P(++|a'b') >= 0 and its setting-swap images."""
    base = ((-1, prod(0, 0)), (-1, prod(1, 1)),
            (-1, m1(0, 0)), (-1, m2(0, 0)), (-1, m1(1, 1)), (-1, m2(1, 1)))
    forms = []
    for s1, s2 in itertools.product(range(2), repeat=2):
        t = base
        if s1:
            t = swap_settings(t, 1)
        if s2:
            t = swap_settings(t, 2)
        forms.append(reduced_form(t))
    return forms


@dataclass
class Ns6Generation:
    inequalities: list      # (terms, masks producing it)
    excluded: int
    combinations: int


def generate_ns6() -> Ns6Generation:
    """Apply every combination of the six relabeling generators to the template.

    A combination is a subset of the generators, applied outcome exchanges
    first and setting swaps second.  Results are deduplicated on their exact
    coefficient vectors; forms that reduce to the pure non-negativity
    inequality are dropped.
    """
    outs, sets = _outcome_generators(), _setting_generators()
    trivial = positivity_reduced_forms()
    seen: dict = {}
    excluded = 0
    for mask in range(64):
        t = NS6_TEMPLATE
        for i, g in enumerate(outs):
            if mask >> i & 1:
                t = g(t)
        for i, g in enumerate(sets):
            if mask >> (3 + i) & 1:
                t = g(t)
        if reduced_form(t) in trivial:
            excluded += 1
            continue
        key = terms_to_prob(t)
        if key in seen:
            seen[key][1].append(mask)
        else:
            seen[key] = (t, [mask])
    return Ns6Generation(list(seen.values()), excluded, 64)


def ns6_closed_form():
    """The closed-form parameterization: 3 + 4 forms and their a <-> a' images."""
    forms = []
    for alpha, beta in ((0, 1), (1, 0), (1, 1)):
        sa, sb = (-1) ** alpha, (-1) ** beta
        terms = ((-1, prod(0, 0)), (-1, prod(1, 1)),
                 (-sa, m1(0, 1)), (-sa, m2(0, 1)), (-sb, m1(1, 0)), (-sb, m2(1, 0)))
        forms.append(({"form": "equal_products", "alpha": alpha, "beta": beta}, terms))
    for gamma, delta in itertools.product(range(2), repeat=2):
        terms = (
            (-(-1) ** gamma, prod(0, 0)),
            (-(-1) ** (gamma + 1), prod(1, 1)),
            (-(-1) ** (1 + gamma * delta), m1(0, 1)),
            (-(-1) ** (1 - gamma * (delta + 1)), m2(0, 1)),
            (-(-1) ** ((delta + 1) * (1 - gamma) + 1), m1(1, 0)),
            (-(-1) ** (1 + delta * (1 - gamma)), m2(1, 0)),
        )
        forms.append(({"form": "opposite_products", "gamma": gamma, "delta": delta}, terms))
    out = []
    for params, terms in forms:
        out.append((dict(params, exchanged=False), terms))
    for params, terms in forms:
        out.append((dict(params, exchanged=True), swap_settings(terms, 1)))
    return out


@functools.lru_cache(maxsize=None)
def ns6_family() -> tuple:
    """Six-term no-signaling inequalities, bound 2.

    Built from the relabeling closure of the template and required to
    coincide exactly with the closed-form parameterization.
    """
    gen = generate_ns6()
    printed = ns6_closed_form()
    gen_keys = {terms_to_prob(t) for t, _ in gen.inequalities}
    printed_keys = [terms_to_prob(t) for _, t in printed]
    if len(gen_keys) != 14 or set(printed_keys) != gen_keys or len(set(printed_keys)) != 14:
        only_gen = [form_str(t) for t, _ in gen.inequalities if terms_to_prob(t) not in set(printed_keys)]
        only_printed = [form_str(t) for (_, t), k in zip(printed, printed_keys) if k not in gen_keys]
        raise CatalogError(
            f"six-term generation gave {len(gen_keys)} inequalities; "
            f"only generated: {only_gen}; only closed form: {only_printed}"
        )
    masks = {terms_to_prob(t): m for t, m in gen.inequalities}
    out = []
    for k, (params, terms) in enumerate(printed):
        key = terms_to_prob(terms)
        params = dict(params, generator_masks=masks[key])
        out.append(_make("ns6", k, terms, 2, params))
    _check_size("ns6", out)
    check_dual_forms(out)
    return tuple(out)


def ns6_base() -> LinearInequality:
    """-<ab> - <a'b'> + <a>^b' + <b>^a' + <a'>^b + <b'>^a <= 2"""
    key = terms_to_prob(NS6_TEMPLATE)
    return next(q for q in ns6_family() if q.prob_coeffs == key)


def family(name: str) -> tuple:
    builders = {
        "trivial": trivial_family, "chsh": chsh_family, "chsh_prob_form": chsh_prob_form,
        "roy_singh": roy_singh_family, "leggett_form": leggett_form,
        "ns4": ns4_family, "ns6": ns6_family,
    }
    name = name.replace("-", "_")
    if name not in builders:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return builders[name]()


def full_catalog() -> list:
    return [q for name in FAMILIES for q in family(name)]


def find(name: str, variant_id) -> LinearInequality:
    for q in family(name):
        if q.variant_id == str(variant_id):
            return q
    raise ValueError(f"{name} has no variant {variant_id!r}")


def family_members(ineqs) -> dict:
    """Group linear pieces by the printed inequality they belong to."""
    out: dict = {}
    for q in ineqs:
        out.setdefault(q.member, []).append(q)
    return out


# --- evaluation ------------------------------------------------------------------


@dataclass(frozen=True)
class Evaluation:
    value: object
    satisfied: bool
    slack: object


def evaluate(ineq: LinearInequality, b: Behavior) -> Evaluation:
    value = sum(c * x for c, x in zip(ineq.prob_coeffs, b.p) if c)
    if b.exact:
        return Evaluation(value, value <= ineq.bound, ineq.bound - value)
    bound = float(ineq.bound)
    return Evaluation(value, value <= bound + float(b.tolerance), bound - value)


def max_over(ineq: LinearInequality, kind: str, cross_check: bool = False):
    """Exact maximum of the left-hand side over a polytope, with all maximizing vertices.

    With ``cross_check`` the value is recomputed by the simplex method from
    the inequality description of the polytope (the local polytope has no
    short one, so there the LP runs over convex weights on the vertices).
    """
    vs = vertex_set(kind)
    opt, argmax = maximize_over_vertices(ineq.prob_coeffs, vs.vectors())
    if cross_check:
        lp_opt = polytope_lp_max(ineq.prob_coeffs, vs.kind).optimum
        if lp_opt != opt:
            raise AssertionError(f"vertex maximum {opt} != simplex maximum {lp_opt}")
    return opt, argmax


def polytope_lp_max(coeffs, kind: str):
    if kind == "local":
        vectors = vertex_set(kind).vectors()
        vals = [sum(c * x for c, x in zip(coeffs, v)) for v in vectors]
        return simplex_solve(LPProblem(vals, [[1] * len(vals)], [EQ], [1]))
    rows = normalization_rows()
    rhs = [1] * 4
    if kind in ("no_signaling", "ns"):
        rows += no_signaling_rows()
        rhs += [0] * 8
    elif kind != "general":
        raise ValueError(f"unknown polytope {kind!r}")
    return simplex_solve(LPProblem(list(coeffs), rows, [EQ] * len(rows), rhs))


def is_structurally_chsh_like(ineq: LinearInequality) -> bool:
    """True if replacing two correlators of some CHSH variant by two marginals gives ``ineq``."""
    prods = {sym: c for c, sym in ineq.terms if sym[0] == "prod"}
    margs = [sym for _, sym in ineq.terms if sym[0] in ("m1", "m2")]
    if len(prods) != 2 or len(margs) != 2:
        return False
    for q in chsh_family():
        cp = {sym: c for c, sym in q.terms}
        if all(cp.get(sym) == c for sym, c in prods.items()):
            return True
    return False
