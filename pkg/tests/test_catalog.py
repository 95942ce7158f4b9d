import itertools

import pytest

import oracles as O
from bellscope.catalog import (
    FAMILIES,
    NS6_TEMPLATE,
    canonical_chsh,
    chsh_prob_form,
    evaluate,
    family,
    family_members,
    find,
    flip_outcome,
    form_str,
    full_catalog,
    generate_ns6,
    is_structurally_chsh_like,
    max_over,
    ns4_base,
    ns6_base,
    ns6_closed_form,
    parse_form,
    permute_vector,
    reduced_form,
    swap_settings,
    terms_to_prob,
)
from bellscope.core import uniform_behavior
from bellscope.polytopes import (
    general_vertices,
    pr_box,
    signaling_protocol_4,
    signaling_protocol_6,
)


def test_family_sizes():
    for name in FAMILIES:
        assert len(family_members(family(name))) == O.FAMILY_SIZES[name]
    assert len(family("leggett_form")) == 16
    assert len(family("ns4")) + len(family("ns6")) == 46


def test_family_maxima():
    for name, expected in O.FAMILY_MAXIMA.items():
        for q in family(name):
            got = tuple(max_over(q, k)[0] for k in ("local", "no_signaling", "general"))
            assert got == expected, q


def test_cross_checked_maxima():
    for q in family("chsh") + family("ns6"):
        for k in ("local", "no_signaling", "general"):
            max_over(q, k, cross_check=True)


def test_chsh_variant_k_is_maximized_by_pr_k():
    for k in range(8):
        assert evaluate(find("chsh", k), pr_box(k)).value == 4
        others = [evaluate(find("chsh", j), pr_box(k)).value for j in range(8) if j != k]
        assert max(others) < 4


def test_canonical_forms():
    assert canonical_chsh().expectation_form == "+<ab> +<ab'> +<a'b> -<a'b'>"
    assert ns4_base().expectation_form == "+<ab> +<a'b> +<a>^b -<a'>^b"
    assert ns6_base().expectation_form == "-<ab> -<a'b'> +<a>^b' +<b>^a' +<a'>^b +<b'>^a"


def test_signaling_protocols():
    assert evaluate(ns4_base(), signaling_protocol_4()).value == O.SIGNALING_VALUES["ns4"]
    assert evaluate(ns6_base(), signaling_protocol_6()).value == O.SIGNALING_VALUES["ns6"]


def test_prob_form_relation():
    lower, upper = chsh_prob_form()
    assert upper.bound == 3 and lower.bound == -1
    assert upper.expectation_form == "+2 +1/2<ab> +1/2<ab'> +1/2<a'b> -1/2<a'b'>"
    u = uniform_behavior()
    assert evaluate(upper, u).value == 2


def test_ns6_generation_matches_closed_form():
    gen = generate_ns6()
    keys = {terms_to_prob(t) for t, _ in gen.inequalities}
    assert len(keys) == 14 and gen.excluded == 0
    assert keys == {terms_to_prob(t) for _, t in ns6_closed_form()}
    assert keys == {q.prob_coeffs for q in family("ns6")}


def test_ns6_is_not_group_closed():
    # closing under arbitrary compositions leaves the 14-set
    seen = {terms_to_prob(NS6_TEMPLATE)}
    frontier = [NS6_TEMPLATE]
    gens = [lambda t: flip_outcome(t, 1, 0), lambda t: flip_outcome(t, 2, 0),
            lambda t: swap_settings(t, 1), lambda t: swap_settings(t, 2)]
    while frontier:
        t = frontier.pop()
        for g in gens:
            s = g(t)
            k = terms_to_prob(s)
            if k not in seen:
                seen.add(k)
                frontier.append(s)
    assert len(seen) == 32


def test_symbolic_relabeling_matches_vector_permutation():
    q = ns6_base()
    flipped = terms_to_prob(flip_outcome(q.terms, 1, 0))
    # exchanging A's outcomes at a maps (a, b, A, B) to (a, b, 1 - A, B) when a = 0
    perm = permute_vector(q.prob_coeffs, lambda a, b, A, B: (a, b, 1 - A if a == 0 else A, B))
    assert flipped == perm
    swapped = terms_to_prob(swap_settings(q.terms, 2))
    assert swapped == permute_vector(q.prob_coeffs, lambda a, b, A, B: (a, 1 - b, A, B))


def test_form_roundtrip():
    for q in full_catalog():
        assert parse_form(q.expectation_form) == q.terms
        assert form_str(parse_form(q.expectation_form)) == q.expectation_form
    with pytest.raises(ValueError):
        parse_form("+<a>^a'")


def test_dual_forms_on_general_vertices():
    from bellscope.catalog import evaluate_form

    for q in full_catalog():
        for v in general_vertices().vertices[::17]:
            assert evaluate(q, v).value == evaluate_form(q.terms, v)


def test_roy_singh_equals_leggett():
    assert {q.prob_coeffs for q in family("roy_singh")} == {q.prob_coeffs for q in family("leggett_form")}


def test_roy_singh_pieces_are_positivity():
    # within its block, 1 - lhs = 4 P(o) for a single outcome pair
    for q in family("roy_singh"):
        block = [i for i, c in enumerate(q.prob_coeffs) if c]
        assert len(block) == 4 and block[-1] - block[0] == 3
        slack = sorted(1 - q.prob_coeffs[i] for i in block)
        assert slack == [0, 0, 0, 4]


def _two_entry_form(q, vertices):
    """(i, j) with lhs = bound - 4 (p_i + p_j) on every vertex, or None."""
    for i, j in itertools.combinations(range(16), 2):
        if i // 4 == j // 4:
            continue
        if all(sum(c * x for c, x in zip(q.prob_coeffs, v)) == q.bound - 4 * (v[i] + v[j])
               for v in vertices):
            return i, j
    return None


def test_ns6_is_positivity_on_no_signaling_set():
    from bellscope.polytopes import ns_vertices

    V = ns_vertices().vectors()
    for q in family("ns6"):
        assert _two_entry_form(q, V) is not None
        red = reduced_form(q.terms)
        assert len(red) == 6 and set(red.values()) <= {1, -1}
    # it does not hold off the no-signaling set
    assert _two_entry_form(ns6_base(), general_vertices().vectors()) is None


def test_structural_similarity():
    assert all(is_structurally_chsh_like(q) for q in family("ns4"))
    assert not any(is_structurally_chsh_like(q) for q in family("ns6"))


def test_find_errors():
    with pytest.raises(ValueError):
        find("chsh", 99)
    with pytest.raises(ValueError):
        family("nope")


def test_json_export():
    j = find("leggett_form", "3.2").to_json()
    assert j["variant_id"] == "3.2" and j["bound"] == "1/1"
    assert len(j["prob_coeffs"]) == 16
