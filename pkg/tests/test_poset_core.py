import json

import pytest
from hypothesis import given, settings

from app.services.errors import (
    HeightTooSmall,
    NaturalityViolation,
    OutOfRange,
    PosetError,
    PosetParseError,
)
from app.services.poset_core import (
    build_poset,
    hasse_dot,
    load_poset,
    middle_sections,
    parse_poset,
    parse_poset_json,
    poset_to_dict,
    poset_to_text,
    random_poset,
    stats,
    up_down,
)
from app.services.verification import enumerate_posets
from strategies import posets


def test_build_closes_transitively(example_poset):
    assert example_poset.rel_count == 11
    assert example_poset.precedes(1, 6)
    assert not example_poset.precedes(1, 2)


def test_stats_example(example_poset):
    s = stats(example_poset)
    assert s.rel_count == 11
    assert s.ext == frozenset({1, 2, 4, 5, 6})
    assert len(s.rel_e) == 6
    assert s.height == 2
    assert len(s.covers) == 5
    assert s.components == 1


def test_stats_empty_and_antichain(antichain3):
    s = stats(build_poset(0, []))
    assert (s.rel_count, s.height, s.components) == (0, 0, 0)
    s = stats(antichain3)
    assert s.ext == frozenset({1, 2, 3})
    assert s.components == 3
    assert s.height == 0


def test_chain_statistics():
    P = build_poset(3, [(1, 2), (2, 3)])
    assert stats(P).rel_e == frozenset({(1, 3)})
    assert P.interior == (2,)
    assert P.height == 2


def test_up_down_example(example_poset):
    profile = up_down(example_poset, 3)
    assert (profile.d, profile.u, profile.d_e, profile.u_e) == (2, 3, 2, 3)
    assert profile.b_lower == frozenset({(1, 3), (2, 3)})
    assert profile.b_upper == frozenset({(3, 4), (3, 5), (3, 6)})


def test_up_down_rejects_unknown_element(example_poset):
    with pytest.raises(OutOfRange):
        up_down(example_poset, 7)


def test_naturality_violation():
    with pytest.raises(NaturalityViolation):
        build_poset(3, [(2, 1)])
    with pytest.raises(NaturalityViolation):
        build_poset(3, [(2, 2)])


def test_out_of_range():
    with pytest.raises(OutOfRange):
        build_poset(3, [(1, 4)])
    with pytest.raises(OutOfRange):
        build_poset(-1, [])


def test_middle_sections(height_three_poset, example_poset):
    assert middle_sections(height_three_poset) == [(3, 5)]
    assert middle_sections(example_poset) == [(3,)]
    assert middle_sections(build_poset(3, [(1, 2), (2, 3)])) == [(2,)]
    # wrong height gives nothing
    assert middle_sections(example_poset, 3) == []


def test_middle_sections_several_chains():
    P = build_poset(5, [(1, 2), (1, 3), (2, 4), (3, 4), (4, 5)])
    assert middle_sections(P) == [(2, 4), (3, 4)]


def test_middle_sections_needs_height_two(antichain3):
    with pytest.raises(HeightTooSmall):
        middle_sections(antichain3)
    with pytest.raises(HeightTooSmall):
        middle_sections(antichain3, 1)


def test_hasse_dot_chain():
    P = build_poset(2, [(1, 2)])
    assert hasse_dot(P) == (
        'digraph P {\n'
        '  rankdir=BT;\n'
        '  node [shape=circle];\n'
        '  1 [label="1"];\n'
        '  2 [label="2"];\n'
        '  1 -> 2;\n'
        '}\n'
    )


def test_hasse_dot_uses_covers_and_names(example_poset):
    dot = hasse_dot(build_poset(3, [(1, 2), (2, 3)], {3: "2'"}))
    assert '  1 -> 3;' not in dot
    assert '  3 [label="2\'"];' in dot
    assert hasse_dot(example_poset).count('->') == 5


def test_hasse_dot_escapes_quotes_in_names():
    P = build_poset(2, [(1, 2)], {1: 'a"b', 2: 'c\\d'})
    dot = hasse_dot(P)
    assert '  1 [label="a\\"b"];' in dot
    assert '  2 [label="c\\\\d"];' in dot


def test_parse_chained_lines(example_poset):
    P = parse_poset('# worked example\nn 6\n1,2 < 3 < 4,5,6\n')
    assert P == example_poset


def test_parse_names():
    P = parse_poset('n 3\nname 1 a\nname 2 b\na < b\n2 < 3')
    assert P.rel_count == 3
    assert P.name(1) == 'a'
    assert P.name(3) == '3'


@pytest.mark.parametrize('text, line', [
    ('n 3\n1 < 5', 2),
    ('1 < 2', 1),
    ('n 3\n\n3 < 1', 3),
    ('n 3\n1 2', 2),
    ('n 3\nn 4', 2),
    ('n 3\n1 < x', 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(PosetParseError) as excinfo:
        parse_poset(text)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f'line {line}:')


def test_parse_missing_header():
    with pytest.raises(PosetParseError):
        parse_poset('# nothing here\n')


def test_parse_json(example_poset):
    P = parse_poset_json({'n': 6, 'relations': [[1, 3], [2, 3], [3, 4], [3, 5], [3, 6]]})
    assert P == example_poset
    with pytest.raises(PosetError):
        parse_poset_json({'n': 3, 'relations': [[3, 1]]})
    with pytest.raises(PosetParseError):
        parse_poset_json({'relations': []})


def test_load_poset_inline_and_file(tmp_path, example_poset):
    assert load_poset('n 6; 1,2 < 3 < 4,5,6') == example_poset

    path = tmp_path / 'example.json'
    path.write_text(json.dumps(poset_to_dict(example_poset)))
    assert load_poset(str(path)) == example_poset

    with pytest.raises(PosetParseError):
        load_poset('{"n": 3,')


def test_text_form_reparses(height_three_poset):
    P = build_poset(3, [(1, 3)], {3: "3'"})
    assert parse_poset(poset_to_text(P)) == P
    assert parse_poset(poset_to_text(P)).name(3) == "3'"
    assert parse_poset(poset_to_text(height_three_poset)) == height_three_poset


def test_random_poset_is_reproducible():
    import random
    a = random_poset(7, 0.4, random.Random(5))
    b = random_poset(7, 0.4, random.Random(5))
    assert a == b
    assert all(i < j for i, j in a.strict_order)


@given(posets(max_size=7))
@settings(max_examples=100, deadline=None)
def test_closure_and_ext_properties(P):
    for i, j in P.strict_order:
        assert i < j
        for k in P.above(j):
            assert P.precedes(i, k)
    assert set(P.interior).isdisjoint(P.ext)
    assert len(P.interior) + len(P.ext) == P.n
    s = stats(P)
    assert s.covers <= P.strict_order
    assert s.rel_e <= P.strict_order


@pytest.mark.parametrize('n', range(6))
def test_structural_invariants_on_every_small_poset(n):
    for P in enumerate_posets(n):
        s = stats(P)
        assert build_poset(n, s.covers) == P
        assert build_poset(n, P.strict_order) == P
        if P.height >= 2:
            for section in middle_sections(P):
                assert len(section) == P.height - 1
                assert set(section).isdisjoint(P.ext)
        if P.height <= 1:
            for p in P.elements:
                profile = up_down(P, p)
                assert profile.d_e == profile.d
                assert profile.u_e == profile.u
