import io
import json

import pytest

from klcells import cells, chargen, kl, reps
from klcells.laurent import lex_order, poly_from_terms

from conftest import system


def weight_run(name, weight):
    sys = system(name)
    space, params, order = kl.weight_params(sys, weight)
    data = kl.compute_kl(sys, params, order)
    left, edges = cells.left_cells(sys, data.mu)
    return sys, data, left


def test_bundled_tables_load():
    for name, rows, classes in [("a1", 2, 2), ("a2", 3, 3), ("a3", 5, 5),
                                ("b3", 10, 10), ("b4", 20, 20),
                                ("f4", 25, 25), ("i2_4", 5, 5),
                                ("i2_6", 6, 6), ("i2_8", 6, 7)]:
        table = reps.load_bundled_table(name)
        assert len(table.rows) == rows
        assert len(table.class_words) == classes
    a1 = reps.load_bundled_table("a1")
    assert sorted(a1.degrees) == [1, 1]
    assert {tuple(r) for r in a1.rows} == {(1, 1), (1, -1)}


def test_f4_table_shape():
    table = reps.load_bundled_table("f4")
    assert len(table.labels) == 25
    assert sorted(table.degrees) == sorted(
        [1] * 4 + [2] * 4 + [4] * 5 + [6] * 2 + [8] * 4 + [9] * 4 + [12, 16])
    assert table.labels == sorted(
        table.labels, key=lambda s: tuple(map(int, s.split("_"))))


def test_table_validation_errors():
    raw = chargen.dihedral_table(4)
    raw["irreducibles"][0]["values"][1] += 1
    with pytest.raises(reps.CharacterDataError):
        reps.load_character_table(io.StringIO(json.dumps(raw)))
    raw = chargen.dihedral_table(4)
    raw["class_sizes"][0] = 2
    with pytest.raises(reps.CharacterDataError):
        reps.load_character_table(io.StringIO(json.dumps(raw)))


def test_table_for_system_mismatch(i24, a2):
    table = reps.load_bundled_table("i2_4")
    assert reps.table_for_system(i24, table) == [0, 1, 2, 3, 4]
    with pytest.raises(reps.CharacterDataError):
        reps.table_for_system(a2, table)


def test_dixon_matches_closed_form_dihedral(i24, i26):
    for sys, name in ((i24, "i2_4"), (i26, "i2_6")):
        raw = chargen.dixon_table(sys)
        dixon = reps.load_character_table(io.StringIO(json.dumps(raw)))
        closed = reps.load_bundled_table(name)
        assert sorted(map(tuple, dixon.rows)) == sorted(map(tuple, closed.rows))


def test_trivial_and_sign_cells():
    for name, weight in (("I2:4", (2, 1)), ("A2", (1, 1)), ("B3", (1, 2, 2))):
        sys, data, left = weight_run(name, weight)
        mu_idx = reps.mu_index(data)
        triv = left.blocks[left.block_of[0]]
        assert triv == (0,)
        values = reps.cell_character(sys, data, triv, mu_idx,
                                     check_relations=True)
        assert all(v == 1 for v in values)
        sign_cell = left.blocks[left.block_of[sys.longest]]
        assert sign_cell == (sys.longest,)
        values = reps.cell_character(sys, data, sign_cell, mu_idx,
                                     check_relations=True)
        reps_classes = sys.conjugacy_classes()
        assert values == [(-1) ** sys.length[rep] for rep, _ in reps_classes]


def test_cell_action_matrix_by_hand(i24):
    """Two-element cell {s, ts} under the lexicographic order: the action
    entries follow the module rule with M^s_{s,ts} = v_s/v_t + v_t/v_s."""
    sys = i24
    space, params = kl.class_params(sys)
    order = lex_order(space)
    data = kl.compute_kl(sys, params, order)
    left, _ = cells.left_cells(sys, data.mu)
    s_elt = sys.word_to_element((0,))
    ts = sys.word_to_element((1, 0))
    cell = left.blocks[left.block_of[s_elt]]
    assert cell == (s_elt, ts)
    vs = poly_from_terms(space, [((1, 0), 1)])
    vsi = poly_from_terms(space, [((-1, 0), 1)])
    vt = poly_from_terms(space, [((0, 1), 1)])
    vti = poly_from_terms(space, [((0, -1), 1)])
    m_poly = poly_from_terms(space, [((1, -1), 1), ((-1, 1), 1)])
    mat_s = reps.cell_action_matrix(sys, data, cell, 0)
    # T_s e_s = -v_s^-1 e_s ; T_s e_ts = v_s e_ts + M e_s (sign (-1)^1 = -1)
    assert mat_s[0][0] == {k: -v for k, v in vs.items()} or \
        mat_s[0][0] == {space.inv(space.pack((1, 0))): -1}
    assert mat_s[0][0] == {space.pack((-1, 0)): -1}
    assert mat_s[1][1] == vs
    assert mat_s[0][1] == m_poly
    assert mat_s[1][0] == {}
    mat_t = reps.cell_action_matrix(sys, data, cell, 1)
    # T_t e_s = e_ts + v_t e_s ; T_t e_ts = -v_t^-1 e_ts
    assert mat_t[0][0] == vt
    assert mat_t[1][0] == {space.one: 1}
    assert mat_t[1][1] == {space.pack((0, -1)): -1}
    assert mat_t[0][1] == {}


def test_regular_character_sum():
    for name, weight, table_name in (("I2:6", (1, 2), "i2_6"),
                                     ("A3", (1, 1, 1), "a3"),
                                     ("B3", (2, 1, 1), "b3")):
        sys, data, left = weight_run(name, weight)
        chars = reps.all_cell_characters(sys, data, left,
                                         check_relations=(sys.size <= 24))
        table = reps.load_bundled_table(table_name)
        class_map = reps.table_for_system(sys, table)
        degrees = {}
        for values in chars:
            for lab, m in reps.decompose(values, table, class_map):
                degrees[lab] = degrees.get(lab, 0) + m
        # every irreducible occurs with total multiplicity equal to its degree
        for lab, deg in zip(table.labels, table.degrees):
            assert degrees.get(lab, 0) * table.norms[table.labels.index(lab)] \
                == deg


def test_decompose_rejects_mismatches(i24):
    table = reps.load_bundled_table("i2_4")
    class_map = reps.table_for_system(i24, table)
    with pytest.raises(reps.CharacterDataError):
        reps.decompose([3, 0, 0, 0, 0], table, class_map)  # not a character
    triv = [1, 1, 1, 1, 1]
    assert reps.decompose(triv, table, class_map) == [("1_1", 1)]
    assert reps.decomposition_name([("4_1", 1), ("16_1", 2)]) \
        == "4_1 + 2*16_1"


def test_folded_dihedral_decomposition():
    # the regular character of I2(8) decomposes with the folded row
    # carrying multiplicity two per member times ... exactly degree/norm
    sys = system("I2:8")
    table = reps.load_bundled_table("i2_8")
    class_map = reps.table_for_system(sys, table)
    regular = [sys.size] + [0] * (len(sys.conjugacy_classes()) - 1)
    got = dict(reps.decompose(regular, table, class_map))
    assert got["2_1+2_3"] == 2
    assert got["2_2"] == 2
    assert got["1_1"] == 1


def test_b2a_box_has_no_common_constituent():
    """The three constructible characters sharing the two-sided cell of
    1_3 at b = 2a have no irreducible constituent in common."""
    from klcells import pipeline

    ref = pipeline.load_reference_constructible("b2a")
    box = [dict(c) for c in ref["characters"]
           if dict(c) in ({"1_3": 1, "8_3": 1}, {"2_1": 1, "9_1": 1},
                          {"9_1": 1, "8_3": 1})]
    assert len(box) == 3
    common = set(box[0])
    for c in box[1:]:
        common &= set(c)
    assert common == set()
