import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

import rainbow_kit.monopath as mp
from rainbow_kit.gen import gen_random_paths, gen_random_st_paths, gen_sharpness_paths
from rainbow_kit.monopath import (
    LabeledPath,
    PathInstance,
    find_monotone_ss_forest,
    find_monotone_ss_treegrow,
    find_monotone_st,
    is_rainbow_monotone,
    is_strongly_rainbow,
    strongly_rainbow_from_monotone,
)
from rainbow_kit.oracle import exists_monotone_path_exact

import brute

UV = PathInstance(S={0, 1}, Y=set(), paths=[(0, 1)])


# instances -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs,needle",
    [
        (dict(S={0, 1}, Y={1}, paths=[]), "S and Y intersect"),
        (dict(S={0, 1}, Y={2}, paths=[(0, 2)]), "does not end in S"),
        (dict(S={0, 1}, Y={2}, paths=[(2, 1)]), "does not start in S"),
        (dict(S={0, 1}, Y={2}, paths=[(0, 3, 1)]), "interior vertex outside Y"),
        (dict(S={0, 1}, Y={2}, paths=[(0, 2, 2, 1)]), "repeats a vertex"),
        (dict(S={0}, Y={2}, T={0}, paths=[]), "S and T intersect"),
    ],
)
def test_instance_validation(kwargs, needle):
    with pytest.raises(ValueError, match=needle):
        PathInstance(**kwargs)


def test_instance_json_round_trip():
    inst = gen_random_st_paths(3, seed=4)
    assert PathInstance.from_json(inst.to_json()) == inst
    ss = gen_random_paths(3, seed=4)
    assert PathInstance.from_json(ss.to_json()) == ss
    with pytest.raises(ValueError, match="'paths'"):
        PathInstance.from_json({"S": [0], "Y": []})


# validator --------------------------------------------------------------------------


def test_single_labeled_edge_is_monotone():
    assert is_rainbow_monotone(LabeledPath((0, 1), (0,)), UV)


def test_labels_must_strictly_increase():
    inst = PathInstance(S={0, 1}, Y={2}, paths=[(0, 2, 1), (0, 2, 1)])
    assert is_rainbow_monotone(LabeledPath((0, 2, 1), (0, 1)), inst)
    assert not is_rainbow_monotone(LabeledPath((0, 2, 1), (1, 0)), inst)
    assert not is_rainbow_monotone(LabeledPath((0, 2, 1), (0, 0)), inst)


def test_edges_must_belong_to_their_paths():
    inst = PathInstance(S={0, 1}, Y={2}, paths=[(0, 2, 1), (1, 0)])
    assert not is_rainbow_monotone(LabeledPath((0, 1), (1,)), inst)
    assert not is_rainbow_monotone(LabeledPath((0, 1), (0,)), inst)
    assert is_rainbow_monotone(LabeledPath((1, 0), (1,)), inst)


def test_endpoint_rules():
    inst = PathInstance(S={0, 1}, Y={2}, paths=[(0, 2, 1)])
    assert not is_rainbow_monotone(LabeledPath((0, 2), (0,)), inst)


def test_dangling_label():
    with pytest.raises(ValueError, match="dangling"):
        is_rainbow_monotone(LabeledPath((0, 1), (3,)), UV)


# S-S algorithms ------------------------------------------------------------------------


ALGOS = [find_monotone_ss_treegrow, find_monotone_ss_forest]


@pytest.mark.parametrize("algo", ALGOS)
def test_single_edge(algo):
    assert algo(UV) == LabeledPath((0, 1), (0,))


def all_ss_paths(u, v, ys):
    out = []
    for k in range(len(ys) + 1):
        for mid in permutations(ys, k):
            out.append((u, *mid, v))
            out.append((v, *mid, u))
    return out


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("algo", ALGOS)
def test_sharpness_plus_any_extra_path(m, algo):
    base = gen_sharpness_paths(m, "ss_double")
    for extra in all_ss_paths(0, 1, sorted(base.Y)):
        inst = PathInstance(S=base.S, Y=base.Y, paths=base.paths + (extra,))
        out = algo(inst)
        assert out is not None and is_rainbow_monotone(out, inst)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10), st.integers(2, 4), st.integers(0, 2**31))
def test_random_instances_validate_with_both_algorithms(n_y, n_s, seed):
    inst = gen_random_paths(n_y, n_s=n_s, seed=seed)
    a = find_monotone_ss_treegrow(inst, debug=True)
    b = find_monotone_ss_forest(inst)
    assert is_rainbow_monotone(a, inst)
    assert is_rainbow_monotone(b, inst)
    # every step before the winning path added a Y vertex
    assert max(a.labels) <= 2 * n_y


def test_cross_check_thousand_instances():
    rng = random.Random(11)
    differ = 0
    for trial in range(1000):
        inst = gen_random_paths(rng.randint(0, 8), n_s=rng.randint(2, 4), seed=trial)
        a, b = find_monotone_ss_treegrow(inst), find_monotone_ss_forest(inst)
        assert is_rainbow_monotone(a, inst) and is_rainbow_monotone(b, inst)
        differ += a != b
    assert differ > 0  # the two constructions are genuinely different


def test_forest_contraction_when_all_paths_share_a_terminal(monkeypatch):
    calls = []
    real = mp._contract_and_route

    def spy(*args):
        calls.append(args[2])
        return real(*args)

    monkeypatch.setattr(mp, "_contract_and_route", spy)
    inst = PathInstance(S={0, 1}, Y={2, 3}, paths=[(0, 2, 1), (0, 2, 3, 1), (0, 2, 3, 1)])
    out = find_monotone_ss_forest(inst)
    assert calls == [1]
    assert out == LabeledPath((0, 2, 3, 1), (0, 1, 2))
    assert is_rainbow_monotone(out, inst)


def test_forest_contraction_is_reached_on_random_instances(monkeypatch):
    calls = []
    real = mp._contract_and_route
    monkeypatch.setattr(mp, "_contract_and_route", lambda *a: calls.append(1) or real(*a))
    for seed in range(300):
        inst = gen_random_paths(5, n_s=2, seed=seed)
        assert is_rainbow_monotone(find_monotone_ss_forest(inst), inst)
    assert calls


def test_below_guarantee_falls_back_to_exact_search(caplog):
    inst = gen_sharpness_paths(2, "ss_double")
    with caplog.at_level("WARNING"):
        assert find_monotone_ss_treegrow(inst) is None
        assert find_monotone_ss_forest(inst) is None
    assert "no guarantee" in caplog.text
    # one path cannot supply two edges; two copies can
    short = PathInstance(S={0, 1}, Y={2, 3}, paths=[(0, 2, 1)])
    assert find_monotone_ss_treegrow(short) is None
    twice = PathInstance(S={0, 1}, Y={2, 3}, paths=[(0, 2, 1), (0, 2, 1)])
    assert find_monotone_ss_treegrow(twice) == LabeledPath((0, 2, 1), (0, 1))


def test_tree_state_checker_flags_third_tree():
    trees = {0: {0: None, 5: (0, 0)}, 1: {1: None, 5: (1, 1)}, 2: {2: None, 5: (2, 2)}}
    with pytest.raises(AssertionError):
        mp.check_tree_state(trees, frozenset({5}))


# S-T ------------------------------------------------------------------------------------


def test_st_single_edge():
    inst = PathInstance(S={0}, Y=set(), T={1}, paths=[(0, 1)])
    assert find_monotone_st(inst) == LabeledPath((0, 1), (0,))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_st_sharpness(m):
    inst = gen_sharpness_paths(m, "st_single")
    assert exists_monotone_path_exact(inst) is None
    assert not brute.monotone_path_exists(inst.S, inst.Y, inst.paths, inst.T)
    more = PathInstance(S=inst.S, Y=inst.Y, T=inst.T, paths=inst.paths + inst.paths[:1])
    out = find_monotone_st(more)
    assert is_rainbow_monotone(out, more)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_st_random_instances(n_y, n_s, n_t, seed):
    inst = gen_random_st_paths(n_y, n_s, n_t, seed=seed)
    out = find_monotone_st(inst)
    assert is_rainbow_monotone(out, inst)
    assert max(out.labels) <= n_y


def test_wrong_instance_kind():
    with pytest.raises(ValueError):
        find_monotone_st(UV)
    st_inst = PathInstance(S={0}, Y=set(), T={1}, paths=[(0, 1)])
    with pytest.raises(ValueError):
        find_monotone_ss_treegrow(st_inst)
    with pytest.raises(ValueError):
        find_monotone_ss_forest(st_inst)


# strongly rainbow --------------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 6), st.integers(0, 2**31))
def test_singleton_sets_reduce_to_treegrow(n_y, seed):
    inst = gen_random_paths(n_y, seed=seed)
    H = [[p] for p in inst.paths]
    out = strongly_rainbow_from_monotone(inst.S, inst.Y, H)
    assert out == find_monotone_ss_treegrow(inst)
    assert is_strongly_rainbow(out, inst.S, inst.Y, H)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_strongly_rainbow_sharpness(m):
    base = gen_sharpness_paths(m, "ss_double")
    H = [[p] for p in base.paths]
    assert strongly_rainbow_from_monotone(base.S, base.Y, H) is None
    out = strongly_rainbow_from_monotone(base.S, base.Y, H + [[base.paths[0]]])
    assert out is not None and is_strongly_rainbow(out, base.S, base.Y, H + [[base.paths[0]]])


def test_set_with_two_disjoint_paths_is_used_once():
    S, Y = {0, 1, 2, 3}, {4, 5}
    H = [[(0, 4, 1), (2, 5, 3)], [(0, 5, 3)], [(2, 4, 1)], [(1, 5, 2)], [(3, 4, 0)]]
    out = strongly_rainbow_from_monotone(S, Y, H)
    assert out is not None
    assert len(set(out.labels)) == len(out.labels)
    assert is_strongly_rainbow(out, S, Y, H)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 6), st.integers(0, 2**31))
def test_random_set_families(n_y, seed):
    rng = random.Random(seed)
    S = list(range(4))
    Y = list(range(4, 4 + n_y))
    H, total = [], 0
    while total < 2 * n_y + 1:
        group, used = [], set()
        for _ in range(rng.randint(1, 3)):
            a, b = rng.sample(S, 2)
            p = (a, *rng.sample(Y, rng.randint(0, len(Y))), b)
            if used.isdisjoint(p):
                group.append(p)
                used.update(p)
        H.append(group)
        total += len(group)
    out = strongly_rainbow_from_monotone(set(S), set(Y), H)
    assert is_strongly_rainbow(out, set(S), set(Y), H)


def test_overlapping_paths_in_one_set_are_rejected():
    with pytest.raises(ValueError, match="disjoint"):
        strongly_rainbow_from_monotone({0, 1}, {2}, [[(0, 2, 1), (1, 2, 0)]])
