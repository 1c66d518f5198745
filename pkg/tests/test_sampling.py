import random

from decompio.composition import check_shared_output_bounded
from decompio.model import check_input_enabled, isomorphic
from decompio.onthefly import check_internal_choice
from decompio.sampling import deterministic_components, random_env, random_iolts, random_pair
from decompio.semantics import check_divergence


def test_component_counts():
    counts = [sum(1 for _ in deterministic_components(n, ("w",), ("u", "x"))) for n in (1, 2, 3)]
    # 1 state: no output or a u or x loop; 2 states: 10 * 10 tables less 30 with state 1 unreachable
    assert counts == [3, 70, 2499]


def test_components_are_canonical_and_distinct():
    comps = list(deterministic_components(2, ("w",), ("u", "x")))
    for c in comps:
        assert check_input_enabled(c)
        assert not any(x == "tau" for _, x, _ in c.transitions)
        assert len({(s, x) for s, x, _ in c.transitions}) == len(c.transitions)
    for i, a in enumerate(comps):
        assert not any(isomorphic(a, b) for b in comps[i + 1 :])


def test_random_models_converge():
    rng = random.Random(3)
    for _ in range(200):
        assert not check_divergence(random_iolts(rng)).divergent


def test_internal_choice_envs():
    rng = random.Random(4)
    made = 0
    for _ in range(200):
        env = random_env(rng, ("a", "u"), ("w",), internal_choice=True)
        if env is None:
            continue
        made += 1
        assert check_input_enabled(env) and check_internal_choice(env)
    assert made > 50


def test_pairs_have_bounded_platforms():
    rng = random.Random(5)
    for _ in range(100):
        pair = random_pair(rng, "visible")
        if pair is not None:
            spec, env = pair
            assert check_shared_output_bounded(env, {"w"})
