import pytest

import santa_congest as sc

PATH1_LP = "mpc 1 1 1\nP 0 0 1\nC 0 0 1\n"
PATH2_LP = "mpc 3 2 2\nP 0 0 1\nP 1 0 1\nP 1 1 1\nP 2 1 1\nC 0 0 1\nC 1 1 1\n"


@pytest.mark.parametrize("variant,want", [("I1", "0"), ("I2", "1"), ("I3", "1")])
def test_path_values(variant, want):
    inst = sc.generate_path(variant, 5)
    assert sc.brute_force_opt(inst) == want
    r = sc.solve(inst, seed=1)
    assert r["valid"]
    assert r["value"] == want


def test_random_solve_is_valid_and_bounded():
    inst = sc.generate_random(5, 8, lo=1, hi=9, density=0.5, seed=3)
    r = sc.solve(inst, seed=4)
    check = sc.verify(inst, r["assignment"])
    assert check["valid"]
    assert check["min_value"] == r["value"]
    opt = sc.brute_force_opt(inst)
    from fractions import Fraction
    assert Fraction(r["value"]) * Fraction(r["alpha"]) >= Fraction(opt)


def test_seeded_runs_repeat_and_modes_agree():
    inst = sc.generate_mixed(children=4, big=2, small=12, seed=2)
    a = sc.solve(inst, seed=9)
    b = sc.solve(inst, seed=9)
    c = sc.solve(inst, seed=9, mode="faithful")
    assert a == b == c
    assert a["stats_csv"].splitlines()[0] == "run_id,phase,rounds,max_edge_bits,messages,violations"


def test_verify_rejects_non_edges():
    inst = sc.generate_path("I1", 3)
    check = sc.verify(inst, [(0, 99)])
    assert not check["valid"]
    assert check["error"]


def test_lp_verdicts():
    one = sc.lp_solve(PATH1_LP, eps=0.5, strict_bits=True)
    assert one["verdict"] == "feasible"
    assert one["violations"] == 0
    assert one["iterations"] <= one["iteration_cap"]
    two = sc.lp_solve(PATH2_LP, eps=0.5)
    assert two["verdict"] == "infeasible"


def test_bad_input_raises():
    with pytest.raises(ValueError):
        sc.solve("not an instance")
    with pytest.raises(ValueError):
        sc.solve(sc.generate_path("I1", 3), mode="slow")
    with pytest.raises(ValueError):
        sc.generate_mixed(children=1)
