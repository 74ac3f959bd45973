import numpy as np

from pymagnomech.helpers import verify

from tests.helper import SEED


def rng():
    return np.random.default_rng(SEED)


def test_random_config_ranges():
    r = rng()
    for _ in range(20):
        config = verify.random_config(r, 10.0, 100.0, "paper")
        values = config.rates.as_tuple() + config.couplings.as_tuple()
        assert all(10.0 <= v <= 100.0 for v in values)
        assert config.sign_convention == "paper"


def test_cheap_checks_pass():
    for convention in ("standard", "paper"):
        for r in (
            verify.check_solver_equivalence(rng(), configs=5, points=2001, sign_convention=convention),
            verify.check_bare_cavity(convention),
            verify.check_omit_window(convention),
            verify.check_delay_consistency(rng(), samples=50, sign_convention=convention),
            verify.check_passivity(rng(), samples=20, points=501, sign_convention=convention),
            verify.check_homogeneity(convention),
            verify.check_branch_decoupling(convention),
        ):
            assert r.passed, r


def test_window_counts():
    assert verify.window_counts() == [0, 1, 2, 3]
    r = verify.check_window_counts()
    assert r.passed, r
    assert r.measured == [0, 1, 2, 3]


def test_fig6_checks():
    negative, band = verify.check_fig6()
    assert negative.passed and not negative.informational
    assert negative.measured < 0
    assert band.informational
    assert verify.all_passed([negative, band])


def test_fig5_widths_grow():
    r = verify.check_fig5()
    assert r.passed, r


def test_oracle_and_order():
    assert 3.5 < verify.rk4_order() < 4.5
    r = verify.check_oracle()
    assert r.passed, r


def test_mirror_and_determinism():
    assert verify.mirror_difference() <= 1e-12
    assert verify.check_determinism().passed


def test_all_passed():
    ok = verify.result("a", True)
    info = verify.result("b", False, informational=True)
    bad = verify.result("c", False)
    assert verify.all_passed([ok, info])
    assert not verify.all_passed([ok, info, bad])


def test_delay_consistency_default_seed():
    # same random stream as run_all: the solver-equivalence configs come first
    for convention in ("standard", "paper"):
        r = np.random.default_rng(verify.DEFAULT_SEED)
        for _ in range(20):
            verify.random_config(r, sign_convention=convention)
        outcome = verify.check_delay_consistency(r, sign_convention=convention)
        assert outcome.passed, outcome
