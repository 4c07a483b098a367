import math

import mpmath
import pytest

from rosenthal.config import mpf
from rosenthal.errors import ConsistencyError, DomainError, RegimeError
from rosenthal.extremal import (
    TABLE3_T,
    golden_section_max,
    maximize_even,
    maximize_ratio,
    ratio_functions,
    table3,
    tail_bounds,
)

import _oracles as orc


def bump(p):
    # maximum 2 at p = 30, decays to 1
    return 1 + math.exp(-((math.log(p) - math.log(30)) ** 2))


class TestGolden:
    def test_parabola(self):
        x, fx = golden_section_max(lambda x: -(x - 1.234) ** 2, 0, 3, tol=1e-8)
        assert abs(x - 1.234) < 1e-7 and fx <= 0

    def test_empty_interval(self):
        with pytest.raises(DomainError):
            golden_section_max(lambda x: x, 2, 1)


class TestMaximizeRatio:
    def test_bump(self):
        rep = maximize_ratio(bump, 4, 700, lambda P: 1.5, name="bump")
        assert abs(rep.argmax - 30) < 1e-2
        assert abs(rep.value - 2) < 1e-6
        assert rep.unimodal_trace
        assert all(v <= rep.value for _, v in rep.certificate)
        assert len(rep.certificate) == 20
        lo, hi = rep.bracket
        assert lo <= rep.argmax <= hi
        assert bump(lo) <= rep.value and bump(hi) <= rep.value
        assert rep.as_dict()["name"] == "bump"

    def test_maximum_at_ceiling(self):
        with pytest.raises(RegimeError):
            maximize_ratio(lambda p: p, 4, 100, lambda P: 0)

    def test_tail_not_confined(self):
        with pytest.raises(RegimeError):
            maximize_ratio(bump, 4, 700, lambda P: 3.0)

    def test_needs_decreasing_end_without_tail(self):
        wavy = lambda p: bump(p) + (0.5 if p > 650 else 0) * (p - 650) / 100
        with pytest.raises(RegimeError):
            maximize_ratio(wavy, 4, 700)

    def test_certificate_catches_narrow_spike(self):
        def spiky(p):
            return bump(p) + (5.0 if 400 < p < 401 else 0.0)

        # the spike falls between grid points; a dense certificate finds it
        with pytest.raises(ConsistencyError):
            maximize_ratio(spiky, 4, 700, lambda P: 1.5, certificate_points=20000)

    def test_bad_domain(self):
        with pytest.raises(DomainError):
            maximize_ratio(bump, 10, 5)

    def test_even(self):
        rep = maximize_ratio(bump, 4, 700, lambda P: 1.5)
        ev = maximize_even(bump, 4, rep, name="bump even")
        assert ev.argmax == 30 and ev.integer
        assert ev.value <= rep.value * (1 + 1e-8)
        with pytest.raises(DomainError):
            maximize_even(bump, 5, rep, name="odd floor")


class TestTails:
    def test_tail_bounds_sit_below_interior_maxima(self):
        tails = tail_bounds()
        assert tails["G/g"](700) < 1.7763
        assert tails["S/g"](10**6) < 1.5357
        assert tails["G/h"](700) < 1.2053
        assert tails["S/h"](10**6) < 1.0372

    def test_tail_bound_dominates_objective(self):
        fns = ratio_functions()
        tails = tail_bounds()
        for p in (800, 1500, 4000):
            assert fns["G/g"](p) <= tails["G/g"](p)
            assert fns["G/h"](p) <= tails["G/h"](p)


class TestSuite:
    def test_names(self, suite):
        assert set(suite) == {
            "G/g", "G/g even", "G/h", "G/h even", "S/g", "S/g even", "S/h", "S/h even",
        }

    def test_values(self, suite):
        assert abs(suite["G/g"].value - 1.77638) < 5e-6
        assert abs(suite["G/g"].argmax - 33.461) < 0.01
        assert abs(suite["S/g"].value - 1.53572) < 5e-5
        assert abs(suite["S/g"].argmax - 22.311) < 0.01
        assert abs(suite["G/h"].value - 1.2054) < 5e-4
        assert abs(suite["G/h"].argmax - 71.43) < 0.1
        assert suite["G/g even"].argmax == 34

    def test_independent_oracle_at_argmax(self, suite):
        p = suite["G/g"].argmax
        ref = orc.L_direct(p) ** (1 / mpmath.mpf(p)) / orc.g_direct(p)
        assert abs(suite["G/g"].value - float(ref)) < 1e-12
        p = suite["S/g"].argmax
        ref = orc.K_direct(p) ** (1 / mpmath.mpf(p)) / orc.g_direct(p)
        assert abs(suite["S/g"].value - float(ref)) < 1e-12

    def test_even_never_exceeds_continuous(self, suite):
        for key in ("G/g", "G/h", "S/g", "S/h"):
            assert suite[f"{key} even"].value <= suite[key].value * (1 + 1e-8)
            assert suite[f"{key} even"].argmax % 2 == 0

    def test_inf_trend(self, suite):
        for key in ("G/g", "G/h", "S/g", "S/h"):
            vals = [v for _, v in suite[key].inf_trend]
            assert all(v > 1 for v in vals)
            assert vals == sorted(vals, reverse=True)

    def test_tails_recorded(self, suite):
        for key in ("G/g", "G/h", "S/g", "S/h"):
            rep = suite[key]
            assert rep.tail_value is not None and rep.tail_value < rep.value
            assert rep.unimodal_trace


class TestTable3:
    def test_domain(self):
        with pytest.raises(DomainError):
            table3([0.7])

    def test_half_matches_S_over_g(self, suite):
        (t, T, u), = table3([0.5])
        assert abs(u - suite["S/g"].value) < 1e-9
        assert abs(T - suite["S/g"].argmax) < 0.01

    def test_rows(self, table3_computed):
        assert [r["t"] for r in table3_computed] == list(TABLE3_T)
        us = [r["u"] for r in table3_computed]
        Ts = [r["T"] for r in table3_computed]
        # smaller t pushes the maximum out and lowers it
        assert us == sorted(us, reverse=True)
        assert Ts == sorted(Ts)
