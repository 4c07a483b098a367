import math
import random

import mpmath
import pytest
from hypothesis import given, strategies as st

from rosenthal.asymptotics import (
    C14,
    C15,
    P0,
    P1,
    Delta,
    V,
    W,
    X_of_p,
    XY_bounds,
    Y_of_p,
    delta,
    environment,
    envelopes,
    expansion_G,
    expansion_R,
    expansion_S,
    g,
    h,
    sandwich_K,
    sandwich_L,
    solve_M,
    solve_N,
    growth_gap,
    theorem43_forms,
    zeta,
)
from rosenthal.config import ctx, mpf
from rosenthal.errors import DomainError, RegimeError
from rosenthal.series import G_of_p, K_series, L_series, S_of_p, eval_B4, eval_D4, eval_F3

import _oracles as orc

LOG_GRID = [4 * (10**6 / 4) ** (i / 19) for i in range(20)]

# M(p) = p / W(p) from mpmath.lambertw at 40 digits, N(p) = M(2p)/2.
M_REF = {
    4: "3.327322322599095633833436",
    700: "141.3739199654122632881308",
    10**6: "87847.53957775977159450944",
}
N_REF = {
    4: "2.490951623954896085609866",
    700: "126.5040147020635722729568",
    10**6: "83181.34977195005519467379",
}


def rel(a, b):
    return abs(mpf(a) - mpf(b)) / abs(mpf(b))


class TestScalars:
    def test_definitions(self):
        p = mpf(50)
        assert g(p) == p / (ctx.e * ctx.log(p))
        assert Delta(p) == ctx.log(ctx.log(p)) / ctx.log(p)
        assert delta(p) == 1 / ctx.log(p)
        assert rel(h(p), g(p) * (1 + Delta(p) + Delta(p) ** 2)) < 1e-28
        assert zeta(p) == ctx.log(2) / ctx.log(2 * p)

    def test_constants(self):
        assert abs(C14() - mpf("1.402365")) < 1e-6
        assert abs(C15() - mpf("0.928958")) < 1e-6

    def test_constants_from_definitions(self):
        d = Delta(P0)
        assert rel(C14(), 1 / (1 - ctx.log(ctx.log(P0)) / ctx.log(P0))) < 1e-28
        assert rel(C15(), 2 / (ctx.sqrt(1 + 4 * d * d) + 1)) < 1e-28


class TestSolvers:
    @pytest.mark.parametrize("p", LOG_GRID)
    def test_residual(self, p):
        r = solve_M(p)
        assert abs(r.root * ctx.log(r.root) - p) <= 1e-13 * p
        assert abs(r.residual) <= 1e-13 * p
        n = solve_N(p)
        assert abs(n.root * ctx.log(2 * n.root) - p) <= 1e-13 * p

    @pytest.mark.parametrize("p", LOG_GRID + [10, 100, 10**4])
    def test_N_is_half_M_of_double(self, p):
        assert rel(solve_N(p).root, solve_M(2 * p).root / 2) < 1e-12

    @pytest.mark.parametrize("p", sorted(M_REF))
    def test_lambert_oracle(self, p):
        assert rel(solve_M(p).root, M_REF[p]) < 1e-23
        assert rel(solve_N(p).root, N_REF[p]) < 1e-23
        assert rel(solve_M(p).root, orc.M_lambert(p)) < 1e-25

    def test_bisection_oracle(self):
        root = orc.bisect_root(lambda x: x * mpmath.log(x) - 4, 1, 4)
        assert rel(solve_M(4).root, root) < 1e-18
        assert abs(float(solve_M(4)) - 3.32732) < 1e-5

    @pytest.mark.xfail(strict=True, reason="M(4) = 3.32732, not 3.3213")
    def test_printed_M4_example(self):
        assert abs(float(solve_M(4)) - 3.3213) < 1e-3

    @given(st.floats(4, 1e8))
    def test_property(self, p):
        M = solve_M(p).root
        assert abs(M * ctx.log(M) - p) <= 1e-13 * p
        assert 1 <= M <= max(p, math.e)

    def test_domain(self):
        with pytest.raises(DomainError):
            solve_M(-1)


class TestEnvelopes:
    def test_regime(self):
        with pytest.raises(RegimeError):
            envelopes(699)

    @pytest.mark.parametrize("p", [700, 2000, 10**5])
    def test_upper_envelopes(self, p):
        e = envelopes(p)
        assert solve_M(p).root <= e.M_plus
        assert solve_N(p).root <= e.N_plus
        assert e.M_plus * ctx.log(e.M_plus) > p

    @pytest.mark.xfail(strict=True, reason="the lower envelope omits the -delta*Delta term and lies above M")
    @pytest.mark.parametrize("p", [700, 2000, 10**5])
    def test_lower_envelope(self, p):
        e = envelopes(p)
        assert e.M_minus <= solve_M(p).root
        assert e.M_minus * ctx.log(e.M_minus) < p

    @pytest.mark.parametrize("p", [700, 10**4])
    def test_N_envelope_is_halved_M_envelope(self, p):
        e, e2 = envelopes(p), envelopes(2 * p)
        assert rel(e.N_plus, e2.M_plus / 2) < 1e-28
        assert rel(e.N_minus, e2.M_minus / 2) < 1e-28

    def test_eps(self):
        e = envelopes(1000)
        d = Delta(1000)
        assert rel(e.eps_plus, d + C14() * d * d) < 1e-28
        assert rel(e.eps_minus, d + C15() * d * d) < 1e-28


class TestXY:
    def test_sup_property(self):
        rng = random.Random(7)
        p = 50
        X = X_of_p(p)
        for _ in range(100):
            x = rng.uniform(4, 4 * p)
            assert V(x, p) / p <= X + mpf("1e-28")

    @pytest.mark.parametrize("p", [10, 100, 1000])
    def test_Y_below_X(self, p):
        assert Y_of_p(p) < X_of_p(p)
        assert rel(W(solve_N(p).root, p) / p, Y_of_p(p)) < 1e-28

    def test_exp_X_over_g(self):
        r = ctx.exp(X_of_p(10**6)) / g(10**6)
        assert 1 <= r
        assert abs(r / (expansion_G(10**6) / g(10**6)) - 1) < 0.02

    @pytest.mark.xfail(strict=True, reason="exp(X)/g is 1.325 at p = 10^6, as the 1 + Delta + delta expansion predicts")
    def test_exp_X_over_g_window(self):
        assert ctx.exp(X_of_p(10**6)) / g(10**6) <= mpf("1.2")

    def test_regime(self):
        with pytest.raises(RegimeError):
            XY_bounds(100)

    @pytest.mark.parametrize("p", [700, 5000, 10**5, 10**7])
    def test_X_ordering(self, p):
        X1, X2, Y1, Y2 = XY_bounds(p)
        X0 = X_of_p(p) - ctx.log(g(p))
        Y0 = Y_of_p(p) - ctx.log(g(p))
        assert X2 < X0 < X1
        assert Y0 <= Y1

    @pytest.mark.xfail(strict=True, reason="Y2 exceeds Y0 at large p")
    def test_Y2_below_Y0(self):
        _, _, _, Y2 = XY_bounds(10**6)
        assert Y2 <= Y_of_p(10**6) - ctx.log(g(10**6))

    def test_X1_decreasing(self):
        grid = [700 * 10 ** (i / 4) for i in range(17)]
        vals = [XY_bounds(p)[0] for p in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_exp_X1_value(self):
        assert abs(ctx.exp(XY_bounds(700)[0]) - mpf("1.759118")) < 1e-6

    @pytest.mark.xfail(strict=True, reason="exp(Y1(10^6)) = 1.449")
    def test_exp_Y1_claim(self):
        assert ctx.exp(XY_bounds(10**6)[2]) < mpf("1.442")


class TestSandwich:
    def test_regime(self):
        with pytest.raises(RegimeError):
            sandwich_L(699)
        with pytest.raises(RegimeError):
            sandwich_K(10**5)

    @pytest.mark.parametrize("p", [700, 1000, 1500])
    def test_L_brackets_series(self, p):
        sb = sandwich_L(p)
        assert sb.lower <= sb.upper
        assert sb.brackets(L_series(p).value)

    def test_psi3(self):
        assert sandwich_L(700).psi_upper <= mpf("1.00826")

    def test_K_brackets_series(self):
        sb = sandwich_K(10**6)
        assert sb.brackets(K_series(10**6).value)
        assert sb.psi_upper <= mpf("1.000833")

    def test_upper_log_gap_shrinks(self):
        gaps = [sandwich_L(p).upper.log / p - X_of_p(p) for p in (10**3, 10**4, 10**5)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-3

    @pytest.mark.parametrize("p", [700, 1000, 3000, 10**4])
    def test_G_near_exp_X(self, p):
        ratio = G_of_p(p) / ctx.exp(X_of_p(p))
        assert abs(ratio - 1) <= 10 * ctx.log(p) / p

    @pytest.mark.xfail(strict=True, reason="G(p) lies slightly below exp(X(p))")
    def test_G_at_least_exp_X(self):
        assert G_of_p(700) >= ctx.exp(X_of_p(700))


class TestExpansions:
    def test_R_half_is_S(self):
        for p in (20, 1000, 10**6):
            assert rel(expansion_R(p, mpf(1) / 2), expansion_S(p)) < 1e-27

    def test_within_five_percent(self):
        p = 10**5
        assert abs(expansion_G(p) / G_of_p(p) - 1) < 0.05
        assert abs(expansion_S(p) / S_of_p(p) - 1) < 0.05

    def test_G_trend(self):
        r = [abs(expansion_G(p) / G_of_p(p) - 1) for p in (10**3, 10**4, 10**5)]
        assert r[0] > r[1] > r[2]

    def test_R_domain(self):
        with pytest.raises(DomainError):
            expansion_R(100, 0.7)

    def test_closed_forms_near_constants(self):
        G_form, S_form = theorem43_forms(10**4)
        assert 0.8 <= G_form / G_of_p(10**4) <= 1.2
        assert 0.8 <= S_form / S_of_p(10**4) <= 1.2

    @pytest.mark.parametrize("p", [4, 50, 10**4])
    def test_forms_match_saddle_values(self, p):
        G_form, S_form = theorem43_forms(p)
        assert rel(ctx.log(G_form), X_of_p(p)) < 1e-27
        assert rel(ctx.log(S_form), Y_of_p(p)) < 1e-27


class TestEnvironment:
    def test_fields(self):
        env = environment(1000)
        assert env.M_plus is not None and rel(env.M, solve_M(1000).root) < 1e-30
        small = environment(100)
        assert small.M_plus is None


class TestGrowthEquivalences:
    @pytest.mark.parametrize("a,lam,gam", [(1, 1, 0), (2, mpf(1) / 2, 1)])
    def test_gap_decreases(self, a, lam, gam):
        gaps = [growth_gap(p, a, lam, gam) for p in (10**3, 10**4, 10**5)]
        assert all(x > 0 for x in gaps)
        assert gaps[0] > gaps[1] > gaps[2]

    @staticmethod
    def _root_ratio(x, y, p):
        return ctx.exp((x.value.log - y.value.log) / p)

    @pytest.mark.parametrize("theta,beta", [(1, 1), (2, 1), (mpf(1) / 3, 2)])
    def test_F3_vs_B4(self, theta, beta):
        Lam = beta * max(mpf(theta), 1 / mpf(theta))
        gaps = []
        for p in (100, 1000, 10**4):
            r = self._root_ratio(eval_F3(p, theta, beta), eval_B4(p, 0, Lam, 0), p)
            gaps.append(abs(r - 1))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_F3_vs_G3(self):
        gaps = []
        for p in (11, 101, 1001):
            r = self._root_ratio(eval_F3(p, 2, 1), eval_G3_(p, 2, 1), p)
            gaps.append(abs(r - 1))
        assert gaps[0] > gaps[1] >= gaps[2]
        assert gaps[-1] < mpf("1e-25")

    def test_D4_vs_B4(self):
        gaps = []
        for p in (11, 101, 1001):
            r = self._root_ratio(eval_D4(p, 3, 1, 1), eval_B4(p, 3, 1, 1), p)
            gaps.append(abs(r - 1))
        assert gaps[0] > gaps[1] > gaps[2] or gaps[-1] < mpf("1e-20")


def eval_G3_(p, theta, beta):
    from rosenthal.series import eval_G3

    return eval_G3(p, theta, beta)
