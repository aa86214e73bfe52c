"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The reactive ordering
criterion carries a known-red sub-clause (second-order flux-balanced vs
classical CFL ratio); see the assertion message for the measurement.
"""
import math

import numpy as np
import pytest

from mprkfv.harness import (
    cfl_search,
    compare_reference,
    eoc_study,
    reference_sampler,
    simulate,
)
from mprkfv.integrators import (
    FORWARD_EULER,
    HEUN,
    PositivityError,
    advance_to,
    compute_dt,
    make_stepper,
    parse_scheme,
    step_explicit,
    step_mpe,
    step_mpe_s,
    step_mpheun_s,
)
from mprkfv.models import IdealGas, ReactiveMixture
from mprkfv.pdrs import assemble_density_pdrs, assemble_mp_matrix, solve_banded
from mprkfv.riemann import solve_riemann
from mprkfv.scenarios import make_scenario
from mprkfv.spatial import CellField, Grid, NEUMANN, PERIODIC, max_wave_speed

GAS = IdealGas()


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


# Table 1 / Table 2 reference values; EOC(N) = log2(err_N / err_2N).
PAPER_L1_320 = {"fe": 0.996, "mpe-rhoe": 0.998, "mpe": 0.998, "mpe-s": 0.997,
                "heun": 1.948, "mpheun-rhoe": 1.950, "mpheun": 1.950, "mpheun-s": 1.944}
PAPER_L1_640 = {"fe": 1.000, "mpe-rhoe": 1.000, "mpe": 1.000, "mpe-s": 0.999,
                "heun": 1.957, "mpheun-rhoe": 1.957, "mpheun": 1.960, "mpheun-s": 1.955}


@pytest.fixture(scope="module")
def eoc_tables():
    sc = make_scenario("smooth")
    out = {}
    for name in PAPER_L1_320:
        rows = eoc_study(sc, parse_scheme(name), [160, 320, 640, 1280], cfl=0.5)
        errs1 = {r.cells: r.l1 for r in rows}
        errs2 = {r.cells: r.l2 for r in rows}
        out[name] = {
            "l1": {320: math.log2(errs1[320] / errs1[640]),
                   640: math.log2(errs1[640] / errs1[1280])},
            "l2": {320: math.log2(errs2[320] / errs2[640]),
                   640: math.log2(errs2[640] / errs2[1280])},
        }
    return out


def test_eoc_reproduction_l1(eoc_tables):
    details = []
    ok = True
    for name in PAPER_L1_320:
        got320 = eoc_tables[name]["l1"][320]
        got640 = eoc_tables[name]["l1"][640]
        good = (abs(got320 - PAPER_L1_320[name]) <= 0.1
                and abs(got640 - PAPER_L1_640[name]) <= 0.1)
        ok &= good
        details.append(f"{name} {got320:.3f}/{got640:.3f}")
    assert report("EOC-L1 (Table-1 values +/-0.1 at N=320/640)", ok, "; ".join(details))


def test_eoc_l2_sanity(eoc_tables):
    details = []
    ok = True
    for name in ("heun", "mpheun-rhoe", "mpheun", "mpheun-s"):
        got = eoc_tables[name]["l2"][320]
        good = 1.6 - 0.1 <= got <= 1.8 + 0.1
        ok &= good
        details.append(f"{name} {got:.3f}")
    assert report("EOC-L2 sanity (second order in [1.6,1.8]+/-0.1)", ok, "; ".join(details))


def test_contact_preservation():
    sc = make_scenario("contact")
    keepers, violators = {}, {}
    for name in ("fe", "heun", "mpe-s", "mpheun-s"):
        fld = sc.initial_field(1000)
        out, _ = advance_to(sc.model, fld, sc.t_end, parse_scheme(name),
                            cfl=1.0, safety=0.7)
        prim = sc.model.cons_to_prim(out.u)
        keepers[name] = max(np.max(np.abs(prim[1] - 20.0)) / 20.0,
                            np.max(np.abs(prim[2] - 3.0)) / 3.0)
    for name in ("mpe", "mpheun"):
        fld = sc.initial_field(1000)
        try:
            out, _ = advance_to(sc.model, fld, sc.t_end, parse_scheme(name),
                                cfl=1.0, safety=0.7)
            prim = sc.model.cons_to_prim(out.u)
            violators[name] = max(np.max(np.abs(prim[1] - 20.0)) / 20.0,
                                  np.max(np.abs(prim[2] - 3.0)) / 3.0)
        except PositivityError:
            violators[name] = np.inf  # negative pressure: contact destroyed
    ok = all(v <= 1e-9 for v in keepers.values()) and all(
        v > 1e-3 for v in violators.values())
    detail = ("keepers " + ", ".join(f"{k}={v:.1e}" for k, v in keepers.items())
              + "; violators " + ", ".join(f"{k}={v:.1e}" for k, v in violators.items()))
    assert report("contact preservation (N=1000, CFL*safety=0.7)", ok, detail)


def test_unconditional_density_positivity():
    # At 10x the explicit-stable step no scheme keeps the EoS valid for long
    # (pressure positivity is guaranteed by nothing), so the density theorem
    # is asserted on every step that can be formed: MP-treated components
    # stay positive and no MP failure is ever density-caused, while the
    # explicit schemes violate density positivity outright.
    sc = make_scenario("vacuum")
    fld0 = sc.initial_field(200)
    base_dt = fld0.grid.dx / max_wave_speed(sc.model, fld0, 1)
    mp_ok = True
    details = []
    one_stage = ("mpe", "mpe-rhoe", "mpe-s")
    for name in one_stage + ("mpheun", "mpheun-rhoe", "mpheun-s"):
        for mult in (0.1, 1.0, 10.0):
            stepper = make_stepper(sc.model, parse_scheme(name))
            out = fld0
            formed = 0
            density_violation = False
            for _ in range(10):
                try:
                    out = stepper(out, mult * base_dt)
                except Exception as exc:  # pressure may fail; densities may not
                    if "density" in str(exc):
                        density_violation = True
                    break
                formed += 1
                if not np.all(out.u[0] > 0):
                    density_violation = True
                if name.endswith("rhoe") and not np.all(out.u[2] > 0):
                    density_violation = True
            # two-stage schemes cannot always form a step here: their internal
            # stage is a full-step update whose pressure may already be
            # invalid at these step sizes (a pressure failure, which no
            # scheme prevents, not a density one)
            must_form = name in one_stage
            mp_ok &= (not density_violation) and (formed >= 1 or not must_form)
            if mult == 10.0:
                details.append(f"{name}:{formed} formed, density ok={not density_violation}")
    explicit_fails = True
    for tableau, name in ((FORWARD_EULER, "fe"), (HEUN, "heun")):
        violated = False
        out = fld0
        for _ in range(10):
            try:
                out = step_explicit(sc.model, out, 10.0 * base_dt, tableau)
            except Exception as exc:
                violated = "density" in str(exc)
                break
            if not np.all(out.u[0] > 0):
                violated = True
                break
        explicit_fails &= violated
        details.append(f"{name} density-violation={violated}")
    ok = mp_ok and explicit_fails
    assert report("unconditional density positivity (dt = {0.1,1,10}x explicit)", ok,
                  "; ".join(details))


def test_stable_cfl_ordering():
    vac = make_scenario("vacuum")
    grid_v = (0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0)
    caps = {}
    for name in ("mpe", "mpe-rhoe", "mpe-s"):
        caps[name] = cfl_search(vac, parse_scheme(name), 1000, grid_v).max_stable
    con = make_scenario("contact")
    grid_c = (0.3, 0.4, 0.5, 0.7, 0.9, 1.0)
    caps["contact mpe-s"] = cfl_search(con, parse_scheme("mpe-s"), 1000, grid_c).max_stable
    caps["contact mpe"] = cfl_search(con, parse_scheme("mpe"), 1000, grid_c).max_stable
    ok = (caps["mpe-s"] >= 10 * caps["mpe"]
          and caps["mpe-s"] >= 10 * caps["mpe-rhoe"]
          and caps["mpe-s"] > 0
          and caps["contact mpe-s"] >= 0.9
          and caps["contact mpe"] <= 0.5)
    detail = ", ".join(f"{k}={v}" for k, v in caps.items())
    assert report("stable-CFL ordering (vacuum >=10x, contact 0.9 vs 0.5)", ok, detail)


def test_reactive_stiff_ordering():
    sc = make_scenario("reactive")
    details = []
    # first-order MP variants complete at CFL 0.05 under the reference
    # protocol (safety 0.4 for the classical MP family)
    mp_ok = True
    for name in ("mpe", "mpe-rhoe", "mpe-s"):
        try:
            simulate(sc, parse_scheme(name), 800, cfl=0.05, safety=0.4)
            details.append(f"{name}@0.05 ok")
        except PositivityError as exc:
            mp_ok = False
            details.append(f"{name}@0.05 ABORT step {exc.step}")
    # forward Euler cannot run at these CFLs (source-stiffness limited)
    fe_ok = True
    for cfl in (0.05, 0.03):
        try:
            simulate(sc, parse_scheme("fe"), 800, cfl=cfl, safety=1.0)
            fe_ok = False
            details.append(f"fe@{cfl} unexpectedly ok")
        except PositivityError:
            details.append(f"fe@{cfl} fails")
    # second-order ratio: flux-balanced vs classical maximal stable CFL
    grid = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
    cap_cl = cfl_search(sc, parse_scheme("mpheun"), 800, grid).max_stable
    cap_fb = cfl_search(sc, parse_scheme("mpheun-s"), 800, grid).max_stable
    ratio_ok = cap_fb >= 3 * cap_cl
    details.append(f"mpheun cap={cap_cl}, mpheun-s cap={cap_fb}")
    ok = mp_ok and fe_ok and ratio_ok
    assert report("reactive stiff ordering (N=800, delta=1e4)", ok, "; ".join(details)), (
        "known-red sub-clause: with the definition-faithful stage/final "
        "Patankar weighting the classical MPHeun escapes the source-stiffness "
        "limit entirely, so both second-order variants cap at the same "
        "flux-driven threshold and the >=3x separation reported for the "
        "reference implementation cannot be reproduced; see decisions ledger")


def test_conservation_suite():
    details = []
    ok = True
    # periodic, no source, 100 steps, all 8 schemes, both models
    sc = make_scenario("smooth")
    fld0 = sc.initial_field(64)
    single = CellField(fld0.grid, PERIODIC, fld0.u)
    mix = ReactiveMixture(delta=0.0)
    x = Grid(0.0, 1.0, 64).centers()
    w = np.stack([2e-4 + 1e-4 * np.sin(2 * np.pi * x),
                  3e-4 + 0.5e-4 * np.cos(2 * np.pi * x),
                  np.full(64, 2.5e-4),
                  10.0 + 5.0 * np.sin(2 * np.pi * x),
                  50.0 + 10.0 * np.cos(2 * np.pi * x)])
    multi = CellField(Grid(0.0, 1.0, 64), PERIODIC, mix.prim_to_cons(w))
    worst = 0.0
    for name in PAPER_L1_320:
        scheme = parse_scheme(name)
        for model, fld in ((GAS, single), (mix, multi)):
            stepper = make_stepper(model, scheme)
            totals0 = fld.u.sum(axis=1)
            out = fld
            for _ in range(100):
                out = stepper(out, compute_dt(model, out, 0.45, 1.0, scheme.order))
            drift = np.max(np.abs(out.u.sum(axis=1) - totals0) / np.abs(totals0))
            worst = max(worst, drift)
    ok &= worst < 1e-12
    details.append(f"max total drift {worst:.2e}")
    # single-cell pure reaction conserves rho1 + rho2
    hot = ReactiveMixture(delta=1.0e4)
    w = np.stack([np.full(2, 5.251896311257205e-5), np.full(2, 3.748071704863518e-5),
                  np.full(2, 2.962489471973072e-4), np.zeros(2), np.full(2, 1e3)])
    fld = CellField(Grid(0.0, 1.0, 2), NEUMANN, hot.prim_to_cons(w))
    out = step_mpe(hot, fld, 1e-5)
    drift = np.max(np.abs((out.u[0] + out.u[1]) - (fld.u[0] + fld.u[1]))
                   / (fld.u[0] + fld.u[1]))
    ok &= drift < 1e-13
    details.append(f"reaction mass drift {drift:.2e}")
    assert report("conservation suite", ok, "; ".join(details))


def test_m_matrix_property_suite():
    rng = np.random.default_rng(7)
    worst_res = 0.0
    ok = True
    for _ in range(1000):
        n = int(rng.integers(2, 30))
        periodic = bool(rng.integers(0, 2))
        f = rng.normal(scale=5.0, size=n + 1)
        if periodic:
            f[-1] = f[0]
        terms = assemble_density_pdrs(f, PERIODIC if periodic else NEUMANN)
        pwd = rng.uniform(0.1, 10.0, n)
        m = assemble_mp_matrix(terms, pwd, rng.uniform(0.001, 10.0))
        dense = m.to_dense()
        ok &= bool(np.all(np.diag(dense) > 0))
        ok &= bool(np.all(dense - np.diag(np.diag(dense)) <= 0))
        rhs = rng.uniform(0.05, 5.0, n)
        x = solve_banded(m, rhs)
        ok &= bool(np.all(x > 0))
        ref = np.linalg.solve(dense, rhs)
        res = np.max(np.abs(x - ref)) / max(1.0, np.max(np.abs(ref)))
        worst_res = max(worst_res, res)
    ok &= worst_res <= 1e-10
    assert report("M-matrix property suite (1000 assemblies)", ok,
                  f"worst banded-vs-dense residual {worst_res:.2e}")


def test_one_step_consistency():
    sc = make_scenario("smooth")
    fld = sc.initial_field(64)
    heun = make_stepper(GAS, parse_scheme("heun"))
    for _ in range(8):
        fld = heun(fld, compute_dt(GAS, fld, 0.3, 1.0, 2))
    dt0 = compute_dt(GAS, fld, 0.5, 1.0, 1)

    def slope(mp_step, tableau):
        d = [np.max(np.abs(mp_step(fld, dt0 / 2**k).u
                           - step_explicit(GAS, fld, dt0 / 2**k, tableau).u))
             for k in range(5)]
        return math.log2(d[3] / d[4])

    s1 = slope(lambda f, dt: step_mpe_s(GAS, f, dt), FORWARD_EULER)
    s2 = slope(lambda f, dt: step_mpheun_s(GAS, f, dt), HEUN)
    ok = s1 >= 1.9 and s2 >= 2.9
    assert report("one-step consistency (Richardson slopes)", ok,
                  f"mpe-s vs fe {s1:.2f} (>=1.9), mpheun-s vs heun {s2:.2f} (>=2.9)")


def test_negative_pressure_remark():
    sc = make_scenario("vacuum").with_right_density(1e-2)
    fld = sc.initial_field(1000)
    try:
        advance_to(sc.model, fld, sc.t_end, parse_scheme("mpe-s"), cfl=0.5, safety=1.0)
        ok, detail = False, "run unexpectedly completed"
    except PositivityError as exc:
        ok = exc.step == 1 and exc.component == "pressure"
        detail = f"step {exc.step}, component {exc.component}"
    assert report("negative-pressure limitation (rho_R=1e-2, CFL 0.5)", ok, detail)


def test_exact_riemann_oracle():
    rng = np.random.default_rng(11)
    worst = 0.0
    shocks = 0
    g = 1.4
    for _ in range(160):
        wl = (rng.uniform(0.1, 10), rng.uniform(-3, 3), rng.uniform(0.1, 10))
        wr = (rng.uniform(0.1, 10), rng.uniform(-3, 3), rng.uniform(0.1, 10))
        cl = math.sqrt(g * wl[2] / wl[0])
        cr = math.sqrt(g * wr[2] / wr[0])
        if wr[1] - wl[1] >= 2 * (cl + cr) / (g - 1):
            continue
        sol = solve_riemann(wl, wr)
        lo = sol.sample(sol.u_star - 1e-11)
        hi = sol.sample(sol.u_star + 1e-11)
        worst = max(worst, abs(lo[1] - hi[1]), abs(lo[2] - hi[2]) / max(1.0, sol.p_star))
        for side, wave, rho_s in ((-1, sol.left_wave, sol.rho_star_l),
                                  (+1, sol.right_wave, sol.rho_star_r)):
            if wave != "shock":
                continue
            shocks += 1
            rho_k, u_k, p_k = wl if side < 0 else wr
            c_k = math.sqrt(g * p_k / rho_k)
            s = u_k + side * c_k * math.sqrt((g + 1) / (2 * g) * sol.p_star / p_k
                                             + (g - 1) / (2 * g))
            Ua = np.array([rho_k, rho_k * u_k, p_k / (g - 1) + 0.5 * rho_k * u_k**2])
            Ub = np.array([rho_s, rho_s * sol.u_star,
                           sol.p_star / (g - 1) + 0.5 * rho_s * sol.u_star**2])
            Fa = np.array([Ua[1], Ua[1] * u_k + p_k, u_k * (Ua[2] + p_k)])
            Fb = np.array([Ub[1], Ub[1] * sol.u_star + sol.p_star,
                           sol.u_star * (Ub[2] + sol.p_star)])
            res = np.max(np.abs(Fa - Fb - s * (Ua - Ub))) / max(1.0, sol.p_star)
            worst = max(worst, res)
    rh_ok = shocks >= 100 and worst <= 1e-9
    # vacuum comparison: L1(rho) error slope over N in {250, 500, 1000},
    # measured away from the vacuum region (reference density above 1e-3)
    vac = make_scenario("vacuum")
    sampler = reference_sampler(vac)
    slopes = {}
    finest = {}
    for name in ("fe", "mpe-s"):
        errs = []
        for n in (250, 500, 1000):
            fld, _ = simulate(vac, parse_scheme(name), n, cfl=1.0, safety=0.7)
            errs.append(compare_reference(fld, vac.model, sampler, vac.t_end,
                                          min_density=1e-3)["l1_rho"])
            if n == 1000:
                finest[name] = fld
        slopes[name] = 0.5 * (math.log2(errs[0] / errs[1]) + math.log2(errs[1] / errs[2]))
    slope_ok = all(s >= 0.8 for s in slopes.values())
    # Fig.-3-style proximity: the two schemes stay within twice the larger
    # exact-solution distance of each other
    d_fe = compare_reference(finest["fe"], vac.model, sampler, vac.t_end)["l1_rho"]
    d_fb = compare_reference(finest["mpe-s"], vac.model, sampler, vac.t_end)["l1_rho"]
    d_inter = float(np.sum(np.abs(finest["fe"].u[0] - finest["mpe-s"].u[0]))
                    * finest["fe"].grid.dx)
    proximity_ok = d_inter <= 2.0 * max(d_fe, d_fb)
    ok = rh_ok and slope_ok and proximity_ok
    assert report(
        "exact Riemann oracle", ok,
        f"RH worst {worst:.1e} over {shocks} shocks; vacuum L1 slopes "
        f"fe={slopes['fe']:.2f}, mpe-s={slopes['mpe-s']:.2f}; "
        f"inter-scheme {d_inter:.2e} vs exact {d_fe:.2e}/{d_fb:.2e}"), (
        "known-red sub-clause: the flux-balanced first-order scheme is "
        "pre-asymptotic on the vacuum fans at the pinned resolutions "
        "(slopes 0.65/0.73/0.82 over 500..4000 cells, crossing 0.8 just "
        "past the criterion's window); see decisions ledger")
