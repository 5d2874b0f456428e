"""Built-in acceptance suite: every headline contract of the package,
checked at its stated tolerance against independent oracles.

Shared by the command-line ``golden`` verb and the pytest acceptance
module, so both always report the same numbers.  Each criterion returns
a CriterionResult; ``expected_fail`` marks the one check whose stated
window is analytically unattainable (see its docstring), which is
reported as XFAIL rather than silently loosened.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .evolution import evolve, detect_cyclic, gauge_field, pairwise_inner
from .geometry import (
    classify_evolution,
    fidelity,
    geometric_tensors,
    loop_integral_connection,
    small_loop_phase,
    surface_integral_curvature,
)
from .hilbert import PhysicalState, bi_density, physical_inner
from .models import (
    OscillatorModel,
    bloch_section,
    floquet_cyclic_state,
    section_oscillator,
    spin_great_circle_scenario,
    two_level_loop,
    two_level_model,
)
from .numerics import blas_threads, wrap_angle
from .phases import (
    geometric_phase_gauge_invariant,
    geometric_phase_gauge_split,
    geometric_phase_holonomy,
    geometric_phase_kinematic,
    geometric_phase_kinematic_bargmann,
    phase_report,
)

# golden matrices for the oscillator section, constant over the chart
Q_GOLDEN = np.array(
    [[0, 0, -1, -1j], [0, 0, 1j, -1], [-1, -1j, 1, 1j], [1j, -1, -1j, 1]], dtype=complex
)
OMEGA_GOLDEN = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 1], [1, 0, -1, 0]], dtype=float
)
G_GOLDEN = np.array(
    [[0, 0, -1, 0], [0, 0, 0, -1], [-1, 0, 1, 0], [0, -1, 0, 1]], dtype=float
)
G_EIGS_GOLDEN = np.sort(
    [(1 + np.sqrt(5)) / 2, (1 + np.sqrt(5)) / 2, (1 - np.sqrt(5)) / 2, (1 - np.sqrt(5)) / 2]
)

CHART_POINTS = (
    np.zeros(4),
    np.array([0.10, -0.05, 0.12, 0.20]),
    np.array([-0.15, 0.20, -0.10, 0.05]),
)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)
    expected_fail: bool = False

    @property
    def status(self):
        if self.passed:
            return "PASS"
        return "XFAIL" if self.expected_fail else "FAIL"

    def line(self):
        return f"[{self.status}] {self.name}: {self.detail}"


class _Suite:
    """Caches the expensive shared artifacts across criteria."""

    def __init__(self, tol_scale=1.0, seed=7, n=60, steps=1500):
        self.tol = lambda x: x * tol_scale
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.model = OscillatorModel(n=n, omega_d=0.3, delta=1.0)
        self.steps = steps
        self._cache = {}

    def section(self):
        return self._get("section", lambda: self.model.section())

    def pt(self):
        def build():
            H, W, path, psi0 = self.model.pt_scenario()
            rec = evolve(H, W, path, psi0, self.steps)
            return {"H": H, "W": W, "path": path, "psi0": psi0, "rec": rec}

        return self._get("pt", build)

    def pt_report(self):
        return self._get("pt_report", lambda: phase_report(self.pt()["rec"], self.pt()["H"]))

    def hermitian(self):
        def build():
            H, W, path, psi0 = self.model.hermitian_scenario()
            rec = evolve(H, W, path, psi0, self.steps)
            return {"H": H, "W": W, "path": path, "psi0": psi0, "rec": rec}

        return self._get("hermitian", build)

    def two_level(self):
        def build():
            H, W = two_level_model(1.0, 0.4)
            path = two_level_loop()
            steps = 2 * self.steps
            psi0 = floquet_cyclic_state(H, W, path, steps)
            rec = evolve(H, W, path, psi0, steps)
            return {"H": H, "W": W, "path": path, "psi0": psi0, "rec": rec}

        return self._get("two_level", build)

    def two_level_report(self):
        return self._get(
            "two_level_report", lambda: phase_report(self.two_level()["rec"], self.two_level()["H"])
        )

    def spin(self):
        def build():
            H, W, path, psi0 = spin_great_circle_scenario(tau=2.0)
            rec = evolve(H, W, path, psi0, self.steps)
            return {"H": H, "W": W, "path": path, "psi0": psi0, "rec": rec}

        return self._get("spin", build)

    def spin_report(self):
        return self._get("spin_report", lambda: phase_report(self.spin()["rec"], self.spin()["H"]))

    def tensors(self):
        return self._get(
            "tensors", lambda: [geometric_tensors(self.section(), p) for p in CHART_POINTS]
        )

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def crit_golden_qgt(suite):
    """1. QGT on the oscillator section equals the golden constant matrix."""
    tol = suite.tol(1e-6)
    t0 = time.perf_counter()
    worst = max(float(np.max(np.abs(t.Q - Q_GOLDEN))) for t in suite.tensors())
    elapsed = time.perf_counter() - t0
    ok = worst <= tol and elapsed < 10.0
    return CriterionResult(
        "golden-qgt",
        ok,
        f"max |Q − golden| = {worst:.2e} over {len(CHART_POINTS)} chart points "
        f"(tol {tol:.0e}), {elapsed:.2f}s at n = {suite.model.n}",
        {"residual": worst, "seconds": elapsed},
    )


def crit_golden_curvature_metric(suite):
    """2. Curvature and metric match the golden matrices; g eigenvalues are (1±√5)/2."""
    tol = suite.tol(1e-6)
    tol_eig = suite.tol(1e-8)
    w_om = max(float(np.max(np.abs(t.Omega - OMEGA_GOLDEN))) for t in suite.tensors())
    w_g = max(float(np.max(np.abs(t.g - G_GOLDEN))) for t in suite.tensors())
    eigs = np.sort(np.linalg.eigvalsh(suite.tensors()[0].g))
    w_eig = float(np.max(np.abs(eigs - G_EIGS_GOLDEN)))
    ok = w_om <= tol and w_g <= tol and w_eig <= tol_eig
    return CriterionResult(
        "golden-curvature-metric",
        ok,
        f"|Ω − golden| = {w_om:.2e}, |g − golden| = {w_g:.2e} (tol {tol:.0e}); "
        f"g eigenvalues off (1±√5)/2 by {w_eig:.2e} (tol {tol_eig:.0e})",
        {"omega": w_om, "g": w_g, "eigs": w_eig},
    )


def crit_im_re_split(suite):
    """3. Im Q = Ω and Re Q = g entrywise from the same section samples."""
    tol = suite.tol(1e-10)
    w_im = max(float(np.max(np.abs(t.Q.imag - t.Omega))) for t in suite.tensors())
    w_re = max(float(np.max(np.abs(t.Q.real - t.g))) for t in suite.tensors())
    ok = w_im <= tol and w_re <= tol
    return CriterionResult(
        "im-re-split",
        ok,
        f"max |Im Q − Ω| = {w_im:.2e}, max |Re Q − g| = {w_re:.2e} (tol {tol:.0e})",
        {"im": w_im, "re": w_re},
    )


def _signed_area_oracle(path, samples=20000):
    """2x the signed area of the drive loop by the shoelace line integral
    (1/2)∮(λ¹ dλ² − λ² dλ¹), evaluated on dense path samples."""
    t = np.linspace(0.0, path.tau, samples + 1)
    pts = np.array([path.at(tk)[:2] for tk in t])
    x, y = pts[:, 0], pts[:, 1]
    area = 0.5 * float(np.sum(x[:-1] * np.diff(y) - y[:-1] * np.diff(x)))
    return 2.0 * area


def crit_single_geometric_phase(suite):
    """4. In the gauge-only picture the whole total phase is geometric and
    equals twice the drive-loop area; the drive-Hamiltonian picture of the
    same physics acquires the identical total phase."""
    tol_area = suite.tol(1e-4)
    tol_alpha = suite.tol(1e-5)
    rep = suite.pt_report()
    oracle = _signed_area_oracle(suite.pt()["path"])
    magnitude = 2.0 * np.pi * suite.model.ratio**2
    herm_alpha = detect_cyclic(suite.hermitian()["rec"]).alpha
    checks = {
        "beta_zero": abs(rep.beta),
        "alpha_is_gamma": abs(wrap_angle(rep.alpha - rep.gamma)),
        "area_oracle": abs(wrap_angle(rep.gamma - oracle)),
        "magnitude": abs(abs(rep.gamma) - magnitude),
        "picture_alpha": abs(wrap_angle(herm_alpha - rep.alpha)),
    }
    ok = (
        checks["beta_zero"] <= 1e-12
        and checks["alpha_is_gamma"] <= tol_alpha
        and checks["area_oracle"] <= tol_area
        and checks["magnitude"] <= tol_area
        and checks["picture_alpha"] <= tol_alpha
    )
    return CriterionResult(
        "single-geometric-phase",
        ok,
        f"γ = {rep.gamma:.6f} vs area oracle {oracle:.6f} (diff {checks['area_oracle']:.1e}, "
        f"tol {tol_area:.0e}); |γ| off 2π(Ω/δ)² by {checks['magnitude']:.1e}; "
        f"picture totals differ by {checks['picture_alpha']:.1e} (tol {tol_alpha:.0e})",
        checks,
    )


def crit_four_routes(suite):
    """5. The four γ routes (plus the overlap-chain variant) agree pairwise
    mod 2π on all three scenarios."""
    tol = suite.tol(1e-5)
    t0 = time.perf_counter()
    spreads = {
        "oscillator": suite.pt_report().route_spread(),
        "two_level": suite.two_level_report().route_spread(),
        "spin": suite.spin_report().route_spread(),
    }
    elapsed = time.perf_counter() - t0
    worst = max(spreads.values())
    ok = worst <= tol and elapsed < 30.0
    return CriterionResult(
        "four-route-agreement",
        ok,
        f"pairwise spreads: { {k: f'{v:.2e}' for k, v in spreads.items()} } "
        f"(tol {tol:.0e}), {elapsed:.1f}s",
        {**spreads, "seconds": elapsed},
    )


def crit_stokes(suite):
    """6. −∮A equals −∫Ω over the drive loop/disc, and small plaquettes
    reproduce the curvature with third-order error decay."""
    tol_loop = suite.tol(1e-4)
    sec = suite.section()
    r = suite.model.ratio

    def loop(s):
        x, y = r * np.sin(2 * np.pi * s), r * (np.cos(2 * np.pi * s) - 1.0)
        return np.array([x, y, x, y])

    g_loop = loop_integral_connection(sec, loop, 512)
    g_surf = surface_integral_curvature(sec, lambda u, v: u * loop(v), 64)
    g_exact = -2.0 * np.pi * r * r
    d_ls = abs(wrap_angle(g_loop - g_surf))
    d_exact = abs(wrap_angle(g_loop - g_exact))

    # plaquette values against the wedge coefficient 2 Ω_μν (both sections)
    gt = suite.tensors()[0]
    plaq = small_loop_phase(sec, CHART_POINTS[0], 0, 3, 0.05)
    d_plaq = abs(plaq - (-2.0 * gt.Omega[0, 3] * 0.05**2))

    # decay order measured where the curvature actually varies
    bs = bloch_section()
    b0 = np.array([1.1, 0.4])
    om = geometric_tensors(bs, b0).Omega[0, 1]
    resid = []
    for h in (0.2, 0.1, 0.05):
        resid.append(small_loop_phase(bs, b0, 0, 1, h) - (-2.0 * om * h * h))
    ratios = [resid[i] / resid[i + 1] for i in range(2)]
    order_ok = all(5.0 <= abs(q) <= 13.0 for q in ratios)

    ok = d_ls <= tol_loop and d_exact <= tol_loop and d_plaq <= suite.tol(1e-8) and order_ok
    return CriterionResult(
        "stokes-consistency",
        ok,
        f"loop vs surface diff {d_ls:.2e}, vs exact {d_exact:.2e} (tol {tol_loop:.0e}); "
        f"plaquette residual {d_plaq:.1e}; decay ratios {[f'{q:.1f}' for q in ratios]} (≈8 for h³)",
        {"loop_surface": d_ls, "exact": d_exact, "plaquette": d_plaq, "ratios": ratios},
    )


def crit_unitarity(suite):
    """7. W-norm drift and pairwise inner products preserved to 1e-8."""
    tol = suite.tol(1e-8)
    drifts = {
        "oscillator": suite.pt()["rec"].norm_drift(),
        "hermitian": suite.hermitian()["rec"].norm_drift(),
        "two_level": suite.two_level()["rec"].norm_drift(),
        "spin": suite.spin()["rec"].norm_drift(),
    }

    pt = suite.pt()
    dim = suite.model.n
    W0 = pt["W"](pt["path"].at(0.0))
    worst_pair = 0.0
    states = []
    for _ in range(2):
        v = suite.rng.normal(size=dim) + 1j * suite.rng.normal(size=dim)
        v[12:] = 0.0  # keep amplitudes inside the truncation trust region
        v /= np.sqrt(physical_inner(W0, v, v, validate=False).real)
        states.append(v)
    recs = [evolve(pt["H"], pt["W"], pt["path"], v, suite.steps) for v in states]
    vals = pairwise_inner(recs[0], recs[1])
    worst_pair = float(np.max(np.abs(vals - vals[0])))

    worst_drift = max(drifts.values())
    ok = worst_drift <= tol and worst_pair <= tol
    return CriterionResult(
        "unitarity",
        ok,
        f"worst norm drift {worst_drift:.2e}, pairwise overlap drift {worst_pair:.2e} (tol {tol:.0e})",
        {**drifts, "pairwise": worst_pair},
    )


def _route_values(rec):
    return {
        "gauge_split": geometric_phase_gauge_split(rec),
        "gauge_invariant": geometric_phase_gauge_invariant(rec),
        "kinematic": geometric_phase_kinematic(rec.densities()),
        "kinematic_bargmann": geometric_phase_kinematic_bargmann(rec),
        "holonomy": geometric_phase_holonomy(rec),
    }


def crit_invariance(suite):
    """8. γ routes invariant under smooth regauging and monotone time
    reparametrization; tensors invariant under section regauge, with the
    connection shifting by the exact gradient.

    The s ↦ s² warp is applied verbatim to the time-stamp-free routes
    (kinematic, overlap chain, holonomy), which are exactly invariant.
    Finite-difference routes get a strongly warped but non-degenerate
    monotone map 0.1 s + 0.9 s²: under pure s² the new-time derivative
    dφ/ds' is unbounded at s' = 0 (the warp speed vanishes there), so no
    grid-based derivative evaluation can represent that endpoint.
    """
    tol = suite.tol(1e-6)
    rng = np.random.default_rng(suite.seed + 1)
    worst = {"regauge": 0.0, "retime_timefree": 0.0, "retime_smooth": 0.0}

    for key in ("pt", "two_level", "spin"):
        rec = getattr(suite, key)()["rec"]
        base = _route_values(rec)
        tau = rec.tau
        c1, c2 = rng.normal(size=3), rng.normal(size=3)

        def theta(t):
            out = 0.0
            for j in range(3):
                w = 2.0 * np.pi * (j + 1) / tau
                out += 0.3 * c1[j] * np.sin(w * t) + 0.3 * c2[j] * (np.cos(w * t) - 1.0)
            return out

        got = _route_values(rec.regauged(theta))
        worst["regauge"] = max(
            worst["regauge"], max(abs(wrap_angle(got[k] - base[k])) for k in base)
        )

        s = np.arange(len(rec.times)) / (len(rec.times) - 1)
        rec_sq = rec.retimed(tau * np.maximum.accumulate(s**2 + 1e-16 * np.arange(len(s))))
        tf = {
            "kinematic": geometric_phase_kinematic(rec_sq.densities()),
            "kinematic_bargmann": geometric_phase_kinematic_bargmann(rec_sq),
            "holonomy": geometric_phase_holonomy(rec_sq),
        }
        worst["retime_timefree"] = max(
            worst["retime_timefree"], max(abs(wrap_angle(tf[k] - base[k])) for k in tf)
        )

        rec_bl = rec.retimed(tau * (0.1 * s + 0.9 * s**2))
        got = _route_values(rec_bl)
        worst["retime_smooth"] = max(
            worst["retime_smooth"], max(abs(wrap_angle(got[k] - base[k])) for k in base)
        )

    # section regauge: tensors fixed, connection shifts by the gradient
    sec = suite.section()
    coeff = rng.normal(size=4)

    def theta_sec(lam):
        return float(coeff @ np.sin(lam + 0.3))

    def grad_theta(lam):
        return coeff * np.cos(lam + 0.3)

    sec_g = sec.regauged(theta_sec)
    worst_tensor = 0.0
    worst_conn = 0.0
    for p, t_ref in zip(CHART_POINTS, suite.tensors()):
        t_new = geometric_tensors(sec_g, p)
        worst_tensor = max(
            worst_tensor,
            float(np.max(np.abs(t_new.Q - t_ref.Q))),
            float(np.max(np.abs(t_new.Omega - t_ref.Omega))),
            float(np.max(np.abs(t_new.g - t_ref.g))),
        )
        worst_conn = max(
            worst_conn, float(np.max(np.abs((t_new.A - t_ref.A) - grad_theta(p))))
        )

    ok = (
        worst["regauge"] <= tol
        and worst["retime_timefree"] <= tol
        and worst["retime_smooth"] <= tol
        and worst_tensor <= tol
        and worst_conn <= tol
    )
    return CriterionResult(
        "invariance-suite",
        ok,
        f"route shifts: regauge {worst['regauge']:.1e}, s² retime (time-free routes) "
        f"{worst['retime_timefree']:.1e}, smooth warp (all routes) {worst['retime_smooth']:.1e}; "
        f"tensor regauge {worst_tensor:.1e}; A − ∇ϑ shift {worst_conn:.1e} (tol {tol:.0e})",
        {**worst, "tensor": worst_tensor, "connection": worst_conn},
    )


def crit_timelike(suite):
    """9. The drive loop is timelike everywhere with ds² = −|dz¹|²; W = I
    scenarios never classify as timelike."""
    sec = suite.section()
    r = suite.model.ratio

    def curve(s):
        x, y = r * np.sin(2 * np.pi * s), r * (np.cos(2 * np.pi * s) - 1.0)
        return np.array([x, y, x, y])

    tags = classify_evolution(sec, curve, 16)
    all_timelike = all(t == "timelike" for _, t, _ in tags)
    speed2 = (2.0 * np.pi * r) ** 2
    worst_ds2 = max(abs(ds2 / speed2 + 1.0) for _, _, ds2 in tags)

    bs = bloch_section()
    tags_b = classify_evolution(bs, lambda s: np.array([1.0 + 0.4 * np.cos(2 * np.pi * s), 0.5 + 0.4 * np.sin(2 * np.pi * s)]), 12)
    no_timelike = all(t != "timelike" for _, t, _ in tags_b)

    ok = all_timelike and worst_ds2 <= suite.tol(1e-8) and no_timelike
    return CriterionResult(
        "timelike-classification",
        ok,
        f"drive loop all timelike = {all_timelike}, max |ds²/|dz|² + 1| = {worst_ds2:.1e}; "
        f"W = I curves timelike-free = {no_timelike}",
        {"ds2": worst_ds2},
    )


def crit_gw(suite):
    """10. Three-way identity γ − γ_gw = β_gw − β = −∫⟨⟨φ_a|iKφ_a⟩⟩dt on all
    scenarios; for constant metric the two splits coincide."""
    tol = suite.tol(1e-6)
    worst = 0.0
    for rep in (suite.pt_report(), suite.two_level_report(), suite.spin_report()):
        worst = max(
            worst,
            rep.residuals["gw_beta_identity"],
            rep.residuals["gw_gamma_identity"],
            rep.residuals["gw_sum_vs_alpha"],
        )
    spin_rep = suite.spin_report()
    const_w = max(
        abs(spin_rep.gw_beta - spin_rep.beta),
        abs(wrap_angle(spin_rep.gw_gamma - spin_rep.gamma)),
        abs(spin_rep.residuals["gw_beta_im"]),
        abs(spin_rep.residuals["gw_gamma_im"]),
    )
    ok = worst <= tol and const_w <= tol
    return CriterionResult(
        "garrison-wright-identity",
        ok,
        f"worst identity residual {worst:.2e} (tol {tol:.0e}); constant-W split "
        f"coincidence {const_w:.2e}",
        {"identity": worst, "const_w": const_w},
    )


def _taylor_ratios(section, metric_of, base, dirn, deltas, g):
    out = []
    for d in deltas:
        delta = d * dirn
        other = base + delta
        rho = bi_density(
            PhysicalState(section.value(base), tuple(base)), metric_of(base)
        )
        sig = bi_density(
            PhysicalState(section.value(other), tuple(other)), metric_of(other)
        )
        F = fidelity(rho, sig, metric_of(base))
        out.append(2.0 * (1.0 - F.value) - float(delta @ g @ delta))
    return [out[i] / out[i + 1] for i in range(len(out) - 1)]


def crit_fidelity_taylor_standard(suite):
    """11a. 2(1 − F) − g δδ decays at third order (ratio 8 ± 1) on a W = I
    section whose metric varies along the displacement."""
    bs = bloch_section()
    b0 = np.array([1.1, 0.4])
    g = geometric_tensors(bs, b0).g
    eye = np.eye(2, dtype=complex)
    ratios = _taylor_ratios(bs, lambda lam: eye, b0, np.array([0.8, 0.6]), (0.08, 0.04, 0.02), g)
    ok = all(7.0 <= q <= 9.0 for q in ratios)
    return CriterionResult(
        "fidelity-taylor-standard",
        ok,
        f"remainder ratios {[f'{q:.2f}' for q in ratios]} under δ-halving (window 8 ± 1)",
        {"ratios": ratios},
    )


def crit_fidelity_taylor_oscillator(suite):
    """11b. Same window on the oscillator section.  Analytically
    unattainable there: on that section F = exp(−g δδ/2) exactly (the
    overlap exponent is exactly quadratic in the displacement), so the
    remainder 2(1 − F) − g δδ is −(g δδ)²/4 + ..., which is quartic, and
    the δ-halving ratio converges to 16, outside the stated 8 ± 1.  Kept
    as stated and expected to fail; the quartic decay itself is verified
    as a sanity bound.
    """
    sec = suite.section()
    base = np.array([0.05, -0.03, 0.08, 0.02])
    g = geometric_tensors(sec, base).g
    dirn = np.array([0.3, 0.7, -0.2, 0.5])
    dirn /= np.linalg.norm(dirn)
    metric_of = lambda lam: sec.metric(lam[:2])
    ratios = _taylor_ratios(sec, metric_of, base, dirn, (0.04, 0.02, 0.01), g)
    ok = all(7.0 <= q <= 9.0 for q in ratios)
    return CriterionResult(
        "fidelity-taylor-oscillator",
        ok,
        f"remainder ratios {[f'{q:.2f}' for q in ratios]} (window 8 ± 1; quartic remainder "
        "gives 16 on this section)",
        {"ratios": ratios},
        expected_fail=True,
    )


ALL_CRITERIA = (
    crit_golden_qgt,
    crit_golden_curvature_metric,
    crit_im_re_split,
    crit_single_geometric_phase,
    crit_four_routes,
    crit_stokes,
    crit_unitarity,
    crit_invariance,
    crit_timelike,
    crit_gw,
    crit_fidelity_taylor_standard,
    crit_fidelity_taylor_oscillator,
)


def run_all(tol_scale=1.0, seed=7, steps=1500, n=60):
    """Run every acceptance criterion; returns a list of CriterionResult."""
    suite = _Suite(tol_scale=tol_scale, seed=seed, n=n, steps=steps)
    results = []
    with blas_threads(1):
        for crit in ALL_CRITERIA:
            results.append(crit(suite))
    return results
