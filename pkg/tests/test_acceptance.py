"""Acceptance criteria 1-10, each at its stated tolerance.

Every check records a verdict line; the terminal summary prints one
PASS/FAIL line per criterion followed by its parts.
"""
import numpy as np
import pytest
from scipy import integrate

from conncorr.correlation import (
    TSIRELSON, alpha_connected, alpha_quantum, chsh_optimize, classify, connected_r_matrix, gram,
    max_violation_eigen, r_matrix,
)
from conncorr.lhv import (
    build_model, correlator_closed, f_observable, freedom_of_choice_witness, joint_distribution, k_distribution,
    mc_correlator,
)
from conncorr.measures import (
    bipartite_concurrence, concurrences, e5_matrix, measures_from_concurrences, measures_from_params,
    wootters_concurrence,
)
from conncorr.qmat import charpoly3
from conncorr.scan import classify_bins, fig2_witnesses, scan
from conncorr.states import CanonicalParams, canonical_state, density, reduce_pair, reduce_single, sample_canonical

PAIRS = ("12", "13", "23")
SCAN_SAMPLES = 100_000
SEPARABLE_FRACTION = 0.2
# breakpoints crowding lambda = 1, where lambda^(2k) concentrates for large k
ENDPOINT_CLUSTER = [1 - 10.0**-j for j in range(1, 13)]

pytestmark = pytest.mark.slow


def stack_rho(params):
    psi = np.array([canonical_state(p) for p in params])
    return np.einsum("ni,nj->nij", psi, psi.conj())


def unit(v):
    return v / np.linalg.norm(v)


@pytest.fixture(scope="module")
def scans():
    return {pair: scan(SCAN_SAMPLES, seed=0, pair=pair, separable_fraction=SEPARABLE_FRACTION) for pair in PAIRS}


@pytest.fixture(scope="module")
def states_1000():
    params = [sample_canonical(s) for s in range(1000)]
    return params, stack_rho(params)


# 1 ---------------------------------------------------------------------------

@pytest.mark.parametrize("kind", ["quantum", "connected"])
def test_c1_coefficient_equivalence(states_1000, verdict, kind):
    params, rho = states_1000
    formula = alpha_quantum if kind == "quantum" else alpha_connected
    matrix = r_matrix if kind == "quantum" else connected_r_matrix
    worst = 0.0
    for pair in PAIRS:
        numeric = np.stack(charpoly3(gram(matrix(reduce_pair(rho, pair)))), axis=-1)
        analytic = np.array([formula(measures_from_params(p, pair)) for p in params])
        worst = max(worst, float(np.max(np.abs(analytic - numeric))))
    ok = verdict(1, f"alpha_{kind} vs charpoly3, 1000 states x 3 pairs", worst <= 1e-9, f"max |diff| = {worst:.2e}")
    assert ok


# 2 ---------------------------------------------------------------------------

def test_c2_triple_oracle(verdict):
    params = [sample_canonical(10_000 + s) for s in range(200)]
    rho = stack_rho(params)
    worst = 0.0
    for i, p in enumerate(params):
        rp = reduce_pair(rho[i], PAIRS[i % 3])
        for r in (r_matrix(rp), connected_r_matrix(rp)):
            closed = classify(r).gamma
            eig = max_violation_eigen(r)
            opt, _ = chsh_optimize(r, restarts=10, seed=i)
            worst = max(worst, abs(closed - eig), abs(closed - opt), abs(eig - opt))
    ok = verdict(2, "classify / 2 sqrt(u1+u2) / chsh_optimize on 200 R and 200 R_c", worst <= 1e-6,
                 f"max spread = {worst:.2e}")
    assert ok


# 3 ---------------------------------------------------------------------------

def test_c3_pure_state_law(verdict):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(500):
        l0, l1, l3 = np.abs(rng.normal(size=3))
        p = CanonicalParams.normalized(l0, l1, 0.0, l3, 0.0, phi=rng.uniform(0, np.pi))
        rho = density(canonical_state(p))
        c = bipartite_concurrence(reduce_single(rho, 1))
        g = classify(connected_r_matrix(reduce_pair(rho, "12"))).gamma
        worst = max(worst, abs(g - 2 * np.sqrt(2) * c))
    ok = verdict(3, "gamma_c = 2 sqrt2 C(psi), 500 states with l2 = l4 = 0", worst <= 1e-9, f"max |diff| = {worst:.2e}")
    assert ok


# 4 ---------------------------------------------------------------------------

LIMITS = {
    "only E1 (l2 = l4 = 0)": ((2, 4), lambda ms: 2 * np.sqrt(2) * ms.e1),
    "l3 = l4 = 0": ((3, 4), lambda ms: 0.0),
    "l0 = 0": ((0,), lambda ms: 0.0),
    "only E4 (l1 = l2 = l3 = 0)": ((1, 2, 3), lambda ms: 2 * ms.e4**2),
}


@pytest.mark.parametrize("case", list(LIMITS))
def test_c4_single_measure_limits(verdict, case):
    zero, expected = LIMITS[case]
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(200):
        lam = np.abs(rng.normal(size=5))
        lam[list(zero)] = 0.0
        p = CanonicalParams.normalized(*lam, phi=rng.uniform(0, np.pi))
        g = classify(connected_r_matrix(reduce_pair(density(canonical_state(p)), "12"))).gamma
        worst = max(worst, abs(g - expected(measures_from_params(p))))
    ok = verdict(4, case, worst <= 1e-9, f"200 states, max |diff| = {worst:.2e}")
    assert ok


# 5 ---------------------------------------------------------------------------

def test_c5_concurrence_identities(states_1000, verdict):
    params, _ = states_1000
    worst = 0.0
    for p in params:
        ms = measures_from_params(p)
        got = measures_from_concurrences(concurrences(canonical_state(p)), ms.e1)
        worst = max(worst, float(np.max(np.abs(np.array(got) - (ms.e2, ms.e3, ms.e4)))))
    ok = verdict(5, "E2, E3, E4 from concurrences", worst <= 1e-8, f"max |diff| = {worst:.2e}")
    assert ok


def _e5_forms(params, rho):
    single = {q: reduce_single(rho, q) for q in (1, 2, 3)}
    rows = []
    for i, p in enumerate(params):
        ms = measures_from_params(p)
        rows.append((
            ms.e5,
            e5_matrix(reduce_pair(rho[i], "12"), single[1][i], single[2][i], ms),
            e5_matrix(reduce_pair(rho[i], "23"), single[2][i], single[3][i], ms),
            e5_matrix(reduce_pair(rho[i], "13"), single[1][i], single[3][i], ms),
        ))
    return np.array(rows)


def test_c5_e5_matrix_forms_agree(states_1000, verdict):
    forms = _e5_forms(*states_1000)
    spread = float(np.max(np.ptp(forms[:, 1:], axis=1)))
    ok = verdict(5, "E5 matrix expressions for pairs 12, 23, 31 agree", spread <= 1e-8, f"max spread = {spread:.2e}")
    assert ok


def test_c5_e5_matrix_equals_amplitude_form(states_1000, verdict):
    forms = _e5_forms(*states_1000)
    diff = forms[:, 1:] - forms[:, :1]
    worst = float(np.max(np.abs(diff)))
    detail = (
        f"max |diff| = {worst:.2e}; matrix - amplitude form lies in "
        f"[{diff.min():.15f}, {diff.max():.15f}] (constant 1/3)"
    )
    ok = verdict(5, "E5 matrix expressions equal the amplitude form", worst <= 1e-8, detail)
    assert ok


@pytest.mark.parametrize("pair, idx", [("12", 0), ("13", 1), ("23", 2)])
def test_c5_wootters(states_1000, verdict, pair, idx):
    params, rho = states_1000
    expected = np.array([measures_from_params(p).as_tuple()[idx] for p in params])
    worst = float(np.max(np.abs(wootters_concurrence(reduce_pair(rho, pair)) - expected)))
    ok = verdict(5, f"Wootters(rho{pair}) = E{idx + 1}", worst <= 1e-8, f"max |diff| = {worst:.2e}")
    assert ok


# 6 ---------------------------------------------------------------------------

def _extreme_check(cols, fix):
    rows = classify_bins(cols, fix, 0.02, 0.02)
    mixed = [r for r in rows if r["separable_extreme_ok"] != ""]
    bad = [r for r in mixed if not r["separable_extreme_ok"]]
    if fix == "g2theta":
        gaps = [r["sep_gamma_c_min"] - r["nonsep_gamma_c_min"] for r in bad]
    else:
        gaps = [r["nonsep_gamma_c_max"] - r["sep_gamma_c_max"] for r in bad]
    detail = f"{len(mixed)} bins with separable and entangled members, {len(bad)} violate"
    if bad:
        detail += f", worst gap {max(gaps):.2e}"
    return not bad and bool(mixed), detail


@pytest.mark.parametrize("pair", PAIRS)
def test_c6_fig1_separable_minimum(scans, verdict, pair):
    ok, detail = _extreme_check(scans[pair], "g2theta")
    assert verdict(6, f"(gamma2, theta) bins, pair {pair}: separable min gamma_c", ok, detail)


@pytest.mark.parametrize("pair", PAIRS)
def test_c6_fig3_separable_maximum(scans, verdict, pair):
    ok, detail = _extreme_check(scans[pair], "a1theta")
    assert verdict(6, f"(alpha1, theta) bins, pair {pair}: separable max gamma_c", ok, detail)


# 7 ---------------------------------------------------------------------------

@pytest.mark.parametrize("pair", PAIRS)
def test_c7_fig2_witness(scans, verdict, pair):
    rows = fig2_witnesses(scans[pair], 0.02, 0.02)
    pairs_found = sum(r["n_witness_pairs"] for r in rows)
    detail = f"{len(rows)} bins with witnesses, {pairs_found} witness pairs"
    if rows:
        best = max(rows, key=lambda r: r["gamma_c_gap"])
        detail += f", widest gamma_c gap {best['gamma_c_gap']:.3f}"
    assert verdict(7, f"E_N vs gamma_c order inversion, pair {pair}", len(rows) > 0, detail)


# 8 ---------------------------------------------------------------------------

@pytest.mark.parametrize("pair", PAIRS)
def test_c8_bounds(scans, verdict, pair):
    c = scans[pair]
    disc = max(c["q_discriminant"].max(), c["c_discriminant"].max())
    theta_ok = all(np.all((c[k] >= 0) & (c[k] <= np.pi / 3 + 1e-15)) for k in ("q_theta", "c_theta"))
    gmax = max(c["q_gamma"].max(), c["c_gamma"].max())
    ok = disc <= 1e-9 and theta_ok and gmax <= TSIRELSON + 1e-9
    detail = f"max Delta = {disc:.1e}, theta in [0, pi/3]: {theta_ok}, max gamma = {gmax:.6f}"
    assert verdict(8, f"{SCAN_SAMPLES} states, pair {pair}", ok, detail)


# 9 ---------------------------------------------------------------------------

def _lhv_cases(n, seed):
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(n):
        rho = reduce_pair(density(canonical_state(sample_canonical(seed + i))), PAIRS[i % 3])
        r = connected_r_matrix(rho) if i % 2 else r_matrix(rho)
        cases.append((build_model(r), unit(rng.normal(size=3)), unit(rng.normal(size=3))))
    return cases


def test_c9_monte_carlo(verdict):
    zs = []
    for i, (m, a, b) in enumerate(_lhv_cases(20, 900)):
        est, err, _ = mc_correlator(m, a, b, 10**6, seed=i)
        exact = correlator_closed(m, a, b)
        zs.append(abs(est - exact) / err if err > 0 else (0.0 if est == exact else np.inf))
    ok = verdict(9, "MC vs closed form, 20 cases at n = 1e6", max(zs) <= 3, f"max |z| = {max(zs):.2f}")
    assert ok


def test_c9_normalization(verdict):
    rng = np.random.default_rng(9)
    worst = 0.0
    for m, a, b in _lhv_cases(50, 700):
        for lam in rng.uniform(size=20):
            worst = max(worst, abs(joint_distribution(m, a, b, lam).p.sum() - 1), abs(k_distribution(m, a, b, lam).sum() - 1))
    ok = verdict(9, "joint and k distributions sum to 1", worst <= 1e-12, f"max |sum - 1| = {worst:.2e}")
    assert ok


def test_c9_quadrature(verdict):
    worst = 0.0
    for m, a, b in _lhv_cases(100, 500):
        val, _ = integrate.quad(
            lambda lam: f_observable(m, a, lam, "a") @ f_observable(m, b, lam, "b"),
            0, 1, epsabs=1e-12, epsrel=1e-10, limit=500, points=ENDPOINT_CLUSTER,
        )
        worst = max(worst, abs(val - correlator_closed(m, a, b)))
    ok = verdict(9, "int F.F dlambda = sum q a~ b~, 100 models", worst <= 1e-8, f"max |diff| = {worst:.2e}")
    assert ok


def test_c9_freedom_of_choice_witness(verdict):
    # search asymmetric models, setting pairs and lambda values for the largest witness
    rng = np.random.default_rng(99)
    best = 0.0
    models = [build_model(np.diag([1.0, 0.5, 0.25]))] + [m for m, _, _ in _lhv_cases(30, 300)]
    for m in models:
        for _ in range(20):
            s1 = (unit(rng.normal(size=3)), unit(rng.normal(size=3)))
            s2 = (unit(rng.normal(size=3)), unit(rng.normal(size=3)))
            for lam in (0.1, 0.5, 0.9):
                best = max(best, freedom_of_choice_witness(m, s1, s2, lam))
    ok = verdict(9, "freedom-of-choice witness > 1e-3", best > 1e-3,
                 f"largest witness over {len(models) * 60} evaluations = {best:.2e}")
    assert ok


# 10 --------------------------------------------------------------------------

@pytest.mark.parametrize("pair", PAIRS)
def test_c10_ppt_biconditional(scans, verdict, pair):
    c = scans[pair]
    neg = c["N"] > 1e-7
    conc = c["concurrence"] > 1e-7
    mismatch = np.flatnonzero(neg != conc)
    detail = f"{mismatch.size} of {neg.size} states disagree"
    if mismatch.size:
        i = mismatch[np.argmax(c["concurrence"][mismatch])]
        detail += f" (e.g. C = {c['concurrence'][i]:.2e}, N = {c['N'][i]:.2e})"
    assert verdict(10, f"N > 1e-7 <=> C > 1e-7, pair {pair}", mismatch.size == 0, detail)
