"""Parameter-space scans, (gamma2, theta) binning and the CSV format.

A scan evaluates many canonical states for one qubit pair and writes one
CSV row per state. Rows are computed in vectorized chunks; row ``i`` always
comes from seed ``seed + i`` so any row can be regenerated on its own.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .correlation import classify, connected_r_matrix, r_matrix
from .measures import e_values, negativity, wootters_concurrence
from .qmat import DomainError
from .states import CanonicalParams, check_pair, sample_canonical

__all__ = [
    "SCAN_COLUMNS",
    "SEPARABLE_TOL",
    "scan_params",
    "make_separable",
    "evaluate_batch",
    "scan",
    "write_scan",
    "read_scan",
    "bin_records",
    "classify_bins",
    "BIN_COLUMNS",
    "fig2_witnesses",
    "WITNESS_COLUMNS",
]

SCAN_COLUMNS = (
    "seed", "l0", "l1", "l2", "l3", "l4", "phi", "pair",
    "E1", "E2", "E3", "E4", "E5", "N", "logneg",
    "q_alpha1", "q_alpha2", "q_alpha3", "q_gamma",
    "c_alpha1", "c_alpha2", "c_alpha3", "c_gamma1", "c_gamma2", "c_theta", "c_gamma",
    "separable",
)
SEPARABLE_TOL = 1e-9
ORDER_TOL = 1e-6
_FLOAT_COLUMNS = tuple(c for c in SCAN_COLUMNS if c not in ("seed", "pair", "separable"))


def make_separable(p: CanonicalParams, pair) -> CanonicalParams:
    """Project `p` onto states whose `pair` reduction is separable.

    Pair 12 needs E1 = 0 (drop l3), pair 13 needs E2 = 0 (drop l2) and pair
    23 needs l1 l4 e^{i phi} = l2 l3, reached by setting phi = 0 and
    l1 = l2 l3 / l4.
    """
    lam = p.lambdas.copy()
    phi = p.phi
    key = check_pair(pair)
    if key == "12":
        lam[3] = 0.0
    elif key == "13":
        lam[2] = 0.0
    elif lam[4] > 0.0:
        lam[1] = lam[2] * lam[3] / lam[4]
        phi = 0.0
    else:
        lam[3] = 0.0
    return CanonicalParams.normalized(*lam, phi=phi)


def scan_params(samples, seed=0, pair="12", separable_fraction=0.0):
    """Canonical parameters for rows ``seed, seed + 1, ...``.

    With ``separable_fraction > 0`` a seed-determined share of the rows is
    replaced by its separable projection (see :func:`make_separable`), so the
    scan contains separable members to compare against.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1")
    out = []
    for i in range(samples):
        s = seed + i
        p = sample_canonical(s)
        if separable_fraction > 0.0:
            coin = np.random.default_rng([s, 0x5E9]).uniform()
            if coin < separable_fraction:
                p = make_separable(p, pair)
        out.append(p)
    return out


def _pair_density(psi, pair):
    t = psi.reshape(-1, 2, 2, 2)
    spec = {"12": "nabx,ncdx->nabcd", "13": "naxb,ncxd->nabcd", "23": "nxab,nxcd->nabcd"}[pair]
    return np.einsum(spec, t, np.conj(t)).reshape(-1, 4, 4)


def evaluate_batch(lams, phis, pair="12"):
    """Column arrays for a batch of canonical states (no seed column)."""
    key = check_pair(pair)
    lams = np.asarray(lams, dtype=float)
    phis = np.asarray(phis, dtype=float)
    psi = np.zeros((len(lams), 8), dtype=complex)
    psi[:, 0] = lams[:, 0]
    psi[:, 4] = lams[:, 1] * np.exp(1j * phis)
    psi[:, 5:8] = lams[:, 2:5]
    rho = _pair_density(psi, key)

    e1, e2, e3, e4, e5 = e_values(lams, phis)
    neg = negativity(rho)
    quantum = classify(r_matrix(rho))
    connected = classify(connected_r_matrix(rho))
    conc = wootters_concurrence(rho)
    return {
        "l0": lams[:, 0], "l1": lams[:, 1], "l2": lams[:, 2], "l3": lams[:, 3], "l4": lams[:, 4],
        "phi": phis,
        "E1": e1, "E2": e2, "E3": e3, "E4": e4, "E5": e5,
        "N": neg.negativity, "logneg": neg.log_negativity,
        "q_alpha1": quantum.alpha1, "q_alpha2": quantum.alpha2, "q_alpha3": quantum.alpha3,
        "q_gamma": quantum.gamma,
        "c_alpha1": connected.alpha1, "c_alpha2": connected.alpha2, "c_alpha3": connected.alpha3,
        "c_gamma1": connected.gamma1, "c_gamma2": connected.gamma2, "c_theta": connected.theta,
        "c_gamma": connected.gamma,
        "separable": conc <= SEPARABLE_TOL,
        # extras kept in memory only; not part of the CSV schema
        "concurrence": conc,
        "q_theta": quantum.theta,
        "q_discriminant": quantum.discriminant,
        "c_discriminant": connected.discriminant,
    }


def scan(samples, seed=0, pair="12", separable_fraction=0.0, chunk=10_000):
    """Evaluate a scan and return a dict of column arrays.

    Besides :data:`SCAN_COLUMNS` the dict carries ``concurrence`` (the
    Wootters concurrence used for the separable flag), ``q_theta`` and the
    discriminants ``q_discriminant`` and ``c_discriminant``.
    """
    key = check_pair(pair)
    params = scan_params(samples, seed, key, separable_fraction)
    lams = np.array([p.lambdas for p in params])
    phis = np.array([p.phi for p in params])
    parts = [evaluate_batch(lams[i:i + chunk], phis[i:i + chunk], key) for i in range(0, samples, chunk)]
    cols = {name: np.concatenate([part[name] for part in parts]) for name in parts[0]}
    cols["seed"] = np.arange(seed, seed + samples)
    cols["pair"] = np.array([key] * samples)
    return cols


def _fmt(name, value):
    if name == "separable":
        return "1" if value else "0"
    if name in ("seed", "pair"):
        return str(value)
    return repr(float(value))


def write_scan(cols, out):
    """Write scan columns as CSV to a path or an open text stream."""
    def _emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCAN_COLUMNS)
        for i in range(len(cols["seed"])):
            w.writerow([_fmt(c, cols[c][i]) for c in SCAN_COLUMNS])

    if hasattr(out, "write"):
        _emit(out)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            _emit(fh)


def read_scan(path):
    """Read a scan CSV back into column arrays."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            rows, header = [], list(SCAN_COLUMNS)
        else:
            header = reader.fieldnames
            rows = list(reader)
    if tuple(header) != SCAN_COLUMNS:
        raise DomainError("scan file header does not match the scan schema")
    cols = {c: np.array([float(r[c]) for r in rows], dtype=float) for c in _FLOAT_COLUMNS}
    cols["seed"] = np.array([int(r["seed"]) for r in rows], dtype=np.int64)
    cols["pair"] = np.array([r["pair"] for r in rows], dtype=str)
    cols["separable"] = np.array([r["separable"] == "1" for r in rows], dtype=bool)
    return cols


@dataclass
class ClassBin:
    x_center: float
    theta_center: float
    x_width: float
    theta_width: float
    members: np.ndarray


def bin_records(cols, fix="g2theta", x_width=0.02, theta_width=0.02):
    """Group rows into (gamma2, theta) or (alpha1, theta) cells.

    Cell ``(i, j)`` holds rows with ``floor(x / x_width) == i`` and
    ``floor(theta / theta_width) == j`` where x is ``c_gamma2`` or
    ``c_alpha1`` depending on `fix`.
    """
    if fix not in ("g2theta", "a1theta"):
        raise DomainError("fix must be 'g2theta' or 'a1theta'")
    if x_width <= 0 or theta_width <= 0:
        raise DomainError("bin widths must be positive")
    x = cols["c_gamma2"] if fix == "g2theta" else cols["c_alpha1"]
    th = cols["c_theta"]
    if len(x) == 0:
        return []
    ix = np.floor(x / x_width).astype(np.int64)
    it = np.floor(th / theta_width).astype(np.int64)
    keys = np.stack([ix, it], axis=1)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(len(uniq) + 1))
    return [
        ClassBin(
            x_center=(i + 0.5) * x_width,
            theta_center=(j + 0.5) * theta_width,
            x_width=x_width,
            theta_width=theta_width,
            members=order[bounds[n]:bounds[n + 1]],
        )
        for n, (i, j) in enumerate(uniq)
    ]


BIN_COLUMNS = (
    "fix", "x_center", "theta_center", "x_width", "theta_width", "count", "n_separable",
    "gamma_c_min", "gamma_c_max", "sep_gamma_c_min", "sep_gamma_c_max",
    "nonsep_gamma_c_min", "nonsep_gamma_c_max", "monotone_in_minus_alpha1", "separable_extreme_ok",
)


def _monotone(cols, idx):
    order = idx[np.argsort(-cols["c_alpha1"][idx], kind="stable")]
    g = cols["c_gamma"][order]
    return bool(np.all(np.diff(g) >= -ORDER_TOL))


def classify_bins(cols, fix="g2theta", x_width=0.02, theta_width=0.02):
    """Per-bin summary rows (dicts keyed by :data:`BIN_COLUMNS`).

    ``separable_extreme_ok`` is blank unless the bin has both separable and
    entangled members. With ``fix="g2theta"`` it checks that the smallest
    separable gamma_c is no larger than every entangled gamma_c; with
    ``fix="a1theta"`` it checks that separable members reach the bin maximum.
    Both comparisons allow 1e-6 slack.
    """
    rows = []
    for b in bin_records(cols, fix, x_width, theta_width):
        idx = b.members
        g = cols["c_gamma"][idx]
        sep = cols["separable"][idx]
        gs, gn = g[sep], g[~sep]
        ok = ""
        if gs.size and gn.size:
            if fix == "g2theta":
                ok = bool(gs.min() <= gn.min() + ORDER_TOL)
            else:
                ok = bool(gs.max() >= gn.max() - ORDER_TOL)
        rows.append({
            "fix": fix,
            "x_center": b.x_center,
            "theta_center": b.theta_center,
            "x_width": b.x_width,
            "theta_width": b.theta_width,
            "count": int(idx.size),
            "n_separable": int(sep.sum()),
            "gamma_c_min": float(g.min()),
            "gamma_c_max": float(g.max()),
            "sep_gamma_c_min": float(gs.min()) if gs.size else "",
            "sep_gamma_c_max": float(gs.max()) if gs.size else "",
            "nonsep_gamma_c_min": float(gn.min()) if gn.size else "",
            "nonsep_gamma_c_max": float(gn.max()) if gn.size else "",
            "monotone_in_minus_alpha1": _monotone(cols, idx),
            "separable_extreme_ok": ok,
        })
    return rows


WITNESS_COLUMNS = (
    "gamma2_center", "theta_center", "count", "n_witness_pairs",
    "seed_low_logneg", "seed_high_logneg", "logneg_low", "logneg_high",
    "gamma_c_low_logneg", "gamma_c_high_logneg", "gamma_c_gap",
)


def _count_inversions(en, g, block=2048):
    # pairs (i, j) with en[i] < en[j] and g[i] > g[j] + ORDER_TOL, plus the widest one
    count = 0
    best = (0.0, -1, -1)
    n = len(en)
    for start in range(0, n, block):
        e_i = en[start:start + block, None]
        g_i = g[start:start + block, None]
        gap = np.where((e_i < en[None, :]) & (g_i > g[None, :] + ORDER_TOL), g_i - g[None, :], 0.0)
        count += int(np.count_nonzero(gap))
        if gap.size and gap.max() > best[0]:
            i, j = np.unravel_index(np.argmax(gap), gap.shape)
            best = (float(gap[i, j]), start + int(i), int(j))
    return count, best


def fig2_witnesses(cols, g2_width=0.02, theta_width=0.02):
    """Bins where logarithmic negativity and gamma_c are ordered oppositely.

    A witness is a pair (s1, s2) in one (gamma2, theta) bin with
    E_N(s1) < E_N(s2) but gamma_c(s1) > gamma_c(s2) + 1e-6. One row per bin
    that has any: the number of witness pairs and the pair with the widest
    gamma_c gap.
    """
    rows = []
    for b in bin_records(cols, "g2theta", g2_width, theta_width):
        idx = b.members
        if idx.size < 2:
            continue
        count, (gap, i, j) = _count_inversions(cols["logneg"][idx], cols["c_gamma"][idx])
        if not count:
            continue
        lo, hi = idx[i], idx[j]
        rows.append({
            "gamma2_center": b.x_center,
            "theta_center": b.theta_center,
            "count": int(idx.size),
            "n_witness_pairs": count,
            "seed_low_logneg": int(cols["seed"][lo]),
            "seed_high_logneg": int(cols["seed"][hi]),
            "logneg_low": float(cols["logneg"][lo]),
            "logneg_high": float(cols["logneg"][hi]),
            "gamma_c_low_logneg": float(cols["c_gamma"][lo]),
            "gamma_c_high_logneg": float(cols["c_gamma"][hi]),
            "gamma_c_gap": gap,
        })
    return rows
