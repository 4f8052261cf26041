"""Witness constructions for approximation barriers: low-pass ridge spectra,
high-frequency gap probes, dyadic frequency blocks, oscillatory targets with
growing Sobolev mass, sign-vector packing families, and the tail-mass
integrals of the arctan-dictionary measure.

Everything here produces measured quantities and closed-form reference
values; nothing claims a true infimum over a network class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barron import FourierSum, fourier_sum, hm_norm_exact
from .numerics import QuadratureSpec, axis_rule, tensor_nodes
from .relu_nets import sigma_k
from .sphere_geom import SphericalNet, separated_subset


class ConvergenceError(RuntimeError):
    """Two quadrature refinement levels disagreed beyond the allowed margin."""


# ----------------------------------------------------------------------
# exponential-decay ridge atoms and the high-frequency gap probe
# ----------------------------------------------------------------------

def exp_ridge_fourier(alpha: float, omega: float, b: float, xi):
    """Closed-form transform 2 alpha e^{i b xi} / (alpha^2 + (omega xi)^2).

    The spectrum of the two-sided exponential ridge atom concentrates at low
    frequencies and decays quadratically in |xi|.
    """
    if alpha <= 0:
        raise ValueError(f"decay rate must be positive, got {alpha}")
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 0
    xi = np.atleast_1d(xi)
    vals = 2.0 * alpha * np.exp(1j * b * xi) / (alpha**2 + (omega * xi) ** 2)
    return complex(vals[0]) if single else vals


@dataclass(frozen=True)
class GapProbe:
    """Best least-squares error over random atom-parameter candidates.

    ``errors_by_width[j]`` is the best L2[-1, 1] error using the first j + 1
    atoms of each candidate set, so the sequence is nonincreasing; ``error``
    is the final entry.  An upper bound on the true best error.
    """

    error: float
    errors_by_width: tuple[float, ...]
    omega0: float
    n_units: int
    candidates: int
    regularized: int


def highfreq_gap(alpha: float, omega0: float, n_units: int, candidates: int,
                 seed: int = 0, grid_resolution: int = 256) -> GapProbe:
    """Probe how well e^{i omega0 x} is approximated on [-1, 1] by n atoms.

    Each candidate draws an atom-parameter sequence (omega_j, b_j) from a
    seeded generator; outer coefficients for each prefix width are solved by
    weighted least squares on a Gauss-Legendre grid.  Prefix nesting makes
    the reported per-width errors nonincreasing.  Singular normal equations
    fall back to a 1e-10 ridge and are counted in ``regularized``.
    """
    if n_units < 1:
        raise ValueError(f"need at least one unit, got {n_units}")
    if candidates < 1:
        raise ValueError(f"need at least one candidate, got {candidates}")
    nodes, weights = axis_rule(-1.0, 1.0, grid_resolution)
    target = np.exp(1j * omega0 * nodes)
    target_sq = float(np.dot(weights, np.abs(target) ** 2))
    rng = np.random.default_rng(seed)
    omega_scale = max(4.0, 2.0 * abs(omega0))
    best = np.full(n_units, np.inf)
    regularized = 0
    for _ in range(candidates):
        params = rng.standard_normal((n_units, 2))
        omegas = params[:, 0] * omega_scale
        biases = params[:, 1] * 2.0
        atoms = np.exp(-alpha * np.abs(nodes[:, None] * omegas[None, :]
                                       + biases[None, :]))
        wa = atoms * weights[:, None]
        gram_full = atoms.T @ wa
        rhs_full = wa.T @ target
        for width in range(1, n_units + 1):
            gram = gram_full[:width, :width]
            rhs = rhs_full[:width]
            try:
                sol = np.linalg.solve(gram, rhs)
            except np.linalg.LinAlgError:
                regularized += 1
                sol = np.linalg.solve(gram + 1e-10 * np.eye(width), rhs)
            residual_sq = target_sq - 2.0 * float(np.real(np.vdot(rhs, sol))) \
                + float(np.real(sol.conj() @ gram @ sol))
            err = math.sqrt(max(0.0, residual_sq))
            if err < best[width - 1]:
                best[width - 1] = err
    best = np.minimum.accumulate(best)
    return GapProbe(
        error=float(best[-1]),
        errors_by_width=tuple(float(v) for v in best),
        omega0=float(omega0),
        n_units=n_units,
        candidates=candidates,
        regularized=regularized,
    )


# ----------------------------------------------------------------------
# dyadic frequency blocks
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicDecomposition:
    """Sharp annulus split of an expansion: level 0 holds |xi| < 2, level
    k >= 1 holds 2^k <= |xi| < 2^(k+1).  On atomic spectra the indicator
    split is an exact partition, so the blocks sum back to the source and
    are pairwise orthogonal on the period cell."""

    source: FourierSum
    blocks: tuple[tuple[int, FourierSum], ...]


def _dyadic_level(xi_norm: float) -> int:
    if xi_norm < 2.0:
        return 0
    return int(math.floor(math.log2(xi_norm)))


def dyadic_blocks(spectrum: FourierSum, levels: int | None = None) -> DyadicDecomposition:
    """Split a one-dimensional expansion into dyadic frequency annuli."""
    if spectrum.d != 1:
        raise ValueError("dyadic blocks are implemented for d = 1")
    grouped: dict[int, dict] = {}
    top = 0
    for z, c in spectrum.coeffs.items():
        level = _dyadic_level(abs(z[0]) / spectrum.L)
        grouped.setdefault(level, {})[z] = c
        top = max(top, level)
    if levels is None:
        levels = top
    if top > levels:
        raise ValueError(
            f"spectrum reaches level {top}; raise levels (got {levels})"
        )
    blocks = tuple(
        (k, fourier_sum(1, spectrum.L, spectrum.a, grouped.get(k, {})))
        for k in range(levels + 1)
    )
    return DyadicDecomposition(spectrum, blocks)


def residual_tail_norm(decomp: DyadicDecomposition, from_level: int) -> float:
    """Exact L2 norm of the sum of all blocks at or above ``from_level``.

    Orthogonality reduces it to the root of the summed block norms squared.
    """
    total = 0.0
    for level, block in decomp.blocks:
        if level >= from_level:
            total += hm_norm_exact(block, 0) ** 2
    return math.sqrt(total)


# ----------------------------------------------------------------------
# oscillatory witnesses
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OscillatoryWitness:
    """Single high mode e^{2 pi i K x_1} with K = n^((k+1)/d) and its exact
    H^m norm on the unit cube; the norm grows like (2 pi K)^m."""

    fs: FourierSum
    K: float
    hm_norm: float
    predicted_growth: float
    ratio_to_leading: float


def oscillatory_witness(n: int, k: int, d: int, m: int) -> OscillatoryWitness:
    """Build the single-mode witness and report its exact Sobolev mass."""
    if n < 1:
        raise ValueError(f"width must be >= 1, got {n}")
    K = float(n) ** ((k + 1) / d)
    z1 = int(math.floor(K))
    offset = K - z1
    a = (offset,) + (0.0,) * (d - 1)
    index = (z1,) + (0,) * (d - 1)
    fs = fourier_sum(d, 1.0, a, {index: 1.0})
    norm = hm_norm_exact(fs, m)
    leading = (2.0 * math.pi * K) ** m
    return OscillatoryWitness(
        fs=fs,
        K=K,
        hm_norm=norm,
        predicted_growth=float(n) ** (m * (k + 1) / d),
        ratio_to_leading=norm / leading if leading > 0 else math.nan,
    )


# ----------------------------------------------------------------------
# sign-vector packing families
# ----------------------------------------------------------------------

FOURIER_KIND = "fourier"
RELU_KIND = "relu"


@dataclass(frozen=True)
class PackingFamily:
    """Sign-indexed witness family over a separated direction set.

    ``fourier`` kind: f_sigma(x) = normalization * sum_j sigma_j
    e^{2 pi i R omega_j . x} with normalization 1 / (sqrt(m) R^s).
    ``relu`` kind: f_sigma(x) = (1 / sqrt(m)) sum_j sigma_j
    sigma_k(R omega_j . x).
    """

    kind: str
    d: int
    m: int
    R: float
    k: int
    s: float
    directions: SphericalNet
    signs: np.ndarray
    normalization: float
    delta: float

    def evaluate(self, sign_index: int, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = np.atleast_2d(x)
        sigma = self.signs[sign_index]
        proj = pts @ self.directions.points[: self.m].T
        if self.kind == FOURIER_KIND:
            atoms = np.exp(2j * np.pi * self.R * proj)
        else:
            atoms = sigma_k(self.R * proj, self.k)
        vals = self.normalization * (atoms @ sigma)
        return (vals[0] if single else vals)


def build_packing(kind: str, d: int, k_or_s: float, n: int, seed: int = 0,
                  c0: float | None = None, max_signs: int = 4096) -> PackingFamily:
    """Construct a packing family at the scale dictated by the budget n.

    ``fourier``: m = floor(n^((d-1)/d)) directions, scale R = n^(1/d),
    separation delta = n^(-1/d), normalization 1/(sqrt(m) R^s).
    ``relu``: m = floor(n^(d/(2d + 2k + 1))), R = n^(1/2 + k/d),
    delta = c0 m^(-1/(d-1)) with default c0 = sqrt(1/(4k)); delta is a free
    parameter here and the default is only the reference choice.

    Sign vectors are enumerated exhaustively for m <= 12 and sampled
    (seeded, distinct) otherwise; m > 16 is refused as beyond desk scale.
    """
    if kind not in (FOURIER_KIND, RELU_KIND):
        raise ValueError(f"unknown packing kind {kind!r}")
    if kind == FOURIER_KIND:
        s = float(k_or_s)
        k = 0
        m = max(1, int(math.floor(float(n) ** ((d - 1) / d))))
        R = float(n) ** (1.0 / d)
        delta = float(c0 if c0 is not None else 1.0) * float(n) ** (-1.0 / d)
        normalization = 1.0 / (math.sqrt(m) * R**s)
    else:
        k = int(k_or_s)
        s = float(k)
        if k < 1:
            raise ValueError("relu packing needs power k >= 1")
        m = max(1, int(math.floor(float(n) ** (d / (2.0 * d + 2.0 * k + 1.0)))))
        R = float(n) ** (0.5 + k / d)
        base = c0 if c0 is not None else math.sqrt(1.0 / (4.0 * k))
        delta = float(base) * (m ** (-1.0 / (d - 1)) if d > 1 and m > 1 else 1.0)
        normalization = 1.0 / math.sqrt(m)
    if m > 16:
        raise ValueError(
            f"direction count m = {m} exceeds the desk-scale cap 16; lower n"
        )
    pool = max(8192, 512 * m)
    net = separated_subset(d, delta, candidate_pool=pool, seed=seed)
    if net.size < m:
        raise ValueError(
            f"could only place {net.size} directions at separation {delta}; "
            "lower n or the separation"
        )
    if m <= 12:
        signs = np.array(
            [[1 if (i >> j) & 1 else -1 for j in range(m)] for i in range(2**m)],
            dtype=float,
        )
    else:
        rng = np.random.default_rng(seed + 1)
        seen = set()
        rows = []
        while len(rows) < max_signs:
            v = tuple(int(x) for x in rng.choice((-1, 1), size=m))
            if v not in seen:
                seen.add(v)
                rows.append(v)
        signs = np.array(rows, dtype=float)
    return PackingFamily(
        kind=kind, d=d, m=m, R=R, k=k, s=s,
        directions=net, signs=signs, normalization=normalization, delta=delta,
    )


@dataclass(frozen=True)
class SeparationRow:
    i: int
    j: int
    distance: float
    main_term: float
    cross_term: float


@dataclass(frozen=True)
class SeparationReport:
    """Measured pairwise separations with the main/cross split at witness points.

    At the witness point x_j = omega_j the difference f_sigma - f_sigma'
    splits into the diagonal (main) term (sigma_j - sigma'_j) * atom_j(x_j)
    and the off-diagonal cross term; ``identity_violation`` is the largest
    observed |main + cross - total|.  ``main_term_reference`` is the
    theoretical diagonal magnitude for a single differing sign.
    """

    min_distance: float
    pairs_evaluated: int
    rows: tuple[SeparationRow, ...]
    identity_violation: float
    main_term_reference: float
    norm: str


def pairwise_separation(family: PackingFamily, norm: str = "witness",
                        pair_budget: int = 64, seed: int = 0,
                        spec: QuadratureSpec | None = None) -> SeparationReport:
    """Measure pairwise distances of a packing family.

    ``witness`` mode evaluates at the family's own directions and reports
    the exact main + cross decomposition per pair; ``l2`` mode integrates
    |f_sigma - f_sigma'|^2 over the unit cube by quadrature.
    """
    if pair_budget < 1:
        raise ValueError("pair budget must be >= 1")
    if norm not in ("witness", "l2"):
        raise ValueError(f"unknown separation norm {norm!r}")
    n_signs = len(family.signs)
    all_pairs = [(i, j) for i in range(n_signs) for j in range(i + 1, n_signs)]
    if len(all_pairs) > pair_budget:
        rng = np.random.default_rng(seed)
        chosen = rng.choice(len(all_pairs), size=pair_budget, replace=False)
        pairs = [all_pairs[int(c)] for c in sorted(chosen)]
    else:
        pairs = all_pairs

    directions = family.directions.points[: family.m]
    if family.kind == RELU_KIND:
        atom_at_witness = sigma_k(family.R * (directions @ directions.T), family.k)
        diag_reference = 2.0 * family.normalization * sigma_k(family.R, family.k)
    else:
        atom_at_witness = np.exp(
            2j * np.pi * family.R * (directions @ directions.T)
        )
        diag_reference = 2.0 * family.normalization

    rows = []
    worst_identity = 0.0
    min_distance = math.inf
    for i, j in pairs:
        diff = family.signs[i] - family.signs[j]
        if norm == "witness":
            totals = family.normalization * (atom_at_witness @ diff)
            distance = float(np.max(np.abs(totals)))
            w = int(np.argmax(np.abs(totals)))
            main = family.normalization * diff[w] * atom_at_witness[w, w]
            cross = family.normalization * (
                atom_at_witness[w] @ diff - diff[w] * atom_at_witness[w, w]
            )
            violation = abs(main + cross - totals[w])
            worst_identity = max(worst_identity, float(violation))
            rows.append(SeparationRow(i, j, distance, float(abs(main)),
                                      float(abs(cross))))
        else:
            box = [(0.0, 1.0)] * family.d
            res = spec.resolution if spec is not None else 48
            pts, wq = tensor_nodes(box, res)
            vals = family.evaluate(i, pts) - family.evaluate(j, pts)
            distance = math.sqrt(float(np.dot(wq, np.abs(vals) ** 2)))
            rows.append(SeparationRow(i, j, distance, math.nan, math.nan))
        min_distance = min(min_distance, distance)
    return SeparationReport(
        min_distance=min_distance,
        pairs_evaluated=len(pairs),
        rows=tuple(rows),
        identity_violation=worst_identity,
        main_term_reference=float(diag_reference),
        norm=norm,
    )


# ----------------------------------------------------------------------
# tail mass of the arctan-dictionary measure
# ----------------------------------------------------------------------

def fano_lower_bound(min_separation: float, kl_bound: float,
                     n_hypotheses: int) -> float:
    """Multiple-hypothesis lower bound: separation * (1 - (KL + log 2) / log M).

    Pure formula evaluation with user-supplied constants; the separation is
    the smallest pairwise distance of the hypothesis family, ``kl_bound`` an
    upper bound on the divergences against the reference, and M the number
    of hypotheses (M >= 3 so the log factor is meaningful).  Clamped at zero
    when the divergence term swamps the hypothesis count.
    """
    if min_separation < 0:
        raise ValueError("separation must be nonnegative")
    if kl_bound < 0:
        raise ValueError("divergence bound must be nonnegative")
    if n_hypotheses < 3:
        raise ValueError("need at least 3 hypotheses")
    factor = 1.0 - (kl_bound + math.log(2.0)) / math.log(n_hypotheses)
    return min_separation * max(0.0, factor)


@dataclass(frozen=True)
class TailMassReport:
    m: int
    A: float
    Z: float
    I1: float
    I2: float
    lambda_tail: float
    tail_bound: float
    truncation_bound: float
    refinement_rel_diff: float


def plateau_weight(b, omega):
    """Bias weight (1 + max(0, |b| - 2|omega|))^-2; equals 1 on |b| <= 2|omega|."""
    b = np.asarray(b, dtype=float)
    omega = np.asarray(omega, dtype=float)
    return (1.0 + np.maximum(0.0, np.abs(b) - 2.0 * np.abs(omega))) ** -2


def tail_density(omega, b, m: int):
    """Unnormalized joint density (1 + |omega|)^m h(b, omega) sqrt(pi) e^{-omega^2/4}."""
    omega = np.asarray(omega, dtype=float)
    return (
        (1.0 + np.abs(omega)) ** m
        * plateau_weight(b, omega)
        * math.sqrt(math.pi)
        * np.exp(-(omega**2) / 4.0)
    )


def _omega_density(omega: np.ndarray, m: int) -> np.ndarray:
    return (1.0 + np.abs(omega)) ** m * math.sqrt(math.pi) * np.exp(-(omega**2) / 4.0)


def _tail_integrand_mass(lo: float, hi: float, m: int, resolution: int) -> float:
    """Integral of (1 + omega)^m (4 omega + 2) sqrt(pi) e^{-omega^2/4} on [lo, hi]."""
    nodes, weights = axis_rule(lo, hi, resolution)
    vals = _omega_density(nodes, m) * (4.0 * np.abs(nodes) + 2.0)
    return float(np.dot(weights, vals))


def _z_split(m: int, resolution: int, W: float) -> tuple[float, float]:
    """Normalization split: plateau region (h = 1) and decaying-b region.

    The inner b-integral is handled by geometry: the plateau |b| <= 2|omega|
    has length 4|omega|; the decaying region maps to a unit integral of
    (1 + u)^-2 under u = v / (1 - v), evaluated by the same quadrature rule.
    """
    nodes, weights = axis_rule(0.0, W, resolution)
    dens = _omega_density(nodes, m)
    i1 = 2.0 * float(np.dot(weights, dens * 4.0 * nodes))
    v_nodes, v_weights = axis_rule(0.0, 1.0, resolution)
    u = v_nodes / (1.0 - v_nodes)
    decaying = float(np.dot(v_weights, (1.0 + u) ** -2 / (1.0 - v_nodes) ** 2))
    i2 = 2.0 * 2.0 * float(np.dot(weights, dens)) * decaying
    return i1, i2


def _omega_tail_truncation_bound(W: float, m: int) -> float:
    """Analytic bound for the discarded |omega| > W mass of the normalization."""
    s0 = W**2 / 4.0
    return 6.0 * 2.0**m * 2.0 ** (m + 1) * 2.0 * s0 ** (m / 2.0) * math.exp(-s0)


def example2_tail_mass(m_smooth: int, A: float,
                       spec: QuadratureSpec | None = None,
                       W: float = 14.0) -> TailMassReport:
    """Tail mass of the arctan-dictionary probability measure.

    Computes the normalization Z as a plateau/decay split, the measure of
    {|omega| > A}, and the closed-form reference lower value
    4 sqrt(pi) e^{-A^2/4} / (Z A).  The omega axis is truncated at W with a
    certified analytic remainder; results are recomputed at doubled
    resolution and more than 1% disagreement raises ConvergenceError.
    """
    if m_smooth < 0 or int(m_smooth) != m_smooth:
        raise ValueError("smoothness order must be a nonnegative integer")
    if A < 1.0:
        raise ValueError(f"cutoff must satisfy A >= 1, got {A}")
    if A >= W:
        raise ValueError(f"cutoff {A} must stay below the truncation {W}")
    resolution = spec.resolution if spec is not None else 128
    m = int(m_smooth)

    def compute(res: int) -> tuple[float, float, float]:
        i1, i2 = _z_split(m, res, W)
        tail = 2.0 * _tail_integrand_mass(A, W, m, res)
        return i1, i2, tail

    i1, i2, tail = compute(resolution)
    i1f, i2f, tailf = compute(2 * resolution)
    z, zf = i1 + i2, i1f + i2f
    rel = max(
        abs(z - zf) / abs(zf),
        abs(tail - tailf) / abs(tailf),
    )
    if rel > 0.01:
        raise ConvergenceError(
            f"quadrature refinements disagree by {rel:.2%} (> 1%)"
        )
    truncation = _omega_tail_truncation_bound(W, m)
    lam = tailf / zf
    bound = 4.0 * math.sqrt(math.pi) * math.exp(-(A**2) / 4.0) / (zf * A)
    return TailMassReport(
        m=m, A=float(A), Z=zf, I1=i1f, I2=i2f,
        lambda_tail=lam, tail_bound=bound,
        truncation_bound=truncation, refinement_rel_diff=rel,
    )
