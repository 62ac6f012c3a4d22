"""Boundary-deformed chain matrices, the dense eigensolver oracle, and
site-resolved state diagnostics.

Conventions used throughout the package:

* matrices act on column vectors, ``H[m, n]`` is the amplitude for hopping
  from site ``n`` to site ``m`` (0-based internally, sites are 1..N in
  formulas);
* a positive offset ``o = n - m`` is a hop "to the left" amplitude placed on
  the o-th superdiagonal;
* corner deformations wrap the band: wrapped negative offsets land in the
  upper-right corner (scaled by ``delta_r``), wrapped positive offsets in the
  lower-left corner (scaled by ``delta_l``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

__all__ = [
    "ChainStencil",
    "Spectrum",
    "StateProfiles",
    "LocalizationReport",
    "build_chain_matrix",
    "dense_spectrum",
    "match_spectra",
    "spectral_mismatch",
    "expectation_profiles",
    "localization_report",
]

EIGVEC_CONDITION_LIMIT = 1e8


def _as_corner_pair(corner_deform) -> tuple[complex, complex]:
    """Normalize a scalar delta or a (delta_l, delta_r) pair."""
    if np.isscalar(corner_deform):
        return complex(corner_deform), complex(corner_deform)
    dl, dr = corner_deform
    return complex(dl), complex(dr)


@dataclass(frozen=True)
class ChainStencil:
    """One-band chain: hopping amplitudes by signed offset plus corner scaling.

    Parameters
    ----------
    n_sites : int
        Chain length N.
    hoppings : dict[int, complex]
        Off-diagonal amplitudes keyed by offset ``n - m`` (nonzero offsets
        only; the diagonal comes from `onsite_pattern`).
    onsite_pattern : sequence of complex
        Periodically repeated diagonal entries (length = unit-cell size).
    corner_deform : complex or (complex, complex)
        Corner scaling delta, or an asymmetric pair ``(delta_l, delta_r)``.
    end_onsite : (complex, complex), optional
        Extra on-site energies added at the first and last site.
    """

    n_sites: int
    hoppings: dict = field(default_factory=dict)
    onsite_pattern: tuple = (0.0,)
    corner_deform: object = 0.0
    end_onsite: Optional[tuple] = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be positive, got {self.n_sites}")
        hop = {int(o): complex(t) for o, t in self.hoppings.items() if t != 0}
        if any(o == 0 for o in hop):
            raise ValueError("offset 0 belongs in onsite_pattern, not hoppings")
        object.__setattr__(self, "hoppings", hop)
        object.__setattr__(
            self, "onsite_pattern", tuple(complex(v) for v in self.onsite_pattern)
        )
        p, q = self.range_lr
        # band and corner blocks must not overlap
        if p + q >= self.n_sites:
            raise ValueError(
                f"hopping range p+q = {p + q} too large for N = {self.n_sites}: "
                "corner blocks would overlap the band"
            )

    @property
    def range_lr(self) -> tuple[int, int]:
        """(p, q): largest negative and positive offsets in use."""
        p = max((-o for o in self.hoppings if o < 0), default=0)
        q = max((o for o in self.hoppings if o > 0), default=0)
        return p, q

    @property
    def corner_pair(self) -> tuple[complex, complex]:
        return _as_corner_pair(self.corner_deform)


def build_chain_matrix(stencil: ChainStencil) -> np.ndarray:
    """Assemble the dense N x N matrix for a ChainStencil.

    The banded part repeats `onsite_pattern` on the diagonal and places each
    hopping on its offset diagonal.  Corner entries are the wrapped hoppings
    scaled by delta_r (upper right) and delta_l (lower left), so delta = 1
    with a uniform diagonal reproduces a circulant matrix and delta = 0 a
    banded Toeplitz matrix.
    """
    N = stencil.n_sites
    dl, dr = stencil.corner_pair
    H = np.zeros((N, N), dtype=complex)
    cell = len(stencil.onsite_pattern)
    for m in range(N):
        H[m, m] = stencil.onsite_pattern[m % cell]
    if stencil.end_onsite is not None:
        H[0, 0] += complex(stencil.end_onsite[0])
        H[N - 1, N - 1] += complex(stencil.end_onsite[1])
    for o, t in stencil.hoppings.items():
        for m in range(N):
            n = m + o
            if 0 <= n < N:
                H[m, n] += t
            elif n < 0:
                H[m, n + N] += dr * t
            else:
                H[m, n - N] += dl * t
    return H


@dataclass(frozen=True)
class Spectrum:
    """A multiset of complex eigenvalues with provenance."""

    eigenvalues: np.ndarray
    provenance: str = "oracle"
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.eigenvalues, dtype=complex)).ravel()
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self):
        return len(self.eigenvalues)

    def sorted(self) -> np.ndarray:
        return np.sort_complex(self.eigenvalues)


def match_spectra(a, b) -> float:
    """Maximum pair distance under minimal-cost bipartite matching.

    Multisets in the complex plane have no canonical order, so eigenvalue
    lists are compared by solving the assignment problem on |a_i - b_j|.
    """
    va = np.asarray(getattr(a, "eigenvalues", a), dtype=complex).ravel()
    vb = np.asarray(getattr(b, "eigenvalues", b), dtype=complex).ravel()
    if va.shape != vb.shape:
        raise ValueError(f"cardinality mismatch: {len(va)} vs {len(vb)}")
    cost = np.abs(va[:, None] - vb[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def spectral_mismatch(a, b) -> float:
    """match_spectra normalized by 1 + max|lambda|."""
    va = np.asarray(getattr(a, "eigenvalues", a), dtype=complex).ravel()
    vb = np.asarray(getattr(b, "eigenvalues", b), dtype=complex).ravel()
    scale = 1.0 + max(np.abs(va).max(initial=0.0), np.abs(vb).max(initial=0.0))
    return match_spectra(va, vb) / scale


class EigensolverError(RuntimeError):
    pass


def dense_spectrum(matrix, want_vectors: bool = False, parameters=None):
    """Dense oracle: all eigenvalues of a general complex matrix.

    With ``want_vectors=True`` also returns right eigenvectors of ``M`` and
    left eigenvectors obtained from ``M.T``, paired to the right eigenvalues
    by bipartite value matching.  Left vectors are conjugated so that
    ``vl.conj() @ M = lambda * vl.conj()`` and ``vl.conj() @ vr`` is the
    biorthogonal overlap.

    Returns
    -------
    Spectrum                          if not want_vectors
    (Spectrum, vr, vl, reliable)      otherwise; vr/vl have eigenvectors in
                                      columns, `reliable` is False when the
                                      eigenvector condition number exceeds
                                      1e8 (exceptional-point proximity).
    """
    M = np.asarray(matrix, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains non-finite entries")
    try:
        if not want_vectors:
            vals = np.linalg.eigvals(M)
            return Spectrum(vals, "oracle", dict(parameters or {}))
        vals, vr = np.linalg.eig(M)
        vals_t, vt = np.linalg.eig(M.T)
    except np.linalg.LinAlgError as exc:
        fingerprint = f"shape={M.shape}, frob={np.linalg.norm(M):.6g}"
        raise EigensolverError(f"eigensolver failed ({fingerprint}): {exc}") from exc
    cost = np.abs(vals[:, None] - vals_t[None, :])
    rows, cols = linear_sum_assignment(cost)
    order = np.empty_like(cols)
    order[rows] = cols
    vl = np.conj(vt[:, order])
    cond = np.linalg.cond(vr)
    return (
        Spectrum(vals, "oracle", dict(parameters or {})),
        vr,
        vl,
        bool(cond < EIGVEC_CONDITION_LIMIT),
    )


@dataclass(frozen=True)
class StateProfiles:
    """Site-resolved |psi_r|^2, |psi_l|^2 and (psi_l)* psi_r for one state."""

    rr: np.ndarray
    ll: np.ndarray
    lr: Optional[np.ndarray]
    normalization: str
    overlap: complex

    @property
    def n_sites(self) -> int:
        return len(self.rr)


def expectation_profiles(psi_r, psi_l, normalize_lr: bool = True) -> StateProfiles:
    """Left, right and biorthogonal expectation values of the site projector.

    The biorthogonal profile is normalized so it sums to one; if the
    biorthogonal overlap (psi_l)^dagger psi_r (nearly) vanishes, the profile
    is omitted and flagged via ``normalization='degenerate'``.
    """
    pr = np.asarray(psi_r, dtype=complex).ravel()
    pl = np.asarray(psi_l, dtype=complex).ravel()
    if pr.shape != pl.shape:
        raise ValueError(f"vector length mismatch: {pr.shape} vs {pl.shape}")
    rr = np.abs(pr) ** 2
    ll = np.abs(pl) ** 2
    lr = np.conj(pl) * pr
    overlap = lr.sum()
    scale = np.linalg.norm(pl) * np.linalg.norm(pr)
    if scale == 0:
        raise ValueError("zero eigenvector supplied")
    if abs(overlap) < 1e-12 * scale:
        return StateProfiles(rr, ll, None, "degenerate", complex(overlap))
    if normalize_lr:
        return StateProfiles(rr, ll, lr / overlap, "biorthogonal", complex(overlap))
    return StateProfiles(rr, ll, lr, "raw", complex(overlap))


@dataclass(frozen=True)
class LocalizationReport:
    center_of_mass: float
    left_edge_fraction: float
    right_edge_fraction: float
    decay_rate: float
    fit_r2: float

    @property
    def heavier_edge_fraction(self) -> float:
        return max(self.left_edge_fraction, self.right_edge_fraction)


def localization_report(profile) -> LocalizationReport:
    """Localization diagnostics of a site-resolved density.

    Accepts a StateProfiles (uses the right density) or a plain array of
    weights.  The decay rate is |slope| of a least-squares fit of
    log(density) over the heavier half of the chain, excluding 2 boundary
    sites to avoid the oscillatory nodes of the open-chain eigenvectors.
    """
    w = profile.rr if isinstance(profile, StateProfiles) else np.asarray(profile, float)
    w = np.abs(np.asarray(w, dtype=float)).ravel()
    N = len(w)
    if N < 10:
        raise ValueError(f"need at least 10 sites, got {N}")
    total = w.sum()
    if total == 0:
        raise ValueError("all-zero profile")
    w = w / total
    sites = np.arange(1, N + 1, dtype=float)
    com = float((sites * w).sum())
    edge = max(1, int(np.ceil(0.1 * N)))
    left = float(w[:edge].sum())
    right = float(w[-edge:].sum())
    # fit over the heavier half, 2 boundary sites dropped
    half = N // 2
    if right >= left:
        seg = slice(N - half, N - 2)
    else:
        seg = slice(2, half)
    x = sites[seg]
    y = w[seg]
    pos = y > 0
    if pos.sum() < 3:
        return LocalizationReport(com, left, right, 0.0, 0.0)
    x, ly = x[pos], np.log(y[pos])
    A = np.column_stack([x, np.ones_like(x)])
    coef, res, _, _ = np.linalg.lstsq(A, ly, rcond=None)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    if ss_tot == 0:
        r2 = 1.0
    else:
        ss_res = float(res[0]) if len(res) else float(((A @ coef - ly) ** 2).sum())
        r2 = 1.0 - ss_res / ss_tot
    return LocalizationReport(com, left, right, float(abs(coef[0])), float(r2))


def hausdorff_points(a, b) -> float:
    """Symmetric Hausdorff distance between two point sets in the plane."""
    va = np.asarray(getattr(a, "eigenvalues", a), dtype=complex).ravel()
    vb = np.asarray(getattr(b, "eigenvalues", b), dtype=complex).ravel()
    if len(va) == 0 or len(vb) == 0:
        raise ValueError("empty spectrum")
    A = np.column_stack([va.real, va.imag])
    B = np.column_stack([vb.real, vb.imag])
    D = cdist(A, B)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))
