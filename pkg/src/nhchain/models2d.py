"""Stacked-chain lattices: assembly, Bloch reductions, and closed forms.

A lattice of N2 stacked chains of length N1 is an N1 N2 x N1 N2 block matrix
with diagonal blocks A, super/sub blocks B and C, and corner blocks set by
the stacking boundary mode:

* BC1  -- fully periodic in the stacking direction (corners C and B);
* BC2  -- the similarity-transformable pair: corners delta2^{-1} C and
  delta2 B, which reduce to Bloch blocks carrying omega_j delta2^{1/N2};
* OPEN -- no corner blocks (numeric route only).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .alphasolver import AlphaSet
from .core import ChainStencil, Spectrum, build_chain_matrix, dense_spectrum
from .models1d import HNParams, SSHParams, hn_spectrum, ssh_matrix, ssh_spectrum

__all__ = [
    "Stacked2DSpec",
    "EnvelopeCurves",
    "build_stacked_matrix",
    "bc_reduce",
    "stacked_hn_spectrum",
    "stacked_hn_balance",
    "envelope_curves",
    "triangular_spec",
    "triangular_spectrum",
    "kagome_matrix",
    "stacked_ssh_spectrum",
    "stacked_ssh_balance",
    "separable_square_matrix",
    "separable_square_spectrum",
    "representative_state",
    "profile_along_chain",
]

HN_KEYS = ("t_d", "t_l", "t_r", "u_d", "v_dl", "v_dr", "u_u", "v_ul", "v_ur")
SSH_KEYS = tuple(
    f"{base}{i}"
    for base in ("td", "tl", "tr", "ud", "vdl", "vdr", "uu", "vul", "vur")
    for i in (1, 2)
)


@dataclass(frozen=True)
class Stacked2DSpec:
    """Stacked-lattice description: family, parameters, sizes and boundaries.

    family is 'hn', 'ssh' or 'triangular'; params holds the family's hopping
    names (HN_KEYS, SSH_KEYS, or t_l/t_r).  mode is 'bc1', 'bc2' or 'open';
    delta2 is only meaningful for bc2 (bc2 requires delta2 != 0).
    """

    family: str
    params: dict
    n1: int
    n2: int
    delta1: complex = 0.0
    mode: str = "bc1"
    delta2: complex = 1.0

    def __post_init__(self):
        if self.family not in ("hn", "ssh", "triangular"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.mode not in ("bc1", "bc2", "open"):
            raise ValueError(f"unknown boundary mode {self.mode!r}")
        if self.mode == "bc2" and complex(self.delta2) == 0:
            raise ValueError("bc2 requires delta2 != 0")
        if self.family == "ssh" and self.n1 % 2:
            raise ValueError("ssh stacks require even n1")
        object.__setattr__(self, "params", {k: complex(v) for k, v in self.params.items()})
        object.__setattr__(self, "delta2", complex(self.delta2))

    @property
    def corner_coefficients(self) -> tuple[complex, complex]:
        """(upper-right multiplying C, lower-left multiplying B)."""
        if self.mode == "bc1":
            return 1.0 + 0j, 1.0 + 0j
        if self.mode == "open":
            return 0.0 + 0j, 0.0 + 0j
        return 1.0 / self.delta2, self.delta2

    def stack_factors(self) -> np.ndarray:
        """s_j multiplying B in the reduced blocks (1/s_j multiplies C)."""
        j = np.arange(self.n2)
        omega = np.exp(2j * np.pi * j / self.n2)
        if self.mode == "bc1":
            return omega
        if self.mode == "bc2":
            return omega * self.delta2 ** (1.0 / self.n2)
        raise ValueError("no Bloch reduction exists for open stacking; "
                         "use the dense oracle on build_stacked_matrix")


def _hn_like_block(n, diag, sup, sub, delta1) -> np.ndarray:
    hops = {}
    if sup != 0:
        hops[1] = sup
    if sub != 0:
        hops[-1] = sub
    return build_chain_matrix(ChainStencil(n, hops, (diag,), delta1))


def blocks(spec: Stacked2DSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three N1 x N1 blocks (A, B, C) at this delta1."""
    p = spec.params
    d1 = spec.delta1
    if spec.family == "hn":
        A = _hn_like_block(spec.n1, p["t_d"], p["t_l"], p["t_r"], d1)
        B = _hn_like_block(spec.n1, p["u_d"], p["v_dl"], p["v_dr"], d1)
        C = _hn_like_block(spec.n1, p["u_u"], p["v_ul"], p["v_ur"], d1)
    elif spec.family == "triangular":
        A = _hn_like_block(spec.n1, 0.0, p["t_l"], p["t_r"], d1)
        B = _hn_like_block(spec.n1, p["t_r"], 0.0, p["t_l"], d1)
        C = _hn_like_block(spec.n1, p["t_l"], p["t_r"], 0.0, d1)
    else:
        A = ssh_matrix(SSHParams(p["tl1"], p["tr1"], p["tl2"], p["tr2"], p["td1"], p["td2"]),
                       spec.n1, d1)
        B = ssh_matrix(SSHParams(p["vdl1"], p["vdr1"], p["vdl2"], p["vdr2"], p["ud1"], p["ud2"]),
                       spec.n1, d1)
        C = ssh_matrix(SSHParams(p["vul1"], p["vur1"], p["vul2"], p["vur2"], p["uu1"], p["uu2"]),
                       spec.n1, d1)
    return A, B, C


def build_stacked_matrix(spec: Stacked2DSpec) -> np.ndarray:
    """Assemble the full N1 N2 x N1 N2 operator."""
    A, B, C = blocks(spec)
    n1, n2 = spec.n1, spec.n2
    ctr, cbl = spec.corner_coefficients
    H = np.zeros((n1 * n2, n1 * n2), dtype=complex)
    for j in range(n2):
        sl = slice(j * n1, (j + 1) * n1)
        H[sl, sl] = A
        if j + 1 < n2:
            nxt = slice((j + 1) * n1, (j + 2) * n1)
            H[sl, nxt] = B
            H[nxt, sl] = C
    if n2 > 1:
        H[0:n1, (n2 - 1) * n1:] += ctr * C
        H[(n2 - 1) * n1:, 0:n1] += cbl * B
    else:
        H[0:n1, 0:n1] += ctr * C + cbl * B
    return H


def bc_reduce(spec: Stacked2DSpec) -> list[np.ndarray]:
    """The N2 Bloch blocks A + s_j B + s_j^{-1} C (BC1/BC2 only)."""
    A, B, C = blocks(spec)
    return [A + s * B + C / s for s in spec.stack_factors()]


def lift_block_vector(vec: np.ndarray, s_j: complex, n2: int) -> np.ndarray:
    """Lift an N1 block eigenvector to the stacked lattice (BC1: s_j = omega_j)."""
    return np.concatenate([vec * s_j**m for m in range(n2)])


def _stack_h_coeffs(spec: Stacked2DSpec, s: complex) -> dict:
    """Per-block effective chain parameters at stacking factor s."""
    p = spec.params
    if spec.family == "triangular":
        return {
            "h_d": s * p["t_r"] + p["t_l"] / s,
            "h_l": p["t_l"] + p["t_r"] / s,
            "h_r": p["t_r"] + s * p["t_l"],
        }
    if spec.family == "hn":
        return {
            "h_d": p["t_d"] + s * p["u_d"] + p["u_u"] / s,
            "h_l": p["t_l"] + s * p["v_dl"] + p["v_ul"] / s,
            "h_r": p["t_r"] + s * p["v_dr"] + p["v_ur"] / s,
        }
    return {
        "hd1": p["td1"] + s * p["ud1"] + p["uu1"] / s,
        "hd2": p["td2"] + s * p["ud2"] + p["uu2"] / s,
        "hl1": p["tl1"] + s * p["vdl1"] + p["vul1"] / s,
        "hl2": p["tl2"] + s * p["vdl2"] + p["vul2"] / s,
        "hr1": p["tr1"] + s * p["vdr1"] + p["vur1"] / s,
        "hr2": p["tr2"] + s * p["vdr2"] + p["vur2"] / s,
    }


def stacked_hn_spectrum(spec: Stacked2DSpec):
    """Analytic spectrum of an HN (or triangular) stack under BC1/BC2.

    Per stacking factor s_j the block is a nearest-neighbour chain with
    h_d, h_l, h_r; its eigenvalues are h_d + 2 sqrt(h_l) sqrt(h_r)
    cos(alpha_tilde).  Blocks with a vanishing h_l or h_r fall back to the
    dense oracle and are flagged in the returned alpha-set list as None.
    """
    if spec.family not in ("hn", "triangular"):
        raise ValueError(f"stacked_hn_spectrum expects an hn-like family, got {spec.family!r}")
    lams = []
    alpha_sets: list[Optional[AlphaSet]] = []
    scale = max(abs(v) for v in spec.params.values()) or 1.0
    A, B, C = blocks(spec)
    for s in spec.stack_factors():
        h = _stack_h_coeffs(spec, s)
        if min(abs(h["h_l"]), abs(h["h_r"])) < 1e-12 * scale:
            block = A + s * B + C / s
            lams.append(dense_spectrum(block).eigenvalues)
            alpha_sets.append(None)
            continue
        sp, aset = hn_spectrum(HNParams(h["h_l"], h["h_r"], h["h_d"]), spec.n1, spec.delta1)
        lams.append(sp.eigenvalues)
        alpha_sets.append(aset)
    prov = "analytic" if all(a is not None for a in alpha_sets) else "analytic+oracle"
    meta = {"model": f"stacked-{spec.family}", "n1": spec.n1, "n2": spec.n2, "mode": spec.mode}
    return Spectrum(np.concatenate(lams), prov, meta), alpha_sets


def stacked_ssh_spectrum(spec: Stacked2DSpec):
    """Analytic spectrum of an SSH stack under BC1/BC2 (even N1)."""
    if spec.family != "ssh":
        raise ValueError(f"stacked_ssh_spectrum expects family 'ssh', got {spec.family!r}")
    lams = []
    alpha_sets: list[Optional[AlphaSet]] = []
    scale = max(abs(v) for v in spec.params.values()) or 1.0
    A, B, C = blocks(spec)
    for s in spec.stack_factors():
        h = _stack_h_coeffs(spec, s)
        if min(abs(h["hl1"]), abs(h["hl2"]), abs(h["hr1"]), abs(h["hr2"])) < 1e-12 * scale:
            block = A + s * B + C / s
            lams.append(dense_spectrum(block).eigenvalues)
            alpha_sets.append(None)
            continue
        pj = SSHParams(h["hl1"], h["hr1"], h["hl2"], h["hr2"], h["hd1"], h["hd2"])
        sp, aset = ssh_spectrum(pj, spec.n1, spec.delta1)
        lams.append(sp.eigenvalues)
        alpha_sets.append(aset)
    prov = "analytic" if all(a is not None for a in alpha_sets) else "analytic+oracle"
    meta = {"model": "stacked-ssh", "n1": spec.n1, "n2": spec.n2, "mode": spec.mode}
    return Spectrum(np.concatenate(lams), prov, meta), alpha_sets


# ---------------------------------------------------------------------------
# balance-case classification (real parameters)
# ---------------------------------------------------------------------------

def _req_real(params: dict):
    if any(abs(v.imag) > 1e-12 for v in params.values()):
        raise ValueError("case classification assumes real parameters")


def _eq(a, b, tol=1e-10) -> bool:
    return abs(a - b) <= tol


def stacked_hn_balance(spec: Stacked2DSpec, tol: float = 1e-10) -> str:
    """Case tag of the stacking balance condition |h_l / h_r| = 1.

    Structural cases (real parameters): case1 h_r = conj(h_l), case2
    h_r = h_l, case3 h_l = omega h_r, case4 h_l = h_r / omega; otherwise a
    per-j modulus check decides 'general-r' vs 'unbalanced'.  Hoppings in
    the periodic direction (t_d, u_d, u_u) never enter.
    """
    if spec.family == "triangular":
        return "case4"
    p = spec.params
    _req_real(p)
    t_l, t_r = p["t_l"].real, p["t_r"].real
    v_dl, v_dr = p["v_dl"].real, p["v_dr"].real
    v_ul, v_ur = p["v_ul"].real, p["v_ur"].real
    if _eq(t_r, t_l, tol) and _eq(v_ur, v_dl, tol) and _eq(v_dr, v_ul, tol):
        return "case1"
    if _eq(t_r, t_l, tol) and _eq(v_ul, v_ur, tol) and _eq(v_dl, v_dr, tol):
        return "case2"
    if _eq(t_l, v_ur, tol) and _eq(v_dl, t_r, tol) and _eq(v_ul, 0, tol) and _eq(v_dr, 0, tol):
        return "case3"
    if _eq(t_l, v_dr, tol) and _eq(v_dl, 0, tol) and _eq(v_ur, 0, tol) and _eq(v_ul, t_r, tol):
        return "case4"
    for s in spec.stack_factors():
        h = _stack_h_coeffs(spec, s)
        if abs(h["h_r"]) == 0 or abs(abs(h["h_l"] / h["h_r"]) - 1.0) > tol:
            return "unbalanced"
    return "general-r"


_SSH_CASES_INDIVIDUAL = {
    # case -> list of (lhs key, rhs key) equalities among individual hoppings
    "case1": [("tr1", "tl1"), ("vdr1", "vdl1"), ("vur1", "vul1"),
              ("tr2", "tl2"), ("vdr2", "vdl2"), ("vur2", "vul2")],
    "case2": [("tr1", "tl1"), ("vdr1", "vul1"), ("vur1", "vdl1"),
              ("tr2", "tl2"), ("vdr2", "vul2"), ("vur2", "vdl2")],
    "case3": [("tr1", "tl2"), ("vdr1", "vdl2"), ("vur1", "vul2"),
              ("tr2", "tl1"), ("vdr2", "vdl1"), ("vur2", "vul1")],
    "case4": [("tr1", "tl2"), ("vdr1", "vul2"), ("vur1", "vdl2"),
              ("tr2", "tl1"), ("vdr2", "vul1"), ("vur2", "vdl1")],
}


def _ssh_product_case_residual(p: dict, shift: int) -> float:
    """Residual of h_r1 h_r2 = omega^shift h_l1 h_l2 as a Laurent identity.

    The products are quadratics in omega; the case holds when the right
    coefficient list, shifted by `shift`, matches the left one.
    """
    def coeffs(tA, vdA, vuA, tB, vdB, vuB):
        # (t + w vd + vu/w)(t' + w vd' + vu'/w) -> powers -2..2
        return {
            -2: vuA * vuB,
            -1: tA * vuB + vuA * tB,
            0: tA * tB + vdA * vuB + vuA * vdB,
            1: tA * vdB + vdA * tB,
            2: vdA * vdB,
        }

    right = coeffs(p["tr1"], p["vdr1"], p["vur1"], p["tr2"], p["vdr2"], p["vur2"])
    left = coeffs(p["tl1"], p["vdl1"], p["vul1"], p["tl2"], p["vdl2"], p["vul2"])
    res = 0.0
    for power in range(-4, 5):
        r = right.get(power, 0.0)
        l = left.get(power - shift, 0.0)
        res = max(res, abs(r - l))
    return res


def stacked_ssh_balance(spec: Stacked2DSpec, tol: float = 1e-10) -> str:
    """Case tag of |sqrt(h_r1 h_r2) / sqrt(h_l1 h_l2)| = 1 for SSH stacks.

    Cases 1-4 are equalities between individual hoppings; cases 5-7 relate
    products of adjacent hoppings (h_r1 h_r2 = omega^r h_l1 h_l2 for
    r = 0, j, 2j).  Falls back to the per-j modulus check ('general-r'),
    else 'unbalanced'.
    """
    p = {k: v.real for k, v in spec.params.items()}
    _req_real(spec.params)
    for case, eqs in _SSH_CASES_INDIVIDUAL.items():
        if all(_eq(p[a], p[b], tol) for a, b in eqs):
            return case
    for case, shift in (("case5", 0), ("case6", 1), ("case7", 2)):
        if _ssh_product_case_residual(p, shift) <= tol:
            return case
    for s in spec.stack_factors():
        h = _stack_h_coeffs(spec, s)
        denom = h["hl1"] * h["hl2"]
        if abs(denom) == 0 or abs(abs(h["hr1"] * h["hr2"] / denom) - 1.0) > tol:
            return "unbalanced"
    return "general-r"


# ---------------------------------------------------------------------------
# envelope curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeCurves:
    t_grid: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    z_plus: np.ndarray
    z_minus: np.ndarray
    loop: Optional[np.ndarray] = None
    case: str = ""


def envelope_curves(spec: Stacked2DSpec, t_grid=None, require_balanced: bool = True) -> EnvelopeCurves:
    """The boundary curves z1(t) +- z2(t) of a balanced HN stack.

    z1(t) = t_d + e^{it} u_d + e^{-it} u_u and z2(t) =
    2 sqrt(t_r + e^{it} v_dr + e^{-it} v_ur) sqrt(t_l + e^{it} v_dl +
    e^{-it} v_ul); the eigenvalues of a balanced stack lie on the straight
    segments [z_-(t), z_+(t)].  For cases 3 and 4 the two curves join into a
    single closed loop, returned in `loop`.
    """
    if spec.family == "triangular":
        hn_params = {
            "t_d": 0.0, "t_l": spec.params["t_l"], "t_r": spec.params["t_r"],
            "u_d": spec.params["t_r"], "v_dl": 0.0, "v_dr": spec.params["t_l"],
            "u_u": spec.params["t_l"], "v_ul": spec.params["t_r"], "v_ur": 0.0,
        }
        spec = Stacked2DSpec("hn", hn_params, spec.n1, spec.n2, spec.delta1,
                             spec.mode if spec.mode != "open" else "bc1", spec.delta2)
    case = stacked_hn_balance(spec)
    if require_balanced and case == "unbalanced":
        raise ValueError("envelope curves are defined for balanced stacks")
    if t_grid is None:
        t_grid = np.linspace(0.0, 2 * np.pi, 361)
    t_grid = np.asarray(t_grid, dtype=float)
    p = spec.params
    e = np.exp(1j * t_grid)
    z1 = p["t_d"] + e * p["u_d"] + p["u_u"] / e
    hr = p["t_r"] + e * p["v_dr"] + p["v_ur"] / e
    hl = p["t_l"] + e * p["v_dl"] + p["v_ul"] / e
    z2 = 2.0 * np.sqrt(hr) * np.sqrt(hl)
    loop = None
    if case in ("case3", "case4"):
        t_d, u_d, u_u = p["t_d"].real, p["u_d"].real, p["u_u"].real
        t_l, t_r = p["t_l"].real, p["t_r"].real
        if case == "case3":
            short = 2 * (t_l * np.exp(-1j * t_grid) + t_r * np.exp(1j * t_grid))
        else:
            short = 2 * (t_l * np.exp(1j * t_grid) + t_r * np.exp(-1j * t_grid))
        loop = t_d + (u_u + u_d) * np.cos(2 * t_grid) + 1j * (u_d - u_u) * np.sin(2 * t_grid) + short
    return EnvelopeCurves(t_grid, z1, z2, z1 + z2, z1 - z2, loop, case)


def segment_distance(points, z_minus, z_plus) -> np.ndarray:
    """Distance of complex points to the segment [z_minus, z_plus]."""
    pts = np.asarray(points, dtype=complex).ravel()
    a, b = complex(z_minus), complex(z_plus)
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0:
        return np.abs(pts - a)
    t = ((pts - a) * np.conj(d)).real / L2
    t = np.clip(t, 0.0, 1.0)
    return np.abs(pts - (a + t * d))


# ---------------------------------------------------------------------------
# triangular lattice
# ---------------------------------------------------------------------------

def triangular_spec(t_l, t_r, n1, n2, delta1, mode="bc1", delta2=1.0) -> Stacked2DSpec:
    return Stacked2DSpec("triangular", {"t_l": t_l, "t_r": t_r}, n1, n2, delta1, mode, delta2)


def triangular_spectrum(spec: Stacked2DSpec):
    """Triangular-lattice spectrum: analytic for BC1/BC2, oracle for OPEN."""
    if spec.family != "triangular":
        raise ValueError("triangular_spectrum expects a triangular spec")
    if spec.mode == "open":
        sp = dense_spectrum(build_stacked_matrix(spec),
                            parameters={"model": "triangular", "mode": "open"})
        return sp, [None] * spec.n2
    return stacked_hn_spectrum(spec)


def representative_state(matrix):
    """Eigenpair whose |lambda| is closest to the spectral median."""
    spec, vr, vl, reliable = dense_spectrum(matrix, want_vectors=True)
    mags = np.abs(spec.eigenvalues)
    k = int(np.argmin(np.abs(mags - np.median(mags))))
    return spec.eigenvalues[k], vr[:, k], vl[:, k]


def profile_along_chain(vec, n1: int, n2: int, sublattice: int = 1) -> np.ndarray:
    """|psi|^2 aggregated over the stacking direction: a length-n1 profile."""
    v = np.asarray(vec).ravel()
    dens = np.abs(v) ** 2
    if len(v) == n1 * n2 * sublattice:
        dens = dens.reshape(n2, n1, sublattice).sum(axis=(0, 2))
    else:
        raise ValueError(f"vector length {len(v)} != n1*n2*sublattice")
    return dens


# ---------------------------------------------------------------------------
# Kagome lattice (numeric only)
# ---------------------------------------------------------------------------

_KAGOME_UP = [
    # (src sublattice, (di, dj), dst sublattice); amplitude tag 'r' is the
    # counterclockwise direction around each triangle
    (0, (0, 0), 1, "r"), (1, (0, 0), 2, "r"), (2, (0, 0), 0, "r"),
    (1, (0, 0), 0, "l"), (2, (0, 0), 1, "l"), (0, (0, 0), 2, "l"),
]
_KAGOME_DOWN = [
    (1, (1, -1), 2, "r"), (2, (0, 1), 0, "r"), (0, (-1, 0), 1, "r"),
    (2, (-1, 1), 1, "l"), (0, (0, -1), 2, "l"), (1, (1, 0), 0, "l"),
]


def kagome_matrix(t_l, t_r, n1: int, n2: int, delta1, delta2, delta2p,
                  inter_scale: float = 1.0) -> np.ndarray:
    """Kagome lattice operator on an n1 x n2 grid of three-site cells.

    Counterclockwise hops carry t_r and clockwise hops t_l on both the
    in-cell triangles and the inter-cell triangles (the latter scaled by
    `inter_scale`; zero decouples the lattice into 3 x 3 cell blocks).
    Bonds wrapping the first direction pick up delta1; bonds wrapping the
    stacking direction pick up delta2 (+1 wraps) or delta2p (-1 wraps).
    """
    if n1 < 2 or n2 < 2:
        raise ValueError("need at least a 2 x 2 grid of cells")
    amps = {"l": complex(t_l), "r": complex(t_r)}
    d1, d2, d2p = complex(delta1), complex(delta2), complex(delta2p)
    dim = 3 * n1 * n2
    H = np.zeros((dim, dim), dtype=complex)

    def idx(i, j, s):
        return (j * n1 + i) * 3 + s

    def place(bonds, scale):
        for s_src, (di, dj), s_dst, tag in bonds:
            amp = amps[tag] * scale
            if amp == 0:
                continue
            for j in range(n2):
                for i in range(n1):
                    ii, jj = i + di, j + dj
                    factor = 1.0 + 0j
                    if ii < 0 or ii >= n1:
                        factor *= d1
                        ii %= n1
                    if jj >= n2:
                        factor *= d2
                        jj -= n2
                    elif jj < 0:
                        factor *= d2p
                        jj += n2
                    if factor != 0:
                        H[idx(ii, jj, s_dst), idx(i, j, s_src)] += amp * factor

    place(_KAGOME_UP, 1.0)
    place(_KAGOME_DOWN, complex(inter_scale))
    return H


# ---------------------------------------------------------------------------
# separable square lattice
# ---------------------------------------------------------------------------

def separable_square_matrix(chain_a: np.ndarray, chain_b: np.ndarray) -> np.ndarray:
    """Kronecker assembly of two independent chain directions."""
    A = np.asarray(chain_a, dtype=complex)
    Kb = np.asarray(chain_b, dtype=complex)
    return np.kron(np.eye(len(Kb)), A) + np.kron(Kb, np.eye(len(A)))


def separable_square_spectrum(spectrum_a, spectrum_b) -> Spectrum:
    """Minkowski sum of two solved 1D spectra: all pairwise lambda_a + lambda_b."""
    va = np.asarray(getattr(spectrum_a, "eigenvalues", spectrum_a), dtype=complex).ravel()
    vb = np.asarray(getattr(spectrum_b, "eigenvalues", spectrum_b), dtype=complex).ravel()
    return Spectrum((va[:, None] + vb[None, :]).ravel(), "analytic", {"model": "separable-square"})
