"""Continuous functional calculus for rectangular matrix elements.

A single matrix ``x`` placed in a block between objects ``A`` and
``B`` generates a small commutative full category (for ``A == B`` the
element must be normal).  Its class decomposition indexes the distinct
nonzero singular values of ``x`` (eigenvalues in the square
same-object case), and applying a scalar function means rescaling each
class component:

    x = sum_i p_i * u_i   ->   f[x] = sum_i f(p_i) * u_i,

with ``u_i`` the unit partial isometries cut out of ``x`` itself by
the class projections.  ``funcalc`` computes this through the
generated category's joint eigenstructure; ``svd_oracle`` computes the
same thing directly from a singular value decomposition (or a normal
eigendecomposition) and exists to cross-check it.

The zero classes — where every generated element vanishes — belong to
the unitization, carry no part of ``x``, and are discarded, so ``f``
is only ever evaluated on the nonzero spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import resolve_tol
from .cstarcat import generated_by
from .errors import FullnessMismatch, SpectrumMismatch
from .numkit import hs_norm, joint_diagonalize, normal_eig, op_norm, svd

__all__ = [
    "SpectralFunction",
    "spectrum_of_element",
    "funcalc",
    "svd_oracle",
]

_CLUSTER = 1e-8


@dataclass(frozen=True)
class SpectralFunction:
    """A scalar function given as a value table or a polynomial.

    Exactly one of ``table`` (spectrum point -> value) and ``coeffs``
    (polynomial in the spectral variable, constant term first) must be
    provided.  Table keys are matched against computed spectra up to
    the clustering tolerance; keys must cover the spectrum exactly,
    otherwise ``SpectrumMismatch`` is raised at application time.
    """

    table: tuple = ()  # ((point, value), ...)
    coeffs: tuple = ()  # polynomial coefficients, low order first

    def __post_init__(self):
        if self.table and self.coeffs:
            raise ValueError("provide a table or coefficients, not both")
        # neither is fine: the empty table, defined only on an empty
        # spectrum (the zero element)

    @staticmethod
    def from_table(mapping) -> "SpectralFunction":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return SpectralFunction(
            table=tuple((complex(k), complex(v)) for k, v in items)
        )

    @staticmethod
    def from_coeffs(coeffs) -> "SpectralFunction":
        return SpectralFunction(coeffs=tuple(complex(c) for c in coeffs))

    def __call__(self, s: complex, scale: float = 1.0) -> complex:
        if self.coeffs:
            return complex(np.polyval(self.coeffs[::-1], s))
        tol = _CLUSTER * (1.0 + scale)
        hits = [v for k, v in self.table if abs(k - s) <= tol]
        if not hits:
            raise SpectrumMismatch(
                f"table has no value within {tol:.1e} of spectral point {s}"
            )
        return hits[0]

    def max_abs(self) -> float:
        if self.coeffs:
            return float(sum(abs(c) for c in self.coeffs))
        return float(max((abs(v) for _, v in self.table), default=0.0))


def _call(f, s, scale):
    if isinstance(f, SpectralFunction):
        return f(s, scale)
    return complex(f(s))


def _check_table_covers(f, points, scale) -> None:
    """Every table key must sit on a computed spectrum point."""
    if not isinstance(f, SpectralFunction) or not f.table:
        return
    tol = _CLUSTER * (1.0 + scale)
    for key, _ in f.table:
        if not any(abs(key - p) <= tol for p in points):
            raise SpectrumMismatch(
                f"table key {key} is not a spectrum point"
            )


def spectrum_of_element(x, a_id="A", b_id="B", tol=None) -> np.ndarray:
    """Distinct nonzero spectral points of one matrix element.

    Distinct nonzero singular values when the objects differ; distinct
    nonzero eigenvalues of a normal element on a single object.
    Values within the clustering tolerance are merged; the result is
    sorted by (real, imaginary).
    """
    x = np.asarray(x, dtype=complex)
    tol = resolve_tol(tol)
    scale = op_norm(x)
    if scale == 0.0:
        return np.array([], dtype=complex)
    if a_id == b_id:
        if x.shape[0] != x.shape[1]:
            raise ValueError("same-object element must be square")
        w, _ = normal_eig(x, tol)  # raises NotNormal when it must
        vals = [complex(z) for z in w if abs(z) > tol * 10 * (1 + scale)]
    else:
        vals = [
            complex(v)
            for v in svd(x)[1]
            if v > tol * 10 * (1 + scale)
        ]
    vals.sort(key=lambda z: (z.real, z.imag))
    out: list = []
    for z in vals:
        if out and abs(z - out[-1]) <= _CLUSTER * (1 + scale):
            continue
        out.append(z)
    return np.array(out, dtype=complex)


def _surviving_classes(eig, generators, thresh):
    """Blocks on which some generated diagonal element acts nonzero."""
    keep = []
    for b in range(eig.n_blocks):
        v = eig.block_isometry(b)
        r = v.shape[1]
        acted = any(
            hs_norm(v.conj().T @ g @ v) > thresh * np.sqrt(r)
            for g in generators
        )
        if acted:
            keep.append(b)
    return keep


def funcalc(x, a_id="A", b_id="B", f=None, tol=None, seed: int = 0):
    """Apply a scalar function to a matrix element through the
    category it generates.

    The element's block is decomposed along the generated category's
    joint eigenspace classes; classes belonging to the unitization
    (all generators vanish there) are dropped, and ``f`` — a
    :class:`SpectralFunction` or plain callable — rescales the
    surviving components.  The identity function returns ``x`` itself
    to machine precision.
    """
    x = np.asarray(x, dtype=complex)
    tol = resolve_tol(tol)
    scale = op_norm(x)
    if scale == 0.0:
        if isinstance(f, SpectralFunction) and f.table:
            raise SpectrumMismatch(
                "zero element has empty spectrum; only the empty table applies"
            )
        return np.zeros_like(x)

    cat = generated_by(x, a_id, b_id, tol)  # NotNormal guard lives here
    thresh = tol * 10 * (1 + scale)

    if a_id == b_id:
        fam = list(cat.block(a_id, a_id))
        eig = joint_diagonalize(
            fam + [np.eye(x.shape[0], dtype=complex)], tol, seed=seed
        )
        keep = _surviving_classes(eig, fam, tol * (1 + scale))
        points, parts = [], []
        for b in keep:
            v = eig.block_isometry(b)
            r = v.shape[1]
            lam = complex(np.trace(v.conj().T @ x @ v) / r)
            if abs(lam) <= thresh:
                continue
            points.append(lam)
            parts.append((lam, v @ (v.conj().T @ x @ v) @ v.conj().T / lam))
        _check_table_covers(f, points, scale)
        out = np.zeros_like(x)
        for lam, frame in parts:
            out += _call(f, lam, scale) * frame
        return out

    fam_a = list(cat.block(a_id, a_id))
    fam_b = list(cat.block(b_id, b_id))
    eig_a = joint_diagonalize(
        fam_a + [np.eye(x.shape[0], dtype=complex)], tol, seed=seed
    )
    eig_b = joint_diagonalize(
        fam_b + [np.eye(x.shape[1], dtype=complex)], tol, seed=seed
    )
    keep_a = _surviving_classes(eig_a, fam_a, tol * (1 + scale))
    keep_b = _surviving_classes(eig_b, fam_b, tol * (1 + scale))
    if len(keep_a) != len(keep_b):
        raise FullnessMismatch(
            "row and column sides disagree on the nonzero classes"
        )

    points, parts = [], []
    used = set()
    for i in keep_a:
        vi = eig_a.block_isometry(i)
        hits = [
            j
            for j in keep_b
            if hs_norm(vi.conj().T @ x @ eig_b.block_isometry(j)) > thresh
        ]
        if len(hits) != 1 or hits[0] in used:
            raise FullnessMismatch(
                "class matching between the two sides is not a bijection"
            )
        j = hits[0]
        used.add(j)
        wj = eig_b.block_isometry(j)
        comp = vi.conj().T @ x @ wj
        s = op_norm(comp)
        points.append(complex(s))
        parts.append((complex(s), vi @ comp @ wj.conj().T / s))
    _check_table_covers(f, points, scale)
    out = np.zeros_like(x)
    for s, frame in parts:
        out += _call(f, s, scale) * frame
    return out


def svd_oracle(x, a_id="A", b_id="B", f=None, tol=None):
    """Independent reference for :func:`funcalc` via a plain SVD (or a
    normal eigendecomposition on a single object)."""
    x = np.asarray(x, dtype=complex)
    tol = resolve_tol(tol)
    scale = op_norm(x)
    if scale == 0.0:
        return np.zeros_like(x)
    if a_id == b_id:
        w, u = normal_eig(x, tol)
        out = np.zeros_like(x)
        for i, s in enumerate(w):
            if abs(s) <= tol * 10 * (1 + scale):
                continue
            v = u[:, i: i + 1]
            out += _call(f, complex(s), scale) * (v @ v.conj().T)
        return out
    u, s, vh = svd(x)
    out = np.zeros_like(x)
    for i, si in enumerate(s):
        if si <= tol * 10 * (1 + scale):
            continue
        out += _call(f, complex(si), scale) * np.outer(u[:, i], vh[i, :])
    return out
