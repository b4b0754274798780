"""Matrix C*-categories.

A category here is concrete: finitely many objects, each carrying a
dimension, and for every ordered pair of objects a subspace of complex
``d_A x d_B`` matrices stored as a Hilbert-Schmidt orthonormal basis.
Composition is matrix multiplication (an element of ``blocks[(A, B)]``
maps the ``B`` space into the ``A`` space), the involution is the
conjugate transpose, and norms are operator norms.  ``close`` produces
such a category from generators; the remaining operations check the
axioms, decide commutativity and fullness, and build the standard
examples (linking categories of bijections-with-phases, groupoid
categories via the left regular representation, and the category
generated by a single rectangular matrix).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import resolve_tol
from .errors import (
    InvalidFunctor,
    InvalidGroupoid,
    NotNormal,
    SpectroidError,
)
from .numkit import (
    adjoint,
    hs_inner,
    hs_member,
    hs_norm,
    hs_orthonormalize,
    op_norm,
)
from .reporting import Report

__all__ = [
    "CategoryPresentation",
    "MatrixCategory",
    "StarFunctor",
    "Ideal",
    "close",
    "check_axioms",
    "is_commutative",
    "is_full",
    "identity_functor",
    "compose_functors",
    "functor_image",
    "functor_from_images",
    "validate_functor",
    "kernel",
    "validate_ideal",
    "first_isomorphism_check",
    "quotient_by_character",
    "generated_by",
    "linking_category",
    "linking_generator",
    "multi_linking",
    "multi_linking_generator",
    "FiniteGroupoid",
    "validate_groupoid",
    "groupoid_category",
    "GroupoidTraits",
    "groupoid_report",
]


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class CategoryPresentation:
    """Raw generators: ordered (id, dim) objects and per-pair matrices."""

    objects: tuple
    generators: dict

    def __post_init__(self):
        ids = [o for o, _ in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate object ids")


@dataclass
class MatrixCategory:
    """A closed block family: HS-orthonormal basis per ordered pair."""

    objects: tuple  # ordered (id, dim)
    blocks: dict  # (A, B) -> list of d_A x d_B arrays, possibly empty
    unital: bool

    @property
    def object_ids(self) -> tuple:
        return tuple(o for o, _ in self.objects)

    def dim(self, obj_id) -> int:
        for o, d in self.objects:
            if o == obj_id:
                return d
        raise KeyError(obj_id)

    def block(self, a, b) -> list:
        return self.blocks.get((a, b), [])

    def block_dim(self, a, b) -> int:
        return len(self.block(a, b))

    def identity(self, obj_id) -> np.ndarray:
        return np.eye(self.dim(obj_id), dtype=complex)

    def pairs(self):
        ids = self.object_ids
        return [(a, b) for a in ids for b in ids]


@dataclass
class StarFunctor:
    """Linear *-functor data between two matrix categories.

    ``object_map`` is a bijection of object ids; ``block_maps[(A, B)]``
    holds the matrix of the functor on block ``(A, B)`` in the stored
    HS coordinates (shape: target block dim x source block dim).
    """

    object_map: dict
    block_maps: dict


@dataclass
class Ideal:
    """Per-block subspaces closed under outer composition and adjoint."""

    blocks: dict  # (A, B) -> list of matrices (HS-orthonormal)

    def dim(self, a, b) -> int:
        return len(self.blocks.get((a, b), []))


# ---------------------------------------------------------------------------
# closure


def close(
    presentation: CategoryPresentation,
    unitize: bool = False,
    tol: float | None = None,
) -> MatrixCategory:
    """Close generators under adjoints, products, and linear spans.

    With ``unitize`` the identity matrix of every object is adjoined
    first.  The result's ``unital`` flag is True when units were
    adjoined or when every object identity already lies in the closed
    diagonal span.
    """
    tol = resolve_tol(tol)
    objects = tuple((str(o), int(d)) for o, d in presentation.objects)
    dims = dict(objects)
    ids = [o for o, _ in objects]

    blocks: dict = {(a, b): [] for a in ids for b in ids}
    for (a, b), mats in presentation.generators.items():
        if (a, b) not in blocks:
            raise KeyError(f"generator block ({a}, {b}) names unknown objects")
        for m in mats:
            arr = np.asarray(m, dtype=complex)
            if arr.shape != (dims[a], dims[b]):
                raise ValueError(
                    f"generator in block ({a}, {b}) has shape {arr.shape}, "
                    f"expected {(dims[a], dims[b])}"
                )
            blocks[(a, b)].append(arr)
    if unitize:
        for o, d in objects:
            blocks[(o, o)].append(np.eye(d, dtype=complex))

    for pair in blocks:
        blocks[pair] = hs_orthonormalize(blocks[pair], tol).basis

    max_iters = sum(dims[a] * dims[b] for a in ids for b in ids) + 1
    for _ in range(max_iters):
        changed = False
        candidates: dict = {pair: [] for pair in blocks}
        for (a, b), basis in blocks.items():
            for m in basis:
                candidates[(b, a)].append(adjoint(m))
        for a, b, c in itertools.product(ids, ids, ids):
            left, right = blocks[(a, b)], blocks[(b, c)]
            if not left or not right:
                continue
            for m in left:
                for n in right:
                    candidates[(a, c)].append(m @ n)
        for pair, basis in blocks.items():
            extra = candidates[pair]
            if not extra:
                continue
            new_basis = hs_orthonormalize(basis + extra, tol).basis
            if len(new_basis) > len(basis):
                blocks[pair] = new_basis
                changed = True
        if not changed:
            break
    else:
        raise SpectroidError("closure did not stabilize (numerical drift?)")

    unital = unitize or all(
        hs_member(np.eye(d, dtype=complex), blocks[(o, o)], tol)[0]
        for o, d in objects
    )
    return MatrixCategory(objects=objects, blocks=blocks, unital=unital)


# ---------------------------------------------------------------------------
# axiom checks


def _block_products_in_span(cat, tol, report):
    worst = 0.0
    where = ""
    for a, b, c in itertools.product(*[cat.object_ids] * 3):
        left, right = cat.block(a, b), cat.block(b, c)
        span = cat.block(a, c)
        for m in left:
            for n in right:
                _, residual, _ = hs_member(m @ n, span, tol)
                if residual > worst:
                    worst, where = residual, f"({a},{b})x({b},{c})"
    report.add(
        "composition-closure",
        worst <= tol * 10.0,
        worst,
        where,
    )


def check_axioms(
    cat: MatrixCategory, tol: float | None = None, seed: int = 0
) -> Report:
    """Verify the concrete C*-category axioms; returns a named report.

    Checks basis orthonormality, adjoint and composition closure, the
    unit membership when the category claims to be unital, and the
    norm identities ``||x* x|| = ||x||^2`` and ``||x y|| <= ||x||
    ||y||`` on seeded random combinations.
    """
    tol = resolve_tol(tol)
    report = Report()
    rng = np.random.default_rng(seed)

    worst = 0.0
    for (a, b), basis in cat.blocks.items():
        for m in basis:
            da, db = cat.dim(a), cat.dim(b)
            if m.shape != (da, db):
                report.add("shapes", False, detail=f"block ({a},{b})")
                return report
        n = len(basis)
        if n:
            gram = np.array([[hs_inner(x, y) for y in basis] for x in basis])
            worst = max(worst, float(np.linalg.norm(gram - np.eye(n))))
    report.add("orthonormal-bases", worst <= tol * 100.0, worst)

    worst, where = 0.0, ""
    for (a, b), basis in cat.blocks.items():
        span = cat.block(b, a)
        for m in basis:
            _, residual, _ = hs_member(adjoint(m), span, tol)
            if residual > worst:
                worst, where = residual, f"({a},{b})"
    report.add("adjoint-closure", worst <= tol * 10.0, worst, where)

    _block_products_in_span(cat, tol, report)

    if cat.unital:
        worst = 0.0
        for o, d in cat.objects:
            _, residual, _ = hs_member(
                np.eye(d, dtype=complex), cat.block(o, o), tol
            )
            worst = max(worst, residual)
        report.add("units", worst <= tol * 10.0, worst)

    worst_cstar, worst_sub = 0.0, 0.0
    for (a, b), basis in cat.blocks.items():
        if not basis:
            continue
        for _ in range(3):
            coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(
                len(basis)
            )
            x = sum(c * m for c, m in zip(coeffs, basis))
            nx = op_norm(x)
            dev = abs(op_norm(adjoint(x) @ x) - nx**2)
            worst_cstar = max(worst_cstar, dev / (1.0 + nx**2))
            for cid in cat.object_ids:
                other = cat.block(b, cid)
                if not other:
                    continue
                y = other[0]
                excess = op_norm(x @ y) - nx * op_norm(y)
                worst_sub = max(worst_sub, excess / (1.0 + nx * op_norm(y)))
    report.add("cstar-norm-identity", worst_cstar <= tol * 100.0, worst_cstar)
    report.add("submultiplicativity", worst_sub <= tol * 100.0, worst_sub)
    return report


def is_commutative(cat: MatrixCategory, tol: float | None = None) -> bool:
    """True when every diagonal block is a commutative algebra."""
    tol = resolve_tol(tol)
    for o in cat.object_ids:
        basis = cat.block(o, o)
        for i, x in enumerate(basis):
            for y in basis[i + 1:]:
                dev = float(np.linalg.norm(x @ y - y @ x))
                if dev > tol * (1.0 + hs_norm(x) * hs_norm(y)):
                    return False
    return True


def is_full(cat: MatrixCategory, tol: float | None = None) -> bool:
    """True when inner products of every block span both diagonals.

    For each ordered pair (A, B) the spans of ``{x* y}`` and
    ``{x y*}`` over ``x, y`` in block (A, B) must equal the full
    diagonal blocks at B and A respectively (compared by dimension;
    membership is part of closure).
    """
    tol = resolve_tol(tol)
    for a, b in cat.pairs():
        basis = cat.block(a, b)
        right = [adjoint(x) @ y for x in basis for y in basis]
        left = [x @ adjoint(y) for x in basis for y in basis]
        if hs_orthonormalize(right, tol).rank != cat.block_dim(b, b):
            return False
        if hs_orthonormalize(left, tol).rank != cat.block_dim(a, a):
            return False
    return True


# ---------------------------------------------------------------------------
# functors


def identity_functor(cat: MatrixCategory) -> StarFunctor:
    return StarFunctor(
        object_map={o: o for o in cat.object_ids},
        block_maps={
            pair: np.eye(len(basis), dtype=complex)
            for pair, basis in cat.blocks.items()
        },
    )


def compose_functors(phi2: StarFunctor, phi1: StarFunctor) -> StarFunctor:
    """The composite applying ``phi1`` first."""
    object_map = {a: phi2.object_map[b] for a, b in phi1.object_map.items()}
    block_maps = {}
    for (a, b), m1 in phi1.block_maps.items():
        mid = (phi1.object_map[a], phi1.object_map[b])
        m2 = phi2.block_maps[mid]
        block_maps[(a, b)] = m2 @ m1
    return StarFunctor(object_map, block_maps)


def functor_image(
    phi: StarFunctor,
    source: MatrixCategory,
    target: MatrixCategory,
    a,
    b,
    x,
    tol: float | None = None,
) -> np.ndarray:
    """Materialize the image of ``x`` (an element of block (a, b))."""
    tol = resolve_tol(tol)
    member, residual, coeffs = hs_member(x, source.block(a, b), tol)
    if not member:
        raise InvalidFunctor(
            f"element not in source block ({a},{b}) (residual {residual:.3e})"
        )
    out_pair = (phi.object_map[a], phi.object_map[b])
    vec = phi.block_maps[(a, b)] @ coeffs if len(coeffs) else coeffs
    out = np.zeros(
        (target.dim(out_pair[0]), target.dim(out_pair[1])), dtype=complex
    )
    for c, m in zip(vec, target.block(*out_pair)):
        out = out + c * m
    return out


def functor_from_images(
    source: MatrixCategory,
    target: MatrixCategory,
    object_map: dict,
    images: dict,
    tol: float | None = None,
) -> StarFunctor:
    """Build the coordinate form of a functor from basis images.

    ``images[(A, B)]`` lists, per source basis element, its image
    matrix in the target block; each must lie in the target span.
    """
    tol = resolve_tol(tol)
    block_maps = {}
    for (a, b), basis in source.blocks.items():
        out_pair = (object_map[a], object_map[b])
        tgt = target.block(*out_pair)
        cols = []
        for j, _ in enumerate(basis):
            img = images[(a, b)][j]
            member, residual, coeffs = hs_member(img, tgt, tol)
            if not member:
                raise InvalidFunctor(
                    f"image of basis {j} of ({a},{b}) is outside the target "
                    f"block (residual {residual:.3e})"
                )
            cols.append(coeffs)
        block_maps[(a, b)] = (
            np.array(cols, dtype=complex).T
            if cols
            else np.zeros((len(tgt), 0), dtype=complex)
        )
    return StarFunctor(dict(object_map), block_maps)


def validate_functor(
    phi: StarFunctor,
    source: MatrixCategory,
    target: MatrixCategory,
    tol: float | None = None,
) -> Report:
    """Check *-functor axioms on all basis elements and pairs."""
    tol = resolve_tol(tol)
    report = Report()

    src_ids, tgt_ids = set(source.object_ids), set(target.object_ids)
    bijective = (
        set(phi.object_map) == src_ids
        and set(phi.object_map.values()) == tgt_ids
        and len(set(phi.object_map.values())) == len(phi.object_map)
    )
    report.add("object-bijection", bijective)
    if not bijective:
        return report

    images = {}
    for (a, b), basis in source.blocks.items():
        mapped = []
        for j, m in enumerate(basis):
            vec = phi.block_maps[(a, b)][:, j] if len(basis) else None
            out_pair = (phi.object_map[a], phi.object_map[b])
            img = np.zeros(
                (target.dim(out_pair[0]), target.dim(out_pair[1])),
                dtype=complex,
            )
            for c, t in zip(vec, target.block(*out_pair)):
                img = img + c * t
            mapped.append(img)
        images[(a, b)] = mapped

    worst = 0.0
    for (a, b), basis in source.blocks.items():
        for j, m in enumerate(basis):
            img_adj = adjoint(images[(a, b)][j])
            member, residual, coeffs = hs_member(
                adjoint(m), source.block(b, a), tol
            )
            if not member:
                report.add("adjoint-closure-of-source", False, residual)
                return report
            alt = np.zeros_like(img_adj)
            for c, t in zip(
                phi.block_maps[(b, a)] @ coeffs,
                target.block(phi.object_map[b], phi.object_map[a]),
            ):
                alt = alt + c * t
            worst = max(worst, float(np.linalg.norm(img_adj - alt)))
    report.add("involution", worst <= tol * 100.0, worst)

    worst = 0.0
    for a, b, c in itertools.product(*[source.object_ids] * 3):
        left, right = source.block(a, b), source.block(b, c)
        if not left or not right:
            continue
        for m in left:
            img_m = functor_image(phi, source, target, a, b, m, tol)
            for n in right:
                img_n = functor_image(phi, source, target, b, c, n, tol)
                img_mn = functor_image(phi, source, target, a, c, m @ n, tol)
                worst = max(
                    worst, float(np.linalg.norm(img_mn - img_m @ img_n))
                )
    report.add("multiplicativity", worst <= tol * 100.0, worst)

    if source.unital and target.unital:
        worst = 0.0
        for o in source.object_ids:
            img = functor_image(
                phi, source, target, o, o, source.identity(o), tol
            )
            worst = max(
                worst,
                float(
                    np.linalg.norm(img - target.identity(phi.object_map[o]))
                ),
            )
        report.add("units", worst <= tol * 100.0, worst)
    return report


# ---------------------------------------------------------------------------
# kernels, ideals, quotients


def kernel(
    phi: StarFunctor, source: MatrixCategory, tol: float | None = None
) -> Ideal:
    """Per-block null space of the functor, as matrices."""
    tol = resolve_tol(tol)
    blocks = {}
    for (a, b), basis in source.blocks.items():
        if not basis:
            blocks[(a, b)] = []
            continue
        m = phi.block_maps[(a, b)]
        if m.shape[0] == 0:
            null_vecs = np.eye(len(basis), dtype=complex)
        else:
            u, s, vh = np.linalg.svd(m)
            cut = s[0] * tol * 10.0 + tol if len(s) else 0.0
            rank = int(np.sum(s > cut))
            null_vecs = vh[rank:].conj().T
        mats = []
        for k in range(null_vecs.shape[1]):
            vec = null_vecs[:, k]
            mats.append(sum(c * m_ for c, m_ in zip(vec, basis)))
        blocks[(a, b)] = hs_orthonormalize(mats, tol).basis
    return Ideal(blocks)


def validate_ideal(
    ideal: Ideal, cat: MatrixCategory, tol: float | None = None
) -> Report:
    """Closure of the ideal under adjoints and outer composition."""
    tol = resolve_tol(tol)
    report = Report()
    worst_adj = 0.0
    for (a, b), mats in ideal.blocks.items():
        span = ideal.blocks.get((b, a), [])
        for m in mats:
            _, residual, _ = hs_member(adjoint(m), span, tol)
            worst_adj = max(worst_adj, residual)
    report.add("ideal-adjoint", worst_adj <= tol * 10.0, worst_adj)

    worst = 0.0
    for (a, b), mats in ideal.blocks.items():
        for z in cat.object_ids:
            for c in cat.block(z, a):
                span = ideal.blocks.get((z, b), [])
                for m in mats:
                    _, residual, _ = hs_member(c @ m, span, tol)
                    worst = max(worst, residual)
            for c in cat.block(b, z):
                span = ideal.blocks.get((a, z), [])
                for m in mats:
                    _, residual, _ = hs_member(m @ c, span, tol)
                    worst = max(worst, residual)
    report.add("ideal-composition", worst <= tol * 10.0, worst)
    return report


def first_isomorphism_check(
    phi: StarFunctor,
    source: MatrixCategory,
    target: MatrixCategory,
    tol: float | None = None,
) -> Report:
    """Dimension bookkeeping for source/kernel ~ image, per block, plus
    closure of the image under products and adjoints."""
    tol = resolve_tol(tol)
    report = Report()
    ker = kernel(phi, source, tol)

    ok = True
    detail = []
    for (a, b), basis in source.blocks.items():
        m = phi.block_maps[(a, b)]
        if m.size == 0:
            rank = 0
        else:
            s = np.linalg.svd(m, compute_uv=False)
            cut = s[0] * tol * 10.0 + tol if len(s) else 0.0
            rank = int(np.sum(s > cut))
        if len(basis) != ker.dim(a, b) + rank:
            ok = False
            detail.append(f"({a},{b}): {len(basis)}!={ker.dim(a,b)}+{rank}")
    report.add("rank-nullity-per-block", ok, detail="; ".join(detail))

    image_spans = {}
    for (a, b), basis in source.blocks.items():
        out_pair = (phi.object_map[a], phi.object_map[b])
        imgs = [
            functor_image(phi, source, target, a, b, m, tol) for m in basis
        ]
        key = out_pair
        image_spans.setdefault(key, []).extend(imgs)
    for key in image_spans:
        image_spans[key] = hs_orthonormalize(image_spans[key], tol).basis

    worst = 0.0
    inv_map = {v: k for k, v in phi.object_map.items()}
    tgt_ids = [phi.object_map[o] for o in source.object_ids]
    for a, b, c in itertools.product(tgt_ids, tgt_ids, tgt_ids):
        for m in image_spans.get((a, b), []):
            _, residual, _ = hs_member(
                adjoint(m), image_spans.get((b, a), []), tol
            )
            worst = max(worst, residual)
            for n in image_spans.get((b, c), []):
                _, residual, _ = hs_member(
                    m @ n, image_spans.get((a, c), []), tol
                )
                worst = max(worst, residual)
    report.add("image-closed", worst <= tol * 100.0, worst)
    return report


def quotient_by_character(
    cat: MatrixCategory, omega, tol: float | None = None, seed: int = 0
):
    """Quotient of a commutative full unital category by a character.

    Realized as the compression onto the character's joint eigenspaces
    (one per object): returns the one-dimensional quotient category and
    the quotient *-functor onto it.
    """
    from . import duality

    tol = resolve_tol(tol)
    spec = duality.spectrum(cat, tol=tol, seed=seed)
    idx = duality.match_character_class(spec, omega, tol)
    return duality.compression_functor(cat, spec, idx, tol)


# ---------------------------------------------------------------------------
# constructions


def generated_by(
    x,
    a_id: str = "A",
    b_id: str = "B",
    tol: float | None = None,
) -> MatrixCategory:
    """The C*-category generated by one matrix placed in block (A, B).

    No units are adjoined.  When ``a_id == b_id`` the generator must be
    square and normal.
    """
    tol = resolve_tol(tol)
    arr = np.asarray(x, dtype=complex)
    if a_id == b_id:
        if arr.shape[0] != arr.shape[1]:
            raise ValueError("same-object generator must be square")
        comm = arr @ arr.conj().T - arr.conj().T @ arr
        if float(np.linalg.norm(comm)) > tol * (1.0 + hs_norm(arr) ** 2):
            raise NotNormal("same-object generator must be normal")
        objects = ((a_id, arr.shape[0]),)
    else:
        objects = ((a_id, arr.shape[0]), (b_id, arr.shape[1]))
    pres = CategoryPresentation(
        objects=objects, generators={(a_id, b_id): [arr]}
    )
    return close(pres, unitize=False, tol=tol)


def _check_phases(phases, k) -> np.ndarray:
    if phases is None:
        return np.ones(k, dtype=complex)
    arr = np.asarray(phases, dtype=complex)
    if arr.shape != (k,):
        raise ValueError(f"expected {k} phases, got shape {arr.shape}")
    if np.any(np.abs(np.abs(arr) - 1.0) > 1e-12):
        raise ValueError("phases must be unimodular")
    return arr


def _check_bijection(r, k) -> list[int]:
    r = [int(i) for i in r]
    if sorted(r) != list(range(k)):
        raise ValueError(f"not a bijection of range({k}): {r}")
    return r


def linking_generator(k: int, r, phases=None) -> np.ndarray:
    """The distinguished element sum_i phases[i] e_{i, r(i)}."""
    r = _check_bijection(r, k)
    phases = _check_phases(phases, k)
    out = np.zeros((k, k), dtype=complex)
    for i in range(k):
        out[i, r[i]] = phases[i]
    return out


def linking_category(
    k: int,
    r,
    phases=None,
    a_id: str = "A",
    b_id: str = "B",
    tol: float | None = None,
) -> MatrixCategory:
    """Two diagonal algebras of size ``k`` linked along a bijection.

    Diagonal blocks are the full diagonal algebras; the off-diagonal
    block is the span of the matrix units along the graph of ``r``
    (phases scale the distinguished generator but not the span).
    """
    tol = resolve_tol(tol)
    r = _check_bijection(r, k)
    units = [_unit_matrix(k, i, i) for i in range(k)]
    pres = CategoryPresentation(
        objects=((a_id, k), (b_id, k)),
        generators={
            (a_id, a_id): units,
            (b_id, b_id): units,
            (a_id, b_id): [linking_generator(k, r, phases)],
        },
    )
    return close(pres, unitize=False, tol=tol)


def _unit_matrix(k, i, j):
    m = np.zeros((k, k), dtype=complex)
    m[i, j] = 1.0
    return m


def multi_linking_generator(k: int, correspondences, phase_lists, j: int, l: int):
    """Distinguished generator of block (B_{j+1}, B_{l+1}), 0-indexed
    ``j < l``: matrix units along the composed bijection with phases
    multiplied along the way."""
    rs = [_check_bijection(r, k) for r in correspondences]
    ps = [_check_phases(p, k) for p in phase_lists]
    out = np.zeros((k, k), dtype=complex)
    for i in range(k):
        cur, phase = i, 1.0 + 0j
        for step in range(j, l):
            phase *= ps[step][cur]
            cur = rs[step][cur]
        out[i, cur] = phase
    return out


def multi_linking(
    k: int,
    correspondences,
    phase_lists=None,
    tol: float | None = None,
) -> MatrixCategory:
    """Chain of linked diagonal algebras: n-1 bijections, n objects.

    Objects are named ``B1 ... Bn``; block (B_j, B_l) ends up spanned
    by the matrix units of the composed bijection, with phases
    multiplying along composition.
    """
    tol = resolve_tol(tol)
    n = len(correspondences) + 1
    if phase_lists is None:
        phase_lists = [None] * (n - 1)
    if len(phase_lists) != n - 1:
        raise ValueError("need one phase list per correspondence")
    ids = [f"B{j + 1}" for j in range(n)]
    units = [_unit_matrix(k, i, i) for i in range(k)]
    generators = {(o, o): list(units) for o in ids}
    for j in range(n - 1):
        generators[(ids[j], ids[j + 1])] = [
            multi_linking_generator(k, correspondences, phase_lists, j, j + 1)
        ]
    pres = CategoryPresentation(
        objects=tuple((o, k) for o in ids), generators=generators
    )
    return close(pres, unitize=False, tol=tol)


# ---------------------------------------------------------------------------
# groupoids


@dataclass(frozen=True)
class FiniteGroupoid:
    """Explicit arrows-and-tables groupoid."""

    objects: tuple
    arrows: tuple
    source: dict
    target: dict
    compose: dict  # (g, h) -> g o h, defined iff source(g) == target(h)
    identities: dict  # object -> identity arrow
    inverses: dict

    def hom(self, a, b) -> list:
        """Arrows from ``b`` to ``a`` (the block-(a, b) index set)."""
        return [
            g
            for g in self.arrows
            if self.source[g] == b and self.target[g] == a
        ]


def validate_groupoid(g: FiniteGroupoid) -> Report:
    """Exhaustive axiom check (composability, associativity, units,
    inverses)."""
    report = Report()
    ok = all(
        g.source.get(a) in g.objects and g.target.get(a) in g.objects
        for a in g.arrows
    )
    report.add("source-target-defined", ok)
    if not ok:
        return report

    ok, detail = True, ""
    for x in g.arrows:
        for y in g.arrows:
            composable = g.source[x] == g.target[y]
            defined = (x, y) in g.compose
            if composable != defined:
                ok, detail = False, f"({x},{y})"
                break
            if defined:
                z = g.compose[(x, y)]
                if (
                    z not in g.arrows
                    or g.source[z] != g.source[y]
                    or g.target[z] != g.target[x]
                ):
                    ok, detail = False, f"({x},{y})->{z}"
                    break
        if not ok:
            break
    report.add("composition-table", ok, detail=detail)
    if not ok:
        return report

    ok, detail = True, ""
    for x in g.arrows:
        for y in g.arrows:
            if g.source[x] != g.target[y]:
                continue
            xy = g.compose[(x, y)]
            for z in g.arrows:
                if g.source[y] != g.target[z]:
                    continue
                if g.compose[(xy, z)] != g.compose[(x, g.compose[(y, z)])]:
                    ok, detail = False, f"({x},{y},{z})"
                    break
            if not ok:
                break
        if not ok:
            break
    report.add("associativity", ok, detail=detail)

    ok = True
    for o in g.objects:
        e = g.identities.get(o)
        if e is None or g.source.get(e) != o or g.target.get(e) != o:
            ok = False
            break
        if any(
            g.compose[(e, y)] != y for y in g.arrows if g.target[y] == o
        ) or any(g.compose[(x, e)] != x for x in g.arrows if g.source[x] == o):
            ok = False
            break
    report.add("identities", ok)

    ok = True
    for x in g.arrows:
        inv = g.inverses.get(x)
        if inv is None:
            ok = False
            break
        if (
            g.compose.get((x, inv)) != g.identities[g.target[x]]
            or g.compose.get((inv, x)) != g.identities[g.source[x]]
        ):
            ok = False
            break
    report.add("inverses", ok)
    return report


def groupoid_category(
    g: FiniteGroupoid, tol: float | None = None
) -> MatrixCategory:
    """The reduced groupoid C*-category via the left regular action.

    The space at object ``A`` has one basis vector per arrow with
    target ``A``; an arrow ``f: B -> A`` acts by post-composition as a
    0/1 partial permutation matrix from the ``B`` space to the ``A``
    space.  Blocks are the spans of these operators.
    """
    tol = resolve_tol(tol)
    rep = validate_groupoid(g)
    if not rep.passed:
        raise InvalidGroupoid(
            "; ".join(c.name for c in rep.failures())
        )
    spaces = {o: [h for h in g.arrows if g.target[h] == o] for o in g.objects}
    index = {o: {h: i for i, h in enumerate(spaces[o])} for o in g.objects}
    objects = tuple((o, len(spaces[o])) for o in g.objects)

    blocks: dict = {}
    for a in g.objects:
        for b in g.objects:
            ops = []
            for f in g.hom(a, b):
                m = np.zeros((len(spaces[a]), len(spaces[b])), dtype=complex)
                for h in spaces[b]:
                    m[index[a][g.compose[(f, h)]], index[b][h]] = 1.0
                ops.append(m)
            blocks[(a, b)] = hs_orthonormalize(ops, tol).basis
    return MatrixCategory(objects=objects, blocks=blocks, unital=True)


class GroupoidTraits(NamedTuple):
    stabilizers_abelian: bool
    transitive: bool


def groupoid_report(g: FiniteGroupoid) -> GroupoidTraits:
    """Combinatorial classification used to cross-check the category:
    commutativity should match abelian stabilizers, fullness should
    match transitivity."""
    abelian = True
    for o in g.objects:
        stab = g.hom(o, o)
        for x in stab:
            for y in stab:
                if g.compose[(x, y)] != g.compose[(y, x)]:
                    abelian = False
    transitive = all(
        len(g.hom(a, b)) > 0 for a in g.objects for b in g.objects
    )
    return GroupoidTraits(abelian, transitive)
