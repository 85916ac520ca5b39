"""Checkable reconstructions of the lower-bound arguments for asymptotic dimension.

Everything here works at one fixed scale on finite spaces:

* chain-boundedness and the chain-component cover (the asdim-0 criterion);
* E-boxes, pulled-back covers and the crossing they must contain when the
  cover's multiplicity is at most the box dimension;
* the product-of-chains E-box and the torus-translation E-box, each wired
  into a demo that reports which horn of the contradiction fires for a
  given cover.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Sequence

from .box import BoxShape, Cell, CellSet, neighbor_cells
from .coarse import (
    AbstractCover,
    Entourage,
    GroundSet,
    PermutationAction,
    component_partition,
    cover_multiplicity,
    e_chain_between,
    finitary_bound,
    freeze_label,
    group_entourage,
    is_e_chain,
    is_uniformly_bounded,
    product_entourage,
    thaw_label,
)
from .dichotomy import (
    Certificate,
    Cover,
    Crossing,
    chain_components,
    connects_opposite_faces,
    dichotomy,
)
from .errors import Check, InternalContradiction, InvalidInputError


@dataclass(frozen=True)
class EBoxMap:
    """A total map from the cells of ``shape`` to labels of ``space``."""

    shape: BoxShape
    space: GroundSet
    table: Mapping[Cell, Hashable]
    indices: dict[Cell, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        table = {self.shape.check_cell(c): v for c, v in self.table.items()}
        if len(table) != self.shape.size:
            raise InvalidInputError(
                f"map defines {len(table)} of {self.shape.size} cells"
            )
        indices = {c: self.space.index(v) for c, v in table.items()}
        object.__setattr__(self, "table", {c: self.space.labels[i] for c, i in indices.items()})
        object.__setattr__(self, "indices", indices)

    def __call__(self, cell: Sequence[int]) -> Hashable:
        return self.table[tuple(cell)]

    def is_injective(self) -> bool:
        return len(set(self.indices.values())) == len(self.indices)

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": self.shape.to_json(),
            "space": self.space.to_json(),
            "table": [[list(c), thaw_label(self.table[c])] for c in sorted(self.table)],
        }

    @classmethod
    def from_json(cls, obj: Any) -> "EBoxMap":
        try:
            shape = BoxShape.from_json(obj["shape"])
            space = GroundSet.from_json(obj["space"])
            rows = obj["table"]
            table = {}
            for cell, label in rows:
                c = tuple(cell)
                if c in table:
                    raise InvalidInputError(f"cell {c} mapped twice")
                table[c] = freeze_label(label)
            return cls(shape, space, table)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed E-box: {exc}") from exc


@dataclass(frozen=True)
class ChainSpec:
    """An ``E``-chain ``x_0, ..., x_m`` in a space, with its scale ``E``."""

    space: GroundSet
    points: tuple[Hashable, ...]
    scale: Entourage

    def __post_init__(self) -> None:
        if self.scale.ground != self.space:
            raise InvalidInputError("chain scale lives on a different space")
        if not self.points:
            raise InvalidInputError("a chain needs at least one point")
        points = tuple(self.space.labels[self.space.index(p)] for p in self.points)
        object.__setattr__(self, "points", points)
        if not is_e_chain(self.scale, points):
            raise InvalidInputError("points do not form a chain at the given scale")

    @property
    def m(self) -> int:
        return len(self.points) - 1


@dataclass(frozen=True)
class ZnActionConfig:
    """Translation action of ``Z^n`` modelled on the torus ``(Z_N)^n``."""

    n: int
    m: int
    N: int
    base_point: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        for name in ("n", "m", "N"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidInputError(f"{name} must be an integer")
        if self.n < 1 or self.m < 1:
            raise InvalidInputError("n and m must be positive")
        if self.N < 2 * self.m + 2:
            raise InvalidInputError(f"torus size N={self.N} must be >= 2m+2={2 * self.m + 2}")
        base = (0,) * self.n if self.base_point is None else tuple(self.base_point)
        if len(base) != self.n or any(not 0 <= b < self.N for b in base):
            raise InvalidInputError(f"base point {base} is not on the torus")
        object.__setattr__(self, "base_point", base)

    @classmethod
    def from_json(cls, obj: Any) -> "ZnActionConfig":
        try:
            base = obj.get("base_point")
            return cls(obj["n"], obj["m"], obj["N"], None if base is None else tuple(base))
        except (KeyError, AttributeError, TypeError) as exc:
            raise InvalidInputError(f"malformed action config: {exc}") from exc


@dataclass(frozen=True)
class Verdict:
    """Which horn of a demo's contradiction fired, with its numeric evidence."""

    branch: str
    evidence: dict[str, Any]
    box_cover: Cover | None = None
    certificate: Certificate | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"branch": self.branch, **self.evidence}
        if self.box_cover is not None:
            out["box_cover"] = self.box_cover.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


# -- E-boxes and the asdim-0 criterion ---------------------------------------


def validate_ebox(f: EBoxMap, E: Entourage) -> Check:
    """Every pair of cells at distance <= 1 must land in ``E``."""
    if f.space != E.ground:
        raise InvalidInputError("E-box and entourage live on different spaces")
    for c in sorted(f.indices):
        i = f.indices[c]
        for y in neighbor_cells(c, f.shape.dims):
            if f.indices[y] not in E.balls[i]:
                return Check.failed("not an E-box", cells=[list(c), list(y)])
    return Check.passed()


@dataclass(frozen=True)
class ZeroDimCheck:
    ok: bool
    chain: list | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "chain": None if self.chain is None else [thaw_label(v) for v in self.chain]}


def zero_dim_check_at_scale(E: Entourage, F: Entourage) -> ZeroDimCheck:
    """Whether every ``E``-chain has its endpoints ``F``-related.

    Equivalent to each chain component of ``x`` lying in ``F[x]``.  On
    failure the returned chain is a shortest one from the first offending
    point to the last point of its component outside its ``F``-ball.
    """
    if E.ground != F.ground:
        raise InvalidInputError("entourages live on different spaces")
    labels = E.ground.labels
    for part in component_partition(E):
        for i in sorted(part):
            outside = sorted(part - F.balls[i])
            if outside:
                return ZeroDimCheck(False, e_chain_between(E, labels[i], labels[outside[-1]]))
    return ZeroDimCheck(True)


def zero_dim_cover(E: Entourage) -> AbstractCover:
    """Cover by ``E``-chain components; each ball ``E[x]`` meets exactly one member."""
    labels = E.ground.labels
    parts = component_partition(E)
    cov = AbstractCover(E.ground, {str(k): {labels[i] for i in p} for k, p in enumerate(parts)})
    for i, b in enumerate(E.balls):
        if sum(1 for m in cov.index_sets if m & b) != 1:
            raise InternalContradiction(f"ball at {labels[i]!r} meets several components")
    return cov


def pullback_cover(f: EBoxMap, cov: AbstractCover) -> Cover:
    """Preimages ``f^-1(U)`` as a box cover; empty preimages are dropped."""
    if cov.ground != f.space:
        raise InvalidInputError("cover and E-box live on different spaces")
    members: dict[str, list[Cell]] = {mid: [] for mid in cov.ids}
    for c, i in f.indices.items():
        for mid, m in zip(cov.ids, cov.index_sets):
            if i in m:
                members[mid].append(c)
    return Cover(f.shape, {k: CellSet.trusted(f.shape, v) for k, v in members.items()})


def refine_by_components(cov: Cover) -> Cover:
    """Split each member into its chain components, ids ``"<id>.<k>"``.

    Components of one member are 2 apart, so no set of diameter <= 1 meets
    two of them and unit multiplicity does not grow.
    """
    members = {}
    for mid, cells in cov.members.items():
        for k, part in enumerate(chain_components(cells)):
            members[f"{mid}.{k}"] = part
    return Cover(cov.shape, members)


def parent_id(refined_id: str) -> str:
    return refined_id.rsplit(".", 1)[0]


def _box_certificate(f: EBoxMap, cov: AbstractCover) -> tuple[Cover, Certificate]:
    box_cover = refine_by_components(pullback_cover(f, cov))
    return box_cover, dichotomy(box_cover)


@dataclass(frozen=True)
class HigherDimWitness:
    """A crossing component ``V`` of the pulled-back cover, with ``f(V)`` bounded by ``F``."""

    crossing: Crossing
    component: CellSet
    member_id: str
    box_cover: Cover
    image: frozenset

    def to_json(self) -> dict[str, Any]:
        return {
            "member_id": self.member_id,
            "component": self.component.to_json(),
            "certificate": self.crossing.to_json(),
            "box_cover": self.box_cover.to_json(),
            "image_size": len(self.image),
        }


def higher_dim_witness(f: EBoxMap, E: Entourage, cov: AbstractCover, F: Entourage) -> HigherDimWitness:
    """Crossing set ``V`` of the box with ``f(V) x f(V)`` inside ``F``.

    Requires ``f`` to be an E-box, ``cov`` to have ``E``-multiplicity at
    most the box dimension, and ``cov`` to be bounded by ``F``.
    """
    n = f.shape.n
    if not validate_ebox(f, E):
        raise InvalidInputError("map is not an E-box")
    count, where = cover_multiplicity(E, cov)
    if count > n:
        raise InvalidInputError(f"cover multiplicity {count} at {where!r} exceeds n={n}")
    if not is_uniformly_bounded(cov, F):
        raise InvalidInputError("cover is not bounded by F")
    box_cover, cert = _box_certificate(f, cov)
    if not isinstance(cert, Crossing):
        raise InternalContradiction("multiplicity <= n yet the pulled-back cover has a witness")
    V = box_cover.members[cert.member_id]
    image_idx = {f.indices[c] for c in V.cells}
    if any(not image_idx <= F.balls[i] for i in image_idx):
        raise InternalContradiction("image of the crossing component is not F-bounded")
    labels = f.space.labels
    return HigherDimWitness(
        cert, V, parent_id(cert.member_id), box_cover, frozenset(labels[i] for i in image_idx)
    )


# -- product of chains -------------------------------------------------------


def product_chain_ebox(chains: Sequence[ChainSpec]) -> tuple[EBoxMap, Entourage]:
    """The grid map ``(k_1, ..., k_n) -> (x_{k_1,1}, ..., x_{k_n,n})`` and the product scale."""
    if not chains:
        raise InvalidInputError("need at least one chain")
    E = product_entourage([c.scale for c in chains])
    shape = BoxShape(tuple(c.m + 1 for c in chains))
    table = {cell: tuple(ch.points[k] for ch, k in zip(chains, cell)) for cell in shape.cells()}
    f = EBoxMap(shape, E.ground, table)
    if not validate_ebox(f, E):
        raise InternalContradiction("grid of chains is not an E-box")
    return f, E


def theorem1_demo(chains: Sequence[ChainSpec], cov: AbstractCover, F_parts: Sequence[Entourage]) -> Verdict:
    """Show why ``cov`` cannot both have multiplicity <= n and be bounded by ``prod F_i``.

    Either some ``E``-ball meets more than ``n`` members, or the pulled-back
    cover has a crossing component ``C`` along axis ``i``; then ``f(C)``
    contains points whose ``i``-th coordinates are the chain endpoints,
    which ``F_i`` does not relate.
    """
    n = len(chains)
    if len(F_parts) != n:
        raise InvalidInputError(f"need {n} factor bounds, got {len(F_parts)}")
    for i, (ch, Fi) in enumerate(zip(chains, F_parts)):
        if Fi.ground != ch.space:
            raise InvalidInputError(f"bound {i + 1} lives on a different space")
        if Fi.related(ch.points[0], ch.points[-1]):
            raise InvalidInputError(f"chain {i + 1} endpoints are already F-related")
    f, E = product_chain_ebox(chains)
    if cov.ground != E.ground:
        raise InvalidInputError("cover is not on the product space")
    count, where = cover_multiplicity(E, cov)
    box_cover, cert = _box_certificate(f, cov)
    if count > n:
        return Verdict(
            "multiplicity", {"n": n, "count": count, "location": thaw_label(where)}, box_cover, cert
        )
    if not isinstance(cert, Crossing):
        raise InternalContradiction("multiplicity <= n yet the pulled-back cover has a witness")
    C = box_cover.members[cert.member_id]
    i = cert.axis - 1
    m_i = chains[i].m
    projection = sorted({c[i] for c in C.cells})
    if projection != list(range(m_i + 1)):
        raise InternalContradiction(f"crossing projection {projection} is not onto 0..{m_i}")
    lo = min(c for c in C.cells if c[i] == 0)
    hi = min(c for c in C.cells if c[i] == m_i)
    x0, xm = chains[i].points[0], chains[i].points[-1]
    assert f(lo)[i] == x0 and f(hi)[i] == xm
    evidence = {
        "n": n,
        "count": count,
        "axis": cert.axis,
        "member_id": parent_id(cert.member_id),
        "projection": projection,
        "endpoint_pair": [thaw_label(x0), thaw_label(xm)],
        "endpoint_cells": [list(lo), list(hi)],
        "image_pair": [thaw_label(f(lo)), thaw_label(f(hi))],
        "factor_bound_holds": F_parts[i].related(x0, xm),
    }
    return Verdict("contradiction", evidence, box_cover, cert)


# -- Z^n translations on a torus ---------------------------------------------


def _torus(cfg: ZnActionConfig) -> GroundSet:
    return GroundSet(tuple(itertools.product(range(cfg.N), repeat=cfg.n)))


def translation(N: int, v: Sequence[int]) -> tuple[int, ...]:
    """Index table of ``x -> x + v (mod N)`` on ``(Z_N)^n`` in row-major order."""
    n = len(v)
    out = []
    for x in itertools.product(range(N), repeat=n):
        idx = 0
        for xi, vi in zip(x, v):
            idx = idx * N + (xi + vi) % N
        out.append(idx)
    return tuple(out)


@dataclass(frozen=True)
class ZnEBox:
    ebox: EBoxMap
    entourage: Entourage
    action: PermutationAction
    injective: bool
    valid: bool
    fixed_point_free: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "ebox": self.ebox.to_json(),
            "injective": self.injective,
            "valid": self.valid,
            "fixed_point_free": self.fixed_point_free,
            "finitary_bound": finitary_bound(self.entourage),
        }


def zn_action_ebox(cfg: ZnActionConfig) -> ZnEBox:
    """The injective E-box ``z -> z + base`` from ``{0..m}^n`` into the torus.

    ``E`` is generated by translations by ``{-1,0,1}^n``.  Freeness is
    checked exactly for the translations by ``{0..m}^n \\ {0}``.
    """
    ground = _torus(cfg)
    unit = [v for v in itertools.product((-1, 0, 1), repeat=cfg.n) if any(v)]
    action = PermutationAction(ground, tuple(translation(cfg.N, v) for v in unit))
    E = group_entourage(action)
    shape = BoxShape((cfg.m + 1,) * cfg.n)
    base = cfg.base_point
    table = {z: tuple((b + zi) % cfg.N for b, zi in zip(base, z)) for z in shape.cells()}
    f = EBoxMap(shape, ground, table)
    words = [translation(cfg.N, z) for z in shape.cells() if any(z)]
    b = ground.index(base)
    free = all(w[b] != b for w in words)
    return ZnEBox(f, E, action, f.is_injective(), validate_ebox(f, E).ok, free)


@dataclass(frozen=True)
class CardinalityEvidence:
    axis: int
    projection: tuple[int, ...]
    size: int


def crossing_cardinality_check(C: CellSet, m: int) -> CardinalityEvidence:
    """A crossing set of the box ``{0..m}^n`` has at least ``m + 1`` cells."""
    if any(k != m + 1 for k in C.shape.dims):
        raise InvalidInputError(f"box {C.shape.dims} is not {{0..{m}}}^n")
    hit = connects_opposite_faces(C)
    if hit is None:
        raise InvalidInputError("set does not connect opposite faces")
    i = hit.axis - 1
    projection = tuple(sorted({c[i] for c in C.cells}))
    if projection != tuple(range(m + 1)) or len(C) < m + 1:
        raise InternalContradiction(f"crossing of size {len(C)} misses coordinates on axis {hit.axis}")
    return CardinalityEvidence(hit.axis, projection, len(C))


def theorem2_demo(cfg: ZnActionConfig, cov: AbstractCover, F: Entourage, strict: bool = True) -> Verdict:
    """Show why an ``F``-bounded cover of the torus has ``E``-multiplicity > n.

    With ``m >= max |F[x]|``, a crossing ``C`` of the pulled-back cover would
    satisfy ``|C| >= m + 1 > |F[f(c)]|`` while ``f(C)`` sits inside one
    ``F``-ball, which injectivity forbids.  ``strict=False`` skips the
    boundedness precondition so the contradiction branch can be observed.
    """
    zb = zn_action_ebox(cfg)
    if cov.ground != zb.ebox.space:
        raise InvalidInputError("cover is not on the torus")
    if F.ground != cov.ground:
        raise InvalidInputError("bound lives on a different space")
    m_bound = finitary_bound(F)
    if cfg.m < m_bound:
        raise InvalidInputError(f"m={cfg.m} is below the finitary bound {m_bound} of F")
    if strict and not is_uniformly_bounded(cov, F):
        raise InvalidInputError("cover is not bounded by F")
    f, E = zb.ebox, zb.entourage
    count, where = cover_multiplicity(E, cov)
    box_cover, cert = _box_certificate(f, cov)
    base = {"n": cfg.n, "m": cfg.m, "m_bound": m_bound, "count": count}
    if count > cfg.n:
        return Verdict(
            "multiplicity", {**base, "location": thaw_label(where)}, box_cover, cert
        )
    if not isinstance(cert, Crossing):
        raise InternalContradiction("multiplicity <= n yet the pulled-back cover has a witness")
    C = box_cover.members[cert.member_id]
    ev = crossing_cardinality_check(C, cfg.m)
    image = {f.indices[c] for c in C.cells}
    ball_sizes = [len(F.balls[f.indices[c]]) for c in C.cells]
    escaped = next(
        (c for c in sorted(C.cells) if not image <= F.balls[f.indices[c]]), None
    )
    evidence = {
        **base,
        "axis": ev.axis,
        "member_id": parent_id(cert.member_id),
        "crossing_size": ev.size,
        "image_size": len(image),
        "max_ball_size": max(ball_sizes),
        "unbounded_at": None if escaped is None else list(escaped),
    }
    if escaped is None:
        raise InternalContradiction("injective crossing image fits in one F-ball")
    return Verdict("contradiction", evidence, box_cover, cert)
