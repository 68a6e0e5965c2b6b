"""Finitely supported free-space elements and their exact norms.

A molecule is a finite combination ``sum_i a_i * delta(p_i)`` of point
evaluations over a pointed metric space; evaluations at the origin are the
zero element and canonicalization removes them, merges duplicate points and
drops zero coefficients.  Three ambient kinds are supported: sparse l1
sequences (``"l1"``), coordinate vectors under the l1 norm (``"l1N"``), and
finite pointed metric spaces (``"finite"``).

The norm of a molecule is the supremum of its pairing with 1-Lipschitz
functions vanishing at the origin.  Over the finite set ``support + origin``
that supremum is a linear program, and tight Lipschitz extension beyond the
support preserves the constant, so the finite program computes the norm in
the full space exactly.  :func:`free_norm` solves the function-side program
with the package's own simplex (the optimal witness function falls out of
the solution); :func:`transport_norm` solves the mass-transport side with an
independent solver and serves as an oracle; :func:`line_norm` evaluates the
closed-form total-variation expression available for molecules on the real
line.

The grid projection :func:`molecule_projection` pushes each point's mass onto
the corners of its tiling cell with the interpolation weights; by
construction its pairing with any function equals the pairing of the
projected function with the original molecule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import optimize

from .extension import FinitePointedMetricSpace
from .geometry import FiniteSupportPoint, l1_distance, sign_matrix
from .lp import SimplexError, solve_box_lp
from .operators import GridLevel, cell_weights

KINDS = ("l1", "l1N", "finite")


def _as_l1_point(p) -> FiniteSupportPoint:
    if isinstance(p, FiniteSupportPoint):
        return p
    if isinstance(p, Mapping):
        if "coords" in p:
            return FiniteSupportPoint.from_json(p)
        return FiniteSupportPoint.from_dict(p)
    return FiniteSupportPoint.from_dense(p)


@dataclass(frozen=True, eq=False)
class Molecule:
    """Canonical finite combination of point evaluations."""

    kind: str
    terms: tuple[tuple[object, float], ...]
    dim: int | None = None
    space: FinitePointedMetricSpace | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown molecule kind {self.kind!r}")
        if self.kind == "finite" and self.space is None:
            raise ValueError("finite-space molecules need their metric space")
        if self.kind == "l1N" and self.terms and self.dim is None:
            raise ValueError("coordinate molecules need a dimension")

    # -- construction -------------------------------------------------------

    @classmethod
    def on_l1(cls, pairs: Iterable[tuple[object, float]]) -> "Molecule":
        terms = [(_as_l1_point(p), float(a)) for p, a in pairs]
        return cls(kind="l1", terms=_canonical(terms, lambda p: p.is_zero, lambda p: p.items))

    @classmethod
    def on_rn(cls, pairs: Iterable[tuple[object, float]], dim: int | None = None) -> "Molecule":
        terms = []
        for p, a in pairs:
            pt = tuple(float(v) for v in np.asarray(p, dtype=float).reshape(-1))
            if dim is None:
                dim = len(pt)
            if len(pt) != dim:
                raise ValueError("all points must share one dimension")
            terms.append((pt, float(a)))
        canon = _canonical(terms, lambda p: all(v == 0.0 for v in p), lambda p: p)
        return cls(kind="l1N", terms=canon, dim=dim)

    @classmethod
    def on_space(cls, space: FinitePointedMetricSpace,
                 pairs: Iterable[tuple[int, float]]) -> "Molecule":
        terms = []
        for p, a in pairs:
            i = int(p)
            if not (0 <= i < space.size):
                raise ValueError(f"point index {i} outside the space")
            terms.append((i, float(a)))
        canon = _canonical(terms, lambda i: i == space.origin, lambda i: i)
        return cls(kind="finite", terms=canon, space=space)

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> tuple:
        return tuple(p for p, _ in self.terms)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(a for _, a in self.terms)

    def total_mass(self) -> float:
        return float(sum(a for _, a in self.terms))

    def point_distance(self, p, q) -> float:
        if self.kind == "finite":
            return float(self.space.dist[p, q])
        return l1_distance(p, q)

    def origin_point(self):
        if self.kind == "l1":
            return FiniteSupportPoint.zero()
        if self.kind == "l1N":
            return tuple(0.0 for _ in range(self.dim)) if self.dim else None
        return self.space.origin

    def _key(self, p):
        return p.items if self.kind == "l1" else p

    def _rebuild(self, terms) -> "Molecule":
        if self.kind == "l1":
            canon = _canonical(terms, lambda p: p.is_zero, lambda p: p.items)
            return Molecule(kind="l1", terms=canon)
        if self.kind == "l1N":
            canon = _canonical(terms, lambda p: all(v == 0.0 for v in p), lambda p: p)
            return Molecule(kind="l1N", terms=canon, dim=self.dim)
        canon = _canonical(terms, lambda i: i == self.space.origin, lambda i: i)
        return Molecule(kind="finite", terms=canon, space=self.space)

    def _check_compatible(self, other: "Molecule") -> None:
        if self.kind != other.kind:
            raise ValueError("molecules live in different kinds of space")
        if self.kind == "l1N" and None not in (self.dim, other.dim) and self.dim != other.dim:
            raise ValueError("coordinate molecules have different dimensions")
        if self.kind == "finite" and self.space is not other.space:
            raise ValueError("finite-space molecules live on different spaces")

    def scaled(self, alpha: float) -> "Molecule":
        return self._rebuild([(p, alpha * a) for p, a in self.terms])

    def plus(self, other: "Molecule") -> "Molecule":
        self._check_compatible(other)
        if self.kind == "l1N" and self.dim is None:
            return other
        return self._rebuild(list(self.terms) + list(other.terms))

    def minus(self, other: "Molecule") -> "Molecule":
        return self.plus(other.scaled(-1.0))

    # -- serialization ------------------------------------------------------

    def _encode_point(self, p):
        if self.kind == "l1":
            return p.to_json()
        if self.kind == "l1N":
            return list(p)
        return int(p)

    def to_json(self) -> dict:
        out = {
            "space": self.kind,
            "terms": [{"point": self._encode_point(p), "coeff": a} for p, a in self.terms],
        }
        if self.kind == "l1N":
            out["dim"] = self.dim
        if self.kind == "finite":
            out["metric_space"] = self.space.to_json()
        return out

    @classmethod
    def from_json(cls, obj: Mapping, space: FinitePointedMetricSpace | None = None) -> "Molecule":
        kind = obj["space"]
        raw = [(t["point"], float(t["coeff"])) for t in obj.get("terms", [])]
        if kind == "l1":
            return cls.on_l1(raw)
        if kind == "l1N":
            dim = obj.get("dim")
            return cls.on_rn(raw, dim=int(dim) if dim is not None else None)
        if kind == "finite":
            if space is None:
                if "metric_space" not in obj:
                    raise ValueError("finite-space molecules need a metric_space entry")
                space = FinitePointedMetricSpace.from_json(obj["metric_space"])
            return cls.on_space(space, raw)
        raise ValueError(f"unknown molecule kind {kind!r}")


def _canonical(terms, is_origin, key) -> tuple:
    merged: dict = {}
    points: dict = {}
    for p, a in terms:
        k = key(p)
        merged[k] = merged.get(k, 0.0) + float(a)
        points[k] = p
    out = []
    for k in sorted(merged):
        a = merged[k]
        p = points[k]
        if a == 0.0 or is_origin(p):
            continue
        out.append((p, a))
    return tuple(out)


def molecules_close(a: Molecule, b: Molecule, tol: float = 1e-10) -> bool:
    """Coefficient-wise comparison of canonical molecules (exact point keys)."""
    a._check_compatible(b)
    da = {a._key(p): c for p, c in a.terms}
    db = {b._key(p): c for p, c in b.terms}
    for k in set(da) | set(db):
        if abs(da.get(k, 0.0) - db.get(k, 0.0)) > tol:
            return False
    return True


def pairing(f, mu: Molecule) -> float:
    """``sum_i a_i f(p_i)``; the duality bracket against a function."""
    total = 0.0
    for p, a in mu.terms:
        x = np.asarray(p, dtype=float) if mu.kind == "l1N" else p
        total += a * float(f(x))
    return total


@dataclass(frozen=True)
class NormCertificate:
    """Optimal value together with the witnessing function on the support."""

    value: float
    witness: dict

    def to_json(self, mu: Molecule | None = None) -> dict:
        entries = []
        for p, v in self.witness.items():
            if mu is not None:
                entries.append({"point": mu._encode_point(p), "value": v})
            else:
                entries.append({"point": p if not hasattr(p, "to_json") else p.to_json(), "value": v})
        return {"value": self.value, "witness": entries}


def check_certificate(cert: NormCertificate, mu: Molecule, tol: float = 1e-9) -> bool:
    """Witness is 1-Lipschitz on support + origin and attains the value."""
    pts = list(cert.witness)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = mu.point_distance(pts[i], pts[j])
            if abs(cert.witness[pts[i]] - cert.witness[pts[j]]) > d * (1.0 + tol) + tol:
                return False
    paired = sum(a * cert.witness[p] for p, a in mu.terms)
    return abs(paired - cert.value) <= tol * max(1.0, abs(cert.value))


def _distance_matrix(mu: Molecule) -> np.ndarray:
    """Distances over origin + support, origin first."""
    pts = [mu.origin_point()] + list(mu.support)
    k = len(pts)
    d = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d[i, j] = d[j, i] = mu.point_distance(pts[i], pts[j])
    return d


def _chain_reach(d: np.ndarray) -> np.ndarray:
    """Best one-intermediate relay distance, excluding trivial relays."""
    k = d.shape[0]
    reach = np.full((k, k), np.inf)
    for r in range(k):
        via = d[:, r][:, None] + d[r, :][None, :]
        via[r, :] = np.inf
        via[:, r] = np.inf
        np.minimum(reach, via, out=reach)
    return reach


def free_norm(mu: Molecule, tol: float = 1e-9) -> NormCertificate:
    """Exact norm of a molecule with the optimal dual witness.

    Maximizes the pairing over functions on ``support + origin`` that vanish
    at the origin and have all difference quotients at most one.  Constraints
    are generated lazily: pairs with an exact relay through a third point are
    implied by shorter pairs and enter only if violated, so the working
    program stays near the size of the active set.  Origin constraints become
    the variable bounds, making the all-lower start feasible by the triangle
    inequality.
    """
    if mu.is_zero:
        witness = {}
        origin = mu.origin_point()
        if origin is not None:
            witness[origin] = 0.0
        return NormCertificate(value=0.0, witness=witness)

    pts = list(mu.support)
    coeffs = np.asarray(mu.coefficients)
    k = len(pts)
    d = _distance_matrix(mu)
    scale = max(1.0, float(np.max(d)))
    vtol = tol * scale

    reach = _chain_reach(d)
    candidates: list[tuple[int, int]] = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if reach[i, j] > d[i, j] * (1.0 + 1e-12):
                candidates.append((i, j))

    lower = -d[0, 1:]
    upper = d[0, 1:].copy()

    rows: list[tuple[int, int]] = []
    present: set[tuple[int, int]] = set()

    def add_row(i: int, j: int) -> None:
        if (i, j) not in present:
            present.add((i, j))
            rows.append((i, j))

    # Seed with each point's nearest candidate partner.
    by_point: dict[int, list[tuple[float, int, int]]] = {}
    for i, j in candidates:
        by_point.setdefault(i, []).append((d[i, j], i, j))
        by_point.setdefault(j, []).append((d[i, j], i, j))
    for i in sorted(by_point):
        _, a, b = min(by_point[i])
        add_row(a, b)
        add_row(b, a)

    result = None
    warm = None
    max_rounds = 4 * k + 16
    for round_no in range(max_rounds):
        if rows:
            a_mat = np.zeros((len(rows), k))
            b_vec = np.empty(len(rows))
            for r, (i, j) in enumerate(rows):
                a_mat[r, i - 1] = 1.0
                a_mat[r, j - 1] = -1.0
                b_vec[r] = d[i, j]
        else:
            a_mat, b_vec = None, []
        result = solve_box_lp(coeffs, a_mat, b_vec, lower, upper, tol=tol, start_at_upper=warm)
        f = result.x
        warm = f > 0.5 * (lower + upper)
        violated: list[tuple[float, int, int]] = []
        for i, j in candidates:
            gap = f[i - 1] - f[j - 1]
            if gap > d[i, j] + vtol:
                violated.append((gap - d[i, j], i, j))
            elif -gap > d[i, j] + vtol:
                violated.append((-gap - d[i, j], j, i))
        if not violated:
            break
        if rows and round_no < 10:
            # Drop rows that came out slack; they re-enter if ever violated.
            slack = b_vec - a_mat @ f
            kept = [rows[r] for r in range(len(rows)) if slack[r] <= vtol + 1e-7 * scale]
            rows = kept
            present = set(rows)
        violated.sort(key=lambda t: (-t[0], t[1], t[2]))
        for _, i, j in violated[: max(4 * k, 64)]:
            add_row(i, j)
    else:
        raise SimplexError("constraint generation did not converge")

    value = max(float(result.objective), 0.0)
    witness = {mu.origin_point(): 0.0}
    for p, v in zip(pts, result.x):
        witness[p] = float(v)
    return NormCertificate(value=value, witness=witness)


def transport_norm(mu: Molecule) -> float:
    """Independent norm computation through the mass-transport program.

    Balances the molecule by letting the origin absorb the net mass, then
    minimizes the cost of moving the positive part onto the negative part.
    Solved with SciPy's LP solver; used as an oracle against
    :func:`free_norm`.
    """
    if mu.is_zero:
        return 0.0
    masses: list[tuple[object, float]] = list(mu.terms)
    masses.append((mu.origin_point(), -mu.total_mass()))
    pos = [(p, a) for p, a in masses if a > 0.0]
    neg = [(p, -a) for p, a in masses if a < 0.0]
    if not pos or not neg:
        return 0.0
    np_, nn = len(pos), len(neg)
    cost = np.empty(np_ * nn)
    for i, (p, _) in enumerate(pos):
        for j, (q, _) in enumerate(neg):
            cost[i * nn + j] = mu.point_distance(p, q)
    a_eq = np.zeros((np_ + nn - 1, np_ * nn))
    b_eq = np.empty(np_ + nn - 1)
    for i in range(np_):
        a_eq[i, i * nn : (i + 1) * nn] = 1.0
        b_eq[i] = pos[i][1]
    for j in range(nn - 1):  # the last balance row is redundant
        a_eq[np_ + j, j::nn] = 1.0
        b_eq[np_ + j] = neg[j][1]
    res = optimize.linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise SimplexError(f"transport oracle failed: {res.message}")
    return float(res.fun)


def line_norm(mu: Molecule) -> float:
    """Closed-form norm for molecules on the real line.

    The step function ``g(s) = sum {a_i : s between 0 and t_i, signed}`` is
    the integrable representative of the molecule; its total variation is the
    norm.  Accepts 1-dimensional coordinate molecules and sparse molecules
    supported on the first coordinate.
    """
    coords = []
    for p, a in mu.terms:
        if mu.kind == "l1N":
            if mu.dim != 1:
                raise ValueError("line formula needs 1-dimensional molecules")
            coords.append((p[0], a))
        elif mu.kind == "l1":
            if any(i != 1 for i in p.support):
                raise ValueError("line formula needs support on the first coordinate")
            coords.append((p.coord(1), a))
        else:
            raise ValueError("line formula does not apply to abstract finite spaces")
    if not coords:
        return 0.0
    breaks = sorted({0.0} | {t for t, _ in coords})
    total = 0.0
    for left, right in zip(breaks, breaks[1:]):
        mid = 0.5 * (left + right)
        g = 0.0
        for t, a in coords:
            if 0.0 < mid < t:
                g += a
            elif t < mid < 0.0:
                g -= a
        total += abs(g) * (right - left)
    return total


def molecule_projection(mu: Molecule, n: int) -> Molecule:
    """Push each point's mass onto its tiling-cell corners (the predual step).

    For every term the (clamped, truncated) point is located in the level-n
    tiling and its coefficient is distributed over the cell corners with the
    interpolation weights; corners landing on the origin vanish in
    canonicalization.  By construction pairing any function against the
    result equals pairing its projection against the input.
    """
    if mu.kind == "finite":
        raise ValueError("grid projections act on l1-type molecules only")
    if mu.is_zero:
        return mu
    level = GridLevel(n, dim=None if mu.kind == "l1" else mu.dim)
    if mu.kind == "l1N":
        pts = [np.asarray(p, dtype=float) for p, _ in mu.terms]
    else:
        pts = [p for p, _ in mu.terms]
    low, weights = cell_weights(pts, level)
    dcell = low.shape[1]
    s = 2.0 ** (1 - n)
    bits = (sign_matrix(dcell) + 1.0) * 0.5
    out_terms = []
    for row, (_, a) in enumerate(mu.terms):
        corners = low[row][None, :] + s * bits  # (2**d, d)
        for c in range(corners.shape[0]):
            w = weights[row, c]
            if w == 0.0:
                continue
            if mu.kind == "l1":
                point = FiniteSupportPoint.from_dense(corners[c])
            else:
                point = tuple(corners[c])
            out_terms.append((point, a * w))
    return mu._rebuild(out_terms)


def projection_bound(mu: Molecule, n: int) -> float:
    """Duality transcription of the pointwise decay estimate, unit constant."""
    total = 0.0
    cells = n if mu.kind == "l1" else (mu.dim or 0)
    for p, a in mu.terms:
        tail = p.tail(n) if mu.kind == "l1" else 0.0
        total += abs(a) * 2.0 * (tail + cells * 2.0 ** (1 - n))
    return total


def term_clamped(mu: Molecule, n: int) -> bool:
    """True when some support point is moved by the clamp onto the big cube."""
    half = 2.0 ** (n - 1)
    for p, _ in mu.terms:
        lead = p.leading(n) if mu.kind == "l1" else np.asarray(p, dtype=float)
        if lead.size and float(np.max(np.abs(lead))) > half:
            return True
    return False


@dataclass(frozen=True)
class FddRow:
    n: int
    norm_value: float
    err_value: float
    bound: float
    support_size: int
    clamped: bool
    bound_ok: bool | None


@dataclass(frozen=True)
class FddReport:
    base_norm: float
    rows: tuple[FddRow, ...]
    monotone_ok: bool
    trend_ok: bool
    lattice_ok: bool

    @property
    def passed(self) -> bool:
        return self.monotone_ok and self.trend_ok and self.lattice_ok and all(
            r.bound_ok is not False for r in self.rows
        )

    def to_json(self) -> dict:
        return {
            "base_norm": self.base_norm,
            "rows": [vars(r) | {"bound_ok": r.bound_ok} for r in self.rows],
            "monotone_ok": self.monotone_ok,
            "trend_ok": self.trend_ok,
            "lattice_ok": self.lattice_ok,
            "passed": self.passed,
        }


def decomposition_report(mu: Molecule, n_max: int, norm_tol: float = 1e-7,
                         pair_tol: float = 1e-10) -> FddReport:
    """Per-level diagnostics of the grid projections on one molecule.

    Checks, per level: the projected norm does not exceed the input norm
    (relative ``norm_tol``); the approximation error respects the duality
    bound while no clamp is active; and across levels the projections form a
    commuting lattice (finer following coarser equals coarser, termwise to
    ``pair_tol``).  The error trend check asks the final error not to exceed
    the first.
    """
    base = free_norm(mu).value
    rows = []
    projections = {}
    for n in range(1, n_max + 1):
        proj = molecule_projection(mu, n)
        projections[n] = proj
        norm_value = free_norm(proj).value
        err_value = free_norm(proj.minus(mu)).value
        bound = projection_bound(mu, n)
        clamped = term_clamped(mu, n)
        bound_ok = None if clamped else bool(err_value <= bound + norm_tol * max(1.0, bound))
        rows.append(
            FddRow(
                n=n,
                norm_value=norm_value,
                err_value=err_value,
                bound=bound,
                support_size=len(proj.terms),
                clamped=clamped,
                bound_ok=bound_ok,
            )
        )
    monotone_ok = all(r.norm_value <= base * (1.0 + norm_tol) + norm_tol for r in rows)
    trend_ok = (not rows) or rows[-1].err_value <= rows[0].err_value + norm_tol
    lattice_ok = True
    for m in range(1, n_max + 1):
        for n in range(1, n_max + 1):
            left = molecule_projection(projections[n], m)
            right = projections[min(m, n)]
            if not molecules_close(left, right, tol=pair_tol):
                lattice_ok = False
    return FddReport(
        base_norm=base,
        rows=tuple(rows),
        monotone_ok=monotone_ok,
        trend_ok=trend_ok,
        lattice_ok=lattice_ok,
    )
