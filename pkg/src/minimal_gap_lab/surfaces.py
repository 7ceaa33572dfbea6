"""Immersion catalog, spec parsing, exact jets, adapted frames, and the
second fundamental form with its first covariant derivative.

Immersions are analytic: polynomial in (x, y, z) restricted to the unit
2-sphere chart, or trigonometric polynomials in the torus chart angles.  All
chart derivatives up to order 4 are therefore exact calculus (the only
floating-point ingredient is coefficient rounding); finite differences enter
only one layer up, when the frame construction itself is differentiated for
the covariant gradient of h.

Every array-valued operation is batch-native: chart parameters may be scalars
or arrays of any shape, and all returned fields carry the same leading shape.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from minimal_gap_lab.errors import (
    DomainError,
    FrameError,
    ParseError,
    ValidationError,
)
from minimal_gap_lab.harmonics import unit_immersion_components
from minimal_gap_lab.numdiff import richardson

SPHERE, TORUS = "sphere", "torus"
DEFAULT_POLE_MARGIN = 1e-3
JET_ORDER_MAX = 4

CATALOG_DEGREES = {"equator": 1, "veronese": 2, "calabi3": 3, "calabi4": 4}
CATALOG_NAMES = ("equator", "veronese", "calabi3", "calabi4", "clifford")


# ---------------------------------------------------------------------------
# chart function representations with exact differentiation
# ---------------------------------------------------------------------------

class TrigPoly4:
    """Polynomial in (sin t, cos t, sin p, cos p) with float coefficients.

    Hosts sphere-chart components x = st*cp, y = st*sp, z = ct; formal
    differentiation in the angles is exact calculus on the exponent tuples.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = {e: c for e, c in terms.items() if c != 0.0}

    @classmethod
    def from_xyz(cls, monomials: dict) -> "TrigPoly4":
        terms = {}
        for (i, j, k), coeff in monomials.items():
            key = (i + j, k, j, i)  # st, ct, sp, cp
            terms[key] = terms.get(key, 0.0) + float(coeff)
        return cls(terms)

    def _apply_pair(self, slot_sin, slot_cos):
        out = {}
        for exps, coeff in self.terms.items():
            s, c = exps[slot_sin], exps[slot_cos]
            if s:
                e = list(exps)
                e[slot_sin] -= 1
                e[slot_cos] += 1
                key = tuple(e)
                out[key] = out.get(key, 0.0) + coeff * s
            if c:
                e = list(exps)
                e[slot_cos] -= 1
                e[slot_sin] += 1
                key = tuple(e)
                out[key] = out.get(key, 0.0) - coeff * c
        return TrigPoly4(out)

    def diff_u(self):
        return self._apply_pair(0, 1)

    def diff_v(self):
        return self._apply_pair(2, 3)

    def eval(self, pows):
        """Evaluate on power tables pows[axis][exponent] -> array."""
        total = 0.0
        for (e0, e1, e2, e3), coeff in self.terms.items():
            total = total + coeff * pows[0][e0] * pows[1][e1] * pows[2][e2] * pows[3][e3]
        return total

    def max_exp(self):
        return tuple(max((e[i] for e in self.terms), default=0) for i in range(4))


class TrigSeries:
    """Finite sum of coeff * cos(m u + n v) / sin(m u + n v) terms."""

    __slots__ = ("terms",)
    COS, SIN = 0, 1

    def __init__(self, terms):
        self.terms = [(float(c), int(kind), int(m), int(n)) for c, kind, m, n in terms]

    def _diff(self, freq_slot):
        out = []
        for c, kind, m, n in self.terms:
            f = m if freq_slot == 0 else n
            if f == 0 or c == 0.0:
                continue
            if kind == self.COS:
                out.append((-c * f, self.SIN, m, n))
            else:
                out.append((c * f, self.COS, m, n))
        return TrigSeries(out)

    def diff_u(self):
        return self._diff(0)

    def diff_v(self):
        return self._diff(1)

    def eval(self, U, V):
        total = 0.0
        for c, kind, m, n in self.terms:
            phase = m * U + n * V
            total = total + c * (np.cos(phase) if kind == self.COS else np.sin(phase))
        return total


# ---------------------------------------------------------------------------
# immersion specs and the catalog
# ---------------------------------------------------------------------------

@dataclass
class ImmersionSpec:
    """A validated analytic immersion of a surface into a unit sphere."""

    name: str
    chart: str                      # "sphere" | "torus"
    ambient_dim: int                # components live in R^ambient_dim = R^(N+1)
    euler_char: int
    components: list                # xyz monomial dicts (sphere) or term lists (torus)
    pole_margin: float = DEFAULT_POLE_MARGIN
    _tables: dict = field(default_factory=dict, repr=False)

    @property
    def codim(self) -> int:
        """Codimension q of the surface in S^N, N = ambient_dim - 1."""
        return self.ambient_dim - 3

    def _base_functions(self):
        if self.chart == SPHERE:
            return [TrigPoly4.from_xyz(c) for c in self.components]
        return [TrigSeries(c) for c in self.components]

    def derivative_table(self, order: int):
        """Cached exact chart-derivatives: {(i, j): [per-component function]}."""
        if order > JET_ORDER_MAX:
            raise DomainError(f"jet order {order} exceeds maximum {JET_ORDER_MAX}")
        key = (0, 0)
        if key not in self._tables:
            self._tables[key] = self._base_functions()
        for total in range(1, order + 1):
            for i in range(total, -1, -1):
                j = total - i
                if (i, j) in self._tables:
                    continue
                if i > 0:
                    self._tables[i, j] = [f.diff_u() for f in self._tables[i - 1, j]]
                else:
                    self._tables[i, j] = [f.diff_v() for f in self._tables[i, j - 1]]
        return self._tables


@dataclass
class Jet:
    """Chart-parameter Taylor data of the immersion at one or many points."""

    spec: ImmersionSpec
    u: np.ndarray
    v: np.ndarray
    order: int
    derivs: dict                    # {(i, j): array (..., ambient_dim)}

    def d(self, i: int, j: int) -> np.ndarray:
        return self.derivs[i, j]

    @property
    def position(self) -> np.ndarray:
        return self.derivs[0, 0]


def eval_jet(spec: ImmersionSpec, point, order: int = JET_ORDER_MAX) -> Jet:
    """Exact-calculus jet at chart parameters; no finite differencing here."""
    u0, v0 = point
    u, v = np.broadcast_arrays(np.asarray(u0, dtype=float),
                               np.asarray(v0, dtype=float))
    if spec.chart == SPHERE:
        lo, hi = spec.pole_margin, math.pi - spec.pole_margin
        if np.any(u < lo) or np.any(u > hi):
            worst = float(np.max(np.maximum(lo - u, u - hi)))
            raise DomainError(
                f"{spec.name}: polar angle within {spec.pole_margin:g} of a chart "
                f"pole (margin violated by {worst:g})")
    tables = spec.derivative_table(order)
    derivs = {}
    if spec.chart == SPHERE:
        maxe = 0
        for fs in tables.values():
            for f in fs:
                maxe = max(maxe, *f.max_exp())
        base = [np.sin(u), np.cos(u), np.sin(v), np.cos(v)]
        pows = [[np.ones_like(b)] for b in base]
        for axis, b in enumerate(base):
            for _ in range(maxe):
                pows[axis].append(pows[axis][-1] * b)
        for (i, j), funcs in tables.items():
            if i + j > order:
                continue
            vals = [np.broadcast_to(f.eval(pows), u.shape) for f in funcs]
            derivs[i, j] = np.stack(vals, axis=-1).astype(float)
    else:
        for (i, j), funcs in tables.items():
            if i + j > order:
                continue
            vals = [np.broadcast_to(f.eval(u, v), u.shape) for f in funcs]
            derivs[i, j] = np.stack(vals, axis=-1).astype(float)
    return Jet(spec, u, v, order, derivs)


# -- catalog ------------------------------------------------------------------

def _catalog_sphere_entry(name: str, degree: int) -> ImmersionSpec:
    comps = unit_immersion_components(degree)
    return ImmersionSpec(
        name=name,
        chart=SPHERE,
        ambient_dim=2 * degree + 1,
        euler_char=2,
        components=comps,
    )


def _catalog_clifford() -> ImmersionSpec:
    r = 1.0 / math.sqrt(2.0)
    comps = [
        [(r, TrigSeries.COS, 1, 0)],
        [(r, TrigSeries.SIN, 1, 0)],
        [(r, TrigSeries.COS, 0, 1)],
        [(r, TrigSeries.SIN, 0, 1)],
    ]
    return ImmersionSpec(
        name="clifford",
        chart=TORUS,
        ambient_dim=4,
        euler_char=0,
        components=comps,
    )


def catalog_entry(name: str) -> ImmersionSpec:
    if name == "clifford":
        return _catalog_clifford()
    if name in CATALOG_DEGREES:
        return _catalog_sphere_entry(name, CATALOG_DEGREES[name])
    raise DomainError(f"unknown catalog surface {name!r}; "
                      f"known names: {', '.join(CATALOG_NAMES)}")


# ---------------------------------------------------------------------------
# spec files: parsing, canonical serialization, validation
# ---------------------------------------------------------------------------

def _expect(cond, path, msg):
    if not cond:
        raise ParseError(path, msg)


def _as_number(value, path):
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool),
            path, f"expected number, got {type(value).__name__}")
    return float(value)


def parse_spec_dict(data: dict) -> ImmersionSpec:
    _expect(isinstance(data, dict), "$", "top level must be a key-value object")
    for key in ("name", "chart", "ambient_dim", "euler_char", "components"):
        _expect(key in data, key, "missing required field")
    name = data["name"]
    _expect(isinstance(name, str) and name, "name", "must be a nonempty string")
    chart = data["chart"]
    _expect(chart in (SPHERE, TORUS), "chart", f"must be 'sphere' or 'torus', got {chart!r}")
    ambient = data["ambient_dim"]
    _expect(isinstance(ambient, int) and ambient >= 3, "ambient_dim",
            "must be an integer >= 3")
    euler = data["euler_char"]
    _expect(isinstance(euler, int), "euler_char", "must be an integer")
    comps_raw = data["components"]
    _expect(isinstance(comps_raw, list), "components", "must be an array")
    _expect(len(comps_raw) == ambient, "components",
            f"expected {ambient} component functions, got {len(comps_raw)}")

    comps = []
    for ci, comp in enumerate(comps_raw):
        cpath = f"components[{ci}]"
        _expect(isinstance(comp, list), cpath, "component must be an array of terms")
        if chart == SPHERE:
            mono = {}
            for ti, term in enumerate(comp):
                tpath = f"{cpath}[{ti}]"
                _expect(isinstance(term, dict), tpath, "term must be an object")
                _expect(set(term) == {"coeff", "exps"}, tpath,
                        "term must have exactly the fields coeff, exps")
                coeff = _as_number(term["coeff"], f"{tpath}.coeff")
                exps = term["exps"]
                _expect(isinstance(exps, list) and len(exps) == 3
                        and all(isinstance(e, int) and e >= 0 for e in exps),
                        f"{tpath}.exps", "must be three nonnegative integers")
                key = tuple(exps)
                mono[key] = mono.get(key, 0.0) + coeff
            comps.append(mono)
        else:
            terms = []
            for ti, term in enumerate(comp):
                tpath = f"{cpath}[{ti}]"
                _expect(isinstance(term, dict), tpath, "term must be an object")
                _expect(set(term) == {"coeff", "type", "freq"}, tpath,
                        "term must have exactly the fields coeff, type, freq")
                coeff = _as_number(term["coeff"], f"{tpath}.coeff")
                kind = term["type"]
                _expect(kind in ("cos", "sin"), f"{tpath}.type",
                        f"must be 'cos' or 'sin', got {kind!r}")
                freq = term["freq"]
                _expect(isinstance(freq, list) and len(freq) == 2
                        and all(isinstance(f, int) for f in freq),
                        f"{tpath}.freq", "must be two integers")
                terms.append((coeff, TrigSeries.COS if kind == "cos" else TrigSeries.SIN,
                              freq[0], freq[1]))
            comps.append(terms)
    return ImmersionSpec(name=name, chart=chart, ambient_dim=ambient,
                         euler_char=euler, components=comps)


def parse_spec_text(text: str) -> ImmersionSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", exc.msg) from exc
    return parse_spec_dict(data)


def serialize_spec(spec: ImmersionSpec) -> str:
    """One canonical UTF-8 serialization (sorted terms, 17 significant digits)."""
    comps = []
    for comp in spec.components:
        if spec.chart == SPHERE:
            terms = [{"coeff": float(f"{c:.17g}"), "exps": list(e)}
                     for e, c in sorted(comp.items())]
        else:
            terms = [{"coeff": float(f"{c:.17g}"),
                      "type": "cos" if kind == TrigSeries.COS else "sin",
                      "freq": [m, n]}
                     for c, kind, m, n in comp]
        comps.append(terms)
    doc = {
        "name": spec.name,
        "chart": spec.chart,
        "ambient_dim": spec.ambient_dim,
        "euler_char": spec.euler_char,
        "components": comps,
    }
    return json.dumps(doc, indent=2) + "\n"


def _validation_points(spec, n_u, n_v):
    if spec.chart == SPHERE:
        m = spec.pole_margin + 1e-3
        u = np.linspace(m, math.pi - m, n_u)
        v = np.linspace(0.0, 2 * math.pi, n_v, endpoint=False)
    else:
        u = np.linspace(0.0, 2 * math.pi, n_u, endpoint=False)
        v = np.linspace(0.0, 2 * math.pi, n_v, endpoint=False)
    return np.meshgrid(u, v, indexing="ij")


def validate_spec(spec: ImmersionSpec,
                  unit_tol: float = 1e-12,
                  minimality_tol: float = 1e-8,
                  unit_grid=(64, 64),
                  minimality_grid=(8, 12)) -> dict:
    """Check |X| = 1 and |H| = 0 on validation grids; reject on failure."""
    U, V = _validation_points(spec, *unit_grid)
    jet = eval_jet(spec, (U, V), order=0)
    unit_residual = float(np.max(np.abs(
        np.einsum("...c,...c->...", jet.position, jet.position) - 1.0)))
    if unit_residual > unit_tol:
        raise ValidationError(
            f"{spec.name}: image not on the unit sphere "
            f"(max ||X|^2 - 1| = {unit_residual:.3e} > {unit_tol:g})")

    U, V = _validation_points(spec, *minimality_grid)
    jet = eval_jet(spec, (U, V), order=2)
    frame = adapted_frame(jet)
    sp = second_fundamental_form(jet, frame)
    minimality_residual = float(np.max(sp.minimality_residual))
    if minimality_residual > minimality_tol:
        raise ValidationError(
            f"{spec.name}: immersion is not minimal "
            f"(max |H| residual = {minimality_residual:.3e} > {minimality_tol:g})")
    return {"unit_residual": unit_residual, "minimality_residual": minimality_residual}


def load_immersion(source, validate: bool = True) -> ImmersionSpec:
    """Load by catalog name or from a spec file path."""
    if isinstance(source, (str, Path)) and str(source) in CATALOG_NAMES:
        spec = catalog_entry(str(source))
    else:
        path = Path(source)
        if not path.exists():
            raise ParseError(str(source),
                             "not a catalog name and no such spec file")
        spec = parse_spec_text(path.read_text(encoding="utf-8"))
    if validate:
        validate_spec(spec)
    return spec


# ---------------------------------------------------------------------------
# adapted frames
# ---------------------------------------------------------------------------

@dataclass
class FrameData:
    """Adapted orthonormal frame {X, e1, e2, xi_1..xi_q} plus connection data.

    `chart_to_frame` is the 2x2 matrix L with e_i = L[i, c] d_c X; `omega12`
    holds the Levi-Civita coefficients omega_12(e_k) and `omega_normal[k, b, a]`
    the normal connection <D_{e_k} xi_b, xi_a>, both exact from the jets.
    """

    X: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    xi: np.ndarray                  # (..., q, C)
    chart_to_frame: np.ndarray      # (..., 2, 2)
    metric: np.ndarray              # (..., 2, 2)
    sqrt_det_g: np.ndarray
    pivot_idx: np.ndarray           # (..., q) ambient axes used for the normals
    omega12: np.ndarray | None = None         # (..., 2)
    omega_normal: np.ndarray | None = None    # (..., 2, q, q)
    # chart derivatives of the frame fields, for downstream exact use
    d_e1: np.ndarray | None = None          # (..., 2, C)
    d_e2: np.ndarray | None = None
    d_xi: np.ndarray | None = None          # (..., q, 2, C)


def _dot(x, y):
    return np.einsum("...c,...c->...", x, y)


def _normal_frame(X, e1, e2, q, pivot_idx=None,
                  dX=None, d_e1=None, d_e2=None):
    """Deterministic pivoted orthonormalization of the ambient complement.

    With derivative arguments given (each (..., 2, C)), the chart derivatives
    of the normal vectors are propagated exactly through the construction.
    The pivot order may be frozen by passing `pivot_idx` so the frame field
    stays smooth across a finite-difference stencil.
    """
    lead = X.shape[:-1]
    C = X.shape[-1]
    with_d = dX is not None
    basis = [X, e1, e2]
    dbasis = [dX, d_e1, d_e2] if with_d else None
    chosen = np.zeros(lead + (q,), dtype=np.int64)
    xi = np.zeros(lead + (q, C))
    dxi = np.zeros(lead + (q, 2, C)) if with_d else None
    used = np.zeros(lead + (C,), dtype=bool)

    for slot in range(q):
        if pivot_idx is None:
            # residual^2 of axis k against the current orthonormal basis
            proj2 = sum(b[..., :] ** 2 for b in basis)
            resid2 = 1.0 - proj2
            resid2 = np.where(used, -np.inf, resid2)
            k = np.argmax(resid2, axis=-1)
        else:
            k = np.asarray(pivot_idx)[..., slot]
        chosen[..., slot] = k
        np.put_along_axis(used, k[..., None], True, axis=-1)

        onehot = np.zeros(lead + (C,))
        np.put_along_axis(onehot, k[..., None], 1.0, axis=-1)
        v = onehot.copy()
        dv = np.zeros(lead + (2, C)) if with_d else None
        for idx, b in enumerate(basis):
            coef = np.take_along_axis(b, k[..., None], axis=-1)[..., 0]
            v = v - coef[..., None] * b
            if with_d:
                db = dbasis[idx]
                dcoef = np.take_along_axis(db, k[..., None, None], axis=-1)[..., 0]
                dv = dv - dcoef[..., None] * b[..., None, :] \
                       - coef[..., None, None] * db
        norm = np.sqrt(_dot(v, v))
        if np.any(norm < 1e-8):
            raise FrameError("normal-frame orthonormalization degenerated")
        vn = v / norm[..., None]
        xi[..., slot, :] = vn
        basis.append(vn)
        if with_d:
            vdv = np.einsum("...c,...kc->...k", v, dv)
            dvn = dv / norm[..., None, None] \
                - v[..., None, :] * (vdv / norm[..., None] ** 3)[..., None]
            dxi[..., slot, :, :] = dvn
            dbasis.append(dvn)
    return xi, chosen, dxi


def adapted_frame(jet: Jet, pivot_idx=None, rotate_tangent: float = 0.0) -> FrameData:
    """Orthonormal adapted frame from a jet of order >= 1.

    Connection coefficients (omega12, omega_normal) and frame derivatives are
    filled when the jet has order >= 2; they are exact, obtained by
    differentiating the frame construction in closed form with the pivot
    order frozen.
    """
    if jet.order < 1:
        raise DomainError("adapted_frame needs a jet of order >= 1")
    X = jet.d(0, 0)
    Xu, Xv = jet.d(1, 0), jet.d(0, 1)
    q = jet.spec.codim

    E = _dot(Xu, Xu)
    F = _dot(Xu, Xv)
    G = _dot(Xv, Xv)
    detg = E * G - F * F
    if np.any(detg <= 1e-14):
        raise FrameError("chart basis degenerate (metric determinant <= 1e-14)")

    sqrtE = np.sqrt(E)
    e1 = Xu / sqrtE[..., None]
    proj = F / sqrtE                      # <Xv, e1>
    w = Xv - proj[..., None] * e1
    nw = np.sqrt(np.maximum(_dot(w, w), 0.0))
    e2 = w / nw[..., None]

    lead = X.shape[:-1]
    L = np.zeros(lead + (2, 2))
    L[..., 0, 0] = 1.0 / sqrtE
    L[..., 1, 0] = -F / (E * nw)
    L[..., 1, 1] = 1.0 / nw

    with_d = jet.order >= 2
    d_e1 = d_e2 = d_xi = omega12 = omega_normal = None
    dX = None
    if with_d:
        Xuu, Xuv, Xvv = jet.d(2, 0), jet.d(1, 1), jet.d(0, 2)
        dXu = np.stack([Xuu, Xuv], axis=-2)     # (..., 2, C): d_c Xu
        dXv = np.stack([Xuv, Xvv], axis=-2)
        dX = np.stack([Xu, Xv], axis=-2)

        dE = 2.0 * np.einsum("...kc,...c->...k", dXu, Xu)
        d_e1 = dXu / sqrtE[..., None, None] \
            - Xu[..., None, :] * (dE / (2.0 * E * sqrtE)[..., None])[..., None]
        dproj = np.einsum("...kc,...c->...k", dXv, e1) \
            + np.einsum("...c,...kc->...k", Xv, d_e1)
        dw = dXv - dproj[..., None] * e1[..., None, :] \
            - proj[..., None, None] * d_e1
        dnw = np.einsum("...c,...kc->...k", w, dw) / nw[..., None]
        d_e2 = dw / nw[..., None, None] \
            - w[..., None, :] * (dnw / nw[..., None] ** 2)[..., None]

    if rotate_tangent:
        ct, st = math.cos(rotate_tangent), math.sin(rotate_tangent)
        e1, e2 = ct * e1 + st * e2, -st * e1 + ct * e2
        rot = np.array([[ct, st], [-st, ct]])
        L = np.einsum("ij,...jc->...ic", rot, L)
        if with_d:
            d_e1, d_e2 = ct * d_e1 + st * d_e2, -st * d_e1 + ct * d_e2

    xi, chosen, d_xi = _normal_frame(
        X, e1, e2, q, pivot_idx=pivot_idx,
        dX=dX if with_d else None, d_e1=d_e1, d_e2=d_e2)

    if with_d:
        # chart-direction coefficients, then convert to frame directions
        omega12_chart = np.einsum("...kc,...c->...k", d_e1, e2)
        omega12 = np.einsum("...ik,...k->...i", L, omega12_chart)
        om_chart = np.einsum("...bkc,...ac->...kba", d_xi, xi)
        omega_normal = np.einsum("...ik,...kba->...iba", L, om_chart)
        # exact skew-symmetry of the connection of an orthonormal frame
        omega_normal = 0.5 * (omega_normal - np.swapaxes(omega_normal, -1, -2))

    metric = np.zeros(lead + (2, 2))
    metric[..., 0, 0] = E
    metric[..., 0, 1] = metric[..., 1, 0] = F
    metric[..., 1, 1] = G
    return FrameData(
        X=X, e1=e1, e2=e2, xi=xi, chart_to_frame=L, metric=metric,
        sqrt_det_g=np.sqrt(detg), pivot_idx=chosen,
        omega12=omega12, omega_normal=omega_normal,
        d_e1=d_e1, d_e2=d_e2, d_xi=d_xi,
    )


# ---------------------------------------------------------------------------
# second fundamental form and its covariant gradient
# ---------------------------------------------------------------------------

@dataclass
class ShapePair:
    """a = (h_11^alpha), b = (h_12^alpha) in the adapted frame."""

    a: np.ndarray                  # (..., q)
    b: np.ndarray                  # (..., q)
    minimality_residual: np.ndarray

    @property
    def h(self) -> np.ndarray:
        """Full component array h[..., i, j, alpha] (traceless symmetric)."""
        lead = self.a.shape[:-1]
        q = self.a.shape[-1]
        out = np.empty(lead + (2, 2, q))
        out[..., 0, 0, :] = self.a
        out[..., 0, 1, :] = out[..., 1, 0, :] = self.b
        out[..., 1, 1, :] = -self.a
        return out


def _h_components(jet: Jet, frame: FrameData) -> np.ndarray:
    """h[..., i, j, alpha] = <D^2 X (e_i, e_j), xi_alpha> from exact jets."""
    Xuu, Xuv, Xvv = jet.d(2, 0), jet.d(1, 1), jet.d(0, 2)
    lead = Xuu.shape[:-1]
    T = np.empty(lead + (2, 2) + Xuu.shape[-1:])
    T[..., 0, 0, :] = Xuu
    T[..., 0, 1, :] = T[..., 1, 0, :] = Xuv
    T[..., 1, 1, :] = Xvv
    normal_part = np.einsum("...cdx,...qx->...cdq", T, frame.xi)
    L = frame.chart_to_frame
    return np.einsum("...ic,...jd,...cdq->...ijq", L, L, normal_part)


def second_fundamental_form(jet: Jet, frame: FrameData) -> ShapePair:
    if jet.order < 2:
        raise DomainError("second fundamental form needs a jet of order >= 2")
    h = _h_components(jet, frame)
    residual = np.max(np.abs(h[..., 0, 0, :] + h[..., 1, 1, :]), axis=-1) \
        if h.shape[-1] else np.zeros(h.shape[:-3])
    return ShapePair(a=h[..., 0, 0, :], b=h[..., 0, 1, :],
                     minimality_residual=residual)


@dataclass
class CovariantGradH:
    """First covariant derivative of h: a1 = (h_111^alpha), a2 = (h_112^alpha)."""

    a1: np.ndarray                 # (..., q)
    a2: np.ndarray
    grad3: np.ndarray              # (..., 2, 2, 2, q) all components h_ijk
    b1_direct: np.ndarray          # sum_ijk |h_ijk|^2
    codazzi_residual: np.ndarray
    sym_residual: np.ndarray       # includes differentiated-trace residual
    fd_disagreement: np.ndarray    # Richardson accuracy guard


CODAZZI_TOL = 1e-6


def covariant_grad_h(spec: ImmersionSpec, point, step: float = 1e-4,
                     refinements: int = 2) -> CovariantGradH:
    """Assemble h_ijk from Richardson-extrapolated chart derivatives of the
    gauge-frozen frame construction plus connection correction terms.

    `step` is the finest sample spacing; the Richardson table descends to it.
    """
    step = step * 2 ** refinements
    base_jet = eval_jet(spec, point, order=2)
    base = adapted_frame(base_jet)
    h0 = _h_components(base_jet, base)
    q = spec.codim
    lead = base.X.shape[:-1]
    u, v = base_jet.u, base_jet.v

    def fields_at(du, dv):
        jet = eval_jet(spec, (u + du, v + dv), order=2)
        fr = adapted_frame(jet, pivot_idx=base.pivot_idx)
        return _h_components(jet, fr), fr.e1, fr.e2, fr.xi

    steps = [step / 2 ** k for k in range(refinements + 1)]
    d_h = np.zeros(lead + (2, 2, 2, q))       # [c, i, j, alpha]
    d_e = {}
    d_xi = np.zeros(lead + (2, q) + base.X.shape[-1:])
    disagreement = np.zeros(lead)
    for c in (0, 1):
        plus, minus = [], []
        for hstep in steps:
            off = (hstep, 0.0) if c == 0 else (0.0, hstep)
            plus.append(fields_at(*off))
            minus.append(fields_at(-off[0], -off[1]))
        for slot in range(4):
            ests = [(p[slot] - m[slot]) / (2 * hstep)
                    for p, m, hstep in zip(plus, minus, steps)]
            val, gap = richardson(ests)
            extra_axes = tuple(range(len(lead), gap.ndim))
            gmax = np.max(np.abs(gap), axis=extra_axes, initial=0.0) \
                if extra_axes else np.abs(gap)
            disagreement = np.maximum(disagreement, gmax)
            if slot == 0:
                d_h[..., c, :, :, :] = val
            elif slot in (1, 2):
                d_e[c, slot] = val
            else:
                d_xi[..., c, :, :] = val

    L = base.chart_to_frame
    # tangential connection omega_t[k, m, i] = <D_{e_k} e_m, e_i>
    d_e1 = np.stack([d_e[0, 1], d_e[1, 1]], axis=-2)   # (..., c, C)
    d_e2 = np.stack([d_e[0, 2], d_e[1, 2]], axis=-2)
    de = np.stack([d_e1, d_e2], axis=-3)               # (..., m, c, C)
    ee = np.stack([base.e1, base.e2], axis=-2)         # (..., i, C)
    omega_chart = np.einsum("...mkc,...ic->...kmi", de, ee)
    omega_t = np.einsum("...lk,...kmi->...lmi", L, omega_chart)
    omega_t = 0.5 * (omega_t - np.swapaxes(omega_t, -1, -2))

    om_chart = np.einsum("...cbx,...ax->...cba", d_xi, base.xi)
    omega_n = np.einsum("...lc,...cba->...lba", L, om_chart)
    omega_n = 0.5 * (omega_n - np.swapaxes(omega_n, -1, -2))

    ekh = np.einsum("...kc,...cija->...ijka", L, d_h)
    grad3 = (
        ekh
        + np.einsum("...mja,...kmi->...ijka", h0, omega_t)
        + np.einsum("...ima,...kmj->...ijka", h0, omega_t)
        + np.einsum("...ijb,...kba->...ijka", h0, omega_n)
    )

    if q:
        codazzi = np.maximum(
            np.max(np.abs(grad3 - np.swapaxes(grad3, -4, -2)), axis=(-4, -3, -2, -1)),
            np.max(np.abs(grad3 - np.swapaxes(grad3, -3, -2)), axis=(-4, -3, -2, -1)),
        )
        trace_res = np.max(
            np.abs(grad3[..., 0, 0, :, :] + grad3[..., 1, 1, :, :]), axis=(-2, -1))
    else:
        codazzi = np.zeros(lead)
        trace_res = np.zeros(lead)
    b1_direct = np.einsum("...ijka,...ijka->...", grad3, grad3)
    return CovariantGradH(
        a1=grad3[..., 0, 0, 0, :],
        a2=grad3[..., 0, 0, 1, :],
        grad3=grad3,
        b1_direct=b1_direct,
        codazzi_residual=codazzi,
        sym_residual=np.maximum(codazzi, trace_res),
        fd_disagreement=disagreement,
    )


# ---------------------------------------------------------------------------
# frame-free scalar fields (fast paths used by the Laplacian stencils)
# ---------------------------------------------------------------------------

def second_norm_field(spec: ImmersionSpec, u, v) -> np.ndarray:
    """S = |h|^2 without constructing a normal frame (gauge-free route)."""
    jet = eval_jet(spec, (u, v), order=2)
    X = jet.d(0, 0)
    Xc = np.stack([jet.d(1, 0), jet.d(0, 1)], axis=-2)       # (..., c, C)
    T = np.stack([
        np.stack([jet.d(2, 0), jet.d(1, 1)], axis=-2),
        np.stack([jet.d(1, 1), jet.d(0, 2)], axis=-2),
    ], axis=-3)                                              # (..., c, d, C)
    g = np.einsum("...cx,...dx->...cd", Xc, Xc)
    ginv = np.linalg.inv(g)
    # project out position and tangential parts
    t_coeff = np.einsum("...cdx,...ex->...cde", T, Xc)       # <X_cd, X_e>
    K = (T
         - np.einsum("...cdx,...x->...cd", T, X)[..., None] * X[..., None, None, :]
         - np.einsum("...cde,...ef,...fx->...cdx", t_coeff, ginv, Xc))
    return np.einsum("...ik,...jl,...ijx,...klx->...", ginv, ginv, K, K)
