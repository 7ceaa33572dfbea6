"""Pointwise scalar invariants of the second fundamental form.

Every quantity the theorems consume is computed here from a ShapePair, with
an independent second route wherever one exists: the squared commutator sum
vs its closed form, the closed-form eigenvalues vs a dense symmetric
eigensolver, and the Simons-identity route to B1 vs the direct third-order
norm.  Route disagreements are recorded as residuals, never hidden.

The eigenvalue gap is evaluated as sqrt((|a|^2-|b|^2)^2 + 4<a,b>^2), which is
free of the catastrophic cancellation that the equivalent sqrt(S^2 - rho0)
suffers near the DDVV equality case; S^2 - rho0 itself is kept only as the
reported DDVV slack.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dc_fields

import numpy as np

from minimal_gap_lab.errors import InvariantViolation
from minimal_gap_lab.numdiff import (
    first_derivative,
    mixed_derivative,
    second_derivative,
)
from minimal_gap_lab.surfaces import (
    ImmersionSpec,
    ShapePair,
    covariant_grad_h,
    eval_jet,
    second_norm_field,
)

S_EPS = 1e-12                 # below this, the surface point is totally geodesic
DDVV_SLACK_TOL = -1e-10       # slack may be this negative from rounding only
LAPLACE_STEP = 1e-3           # finest sample spacing; refinements descend to it
LAPLACE_DISAGREE_TOL = 1e-4
B1_CROSS_TOL = 1e-4


@dataclass
class FundamentalMatrix:
    """The q x q Gram matrix of shape operators, by both displayed routes."""

    matrix: np.ndarray            # (..., q, q) outer-product form
    gram_residual: np.ndarray     # max |outer form - <S_alpha, S_beta>| entrywise

    @property
    def trace(self) -> np.ndarray:
        return np.einsum("...aa->...", self.matrix)


def shape_operators(sp: ShapePair) -> np.ndarray:
    """S_alpha as a stack of symmetric traceless 2x2 matrices (..., q, 2, 2)."""
    lead = sp.a.shape[:-1]
    q = sp.a.shape[-1]
    out = np.empty(lead + (q, 2, 2))
    out[..., 0, 0] = sp.a
    out[..., 0, 1] = out[..., 1, 0] = sp.b
    out[..., 1, 1] = -sp.a
    return out


def fundamental_matrix(sp: ShapePair) -> FundamentalMatrix:
    outer = 2.0 * (np.einsum("...a,...b->...ab", sp.a, sp.a)
                   + np.einsum("...a,...b->...ab", sp.b, sp.b))
    ops = shape_operators(sp)
    gram = np.einsum("...aij,...bij->...ab", ops, ops)
    lead = sp.a.shape[:-1]
    residual = np.max(np.abs(outer - gram), axis=(-2, -1), initial=0.0) \
        if sp.a.shape[-1] else np.zeros(lead)
    return FundamentalMatrix(matrix=outer, gram_residual=residual)


@dataclass
class PointInvariants:
    """All pointwise scalars, plus the cross-route residuals."""

    S: np.ndarray
    normA2: np.ndarray
    rho0: np.ndarray              # closed form (primary route)
    rho_perp: np.ndarray          # sqrt(rho0)/2
    lambda1: np.ndarray
    lambda2: np.ndarray
    u: np.ndarray                 # S + lambda2
    t: np.ndarray                 # pinching parameter in [0, 1]
    K: np.ndarray                 # Gauss curvature (2 - S)/2
    ddvv_slack: np.ndarray        # S^2 - rho0 >= 0 (DDVV)
    hopf_re: np.ndarray           # |a|^2 - |b|^2
    hopf_im: np.ndarray           # -2 <a, b>
    rho0_commutator_residual: np.ndarray
    eig_residual: np.ndarray      # closed form vs dense eigensolver
    eig_tail: np.ndarray          # max |lambda_3..q| from the eigensolver
    gram_residual: np.ndarray
    minimality_residual: np.ndarray

    def summary_fields(self):
        return [f.name for f in dc_fields(self)]


def point_invariants(sp: ShapePair, eig_check: bool = True) -> PointInvariants:
    a, b = sp.a, sp.b
    lead = a.shape[:-1]
    q = a.shape[-1]
    na = np.einsum("...a,...a->...", a, a)
    nb = np.einsum("...a,...a->...", b, b)
    ab = np.einsum("...a,...a->...", a, b)

    S = 2.0 * (na + nb)
    normA2 = 4.0 * na ** 2 + 4.0 * nb ** 2 + 8.0 * ab ** 2
    rho0 = 16.0 * (na * nb - ab ** 2)

    # independent route: sum of squared commutator norms over ordered pairs
    ops = shape_operators(sp)
    comm = (np.einsum("...aij,...bjk->...abik", ops, ops)
            - np.einsum("...bij,...ajk->...abik", ops, ops))
    rho0_comm = np.einsum("...abik,...abik->...", comm, comm)
    rho0_residual = np.abs(rho0 - rho0_comm)

    slack = S ** 2 - rho0
    bad = slack < DDVV_SLACK_TOL * np.maximum(1.0, S ** 2)
    if np.any(bad):
        worst = float(np.min(slack[bad] if lead else slack))
        raise InvariantViolation(
            f"DDVV slack S^2 - rho0 = {worst:.3e} below tolerance; "
            "the inequality is a theorem, so this is a computation bug")

    # half the eigenvalue gap, cancellation-free
    d = np.sqrt((na - nb) ** 2 + 4.0 * ab ** 2)
    lambda1 = S / 2.0 + d
    lambda2 = S / 2.0 - d
    u = S + lambda2
    geodesic = S < S_EPS
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(geodesic, 1.0, 2.0 * d / np.where(geodesic, 1.0, S))
    t = np.clip(t, 0.0, 1.0)

    fm = fundamental_matrix(sp)
    if eig_check and q:
        lam = np.linalg.eigvalsh(fm.matrix)        # ascending
        top = lam[..., ::-1][..., :2] if q >= 2 else None
        if q == 1:
            eig_residual = np.abs(lambda1 - lam[..., 0]) + np.abs(lambda2)
            eig_tail = np.zeros(lead)
        else:
            eig_residual = (np.abs(lambda1 - top[..., 0])
                            + np.abs(lambda2 - top[..., 1]))
            eig_tail = np.max(np.abs(lam[..., : q - 2]), axis=-1, initial=0.0)
    else:
        eig_residual = np.zeros(lead)
        eig_tail = np.zeros(lead)

    return PointInvariants(
        S=S, normA2=normA2, rho0=rho0, rho_perp=np.sqrt(np.maximum(rho0, 0.0)) / 2.0,
        lambda1=lambda1, lambda2=lambda2, u=u, t=t, K=(2.0 - S) / 2.0,
        ddvv_slack=slack, hopf_re=na - nb, hopf_im=-2.0 * ab,
        rho0_commutator_residual=rho0_residual,
        eig_residual=eig_residual, eig_tail=eig_tail,
        gram_residual=fm.gram_residual,
        minimality_residual=sp.minimality_residual,
    )


# ---------------------------------------------------------------------------
# Laplace-Beltrami of scalar fields and the Simons route to B1
# ---------------------------------------------------------------------------

def _metric_christoffel(spec: ImmersionSpec, u, v):
    """Inverse metric and Christoffel symbols, exact from order-2 jets."""
    jet = eval_jet(spec, (u, v), order=2)
    Xc = np.stack([jet.d(1, 0), jet.d(0, 1)], axis=-2)
    second = {(0, 0): jet.d(2, 0), (0, 1): jet.d(1, 1),
              (1, 0): jet.d(1, 1), (1, 1): jet.d(0, 2)}
    g = np.einsum("...cx,...dx->...cd", Xc, Xc)
    ginv = np.linalg.inv(g)
    lead = g.shape[:-2]
    dg = np.empty(lead + (2, 2, 2))    # dg[e, c, d] = d_e g_cd
    for e in (0, 1):
        for c in (0, 1):
            for d in (0, 1):
                dg[..., e, c, d] = (
                    np.einsum("...x,...x->...", second[e, c], Xc[..., d, :])
                    + np.einsum("...x,...x->...", Xc[..., c, :], second[e, d]))
    # T[c, d, f] = d_c g_fd + d_d g_fc - d_f g_cd, using the c<->d symmetry
    # of dg's trailing axes
    T = dg + np.moveaxis(dg, -3, -2) - np.moveaxis(dg, -3, -1)
    gamma = 0.5 * np.einsum("...ef,...cdf->...ecd", ginv, T)
    return ginv, gamma


def laplace_beltrami(spec: ImmersionSpec, scalar_field, u, v,
                     step: float = LAPLACE_STEP, refinements: int = 2):
    """Chart Laplace-Beltrami of a scalar field at (u, v).

    Metric terms and Christoffel symbols come exactly from jets; only the
    field derivatives are Richardson-extrapolated central differences, with
    `step` the finest sample spacing (the table starts at step * 2^refinements
    and halves down to it, which keeps roundoff amplification at the 1/step^2
    of the nominal step rather than of a finer one).
    Returns (laplacian, fd_disagreement).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    step = step * 2 ** refinements
    ginv, gamma = _metric_christoffel(spec, u, v)

    d1 = np.empty(u.shape + (2,))
    d2 = np.empty(u.shape + (2, 2))
    disagree = np.zeros(u.shape)

    du_first, gap = first_derivative(lambda h: scalar_field(u + h, v), step,
                                     refinements)
    d1[..., 0] = du_first
    disagree = np.maximum(disagree, gap)
    dv_first, gap = first_derivative(lambda h: scalar_field(u, v + h), step,
                                     refinements)
    d1[..., 1] = dv_first
    disagree = np.maximum(disagree, gap)

    duu, gap = second_derivative(lambda h: scalar_field(u + h, v), step,
                                 refinements)
    d2[..., 0, 0] = duu
    disagree = np.maximum(disagree, gap)
    dvv, gap = second_derivative(lambda h: scalar_field(u, v + h), step,
                                 refinements)
    d2[..., 1, 1] = dvv
    disagree = np.maximum(disagree, gap)
    duv, gap = mixed_derivative(lambda hu, hv: scalar_field(u + hu, v + hv),
                                step, refinements)
    d2[..., 0, 1] = d2[..., 1, 0] = duv
    disagree = np.maximum(disagree, gap)

    lap = (np.einsum("...cd,...cd->...", ginv, d2)
           - np.einsum("...cd,...ecd,...e->...", ginv, gamma, d1))
    return lap, disagree


@dataclass
class SimonsB1:
    """B1 recovered from the Simons identity, with its accuracy guard."""

    b1: np.ndarray
    laplacian_S: np.ndarray
    fd_disagreement: np.ndarray
    trusted: np.ndarray            # disagreement below tolerance


def b1_simons(spec: ImmersionSpec, point, invariants: PointInvariants | None = None,
              step: float = LAPLACE_STEP) -> SimonsB1:
    """B1 = (1/2) Lap S - 2 S + |A|^2 + rho0 via the chart Laplacian of S."""
    u = np.asarray(point[0], dtype=float)
    v = np.asarray(point[1], dtype=float)
    if invariants is None:
        from minimal_gap_lab.surfaces import adapted_frame, second_fundamental_form

        jet = eval_jet(spec, (u, v), order=2)
        sp = second_fundamental_form(jet, adapted_frame(jet))
        invariants = point_invariants(sp, eig_check=False)
    lap, disagree = laplace_beltrami(
        spec, lambda uu, vv: second_norm_field(spec, uu, vv), u, v, step=step)
    b1 = 0.5 * lap - 2.0 * invariants.S + invariants.normA2 + invariants.rho0
    return SimonsB1(b1=b1, laplacian_S=lap, fd_disagreement=disagree,
                    trusted=disagree <= LAPLACE_DISAGREE_TOL)


def b1_cross_check(spec: ImmersionSpec, point) -> np.ndarray:
    """|B1(Simons route) - 4(|a1|^2 + |a2|^2)|; threshold B1_CROSS_TOL."""
    grad = covariant_grad_h(spec, point)
    direct = 4.0 * (np.einsum("...a,...a->...", grad.a1, grad.a1)
                    + np.einsum("...a,...a->...", grad.a2, grad.a2))
    simons = b1_simons(spec, point)
    return np.abs(simons.b1 - direct)
