"""Fundamental forms, discriminants and curvatures of conformally
parametrized surfaces in superspace."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gauss import gq
from .expr import Expr, ONE_EXPR, ZERO_EXPR
from .frames import FrameData, SuperMatrix

HALF = gq(Fraction(1, 2))


class SingularMetric(Exception):
    pass


@dataclass(frozen=True)
class QuadForm:
    """cpp d+^2 + cpm d+ d- + cmm d-^2."""

    cpp: Expr
    cpm: Expr
    cmm: Expr

    def is_zero(self) -> bool:
        return not (self.cpp or self.cpm or self.cmm)


@dataclass(frozen=True)
class FramePair:
    R: SuperMatrix
    S: SuperMatrix


@dataclass(frozen=True)
class CurvatureReport:
    K: Expr              # b / g
    K_det: Expr          # det(S R^-1)
    Hmean: Expr          # (1/2) tr(S R^-1)
    g_disc: Expr
    b_disc: Expr
    inverse_ok: bool

    @property
    def consistent(self) -> bool:
        return self.K == self.K_det


def metric_blocks(fd: FrameData):
    """(g11, g12, g22) and (b11, b12, b22)."""
    h = fd.exp_phi(1).scale(HALF)
    g = (ZERO_EXPR, h, ZERO_EXPR)
    b = (fd.Qp, (fd.exp_phi(1) * fd.H).scale(HALF), fd.Qm)
    return g, b


def frame_pair(fd: FrameData) -> FramePair:
    (g11, g12, g22), (b11, b12, b22) = metric_blocks(fd)
    R = SuperMatrix([[g11, g12], [-g12, g22]])
    S = SuperMatrix([[b11, b12], [-b12, b22]])
    return FramePair(R, S)


def first_form(fd: FrameData) -> QuadForm:
    (g11, g12, g22), _ = metric_blocks(fd)
    return QuadForm(fd.f * g11, (fd.f * g12).scale(2), fd.f * g22)


def second_form(fd: FrameData) -> QuadForm:
    _, (b11, b12, b22) = metric_blocks(fd)
    return QuadForm(fd.f * b11, (fd.f * b12).scale(2), fd.f * b22)


def discriminants(fd: FrameData):
    (g11, g12, g22), (b11, b12, b22) = metric_blocks(fd)
    return g11 * g22 + g12 * g12, b11 * b22 + b12 * b12


def _det2(M: SuperMatrix) -> Expr:
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


def metric_inverse(fd: FrameData) -> SuperMatrix:
    """Contravariant metric g^{ij} with (g_ji)(g^ji) = 1, as the matrix
    [[g^11, g^21], [g^12, g^22]].

    The covariant metric is off-diagonal, g12 = g21 = e^phi/2, so the inverse
    is off-diagonal with g^12 = g^21 = 2 e^-phi.
    """
    (g11, g12, g22), _ = metric_blocks(fd)
    if g11 or g22:
        raise SingularMetric("only conformal metrics are supported")
    inv = fd.exp_phi(-1).scale(2)
    G = SuperMatrix([[g11, g12], [g12, g22]])
    Ginv = SuperMatrix([[ZERO_EXPR, inv], [inv, ZERO_EXPR]])
    if G @ Ginv != SuperMatrix.identity(2):
        raise SingularMetric("e^phi is not invertible for this data")
    return Ginv


def r_inverse(fd: FrameData) -> SuperMatrix:
    """R^-1 built from the contravariant metric: R = g12 [[0,1],[-1,0]]."""
    Ginv = metric_inverse(fd)
    g = Ginv[0, 1]
    Rinv = SuperMatrix([[ZERO_EXPR, -g], [g, ZERO_EXPR]])
    R = frame_pair(fd).R
    if R @ Rinv != SuperMatrix.identity(2):
        raise SingularMetric("R is not invertible")
    return Rinv


def shape_operator(fd: FrameData) -> SuperMatrix:
    return frame_pair(fd).S @ r_inverse(fd)


def gaussian_curvature(fd: FrameData) -> Expr:
    """K = b / g."""
    return k_from_discriminants(fd)


def mean_curvature(fd: FrameData) -> Expr:
    return shape_operator(fd).trace().scale(HALF)


def curvature_report(fd: FrameData) -> CurvatureReport:
    g, b = discriminants(fd)
    W = shape_operator(fd)
    return CurvatureReport(
        K=gaussian_curvature(fd),
        K_det=_det2(W),
        Hmean=W.trace().scale(HALF),
        g_disc=g,
        b_disc=b,
        inverse_ok=True,
    )


def k_from_discriminants(fd: FrameData) -> Expr:
    """b / g, using 1/g = 4 e^{-2 phi}."""
    g, b = discriminants(fd)
    ginv = (fd.exp_phi(-1) * fd.exp_phi(-1)).scale(4)
    if (g * ginv) != ONE_EXPR:
        raise SingularMetric("discriminant g is not invertible")
    return b * ginv
