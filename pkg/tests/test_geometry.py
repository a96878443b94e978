from fractions import Fraction

import pytest

from supergc import frames as Fr
from supergc import geometry as G
from supergc.expr import Expr, const_atom
from supergc.gauss import gq


@pytest.fixture
def fd():
    return Fr.FrameData()


def test_discriminants(fd):
    g, b = G.discriminants(fd)
    assert g == (fd.exp_phi(1) * fd.exp_phi(1)).scale(gq(Fraction(1, 4)))
    assert b == fd.Qp * fd.Qm


def test_curvature_two_ways(fd):
    rep = G.curvature_report(fd)
    assert rep.K == (fd.exp_phi(-1) * fd.exp_phi(-1) * fd.Qp * fd.Qm).scale(4)
    assert rep.consistent
    assert rep.Hmean == fd.H


def test_metric_inverse(fd):
    Ginv = G.metric_inverse(fd)
    assert Ginv[0, 1] == fd.exp_phi(-1).scale(2)
    R = G.frame_pair(fd).R
    assert R @ G.r_inverse(fd) == Fr.SuperMatrix.identity(2)


def test_forms(fd):
    I = G.first_form(fd)
    II = G.second_form(fd)
    assert I.cpp == Expr.const(0) and I.cpm == fd.f * fd.exp_phi(1)
    assert II.cpp == fd.f * fd.Qp
    assert II.cpm == fd.f * fd.exp_phi(1) * fd.H


def test_metric_inverse_for_constant_phi():
    # e^n with a constant even n is invertible
    fd = Fr.FrameData(phi=Expr.atom(const_atom("n", 0)))
    G.metric_inverse(fd)


def test_constant_odd_Q_gives_flat_surface():
    c = Expr.atom(const_atom("c_", 1))
    fd = Fr.FrameData(Qp=c, Qm=c)
    assert not G.gaussian_curvature(fd)
