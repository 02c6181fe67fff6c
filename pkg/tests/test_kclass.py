"""Formal K-class arithmetic and the certified K-group equality test."""

from flagfrob.kclass import (
    classes_equal,
    kadd,
    kdet,
    kdual,
    keuler,
    keuler_pairing,
    kfrobenius,
    kline,
    krank,
    kscale,
    ktensor,
)
from flagfrob.rootsys import TypeALattice


def test_basic_ops():
    a = kline((1, 0, 0))
    assert kdual(kfrobenius(a, 5)) == kline((-5, 0, 0))
    assert krank(kadd(a, kline((0, 1, 0)))) == 2
    assert ktensor(kline((1, 0, 0)), kline((0, 0, 1))) == kline((1, 0, 1))
    assert kdet(kadd(kscale(2, kline((1, 0, 0))), kline((0, -1, 0)))) == (2, -1, 0)


def test_euler_pairing_is_twisted_euler():
    lat = TypeALattice(4)
    a = kline((1, 0, 0))
    b = kline((1, 0, 1))
    # chi(a, b) = euler of L_{b - a}
    assert keuler_pairing(lat, a, b) == keuler(lat, kline((0, 0, 1))) == 4


def test_trivial_bundle_relation():
    # the tautological filtration of the trivial rank-n bundle:
    # sum of the eps-line classes equals n copies of the trivial class
    lat = TypeALattice(4)
    eps = [(1, 0, 0), (-1, 1, 0), (0, -1, 1), (0, 0, -1)]
    total = {}
    for w in eps:
        total = kadd(total, kline(w))
    assert classes_equal(lat, total, kscale(4, kline((0, 0, 0))))
    # and the dual relation as well
    total_dual = {}
    for w in eps:
        total_dual = kadd(total_dual, kline(tuple(-x for x in w)))
    assert classes_equal(lat, total_dual, kscale(4, kline((0, 0, 0))))


def test_classes_equal_rejects():
    lat = TypeALattice(4)
    assert not classes_equal(lat, kline((1, 0, 0)), kline((0, 0, 1)))
    assert not classes_equal(lat, kline((1, 0, 0)), kscale(2, kline((1, 0, 0))))
    # same rank and determinant, still different classes
    a = kadd(kline((1, 0, 1)), kline((0, 0, 0)))
    b = kadd(kline((1, 0, 0)), kline((0, 0, 1)))
    assert krank(a) == krank(b) and kdet(a) == kdet(b)
    assert not classes_equal(lat, a, b)


def test_classes_equal_on_koszul_dual_identity():
    # order-2 kernel bundle: Koszul class equals the dual-pairing class
    lat = TypeALattice(4)
    koszul = {}
    for j, coef in ((0, 6), (1, -4), (2, 1)):
        koszul = kadd(koszul, kscale(coef, kline((j, 0, 0))))
    dual_route = kadd(
        kscale(4, kline((-1, 0, 0))), kscale(-1, kline((-2, 0, 0)))
    )
    assert classes_equal(lat, koszul, dual_route)
    assert not classes_equal(lat, koszul, kadd(dual_route, kline((0, 0, 0))))
