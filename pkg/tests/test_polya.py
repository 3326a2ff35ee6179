from fractions import Fraction

import pytest

from dfheight.corpus import CORPUS
from dfheight.errors import (InsufficientData, MajorantViolated, PreconditionFailed,
                             RadiusTooLarge)
from dfheight.hankel import hankel_scan
from dfheight.numeric import MP
from dfheight.polya import (DiskBoundInput, decay_exponent_fit, polya_bound, polya_bound_twisted,
                            polya_soundness, sup_norm_details, sup_norm_on_circle)
from dfheight.series import DerivedSeries, PrefixSeries

R = Fraction(3, 2)
MAJ = (1, 2)


def test_sup_norm_examples(series):
    assert sup_norm_on_circle(series("halfgeom"), R, MAJ) >= 4
    assert sup_norm_on_circle(series("halfgeom"), R, MAJ) < 4.2
    zero = PrefixSeries([0] * 4)
    assert sup_norm_on_circle(zero, R, (0, 2)) == 0
    assert sup_norm_on_circle(series("halflog"), R, MAJ) >= abs(MP.log(MP.mpf(1) / 4))


def test_sup_norm_errors(series):
    with pytest.raises(RadiusTooLarge):
        sup_norm_on_circle(series("halfgeom"), 2, MAJ)
    with pytest.raises(MajorantViolated):
        sup_norm_on_circle(series("geometric2"), Fraction(1, 4), (1, 1))


def test_refining_grid_stays_sound(series):
    s = series("halflog")
    coarse = sup_norm_details(s, R, MAJ, grid=64)
    fine = sup_norm_details(s, R, MAJ, grid=512)
    assert fine.value <= coarse.value + coarse.safety
    assert fine.grid_max <= fine.value and coarse.grid_max <= coarse.value


def test_polya_bound_examples():
    assert polya_bound(DiskBoundInput(1, 2), 1) == pytest.approx(0.5, rel=1e-60)
    assert polya_bound(DiskBoundInput(0, 2), 5) == 0
    assert abs(polya_bound(DiskBoundInput(1, 2), 3) - MP.mpf(3) / 512) < MP.mpf(10) ** -70
    assert polya_bound(DiskBoundInput(1, 2), 3) >= MP.mpf(3) / 512


def test_polya_bound_twisted_examples():
    inp = DiskBoundInput(1, 2)
    for k in range(5):
        assert polya_bound_twisted(inp, [1], k) == polya_bound(inp, k)
    assert abs(polya_bound_twisted(DiskBoundInput(1, 2, C1=1, C2=2), [0, 1], 1) - 2) < 1e-60
    assert abs(polya_bound_twisted(DiskBoundInput(1, 2, C1=2, C2=1), [1, 1], 0) - 4) < 1e-60


def test_disk_input_validation():
    with pytest.raises(PreconditionFailed):
        DiskBoundInput(1, 1)
    with pytest.raises(PreconditionFailed):
        DiskBoundInput(-1, 2)


@pytest.mark.parametrize("name", ["halfgeom", "halflog"])
def test_soundness_through_18(series, name):
    s = series(name)
    inp = DiskBoundInput(sup_norm_on_circle(s, R, MAJ), R)
    rows = polya_soundness(s, inp, 18)
    assert all(r.sound for r in rows)


def test_hilbert_fit(series):
    scan = hankel_scan(series("hilbertish"), 20)
    rep = decay_exponent_fit(scan)
    assert rep.sigma >= MP.log(2)
    sig = [decay_exponent_fit(scan, n_max=k).sigma for k in (12, 16, 20)]
    assert sig[0] <= sig[1] <= sig[2]
    assert rep.to_dict(10)["n_used"] == list(range(21))


def test_fit_on_rational_series_is_refused(series):
    with pytest.raises(InsufficientData):
        decay_exponent_fit(hankel_scan(series("geometric2"), 15))


def test_halflog_fit(series):
    rep = decay_exponent_fit(hankel_scan(series("halflog"), 16))
    assert rep.sigma >= MP.log(2)


def test_fit_is_scale_invariant(series):
    s = series("hilbertish")
    t = DerivedSeries(s, lambda n, a: a * Fraction(-7, 3), "scaled")
    a = decay_exponent_fit(hankel_scan(s, 16))
    b = decay_exponent_fit(hankel_scan(t, 16))
    assert abs(a.sigma - b.sigma) < MP.mpf(10) ** -50
