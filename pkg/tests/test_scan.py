import math

import numpy as np
import pytest

from cavchirp.csvio import SCAN_COLUMNS, scan_csv_text
from cavchirp.model import ModelParams
from cavchirp.propagate import PropagationConfig, SystemOperators
from cavchirp.pulses import PulsePair, PulseSpec
from cavchirp.scan import (
    LocusFit,
    ScanAxis,
    ScanPoint,
    ScanResult,
    ScanSpec,
    apply_point,
    eval_fitted_locus,
    extract_ridge,
    run_scan,
    symmetry_report,
)

PARAMS = ModelParams()
TAU0 = 5e7


@pytest.fixture(scope="module")
def ops():
    return SystemOperators.build(PARAMS)


def base_pair(ops, amp=1.0):
    lev = ops.calibrated_levels()
    return PulsePair(
        plus=PulseSpec(amp, lev.omega_plus, TAU0),
        minus=PulseSpec(amp, lev.omega_minus, TAU0),
    )


def small_spec(ops, axes, mode="independent", **kwargs):
    return ScanSpec(
        axes=axes,
        params=PARAMS,
        base_pulses=base_pair(ops),
        propagation=PropagationConfig(),
        mode=mode,
        **kwargs,
    )


def test_axis_validation():
    with pytest.raises(ValueError):
        ScanAxis("frequency", 0.0, 1.0, 5)
    with pytest.raises(ValueError):
        ScanAxis("amplitude", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        ScanAxis("amplitude", 1.0, 0.0, 5)
    axis = ScanAxis("beta_plus", -1000.0, 1000.0, 21, unit="ns^2")
    assert len(axis.values()) == 21
    assert axis.values_au()[0] == pytest.approx(-1000.0 * (1e-9 / 2.4188843265857e-17) ** 2)


def test_spec_validation(ops):
    ax = ScanAxis("beta_plus", -1.0, 1.0, 3, unit="au^2")
    ax2 = ScanAxis("beta_minus", -1.0, 1.0, 3, unit="au^2")
    small_spec(ops, (ax, ax2))
    with pytest.raises(ValueError):
        small_spec(ops, ())
    with pytest.raises(ValueError):
        small_spec(ops, (ax, ax2), mode="equal_chirp")
    with pytest.raises(ValueError):
        small_spec(ops, (ax, ax))
    with pytest.raises(ValueError):
        small_spec(ops, (ax,), mode="diagonal")


def test_apply_point_modes(ops):
    ax = ScanAxis("beta_plus", -1.0, 1.0, 3, unit="au^2")
    eq = small_spec(ops, (ax,), mode="equal_chirp")
    pair = apply_point(eq, {"beta_plus": 0.5})
    assert pair.plus.beta == 0.5 and pair.minus.beta == 0.5
    ind = small_spec(ops, (ax,), mode="independent")
    pair = apply_point(ind, {"beta_plus": 0.5})
    assert pair.plus.beta == 0.5 and pair.minus.beta == 0.0
    pair = apply_point(ind, {"amplitude": 2.0, "delta": 1e-9})
    assert pair.plus.amplitude == pair.minus.amplitude == 2.0
    assert pair.plus.delta == pair.minus.delta == 1e-9


def test_run_scan_small_grid_deterministic(ops):
    axes = (
        ScanAxis("amplitude", 0.5, 1.5, 2, unit="au"),
        ScanAxis("beta_plus", -0.5 * TAU0**2, 0.5 * TAU0**2, 2, unit="au^2"),
    )
    spec = small_spec(ops, axes)
    first = run_scan(spec, workers=1)
    second = run_scan(spec, workers=1)
    assert all(p.status == "ok" for p in first.points)
    assert [p.index for p in first.points] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert scan_csv_text(first) == scan_csv_text(second)
    assert not first.degraded
    assert first.manifest()["config_hash"] == spec.config_hash()
    # orientation is a bounded magnitude
    for p in first.points:
        assert 0.0 <= p.orientation <= 1.0
        assert p.norm_drift < 1e-8


def test_run_scan_schedule_independent(ops):
    axes = (ScanAxis("amplitude", 0.5, 1.5, 3, unit="au"),)
    spec = small_spec(ops, axes)
    serial = run_scan(spec, workers=1)
    pooled = run_scan(spec, workers=2)
    assert scan_csv_text(serial) == scan_csv_text(pooled)


def test_run_scan_zero_amplitude_point(ops):
    axes = (ScanAxis("amplitude", 0.0, 1.0, 2, unit="au"),)
    spec = small_spec(ops, axes)
    result = run_scan(spec)
    quiet = result.points[0]
    assert quiet.status == "ok"
    assert quiet.orientation < 1e-6


def test_run_scan_records_failures(ops):
    # with auto_extend off, strongly chirped points end while the envelope
    # is still hot and the post-pulse guard rejects them
    axes = (ScanAxis("beta_plus", 0.0, 4.5 * TAU0**2, 3, unit="au^2"),)
    spec = ScanSpec(
        axes=axes,
        params=PARAMS,
        base_pulses=base_pair(ops),
        propagation=PropagationConfig(auto_extend=False),
        mode="equal_chirp",
    )
    result = run_scan(spec)
    statuses = [p.status for p in result.points]
    assert statuses[0] == "ok"
    assert statuses[-1] == "failed"
    assert "envelope" in result.points[-1].message
    assert result.degraded  # 1/3 > 5%
    csv = scan_csv_text(result)
    assert csv.count("failed") == statuses.count("failed")
    assert csv.splitlines()[0] == ",".join(SCAN_COLUMNS)


def fake_result(ops, fn, n=5, b=2.0):
    axes = (
        ScanAxis("beta_plus", -b, b, n, unit="au^2"),
        ScanAxis("beta_minus", -b, b, n, unit="au^2"),
    )
    spec = small_spec(ops, axes)
    vp, vm = axes[0].values(), axes[1].values()
    points = []
    for i in range(n):
        for j in range(n):
            pair = apply_point(spec, {"beta_plus": vp[i], "beta_minus": vm[j]})
            points.append(ScanPoint(
                index=(i, j),
                coords_au={"beta_plus": vp[i], "beta_minus": vm[j]},
                pulses=pair,
                orientation=fn(vp[i], vm[j]),
                populations=(1.0, 0.0, 0.0),
                phases=(0.0, 0.0, 0.0),
                norm_drift=0.0,
            ))
    return ScanResult(spec=spec, points=points, wall_time=0.0, workers=1)


def test_extract_ridge_diagonal(ops):
    result = fake_result(ops, lambda bp, bm: 0.5 - (bp - bm) ** 2 / 100.0)
    ridge = extract_ridge(result, "beta_plus")
    for rp in ridge:
        assert rp.status == "ok"
        assert rp.argmax_value == pytest.approx(rp.sweep_value)


def test_extract_ridge_flat_rows_indeterminate(ops):
    result = fake_result(ops, lambda bp, bm: 0.25)
    ridge = extract_ridge(result, "beta_minus")
    assert all(rp.status == "indeterminate" and rp.argmax_value is None for rp in ridge)


def test_extract_ridge_tie_break_toward_zero(ops):
    # maxima at bm = -2 and bm = 0: the smaller |coordinate| wins
    result = fake_result(ops, lambda bp, bm: 1.0 if bm in (-2.0, 0.0) else 0.0)
    ridge = extract_ridge(result, "beta_plus")
    assert all(rp.argmax_value == 0.0 for rp in ridge)


def test_extract_ridge_requires_two_axes(ops):
    axes = (ScanAxis("amplitude", 0.5, 1.5, 2, unit="au"),)
    spec = small_spec(ops, axes)
    res = ScanResult(spec=spec, points=[], wall_time=0.0, workers=1)
    with pytest.raises(ValueError):
        extract_ridge(res, "amplitude")


def test_locus_amplitude_pi():
    fit = LocusFit.amplitude_pi()
    assert eval_fitted_locus(-1e-9, fit) == pytest.approx(447.5, abs=1e-6)
    assert eval_fitted_locus(-91.0, fit) == pytest.approx(415.0 * math.e + 32.5, rel=1e-12)
    # odd-symmetric pair of branches around the offset
    assert eval_fitted_locus(50.0, fit) == pytest.approx(
        -415.0 * math.exp(50.0 / 91.0) + 32.5, rel=1e-12
    )
    with pytest.raises(ValueError):
        eval_fitted_locus(0.0, fit)
    with pytest.raises(ValueError):
        eval_fitted_locus(-1500.0, fit)


def test_locus_amplitude_1_75pi():
    fit = LocusFit.amplitude_1_75pi()
    # identity branch
    assert eval_fitted_locus(50.0, fit) == 50.0
    assert eval_fitted_locus(-50.0, fit) == -50.0
    # left branch at the first logistic midpoint: Y1 = 157.44/2 exactly
    y2 = -1040.44 / (1.0 + 10.0 ** (0.025 * (-167.0 + 321.6)))
    assert eval_fitted_locus(-321.6, fit) == pytest.approx(163.0 + 78.72 + y2, rel=1e-12)
    for bad in (-113.0, 113.0, -1000.0, 1500.0):
        with pytest.raises(ValueError):
            eval_fitted_locus(bad, fit)


def test_symmetry_report_synthetic(ops):
    sym = fake_result(ops, lambda bp, bm: 0.1 + 0.02 * (bp * bm) + 0.01 * (bp**2 + bm**2))
    rep = symmetry_report(sym)
    assert rep.max_sign_reversal_mismatch < 1e-15
    assert rep.max_exchange_mismatch < 1e-15
    assert rep.pairs_checked == 25

    skew = fake_result(ops, lambda bp, bm: 0.1 + 0.02 * bp)
    rep2 = symmetry_report(skew)
    assert rep2.max_sign_reversal_mismatch > 0.01
    assert rep2.max_exchange_mismatch > 0.01


def test_symmetry_report_rejects_bad_grids(ops):
    axes = (
        ScanAxis("beta_plus", -1.0, 2.0, 4, unit="au^2"),
        ScanAxis("beta_minus", -1.0, 1.0, 3, unit="au^2"),
    )
    spec = small_spec(ops, axes)
    res = ScanResult(spec=spec, points=[], wall_time=0.0, workers=1)
    with pytest.raises(ValueError):
        symmetry_report(res)
    amp_axes = (
        ScanAxis("amplitude", 0.5, 1.0, 2, unit="au"),
        ScanAxis("beta_minus", -1.0, 1.0, 3, unit="au^2"),
    )
    res2 = ScanResult(spec=small_spec(ops, amp_axes), points=[], wall_time=0.0, workers=1)
    with pytest.raises(ValueError):
        symmetry_report(res2)
