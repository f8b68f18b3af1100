"""Smoke test for the pyvarlab extension module.

Build and install with `pip install --no-build-isolation ./crates/python`
(or `maturin develop -m crates/python/Cargo.toml`), then run this script.
"""

import math
from fractions import Fraction

import pyvarlab as pv


def main():
    assert "two-pass" in pv.algorithms() and len(pv.algorithms()) == 7

    for name in pv.algorithms():
        r = pv.variance([1.0, 2.0, 3.0], name)
        assert (r.count, r.mean, r.sum_sq_dev, r.sample_variance) == (3, 2.0, 2.0, 1.0), (name, r)

    assert pv.exact_variance([1.0, 2.0, 3.0]) == 1
    v = pv.exact_variance([0.1, 0.2, 0.3])
    assert isinstance(v, Fraction) and v != Fraction(1, 100)
    assert abs(float(v) - 0.01) < 1e-15

    data = pv.generate(10_000, 12, seed=42)
    assert data == pv.generate(10_000, 12, seed=42)
    good = pv.variance(data, "two-pass")
    bad = pv.variance(data, "textbook", clamp=True)
    assert pv.correct_digits(good.sample_variance, data) > pv.correct_digits(bad.sample_variance, data)
    par = pv.variance(data, "pairwise", threads=4)
    assert par.count == 10_000 and par.sample_variance > 0

    moderate = pv.generate(10_000, 6, seed=7)
    left, right = pv.PairState(), pv.PairState()
    left.extend(moderate[:4000])
    right.extend(moderate[4000:])
    merged = left.merge(right).result()
    assert math.isclose(merged.sample_variance, float(pv.exact_variance(moderate)), rel_tol=1e-6)

    w = pv.WelfordState()
    w.extend([1.0, 2.0, 3.0, 4.0])
    assert (w.count, w.mean, w.s) == (4, 2.5, 5.0)

    assert abs(pv.t_quantile(0.05, 99) - 1.9842169515086827) < 1e-6
    t = pv.ttest(pv.generate(100, 12, seed=42))
    assert not t["loud_failure"] and t["acceptance_width"] > 0
    loud = pv.ttest([5.0, 5.0, 5.0], mu0=4.0)
    assert loud["loud_failure"] and not loud["reject"]

    rows = pv.mantissa_table([1.0, 2.0], [0])
    assert rows[0]["shift_exponent"] is None and rows[1]["variance"] == 0.5

    try:
        pv.variance([1.0], "two-pass")
    except pv.VarlabError as e:
        assert "insufficient" in str(e)
    else:
        raise AssertionError("expected VarlabError")
    try:
        pv.variance([1.0, 2.0], "no-such-algorithm")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("pyvarlab smoke test passed")


if __name__ == "__main__":
    main()
