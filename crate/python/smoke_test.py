"""Smoke test for the momentype_py extension.

Build and install first, e.g. ``pip install ./crates/python``, then run
``python python/smoke_test.py``.
"""

import math

import momentype_py as mt


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    assert close(mt.digamma(1.0), -0.5772156649015329, 1e-12)
    assert close(mt.trigamma(1.0), math.pi ** 2 / 6, 1e-12)
    assert close(mt.polygamma(2, 1.0), -2.4041138063191885, 1e-12)
    assert close(mt.ln_gamma(0.5), 0.5 * math.log(math.pi), 1e-12)

    r = mt.fit("dirichlet", "me", [[0.25, 0.75], [0.75, 0.25]])
    assert r.exists and all(close(a, 1.5, 1e-12) for a in r.estimate), r

    r = mt.fit("dirichlet", "same", [[0.25, 0.75], [0.75, 0.25]])
    assert close(r.estimate[0], 2 / math.log(3), 1e-12), r

    r = mt.fit("dirichlet", "me", [[0.5, 0.5]] * 3)
    assert not r.exists and r.reason == "zero_variance"

    d = mt.DirichletParams([2.0, 3.0])
    rows = d.sample(5000, seed=1)
    assert len(rows) == 5000 and all(close(sum(x), 1.0, 1e-12) for x in rows)
    assert rows == d.sample(5000, seed=1)
    mle = mt.fit("dirichlet", "mle", rows)
    assert mle.exists and mle.score_norm <= 1e-10 and mle.iterations <= 25
    assert all(abs(a - b) < 0.3 for a, b in zip(mle.estimate, d.alpha)), mle

    g = mt.MGammaParams([1.0, 2.0], 1.5)
    rows = g.sample(2000, seed=2)
    assert all(0 < x[0] < x[1] for x in rows)
    for method in ["me", "same", "same_unbiased", "mle", "dir_me", "dir_same"]:
        r = mt.fit("mgamma", method, rows)
        assert r.exists and len(r.estimate) == 3, (method, r)

    cov = mt.asymptotic_covariance("dirichlet", "mle", [1.0, 1.0])
    assert close(cov[0][0], 1.712152716138406, 1e-12)
    assert close(cov[0][1], cov[1][0], 0.0)

    entries = mt.moment_catalog("mgamma", [2.0, 0.5])
    assert any(name == "C(Z1, Z1 log Z1)" for name, _, _ in entries)

    rows = mt.metric_sweep("dirichlet", [1.0, 2.0], 1, [0.5, 1.0], [20], 200, ["me", "same"], seed=3)
    assert len(rows) == 2 * 2 * 2
    for row in rows:
        assert row["m_effective"] + row["failures"] == 200
        assert close(row["rmse"] ** 2, row["bias"] ** 2 + row["variance"], 1e-10)

    try:
        mt.DirichletParams([1.0, -1.0])
    except ValueError:
        pass
    else:
        raise AssertionError("negative shape accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
