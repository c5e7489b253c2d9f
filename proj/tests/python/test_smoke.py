import math

import numpy as np
import pytest

import minmax_lab as ml


def test_presets():
    names = ml.preset_names()
    assert "Nsgda" in names and "SgdaBalanced" in names
    cfg = ml.preset("Nsgda")
    assert cfg["optimizer"]["eta_G"] < cfg["optimizer"]["eta_D"]
    assert cfg["stop"]["kind"] == "FixedBudget"


def test_unknown_key_raises():
    cfg = ml.base_config(20)
    cfg["bogus"] = 1
    with pytest.raises(ValueError):
        ml.train(cfg)


def test_train_short_run():
    cfg = ml.base_config(20)
    cfg["max_iters"] = 200
    cfg["metric_stride"] = 50
    verdict, csv_text = ml.train(cfg)
    assert verdict["stop_reason"] == "BudgetExhausted"
    lines = csv_text.strip().splitlines()
    assert lines[0].startswith("t,loss_exp,a,b,")
    assert len(lines) == 1 + 5
    again, csv_again = ml.train(cfg)
    assert csv_again == csv_text
    assert again == verdict


def test_sigma_and_loss():
    assert ml.sigma(3.0, 2.0) == pytest.approx(20.0)
    assert ml.sigma_prime(1.0, 2.0) == 3.0
    V = np.zeros((2, 3))
    W = np.zeros((1, 3))
    X = np.ones(3)
    z = np.array([1.0, 0.0])
    assert ml.loss(V, W, 0.0, 0.0, 1.0, 1.0, X, z) == pytest.approx(2 * math.log(0.5))


def test_sample_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    V = rng.normal(size=(3, 5)) / 5
    W = rng.normal(size=(2, 5)) / 2
    a, b, tau_b, lam = 0.7, -0.3, 0.5, 1.5
    X = rng.normal(size=5)
    z = np.array([0.0, 1.0, 0.0])
    g = ml.sample_gradient(V, W, a, b, tau_b, lam, X, z)
    h = 1e-6
    fd = (ml.loss(V, W, a + h, b, tau_b, lam, X, z) - ml.loss(V, W, a - h, b, tau_b, lam, X, z)) / (2 * h)
    assert g["a"] == pytest.approx(fd, rel=1e-6)
    Wp, Wm = W.copy(), W.copy()
    Wp[1, 2] += h
    Wm[1, 2] -= h
    fd_w = (ml.loss(V, Wp, a, b, tau_b, lam, X, z) - ml.loss(V, Wm, a, b, tau_b, lam, X, z)) / (2 * h)
    assert g["W"][1, 2] == pytest.approx(fd_w, rel=1e-6)
    assert np.all(g["V"][0] == 0.0) and np.all(g["V"][2] == 0.0)


def test_gradcheck():
    assert ml.gradcheck(samples=10)["pass"]
    flipped = ml.gradcheck(samples=4, flip_b=True)
    assert not flipped["pass"] and flipped["worst_component"] == "b"


def test_oracle_small():
    cfg = ml.base_config(20)
    report = ml.oracle(cfg, snapshots=1, draws=5000)
    assert report["pass"]


def test_sweep():
    base = ml.base_config(20)
    base["max_iters"] = 100
    spec = {"base": base, "eta_D_grid": [0.01, 0.02], "eta_G_grid": [0.01], "seeds": [0]}
    cells, summary = ml.sweep(spec, threads=2)
    assert cells.splitlines()[0].startswith("eta_D,eta_G,seed,verdict")
    assert len(cells.strip().splitlines()) == 3
    assert len(summary.strip().splitlines()) == 3
