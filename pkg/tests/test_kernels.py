import numpy as np
import pytest

from streamista import kernels
from streamista.measurement import gen_gaussian_matrix
from streamista.signals import GenConfig, assemble_target
from streamista.solver import SolverConfig, run_streaming

needs_numba = pytest.mark.skipif(not kernels.NUMBA_AVAILABLE, reason="numba not installed")


def make_problem(seed=0):
    cfg = GenConfig(n=32, s=4, n_pairs=1, n_samples=8, beta=1.0, mu=0.3, seed=seed)
    target = assemble_target(cfg)
    phi = gen_gaussian_matrix(16, 32, seed)
    ys = (phi.entries @ target.samples.T).T
    return phi, ys, target


def test_numpy_backend_is_deterministic():
    phi, ys, target = make_problem()
    cfg = SolverConfig(lam=0.1, eta=0.3, P=3)
    a = run_streaming(phi, ys, target, cfg, np.zeros(32), backend="numpy")
    b = run_streaming(phi, ys, target, cfg, np.zeros(32), backend="numpy")
    assert a.errors.tobytes() == b.errors.tobytes()
    assert np.array_equal(a.final_state.u, b.final_state.u)


@needs_numba
def test_backends_agree_on_stable_run():
    phi, ys, target = make_problem(3)
    cfg = SolverConfig(lam=0.1, eta=0.3, P=3)
    nb = run_streaming(phi, ys, target, cfg, np.zeros(32), backend="numba")
    base = run_streaming(phi, ys, target, cfg, np.zeros(32), backend="numpy")
    # error values may differ by BLAS-vs-loop rounding, discrete records may not
    assert nb.errors == pytest.approx(base.errors, rel=1e-9, abs=1e-12)
    assert np.array_equal(nb.gamma_sizes, base.gamma_sizes)
    assert np.array_equal(nb.switches, base.switches)


@needs_numba
def test_numba_backend_is_deterministic():
    phi, ys, target = make_problem(1)
    cfg = SolverConfig(lam=0.1, eta=0.3, P=2)
    a = run_streaming(phi, ys, target, cfg, np.zeros(32), backend="numba")
    b = run_streaming(phi, ys, target, cfg, np.zeros(32), backend="numba")
    assert a.errors.tobytes() == b.errors.tobytes()


def test_backend_env_forces_numpy(monkeypatch):
    monkeypatch.setenv(kernels.BACKEND_ENV, "numpy")
    assert kernels.active_backend() == "numpy"


def test_backend_env_default_auto(monkeypatch):
    monkeypatch.delenv(kernels.BACKEND_ENV, raising=False)
    expected = "numba" if kernels.NUMBA_AVAILABLE else "numpy"
    assert kernels.active_backend() == expected


def test_backend_env_rejects_unknown(monkeypatch):
    monkeypatch.setenv(kernels.BACKEND_ENV, "fortran")
    with pytest.raises(ValueError, match="fortran"):
        kernels.active_backend()


def test_stream_rejects_unknown_backend():
    phi = np.eye(2)
    ys = np.zeros((1, 2))
    with pytest.raises(ValueError, match="backend"):
        kernels.stream(phi, phi, ys, ys, np.zeros(1, dtype=np.bool_),
                       0.5, 1.0, 1, np.zeros(2), backend="gpu")


def test_warmup_runs():
    kernels.warmup()
