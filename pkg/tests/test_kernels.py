import os
import subprocess
import sys

import numpy as np
import pytest

from qcspectral import _kernels_py, kernels
from qcspectral.eigsolver import FEData
from qcspectral.maps import parse_map
from qcspectral.mesh import mesh_disc, push_forward

compiled = pytest.importorskip("qcspectral._kernels", reason="compiled kernels not built")


@pytest.fixture(scope="module")
def fe():
    return FEData(push_forward(mesh_disc(12), parse_map("rose-petal")))


@pytest.mark.parametrize("p", [2.0, 2.5, 3.0, 4.0, 7.0])
def test_compiled_matches_python(fe, p):
    u = np.random.default_rng(int(p * 10)).standard_normal(fe.n)
    for name in ("energy_grad", "mass_grad"):
        args = ((u, fe.tri, fe.grads, fe.area, p) if name == "energy_grad"
                else (u, fe.tri, fe.area, fe.bary, fe.wq, p))
        v1, g1 = getattr(compiled, name)(*args)
        v2, g2 = getattr(_kernels_py, name)(*args)
        assert v1 == pytest.approx(v2, rel=1e-13)
        np.testing.assert_allclose(g1, g2, rtol=1e-11, atol=1e-13 * np.abs(g2).max())
    uq1 = compiled.quad_values(u, fe.tri, fe.bary)
    uq2 = _kernels_py.quad_values(u, fe.tri, fe.bary)
    np.testing.assert_allclose(uq1, uq2, rtol=1e-14, atol=1e-15)
    for c in (-0.3, 0.0, 0.4):
        r1 = compiled.constraint(uq1, fe.W, c, p)
        r2 = _kernels_py.constraint(uq2, fe.W, c, p)
        assert r1 == pytest.approx(r2, rel=1e-12, abs=1e-14)


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_pure_python_override():
    env = dict(os.environ, QCSPECTRAL_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import qcspectral; print(qcspectral.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
