import cmath
import math

import pytest

import tubehs


def test_cone_properties():
    c = tubehs.Cone("lorentz", 3)
    assert c.dim == 3
    assert c.contains_dual([3.0, 4.0, 5.0])
    assert abs(c.interior_depth([0.0, 0.0, 1.0]) - 1 / math.sqrt(2)) < 1e-15
    s = tubehs.Cone("simplicial", 2, generators=[[1, 0], [1, 1]])
    assert s.contains_dual([0.0, 1.0])
    assert not s.contains_dual([-1.0, 0.0])


def test_half_plane_kernel():
    c = tubehs.Cone("orthant", 1)
    z = ([0.3], [2.0])
    w = ([-0.4], [1.0])
    exact = 1j / (complex(0.3, 2.0) - complex(-0.4, -1.0))
    assert abs(tubehs.kernel(c, 0, z, w) - exact) <= 1e-8 * abs(exact)
    assert abs(tubehs.kernel_diag(c, 0, ([0.0], [1.0])) - 0.5) <= 1e-8


def test_norms_and_evaluation():
    c = tubehs.Cone("orthant", 1)
    f = {"kind": "exponential", "rate": [1.0]}
    assert abs(tubehs.hs_norm(c, 1, f) - math.sqrt(0.75)) <= 1e-8
    assert abs(tubehs.evaluate(c, 0, f, ([0.0], [1.0])) - 0.5) <= 1e-8


def test_decomposition():
    c = tubehs.Cone("orthant", 1)
    n = 16
    u = [2 * math.cos(2 * math.pi * j / n) for j in range(n)]
    r = tubehs.decompose(c, 1, u, 2 * math.pi)
    assert r["boundary_norm_sq"] == pytest.approx(4.0, abs=1e-13)
    assert r["plus_norm_sq"] == pytest.approx(2.0, abs=1e-13)
    assert r["defect"] <= 1e-13
    u2 = [[cmath.exp(1j * (2 * math.pi * a / 8 - 2 * math.pi * b / 8)) for b in range(8)] for a in range(8)]
    with pytest.raises(tubehs.TubeHSError) as err:
        tubehs.decompose(tubehs.Cone("orthant", 2), 0, u2, 2 * math.pi)
    assert err.value.code == "SpectrumOutsideCones"


def test_point_mass_embedding():
    c = tubehs.Cone("orthant", 1)
    lam, cond = tubehs.embedding_estimate(c, 0, [([0.0], [1.0], 1.0)], [([0.0], [1.0])])
    assert abs(lam - 0.5) <= 1e-8
    assert cond >= 1.0


def test_errors_carry_codes():
    with pytest.raises(tubehs.TubeHSError) as err:
        tubehs.kernel_diag(tubehs.Cone("orthant", 1), 0, ([0.0], [-1.0]))
    assert err.value.code == "NotInInterior"
    with pytest.raises(tubehs.TubeHSError) as err:
        tubehs.Cone("simplicial", 2, generators=[[1, 1], [2, 2]])
    assert err.value.code == "SingularGenerators"


def test_acceptance_criterion_from_python():
    r = tubehs.run_criterion(4)
    assert r["passed"], r["detail"]
    assert tubehs.criterion_count == 9
