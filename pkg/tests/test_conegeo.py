import numpy as np
import pytest

from mixcara.basis import MonomialBasis, eval_point
from mixcara.conegeo import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    hankel_classify,
    represent_with_prescribed_component,
    strip_mass,
)
from mixcara.errors import (
    NotRepresentableError,
    UnboundedStripError,
    UnsupportedBasisError,
)
from mixcara.measures import AtomicMeasure, sample_random_mixture
from mixcara.moments import MomentVector, dirac_moments, mixture_moments

B2 = MonomialBasis.full_degree(2)


def mv(values, basis=B2):
    return MomentVector(values=np.asarray(values, dtype=float), basis=basis)


def test_classify_interior_boundary_exterior():
    assert hankel_classify(mv([1, 0, 1])).status == INTERIOR
    assert hankel_classify(mv([1, 0, 0])).status == BOUNDARY
    assert hankel_classify(mv([1, 0, -1])).status == EXTERIOR


def test_classify_margin_fields():
    cls = hankel_classify(mv([1, 0, 1]))
    assert cls.margin == pytest.approx(1.0)
    assert cls.tolerance == pytest.approx(2e-10)


def test_classify_gap_basis_unsupported():
    gap = MonomialBasis.univariate([0, 2, 3, 5, 6])
    with pytest.raises(UnsupportedBasisError):
        hankel_classify(MomentVector(values=np.ones(5), basis=gap))


@pytest.mark.parametrize("kind,mean_range", [("gaussian", (-2, 2)), ("lognormal", (0.5, 2.5))])
def test_mixture_moments_are_interior(kind, mean_range):
    """Full-support densities land strictly inside the cone."""
    basis = MonomialBasis.full_degree(4)
    rng = np.random.default_rng(21)
    for _ in range(250):
        k = int(rng.integers(1, 4))
        mix = sample_random_mixture(kind, k, rng=rng, mean_range=mean_range,
                                    sigma_range=(0.1, 0.6))
        s = mixture_moments(basis, mix)
        assert hankel_classify(s).status == INTERIOR


@pytest.mark.parametrize("d", range(2, 10, 2))
def test_few_atoms_sit_on_the_boundary(d):
    # even degree: the Hankel matrix of d/2 atoms has rank d/2 < d/2 + 1
    basis = MonomialBasis.full_degree(d)
    rng = np.random.default_rng(d)
    k = d // 2
    mu = AtomicMeasure(weights=rng.uniform(0.5, 2, k), points=rng.uniform(-1, 1, (k, 1)))
    s = dirac_moments(basis, mu)
    assert hankel_classify(s).status == BOUNDARY


def test_strip_two_atom_construction():
    mu = AtomicMeasure(weights=[1.0, 2.0], points=[[0.0], [1.0]])
    s = dirac_moments(B2, mu)
    v = mv(eval_point(B2, 1.0))
    c, stripped = strip_mass(s, v)
    assert c == pytest.approx(2.0, abs=1e-6)
    np.testing.assert_allclose(stripped.values, [1, 0, 0], atol=1e-6)


def test_strip_boundary_gives_zero():
    s = mv([1, 0, 0])  # boundary: a single atom at the origin
    v = mv(eval_point(B2, 1.0))
    c, stripped = strip_mass(s, v)
    assert c == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(stripped.values, s.values, atol=1e-9)


def test_strip_single_ray():
    mu = AtomicMeasure(weights=[3.0], points=[[2.0]])
    s = dirac_moments(B2, mu)
    v = mv(eval_point(B2, 2.0))
    c, stripped = strip_mass(s, v)
    assert c == pytest.approx(3.0, abs=1e-6)
    np.testing.assert_allclose(stripped.values, 0.0, atol=1e-5)


def test_strip_bisection_brackets_the_boundary():
    mu = AtomicMeasure(weights=[1.0, 2.0], points=[[0.0], [1.0]])
    s = dirac_moments(B2, mu)
    v = mv(eval_point(B2, 1.0))
    c, _ = strip_mass(s, v)
    assert hankel_classify(s.with_values(s.values - (c - 1e-6) * v.values)).status != EXTERIOR
    assert hankel_classify(s.with_values(s.values - (c + 1e-6) * v.values)).status == EXTERIOR


def test_strip_unbounded_direction():
    s = mv([1, 0, 1])
    v = mv([0, 0, -1])  # removing it only adds mass at the top moment
    with pytest.raises(UnboundedStripError):
        strip_mass(s, v)


def test_strip_exterior_input_rejected():
    with pytest.raises(NotRepresentableError):
        strip_mass(mv([1, 0, -1]), mv([1, 0, 1]))


def test_prescribe_component_on_gaussian_moments():
    basis = MonomialBasis.full_degree(5)
    mix = sample_random_mixture("gaussian", 1, rng=1, mean_range=(-0.2, 0.2),
                                sigma_range=(0.9, 1.1))
    s = mixture_moments(basis, mix)
    combined = represent_with_prescribed_component(basis, "gaussian", s, 5.0, 0.3)
    assert any(
        c > 0 and xi[0] == pytest.approx(5.0) and sg == pytest.approx(0.3)
        for c, xi, sg in combined.components()
    )
    achieved = mixture_moments(basis, combined).values
    scale = 1 + np.max(np.abs(s.values))
    assert np.max(np.abs(achieved - s.values)) / scale <= 1e-8


def test_prescribe_existing_component_succeeds():
    basis = MonomialBasis.full_degree(5)
    mix = sample_random_mixture("gaussian", 2, rng=4, min_separation=0.8)
    s = mixture_moments(basis, mix)
    x0 = float(mix.means[0, 0])
    sigma0 = float(mix.sigmas[0])
    combined = represent_with_prescribed_component(basis, "gaussian", s, x0, sigma0)
    achieved = mixture_moments(basis, combined).values
    assert np.max(np.abs(achieved - s.values)) / (1 + np.max(np.abs(s.values))) <= 1e-8


def test_prescribe_rejects_boundary():
    basis = MonomialBasis.full_degree(2)
    s = mv([1, 0, 0])
    with pytest.raises(NotRepresentableError):
        represent_with_prescribed_component(basis, "gaussian", s, 1.0, 0.5)


def test_prescribe_sigma_validation():
    basis = MonomialBasis.full_degree(2)
    with pytest.raises(ValueError):
        represent_with_prescribed_component(basis, "gaussian", mv([1, 0, 1]), 1.0, -0.5)
