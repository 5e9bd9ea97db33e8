import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from manifoldcast import (
    InvalidArgumentError,
    NoiseSpec,
    gen_ar,
    gen_central_subspace,
    gen_circle_chain,
    make_sample,
    manifold_distance,
)

ZERO = NoiseSpec(0.0)


class TestGenAr:
    def test_geometric_decay(self):
        s = gen_ar([0.5], T=20, noise=ZERO, seed=0, init=[1.0])
        np.testing.assert_allclose(s.observed.values[:, 0], 0.5 ** np.arange(20), atol=1e-15)

    def test_unit_root_constant(self):
        s = gen_ar([1.0], T=15, noise=ZERO, seed=0, init=[2.5])
        np.testing.assert_array_equal(s.observed.values[:, 0], np.full(15, 2.5))

    def test_order_must_be_below_length(self):
        with pytest.raises(InvalidArgumentError):
            gen_ar([0.5, 0.2], T=2, noise=ZERO, seed=0)

    def test_yule_walker_statistics(self):
        # AR(2) with a1=0.6, a2=0.3: lag-1 autocorrelation a1/(1-a2) = 6/7
        sigma, T = 0.1, 500
        s = gen_ar([0.6, 0.3], T=T, noise=NoiseSpec(sigma), seed=4)
        z = s.observed.values[:, 0]
        assert abs(z.mean()) <= 3 * sigma / np.sqrt(T) * 10  # long-run variance inflation
        zc = z - z.mean()
        rho1 = (zc[1:] @ zc[:-1]) / (zc @ zc)
        assert abs(rho1 - 6 / 7) <= 0.1

    def test_latent_patches_on_subspace(self):
        s = gen_ar([0.6, 0.3], T=200, noise=NoiseSpec(0.2), seed=1, window=4)
        d = manifold_distance(s.latent, s.manifold.tag, s.manifold.params)
        np.testing.assert_allclose(d, 0.0, atol=1e-12)

    def test_zero_noise_patches_on_subspace(self):
        # without innovations the observed windows satisfy the AR relation too
        s = gen_ar([0.7, 0.2], T=50, noise=ZERO, seed=0, init=[1.0, 2.0], window=4)
        z = s.observed.values[:, 0]
        patches = np.stack([z[t - 2: t - 6: -1] for t in range(6, 51)])
        d = manifold_distance(patches, "line-subspace", {"ar_coeffs": [0.7, 0.2]})
        np.testing.assert_allclose(d, 0.0, atol=1e-12)


class TestGenCentralSubspace:
    def test_identity_map_diagonal_graph(self):
        s = gen_central_subspace(np.eye(2), lambda u: u, T=10, noise=ZERO, seed=0,
                                 init=[1.0, -1.0])
        np.testing.assert_array_equal(s.latent[:, :2], s.latent[:, 2:])

    def test_bounded_sine_map(self):
        g = lambda u: 0.9 * np.sin(u)
        s = gen_central_subspace(np.eye(1), g, T=100, noise=ZERO, seed=0, init=[0.5])
        assert np.max(np.abs(s.observed.values)) <= 0.9
        np.testing.assert_allclose(
            s.latent[:, 1], 0.9 * np.sin(s.latent[:, 0]), atol=1e-14
        )

    def test_latents_exactly_on_graph(self):
        rng = np.random.default_rng(6)
        Phi = rng.standard_normal((3, 2))
        g = lambda u: np.tanh(np.array([u[0] + u[1], u[0] - u[1], u[1]]))
        s = gen_central_subspace(Phi, g, T=400, noise=NoiseSpec(0.05), seed=2)
        d = manifold_distance(s.latent, "graph-of-g", {"Phi": Phi, "g": g})
        np.testing.assert_allclose(d, 0.0, atol=1e-12)

    def test_observed_is_latent_plus_innovation(self):
        s = gen_central_subspace(np.eye(1), lambda u: 0.5 * u, T=50,
                                 noise=NoiseSpec(0.1), seed=3, init=[1.0])
        # second latent block holds the conditional mean of the observation
        resid = s.observed.values[:, 0] - s.latent[:, 1]
        assert resid.std() == pytest.approx(0.1, rel=0.5)

    def test_rank_deficient_phi_rejected(self):
        with pytest.raises(InvalidArgumentError):
            gen_central_subspace(np.zeros((2, 2)), lambda u: u, T=5, noise=ZERO, seed=0)


class TestGenCircleChain:
    def test_zero_noise_on_circle(self):
        s = gen_circle_chain(25.0, T=100, noise=ZERO, seed=0)
        np.testing.assert_allclose(np.linalg.norm(s.observed.values, axis=1), 1.0, atol=1e-12)
        np.testing.assert_array_equal(s.observed.values, s.latent)

    def test_radial_moment_matches_noise(self):
        sigma = 0.05
        s = gen_circle_chain(25.0, T=1000, noise=NoiseSpec(sigma), seed=5)
        radial_sq = (np.linalg.norm(s.observed.values, axis=1) - 1.0) ** 2
        assert abs(radial_sq.mean() - sigma**2) <= 0.5 * sigma**2

    def test_periodic_equidistribution(self):
        s = gen_circle_chain(0.0, T=10_000, noise=ZERO, seed=7, mixing="periodic", jitter=0.0)
        theta = np.mod(np.arctan2(s.latent[:, 1], s.latent[:, 0]), 2 * np.pi)
        for arc_len in (np.pi / 4, np.pi / 7):
            for start in np.linspace(0, 2 * np.pi, 16, endpoint=False):
                end = start + arc_len
                inside = np.mod(theta - start, 2 * np.pi) < arc_len
                frac = inside.mean()
                assert abs(frac - arc_len / (2 * np.pi)) <= 0.1 * arc_len / (2 * np.pi), (
                    f"arc [{start:.2f}, {end:.2f})"
                )

    def test_unknown_regime(self):
        with pytest.raises(InvalidArgumentError):
            gen_circle_chain(1.0, T=10, noise=ZERO, seed=0, mixing="chaotic")


class TestManifoldDistance:
    def test_circle_example(self):
        assert manifold_distance(np.array([[2.0, 0.0]]), "circle")[0] == pytest.approx(1.0)

    def test_subspace_example(self):
        d = manifold_distance(np.array([[3.0, 4.0]]), "line-subspace",
                              {"basis": np.array([[1.0], [0.0]])})
        assert d[0] == pytest.approx(4.0)

    def test_graph_surrogate_example(self):
        params = {"Phi": np.array([[1.0]]), "g": lambda u: np.atleast_1d(u) ** 2}
        d = manifold_distance(np.array([[2.0, 5.0]]), "graph-of-g", params)
        assert d[0] == pytest.approx(1.0)

    def test_graph_exact_against_cubic_oracle(self):
        # distance from (2, 5) to the parabola y = x^2: the optimal abscissa
        # solves 2u^3 - 9u - 2 = 0 (stationarity), solved here independently
        params = {"Phi": np.array([[1.0]]), "g": lambda u: np.atleast_1d(u) ** 2}
        d = manifold_distance(np.array([[2.0, 5.0]]), "graph-of-g", params, exact=True)
        roots = np.roots([2.0, 0.0, -9.0, -2.0])
        real = roots[np.abs(roots.imag) < 1e-12].real
        cand = np.sqrt((2.0 - real) ** 2 + (5.0 - real**2) ** 2)
        assert d[0] == pytest.approx(cand.min(), abs=1e-6)
        assert d[0] < 1.0  # strictly better than the surrogate

    def test_unknown_tag(self):
        with pytest.raises(InvalidArgumentError):
            manifold_distance(np.zeros((1, 2)), "torus")


class TestDeterminismAndDispatch:
    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_seeded_determinism(self, seed):
        a = gen_circle_chain(25.0, 50, NoiseSpec(0.05), seed)
        b = gen_circle_chain(25.0, 50, NoiseSpec(0.05), seed)
        np.testing.assert_array_equal(a.observed.values, b.observed.values)

    def test_different_seeds_differ(self):
        a = gen_circle_chain(25.0, 50, NoiseSpec(0.05), 0)
        b = gen_circle_chain(25.0, 50, NoiseSpec(0.05), 1)
        assert not np.array_equal(a.observed.values, b.observed.values)

    def test_noise_mean_concentration(self):
        sigma, T = 0.3, 4000
        s = gen_circle_chain(25.0, T, NoiseSpec(sigma), seed=11)
        noise = s.observed.values - s.latent
        assert np.all(np.abs(noise.mean(axis=0)) <= 3 * sigma / np.sqrt(T))

    def test_make_sample_dispatch(self):
        s = make_sample("circle", 30, 0.01, 3, mixing="periodic")
        assert s.observed.length == 30
        s2 = make_sample("ar", 30, 0.1, 3, coeffs=[0.5], init=[1.0])
        assert s2.observed.components == 1
        with pytest.raises(InvalidArgumentError):
            make_sample("swissroll", 10, 0.1, 0)
