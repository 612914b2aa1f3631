"""Backend parity tests: the compiled kernels and the numpy fallback must
agree on every kernel and on whole fits, and each must be deterministic."""

import numpy as np
import pytest

from pocsclust import (
    ClusterConfig,
    available_backends,
    active_backend,
    backend,
    fcm_fit,
    kmeans_fit,
    pocs_fit,
    set_backend,
)
from pocsclust import _kernels_np

pytestmark = pytest.mark.skipif(
    "compiled" not in available_backends(),
    reason="compiled kernel extension not built",
)


@pytest.fixture
def kernel_pair():
    from pocsclust import _kernels_cy

    return _kernels_cy, _kernels_np


@pytest.fixture
def instance():
    rng = np.random.default_rng(90)
    X = np.ascontiguousarray(rng.normal(size=(120, 5)) * 3)
    C = np.ascontiguousarray(rng.normal(size=(4, 5)) * 3)
    labels = rng.integers(0, 4, size=120).astype(np.int64)
    U = rng.uniform(0.01, 1.0, size=(120, 4))
    U /= U.sum(axis=1, keepdims=True)
    return X, C, labels, U


class TestKernelParity:
    def test_assign_labels(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, _, _ = instance
        la, da = cy.assign_labels(X, C)
        lb, db = np_k.assign_labels(X, C)
        assert np.array_equal(la, lb)
        assert np.allclose(da, db, rtol=1e-12, atol=1e-12)

    def test_centroid_sums(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, _, labels, _ = instance
        sa, ca = cy.centroid_sums(X, labels, 4)
        sb, cb = np_k.centroid_sums(X, labels, 4)
        assert np.array_equal(ca, cb)
        assert np.allclose(sa, sb, rtol=1e-12)

    def test_pocs_update_all(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, labels, _ = instance
        assert np.allclose(
            cy.pocs_update_all(X, labels, C),
            np_k.pocs_update_all(X, labels, C),
            rtol=1e-12,
        )

    def test_pocs_objective(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, labels, _ = instance
        a = cy.pocs_objective(X, labels, C)
        b = np_k.pocs_objective(X, labels, C)
        assert a == pytest.approx(b, rel=1e-12)

    def test_assignment_errors(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, labels, _ = instance
        assert cy.assignment_errors(X, labels, C) == pytest.approx(
            np_k.assignment_errors(X, labels, C), rel=1e-12
        )

    def test_fcm_memberships(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, _, _ = instance
        assert np.allclose(
            cy.fcm_memberships(X, C, 2.0), np_k.fcm_memberships(X, C, 2.0), rtol=1e-10, atol=1e-12
        )

    def test_fcm_memberships_zero_distance_rows(self, kernel_pair):
        cy, np_k = kernel_pair
        X = np.array([[1.0, 0.0], [5.0, 0.0]])
        C = np.array([[1.0, 0.0], [1.0, 0.0], [9.0, 0.0]])
        a = cy.fcm_memberships(X, C, 2.0)
        b = np_k.fcm_memberships(X, C, 2.0)
        assert np.allclose(a, b, atol=1e-15)
        assert np.allclose(a[0], [0.5, 0.5, 0.0], atol=1e-15)

    def test_fcm_centers(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, _, U = instance
        assert np.allclose(
            cy.fcm_centers(X, U, 2.0, C), np_k.fcm_centers(X, U, 2.0, C), rtol=1e-12
        )

    def test_fcm_objective(self, kernel_pair, instance):
        cy, np_k = kernel_pair
        X, C, _, U = instance
        assert cy.fcm_objective(X, C, U, 2.0) == pytest.approx(
            np_k.fcm_objective(X, C, U, 2.0), rel=1e-12
        )


class TestBackendSwitch:
    def test_switch_and_restore(self):
        assert active_backend() in ("compiled", "numpy")
        original = active_backend()
        try:
            set_backend("numpy")
            assert active_backend() == "numpy"
            assert backend.kernels().NAME == "numpy"
            set_backend("compiled")
            assert active_backend() == "compiled"
        finally:
            set_backend(original)

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            set_backend("gpu")

    def test_available_backends_contains_both(self):
        assert set(available_backends()) == {"compiled", "numpy"}


class TestCrossBackendFits:
    @staticmethod
    def _data():
        rng = np.random.default_rng(91)
        centers = np.array([[0.0, 0.0, 0.0], [6.0, 0.0, 0.0], [0.0, 7.0, 0.0]])
        parts = [rng.normal(loc=c, scale=1.1, size=(40, 3)) for c in centers]
        return np.vstack(parts)

    def _run_both(self, fit, *args):
        original = active_backend()
        try:
            set_backend("compiled")
            a = fit(*args)
            set_backend("numpy")
            b = fit(*args)
        finally:
            set_backend(original)
        return a, b

    def test_pocs_fit_agreement(self):
        data = self._data()
        cfg = ClusterConfig(k=3, rng_seed=7)
        a, b = self._run_both(pocs_fit, data, cfg)
        assert np.array_equal(a.assignments, b.assignments)
        assert np.allclose(a.prototypes, b.prototypes, rtol=1e-9, atol=1e-9)
        assert a.sse == pytest.approx(b.sse, rel=1e-9)
        assert a.own_objective == pytest.approx(b.own_objective, rel=1e-9)
        assert a.iterations == b.iterations

    def test_kmeans_fit_agreement(self):
        data = self._data()
        cfg = ClusterConfig(k=3, rng_seed=8)
        a, b = self._run_both(kmeans_fit, data, cfg)
        assert np.array_equal(a.assignments, b.assignments)
        assert np.allclose(a.prototypes, b.prototypes, rtol=1e-9, atol=1e-9)
        assert a.sse == pytest.approx(b.sse, rel=1e-9)

    def test_fcm_fit_agreement(self):
        data = self._data()
        cfg = ClusterConfig(k=3, rng_seed=9)
        a, b = self._run_both(fcm_fit, data, cfg)
        assert np.allclose(a.prototypes, b.prototypes, rtol=1e-8, atol=1e-8)
        assert np.allclose(a.memberships, b.memberships, rtol=1e-8, atol=1e-8)
        assert a.objective == pytest.approx(b.objective, rel=1e-8)

    def test_each_backend_is_bit_deterministic(self):
        data = self._data()
        cfg = ClusterConfig(k=3, rng_seed=10)
        original = active_backend()
        try:
            for name in available_backends():
                set_backend(name)
                a = pocs_fit(data, cfg)
                b = pocs_fit(data, cfg)
                assert np.array_equal(a.prototypes, b.prototypes), name
                assert a.sse == b.sse, name
        finally:
            set_backend(original)
