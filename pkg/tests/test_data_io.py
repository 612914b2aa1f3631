"""Data layer tests: dataset container, CSV round trips, binary image
files, and the synthetic mixture generator."""

import struct

import numpy as np
import pytest

from conftest import write_idx_images, write_idx_labels
from pocsclust import (
    DataFormatError,
    EmbeddingDataset,
    MixtureSpec,
    ValidationError,
    gen_mixture,
    load_csv,
    load_idx,
    save_csv,
    standardize,
)
from pocsclust.data_io import read_idx


class TestEmbeddingDataset:
    def test_basic_shape(self):
        ds = EmbeddingDataset(np.zeros((3, 2)), np.array([0, 1, 0]), name="toy")
        assert ds.n == 3
        assert ds.dim == 2
        assert ds.name == "toy"

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            EmbeddingDataset(np.array([[np.nan]]))

    def test_rejects_vector_features(self):
        with pytest.raises(ValidationError):
            EmbeddingDataset(np.zeros(4))

    def test_rejects_label_length_mismatch(self):
        with pytest.raises(ValidationError):
            EmbeddingDataset(np.zeros((3, 1)), np.array([0, 1]))

    def test_rejects_negative_labels(self):
        with pytest.raises(ValidationError):
            EmbeddingDataset(np.zeros((2, 1)), np.array([0, -1]))


class TestCsv:
    def test_labeled_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(60)
        ds = EmbeddingDataset(rng.normal(size=(17, 4)) * 1e3, rng.integers(0, 5, 17), name="rt")
        path = tmp_path / "rt.csv"
        save_csv(path, ds)
        back = load_csv(path)
        assert np.array_equal(back.features, ds.features)
        assert np.array_equal(back.labels, ds.labels)

    def test_unlabeled_round_trip(self, tmp_path):
        ds = EmbeddingDataset(np.random.default_rng(61).normal(size=(8, 3)))
        path = tmp_path / "plain.csv"
        save_csv(path, ds)
        back = load_csv(path)
        assert back.labels is None
        assert np.array_equal(back.features, ds.features)

    def test_headerless_round_trip(self, tmp_path):
        ds = EmbeddingDataset(np.random.default_rng(62).normal(size=(5, 2)))
        path = tmp_path / "bare.csv"
        save_csv(path, ds, header=False)
        text = path.read_text()
        assert not text.startswith("f0")
        back = load_csv(path)
        assert np.array_equal(back.features, ds.features)

    def test_auto_detects_label_column_by_header(self, tmp_path):
        path = tmp_path / "auto.csv"
        path.write_text("f0,f1,label\n1.5,2.5,0\n3.5,4.5,1\n")
        ds = load_csv(path)
        assert ds.dim == 2
        assert ds.labels.tolist() == [0, 1]

    def test_auto_without_label_header_keeps_all_columns(self, tmp_path):
        path = tmp_path / "feat.csv"
        path.write_text("a,b,c\n1,2,3\n4,5,6\n")
        ds = load_csv(path)
        assert ds.dim == 3
        assert ds.labels is None

    def test_explicit_labeled_headerless(self, tmp_path):
        path = tmp_path / "lab.csv"
        path.write_text("1.0,2.0,1\n3.0,4.0,0\n")
        ds = load_csv(path, labeled=True)
        assert ds.dim == 2
        assert ds.labels.tolist() == [1, 0]

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(DataFormatError) as exc:
            load_csv(path)
        assert "row 1" in str(exc.value)

    def test_non_numeric_cell_rejected_with_location(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3,oops\n")
        with pytest.raises(DataFormatError) as exc:
            load_csv(path)
        assert "row 1" in str(exc.value)
        assert "column 1" in str(exc.value)

    def test_non_integer_label_rejected(self, tmp_path):
        path = tmp_path / "frac.csv"
        path.write_text("1.0,0.5\n", encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_csv(path, labeled=True)

    def test_negative_label_rejected(self, tmp_path):
        path = tmp_path / "neg.csv"
        path.write_text("1.0,-1\n")
        with pytest.raises(DataFormatError):
            load_csv(path, labeled=True)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(DataFormatError):
            load_csv(path)

    def test_header_only_rejected(self, tmp_path):
        path = tmp_path / "hdr.csv"
        path.write_text("f0,f1\n")
        with pytest.raises(DataFormatError):
            load_csv(path)

    def test_non_finite_value_rejected(self, tmp_path):
        path = tmp_path / "inf.csv"
        path.write_text("1,inf\n")
        with pytest.raises(DataFormatError):
            load_csv(path)

    def test_bad_labeled_flag(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1,2\n")
        with pytest.raises(ValidationError):
            load_csv(path, labeled="yes")


class TestIdx:
    def test_hand_built_images_and_labels(self, tmp_path):
        imgs = np.arange(3 * 2 * 2, dtype=np.uint8).reshape(3, 2, 2)
        ip = tmp_path / "imgs.idx"
        lp = tmp_path / "labs.idx"
        write_idx_images(ip, imgs)
        write_idx_labels(lp, np.array([7, 0, 9], dtype=np.uint8))
        ds = load_idx(ip, lp, normalize=False)
        assert ds.n == 3
        assert ds.dim == 4
        # row-major flattening keeps pixel order
        assert ds.features[1].tolist() == [4.0, 5.0, 6.0, 7.0]
        assert ds.labels.tolist() == [7, 0, 9]

    def test_normalization_scales_to_unit_range(self, tmp_path):
        imgs = np.full((2, 1, 2), 255, dtype=np.uint8)
        ip = tmp_path / "白.idx"
        write_idx_images(ip, imgs)
        ds = load_idx(ip)
        assert np.all(ds.features == 1.0)
        assert ds.labels is None

    def test_read_idx_round_trip(self, tmp_path):
        data = np.random.default_rng(63).integers(0, 256, size=(4, 3, 5)).astype(np.uint8)
        path = tmp_path / "raw.idx"
        write_idx_images(path, data)
        assert np.array_equal(read_idx(path), data)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_bytes(struct.pack(">i", 0x12345678) + b"\x00" * 16)
        with pytest.raises(DataFormatError):
            read_idx(path)

    def test_truncated_body_rejected(self, tmp_path):
        imgs = np.zeros((2, 2, 2), dtype=np.uint8)
        path = tmp_path / "trunc.idx"
        write_idx_images(path, imgs)
        blob = path.read_bytes()
        path.write_bytes(blob[:-3])
        with pytest.raises(DataFormatError):
            read_idx(path)

    def test_truncated_header_rejected(self, tmp_path):
        path = tmp_path / "tiny.idx"
        path.write_bytes(b"\x00\x00")
        with pytest.raises(DataFormatError):
            read_idx(path)

    def test_label_count_mismatch_rejected(self, tmp_path):
        ip = tmp_path / "i.idx"
        lp = tmp_path / "l.idx"
        write_idx_images(ip, np.zeros((3, 2, 2), dtype=np.uint8))
        write_idx_labels(lp, np.zeros(4, dtype=np.uint8))
        with pytest.raises(DataFormatError):
            load_idx(ip, lp)

    def test_label_file_as_images_rejected(self, tmp_path):
        lp = tmp_path / "l.idx"
        write_idx_labels(lp, np.zeros(4, dtype=np.uint8))
        with pytest.raises(DataFormatError):
            load_idx(lp)


class TestMixtureSpec:
    def test_n_is_k_times_ppc(self):
        spec = MixtureSpec(k=3, dim=2, points_per_cluster=50)
        assert spec.n == 150

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValidationError):
            MixtureSpec(k=2, dim=2, points_per_cluster=10, sigma=0.0)
        with pytest.raises(ValidationError):
            MixtureSpec(k=2, dim=2, points_per_cluster=10, sigma=-1.0)

    def test_counts_must_be_positive(self):
        with pytest.raises(ValidationError):
            MixtureSpec(k=0, dim=2, points_per_cluster=10)
        with pytest.raises(ValidationError):
            MixtureSpec(k=2, dim=0, points_per_cluster=10)
        with pytest.raises(ValidationError):
            MixtureSpec(k=2, dim=2, points_per_cluster=0)

    def test_box_must_be_ordered(self):
        with pytest.raises(ValidationError):
            MixtureSpec(k=2, dim=2, points_per_cluster=10, center_low=6.0, center_high=5.0)
        # a degenerate box is allowed: every center lands on one point
        MixtureSpec(k=2, dim=2, points_per_cluster=10, center_low=5.0, center_high=5.0)


class TestGenMixture:
    def test_deterministic_bit_identical(self):
        spec = MixtureSpec(k=3, dim=4, points_per_cluster=20, sigma=1.5, seed=9)
        a = gen_mixture(spec)
        b = gen_mixture(spec)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_labels_are_contiguous_blocks(self):
        ds = gen_mixture(MixtureSpec(k=4, dim=2, points_per_cluster=5, seed=1))
        assert ds.labels.tolist() == sum([[j] * 5 for j in range(4)], [])

    def test_single_cluster(self):
        ds = gen_mixture(MixtureSpec(k=1, dim=3, points_per_cluster=30, seed=2))
        assert ds.n == 30
        assert set(ds.labels.tolist()) == {0}

    def test_tiny_sigma_pins_points_to_centers(self):
        spec = MixtureSpec(k=3, dim=2, points_per_cluster=10, sigma=1e-9, seed=5)
        ds = gen_mixture(spec)
        rng = np.random.default_rng(5)
        centers = rng.uniform(spec.center_low, spec.center_high, size=(3, 2))
        for j in range(3):
            block = ds.features[ds.labels == j]
            assert np.all(np.abs(block - centers[j]) < 1e-6)

    def test_cluster_means_near_centers(self):
        spec = MixtureSpec(k=3, dim=2, points_per_cluster=400, sigma=2.0, seed=7)
        ds = gen_mixture(spec)
        rng = np.random.default_rng(7)
        centers = rng.uniform(spec.center_low, spec.center_high, size=(3, 2))
        bound = 4 * spec.sigma / np.sqrt(spec.points_per_cluster)
        for j in range(3):
            mean = ds.features[ds.labels == j].mean(axis=0)
            assert np.all(np.abs(mean - centers[j]) < bound)

    def test_sample_std_near_sigma(self):
        spec = MixtureSpec(k=1, dim=3, points_per_cluster=2000, sigma=3.0, seed=8)
        ds = gen_mixture(spec)
        assert np.allclose(ds.features.std(axis=0), 3.0, rtol=0.1)

    def test_name_encodes_shape(self):
        ds = gen_mixture(MixtureSpec(k=2, dim=6, points_per_cluster=7, seed=0))
        assert ds.name == "mix-k2-d6-n14"


class TestStandardize:
    def test_zero_mean_unit_std(self):
        X = np.random.default_rng(64).normal(loc=5.0, scale=3.0, size=(200, 3))
        Z = standardize(X)
        assert np.allclose(Z.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(Z.std(axis=0), 1.0, atol=1e-12)

    def test_constant_column_only_centered(self):
        X = np.column_stack([np.full(10, 4.0), np.arange(10, dtype=np.float64)])
        Z = standardize(X)
        assert np.all(Z[:, 0] == 0.0)

    def test_dataset_passthrough_keeps_labels(self):
        ds = EmbeddingDataset(np.random.default_rng(65).normal(size=(20, 2)), np.zeros(20, dtype=np.int64), name="s")
        out = standardize(ds)
        assert isinstance(out, EmbeddingDataset)
        assert out.name == "s"
        assert np.array_equal(out.labels, ds.labels)

    def test_rejects_vector(self):
        with pytest.raises(ValidationError):
            standardize(np.arange(5, dtype=np.float64))
