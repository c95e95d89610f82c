import math

import numpy as np
import pytest

from gyrator.core import Angle, ComplexField, nrmse
from gyrator.errors import RangeError, UsageError, WeakKeyError
from gyrator.apps import (
    CryptoKey,
    crypto_key_from_file,
    decrypt_image,
    encrypt_image,
    partial_encrypt,
    psnr,
    save_key_file,
    synthetic_image,
)
from gyrator.hgf import basis_interval

N = 64
SEEDS = tuple(np.random.default_rng(77).uniform(0.05, 0.95, 16))


@pytest.fixture(scope="module")
def image():
    step = basis_interval(N)
    return ComplexField(synthetic_image(N), step, step)


def make_key(bits=16, alpha_deg=40.0, x0=None, backend="dhgf", region=None):
    return CryptoKey(Angle.from_degrees(alpha_deg), bits,
                     tuple(x0 if x0 is not None else SEEDS[:bits]),
                     region=region, backend=backend)


class TestKeyValidation:
    def test_degenerate_seeds_rejected(self):
        for bad in (0.0, 0.5, 1.0, -0.1, 1.2):
            seeds = list(SEEDS)
            seeds[3] = bad
            with pytest.raises(WeakKeyError):
                make_key(x0=seeds)

    def test_bit_depth_bounds(self):
        with pytest.raises(RangeError):
            make_key(bits=0)
        with pytest.raises(RangeError):
            make_key(bits=33, x0=tuple(SEEDS) + tuple(SEEDS) + (0.3,))

    def test_seed_count_must_match_depth(self):
        with pytest.raises(RangeError):
            CryptoKey(Angle.from_degrees(10.0), 16, (0.3, 0.4))


class TestRoundtrip:
    @pytest.mark.parametrize("backend", ["dhgf", "ccc"])
    def test_correct_key_recovers_to_quantization_limit(self, image, backend):
        key = make_key(backend=backend)
        encrypted, meta = encrypt_image(image, key)
        restored = decrypt_image(encrypted, key, meta)
        assert psnr(image, restored) >= 40.0

    def test_bit_exact_on_the_quantized_representation(self, image):
        # running the pipeline twice reproduces the ciphertext bit for bit
        key = make_key()
        enc1, meta1 = encrypt_image(image, key)
        enc2, meta2 = encrypt_image(image, key)
        assert np.array_equal(enc1.data, enc2.data)
        assert meta1 == meta2

    def test_ciphertext_is_unrecognizable(self, image):
        key = make_key()
        encrypted, _ = encrypt_image(image, key)
        assert nrmse(image, encrypted) > 0.5

    def test_metadata_depth_mismatch_rejected(self, image):
        key = make_key()
        encrypted, meta = encrypt_image(image, key)
        other = make_key(bits=8)
        with pytest.raises(UsageError):
            decrypt_image(encrypted, other, meta)

    def test_singular_backend_angle_rejected(self, image):
        from gyrator.errors import SingularAngleError

        key = make_key(alpha_deg=179.5, backend="ccc")
        with pytest.raises(SingularAngleError):
            encrypt_image(image, key)


class TestKeySensitivity:
    def test_all_seeds_perturbed_by_1e12_break_decryption(self, image):
        key = make_key()
        encrypted, meta = encrypt_image(image, key)
        wrong = make_key(x0=[x + 1e-12 for x in SEEDS])
        assert nrmse(image, decrypt_image(encrypted, wrong, meta)) > 0.5

    def test_top_plane_seed_perturbation_breaks_decryption(self, image):
        key = make_key()
        encrypted, meta = encrypt_image(image, key)
        seeds = list(SEEDS)
        seeds[15] += 1e-12
        wrong = make_key(x0=seeds)
        assert nrmse(image, decrypt_image(encrypted, wrong, meta)) > 0.5

    def test_low_plane_seed_perturbation_only_touches_low_bits(self, image):
        # a bitwise stream cipher cannot amplify a wrong LSB plane: the
        # damage is bounded by one quantization step per coefficient
        key = make_key()
        encrypted, meta = encrypt_image(image, key)
        seeds = list(SEEDS)
        seeds[0] += 1e-12
        wrong = make_key(x0=seeds)
        err = nrmse(image, decrypt_image(encrypted, wrong, meta))
        assert err < 1e-2

    def test_angle_perturbation_breaks_decryption(self, image):
        key = make_key()
        encrypted, meta = encrypt_image(image, key)
        wrong = make_key(alpha_deg=40.0001)
        assert nrmse(image, decrypt_image(encrypted, wrong, meta)) > 0.5


class TestPartial:
    def test_full_region_equals_plain_encrypt(self, image):
        key = make_key()
        enc_full, meta_full = encrypt_image(image, key)
        enc_region, meta_region = partial_encrypt(image, key, N)
        assert np.array_equal(enc_full.data, enc_region.data)
        assert meta_region.region == N

    def test_partial_region_roundtrip(self, image):
        key = make_key(region=16)
        encrypted, meta = encrypt_image(image, key)
        restored = decrypt_image(encrypted, key, meta)
        assert psnr(image, restored) >= 40.0

    def test_partial_encryption_degrades_globally_peaking_at_center(self, image):
        key = make_key()
        encrypted, _ = partial_encrypt(image, key, 8)
        err = np.abs(encrypted.data - image.data)
        inner = err[N // 2 - 8:N // 2 + 8, N // 2 - 8:N // 2 + 8].mean()
        outer_mask = np.ones((N, N), dtype=bool)
        outer_mask[N // 2 - 8:N // 2 + 8, N // 2 - 8:N // 2 + 8] = False
        outer = err[outer_mask].mean()
        assert inner > outer          # strongest corruption near the center
        assert outer > 0.01 * inner   # but the whole frame is degraded

    def test_region_bounds_checked(self, image):
        key = make_key()
        with pytest.raises(RangeError):
            partial_encrypt(image, key, N + 1)


class TestDeterminism:
    def test_keystream_golden_prefix(self):
        # frozen from the documented iteration (x0=0.3, r=3.99, 1000 burn-in)
        from gyrator import backend

        bits = backend.logistic_keystream(0.3, 3.99, 1000, 16)
        assert list(bits) == [1, 1, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0]

    def test_backends_produce_identical_streams(self):
        from gyrator.backend import implementations

        impls = implementations()
        streams = [impl.logistic_keystream(0.71234, 3.99, 1000, 4096)
                   for impl in impls.values()]
        for s in streams[1:]:
            assert np.array_equal(streams[0], s)


class TestKeyFile:
    def test_roundtrip_preserves_seeds_bit_exactly(self, tmp_path):
        path = tmp_path / "key.txt"
        seeds = tuple(np.random.default_rng(3).uniform(0.01, 0.99, 16))
        save_key_file(path, alpha_deg=40.0, bits=16, x0=seeds)
        key = crypto_key_from_file(path)
        assert key.x0 == seeds
        assert key.alpha.degrees == pytest.approx(40.0)
        assert key.bits == 16

    def test_truncated_file_rejected(self, tmp_path):
        path = tmp_path / "short.txt"
        path.write_text("40.0\n0\n", encoding="ascii")
        with pytest.raises(UsageError):
            crypto_key_from_file(path)
