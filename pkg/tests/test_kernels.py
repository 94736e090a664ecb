import numpy as np
import pytest

from homstruct._kernels import (
    available_backends,
    resolve_backend,
    roundtrip_scan,
    stage_codes,
)
from homstruct.errors import InputError
from homstruct.search import (
    invariant_prefilter,
    mask_to_structure,
    neighborhood_prefilter,
)

HAS_NUMBA = "numba" in available_backends()
needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


def reference_codes(n, masks):
    out = []
    for m in masks:
        s = mask_to_structure(n, int(m))
        if not invariant_prefilter(s):
            out.append(0)
        elif not neighborhood_prefilter(s):
            out.append(1)
        else:
            out.append(2)
    return np.array(out, dtype=np.uint8)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_numpy_kernel_matches_python_reference(n):
    masks = np.arange(1 << (n * n), dtype=np.int64)
    assert (stage_codes(masks, n, backend="numpy") == reference_codes(n, masks)).all()


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_backends_agree_exhaustively(n):
    masks = np.arange(1 << (n * n), dtype=np.int64)
    a = stage_codes(masks, n, backend="numpy")
    b = stage_codes(masks, n, backend="numba")
    assert (a == b).all()


@needs_numba
def test_backends_agree_on_sampled_5_vertex_masks():
    rng = np.random.default_rng(0)
    masks = rng.integers(0, 1 << 25, size=20000, dtype=np.int64)
    a = stage_codes(masks, 5, backend="numpy")
    b = stage_codes(masks, 5, backend="numba")
    assert (a == b).all()
    ref = reference_codes(5, masks[:200])
    assert (a[:200] == ref).all()


def test_stage_codes_rejects_bad_vertex_count():
    with pytest.raises(InputError):
        stage_codes(np.zeros(1, dtype=np.int64), 7)


def test_backend_env_flag(monkeypatch):
    monkeypatch.setenv("HOMSTRUCT_KERNEL", "numpy")
    assert resolve_backend() == "numpy"
    monkeypatch.setenv("HOMSTRUCT_KERNEL", "nonsense")
    with pytest.raises(InputError):
        resolve_backend()


def test_explicit_backend_overrides_env(monkeypatch):
    monkeypatch.setenv("HOMSTRUCT_KERNEL", "numpy")
    assert resolve_backend("numpy") == "numpy"


def euler_phi_sum(limit):
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:  # prime
            for mult in range(p, limit + 1, p):
                phi[mult] -= phi[mult] // p
    return sum(phi[1:])


@pytest.mark.parametrize("backend", available_backends())
def test_roundtrip_scan_counts_reduced_fractions(backend):
    checked, failures = roundtrip_scan(500, backend=backend)
    assert failures == 0
    assert checked == euler_phi_sum(500)


@needs_numba
def test_roundtrip_backends_agree():
    assert roundtrip_scan(800, backend="numba") == roundtrip_scan(800, backend="numpy")


def test_roundtrip_scan_sampled_against_real_api():
    from homstruct.cyclic import QZElem, prufer_decompose, prufer_recompose

    # the bulk scan and the object path must agree on a deterministic sample
    for den in range(1, 400, 7):
        for num in range(0, den, 3):
            q = QZElem(num, den)
            assert prufer_recompose(prufer_decompose(q)) == q
