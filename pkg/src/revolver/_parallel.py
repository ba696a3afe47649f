"""Low-level helpers shared by the jitted kernels: atomics, per-worker RNG, chunking."""

import numpy as np
from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic


@intrinsic
def atomic_add(typingctx, arr, idx, val):
    """``arr[idx] += val`` as a single atomic read-modify-write; returns the old value."""
    if not isinstance(arr, types.Array) or not isinstance(arr.dtype, types.Integer):
        return None
    sig = arr.dtype(arr, idx, val)

    def codegen(context, builder, signature, args):
        arr_t, idx_t, val_t = signature.args
        aryv, idxv, valv = args
        ary = context.make_array(arr_t)(context, builder, aryv)
        idxv = context.cast(builder, idxv, idx_t, types.intp)
        valv = context.cast(builder, valv, val_t, arr_t.dtype)
        ptr = cgutils.get_item_pointer(context, builder, arr_t, ary, [idxv], wraparound=False)
        return builder.atomic_rmw("add", ptr, valv, "seq_cst")

    return sig, codegen


@intrinsic
def atomic_load(typingctx, arr, idx):
    """Word-sized atomic read of ``arr[idx]``."""
    if not isinstance(arr, types.Array) or not isinstance(arr.dtype, types.Integer):
        return None
    sig = arr.dtype(arr, idx)

    def codegen(context, builder, signature, args):
        arr_t, idx_t = signature.args
        aryv, idxv = args
        ary = context.make_array(arr_t)(context, builder, aryv)
        idxv = context.cast(builder, idxv, idx_t, types.intp)
        ptr = cgutils.get_item_pointer(context, builder, arr_t, ary, [idxv], wraparound=False)
        return builder.load_atomic(ptr, "seq_cst", arr_t.dtype.bitwidth // 8)

    return sig, codegen


# splitmix64; state lives in a uint64 array slot owned by one worker
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(nogil=True, cache=True)
def next_u64(state, slot):
    z = state[slot] + _GAMMA
    state[slot] = z
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(nogil=True, cache=True)
def next_uniform(state, slot):
    """Uniform double in [0, 1) with 53 random bits."""
    return np.float64(next_u64(state, slot) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


def worker_seeds(seed, workers):
    """One independent 64-bit RNG state per worker, split from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(workers)
    return np.array([c.generate_state(1, dtype=np.uint64)[0] for c in children], dtype=np.uint64)


def chunk_bounds(n, workers):
    """Static contiguous chunks of roughly ``n / workers`` vertices."""
    return np.linspace(0, n, workers + 1).round().astype(np.int64)
