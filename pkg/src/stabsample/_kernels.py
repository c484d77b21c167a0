"""Compiled hot loops (numba) for chain sampling and enumeration.

All kernels work on bit-packed chains: two little-endian uint64 word
arrays (X and Z planes) plus an int64[4] category count vector indexed by
x + 2z (0=I, 1=X, 2=Z, 3=Y). Generators are local, so each one is stored
as a short span of XOR masks (word offset + masked words); applying one
and updating the category counts costs a handful of XORs and popcounts.

Random streams are splitmix64, seeded explicitly per kernel call.
Deduplication uses an open-addressing table keyed by the 128-bit chain
content key; because that key is XOR-homomorphic (see pauli.chain_key),
the Metropolis kernel carries it along and shifts it by a per-generator
constant on every accepted move instead of rehashing the chain.
"""

from __future__ import annotations

import numba as nb
import numpy as np
from llvmlite import ir
from numba.extending import intrinsic

U64 = np.uint64

_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)

WEIGHT_TOL = 1e-9  # floats this close to the class minimum count as minimal


@intrinsic
def _popcnt64(typingctx, src):
    sig = nb.types.uint64(nb.types.uint64)

    def codegen(context, builder, signature, args):
        ctpop = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(ctpop, args)

    return sig, codegen


@nb.njit(nb.uint64(nb.uint64), cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    return z ^ (z >> U64(31))


@nb.njit(nb.types.UniTuple(nb.uint64, 2)(nb.uint64), cache=True, inline="always")
def _rng_next(state):
    state = state + _GOLDEN
    return state, _mix64(state)


@nb.njit(nb.float64(nb.uint64), cache=True, inline="always")
def _u01(word):
    # 53-bit mantissa, uniform in [0, 1)
    return np.float64(word >> U64(11)) * (1.0 / 9007199254740992.0)


@nb.njit(cache=True, inline="always")
def _table_insert(keys_hi, keys_lo, vals, used, mask, hi, lo, w):
    """Insert into the open-addressing table; return slot if new, -1 if dup."""
    idx = np.int64(hi & mask)
    while True:
        if used[idx] == 0:
            used[idx] = 1
            keys_hi[idx] = hi
            keys_lo[idx] = lo
            vals[idx] = w
            return idx
        if keys_hi[idx] == hi and keys_lo[idx] == lo:
            return np.int64(-1)
        idx = np.int64((U64(idx) + U64(1)) & mask)


@nb.njit(cache=True)
def metropolis_kernel(
    xw,
    zw,
    counts,
    key0,
    key1,
    gen_w0,
    gen_nw,
    gen_xw,
    gen_zw,
    gen_kd0,
    gen_kd1,
    alpha_x,
    alpha_y,
    beta,
    steps,
    stride,
    seed,
    keys_hi,
    keys_lo,
    vals,
    used,
    mask,
    target_w,
    chain_store_x,
    chain_store_z,
    keep_chains,
):
    """Metropolis exploration of one equivalence class.

    Runs `steps` proposal attempts; each composes the current chain with a
    uniformly random generator, accepted with min(1, exp(-beta * dw)).
    The current chain is recorded (content key -> effective weight) at
    attempt 0 and after every `stride`-th attempt; duplicates never
    increment anything. key0/key1 are the content-key lanes of the start
    chain and evolve by XOR with the per-generator deltas. If
    target_w >= 0, returns at the first record whose weight is
    <= target_w (+ tolerance). Mutates xw/zw/counts and the table arrays
    in place.

    Returns (found_step, n_unique): found_step is the attempt count at
    which the target was recorded, or -1.
    """
    n_stab = U64(gen_w0.shape[0])
    n_words = xw.shape[0]
    span = gen_xw.shape[1]

    # A generator flips at most 4 qubits, so the per-category count deltas
    # lie in [-4, 4]; tabulating exp(-beta dw) over all 9^3 delta triples
    # removes exp() from the hot loop. Entries >= 1 mean certain accept.
    acc = np.empty(9 * 9 * 9, dtype=np.float64)
    for dx in range(-4, 5):
        for dy in range(-4, 5):
            for dz in range(-4, 5):
                dw = dz + alpha_x * dx + alpha_y * dy
                idx = ((dx + 4) * 9 + (dy + 4)) * 9 + (dz + 4)
                acc[idx] = 2.0 if dw <= 0.0 else np.exp(-beta * dw)

    nxbuf = np.empty(span, dtype=np.uint64)
    nzbuf = np.empty(span, dtype=np.uint64)

    state = seed
    n_unique = np.int64(0)

    # record the start chain (attempt 0)
    w = counts[2] + alpha_x * counts[1] + alpha_y * counts[3]
    slot = _table_insert(keys_hi, keys_lo, vals, used, mask, key0, key1, w)
    if slot >= 0:
        n_unique += 1
        if keep_chains:
            for j in range(n_words):
                chain_store_x[slot, j] = xw[j]
                chain_store_z[slot, j] = zw[j]
    if target_w >= 0.0 and w <= target_w + WEIGHT_TOL:
        return np.int64(0), n_unique

    countdown = stride
    for t in range(1, steps + 1):
        state, r = _rng_next(state)
        g = np.int64(((r >> U64(32)) * n_stab) >> U64(32))

        w0 = gen_w0[g]
        nw = gen_nw[g]
        dx = np.int64(0)
        dy = np.int64(0)
        dz = np.int64(0)
        for j in range(nw):
            ox = xw[w0 + j]
            oz = zw[w0 + j]
            nx_ = ox ^ gen_xw[g, j]
            nz_ = oz ^ gen_zw[g, j]
            nxbuf[j] = nx_
            nzbuf[j] = nz_
            dx += np.int64(_popcnt64(nx_ & ~nz_)) - np.int64(_popcnt64(ox & ~oz))
            dz += np.int64(_popcnt64(nz_ & ~nx_)) - np.int64(_popcnt64(oz & ~ox))
            dy += np.int64(_popcnt64(nx_ & nz_)) - np.int64(_popcnt64(ox & oz))

        p_acc = acc[((dx + 4) * 9 + (dy + 4)) * 9 + (dz + 4)]
        accept = p_acc >= 1.0
        if not accept:
            state, r2 = _rng_next(state)
            accept = _u01(r2) < p_acc

        if accept:
            for j in range(nw):
                xw[w0 + j] = nxbuf[j]
                zw[w0 + j] = nzbuf[j]
            counts[1] += dx
            counts[2] += dz
            counts[3] += dy
            counts[0] -= dx + dy + dz
            key0 ^= gen_kd0[g]
            key1 ^= gen_kd1[g]

        countdown -= 1
        if countdown == 0:
            countdown = stride
            w = counts[2] + alpha_x * counts[1] + alpha_y * counts[3]
            slot = _table_insert(keys_hi, keys_lo, vals, used, mask, key0, key1, w)
            if slot >= 0:
                n_unique += 1
                if keep_chains:
                    for j in range(n_words):
                        chain_store_x[slot, j] = xw[j]
                        chain_store_z[slot, j] = zw[j]
            if target_w >= 0.0 and w <= target_w + WEIGHT_TOL:
                return np.int64(t), n_unique

    return np.int64(-1), n_unique


@nb.njit(cache=True)
def scramble_kernel(xw, zw, counts, gen_w0, gen_nw, gen_xw, gen_zw, n_apps, seed):
    """Compose the chain with n_apps uniformly random generators, in place."""
    n_stab = U64(gen_w0.shape[0])
    state = seed
    for _ in range(n_apps):
        state, r = _rng_next(state)
        g = np.int64(((r >> U64(32)) * n_stab) >> U64(32))
        w0 = gen_w0[g]
        dx = np.int64(0)
        dy = np.int64(0)
        dz = np.int64(0)
        for j in range(gen_nw[g]):
            ox = xw[w0 + j]
            oz = zw[w0 + j]
            nx_ = ox ^ gen_xw[g, j]
            nz_ = oz ^ gen_zw[g, j]
            dx += np.int64(_popcnt64(nx_ & ~nz_)) - np.int64(_popcnt64(ox & ~oz))
            dz += np.int64(_popcnt64(nz_ & ~nx_)) - np.int64(_popcnt64(oz & ~ox))
            dy += np.int64(_popcnt64(nx_ & nz_)) - np.int64(_popcnt64(ox & oz))
            xw[w0 + j] = nx_
            zw[w0 + j] = nz_
        counts[1] += dx
        counts[2] += dz
        counts[3] += dy
        counts[0] -= dx + dy + dz


@nb.njit(cache=True)
def enumerate_group_kernel(xw, zw, counts, gen_w0, gen_nw, gen_xw, gen_zw, hist, side):
    """Walk the full stabilizer group in Gray-code order from the seed chain.

    Applies one generator per step (the trailing-zero index of the step
    counter), so each of the 2^n_gen group elements is visited exactly
    once; `hist` accumulates chain counts indexed by
    (n_x * side + n_y) * side + n_z. Chain state is restored on exit.
    """
    n_gen = gen_w0.shape[0]
    total = np.int64(1) << n_gen

    hist[(counts[1] * side + counts[3]) * side + counts[2]] += 1
    for step in range(1, total):
        k = step
        g = 0
        while k & 1 == 0:
            k >>= 1
            g += 1
        w0 = gen_w0[g]
        for j in range(gen_nw[g]):
            ox = xw[w0 + j]
            oz = zw[w0 + j]
            nx_ = ox ^ gen_xw[g, j]
            nz_ = oz ^ gen_zw[g, j]
            counts[1] += np.int64(_popcnt64(nx_ & ~nz_)) - np.int64(_popcnt64(ox & ~oz))
            counts[2] += np.int64(_popcnt64(nz_ & ~nx_)) - np.int64(_popcnt64(oz & ~ox))
            counts[3] += np.int64(_popcnt64(nx_ & nz_)) - np.int64(_popcnt64(ox & oz))
            xw[w0 + j] = nx_
            zw[w0 + j] = nz_
        hist[(counts[1] * side + counts[3]) * side + counts[2]] += 1
    # Gray code ends one generator away from the start; undo it.
    g = n_gen - 1
    w0 = gen_w0[g]
    for j in range(gen_nw[g]):
        ox = xw[w0 + j]
        oz = zw[w0 + j]
        nx_ = ox ^ gen_xw[g, j]
        nz_ = oz ^ gen_zw[g, j]
        counts[1] += np.int64(_popcnt64(nx_ & ~nz_)) - np.int64(_popcnt64(ox & ~oz))
        counts[2] += np.int64(_popcnt64(nz_ & ~nx_)) - np.int64(_popcnt64(oz & ~ox))
        counts[3] += np.int64(_popcnt64(nx_ & nz_)) - np.int64(_popcnt64(ox & oz))
        xw[w0 + j] = nx_
        zw[w0 + j] = nz_


@nb.njit(cache=True)
def pt_kernel(
    layer_xw,
    layer_zw,
    layer_counts,
    layer_class,
    betas,
    sup_q,
    sup_cat,
    sup_len,
    log_q,
    log_cat,
    log_len,
    log_class,
    alpha_x,
    alpha_y,
    steps_per_sweep,
    total_sweeps,
    burn_sweeps,
    seed,
    class_hits,
    swap_attempts,
    swap_accepts,
):
    """Parallel tempering over layers at fixed bias and varying error rate.

    Layer ell runs Metropolis at betas[ell]; the top layer (beta == 0)
    additionally draws logical-operator moves, which are always accepted
    there. After each sweep, adjacent layers attempt a configuration swap
    with probability min(1, exp((b - b') (w - w'))); after burn-in the
    bottom layer's class label is tallied into class_hits.
    """
    n_layers = betas.shape[0]
    n_stab = sup_len.shape[0]
    n_words = layer_xw.shape[1]
    n_log = log_len.shape[0]
    top = n_layers - 1
    wl = np.empty(4, dtype=np.float64)
    wl[0] = 0.0
    wl[1] = alpha_x
    wl[2] = 1.0
    wl[3] = alpha_y

    state = seed
    for sweep in range(total_sweeps):
        for ell in range(n_layers):
            beta = betas[ell]
            n_moves = n_stab + n_log if ell == top else n_stab
            for _ in range(steps_per_sweep):
                state, r = _rng_next(state)
                m = np.int64(r % U64(n_moves))
                if m < n_stab:
                    qs = sup_q[m]
                    cs = sup_cat[m]
                    ln = sup_len[m]
                    is_logical = False
                else:
                    qs = log_q[m - n_stab]
                    cs = log_cat[m - n_stab]
                    ln = log_len[m - n_stab]
                    is_logical = True

                dw = 0.0
                for k in range(ln):
                    q = qs[k]
                    wi = q >> 6
                    bi = U64(q & 63)
                    cat = np.int64(
                        ((layer_xw[ell, wi] >> bi) & U64(1))
                        + ((layer_zw[ell, wi] >> bi) & U64(1)) * U64(2)
                    )
                    dw += wl[cat ^ np.int64(cs[k])] - wl[cat]

                accept = dw <= 0.0
                if not accept:
                    state, r2 = _rng_next(state)
                    accept = _u01(r2) < np.exp(-beta * dw)
                if accept:
                    for k in range(ln):
                        q = qs[k]
                        wi = q >> 6
                        bi = U64(q & 63)
                        cat = np.int64(
                            ((layer_xw[ell, wi] >> bi) & U64(1))
                            + ((layer_zw[ell, wi] >> bi) & U64(1)) * U64(2)
                        )
                        gc = np.int64(cs[k])
                        layer_counts[ell, cat] -= 1
                        layer_counts[ell, cat ^ gc] += 1
                        if gc & 1:
                            layer_xw[ell, wi] ^= U64(1) << bi
                        if gc & 2:
                            layer_zw[ell, wi] ^= U64(1) << bi
                    if is_logical:
                        layer_class[ell] = layer_class[ell] ^ log_class[m - n_stab]

        for ell in range(n_layers - 1):
            w_lo = (
                layer_counts[ell, 2]
                + alpha_x * layer_counts[ell, 1]
                + alpha_y * layer_counts[ell, 3]
            )
            w_hi = (
                layer_counts[ell + 1, 2]
                + alpha_x * layer_counts[ell + 1, 1]
                + alpha_y * layer_counts[ell + 1, 3]
            )
            arg = (betas[ell] - betas[ell + 1]) * (w_lo - w_hi)
            swap_attempts[ell] += 1
            do_swap = arg >= 0.0
            if not do_swap:
                state, r = _rng_next(state)
                do_swap = _u01(r) < np.exp(arg)
            if do_swap:
                swap_accepts[ell] += 1
                for j in range(n_words):
                    tx = layer_xw[ell, j]
                    layer_xw[ell, j] = layer_xw[ell + 1, j]
                    layer_xw[ell + 1, j] = tx
                    tz = layer_zw[ell, j]
                    layer_zw[ell, j] = layer_zw[ell + 1, j]
                    layer_zw[ell + 1, j] = tz
                for j in range(4):
                    tc = layer_counts[ell, j]
                    layer_counts[ell, j] = layer_counts[ell + 1, j]
                    layer_counts[ell + 1, j] = tc
                tl = layer_class[ell]
                layer_class[ell] = layer_class[ell + 1]
                layer_class[ell + 1] = tl

        if sweep >= burn_sweeps:
            class_hits[layer_class[0]] += 1
