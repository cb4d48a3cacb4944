# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of the pure-Python kernel.

Same raw data contract, same memo caches, same normal forms; the test
suite cross-checks the two implementations on random inputs.  Arithmetic
stays on Python ints on purpose: numerators and denominators routinely
outgrow 64 bits in long products, so the win here is compiled dispatch
and inlined accumulation, not machine integers.
"""

from math import gcd as _gcd

KERNEL_NAME = "cython"

_ZERO3 = (0, 0, 0)
_ONE4 = (1, 0, 1, 0)


# ---------------------------------------------------------------------------
# Gaussian rationals: triples (a, b, d) meaning (a + b*i)/d, d > 0, reduced.


cpdef tuple g_norm(a, b, d):
    if a == 0 and b == 0:
        return (0, 0, 1)
    if d < 0:
        a, b, d = -a, -b, -d
    g = _gcd(_gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


cpdef tuple g_add(tuple x, tuple y):
    return g_norm(x[0] * y[2] + y[0] * x[2], x[1] * y[2] + y[1] * x[2],
                  x[2] * y[2])


cpdef tuple g_mul(tuple x, tuple y):
    return g_norm(x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0],
                  x[2] * y[2])


cpdef tuple g_neg(tuple x):
    return (-x[0], -x[1], x[2])


cpdef tuple g_inv(tuple x):
    n = x[0] * x[0] + x[1] * x[1]
    if n == 0:
        raise ZeroDivisionError("inverse of zero")
    return g_norm(x[0] * x[2], -x[1] * x[2], n)


cdef inline tuple _g_mul4(tuple x, tuple y):
    # 4-tuples (a, b, d, hbar_power)
    cdef tuple g = g_mul(x[:3], y[:3])
    return (g[0], g[1], g[2], x[3] + y[3])


# ---------------------------------------------------------------------------
# Sparse exponent keys


cpdef tuple k_mul(tuple ka, tuple kb):
    if not ka:
        return kb
    if not kb:
        return ka
    cdef list out = []
    cdef Py_ssize_t i = 0, j = 0, na = len(ka), nb = len(kb)
    cdef tuple ta, tb
    while i < na and j < nb:
        ta = ka[i]
        tb = kb[j]
        if ta[0] == tb[0]:
            e = ta[1] + tb[1]
            if e:
                out.append((ta[0], e))
            i += 1
            j += 1
        elif ta[0] < tb[0]:
            out.append(ta)
            i += 1
        else:
            out.append(tb)
            j += 1
    while i < na:
        out.append(ka[i])
        i += 1
    while j < nb:
        out.append(kb[j])
        j += 1
    return tuple(out)


cpdef tuple k_bump(tuple key, idx, delta):
    if not delta:
        return key
    cdef list out = []
    cdef bint done = False
    cdef tuple t
    for t in key:
        if t[0] == idx:
            e = t[1] + delta
            done = True
            if e:
                out.append((t[0], e))
        elif t[0] > idx and not done:
            out.append((idx, delta))
            done = True
            out.append(t)
        else:
            out.append(t)
    if not done:
        out.append((idx, delta))
    return tuple(out)


# ---------------------------------------------------------------------------
# Raw scalar coefficients


cpdef dict sc_add_raw(dict x, dict y):
    if not x:
        return dict(y)
    cdef dict out = dict(x)
    cdef tuple g, cur, s
    for k, g in y.items():
        cur = out.get(k)
        if cur is None:
            out[k] = g
        else:
            s = g_add(cur, g)
            if s[0] == 0 and s[1] == 0:
                del out[k]
            else:
                out[k] = s
    return out


cpdef dict sc_neg_raw(dict x):
    cdef dict out = {}
    cdef tuple g
    for k, g in x.items():
        out[k] = (-g[0], -g[1], g[2])
    return out


cpdef dict sc_mul_raw(dict x, dict y):
    cdef dict out = {}
    cdef tuple kx, ky, gx, gy, g, k, cur, s
    for kx, gx in x.items():
        for ky, gy in y.items():
            g = g_mul(gx, gy)
            if g[0] == 0 and g[1] == 0:
                continue
            k = k_mul(kx, ky)
            cur = out.get(k)
            if cur is None:
                out[k] = g
            else:
                s = g_add(cur, g)
                if s[0] == 0 and s[1] == 0:
                    del out[k]
                else:
                    out[k] = s
    return out


cpdef sc_iadd_scaled(dict out, dict x, tuple g, hbar_idx, hpow):
    """In place: out += x * g * hbar**hpow."""
    cdef tuple k, gx, gv, cur, s
    for k, gx in x.items():
        gv = g_mul(gx, g)
        if gv[0] == 0 and gv[1] == 0:
            continue
        if hpow:
            k = k_bump(k, hbar_idx, hpow)
        cur = out.get(k)
        if cur is None:
            out[k] = gv
        else:
            s = g_add(cur, gv)
            if s[0] == 0 and s[1] == 0:
                del out[k]
            else:
                out[k] = s


# ---------------------------------------------------------------------------
# Spin words, same two modes as the reference kernel.

_EPS = {
    (0, 1): (2, 1),
    (1, 0): (2, -1),
    (1, 2): (0, 1),
    (2, 1): (0, -1),
    (2, 0): (1, 1),
    (0, 2): (1, -1),
}

_APPEND = {}
_SPINMUL = {}


cdef inline _acc(dict res, tuple w, tuple v):
    cdef tuple cur = res.get(w)
    cdef tuple s
    if cur is None:
        res[w] = v
    else:
        s = g_add(cur[:3], v[:3])
        if s[0] == 0 and s[1] == 0:
            del res[w]
        else:
            res[w] = (s[0], s[1], s[2], v[3])


cdef dict _append_one(tuple word, int axis):
    # normal-ordered expansion of word * S_axis (abstract mode)
    cdef tuple key = (word, axis)
    cdef dict res
    cdef tuple w, w2, v, v2
    hit = _APPEND.get(key)
    if hit is not None:
        return hit
    a, b, c = word
    if axis == 2:
        res = {(a, b, c + 1): _ONE4}
    elif axis == 1:
        if c == 0:
            res = {(a, b + 1, 0): _ONE4}
        else:
            # S_z^c S_y = (S_z^{c-1} S_y) S_z - i hbar S_z^{c-1} S_x
            res = {}
            for w, v in _append_one((a, b, c - 1), 1).items():
                _acc(res, (w[0], w[1], w[2] + 1), v)
            for w, v in _append_one((a, b, c - 1), 0).items():
                _acc(res, w, _g_mul4(v, (0, -1, 1, 1)))
    else:
        if c > 0:
            # S_z^c S_x = (S_z^{c-1} S_x) S_z + i hbar S_z^{c-1} S_y
            res = {}
            for w, v in _append_one((a, b, c - 1), 0).items():
                _acc(res, (w[0], w[1], w[2] + 1), v)
            for w, v in _append_one((a, b, c - 1), 1).items():
                _acc(res, w, _g_mul4(v, (0, 1, 1, 1)))
        elif b > 0:
            # S_y^b S_x = (S_y^{b-1} S_x) S_y - i hbar S_y^{b-1} S_z
            res = {}
            for w, v in _append_one((a, b - 1, 0), 0).items():
                for w2, v2 in _append_one(w, 1).items():
                    _acc(res, w2, _g_mul4(v, v2))
            _acc(res, (a, b - 1, 1), (0, -1, 1, 1))
        else:
            res = {(a + 1, 0, 0): _ONE4}
    _APPEND[key] = res
    return res


cdef dict _half_append(tuple word, int axis):
    # word * S_axis in the spin-1/2 quotient (word degree <= 1)
    cdef list w
    cdef int u
    if word == _ZERO3:
        w = [0, 0, 0]
        w[axis] = 1
        return {tuple(w): _ONE4}
    u = 0 if word[0] else (1 if word[1] else 2)
    if u == axis:
        return {_ZERO3: (1, 0, 4, 2)}
    w_axis, sign = _EPS[(u, axis)]
    w = [0, 0, 0]
    w[w_axis] = 1
    return {tuple(w): (0, sign, 2, 1)}


cpdef tuple spin_mul(tuple sa, tuple sb, bint half):
    """Product of two spin words, flattened to
    ``(w0, w1, w2, a, b, d, hbar_power)`` tuples."""
    cdef tuple key = (sa, sb, half)
    cdef dict cur, nxt
    cdef tuple w, w2, v, v2
    cdef int axis
    cdef Py_ssize_t rep
    hit = _SPINMUL.get(key)
    if hit is not None:
        return hit
    cur = {sa: _ONE4}
    for axis in range(3):
        for rep in range(sb[axis]):
            nxt = {}
            if half:
                for w, v in cur.items():
                    for w2, v2 in _half_append(w, axis).items():
                        _acc(nxt, w2, _g_mul4(v, v2))
            else:
                for w, v in cur.items():
                    for w2, v2 in _append_one(w, axis).items():
                        _acc(nxt, w2, _g_mul4(v, v2))
            cur = nxt
    cdef list flat = []
    for w, v in sorted(cur.items()):
        flat.append((w[0], w[1], w[2], v[0], v[1], v[2], v[3]))
    cdef tuple out = tuple(flat)
    _SPINMUL[key] = out
    return out


cpdef tuple spin_word_half(tuple word):
    """Expand an abstract spin word in the spin-1/2 quotient."""
    return spin_mul(_ZERO3, word, True)


# ---------------------------------------------------------------------------
# Momentum past position / radial factors, memoized flat like the
# reference kernel:
# p_u (pos, rad) = (pos, rad) p_u - i hbar pos_u (pos - e_u, rad)
#                - i hbar rad (pos + e_u, rad - 2)

_PPAST = {}


cdef inline _acc3(dict res, tuple k, tuple v):
    cdef tuple cur = res.get(k)
    cdef tuple s
    if cur is None:
        res[k] = v
    else:
        s = g_add(cur[:3], v[:3])
        if s[0] == 0 and s[1] == 0:
            del res[k]
        else:
            res[k] = (s[0], s[1], s[2], v[3])


cdef tuple _p_past(tuple mom, tuple pos, rad):
    cdef tuple key = (mom, pos, rad)
    cdef dict cur, nxt
    cdef tuple kk, v, p, m
    cdef list macc, p2, p3
    cdef int axis
    cdef Py_ssize_t rep
    hit = _PPAST.get(key)
    if hit is not None:
        return hit
    cur = {(pos, rad, _ZERO3): _ONE4}
    for axis in (2, 1, 0):
        for rep in range(mom[axis]):
            nxt = {}
            for kk, v in cur.items():
                p = kk[0]
                r = kk[1]
                m = kk[2]
                macc = list(m)
                macc[axis] += 1
                _acc3(nxt, (p, r, tuple(macc)), v)
                bu = p[axis]
                if bu:
                    p2 = list(p)
                    p2[axis] -= 1
                    _acc3(nxt, (tuple(p2), r, m), _g_mul4(v, (0, -bu, 1, 1)))
                if r:
                    p3 = list(p)
                    p3[axis] += 1
                    _acc3(nxt, (tuple(p3), r - 2, m), _g_mul4(v, (0, -r, 1, 1)))
            cur = nxt
    cdef list flat = []
    for kk, v in sorted(cur.items()):
        p = kk[0]
        m = kk[2]
        flat.append((p[0], p[1], p[2], kk[1], m[0], m[1], m[2],
                     v[0], v[1], v[2], v[3]))
    cdef tuple out = tuple(flat)
    _PPAST[key] = out
    return out


# ---------------------------------------------------------------------------
# Full product on term dicts


cpdef dict expr_mul(dict ta, dict tb, bint half, hbar_idx):
    cdef dict out = {}
    cdef dict ca, cb, cab, tgt
    cdef tuple sig_a, sig_b, ma, sa, spins, q, w, base, sig, gq, g
    for sig_a, ca in ta.items():
        ma = sig_a[4:7]
        sa = sig_a[7:10]
        for sig_b, cb in tb.items():
            cab = sc_mul_raw(ca, cb)
            if not cab:
                continue
            spins = spin_mul(sa, sig_b[7:10], half)
            for q in _p_past(ma, sig_b[0:3], sig_b[3]):
                base = (
                    sig_a[0] + q[0],
                    sig_a[1] + q[1],
                    sig_a[2] + q[2],
                    sig_a[3] + q[3],
                    q[4] + sig_b[4],
                    q[5] + sig_b[5],
                    q[6] + sig_b[6],
                )
                gq = (q[7], q[8], q[9])
                hq = q[10]
                for w in spins:
                    sig = base + (w[0], w[1], w[2])
                    g = g_mul(gq, (w[3], w[4], w[5]))
                    if g[0] == 0 and g[1] == 0:
                        continue
                    tgt = out.get(sig)
                    if tgt is None:
                        tgt = out[sig] = {}
                    sc_iadd_scaled(tgt, cab, g, hbar_idx, hq + w[6])
    cdef dict final = {}
    for sig, tgt in out.items():
        if tgt:
            final[sig] = tgt
    return final


def clear_caches():
    _APPEND.clear()
    _SPINMUL.clear()
    _PPAST.clear()
