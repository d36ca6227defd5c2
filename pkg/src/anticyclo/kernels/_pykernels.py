"""Reference kernels on flat integer vectors.

A ring element of Z/m[x]/(h)[pi]/(E) is a flat list of length e*f, with the
coefficient of pi^i x^r at index i*f + r.  ``rel`` gives pi^e = sum rel[i] pi^i
and ``hred`` gives x^f = sum hred[r] x^r.  All outputs are reduced mod m.
"""

from math import comb


def _xreduce(row, f, hred):
    # row has length 2f-1; fold x^d for d >= f back down
    for d in range(len(row) - 1, f - 1, -1):
        t = row[d]
        if t:
            base = d - f
            for r in range(f):
                row[base + r] += t * hred[r]
    del row[f:]
    return row


def cyc_mul(a, b, e, f, rel, hred, m):
    if f == 1:
        prod = [0] * (2 * e - 1)
        for i in range(e):
            ai = a[i]
            if ai:
                for j in range(e):
                    bj = b[j]
                    if bj:
                        prod[i + j] += ai * bj
        for k in range(2 * e - 2, e - 1, -1):
            t = prod[k] % m
            if t:
                base = k - e
                for i in range(e):
                    prod[base + i] += t * rel[i]
        return [x % m for x in prod[:e]]
    w = 2 * f - 1
    prod = [[0] * w for _ in range(2 * e - 1)]
    for i in range(e):
        ai = a[i * f:(i + 1) * f]
        if not any(ai):
            continue
        for j in range(e):
            bj = b[j * f:(j + 1) * f]
            if not any(bj):
                continue
            row = prod[i + j]
            for r in range(f):
                if ai[r]:
                    for s in range(f):
                        row[r + s] += ai[r] * bj[s]
    rows = [[c % m for c in _xreduce(row, f, hred)] for row in prod]
    for k in range(2 * e - 2, e - 1, -1):
        t = rows[k]
        if any(t):
            base = k - e
            for i in range(e):
                ri = rel[i]
                if ri:
                    tgt = rows[base + i]
                    for r in range(f):
                        tgt[r] += t[r] * ri
    out = []
    for row in rows[:e]:
        out.extend(c % m for c in row)
    return out


def cyc_pow(x, k, e, f, rel, hred, m):
    result = [0] * (e * f)
    result[0] = 1 % m
    base = list(x)
    while k:
        if k & 1:
            result = cyc_mul(result, base, e, f, rel, hred, m)
        k >>= 1
        if k:
            base = cyc_mul(base, base, e, f, rel, hred, m)
    return result


def cyc_powers(x, count, e, f, rel, hred, m):
    """[x^0, ..., x^(count-1)]."""
    one = [0] * (e * f)
    one[0] = 1 % m
    out = [one]
    cur = one
    for _ in range(1, count):
        cur = cyc_mul(cur, x, e, f, rel, hred, m)
        out.append(cur)
    return out


def _scale_add(acc, c, v, f, hred, m):
    # acc += c * v where c is a base scalar (f-vector)
    if f == 1:
        c0 = c[0]
        if c0:
            for i, vi in enumerate(v):
                if vi:
                    acc[i] += c0 * vi
        return
    e = len(v) // f
    for i in range(e):
        vi = v[i * f:(i + 1) * f]
        if not any(vi):
            continue
        row = [0] * (2 * f - 1)
        for r in range(f):
            if c[r]:
                for s in range(f):
                    row[r + s] += c[r] * vi[s]
        _xreduce(row, f, hred)
        for r in range(f):
            acc[i * f + r] += row[r]


def cyc_eval_scalar(cs, x, e, f, rel, hred, m):
    """sum cs[j] x^j for base-scalar coefficients (each an f-vector), by Horner."""
    n = e * f
    acc = [0] * n
    for j in range(len(cs) - 1, -1, -1):
        if any(acc):
            acc = cyc_mul(acc, x, e, f, rel, hred, m)
        c = cs[j]
        for r in range(f):
            acc[r] = (acc[r] + c[r]) % m
    return acc


def cyc_horner(coeffs, x, e, f, rel, hred, m):
    """sum coeffs[j] x^j for full ring coefficients."""
    acc = [0] * (e * f)
    for j in range(len(coeffs) - 1, -1, -1):
        if any(acc):
            acc = cyc_mul(acc, x, e, f, rel, hred, m)
        c = coeffs[j]
        acc = [(u + v) % m for u, v in zip(acc, c)]
    return acc


def cyc_taylor(cs, a, z, e, f, rel, hred, m):
    """Coefficients of T^k in sum_j cs[j] (a + z T)^j, cs base scalars."""
    M = len(cs)
    n = e * f
    apow = cyc_powers(a, M, e, f, rel, hred, m)
    zk = [0] * n
    zk[0] = 1 % m
    out = []
    for k in range(M):
        acc = [0] * n
        for j in range(k, M):
            c = cs[j]
            if not any(c):
                continue
            b = comb(j, k) % m
            if b:
                _scale_add(acc, [b * ci for ci in c], apow[j - k], f, hred, m)
        acc = [v % m for v in acc]
        if k:
            zk = cyc_mul(zk, z, e, f, rel, hred, m)
        out.append(cyc_mul(acc, zk, e, f, rel, hred, m) if any(acc) else acc)
    return out


def series_mul(a, b, L, m):
    """Product of integer polynomials truncated to length L, mod m."""
    out = [0] * L
    for i, ai in enumerate(a[:L]):
        if ai:
            for j in range(min(len(b), L - i)):
                out[i + j] += ai * b[j]
    return [x % m for x in out]
