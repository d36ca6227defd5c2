"""Hot loops for cyclotomic ring arithmetic.

The compiled extension is used when it imports and the modulus fits in 31
bits; otherwise the pure-Python reference runs.  Set ``ANTICYCLO_PURE=1`` to
force the reference implementation.
"""

import os

from . import _pykernels as py

BACKEND = "python"
_c = None
if not os.environ.get("ANTICYCLO_PURE"):
    try:
        from . import _ckernels as _c
        BACKEND = "cython"
    except ImportError:
        _c = None

_LIMIT = 1 << 31


def _pick(m):
    return _c if (_c is not None and m < _LIMIT) else py


def cyc_mul(a, b, e, f, rel, hred, m):
    return _pick(m).cyc_mul(a, b, e, f, rel, hred, m)


def cyc_pow(x, k, e, f, rel, hred, m):
    return _pick(m).cyc_pow(x, k, e, f, rel, hred, m)


def cyc_powers(x, count, e, f, rel, hred, m):
    return _pick(m).cyc_powers(x, count, e, f, rel, hred, m)


def cyc_eval_scalar(cs, x, e, f, rel, hred, m):
    return _pick(m).cyc_eval_scalar(cs, x, e, f, rel, hred, m)


def cyc_horner(coeffs, x, e, f, rel, hred, m):
    return _pick(m).cyc_horner(coeffs, x, e, f, rel, hred, m)


def cyc_taylor(cs, a, z, e, f, rel, hred, m):
    return _pick(m).cyc_taylor(cs, a, z, e, f, rel, hred, m)


def series_mul(a, b, L, m):
    return _pick(m).series_mul(a, b, L, m)
