"""Synthetic inputs: Dirac mixtures and the Eisenstein-family CM fixture."""

from __future__ import annotations

import random

from .assembly import CMClassData, FamilyTExp, SingleVarMeasure, TwoVarMeasure, build_two_var
from .measures import PowerSeries
from .modforms import LambdaQExp, eisenstein_family
from .padic import PadicContext, padic_context
from .quadratic import class_group, prime_to_representative, reduce_form


def random_series(ctx: PadicContext, M: int, rng: random.Random, exact: bool = True) -> PowerSeries:
    mod = ctx.modulus
    return PowerSeries.from_ints(ctx, [rng.randrange(mod) for _ in range(M)], exact=exact)


def dirac_mixture(ctx: PadicContext, weights: dict, M: int | None = None) -> PowerSeries:
    """sum_a w_a (1+T)^a, a polynomial of degree max(a)."""
    L = max(max(weights) + 1, M or 0)
    acc = PowerSeries(ctx, [ctx.zero() for _ in range(L)], True)
    for a, w in weights.items():
        acc = acc + PowerSeries.dirac(ctx, a, L).scale(ctx.coerce(w))
    return acc


def unit_dirac_mixture(ctx: PadicContext, M: int, rng: random.Random) -> PowerSeries:
    p = ctx.p
    ws = {a: rng.randrange(ctx.modulus) for a in range(1, M) if a % p}
    return dirac_mixture(ctx, ws, M)


def eisenstein_cm_classes(D: int = -11, p: int = 5, c: int = 1, a0: int = 2, N: int = 6,
                          M_T: int = 8, nmax: int = 25, scalars=None) -> tuple:
    """One CMClassData per class of the order, all carrying the p-depleted
    Eisenstein family as their two-variable t-expansion.

    ``scalars`` maps j to (c_j, d_j); the default is (1, 2) for every class.
    """
    ctx = padic_context(p, N)
    F = eisenstein_family(a0, ctx, nmax, M_T)
    texp = FamilyTExp.from_lambda_form(F, p, nmax)
    classes = []
    for j, A in enumerate(class_group(c * c * D).elements, start=1):
        rep = reduce_form(A)
        if rep.a % p == 0:
            rep = prime_to_representative(rep, p)
        cj, dj = (scalars or {}).get(j, (1, 2))
        classes.append(CMClassData(j, rep, ctx.coerce(cj), ctx.coerce(dj), texp))
    return ctx, classes


def eisenstein_two_var(k0: int, **kw) -> TwoVarMeasure:
    D = kw.get("D", -11)
    p = kw.get("p", 5)
    c = kw.get("c", 1)
    ctx, classes = eisenstein_cm_classes(**kw)
    return build_two_var(classes, k0, p, D, c, ctx)


def dirac_single_var(weights_per_class: list, D: int = -11, p: int = 5, c: int = 1, N: int = 6,
                     M: int = 25, lam=(1, 1)) -> SingleVarMeasure:
    ctx = padic_context(p, N)
    classes = []
    for j, (A, ws) in enumerate(zip(class_group(c * c * D).elements, weights_per_class), start=1):
        classes.append(CMClassData(j, A, ctx.coerce(lam[0]), ctx.coerce(lam[1]),
                                   dirac_mixture(ctx, ws, M)))
    return SingleVarMeasure(classes, p, D, c, ctx, 2)
