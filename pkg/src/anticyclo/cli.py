"""Command-line front end.  Every command prints one JSON document.

Exit codes: 0 success, 1 domain or validation error, 2 precision error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .errors import DomainError, PrecisionError, PrecisionLoss


# ---------------------------------------------------------------------------
# JSON encoding of ring elements

def encode(x, pi_cap: int | None = None):
    """JSON form of a payload; ``pi_cap`` truncates cyclotomic values to that pi-precision."""
    from .cyclotomic import CycloElt
    from .measures import PowerSeries
    from .padic import PadicElt
    if isinstance(x, PadicElt):
        out = x.to_json()
        if x.ctx.f == 1:
            out["lift"] = x.lift()
        return out
    if isinstance(x, PowerSeries):
        out = x.to_json()
        out["coeffs"] = [encode(c, pi_cap) for c in x.coeffs]
        return out
    if isinstance(x, CycloElt):
        if pi_cap is not None and pi_cap < x.pi_prec:
            x = x.with_prec(pi_cap)
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [encode(v, pi_cap) for v in x]
    if isinstance(x, dict):
        return {k: encode(v, pi_cap) for k, v in x.items()}
    return x


def _emit(payload, args) -> None:
    text = json.dumps(encode(payload, getattr(args, "prec_pi", None)), indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _base(args):
    from .padic import padic_context
    return padic_context(args.p, args.prec_N)


# ---------------------------------------------------------------------------
# classgroup / theta

def cmd_classgroup(args):
    from .quadratic import class_group, fiber_classes, fundamental_part, project_class, require_split
    disc = args.disc * args.conductor ** 2
    G = class_group(disc)
    out = {"h": len(G), **G.to_json()}
    if args.levels:
        D, c = fundamental_part(disc)
        require_split(args.p, D)
        tower = []
        for n in range(1, args.levels + 1):
            top = class_group(disc * args.p ** (2 * n))
            sizes = {}
            for x in top:
                y = project_class(x, disc, args.p)
                sizes[str(y.as_tuple())] = sizes.get(str(y.as_tuple()), 0) + 1
            fib = [len(fiber_classes(A, n, args.p)) for A in G]
            tower.append({"n": n, "h": len(top), "fiber_sizes": sizes, "fiber_classes": fib})
        out["tower"] = tower
    return out


def cmd_theta(args):
    from .modforms import theta_series
    from .quadratic import ideal_count_oracle, order_of
    order = order_of(args.disc, args.conductor)
    th = theta_series(None, order, args.trunc_Q)
    out = th.to_json()
    if args.conductor == 1:
        out["matches_divisor_sum"] = all(th[n] == ideal_count_oracle(args.disc, n)
                                         for n in range(1, th.Q))
    return out


# ---------------------------------------------------------------------------
# measure

def _parse_char(desc: str, p: int):
    """'n:a:w' for omega^a times the wild exponent w mod p^n; 'quadratic' for the Legendre symbol."""
    from .characters import DirichletChar
    if desc in ("quadratic", "legendre"):
        return DirichletChar(p, 1, (p - 1) // 2, 0)
    if desc.startswith("{"):
        return DirichletChar.from_json(json.loads(desc))
    parts = [int(t) for t in desc.split(":")]
    parts += [0] * (3 - len(parts))
    return DirichletChar(p, parts[0], parts[1], parts[2])


def _input_series(args, ctx):
    from .fixtures import dirac_mixture, random_series
    from .measures import PowerSeries
    if args.infile:
        with open(args.infile) as fh:
            data = json.load(fh)
        if data["coeffs"] and isinstance(data["coeffs"][0], int):
            return PowerSeries.from_ints(ctx, data["coeffs"], exact=data.get("exact", True))
        return PowerSeries.from_json(data)
    if args.coeffs:
        return PowerSeries.from_ints(ctx, [int(t) for t in args.coeffs.split(",")])
    if args.dirac is not None:
        return dirac_mixture(ctx, {args.dirac: 1}, args.prec_M or 25)
    return random_series(ctx, args.prec_M or 25, random.Random(args.seed))


def cmd_measure(args):
    from .measures import integration_identity_check, moment, twist_pointwise
    ctx = _base(args)
    Phi = _input_series(args, ctx)
    if args.action == "moments":
        return {"moments": [moment(Phi, m) for m in range(args.m_max + 1)]}
    chi = _parse_char(args.char, args.p)
    if args.action == "twist":
        return {"char": chi.to_json(), "series": twist_pointwise(Phi, chi.table(ctx), chi.n)}
    if args.action == "mellin":
        tw = twist_pointwise(Phi, chi.table(ctx), chi.n)
        return {"char": chi.to_json(), "m": args.m, "value": moment(tw, args.m)}
    lhs, rhs, ok = integration_identity_check(Phi, chi, args.m)
    return {"char": chi.to_json(), "m": args.m, "lhs": lhs, "rhs": rhs, "agree": ok}


# ---------------------------------------------------------------------------
# family

def _eps(args):
    from .characters import GammaChar
    if not args.eps or args.eps == 1:
        return None
    j = 0
    o = args.eps
    while o % args.p == 0:
        o //= args.p
        j += 1
    if o != 1:
        raise DomainError("eps must have p-power order")
    return GammaChar(args.p, 1, j)


def cmd_family(args):
    from .modforms import (SpanBasis, delta, eisenstein_family, eisenstein_oracle, hecke_V,
                           ordinary_projector, specialize_lambda_form, tau)
    ctx = _base(args)
    if args.action == "ordinary":
        ell = {"delta5": 5, "delta11": 11}.get(args.fixture)
        if ell is None:
            raise DomainError(f"unknown fixture {args.fixture}")
        Q = max(args.trunc_Q, 40 * ell)
        D = delta(Q)
        B = SpanBasis([D, hecke_V(D, ell).truncate(Q)], ell, args.n_prec)
        R = ordinary_projector(B, ell, args.n_prec)
        out = R.to_json()
        t = tau(ell)
        out.update({"p": ell, "tau_p": t, "tau_p_is_unit": t % ell != 0})
        if R.eigenvalue is not None:
            a = R.eigenvalue
            out["alpha_beta_matches"] = (a * (t - a) - ell ** 11) % R.mod == 0
        return out
    F = eisenstein_family(args.a0, ctx, args.trunc_Q, args.prec_M or 12)
    if args.action == "specialize":
        eps = _eps(args)
        f = specialize_lambda_form(F, args.k, eps)
        out = {"weight": f.weight, "neben": f.neben, "Q": f.Q, "coeffs": f.coeffs}
        if eps is None:
            out["matches_divisor_sum"] = all(f[n] == eisenstein_oracle(args.a0, ctx, args.k, n)
                                             for n in range(1, f.Q))
        return out
    f1 = specialize_lambda_form(F, args.k)
    f2 = specialize_lambda_form(F, args.k2)
    vals = []
    for n in range(1, f1.Q):
        d = f1[n] - f2[n]
        vals.append(min(d.valuation(), d.prec))
    return {"k": args.k, "k2": args.k2, "min_valuation": min(vals), "Q": f1.Q}


# ---------------------------------------------------------------------------
# assemble / lvalue

def _load_config(path):
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _build_run(cfg, args):
    from .assembly import CMClassData, FamilyTExp, build_two_var
    from .fixtures import eisenstein_cm_classes
    from .measures import PowerSeries
    from .padic import padic_context
    p = cfg.get("p", args.p)
    D = cfg.get("D", args.disc)
    c = cfg.get("c", args.conductor)
    prec = cfg.get("precision", {})
    N = prec.get("N", args.prec_N)
    M = prec.get("M", args.prec_M or 8)
    k0 = cfg.get("branch", cfg.get("k0", 2))
    scalars = {}
    for j, spec in enumerate(cfg.get("classes", []), start=1):
        scalars[j] = (spec.get("c_j", 1), spec.get("d_j", 2))
    ctx, classes = eisenstein_cm_classes(D=D, p=p, c=c, a0=cfg.get("a0", 2), N=N, M_T=M,
                                         scalars=scalars)
    for j, spec in enumerate(cfg.get("classes", []), start=1):
        src = spec.get("texp", "fixture")
        if isinstance(src, str) and src != "fixture" and not src.startswith("fixture"):
            with open(src) as fh:
                data = json.load(fh)
            terms = {int(n): PowerSeries.from_json(s) for n, s in data["terms"].items()}
            classes[j - 1] = CMClassData(j, classes[j - 1].rep, classes[j - 1].c, classes[j - 1].d,
                                         FamilyTExp(terms, data.get("M_T", M)))
    return p, D, c, ctx, {k0 % (p - 1): build_two_var(classes, k0, p, D, c, ctx)}, classes


def _family_for(k, p, D, c, ctx, fams, classes):
    from .assembly import build_two_var
    b = k % (p - 1)
    if b not in fams:
        fams[b] = build_two_var(classes, b, p, D, c, ctx)
    return fams[b]


def _chi_from_desc(desc, D, c, p, s, m):
    from .assembly import AnticycloCharSpec
    from .characters import ClassGroupChar
    from .quadratic import class_group
    G = class_group(c * c * p ** (2 * s) * D)
    if desc in (None, "", "trivial"):
        chi = ClassGroupChar.trivial(G)
    else:
        exps = tuple(Fraction(t) for t in str(desc).split(","))
        chi = ClassGroupChar(G, exps)
    return AnticycloCharSpec(D, c, p, s, chi, m)


def cmd_assemble(args):
    from .assembly import agree, fiber_sum_expansion, single_var_L, two_var_L
    cfg = _load_config(args.config)
    p, D, c, ctx, fams, classes = _build_run(cfg, args)
    checks, values = [], []
    chars = cfg.get("chars", [{"level": 0, "chi": "trivial"}, {"level": 1, "chi": "1/4"}])
    for k in cfg.get("weights", [2, 4, 6]):
        F = _family_for(k, p, D, c, ctx, fams, classes)
        for ch in chars:
            for m in cfg.get("m", [0, 1]):
                spec = _chi_from_desc(ch.get("chi"), D, c, p, ch.get("level", 0), m)
                a = two_var_L(F, spec, k)
                sl = F.slice(k)
                b = single_var_L(sl, spec)
                values.append({"chi": spec.describe(), "k": k, "m": m, "value": a})
                checks.append({"check": "two_var_equals_slice", "k": k, "m": m,
                               "level": spec.s, "ok": agree(a, b)})
                if spec.s >= 1 and spec.finite_part().is_primitive():
                    fs = fiber_sum_expansion(sl, spec)
                    checks.append({"check": "unfolding", "k": k, "m": m, "level": spec.s,
                                   "ok": agree(fs, b)})
    return {"L_values": values, "checks": checks, "all_ok": all(ch["ok"] for ch in checks),
            "warnings": conductor_warnings(cfg, p, chars)}


def conductor_warnings(cfg, p, chars):
    """Flag character levels that miss either form of the conductor condition.

    The family side wants s >= r + ord_p(4 or p), or s = 0; the fiber side wants
    s >= ord_p(N) for the form level N.  Neither is fatal here.
    """
    from .numtheory import vp
    r = int(cfg.get("r", 0))
    N = int(cfg.get("form_level", p))
    bold = 4 if p == 2 else p
    need_family = r + vp(bold, p)
    need_fiber = vp(N, p)
    out = []
    for ch in chars:
        s = int(ch.get("level", 0))
        if 0 < s < need_family:
            out.append(f"level {s} < r + ord_p(p) = {need_family}")
        if s < need_fiber and s != 0:
            out.append(f"level {s} < ord_p(N) = {need_fiber}")
    return out


def cmd_lvalue(args):
    from .assembly import single_var_L, two_var_L
    cfg = _load_config(args.config)
    p, D, c, ctx, fams, classes = _build_run(cfg, args)
    if args.branch is None:
        F = next(iter(fams.values()))
    else:
        F = _family_for(args.branch, p, D, c, ctx, fams, classes)
    spec = _chi_from_desc(args.chi, D, c, p, args.level, args.m)
    a = two_var_L(F, spec, args.k)
    b = single_var_L(F.slice(args.k), spec)
    omega = ctx.coerce(args.omega) if args.omega else None
    out = {"chi": spec.describe(), "k": args.k, "m": args.m, "value": a, "slice_value": b}
    if omega is not None:
        out["normalized"] = two_var_L(F, spec, args.k, omega)
    return out


# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--p", type=int, default=5)
    c.add_argument("--disc", type=int, default=-11)
    c.add_argument("--conductor", type=int, default=1)
    c.add_argument("--prec-N", dest="prec_N", type=int, default=6)
    c.add_argument("--prec-M", dest="prec_M", type=int, default=None)
    c.add_argument("--prec-pi", dest="prec_pi", type=int, default=None)
    c.add_argument("--trunc-Q", dest="trunc_Q", type=int, default=60)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None)
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="anticyclo", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classgroup", parents=[common])
    s.add_argument("--levels", type=int, default=0, help="also walk the p-tower this many steps")
    s.set_defaults(func=cmd_classgroup)

    s = sub.add_parser("theta", parents=[common])
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("measure", parents=[common])
    s.add_argument("action", choices=["moments", "twist", "mellin", "check-integration"])
    s.add_argument("--in", dest="infile", default=None)
    s.add_argument("--coeffs", default=None)
    s.add_argument("--dirac", type=int, default=None)
    s.add_argument("--char", default="quadratic")
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--m-max", dest="m_max", type=int, default=3)
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("family", parents=[common])
    s.add_argument("action", choices=["specialize", "congruence", "ordinary"])
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--k2", type=int, default=22)
    s.add_argument("--eps", type=int, default=1, help="order of the wild character")
    s.add_argument("--a0", type=int, default=2)
    s.add_argument("--fixture", default="delta5")
    s.add_argument("--n-prec", dest="n_prec", type=int, default=4)
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("assemble", parents=[common])
    s.add_argument("--config", default=None)
    s.set_defaults(func=cmd_assemble)

    s = sub.add_parser("lvalue", parents=[common])
    s.add_argument("--config", default=None)
    s.add_argument("--chi", default="trivial", help="generator exponents, e.g. 1/4, or 'trivial'")
    s.add_argument("--level", type=int, default=0)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--branch", type=int, default=None)
    s.add_argument("--omega", type=int, default=None, help="period placeholder")
    s.set_defaults(func=cmd_lvalue)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = args.func(args)
    except PrecisionError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, PrecisionLoss):
            err["deficit"] = exc.deficit
        print(json.dumps(err), file=sys.stderr)
        return 2
    except DomainError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    _emit(payload, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
